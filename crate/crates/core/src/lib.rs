//! Compile effectively closed one-dimensional subshifts into two-layer
//! hierarchical local rules on the plane, and check the result on finite
//! patches.
//!
//! The pipeline is:
//!
//! * [`subshift`]: bit subshifts given by step-indexed forbidden-word
//!   enumerators, plus the brute-force legality oracle.
//! * [`hierarchy`]: zoom schedules, bit delegation, bit-group assignment,
//!   macro-tile assemblies and their local consistency catalogue (C1 to C8).
//! * [`compiler`]: lowers a subshift and schedule to a
//!   [`compiler::CompiledSystem`] and runs soundness, completeness and
//!   extendability sweeps over it.
//! * [`grid`] and [`solver`]: local rules, Wang tiles, finite tiling search,
//!   periodic search and DIMACS export.
//! * [`tmtiles`]: the classical Turing-machine space-time tiling.

pub mod cli;
pub mod compiler;
pub mod error;
pub mod grid;
pub mod hierarchy;
pub mod render;
pub mod solver;
pub mod subshift;
pub mod tmtiles;

pub use error::{Error, Result};
pub use grid::{Alphabet, LocalRule, Patch, ProjectionMap, WangTile, WangTileSet};
pub use subshift::{SubshiftSpec, Word};
