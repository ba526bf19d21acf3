//! Zoom schedules, macro-tile assemblies and their local checks.

pub mod assembly;
pub mod check;
pub mod coverage;
pub mod schedule;
pub mod search;

pub use assembly::{
    build_assembly, Alignment, Assembly, BitAt, Geometry, GroupRecord, Groups, MacroTileState,
};
pub use check::{check_assembly, check_assembly_with, CheckOptions, ConstraintId, Violation, ViolationReport};
pub use coverage::{catching_level, window_coverage};
pub use schedule::{
    delegated_bit_index, extended_zone, group_assignment, side_l, validate_schedule, zoom_n,
    CheckStatus, Margins, ScheduleCheck, ScheduleReport, ZoomSchedule,
};
pub use search::{local_to_global, SearchOutcome, Target};
