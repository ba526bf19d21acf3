//! Finite Wang tiling search.
//!
//! Each cell carries a candidate set of tiles. Propagation removes a
//! candidate when some neighbor has no candidate with a matching edge
//! color; search branches on one cell at a time and restores the domains
//! on backtrack.

pub mod cnf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{check_wang, check_wang_torus, Patch, WangTileSet};

pub use cnf::{export_cnf, Cnf};

/// Cell pinned to one tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedCell {
    pub x: usize,
    pub y: usize,
    pub tile: usize,
}

/// Cell restricted to a set of tiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllowedCell {
    pub x: usize,
    pub y: usize,
    pub tiles: Vec<usize>,
}

/// Colors required on the outer edges of a region, and per-cell
/// restrictions. `None` entries leave the edge free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryConstraint {
    /// North edge of the top row, indexed by `x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub north: Option<Vec<Option<u32>>>,
    /// South edge of the bottom row, indexed by `x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub south: Option<Vec<Option<u32>>>,
    /// East edge of the last column, indexed by `y`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub east: Option<Vec<Option<u32>>>,
    /// West edge of the first column, indexed by `y`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub west: Option<Vec<Option<u32>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed: Vec<FixedCell>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub allowed: Vec<AllowedCell>,
}

impl BoundaryConstraint {
    pub fn none() -> Self {
        Self::default()
    }

    /// Every side fixed to one color.
    pub fn uniform_sides(w: usize, h: usize, color: u32) -> Self {
        BoundaryConstraint {
            north: Some(vec![Some(color); w]),
            south: Some(vec![Some(color); w]),
            east: Some(vec![Some(color); h]),
            west: Some(vec![Some(color); h]),
            ..Self::default()
        }
    }

    /// Initial candidate sets for a `w`x`h` region.
    pub(crate) fn domains(&self, tiles: &WangTileSet, w: usize, h: usize) -> Result<Vec<BitSet>> {
        let n = tiles.len();
        let mut doms = vec![BitSet::full(n); w * h];
        let side = |name: &str, side: &Option<Vec<Option<u32>>>, len: usize| -> Result<()> {
            match side {
                Some(v) if v.len() != len => Err(Error::Invalid {
                    what: "boundary constraint",
                    reason: format!("{name} side has {} entries, expected {len}", v.len()),
                }),
                _ => Ok(()),
            }
        };
        side("north", &self.north, w)?;
        side("south", &self.south, w)?;
        side("east", &self.east, h)?;
        side("west", &self.west, h)?;

        let mut restrict = |x: usize, y: usize, keep: &dyn Fn(usize) -> bool| {
            let d = &mut doms[y * w + x];
            for t in 0..n {
                if !keep(t) {
                    d.remove(t);
                }
            }
        };
        if let Some(v) = &self.north {
            for (x, c) in v.iter().enumerate() {
                if let Some(c) = *c {
                    restrict(x, h - 1, &|t| tiles.tile(t).n == c);
                }
            }
        }
        if let Some(v) = &self.south {
            for (x, c) in v.iter().enumerate() {
                if let Some(c) = *c {
                    restrict(x, 0, &|t| tiles.tile(t).s == c);
                }
            }
        }
        if let Some(v) = &self.east {
            for (y, c) in v.iter().enumerate() {
                if let Some(c) = *c {
                    restrict(w - 1, y, &|t| tiles.tile(t).e == c);
                }
            }
        }
        if let Some(v) = &self.west {
            for (y, c) in v.iter().enumerate() {
                if let Some(c) = *c {
                    restrict(0, y, &|t| tiles.tile(t).w == c);
                }
            }
        }

        let check_cell = |x: usize, y: usize| -> Result<()> {
            if x >= w || y >= h {
                return Err(Error::Invalid {
                    what: "boundary constraint",
                    reason: format!("cell ({x}, {y}) outside {w}x{h} region"),
                });
            }
            Ok(())
        };
        let mut pinned: Vec<Option<usize>> = vec![None; w * h];
        for f in &self.fixed {
            check_cell(f.x, f.y)?;
            if f.tile >= n {
                return Err(Error::IndexOutOfRange {
                    what: "fixed cell tile",
                    index: f.tile,
                    limit: n,
                });
            }
            let slot = &mut pinned[f.y * w + f.x];
            if let Some(prev) = *slot {
                if prev != f.tile {
                    return Err(Error::InconsistentBoundary(format!(
                        "cell ({}, {}) fixed to both {prev} and {}",
                        f.x, f.y, f.tile
                    )));
                }
            }
            *slot = Some(f.tile);
        }
        for a in &self.allowed {
            check_cell(a.x, a.y)?;
            if let Some(&bad) = a.tiles.iter().find(|&&t| t >= n) {
                return Err(Error::IndexOutOfRange {
                    what: "allowed cell tile",
                    index: bad,
                    limit: n,
                });
            }
            if let Some(p) = pinned[a.y * w + a.x] {
                if !a.tiles.contains(&p) {
                    return Err(Error::InconsistentBoundary(format!(
                        "cell ({}, {}) fixed to {p} outside its allowed set",
                        a.x, a.y
                    )));
                }
            }
            let keep = BitSet::from_iter(n, a.tiles.iter().copied());
            doms[a.y * w + a.x].intersect(&keep);
        }
        for (i, p) in pinned.iter().enumerate() {
            if let Some(t) = *p {
                let had = doms[i].contains(t);
                doms[i] = BitSet::empty(n);
                if had {
                    doms[i].insert(t);
                }
            }
        }
        Ok(doms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SolveStatus {
    Sat,
    Unsat,
    Limit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub propagations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Distinct tilings, lexicographic by cell when more than one was asked for.
    pub witnesses: Vec<Patch>,
    pub stats: SolveStats,
    /// True when the search space was fully explored (or the requested
    /// witness count reached).
    pub complete: bool,
}

impl SolveResult {
    pub fn witness(&self) -> Option<&Patch> {
        self.witnesses.first()
    }
}

/// Search parameters. `limit` bounds the number of branching nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub limit: Option<u64>,
    pub count: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            limit: None,
            count: 1,
        }
    }
}

impl SolveOptions {
    pub fn enumerate(count: usize) -> Self {
        SolveOptions { limit: None, count }
    }
}

/// Decide tileability of a `w`x`h` region, returning up to `opts.count`
/// witnesses.
pub fn tile_region(
    tiles: &WangTileSet,
    w: usize,
    h: usize,
    bc: &BoundaryConstraint,
    opts: SolveOptions,
) -> Result<SolveResult> {
    if w == 0 || h == 0 {
        return Err(Error::Invalid {
            what: "region",
            reason: "width and height must be at least 1".into(),
        });
    }
    let domains = bc.domains(tiles, w, h)?;
    let mut search = Search::new(tiles, w, h, false, opts);
    Ok(search.run(domains))
}

/// Smallest torus (by area, then width) that the tile set can cover.
/// Returns `(p, q, tiling)` with `p` the horizontal and `q` the vertical
/// period.
pub fn find_periodic(tiles: &WangTileSet, pmax: usize) -> Option<(usize, usize, Patch)> {
    let mut sizes: Vec<(usize, usize)> = (1..=pmax)
        .flat_map(|p| (1..=pmax).map(move |q| (p, q)))
        .collect();
    sizes.sort_by_key(|&(p, q)| (p * q, p, q));
    for (p, q) in sizes {
        let mut search = Search::new(tiles, p, q, true, SolveOptions::default());
        let res = search.run(vec![BitSet::full(tiles.len()); p * q]);
        if let Some(t) = res.witnesses.into_iter().next() {
            return Some((p, q, t));
        }
    }
    None
}

struct Search<'a> {
    tiles: &'a WangTileSet,
    w: usize,
    h: usize,
    wrap: bool,
    opts: SolveOptions,
    stats: SolveStats,
    found: Vec<Patch>,
    hit_limit: bool,
}

#[derive(Clone, Copy)]
enum Dir {
    North,
    East,
    South,
    West,
}

impl<'a> Search<'a> {
    fn new(tiles: &'a WangTileSet, w: usize, h: usize, wrap: bool, opts: SolveOptions) -> Self {
        Search {
            tiles,
            w,
            h,
            wrap,
            opts,
            stats: SolveStats::default(),
            found: Vec::new(),
            hit_limit: false,
        }
    }

    fn run(&mut self, mut domains: Vec<BitSet>) -> SolveResult {
        let all: Vec<usize> = (0..domains.len()).collect();
        if self.opts.count > 0 && self.propagate(&mut domains, all) {
            self.dfs(domains);
        }
        let done = self.found.len() >= self.opts.count.max(1);
        let status = if !self.found.is_empty() {
            SolveStatus::Sat
        } else if self.hit_limit {
            SolveStatus::Limit
        } else {
            SolveStatus::Unsat
        };
        for t in &self.found {
            let bad = if self.wrap {
                check_wang_torus(self.tiles, t)
            } else {
                check_wang(self.tiles, t)
            }
            .expect("witness indices are in range");
            assert!(bad.is_empty(), "solver produced an invalid witness");
        }
        SolveResult {
            status,
            witnesses: std::mem::take(&mut self.found),
            stats: self.stats,
            complete: done || !self.hit_limit,
        }
    }

    fn neighbor(&self, cell: usize, dir: Dir) -> Option<usize> {
        let (x, y) = (cell % self.w, cell / self.w);
        let (w, h) = (self.w, self.h);
        let (nx, ny) = match dir {
            Dir::East if x + 1 < w => (x + 1, y),
            Dir::East if self.wrap => (0, y),
            Dir::West if x > 0 => (x - 1, y),
            Dir::West if self.wrap => (w - 1, y),
            Dir::North if y + 1 < h => (x, y + 1),
            Dir::North if self.wrap => (x, 0),
            Dir::South if y > 0 => (x, y - 1),
            Dir::South if self.wrap => (x, h - 1),
            _ => return None,
        };
        Some(ny * w + nx)
    }

    /// Arc consistency from the given dirty cells. False on a wipe-out.
    fn propagate(&mut self, doms: &mut [BitSet], dirty: Vec<usize>) -> bool {
        let ncolors = self.tiles.colors() as usize;
        let mut queued = vec![false; doms.len()];
        let mut queue = std::collections::VecDeque::new();
        // A changed cell affects its neighbors.
        let push_around = |cell: usize,
                           this: &Self,
                           queue: &mut std::collections::VecDeque<usize>,
                           queued: &mut Vec<bool>| {
            for d in [Dir::North, Dir::East, Dir::South, Dir::West] {
                if let Some(n) = this.neighbor(cell, d) {
                    if !queued[n] {
                        queued[n] = true;
                        queue.push_back(n);
                    }
                }
            }
        };
        for c in dirty {
            if !queued[c] {
                queued[c] = true;
                queue.push_back(c);
            }
            push_around(c, self, &mut queue, &mut queued);
        }
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            self.stats.propagations += 1;
            // Colors offered by each neighbor on the shared edge.
            let mut offers: [Option<BitSet>; 4] = [None, None, None, None];
            for (slot, d) in [Dir::North, Dir::East, Dir::South, Dir::West].into_iter().enumerate() {
                if let Some(n) = self.neighbor(c, d) {
                    let mut set = BitSet::empty(ncolors);
                    for t in doms[n].iter() {
                        let tile = self.tiles.tile(t);
                        let color = match d {
                            Dir::North => tile.s,
                            Dir::East => tile.w,
                            Dir::South => tile.n,
                            Dir::West => tile.e,
                        };
                        set.insert(color as usize);
                    }
                    offers[slot] = Some(set);
                }
            }
            let mut changed = false;
            let before: Vec<usize> = doms[c].iter().collect();
            for t in before {
                let tile = self.tiles.tile(t);
                let sides = [tile.n, tile.e, tile.s, tile.w];
                let ok = offers
                    .iter()
                    .zip(sides)
                    .all(|(o, col)| o.as_ref().is_none_or(|s| s.contains(col as usize)));
                if !ok {
                    doms[c].remove(t);
                    changed = true;
                }
            }
            if doms[c].is_empty() {
                return false;
            }
            if changed {
                push_around(c, self, &mut queue, &mut queued);
            }
        }
        true
    }

    fn pick_cell(&self, doms: &[BitSet]) -> Option<usize> {
        if self.opts.count > 1 {
            // Row-major branching keeps enumeration lexicographic.
            return (0..doms.len()).find(|&c| doms[c].count() > 1);
        }
        let mut best: Option<(usize, usize)> = None;
        for (c, d) in doms.iter().enumerate() {
            let k = d.count();
            if k > 1 && best.is_none_or(|(bk, _)| k < bk) {
                best = Some((k, c));
            }
        }
        best.map(|(_, c)| c)
    }

    /// Returns false when the search must stop.
    fn dfs(&mut self, doms: Vec<BitSet>) -> bool {
        let Some(cell) = self.pick_cell(&doms) else {
            let cells = doms.iter().map(|d| d.first().unwrap() as u32).collect();
            self.found
                .push(Patch::new(self.w, self.h, cells).expect("dimensions match"));
            return self.found.len() < self.opts.count;
        };
        let candidates: Vec<usize> = doms[cell].iter().collect();
        for t in candidates {
            if let Some(limit) = self.opts.limit {
                if self.stats.nodes >= limit {
                    self.hit_limit = true;
                    return false;
                }
            }
            self.stats.nodes += 1;
            let mut next = doms.clone();
            next[cell] = BitSet::empty(self.tiles.len());
            next[cell].insert(t);
            if self.propagate(&mut next, vec![cell]) && !self.dfs(next) {
                return false;
            }
        }
        true
    }
}

/// Fixed-capacity bit set over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub(crate) fn empty(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub(crate) fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub(crate) fn from_iter(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub(crate) fn insert(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] |= 1 << (i % 64);
        }
    }

    pub(crate) fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub(crate) fn intersect(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::WangTile;

    fn uniform() -> WangTileSet {
        WangTileSet::new(1, vec![WangTile::uniform(0)]).unwrap()
    }

    #[test]
    fn uniform_tile_is_unique() {
        let r = tile_region(&uniform(), 5, 5, &BoundaryConstraint::none(), SolveOptions::enumerate(10))
            .unwrap();
        assert_eq!(r.status, SolveStatus::Sat);
        assert_eq!(r.witnesses, vec![Patch::filled(5, 5, 0)]);
        assert!(r.complete);
    }

    /// T0(e=0,w=1), T1(e=1,w=0); naive listing of the 4 fillings of a 2x1
    /// strip keeps [T0,T1] and [T1,T0].
    #[test]
    fn alternating_pair_counts_two() {
        let ts = WangTileSet::new(2, vec![WangTile::new(0, 0, 0, 1), WangTile::new(0, 1, 0, 0)])
            .unwrap();
        let mut naive = Vec::new();
        for a in 0..2u32 {
            for b in 0..2u32 {
                if ts.tile(a as usize).e == ts.tile(b as usize).w {
                    naive.push(Patch::from_rows(&[&[a, b]]).unwrap());
                }
            }
        }
        let r = tile_region(&ts, 2, 1, &BoundaryConstraint::none(), SolveOptions::enumerate(10))
            .unwrap();
        assert_eq!(r.witnesses, naive);
        assert_eq!(r.witnesses.len(), 2);
    }

    #[test]
    fn forced_mismatch_is_unsat() {
        let ts = WangTileSet::new(2, vec![WangTile::new(0, 0, 0, 1)]).unwrap();
        let r = tile_region(&ts, 2, 1, &BoundaryConstraint::none(), SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Unsat);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn contradictory_fixed_cells() {
        let bc = BoundaryConstraint {
            fixed: vec![
                FixedCell { x: 0, y: 0, tile: 0 },
                FixedCell { x: 0, y: 0, tile: 1 },
            ],
            ..Default::default()
        };
        let ts = WangTileSet::new(1, vec![WangTile::uniform(0), WangTile::new(0, 0, 0, 0)]);
        assert!(ts.is_err());
        let ts = WangTileSet::new(2, vec![WangTile::uniform(0), WangTile::uniform(1)]).unwrap();
        assert!(matches!(
            tile_region(&ts, 1, 1, &bc, SolveOptions::default()),
            Err(Error::InconsistentBoundary(_))
        ));
    }

    #[test]
    fn limit_is_distinct_from_unsat() {
        // Two free colors on a large region need branching.
        let ts = WangTileSet::new(2, vec![WangTile::uniform(0), WangTile::uniform(1)]).unwrap();
        let r = tile_region(
            &ts,
            4,
            4,
            &BoundaryConstraint::none(),
            SolveOptions {
                limit: Some(0),
                count: 1,
            },
        )
        .unwrap();
        assert_eq!(r.status, SolveStatus::Limit);
        assert!(!r.complete);
    }

    #[test]
    fn boundary_colors_restrict() {
        let ts = WangTileSet::new(2, vec![WangTile::uniform(0), WangTile::uniform(1)]).unwrap();
        let bc = BoundaryConstraint {
            west: Some(vec![Some(1)]),
            ..Default::default()
        };
        let r = tile_region(&ts, 3, 1, &bc, SolveOptions::enumerate(5)).unwrap();
        assert_eq!(r.witnesses, vec![Patch::filled(3, 1, 1)]);
    }

    #[test]
    fn periodic_uniform() {
        let (p, q, t) = find_periodic(&uniform(), 3).unwrap();
        assert_eq!((p, q), (1, 1));
        assert_eq!(t, Patch::filled(1, 1, 0));
    }

    #[test]
    fn periodic_two_row_alternation() {
        // A(n=1,s=0) sits on B(n=0,s=1) and vice versa.
        let ts = WangTileSet::new(2, vec![WangTile::new(1, 0, 0, 0), WangTile::new(0, 0, 1, 0)])
            .unwrap();
        let one = check_wang_torus(&ts, &Patch::filled(1, 1, 0)).unwrap();
        let two = check_wang_torus(&ts, &Patch::filled(1, 1, 1)).unwrap();
        assert!(!one.is_empty() && !two.is_empty());
        let (p, q, t) = find_periodic(&ts, 3).unwrap();
        assert_eq!((p, q), (1, 2));
        assert!(check_wang_torus(&ts, &t).unwrap().is_empty());
    }

    #[test]
    fn periodic_none_when_unmatched() {
        let ts = WangTileSet::new(4, vec![WangTile::new(0, 0, 0, 1), WangTile::new(2, 2, 2, 3)])
            .unwrap();
        assert!(find_periodic(&ts, 4).is_none());
    }

    #[test]
    fn bitset_basics() {
        let mut s = BitSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        s.remove(64);
        assert_eq!(s.count(), 2);
        assert!(BitSet::full(70).contains(69));
    }
}
