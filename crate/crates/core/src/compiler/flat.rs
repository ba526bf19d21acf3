//! Explicit Wang tiles for tiny schedules.
//!
//! A flat label is a level-0 cell that knows its ground bit, its position
//! `(x, y)` inside the level-`K` tile and the roof above it, the horizontal
//! position of its level-`K` tile in the roof, and the bit contents of every
//! ancestor up to level `K`. Structure (coordinates, delegated columns,
//! group starts) is a function of the position, so labels only store bits.
//! Unary filters enforce the constraints that live inside one cell; edge
//! colors carry whatever two neighbors must agree on.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Patch, WangTile, WangTileSet};
use crate::hierarchy::{build_assembly, Alignment, Assembly, ZoomSchedule};
use crate::solver::{AllowedCell, BoundaryConstraint};
use crate::subshift::{enum_step, Word};

use super::CompiledSystem;

/// Largest number of labels ever materialized.
pub const MAX_LABELS: usize = 2_000_000;

/// Bit contents of one ancestor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelBits {
    pub delegated: Option<u8>,
    pub father_bit: Option<u8>,
    /// Father, left uncle, right uncle.
    pub groups: [Option<Word>; 3],
    pub own: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlatLabel {
    pub bit: u8,
    pub x: u64,
    pub y: u64,
    /// Horizontal position of the level-`K` tile in the roof.
    pub top_pos: u64,
    pub levels: Vec<LevelBits>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatSystem {
    pub tiles: WangTileSet,
    /// Label of each tile.
    pub labels: Vec<FlatLabel>,
    /// Label count before merging tiles with identical colors.
    pub raw_labels: usize,
}

struct Shape {
    top: usize,
    zoom: Vec<u64>,
    side: Vec<u64>,
    group_len: Vec<usize>,
}

/// Structure of the level-`k` ancestor of cell `(x, y)`.
#[derive(Clone, Copy)]
struct Anc {
    bx: i64,
    j: u64,
    i: u64,
}

impl Shape {
    fn new(s: &ZoomSchedule, top: usize) -> Result<Self> {
        Ok(Shape {
            top,
            zoom: (0..=top).map(|k| s.zoom_u64(k)).collect::<Result<_>>()?,
            side: (0..=top + 1).map(|k| s.side_u64(k)).collect::<Result<_>>()?,
            group_len: (0..=top).map(|k| s.group_len(k)).collect::<Result<_>>()?,
        })
    }

    fn anc(&self, k: usize, x: u64, y: u64, top_pos: u64) -> Anc {
        let l = self.side[k];
        let (bx, by) = (x / l, y / l);
        let n = self.zoom[k];
        Anc {
            bx: bx as i64,
            j: by % n,
            i: if k == self.top { top_pos } else { bx % n },
        }
    }

    fn delegated_col(&self, k: usize, a: Anc) -> Option<i64> {
        (a.j < self.side[k]).then(|| a.bx * self.side[k] as i64 + a.j as i64)
    }

    fn group_start(&self, k: usize, a: Anc) -> Option<u64> {
        (a.j + self.group_len[k] as u64 <= 3 * self.side[k]).then_some(a.j)
    }

    fn zone(&self, k: usize, bx: i64) -> i64 {
        (bx - 1) * self.side[k] as i64
    }

    fn estimate(&self) -> u128 {
        let mut bits: u32 = 0;
        for k in 0..=self.top {
            bits += 1 + self.group_len[k] as u32;
            if k < self.top {
                bits += 1 + 3 * self.group_len[k + 1] as u32;
            }
        }
        let positions = 2u128
            * self.side[self.top] as u128
            * self.side[self.top + 1] as u128
            * self.zoom[self.top] as u128;
        positions.saturating_mul(1u128.checked_shl(bits).unwrap_or(u128::MAX))
    }
}

fn words(len: usize) -> Vec<Word> {
    (0..1u64 << len).map(|v| Word::from_index(v, len)).collect()
}

fn options<T: Clone>(present: bool, all: &[T]) -> Vec<Option<T>> {
    if present {
        all.iter().cloned().map(Some).collect()
    } else {
        vec![None]
    }
}

/// Enumerate every label passing the one-cell filters.
fn labels(cs: &CompiledSystem, sh: &Shape) -> Result<Vec<FlatLabel>> {
    let top = sh.top;
    let forbidden: Vec<Vec<Word>> = sh.group_len.iter().map(|&l| enum_step(&cs.spec, l)).collect();
    let mut out = Vec::new();
    for y in 0..sh.side[top + 1] {
        for x in 0..sh.side[top] {
            for top_pos in 0..sh.zoom[top] {
                for bit in 0..2u8 {
                    let mut levels: Vec<Option<LevelBits>> = vec![None; top + 1];
                    fill(sh, &forbidden, x, y, top_pos, bit, top, &mut levels, &mut out)?;
                }
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn fill(
    sh: &Shape,
    forbidden: &[Vec<Word>],
    x: u64,
    y: u64,
    top_pos: u64,
    bit: u8,
    k: usize,
    levels: &mut Vec<Option<LevelBits>>,
    out: &mut Vec<FlatLabel>,
) -> Result<()> {
    let me = sh.anc(k, x, y, top_pos);
    let dcol = sh.delegated_col(k, me);
    let gstart = sh.group_start(k, me);
    let own_words = words(sh.group_len[k]);
    let father = (k < sh.top).then(|| sh.anc(k + 1, x, y, top_pos));
    let fcol = father.and_then(|f| sh.delegated_col(k + 1, f));
    let fgroup = father.and_then(|f| sh.group_start(k + 1, f));
    let up_words = if k < sh.top { words(sh.group_len[k + 1]) } else { Vec::new() };
    let bit_opts = [0u8, 1];

    for delegated in options(dcol.is_some(), &bit_opts) {
        if k == 0 && delegated.is_some_and(|d| d != bit) {
            continue;
        }
        for own in options(gstart.is_some(), &own_words) {
            if let Some(o) = &own {
                if forbidden[k].iter().any(|f| o.contains(f)) {
                    continue;
                }
            }
            for father_bit in options(fcol.is_some(), &bit_opts) {
                for gf in options(fgroup.is_some(), &up_words) {
                    for gl in options(fgroup.is_some(), &up_words) {
                        for gr in options(fgroup.is_some(), &up_words) {
                            let lb = LevelBits {
                                delegated,
                                father_bit,
                                groups: [gf.clone(), gl.clone(), gr],
                                own: own.clone(),
                            };
                            if !level_ok(sh, k, me, father, &lb, levels) {
                                continue;
                            }
                            levels[k] = Some(lb);
                            if k == 0 {
                                out.push(FlatLabel {
                                    bit,
                                    x,
                                    y,
                                    top_pos,
                                    levels: levels.iter().map(|l| l.clone().expect("filled")).collect(),
                                });
                                if out.len() > MAX_LABELS {
                                    return Err(Error::ResourceLimit(format!(
                                        "more than {MAX_LABELS} flat labels"
                                    )));
                                }
                            } else {
                                fill(sh, forbidden, x, y, top_pos, bit, k - 1, levels, out)?;
                            }
                            levels[k] = None;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Filters tying level `k` to itself and to level `k + 1`, already fixed.
fn level_ok(sh: &Shape, k: usize, me: Anc, father: Option<Anc>, lb: &LevelBits, levels: &[Option<LevelBits>]) -> bool {
    let up = father.map(|_| levels[k + 1].as_ref().expect("filled top-down"));
    let dcol = sh.delegated_col(k, me);
    if let (Some(f), Some(up)) = (father, up) {
        // Same column delegated by son and father.
        if let (Some(d), Some(fb)) = (lb.delegated, lb.father_bit) {
            if dcol == sh.delegated_col(k + 1, f) && d != fb {
                return false;
            }
        }
        // Storage son mirrors the father.
        if me.i == 0 && me.j == 0 && (lb.father_bit != up.delegated || lb.groups[0] != up.own) {
            return false;
        }
    }
    let Some((d, c)) = lb.delegated.zip(dcol) else {
        return true;
    };
    let covers = |zone: i64, start: u64, w: &Word| {
        let off = c - zone - start as i64;
        off >= 0 && (off as usize) < w.len() && w.get(off as usize) != Some(d)
    };
    if let (Some(o), Some(st)) = (&lb.own, sh.group_start(k, me)) {
        if covers(sh.zone(k, me.bx), st, o) {
            return false;
        }
    }
    if let Some(f) = father {
        if let Some(st) = sh.group_start(k + 1, f) {
            for (slot, shift) in [0i64, -1, 1].into_iter().enumerate() {
                if let Some(g) = &lb.groups[slot] {
                    if covers(sh.zone(k + 1, f.bx + shift), st, g) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn push_bit(key: &mut Vec<u64>, b: Option<u8>) {
    key.push(b.map_or(0, |v| 1 + v as u64));
}

fn push_word(key: &mut Vec<u64>, w: &Option<Word>) {
    key.push(match w {
        None => 0,
        Some(w) => 1 + w.bits().iter().fold(0u64, |acc, &b| acc << 1 | b as u64),
    });
}

fn push_full(key: &mut Vec<u64>, lb: &LevelBits) {
    push_bit(key, lb.delegated);
    push_word(key, &lb.own);
    push_inherited(key, lb);
}

fn push_inherited(key: &mut Vec<u64>, lb: &LevelBits) {
    push_bit(key, lb.father_bit);
    for g in &lb.groups {
        push_word(key, g);
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    North,
    East,
    South,
    West,
}

fn edge_key(sh: &Shape, lab: &FlatLabel, side: Side) -> Vec<u64> {
    let top = sh.top;
    let (lk, h) = (sh.side[top], sh.side[top + 1]);
    let mut key = Vec::new();
    // Coordinates as seen on the far side of the edge.
    let (x, y) = match side {
        Side::East => ((lab.x + 1) % lk, lab.y),
        Side::North => (lab.x, (lab.y + 1) % h),
        _ => (lab.x, lab.y),
    };
    let horizontal = matches!(side, Side::East | Side::West);
    if horizontal {
        let pos = if side == Side::East && x == 0 {
            (lab.top_pos + 1) % sh.zoom[top]
        } else {
            lab.top_pos
        };
        key.extend([y, x, pos]);
    } else {
        key.extend([lab.bit as u64, x, y]);
        key.push(if y == 0 { u64::MAX } else { lab.top_pos });
    }
    let along = if horizontal { x } else { y };
    for k in 0..=top {
        let lb = &lab.levels[k];
        let cross = along % sh.side[k] == 0;
        let cross_up = along % sh.side[k + 1] == 0;
        if !cross {
            push_full(&mut key, lb);
        } else if k < top && !cross_up {
            push_inherited(&mut key, lb);
        } else if k < top && horizontal {
            let (a, b) = if side == Side::East { (2, 0) } else { (0, 1) };
            push_word(&mut key, &lb.groups[a]);
            push_word(&mut key, &lb.groups[b]);
        }
    }
    key
}

/// Build the flat tile set, refusing when the label estimate exceeds
/// `bound`.
pub fn flatten(cs: &CompiledSystem, bound: u128) -> Result<FlatSystem> {
    let sh = Shape::new(&cs.schedule, cs.top)?;
    let estimate = sh.estimate();
    if estimate > bound {
        return Err(Error::FlattenBoundExceeded { estimate, bound });
    }
    let all = labels(cs, &sh)?;
    let raw_labels = all.len();
    let mut colors: [HashMap<Vec<u64>, u32>; 2] = [HashMap::new(), HashMap::new()];
    let mut intern = |axis: usize, key: Vec<u64>| {
        let next = colors[axis].len() as u32;
        *colors[axis].entry(key).or_insert(next)
    };
    let mut seen: HashMap<WangTile, usize> = HashMap::new();
    let mut tiles = Vec::new();
    let mut kept = Vec::new();
    for lab in all {
        let t = WangTile {
            n: intern(1, edge_key(&sh, &lab, Side::North)),
            e: intern(0, edge_key(&sh, &lab, Side::East)),
            s: intern(1, edge_key(&sh, &lab, Side::South)),
            w: intern(0, edge_key(&sh, &lab, Side::West)),
        };
        if seen.insert(t, tiles.len()).is_none() {
            tiles.push(t);
            kept.push(lab);
        }
    }
    let ncolors = (colors[0].len().max(colors[1].len()) as u32).max(1);
    Ok(FlatSystem {
        tiles: WangTileSet::new_allow_empty(ncolors, tiles)?,
        labels: kept,
        raw_labels,
    })
}

/// Pin the cell at the origin to the corner of a level-`K` tile at the
/// bottom of a roof, so tilings line up with the zero alignment.
pub fn flat_boundary(fs: &FlatSystem, w: usize, h: usize) -> BoundaryConstraint {
    let mut bc = BoundaryConstraint::none();
    let pick = |f: &dyn Fn(&FlatLabel) -> bool| -> Vec<usize> {
        fs.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| f(l))
            .map(|(i, _)| i)
            .collect()
    };
    let row0 = pick(&|l| l.y == 0);
    let col0 = pick(&|l| l.x == 0);
    let corner = pick(&|l| l.x == 0 && l.y == 0 && l.top_pos == 0);
    for x in 0..w {
        bc.allowed.push(AllowedCell {
            x,
            y: 0,
            tiles: if x == 0 { corner.clone() } else { row0.clone() },
        });
    }
    for y in 1..h {
        bc.allowed.push(AllowedCell {
            x: 0,
            y,
            tiles: col0.clone(),
        });
    }
    bc
}

/// Turn a flat tiling pinned by [`flat_boundary`] into an assembly. The
/// patch must be exactly one roof tall and a whole number of level-`K`
/// tiles wide.
pub fn decode_flat(cs: &CompiledSystem, fs: &FlatSystem, tiling: &Patch) -> Result<Assembly> {
    let sh = Shape::new(&cs.schedule, cs.top)?;
    let (w, h) = (tiling.width(), tiling.height());
    if h as u64 != sh.side[cs.top + 1] || w == 0 || !(w as u64).is_multiple_of(sh.side[cs.top]) {
        return Err(Error::Invalid {
            what: "flat tiling",
            reason: format!(
                "{w}x{h} is not a whole number of level-{} tiles one roof tall",
                cs.top
            ),
        });
    }
    let label = |x: usize, y: usize| -> Result<&FlatLabel> {
        fs.labels.get(tiling.get(x, y) as usize).ok_or(Error::IndexOutOfRange {
            what: "flat tile",
            index: tiling.get(x, y) as usize,
            limit: fs.labels.len(),
        })
    };
    let ground = Word::new((0..w).map(|x| label(x, 0).map(|l| l.bit)).collect::<Result<_>>()?)?;
    let mut a = build_assembly(&ground, cs.top, &cs.schedule, &Alignment::zero(cs.top))?;
    for y in 0..h {
        for x in 0..w {
            let lab = label(x, y)?;
            for k in 0..=cs.top {
                let l = sh.side[k];
                let (b, r) = ((x as u64 / l) as i64, y as u64 / l);
                let Some(st) = a.state_mut(k, b, r) else { continue };
                let lb = &lab.levels[k];
                if let (Some(d), Some(v)) = (st.delegated_bit.as_mut(), lb.delegated) {
                    d.value = v;
                }
                if let (Some(d), Some(v)) = (st.father_bit.as_mut(), lb.father_bit) {
                    d.value = v;
                }
                if let (Some(o), Some(v)) = (st.own_group.as_mut(), &lb.own) {
                    o.bits = v.clone();
                }
                for (slot, name) in crate::hierarchy::assembly::GROUP_SLOTS.into_iter().enumerate() {
                    if let (Some(g), Some(v)) = (st.groups.get_mut(name), &lb.groups[slot]) {
                        g.bits = v.clone();
                    }
                }
            }
        }
    }
    Ok(a)
}
