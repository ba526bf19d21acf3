//! Finite hierarchical arrangements of macro-tile states over a bit row.
//!
//! Geometry. The ground word occupies columns `0..w`. Level-`k` blocks are
//! `L(k)` columns wide and start at `alignment[k] + b L(k)` for integer `b`.
//! Consecutive alignments agree modulo `L(k)`, so every level-`(k+1)` block
//! is exactly `N(k)` level-`k` blocks. The top level `K` sits inside one
//! implicit level-`(K+1)` tile (the roof) vertically, so level `k` has
//! `L(K+1) / L(k)` rows and every row position inside a father occurs.
//! Horizontally, every level-`K` block meeting the region is kept along
//! with all of its descendants; columns of those blocks outside the region
//! read as padding zeros.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subshift::Word;

use super::schedule::ZoomSchedule;

/// Largest number of macro-tile states an assembly may hold.
pub const MAX_STATES: u64 = 4_000_000;

/// One bit together with the ground column it describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitAt {
    pub column: i64,
    pub value: u8,
}

/// A bit group as recorded by a tile: start offset in the owner's extended
/// zone and the bits themselves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupRecord {
    pub start: u64,
    pub bits: Word,
}

/// Groups checked by the father and the two uncles.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Groups {
    pub father: Option<GroupRecord>,
    pub left_uncle: Option<GroupRecord>,
    pub right_uncle: Option<GroupRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSlotName {
    Father,
    LeftUncle,
    RightUncle,
}

impl Groups {
    pub fn get(&self, slot: GroupSlotName) -> Option<&GroupRecord> {
        match slot {
            GroupSlotName::Father => self.father.as_ref(),
            GroupSlotName::LeftUncle => self.left_uncle.as_ref(),
            GroupSlotName::RightUncle => self.right_uncle.as_ref(),
        }
    }

    pub fn get_mut(&mut self, slot: GroupSlotName) -> Option<&mut GroupRecord> {
        match slot {
            GroupSlotName::Father => self.father.as_mut(),
            GroupSlotName::LeftUncle => self.left_uncle.as_mut(),
            GroupSlotName::RightUncle => self.right_uncle.as_mut(),
        }
    }
}

pub const GROUP_SLOTS: [GroupSlotName; 3] = [
    GroupSlotName::Father,
    GroupSlotName::LeftUncle,
    GroupSlotName::RightUncle,
];

/// What a level-`k` macro-tile knows consciously.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MacroTileState {
    pub level: usize,
    /// `(horizontal, vertical)` position among the father's sons.
    pub pos_in_father: (u64, u64),
    pub delegated_bit: Option<BitAt>,
    pub father_coords: Option<(u64, u64)>,
    pub father_bit: Option<BitAt>,
    pub groups: Groups,
    pub own_group: Option<GroupRecord>,
}

/// Per-level block offsets. `offsets[k]` lies in `0..L(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment(pub Vec<i64>);

impl Alignment {
    /// The alignment whose top level is shifted by `top_offset`; lower
    /// levels follow by reduction modulo their side.
    pub fn from_top(s: &ZoomSchedule, top: usize, top_offset: i64) -> Result<Self> {
        let mut v = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let l = s.side_u64(k)? as i64;
            v.push(top_offset.rem_euclid(l));
        }
        Ok(Alignment(v))
    }

    pub fn zero(top: usize) -> Self {
        Alignment(vec![0; top + 1])
    }

    /// Every consistent alignment, one per top offset in `0..L(K)`.
    pub fn sweep(s: &ZoomSchedule, top: usize) -> Result<Vec<Self>> {
        let lk = s.side_u64(top)? as i64;
        (0..lk).map(|a| Alignment::from_top(s, top, a)).collect()
    }
}

/// Derived integer geometry shared by building and checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub top: usize,
    /// `N(0..=K)`.
    pub zoom: Vec<u64>,
    /// `L(0..=K+1)`.
    pub side: Vec<u64>,
    /// `l(0..=K)`.
    pub group_len: Vec<usize>,
    pub align: Vec<i64>,
    pub width: usize,
    /// Kept columns, half-open.
    pub span: (i64, i64),
}

impl Geometry {
    pub fn new(s: &ZoomSchedule, top: usize, alignment: &Alignment, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::RegionTooNarrow("empty ground word".into()));
        }
        let zoom = (0..=top).map(|k| s.zoom_u64(k)).collect::<Result<Vec<_>>>()?;
        let side = (0..=top + 1).map(|k| s.side_u64(k)).collect::<Result<Vec<_>>>()?;
        let group_len = (0..=top).map(|k| s.group_len(k)).collect::<Result<Vec<_>>>()?;
        let align = alignment.0.clone();
        if align.len() != top + 1 {
            return Err(Error::InconsistentAlignment(format!(
                "{} offsets for levels 0..={top}",
                align.len()
            )));
        }
        for k in 0..=top {
            let l = side[k] as i64;
            if !(0..l).contains(&align[k]) {
                return Err(Error::InconsistentAlignment(format!(
                    "offset {} at level {k} outside 0..{l}",
                    align[k]
                )));
            }
            if k < top && (align[k + 1] - align[k]).rem_euclid(l) != 0 {
                return Err(Error::InconsistentAlignment(format!(
                    "level {} grid does not refine level {k}",
                    k + 1
                )));
            }
        }
        let lk = side[top] as i64;
        let w = width as i64;
        let lo_block = (-align[top]).div_euclid(lk);
        let hi_block = (w - 1 - align[top]).div_euclid(lk);
        let span = (align[top] + lo_block * lk, align[top] + (hi_block + 1) * lk);

        let mut total: u64 = 0;
        for k in 0..=top {
            let cols = ((span.1 - span.0) as u64) / side[k];
            let rows = side[top + 1] / side[k];
            total = total.saturating_add(cols.saturating_mul(rows));
        }
        if total > MAX_STATES {
            return Err(Error::ResourceLimit(format!(
                "assembly needs {total} states (cap {MAX_STATES})"
            )));
        }
        Ok(Geometry {
            top,
            zoom,
            side,
            group_len,
            align,
            width,
            span,
        })
    }

    pub fn l(&self, k: usize) -> i64 {
        self.side[k] as i64
    }

    pub fn rows(&self, k: usize) -> u64 {
        self.side[self.top + 1] / self.side[k]
    }

    pub fn first_block(&self, k: usize) -> i64 {
        (self.span.0 - self.align[k]).div_euclid(self.l(k))
    }

    pub fn blocks(&self, k: usize) -> usize {
        ((self.span.1 - self.span.0) / self.l(k)) as usize
    }

    pub fn has_block(&self, k: usize, b: i64) -> bool {
        let f = self.first_block(k);
        b >= f && b < f + self.blocks(k) as i64
    }

    pub fn block_start(&self, k: usize, b: i64) -> i64 {
        self.align[k] + b * self.l(k)
    }

    pub fn zone_start(&self, k: usize, b: i64) -> i64 {
        self.block_start(k, b) - self.l(k)
    }

    /// Block index, at level `k+1` (or in the roof for `k = K`), counted
    /// in level-`k` units from the father grid's origin.
    fn father_relative(&self, k: usize, b: i64) -> i64 {
        if k == self.top {
            b
        } else {
            b + (self.align[k] - self.align[k + 1]) / self.l(k)
        }
    }

    pub fn pos_in_father(&self, k: usize, b: i64, r: u64) -> (u64, u64) {
        let n = self.zoom[k];
        let i = self.father_relative(k, b).rem_euclid(n as i64) as u64;
        (i, r % n)
    }

    /// Father block and row at level `k+1`.
    pub fn father_of(&self, k: usize, b: i64, r: u64) -> (i64, u64) {
        let n = self.zoom[k];
        (self.father_relative(k, b).div_euclid(n as i64), r / n)
    }

    /// Block and row of the son at position `(0, 0)` of a level-`k+1` tile.
    pub fn storage_son(&self, k: usize, fb: i64, fr: u64) -> (i64, u64) {
        let n = self.zoom[k] as i64;
        let shift = (self.align[k] - self.align[k + 1]) / self.l(k);
        (fb * n - shift, fr * n as u64)
    }

    pub fn delegated_column(&self, k: usize, b: i64, r: u64) -> Option<i64> {
        let j = r % self.zoom[k];
        (j < self.side[k]).then(|| self.block_start(k, b) + j as i64)
    }

    pub fn group_start(&self, k: usize, r: u64) -> Option<u64> {
        let j = r % self.zoom[k];
        (j + self.group_len[k] as u64 <= 3 * self.side[k]).then_some(j)
    }

    pub fn in_region(&self, col: i64) -> bool {
        col >= 0 && col < self.width as i64
    }

    pub fn index(&self, k: usize, b: i64, r: u64) -> usize {
        r as usize * self.blocks(k) + (b - self.first_block(k)) as usize
    }

    pub fn position(&self, k: usize, idx: usize) -> (i64, u64) {
        let nb = self.blocks(k);
        (self.first_block(k) + (idx % nb) as i64, (idx / nb) as u64)
    }
}

/// A level's states, row-major over `(row, block)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelGrid {
    pub level: usize,
    pub first_block: i64,
    pub blocks: usize,
    pub rows: u64,
    pub states: Vec<MacroTileState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assembly {
    pub ground: Word,
    pub top: usize,
    pub alignment: Alignment,
    pub geometry: Geometry,
    pub levels: Vec<LevelGrid>,
}

impl Assembly {
    pub fn state(&self, k: usize, b: i64, r: u64) -> Option<&MacroTileState> {
        let g = &self.geometry;
        if k > g.top || !g.has_block(k, b) || r >= g.rows(k) {
            return None;
        }
        self.levels[k].states.get(g.index(k, b, r))
    }

    pub fn state_mut(&mut self, k: usize, b: i64, r: u64) -> Option<&mut MacroTileState> {
        let g = &self.geometry;
        if k > g.top || !g.has_block(k, b) || r >= g.rows(k) {
            return None;
        }
        let idx = g.index(k, b, r);
        self.levels[k].states.get_mut(idx)
    }

    /// Ground bit, zero outside the region.
    pub fn ground_bit(&self, col: i64) -> u8 {
        ground_bit(&self.ground, col)
    }

    pub fn state_count(&self) -> usize {
        self.levels.iter().map(|l| l.states.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("assembly serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn ground_bit(ground: &Word, col: i64) -> u8 {
    col.to_usize().and_then(|c| ground.get(c)).unwrap_or(0)
}

fn read_group(ground: &Word, from: i64, len: usize) -> Word {
    Word::new((0..len as i64).map(|i| ground_bit(ground, from + i)).collect())
        .expect("ground is a bit word")
}

/// The honest state of the level-`k` tile at block `b`, row `r`, computed
/// straight from the ground word.
pub fn ideal_state(g: &Geometry, ground: &Word, k: usize, b: i64, r: u64) -> MacroTileState {
    let delegated = |k: usize, b: i64, r: u64| {
        g.delegated_column(k, b, r).map(|column| BitAt {
            column,
            value: ground_bit(ground, column),
        })
    };
    let own = |k: usize, b: i64, r: u64| {
        g.group_start(k, r).map(|start| GroupRecord {
            start,
            bits: read_group(ground, g.zone_start(k, b) + start as i64, g.group_len[k]),
        })
    };
    let mut st = MacroTileState {
        level: k,
        pos_in_father: g.pos_in_father(k, b, r),
        delegated_bit: delegated(k, b, r),
        father_coords: None,
        father_bit: None,
        groups: Groups::default(),
        own_group: own(k, b, r),
    };
    if k < g.top {
        let (fb, fr) = g.father_of(k, b, r);
        st.father_coords = Some(g.pos_in_father(k + 1, fb, fr));
        st.father_bit = delegated(k + 1, fb, fr);
        st.groups = Groups {
            father: own(k + 1, fb, fr),
            left_uncle: own(k + 1, fb - 1, fr),
            right_uncle: own(k + 1, fb + 1, fr),
        };
    }
    st
}

/// Build the assembly whose every field is read from the ground word.
/// Building never checks legality.
pub fn build_assembly(
    ground: &Word,
    top: usize,
    s: &ZoomSchedule,
    alignment: &Alignment,
) -> Result<Assembly> {
    let g = Geometry::new(s, top, alignment, ground.len())?;
    let levels = (0..=top)
        .map(|k| {
            let first = g.first_block(k);
            let blocks = g.blocks(k);
            let rows = g.rows(k);
            let mut states = Vec::with_capacity(blocks * rows as usize);
            for r in 0..rows {
                for b in first..first + blocks as i64 {
                    states.push(ideal_state(&g, ground, k, b, r));
                }
            }
            LevelGrid {
                level: k,
                first_block: first,
                blocks,
                rows,
                states,
            }
        })
        .collect();
    Ok(Assembly {
        ground: ground.clone(),
        top,
        alignment: alignment.clone(),
        geometry: g,
        levels,
    })
}
