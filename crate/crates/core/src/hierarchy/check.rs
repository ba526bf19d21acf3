//! Local consistency checks on assemblies.
//!
//! Every constraint except the forbidden-word scan is expressed through a
//! [`Sink`]: a structural verdict, an equality between two bit fields, or
//! an anchor pinning one bit field to a ground bit. The checker evaluates
//! these directly; the local-to-global search feeds the same stream into a
//! union-find.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::subshift::{enum_step, SubshiftSpec, Word};

use super::assembly::{Assembly, BitAt, Geometry, GroupRecord, GroupSlotName, MacroTileState, GROUP_SLOTS};
use super::schedule::ZoomSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstraintId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

impl ConstraintId {
    pub const ALL: [ConstraintId; 8] = [
        ConstraintId::C1,
        ConstraintId::C2,
        ConstraintId::C3,
        ConstraintId::C4,
        ConstraintId::C5,
        ConstraintId::C6,
        ConstraintId::C7,
        ConstraintId::C8,
    ];

    pub fn summary(self) -> &'static str {
        match self {
            ConstraintId::C1 => "structure and coordinates",
            ConstraintId::C2 => "brothers agree on inherited fields",
            ConstraintId::C3 => "level 0 reads the ground",
            ConstraintId::C4 => "son and father bits agree",
            ConstraintId::C5 => "storage son matches father",
            ConstraintId::C6 => "delegated bits agree with covering groups",
            ConstraintId::C7 => "uncle groups agree across fathers",
            ConstraintId::C8 => "own group avoids forbidden words",
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for ConstraintId {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        ConstraintId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| crate::Error::Invalid {
                what: "constraint id",
                reason: format!("unknown `{s}`"),
            })
    }
}

/// A single bit-valued field of a macro-tile state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Delegated,
    FatherBit,
    Own(u32),
    Group(GroupSlotName, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldRef {
    pub level: usize,
    pub index: usize,
    pub kind: FieldKind,
}

impl fmt::Display for FieldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Delegated => write!(f, "delegated bit"),
            FieldKind::FatherBit => write!(f, "father bit"),
            FieldKind::Own(i) => write!(f, "own group bit {i}"),
            FieldKind::Group(s, i) => write!(f, "{s:?} group bit {i}"),
        }
    }
}

pub fn field_value(a: &Assembly, f: FieldRef) -> Option<u8> {
    let st = a.levels.get(f.level)?.states.get(f.index)?;
    match f.kind {
        FieldKind::Delegated => st.delegated_bit.map(|b| b.value),
        FieldKind::FatherBit => st.father_bit.map(|b| b.value),
        FieldKind::Own(i) => st.own_group.as_ref()?.bits.get(i as usize),
        FieldKind::Group(s, i) => st.groups.get(s)?.bits.get(i as usize),
    }
}

pub fn set_field(a: &mut Assembly, f: FieldRef, v: u8) {
    let Some(st) = a.levels.get_mut(f.level).and_then(|l| l.states.get_mut(f.index)) else {
        return;
    };
    let set_word = |w: &mut Word, i: u32| {
        let mut bits = w.bits().to_vec();
        if let Some(b) = bits.get_mut(i as usize) {
            *b = v;
        }
        *w = Word::new(bits).expect("bit word");
    };
    match f.kind {
        FieldKind::Delegated => {
            if let Some(b) = st.delegated_bit.as_mut() {
                b.value = v;
            }
        }
        FieldKind::FatherBit => {
            if let Some(b) = st.father_bit.as_mut() {
                b.value = v;
            }
        }
        FieldKind::Own(i) => {
            if let Some(g) = st.own_group.as_mut() {
                set_word(&mut g.bits, i);
            }
        }
        FieldKind::Group(s, i) => {
            if let Some(g) = st.groups.get_mut(s) {
                set_word(&mut g.bits, i);
            }
        }
    }
}

/// Ground column a field describes, given the recorded structure.
pub fn field_column(a: &Assembly, f: FieldRef) -> Option<i64> {
    let g = &a.geometry;
    let st = a.levels.get(f.level)?.states.get(f.index)?;
    let (b, r) = g.position(f.level, f.index);
    match f.kind {
        FieldKind::Delegated => st.delegated_bit.map(|x| x.column),
        FieldKind::FatherBit => st.father_bit.map(|x| x.column),
        FieldKind::Own(i) => {
            let rec = st.own_group.as_ref()?;
            Some(g.zone_start(f.level, b) + rec.start as i64 + i as i64)
        }
        FieldKind::Group(s, i) => {
            if f.level >= g.top {
                return None;
            }
            let rec = st.groups.get(s)?;
            let (fb, _) = g.father_of(f.level, b, r);
            let owner = fb + slot_shift(s);
            Some(g.zone_start(f.level + 1, owner) + rec.start as i64 + i as i64)
        }
    }
}

fn slot_shift(s: GroupSlotName) -> i64 {
    match s {
        GroupSlotName::Father => 0,
        GroupSlotName::LeftUncle => -1,
        GroupSlotName::RightUncle => 1,
    }
}

/// Every bit field present in the assembly.
pub fn all_fields(a: &Assembly) -> Vec<FieldRef> {
    let mut out = Vec::new();
    for (k, lvl) in a.levels.iter().enumerate() {
        for (index, st) in lvl.states.iter().enumerate() {
            let mut push = |kind| out.push(FieldRef { level: k, index, kind });
            if st.delegated_bit.is_some() {
                push(FieldKind::Delegated);
            }
            if st.father_bit.is_some() {
                push(FieldKind::FatherBit);
            }
            if let Some(g) = &st.own_group {
                for i in 0..g.bits.len() as u32 {
                    push(FieldKind::Own(i));
                }
            }
            for s in GROUP_SLOTS {
                if let Some(g) = st.groups.get(s) {
                    for i in 0..g.bits.len() as u32 {
                        push(FieldKind::Group(s, i));
                    }
                }
            }
        }
    }
    out
}

/// Where a constraint event happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Site {
    pub id: ConstraintId,
    pub level: usize,
    pub block: i64,
    pub row: u64,
}

pub trait Sink {
    fn structural(&mut self, at: Site, what: String);
    fn equal(&mut self, at: Site, x: FieldRef, y: FieldRef);
    fn anchor(&mut self, at: Site, x: FieldRef, value: u8);
}

struct Walk<'a, S: Sink> {
    a: &'a Assembly,
    g: &'a Geometry,
    ids: &'a BTreeSet<ConstraintId>,
    sink: &'a mut S,
}

impl<S: Sink> Walk<'_, S> {
    fn on(&self, id: ConstraintId) -> bool {
        self.ids.contains(&id)
    }

    fn fref(&self, k: usize, b: i64, r: u64, kind: FieldKind) -> FieldRef {
        FieldRef {
            level: k,
            index: self.g.index(k, b, r),
            kind,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn bits(
        &mut self,
        at: Site,
        label: &str,
        x: Option<BitAt>,
        xr: FieldRef,
        y: Option<BitAt>,
        yr: FieldRef,
    ) {
        match (x, y) {
            (None, None) => {}
            (Some(p), Some(q)) if p.column == q.column => self.sink.equal(at, xr, yr),
            _ => self
                .sink
                .structural(at, format!("{label}: {} vs {}", show_bit(x), show_bit(y))),
        }
    }

    fn groups(
        &mut self,
        at: Site,
        label: &str,
        x: Option<&GroupRecord>,
        xr: impl Fn(u32) -> FieldRef,
        y: Option<&GroupRecord>,
        yr: impl Fn(u32) -> FieldRef,
    ) {
        match (x, y) {
            (None, None) => {}
            (Some(p), Some(q)) if p.start == q.start && p.bits.len() == q.bits.len() => {
                for i in 0..p.bits.len() as u32 {
                    self.sink.equal(at, xr(i), yr(i));
                }
            }
            _ => self.sink.structural(
                at,
                format!("{label}: {} vs {}", show_group(x), show_group(y)),
            ),
        }
    }

    fn run(&mut self) {
        for k in 0..=self.g.top {
            let lvl = &self.a.levels[k];
            for idx in 0..lvl.states.len() {
                let (b, r) = self.g.position(k, idx);
                self.tile(k, b, r, &lvl.states[idx]);
            }
        }
    }

    fn tile(&mut self, k: usize, b: i64, r: u64, st: &MacroTileState) {
        let g = self.g;
        let a = self.a;
        let site = |id| Site {
            id,
            level: k,
            block: b,
            row: r,
        };
        let me = |kind| FieldRef {
            level: k,
            index: g.index(k, b, r),
            kind,
        };
        let top = g.top;

        if self.on(ConstraintId::C1) {
            self.structure(k, b, r, st);
        }

        let father = (k < top).then(|| {
            let (fb, fr) = g.father_of(k, b, r);
            (fb, fr, a.state(k + 1, fb, fr))
        });

        if self.on(ConstraintId::C2) {
            if let Some((fb, fr, _)) = father {
                let (sb, sr) = g.storage_son(k, fb, fr);
                if (sb, sr) != (b, r) {
                    if let Some(son) = a.state(k, sb, sr) {
                        let at = site(ConstraintId::C2);
                        if st.father_coords != son.father_coords {
                            self.sink.structural(
                                at,
                                format!(
                                    "father coordinates {:?} differ from brother's {:?}",
                                    st.father_coords, son.father_coords
                                ),
                            );
                        }
                        let sref = |kind| self.fref(k, sb, sr, kind);
                        let (x, y) = (me(FieldKind::FatherBit), sref(FieldKind::FatherBit));
                        self.bits(at, "father bit", st.father_bit, x, son.father_bit, y);
                        for s in GROUP_SLOTS {
                            let sidx = g.index(k, sb, sr);
                            self.groups(
                                at,
                                &format!("{s:?} group"),
                                st.groups.get(s),
                                |i| me(FieldKind::Group(s, i)),
                                son.groups.get(s),
                                |i| FieldRef {
                                    level: k,
                                    index: sidx,
                                    kind: FieldKind::Group(s, i),
                                },
                            );
                        }
                    }
                }
            }
        }

        if self.on(ConstraintId::C3) && k == 0 {
            if let Some(d) = st.delegated_bit {
                if g.in_region(d.column) {
                    self.sink.anchor(
                        site(ConstraintId::C3),
                        me(FieldKind::Delegated),
                        a.ground_bit(d.column),
                    );
                }
            }
        }

        if self.on(ConstraintId::C4) && k < top {
            if let (Some(d), Some(f)) = (st.delegated_bit, st.father_bit) {
                if d.column == f.column {
                    self.sink.equal(
                        site(ConstraintId::C4),
                        me(FieldKind::Delegated),
                        me(FieldKind::FatherBit),
                    );
                }
            }
        }

        if self.on(ConstraintId::C5) {
            if let Some((fb, fr, Some(fst))) = father {
                if g.pos_in_father(k, b, r) == (0, 0) {
                    let at = site(ConstraintId::C5);
                    if st.father_coords != Some(fst.pos_in_father) {
                        self.sink.structural(
                            at,
                            format!(
                                "father coordinates {:?} but father is at {:?}",
                                st.father_coords, fst.pos_in_father
                            ),
                        );
                    }
                    let fidx = g.index(k + 1, fb, fr);
                    let fref = |kind| FieldRef {
                        level: k + 1,
                        index: fidx,
                        kind,
                    };
                    self.bits(
                        at,
                        "father bit",
                        st.father_bit,
                        me(FieldKind::FatherBit),
                        fst.delegated_bit,
                        fref(FieldKind::Delegated),
                    );
                    self.groups(
                        at,
                        "father group",
                        st.groups.father.as_ref(),
                        |i| me(FieldKind::Group(GroupSlotName::Father, i)),
                        fst.own_group.as_ref(),
                        |i| fref(FieldKind::Own(i)),
                    );
                }
            }
        }

        if self.on(ConstraintId::C6) {
            if let Some(d) = st.delegated_bit {
                let at = site(ConstraintId::C6);
                if let Some(o) = &st.own_group {
                    let lo = g.zone_start(k, b) + o.start as i64;
                    let off = d.column - lo;
                    if off >= 0 && off < o.bits.len() as i64 {
                        self.sink
                            .equal(at, me(FieldKind::Delegated), me(FieldKind::Own(off as u32)));
                    }
                }
                if let Some((fb, _, _)) = father {
                    for s in GROUP_SLOTS {
                        if let Some(rec) = st.groups.get(s) {
                            let lo = g.zone_start(k + 1, fb + slot_shift(s)) + rec.start as i64;
                            let off = d.column - lo;
                            if off >= 0 && off < rec.bits.len() as i64 {
                                self.sink.equal(
                                    at,
                                    me(FieldKind::Delegated),
                                    me(FieldKind::Group(s, off as u32)),
                                );
                            }
                        }
                    }
                }
            }
        }

        if self.on(ConstraintId::C7) && k < top {
            if let Some(east) = a.state(k, b + 1, r) {
                if g.father_of(k, b, r) != g.father_of(k, b + 1, r) {
                    let at = site(ConstraintId::C7);
                    let eidx = g.index(k, b + 1, r);
                    let eref = |kind| FieldRef {
                        level: k,
                        index: eidx,
                        kind,
                    };
                    self.groups(
                        at,
                        "right uncle vs east father",
                        st.groups.right_uncle.as_ref(),
                        |i| me(FieldKind::Group(GroupSlotName::RightUncle, i)),
                        east.groups.father.as_ref(),
                        |i| eref(FieldKind::Group(GroupSlotName::Father, i)),
                    );
                    self.groups(
                        at,
                        "father vs east left uncle",
                        st.groups.father.as_ref(),
                        |i| me(FieldKind::Group(GroupSlotName::Father, i)),
                        east.groups.left_uncle.as_ref(),
                        |i| eref(FieldKind::Group(GroupSlotName::LeftUncle, i)),
                    );
                }
            }
        }
    }

    fn structure(&mut self, k: usize, b: i64, r: u64, st: &MacroTileState) {
        let g = self.g;
        let at = Site {
            id: ConstraintId::C1,
            level: k,
            block: b,
            row: r,
        };
        let mut bad = |what: String| self.sink.structural(at, what);
        if st.level != k {
            bad(format!("level {} stored at level {k}", st.level));
        }
        let pos = g.pos_in_father(k, b, r);
        if st.pos_in_father != pos {
            bad(format!("position {:?}, expected {pos:?}", st.pos_in_father));
        }
        let col = g.delegated_column(k, b, r);
        if st.delegated_bit.map(|d| d.column) != col {
            bad(format!(
                "delegated column {:?}, expected {col:?}",
                st.delegated_bit.map(|d| d.column)
            ));
        }
        if st.delegated_bit.is_some_and(|d| d.value > 1) {
            bad("delegated value is not a bit".into());
        }
        let start = g.group_start(k, r);
        let got = st.own_group.as_ref().map(|o| (o.start, o.bits.len()));
        if got != start.map(|s| (s, g.group_len[k])) {
            bad(format!("own group {got:?}, expected start {start:?}"));
        }
        if k == g.top {
            if st.father_coords.is_some()
                || st.father_bit.is_some()
                || st.groups.father.is_some()
                || st.groups.left_uncle.is_some()
                || st.groups.right_uncle.is_some()
            {
                bad("top level records a father".into());
            }
        } else {
            if st.father_coords.is_none() {
                bad("missing father coordinates".into());
            }
            for s in GROUP_SLOTS {
                if let Some(rec) = st.groups.get(s) {
                    if rec.bits.len() != g.group_len[k + 1] {
                        bad(format!("{s:?} group has {} bits", rec.bits.len()));
                    }
                }
            }
        }
    }
}

fn show_bit(b: Option<BitAt>) -> String {
    match b {
        None => "none".into(),
        Some(b) => format!("{}@{}", b.value, b.column),
    }
}

fn show_group(g: Option<&GroupRecord>) -> String {
    match g {
        None => "none".into(),
        Some(g) => format!("{}+{}", g.bits, g.start),
    }
}

/// Feed all non-scan constraint events in `ids` into `sink`.
pub fn walk_constraints<S: Sink>(a: &Assembly, ids: &BTreeSet<ConstraintId>, sink: &mut S) {
    Walk {
        a,
        g: &a.geometry,
        ids,
        sink,
    }
    .run();
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub level: usize,
    pub position: (i64, u64),
    pub constraint: ConstraintId,
    pub description: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn constraints(&self) -> BTreeSet<ConstraintId> {
        self.violations.iter().map(|v| v.constraint).collect()
    }

    pub fn to_json_lines(&self) -> String {
        self.violations
            .iter()
            .map(|v| serde_json::to_string(v).expect("violation serializes") + "\n")
            .collect()
    }
}

struct Checker<'a> {
    a: &'a Assembly,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn push(&mut self, at: Site, description: String) {
        self.out.push(Violation {
            level: at.level,
            position: (at.block, at.row),
            constraint: at.id,
            description,
        });
    }
}

impl Sink for Checker<'_> {
    fn structural(&mut self, at: Site, what: String) {
        self.push(at, what);
    }

    fn equal(&mut self, at: Site, x: FieldRef, y: FieldRef) {
        let (p, q) = (field_value(self.a, x), field_value(self.a, y));
        if p != q {
            self.push(at, format!("{x} = {p:?} but {y} = {q:?}"));
        }
    }

    fn anchor(&mut self, at: Site, x: FieldRef, value: u8) {
        let p = field_value(self.a, x);
        if p != Some(value) {
            self.push(at, format!("{x} = {p:?} but ground has {value}"));
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub ids: BTreeSet<ConstraintId>,
    /// Cap on enumeration steps used by the forbidden-word scan.
    pub budget_cap: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            ids: ConstraintId::ALL.into_iter().collect(),
            budget_cap: None,
        }
    }
}

impl CheckOptions {
    pub fn only(ids: &[ConstraintId]) -> Self {
        CheckOptions {
            ids: ids.iter().copied().collect(),
            budget_cap: None,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.budget_cap = Some(cap);
        self
    }
}

/// Check every constraint. An empty report means the assembly is locally
/// consistent.
pub fn check_assembly(a: &Assembly, spec: &SubshiftSpec, s: &ZoomSchedule) -> ViolationReport {
    check_assembly_with(a, spec, s, &CheckOptions::default())
}

pub fn check_assembly_with(
    a: &Assembly,
    spec: &SubshiftSpec,
    s: &ZoomSchedule,
    opts: &CheckOptions,
) -> ViolationReport {
    let mut ck = Checker { a, out: Vec::new() };
    let g = &a.geometry;
    let expected = super::assembly::Geometry::new(s, a.top, &a.alignment, a.ground.len());
    if expected.as_ref() != Ok(g) || a.levels.len() != a.top + 1 {
        ck.push(
            Site {
                id: ConstraintId::C1,
                level: 0,
                block: 0,
                row: 0,
            },
            "assembly geometry does not match the schedule".into(),
        );
        return ViolationReport { violations: ck.out };
    }
    for k in 0..=a.top {
        if a.levels[k].states.len() != g.blocks(k) * g.rows(k) as usize {
            ck.push(
                Site {
                    id: ConstraintId::C1,
                    level: k,
                    block: 0,
                    row: 0,
                },
                "level has the wrong number of tiles".into(),
            );
            return ViolationReport { violations: ck.out };
        }
    }
    walk_constraints(a, &opts.ids, &mut ck);
    if opts.ids.contains(&ConstraintId::C8) {
        scan_forbidden(a, spec, opts.budget_cap, &mut ck);
    }
    ViolationReport { violations: ck.out }
}

fn scan_forbidden(a: &Assembly, spec: &SubshiftSpec, cap: Option<usize>, ck: &mut Checker<'_>) {
    let g = &a.geometry;
    let mut cache: HashMap<usize, Vec<Word>> = HashMap::new();
    for k in 0..=g.top {
        let budget = cap.map_or(g.group_len[k], |c| c.min(g.group_len[k]));
        let words = cache
            .entry(budget)
            .or_insert_with(|| enum_step(spec, budget))
            .clone();
        if words.is_empty() {
            continue;
        }
        for (idx, st) in a.levels[k].states.iter().enumerate() {
            let Some(o) = &st.own_group else { continue };
            let (b, r) = g.position(k, idx);
            let lo = g.zone_start(k, b) + o.start as i64;
            for f in &words {
                for off in o.bits.occurrences(f) {
                    let c = lo + off as i64;
                    if g.in_region(c) && g.in_region(c + f.len() as i64 - 1) {
                        ck.push(
                            Site {
                                id: ConstraintId::C8,
                                level: k,
                                block: b,
                                row: r,
                            },
                            format!("forbidden word {f} at column {c}"),
                        );
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::assembly::{build_assembly, Alignment};

    fn paper1() -> ZoomSchedule {
        ZoomSchedule::paper(1).unwrap()
    }

    #[test]
    fn honest_assembly_has_no_violations() {
        let s = paper1();
        let spec = SubshiftSpec::finite(["11"]).unwrap();
        for ground in ["0", "0101", "1010010", "00100100"] {
            let w: Word = ground.parse().unwrap();
            for al in Alignment::sweep(&s, 2).unwrap() {
                let a = build_assembly(&w, 2, &s, &al).unwrap();
                let rep = check_assembly(&a, &spec, &s);
                assert!(rep.is_empty(), "{ground}: {}", rep.to_json_lines());
            }
        }
    }

    #[test]
    fn forbidden_ground_is_caught() {
        let s = paper1();
        let spec = SubshiftSpec::finite(["11"]).unwrap();
        let a = build_assembly(&"0110".parse().unwrap(), 2, &s, &Alignment::zero(2)).unwrap();
        let rep = check_assembly(&a, &spec, &s);
        assert_eq!(rep.constraints(), [ConstraintId::C8].into_iter().collect());
    }

    #[test]
    fn wrong_father_bit_is_a_c4_violation() {
        let s = paper1();
        let spec = SubshiftSpec::finite(["11"]).unwrap();
        let mut a = build_assembly(&"0100".parse().unwrap(), 1, &s, &Alignment::zero(1)).unwrap();
        // The son at column 0, row 0 sits under a father delegating column 0.
        let st = a.state_mut(0, 0, 0).unwrap();
        let fb = st.father_bit.as_mut().unwrap();
        assert_eq!(fb.column, 0);
        fb.value ^= 1;
        let rep = check_assembly_with(&a, &spec, &s, &CheckOptions::only(&[ConstraintId::C4]));
        assert!(!rep.is_empty());
        assert!(rep.violations.iter().all(|v| v.constraint == ConstraintId::C4));
    }

    #[test]
    fn wrong_coordinates_are_structural() {
        let s = paper1();
        let spec = SubshiftSpec::finite(["11"]).unwrap();
        let mut a = build_assembly(&"0100".parse().unwrap(), 1, &s, &Alignment::zero(1)).unwrap();
        a.state_mut(0, 1, 0).unwrap().pos_in_father = (0, 0);
        let rep = check_assembly(&a, &spec, &s);
        assert!(rep.constraints().contains(&ConstraintId::C1));
    }

    #[test]
    fn report_is_json_lines() {
        let s = paper1();
        let spec = SubshiftSpec::finite(["11"]).unwrap();
        let a = build_assembly(&"0110".parse().unwrap(), 2, &s, &Alignment::zero(2)).unwrap();
        let text = check_assembly(&a, &spec, &s).to_json_lines();
        for line in text.lines() {
            let v: Violation = serde_json::from_str(line).unwrap();
            assert_eq!(v.constraint, ConstraintId::C8);
        }
        assert!(!text.is_empty());
    }

    #[test]
    fn padding_never_triggers_scan() {
        let s = paper1();
        let spec = SubshiftSpec::finite(["00"]).unwrap();
        // A single 1: every forbidden "00" would need padding.
        let a = build_assembly(&"1".parse().unwrap(), 2, &s, &Alignment::zero(2)).unwrap();
        assert!(check_assembly(&a, &spec, &s).is_empty());
    }
}
