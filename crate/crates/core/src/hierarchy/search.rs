//! Exhaustive local-to-global search.
//!
//! With the structure of an assembly held fixed, the non-scan constraints
//! are equalities between bit fields plus anchors to ground bits. The set
//! of bit assignments passing them is therefore a product over the
//! equality classes: anchored classes are forced, free classes take either
//! value. A field that can disagree with the ground exists exactly when it
//! sits in a free class, and flipping that class yields a concrete
//! counterexample, which is re-checked with the ordinary checker.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::subshift::SubshiftSpec;

use super::assembly::Assembly;
use super::check::{
    all_fields, check_assembly_with, field_column, field_value, set_field, walk_constraints,
    CheckOptions, ConstraintId, FieldKind, FieldRef, Site, Sink,
};
use super::schedule::ZoomSchedule;

/// Which fields must equal the ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Delegated bits and the father bits copying them.
    Delegation,
    /// Every recorded group bit.
    Groups,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub fields: usize,
    pub classes: usize,
    pub anchored_classes: usize,
    pub targets: usize,
    /// Structural verdicts that stopped the search.
    pub structural: Vec<String>,
    /// A field that some passing assembly sets differently from the ground.
    pub free_target: Option<String>,
    /// True when the constraints themselves contradict the honest ground.
    pub contradiction: bool,
}

impl SearchOutcome {
    pub fn holds(&self) -> bool {
        self.structural.is_empty() && self.free_target.is_none() && !self.contradiction
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

struct Collector {
    ids: HashMap<FieldRef, usize>,
    uf: UnionFind,
    anchors: Vec<(usize, u8)>,
    structural: Vec<String>,
}

impl Sink for Collector {
    fn structural(&mut self, at: Site, what: String) {
        self.structural
            .push(format!("{} level {} ({}, {}): {what}", at.id, at.level, at.block, at.row));
    }

    fn equal(&mut self, _at: Site, x: FieldRef, y: FieldRef) {
        if let (Some(&i), Some(&j)) = (self.ids.get(&x), self.ids.get(&y)) {
            self.uf.union(i, j);
        }
    }

    fn anchor(&mut self, _at: Site, x: FieldRef, value: u8) {
        if let Some(&i) = self.ids.get(&x) {
            self.anchors.push((i, value));
        }
    }
}

fn is_target(kind: FieldKind, t: Target) -> bool {
    match t {
        Target::Delegation => matches!(kind, FieldKind::Delegated | FieldKind::FatherBit),
        Target::Groups => matches!(kind, FieldKind::Own(_) | FieldKind::Group(..)),
    }
}

/// Search every bit assignment of `a` (structure fixed) that passes the
/// constraints in `ids` for one that moves an in-region target field away
/// from the ground. When one exists, the flipped assembly is returned too.
pub fn local_to_global(
    a: &Assembly,
    spec: &SubshiftSpec,
    s: &ZoomSchedule,
    ids: &[ConstraintId],
    target: Target,
) -> (SearchOutcome, Option<Assembly>) {
    let fields = all_fields(a);
    let ids_set: BTreeSet<ConstraintId> = ids.iter().copied().collect();
    let mut col = Collector {
        ids: fields.iter().enumerate().map(|(i, f)| (*f, i)).collect(),
        uf: UnionFind::new(fields.len()),
        anchors: Vec::new(),
        structural: Vec::new(),
    };
    walk_constraints(a, &ids_set, &mut col);

    let mut outcome = SearchOutcome {
        fields: fields.len(),
        classes: 0,
        anchored_classes: 0,
        targets: 0,
        structural: std::mem::take(&mut col.structural),
        free_target: None,
        contradiction: false,
    };
    if !outcome.structural.is_empty() {
        return (outcome, None);
    }

    let mut forced: HashMap<usize, u8> = HashMap::new();
    for &(i, v) in &col.anchors {
        let r = col.uf.find(i);
        if *forced.entry(r).or_insert(v) != v {
            outcome.contradiction = true;
        }
    }
    let roots: Vec<usize> = (0..fields.len()).map(|i| col.uf.find(i)).collect();
    outcome.classes = roots.iter().collect::<BTreeSet<_>>().len();
    outcome.anchored_classes = forced.len();

    let g = &a.geometry;
    for (i, f) in fields.iter().enumerate() {
        if !is_target(f.kind, target) {
            continue;
        }
        let Some(c) = field_column(a, *f) else { continue };
        if !g.in_region(c) {
            continue;
        }
        outcome.targets += 1;
        match forced.get(&roots[i]) {
            Some(&v) if v == a.ground_bit(c) => {}
            Some(_) => outcome.contradiction = true,
            None if outcome.free_target.is_none() => {
                let mut flipped = a.clone();
                for (j, h) in fields.iter().enumerate() {
                    if roots[j] == roots[i] {
                        let v = field_value(a, *h).unwrap_or(0);
                        set_field(&mut flipped, *h, v ^ 1);
                    }
                }
                let rep = check_assembly_with(&flipped, spec, s, &CheckOptions::only(ids));
                outcome.free_target = Some(format!(
                    "level {} tile {:?} {f} at column {c} (replay passes: {})",
                    f.level,
                    g.position(f.level, f.index),
                    rep.is_empty()
                ));
                return (outcome, Some(flipped));
            }
            None => {}
        }
    }
    (outcome, None)
}
