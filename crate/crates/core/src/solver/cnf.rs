//! DIMACS encoding of tiling instances and two small reference evaluators.
//!
//! Variable `1 + c*T + t` says cell `c` (row-major) holds tile `t`, where
//! `T` is the tile count.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::WangTileSet;

use super::BoundaryConstraint;

/// A formula in conjunctive normal form with DIMACS literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

/// Largest variable count the exhaustive evaluator accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

pub fn var(cell: usize, tile: usize, ntiles: usize) -> i32 {
    (1 + cell * ntiles + tile) as i32
}

/// Encode a `w`x`h` tiling instance.
pub fn export_cnf(tiles: &WangTileSet, w: usize, h: usize, bc: &BoundaryConstraint) -> Result<Cnf> {
    if w == 0 || h == 0 {
        return Err(Error::Invalid {
            what: "region",
            reason: "width and height must be at least 1".into(),
        });
    }
    let t = tiles.len();
    let cells = w * h;
    let mut clauses = Vec::new();
    for c in 0..cells {
        clauses.push((0..t).map(|k| var(c, k, t)).collect());
        for a in 0..t {
            for b in a + 1..t {
                clauses.push(vec![-var(c, a, t), -var(c, b, t)]);
            }
        }
    }
    for y in 0..h {
        for x in 0..w {
            let c = y * w + x;
            if x + 1 < w {
                for a in 0..t {
                    for b in 0..t {
                        if tiles.tile(a).e != tiles.tile(b).w {
                            clauses.push(vec![-var(c, a, t), -var(c + 1, b, t)]);
                        }
                    }
                }
            }
            if y + 1 < h {
                for a in 0..t {
                    for b in 0..t {
                        if tiles.tile(a).n != tiles.tile(b).s {
                            clauses.push(vec![-var(c, a, t), -var(c + w, b, t)]);
                        }
                    }
                }
            }
        }
    }
    let doms = bc.domains(tiles, w, h)?;
    let pinned: std::collections::HashSet<usize> =
        bc.fixed.iter().map(|f| f.y * w + f.x).collect();
    for (c, d) in doms.iter().enumerate() {
        for k in 0..t {
            if !d.contains(k) {
                clauses.push(vec![-var(c, k, t)]);
            } else if pinned.contains(&c) {
                clauses.push(vec![var(c, k, t)]);
            }
        }
    }
    Ok(Cnf {
        num_vars: cells * t,
        clauses,
    })
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for cl in &self.clauses {
            for lit in cl {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Cnf> {
        let bad = |reason: String| Error::Invalid {
            what: "DIMACS",
            reason,
        };
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[0] != "cnf" {
                    return Err(bad(format!("bad header `{line}`")));
                }
                let v = parts[1].parse().map_err(|_| bad("variable count".into()))?;
                let c = parts[2].parse().map_err(|_| bad("clause count".into()))?;
                header = Some((v, c));
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| bad(format!("literal `{tok}`")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        let (num_vars, count) = header.ok_or_else(|| bad("missing header".into()))?;
        if !current.is_empty() {
            return Err(bad("unterminated clause".into()));
        }
        if clauses.len() != count {
            return Err(bad(format!("header says {count} clauses, found {}", clauses.len())));
        }
        if clauses
            .iter()
            .flatten()
            .any(|l| l.unsigned_abs() as usize > num_vars)
        {
            return Err(bad("literal exceeds variable count".into()));
        }
        Ok(Cnf { num_vars, clauses })
    }

    fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|cl| {
            cl.iter().any(|&l| {
                let bit = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
                bit == (l > 0)
            })
        })
    }

    /// Models counted by trying all `2^V` assignments.
    pub fn brute_force_count(&self) -> Result<u64> {
        if self.num_vars > BRUTE_FORCE_MAX_VARS {
            return Err(Error::ResourceLimit(format!(
                "{} variables exceed the exhaustive evaluator cap of {BRUTE_FORCE_MAX_VARS}",
                self.num_vars
            )));
        }
        Ok((0..1u64 << self.num_vars)
            .filter(|&a| self.satisfied_by(a))
            .count() as u64)
    }

    pub fn brute_force_sat(&self) -> Result<bool> {
        if self.num_vars > BRUTE_FORCE_MAX_VARS {
            return Err(Error::ResourceLimit(format!("{} variables", self.num_vars)));
        }
        Ok((0..1u64 << self.num_vars).any(|a| self.satisfied_by(a)))
    }

    /// Model count by DPLL with unit propagation.
    pub fn count_models(&self) -> u128 {
        let assign = vec![0i8; self.num_vars + 1];
        dpll_count(&self.clauses, assign)
    }
}

fn dpll_count(clauses: &[Vec<i32>], mut assign: Vec<i8>) -> u128 {
    let value = |a: &[i8], l: i32| -> i8 {
        let v = a[l.unsigned_abs() as usize];
        if l > 0 {
            v
        } else {
            -v
        }
    };
    loop {
        let mut unit = None;
        for cl in clauses {
            let mut free = None;
            let mut nfree = 0;
            let mut sat = false;
            for &l in cl {
                match value(&assign, l) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        nfree += 1;
                        free = Some(l);
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            if nfree == 0 {
                return 0;
            }
            if nfree == 1 {
                unit = free;
                break;
            }
        }
        match unit {
            Some(l) => assign[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 },
            None => break,
        }
    }
    // Branch on the first variable of the first unsatisfied clause.
    let open = clauses.iter().find(|cl| !cl.iter().any(|&l| value(&assign, l) == 1));
    match open {
        None => {
            let free = assign[1..].iter().filter(|&&v| v == 0).count() as u32;
            1u128 << free
        }
        Some(cl) => {
            let l = *cl.iter().find(|&&l| value(&assign, l) == 0).expect("open clause has a free literal");
            let v = l.unsigned_abs() as usize;
            let mut a = assign.clone();
            a[v] = 1;
            let mut b = assign;
            b[v] = -1;
            dpll_count(clauses, a) + dpll_count(clauses, b)
        }
    }
}
