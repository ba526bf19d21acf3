//! Lowering a subshift and zoom schedule to the two-layer system, and the
//! finite verifiers that exercise it.
//!
//! Layer 1 is a vertical-constancy rule over the bit alphabet: each column
//! carries a single letter. Layer 2 is the macro-tile hierarchy with its
//! constraint catalogue. Verification runs on assemblies rather than on
//! literal level-0 tiles; a flat Wang tile set is produced only for tiny
//! schedules under an explicit size bound.

mod flat;
mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Alphabet, LocalRule, ProjectionMap};
use crate::hierarchy::{validate_schedule, CheckStatus, ConstraintId, Margins, ScheduleReport, ZoomSchedule};
use crate::subshift::{ForbiddenEnumerator as _, SubshiftSpec};

pub use flat::{decode_flat, flat_boundary, flatten, FlatLabel, FlatSystem, LevelBits};
pub use verify::{
    accepted_words, effective_top, extendable, release_steps, verify_completeness, verify_soundness,
    Failure, Mode, VerificationReport,
};

/// Vertical constancy over an alphabet with a projection to bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalRule {
    pub alphabet: Alphabet,
    pub pi: ProjectionMap,
    /// `(above, below)` letter pairs that may not be vertical neighbors.
    pub forbidden_pairs: Vec<(u32, u32)>,
}

impl VerticalRule {
    pub fn new(alphabet: Alphabet, pi: ProjectionMap) -> Result<Self> {
        if pi.source_len() != alphabet.len() {
            return Err(Error::AlphabetMismatch {
                rule: alphabet.len(),
                patch: pi.source_len(),
            });
        }
        let n = alphabet.len() as u32;
        let mut forbidden_pairs = Vec::new();
        for above in 0..n {
            for below in 0..n {
                if pi.apply(above) != pi.apply(below) {
                    forbidden_pairs.push((above, below));
                }
            }
        }
        Ok(VerticalRule {
            alphabet,
            pi,
            forbidden_pairs,
        })
    }

    /// The bit layer: letters `0` and `1`, identity projection.
    pub fn bits() -> Self {
        VerticalRule::new(Alphabet::bits(), ProjectionMap::identity(2)).expect("bit rule")
    }

    /// The same rule as a 2x2 window rule (rows listed south first).
    pub fn to_local_rule(&self) -> Result<LocalRule> {
        let n = self.alphabet.len() as u32;
        let mut forbidden = Vec::new();
        for code in 0..n.pow(4) {
            let block: Vec<u32> = (0..4).rev().map(|i| code / n.pow(i) % n).collect();
            let bad = |below: u32, above: u32| self.forbidden_pairs.contains(&(above, below));
            if bad(block[0], block[2]) || bad(block[1], block[3]) {
                forbidden.push(block);
            }
        }
        LocalRule::new(2, self.alphabet.clone(), forbidden)
    }
}

/// Parameters of the hierarchical layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyLayer {
    pub constraints: Vec<ConstraintId>,
    /// `N(0..=K)` in decimal.
    pub zoom: Vec<String>,
    /// `L(0..=K+1)` in decimal.
    pub side: Vec<String>,
    /// `l(0..=K)`.
    pub group_len: Vec<usize>,
    /// Levels whose forbidden-word scan is vacuous at full budget.
    pub vacuous_scan: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CompileOptions {
    /// Refuse schedules failing validation up to `K + 2`.
    pub strict: bool,
    /// Emit a flat tile set if its label count estimate is at most this.
    pub flatten: Option<u128>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompiledSystem {
    pub spec: SubshiftSpec,
    pub schedule: ZoomSchedule,
    #[serde(rename = "K")]
    pub top: usize,
    pub layer1: VerticalRule,
    pub layer2: HierarchyLayer,
    pub validation: ScheduleReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat: Option<FlatSystem>,
}

impl CompiledSystem {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("compiled system serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Assemble both layers for `spec` under `schedule` with levels `0..=top`.
pub fn compile(
    spec: &SubshiftSpec,
    schedule: &ZoomSchedule,
    top: usize,
    opts: CompileOptions,
) -> Result<CompiledSystem> {
    let validation = validate_schedule(schedule, (top + 2).max(2), Margins::default());
    if opts.strict && !validation.passed() {
        let first = validation
            .failures()
            .next()
            .map(|r| match r.status {
                CheckStatus::Undefined => format!("k={} check {:?}: {}", r.k, r.check, r.lhs),
                _ => format!("k={} check {:?}: {} > {}", r.k, r.check, r.lhs, r.rhs),
            })
            .unwrap_or_default();
        return Err(Error::ScheduleValidation(first));
    }
    let zoom = (0..=top)
        .map(|k| schedule.zoom(k).map(|n| n.to_string()))
        .collect::<Result<Vec<_>>>()?;
    let side = (0..=top + 1)
        .map(|k| schedule.side(k).map(|n| n.to_string()))
        .collect::<Result<Vec<_>>>()?;
    let group_len = (0..=top)
        .map(|k| schedule.group_len(k))
        .collect::<Result<Vec<_>>>()?;
    let vacuous_scan = group_len
        .iter()
        .enumerate()
        .filter(|(_, &l)| spec.enum_step(l).iter().all(|f| f.len() > l))
        .map(|(k, _)| k)
        .collect();
    let mut cs = CompiledSystem {
        spec: spec.clone(),
        schedule: schedule.clone(),
        top,
        layer1: VerticalRule::bits(),
        layer2: HierarchyLayer {
            constraints: ConstraintId::ALL.to_vec(),
            zoom,
            side,
            group_len,
            vacuous_scan,
        },
        validation,
        flat: None,
    };
    if let Some(bound) = opts.flatten {
        cs.flat = Some(flatten(&cs, bound)?);
    }
    Ok(cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{check_local_rule, Patch};

    #[test]
    fn golden_mean_layer_one() {
        let cs = compile(
            &SubshiftSpec::GoldenMean,
            &ZoomSchedule::paper(1).unwrap(),
            2,
            CompileOptions::default(),
        )
        .unwrap();
        assert_eq!(cs.layer1.forbidden_pairs, vec![(0, 1), (1, 0)]);
        assert!(!cs.validation.passed());
        let rule = cs.layer1.to_local_rule().unwrap();
        let constant = Patch::from_rows(&[&[0, 1, 1], &[0, 1, 1], &[0, 1, 1]]).unwrap();
        assert!(check_local_rule(&rule, &constant).unwrap().is_empty());
        let broken = Patch::from_rows(&[&[0, 1], &[1, 1]]).unwrap();
        assert_eq!(check_local_rule(&rule, &broken).unwrap().len(), 1);
    }

    #[test]
    fn strict_refuses_failing_schedule() {
        let r = compile(
            &SubshiftSpec::GoldenMean,
            &ZoomSchedule::paper(1).unwrap(),
            2,
            CompileOptions {
                strict: true,
                flatten: None,
            },
        );
        assert!(matches!(r, Err(Error::ScheduleValidation(_))));
    }

    #[test]
    fn empty_list_makes_every_scan_vacuous() {
        let spec = SubshiftSpec::finite(Vec::<&str>::new()).unwrap();
        let cs = compile(&spec, &ZoomSchedule::paper(1).unwrap(), 2, CompileOptions::default()).unwrap();
        assert_eq!(cs.layer2.vacuous_scan, vec![0, 1, 2]);
    }

    #[test]
    fn json_round_trip() {
        let cs = compile(
            &SubshiftSpec::EvenShift,
            &ZoomSchedule::custom(vec![2, 4, 16], Some(vec![0, 2, 5])).unwrap(),
            2,
            CompileOptions::default(),
        )
        .unwrap();
        let back = CompiledSystem::from_json(&cs.to_json()).unwrap();
        assert_eq!(back.to_json(), cs.to_json());
        assert_eq!(back.layer2.side, vec!["1", "2", "8", "128"]);
    }
}
