//! Budget-qualified soundness, completeness and extendability sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::search::{local_to_global, Target};
use crate::hierarchy::{
    build_assembly, catching_level, check_assembly_with, Alignment, CheckOptions, ConstraintId,
};
use crate::subshift::{enum_step, legal_words, SubshiftSpec, Word, MAX_ORACLE_LEN};

use super::CompiledSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Soundness,
    Completeness,
    Extendability,
}

/// One failed instance, with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub word: Word,
    pub alignment: Vec<i64>,
    pub budget: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: Mode,
    pub width: usize,
    pub budget: usize,
    /// Levels actually used.
    pub top: usize,
    /// Assemblies built and checked.
    pub instances: usize,
    /// Words realized (completeness) or accepted (soundness).
    pub words: Vec<Word>,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Forbidden words released within `t` steps, each with its first step.
pub fn release_steps(spec: &SubshiftSpec, t: usize) -> Vec<(Word, usize)> {
    let mut out: Vec<(Word, usize)> = Vec::new();
    for step in 1..=t {
        for f in enum_step(spec, step) {
            if !out.iter().any(|(g, _)| *g == f) {
                out.push((f, step));
            }
        }
    }
    out
}

/// Highest level `<= K` whose tiles fit in height `h`.
pub fn effective_top(cs: &CompiledSystem, h: usize) -> Result<usize> {
    let mut k = 0;
    while k < cs.top && cs.schedule.side_u64(k + 1)? <= h as u64 {
        k += 1;
    }
    Ok(k)
}

fn budget_opts(t: usize) -> CheckOptions {
    CheckOptions::default().with_cap(t)
}

/// Whether the honest assembly over `word` passes under some alignment.
fn passes_somewhere(cs: &CompiledSystem, word: &Word, top: usize, t: usize) -> Result<(bool, usize)> {
    let mut n = 0;
    for al in Alignment::sweep(&cs.schedule, top)? {
        n += 1;
        let a = build_assembly(word, top, &cs.schedule, &al)?;
        if check_assembly_with(&a, &cs.spec, &cs.schedule, &budget_opts(t)).is_empty() {
            return Ok((true, n));
        }
    }
    Ok((false, n))
}

fn oracle_width(w: usize) -> Result<()> {
    if w > MAX_ORACLE_LEN {
        return Err(Error::ResourceLimit(format!(
            "width {w} exceeds the sweep cap {MAX_ORACLE_LEN}"
        )));
    }
    Ok(())
}

/// Every legal word of width `w` at budget `t` must pass the checker
/// under every alignment of the canonical sweep.
pub fn verify_completeness(cs: &CompiledSystem, w: usize, t: usize) -> Result<VerificationReport> {
    oracle_width(w)?;
    let mut report = VerificationReport {
        mode: Mode::Completeness,
        width: w,
        budget: t,
        top: cs.top,
        instances: 0,
        words: Vec::new(),
        failures: Vec::new(),
    };
    if w == 0 {
        return Ok(report);
    }
    let aligns = Alignment::sweep(&cs.schedule, cs.top)?;
    let words = legal_words(&cs.spec, w, t)?;
    let results: Vec<Result<Vec<Failure>>> = words
        .par_iter()
        .map(|word| {
            let mut fails = Vec::new();
            for al in &aligns {
                let a = build_assembly(word, cs.top, &cs.schedule, al)?;
                let rep = check_assembly_with(&a, &cs.spec, &cs.schedule, &budget_opts(t));
                if let Some(v) = rep.violations.first() {
                    fails.push(Failure {
                        word: word.clone(),
                        alignment: al.0.clone(),
                        budget: t,
                        detail: format!(
                            "{} violations, first {} at level {} {:?}: {}",
                            rep.len(),
                            v.constraint,
                            v.level,
                            v.position,
                            v.description
                        ),
                    });
                }
            }
            Ok(fails)
        })
        .collect();
    for (word, r) in words.into_iter().zip(results) {
        let fails = r?;
        report.instances += aligns.len();
        if fails.is_empty() {
            report.words.push(word);
        }
        report.failures.extend(fails);
    }
    Ok(report)
}

/// Sweep all `2^w` ground words. An assembly the checker accepts must not
/// hold a forbidden occurrence (budget `t`) that some level `<= K` could
/// have caught; and with structure fixed, the first seven constraints must
/// force every delegated bit and group onto the ground.
pub fn verify_soundness(cs: &CompiledSystem, w: usize, h: usize, t: usize) -> Result<VerificationReport> {
    oracle_width(w)?;
    let top = effective_top(cs, h)?;
    let mut report = VerificationReport {
        mode: Mode::Soundness,
        width: w,
        budget: t,
        top,
        instances: 0,
        words: Vec::new(),
        failures: Vec::new(),
    };
    if w == 0 {
        return Ok(report);
    }
    let aligns = Alignment::sweep(&cs.schedule, top)?;
    let released = release_steps(&cs.spec, t);
    use ConstraintId::*;

    for al in &aligns {
        let a = build_assembly(&Word::zeros(w), top, &cs.schedule, al)?;
        for (ids, target) in [
            (&[C1, C2, C3, C4, C5][..], Target::Delegation),
            (&[C1, C2, C3, C4, C5, C6, C7][..], Target::Groups),
        ] {
            let (o, _) = local_to_global(&a, &cs.spec, &cs.schedule, ids, target);
            if !o.holds() {
                report.failures.push(Failure {
                    word: Word::zeros(w),
                    alignment: al.0.clone(),
                    budget: t,
                    detail: format!("local-to-global {target:?}: {o:?}"),
                });
            }
        }
    }

    let per_word: Vec<Result<(bool, Vec<Failure>)>> = (0..1u64 << w)
        .into_par_iter()
        .map(|v| {
            let word = Word::from_index(v, w);
            let mut accepted = false;
            let mut fails = Vec::new();
            for al in &aligns {
                let a = build_assembly(&word, top, &cs.schedule, al)?;
                if !check_assembly_with(&a, &cs.spec, &cs.schedule, &budget_opts(t)).is_empty() {
                    continue;
                }
                accepted = true;
                for (f, step) in &released {
                    for lo in word.occurrences(f) {
                        if let Some(k) = catching_level(&a.geometry, lo as i64, f.len(), *step, Some(t)) {
                            fails.push(Failure {
                                word: word.clone(),
                                alignment: al.0.clone(),
                                budget: t,
                                detail: format!("accepted with {f} at column {lo}, catchable at level {k}"),
                            });
                        }
                    }
                }
            }
            Ok((accepted, fails))
        })
        .collect();
    for (v, r) in per_word.into_iter().enumerate() {
        let (accepted, fails) = r?;
        report.instances += aligns.len();
        if accepted {
            report.words.push(Word::from_index(v as u64, w));
        }
        report.failures.extend(fails);
    }
    Ok(report)
}

/// Ground words of width `w` whose honest assembly passes at budget `t`
/// under some alignment.
pub fn accepted_words(cs: &CompiledSystem, w: usize, t: usize) -> Result<Vec<Word>> {
    oracle_width(w)?;
    if w == 0 {
        return Ok(vec![Word::zeros(0)]);
    }
    let flags: Vec<Result<bool>> = (0..1u64 << w)
        .into_par_iter()
        .map(|v| Ok(passes_somewhere(cs, &Word::from_index(v, w), cs.top, t)?.0))
        .collect();
    let mut out = Vec::new();
    for (v, f) in flags.into_iter().enumerate() {
        if f? {
            out.push(Word::from_index(v as u64, w));
        }
    }
    Ok(out)
}

/// Whether some patch of height `h` of the compiled system projects onto
/// `word`: some alignment of the levels fitting in `h` accepts it at full
/// budget.
pub fn extendable(cs: &CompiledSystem, word: &Word, h: usize) -> Result<bool> {
    if word.is_empty() {
        return Ok(true);
    }
    let top = effective_top(cs, h)?;
    let full = cs.layer2.group_len.iter().copied().max().unwrap_or(0);
    Ok(passes_somewhere(cs, word, top, full)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{compile, CompileOptions};
    use crate::hierarchy::ZoomSchedule;

    fn golden() -> CompiledSystem {
        compile(
            &SubshiftSpec::GoldenMean,
            &ZoomSchedule::paper(1).unwrap(),
            2,
            CompileOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn golden_mean_completeness_counts_fibonacci() {
        let r = verify_completeness(&golden(), 5, 1).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.words.len(), 13);
        assert!(verify_completeness(&golden(), 0, 1).unwrap().passed());
    }

    #[test]
    fn golden_mean_soundness_small() {
        let r = verify_soundness(&golden(), 5, 128, 1).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.words.len(), 13);
    }

    #[test]
    fn empty_list_accepts_everything() {
        let cs = compile(
            &SubshiftSpec::finite(Vec::<&str>::new()).unwrap(),
            &ZoomSchedule::paper(1).unwrap(),
            1,
            CompileOptions::default(),
        )
        .unwrap();
        let r = verify_soundness(&cs, 4, 8, 3).unwrap();
        assert!(r.passed());
        assert_eq!(r.words.len(), 16);
    }

    #[test]
    fn extendability_examples() {
        let cs = golden();
        assert!(extendable(&cs, &"0101".parse().unwrap(), 8).unwrap());
        assert!(!extendable(&cs, &"11".parse().unwrap(), 8).unwrap());
        assert!(extendable(&cs, &"11".parse().unwrap(), 2).unwrap());
        assert!(extendable(&cs, &Word::zeros(0), 1).unwrap());
    }

    #[test]
    fn release_steps_of_even_shift() {
        let r = release_steps(&SubshiftSpec::EvenShift, 2);
        assert_eq!(r.len(), 2);
        assert_eq!(r[1], ("10001".parse().unwrap(), 2));
    }
}
