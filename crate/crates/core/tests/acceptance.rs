//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tilelift::compiler::{accepted_words, compile, verify_completeness, verify_soundness, CompileOptions, CompiledSystem};
use tilelift::grid::{check_local_rule, check_wang, rule_to_wang, Alphabet, LocalRule, Patch, WangTile, WangTileSet};
use tilelift::hierarchy::search::{local_to_global, Target};
use tilelift::hierarchy::{
    build_assembly, validate_schedule, window_coverage, Alignment, ConstraintId, Margins, ZoomSchedule,
};
use tilelift::solver::{export_cnf, tile_region, BoundaryConstraint, FixedCell, SolveOptions, SolveStatus};
use tilelift::subshift::{legal_words, SubshiftSpec, Word};
use tilelift::tmtiles::{fixtures, inputs_up_to, run_tm, tm_to_wang};

const C1_MAX: Duration = Duration::from_secs(10);
const C2_MAX: Duration = Duration::from_secs(60);
const C4_MAX: Duration = Duration::from_secs(300);
const GOLDEN_WIDTH5: usize = 13;
const CNF_INSTANCES: usize = 50;
const CNF_MAX_VARS: usize = 20;
const CNF_SEED: u64 = 0x7117_e11f;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn golden() -> CompiledSystem {
    compile(&SubshiftSpec::GoldenMean, &ZoomSchedule::paper(1).unwrap(), 2, CompileOptions::default()).unwrap()
}

fn golden_completeness() -> Verdict {
    let cs = golden();
    let start = Instant::now();
    let r = verify_completeness(&cs, 5, 1).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let oracle = legal_words(&SubshiftSpec::GoldenMean, 5, 1).map_err(|e| e.to_string())?;
    let msg = format!(
        "{} realized, {} oracle, {} failures, {:.2?}",
        r.words.len(),
        oracle.len(),
        r.failures.len(),
        took
    );
    if r.passed() && r.words == oracle && oracle.len() == GOLDEN_WIDTH5 && took < C1_MAX {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn golden_soundness() -> Verdict {
    let cs = golden();
    let h = cs.schedule.side_u64(cs.top + 1).unwrap() as usize;
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for t in 1..=2 {
        let r = verify_soundness(&cs, 8, h, t).map_err(|e| e.to_string())?;
        notes.push(format!("t={t}: {} accepted of 256, {} failures", r.words.len(), r.failures.len()));
        if let Some(f) = r.failures.first() {
            notes.push(format!("first: {} {:?} {}", f.word, f.alignment, f.detail));
        }
        ok &= r.passed();
    }
    let took = start.elapsed();
    notes.push(format!("{took:.2?}"));
    ok &= took < C2_MAX;
    let msg = notes.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn factors(words: &[Word], max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for w in words {
        for len in 1..=max_len.min(w.len()) {
            for i in 0..=w.len() - len {
                out.insert(w.factor(i, len));
            }
        }
    }
    out
}

fn even_shift_sandwich() -> Verdict {
    let spec = SubshiftSpec::EvenShift;
    let s = ZoomSchedule::custom(vec![2, 4, 16], Some(vec![0, 2, 5])).unwrap();
    let cs = compile(&spec, &s, 2, CompileOptions::default()).map_err(|e| e.to_string())?;
    let w = 6;
    // Every forbidden word of length <= w is released by step w.
    let truth = legal_words(&spec, w, w).map_err(|e| e.to_string())?;
    let truth_set: BTreeSet<Word> = truth.iter().cloned().collect();
    let mut prev: Option<BTreeSet<Word>> = None;
    let mut notes = Vec::new();
    let mut ok = true;
    for t in 1..=3 {
        let acc = accepted_words(&cs, w, t).map_err(|e| e.to_string())?;
        let acc_set: BTreeSet<Word> = acc.iter().cloned().collect();
        let upper: BTreeSet<Word> = legal_words(&spec, w, t).map_err(|e| e.to_string())?.into_iter().collect();
        let monotone = prev.as_ref().is_none_or(|p| acc_set.is_subset(p));
        let sandwiched = truth_set.is_subset(&acc_set) && acc_set.is_subset(&upper);
        let exact = t < 2 || factors(&acc, 5) == factors(&truth, 5);
        notes.push(format!(
            "t={t}: {} accepted, oracle {}..{}, monotone={monotone} sandwich={sandwiched} exact={exact}",
            acc.len(),
            truth.len(),
            upper.len()
        ));
        ok &= monotone && sandwiched && exact;
        prev = Some(acc_set);
    }
    let msg = notes.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn local_to_global_delegation() -> Verdict {
    use ConstraintId::*;
    let s = ZoomSchedule::paper(1).unwrap();
    let spec = SubshiftSpec::GoldenMean;
    let start = Instant::now();
    let mut instances = 0usize;
    for top in 0..=2 {
        for al in Alignment::sweep(&s, top).map_err(|e| e.to_string())? {
            for w in 1..=16 {
                let a = build_assembly(&Word::zeros(w), top, &s, &al).map_err(|e| e.to_string())?;
                let (o, _) = local_to_global(&a, &spec, &s, &[C1, C2, C3, C4, C5], Target::Delegation);
                instances += 1;
                if !o.holds() {
                    return Err(format!("counterexample K={top} alignment={:?} width={w}: {o:?}", al.0));
                }
            }
        }
    }
    let took = start.elapsed();
    let msg = format!("{instances} instances, no counterexample, {took:.2?}");
    if took < C4_MAX {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn coverage() -> Verdict {
    let s = ZoomSchedule::paper(1).unwrap();
    let mut windows = 0usize;
    for k in 0..=3usize {
        let l = s.side_u64(k).unwrap() as i64;
        for a in 0..l {
            let al = Alignment::from_top(&s, k, a).unwrap();
            for w in 1..=l {
                for lo in -l..2 * l {
                    windows += 1;
                    match window_coverage(&s, k, (lo, lo + w), &al) {
                        Ok(Some(c)) if c <= k => {}
                        other => return Err(format!("miss at k={k} a={a} [{lo},{}): {other:?}", lo + w)),
                    }
                }
            }
        }
    }
    Ok(format!("{windows} windows, zero misses"))
}

fn tm_equivalence() -> Verdict {
    let mut checked = 0usize;
    let mut sat = 0usize;
    for name in ["unary_erase", "parity", "seek_back"] {
        let tm = fixtures::by_name(name).unwrap();
        let symbols = tm.compile().map_err(|e| e.to_string())?.input_symbols();
        for w in 1..=4 {
            for h in 1..=5 {
                let enc = tm_to_wang(&tm, w, h).map_err(|e| e.to_string())?;
                for input in inputs_up_to(&symbols, w) {
                    let bc = enc.boundary(&input).map_err(|e| e.to_string())?;
                    let r = tile_region(&enc.tiles, w, h, &bc, SolveOptions::default()).map_err(|e| e.to_string())?;
                    let tileable = r.status == SolveStatus::Sat;
                    let accepted = run_tm(&tm, &input, h - 1, w).map_err(|e| e.to_string())?.accepted();
                    if tileable != accepted {
                        return Err(format!(
                            "{name} w={w} h={h} input={input:?}: tileable={tileable} accepted={accepted}"
                        ));
                    }
                    checked += 1;
                    sat += tileable as usize;
                }
            }
        }
    }
    Ok(format!("{checked} instances ({sat} tileable), zero disagreements"))
}

fn all_patches(w: usize, h: usize) -> impl Iterator<Item = Patch> {
    (0u32..1 << (w * h)).map(move |v| Patch::new(w, h, (0..w * h).map(|i| (v >> i) & 1).collect()).unwrap())
}

fn rule_to_wang_equivalence() -> Verdict {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let mut rules = Vec::new();
    for m in 1..=2usize {
        let blocks: Vec<Vec<u32>> = (0u32..1 << (m * m))
            .map(|v| (0..m * m).map(|i| (v >> i) & 1).collect())
            .collect();
        rules.push(LocalRule::new(m, ab.clone(), vec![]).unwrap());
        for i in 0..blocks.len() {
            rules.push(LocalRule::new(m, ab.clone(), vec![blocks[i].clone()]).unwrap());
            for j in i + 1..blocks.len() {
                rules.push(LocalRule::new(m, ab.clone(), vec![blocks[i].clone(), blocks[j].clone()]).unwrap());
            }
        }
    }
    let mut patches = 0usize;
    for rule in &rules {
        let m = rule.window();
        let enc = rule_to_wang(rule).map_err(|e| e.to_string())?;
        for w in m..=4 {
            for h in m..=4 {
                let mut legal = 0usize;
                for p in all_patches(w, h) {
                    patches += 1;
                    let ok = check_local_rule(rule, &p).map_err(|e| e.to_string())?.is_empty();
                    let via_tiles = match enc.encode(&p) {
                        Some(t) => {
                            check_wang(&enc.tiles, &t).map_err(|e| e.to_string())?.is_empty()
                                && enc.decode(&t).as_ref() == Some(&p)
                        }
                        None => false,
                    };
                    if ok != via_tiles {
                        return Err(format!("rule {:?} patch {:?}: rule={ok} tiles={via_tiles}", rule.forbidden(), p));
                    }
                    legal += ok as usize;
                }
                // Every solver tiling decodes to a legal patch, one per patch.
                let (tw, th) = (w - m + 1, h - m + 1);
                if enc.tiles.is_empty() {
                    if legal != 0 {
                        return Err(format!("rule {:?}: no tiles but {legal} legal patches", rule.forbidden()));
                    }
                    continue;
                }
                let r = tile_region(&enc.tiles, tw, th, &BoundaryConstraint::none(), SolveOptions::enumerate(usize::MAX))
                    .map_err(|e| e.to_string())?;
                let decoded: BTreeSet<Vec<u32>> = r
                    .witnesses
                    .iter()
                    .filter_map(|t| enc.decode(t))
                    .filter(|p| check_local_rule(rule, p).is_ok_and(|v| v.is_empty()))
                    .map(|p| p.cells().to_vec())
                    .collect();
                if r.witnesses.len() != legal || decoded.len() != legal {
                    return Err(format!(
                        "rule {:?} {w}x{h}: {legal} legal patches, {} tilings, {} decode legally",
                        rule.forbidden(),
                        r.witnesses.len(),
                        decoded.len()
                    ));
                }
            }
        }
    }
    Ok(format!("{} rules, {patches} patches, exhaustive agreement", rules.len()))
}

fn random_instance(rng: &mut StdRng) -> (WangTileSet, usize, usize, BoundaryConstraint) {
    loop {
        let colors = rng.gen_range(2..=3u32);
        let ntiles = rng.gen_range(2..=5usize);
        let w = rng.gen_range(1..=4usize);
        let h = rng.gen_range(1..=4usize);
        if w * h * ntiles > CNF_MAX_VARS {
            continue;
        }
        let tiles: Vec<WangTile> = (0..ntiles)
            .map(|_| {
                WangTile::new(
                    rng.gen_range(0..colors),
                    rng.gen_range(0..colors),
                    rng.gen_range(0..colors),
                    rng.gen_range(0..colors),
                )
            })
            .collect();
        let Ok(set) = WangTileSet::new(colors, tiles) else {
            continue;
        };
        let bc = match rng.gen_range(0..3) {
            0 => BoundaryConstraint::none(),
            1 => BoundaryConstraint::uniform_sides(w, h, rng.gen_range(0..colors)),
            _ => BoundaryConstraint {
                fixed: vec![FixedCell {
                    x: rng.gen_range(0..w),
                    y: rng.gen_range(0..h),
                    tile: rng.gen_range(0..set.len()),
                }],
                ..BoundaryConstraint::none()
            },
        };
        return (set, w, h, bc);
    }
}

fn solver_cnf_agreement() -> Verdict {
    let mut rng = StdRng::seed_from_u64(CNF_SEED);
    let (mut sat, mut unsat) = (0usize, 0usize);
    for i in 0..CNF_INSTANCES {
        let (set, w, h, bc) = random_instance(&mut rng);
        let cnf = export_cnf(&set, w, h, &bc).map_err(|e| e.to_string())?;
        let brute = cnf.brute_force_count().map_err(|e| e.to_string())?;
        let r = tile_region(&set, w, h, &bc, SolveOptions::enumerate(usize::MAX)).map_err(|e| e.to_string())?;
        let solver_sat = r.status == SolveStatus::Sat;
        if solver_sat != (brute > 0) || r.witnesses.len() as u64 != brute {
            return Err(format!(
                "instance {i} ({w}x{h}, {} tiles): solver {:?} with {} tilings, brute force {brute} models",
                set.len(),
                r.status,
                r.witnesses.len()
            ));
        }
        if solver_sat {
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    let msg = format!("{CNF_INSTANCES} instances, {sat} SAT / {unsat} UNSAT, verdicts and model counts agree");
    if sat > 0 && unsat > 0 {
        Ok(msg)
    } else {
        Err(format!("instance mix not mixed: {msg}"))
    }
}

fn schedule_ledger() -> Verdict {
    let mut failing = Vec::new();
    for c in 2..=16u32 {
        let s = ZoomSchedule::paper(c).unwrap();
        let rep = validate_schedule(&s, 6, Margins::default());
        for row in rep.failures() {
            failing.push(format!("C={c} k={} {:?}", row.k, row.check));
        }
    }
    let mut identity_ok = true;
    for c in 1..=16u32 {
        let s = ZoomSchedule::paper(c).unwrap();
        for k in 0..=8 {
            let lhs = s.zoom(k).unwrap();
            let rhs = (BigUint::from(1u8) << c) * s.side(k).unwrap();
            identity_ok &= lhs == rhs;
        }
    }
    let msg = format!(
        "identity N(k) = 2^C L(k) for k <= 8: {}; {} failing inequality rows{}",
        if identity_ok { "holds" } else { "BROKEN" },
        failing.len(),
        failing.first().map(|f| format!(", first {f}")).unwrap_or_default()
    );
    if identity_ok && failing.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden-mean completeness", golden_completeness),
        ("golden-mean soundness", golden_soundness),
        ("even-shift sandwich", even_shift_sandwich),
        ("local-to-global delegation", local_to_global_delegation),
        ("coverage", coverage),
        ("TM/tiling equivalence", tm_equivalence),
        ("rule_to_wang equivalence", rule_to_wang_equivalence),
        ("solver/CNF agreement", solver_cnf_agreement),
        ("schedule ledger", schedule_ledger),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match verdict {
            Ok(msg) => println!("criterion {id} PASS  {name}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id} FAIL  {name}: {msg} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
