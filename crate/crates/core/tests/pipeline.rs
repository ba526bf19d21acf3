use proptest::prelude::*;

use tilelift::compiler::{compile, decode_flat, flat_boundary, CompileOptions, CompiledSystem};
use tilelift::grid::{check_wang, WangTile, WangTileSet};
use tilelift::hierarchy::{build_assembly, catching_level, check_assembly, Alignment, Assembly, ZoomSchedule};
use tilelift::solver::{export_cnf, tile_region, BoundaryConstraint, SolveOptions, SolveStatus};
use tilelift::subshift::{SubshiftSpec, Word};

fn small_flat() -> CompiledSystem {
    compile(
        &SubshiftSpec::GoldenMean,
        &ZoomSchedule::custom(vec![2, 2], Some(vec![0, 2])).unwrap(),
        1,
        CompileOptions {
            strict: false,
            flatten: Some(100_000),
        },
    )
    .unwrap()
}

#[test]
fn compiled_system_survives_json() {
    let cs = small_flat();
    let back = CompiledSystem::from_json(&cs.to_json()).unwrap();
    assert_eq!(back.top, cs.top);
    assert_eq!(back.schedule, cs.schedule);
    assert_eq!(back.flat.as_ref().map(|f| f.tiles.len()), cs.flat.as_ref().map(|f| f.tiles.len()));
}

#[test]
fn flat_tilings_hide_no_catchable_pair() {
    let cs = small_flat();
    let fs = cs.flat.as_ref().unwrap();
    let bc = flat_boundary(fs, 4, 4);
    let r = tile_region(&fs.tiles, 4, 4, &bc, SolveOptions::enumerate(64)).unwrap();
    assert_eq!(r.status, SolveStatus::Sat);
    let pair: Word = "11".parse().unwrap();
    for p in &r.witnesses {
        assert!(check_wang(&fs.tiles, p).unwrap().is_empty());
        let a = decode_flat(&cs, fs, p).unwrap();
        assert!(check_assembly(&a, &cs.spec, &cs.schedule).is_empty());
        let ground = Word::new((0..4).map(|x| a.ground_bit(x)).collect()).unwrap();
        // Accepted occurrences must be out of every level's reach.
        for lo in ground.occurrences(&pair) {
            assert_eq!(catching_level(&a.geometry, lo as i64, 2, 1, None), None, "{ground}");
        }
    }
}

#[test]
fn assembly_json_round_trip_keeps_verdict() {
    let s = ZoomSchedule::paper(1).unwrap();
    for word in ["0101", "0110"] {
        let a = build_assembly(&word.parse().unwrap(), 2, &s, &Alignment::zero(2)).unwrap();
        let b = Assembly::from_json(&a.to_json()).unwrap();
        let ra = check_assembly(&a, &SubshiftSpec::GoldenMean, &s);
        let rb = check_assembly(&b, &SubshiftSpec::GoldenMean, &s);
        assert_eq!(ra, rb);
    }
}

#[test]
fn forbidden_word_is_reported_at_its_catching_level() {
    let s = ZoomSchedule::paper(1).unwrap();
    let a = build_assembly(&"0110".parse().unwrap(), 2, &s, &Alignment::zero(2)).unwrap();
    let rep = check_assembly(&a, &SubshiftSpec::GoldenMean, &s);
    assert!(!rep.is_empty());
    assert!(rep.violations.iter().all(|v| v.constraint.to_string() == "C8"));
}

fn tile_set() -> impl Strategy<Value = WangTileSet> {
    prop::collection::vec((0..3u32, 0..3u32, 0..3u32, 0..3u32), 1..5).prop_filter_map("distinct", |ts| {
        WangTileSet::from_tiles(ts.into_iter().map(|(n, e, s, w)| WangTile::new(n, e, s, w))).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_witnesses_are_valid_and_match_cnf(set in tile_set(), w in 1..4usize, h in 1..4usize) {
        prop_assume!(w * h * set.len() <= 20);
        let bc = BoundaryConstraint::none();
        let r = tile_region(&set, w, h, &bc, SolveOptions::enumerate(usize::MAX)).unwrap();
        for p in &r.witnesses {
            prop_assert!(check_wang(&set, p).unwrap().is_empty());
        }
        let models = export_cnf(&set, w, h, &bc).unwrap().brute_force_count().unwrap();
        prop_assert_eq!(r.witnesses.len() as u64, models);
    }

    #[test]
    fn words_parse_back(bits in prop::collection::vec(0..2u8, 0..24)) {
        let w = Word::new(bits).unwrap();
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }
}
