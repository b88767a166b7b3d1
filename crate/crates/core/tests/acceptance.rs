//! Exit gate: one line per criterion, `criterion N [TIER] PASS|FAIL ...`,
//! and a non-zero exit if any fails. Runs without the libtest harness so
//! the lines always reach the output. Every tier runs by default because
//! each finishes in well under a minute on one core. Tolerances are exact
//! throughout.

use std::time::Instant;

use eightblocks::composability::{
    f_score, hall_witness, is_composable_matching, is_composable_treecount, solution_mask_fast, solution_set,
    treecount_fast, universal_lower_bound,
};
use eightblocks::cube::{all_triples, CornerTriple};
use eightblocks::experiments::{
    infeasible_23, multiset_count, octet_census, orbit_leaders, parse_variety_set, row_scan, run_existence,
    run_max_infeasible, run_min_universal, small_example, universal_12,
};
use eightblocks::model::{
    build_existence_model, build_min_universal_model, check_assignment, Constraint, ConstraintKind, DomainMode, Model,
};
use eightblocks::search::{SearchOptions, Verdict};
use eightblocks::table::ConwayTable;
use eightblocks::variety::{mask_of, ALL_VARIETIES_MASK, NUM_VARIETIES};
use eightblocks::{Instance, Variety};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(i: usize, j: usize) -> Variety {
    Variety::from_coords(i, j).unwrap()
}

fn report(n: u32, tier: &str, what: &str, failures: &[String], start: Instant) -> bool {
    let secs = start.elapsed().as_secs_f64();
    if failures.is_empty() {
        println!("criterion {n} [{tier}] PASS {what} ({secs:.1} s)");
    } else {
        println!("criterion {n} [{tier}] FAIL {what} ({secs:.1} s): {}", failures.join("; "));
    }
    failures.is_empty()
}

fn expect(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn triple_set(t: Variety) -> Vec<CornerTriple> {
    let mut s = t.triples().to_vec();
    s.sort();
    s
}

fn parsed(list: &[&str]) -> Vec<CornerTriple> {
    let mut s: Vec<CornerTriple> = list.iter().map(|t| t.parse().unwrap()).collect();
    s.sort();
    s
}

fn criterion_01_variety_algebra() -> bool {
    let start = Instant::now();
    let mut f = Vec::new();
    expect(&mut f, Variety::all().count() == 30, || "variety count".into());
    expect(&mut f, all_triples().len() == 40, || "triple count".into());
    for a in Variety::all() {
        expect(&mut f, a.compatible_set().len() == 20, || format!("{a} has {} compatible", a.compatible_set().len()));
        expect(&mut f, a.incompatible_set().len() == 9, || {
            format!("{a} has {} incompatible", a.incompatible_set().len())
        });
        expect(&mut f, a.neighbors_by_swap().len() == 12, || format!("{a} swap neighbourhood"));
        expect(&mut f, a.neighbors_by_rotation().len() == 8, || format!("{a} rotation neighbourhood"));
        for b in Variety::all().filter(|&b| b != a) {
            let shared = (a.triple_mask() & b.triple_mask()).count_ones();
            expect(&mut f, shared == 0 || shared == 2, || format!("{a} and {b} share {shared}"));
        }
    }
    let table = ConwayTable::build();
    expect(&mut f, table.validate().is_ok(), || "table properties".into());
    for k in 1..=6 {
        for line in [table.row(k), table.column(k)] {
            let clique = line.iter().all(|a| line.iter().all(|b| a == b || !a.is_compatible(*b)));
            expect(&mut f, clique, || format!("line {k} not an incompatibility clique"));
        }
    }
    for a in Variety::all() {
        let (i, j) = a.coords();
        expect(&mut f, a.mirror() == v(j, i), || format!("mirror of {a}"));
    }
    let t12 = parsed(&["pqt", "psu", "pts", "puq", "qrt", "qur", "rst", "rus"]);
    let t21 = parsed(&["ptq", "pus", "pst", "pqu", "qtr", "qru", "rts", "rsu"]);
    expect(&mut f, triple_set(v(1, 2)) == t12, || "T(1,2) vector".into());
    expect(&mut f, triple_set(v(2, 1)) == t21, || "T(2,1) vector".into());
    report(1, "CORE", "variety algebra: 30 varieties, 40 triples, 20/9 split, shares in {0,2}, 12/8 neighbourhoods, table, triple vectors", &f, start)
}

fn criterion_02_reference_instances() -> bool {
    let start = Instant::now();
    let mut f = Vec::new();
    let e = small_example();
    expect(&mut f, is_composable_matching(&e, v(1, 2)) && is_composable_treecount(&e, v(1, 2)), || {
        "(1,2) from the nine-cube example".into()
    });
    expect(&mut f, !is_composable_matching(&e, v(2, 3)) && !is_composable_treecount(&e, v(2, 3)), || {
        "(2,3) from the nine-cube example".into()
    });
    let n = infeasible_23();
    expect(&mut f, n.size() == 23 && solution_set(&n).is_empty(), || "23-cube instance".into());
    let u = universal_12();
    expect(&mut f, u.size() == 12 && solution_set(&u).len() == 30, || "12-cube instance".into());
    expect(&mut f, universal_lower_bound().bound == 12, || "lower bound".into());
    let mut leaders = 0;
    for total in 0..=7 {
        for o in orbit_leaders(total) {
            leaders += 1;
            let x = o.leader;
            if solution_mask_fast(x.counts()) != 0 || !solution_set(&x).is_empty() {
                f.push(format!("{} composes something", x.to_row_string()));
            }
        }
    }
    report(2, "CORE", &format!("reference instances; all {leaders} orbits of size <= 7 infeasible"), &f, start)
}

fn agree(x: &Instance, f: &mut Vec<String>, witnesses: bool) {
    let fast = solution_mask_fast(x.counts());
    for t in Variety::all() {
        let m = is_composable_matching(x, t);
        if m != treecount_fast(x.counts(), t) || m != (fast & t.bit() != 0) {
            f.push(format!("{} target {t}", x.to_row_string()));
        }
        if witnesses && !m && hall_witness(x, t).is_none_or(|w| w.triples.len() <= w.adjacent_cube_count) {
            f.push(format!("bad Hall witness for {} target {t}", x.to_row_string()));
        }
        if f_score(x, t) >= 8 && !m {
            f.push(format!("f >= 8 but {} does not compose {t}", x.to_row_string()));
        }
    }
}

fn criterion_03_oracle_equivalence() -> bool {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut checked = 0u64;
    // (a) every support of at most three varieties, positive entries up to 8
    for k in 0..=3 {
        for support in (0..NUM_VARIETIES).combinations(k) {
            for entries in (0..k).map(|_| 1..=8u32).multi_cartesian_product() {
                let mut x = Instance::empty();
                for (&w, &e) in support.iter().zip(&entries) {
                    x.set(Variety::from_index(w), e);
                }
                agree(&x, &mut f, false);
                checked += 1;
            }
        }
    }
    // (b) seeded pseudo-random instances
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..100_000 {
        let mut x = Instance::empty();
        for _ in 0..rng.random_range(0..=12) {
            x.set(
                Variety::from_index(rng.random_range(0..NUM_VARIETIES)),
                rng.random_range(0..=if round % 2 == 0 { 3 } else { 8 }),
            );
        }
        agree(&x, &mut f, true);
    }
    f.truncate(5);
    report(
        3,
        "CORE",
        &format!("matching = tree count on all {checked} instances over <= 3 varieties and 100000 random ones"),
        &f,
        start,
    )
}

fn criterion_04_row_scan() -> bool {
    let start = Instant::now();
    let mut f = Vec::new();
    for r in 1..=6 {
        let s = row_scan(r).unwrap();
        expect(&mut f, s.scanned == 32_768, || format!("row {r} scanned {}", s.scanned));
        expect(&mut f, s.max_size == 23, || format!("row {r} max {}", s.max_size));
        for x in &s.maximizers {
            let mut entries: Vec<u32> = x.support().map(|w| x.get(w)).collect();
            entries.sort();
            expect(&mut f, entries == [1, 1, 7, 7, 7], || format!("row {r} maximizer {}", x.to_row_string()));
        }
        expect(&mut f, !s.infeasible_by_size.keys().any(|&k| k >= 24), || format!("row {r} infeasible at 24+"));
    }
    report(4, "CORE", "single-row scan: max infeasible 23, maximizers {7,7,7,1,1}, nothing at 24", &f, start)
}

fn criterion_05_eight_copies() -> bool {
    let start = Instant::now();
    let mut f = Vec::new();
    for c in Variety::all() {
        let x = Instance::copies(c, 8);
        for t in Variety::all() {
            expect(&mut f, is_composable_matching(&x, t) == (t == c), || format!("8 x {c} vs {t}"));
        }
        let model = build_existence_model(c.bit(), DomainMode::Paper);
        expect(&mut f, check_assignment(&model, &x).satisfied(), || format!("8 x {c} fails its existence model"));
    }
    report(5, "CORE", "eight copies of each variety generate exactly that variety (900 checks)", &f, start)
}

fn criterion_06_model_fidelity() -> bool {
    let start = Instant::now();
    let mut f = Vec::new();
    let hall: Vec<Model> = Variety::all()
        .map(|t| {
            let mut m = Model::new("hall", 8);
            for subset in 0..=255u8 {
                m.push(Constraint::HallRequired { target: t, subset });
            }
            m
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for round in 0..10_000 {
        let mut x = Instance::empty();
        for _ in 0..rng.random_range(0..=12) {
            x.set(
                Variety::from_index(rng.random_range(0..NUM_VARIETIES)),
                rng.random_range(0..=if round % 2 == 0 { 3 } else { 8 }),
            );
        }
        let t = Variety::from_index(rng.random_range(0..NUM_VARIETIES));
        if check_assignment(&hall[t.index()], &x).satisfied() != is_composable_matching(&x, t) {
            f.push(format!("{} target {t}", x.to_row_string()));
        }
    }
    let n = build_min_universal_model().count(ConstraintKind::HallRequired);
    expect(&mut f, n == 7680, || format!("{n} Hall rows"));
    f.truncate(5);
    report(6, "CORE", "Hall rows = matching on 10000 pairs; min-universal has 7680 Hall rows", &f, start)
}

fn criterion_07_min_universal() -> bool {
    let start = Instant::now();
    let mut f = Vec::new();
    let r = run_min_universal(&SearchOptions::default()).unwrap();
    match &r.verdict {
        Verdict::Optimal { instance, objective } => {
            expect(&mut f, *objective == 12, || format!("objective {objective}"));
            expect(&mut f, solution_set(instance).len() == 30, || "witness not universal".into());
        }
        other => f.push(format!("verdict {}", other.name())),
    }
    report(7, "EXTENDED", "min-universal OPTIMAL 12 with a universal witness", &f, start)
}

fn criterion_08_octet_census() -> bool {
    let start = Instant::now();
    let mut f = Vec::new();
    let c = octet_census();
    expect(&mut f, c.raw_total() == multiset_count(30, 8), || format!("raw total {}", c.raw_total()));
    expect(&mut f, c.max_solutions() == 6, || format!("max {}", c.max_solutions()));
    let hist: Vec<(usize, u64)> = c.histogram.iter().map(|r| (r.solutions, r.raw)).collect();
    let expected =
        [(0, 22_849_650), (1, 11_910_150), (2, 3_422_460), (3, 370_080), (4, 49_500), (5, 4_200), (6, 1_980)];
    expect(&mut f, hist == expected, || format!("histogram {hist:?}"));
    let e = c.example().unwrap();
    expect(&mut f, e.size() == 8 && solution_set(&e).len() == 6, || format!("example {}", e.to_row_string()));
    report(
        8,
        "EXTENDED",
        &format!("eight-cube census: max 6 over {} multisets, example {}", c.raw_total(), e.to_row_string()),
        &f,
        start,
    )
}

fn expect_unsat(
    n: u32,
    tier: &str,
    what: &str,
    r: eightblocks::Result<eightblocks::search::SearchResult>,
    start: Instant,
) -> bool {
    let mut f = Vec::new();
    match r {
        Ok(r) => match &r.verdict {
            Verdict::Unsat => {}
            Verdict::Sat(x) => f.push(format!("SAT witness {} (verified by both oracles)", x.to_row_string())),
            other => f.push(format!("verdict {}", other.name())),
        },
        Err(e) => f.push(e.to_string()),
    }
    report(n, tier, what, &f, start)
}

fn criterion_09_paper_mode_max_infeasible_24() -> bool {
    let start = Instant::now();
    let r = run_max_infeasible(24, DomainMode::Paper, &SearchOptions::default());
    expect_unsat(9, "LONG", "no infeasible instance of 24 cubes with entries <= 2: UNSAT", r, start)
}

fn criterion_10_row_existence() -> bool {
    let start = Instant::now();
    let row = parse_variety_set("row:1").unwrap();
    let r = run_existence(row, DomainMode::Paper, &SearchOptions::default());
    expect_unsat(10, "LONG", "no instance generates exactly one table row: UNSAT", r, start)
}

fn criterion_11_rigorous_max_infeasible_24() -> bool {
    let start = Instant::now();
    let r = run_max_infeasible(24, DomainMode::Rigorous, &SearchOptions::default());
    expect_unsat(11, "LONG", "no infeasible instance of 24 cubes with entries <= 7: UNSAT", r, start)
}

fn main() {
    // the set parser feeds criterion 10
    assert_eq!(parse_variety_set("row:1").unwrap(), mask_of((2..=6).map(|j| v(1, j))));
    assert_eq!(parse_variety_set("all").unwrap(), ALL_VARIETIES_MASK);

    let criteria: [fn() -> bool; 11] = [
        criterion_01_variety_algebra,
        criterion_02_reference_instances,
        criterion_03_oracle_equivalence,
        criterion_04_row_scan,
        criterion_05_eight_copies,
        criterion_06_model_fidelity,
        criterion_07_min_universal,
        criterion_08_octet_census,
        criterion_09_paper_mode_max_infeasible_24,
        criterion_10_row_existence,
        criterion_11_rigorous_max_infeasible_24,
    ];
    let mut failed = 0;
    for (k, c) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(c) {
            Ok(true) => {}
            Ok(false) => failed += 1,
            Err(_) => {
                println!("criterion {} FAIL panicked", k + 1);
                failed += 1;
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
