//! Search results against exhaustive enumeration on models small enough to
//! list every assignment.

use std::collections::BTreeSet;

use eightblocks::composability::solution_mask_fast;
use eightblocks::model::{
    build_existence_model, build_max_infeasible_model, check_assignment, Cmp, Constraint, DomainMode, Model,
};
use eightblocks::search::{enumerate_all, propagate, solve, CompiledModel, SearchOptions, SearchState, Verdict};
use eightblocks::variety::{iter_mask, mask_of, VarietyMask};
use eightblocks::{Instance, Symmetry, Variety};
use proptest::prelude::*;

fn v(i: usize, j: usize) -> Variety {
    Variety::from_coords(i, j).unwrap()
}

fn row(i: usize) -> VarietyMask {
    mask_of((1..=6).filter(|&j| j != i).map(|j| v(i, j)))
}

/// Every assignment inside the model's domains that satisfies it.
fn brute_force(model: &Model) -> Vec<Instance> {
    let free: Vec<Variety> = Variety::all().filter(|&x| model.domain(x).hi > model.domain(x).lo).collect();
    let mut x = Instance::from_counts(model.domains().map(|d| d.lo));
    let mut out = Vec::new();
    fn rec(model: &Model, free: &[Variety], x: &mut Instance, out: &mut Vec<Instance>) {
        match free.split_first() {
            None => {
                if check_assignment(model, x).satisfied() {
                    out.push(*x);
                }
            }
            Some((&v, rest)) => {
                for k in model.domain(v).lo..=model.domain(v).hi {
                    x.set(v, k);
                    rec(model, rest, x, out);
                }
            }
        }
    }
    rec(model, &free, &mut x, &mut out);
    out
}

fn orbit_minima(model: &Model, sols: &[Instance]) -> BTreeSet<Instance> {
    let group = model.symmetry_group();
    sols.iter().map(|x| group.iter().map(|s| x.permuted(s)).min().unwrap()).collect()
}

fn no_symmetry() -> SearchOptions {
    SearchOptions { symmetry: false, ..Default::default() }
}

#[test]
fn row_support_enumeration_at_23_and_24() {
    let mut m = build_max_infeasible_model(23, DomainMode::Rigorous);
    m.restrict_support(row(1));
    let found = enumerate_all(&m, &SearchOptions::default()).unwrap();
    assert!(found.complete);
    assert!(!found.instances.is_empty());
    for x in &found.instances {
        let mut entries: Vec<u32> = x.support().map(|v| x.get(v)).collect();
        entries.sort();
        assert_eq!(entries, vec![1, 1, 7, 7, 7]);
    }
    let n = Instance::from_matrix([[0, 7, 7, 7, 1, 1], [0; 6], [0; 6], [0; 6], [0; 6], [0; 6]]).unwrap();
    assert!(orbit_minima(&m, &[n]).is_subset(&found.instances.iter().copied().collect()));
    assert_eq!(found.instances.iter().copied().collect::<BTreeSet<_>>(), orbit_minima(&m, &brute_force(&m)));

    let mut m = build_max_infeasible_model(24, DomainMode::Rigorous);
    m.restrict_support(row(1));
    assert!(brute_force(&m).is_empty());
    let found = enumerate_all(&m, &SearchOptions::default()).unwrap();
    assert!(found.complete && found.instances.is_empty());
    assert_eq!(solve(&m, &SearchOptions::default()).unwrap().verdict, Verdict::Unsat);
}

#[test]
fn symmetry_keeps_one_member_per_orbit() {
    // sets of at most two varieties
    let mut m = Model::new("pairs", 1);
    m.push(Constraint::total(Cmp::Le, 2));
    let reps = enumerate_all(&m, &SearchOptions::default()).unwrap();
    let mut all = vec![Instance::empty()];
    for a in Variety::all() {
        all.push(Instance::copies(a, 1));
        for b in Variety::all().filter(|&b| b > a) {
            let mut x = Instance::copies(a, 1);
            x.set(b, 1);
            all.push(x);
        }
    }
    all.retain(|x| check_assignment(&m, x).satisfied());
    assert_eq!(all.len(), 1 + 30 + 435);
    let minima = orbit_minima(&m, &all);
    assert_eq!(reps.instances.len(), minima.len());
    assert_eq!(reps.instances.iter().copied().collect::<BTreeSet<_>>(), minima);
    let plain = enumerate_all(&m, &no_symmetry()).unwrap();
    assert_eq!(plain.instances.len(), all.len());
}

#[test]
fn identity_group_changes_nothing() {
    let mut m = build_max_infeasible_model(4, DomainMode::Paper);
    m.restrict_support(row(2) | row(3));
    let opts = SearchOptions { group: Some(vec![Symmetry::identity()]), ..Default::default() };
    let a = enumerate_all(&m, &opts).unwrap();
    let b = enumerate_all(&m, &no_symmetry()).unwrap();
    assert_eq!(a.instances, b.instances);
    assert_eq!(a.stats.nodes, b.stats.nodes);
}

#[test]
fn unsat_toy_model() {
    let mut m = Model::new("toy", 8);
    m.push(Constraint::Linear { terms: vec![(v(1, 2), 1)], cmp: Cmp::Ge, rhs: 9 });
    assert_eq!(solve(&m, &SearchOptions::default()).unwrap().verdict, Verdict::Unsat);
    assert!(enumerate_all(&m, &SearchOptions::default()).unwrap().instances.is_empty());
}

#[test]
fn existence_witnesses_have_exact_solution_sets() {
    let supports = [row(1), mask_of([v(1, 2), v(2, 1), v(3, 4), v(5, 6), v(6, 3)])];
    let required = [mask_of([v(1, 2)]), mask_of([v(1, 2), v(2, 1)]), mask_of([v(3, 4), v(5, 6)])];
    for support in supports {
        for want in required {
            let mut m = build_existence_model(want, DomainMode::Rigorous);
            m.restrict_support(support);
            for d in iter_mask(support & !want) {
                let dom = m.domain(d);
                m.set_domain(d, eightblocks::model::Domain::new(dom.lo, dom.hi.min(3)));
            }
            let expected = brute_force(&m);
            for opts in [SearchOptions::default(), no_symmetry()] {
                let r = solve(&m, &opts).unwrap();
                match &r.verdict {
                    Verdict::Sat(x) => assert_eq!(solution_mask_fast(x.counts()), want),
                    Verdict::Unsat => assert!(expected.is_empty()),
                    other => panic!("{other:?}"),
                }
                assert_eq!(r.verdict == Verdict::Unsat, expected.is_empty());
            }
        }
    }
}

#[test]
fn enumeration_matches_brute_force_on_random_supports() {
    use rand::seq::IteratorRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for round in 0..12 {
        let support = mask_of(Variety::all().choose_multiple(&mut rng, 5));
        let mut m = match round % 3 {
            0 => build_max_infeasible_model(6 + round as u32 % 5, DomainMode::Rigorous),
            1 => build_existence_model(mask_of(iter_mask(support).take(1)), DomainMode::Rigorous),
            _ => build_existence_model(0, DomainMode::Paper),
        };
        m.restrict_support(support);
        for d in Variety::all().filter(|x| support & x.bit() != 0) {
            let dom = m.domain(d);
            m.set_domain(d, eightblocks::model::Domain::new(dom.lo, dom.hi.min(4)));
        }
        let expected = brute_force(&m);
        let plain = enumerate_all(&m, &no_symmetry()).unwrap();
        assert_eq!(plain.instances.iter().copied().collect::<BTreeSet<_>>(), expected.iter().copied().collect());
        let reps = enumerate_all(&m, &SearchOptions::default()).unwrap();
        assert_eq!(reps.instances.iter().copied().collect::<BTreeSet<_>>(), orbit_minima(&m, &expected));
    }
}

#[test]
fn repeated_runs_are_identical() {
    let m = build_max_infeasible_model(11, DomainMode::Paper);
    let a = solve(&m, &SearchOptions::default()).unwrap();
    let b = solve(&m, &SearchOptions::default()).unwrap();
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.stats.nodes, b.stats.nodes);
    assert_eq!(a.stats.prunes, b.stats.prunes);
}

#[test]
fn split_search_agrees_with_sequential() {
    for size in [11, 14] {
        let m = build_max_infeasible_model(size, DomainMode::Paper);
        let seq = solve(&m, &SearchOptions::default()).unwrap();
        let par = solve(&m, &SearchOptions { jobs: 3, split_units: 40, ..Default::default() }).unwrap();
        assert_eq!(seq.verdict, par.verdict);
        assert!(par.stats.units >= 1);
    }
}

#[test]
fn checkpoint_resumes_finished_subtrees() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("progress.json");
    let m = build_max_infeasible_model(15, DomainMode::Paper);
    let opts = SearchOptions { checkpoint: Some(path.clone()), split_units: 20, ..Default::default() };
    let first = solve(&m, &opts).unwrap();
    assert_eq!(first.verdict, Verdict::Unsat);
    assert_eq!(first.stats.units_resumed, 0);
    let again = solve(&m, &opts).unwrap();
    assert_eq!(again.verdict, Verdict::Unsat);
    assert_eq!(again.stats.units_resumed, again.stats.units);
    // a different model refuses the file
    let other = build_max_infeasible_model(15, DomainMode::Rigorous);
    assert!(solve(&other, &opts).is_err());
}

#[test]
fn node_budget_gives_timeout() {
    let m = build_max_infeasible_model(24, DomainMode::Rigorous);
    let r = solve(&m, &SearchOptions { node_budget: Some(50), ..Default::default() }).unwrap();
    assert_eq!(r.verdict, Verdict::Timeout);
    assert!(r.stats.nodes <= 51);
}

fn small_model() -> impl Strategy<Value = (Model, SearchState)> {
    (0usize..3, 0u32..30, prop::collection::vec(0u32..30, 4), prop::collection::vec((0u32..3, 0u32..3), 4)).prop_map(
        |(kind, first, rest, bounds)| {
            let support: Vec<Variety> =
                std::iter::once(first).chain(rest).map(|i| Variety::from_index(i as usize)).collect();
            let mask = mask_of(support.iter().copied());
            let mut m = match kind {
                0 => build_max_infeasible_model(5, DomainMode::Rigorous),
                1 => build_existence_model(support[0].bit(), DomainMode::Rigorous),
                _ => build_existence_model(0, DomainMode::Paper),
            };
            m.restrict_support(mask);
            for d in iter_mask(mask) {
                let dom = m.domain(d);
                m.set_domain(d, eightblocks::model::Domain::new(dom.lo, dom.hi.min(3)));
            }
            let c = CompiledModel::new(&m);
            let mut s = SearchState::root(&c);
            for (d, (a, b)) in iter_mask(mask).zip(bounds) {
                let (lo, hi) = (a.min(b), a.max(b));
                s.lb[d.index()] = lo.min(s.ub[d.index()]);
                s.ub[d.index()] = hi.min(s.ub[d.index()]);
            }
            (m, s)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Propagation never removes a solution inside the box it starts from.
    #[test]
    fn propagation_keeps_every_solution((m, s) in small_model()) {
        let inside = |x: &Instance, s: &SearchState| Variety::all().all(|v| s.lb[v.index()] <= x.get(v) && x.get(v) <= s.ub[v.index()]);
        let sols: Vec<Instance> = brute_force(&m).into_iter().filter(|x| inside(x, &s)).collect();
        let c = CompiledModel::new(&m);
        let mut p = s;
        match propagate(&mut p, &c) {
            Err(_) => prop_assert!(sols.is_empty()),
            Ok(()) => {
                for x in &sols {
                    prop_assert!(inside(x, &p));
                }
            }
        }
    }
}
