use eightblocks::composability::solution_set;
use eightblocks::experiments::{octet_census, octet_census_raw, orbit_leader};
use eightblocks::variety::NUM_VARIETIES;
use eightblocks::{Instance, Symmetry, Variety};
use rand::{Rng, SeedableRng};

fn random_octet(rng: &mut impl Rng) -> Instance {
    let mut x = Instance::empty();
    for _ in 0..8 {
        x.add(Variety::from_index(rng.random_range(0..NUM_VARIETIES)), 1);
    }
    x
}

#[test]
fn census_entries_match_direct_evaluation() {
    let census = octet_census();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let group: Vec<Symmetry> = Symmetry::all().collect();
    for _ in 0..3000 {
        let x = random_octet(&mut rng);
        let entry = census.lookup(&x).unwrap();
        assert_eq!(usize::from(entry.solutions), solution_set(&x).len(), "{}", x.to_row_string());
        // the leader is the same for every image
        let s = &group[rng.random_range(0..group.len())];
        assert_eq!(orbit_leader(&x.permuted(s)), entry.orbit.leader);
    }
    // orbit sizes add up to the raw multiset count
    let sizes: u64 = census.entries.iter().map(|e| u64::from(e.orbit.size)).sum();
    assert_eq!(sizes, census.raw_total());
}

/// Full pass over all 38.6 million multisets; several minutes on one core.
#[test]
#[ignore]
fn raw_histogram_matches_orbit_histogram() {
    assert_eq!(octet_census_raw(), octet_census().histogram);
}
