use kdeck_core::collision::{check_r, hunt_collisions, verify_pair, HuntConfig, Outcome, PartitionScheme, SearchConfig};
use kdeck_core::corpus::paper_pairs;
use kdeck_core::{compute_deck, Symmetry};

#[test]
fn reports_do_not_depend_on_worker_count() {
    for (m, n) in [(2, 4), (3, 7), (4, 12)] {
        let lines: Vec<Vec<String>> = [1, 2, 8]
            .iter()
            .map(|&w| check_r(m, n, &SearchConfig::with_workers(w)).unwrap().summary_lines())
            .collect();
        assert_eq!(lines[0], lines[1], "R({m},{n})");
        assert_eq!(lines[0], lines[2], "R({m},{n})");
    }
}

#[test]
fn second_fingerprint_seed_gives_same_outcome() {
    for (m, n) in [(3, 6), (3, 7), (4, 11), (4, 12)] {
        let a = check_r(m, n, &SearchConfig::default()).unwrap();
        let cfg = SearchConfig { fingerprint_seed: 0x9e37_79b9_7f4a_7c15, ..SearchConfig::default() };
        let b = check_r(m, n, &cfg).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.stats.confirmed_groups, b.stats.confirmed_groups);
    }
}

#[test]
fn partitions_and_passes_agree() {
    let base = check_r(4, 12, &SearchConfig::default()).unwrap();
    for partition in [PartitionScheme::ByWeight, PartitionScheme::ByWeightAndPairCounts] {
        for passes in [1, 3] {
            let cfg = SearchConfig { partition, fingerprint_passes: passes, ..SearchConfig::default() };
            let r = check_r(4, 12, &cfg).unwrap();
            assert_eq!(r.outcome, base.outcome);
            assert_eq!(r.witness, base.witness);
        }
    }
}

#[test]
fn witnesses_stay_collisions_under_every_symmetry() {
    for (m, n) in [(2, 4), (3, 7), (4, 12), (5, 16)] {
        let r = check_r(m, n, &SearchConfig::default()).unwrap();
        assert_eq!(r.outcome, Outcome::Fails);
        let (a, b) = r.witness.unwrap();
        assert!(a < b);
        for g in Symmetry::ALL {
            assert!(verify_pair(&g.apply(&a), &g.apply(&b), m).unwrap().is_collision());
        }
    }
}

#[test]
fn hunt_recovers_the_length_54_pair() {
    let pairs = paper_pairs();
    let six = pairs.iter().find(|p| p.m == 6).unwrap();
    let seven = pairs.iter().find(|p| p.m == 7).unwrap();
    let cfg = HuntConfig { length_cap: 54, workers: 1 };
    let r = hunt_collisions((&six.a, &six.b), 7, &cfg).unwrap();
    assert_eq!(r.seed_level, 6);
    let target = if seven.a < seven.b { (seven.a.clone(), seven.b.clone()) } else { (seven.b.clone(), seven.a.clone()) };
    assert!(r.pairs.contains(&target));
    for (x, y) in &r.pairs {
        assert_eq!(compute_deck(x, 7).unwrap(), compute_deck(y, 7).unwrap());
    }
}
