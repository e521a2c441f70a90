use fdl_core::{
    bound_check, compare_pair, correlation_classes, interval_partition, tower_rank,
    CorrelationClass, PairComparison,
};

fn binary_classes(max_k: usize) -> Vec<CorrelationClass> {
    (2..=max_k)
        .flat_map(|k| correlation_classes(2, k).unwrap())
        .collect()
}

#[test]
fn every_binary_class_pair_crosses_once() {
    let classes = binary_classes(8);
    let mut pairs = 0;
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            let report = match compare_pair(&a.representative, &b.representative, 1024).unwrap() {
                PairComparison::Crossing(r) => r,
                PairComparison::Identical { .. } => {
                    panic!("{} vs {}", a.representative, b.representative)
                }
            };
            assert!(report.certified, "{} vs {}", report.upper, report.lower);
            assert_eq!(
                report.sign_changes, 1,
                "{} vs {}",
                report.upper, report.lower
            );
            assert!(
                bound_check(&report),
                "{} vs {}: N = {}",
                report.upper,
                report.lower,
                report.crossing
            );
            pairs += 1;
        }
    }
    assert_eq!(pairs, 1035);
}

#[test]
fn equal_shift_pairs_stay_non_positive_before_4k() {
    for k in 2..=7 {
        let classes = correlation_classes(2, k).unwrap();
        for (i, a) in classes.iter().enumerate() {
            for b in classes[i + 1..].iter().filter(|b| b.s() == a.s()) {
                if let PairComparison::Crossing(r) =
                    compare_pair(&a.representative, &b.representative, 1024).unwrap()
                {
                    assert!(r.crossing >= 4 * k, "{} vs {}", r.upper, r.lower);
                }
            }
        }
    }
}

#[test]
fn partition_rows() {
    let expected = [
        (2, 7, 7),
        (3, 12, 13),
        (4, 20, 26),
        (5, 37, 52),
        (6, 70, 103),
    ];
    for (k, first, last) in expected {
        let p = interval_partition(2, k, None).unwrap();
        assert_eq!(
            (p.first_crossing, p.last_crossing),
            (first, last),
            "k = {k}"
        );
        assert!(p.all_certified());
        assert!(p.hierarchy_reversed());
        assert!(p.split_moment <= p.first_crossing);
        assert_eq!(p.split_moment, k + 1);
    }
}

#[test]
fn ternary_partition_is_certified() {
    for k in 2..=4 {
        let p = interval_partition(3, k, None).unwrap();
        assert!(p.all_certified(), "k = {k}");
        assert!(p.first_crossing <= p.last_crossing);
    }
}

#[test]
fn towers_prefer_maximal_period() {
    for k in 2..=6 {
        let ranking = tower_rank(2, k, None).unwrap();
        assert!(!ranking.optimal.is_empty());
        assert!(ranking.optimal_has_max_period);
        for &i in &ranking.optimal {
            assert_eq!(ranking.classes[i].period(), k);
        }
        let constant = ranking.classes.iter().position(|c| c.s() == k - 1).unwrap();
        assert!(!ranking.optimal.contains(&constant));
    }
}
