use fdl_core::schedule::{survivor_counts, Segment};
use fdl_core::{
    autocorrelation, compare_pair, compute_series, minimal_period, pair_profile, schedule_survival,
    structure_profile, CorRelation, HoleSchedule, PairComparison, Word,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn word(q: u32, max_k: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..q, 1..=max_k).prop_map(move |s| Word::new(q, s).unwrap())
}

fn any_word() -> impl Strategy<Value = Word> {
    (2u32..=4).prop_flat_map(|q| word(q, 10))
}

proptest! {
    #[test]
    fn autocorrelation_bounds(w in any_word()) {
        let cor = autocorrelation(&w);
        let k = w.len();
        prop_assert!(cor.bit(k));
        prop_assert!(cor.value() >= num_bigint::BigUint::from(1u8) << (k - 1));
        prop_assert!(cor.value() < num_bigint::BigUint::from(1u8) << k);
    }

    #[test]
    fn period_extends_the_word(w in any_word()) {
        let p = minimal_period(&w);
        let s = w.symbols();
        prop_assert!((p..s.len()).all(|i| s[i] == s[i - p]));
        // No shorter period exists.
        for shorter in 1..p {
            prop_assert!((shorter..s.len()).any(|i| s[i] != s[i - shorter]));
        }
    }

    #[test]
    fn periods_are_multiples_of_the_minimal_one(w in word(2, 12)) {
        let p = minimal_period(&w);
        let s = w.symbols();
        let k = s.len();
        for other in p..=k {
            let periodic = (other..k).all(|i| s[i] == s[i - other]);
            if periodic && other + p <= k {
                prop_assert_eq!(other % p, 0, "{} has periods {} and {}", w, p, other);
            }
        }
    }

    #[test]
    fn binary_complement_keeps_autocorrelation(w in word(2, 14)) {
        prop_assert_eq!(autocorrelation(&w), autocorrelation(&w.complement()));
    }

    #[test]
    fn structure_indices_are_consistent(w in word(2, 14)) {
        let p = structure_profile(&w);
        if p.s > 0 {
            prop_assert!(p.primitive.contains(&p.s));
            prop_assert!(p.d.unwrap() <= p.s);
        } else {
            prop_assert!(p.primitive.is_empty());
            prop_assert_eq!(p.period, p.k);
        }
        for (&i, &b) in &p.bracket {
            prop_assert!(b >= i && (p.k - i).is_multiple_of(p.k - b));
        }
    }

    #[test]
    fn overlap_count_identity(w in any_word(), extra in 0usize..30) {
        let k = w.len();
        let horizon = 2 * k + extra;
        let s = compute_series(&w, horizon).unwrap();
        let q = BigInt::from(w.q());
        for n in k + 1..=horizon {
            prop_assert_eq!(s.first_returns(n), &(&q * s.first_hits(n - 1) - s.first_hits(n)));
            prop_assert_eq!(s.first_hits(n), &(&q * s.avoiding(n - 1) - s.avoiding(n)));
            prop_assert!(s.avoiding(n) >= &BigInt::from(0));
        }
    }

    #[test]
    fn pair_relation_is_antisymmetric(a in word(2, 9), b in word(2, 9)) {
        let ab = pair_profile(&a, &b).unwrap();
        let ba = pair_profile(&b, &a).unwrap();
        let flipped = match ab.relation {
            CorRelation::Equal => CorRelation::Equal,
            CorRelation::FirstDominates => CorRelation::SecondDominates,
            CorRelation::SecondDominates => CorRelation::FirstDominates,
        };
        prop_assert_eq!(ba.relation, flipped);
        prop_assert_eq!(ab.r, ba.r);
        if let Some(r) = ab.r {
            let dominant = if ab.relation == CorRelation::FirstDominates { &a } else { &b };
            prop_assert!(r >= 1 && r <= autocorrelation(dominant).s());
        }
    }

    #[test]
    fn larger_autocorrelation_loses_early_and_wins_late(a in word(2, 6), b in word(2, 6)) {
        match compare_pair(&a, &b, 512).unwrap() {
            PairComparison::Identical { .. } => {
                prop_assert_eq!(autocorrelation(&a), autocorrelation(&b));
            }
            PairComparison::Crossing(report) => {
                prop_assert!(report.certified);
                prop_assert_eq!(report.sign_changes, 1);
                prop_assert!(autocorrelation(&report.upper) > autocorrelation(&report.lower));
                let t = report.crossing - report.k();
                prop_assert_eq!(report.probability_crossing, Some(t));
            }
        }
    }

    #[test]
    fn constant_schedule_equals_static(w in word(2, 5), horizon in 10usize..40) {
        let eval = schedule_survival(&HoleSchedule::constant(&w, horizon)).unwrap();
        let stat = compute_series(&w, horizon.max(2 * w.len())).unwrap().survival_curve();
        prop_assert_eq!(&eval.scheduled_survival[..], &stat.values[..=horizon]);
    }

    #[test]
    fn any_schedule_survival_is_monotone(
        words in prop::collection::vec(word(2, 3).prop_filter("length 3", |w| w.len() == 3), 1..4),
        lens in prop::collection::vec(1usize..8, 4),
    ) {
        let mut segments = Vec::new();
        let mut start = 0;
        for (w, len) in words.iter().zip(&lens) {
            segments.push(Segment { start, end: start + len, word: w.clone() });
            start += len;
        }
        let schedule = HoleSchedule::from_segments(segments).unwrap();
        let counts = survivor_counts(&schedule).unwrap();
        let q = BigInt::from(2);
        for n in 1..counts.len() {
            prop_assert!(counts[n] <= &q * &counts[n - 1]);
        }
        let eval = schedule_survival(&schedule).unwrap();
        prop_assert!(eval.scheduled_survival.windows(2).all(|p| p[1] <= p[0]));
    }
}
