use fdl_core::oracle::brute_counts;
use fdl_core::{compute_series, Word};
use num_bigint::BigInt;

fn sweep(q: u32, max_k: usize, max_n: usize) {
    for k in 1..=max_k {
        for w in Word::all(q, k).unwrap() {
            let series = compute_series(&w, max_n.max(2 * k)).unwrap();
            for n in 0..=max_n {
                let brute = brute_counts(&w, n).unwrap();
                assert_eq!(series.avoiding(n), &brute.avoiding, "a({n}) for {w}");
                assert_eq!(series.first_hits(n), &brute.first_hits, "h({n}) for {w}");
                // H(k) is -1 by convention; the enumeration counts w itself.
                if n != k {
                    assert_eq!(
                        series.first_returns(n),
                        &brute.first_returns,
                        "H({n}) for {w}"
                    );
                } else {
                    assert_eq!(brute.first_returns, BigInt::from(1));
                }
                let total = BigInt::from(q).pow(n as u32);
                assert_eq!(&brute.avoiding + &brute.containing, total);
            }
        }
    }
}

#[test]
fn binary_words_up_to_four() {
    sweep(2, 4, 16);
}

#[test]
fn ternary_words_up_to_three() {
    sweep(3, 3, 10);
}

#[test]
fn spot_checks_beyond_the_sweep() {
    for text in ["10100101", "0110110", "111000"] {
        let w = Word::parse(text, Some(2)).unwrap();
        let series = compute_series(&w, 20).unwrap();
        for n in [w.len() + 1, 2 * w.len(), 20] {
            let brute = brute_counts(&w, n).unwrap();
            assert_eq!(series.first_hits(n), &brute.first_hits, "{text} at {n}");
            assert_eq!(series.avoiding(n), &brute.avoiding, "{text} at {n}");
        }
    }
}
