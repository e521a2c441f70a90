//! Ground truth that shares no code with the recurrences.
//!
//! Three sources: exhaustive enumeration of all strings of a given length,
//! Monte Carlo over IID uniform symbol streams, and the itineraries of the
//! classic piecewise-expanding maps (doubling, tent, von Neumann–Ulam and
//! baker) computed with exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par;
use crate::series::Curve;
use crate::word::Word;

const ENUMERATION_CAP: u64 = 1 << 24;

/// Counts for strings of one length `n`, by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteCounts {
    pub word: Word,
    pub n: usize,
    /// Strings with no occurrence of the word.
    pub avoiding: BigInt,
    /// Strings whose only occurrence is the final `k` symbols.
    pub first_hits: BigInt,
    /// Strings that begin and end with the word and contain no other
    /// occurrence. At `n = k` this counts the word itself once.
    pub first_returns: BigInt,
    /// Strings with at least one occurrence.
    pub containing: BigInt,
}

pub fn brute_counts(w: &Word, n: usize) -> Result<BruteCounts> {
    let q = w.q() as u64;
    let k = w.len();
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= ENUMERATION_CAP)
        .ok_or_else(|| Error::TooLarge {
            what: "enumeration",
            detail: format!("{q}^{n} strings"),
        })?;
    let mut counts = BruteCounts {
        word: w.clone(),
        n,
        avoiding: BigInt::zero(),
        first_hits: BigInt::zero(),
        first_returns: BigInt::zero(),
        containing: BigInt::zero(),
    };
    if n < k {
        counts.avoiding = BigInt::from(total);
        return Ok(counts);
    }
    let target = w.as_code().expect("k <= n keeps the code small");
    let window = q.pow(k as u32);
    let (mut avoiding, mut hits, mut returns) = (0u64, 0u64, 0u64);
    let mut digits = vec![0u64; n];
    for _ in 0..total {
        let mut code = 0u64;
        let mut first = None;
        let mut occurrences = 0usize;
        let mut last = None;
        for (j, &d) in digits.iter().enumerate() {
            code = (code * q + d) % window;
            if j + 1 >= k && code == target {
                let start = j + 1 - k;
                first.get_or_insert(start);
                last = Some(start);
                occurrences += 1;
            }
        }
        match (first, last) {
            (None, _) => avoiding += 1,
            (Some(f), Some(l)) => {
                if f == n - k {
                    hits += 1;
                }
                if f == 0 && l == n - k && occurrences <= 2 {
                    returns += 1;
                }
            }
            _ => unreachable!(),
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    counts.avoiding = BigInt::from(avoiding);
    counts.first_hits = BigInt::from(hits);
    counts.first_returns = BigInt::from(returns);
    counts.containing = BigInt::from(total - avoiding);
    Ok(counts)
}

pub const GENERATOR: &str = "ChaCha8Rng";
const BATCH: u64 = 1 << 14;

/// First-hit histogram over independent symbol streams. Bin `t` counts
/// streams whose first occurrence of the word starts at position `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalHits {
    pub word: Word,
    pub trials: u64,
    /// Number of window start positions examined per stream.
    pub horizon: usize,
    pub seed: u64,
    pub generator: &'static str,
    pub histogram: Vec<u64>,
    pub censored: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinCheck {
    pub t: usize,
    pub observed: u64,
    pub expected: f64,
    pub sigma: f64,
    pub within: bool,
}

impl EmpiricalHits {
    /// Compares every bin whose expected count is at least `min_expected`
    /// with the exact hitting curve, allowing `sigmas` binomial standard
    /// deviations.
    pub fn compare(&self, exact: &Curve, min_expected: f64, sigmas: f64) -> Vec<BinCheck> {
        let n = self.trials as f64;
        self.histogram
            .iter()
            .enumerate()
            .filter_map(|(t, &observed)| {
                let p = exact.get(t)?.to_f64();
                let expected = n * p;
                if expected < min_expected {
                    return None;
                }
                let sigma = (n * p * (1.0 - p)).sqrt();
                let within = (observed as f64 - expected).abs() <= sigmas * sigma;
                Some(BinCheck {
                    t,
                    observed,
                    expected,
                    sigma,
                    within,
                })
            })
            .collect()
    }
}

/// IID uniform symbols from [`GENERATOR`]. Batches of trials are seeded with
/// `seed + batch index`, so the result does not depend on thread count.
pub fn monte_carlo_hits(w: &Word, trials: u64, horizon: usize, seed: u64) -> Result<EmpiricalHits> {
    let q = w.q();
    run_trials(w, trials, horizon, seed, move |rng, _| {
        rng.random_range(0..q)
    })
}

/// Same histogram, with symbols read off the itinerary of a random initial
/// point of `kernel`.
pub fn monte_carlo_kernel_hits(
    kernel: MapKernel,
    w: &Word,
    trials: u64,
    horizon: usize,
    seed: u64,
) -> Result<EmpiricalHits> {
    if kernel.q() != w.q() {
        return Err(Error::MismatchedAlphabet {
            left: kernel.q(),
            right: w.q(),
        });
    }
    let q = kernel.q();
    run_trials(w, trials, horizon, seed, move |rng, prev| {
        kernel.code_next(rng.random_range(0..q), prev)
    })
}

fn run_trials<F>(w: &Word, trials: u64, horizon: usize, seed: u64, next: F) -> Result<EmpiricalHits>
where
    F: Fn(&mut ChaCha8Rng, &mut u32) -> u32 + Sync + Send,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let k = w.len();
    let symbols = w.symbols();
    let batches: Vec<u64> = (0..trials.div_ceil(BATCH)).collect();
    let partials = par::map(&batches, |&b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(b));
        let count = BATCH.min(trials - b * BATCH);
        let mut histogram = vec![0u64; horizon];
        let mut censored = 0u64;
        let mut window = std::collections::VecDeque::with_capacity(k);
        for _ in 0..count {
            window.clear();
            let mut prev = 0;
            let mut hit = None;
            for j in 0..horizon + k - 1 {
                if window.len() == k {
                    window.pop_front();
                }
                window.push_back(next(&mut rng, &mut prev));
                if window.len() == k && window.iter().eq(symbols) {
                    hit = Some(j + 1 - k);
                    break;
                }
            }
            match hit {
                Some(t) => histogram[t] += 1,
                None => censored += 1,
            }
        }
        (histogram, censored)
    });
    let mut histogram = vec![0u64; horizon];
    let mut censored = 0;
    for (h, c) in partials {
        for (acc, x) in histogram.iter_mut().zip(h) {
            *acc += x;
        }
        censored += c;
    }
    Ok(EmpiricalHits {
        word: w.clone(),
        trials,
        horizon,
        seed,
        generator: GENERATOR,
        histogram,
        censored,
    })
}

/// Maps with a Markov partition whose itinerary process is the fair `q`-sided
/// die.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKernel {
    /// `x -> q x mod 1`, partition `[i/q, (i+1)/q)`.
    Doubling { q: u32 },
    /// `x -> 1 - |1 - 2x|`, halves of the unit interval.
    Tent,
    /// `x -> 4 x (1 - x)`, halves of the unit interval.
    VonNeumannUlam,
    /// `(x, y) -> (q x mod 1, (y + ⌊q x⌋) / q)`, vertical strips.
    Baker { q: u32 },
}

impl MapKernel {
    pub fn q(&self) -> u32 {
        match *self {
            MapKernel::Doubling { q } | MapKernel::Baker { q } => q,
            MapKernel::Tent | MapKernel::VonNeumannUlam => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MapKernel::Doubling { .. } => "doubling",
            MapKernel::Tent => "tent",
            MapKernel::VonNeumannUlam => "von-neumann-ulam",
            MapKernel::Baker { .. } => "baker",
        }
    }

    /// Itinerary of the point whose base-`q` expansion starts with `digits`
    /// (for the baker map, the expansion of `x`). Yields `digits.len() - 1`
    /// symbols, each determined by the digits alone.
    ///
    /// The von Neumann–Ulam map reads the digits as the tent-map coordinate
    /// `y` of the point `sin²(πy/2)`; the conjugacy preserves the partition.
    pub fn code_digits(&self, digits: &[u32]) -> Vec<u32> {
        let mut prev = 0;
        let len = digits.len().saturating_sub(1);
        digits[..len]
            .iter()
            .map(|&d| self.code_next(d, &mut prev))
            .collect()
    }

    /// Streaming form of [`code_digits`](Self::code_digits); `prev` starts
    /// at 0 and carries the previous digit.
    pub fn code_next(&self, digit: u32, prev: &mut u32) -> u32 {
        match self {
            MapKernel::Doubling { .. } | MapKernel::Baker { .. } => digit,
            MapKernel::Tent | MapKernel::VonNeumannUlam => {
                let symbol = digit ^ *prev;
                *prev = digit;
                symbol
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Initial {
    Point(BigRational),
    Plane(BigRational, BigRational),
    /// A uniformly random point drawn from [`GENERATOR`].
    Seed(u64),
}

/// Symbol sequence of an orbit with respect to the kernel's partition.
pub fn map_itinerary(kernel: MapKernel, initial: &Initial, steps: usize) -> Result<Vec<u32>> {
    let q = kernel.q();
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    match initial {
        Initial::Seed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let digits: Vec<u32> = (0..=steps).map(|_| rng.random_range(0..q)).collect();
            Ok(kernel.code_digits(&digits))
        }
        Initial::Point(x) => {
            let y = BigRational::zero();
            iterate(kernel, x.clone(), y, steps)
        }
        Initial::Plane(x, y) => iterate(kernel, x.clone(), y.clone(), steps),
    }
}

fn iterate(
    kernel: MapKernel,
    mut x: BigRational,
    mut y: BigRational,
    steps: usize,
) -> Result<Vec<u32>> {
    let unit = |v: &BigRational| v >= &BigRational::zero() && v <= &BigRational::one();
    if !unit(&x) || !unit(&y) {
        return Err(Error::InvalidParameter(format!(
            "initial point ({x}, {y}) lies outside the unit square"
        )));
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let qr = BigRational::from_integer(BigInt::from(kernel.q()));
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        match kernel {
            MapKernel::Doubling { q } | MapKernel::Baker { q } => {
                let scaled = &x * &qr;
                let digit = scaled.floor();
                let symbol = digit.to_integer().to_u32().unwrap_or(0).min(q - 1);
                x = scaled - &digit;
                if matches!(kernel, MapKernel::Baker { .. }) {
                    y = (y + &digit) / &qr;
                }
                out.push(symbol);
            }
            MapKernel::Tent => {
                let left = x < half;
                out.push(u32::from(!left));
                x = if left { &x * &two } else { &two - &x * &two };
            }
            MapKernel::VonNeumannUlam => {
                out.push(u32::from(x >= half));
                x = BigRational::from_integer(BigInt::from(4)) * &x * (&one - &x);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::compute_series;

    fn w(text: &str) -> Word {
        Word::parse(text, Some(2)).unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn fibonacci_avoiders() {
        let c = brute_counts(&w("11"), 4).unwrap();
        assert_eq!(c.avoiding, BigInt::from(8));
        assert_eq!(c.first_hits, BigInt::from(2));
        assert_eq!(c.first_returns, BigInt::from(0));
        assert_eq!(&c.avoiding + &c.containing, BigInt::from(16));
    }

    #[test]
    fn short_strings() {
        let c = brute_counts(&w("10"), 2).unwrap();
        assert_eq!(
            (c.avoiding, c.first_hits),
            (BigInt::from(3), BigInt::from(1))
        );
        let c = brute_counts(&w("1011"), 3).unwrap();
        assert_eq!(c.avoiding, BigInt::from(8));
        assert!(c.first_hits.is_zero() && c.first_returns.is_zero());
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(
            brute_counts(&w("11"), 25),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = monte_carlo_hits(&w("11"), 40_000, 30, 7).unwrap();
        let b = monte_carlo_hits(&w("11"), 40_000, 30, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.histogram.iter().sum::<u64>() + a.censored, a.trials);
        assert_eq!(a.generator, "ChaCha8Rng");
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(monte_carlo_hits(&w("11"), 0, 10, 1).is_err());
    }

    #[test]
    fn censoring_at_horizon_one() {
        let trials = 200_000u64;
        let e = monte_carlo_hits(&w("10"), trials, 1, 3).unwrap();
        let expected = trials as f64 * 0.75;
        let sigma = (trials as f64 * 0.75 * 0.25).sqrt();
        assert!((e.censored as f64 - expected).abs() <= 4.0 * sigma);
    }

    #[test]
    fn histogram_tracks_exact_curve() {
        let word = w("101");
        let e = monte_carlo_hits(&word, 100_000, 40, 11).unwrap();
        let exact = compute_series(&word, 60).unwrap().hit_curve();
        let checks = e.compare(&exact, 50.0, 4.0);
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.within), "{checks:?}");
    }

    #[test]
    fn named_orbits() {
        let doubling = map_itinerary(
            MapKernel::Doubling { q: 2 },
            &Initial::Point(ratio(1, 3)),
            8,
        )
        .unwrap();
        assert_eq!(doubling, [0, 1, 0, 1, 0, 1, 0, 1]);
        let tent = map_itinerary(MapKernel::Tent, &Initial::Point(ratio(2, 5)), 6).unwrap();
        assert_eq!(tent, [0, 1, 0, 1, 0, 1]);
        let baker = map_itinerary(
            MapKernel::Baker { q: 2 },
            &Initial::Plane(ratio(1, 3), ratio(5, 7)),
            6,
        )
        .unwrap();
        assert_eq!(baker, [0, 1, 0, 1, 0, 1]);
        let ulam =
            map_itinerary(MapKernel::VonNeumannUlam, &Initial::Point(ratio(3, 4)), 5).unwrap();
        assert_eq!(ulam, [1; 5]);
        let ternary = map_itinerary(
            MapKernel::Doubling { q: 3 },
            &Initial::Point(ratio(5, 8)),
            4,
        )
        .unwrap();
        assert_eq!(ternary, [1, 2, 1, 2]);
    }

    #[test]
    fn points_outside_unit_interval() {
        assert!(map_itinerary(MapKernel::Tent, &Initial::Point(ratio(3, 2)), 3).is_err());
    }

    // The digit coder must agree with exact iteration of the point the digits
    // describe.
    #[test]
    fn digit_coder_matches_rational_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let digits: Vec<u32> = (0..24).map(|_| rng.random_range(0..2)).collect();
            let mut x = BigRational::zero();
            let mut scale = BigRational::one();
            for &d in &digits {
                scale /= BigRational::from_integer(BigInt::from(2));
                x += &scale * BigRational::from_integer(BigInt::from(d));
            }
            // A non-terminating tail keeps every iterate off the partition
            // boundary.
            x += &scale / BigRational::from_integer(BigInt::from(3));
            let steps = digits.len() - 1;
            for kernel in [MapKernel::Doubling { q: 2 }, MapKernel::Tent] {
                let exact = map_itinerary(kernel, &Initial::Point(x.clone()), steps).unwrap();
                assert_eq!(exact, kernel.code_digits(&digits), "{}", kernel.name());
            }
        }
    }

    #[test]
    fn seeded_itinerary_repeats() {
        let a = map_itinerary(MapKernel::Tent, &Initial::Seed(9), 50).unwrap();
        assert_eq!(
            a,
            map_itinerary(MapKernel::Tent, &Initial::Seed(9), 50).unwrap()
        );
        assert_eq!(a.len(), 50);
    }

    #[test]
    fn kernel_alphabet_must_match() {
        let word = Word::parse("012", Some(3)).unwrap();
        assert!(monte_carlo_kernel_hits(MapKernel::Tent, &word, 10, 5, 0).is_err());
    }
}
