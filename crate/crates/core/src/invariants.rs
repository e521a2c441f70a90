//! Verification suite over every word of a refinement.
//!
//! Each check is evaluated at every index it applies to and reported as an
//! [`Outcome`] with a count of evaluations, a count of failures and the first
//! counterexample. Checks marked non-gating are diagnostics: alternative
//! readings or restricted ranges reported next to the statement they
//! accompany, never in place of it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::crossing::equal_class_check;
use crate::error::{Error, Result};
use crate::par;
use crate::series::{compute_series, CountSeries};
use crate::word::{structure_profile, Autocorrelation, StructureProfile, Word};

pub const INITIAL_VALUES: &str = "initial values";
pub const PERIODICITY_CLOSURE: &str = "periodicity closure";
pub const PRIMITIVE_TAILS: &str = "primitive overlap tails";
pub const OVERLAP_DECOMPOSITION: &str = "overlap decomposition";
pub const PERIOD_ALTERNATION: &str = "period alternation";
pub const EARLY_RETURNS: &str = "first returns up to 2k";
pub const LATE_RETURNS_POSITIVE: &str = "first returns positive after 2k";
pub const HIT_LOWER_BOUND: &str = "hit lower bound";
pub const HIT_LOWER_BOUND_LITERAL: &str = "hit lower bound, s = 0 with repeated h(n-1)";
pub const OVERLAP_EXPANSION: &str = "hits from overlapping returns";
pub const RETURN_LOWER_BOUND: &str = "return lower bound";
pub const RETURN_UPPER_BOUND: &str = "return upper bound";
pub const RETURN_UPPER_BOUND_LATE: &str = "return upper bound, n >= 2k";
pub const RETURN_GROWTH: &str = "return growth";
pub const RETURN_GROWTH_LATE: &str = "return growth, n >= 3k + l";
pub const EQUAL_CLASSES: &str = "equal autocorrelation, equal hits";
pub const NORMALISATION: &str = "normalisation";
pub const SURVIVAL_TAIL: &str = "survival as hit tail";
pub const HIT_TAIL: &str = "hit as return tail";

/// Whether a check gates the suite, by name.
pub fn is_gating(name: &str) -> bool {
    !matches!(
        name,
        HIT_LOWER_BOUND_LITERAL | RETURN_UPPER_BOUND_LATE | RETURN_GROWTH_LATE
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: &'static str,
    pub gating: bool,
    pub checked: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Default)]
struct Tally {
    outcomes: Vec<Outcome>,
}

impl Tally {
    fn record(&mut self, name: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        let i = match self.outcomes.iter().position(|o| o.name == name) {
            Some(i) => i,
            None => {
                self.outcomes.push(Outcome {
                    name,
                    gating: is_gating(name),
                    checked: 0,
                    failures: 0,
                    counterexample: None,
                });
                self.outcomes.len() - 1
            }
        };
        let o = &mut self.outcomes[i];
        o.checked += 1;
        if !ok {
            o.failures += 1;
            if o.counterexample.is_none() {
                o.counterexample = Some(witness());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for o in other.outcomes {
            match self.outcomes.iter_mut().find(|m| m.name == o.name) {
                Some(m) => {
                    m.checked += o.checked;
                    m.failures += o.failures;
                    if m.counterexample.is_none() {
                        m.counterexample = o.counterexample;
                    }
                }
                None => self.outcomes.push(o),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub q: u32,
    pub max_k: usize,
    pub words: usize,
    pub outcomes: Vec<Outcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes
            .iter()
            .filter(|o| o.gating)
            .all(Outcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.gating && !o.passed())
    }
}

/// Runs every check on every word of length `1..=max_k` over `q` symbols,
/// with series up to `horizon_factor · k`.
pub fn run_suite(q: u32, max_k: usize, horizon_factor: usize) -> Result<SuiteReport> {
    if horizon_factor < 2 {
        return Err(Error::InvalidParameter(
            "horizon factor must be at least 2".into(),
        ));
    }
    let mut tally = Tally::default();
    let mut words = 0;
    for k in 1..=max_k {
        let all = Word::all(q, k)?;
        let horizon = horizon_factor * k;
        words += all.len();
        let parts = par::map(&all, |w| -> Result<Tally> {
            let mut t = Tally::default();
            check_word_into(&mut t, w, horizon)?;
            Ok(t)
        });
        for part in parts {
            tally.merge(part?);
        }
        check_equal_classes(&mut tally, &all, horizon);
    }
    Ok(SuiteReport {
        q,
        max_k,
        words,
        outcomes: tally.outcomes,
    })
}

/// All per-word checks for one word.
pub fn check_word(w: &Word, horizon: usize) -> Result<Vec<Outcome>> {
    let mut t = Tally::default();
    check_word_into(&mut t, w, horizon)?;
    Ok(t.outcomes)
}

fn check_word_into(t: &mut Tally, w: &Word, horizon: usize) -> Result<()> {
    let profile = structure_profile(w);
    check_structure(t, w, &profile);
    let series = compute_series(w, horizon.max(2 * w.len()))?;
    check_series(t, &series, &profile);
    Ok(())
}

fn check_structure(t: &mut Tally, w: &Word, p: &StructureProfile) {
    let k = p.k;
    let cor = &p.autocorrelation;
    for j in cor.ones().filter(|&j| j < k) {
        let step = k - j;
        for m in 1..=k / step {
            let idx = k - step * m;
            t.record(PERIODICITY_CLOSURE, cor.bit(idx) || idx == 0, || {
                format!("{w}: b_{j} = 1 but b_{idx} = 0")
            });
        }
    }

    for &i in p.primitive.iter().filter(|&&i| i != p.s) {
        let tail = p.tail_match[&i];
        t.record(PRIMITIVE_TAILS, i + tail < k - p.s, || {
            format!("{w}: i = {i}, T(i) = {tail}, k - s = {}", k - p.s)
        });
    }
    if p.s > 0 {
        t.record(
            PRIMITIVE_TAILS,
            p.primitive.contains(&p.s) && p.d <= Some(p.s),
            || format!("{w}: s = {} missing from I or below d", p.s),
        );
    }

    let overlaps: Vec<usize> = cor.ones().filter(|&i| i < k).collect();
    let mut union: Vec<usize> = p
        .s_class
        .iter()
        .chain(p.primitive.iter().filter(|&&i| i != p.s))
        .copied()
        .collect();
    union.sort_unstable();
    union.dedup();
    t.record(OVERLAP_DECOMPOSITION, union == overlaps, || {
        format!("{w}: overlaps {overlaps:?}, S ∪ (I \\ {{s}}) = {union:?}")
    });

    if p.s + 1 != k && k > 1 {
        let per = k - p.s;
        let multiples: Vec<usize> = (1..).map(|m| m * per).take_while(|&x| x < k).collect();
        let clear = |shift: usize| {
            multiples
                .iter()
                .filter(|&&x| x > shift)
                .all(|&x| !cor.bit(x - shift))
        };
        t.record(PERIOD_ALTERNATION, clear(0) || clear(1), || {
            format!("{w}: both b_(t·{per}) and b_(t·{per}-1) have a one")
        });
    }
}

fn check_series(t: &mut Tally, series: &CountSeries, p: &StructureProfile) {
    let w = series.word();
    let k = p.k;
    let horizon = series.horizon();
    let q = BigInt::from(series.q());
    let qm1 = &q - 1;
    let h = series.first_hit_counts();
    let big_h = series.first_return_counts();
    let a = series.avoiding_counts();
    let powers: Vec<BigInt> = (0..=horizon).map(|n| Pow::pow(&q, n)).collect();

    let initial = (0..k).all(|n| a[n] == powers[n] && h[n].is_zero() && big_h[n].is_zero())
        && a[k] == &powers[k] - 1
        && h[k].is_one()
        && big_h[k] == -BigInt::one();
    t.record(INITIAL_VALUES, initial, || format!("{w}: seeds differ"));

    early_returns(t, w, p, big_h);
    for n in 2 * k + 1..=horizon {
        t.record(LATE_RETURNS_POSITIVE, big_h[n] > BigInt::zero(), || {
            format!("{w}: H({n}) = {}", big_h[n])
        });
    }

    for n in k..=horizon {
        let window = k - if p.s > 0 { p.s } else { 1 };
        let sum: BigInt = (1..=window.min(n)).map(|i| &h[n - i]).sum();
        t.record(HIT_LOWER_BOUND, h[n] >= &qm1 * &sum, || {
            format!("{w}: h({n}) = {} < (q-1)·{sum}", h[n])
        });
        if p.s == 0 {
            let literal = &qm1 * BigInt::from(k - 1) * &h[n - 1];
            t.record(HIT_LOWER_BOUND_LITERAL, h[n] >= literal, || {
                format!("{w}: h({n}) = {} < {literal}", h[n])
            });
        }
    }

    for n in k..=horizon.saturating_sub(k) {
        let rhs: BigInt = (1..=k)
            .filter(|&i| p.autocorrelation.bit(i))
            .map(|i| &big_h[n + i])
            .sum();
        t.record(OVERLAP_EXPANSION, h[n] == rhs, || {
            format!("{w}: h({n}) = {} but overlap sum is {rhs}", h[n])
        });
    }

    for n in k + 2..=horizon {
        let lower = &qm1 * &h[n - k - 1];
        t.record(RETURN_LOWER_BOUND, lower <= big_h[n], || {
            format!("{w}: H({n}) = {} < {lower}", big_h[n])
        });
        let upper_ok = big_h[n] <= h[n - k];
        t.record(RETURN_UPPER_BOUND, upper_ok, || {
            format!("{w}: H({n}) = {} > h({}) = {}", big_h[n], n - k, h[n - k])
        });
        if n >= 2 * k {
            t.record(RETURN_UPPER_BOUND_LATE, upper_ok, || {
                format!("{w}: H({n}) = {} > h({}) = {}", big_h[n], n - k, h[n - k])
            });
        }
    }

    if p.s > 0 {
        for l in growth_lags(k) {
            for n in 2 * k + l..=horizon {
                let sum: BigInt = (1..=l).map(|i| &big_h[n - i]).sum();
                let ok = big_h[n] >= &qm1 * &sum;
                t.record(RETURN_GROWTH, ok, || {
                    format!("{w}: l = {l}, H({n}) = {} < (q-1)·{sum}", big_h[n])
                });
                if n >= 3 * k + l {
                    t.record(RETURN_GROWTH_LATE, ok, || {
                        format!("{w}: l = {l}, H({n}) = {} < (q-1)·{sum}", big_h[n])
                    });
                }
            }
        }
    }

    // acc(n) = Σ_{m ≤ n} h(m) q^(n-m); survival is 1 - acc/q^n.
    let mut acc = BigInt::zero();
    for n in k..=horizon {
        acc = &acc * &q + &h[n];
        t.record(NORMALISATION, &acc + &a[n] == powers[n], || {
            format!("{w}: at n = {n}, cumulative hits + survivors != q^n")
        });
    }

    // Truncated tails at T = horizon, swept downward.
    let top = horizon;
    let mut hit_tail = BigInt::zero();
    let mut return_tail = BigInt::zero();
    for n in (0..top).rev() {
        hit_tail += &h[n + 1] * &powers[top - n - 1];
        t.record(
            SURVIVAL_TAIL,
            &hit_tail + &a[top] == &a[n] * &powers[top - n],
            || format!("{w}: survival tail differs at n = {n}"),
        );
        if n >= k {
            return_tail += &big_h[n + 1] * &powers[top - n - 1];
            let exact = &return_tail + &h[top] == &h[n] * &powers[top - n];
            // The remainder h(T)/q^T is bounded by the survival a(T-1)/q^(T-1).
            let bounded = h[top] <= (&q * &a[top - 1]);
            t.record(HIT_TAIL, exact && bounded, || {
                format!("{w}: return tail differs at n = {n}")
            });
        }
    }
}

fn early_returns(t: &mut Tally, w: &Word, p: &StructureProfile, big_h: &[BigInt]) {
    let k = p.k;
    let cor = &p.autocorrelation;
    t.record(EARLY_RETURNS, big_h[k] == -BigInt::one(), || {
        format!("{w}: H(k) != -1")
    });
    for n in k + 1..2 * k {
        let expected = i32::from(p.primitive.contains(&(2 * k - n)));
        t.record(EARLY_RETURNS, big_h[n] == BigInt::from(expected), || {
            format!("{w}: H({n}) = {}, expected {expected}", big_h[n])
        });
    }
    // H(2k) vanishes exactly when some 1 ≤ i < k has b_i = b_(k-i) = 1, which
    // for s > 0 is the statement (k - s) | k.
    let paired = (1..k).any(|i| cor.bit(i) && cor.bit(k - i));
    let divides = p.s > 0 && k.is_multiple_of(k - p.s);
    let expected = BigInt::from(i32::from(!paired));
    t.record(
        EARLY_RETURNS,
        big_h[2 * k] == expected && paired == divides,
        || {
            format!(
                "{w}: H(2k) = {}, paired overlaps {paired}, (k-s) | k {divides}",
                big_h[2 * k]
            )
        },
    );
}

/// `l ∈ {1, k/2, k-1}`, deduplicated, for `k ≥ 2`.
pub fn growth_lags(k: usize) -> Vec<usize> {
    let mut lags: Vec<usize> = [1, k / 2, k.saturating_sub(1)]
        .into_iter()
        .filter(|&l| l >= 1 && l < k)
        .collect();
    lags.sort_unstable();
    lags.dedup();
    lags
}

fn check_equal_classes(t: &mut Tally, words: &[Word], horizon: usize) {
    let mut groups: BTreeMap<Autocorrelation, Vec<&Word>> = BTreeMap::new();
    for w in words {
        groups
            .entry(crate::word::autocorrelation(w))
            .or_default()
            .push(w);
    }
    for members in groups.values() {
        let first = members[0];
        for other in &members[1..] {
            let same = equal_class_check(first, other, horizon.max(2 * first.len()));
            t.record(EQUAL_CLASSES, same == Some(true), || {
                format!("{first} and {other} share an autocorrelation but not their hits")
            });
        }
    }
}
