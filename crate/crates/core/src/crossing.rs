//! Single-crossing analysis of first hitting curves.
//!
//! For words `w`, `w'` with `cor(w) > cor(w')` (which forces `k ≥ k'`) let
//!
//! ```text
//! Δ(n) = h(n) - q^(k-k') · h'(n - k + k')
//! ```
//!
//! Dividing by `q^n` turns `Δ(n) > 0` into `P_w(t) > P_w'(t)` at probability
//! time `t = n - k`. The crossing point `N` is the smallest `n` with
//! `Δ(n) > 0`. A crossing is *certified* when `Δ(n) ≥ (q-1) Δ(n-1)` holds for
//! the `k` consecutive indices `N, …, N+k-1`; from there the growth
//! induction carries positivity to every later `n`.
//!
//! All indices in this module are string-length (`h`-index) units unless a
//! field name says otherwise.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::series::{compute_series, CountSeries};
use crate::word::{autocorrelation, Autocorrelation, Word};

/// Largest horizon the adaptive search in [`interval_partition`] will try.
pub const HORIZON_CAP: usize = 1 << 16;

/// Starting horizon for a refinement of order `k`: `max(12k, 2^(k+1))`.
pub fn default_horizon(k: usize) -> usize {
    let exp = (k + 1).min(16) as u32;
    (12 * k).max(1usize << exp)
}

/// Words of one length sharing an autocorrelation. By the equal
/// autocorrelation property they share every first hitting probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationClass {
    pub autocorrelation: Autocorrelation,
    /// Lexicographically smallest member.
    pub representative: Word,
    pub size: usize,
}

impl CorrelationClass {
    pub fn s(&self) -> usize {
        self.autocorrelation.s()
    }

    pub fn period(&self) -> usize {
        self.autocorrelation.len() - self.s()
    }
}

/// Groups all `q^k` words of length `k`, ordered by increasing
/// autocorrelation value.
pub fn correlation_classes(q: u32, k: usize) -> Result<Vec<CorrelationClass>> {
    let mut classes: Vec<CorrelationClass> = Vec::new();
    // Word::all is lexicographic, so the first member seen is the smallest.
    for w in Word::all(q, k)? {
        let cor = autocorrelation(&w);
        match classes.iter_mut().find(|c| c.autocorrelation == cor) {
            Some(class) => class.size += 1,
            None => classes.push(CorrelationClass {
                autocorrelation: cor,
                representative: w,
                size: 1,
            }),
        }
    }
    classes.sort_by(|a, b| a.autocorrelation.cmp(&b.autocorrelation));
    Ok(classes)
}

/// `Δ(n)` for an oriented pair, `n = 0..=horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSeries {
    pub upper: Word,
    pub lower: Word,
    /// `k - k'`.
    pub shift: usize,
    pub values: Vec<BigInt>,
}

impl DeltaSeries {
    /// `upper` must have the larger autocorrelation.
    pub fn from_series(upper: &CountSeries, lower: &CountSeries) -> Self {
        let shift = upper.k() - lower.k();
        let scale: BigInt = Pow::pow(BigInt::from(upper.q()), shift);
        let horizon = upper.horizon().min(lower.horizon() + shift);
        let values = (0..=horizon)
            .map(|n| {
                let own = upper.first_hits(n);
                if n < shift {
                    own.clone()
                } else {
                    own - &scale * lower.first_hits(n - shift)
                }
            })
            .collect();
        DeltaSeries {
            upper: upper.word().clone(),
            lower: lower.word().clone(),
            shift,
            values,
        }
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    /// Number of strict sign changes, zeros skipped.
    pub fn sign_changes(&self) -> usize {
        let mut changes = 0;
        let mut last = Ordering::Equal;
        for v in &self.values {
            let sign = v.cmp(&BigInt::zero());
            if sign != Ordering::Equal {
                if last != Ordering::Equal && sign != last {
                    changes += 1;
                }
                last = sign;
            }
        }
        changes
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingReport {
    /// Word with the larger autocorrelation: rarer early, likelier late.
    pub upper: Word,
    pub lower: Word,
    pub upper_s: usize,
    pub lower_s: usize,
    /// Last `n` with `Δ(m) = 0` for every `m ≤ n`.
    pub coincidence_end: usize,
    /// Smallest `n` with `Δ(n) > 0`.
    pub crossing: usize,
    /// `Δ(n) ≥ (q-1)Δ(n-1)` for `n = N..N+k`.
    pub certified: bool,
    /// `Δ(n) > 0` for every `n` from `N` to the horizon.
    pub positive_after: bool,
    pub sign_changes: usize,
    /// First probability time `t` with `P_upper(t) > P_lower(t)`, found by
    /// comparing the two hit curves directly. Equals `crossing - k`.
    pub probability_crossing: Option<usize>,
    pub horizon_used: usize,
}

impl CrossingReport {
    pub fn k(&self) -> usize {
        self.upper.len()
    }

    pub fn lower_k(&self) -> usize {
        self.lower.len()
    }
}

/// Outcome of comparing two words of the same alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairComparison {
    /// Equal autocorrelations; the series agree through `horizon`.
    Identical {
        horizon: usize,
    },
    Crossing(CrossingReport),
}

/// Crossing report from precomputed series. `upper` must have the strictly
/// larger autocorrelation.
pub fn compare_series(upper: &CountSeries, lower: &CountSeries) -> Result<CrossingReport> {
    if upper.q() != lower.q() {
        return Err(Error::MismatchedAlphabet {
            left: upper.q(),
            right: lower.q(),
        });
    }
    if upper.autocorrelation() <= lower.autocorrelation() {
        return Err(Error::InvalidParameter(format!(
            "cor({}) must exceed cor({})",
            upper.word(),
            lower.word()
        )));
    }
    let delta = DeltaSeries::from_series(upper, lower);
    let horizon = delta.horizon();
    let k = upper.k();
    let values = &delta.values;

    let first_difference = values.iter().position(|v| !v.is_zero());
    let crossing = values.iter().position(|v| v.is_positive());
    let Some(crossing) = crossing else {
        return Err(Error::HorizonExhausted { horizon });
    };
    if crossing + k > horizon {
        return Err(Error::HorizonExhausted { horizon });
    }
    let coincidence_end = first_difference.unwrap_or(crossing) - 1;

    let growth = BigInt::from(upper.q() - 1);
    let certified = (crossing..crossing + k).all(|n| values[n] >= &growth * &values[n - 1]);
    let positive_after = values[crossing..].iter().all(Signed::is_positive);

    let hit_upper = upper.hit_curve();
    let hit_lower = lower.hit_curve();
    let probability_crossing = hit_upper
        .iter()
        .find(|(t, p)| hit_lower.get(*t).is_some_and(|other| *p > other))
        .map(|(t, _)| t);

    Ok(CrossingReport {
        upper: upper.word().clone(),
        lower: lower.word().clone(),
        upper_s: upper.autocorrelation().s(),
        lower_s: lower.autocorrelation().s(),
        coincidence_end,
        crossing,
        certified,
        positive_after,
        sign_changes: delta.sign_changes(),
        probability_crossing,
        horizon_used: horizon,
    })
}

/// Compares two words over `horizon`, orienting the pair by autocorrelation.
/// Equal autocorrelations are routed to [`equal_class_check`]; a failure
/// there is reported as [`Error::InvariantFalsified`].
pub fn compare_pair(w: &Word, other: &Word, horizon: usize) -> Result<PairComparison> {
    if w.q() != other.q() {
        return Err(Error::MismatchedAlphabet {
            left: w.q(),
            right: other.q(),
        });
    }
    let (cw, co) = (autocorrelation(w), autocorrelation(other));
    let (upper, lower) = match cw.cmp(&co) {
        Ordering::Equal => {
            return match equal_class_check(w, other, horizon) {
                Some(true) => Ok(PairComparison::Identical {
                    horizon: horizon.max(2 * w.len()),
                }),
                _ => Err(Error::InvariantFalsified(format!(
                    "{w} and {other} share an autocorrelation but their first hitting counts differ"
                ))),
            };
        }
        Ordering::Greater => (w, other),
        Ordering::Less => (other, w),
    };
    let upper = compute_series(upper, horizon)?;
    let lower = compute_series(lower, horizon)?;
    compare_series(&upper, &lower).map(PairComparison::Crossing)
}

/// For two words of equal length and equal autocorrelation, whether their
/// `h` sequences agree through `horizon` (raised to `2k` if smaller).
/// `None` when the pair does not qualify.
pub fn equal_class_check(w: &Word, other: &Word, horizon: usize) -> Option<bool> {
    if w.q() != other.q() || w.len() != other.len() {
        return None;
    }
    if autocorrelation(w) != autocorrelation(other) {
        return None;
    }
    let horizon = horizon.max(2 * w.len());
    let a = compute_series(w, horizon).ok()?;
    let b = compute_series(other, horizon).ok()?;
    Some(a.first_hit_counts() == b.first_hit_counts())
}

/// Lower bounds on `N`: `4k` when lengths and `s` agree, `3k - s` when
/// lengths agree and `s > s'`, `k + 1` (strict) when `k > k'`.
pub fn bound_check(report: &CrossingReport) -> bool {
    let (k, k2) = (report.k(), report.lower_k());
    let (s, s2) = (report.upper_s, report.lower_s);
    if k > k2 {
        report.crossing > k + 1
    } else if s == s2 {
        report.crossing >= 4 * k
    } else {
        report.crossing + s >= 3 * k
    }
}

/// The three-regime timeline of a full refinement.
#[derive(Clone, Debug)]
pub struct IntervalPartition {
    pub q: u32,
    pub k: usize,
    pub classes: Vec<CorrelationClass>,
    /// One series per class, same order.
    pub series: Vec<CountSeries>,
    /// First `n` at which two classes differ.
    pub split_moment: usize,
    /// Min `N` over class pairs: end of the short times interval.
    pub first_crossing: usize,
    /// Max `N` over class pairs: end of the intermediate interval.
    pub last_crossing: usize,
    /// Indexed by `(lower, upper)` class index pairs with `lower < upper`,
    /// lexicographic order.
    pub pairs: Vec<(usize, usize)>,
    pub reports: Vec<CrossingReport>,
    pub horizon_used: usize,
}

impl IntervalPartition {
    pub fn short_len(&self) -> usize {
        self.first_crossing - self.split_moment
    }

    pub fn intermediate_len(&self) -> usize {
        self.last_crossing - self.first_crossing
    }

    pub fn all_certified(&self) -> bool {
        self.reports
            .iter()
            .all(|r| r.certified && r.positive_after && r.sign_changes <= 1)
    }

    /// Every pair strictly ordered just before the first crossing is
    /// strictly reversed at `last_crossing + k`.
    pub fn hierarchy_reversed(&self) -> bool {
        let before = self.first_crossing - 1;
        let after = self.last_crossing + self.k;
        if after > self.horizon_used {
            return false;
        }
        self.pairs.iter().all(|&(i, j)| {
            let early = self.series[j]
                .first_hits(before)
                .cmp(self.series[i].first_hits(before));
            let late = self.series[j]
                .first_hits(after)
                .cmp(self.series[i].first_hits(after));
            early == Ordering::Equal || late == early.reverse()
        })
    }
}

/// Compares every pair of correlation classes of the order-`k` refinement.
/// Starts at `horizon` (or [`default_horizon`]) and doubles on
/// [`Error::HorizonExhausted`] up to [`HORIZON_CAP`].
pub fn interval_partition(q: u32, k: usize, horizon: Option<usize>) -> Result<IntervalPartition> {
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(
            "a timeline partition needs k ≥ 2".into(),
        ));
    }
    let classes = correlation_classes(q, k)?;
    let mut horizon = horizon.unwrap_or_else(|| default_horizon(k)).max(2 * k);
    loop {
        match partition_at(q, k, &classes, horizon) {
            Err(Error::HorizonExhausted { .. }) if horizon < HORIZON_CAP => {
                horizon = (horizon * 2).min(HORIZON_CAP);
            }
            other => return other,
        }
    }
}

fn partition_at(
    q: u32,
    k: usize,
    classes: &[CorrelationClass],
    horizon: usize,
) -> Result<IntervalPartition> {
    let series = par::map(classes, |c| compute_series(&c.representative, horizon))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .flat_map(|i| (i + 1..classes.len()).map(move |j| (i, j)))
        .collect();
    let reports = par::map(&pairs, |&(i, j)| compare_series(&series[j], &series[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let split_moment = reports
        .iter()
        .map(|r| r.coincidence_end + 1)
        .min()
        .unwrap_or(0);
    let first_crossing = reports.iter().map(|r| r.crossing).min().unwrap_or(0);
    let last_crossing = reports.iter().map(|r| r.crossing).max().unwrap_or(0);
    Ok(IntervalPartition {
        q,
        k,
        classes: classes.to_vec(),
        series,
        split_moment,
        first_crossing,
        last_crossing,
        pairs,
        reports,
        horizon_used: horizon,
    })
}

/// `better` has uniformly smaller first-return tails than `worse` for every
/// `n > witness`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BetterThan {
    pub better: usize,
    pub worse: usize,
    pub witness: usize,
}

#[derive(Clone, Debug)]
pub struct TowerRanking {
    /// Classes sorted best first.
    pub classes: Vec<CorrelationClass>,
    /// Indices into `classes` of bases no other class beats.
    pub optimal: Vec<usize>,
    pub relations: Vec<BetterThan>,
    /// The optimal set equals the set of classes whose minimal period is
    /// the largest possible, `k`.
    pub optimal_has_max_period: bool,
    pub horizon_used: usize,
}

/// Ranks tower bases of the order-`k` refinement.
///
/// The return tail `Σ_{m>n} R(m)` is summed from the return curve up to the
/// horizon with the exact remainder `h(T)/q^T`, so `A` beats `B` once `A`'s
/// tail is strictly smaller at every index past the crossing of the pair.
pub fn tower_rank(q: u32, k: usize, horizon: Option<usize>) -> Result<TowerRanking> {
    let partition = interval_partition(q, k, horizon)?;
    let horizon = partition.horizon_used;
    let tails: Vec<Vec<BigInt>> = partition
        .series
        .iter()
        .map(|s| return_tails(s, horizon))
        .collect();

    let mut relations = Vec::with_capacity(partition.pairs.len());
    for (&(i, j), report) in partition.pairs.iter().zip(&partition.reports) {
        // j has the larger autocorrelation: from N on its hitting
        // probability, and therefore its return tail, is the larger one.
        let witness = report.crossing - 1;
        let holds = (witness + 1..=horizon).all(|n| tails[i][n] < tails[j][n]);
        if !holds {
            return Err(Error::InvariantFalsified(format!(
                "return tails of {} and {} do not separate after n = {witness}",
                partition.classes[i].representative, partition.classes[j].representative
            )));
        }
        relations.push(BetterThan {
            better: i,
            worse: j,
            witness,
        });
    }

    let n = partition.classes.len();
    let mut wins = vec![0usize; n];
    let mut beaten = vec![false; n];
    for r in &relations {
        wins[r.better] += 1;
        beaten[r.worse] = true;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        wins[b].cmp(&wins[a]).then_with(|| {
            partition.classes[a]
                .autocorrelation
                .cmp(&partition.classes[b].autocorrelation)
        })
    });
    let position = |old: usize| order.iter().position(|&o| o == old).expect("permutation");
    let classes: Vec<CorrelationClass> = order
        .iter()
        .map(|&i| partition.classes[i].clone())
        .collect();
    let relations = relations
        .into_iter()
        .map(|r| BetterThan {
            better: position(r.better),
            worse: position(r.worse),
            witness: r.witness,
        })
        .collect();
    let mut optimal: Vec<usize> = (0..n).filter(|&i| !beaten[i]).map(position).collect();
    optimal.sort_unstable();

    let max_period: Vec<usize> = (0..n).filter(|&i| classes[i].period() == k).collect();
    let optimal_has_max_period = optimal == max_period;

    Ok(TowerRanking {
        classes,
        optimal,
        relations,
        optimal_has_max_period,
        horizon_used: horizon,
    })
}

// q^T · Σ_{m>n} R(m) for n = 0..=T: the return curve summed to T plus the
// tail beyond it, which telescopes to h(T)/q^T.
fn return_tails(series: &CountSeries, horizon: usize) -> Vec<BigInt> {
    let q = BigInt::from(series.q());
    let k = series.k();
    let mut tails = vec![BigInt::zero(); horizon + 1];
    let mut acc = series.first_hits(horizon).clone();
    let mut weight = BigInt::from(1);
    tails[horizon] = acc.clone();
    for n in (k..horizon).rev() {
        // adds R(n+1) = H(n+1)/q^(n+1), scaled by q^T
        acc += series.first_returns(n + 1) * &weight;
        weight *= &q;
        tails[n] = acc.clone();
    }
    tails
}
