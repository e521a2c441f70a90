//! Hole-switching escape schedules.
//!
//! A hole is opened in one element of the order-`k` refinement and moved to
//! another element whenever that element's first hitting curve overtakes the
//! current one. The greedy schedule realises this as a per-step argmax of the
//! exact hitting probabilities `P(t) = h(t+k)/q^(t+k)` over correlation class
//! representatives. Ties go to the class with the smaller autocorrelation, so
//! the schedule opens on a minimal-autocorrelation class and only switches
//! at a strict overtaking.
//!
//! Survival under a schedule is evaluated on the ensemble of trajectories that
//! have not yet escaped: patching a hole does not bring absorbed trajectories
//! back, and the survivors continue under the next hole.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::crossing::{compare_series, correlation_classes, CorrelationClass};
use crate::error::{Error, Result};
use crate::par;
use crate::series::{compute_series, CountSeries, ExactProbability};
use crate::word::Word;

/// The hole is `word` for probability times `start..end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub word: Word,
}

/// A switch at probability time `at` from one segment to the next, together
/// with the crossing time of the two hitting curves, when they cross.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Switch {
    pub at: usize,
    pub from: Word,
    pub to: Word,
    pub crossing_time: Option<usize>,
}

impl Switch {
    pub fn at_crossing(&self) -> bool {
        self.crossing_time == Some(self.at)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleSchedule {
    pub q: u32,
    pub k: usize,
    pub horizon: usize,
    pub segments: Vec<Segment>,
    pub switches: Vec<Switch>,
}

impl HoleSchedule {
    /// A single hole kept open on `[0, horizon)`.
    pub fn constant(word: &Word, horizon: usize) -> Self {
        HoleSchedule {
            q: word.q(),
            k: word.len(),
            horizon,
            segments: vec![Segment {
                start: 0,
                end: horizon,
                word: word.clone(),
            }],
            switches: Vec::new(),
        }
    }

    /// Builds a schedule from explicit segments; they must tile
    /// `[0, horizon)` with words of a common length and alphabet.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        let first = segments
            .first()
            .ok_or_else(|| Error::InvalidParameter("a schedule needs a segment".into()))?;
        let (q, k) = (first.word.q(), first.word.len());
        let mut cursor = 0;
        for seg in &segments {
            if seg.start != cursor || seg.end <= seg.start {
                return Err(Error::InvalidParameter(format!(
                    "segment [{}, {}) does not continue at {cursor}",
                    seg.start, seg.end
                )));
            }
            if seg.word.q() != q || seg.word.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "segment word {} differs in length or alphabet",
                    seg.word
                )));
            }
            cursor = seg.end;
        }
        Ok(HoleSchedule {
            q,
            k,
            horizon: cursor,
            segments,
            switches: Vec::new(),
        })
    }

    pub fn word_at(&self, t: usize) -> &Word {
        let i = self.segments.partition_point(|s| s.end <= t);
        &self.segments[i.min(self.segments.len() - 1)].word
    }
}

/// Greedy hole switching over probability times `0..horizon`.
pub fn greedy_schedule(q: u32, k: usize, horizon: usize) -> Result<HoleSchedule> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be positive".into()));
    }
    let classes = correlation_classes(q, k)?;
    // Room for every switch's crossing certificate as well as the argmax.
    let series_horizon = horizon + 2 * k;
    let series = par::map(&classes, |c| {
        compute_series(&c.representative, series_horizon)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut choice = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let mut best = 0;
        for c in 1..classes.len() {
            // classes ascend by autocorrelation; strict > keeps the smaller on ties
            if series[c].first_hits(t + k) > series[best].first_hits(t + k) {
                best = c;
            }
        }
        choice.push(best);
    }

    let mut segments: Vec<Segment> = Vec::new();
    let mut owners: Vec<usize> = Vec::new();
    for (t, &c) in choice.iter().enumerate() {
        match owners.last() {
            Some(&last) if last == c => segments.last_mut().expect("segment").end = t + 1,
            _ => {
                segments.push(Segment {
                    start: t,
                    end: t + 1,
                    word: classes[c].representative.clone(),
                });
                owners.push(c);
            }
        }
    }

    let switches = owners
        .windows(2)
        .zip(segments.iter().skip(1))
        .map(|(pair, seg)| switch_between(&classes, &series, pair[0], pair[1], seg.start))
        .collect::<Result<Vec<_>>>()?;

    Ok(HoleSchedule {
        q,
        k,
        horizon,
        segments,
        switches,
    })
}

fn switch_between(
    classes: &[CorrelationClass],
    series: &[CountSeries],
    from: usize,
    to: usize,
    at: usize,
) -> Result<Switch> {
    let crossing_time = if classes[to].autocorrelation > classes[from].autocorrelation {
        let report = compare_series(&series[to], &series[from])?;
        Some(report.crossing - report.k())
    } else {
        None
    };
    Ok(Switch {
        at,
        from: classes[from].representative.clone(),
        to: classes[to].representative.clone(),
        crossing_time,
    })
}

#[derive(Clone, Debug)]
pub struct ScheduleEvaluation {
    pub schedule: HoleSchedule,
    /// Survival `S(n)` for string lengths `n = 0..=horizon` under the
    /// schedule; the window starting at time `t` is tested against the hole
    /// open at `t`.
    pub scheduled_survival: Vec<ExactProbability>,
    /// `a(n)/q^n` for the representative of every correlation class.
    pub static_survivals: Vec<(Word, Vec<ExactProbability>)>,
}

impl ScheduleEvaluation {
    pub fn final_scheduled(&self) -> &ExactProbability {
        self.scheduled_survival.last().expect("non-empty")
    }

    /// Whether the scheduled survival at the horizon is at most every static
    /// survival there.
    pub fn dominates_statics(&self) -> bool {
        let last = self.final_scheduled();
        self.static_survivals
            .iter()
            .all(|(_, s)| last <= s.last().expect("non-empty"))
    }
}

/// Exact survival under `schedule`, plus the static survival of every class
/// of the same refinement for comparison.
pub fn schedule_survival(schedule: &HoleSchedule) -> Result<ScheduleEvaluation> {
    let (q, k, horizon) = (schedule.q, schedule.k, schedule.horizon);
    let scheduled_survival = survival_under(schedule)?;
    let classes = correlation_classes(q, k)?;
    let statics = par::map(&classes, |c| -> Result<(Word, Vec<ExactProbability>)> {
        let s = compute_series(&c.representative, horizon.max(2 * k))?;
        let curve = s.survival_curve();
        Ok((c.representative.clone(), curve.values[..=horizon].to_vec()))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(ScheduleEvaluation {
        schedule: schedule.clone(),
        scheduled_survival,
        static_survivals: statics,
    })
}

// Suffix-state transfer: a state is the last k-1 symbols of a surviving
// string. Appending a symbol completes a window; when that window is the hole
// open at its start time the string escapes.
fn survival_under(schedule: &HoleSchedule) -> Result<Vec<ExactProbability>> {
    let (q, k, horizon) = (schedule.q, schedule.k, schedule.horizon);
    let too_large = || Error::TooLarge {
        what: "suffix automaton",
        detail: format!("{q}^{k} windows"),
    };
    let windows = (q as usize)
        .checked_pow(k as u32)
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(too_large)?;
    let states = windows / q as usize;
    let holes: Vec<usize> = schedule
        .segments
        .iter()
        .map(|s| s.word.as_code().map(|c| c as usize).ok_or_else(too_large))
        .collect::<Result<_>>()?;

    let one = ExactProbability::new(BigInt::from(1), q, 0);
    let mut out = Vec::with_capacity(horizon + 1);
    for _ in 0..=horizon.min(k - 1) {
        out.push(one.clone());
    }
    let mut counts = vec![BigInt::from(1); states];
    let mut segment = 0;
    for n in k..=horizon {
        let t = n - k;
        while schedule.segments[segment].end <= t {
            segment += 1;
        }
        let hole = holes[segment];
        let mut next = vec![BigInt::zero(); states];
        for (state, count) in counts.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for x in 0..q as usize {
                let window = state * q as usize + x;
                if window != hole {
                    next[window % states] += count;
                }
            }
        }
        counts = next;
        let total: BigInt = counts.iter().sum();
        out.push(ExactProbability::new(total, q, n as u32));
    }
    Ok(out)
}

/// Number of strings of length `n` (over `q` symbols) that survive
/// `schedule`, for `n = 0..=horizon`. Exposed for cross-checks.
pub fn survivor_counts(schedule: &HoleSchedule) -> Result<Vec<BigInt>> {
    let q = BigInt::from(schedule.q);
    Ok(survival_under(schedule)?
        .into_iter()
        .enumerate()
        .map(|(n, p)| p.numerator() * Pow::pow(&q, n) / Pow::pow(&q, p.exp()))
        .collect())
}
