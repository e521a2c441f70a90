//! Exact first-passage statistics for cylinder sets of fair-dice-like systems.
//!
//! A fair-dice-like (FDL) system is a uniformly hyperbolic map whose basic
//! Markov partition turns its symbolic dynamics into a full Bernoulli shift on
//! `q` equiprobable symbols. Elements of the `k`-th refinement are coded by
//! words of length `k`, and everything about first hitting, first return and
//! survival for such an element is a counting problem on strings.
//!
//! The crate is organised bottom-up:
//!
//! - [`word`]: words, Conway autocorrelations and the structural indices
//!   derived from them.
//! - [`series`]: exact big-integer counts `a(n)`, `h(n)`, `H(n)` and the
//!   probability curves built from them.
//! - [`crossing`]: certified single-crossing detection for word pairs, the
//!   short/intermediate/long timeline partition and tower ranking.
//! - [`schedule`]: the hole-switching escape schedule and its exact survival.
//! - [`oracle`]: independent ground truth (enumeration, Monte Carlo, concrete
//!   maps).
//! - [`invariants`]: the verification suite run by `fdl oracle-check`.
//!
//! Probabilities never pass through floating point inside the crate. All
//! comparisons are cross-multiplied integer comparisons.

pub mod crossing;
mod error;
pub mod invariants;
pub mod oracle;
mod par;
pub mod schedule;
pub mod series;
pub mod word;

pub use crate::crossing::{
    bound_check, compare_pair, compare_series, correlation_classes, equal_class_check,
    interval_partition, tower_rank, CorrelationClass, CrossingReport, DeltaSeries,
    IntervalPartition, PairComparison, TowerRanking,
};
pub use crate::error::{Error, Result};
pub use crate::schedule::{greedy_schedule, schedule_survival, HoleSchedule, ScheduleEvaluation};
pub use crate::series::{compute_series, CountSeries, Curve, CurveKind, ExactProbability};
pub use crate::word::{
    autocorrelation, minimal_period, pair_profile, structure_profile, Autocorrelation, CorRelation,
    PairProfile, StructureProfile, Word,
};
