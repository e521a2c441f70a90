//! Serializable output records. Exact integers travel as decimal strings.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorRecord {
    pub word: String,
    pub q: u32,
    pub bits: String,
    pub value: String,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPair {
    pub i: usize,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub word: String,
    pub q: u32,
    pub k: usize,
    pub bits: String,
    pub value: String,
    pub s: usize,
    pub primitive: Vec<usize>,
    pub bracket: Vec<IndexPair>,
    pub s_class: Vec<usize>,
    pub d: Option<usize>,
    pub tail_match: Vec<IndexPair>,
    pub period: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub n: usize,
    pub a: String,
    pub h: String,
    #[serde(rename = "H")]
    pub big_h: String,
    pub p_hit: String,
    pub p_surv: String,
    pub p_ret: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub word: String,
    pub q: u32,
    pub k: usize,
    pub horizon: usize,
    pub precision: usize,
    pub rows: Vec<SeriesRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub first: String,
    pub second: String,
    pub verdict: String,
    pub upper: Option<String>,
    pub lower: Option<String>,
    #[serde(rename = "N")]
    pub crossing: Option<usize>,
    pub probability_crossing: Option<usize>,
    pub coincidence_end: Option<usize>,
    pub certified: Option<bool>,
    pub sign_changes: Option<usize>,
    pub bound_ok: Option<bool>,
    pub horizon: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub autocorrelation: String,
    pub value: String,
    pub s: usize,
    pub period: usize,
    pub size: usize,
    pub representative: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesRecord {
    pub q: u32,
    pub k: usize,
    pub classes: Vec<ClassRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRow {
    pub k: usize,
    pub begin: usize,
    pub end: usize,
    pub split: usize,
    pub classes: usize,
    pub pairs: usize,
    pub certified: bool,
    pub reversed: bool,
    pub horizon: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub q: u32,
    pub rows: Vec<PartitionRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerRow {
    pub rank: usize,
    pub representative: String,
    pub autocorrelation: String,
    pub s: usize,
    pub period: usize,
    pub optimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowersRecord {
    pub q: u32,
    pub k: usize,
    pub optimal_has_max_period: bool,
    pub relations: usize,
    pub horizon: usize,
    pub classes: Vec<TowerRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentRow {
    pub start: usize,
    pub end: usize,
    pub word: String,
    pub autocorrelation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchRow {
    pub at: usize,
    pub from: String,
    pub to: String,
    pub crossing_time: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivalRow {
    pub hole: String,
    pub numerator: String,
    pub exp: u32,
    pub decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub q: u32,
    pub k: usize,
    pub horizon: usize,
    pub segments: Vec<SegmentRow>,
    pub switches: Vec<SwitchRow>,
    /// First row is the schedule, the rest are static holes.
    pub survival: Vec<SurvivalRow>,
    pub dominates_statics: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub gating: bool,
    pub checked: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub q: u32,
    pub max_k: usize,
    pub factor: usize,
    pub words: usize,
    pub passed: bool,
    pub checks: Vec<CheckRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinRow {
    pub t: usize,
    pub observed: u64,
    pub exact: String,
    /// Absent for bins below the expected-count threshold.
    pub within: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulateRecord {
    pub word: String,
    pub kernel: String,
    pub trials: u64,
    pub horizon: usize,
    pub seed: u64,
    pub generator: String,
    pub censored: u64,
    pub checked_bins: usize,
    pub consistent: bool,
    pub bins: Vec<BinRow>,
}
