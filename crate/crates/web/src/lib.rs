//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes plain numbers and strings and returns a JSON document.
//! Failures come back as `{"error": "..."}` so the page never has to catch.

use fdl_core::{
    autocorrelation, compare_pair, compute_series, greedy_schedule, interval_partition,
    schedule_survival, PairComparison, Word,
};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

const MAX_HORIZON: usize = 4096;
const MAX_PARTITION_K: usize = 9;
const MAX_SCHEDULE_K: usize = 7;

#[derive(Serialize)]
struct Failure {
    error: String,
}

#[derive(Serialize)]
struct HitCurve {
    word: String,
    autocorrelation: String,
    s: usize,
    hit: Vec<f64>,
}

#[derive(Serialize)]
struct Crossing {
    upper: String,
    lower: String,
    /// Probability time after which `upper` is the likelier first hit.
    t: Option<usize>,
}

#[derive(Serialize)]
struct HitCurves {
    q: u32,
    horizon: usize,
    curves: Vec<HitCurve>,
    crossings: Vec<Crossing>,
}

#[derive(Serialize)]
struct PartitionRow {
    k: usize,
    split: usize,
    begin: usize,
    end: usize,
    classes: usize,
    certified: bool,
}

#[derive(Serialize)]
struct Partition {
    q: u32,
    rows: Vec<PartitionRow>,
}

#[derive(Serialize)]
struct Segment {
    start: usize,
    end: usize,
    word: String,
}

#[derive(Serialize)]
struct Survival {
    hole: String,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct Schedule {
    q: u32,
    k: usize,
    horizon: usize,
    segments: Vec<Segment>,
    scheduled: Vec<f64>,
    statics: Vec<Survival>,
    dominates_statics: bool,
}

fn respond<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&Failure { error }),
    }
    .expect("demo records serialize")
}

fn alphabet(q: u32) -> Option<u32> {
    (q > 0).then_some(q)
}

/// Hit curves `P(τ = t)` for `t = 0..=horizon` of every whitespace or
/// comma separated word, plus the crossing time of each pair. `q = 0`
/// infers the alphabet from the largest symbol.
#[wasm_bindgen]
pub fn hit_curves(words: &str, q: u32, horizon: usize) -> String {
    respond(hit_curves_impl(words, q, horizon))
}

fn hit_curves_impl(words: &str, q: u32, horizon: usize) -> Result<HitCurves, String> {
    if horizon > MAX_HORIZON {
        return Err(format!("horizon is capped at {MAX_HORIZON}"));
    }
    let parsed = words
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| Word::parse(t, alphabet(q)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    if parsed.is_empty() {
        return Err("enter at least one word".into());
    }
    let q = parsed.iter().map(Word::q).max().expect("non-empty");
    let parsed = parsed
        .into_iter()
        .map(|w| Word::new(q, w.symbols().to_vec()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;

    let mut curves = Vec::with_capacity(parsed.len());
    for w in &parsed {
        let series = compute_series(w, horizon + w.len()).map_err(|e| e.to_string())?;
        let cor = autocorrelation(w);
        curves.push(HitCurve {
            word: w.to_string(),
            autocorrelation: cor.to_string(),
            s: cor.s(),
            hit: series
                .hit_curve()
                .values
                .iter()
                .map(|p| p.to_f64())
                .collect(),
        });
    }

    let mut crossings = Vec::new();
    for (i, a) in parsed.iter().enumerate() {
        for b in &parsed[i + 1..] {
            let reach = horizon + a.len().max(b.len());
            if let Ok(PairComparison::Crossing(r)) = compare_pair(a, b, reach) {
                crossings.push(Crossing {
                    upper: r.upper.to_string(),
                    lower: r.lower.to_string(),
                    t: r.probability_crossing,
                });
            }
        }
    }
    Ok(HitCurves {
        q,
        horizon,
        curves,
        crossings,
    })
}

/// Split moment and the two crossing moments of every refinement
/// `min_k..=max_k`.
#[wasm_bindgen]
pub fn partition(q: u32, min_k: usize, max_k: usize) -> String {
    respond(partition_impl(q, min_k, max_k))
}

fn partition_impl(q: u32, min_k: usize, max_k: usize) -> Result<Partition, String> {
    if min_k < 2 || min_k > max_k {
        return Err("need 2 <= min k <= max k".into());
    }
    if max_k > MAX_PARTITION_K {
        return Err(format!("k is capped at {MAX_PARTITION_K} in the browser"));
    }
    let rows = (min_k..=max_k)
        .map(|k| {
            let p = interval_partition(q, k, None).map_err(|e| e.to_string())?;
            Ok(PartitionRow {
                k,
                split: p.split_moment,
                begin: p.first_crossing,
                end: p.last_crossing,
                classes: p.classes.len(),
                certified: p.all_certified(),
            })
        })
        .collect::<Result<_, String>>()?;
    Ok(Partition { q, rows })
}

/// Greedy hole schedule over probability times `0..horizon` with its survival
/// against every static class representative.
#[wasm_bindgen]
pub fn schedule(q: u32, k: usize, horizon: usize) -> String {
    respond(schedule_impl(q, k, horizon))
}

fn schedule_impl(q: u32, k: usize, horizon: usize) -> Result<Schedule, String> {
    if k > MAX_SCHEDULE_K || horizon > MAX_HORIZON {
        return Err(format!(
            "k is capped at {MAX_SCHEDULE_K} and the horizon at {MAX_HORIZON}"
        ));
    }
    let plan = greedy_schedule(q, k, horizon).map_err(|e| e.to_string())?;
    let eval = schedule_survival(&plan).map_err(|e| e.to_string())?;
    let floats = |v: &[fdl_core::ExactProbability]| v.iter().map(|p| p.to_f64()).collect();
    Ok(Schedule {
        q,
        k,
        horizon,
        segments: plan
            .segments
            .iter()
            .map(|s| Segment {
                start: s.start,
                end: s.end,
                word: s.word.to_string(),
            })
            .collect(),
        scheduled: floats(&eval.scheduled_survival),
        statics: eval
            .static_survivals
            .iter()
            .map(|(w, v)| Survival {
                hole: w.to_string(),
                values: floats(v),
            })
            .collect(),
        dominates_statics: eval.dominates_statics(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn curves_and_crossing() {
        let v = parse(hit_curves("11, 10", 0, 20));
        assert_eq!(v["q"], 2);
        assert_eq!(v["curves"][0]["hit"].as_array().unwrap().len(), 21);
        assert_eq!(v["curves"][0]["hit"][0], 0.25);
        assert_eq!(v["curves"][1]["autocorrelation"], "10");
        assert_eq!(v["crossings"][0]["upper"], "11");
        assert_eq!(v["crossings"][0]["t"], 5);
    }

    #[test]
    fn equal_classes_have_no_crossing() {
        let v = parse(hit_curves("1010 0101", 2, 30));
        assert!(v["crossings"].as_array().unwrap().is_empty());
        assert_eq!(v["curves"][0]["hit"], v["curves"][1]["hit"]);
    }

    #[test]
    fn mixed_lengths_share_an_alphabet() {
        let v = parse(hit_curves("2 10", 0, 10));
        assert_eq!(v["q"], 3);
        assert_eq!(v["curves"][0]["hit"][0].as_f64().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn curve_errors() {
        assert!(parse(hit_curves("", 2, 10))["error"].is_string());
        assert!(parse(hit_curves("12", 2, 10))["error"].is_string());
        assert!(parse(hit_curves("1", 2, 1 << 20))["error"].is_string());
    }

    #[test]
    fn partition_rows() {
        let v = parse(partition(2, 2, 5));
        let rows = v["rows"].as_array().unwrap();
        let ends: Vec<_> = rows
            .iter()
            .map(|r| (r["begin"].as_u64().unwrap(), r["end"].as_u64().unwrap()))
            .collect();
        assert_eq!(ends, [(7, 7), (12, 13), (20, 26), (37, 52)]);
        assert!(rows.iter().all(|r| r["certified"] == true));
        assert!(parse(partition(2, 1, 3))["error"].is_string());
        assert!(parse(partition(2, 3, 12))["error"].is_string());
    }

    #[test]
    fn schedule_shape() {
        let v = parse(schedule(2, 2, 20));
        assert_eq!(v["segments"][0]["word"], "01");
        assert_eq!(v["segments"][1]["start"], 5);
        assert_eq!(v["scheduled"].as_array().unwrap().len(), 21);
        assert_eq!(v["statics"].as_array().unwrap().len(), 2);
        assert!(parse(schedule(2, 12, 20))["error"].is_string());
    }
}
