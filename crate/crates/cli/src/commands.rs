use fdl_core::crossing::{default_horizon, HORIZON_CAP};
use fdl_core::invariants::run_suite;
use fdl_core::oracle::{monte_carlo_hits, monte_carlo_kernel_hits, MapKernel};
use fdl_core::{
    autocorrelation, bound_check, compare_pair, compute_series, correlation_classes,
    greedy_schedule, interval_partition, schedule_survival, structure_profile, tower_rank, Error,
    ExactProbability, PairComparison, Word,
};

use crate::records::*;
use crate::render::{join, opt, Rendered, Table};
use crate::{CliError, Command, Global, KRange, Kernel, WordArg};

type Outcome = Result<(Rendered, Option<String>), CliError>;

pub fn dispatch(command: &Command, global: &Global) -> Outcome {
    let p = global.precision;
    match command {
        Command::Cor(w) => ok(cor(&parse(w)?)),
        Command::Profile(w) => ok(profile(&parse(w)?)),
        Command::Series { word, horizon } => {
            let w = parse(word)?;
            let horizon = horizon.unwrap_or_else(|| default_horizon(w.len()));
            ok(series(&w, horizon, p)?)
        }
        Command::Compare {
            first,
            second,
            q,
            horizon,
        } => {
            // Inferred alphabets widen to the larger of the two.
            let q = match q {
                Some(q) => *q,
                None => Word::parse(first, None)?
                    .q()
                    .max(Word::parse(second, None)?.q()),
            };
            let a = Word::parse(first, Some(q))?;
            let b = Word::parse(second, Some(q))?;
            ok(compare(&a, &b, *horizon)?)
        }
        Command::Classes { q, k } => ok(classes(*q, k.single()?)?),
        Command::Partition(r) => ok(partition(r.q, &r.k, r.horizon)?),
        Command::Towers(r) => ok(towers(r.q, r.k.single()?, r.horizon)?),
        Command::Schedule { q, k, horizon } => {
            let k = k.single()?;
            schedule(*q, k, horizon.unwrap_or(10 * k), p).map(|r| (r, None))
        }
        Command::OracleCheck { q, k, factor } => check(*q, k, *factor),
        Command::Simulate {
            word,
            trials,
            horizon,
            seed,
            kernel,
        } => {
            let w = parse(word)?;
            let horizon = horizon.unwrap_or_else(|| default_horizon(w.len()));
            simulate(&w, *trials, horizon, *seed, *kernel, p).map(|r| (r, None))
        }
    }
}

fn ok(r: Rendered) -> Outcome {
    Ok((r, None))
}

fn parse(w: &WordArg) -> Result<Word, CliError> {
    Ok(Word::parse(w.text(), w.q)?)
}

fn decimal(p: &ExactProbability, precision: usize) -> String {
    p.to_decimal(precision)
}

fn cor(w: &Word) -> Rendered {
    let c = autocorrelation(w);
    let record = CorRecord {
        word: w.to_string(),
        q: w.q(),
        bits: c.to_string(),
        value: c.value().to_string(),
        s: c.s(),
    };
    let mut t = Table::new(&["word", "bits", "value", "s"]);
    t.row([
        record.word.clone(),
        record.bits.clone(),
        record.value.clone(),
        record.s.to_string(),
    ]);
    Rendered::new(&record, t.finish())
}

fn profile(w: &Word) -> Rendered {
    let p = structure_profile(w);
    let pairs = |m: &std::collections::BTreeMap<usize, usize>| {
        m.iter()
            .map(|(&i, &value)| IndexPair { i, value })
            .collect::<Vec<_>>()
    };
    let record = ProfileRecord {
        word: w.to_string(),
        q: w.q(),
        k: p.k,
        bits: p.autocorrelation.to_string(),
        value: p.autocorrelation.value().to_string(),
        s: p.s,
        primitive: p.primitive.iter().rev().copied().collect(),
        bracket: pairs(&p.bracket),
        s_class: p.s_class.iter().rev().copied().collect(),
        d: p.d,
        tail_match: pairs(&p.tail_match),
        period: p.period,
    };
    let mapping = |v: &[IndexPair]| {
        v.iter()
            .rev()
            .map(|e| format!("{}:{}", e.i, e.value))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut t = Table::new(&["field", "value"]);
    for (field, value) in [
        ("word", record.word.clone()),
        ("bits", record.bits.clone()),
        ("value", record.value.clone()),
        ("s", record.s.to_string()),
        ("I", join(record.primitive.iter().copied())),
        ("bracket", mapping(&record.bracket)),
        ("d", opt(&record.d)),
        ("S", join(record.s_class.iter().copied())),
        ("T", mapping(&record.tail_match)),
        ("per", record.period.to_string()),
    ] {
        t.row([field.to_string(), value]);
    }
    Rendered::new(&record, t.finish())
}

fn series(w: &Word, horizon: usize, precision: usize) -> Result<Rendered, CliError> {
    let s = compute_series(w, horizon)?;
    let k = s.k();
    let ret = s.return_curve();
    let surv = s.survival_curve();
    let rows: Vec<SeriesRow> = (0..=s.horizon())
        .map(|n| {
            let hit = ExactProbability::new(s.first_hits(n).clone(), s.q(), n as u32);
            SeriesRow {
                n,
                a: s.avoiding(n).to_string(),
                h: s.first_hits(n).to_string(),
                big_h: s.first_returns(n).to_string(),
                p_hit: decimal(&hit, precision),
                p_surv: decimal(surv.get(n).expect("full range"), precision),
                p_ret: (n > k).then(|| decimal(ret.get(n).expect("n > k"), precision)),
            }
        })
        .collect();
    let mut t = Table::new(&["n", "a", "h", "H", "P_hit", "P_surv", "P_ret"]);
    for r in &rows {
        t.row([
            r.n.to_string(),
            r.a.clone(),
            r.h.clone(),
            r.big_h.clone(),
            r.p_hit.clone(),
            r.p_surv.clone(),
            opt(&r.p_ret),
        ]);
    }
    let record = SeriesRecord {
        word: w.to_string(),
        q: w.q(),
        k,
        horizon: s.horizon(),
        precision,
        rows,
    };
    Ok(Rendered::new(&record, t.finish()))
}

// Doubles the horizon on exhaustion unless the caller fixed it.
fn adaptive<T>(
    start: usize,
    fixed: bool,
    mut f: impl FnMut(usize) -> fdl_core::Result<T>,
) -> Result<T, CliError> {
    let mut horizon = start;
    loop {
        match f(horizon) {
            Err(Error::HorizonExhausted { .. }) if !fixed && horizon < HORIZON_CAP => {
                horizon = (horizon * 2).min(HORIZON_CAP);
            }
            other => return other.map_err(CliError::from),
        }
    }
}

fn compare(a: &Word, b: &Word, horizon: Option<usize>) -> Result<Rendered, CliError> {
    let start = horizon.unwrap_or_else(|| default_horizon(a.len().max(b.len())));
    let comparison = adaptive(start, horizon.is_some(), |h| compare_pair(a, b, h))?;
    let record = match comparison {
        PairComparison::Identical { horizon } => CompareRecord {
            first: a.to_string(),
            second: b.to_string(),
            verdict: "identical curves (equal autocorrelation)".into(),
            upper: None,
            lower: None,
            crossing: None,
            probability_crossing: None,
            coincidence_end: None,
            certified: None,
            sign_changes: None,
            bound_ok: None,
            horizon,
        },
        PairComparison::Crossing(r) => CompareRecord {
            first: a.to_string(),
            second: b.to_string(),
            verdict: format!("crossing at N={}", r.crossing),
            upper: Some(r.upper.to_string()),
            lower: Some(r.lower.to_string()),
            crossing: Some(r.crossing),
            probability_crossing: r.probability_crossing,
            coincidence_end: Some(r.coincidence_end),
            certified: Some(r.certified),
            sign_changes: Some(r.sign_changes),
            bound_ok: Some(bound_check(&r)),
            horizon: r.horizon_used,
        },
    };
    let mut t = Table::new(&[
        "first",
        "second",
        "verdict",
        "upper",
        "lower",
        "N",
        "t_cross",
        "coincidence_end",
        "certified",
        "sign_changes",
        "bound_ok",
        "horizon",
    ]);
    t.row([
        record.first.clone(),
        record.second.clone(),
        record.verdict.clone(),
        opt(&record.upper),
        opt(&record.lower),
        opt(&record.crossing),
        opt(&record.probability_crossing),
        opt(&record.coincidence_end),
        opt(&record.certified),
        opt(&record.sign_changes),
        opt(&record.bound_ok),
        record.horizon.to_string(),
    ]);
    Ok(Rendered::new(&record, t.finish()))
}

fn classes(q: u32, k: usize) -> Result<Rendered, CliError> {
    let rows: Vec<ClassRow> = correlation_classes(q, k)?
        .into_iter()
        .map(|c| ClassRow {
            autocorrelation: c.autocorrelation.to_string(),
            value: c.autocorrelation.value().to_string(),
            s: c.s(),
            period: c.period(),
            size: c.size,
            representative: c.representative.to_string(),
        })
        .collect();
    let mut t = Table::new(&[
        "autocorrelation",
        "value",
        "s",
        "per",
        "size",
        "representative",
    ]);
    for r in &rows {
        t.row([
            r.autocorrelation.clone(),
            r.value.clone(),
            r.s.to_string(),
            r.period.to_string(),
            r.size.to_string(),
            r.representative.clone(),
        ]);
    }
    Ok(Rendered::new(
        &ClassesRecord {
            q,
            k,
            classes: rows,
        },
        t.finish(),
    ))
}

fn partition(q: u32, ks: &KRange, horizon: Option<usize>) -> Result<Rendered, CliError> {
    let mut rows = Vec::new();
    for k in ks.0.clone() {
        if k < 2 {
            return Err(CliError::Usage("partition needs k >= 2".into()));
        }
        let p = interval_partition(q, k, horizon)?;
        if !p.all_certified() {
            return Err(CliError::Falsified(format!(
                "uncertified crossing for q = {q}, k = {k}"
            )));
        }
        rows.push(PartitionRow {
            k,
            begin: p.first_crossing,
            end: p.last_crossing,
            split: p.split_moment,
            classes: p.classes.len(),
            pairs: p.pairs.len(),
            certified: p.all_certified(),
            reversed: p.hierarchy_reversed(),
            horizon: p.horizon_used,
        });
    }
    let mut t = Table::new(&["k", "begin", "end"]);
    for r in &rows {
        t.row([r.k.to_string(), r.begin.to_string(), r.end.to_string()]);
    }
    Ok(Rendered::new(&PartitionRecord { q, rows }, t.finish()))
}

fn towers(q: u32, k: usize, horizon: Option<usize>) -> Result<Rendered, CliError> {
    let r = tower_rank(q, k, horizon)?;
    let rows: Vec<TowerRow> = r
        .classes
        .iter()
        .enumerate()
        .map(|(rank, c)| TowerRow {
            rank,
            representative: c.representative.to_string(),
            autocorrelation: c.autocorrelation.to_string(),
            s: c.s(),
            period: c.period(),
            optimal: r.optimal.contains(&rank),
        })
        .collect();
    let mut t = Table::new(&[
        "rank",
        "representative",
        "autocorrelation",
        "s",
        "per",
        "optimal",
    ]);
    for row in &rows {
        t.row([
            row.rank.to_string(),
            row.representative.clone(),
            row.autocorrelation.clone(),
            row.s.to_string(),
            row.period.to_string(),
            row.optimal.to_string(),
        ]);
    }
    let record = TowersRecord {
        q,
        k,
        optimal_has_max_period: r.optimal_has_max_period,
        relations: r.relations.len(),
        horizon: r.horizon_used,
        classes: rows,
    };
    Ok(Rendered::new(&record, t.finish()))
}

fn schedule(q: u32, k: usize, horizon: usize, precision: usize) -> Result<Rendered, CliError> {
    let s = greedy_schedule(q, k, horizon)?;
    let eval = schedule_survival(&s)?;
    let survival_row = |hole: String, p: &ExactProbability| SurvivalRow {
        hole,
        numerator: p.numerator().to_string(),
        exp: p.exp(),
        decimal: decimal(p, precision),
    };
    let mut survival = vec![survival_row("schedule".into(), eval.final_scheduled())];
    for (w, curve) in &eval.static_survivals {
        survival.push(survival_row(
            w.to_string(),
            curve.last().expect("non-empty"),
        ));
    }
    let record = ScheduleRecord {
        q,
        k,
        horizon,
        segments: s
            .segments
            .iter()
            .map(|g| SegmentRow {
                start: g.start,
                end: g.end,
                word: g.word.to_string(),
                autocorrelation: autocorrelation(&g.word).to_string(),
            })
            .collect(),
        switches: s
            .switches
            .iter()
            .map(|w| SwitchRow {
                at: w.at,
                from: w.from.to_string(),
                to: w.to.to_string(),
                crossing_time: w.crossing_time,
            })
            .collect(),
        survival,
        dominates_statics: eval.dominates_statics(),
    };
    let mut t = Table::new(&["start", "end", "word", "autocorrelation"]);
    for g in &record.segments {
        t.row([
            g.start.to_string(),
            g.end.to_string(),
            g.word.clone(),
            g.autocorrelation.clone(),
        ]);
    }
    t.section(&["hole", "survival"]);
    for r in &record.survival {
        t.row([r.hole.clone(), r.decimal.clone()]);
    }
    Ok(Rendered::new(&record, t.finish()))
}

fn check(q: u32, k: &KRange, factor: usize) -> Outcome {
    let max_k = *k.0.end();
    let report = run_suite(q, max_k, factor)?;
    let rows: Vec<CheckRow> = report
        .outcomes
        .iter()
        .map(|o| CheckRow {
            name: o.name.to_string(),
            gating: o.gating,
            checked: o.checked,
            failures: o.failures,
            counterexample: o.counterexample.clone(),
        })
        .collect();
    let mut t = Table::new(&["check", "gating", "checked", "failures", "counterexample"]);
    for r in &rows {
        t.row([
            r.name.clone(),
            r.gating.to_string(),
            r.checked.to_string(),
            r.failures.to_string(),
            opt(&r.counterexample),
        ]);
    }
    let status = (!report.passed()).then(|| {
        let names: Vec<&str> = report.failures().map(|o| o.name).collect();
        format!("invariant falsified: {}", names.join("; "))
    });
    let record = CheckRecord {
        q,
        max_k,
        factor,
        words: report.words,
        passed: report.passed(),
        checks: rows,
    };
    Ok((Rendered::new(&record, t.finish()), status))
}

fn simulate(
    w: &Word,
    trials: u64,
    horizon: usize,
    seed: u64,
    kernel: Kernel,
    precision: usize,
) -> Result<Rendered, CliError> {
    let q = w.q();
    let hits = match kernel {
        Kernel::Iid => monte_carlo_hits(w, trials, horizon, seed)?,
        Kernel::Doubling => {
            monte_carlo_kernel_hits(MapKernel::Doubling { q }, w, trials, horizon, seed)?
        }
        Kernel::Baker => monte_carlo_kernel_hits(MapKernel::Baker { q }, w, trials, horizon, seed)?,
        Kernel::Tent => monte_carlo_kernel_hits(MapKernel::Tent, w, trials, horizon, seed)?,
        Kernel::Ulam => {
            monte_carlo_kernel_hits(MapKernel::VonNeumannUlam, w, trials, horizon, seed)?
        }
    };
    let exact = compute_series(w, (horizon + w.len()).max(2 * w.len()))?.hit_curve();
    let checks = hits.compare(&exact, 50.0, 4.0);
    let bins: Vec<BinRow> = hits
        .histogram
        .iter()
        .enumerate()
        .map(|(t, &observed)| BinRow {
            t,
            observed,
            exact: decimal(exact.get(t).expect("curve covers horizon"), precision),
            within: checks.iter().find(|c| c.t == t).map(|c| c.within),
        })
        .collect();
    let record = SimulateRecord {
        word: w.to_string(),
        kernel: format!("{kernel:?}").to_lowercase(),
        trials,
        horizon,
        seed,
        generator: hits.generator.to_string(),
        censored: hits.censored,
        checked_bins: checks.len(),
        consistent: checks.iter().all(|c| c.within),
        bins,
    };
    let mut t = Table::new(&["t", "observed", "exact", "within"]);
    for b in &record.bins {
        t.row([
            b.t.to_string(),
            b.observed.to_string(),
            b.exact.clone(),
            opt(&b.within),
        ]);
    }
    Ok(Rendered::new(&record, t.finish()))
}
