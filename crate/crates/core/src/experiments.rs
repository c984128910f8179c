//! Seeded Monte Carlo experiments.
//!
//! Every trial draws its graph from `seed.derive(..)`, trials run on the
//! current rayon pool and come back in trial order, and all floating
//! reductions happen sequentially afterwards. A report is therefore a pure
//! function of its parameters and seed, whatever the thread count.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cycle_census::{
    alpha_cap, enumerate_cycles, intersection_profile, is_disconnecting, CapPolicy, Cycle, DEFAULT_EPSILON,
};
use crate::error::{Error, Result};
use crate::exhaustive::word_sums;
use crate::report::ExperimentReport;
use crate::rotation_graph::{sample_graph, RotationGraph};
use crate::seed::Seed;
use crate::spectrum_bounds::{lambda, length_window, mean_trace_length};
use crate::stats::{self, poisson_chi_square, Summary};
use crate::stern_moments::{rational_to_f64, MomentVector};
use crate::turn_matrix::{cycle_to_word, geodesic_length, word_to_matrix, Turn, TurnWord};

/// Default significance level of goodness-of-fit assertions.
pub const DEFAULT_ALPHA: f64 = 0.01;
/// Default width, in standard errors, of mean assertions.
pub const DEFAULT_SIGMAS: f64 = 3.0;
/// Largest word length of the exhaustive trace mode.
pub const EXHAUSTIVE_TRACE_CAP: u32 = 22;

/// Serializable mirror of [`CapPolicy`] for experiment parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CapSetting {
    Alpha { epsilon: f64 },
    Unchecked,
}

impl Default for CapSetting {
    fn default() -> Self {
        CapSetting::Alpha {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl From<CapSetting> for CapPolicy {
    fn from(c: CapSetting) -> CapPolicy {
        match c {
            CapSetting::Alpha { epsilon } => CapPolicy::Alpha { epsilon },
            CapSetting::Unchecked => CapPolicy::Unchecked,
        }
    }
}

/// Graph of trial `trial` at size `n`; every experiment draws from this stream.
pub fn trial_graph(seed: Seed, n: usize, trial: usize) -> Result<RotationGraph> {
    sample_graph(n, seed.derive(n as u64).derive(trial as u64))
}

/// A cycle with its geodesic length; uniform words carry no geodesic.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub cycle: Cycle,
    pub length: f64,
}

/// Geodesics of the non-uniform cycles of length at least `min_len`,
/// shortest first (ties broken by the cycle order).
pub fn geodesics(g: &RotationGraph, cycles: &[Cycle], min_len: usize) -> Result<Vec<Geodesic>> {
    let mut out = Vec::new();
    for c in cycles.iter().filter(|c| c.len() >= min_len) {
        let word = cycle_to_word(g, c)?;
        if word.is_uniform() {
            continue;
        }
        out.push(Geodesic {
            cycle: c.clone(),
            length: geodesic_length(&word_to_matrix(&word)),
        });
    }
    out.sort_by(|a, b| a.length.total_cmp(&b.length).then_with(|| a.cycle.cmp(&b.cycle)));
    Ok(out)
}

/// Shortest geodesic whose cycle does not disconnect `g`; disconnection is
/// only checked as far as needed.
fn shortest_nontrivial<'a>(g: &RotationGraph, geos: &'a [Geodesic]) -> Option<&'a Geodesic> {
    geos.iter().find(|x| !is_disconnecting(g, &[&x.cycle]))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystoleParams {
    /// Graphs have `2n` vertices.
    pub n: usize,
    pub samples: usize,
    pub max_len: usize,
    /// Shortest cycle admitted to the systole.
    pub min_cycle_len: usize,
    pub cap: CapSetting,
    /// Asserted bracket for the mean systole, if any.
    pub bracket: Option<(f64, f64)>,
}

impl Default for SystoleParams {
    fn default() -> Self {
        SystoleParams {
            n: 1000,
            samples: 1000,
            max_len: 10,
            min_cycle_len: 3,
            cap: CapSetting::default(),
            bracket: Some((2.7, 3.2)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystoleSample {
    pub trial: usize,
    pub genus: usize,
    pub cycles: usize,
    pub systole: Option<f64>,
    pub systole_cycle_len: Option<usize>,
    /// Systole when cycles of every length are admitted.
    pub systole_all_lengths: Option<f64>,
    pub censored: bool,
}

pub fn empirical_systole(params: &SystoleParams, seed: Seed) -> Result<ExperimentReport> {
    if params.samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let records: Vec<SystoleSample> = (0..params.samples)
        .into_par_iter()
        .map(|trial| {
            let g = trial_graph(seed, params.n, trial)?;
            let cycles = enumerate_cycles(&g, params.max_len, params.cap.into())?;
            let geos = geodesics(&g, &cycles, 1)?;
            let best = shortest_nontrivial(&g, &geos);
            let restricted: Vec<Geodesic> =
                geos.iter().filter(|x| x.cycle.len() >= params.min_cycle_len).cloned().collect();
            let sys = shortest_nontrivial(&g, &restricted);
            Ok(SystoleSample {
                trial,
                genus: g.genus(),
                cycles: cycles.len(),
                systole: sys.map(|x| x.length),
                systole_cycle_len: sys.map(|x| x.cycle.len()),
                systole_all_lengths: best.map(|x| x.length),
                censored: sys.is_none(),
            })
        })
        .collect::<Result<_>>()?;

    let values: Vec<f64> = records.iter().filter_map(|r| r.systole).collect();
    let all_values: Vec<f64> = records.iter().filter_map(|r| r.systole_all_lengths).collect();
    let genera: Vec<f64> = records.iter().map(|r| r.genus as f64).collect();
    let censored = records.iter().filter(|r| r.censored).count();
    let summary = Summary::of(&values);
    let mut report = ExperimentReport::new("empirical_systole", params, seed).with_summary(json!({
        "systole": summary,
        "ci95": [summary.mean - summary.ci95(), summary.mean + summary.ci95()],
        "censored": censored,
        "censored_fraction": censored as f64 / params.samples as f64,
        "systole_all_lengths": Summary::of(&all_values),
        "mean_genus": stats::mean(&genera),
    }));
    for r in &records {
        report.push_sample(r);
    }
    if let Some((lo, hi)) = params.bracket {
        report.assert(
            "mean_systole_in_bracket",
            summary.mean >= lo && summary.mean <= hi,
            format!("mean {:.6} in [{lo}, {hi}] ({censored} censored)", summary.mean),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderedParams {
    pub n_values: Vec<usize>,
    pub samples: usize,
    /// Common cycle cutoff for all sizes.
    pub max_len: usize,
    /// Number of ordered geodesics per sample.
    pub k: usize,
    /// Shortest cycle admitted, as in [`SystoleParams`].
    pub min_cycle_len: usize,
    pub cap: CapSetting,
    /// Largest accepted |z| between the smallest and largest size.
    pub z_threshold: Option<f64>,
}

impl Default for OrderedParams {
    fn default() -> Self {
        OrderedParams {
            n_values: vec![250, 500, 1000, 2000],
            samples: 200,
            max_len: 8,
            k: 3,
            min_cycle_len: 3,
            cap: CapSetting::default(),
            z_threshold: Some(2.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderedSample {
    pub n: usize,
    pub trial: usize,
    pub genus: usize,
    pub lengths: Vec<f64>,
    pub cycle_lens: Vec<usize>,
}

/// Greedy choice of up to `k` shortest geodesics that pairwise touch in at
/// most one component and whose cycles, alone or in pairs, do not
/// disconnect the graph.
pub fn ordered_compatible(g: &RotationGraph, geos: &[Geodesic], k: usize) -> Result<Vec<Geodesic>> {
    let mut chosen: Vec<Geodesic> = Vec::with_capacity(k);
    for x in geos {
        if chosen.len() == k {
            break;
        }
        if is_disconnecting(g, &[&x.cycle]) {
            continue;
        }
        let mut ok = true;
        for y in &chosen {
            if intersection_profile(&x.cycle, &y.cycle)?.components > 1 || is_disconnecting(g, &[&x.cycle, &y.cycle]) {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(x.clone());
        }
    }
    Ok(chosen)
}

pub fn ordered_geodesics(params: &OrderedParams, seed: Seed) -> Result<ExperimentReport> {
    if params.k == 0 || params.k > 10 {
        return Err(Error::InvalidParameter(format!("k must be in 1..=10, got {}", params.k)));
    }
    if params.n_values.is_empty() || params.samples == 0 {
        return Err(Error::InvalidParameter("need at least one size and one sample".into()));
    }
    let jobs: Vec<(usize, usize)> = params
        .n_values
        .iter()
        .flat_map(|&n| (0..params.samples).map(move |t| (n, t)))
        .collect();
    let records: Vec<OrderedSample> = jobs
        .into_par_iter()
        .map(|(n, trial)| {
            let g = trial_graph(seed, n, trial)?;
            let cycles = enumerate_cycles(&g, params.max_len, params.cap.into())?;
            let geos = geodesics(&g, &cycles, params.min_cycle_len)?;
            let chosen = ordered_compatible(&g, &geos, params.k)?;
            Ok(OrderedSample {
                n,
                trial,
                genus: g.genus(),
                lengths: chosen.iter().map(|x| x.length).collect(),
                cycle_lens: chosen.iter().map(|x| x.cycle.len()).collect(),
            })
        })
        .collect::<Result<_>>()?;

    // per[n_index][i] summarises the i-th shortest geodesic at that size
    let per: Vec<Vec<Summary>> = params
        .n_values
        .iter()
        .map(|&n| {
            (0..params.k)
                .map(|i| {
                    let xs: Vec<f64> = records
                        .iter()
                        .filter(|r| r.n == n)
                        .filter_map(|r| r.lengths.get(i).copied())
                        .collect();
                    Summary::of(&xs)
                })
                .collect()
        })
        .collect();
    let first = &per[0];
    let last = &per[per.len() - 1];
    let z: Vec<f64> = (0..params.k).map(|i| stats::two_sample_z(&first[i], &last[i])).collect();
    let mut rows = Vec::new();
    for (j, &n) in params.n_values.iter().enumerate() {
        let genera: Vec<f64> = records.iter().filter(|r| r.n == n).map(|r| r.genus as f64).collect();
        rows.push(json!({
            "n": n,
            "mean_genus": stats::mean(&genera),
            "geodesics": per[j],
        }));
    }
    let mut report = ExperimentReport::new("ordered_geodesics", params, seed).with_summary(json!({
        "by_size": rows,
        "z_first_vs_last": z,
        "slope_vs_log_n": (0..params.k).map(|i| slope_vs_log(&params.n_values, &per, i)).collect::<Vec<_>>(),
    }));
    for r in &records {
        report.push_sample(r);
    }
    if let Some(t) = params.z_threshold {
        for (i, zi) in z.iter().enumerate() {
            report.assert(
                &format!("gamma_{}_size_independent", i + 1),
                zi.abs() < t,
                format!(
                    "gamma_{}: n={} mean {:.6} vs n={} mean {:.6}, |z| = {:.3} (limit {t})",
                    i + 1,
                    params.n_values[0],
                    first[i].mean,
                    params.n_values[params.n_values.len() - 1],
                    last[i].mean,
                    zi.abs()
                ),
            );
        }
    }
    Ok(report)
}

/// Least-squares slope of the mean of the `i`-th geodesic against `ln n`.
fn slope_vs_log(ns: &[usize], per: &[Vec<Summary>], i: usize) -> Option<f64> {
    if ns.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = per.iter().map(|p| p[i].mean).collect();
    Some(stats::covariance(&xs, &ys) / stats::variance(&xs))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonParams {
    pub n: usize,
    pub samples: usize,
    pub i_max: usize,
    /// Cycle lengths whose fit is asserted.
    pub tested: Vec<usize>,
    pub alpha: f64,
    pub sigmas: f64,
    pub cap: CapSetting,
}

impl Default for PoissonParams {
    fn default() -> Self {
        PoissonParams {
            n: 1000,
            samples: 10_000,
            i_max: 5,
            tested: vec![3, 4, 5],
            alpha: DEFAULT_ALPHA,
            sigmas: DEFAULT_SIGMAS,
            cap: CapSetting::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleCountSample {
    pub trial: usize,
    /// `counts[i - 1]` is the number of `i`-cycles.
    pub counts: Vec<u64>,
}

pub fn cycle_counts(g: &RotationGraph, max_len: usize, cap: CapPolicy) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; max_len];
    for c in enumerate_cycles(g, max_len, cap)? {
        counts[c.len() - 1] += 1;
    }
    Ok(counts)
}

pub fn poisson_fit(params: &PoissonParams, seed: Seed) -> Result<ExperimentReport> {
    if params.i_max == 0 || params.samples < 2 {
        return Err(Error::InvalidParameter("need i_max >= 1 and at least two samples".into()));
    }
    if let Some(&bad) = params.tested.iter().find(|&&i| i == 0 || i > params.i_max) {
        return Err(Error::InvalidParameter(format!("tested length {bad} outside 1..={}", params.i_max)));
    }
    let records: Vec<CycleCountSample> = (0..params.samples)
        .into_par_iter()
        .map(|trial| {
            let g = trial_graph(seed, params.n, trial)?;
            Ok(CycleCountSample {
                trial,
                counts: cycle_counts(&g, params.i_max, params.cap.into())?,
            })
        })
        .collect::<Result<_>>()?;

    let column = |i: usize| -> Vec<u64> { records.iter().map(|r| r.counts[i - 1]).collect() };
    let as_f64 = |xs: &[u64]| -> Vec<f64> { xs.iter().map(|&x| x as f64).collect() };
    let mut report = ExperimentReport::new("poisson_fit", params, seed);
    let mut per_length = Vec::new();
    for i in 1..=params.i_max {
        let xs = column(i);
        let lam = lambda(i as u32);
        let fit = poisson_chi_square(&xs, lam)?;
        let s = Summary::of(&as_f64(&xs));
        let sigma = (lam / params.samples as f64).sqrt();
        per_length.push(json!({
            "length": i,
            "lambda": lam,
            "mean": s.mean,
            "variance": s.variance,
            "mean_z": (s.mean - lam) / sigma,
            "chi_square": fit,
        }));
        if params.tested.contains(&i) {
            report.assert(
                &format!("chi_square_{i}"),
                fit.p_value > params.alpha,
                format!("p = {} (threshold {})", fit.p_value, params.alpha),
            );
            report.assert(
                &format!("mean_{i}"),
                (s.mean - lam).abs() < params.sigmas * sigma,
                format!("mean {} vs lambda {lam}, sigma {sigma}", s.mean),
            );
        }
    }
    let mut covariances = Vec::new();
    for (a, &i) in params.tested.iter().enumerate() {
        for &j in &params.tested[a + 1..] {
            let (x, y) = (as_f64(&column(i)), as_f64(&column(j)));
            let cov = stats::covariance(&x, &y);
            let se = stats::covariance_standard_error(&x, &y);
            covariances.push(json!({"i": i, "j": j, "covariance": cov, "standard_error": se}));
            report.assert(
                &format!("independent_{i}_{j}"),
                cov.abs() < params.sigmas * se,
                format!("cov {cov}, se {se}"),
            );
        }
    }
    report.summary = crate::report::to_value(json!({
        "lengths": per_length,
        "covariances": covariances,
    }));
    for r in &records {
        report.push_sample(r);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceParams {
    pub word_len: u32,
    pub mode: TraceMode,
    /// Words drawn in sampled mode.
    pub samples: usize,
    pub sigmas: f64,
}

impl Default for TraceParams {
    fn default() -> Self {
        TraceParams {
            word_len: 20,
            mode: TraceMode::Exhaustive,
            samples: 100_000,
            sigmas: DEFAULT_SIGMAS,
        }
    }
}

fn random_word(seed: Seed, len: u32) -> TurnWord {
    use rand::Rng;
    let mut rng = seed.rng();
    let letters = (0..len).map(|_| if rng.random::<bool>() { Turn::R } else { Turn::L }).collect();
    TurnWord::new(letters).expect("len > 0")
}

pub fn trace_stats(params: &TraceParams, seed: Seed) -> Result<ExperimentReport> {
    let n = params.word_len;
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let exact = MomentVector::at(n);
    let exact_mean = rational_to_f64(&exact.trace_mean()).expect("finite");
    let exact_var = rational_to_f64(&exact.trace_variance()).expect("finite");
    let jensen = mean_trace_length(n);
    let window = length_window(n)?;
    let mut report;
    match params.mode {
        TraceMode::Exhaustive => {
            if n > EXHAUSTIVE_TRACE_CAP {
                return Err(Error::ExhaustiveCap {
                    len: n,
                    cap: EXHAUSTIVE_TRACE_CAP,
                });
            }
            let sums = word_sums(n)?;
            let count = sums.count as f64;
            let mean = sums.trace_sum as f64 / count;
            let variance = sums.trace_sq_sum as f64 / count - mean * mean;
            let mean_length = sums.mean_length();
            report = ExperimentReport::new("trace_stats", params, seed).with_summary(json!({
                "words": sums.count,
                "trace_mean": mean,
                "trace_variance": variance,
                "exact_trace_mean": exact_mean,
                "exact_trace_variance": exact_var,
                "mean_length": mean_length,
                "mean_length_per_letter": mean_length / n as f64,
                "jensen_bound": jensen,
                "window": window,
                "below_window": mean_length < window.0,
            }));
            // every tracked sum must agree exactly with the moment engine
            let mut exact_sums: Vec<u128> = sums.quadratic.to_vec();
            exact_sums.extend_from_slice(&sums.linear);
            let engine: Vec<u128> = exact
                .sums
                .iter()
                .map(|x| u128::try_from(x).expect("sums fit u128 up to length 22"))
                .collect();
            report.assert(
                "exact_moments_match",
                exact_sums == engine && sums.count == 1u64 << n,
                format!("{} sums compared", engine.len()),
            );
            report.assert(
                "jensen",
                mean_length <= jensen * (1.0 + 1e-12),
                format!("mean length {mean_length} <= {jensen}"),
            );
        }
        TraceMode::Sampled => {
            if params.samples < 2 {
                return Err(Error::InvalidParameter("sampled mode needs at least two words".into()));
            }
            let pairs: Vec<(f64, f64)> = (0..params.samples)
                .into_par_iter()
                .map(|t| {
                    let m = word_to_matrix(&random_word(seed.derive(t as u64), n));
                    (m.trace().to_f64().unwrap_or(f64::INFINITY), geodesic_length(&m))
                })
                .collect();
            let traces: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let lengths: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let ts = Summary::of(&traces);
            let ls = Summary::of(&lengths);
            report = ExperimentReport::new("trace_stats", params, seed).with_summary(json!({
                "words": params.samples,
                "trace": ts,
                "exact_trace_mean": exact_mean,
                "exact_trace_variance": exact_var,
                "length": ls,
                "mean_length_per_letter": ls.mean / n as f64,
                "jensen_bound": jensen,
                "window": window,
            }));
            report.assert(
                "jensen",
                ls.mean <= jensen * (1.0 + 1e-12),
                format!("mean length {} <= {jensen}", ls.mean),
            );
            if n <= EXHAUSTIVE_TRACE_CAP {
                let exhaustive = word_sums(n)?.mean_length();
                report.assert(
                    "agrees_with_exhaustive",
                    (ls.mean - exhaustive).abs() < params.sigmas * ls.standard_error,
                    format!("sampled {} vs exhaustive {exhaustive}, se {}", ls.mean, ls.standard_error),
                );
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    /// Graphs have `2n` vertices.
    pub n_values: Vec<usize>,
    pub samples: usize,
    pub epsilon: f64,
    /// Upper bound asserted for the fraction at the largest size.
    pub final_limit: Option<f64>,
    /// Slack, in standard errors, allowed for an increase between sizes.
    pub sigmas: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            n_values: vec![64, 256, 1024],
            samples: 200,
            epsilon: DEFAULT_EPSILON,
            final_limit: Some(0.01),
            sigmas: 2.0,
        }
    }
}

fn check_sizes(params: &SweepParams) -> Result<()> {
    if params.n_values.len() < 2 || params.samples == 0 || params.n_values.contains(&0) {
        return Err(Error::InvalidParameter("need two or more positive sizes and samples".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub max_len: usize,
    pub hits: u64,
    pub total: u64,
    pub fraction: f64,
    pub standard_error: f64,
    pub graphs_with_hit: usize,
}

fn sweep_row(n: usize, max_len: usize, per_graph: &[(u64, u64)]) -> SweepRow {
    let hits: u64 = per_graph.iter().map(|p| p.0).sum();
    let total: u64 = per_graph.iter().map(|p| p.1).sum();
    let fraction = if total == 0 { 0.0 } else { hits as f64 / total as f64 };
    SweepRow {
        n,
        max_len,
        hits,
        total,
        fraction,
        standard_error: if total == 0 {
            0.0
        } else {
            (fraction * (1.0 - fraction) / total as f64).sqrt()
        },
        graphs_with_hit: per_graph.iter().filter(|p| p.0 > 0).count(),
    }
}

fn sweep<F>(params: &SweepParams, seed: Seed, max_len: impl Fn(usize) -> usize, per_graph: F) -> Result<Vec<SweepRow>>
where
    F: Fn(&RotationGraph, &[Cycle]) -> Result<(u64, u64)> + Sync,
{
    params
        .n_values
        .iter()
        .map(|&n| {
            let len = max_len(n);
            let counts: Vec<(u64, u64)> = (0..params.samples)
                .into_par_iter()
                .map(|trial| {
                    let g = trial_graph(seed, n, trial)?;
                    let cycles = enumerate_cycles(&g, len, CapPolicy::Alpha { epsilon: params.epsilon })?;
                    per_graph(&g, &cycles)
                })
                .collect::<Result<_>>()?;
            Ok(sweep_row(n, len, &counts))
        })
        .collect()
}

/// Fraction of cycles of length at most `log2 n` that disconnect their
/// graph, for each size.
pub fn disconnection_sweep(params: &SweepParams, seed: Seed) -> Result<ExperimentReport> {
    check_sizes(params)?;
    let rows = sweep(
        params,
        seed,
        |n| ((n as f64).log2() + 1e-9).floor() as usize,
        |g, cycles| {
            let hits = cycles.iter().filter(|c| is_disconnecting(g, &[c])).count() as u64;
            Ok((hits, cycles.len() as u64))
        },
    )?;
    let mut report = ExperimentReport::new("disconnection_sweep", params, seed).with_summary(json!({ "rows": rows }));
    for w in rows.windows(2) {
        let se = (w[0].standard_error.powi(2) + w[1].standard_error.powi(2)).sqrt();
        report.assert(
            &format!("non_increasing_{}_{}", w[0].n, w[1].n),
            w[1].fraction <= w[0].fraction + params.sigmas * se,
            format!("{} -> {} (se {se})", w[0].fraction, w[1].fraction),
        );
    }
    if let Some(limit) = params.final_limit {
        let last = rows.last().expect("two or more rows");
        report.assert(
            "rare_at_largest_size",
            last.fraction < limit,
            format!("fraction {} at n = {} (limit {limit})", last.fraction, last.n),
        );
    }
    Ok(report)
}

/// Fraction of pairs of cycles up to the alpha cutoff whose intersection
/// has two or more components. The cutoff is the enumeration cap of the
/// `2n`-vertex graph.
pub fn intersection_sweep(params: &SweepParams, seed: Seed) -> Result<ExperimentReport> {
    check_sizes(params)?;
    let rows = sweep(
        params,
        seed,
        |n| alpha_cap(2 * n, params.epsilon),
        |_, cycles| {
            let mut hits = 0u64;
            for (a, c1) in cycles.iter().enumerate() {
                for c2 in &cycles[a + 1..] {
                    if intersection_profile(c1, c2)?.components >= 2 {
                        hits += 1;
                    }
                }
            }
            let m = cycles.len() as u64;
            Ok((hits, m * m.saturating_sub(1) / 2))
        },
    )?;
    let mut report = ExperimentReport::new("intersection_sweep", params, seed).with_summary(json!({ "rows": rows }));
    for w in rows.windows(2) {
        report.assert(
            &format!("decreasing_{}_{}", w[0].n, w[1].n),
            w[1].fraction < w[0].fraction,
            format!("{} -> {}", w[0].fraction, w[1].fraction),
        );
    }
    Ok(report)
}
