//! Acceptance suite: one test per criterion, each printing a single
//! `PASS`/`FAIL` line to the real stdout (bypassing libtest capture) so the
//! verdicts show up in plain `cargo test` output.

use std::io::Write;

use belyi_core::experiments::{
    disconnection_sweep, empirical_systole, intersection_sweep, ordered_geodesics, poisson_fit, trace_stats,
    CapSetting, OrderedParams, PoissonParams, SweepParams, SystoleParams, TraceMode, TraceParams,
};
use belyi_core::report::ExperimentReport;
use belyi_core::spectrum_bounds::{
    growth_lower_bound, cubic_radical_value, systole_lower, systole_upper, LowerConditioning, WeightPolicy,
};
use belyi_core::stern_moments::{
    a_closed_form, c_closed_form, correlation_limit, diag_product_sum, entry_mean, power_sums, rational_to_f64,
    trace_covariance, trace_mean, trace_variance, MomentVector,
};
use belyi_core::Seed;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn verdict(id: u32, passed: bool, detail: &str) {
    let line = format!("ACCEPTANCE {id:>2} {} {detail}\n", if passed { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(passed, "criterion {id} failed: {detail}");
}

fn assertion(r: &ExperimentReport, name: &str) -> (bool, String) {
    let a = r
        .assertions
        .iter()
        .find(|a| a.name == name)
        .unwrap_or_else(|| panic!("report {} has no assertion {name}", r.experiment));
    (a.passed, a.detail.clone())
}

/// Sums over all words of length `len`, by direct multiplication.
struct Brute {
    count: u128,
    a: u128,
    d: u128,
    aa: u128,
    ab: u128,
    ad: u128,
    dd: u128,
    tr: u128,
    tr2: u128,
}

fn brute(len: u32) -> Brute {
    let mut s = Brute {
        count: 0,
        a: 0,
        d: 0,
        aa: 0,
        ab: 0,
        ad: 0,
        dd: 0,
        tr: 0,
        tr2: 0,
    };
    for bits in 0u64..1 << len {
        let (mut a, mut b, mut c, mut d) = (1u128, 0u128, 0u128, 1u128);
        for j in (0..len).rev() {
            if bits >> j & 1 == 0 {
                // times [[1,1],[0,1]]
                b += a;
                d += c;
            } else {
                // times [[1,0],[1,1]]
                a += b;
                c += d;
            }
        }
        assert_eq!(a * d - b * c, 1);
        s.count += 1;
        s.a += a;
        s.d += d;
        s.aa += a * a;
        s.ab += a * b;
        s.ad += a * d;
        s.dd += d * d;
        s.tr += a + d;
        s.tr2 += (a + d) * (a + d);
    }
    s
}

fn q(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn criterion_01_exact_moments_match_enumeration() {
    let started = std::time::Instant::now();
    let mut mismatches = Vec::new();
    for i in 1..=20u32 {
        let s = brute(i);
        let n = s.count;
        let mean_a = q(s.a, n);
        let mean_d = q(s.d, n);
        let mean_tr = q(s.tr, n);
        let cov = q(s.ad, n) - &mean_a * &mean_d;
        let var_tr = q(s.tr2, n) - &mean_tr * &mean_tr;
        let (a_sum, b_sum) = power_sums(i);
        let v = MomentVector::at(i);
        let checks = [
            ("trace_mean", trace_mean(i) == mean_tr),
            ("entry_mean", entry_mean(i) == mean_a && entry_mean(i) == mean_d),
            ("A", a_sum == BigUint::from(s.aa) && a_sum == BigUint::from(s.dd)),
            ("B", b_sum == BigUint::from(s.ab)),
            ("C", diag_product_sum(i) == BigUint::from(s.ad)),
            ("covariance", trace_covariance(i) == cov),
            ("trace_variance", trace_variance(i) == var_tr),
            ("engine", v.trace_sq_sum() == BigUint::from(s.tr2)),
        ];
        for (name, ok) in checks {
            if !ok {
                mismatches.push(format!("{name}@{i}"));
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    verdict(
        1,
        mismatches.is_empty() && secs < 300.0,
        &format!("exact moments for i <= 20, mismatches {mismatches:?}, {secs:.1}s"),
    );
}

#[test]
fn criterion_02_closed_forms_and_correlation() {
    let mut worst_a = 0f64;
    let mut worst_c = 0f64;
    for i in 1..=40u32 {
        let a = power_sums(i).0.to_f64().unwrap();
        let c = diag_product_sum(i).to_f64().unwrap();
        worst_a = worst_a.max((a_closed_form(i) - a).abs() / a);
        worst_c = worst_c.max((c_closed_form(i) - c).abs() / c);
    }
    let limit = correlation_limit();
    let rho30 = MomentVector::at(30).correlation().unwrap();
    let forms_ok = worst_a <= 1e-9 && worst_c <= 1e-9;
    let rho_ok = (rho30 - limit).abs() <= 0.005;
    verdict(
        2,
        forms_ok && rho_ok,
        &format!(
            "closed forms max rel err A {worst_a:.2e}, C {worst_c:.2e}; correlation(30) = {rho30:.6} vs limit {limit:.6} (|diff| {:.4}, tol 0.005)",
            (rho30 - limit).abs()
        ),
    );
}

#[test]
fn criterion_03_systole_series() {
    let upper = systole_upper(60, WeightPolicy::Printed).unwrap().value;
    let lower = systole_lower(20, WeightPolicy::Printed, LowerConditioning::AllWords).unwrap().value;
    let upper_alt = systole_upper(60, WeightPolicy::AllButUniform).unwrap().value;
    let lower_excl = systole_lower(20, WeightPolicy::Printed, LowerConditioning::ExcludeUniform)
        .unwrap()
        .value;
    let ok = (upper - 3.085).abs() <= 0.01 && (lower - 2.809).abs() <= 0.01;
    verdict(
        3,
        ok,
        &format!(
            "upper(60) = {upper:.6}, lower(20) = {lower:.6}; alternatives: upper all-but-uniform {upper_alt:.6}, lower excluding uniform {lower_excl:.6}"
        ),
    );
}

#[test]
fn criterion_04_growth_bounds() {
    let radical = cubic_radical_value();
    let b5 = growth_lower_bound(5).unwrap().factor;
    let b15 = growth_lower_bound(15).unwrap().factor;
    let ok = (radical - 1.35502).abs() <= 1e-5
        && (b5 - 1.35502).abs() <= 0.01
        && (b15 - 1.43925).abs() <= 0.01
        && b5 < 1.5
        && b15 < 1.5;
    verdict(4, ok, &format!("radical {radical:.8}, block 5 {b5:.8}, block 15 {b15:.8}"));
}

#[test]
fn criterion_05_poisson_cycle_counts() {
    let started = std::time::Instant::now();
    let params = PoissonParams {
        n: 1000,
        samples: 10_000,
        i_max: 5,
        tested: vec![3, 4, 5],
        ..Default::default()
    };
    let r = poisson_fit(&params, Seed(2024)).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for i in [3, 4, 5] {
        let (chi, _) = assertion(&r, &format!("chi_square_{i}"));
        let (mean, _) = assertion(&r, &format!("mean_{i}"));
        ok &= chi && mean;
        let row = &r.summary["lengths"][i - 1];
        parts.push(format!(
            "X{i}: mean {} (lambda {}), p {}",
            row["mean"], row["lambda"], row["chi_square"]["p_value"]
        ));
    }
    let secs = started.elapsed().as_secs_f64();
    verdict(5, ok, &format!("{}; {secs:.1}s", parts.join("; ")));
}

fn sweep_params() -> SweepParams {
    SweepParams {
        n_values: vec![64, 256, 1024],
        samples: 500,
        ..Default::default()
    }
}

fn fractions(r: &ExperimentReport) -> Vec<String> {
    r.summary["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            format!(
                "n={}: {:.3e} ({}/{}, len <= {})",
                row["n"],
                row["fraction"].as_f64().unwrap(),
                row["hits"],
                row["total"],
                row["max_len"]
            )
        })
        .collect()
}

#[test]
fn criterion_06_disconnecting_cycles_are_rare() {
    let r = disconnection_sweep(&sweep_params(), Seed(606)).unwrap();
    verdict(
        6,
        r.all_passed(),
        &format!("disconnecting fraction {}", fractions(&r).join(", ")),
    );
}

#[test]
fn criterion_07_multi_component_intersections_thin_out() {
    // such pairs are rare at every size, so this needs more graphs
    let params = SweepParams {
        samples: 4000,
        ..sweep_params()
    };
    let r = intersection_sweep(&params, Seed(707)).unwrap();
    verdict(
        7,
        r.all_passed(),
        &format!("pairs with p >= 2 {}", fractions(&r).join(", ")),
    );
}

#[test]
fn criterion_08_empirical_systole() {
    let params = SystoleParams {
        n: 1000,
        samples: 1000,
        max_len: 10,
        ..Default::default()
    };
    let r = empirical_systole(&params, Seed(808)).unwrap();
    let (ok, detail) = assertion(&r, "mean_systole_in_bracket");
    verdict(
        8,
        ok,
        &format!(
            "{detail}; censored fraction {}, all-lengths mean {}",
            r.summary["censored_fraction"], r.summary["systole_all_lengths"]["mean"]
        ),
    );
}

#[test]
fn criterion_09_ordered_lengths_do_not_depend_on_size() {
    let params = OrderedParams {
        n_values: vec![500, 2000],
        samples: 500,
        max_len: 9,
        k: 3,
        z_threshold: Some(2.0),
        ..Default::default()
    };
    let r = ordered_geodesics(&params, Seed(909)).unwrap();
    let details: Vec<String> = r.assertions.iter().map(|a| a.detail.clone()).collect();
    verdict(9, r.all_passed(), &details.join("; "));
}

#[test]
fn criterion_10_reports_independent_of_threads() {
    let seed = Seed(1010);
    let run = |threads: usize| -> Vec<String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let sweep = SweepParams {
                n_values: vec![32, 128],
                samples: 40,
                ..Default::default()
            };
            vec![
                empirical_systole(
                    &SystoleParams {
                        n: 200,
                        samples: 60,
                        max_len: 8,
                        bracket: None,
                        ..Default::default()
                    },
                    seed,
                )
                .unwrap(),
                ordered_geodesics(
                    &OrderedParams {
                        n_values: vec![100, 200],
                        samples: 30,
                        max_len: 7,
                        k: 3,
                        ..Default::default()
                    },
                    seed,
                )
                .unwrap(),
                poisson_fit(
                    &PoissonParams {
                        n: 200,
                        samples: 300,
                        i_max: 5,
                        ..Default::default()
                    },
                    seed,
                )
                .unwrap(),
                trace_stats(
                    &TraceParams {
                        word_len: 16,
                        ..Default::default()
                    },
                    seed,
                )
                .unwrap(),
                trace_stats(
                    &TraceParams {
                        word_len: 40,
                        mode: TraceMode::Sampled,
                        samples: 5000,
                        ..Default::default()
                    },
                    seed,
                )
                .unwrap(),
                disconnection_sweep(&sweep, seed).unwrap(),
                intersection_sweep(&sweep, seed).unwrap(),
                empirical_systole(
                    &SystoleParams {
                        n: 50,
                        samples: 30,
                        max_len: 9,
                        cap: CapSetting::Unchecked,
                        bracket: None,
                        ..Default::default()
                    },
                    seed,
                )
                .unwrap(),
            ]
            .iter()
            .map(ExperimentReport::to_json)
            .collect()
        })
    };
    let one = run(1);
    let eight = run(8);
    let differing: Vec<usize> = (0..one.len()).filter(|&j| one[j] != eight[j]).collect();
    verdict(
        10,
        differing.is_empty(),
        &format!("{} reports compared at 1 and 8 threads, differing {differing:?}", one.len()),
    );
}

#[test]
fn correlation_limit_is_reached_eventually() {
    // the limit itself is right; it is approached slowly
    let rho = MomentVector::at(400).correlation().unwrap();
    assert!((rho - correlation_limit()).abs() < 0.005);
    let gap = |i| (MomentVector::at(i).correlation().unwrap() - correlation_limit()).abs();
    assert!(gap(200) > gap(300));
    assert!(rational_to_f64(&trace_covariance(30)).unwrap() > 0.0);
}
