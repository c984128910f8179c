//! Small descriptive statistics and goodness-of-fit helpers.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

use crate::error::{Error, Result};

/// Minimum expected count per bin of a chi-square test.
pub const MIN_EXPECTED: f64 = 5.0;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn standard_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Unbiased sample covariance.
pub fn covariance(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "paired samples");
    if xs.len() < 2 {
        return f64::NAN;
    }
    let (mx, my) = (mean(xs), mean(ys));
    xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Standard error of the sample covariance, from the variance of the
/// centred products.
pub fn covariance_standard_error(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, my) = (mean(xs), mean(ys));
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    standard_error(&prods)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub standard_error: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Summary {
        Summary {
            count: xs.len(),
            mean: mean(xs),
            variance: variance(xs),
            standard_error: standard_error(xs),
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Half-width of the normal 95% interval.
    pub fn ci95(&self) -> f64 {
        1.959_963_984_540_054 * self.standard_error
    }
}

/// Two-sample z statistic with pooled standard error `sqrt(se1² + se2²)`.
pub fn two_sample_z(a: &Summary, b: &Summary) -> f64 {
    (a.mean - b.mean) / (a.standard_error.powi(2) + b.standard_error.powi(2)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareBin {
    /// Inclusive count range; `hi = None` means open-ended.
    pub lo: u64,
    pub hi: Option<u64>,
    pub observed: u64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareFit {
    pub statistic: f64,
    pub degrees_of_freedom: u64,
    pub p_value: f64,
    pub bins: Vec<ChiSquareBin>,
}

/// Chi-square goodness of fit of integer counts against `Poisson(lambda)`
/// with the mean known. Bins are merged from both ends until every expected
/// count reaches [`MIN_EXPECTED`]; the last bin is open-ended.
pub fn poisson_chi_square(counts: &[u64], lambda: f64) -> Result<ChiSquareFit> {
    if counts.is_empty() {
        return Err(Error::InvalidParameter("chi-square needs samples".into()));
    }
    let dist = Poisson::new(lambda).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let total = counts.len() as f64;
    let max_count = counts.iter().copied().max().unwrap_or(0);
    let mut observed = vec![0u64; max_count as usize + 2];
    for &c in counts {
        observed[c as usize] += 1;
    }
    // singleton bins up to max_count, then the tail above it
    let mut bins: Vec<ChiSquareBin> = (0..=max_count)
        .map(|k| ChiSquareBin {
            lo: k,
            hi: Some(k),
            observed: observed[k as usize],
            expected: total * dist.pmf(k),
        })
        .collect();
    let covered: f64 = bins.iter().map(|b| b.expected).sum();
    bins.push(ChiSquareBin {
        lo: max_count + 1,
        hi: None,
        observed: 0,
        expected: (total - covered).max(0.0),
    });

    let merge = |into: &mut ChiSquareBin, from: ChiSquareBin| {
        into.lo = into.lo.min(from.lo);
        into.hi = match (into.hi, from.hi) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        into.observed += from.observed;
        into.expected += from.expected;
    };
    // merge the upper tail downward
    while bins.len() > 1 && bins.last().expect("nonempty").expected < MIN_EXPECTED {
        let last = bins.pop().expect("nonempty");
        merge(bins.last_mut().expect("nonempty"), last);
    }
    // merge the lower tail upward
    while bins.len() > 1 && bins[0].expected < MIN_EXPECTED {
        let first = bins.remove(0);
        merge(&mut bins[0], first);
    }
    if bins.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "too few samples for a chi-square test at lambda = {lambda}"
        )));
    }
    let statistic: f64 = bins
        .iter()
        .map(|b| (b.observed as f64 - b.expected).powi(2) / b.expected)
        .sum();
    let dof = bins.len() as u64 - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(ChiSquareFit {
        statistic,
        degrees_of_freedom: dof,
        p_value: chi.sf(statistic),
        bins,
    })
}

/// Chi-square test of categorical counts against equal probabilities.
pub fn uniform_chi_square(observed: &[u64]) -> Result<ChiSquareFit> {
    if observed.len() < 2 {
        return Err(Error::InvalidParameter("need at least two categories".into()));
    }
    let total: u64 = observed.iter().sum();
    let expected = total as f64 / observed.len() as f64;
    let statistic = observed
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let dof = observed.len() as u64 - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(ChiSquareFit {
        statistic,
        degrees_of_freedom: dof,
        p_value: chi.sf(statistic),
        bins: observed
            .iter()
            .enumerate()
            .map(|(i, &o)| ChiSquareBin {
                lo: i as u64,
                hi: Some(i as u64),
                observed: o,
                expected,
            })
            .collect(),
    })
}
