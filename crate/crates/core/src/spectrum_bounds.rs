//! Analytic bounds: the expected-systole series, growth factors for the
//! diagonal entry of a random word, and the linear length window.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exhaustive::word_sums;
use crate::turn_matrix::{Turn, TurnWord};

/// Growth factor reached with blocks of 15 letters.
pub const GROWTH_15: f64 = 1.43925;
pub const DEFAULT_UPPER_KMAX: u32 = 60;
pub const DEFAULT_LOWER_KMAX: u32 = 20;
pub const LOWER_KMAX_CAP: u32 = 24;
pub const GROWTH_BLOCK_CAP: u32 = 20;
/// Terms summed past `k_max` to estimate the tail of the upper series.
const REMAINDER_TERMS: u32 = 20;

/// Which fraction of orientations of a `k`-cycle is counted as nontrivial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPolicy {
    /// `(2^(k-2) - 1) / 2^(k-2)`.
    #[default]
    Printed,
    /// `(2^k - 2) / 2^k`: every orientation except the two uniform ones.
    AllButUniform,
}

impl WeightPolicy {
    pub fn nontrivial_fraction(self, k: u32) -> f64 {
        match self {
            WeightPolicy::Printed => {
                let m = 2f64.powi(k as i32 - 2);
                (m - 1.0) / m
            }
            WeightPolicy::AllButUniform => {
                let m = 2f64.powi(k as i32);
                (m - 2.0) / m
            }
        }
    }
}

/// Which words enter the exhaustive mean length of the lower series.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerConditioning {
    /// All `2^k` words; the uniform ones contribute length 0.
    #[default]
    AllWords,
    /// Only the `2^k - 2` non-uniform words.
    ExcludeUniform,
}

/// Poisson mean of the number of `k`-cycles: `2^k / 2k`.
pub fn lambda(k: u32) -> f64 {
    2f64.powi(k as i32) / (2.0 * k as f64)
}

/// Probability that a `k`-cycle carrying a nontrivial geodesic exists.
pub fn p_k(k: u32, policy: WeightPolicy) -> f64 {
    if k < 2 {
        return 0.0;
    }
    policy.nontrivial_fraction(k) * -(-lambda(k)).exp_m1()
}

/// `2 arccosh` of the mean diagonal entry `(3^k + 1) / 2^(k+1)`.
pub fn mean_trace_length(k: u32) -> f64 {
    let half_trace = (3f64.powi(k as i32) + 1.0) / 2f64.powi(k as i32 + 1);
    2.0 * half_trace.acosh()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystoleSeriesTerm {
    pub k: u32,
    pub p: f64,
    /// `Π_{2<=j<k} (1 - p(j))`.
    pub survival: f64,
    pub weight: f64,
    pub length_term: f64,
    pub partial_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystoleSeries {
    pub k_max: u32,
    pub policy: WeightPolicy,
    pub terms: Vec<SystoleSeriesTerm>,
    pub value: f64,
    pub remainder_estimate: f64,
}

fn series(k_max: u32, policy: WeightPolicy, length_term: impl Fn(u32) -> f64) -> Vec<SystoleSeriesTerm> {
    let mut survival = 1.0;
    let mut total = 0.0;
    let mut terms = Vec::new();
    for k in 2..=k_max {
        let p = p_k(k, policy);
        let weight = p * survival;
        let length_term = length_term(k);
        total += weight * length_term;
        terms.push(SystoleSeriesTerm {
            k,
            p,
            survival,
            weight,
            length_term,
            partial_sum: total,
        });
        survival *= 1.0 - p;
    }
    terms
}

/// Upper series `Σ_k p(k) Π_{j<k}(1 - p(j)) · 2 arccosh((3^k + 1) / 2^(k+1))`.
pub fn systole_upper(k_max: u32, policy: WeightPolicy) -> Result<SystoleSeries> {
    if k_max < 3 {
        return Err(Error::InvalidParameter(format!("upper series needs k_max >= 3, got {k_max}")));
    }
    let extended = series(k_max + REMAINDER_TERMS, policy, mean_trace_length);
    let terms = extended[..(k_max - 1) as usize].to_vec();
    let value = terms.last().map_or(0.0, |t| t.partial_sum);
    let remainder_estimate = extended.last().map_or(0.0, |t| t.partial_sum) - value;
    Ok(SystoleSeries {
        k_max,
        policy,
        terms,
        value,
        remainder_estimate,
    })
}

/// Exhaustive mean of `2 arccosh(tr / 2)` over words of length `k`.
pub fn mean_word_length(k: u32, conditioning: LowerConditioning) -> Result<f64> {
    let sums = word_sums(k)?;
    Ok(match conditioning {
        LowerConditioning::AllWords => sums.mean_length(),
        LowerConditioning::ExcludeUniform => sums.mean_length_nonuniform(),
    })
}

/// Lower series: the same weights against exhaustive mean lengths.
pub fn systole_lower(k_max: u32, policy: WeightPolicy, conditioning: LowerConditioning) -> Result<SystoleSeries> {
    if !(2..=LOWER_KMAX_CAP).contains(&k_max) {
        return Err(Error::InvalidParameter(format!(
            "lower series needs 2 <= k_max <= {LOWER_KMAX_CAP}, got {k_max}"
        )));
    }
    let means: Vec<f64> = (2..=k_max)
        .into_par_iter()
        .map(|k| mean_word_length(k, conditioning))
        .collect::<Result<_>>()?;
    let terms = series(k_max, policy, |k| means[(k - 2) as usize]);
    let value = terms.last().map_or(0.0, |t| t.partial_sum);
    Ok(SystoleSeries {
        k_max,
        policy,
        terms,
        value,
        remainder_estimate: 0.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthMethod {
    CubicRadical,
    Enumerated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthBound {
    pub block: u32,
    pub factor: f64,
    pub method: GrowthMethod,
}

/// Effect of one block on the top row `(x, y)`: the new `y` is
/// `alpha·x + beta·y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockMultiplier {
    pub word: u64,
    pub alpha: u64,
    pub beta: u64,
}

impl BlockMultiplier {
    /// Guaranteed growth of `y` when `x < y`.
    pub fn when_smaller(self) -> u64 {
        self.beta
    }

    /// Guaranteed growth of `y` when `x > y`.
    pub fn when_larger(self) -> u64 {
        self.alpha + self.beta
    }
}

pub fn block_multipliers(block: u32) -> Result<Vec<BlockMultiplier>> {
    if block == 0 || block > GROWTH_BLOCK_CAP {
        return Err(Error::BlockSize {
            block,
            cap: GROWTH_BLOCK_CAP,
        });
    }
    Ok((0..1u64 << block)
        .map(|bits| {
            let word = TurnWord::from_bits(bits, block).expect("block is nonempty");
            // x and y as linear forms in the starting pair
            let (mut x, mut y) = ((1u64, 0u64), (0u64, 1u64));
            for &t in word.letters() {
                match t {
                    Turn::L => y = (x.0 + y.0, x.1 + y.1),
                    Turn::R => x = (x.0 + y.0, x.1 + y.1),
                }
            }
            BlockMultiplier {
                word: bits,
                alpha: y.0,
                beta: y.1,
            }
        })
        .collect())
}

/// Per-letter geometric-mean growth of the tracked entry, enumerating all
/// blocks of `block` letters from each of the two order states, each state
/// weighted one half.
pub fn growth_lower_bound(block: u32) -> Result<GrowthBound> {
    let table = block_multipliers(block)?;
    let log_sum: f64 = table
        .iter()
        .map(|m| (m.when_smaller() as f64).ln() + (m.when_larger() as f64).ln())
        .sum();
    let factor = (log_sum / (2.0 * table.len() as f64 * block as f64)).exp();
    Ok(GrowthBound {
        block,
        factor,
        method: GrowthMethod::Enumerated,
    })
}

/// `2^(37/320) 3^(1/16) 5^(3/80) 7^(1/40) 11^(1/80) 13^(1/160)`.
pub fn cubic_radical_value() -> f64 {
    let factors: [(f64, f64); 6] = [
        (2.0, 37.0 / 320.0),
        (3.0, 1.0 / 16.0),
        (5.0, 3.0 / 80.0),
        (7.0, 1.0 / 40.0),
        (11.0, 1.0 / 80.0),
        (13.0, 1.0 / 160.0),
    ];
    factors.iter().map(|(p, e)| p.powf(*e)).product()
}

pub fn cubic_radical() -> GrowthBound {
    GrowthBound {
        block: 5,
        factor: cubic_radical_value(),
        method: GrowthMethod::CubicRadical,
    }
}

/// Asymptotic window `(N ln 1.43925, N ln 1.5)` for the mean length of a
/// random word of length `N`. Finite-`N` means may sit below it.
pub fn length_window(n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("length window needs N >= 1".into()));
    }
    let n = n as f64;
    Ok((n * GROWTH_15.ln(), n * 1.5f64.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        assert_eq!(p_k(2, WeightPolicy::Printed), 0.0);
        assert!((p_k(3, WeightPolicy::Printed) - 0.368_201).abs() < 1e-5);
        assert!((mean_trace_length(3) - 2.317_620_720_86).abs() < 1e-9);
        assert!((lambda(4) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn upper_series() {
        let s = systole_upper(60, WeightPolicy::Printed).unwrap();
        assert!((s.value - 3.085).abs() < 0.01, "{}", s.value);
        let s40 = systole_upper(40, WeightPolicy::Printed).unwrap();
        assert!((s.value - s40.value).abs() < 1e-6);
        assert!(s.remainder_estimate >= 0.0 && s.remainder_estimate < 1e-12);
        for w in s.terms.windows(2) {
            assert!(w[1].partial_sum >= w[0].partial_sum);
            assert!(w[1].survival <= w[0].survival);
        }
        let weights: f64 = s.terms.iter().map(|t| t.weight).sum();
        assert!(weights <= 1.0 + 1e-12);
        assert!(s.terms.last().unwrap().survival < 1e-12);
        assert!(systole_upper(2, WeightPolicy::Printed).is_err());
    }

    #[test]
    fn alternative_weight_differs() {
        let alt = systole_upper(60, WeightPolicy::AllButUniform).unwrap().value;
        assert!((alt - 2.3586).abs() < 1e-3, "{alt}");
    }

    #[test]
    fn lower_series_small() {
        let s = systole_lower(12, WeightPolicy::Printed, LowerConditioning::AllWords).unwrap();
        assert_eq!(s.terms[0].k, 2);
        assert_eq!(s.terms[0].weight, 0.0);
        let upper = systole_upper(12, WeightPolicy::Printed).unwrap();
        assert!(s.value <= upper.value);
        assert!(systole_lower(25, WeightPolicy::Printed, LowerConditioning::AllWords).is_err());
    }

    #[test]
    fn exclude_uniform_length_three() {
        let expect = 2.0 * 2f64.acosh();
        let l = mean_word_length(3, LowerConditioning::ExcludeUniform).unwrap();
        assert!((l - expect).abs() < 1e-14);
    }

    #[test]
    fn jensen_per_length() {
        for k in 2..=16 {
            let mean = mean_word_length(k, LowerConditioning::AllWords).unwrap();
            assert!(mean <= mean_trace_length(k) * (1.0 + 1e-12), "k={k}");
        }
    }

    #[test]
    fn growth() {
        assert!((cubic_radical_value() - 1.35502).abs() < 1e-5);
        let b5 = growth_lower_bound(5).unwrap().factor;
        assert!((b5 - cubic_radical_value()).abs() < 1e-12, "{b5}");
        let b2 = growth_lower_bound(2).unwrap().factor;
        assert!(b2 > 2f64.powf(0.25) && b2 < 1.5);
        assert!(matches!(growth_lower_bound(21), Err(Error::BlockSize { .. })));
        assert!(matches!(growth_lower_bound(0), Err(Error::BlockSize { .. })));
    }

    #[test]
    fn two_letter_doubling() {
        // from x > y three of four blocks at least double y; from x < y one does
        let t = block_multipliers(2).unwrap();
        assert_eq!(t.iter().filter(|m| m.when_larger() >= 2).count(), 3);
        assert_eq!(t.iter().filter(|m| m.when_smaller() >= 2).count(), 1);
    }

    #[test]
    fn window() {
        let (lo, hi) = length_window(10).unwrap();
        assert!((lo - 3.641_221).abs() < 1e-5 && (hi - 4.054_651).abs() < 1e-5);
        let (lo, hi) = length_window(1).unwrap();
        assert!((lo - 0.364_122).abs() < 1e-6 && (hi - 0.405_465).abs() < 1e-6);
        assert!(length_window(0).is_err());
    }
}
