//! Exact moments of turn-matrix entries over all words of a given length.
//!
//! Over the `2^i` words of length `i`, the top row `(a, b)` of the product
//! runs through the consecutive pairs of the Stern row seeded with `(1, 0)`,
//! and the bottom row `(c, d)` through the pairs of the row seeded with
//! `(0, 1)`. Everything here is exact; floats appear only in the closed
//! forms and in [`MomentTableRow`].
//!
//! The exact engine is [`MomentVector`]: right multiplication by `L` or `R`
//! is a linear substitution on `(a, b, c, d)`, so the sums over all words of
//! the ten quadratic monomials and four entries evolve by one fixed 14×14
//! integer matrix.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest step accepted by [`stern_row`]; row `i` holds `2^i + 1` values.
pub const STERN_STEP_CAP: u32 = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SternRow {
    pub step: u32,
    pub seed: (u64, u64),
    pub values: Vec<u64>,
}

impl SternRow {
    /// The row without its final entry: `2^i` values, the convention under
    /// which the seed-`(1, 0)` row is exactly the multiset of upper-left
    /// entries.
    pub fn without_last(&self) -> &[u64] {
        &self.values[..self.values.len() - 1]
    }

    pub fn sum(&self) -> u128 {
        self.values.iter().map(|&v| v as u128).sum()
    }
}

/// Row `step` of the Stern table started from `seed`: each step keeps the
/// old values and inserts the sum of every neighbouring pair between them.
pub fn stern_row(step: u32, seed: (u64, u64)) -> Result<SternRow> {
    if step > STERN_STEP_CAP {
        return Err(Error::SternStepCap {
            step,
            cap: STERN_STEP_CAP,
        });
    }
    let mut values = vec![seed.0, seed.1];
    for _ in 0..step {
        let mut next = Vec::with_capacity(2 * values.len() - 1);
        for pair in values.windows(2) {
            next.push(pair[0]);
            next.push(pair[0].checked_add(pair[1]).ok_or(Error::Overflow("Stern row"))?);
        }
        next.push(*values.last().expect("row is nonempty"));
        values = next;
    }
    Ok(SternRow { step, seed, values })
}

fn pow_big(base: u32, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Mean diagonal entry over all words of length `i`: `(3^i + 1) / 2^(i+1)`.
pub fn entry_mean(i: u32) -> BigRational {
    ratio(pow_big(3, i) + 1, pow_big(2, i + 1))
}

/// Mean trace over all words of length `i`: `(3^i + 1) / 2^i`.
pub fn trace_mean(i: u32) -> BigRational {
    ratio(pow_big(3, i) + 1, pow_big(2, i))
}

/// `A(i) = Σ x²` and `B(i) = Σ x_j x_(j+1)` over the seed-`(1, 0)` row,
/// from `A(i+1) = 3A(i) + 2B(i) - 1`, `B(i+1) = 2A(i) + 2B(i) - 1` with
/// `A(0) = 1`, `B(0) = 0`.
pub fn power_sums(i: u32) -> (BigUint, BigUint) {
    let mut a = BigUint::one();
    let mut b = BigUint::zero();
    for _ in 0..i {
        let next_a = 3u32 * &a + 2u32 * &b - 1u32;
        let next_b = 2u32 * &a + 2u32 * &b - 1u32;
        a = next_a;
        b = next_b;
    }
    (a, b)
}

/// `A(i)` from the second order recurrence `A(i) = 5A(i-1) - 2A(i-2) - 1`,
/// `A(1) = 2`, `A(2) = 7`. `i >= 1`.
pub fn power_sum_a_second_order(i: u32) -> BigUint {
    assert!(i >= 1, "A(i) recurrence starts at i = 1");
    let (mut prev, mut cur) = (BigUint::from(2u32), BigUint::from(7u32));
    if i == 1 {
        return prev;
    }
    for _ in 2..i {
        let next = 5u32 * &cur - 2u32 * &prev - 1u32;
        prev = cur;
        cur = next;
    }
    cur
}

const SQRT17: f64 = 4.123_105_625_617_661;

/// Closed form for `A(i)` in terms of `(5 ± √17)^i`.
pub fn a_closed_form(i: u32) -> f64 {
    let x = i as i32;
    let up = (5.0 + SQRT17).powi(x);
    let down = (5.0 - SQRT17).powi(x);
    let num = 17.0 * 2f64.powi(x) * (SQRT17 - 5.0) + up * (6.0 * SQRT17 - 34.0) + down * (11.0 * SQRT17 - 51.0);
    2f64.powi(-x - 1) * num / (17.0 * (SQRT17 - 5.0))
}

/// Closed form for `C(i)`, the sum of diagonal products over all words.
pub fn c_closed_form(i: u32) -> f64 {
    let x = i as i32;
    let up = (5.0 + SQRT17).powi(x);
    let down = (5.0 - SQRT17).powi(x);
    (17.0 * 2f64.powi(2 * x + 1) - (SQRT17 - 17.0) * up + down * (17.0 + SQRT17)) * 2f64.powi(-x - 2) / 17.0
}

/// Closed form for the covariance of the two diagonal entries.
pub fn covariance_closed_form(i: u32) -> f64 {
    let x = i as i32;
    let up = (5.0 + SQRT17).powi(x);
    let down = (5.0 - SQRT17).powi(x);
    let poly = -1.0 + 2f64.powi(2 * x + 1) - 2.0 * 3f64.powi(x) - 9f64.powi(x);
    (17.0 * poly - (SQRT17 - 17.0) * up + down * (17.0 + SQRT17)) / (17.0 * 4f64.powi(x + 1))
}

/// Closed form for the trace variance.
pub fn trace_variance_closed_form(i: u32) -> f64 {
    let x = i as i32;
    4f64.powi(-x)
        * (-1.0 + 2f64.powi(x) - 2.0 * 3f64.powi(x) + 4f64.powi(x) - 9f64.powi(x)
            + (5.0 - SQRT17).powi(x)
            + (5.0 + SQRT17).powi(x))
}

/// Limit of the diagonal correlation: `(51 - 11√17) / (34 - 6√17)`.
pub fn correlation_limit() -> f64 {
    (51.0 - 11.0 * SQRT17) / (34.0 - 6.0 * SQRT17)
}

/// Index into [`MomentVector::sums`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monomial {
    Quadratic(usize, usize),
    Linear(usize),
}

pub const MOMENT_DIM: usize = 14;

fn quad_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // aa ab ac ad bb bc bd cc cd dd
    const OFFSET: [usize; 4] = [0, 4, 7, 9];
    OFFSET[i] + (j - i)
}

fn monomial_index(m: Monomial) -> usize {
    match m {
        Monomial::Quadratic(i, j) => quad_index(i, j),
        Monomial::Linear(i) => 10 + i,
    }
}

fn monomials() -> [Monomial; MOMENT_DIM] {
    let mut out = [Monomial::Linear(0); MOMENT_DIM];
    for i in 0..4 {
        for j in i..4 {
            out[quad_index(i, j)] = Monomial::Quadratic(i, j);
        }
        out[10 + i] = Monomial::Linear(i);
    }
    out
}

/// Substitutions `(a, b, c, d) -> new entries` as linear forms.
const SUBST_L: [[u64; 4]; 4] = [[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]];
const SUBST_R: [[u64; 4]; 4] = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]];

/// `T[new][old]`: coefficient of old monomial sum in the new one, summed
/// over the two letters.
fn transfer() -> &'static [[u64; MOMENT_DIM]; MOMENT_DIM] {
    static T: OnceLock<[[u64; MOMENT_DIM]; MOMENT_DIM]> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [[0u64; MOMENT_DIM]; MOMENT_DIM];
        for subst in [SUBST_L, SUBST_R] {
            for (row, m) in monomials().iter().enumerate() {
                match *m {
                    Monomial::Linear(i) => {
                        for (k, &coef) in subst[i].iter().enumerate() {
                            t[row][monomial_index(Monomial::Linear(k))] += coef;
                        }
                    }
                    Monomial::Quadratic(i, j) => {
                        for (k, &ck) in subst[i].iter().enumerate() {
                            for (l, &cl) in subst[j].iter().enumerate() {
                                t[row][quad_index(k, l)] += ck * cl;
                            }
                        }
                    }
                }
            }
        }
        t
    })
}

/// Exact sums over all `2^step` words of `a², ab, ac, ad, b², bc, bd, c²,
/// cd, d²` followed by `a, b, c, d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentVector {
    pub step: u32,
    pub sums: [BigUint; MOMENT_DIM],
}

impl MomentVector {
    /// The single empty word: the identity matrix.
    pub fn identity() -> Self {
        let mut sums: [BigUint; MOMENT_DIM] = Default::default();
        sums[quad_index(0, 0)] = BigUint::one();
        sums[quad_index(0, 3)] = BigUint::one();
        sums[quad_index(3, 3)] = BigUint::one();
        sums[10] = BigUint::one();
        sums[13] = BigUint::one();
        MomentVector { step: 0, sums }
    }

    pub fn at(step: u32) -> Self {
        let mut v = Self::identity();
        for _ in 0..step {
            v = v.step();
        }
        v
    }

    pub fn step(&self) -> MomentVector {
        let t = transfer();
        let sums = std::array::from_fn(|row| {
            let mut acc = BigUint::zero();
            for (col, &coef) in t[row].iter().enumerate() {
                if coef != 0 {
                    acc += &self.sums[col] * coef;
                }
            }
            acc
        });
        MomentVector {
            step: self.step + 1,
            sums,
        }
    }

    pub fn get(&self, m: Monomial) -> &BigUint {
        &self.sums[monomial_index(m)]
    }

    pub fn word_count(&self) -> BigUint {
        BigUint::one() << self.step
    }

    pub fn trace_sum(&self) -> BigUint {
        self.get(Monomial::Linear(0)) + self.get(Monomial::Linear(3))
    }

    pub fn trace_sq_sum(&self) -> BigUint {
        self.get(Monomial::Quadratic(0, 0))
            + 2u32 * self.get(Monomial::Quadratic(0, 3))
            + self.get(Monomial::Quadratic(3, 3))
    }

    /// `A(i)`: sum of squared upper-left entries.
    pub fn a_sum(&self) -> &BigUint {
        self.get(Monomial::Quadratic(0, 0))
    }

    /// `B(i)`: sum of `a·b`, i.e. of neighbouring products in the Stern row.
    pub fn b_sum(&self) -> &BigUint {
        self.get(Monomial::Quadratic(0, 1))
    }

    /// `C(i)`: sum of diagonal products `a·d`.
    pub fn c_sum(&self) -> &BigUint {
        self.get(Monomial::Quadratic(0, 3))
    }

    fn mean_of(&self, sum: &BigUint) -> BigRational {
        ratio(BigInt::from(sum.clone()), BigInt::from(self.word_count()))
    }

    pub fn entry_mean(&self) -> BigRational {
        self.mean_of(self.get(Monomial::Linear(0)))
    }

    pub fn trace_mean(&self) -> BigRational {
        self.mean_of(&self.trace_sum())
    }

    pub fn entry_variance(&self) -> BigRational {
        let m = self.entry_mean();
        self.mean_of(self.a_sum()) - &m * &m
    }

    pub fn covariance(&self) -> BigRational {
        let mu_a = self.entry_mean();
        let mu_d = self.mean_of(self.get(Monomial::Linear(3)));
        self.mean_of(self.c_sum()) - mu_a * mu_d
    }

    pub fn trace_variance(&self) -> BigRational {
        let m = self.trace_mean();
        self.mean_of(&self.trace_sq_sum()) - &m * &m
    }

    /// Correlation of the two diagonal entries; `None` when the variance
    /// vanishes (`i <= 1`).
    pub fn correlation(&self) -> Option<f64> {
        let var = self.entry_variance();
        if var.is_zero() {
            return None;
        }
        // Var(a) = Var(d) because the two Stern rows are mirror images
        let r = self.covariance() / var;
        rational_to_f64(&r)
    }
}

/// Accurate conversion of a big rational to `f64`.
pub fn rational_to_f64(r: &BigRational) -> Option<f64> {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return Some(n / d);
        }
    }
    // scale into range: keep 64 significant bits of each side
    let nb = r.numer().magnitude().bits() as i64;
    let db = r.denom().bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (r.numer().abs() >> ns as usize).to_f64()?;
    let d = (r.denom() >> ds as usize).to_f64()?;
    let v = n / d * 2f64.powi((ns - ds) as i32);
    Some(if r.is_negative() { -v } else { v })
}

/// `C(i)` from the moment engine.
pub fn diag_product_sum(i: u32) -> BigUint {
    MomentVector::at(i).c_sum().clone()
}

/// Diagonal products `a·d` of all words of length `i`, generated level by
/// level without forming matrices.
///
/// Node `j` at a level is the word whose letters are the bits of `j`
/// (`L = 0`, first letter most significant). A child that repeats the
/// node's last letter adds the same amount the node added; a child that
/// switches letter adds `value(node) + value(sibling) - 1`. The two words of
/// length 1 have product 1 and added 0.
pub fn diag_product_tree(i: u32) -> Result<Vec<u64>> {
    if i == 0 {
        return Ok(vec![1]);
    }
    if i > 26 {
        return Err(Error::ExhaustiveCap { len: i, cap: 26 });
    }
    // (value, addend that produced it)
    let mut level: Vec<(u64, u64)> = vec![(1, 0), (1, 0)];
    for _ in 1..i {
        let mut next = Vec::with_capacity(2 * level.len());
        for (j, &(value, added)) in level.iter().enumerate() {
            let last_is_r = j & 1 == 1;
            let sibling = level[j ^ 1].0;
            let same = (value.checked_add(added).ok_or(Error::Overflow("diagonal tree"))?, added);
            let switch_add = (value + sibling).checked_sub(1).ok_or(Error::Overflow("diagonal tree"))?;
            let switched = (
                value.checked_add(switch_add).ok_or(Error::Overflow("diagonal tree"))?,
                switch_add,
            );
            if last_is_r {
                next.push(switched);
                next.push(same);
            } else {
                next.push(same);
                next.push(switched);
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(|(v, _)| v).collect())
}

pub fn trace_covariance(i: u32) -> BigRational {
    MomentVector::at(i).covariance()
}

pub fn trace_variance(i: u32) -> BigRational {
    MomentVector::at(i).trace_variance()
}

/// First step at which the diagonal covariance is positive.
pub fn covariance_sign_change() -> u32 {
    let mut v = MomentVector::identity();
    loop {
        v = v.step();
        if v.covariance().is_positive() {
            return v.step;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTableRow {
    pub step: u32,
    pub entry_mean: f64,
    pub trace_mean: f64,
    pub trace_variance: f64,
    pub covariance: f64,
    pub correlation: Option<f64>,
}

/// Table rows for steps `1..=steps`.
pub fn moment_table(steps: u32) -> Vec<MomentTableRow> {
    let mut v = MomentVector::identity();
    let mut rows = Vec::with_capacity(steps as usize);
    for _ in 0..steps {
        v = v.step();
        let f = |r: BigRational| rational_to_f64(&r).expect("finite moment");
        rows.push(MomentTableRow {
            step: v.step,
            entry_mean: f(v.entry_mean()),
            trace_mean: f(v.trace_mean()),
            trace_variance: f(v.trace_variance()),
            covariance: f(v.covariance()),
            correlation: v.correlation(),
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_rows() {
        assert_eq!(stern_row(0, (1, 0)).unwrap().values, vec![1, 0]);
        assert_eq!(stern_row(2, (1, 0)).unwrap().values, vec![1, 2, 1, 1, 0]);
        assert_eq!(stern_row(3, (1, 0)).unwrap().values, vec![1, 3, 2, 3, 1, 2, 1, 1, 0]);
        assert!(matches!(stern_row(31, (1, 0)), Err(Error::SternStepCap { .. })));
        assert!(matches!(stern_row(3, (u64::MAX, 1)), Err(Error::Overflow(_))));
    }

    #[test]
    fn row_sums_and_reflection() {
        for i in 0..=20 {
            let up = stern_row(i, (1, 0)).unwrap();
            let s: u128 = up.without_last().iter().map(|&v| v as u128).sum();
            assert_eq!(s, (3u128.pow(i) + 1) / 2);
            let mut low = stern_row(i, (0, 1)).unwrap().values;
            low.reverse();
            assert_eq!(low, up.values);
        }
    }

    #[test]
    fn neighbours_are_coprime() {
        let row = stern_row(12, (1, 0)).unwrap();
        for w in row.values.windows(2) {
            assert_eq!(num_integer::gcd(w[0], w[1]), 1);
        }
    }

    #[test]
    fn means() {
        assert_eq!(entry_mean(1), q(1, 1));
        assert_eq!(entry_mean(2), q(5, 4));
        assert_eq!(entry_mean(10), q(59050, 2048));
        assert_eq!(trace_mean(1), q(2, 1));
        assert_eq!(trace_mean(2), q(5, 2));
        assert_eq!(trace_mean(3), q(7, 2));
    }

    #[test]
    fn entry_mean_matches_row_mean() {
        for i in 0..=16 {
            let row = stern_row(i, (1, 0)).unwrap();
            let vals = row.without_last();
            let sum: i64 = vals.iter().map(|&v| v as i64).sum();
            assert_eq!(entry_mean(i), q(sum, vals.len() as i64));
        }
    }

    #[test]
    fn power_sum_routes_agree() {
        assert_eq!(power_sums(1), (2u32.into(), 1u32.into()));
        assert_eq!(power_sums(2).0, 7u32.into());
        assert_eq!(power_sums(3).0, 30u32.into());
        for i in 1..=40 {
            let (a, b) = power_sums(i);
            assert_eq!(a, power_sum_a_second_order(i), "i={i}");
            let mv = MomentVector::at(i);
            assert_eq!(&a, mv.a_sum());
            assert_eq!(&b, mv.b_sum());
        }
        for i in 0..=14 {
            let row = stern_row(i, (1, 0)).unwrap().values;
            let a: u64 = row.iter().map(|v| v * v).sum();
            let b: u64 = row.windows(2).map(|w| w[0] * w[1]).sum();
            assert_eq!(power_sums(i), (a.into(), b.into()));
        }
    }

    #[test]
    fn closed_forms_track_exact_values() {
        for i in 1..=40 {
            let a = power_sums(i).0.to_f64().unwrap();
            assert!((a_closed_form(i) - a).abs() / a < 1e-9, "A({i})");
            let c = diag_product_sum(i).to_f64().unwrap();
            assert!((c_closed_form(i) - c).abs() / c < 1e-9, "C({i})");
        }
        assert!((c_closed_form(3) - 22.0).abs() / 22.0 < 1e-9);
    }

    #[test]
    fn diagonal_products() {
        assert_eq!(diag_product_sum(1), 2u32.into());
        assert_eq!(diag_product_sum(2), 6u32.into());
        assert_eq!(diag_product_sum(3), 22u32.into());
        assert_eq!(diag_product_tree(3).unwrap(), vec![1, 3, 4, 3, 3, 4, 3, 1]);
        for i in 1..=18 {
            let s: u64 = diag_product_tree(i).unwrap().iter().sum();
            assert_eq!(BigUint::from(s), diag_product_sum(i));
        }
    }

    #[test]
    fn covariance_and_variance_small() {
        assert_eq!(trace_covariance(1), q(0, 1));
        assert_eq!(trace_variance(1), q(0, 1));
        assert_eq!(trace_variance(2), q(1, 4));
        assert_eq!(trace_covariance(2), q(-1, 16));
        for i in 1..=40 {
            let cov = rational_to_f64(&trace_covariance(i)).unwrap();
            let cf = covariance_closed_form(i);
            assert!((cov - cf).abs() <= 1e-9 * cov.abs().max(1.0), "cov {i}: {cov} vs {cf}");
            let var = rational_to_f64(&trace_variance(i)).unwrap();
            let vf = trace_variance_closed_form(i);
            assert!((var - vf).abs() <= 1e-9 * var.abs().max(1.0), "var {i}");
        }
    }

    #[test]
    fn covariance_changes_sign() {
        assert_eq!(covariance_sign_change(), 21);
        assert!(trace_covariance(20).is_negative());
    }

    #[test]
    fn correlation_tends_to_limit() {
        assert!((correlation_limit() - 0.609_611_796_797_792).abs() < 1e-12);
        let far = MomentVector::at(500).correlation().unwrap();
        assert!((far - correlation_limit()).abs() < 1e-3);
        assert_eq!(MomentVector::at(1).correlation(), None);
    }

    #[test]
    fn engine_basics() {
        let one = MomentVector::identity().step();
        assert_eq!(one.trace_sum(), 4u32.into());
        assert_eq!(one.trace_mean(), q(2, 1));
        assert_eq!(MomentVector::at(2).c_sum(), &BigUint::from(6u32));
        // Σd² equals Σa² by reflection
        let v = MomentVector::at(17);
        assert_eq!(v.get(Monomial::Quadratic(3, 3)), v.a_sum());
    }

    #[test]
    fn huge_rational_conversion() {
        let v = MomentVector::at(700);
        let m = rational_to_f64(&v.trace_mean()).unwrap();
        let expect = 1.5f64.powi(700);
        assert!((m - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn table_rows() {
        let t = moment_table(3);
        assert_eq!(t.len(), 3);
        assert_eq!(t[1].trace_variance, 0.25);
        assert_eq!(t[2].trace_mean, 3.5);
    }
}
