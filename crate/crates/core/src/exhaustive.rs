//! Exhaustive sweeps over all `2^k` turn words of a fixed length.
//!
//! Words are split by their first few letters into independent subtrees that
//! run in parallel; partial sums come back in prefix order and are folded
//! sequentially, so floating sums are identical for any thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::turn_matrix::{geodesic_length_from_trace, SmallMatrix, Turn};

/// Largest word length accepted by [`word_sums`].
pub const MAX_EXHAUSTIVE_LEN: u32 = 30;

/// Monomial order shared with [`crate::stern_moments::MomentVector`].
pub const QUADRATIC_MONOMIALS: [&str; 10] = ["aa", "ab", "ac", "ad", "bb", "bc", "bd", "cc", "cd", "dd"];

/// Exact integer sums over every word of one length, plus floating length
/// sums accumulated in a fixed order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordSums {
    pub len: u32,
    pub count: u64,
    pub uniform: u64,
    /// `Σa, Σb, Σc, Σd`.
    pub linear: [u128; 4],
    /// Sums of the monomials in [`QUADRATIC_MONOMIALS`] order.
    pub quadratic: [u128; 10],
    pub trace_sum: u128,
    pub trace_sq_sum: u128,
    /// Σ 2 arccosh(tr/2) over all words (uniform words add 0).
    pub length_sum: f64,
}

impl WordSums {
    fn leaf(&mut self, m: SmallMatrix, uniform: bool) {
        let (a, b, c, d) = (m.a as u128, m.b as u128, m.c as u128, m.d as u128);
        self.count += 1;
        self.uniform += uniform as u64;
        self.linear[0] += a;
        self.linear[1] += b;
        self.linear[2] += c;
        self.linear[3] += d;
        let q = [a * a, a * b, a * c, a * d, b * b, b * c, b * d, c * c, c * d, d * d];
        for (acc, v) in self.quadratic.iter_mut().zip(q) {
            *acc += v;
        }
        let t = a + d;
        self.trace_sum += t;
        self.trace_sq_sum += t * t;
        self.length_sum += geodesic_length_from_trace(t as f64);
    }

    fn merge(&mut self, other: &WordSums) {
        self.count += other.count;
        self.uniform += other.uniform;
        for i in 0..4 {
            self.linear[i] += other.linear[i];
        }
        for i in 0..10 {
            self.quadratic[i] += other.quadratic[i];
        }
        self.trace_sum += other.trace_sum;
        self.trace_sq_sum += other.trace_sq_sum;
        self.length_sum += other.length_sum;
    }

    pub fn mean_length(&self) -> f64 {
        self.length_sum / self.count as f64
    }

    /// Mean length over non-uniform words only.
    pub fn mean_length_nonuniform(&self) -> f64 {
        self.length_sum / (self.count - self.uniform) as f64
    }
}

/// Exhaustive sums over all words of length `len`.
pub fn word_sums(len: u32) -> Result<WordSums> {
    if len == 0 {
        return Err(Error::EmptyWord);
    }
    if len > MAX_EXHAUSTIVE_LEN {
        return Err(Error::ExhaustiveCap {
            len,
            cap: MAX_EXHAUSTIVE_LEN,
        });
    }
    let prefix_len = len.min(8);
    let parts: Vec<WordSums> = (0..1u64 << prefix_len)
        .into_par_iter()
        .map(|prefix| {
            let mut m = SmallMatrix::IDENTITY;
            let first = prefix >> (prefix_len - 1) & 1;
            let mut uniform = true;
            for j in (0..prefix_len).rev() {
                let bit = prefix >> j & 1;
                uniform &= bit == first;
                m = m.push(turn(bit)).expect("prefix fits u64");
            }
            let mut acc = WordSums::default();
            descend(m, len - prefix_len, uniform, first, &mut acc);
            acc
        })
        .collect();
    let mut total = WordSums {
        len,
        ..Default::default()
    };
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

#[inline]
fn turn(bit: u64) -> Turn {
    if bit == 1 {
        Turn::R
    } else {
        Turn::L
    }
}

fn descend(m: SmallMatrix, left: u32, uniform: bool, first: u64, acc: &mut WordSums) {
    if left == 0 {
        acc.leaf(m, uniform);
        return;
    }
    for bit in [0, 1] {
        let next = m.push(turn(bit)).expect("entries of words up to length 30 fit u64");
        descend(next, left - 1, uniform && bit == first, first, acc);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turn_matrix::{word_to_matrix, TurnWord};

    #[test]
    fn length_two() {
        let s = word_sums(2).unwrap();
        assert_eq!(s.count, 4);
        assert_eq!(s.uniform, 2);
        assert_eq!(s.trace_sum, 10);
        assert_eq!(s.quadratic[3], 6);
    }

    #[test]
    fn length_three_traces() {
        let s = word_sums(3).unwrap();
        // traces 2,4,4,4,4,4,4,2
        assert_eq!(s.trace_sum, 28);
        assert_eq!(s.trace_sq_sum, 2 * 4 + 6 * 16);
        let l4 = geodesic_length_from_trace(4.0);
        assert!((s.mean_length_nonuniform() - l4).abs() < 1e-14);
        assert!((s.mean_length() - 6.0 * l4 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn matches_direct_products() {
        for len in 1..=11u32 {
            let s = word_sums(len).unwrap();
            let mut tr = 0u128;
            let mut bb = 0u128;
            for bits in 0..1u64 << len {
                let m = word_to_matrix(&TurnWord::from_bits(bits, len).unwrap());
                tr += u128::try_from(m.trace()).unwrap();
                let b = u128::try_from(m.b.clone()).unwrap();
                bb += b * b;
            }
            assert_eq!(s.trace_sum, tr);
            assert_eq!(s.quadratic[4], bb);
            assert_eq!(s.uniform, 2);
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(word_sums(0), Err(Error::EmptyWord)));
        assert!(matches!(word_sums(31), Err(Error::ExhaustiveCap { .. })));
    }
}
