//! Turn words, their exact matrix products and geodesic lengths.
//!
//! Walking a cycle on an oriented cubic graph, each vertex is passed with a
//! left or right turn. Left turns multiply by `L = [[1, 1], [0, 1]]`, right
//! turns by `R = [[1, 0], [1, 1]]`, and the geodesic in the free homotopy
//! class has length `2 arccosh(tr / 2)`.
//!
//! Convention: the turn at a vertex entered through stub `s_in` and left
//! through `s_out` is `L` iff `s_out` is the successor of `s_in` in the
//! vertex's rotation. Reversing all rotations swaps every letter, which is
//! conjugation by `[[0, 1], [1, 0]]` and leaves traces unchanged.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cycle_census::{is_disconnecting, Cycle};
use crate::error::{Error, Result};
use crate::rotation_graph::RotationGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Turn {
    L,
    R,
}

impl Turn {
    pub fn swapped(self) -> Turn {
        match self {
            Turn::L => Turn::R,
            Turn::R => Turn::L,
        }
    }
}

/// A nonempty word over `{L, R}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TurnWord(Vec<Turn>);

impl TurnWord {
    pub fn new(letters: Vec<Turn>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(TurnWord(letters))
    }

    /// Word of length `len` whose `j`-th letter is `R` iff bit `len - 1 - j`
    /// of `bits` is set.
    pub fn from_bits(bits: u64, len: u32) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyWord);
        }
        let letters = (0..len)
            .map(|j| {
                if (bits >> (len - 1 - j)) & 1 == 1 {
                    Turn::R
                } else {
                    Turn::L
                }
            })
            .collect();
        Ok(TurnWord(letters))
    }

    pub fn letters(&self) -> &[Turn] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All letters equal: the path circles a cusp.
    pub fn is_uniform(&self) -> bool {
        self.0.iter().all(|&t| t == self.0[0])
    }

    pub fn letter_swapped(&self) -> TurnWord {
        TurnWord(self.0.iter().map(|t| t.swapped()).collect())
    }

    pub fn reversed(&self) -> TurnWord {
        TurnWord(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for TurnWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            f.write_str(match t {
                Turn::L => "L",
                Turn::R => "R",
            })?;
        }
        Ok(())
    }
}

impl FromStr for TurnWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'L' | 'l' => Ok(Turn::L),
                'R' | 'r' => Ok(Turn::R),
                other => Err(Error::InvalidLetter(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        TurnWord::new(letters)
    }
}

/// `[[a, b], [c, d]]` with exact nonnegative entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnMatrix {
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
    pub d: BigUint,
}

impl TurnMatrix {
    pub fn identity() -> Self {
        TurnMatrix {
            a: BigUint::one(),
            b: BigUint::zero(),
            c: BigUint::zero(),
            d: BigUint::one(),
        }
    }

    /// Right multiplication by `L` or `R`.
    pub fn push(&mut self, turn: Turn) {
        match turn {
            Turn::L => {
                self.b += &self.a;
                self.d += &self.c;
            }
            Turn::R => {
                self.a += &self.b;
                self.c += &self.d;
            }
        }
    }

    pub fn trace(&self) -> BigUint {
        &self.a + &self.d
    }

    pub fn determinant_is_one(&self) -> bool {
        &self.a * &self.d == &self.b * &self.c + BigUint::one()
    }
}

/// Fixed-width product used in hot loops; `None` on overflow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallMatrix {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl SmallMatrix {
    pub const IDENTITY: SmallMatrix = SmallMatrix { a: 1, b: 0, c: 0, d: 1 };

    #[inline]
    pub fn push(self, turn: Turn) -> Option<SmallMatrix> {
        let SmallMatrix { a, b, c, d } = self;
        Some(match turn {
            Turn::L => SmallMatrix {
                a,
                b: a.checked_add(b)?,
                c,
                d: c.checked_add(d)?,
            },
            Turn::R => SmallMatrix {
                a: a.checked_add(b)?,
                b,
                c: c.checked_add(d)?,
                d,
            },
        })
    }

    #[inline]
    pub fn trace(self) -> Option<u64> {
        self.a.checked_add(self.d)
    }
}

/// Exact product `W_1 ... W_k`.
pub fn word_to_matrix(word: &TurnWord) -> TurnMatrix {
    let fast = word
        .letters()
        .iter()
        .try_fold(SmallMatrix::IDENTITY, |m, &t| m.push(t));
    if let Some(m) = fast {
        return TurnMatrix {
            a: m.a.into(),
            b: m.b.into(),
            c: m.c.into(),
            d: m.d.into(),
        };
    }
    let mut m = TurnMatrix::identity();
    for &t in word.letters() {
        m.push(t);
    }
    m
}

/// `2 arccosh(trace / 2)`, exactly zero at trace 2.
///
/// Panics if `trace < 2`; no product of `L` and `R` has such a trace.
pub fn geodesic_length_from_trace(trace: f64) -> f64 {
    assert!(trace >= 2.0, "trace {trace} < 2 is impossible for a turn matrix");
    if trace == 2.0 {
        return 0.0;
    }
    2.0 * (trace / 2.0).acosh()
}

pub fn geodesic_length(m: &TurnMatrix) -> f64 {
    let t = m.trace();
    // Past f64 range use 2 arccosh(t/2) = 2 ln t - 2/t^2 + ..., with ln t
    // taken from the top 64 bits.
    if t.bits() > 1000 {
        let shift = t.bits() - 64;
        let top = (&t >> shift).to_f64().expect("64-bit value fits f64");
        return 2.0 * (top.ln() + shift as f64 * std::f64::consts::LN_2);
    }
    geodesic_length_from_trace(t.to_f64().expect("trace below 2^1000"))
}

/// Turn word read off along the cycle's canonical step sequence.
pub fn cycle_to_word(g: &RotationGraph, c: &Cycle) -> Result<TurnWord> {
    let steps: Vec<(usize, usize)> = c.steps().collect();
    // re-validates that the walk is a cycle of g
    Cycle::from_walk(g, &steps)?;
    let letters = steps
        .iter()
        .map(|&(inp, out)| if g.succ(inp) == out { Turn::L } else { Turn::R })
        .collect();
    TurnWord::new(letters)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeodesicClass {
    Nontrivial,
    /// Uniform word: the path circles a cusp.
    CuspTrivial,
    /// Removing the cycle disconnects the graph.
    DisconnectingTrivial,
}

pub fn classify_geodesic(g: &RotationGraph, c: &Cycle) -> Result<GeodesicClass> {
    let word = cycle_to_word(g, c)?;
    Ok(if word.is_uniform() {
        GeodesicClass::CuspTrivial
    } else if is_disconnecting(g, &[c]) {
        GeodesicClass::DisconnectingTrivial
    } else {
        GeodesicClass::Nontrivial
    })
}

/// Exact count of non-uniform words among the `2^k` orientations of a
/// `k`-cycle, as `(nontrivial, total)`.
pub fn nontrivial_orientation_count(k: u32) -> Result<(u64, u64)> {
    if k == 0 {
        return Err(Error::EmptyWord);
    }
    if k > 24 {
        return Err(Error::ExhaustiveCap { len: k, cap: 24 });
    }
    let total = 1u64 << k;
    let nontrivial = (0..total)
        .filter(|&bits| !TurnWord::from_bits(bits, k).expect("k > 0").is_uniform())
        .count() as u64;
    Ok((nontrivial, total))
}
