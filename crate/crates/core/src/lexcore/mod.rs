//! The lexicographic group ℤ lex ℚ^m.
//!
//! The first coordinate is linearly ordered and dominates; the second is a
//! vector of rationals under the pointwise order. Because the first factor is
//! a chain, the product is lattice-ordered and `sup`/`inf` are total.

mod rat;

pub use rat::Rat;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Outcome of comparing two elements in a partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LexOrdering {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl LexOrdering {
    pub fn is_le(self) -> bool {
        matches!(self, LexOrdering::Less | LexOrdering::Equal)
    }

    pub fn is_ge(self) -> bool {
        matches!(self, LexOrdering::Greater | LexOrdering::Equal)
    }
}

/// A vector of ℚ^m with the pointwise order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GVec(Vec<Rat>);

impl GVec {
    pub fn new(entries: Vec<Rat>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        Ok(GVec(entries))
    }

    pub fn zero(m: usize) -> Self {
        GVec(vec![Rat::zero(); m])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        GVec(xs.iter().map(|&x| Rat::from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn is_nonpos(&self) -> bool {
        self.0.iter().all(|x| !x.is_positive())
    }

    fn check(&self, other: &GVec) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    fn zip(&self, other: &GVec, f: impl Fn(&Rat, &Rat) -> Rat) -> GVec {
        GVec(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    /// Pointwise comparison.
    pub fn compare(&self, other: &GVec) -> Result<LexOrdering> {
        self.check(other)?;
        let (mut le, mut ge) = (true, true);
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Less => ge = false,
                Ordering::Greater => le = false,
                Ordering::Equal => {}
            }
        }
        Ok(match (le, ge) {
            (true, true) => LexOrdering::Equal,
            (true, false) => LexOrdering::Less,
            (false, true) => LexOrdering::Greater,
            (false, false) => LexOrdering::Incomparable,
        })
    }
}

impl fmt::Display for GVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Element `(h, g)` of ℤ lex ℚ^m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexElem {
    pub h: i64,
    pub g: GVec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Sup,
    Inf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
}

impl LexElem {
    pub fn new(h: i64, g: GVec) -> Self {
        LexElem { h, g }
    }

    pub fn zero(m: usize) -> Self {
        LexElem {
            h: 0,
            g: GVec::zero(m),
        }
    }

    /// Shorthand for integer coordinates, mostly for tests and examples.
    pub fn ints(h: i64, g: &[i64]) -> Self {
        LexElem {
            h,
            g: GVec::from_ints(g),
        }
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.h == 0 && self.g.is_zero()
    }

    /// `self ≥ 0` in the lexicographic order.
    pub fn is_nonneg(&self) -> bool {
        self.h > 0 || (self.h == 0 && self.g.is_nonneg())
    }

    pub fn compare(&self, other: &LexElem) -> Result<LexOrdering> {
        self.g.check(&other.g)?;
        Ok(match self.h.cmp(&other.h) {
            Ordering::Less => LexOrdering::Less,
            Ordering::Greater => LexOrdering::Greater,
            Ordering::Equal => self.g.compare(&other.g)?,
        })
    }

    pub fn le(&self, other: &LexElem) -> bool {
        self.compare(other).map(LexOrdering::is_le).unwrap_or(false)
    }

    pub fn lattice(&self, other: &LexElem, which: LatticeOp) -> Result<LexElem> {
        self.g.check(&other.g)?;
        Ok(match (self.h.cmp(&other.h), which) {
            (Ordering::Less, LatticeOp::Sup) | (Ordering::Greater, LatticeOp::Inf) => other.clone(),
            (Ordering::Greater, LatticeOp::Sup) | (Ordering::Less, LatticeOp::Inf) => self.clone(),
            (Ordering::Equal, LatticeOp::Sup) => {
                LexElem::new(self.h, self.g.zip(&other.g, |a, b| a.max(b).clone()))
            }
            (Ordering::Equal, LatticeOp::Inf) => {
                LexElem::new(self.h, self.g.zip(&other.g, |a, b| a.min(b).clone()))
            }
        })
    }

    pub fn sup(&self, other: &LexElem) -> Result<LexElem> {
        self.lattice(other, LatticeOp::Sup)
    }

    pub fn inf(&self, other: &LexElem) -> Result<LexElem> {
        self.lattice(other, LatticeOp::Inf)
    }

    pub fn arith(&self, other: &LexElem, op: ArithOp) -> Result<LexElem> {
        self.g.check(&other.g)?;
        Ok(match op {
            ArithOp::Add => LexElem::new(self.h + other.h, self.g.zip(&other.g, |a, b| a + b)),
            ArithOp::Sub => LexElem::new(self.h - other.h, self.g.zip(&other.g, |a, b| a - b)),
        })
    }

    pub fn try_add(&self, other: &LexElem) -> Result<LexElem> {
        self.arith(other, ArithOp::Add)
    }

    pub fn try_sub(&self, other: &LexElem) -> Result<LexElem> {
        self.arith(other, ArithOp::Sub)
    }
}

// Operator sugar for code that has already established a common `m`.
// Mismatched dimensions here are programming errors and panic.

impl<'a> Add<&'a LexElem> for &'a LexElem {
    type Output = LexElem;
    fn add(self, rhs: &LexElem) -> LexElem {
        self.try_add(rhs).expect("LexElem dimension mismatch")
    }
}

impl<'a> Sub<&'a LexElem> for &'a LexElem {
    type Output = LexElem;
    fn sub(self, rhs: &LexElem) -> LexElem {
        self.try_sub(rhs).expect("LexElem dimension mismatch")
    }
}

impl Add for LexElem {
    type Output = LexElem;
    fn add(self, rhs: LexElem) -> LexElem {
        &self + &rhs
    }
}

impl Sub for LexElem {
    type Output = LexElem;
    fn sub(self, rhs: LexElem) -> LexElem {
        &self - &rhs
    }
}

impl Neg for &LexElem {
    type Output = LexElem;
    fn neg(self) -> LexElem {
        LexElem::new(-self.h, GVec(self.g.0.iter().map(|x| -x).collect()))
    }
}

impl Neg for LexElem {
    type Output = LexElem;
    fn neg(self) -> LexElem {
        -&self
    }
}

impl fmt::Display for LexElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.h, self.g)
    }
}

impl Serialize for LexElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.h, &self.g.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LexElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (h, g): (i64, Vec<Rat>) = Deserialize::deserialize(d)?;
        let g = GVec::new(g).map_err(D::Error::custom)?;
        Ok(LexElem { h, g })
    }
}

/// Sum of a sequence of elements of common dimension `m`.
pub fn lex_sum<'a>(m: usize, items: impl IntoIterator<Item = &'a LexElem>) -> LexElem {
    items.into_iter().fold(LexElem::zero(m), |acc, x| &acc + x)
}
