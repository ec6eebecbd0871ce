//! The interval algebra Γ(ℤ lex ℚ^m, (k,0)).
//!
//! Elements are the `a` with `(0,0) ≤ a ≤ (k,0)`. The algebra is at once a
//! k-perfect MV-algebra and a k-perfect effect algebra; it splits into blocks
//! indexed by the first coordinate `h ∈ {0,…,k}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexcore::{ArithOp, GVec, LatticeOp, LexElem};

/// The ambient algebra: unit `(k, 0)` in ℤ lex ℚ^m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MvContext {
    pub k: i64,
    pub m: usize,
}

impl MvContext {
    pub fn new(k: i64, m: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Precondition(format!(
                "height k must be ≥ 1, got {k}"
            )));
        }
        if m < 1 {
            return Err(Error::Precondition("dimension m must be ≥ 1".into()));
        }
        Ok(MvContext { k, m })
    }

    /// The unit `(k, 0)`.
    pub fn unit(&self) -> LexElem {
        LexElem::new(self.k, GVec::zero(self.m))
    }

    pub fn zero(&self) -> LexElem {
        LexElem::zero(self.m)
    }

    pub fn is_perfect(&self) -> bool {
        self.k == 1
    }

    /// Membership in `[0, u]`, reporting the first violated bound.
    pub fn check(&self, v: &LexElem) -> Result<()> {
        if v.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: v.dim(),
            });
        }
        let out = |reason: String| {
            Err(Error::OutOfInterval {
                value: v.to_string(),
                reason,
            })
        };
        if v.h < 0 {
            return out("below zero: h < 0".into());
        }
        if v.h > self.k {
            return out(format!("above unit: h > {}", self.k));
        }
        if v.h == 0 && !v.g.is_nonneg() {
            return out("below zero: block 0 requires g ≥ 0".into());
        }
        if v.h == self.k && !v.g.is_nonpos() {
            return out(format!("above unit: block {} requires g ≤ 0", self.k));
        }
        Ok(())
    }

    pub fn contains(&self, v: &LexElem) -> bool {
        self.check(v).is_ok()
    }
}

impl fmt::Display for MvContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ(ℤ lex ℚ^{}, ({},0))", self.m, self.k)
    }
}

/// A validated element of the interval algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MvElem {
    value: LexElem,
    ctx: MvContext,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeetJoin {
    Meet,
    Join,
}

/// Validate that `v` lies in `[0, (k,0)]`.
pub fn mv_validate(v: LexElem, ctx: MvContext) -> Result<MvElem> {
    ctx.check(&v)?;
    Ok(MvElem { value: v, ctx })
}

/// The block index `h` of a valid element.
pub fn block_of(a: &MvElem) -> i64 {
    a.value.h
}

impl MvElem {
    pub fn value(&self) -> &LexElem {
        &self.value
    }

    pub fn ctx(&self) -> MvContext {
        self.ctx
    }

    pub fn into_value(self) -> LexElem {
        self.value
    }

    pub fn zero(ctx: MvContext) -> Self {
        MvElem {
            value: ctx.zero(),
            ctx,
        }
    }

    pub fn unit(ctx: MvContext) -> Self {
        MvElem {
            value: ctx.unit(),
            ctx,
        }
    }

    pub fn block(&self) -> i64 {
        block_of(self)
    }

    fn same_ctx(&self, other: &MvElem) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::Precondition(format!(
                "context mismatch: {} vs {}",
                self.ctx, other.ctx
            )));
        }
        Ok(())
    }

    /// Effect-algebra partial sum / difference.
    pub fn partial(&self, other: &MvElem, op: ArithOp) -> Result<MvElem> {
        self.same_ctx(other)?;
        let r = self.value.arith(&other.value, op)?;
        if !self.ctx.contains(&r) {
            let what = match op {
                ArithOp::Add => format!("{} + {} exceeds the unit", self.value, other.value),
                ArithOp::Sub => format!("{} − {} is below zero", self.value, other.value),
            };
            return Err(Error::UndefinedPartialOp(what));
        }
        Ok(MvElem {
            value: r,
            ctx: self.ctx,
        })
    }

    pub fn add(&self, other: &MvElem) -> Result<MvElem> {
        self.partial(other, ArithOp::Add)
    }

    pub fn sub(&self, other: &MvElem) -> Result<MvElem> {
        self.partial(other, ArithOp::Sub)
    }

    pub fn lattice(&self, other: &MvElem, which: MeetJoin) -> Result<MvElem> {
        self.same_ctx(other)?;
        let op = match which {
            MeetJoin::Meet => LatticeOp::Inf,
            MeetJoin::Join => LatticeOp::Sup,
        };
        Ok(MvElem {
            value: self.value.lattice(&other.value, op)?,
            ctx: self.ctx,
        })
    }

    pub fn meet(&self, other: &MvElem) -> Result<MvElem> {
        self.lattice(other, MeetJoin::Meet)
    }

    pub fn join(&self, other: &MvElem) -> Result<MvElem> {
        self.lattice(other, MeetJoin::Join)
    }

    /// MV negation `¬a = u − a`.
    pub fn complement(&self) -> MvElem {
        MvElem {
            value: &self.ctx.unit() - &self.value,
            ctx: self.ctx,
        }
    }

    /// Truncated MV sum `a ⊕ b = a + (b ∧ ¬a)`.
    pub fn oplus(&self, other: &MvElem) -> Result<MvElem> {
        let room = other.meet(&self.complement())?;
        self.add(&room)
    }

    pub fn le(&self, other: &MvElem) -> bool {
        self.value.le(&other.value)
    }
}

impl fmt::Display for MvElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(k: i64) -> MvContext {
        MvContext::new(k, 1).unwrap()
    }

    fn el(h: i64, g: i64, k: i64) -> MvElem {
        mv_validate(LexElem::ints(h, &[g]), ctx(k)).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(matches!(
            mv_validate(LexElem::ints(0, &[-1]), ctx(1)),
            Err(Error::OutOfInterval { .. })
        ));
        assert!(mv_validate(LexElem::ints(1, &[1]), ctx(1)).is_err());
        assert!(mv_validate(LexElem::ints(1, &[-3]), ctx(1)).is_ok());
        assert!(mv_validate(LexElem::ints(2, &[0]), ctx(1)).is_err());
        assert!(mv_validate(LexElem::ints(1, &[5]), ctx(2)).is_ok());
    }

    #[test]
    fn block_examples() {
        assert_eq!(block_of(&el(0, 3, 1)), 0);
        assert_eq!(block_of(&el(1, -3, 1)), 1);
        assert_eq!(block_of(&el(1, 1, 2)), 1);
    }

    #[test]
    fn partial_examples() {
        assert_eq!(el(0, 3, 1).add(&el(1, -4, 1)).unwrap(), el(1, -1, 1));
        assert!(matches!(
            el(1, -1, 1).add(&el(1, -1, 1)),
            Err(Error::UndefinedPartialOp(_))
        ));
        assert_eq!(el(1, 0, 1).sub(&el(0, 1, 1)).unwrap(), el(1, -1, 1));
        assert!(el(0, 1, 1).sub(&el(0, 2, 1)).is_err());
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(el(0, 3, 1).meet(&el(0, 4, 1)).unwrap(), el(0, 3, 1));
        assert_eq!(el(0, 3, 1).meet(&el(1, -4, 1)).unwrap(), el(0, 3, 1));
        assert_eq!(el(1, -3, 1).meet(&el(1, -4, 1)).unwrap(), el(1, -4, 1));
        assert_eq!(el(1, -3, 1).join(&el(0, 4, 1)).unwrap(), el(1, -3, 1));
    }

    #[test]
    fn truncated_sum() {
        assert_eq!(
            el(1, -1, 1).oplus(&el(1, -1, 1)).unwrap(),
            MvElem::unit(ctx(1))
        );
        assert_eq!(el(0, 1, 1).oplus(&el(0, 2, 1)).unwrap(), el(0, 3, 1));
        assert_eq!(el(0, 2, 1).complement(), el(1, -2, 1));
    }

    #[test]
    fn context_mismatch() {
        assert!(el(0, 1, 1).meet(&el(0, 1, 2)).is_err());
    }
}
