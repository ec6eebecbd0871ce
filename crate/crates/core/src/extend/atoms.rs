//! Atoms of the set algebra generated by a grid's lower rectangles.
//!
//! Along an axis with breakpoints `b_0 < … < b_{L−1}` the factors are indexed
//! `f = 0..=2L`: even `f = 2j` is the open interval `(b_{j−1}, b_j)` (with
//! `f = 0` unbounded below and `f = 2L` unbounded above), odd `f = 2j+1` is
//! the singleton `{b_j}`. An axis without breakpoints has the single factor ℝ.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexcore::Rat;
use crate::stepfun::{DecReal, Grid, Shape};

/// One factor of a product atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Factor {
    /// `(−∞, hi)`
    Lower { hi: Rat },
    /// `{at}`
    Point { at: Rat },
    /// `(lo, hi)`
    Open { lo: Rat, hi: Rat },
    /// `(lo, ∞)`
    Upper { lo: Rat },
    /// ℝ (only on an axis without breakpoints)
    All,
}

impl Factor {
    /// Decorated endpoints whose difference measures this factor:
    /// `(a,b) ↦ (a⁺, b)`, `{g} ↦ (g, g⁺)`, unbounded ends `∓∞`.
    pub fn corners(&self) -> (DecReal, DecReal) {
        match self {
            Factor::Lower { hi } => (DecReal::NegInf, DecReal::Fin(hi.clone())),
            Factor::Point { at } => (DecReal::Fin(at.clone()), DecReal::FinPlus(at.clone())),
            Factor::Open { lo, hi } => (DecReal::FinPlus(lo.clone()), DecReal::Fin(hi.clone())),
            Factor::Upper { lo } => (DecReal::FinPlus(lo.clone()), DecReal::PosInf),
            Factor::All => (DecReal::NegInf, DecReal::PosInf),
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Factor::Point { .. })
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Lower { hi } => write!(f, "(-inf,{hi})"),
            Factor::Point { at } => write!(f, "{{{at}}}"),
            Factor::Open { lo, hi } => write!(f, "({lo},{hi})"),
            Factor::Upper { lo } => write!(f, "({lo},inf)"),
            Factor::All => write!(f, "(-inf,inf)"),
        }
    }
}

/// Display helper for a product of factors.
pub struct AtomDisplay<'a>(pub &'a [Factor]);

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "R^0");
        }
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// The atoms of a grid, enumerated in lexicographic order of factor indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomSet {
    grid: Grid,
    shape: Shape,
}

/// Enumerate the `Π(2·Lᵢ+1)` atoms of a grid.
pub fn atom_decomposition(grid: &Grid) -> AtomSet {
    let shape = Shape::new(grid.axes().iter().map(|a| 2 * a.len() + 1).collect());
    AtomSet {
        grid: grid.clone(),
        shape,
    }
}

impl AtomSet {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn len(&self) -> usize {
        self.shape.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of factors along `axis`.
    pub fn factors_on(&self, axis: usize) -> usize {
        self.shape.dims()[axis]
    }

    pub fn factor(&self, axis: usize, f: usize) -> Factor {
        let ax = self.grid.axis(axis);
        let l = ax.len();
        if l == 0 {
            return Factor::All;
        }
        if f % 2 == 1 {
            return Factor::Point {
                at: ax[f / 2].clone(),
            };
        }
        match f {
            0 => Factor::Lower { hi: ax[0].clone() },
            f if f == 2 * l => Factor::Upper {
                lo: ax[l - 1].clone(),
            },
            f => Factor::Open {
                lo: ax[f / 2 - 1].clone(),
                hi: ax[f / 2].clone(),
            },
        }
    }

    /// Factor index of a factor on `axis`, if it is one of this grid's.
    pub fn factor_index(&self, axis: usize, factor: &Factor) -> Option<usize> {
        let ax = self.grid.axis(axis);
        let pos = |r: &Rat| ax.binary_search(r).ok();
        let f = match factor {
            Factor::All => (ax.is_empty()).then_some(0)?,
            Factor::Point { at } => 2 * pos(at)? + 1,
            Factor::Lower { hi } => (pos(hi)? == 0).then_some(0)?,
            Factor::Upper { lo } => (pos(lo)? + 1 == ax.len()).then_some(2 * ax.len())?,
            Factor::Open { lo, hi } => {
                let (a, b) = (pos(lo)?, pos(hi)?);
                (b == a + 1).then_some(2 * b)?
            }
        };
        Some(f)
    }

    pub fn factors(&self, idx: &[usize]) -> Vec<Factor> {
        idx.iter()
            .enumerate()
            .map(|(i, &f)| self.factor(i, f))
            .collect()
    }

    pub fn atom(&self, flat: usize) -> Vec<Factor> {
        self.factors(&self.shape.unravel(flat))
    }

    pub fn index_of(&self, atom: &[Factor]) -> Option<usize> {
        if atom.len() != self.n() {
            return None;
        }
        let idx: Option<Vec<usize>> = atom
            .iter()
            .enumerate()
            .map(|(i, f)| self.factor_index(i, f))
            .collect();
        Some(self.shape.flat(&idx?))
    }

    /// Largest factor index contained in `(−∞, t)` along `axis`, or `None`
    /// if that set is empty. Only grid-aligned values are accepted.
    pub fn lower_bound(&self, axis: usize, t: &DecReal) -> Result<Option<usize>> {
        let ax = self.grid.axis(axis);
        let pos = |r: &Rat| {
            ax.binary_search(r).map_err(|_| {
                Error::RegionNotAligned(format!("{t} is not a breakpoint of axis {}", axis + 1))
            })
        };
        Ok(match t {
            DecReal::NegInf => None,
            DecReal::PosInf => Some(2 * ax.len()),
            DecReal::Fin(r) => Some(2 * pos(r)?),
            DecReal::FinPlus(r) => Some(2 * pos(r)? + 1),
        })
    }

    /// Non-`−∞` decorated values along an axis, ordered so that the `f`-th
    /// one has `(−∞, value)` ending exactly with factor `f`.
    pub fn row_values(&self, axis: usize) -> Vec<DecReal> {
        let mut out: Vec<DecReal> = self
            .grid
            .axis(axis)
            .iter()
            .flat_map(|b| [DecReal::Fin(b.clone()), DecReal::FinPlus(b.clone())])
            .collect();
        out.push(DecReal::PosInf);
        out
    }
}

/// A finite union of atoms of one grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSet {
    grid: Grid,
    members: Vec<bool>,
}

impl RegionSet {
    pub fn empty(atoms: &AtomSet) -> Self {
        RegionSet {
            grid: atoms.grid.clone(),
            members: vec![false; atoms.len()],
        }
    }

    pub fn all(atoms: &AtomSet) -> Self {
        RegionSet {
            grid: atoms.grid.clone(),
            members: vec![true; atoms.len()],
        }
    }

    pub fn single(atoms: &AtomSet, flat: usize) -> Self {
        let mut r = RegionSet::empty(atoms);
        r.members[flat] = true;
        r
    }

    /// Product of per-axis sets of factor indices.
    pub fn product(atoms: &AtomSet, per_axis: &[Vec<bool>]) -> Result<Self> {
        if per_axis.len() != atoms.n() {
            return Err(Error::DimensionMismatch {
                expected: atoms.n(),
                got: per_axis.len(),
            });
        }
        for (i, s) in per_axis.iter().enumerate() {
            if s.len() != atoms.factors_on(i) {
                return Err(Error::RegionNotAligned(format!(
                    "axis {} factor count",
                    i + 1
                )));
            }
        }
        let members = atoms
            .shape
            .iter()
            .map(|idx| idx.iter().enumerate().all(|(i, &f)| per_axis[i][f]))
            .collect();
        Ok(RegionSet {
            grid: atoms.grid.clone(),
            members,
        })
    }

    /// The lower rectangle `(−∞,t₁)×⋯×(−∞,tₙ)` for a decorated grid point.
    pub fn lower(atoms: &AtomSet, point: &[DecReal]) -> Result<Self> {
        if point.len() != atoms.n() {
            return Err(Error::DimensionMismatch {
                expected: atoms.n(),
                got: point.len(),
            });
        }
        let per_axis = point
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let top = atoms.lower_bound(i, t)?;
                Ok((0..atoms.factors_on(i))
                    .map(|f| top.is_some_and(|m| f <= m))
                    .collect())
            })
            .collect::<Result<Vec<Vec<bool>>>>()?;
        RegionSet::product(atoms, &per_axis)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn contains(&self, flat: usize) -> bool {
        self.members[flat]
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn combine(&self, other: &RegionSet, f: impl Fn(bool, bool) -> bool) -> Result<RegionSet> {
        if self.grid != other.grid {
            return Err(Error::RegionNotAligned(
                "regions over different grids".into(),
            ));
        }
        let members = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(RegionSet {
            grid: self.grid.clone(),
            members,
        })
    }

    pub fn union(&self, other: &RegionSet) -> Result<RegionSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &RegionSet) -> Result<RegionSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &RegionSet) -> Result<RegionSet> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> RegionSet {
        RegionSet {
            grid: self.grid.clone(),
            members: self.members.iter().map(|b| !b).collect(),
        }
    }
}
