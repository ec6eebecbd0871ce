//! Decorated extended reals, finite rational grids, n-dimensional step
//! functions and the difference-operator calculus.
//!
//! A step function is stored on a product grid. Along an axis with
//! breakpoints `b_0 < … < b_{L−1}` there are `L + 1` cells
//! `(−∞,b_0], (b_0,b_1], …, (b_{L−1},∞)`; the function is constant on
//! products of cells. Reading the cell left-closed at `t` realizes
//! `F(t) = x((−∞,t))`, so left-continuity holds by construction.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lexcore::{LexElem, Rat};

// ---------------------------------------------------------------------------
// Decorated reals

/// Decoration attached to a raw symbol before normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decoration {
    Plain,
    Plus,
    Minus,
}

/// A decorated symbol as written, before normalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RawDec {
    NegInf(Decoration),
    PosInf(Decoration),
    Fin(Rat, Decoration),
}

/// A normalized decorated extended real.
///
/// Ordered as `−∞ < … < r < r⁺ < s < … < +∞` for rationals `r < s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecReal {
    NegInf,
    Fin(Rat),
    FinPlus(Rat),
    PosInf,
}

/// Normalize a raw decorated symbol: `r⁻ ↦ r`, `−∞⁺ ↦ −∞`, `+∞⁻ ↦ +∞`;
/// `−∞⁻` and `+∞⁺` are undefined.
pub fn dec_normalize(raw: RawDec) -> Result<DecReal> {
    use Decoration::*;
    match raw {
        RawDec::NegInf(Minus) => Err(Error::UndefinedSymbol("-inf-".into())),
        RawDec::PosInf(Plus) => Err(Error::UndefinedSymbol("inf+".into())),
        RawDec::NegInf(_) => Ok(DecReal::NegInf),
        RawDec::PosInf(_) => Ok(DecReal::PosInf),
        RawDec::Fin(r, Plus) => Ok(DecReal::FinPlus(r)),
        RawDec::Fin(r, _) => Ok(DecReal::Fin(r)),
    }
}

impl DecReal {
    pub fn fin(r: i64) -> Self {
        DecReal::Fin(Rat::from_int(r))
    }

    pub fn plus(r: i64) -> Self {
        DecReal::FinPlus(Rat::from_int(r))
    }

    /// The rational part of a finite value.
    pub fn base(&self) -> Option<&Rat> {
        match self {
            DecReal::Fin(r) | DecReal::FinPlus(r) => Some(r),
            _ => None,
        }
    }

    /// `r ↦ r⁺`; `r⁺` and `−∞` are unchanged (`−∞⁺ = −∞`); `+∞⁺` is undefined.
    pub fn to_plus(&self) -> Result<DecReal> {
        match self {
            DecReal::Fin(r) => Ok(DecReal::FinPlus(r.clone())),
            DecReal::PosInf => Err(Error::UndefinedSymbol("inf+".into())),
            other => Ok(other.clone()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            DecReal::NegInf => 0,
            DecReal::Fin(_) | DecReal::FinPlus(_) => 1,
            DecReal::PosInf => 2,
        }
    }
}

impl Ord for DecReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let deco = |d: &DecReal| matches!(d, DecReal::FinPlus(_)) as u8;
        self.rank()
            .cmp(&other.rank())
            .then_with(|| match (self.base(), other.base()) {
                (Some(a), Some(b)) => a.cmp(b).then(deco(self).cmp(&deco(other))),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for DecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecReal::NegInf => write!(f, "-inf"),
            DecReal::PosInf => write!(f, "inf"),
            DecReal::Fin(r) => write!(f, "{r}"),
            DecReal::FinPlus(r) => write!(f, "{r}+"),
        }
    }
}

impl FromStr for RawDec {
    type Err = Error;

    /// Parses `5`, `5+`, `5-`, `1/2+`, `-inf`, `inf`, `+inf`, optionally
    /// with a trailing decoration on the infinities.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, deco) = if s.len() > 1 && s.ends_with('+') {
            (&s[..s.len() - 1], Decoration::Plus)
        } else if s.len() > 1 && s.ends_with('-') {
            (&s[..s.len() - 1], Decoration::Minus)
        } else {
            (s, Decoration::Plain)
        };
        match body {
            "-inf" | "-∞" => Ok(RawDec::NegInf(deco)),
            "inf" | "+inf" | "∞" | "+∞" => Ok(RawDec::PosInf(deco)),
            _ => Ok(RawDec::Fin(body.parse()?, deco)),
        }
    }
}

impl FromStr for DecReal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        dec_normalize(s.parse()?)
    }
}

impl Serialize for DecReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DecReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Grids

/// Strictly increasing breakpoints per axis; an axis may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Grid {
    axes: Vec<Vec<Rat>>,
}

impl Grid {
    pub fn new(axes: Vec<Vec<Rat>>) -> Result<Self> {
        for (i, ax) in axes.iter().enumerate() {
            if ax.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGrid(format!(
                    "axis {i} is not strictly increasing"
                )));
            }
        }
        Ok(Grid { axes })
    }

    pub fn from_ints(axes: &[&[i64]]) -> Result<Self> {
        Grid::new(
            axes.iter()
                .map(|ax| ax.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<Rat>] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &[Rat] {
        &self.axes[i]
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.axes.iter().map(|a| a.len() + 1).collect())
    }

    /// Per-axis union with another grid of the same dimension.
    pub fn union(&self, other: &Grid) -> Result<Grid> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        Ok(Grid {
            axes: self
                .axes
                .iter()
                .zip(&other.axes)
                .map(|(a, b)| merge_sorted(a, b))
                .collect(),
        })
    }

    /// Cell index along `axis` read by the decorated value `t`.
    pub fn cell_index(&self, axis: usize, t: &DecReal) -> usize {
        cell_index(&self.axes[axis], t)
    }

    /// Decorated grid points along an axis: `−∞, b₀, b₀⁺, …, +∞`.
    pub fn decorated_points(&self, axis: usize) -> Vec<DecReal> {
        let mut out = vec![DecReal::NegInf];
        for b in &self.axes[axis] {
            out.push(DecReal::Fin(b.clone()));
            out.push(DecReal::FinPlus(b.clone()));
        }
        out.push(DecReal::PosInf);
        out
    }

    /// A decorated value that reads cell `j` along `axis`: its closed right
    /// endpoint, or `b_last⁺` for the top cell.
    pub fn cell_rep(&self, axis: usize, j: usize) -> DecReal {
        cell_rep(&self.axes[axis], j)
    }

    /// The grid with `axis` removed.
    pub fn without(&self, axis: usize) -> Grid {
        let mut axes = self.axes.clone();
        axes.remove(axis);
        Grid { axes }
    }
}

/// Merge two sorted duplicate-free lists.
pub fn merge_sorted(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out: Vec<Rat> = a.iter().chain(b).cloned().collect();
    out.sort();
    out.dedup();
    out
}

fn cell_index(axis: &[Rat], t: &DecReal) -> usize {
    match t {
        DecReal::NegInf => 0,
        DecReal::PosInf => axis.len(),
        DecReal::Fin(r) => axis.partition_point(|b| b < r),
        DecReal::FinPlus(r) => axis.partition_point(|b| b <= r),
    }
}

fn cell_rep(axis: &[Rat], j: usize) -> DecReal {
    match axis.last() {
        None => DecReal::Fin(Rat::zero()),
        Some(last) if j >= axis.len() => DecReal::FinPlus(last.clone()),
        Some(_) => DecReal::Fin(axis[j].clone()),
    }
}

/// Row-major indexing over a box of cell indices (last axis fastest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl Shape {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        Shape { dims, strides }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let q = flat / s;
                flat %= s;
                q
            })
            .collect()
    }

    /// All multi-indices in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(|f| self.unravel(f))
    }
}

// ---------------------------------------------------------------------------
// Step functions

/// An n-dimensional step function with values in ℤ lex ℚ^m.
///
/// Cells hold arbitrary group elements so that Δ-differences of a step
/// function are again step functions; interval membership is a property
/// checked by the spectral layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFn {
    grid: Grid,
    m: usize,
    cells: Vec<LexElem>,
}

/// One bound of a difference operator, as a function of the free variable `t`
/// of its axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    /// A fixed decorated value.
    At(DecReal),
    /// The variable itself.
    Var,
    /// `min{c, t}`.
    Min(DecReal),
}

impl Bound {
    pub fn eval(&self, t: &DecReal) -> DecReal {
        match self {
            Bound::At(c) => c.clone(),
            Bound::Var => t.clone(),
            Bound::Min(c) => c.clone().min(t.clone()),
        }
    }

    fn is_fixed(&self) -> bool {
        matches!(self, Bound::At(_))
    }

    fn cap(&self) -> Option<&Rat> {
        match self {
            Bound::Min(c) => c.base(),
            _ => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::At(c) => write!(f, "{c}"),
            Bound::Var => write!(f, "t"),
            Bound::Min(c) => write!(f, "min{{{c},t}}"),
        }
    }
}

/// `Δ_axis(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp {
    pub axis: usize,
    pub lo: Bound,
    pub hi: Bound,
}

impl DiffOp {
    /// A fixed-endpoint operator; it collapses its axis.
    pub fn fixed(axis: usize, lo: DecReal, hi: DecReal) -> Self {
        DiffOp {
            axis,
            lo: Bound::At(lo),
            hi: Bound::At(hi),
        }
    }

    pub fn new(axis: usize, lo: Bound, hi: Bound) -> Self {
        DiffOp { axis, lo, hi }
    }

    fn collapses(&self) -> bool {
        self.lo.is_fixed() && self.hi.is_fixed()
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ{}({}, {})", self.axis + 1, self.lo, self.hi)
    }
}

impl StepFn {
    pub fn new(grid: Grid, m: usize, cells: Vec<LexElem>) -> Result<Self> {
        let shape = grid.shape();
        if cells.len() != shape.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} cells for shape {:?}, got {}",
                shape.len(),
                shape.dims(),
                cells.len()
            )));
        }
        if let Some(bad) = cells.iter().find(|c| c.dim() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: bad.dim(),
            });
        }
        Ok(StepFn { grid, m, cells })
    }

    /// Build from a function of the cell multi-index.
    pub fn from_fn(grid: Grid, m: usize, mut f: impl FnMut(&[usize]) -> LexElem) -> Self {
        let shape = grid.shape();
        let cells = shape.iter().map(|idx| f(&idx)).collect();
        StepFn { grid, m, cells }
    }

    /// A constant function on the given grid.
    pub fn constant(grid: Grid, value: LexElem) -> Self {
        let m = value.dim();
        StepFn::from_fn(grid, m, |_| value.clone())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> &[LexElem] {
        &self.cells
    }

    pub fn shape(&self) -> Shape {
        self.grid.shape()
    }

    pub fn cell(&self, idx: &[usize]) -> &LexElem {
        &self.cells[self.shape().flat(idx)]
    }

    /// The value at `+∞` in every coordinate.
    pub fn top(&self) -> &LexElem {
        self.cells
            .last()
            .expect("a step function has at least one cell")
    }

    /// Decorated evaluation: each coordinate reads its cell.
    pub fn eval_at(&self, point: &[DecReal]) -> Result<&LexElem> {
        if point.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: point.len(),
            });
        }
        let idx: Vec<usize> = point
            .iter()
            .enumerate()
            .map(|(i, t)| self.grid.cell_index(i, t))
            .collect();
        Ok(self.cell(&idx))
    }

    /// All decorated grid points, in row-major order of the per-axis lists.
    pub fn decorated_grid_points(&self) -> Vec<Vec<DecReal>> {
        let per_axis: Vec<Vec<DecReal>> = (0..self.n())
            .map(|i| self.grid.decorated_points(i))
            .collect();
        let shape = Shape::new(per_axis.iter().map(Vec::len).collect());
        shape
            .iter()
            .map(|idx| {
                idx.iter()
                    .enumerate()
                    .map(|(i, &j)| per_axis[i][j].clone())
                    .collect()
            })
            .collect()
    }

    /// Single fixed-endpoint `Δ_axis(lo, hi)`; the axis is removed.
    pub fn delta(&self, axis: usize, lo: DecReal, hi: DecReal) -> Result<StepFn> {
        self.delta_apply(&[DiffOp::fixed(axis, lo, hi)])
    }

    /// Apply a product of difference operators, at most one per axis.
    ///
    /// Operators with two fixed endpoints remove their axis. Operators with a
    /// variable or `min{c,t}` bound keep the axis; its breakpoints become the
    /// union of the original breakpoints and the caps.
    pub fn delta_apply(&self, ops: &[DiffOp]) -> Result<StepFn> {
        let n = self.n();
        let mut op_of: Vec<Option<&DiffOp>> = vec![None; n];
        for op in ops {
            if op.axis >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: op.axis + 1,
                });
            }
            if op_of[op.axis].replace(op).is_some() {
                return Err(Error::Precondition(format!(
                    "more than one operator on axis {}",
                    op.axis + 1
                )));
            }
            if op.collapses() {
                let (lo, hi) = (op.lo.eval(&DecReal::NegInf), op.hi.eval(&DecReal::NegInf));
                if lo > hi {
                    return Err(Error::ReversedInterval {
                        lo: lo.to_string(),
                        hi: hi.to_string(),
                    });
                }
            }
        }

        // Result axes: untouched or kept (capped) axes, in original order.
        let mut kept: Vec<usize> = Vec::new();
        let mut new_axes: Vec<Vec<Rat>> = Vec::new();
        for (i, op) in op_of.iter().enumerate() {
            match op {
                Some(op) if op.collapses() => {}
                Some(op) => {
                    let caps: Vec<Rat> = [op.lo.cap(), op.hi.cap()]
                        .into_iter()
                        .flatten()
                        .cloned()
                        .collect();
                    new_axes.push(merge_sorted(self.grid.axis(i), &caps));
                    kept.push(i);
                }
                None => {
                    new_axes.push(self.grid.axis(i).to_vec());
                    kept.push(i);
                }
            }
        }
        let new_grid = Grid { axes: new_axes };
        let src_shape = self.shape();
        let active: Vec<&DiffOp> = op_of.iter().flatten().copied().collect();

        let mut cells = Vec::with_capacity(new_grid.shape().len());
        for idx in new_grid.shape().iter() {
            // Per original axis: either a fixed source index, or (lo, hi) indices.
            let mut base = vec![0usize; n];
            let mut pairs: Vec<(usize, usize, usize)> = Vec::with_capacity(active.len());
            for (pos, &i) in kept.iter().enumerate() {
                if op_of[i].is_none() {
                    base[i] = idx[pos];
                }
            }
            for op in &active {
                let t = match kept.iter().position(|&i| i == op.axis) {
                    Some(pos) => new_grid.cell_rep(pos, idx[pos]),
                    None => DecReal::NegInf,
                };
                let (lo, hi) = (op.lo.eval(&t), op.hi.eval(&t));
                if lo > hi {
                    return Err(Error::ReversedInterval {
                        lo: lo.to_string(),
                        hi: hi.to_string(),
                    });
                }
                pairs.push((
                    op.axis,
                    self.grid.cell_index(op.axis, &lo),
                    self.grid.cell_index(op.axis, &hi),
                ));
            }
            let mut acc = LexElem::zero(self.m);
            for mask in 0u32..(1u32 << pairs.len()) {
                let mut src = base.clone();
                let mut negative = false;
                for (b, &(axis, lo, hi)) in pairs.iter().enumerate() {
                    if mask & (1 << b) != 0 {
                        src[axis] = lo;
                        negative = !negative;
                    } else {
                        src[axis] = hi;
                    }
                }
                let v = &self.cells[src_shape.flat(&src)];
                acc = if negative { &acc - v } else { &acc + v };
            }
            cells.push(acc);
        }
        Ok(StepFn {
            grid: new_grid,
            m: self.m,
            cells,
        })
    }

    /// The same function re-expressed on a finer grid.
    pub fn refine(&self, extra: &Grid) -> Result<StepFn> {
        let grid = self.grid.union(extra)?;
        Ok(self.resample(grid))
    }

    /// Re-read this function on an arbitrary grid of the same dimension
    /// (exact whenever `grid` refines the own grid).
    fn resample(&self, grid: Grid) -> StepFn {
        let src = self.shape();
        let own = &self.grid;
        StepFn::from_fn(grid.clone(), self.m, |idx| {
            let s: Vec<usize> = idx
                .iter()
                .enumerate()
                .map(|(i, &j)| own.cell_index(i, &grid.cell_rep(i, j)))
                .collect();
            self.cells[src.flat(&s)].clone()
        })
    }

    /// Pointwise combination on the union grid.
    pub fn zip_with(
        &self,
        other: &StepFn,
        f: impl Fn(&LexElem, &LexElem) -> Result<LexElem>,
    ) -> Result<StepFn> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        let grid = self.grid.union(&other.grid)?;
        let a = if grid == self.grid {
            self.clone()
        } else {
            self.resample(grid.clone())
        };
        let b = if grid == other.grid {
            other.clone()
        } else {
            other.resample(grid.clone())
        };
        let cells = a
            .cells
            .iter()
            .zip(&b.cells)
            .map(|(x, y)| f(x, y))
            .collect::<Result<_>>()?;
        Ok(StepFn {
            grid,
            m: self.m,
            cells,
        })
    }

    pub fn add(&self, other: &StepFn) -> Result<StepFn> {
        self.zip_with(other, |a, b| a.try_add(b))
    }

    pub fn sub(&self, other: &StepFn) -> Result<StepFn> {
        self.zip_with(other, |a, b| a.try_sub(b))
    }

    /// Pointwise equality as functions (grids may differ).
    pub fn same_function(&self, other: &StepFn) -> bool {
        self.zip_with(other, |a, b| a.try_sub(b))
            .map(|d| d.cells.iter().all(LexElem::is_zero))
            .unwrap_or(false)
    }

    /// Drop breakpoints across which the function does not change.
    pub fn simplify(&self) -> StepFn {
        let mut f = self.clone();
        for axis in 0..f.n() {
            let mut keep: Vec<Rat> = Vec::new();
            let shape = f.shape();
            for (j, b) in f.grid.axes[axis].iter().enumerate() {
                let jumps = shape.iter().filter(|idx| idx[axis] == j).any(|idx| {
                    let mut up = idx.clone();
                    up[axis] += 1;
                    f.cells[shape.flat(&idx)] != f.cells[shape.flat(&up)]
                });
                if jumps {
                    keep.push(b.clone());
                }
            }
            if keep.len() != f.grid.axes[axis].len() {
                let mut axes = f.grid.axes.clone();
                axes[axis] = keep;
                f = f.resample(Grid { axes });
            }
        }
        f
    }
}
