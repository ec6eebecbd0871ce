//! Spectral resolutions: validation of the volume/limit/block conditions,
//! characteristic points and the ordering property.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexcore::{LexElem, Rat};
use crate::mvalg::{mv_validate, MvContext, MvElem};
use crate::stepfun::{DecReal, Grid, Shape, StepFn};

/// Spectral resolutions reach the unit at `+∞`; pseudo ones reach some `u₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Spectral,
    Pseudo,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Spectral => "spectral",
            Kind::Pseudo => "pseudo",
        })
    }
}

/// A step function together with its algebra and kind.
///
/// Construction checks only shape and dimension; use [`validate_spectral`]
/// (or [`SpectralResolution::validated`]) for the axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralResolution {
    f: StepFn,
    ctx: MvContext,
    kind: Kind,
}

impl SpectralResolution {
    pub fn new(f: StepFn, ctx: MvContext, kind: Kind) -> Result<Self> {
        if f.m() != ctx.m {
            return Err(Error::DimensionMismatch {
                expected: ctx.m,
                got: f.m(),
            });
        }
        Ok(SpectralResolution { f, ctx, kind })
    }

    /// Construct and require every condition of the report to pass.
    pub fn validated(f: StepFn, ctx: MvContext, kind: Kind) -> Result<Self> {
        let sr = SpectralResolution::new(f, ctx, kind)?;
        let report = validate_spectral(&sr.f, ctx, kind);
        if let Some(bad) = report.records.iter().find(|r| r.status == Status::Fail) {
            return Err(Error::InvalidResolution(format!(
                "condition {} fails: {}",
                bad.condition, bad.detail
            )));
        }
        Ok(sr)
    }

    pub fn fun(&self) -> &StepFn {
        &self.f
    }

    pub fn ctx(&self) -> MvContext {
        self.ctx
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn grid(&self) -> &Grid {
        self.f.grid()
    }

    /// `F(+∞,…,+∞)`: the unit, or `u₀` for pseudo resolutions.
    pub fn top(&self) -> &LexElem {
        self.f.top()
    }

    pub fn eval_at(&self, point: &[DecReal]) -> Result<MvElem> {
        mv_validate(self.f.eval_at(point)?.clone(), self.ctx)
    }

    pub fn report(&self) -> ValidationReport {
        validate_spectral(&self.f, self.ctx, self.kind)
    }

    pub fn with_kind(&self, kind: Kind) -> Self {
        SpectralResolution {
            kind,
            ..self.clone()
        }
    }

    pub fn into_fun(self) -> StepFn {
        self.f
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Decorated grid points exhibiting a violation, with the offending value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<Vec<DecReal>>,
    pub value: LexElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub condition: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub detail: String,
}

impl ConditionRecord {
    fn pass(condition: &str, detail: impl Into<String>) -> Self {
        ConditionRecord {
            condition: condition.into(),
            status: Status::Pass,
            witness: None,
            detail: detail.into(),
        }
    }

    fn fail(condition: &str, detail: impl Into<String>, witness: Witness) -> Self {
        ConditionRecord {
            condition: condition.into(),
            status: Status::Fail,
            witness: Some(witness),
            detail: detail.into(),
        }
    }
}

/// Outcome of checking the axioms; serializes as the list of records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub records: Vec<ConditionRecord>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn get(&self, condition: &str) -> Option<&ConditionRecord> {
        self.records.iter().find(|r| r.condition == condition)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            let s = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            writeln!(f, "{:>6}: {s}  {}", r.condition, r.detail)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Validation

/// Decorated point reading cell `j` of `axis`: `−∞` for the bottom cell,
/// `+∞` for the top cell, the closed right endpoint otherwise.
fn canonical_rep(grid: &Grid, axis: usize, j: usize) -> DecReal {
    let ax = grid.axis(axis);
    if j == 0 {
        DecReal::NegInf
    } else if j >= ax.len() {
        DecReal::PosInf
    } else {
        DecReal::Fin(ax[j].clone())
    }
}

fn point_of(grid: &Grid, idx: &[usize]) -> Vec<DecReal> {
    idx.iter()
        .enumerate()
        .map(|(i, &j)| canonical_rep(grid, i, j))
        .collect()
}

/// Volume of the grid rectangle with lower cell indices `lo` and upper `hi`:
/// `Δ₁(a₁,b₁)⋯Δₙ(aₙ,bₙ)F` where `aᵢ`, `bᵢ` read cells `loᵢ`, `hiᵢ`.
pub fn cell_volume(f: &StepFn, lo: &[usize], hi: &[usize]) -> LexElem {
    let shape = f.shape();
    let n = lo.len();
    let mut acc = LexElem::zero(f.m());
    let mut idx = vec![0; n];
    for mask in 0u32..(1 << n) {
        let mut neg = false;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                idx[i] = lo[i];
                neg = !neg;
            } else {
                idx[i] = hi[i];
            }
        }
        let v = &f.cells()[shape.flat(&idx)];
        acc = if neg { &acc - v } else { &acc + v };
    }
    acc
}

/// Above this many rectangles the volume check falls back to elementary
/// (adjacent-cell) rectangles, whose nonnegativity implies all others.
const FULL_RECTANGLE_LIMIT: usize = 50_000;

fn check_volumes(f: &StepFn, elementary_only: bool) -> std::result::Result<usize, Witness> {
    let dims = f.shape().dims().to_vec();
    let pairs: Vec<Vec<(usize, usize)>> = dims
        .iter()
        .map(|&d| {
            let mut v = Vec::new();
            for p in 0..d {
                for q in p + 1..d {
                    if !elementary_only || q == p + 1 {
                        v.push((p, q));
                    }
                }
            }
            v
        })
        .collect();
    let total: usize = pairs.iter().map(Vec::len).product();
    if !elementary_only && total > FULL_RECTANGLE_LIMIT {
        return check_volumes(f, true);
    }
    let outer = Shape::new(pairs.iter().map(Vec::len).collect());
    let mut count = 0;
    for sel in outer.iter() {
        let lo: Vec<usize> = sel
            .iter()
            .enumerate()
            .map(|(i, &s)| pairs[i][s].0)
            .collect();
        let hi: Vec<usize> = sel
            .iter()
            .enumerate()
            .map(|(i, &s)| pairs[i][s].1)
            .collect();
        let vol = cell_volume(f, &lo, &hi);
        if !vol.is_nonneg() {
            return Err(Witness {
                points: vec![point_of(f.grid(), &lo), point_of(f.grid(), &hi)],
                value: vol,
            });
        }
        count += 1;
    }
    Ok(count)
}

/// One extra breakpoint between and beyond the existing ones on every axis.
pub fn refinement_grid(grid: &Grid) -> Grid {
    let axes = grid
        .axes()
        .iter()
        .map(|ax| {
            let mut extra = Vec::new();
            match (ax.first(), ax.last()) {
                (Some(a), Some(b)) => {
                    extra.push(a - &Rat::one());
                    extra.push(b + &Rat::one());
                }
                _ => extra.push(Rat::zero()),
            }
            extra.extend(ax.windows(2).map(|w| w[0].midpoint(&w[1])));
            crate::stepfun::merge_sorted(ax, &extra)
        })
        .collect();
    Grid::new(axes).expect("merged breakpoints are sorted")
}

/// Check the axioms: interval range, (i) volumes, (ii) left-continuity,
/// (iii) vanishing at `−∞`, (iv) top value, (v) block infima at
/// characteristic points.
pub fn validate_spectral(f: &StepFn, ctx: MvContext, kind: Kind) -> ValidationReport {
    let mut records = Vec::new();
    let grid = f.grid();
    let shape = f.shape();

    if f.m() != ctx.m {
        records.push(ConditionRecord::fail(
            "range",
            format!("values live in ℚ^{}, context expects ℚ^{}", f.m(), ctx.m),
            Witness {
                points: vec![],
                value: f.top().clone(),
            },
        ));
        return ValidationReport { records };
    }

    // range
    match shape.iter().find(|idx| !ctx.contains(f.cell(idx))) {
        None => records.push(ConditionRecord::pass(
            "range",
            format!("all values in [0,{}]", ctx.unit()),
        )),
        Some(idx) => {
            let v = f.cell(&idx).clone();
            let why = ctx
                .check(&v)
                .err()
                .map(|e| e.to_string())
                .unwrap_or_default();
            records.push(ConditionRecord::fail(
                "range",
                why,
                Witness {
                    points: vec![point_of(grid, &idx)],
                    value: v,
                },
            ));
        }
    }

    // (i) volume condition, then once more on a refined grid
    match check_volumes(f, false) {
        Ok(count) => {
            let refined = f.refine(&refinement_grid(grid)).expect("same dimension");
            match check_volumes(&refined, true) {
                Ok(fine) => records.push(ConditionRecord::pass(
                    "(i)",
                    format!("{count} grid rectangles and {fine} refined cells have volume ≥ 0"),
                )),
                Err(w) => records.push(ConditionRecord::fail(
                    "(i)",
                    "negative volume after refinement",
                    w,
                )),
            }
        }
        Err(w) => records.push(ConditionRecord::fail(
            "(i)",
            format!("negative volume {}", w.value),
            w,
        )),
    }

    // (ii) holds by the left-open right-closed cell representation
    records.push(ConditionRecord::pass(
        "(ii)",
        "left-continuous by construction",
    ));

    // (iii) lowest slab along each axis vanishes
    let slab_bad = (0..f.n()).find_map(|axis| {
        shape
            .iter()
            .find(|idx| idx[axis] == 0 && !f.cell(idx).is_zero())
            .map(|idx| (axis, idx))
    });
    match slab_bad {
        None => records.push(ConditionRecord::pass(
            "(iii)",
            "F vanishes as any coordinate → −∞",
        )),
        Some((axis, idx)) => {
            let mut p = point_of(grid, &idx);
            p[axis] = DecReal::NegInf;
            records.push(ConditionRecord::fail(
                "(iii)",
                format!("nonzero value at −∞ along axis {}", axis + 1),
                Witness {
                    points: vec![p],
                    value: f.cell(&idx).clone(),
                },
            ));
        }
    }

    // (iv) / (iv)′
    let top = f.top().clone();
    let top_point = vec![DecReal::PosInf; f.n()];
    match kind {
        Kind::Spectral if top == ctx.unit() => records.push(ConditionRecord::pass(
            "(iv)",
            format!("F(+∞) = {top} is the unit"),
        )),
        Kind::Spectral => records.push(ConditionRecord::fail(
            "(iv)",
            format!("F(+∞) = {top} is not the unit {}", ctx.unit()),
            Witness {
                points: vec![top_point],
                value: top,
            },
        )),
        Kind::Pseudo => records.push(ConditionRecord::pass("(iv)", format!("u₀ = {top}"))),
    }

    // (v)
    let points = char_points_of(f, ctx);
    let bad = points.iter().find_map(|cp| {
        let a_b = block_infimum(f, &cp.cell);
        (a_b.h != cp.block).then_some((cp, a_b))
    });
    match bad {
        None => records.push(ConditionRecord::pass(
            "(v)",
            format!(
                "{} characteristic point(s), block infima in their blocks",
                points.len()
            ),
        )),
        Some((cp, a_b)) => records.push(ConditionRecord::fail(
            "(v)",
            format!(
                "infimum above the point of block {} lies in block {}",
                cp.block, a_b.h
            ),
            Witness {
                points: vec![cp.decorated()],
                value: a_b,
            },
        )),
    }

    ValidationReport { records }
}

/// `a_B`: the meet of all values on cells at or above `corner`, i.e. of
/// `F(s)` over decorated `s ≫ t^B`.
fn block_infimum(f: &StepFn, corner: &[usize]) -> LexElem {
    f.shape()
        .iter()
        .filter(|idx| idx.iter().zip(corner).all(|(a, b)| a >= b))
        .map(|idx| f.cell(&idx).clone())
        .reduce(|a, b| a.inf(&b).expect("common dimension"))
        .expect("the corner cell itself qualifies")
}

// ---------------------------------------------------------------------------
// Characteristic points

/// The corner `t^B` of a region of cells where `F` reaches block `≥ block`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharPoint {
    pub block: i64,
    pub point: Vec<Rat>,
    /// True iff the cells with block `≥ block` are exactly the open orthant
    /// `{t ≫ point}`.
    pub regular: bool,
    #[serde(skip)]
    cell: Vec<usize>,
}

impl CharPoint {
    /// The point with every coordinate `⁺`-decorated: the lowest decorated
    /// point strictly above it.
    pub fn decorated(&self) -> Vec<DecReal> {
        self.point
            .iter()
            .map(|r| DecReal::FinPlus(r.clone()))
            .collect()
    }

    /// Cell multi-index of the corner.
    pub fn cell(&self) -> &[usize] {
        &self.cell
    }
}

impl fmt::Display for CharPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.point.iter().map(Rat::to_string).collect();
        write!(f, "block {}: ({})", self.block, coords.join(", "))?;
        if !self.regular {
            write!(f, " [irregular]")?;
        }
        Ok(())
    }
}

/// Characteristic points of `F`.
///
/// For every block `j ≥ 1` let `R_j` be the cells where `F` lies in a block
/// `≥ j`. Each minimal corner of some `R_j` is a characteristic point,
/// labelled with the highest such `j`; its coordinates are the left ends of
/// the corner cell, so `R_j` starts strictly above the point. A block whose
/// `T_j` is empty receives no point.
pub fn characteristic_points(sr: &SpectralResolution) -> Vec<CharPoint> {
    char_points_of(&sr.f, sr.ctx)
}

fn char_points_of(f: &StepFn, ctx: MvContext) -> Vec<CharPoint> {
    let shape = f.shape();
    let n = f.n();
    let mut corners: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for j in 1..=ctx.k {
        let in_r = |idx: &[usize]| f.cell(idx).h >= j;
        for idx in shape.iter() {
            if !in_r(&idx) || idx.contains(&0) {
                continue;
            }
            let minimal = (0..n).all(|i| {
                let mut prev = idx.clone();
                prev[i] -= 1;
                !in_r(&prev)
            });
            if minimal {
                corners.insert(idx, j);
            }
        }
    }
    let mut out: Vec<CharPoint> = corners
        .into_iter()
        .map(|(cell, block)| {
            let regular = shape.iter().all(|idx| {
                let above = idx.iter().zip(&cell).all(|(a, b)| a >= b);
                above == (f.cell(&idx).h >= block)
            });
            let point = cell
                .iter()
                .enumerate()
                .map(|(i, &c)| f.grid().axis(i)[c - 1].clone())
                .collect();
            CharPoint {
                block,
                point,
                regular,
                cell,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.block, &a.point).cmp(&(b.block, &b.point)));
    out
}

/// At most one point per block, componentwise non-decreasing in the block.
pub fn ordering_property(points: &[CharPoint]) -> bool {
    let mut by_block: BTreeMap<i64, &CharPoint> = BTreeMap::new();
    for p in points {
        if by_block.insert(p.block, p).is_some() {
            return false;
        }
    }
    let chain: Vec<&CharPoint> = by_block.into_values().collect();
    chain.windows(2).all(|w| {
        w[0].point.len() == w[1].point.len()
            && w[0].point.iter().zip(&w[1].point).all(|(a, b)| a <= b)
    })
}

impl CharPoint {
    /// A bare point, for use with [`ordering_property`].
    pub fn new(block: i64, point: Vec<Rat>) -> Self {
        CharPoint {
            block,
            point,
            regular: true,
            cell: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(h: i64, g: i64) -> LexElem {
        LexElem::ints(h, &[g])
    }

    fn ctx(k: i64) -> MvContext {
        MvContext::new(k, 1).unwrap()
    }

    fn single_jump() -> StepFn {
        StepFn::new(
            Grid::from_ints(&[&[0, 2]]).unwrap(),
            1,
            vec![e(0, 0), e(0, 1), e(1, 0)],
        )
        .unwrap()
    }

    fn staircase() -> StepFn {
        StepFn::new(
            Grid::from_ints(&[&[0, 1, 3]]).unwrap(),
            1,
            vec![e(0, 0), e(0, 1), e(1, 1), e(2, 0)],
        )
        .unwrap()
    }

    fn rats(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    #[test]
    fn single_jump_is_valid() {
        let r = validate_spectral(&single_jump(), ctx(1), Kind::Spectral);
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.records.len(), 6);
    }

    #[test]
    fn zero_fails_iv() {
        let f = StepFn::constant(Grid::from_ints(&[&[0]]).unwrap(), e(0, 0));
        let r = validate_spectral(&f, ctx(1), Kind::Spectral);
        assert_eq!(r.get("(iv)").unwrap().status, Status::Fail);
        assert_eq!(r.get("(i)").unwrap().status, Status::Pass);
        assert!(validate_spectral(&f, ctx(1), Kind::Pseudo).is_valid());
    }

    #[test]
    fn negative_volume_is_caught() {
        let f = StepFn::new(
            Grid::from_ints(&[&[0], &[0]]).unwrap(),
            1,
            vec![e(0, 0), e(0, 1), e(0, 1), e(0, 1)],
        )
        .unwrap();
        let r = validate_spectral(&f, ctx(1), Kind::Pseudo);
        let rec = r.get("(i)").unwrap();
        assert_eq!(rec.status, Status::Fail);
        let w = rec.witness.as_ref().unwrap();
        assert_eq!(w.value, e(0, -1));
        assert_eq!(w.points[1], vec![DecReal::PosInf, DecReal::PosInf]);
    }

    #[test]
    fn range_and_iii_failures() {
        let f = StepFn::new(Grid::from_ints(&[&[0]]).unwrap(), 1, vec![e(0, 1), e(1, 0)]).unwrap();
        let r = validate_spectral(&f, ctx(1), Kind::Spectral);
        assert_eq!(r.get("(iii)").unwrap().status, Status::Fail);
        let f = StepFn::new(Grid::from_ints(&[&[0]]).unwrap(), 1, vec![e(0, 0), e(1, 1)]).unwrap();
        let r = validate_spectral(&f, ctx(1), Kind::Pseudo);
        assert_eq!(r.get("range").unwrap().status, Status::Fail);
    }

    #[test]
    fn char_points_examples() {
        let sr = SpectralResolution::validated(single_jump(), ctx(1), Kind::Spectral).unwrap();
        let cps = characteristic_points(&sr);
        assert_eq!(cps.len(), 1);
        assert_eq!(
            (cps[0].block, cps[0].point.clone(), cps[0].regular),
            (1, rats(&[2]), true)
        );

        let sr = SpectralResolution::validated(staircase(), ctx(2), Kind::Spectral).unwrap();
        let cps = characteristic_points(&sr);
        let got: Vec<(i64, Vec<Rat>)> = cps.iter().map(|c| (c.block, c.point.clone())).collect();
        assert_eq!(got, vec![(1, rats(&[1])), (2, rats(&[3]))]);
        assert!(ordering_property(&cps));

        let radical =
            StepFn::new(Grid::from_ints(&[&[0]]).unwrap(), 1, vec![e(0, 0), e(0, 5)]).unwrap();
        let sr = SpectralResolution::validated(radical, ctx(1), Kind::Pseudo).unwrap();
        assert!(characteristic_points(&sr).is_empty());
    }

    #[test]
    fn ordering_property_examples() {
        assert!(!ordering_property(&[
            CharPoint::new(1, rats(&[1, 3])),
            CharPoint::new(2, rats(&[3, 1]))
        ]));
        assert!(ordering_property(&[CharPoint::new(1, rats(&[2, 5]))]));
        assert!(!ordering_property(&[
            CharPoint::new(1, rats(&[1])),
            CharPoint::new(1, rats(&[2]))
        ]));
    }

    #[test]
    fn incomparable_staircase() {
        // k = 2, unit jumps at (1,3) and (3,1): two corners for block 1,
        // one (their join) for block 2, and no ordering property.
        let grid = Grid::from_ints(&[&[1, 3], &[1, 3]]).unwrap();
        let f = StepFn::from_fn(grid, 1, |i| {
            let h = (i[0] >= 1 && i[1] >= 2) as i64 + (i[0] >= 2 && i[1] >= 1) as i64;
            e(h, 0)
        });
        let sr = SpectralResolution::validated(f, ctx(2), Kind::Spectral).unwrap();
        let cps = characteristic_points(&sr);
        let got: Vec<(i64, Vec<Rat>)> = cps.iter().map(|c| (c.block, c.point.clone())).collect();
        assert_eq!(
            got,
            vec![(1, rats(&[1, 3])), (1, rats(&[3, 1])), (2, rats(&[3, 3]))]
        );
        assert!(cps.iter().all(|c| !c.regular || c.block == 2));
        assert!(!ordering_property(&cps));
    }
}
