//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use lexspec::extend::Component;
use lexspec::gen::{random_resolution, rng, GenParams};
use lexspec::stepfun::Grid;
use lexspec::{DecReal, Kind, LexElem, MvContext, Rat, SpectralResolution, StepFn};

pub fn e(h: i64, g: i64) -> LexElem {
    LexElem::ints(h, &[g])
}

pub fn ctx(k: i64, m: usize) -> MvContext {
    MvContext::new(k, m).unwrap()
}

pub fn r(x: i64) -> Rat {
    Rat::from_int(x)
}

/// One breakpoint pair, perfect, `m = 1`.
pub fn single_jump() -> SpectralResolution {
    let f = StepFn::new(
        Grid::from_ints(&[&[0, 2]]).unwrap(),
        1,
        vec![e(0, 0), e(0, 1), e(1, 0)],
    )
    .unwrap();
    SpectralResolution::validated(f, ctx(1, 1), Kind::Spectral).unwrap()
}

/// The one-dimensional resolutions of the strict-inequality example.
pub fn crossed_marginals() -> (SpectralResolution, SpectralResolution) {
    let fx = StepFn::new(
        Grid::from_ints(&[&[2, 3]]).unwrap(),
        1,
        vec![e(0, 0), e(0, 3), e(1, 0)],
    )
    .unwrap();
    let fy = StepFn::new(
        Grid::from_ints(&[&[1, 5]]).unwrap(),
        1,
        vec![e(0, 0), e(0, 4), e(1, 0)],
    )
    .unwrap();
    (
        SpectralResolution::validated(fx, ctx(1, 1), Kind::Spectral).unwrap(),
        SpectralResolution::validated(fy, ctx(1, 1), Kind::Spectral).unwrap(),
    )
}

/// The two-dimensional meet joint of [`crossed_marginals`].
pub fn crossed() -> SpectralResolution {
    let (x, y) = crossed_marginals();
    lexspec::meet_joint(&[x, y]).unwrap().0
}

/// A 2-perfect staircase with two characteristic points.
pub fn staircase() -> SpectralResolution {
    let f = StepFn::new(
        Grid::from_ints(&[&[0, 1, 3]]).unwrap(),
        1,
        vec![e(0, 0), e(0, 1), e(1, 1), e(2, 0)],
    )
    .unwrap();
    SpectralResolution::validated(f, ctx(2, 1), Kind::Spectral).unwrap()
}

/// `count` random valid resolutions from a fixed seed.
pub fn random_batch(seed: u64, count: usize, params: &GenParams) -> Vec<SpectralResolution> {
    let mut g = rng(seed);
    (0..count)
        .map(|_| random_resolution(&mut g, params))
        .collect()
}

/// The same resolution on a grid with one more breakpoint per axis.
pub fn refined(sr: &SpectralResolution) -> SpectralResolution {
    let extra = lexspec::gen::extra_breakpoints(sr.grid());
    SpectralResolution::new(sr.fun().refine(&extra).unwrap(), sr.ctx(), sr.kind()).unwrap()
}

pub fn component_values(cs: &[Component]) -> Vec<LexElem> {
    cs.iter().map(|c| c.sr.top().clone()).collect()
}

// ---------------------------------------------------------------------------
// Characteristic points of one-axis Δ-slices

/// Which row of the slice table an endpoint pair falls in, and whether the
/// slice `Δ(lo, hi)F` is predicted to have a characteristic point when the
/// characteristic point of `F` has coordinate `t0` on the sliced axis.
///
/// Row (vi) reads `t₁ ≤ t⁰`, which is what (i) gives for `t₂ → ∞`. The
/// pair `(t₁⁺, t₂)` follows the same reasoning: `t₁ < t⁰ < t₂`.
pub fn slice_case(lo: &DecReal, hi: &DecReal, t0: &Rat) -> Option<(&'static str, bool)> {
    use DecReal::*;
    Some(match (lo, hi) {
        (Fin(a), Fin(b)) => ("(i)", a <= t0 && b > t0),
        (Fin(a), FinPlus(b)) => ("(ii)", a <= t0 && b >= t0),
        (FinPlus(a), FinPlus(b)) => ("(iii)", a < t0 && b >= t0),
        (NegInf, Fin(b)) => ("(iv)", b > t0),
        (NegInf, FinPlus(b)) => ("(v)", b >= t0),
        (Fin(a), PosInf) => ("(vi)", a <= t0),
        (FinPlus(a), PosInf) => ("(vii)", a < t0),
        (NegInf, PosInf) => ("(viii)", true),
        (FinPlus(a), Fin(b)) => ("(t1+,t2)", a < t0 && b > t0),
        _ => return None,
    })
}

/// Every decorated endpoint worth distinguishing on an axis: breakpoints,
/// gaps, values outside, each plain and `⁺`, plus `−∞` and `+∞`.
pub fn endpoint_candidates(axis: &[Rat]) -> Vec<DecReal> {
    let mut vals: Vec<Rat> = axis.to_vec();
    if let (Some(lo), Some(hi)) = (axis.first(), axis.last()) {
        vals.push(lo - &Rat::one());
        vals.push(hi + &Rat::one());
    } else {
        vals.push(Rat::zero());
    }
    for w in axis.windows(2) {
        vals.push(w[0].midpoint(&w[1]));
    }
    vals.sort();
    let mut out = vec![DecReal::NegInf];
    for v in vals {
        out.push(DecReal::Fin(v.clone()));
        out.push(DecReal::FinPlus(v));
    }
    out.push(DecReal::PosInf);
    out
}
