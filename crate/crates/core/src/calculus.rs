//! Joint observables and sums of observables.
//!
//! * [`meet_joint`]: the `n`-dimensional observable whose distribution
//!   function is the pointwise meet of `n` one-dimensional ones;
//! * [`marginal`]: push-forward along a coordinate projection;
//! * [`sum_observables`]: the sup–inf convolution of marginals, joined
//!   again by [`meet_joint`]; with [`neutral_observable`] this forms a
//!   commutative semigroup with neutral element.

use crate::error::{Error, Result};
use crate::extend::{
    atom_decomposition, check_extension, component_sum, oracle_observable, Observable,
};
use crate::lexcore::{LexElem, Rat};
use crate::mvalg::MvContext;
use crate::spectral::{validate_spectral, Kind, SpectralResolution};
use crate::stepfun::{merge_sorted, DecReal, Grid, StepFn};

/// One-dimensional resolutions over a shared algebra, each paired with its
/// observable.
#[derive(Clone, Debug)]
pub struct ObservableFamily {
    ctx: MvContext,
    members: Vec<(SpectralResolution, Observable)>,
}

impl ObservableFamily {
    /// Validate every resolution and extend it.
    pub fn new(ctx: MvContext, resolutions: Vec<SpectralResolution>) -> Result<Self> {
        let mut members = Vec::with_capacity(resolutions.len());
        for (i, sr) in resolutions.into_iter().enumerate() {
            if sr.ctx() != ctx {
                return Err(Error::Precondition(format!(
                    "member {} lives on {:?}, family on {ctx:?}",
                    i + 1,
                    sr.ctx()
                )));
            }
            if sr.n() != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    got: sr.n(),
                });
            }
            let report = validate_spectral(sr.fun(), ctx, sr.kind());
            if !report.is_valid() {
                return Err(Error::InvalidResolution(format!(
                    "member {}: {report}",
                    i + 1
                )));
            }
            let x = oracle_observable(&sr)?;
            members.push((sr, x));
        }
        Ok(ObservableFamily { ctx, members })
    }

    /// Build from one-dimensional observables (point masses only).
    pub fn from_observables(ctx: MvContext, xs: &[Observable]) -> Result<Self> {
        let resolutions = xs
            .iter()
            .map(|x| {
                if x.ctx() != ctx {
                    return Err(Error::Precondition(
                        "observable on a different algebra".into(),
                    ));
                }
                SpectralResolution::new(x.distribution()?, ctx, Kind::Spectral)
            })
            .collect::<Result<_>>()?;
        Self::new(ctx, resolutions)
    }

    pub fn ctx(&self) -> MvContext {
        self.ctx
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn resolutions(&self) -> impl Iterator<Item = &SpectralResolution> {
        self.members.iter().map(|(sr, _)| sr)
    }

    pub fn observables(&self) -> impl Iterator<Item = &Observable> {
        self.members.iter().map(|(_, x)| x)
    }

    /// The meet joint of the family, see [`meet_joint`].
    pub fn joint(&self) -> Result<(SpectralResolution, Observable)> {
        let srs: Vec<SpectralResolution> = self.resolutions().cloned().collect();
        meet_joint(&srs)
    }
}

/// The meet joint observable of one-dimensional spectral resolutions on a
/// perfect algebra: `F(s₁,…,sₙ) = F₁(s₁) ∧ ⋯ ∧ Fₙ(sₙ)`.
///
/// The joint resolution is validated (all conditions), extended, and its
/// marginals are checked to reproduce the inputs' observables.
pub fn meet_joint(fs: &[SpectralResolution]) -> Result<(SpectralResolution, Observable)> {
    let first = fs
        .first()
        .ok_or_else(|| Error::Precondition("empty family".into()))?;
    let ctx = first.ctx();
    if ctx.k != 1 {
        return Err(Error::Precondition(format!(
            "meet joints need a perfect algebra (k = 1), got k = {}",
            ctx.k
        )));
    }
    let family = ObservableFamily::new(ctx, fs.to_vec())?;
    let axes: Vec<Vec<Rat>> = fs.iter().map(|sr| sr.grid().axis(0).to_vec()).collect();
    let grid = Grid::new(axes)?;
    let mut err = None;
    let f = StepFn::from_fn(grid, ctx.m, |idx| {
        let mut acc = ctx.unit();
        for (i, sr) in fs.iter().enumerate() {
            match acc.inf(sr.fun().cell(&[idx[i]])) {
                Ok(v) => acc = v,
                Err(e) => {
                    err.get_or_insert(e);
                }
            }
        }
        acc
    });
    if let Some(e) = err {
        return Err(e);
    }
    let sr = SpectralResolution::validated(f, ctx, Kind::Spectral)?;
    let x = component_sum(&sr)?;
    check_extension(&sr, &x)?;
    for (i, xi) in family.observables().enumerate() {
        let mi = marginal(&x, i)?;
        if !mi.same_masses(xi) {
            return Err(Error::IdentityViolation(format!(
                "marginal {} of the joint differs from the input observable",
                i + 1
            )));
        }
    }
    Ok((sr, x))
}

/// Push-forward of `x` along the projection onto `axis`.
pub fn marginal(x: &Observable, axis: usize) -> Result<Observable> {
    if axis >= x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            got: axis + 1,
        });
    }
    let atoms = atom_decomposition(&Grid::new(vec![x.grid().axis(axis).to_vec()])?);
    let mut mass = vec![LexElem::zero(x.ctx().m); atoms.len()];
    for (flat, v) in x.masses().iter().enumerate() {
        if !v.is_zero() {
            let f = x.atoms().shape().unravel(flat)[axis];
            mass[f] = &mass[f] + v;
        }
    }
    Observable::new(atoms, mass, x.ctx())
}

/// `o`: the unit mass at the origin.
pub fn neutral_observable(ctx: MvContext, n: usize) -> Result<Observable> {
    Observable::from_points(n, ctx, &[(vec![Rat::zero(); n], ctx.unit())])
}

/// `z₁ + z₂`: convolve the marginals pairwise and take the meet joint of
/// the results. For `n = 1` any `k` is accepted (the result is simply the
/// extension of the convolution); for `n ≥ 2` the meet joint needs `k = 1`.
pub fn sum_observables(z1: &Observable, z2: &Observable) -> Result<Observable> {
    if z1.ctx() != z2.ctx() {
        return Err(Error::Precondition(format!(
            "summands live on different algebras: {:?} vs {:?}",
            z1.ctx(),
            z2.ctx()
        )));
    }
    if z1.n() != z2.n() {
        return Err(Error::DimensionMismatch {
            expected: z1.n(),
            got: z2.n(),
        });
    }
    let ctx = z1.ctx();
    let n = z1.n();
    if n == 0 {
        return Err(Error::Precondition(
            "sums need at least one dimension".into(),
        ));
    }
    let mut sums = Vec::with_capacity(n);
    for i in 0..n {
        let fx = marginal(z1, i)?.distribution()?;
        let fy = marginal(z2, i)?.distribution()?;
        let fs = convolve(&fx, &fy)?;
        sums.push(SpectralResolution::validated(fs, ctx, Kind::Spectral)?);
    }
    if n == 1 {
        let sr = sums.pop().expect("one summed resolution");
        return oracle_observable(&sr);
    }
    Ok(meet_joint(&sums)?.1)
}

/// `F_{x+y}(t) = sup_r F_x(r) ∧ F_y(t − r)` for one-dimensional step
/// distribution functions, on the grid of pairwise breakpoint sums.
pub fn convolve(fx: &StepFn, fy: &StepFn) -> Result<StepFn> {
    if fx.n() != 1 || fy.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: fx.n().max(fy.n()),
        });
    }
    let (bx, by) = (fx.grid().axis(0), fy.grid().axis(0));
    let mut sums: Vec<Rat> = Vec::new();
    for a in bx {
        let row: Vec<Rat> = by.iter().map(|b| a + b).collect();
        sums = merge_sorted(&sums, &row);
    }
    let grid = Grid::new(vec![sums.clone()])?;
    // One representative per cell; the top cell is sampled just above.
    let reps: Vec<Rat> = match sums.last() {
        None => vec![Rat::zero()],
        Some(last) => sums.iter().cloned().chain([last + &Rat::one()]).collect(),
    };
    let cells = reps
        .iter()
        .map(|t| sup_inf(fx, fy, t, false))
        .collect::<Result<Vec<_>>>()?;
    // Refinement guard: doubling the candidate set never raises the sup.
    for (t, v) in reps.iter().zip(&cells) {
        if &sup_inf(fx, fy, t, true)? != v {
            return Err(Error::IdentityViolation(format!(
                "convolution at {t} changes under candidate refinement"
            )));
        }
    }
    StepFn::new(grid, fx.m(), cells)
}

/// `sup_r F_x(r) ∧ F_y(t − r)` over a finite candidate set on which both
/// factors attain every combination of their pieces.
fn sup_inf(fx: &StepFn, fy: &StepFn, t: &Rat, refine: bool) -> Result<LexElem> {
    let mut cand: Vec<Rat> = fx.grid().axis(0).to_vec();
    let shifted: Vec<Rat> = fy.grid().axis(0).iter().rev().map(|b| t - b).collect();
    cand = merge_sorted(&cand, &shifted);
    let mut extra = Vec::new();
    if let (Some(lo), Some(hi)) = (cand.first(), cand.last()) {
        extra.push(lo - &Rat::one());
        extra.push(hi + &Rat::one());
    } else {
        extra.push(Rat::zero());
    }
    for w in cand.windows(2) {
        let mid = w[0].midpoint(&w[1]);
        if refine {
            extra.push(w[0].midpoint(&mid));
            extra.push(mid.midpoint(&w[1]));
        }
        extra.push(mid);
    }
    extra.sort();
    cand = merge_sorted(&cand, &extra);
    let mut best = LexElem::zero(fx.m());
    for r in &cand {
        let a = fx.eval_at(&[DecReal::Fin(r.clone())])?;
        let b = fy.eval_at(&[DecReal::Fin(t - r)])?;
        best = best.sup(&a.inf(b)?)?;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::Factor;

    fn e(h: i64, g: i64) -> LexElem {
        LexElem::ints(h, &[g])
    }

    fn ctx() -> MvContext {
        MvContext::new(1, 1).unwrap()
    }

    fn obs(points: &[(i64, LexElem)]) -> Observable {
        let pts: Vec<(Vec<Rat>, LexElem)> = points
            .iter()
            .map(|(p, v)| (vec![Rat::from_int(*p)], v.clone()))
            .collect();
        Observable::from_points(1, ctx(), &pts).unwrap()
    }

    fn pt(xs: &[i64]) -> Vec<Factor> {
        xs.iter()
            .map(|&x| Factor::Point {
                at: Rat::from_int(x),
            })
            .collect()
    }

    #[test]
    fn crossed_joint_and_marginals() {
        let x = obs(&[(2, e(0, 3)), (3, e(1, -3))]);
        let y = obs(&[(1, e(0, 4)), (5, e(1, -4))]);
        let fam = ObservableFamily::from_observables(ctx(), &[x.clone(), y.clone()]).unwrap();
        let (_, z) = fam.joint().unwrap();
        let map = z.mass_map();
        assert_eq!(map.len(), 3);
        assert_eq!(map[&pt(&[2, 1])], e(0, 3));
        assert_eq!(map[&pt(&[3, 1])], e(0, 1));
        assert_eq!(map[&pt(&[3, 5])], e(1, -4));
        assert!(marginal(&z, 0).unwrap().same_masses(&x));
        assert!(marginal(&z, 1).unwrap().same_masses(&y));
        assert!(marginal(&z, 2).is_err());
    }

    #[test]
    fn sum_example() {
        let x = obs(&[(0, e(0, 1)), (1, e(1, -1))]);
        let y = obs(&[(2, e(0, 2)), (3, e(1, -2))]);
        let s = sum_observables(&x, &y).unwrap();
        let want = obs(&[(2, e(0, 1)), (3, e(0, 1)), (4, e(1, -2))]);
        assert!(s.same_masses(&want));
        assert!(sum_observables(&y, &x).unwrap().same_masses(&want));
    }

    #[test]
    fn neutral_law() {
        let o = neutral_observable(ctx(), 1).unwrap();
        assert_eq!(o.mass_map()[&pt(&[0])], e(1, 0));
        assert!(sum_observables(&o, &o).unwrap().same_masses(&o));
        let x = obs(&[(0, e(0, 1)), (1, e(1, -1))]);
        assert!(sum_observables(&x, &o).unwrap().same_masses(&x));
    }

    #[test]
    fn joint_needs_perfect() {
        let c2 = MvContext::new(2, 1).unwrap();
        let f = StepFn::new(Grid::from_ints(&[&[0]]).unwrap(), 1, vec![e(0, 0), e(2, 0)]).unwrap();
        let sr = SpectralResolution::new(f, c2, Kind::Spectral).unwrap();
        assert!(matches!(
            meet_joint(&[sr.clone(), sr]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn context_mismatch() {
        let x = obs(&[(0, e(1, 0))]);
        let y = Observable::from_points(
            1,
            MvContext::new(2, 1).unwrap(),
            &[(vec![Rat::zero()], e(2, 0))],
        )
        .unwrap();
        assert!(matches!(
            sum_observables(&x, &y),
            Err(Error::Precondition(_))
        ));
    }
}
