//! Decompositions of a spectral resolution into pseudo spectral resolutions,
//! and the extension obtained by summing the components' extensions.

use crate::error::{Error, Result};
use crate::lexcore::{LexElem, Rat};
use crate::spectral::{characteristic_points, CharPoint, Kind, SpectralResolution};
use crate::stepfun::{Bound, DecReal, DiffOp, StepFn};

use super::atoms::atom_decomposition;
use super::oracle::oracle_observable;
use super::Observable;

/// One pseudo spectral resolution of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Per-axis operator label: `−1, 0, 1` for the perfect decomposition,
    /// `1..=2mᵢ+1` for the staircase.
    pub label: Vec<i64>,
    pub sr: SpectralResolution,
    /// Set when the component is concentrated at this grid point, i.e. is
    /// `u·[t ≫ point]` for its top value `u`.
    pub point: Option<Vec<Rat>>,
}

impl Component {
    /// Extend this component: a point mass when concentrated, otherwise the
    /// component has no characteristic point and lives on an interval of
    /// the radical, where inclusion–exclusion is the extension.
    pub fn extend(&self) -> Result<Observable> {
        match &self.point {
            Some(p) => {
                let top = self.sr.top().clone();
                Observable::from_points(p.len(), self.sr.ctx(), &[(p.clone(), top)])
            }
            None => oracle_observable(&self.sr),
        }
    }
}

fn fplus(r: &Rat) -> DecReal {
    DecReal::FinPlus(r.clone())
}

fn fin(r: &Rat) -> DecReal {
    DecReal::Fin(r.clone())
}

fn neg_inf() -> Bound {
    Bound::At(DecReal::NegInf)
}

/// The unique regular characteristic point required by the perfect-case
/// constructions.
pub(crate) fn unique_char_point(sr: &SpectralResolution) -> Result<CharPoint> {
    if !sr.ctx().is_perfect() {
        return Err(Error::Precondition(format!(
            "requires a perfect algebra (k = 1), got k = {}",
            sr.ctx().k
        )));
    }
    let mut cps = characteristic_points(sr);
    match cps.len() {
        1 if cps[0].regular => Ok(cps.remove(0)),
        1 => Err(Error::CharacteristicPoint(
            "the characteristic point is irregular".into(),
        )),
        0 => Err(Error::CharacteristicPoint("no characteristic point".into())),
        c => Err(Error::CharacteristicPoint(format!(
            "{c} characteristic points, expected one"
        ))),
    }
}

/// Check that `f = u·[t ≫ p]` with `u` its top value.
fn check_concentrated(f: &StepFn, p: &[Rat]) -> Result<()> {
    let corner: Vec<usize> = p
        .iter()
        .enumerate()
        .map(|(i, r)| f.grid().cell_index(i, &fplus(r)))
        .collect();
    let top = f.top();
    let zero = LexElem::zero(f.m());
    for idx in f.shape().iter() {
        let above = idx.iter().zip(&corner).all(|(a, c)| a >= c);
        let want = if above { top } else { &zero };
        if f.cell(&idx) != want {
            return Err(Error::IdentityViolation(format!(
                "component is not concentrated at the characteristic point: cell {idx:?} holds {}",
                f.cell(&idx)
            )));
        }
    }
    Ok(())
}

fn build(
    sr: &SpectralResolution,
    label: Vec<i64>,
    ops: Vec<DiffOp>,
    point: Option<Vec<Rat>>,
) -> Result<Component> {
    let f = sr.fun().delta_apply(&ops)?;
    if let Some(p) = &point {
        check_concentrated(&f, p)?;
    }
    Ok(Component {
        label,
        sr: SpectralResolution::new(f, sr.ctx(), Kind::Pseudo)?,
        point,
    })
}

/// The `3ⁿ` functions `F_g`, `g ∈ {−1,0,1}ⁿ`, of a perfect spectral
/// resolution with characteristic point `t⁰`. Per axis the operator is
/// `Δ(−∞, min{t⁰,t})` for `−1`, `Δ(min{t⁰,t}, min{t⁰⁺,t})` for `0` and
/// `Δ(min{t⁰⁺,t}, t)` for `1`.
pub fn decompose_perfect(sr: &SpectralResolution) -> Result<Vec<Component>> {
    let cp = unique_char_point(sr)?;
    let n = sr.n();
    let count = 3usize.pow(n as u32);
    let mut out = Vec::with_capacity(count);
    for code in 0..count {
        let mut c = code;
        let mut label = vec![0i64; n];
        for g in label.iter_mut().rev() {
            *g = (c % 3) as i64 - 1;
            c /= 3;
        }
        let ops = label
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let t0 = &cp.point[i];
                match g {
                    -1 => DiffOp::new(i, neg_inf(), Bound::Min(fin(t0))),
                    0 => DiffOp::new(i, Bound::Min(fin(t0)), Bound::Min(fplus(t0))),
                    _ => DiffOp::new(i, Bound::Min(fplus(t0)), Bound::Var),
                }
            })
            .collect();
        let point = label.iter().all(|&g| g == 0).then(|| cp.point.clone());
        out.push(build(sr, label, ops, point)?);
    }
    Ok(out)
}

/// The staircase decomposition: per axis, the distinct coordinates
/// `c₁ < ⋯ < c_m` of all characteristic points give the chain
/// `Δ(−∞,min{t,c₁})`, `Δ(min{t,c_j},min{t,c_j⁺})`,
/// `Δ(min{t,c_j⁺},min{t,c_{j+1}})`, `Δ(min{t,c_m⁺},t)`, labelled `1..=2m+1`.
/// The `Π(2mᵢ+1)` products are the components; those with only even labels
/// are concentrated at a point of the characteristic-coordinate lattice.
pub fn decompose_staircase(sr: &SpectralResolution) -> Result<Vec<Component>> {
    let cps = characteristic_points(sr);
    let n = sr.n();
    let coords: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut c: Vec<Rat> = cps.iter().map(|p| p.point[i].clone()).collect();
            c.sort();
            c.dedup();
            c
        })
        .collect();
    let chains: Vec<Vec<Option<DiffOp>>> = coords
        .iter()
        .enumerate()
        .map(|(i, c)| axis_chain(i, c))
        .collect();
    let shape = crate::stepfun::Shape::new(chains.iter().map(Vec::len).collect());
    let mut out = Vec::with_capacity(shape.len());
    for sel in shape.iter() {
        let label: Vec<i64> = sel.iter().map(|&s| s as i64 + 1).collect();
        let ops: Vec<DiffOp> = sel
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| chains[i][s].clone())
            .collect();
        let point = (n > 0 && label.iter().all(|l| l % 2 == 0)).then(|| {
            label
                .iter()
                .enumerate()
                .map(|(i, l)| coords[i][(*l as usize) / 2 - 1].clone())
                .collect()
        });
        out.push(build(sr, label, ops, point)?);
    }
    Ok(out)
}

/// Operator chain along one axis; `None` is the identity `Δ(−∞,t)`.
fn axis_chain(axis: usize, c: &[Rat]) -> Vec<Option<DiffOp>> {
    let Some(first) = c.first() else {
        return vec![None];
    };
    let mut ops = vec![Some(DiffOp::new(axis, neg_inf(), Bound::Min(fin(first))))];
    for (j, cj) in c.iter().enumerate() {
        ops.push(Some(DiffOp::new(
            axis,
            Bound::Min(fin(cj)),
            Bound::Min(fplus(cj)),
        )));
        let hi = match c.get(j + 1) {
            Some(next) => Bound::Min(fin(next)),
            None => Bound::Var,
        };
        ops.push(Some(DiffOp::new(axis, Bound::Min(fplus(cj)), hi)));
    }
    ops
}

/// Check that the components add up to `F` pointwise.
pub fn check_decomposition(sr: &SpectralResolution, components: &[Component]) -> Result<()> {
    let zero = StepFn::constant(sr.grid().clone(), LexElem::zero(sr.ctx().m));
    let sum = components
        .iter()
        .try_fold(zero, |acc, c| acc.add(c.sr.fun()))?;
    if !sum.same_function(sr.fun()) {
        return Err(Error::IdentityViolation(
            "components do not sum to F".into(),
        ));
    }
    Ok(())
}

/// Extension as the sum of the components' extensions: the perfect
/// decomposition for `k = 1`, the staircase otherwise.
pub fn component_sum(sr: &SpectralResolution) -> Result<Observable> {
    let components = if sr.ctx().is_perfect() && characteristic_points(sr).len() == 1 {
        decompose_perfect(sr)?
    } else {
        decompose_staircase(sr)?
    };
    let atoms = atom_decomposition(sr.grid());
    let m = sr.ctx().m;
    let mut mass = vec![LexElem::zero(m); atoms.len()];
    for c in &components {
        if c.sr.top().is_zero() {
            continue;
        }
        let x = c.extend()?.embed(&atoms)?;
        for (acc, v) in mass.iter_mut().zip(x.masses()) {
            if !v.is_zero() {
                *acc = &*acc + v;
            }
        }
    }
    Observable::new(atoms, mass, sr.ctx())
}
