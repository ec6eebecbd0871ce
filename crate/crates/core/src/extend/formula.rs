//! Extension of a perfect spectral resolution by the block/projection
//! formula, together with its rewriting as a sum of nonnegative terms.
//!
//! With `t⁰` the characteristic point, `x_i` (`i ∈ {0,1}ⁿ`) the extensions
//! of the corner-block restrictions and `x_S` the extensions of the
//! lower-dimensional pseudo resolutions `Π_{m∉S} Δ_m(t⁰_m,t⁰_m⁺)F` placed on
//! the flat `L_S = {t : t_m = t⁰_m for m ∉ S}`,
//!
//! `x = Σ_i x_i + Σ_{k=0}^{n−1} (−1)^{n−k+1} Σ_{|S|=k} x_S`,
//!
//! where `x_∅` is the point mass `u_∅` at `t⁰`. The same observable is
//! `Σ_i x_i + Σ_{i=1}^{n} x_{î}|_{H_i ∖ ∪_{j<i} H_j}` with `H_i` the
//! hyperplane `t_i = t⁰_i`; every term there has nonnegative masses.

use crate::error::{Error, Result};
use crate::lexcore::{LexElem, Rat};
use crate::mvalg::MvContext;
use crate::spectral::{characteristic_points, Kind, SpectralResolution};
use crate::stepfun::{Bound, DecReal, DiffOp, StepFn};

use super::atoms::{atom_decomposition, AtomSet};
use super::decompose::unique_char_point;
use super::oracle::oracle_masses;
use super::Observable;

/// The nonnegative terms of the positive rewriting.
#[derive(Clone, Debug)]
pub struct PositiveForm {
    /// `(label, masses on F's atoms)`; labels are `x_{i₁…iₙ}` for corner
    /// blocks and `x^i` for hyperplane pieces.
    pub terms: Vec<(String, Vec<LexElem>)>,
    pub total: Vec<LexElem>,
}

impl PositiveForm {
    /// Every term has nonnegative masses, hence is nonnegative on every
    /// atom-aligned region.
    pub fn all_nonnegative(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, ms)| ms.iter().all(LexElem::is_nonneg))
    }
}

/// Extension by the projection formula (perfect algebras only). The result
/// is cross-checked against the positive rewriting.
pub fn projection_formula(sr: &SpectralResolution) -> Result<Observable> {
    unique_char_point(sr)?;
    let masses = formula_masses(sr.fun(), sr.ctx())?;
    let pos = positive_form(sr)?;
    if pos.total != masses {
        return Err(Error::IdentityViolation(
            "projection formula and its positive rewriting disagree".into(),
        ));
    }
    if !pos.all_nonnegative() {
        return Err(Error::IdentityViolation(
            "a positive-form term has negative mass".into(),
        ));
    }
    Observable::new(atom_decomposition(sr.grid()), masses, sr.ctx())
}

/// The positive rewriting of the projection formula.
pub fn positive_form(sr: &SpectralResolution) -> Result<PositiveForm> {
    let cp = unique_char_point(sr)?;
    let f = sr.fun();
    let ctx = sr.ctx();
    let n = f.n();
    let atoms = atom_decomposition(f.grid());
    let t0_factor = t0_factors(&atoms, &cp.point)?;

    let mut terms = corner_terms(f, &cp.point)?;
    for i in 0..n {
        let sub: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let xs = sub_extension(f, ctx, &cp.point, &sub)?;
        let mut embedded = embed_on_flat(&atoms, &xs, &sub, &t0_factor, ctx.m);
        // Restrict to H_i ∖ ∪_{j<i} H_j (the embedding already lies in H_i).
        for (flat, v) in embedded.iter_mut().enumerate() {
            let idx = atoms.shape().unravel(flat);
            if (0..i).any(|j| idx[j] == t0_factor[j]) {
                *v = LexElem::zero(ctx.m);
            }
        }
        terms.push((format!("x^{}", i + 1), embedded));
    }
    let mut total = vec![LexElem::zero(ctx.m); atoms.len()];
    for (_, ms) in &terms {
        add_into(&mut total, ms, false);
    }
    Ok(PositiveForm { terms, total })
}

/// Raw masses of the formula on `f`'s atoms. For pseudo resolutions
/// without characteristic point (top in the radical) the extension is the
/// one on the interval `[0,u₀]` of the radical, i.e. inclusion–exclusion.
fn formula_masses(f: &StepFn, ctx: MvContext) -> Result<Vec<LexElem>> {
    let n = f.n();
    if n == 0 {
        return Ok(vec![f.top().clone()]);
    }
    let sr = SpectralResolution::new(f.clone(), ctx, Kind::Pseudo)?;
    let cps = characteristic_points(&sr);
    if cps.is_empty() {
        return Ok(oracle_masses(f).1);
    }
    let cp = unique_char_point(&sr)?;
    let atoms = atom_decomposition(f.grid());
    let t0_factor = t0_factors(&atoms, &cp.point)?;

    let mut total = vec![LexElem::zero(ctx.m); atoms.len()];
    for (_, ms) in corner_terms(f, &cp.point)? {
        add_into(&mut total, &ms, false);
    }
    for mask in 0u32..((1 << n) - 1) {
        let sub: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let xs = sub_extension(f, ctx, &cp.point, &sub)?;
        let embedded = embed_on_flat(&atoms, &xs, &sub, &t0_factor, ctx.m);
        let k = sub.len();
        add_into(&mut total, &embedded, (n - k + 1) % 2 == 1);
    }
    Ok(total)
}

/// `x_{i₁…iₙ}` for every corner block: the inclusion–exclusion extension of
/// the block restriction `Π Δ_j^{i_j}`, with `Δ⁰ = Δ(−∞, min{t⁰,t})` and
/// `Δ¹ = Δ(min{t⁰⁺,t}, t)`.
fn corner_terms(f: &StepFn, t0: &[Rat]) -> Result<Vec<(String, Vec<LexElem>)>> {
    let n = f.n();
    let atoms = atom_decomposition(f.grid());
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let bits: Vec<u32> = (0..n).map(|i| (mask >> (n - 1 - i)) & 1).collect();
        let ops: Vec<DiffOp> = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| match b {
                0 => DiffOp::new(
                    i,
                    Bound::At(DecReal::NegInf),
                    Bound::Min(DecReal::Fin(t0[i].clone())),
                ),
                _ => DiffOp::new(i, Bound::Min(DecReal::FinPlus(t0[i].clone())), Bound::Var),
            })
            .collect();
        let block = f.delta_apply(&ops)?;
        let (block_atoms, ms) = oracle_masses(&block);
        let ms = if block_atoms == atoms {
            ms
        } else {
            reindex(&block_atoms, &ms, &atoms)?
        };
        let label: String = bits.iter().map(u32::to_string).collect();
        out.push((format!("x_{label}"), ms));
    }
    Ok(out)
}

/// Extension of `Π_{m∉sub} Δ_m(t⁰_m, t⁰_m⁺) F` on the axes in `sub`.
fn sub_extension(f: &StepFn, ctx: MvContext, t0: &[Rat], sub: &[usize]) -> Result<Vec<LexElem>> {
    let ops: Vec<DiffOp> = (0..f.n())
        .filter(|i| !sub.contains(i))
        .map(|i| {
            DiffOp::fixed(
                i,
                DecReal::Fin(t0[i].clone()),
                DecReal::FinPlus(t0[i].clone()),
            )
        })
        .collect();
    let g = f.delta_apply(&ops)?;
    // The slice's characteristic point must be the projection of t⁰.
    if g.n() > 0 {
        let sr = SpectralResolution::new(g.clone(), ctx, Kind::Pseudo)?;
        let want: Vec<Rat> = sub.iter().map(|&i| t0[i].clone()).collect();
        let got: Vec<Vec<Rat>> = characteristic_points(&sr)
            .into_iter()
            .map(|c| c.point)
            .collect();
        if !got.is_empty() && got != [want] {
            return Err(Error::IdentityViolation(format!(
                "slice on axes {sub:?} has characteristic points {got:?}, expected the projection"
            )));
        }
    }
    formula_masses(&g, ctx)
}

/// Factor index of the singleton `{t⁰ᵢ}` on every axis.
fn t0_factors(atoms: &AtomSet, t0: &[Rat]) -> Result<Vec<usize>> {
    t0.iter()
        .enumerate()
        .map(|(i, r)| {
            atoms
                .factor_index(i, &super::Factor::Point { at: r.clone() })
                .ok_or_else(|| {
                    Error::CharacteristicPoint(format!("coordinate {r} is not a breakpoint"))
                })
        })
        .collect()
}

/// Place masses of a sub-observable (on the axes `sub`, same breakpoints)
/// onto the flat through `t⁰`.
fn embed_on_flat(
    atoms: &AtomSet,
    masses: &[LexElem],
    sub: &[usize],
    t0_factor: &[usize],
    m: usize,
) -> Vec<LexElem> {
    let sub_shape = crate::stepfun::Shape::new(sub.iter().map(|&i| atoms.factors_on(i)).collect());
    let mut out = vec![LexElem::zero(m); atoms.len()];
    for (flat, v) in masses.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let sidx = sub_shape.unravel(flat);
        let mut idx = t0_factor.to_vec();
        for (pos, &axis) in sub.iter().enumerate() {
            idx[axis] = sidx[pos];
        }
        out[atoms.shape().flat(&idx)] = v.clone();
    }
    out
}

fn reindex(from: &AtomSet, ms: &[LexElem], to: &AtomSet) -> Result<Vec<LexElem>> {
    let mut out = vec![LexElem::zero(ms.first().map_or(1, LexElem::dim)); to.len()];
    for (i, v) in ms.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        let j = to
            .index_of(&from.atom(i))
            .ok_or_else(|| Error::RegionNotAligned("block mass outside the target atoms".into()))?;
        out[j] = v.clone();
    }
    Ok(out)
}

fn add_into(acc: &mut [LexElem], ms: &[LexElem], negate: bool) {
    for (a, v) in acc.iter_mut().zip(ms) {
        if !v.is_zero() {
            *a = if negate { &*a - v } else { &*a + v };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend::{oracle_observable, Factor};

    fn e(h: i64, g: i64) -> LexElem {
        LexElem::ints(h, &[g])
    }

    #[test]
    fn single_jump_formula() {
        let f = StepFn::new(
            crate::stepfun::Grid::from_ints(&[&[0, 2]]).unwrap(),
            1,
            vec![e(0, 0), e(0, 1), e(1, 0)],
        )
        .unwrap();
        let sr = SpectralResolution::validated(f, MvContext::new(1, 1).unwrap(), Kind::Spectral)
            .unwrap();
        let x = projection_formula(&sr).unwrap();
        assert_eq!(x, oracle_observable(&sr).unwrap());
        let pos = positive_form(&sr).unwrap();
        assert_eq!(pos.terms.len(), 3);
        assert!(pos.all_nonnegative());
    }

    #[test]
    fn crossed_formula() {
        let sr = crate::extend::tests::crossed();
        let x = projection_formula(&sr).unwrap();
        assert_eq!(x, oracle_observable(&sr).unwrap());
        let pt = |a: i64, b: i64| {
            vec![
                Factor::Point {
                    at: Rat::from_int(a),
                },
                Factor::Point {
                    at: Rat::from_int(b),
                },
            ]
        };
        assert_eq!(x.mass_map()[&pt(3, 1)], e(0, 1));
        let pos = positive_form(&sr).unwrap();
        assert_eq!(pos.terms.len(), 4 + 2);
        assert!(pos.all_nonnegative());
    }

    #[test]
    fn rejects_k2() {
        let f = StepFn::new(
            crate::stepfun::Grid::from_ints(&[&[0]]).unwrap(),
            1,
            vec![e(0, 0), e(2, 0)],
        )
        .unwrap();
        let sr = SpectralResolution::validated(f, MvContext::new(2, 1).unwrap(), Kind::Spectral)
            .unwrap();
        assert!(matches!(
            projection_formula(&sr),
            Err(Error::Precondition(_))
        ));
    }
}
