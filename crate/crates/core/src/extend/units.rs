//! Block units around the characteristic point of a perfect spectral
//! resolution, and the alternating identity they satisfy.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexcore::{LexElem, Rat};
use crate::spectral::SpectralResolution;
use crate::stepfun::{DecReal, DiffOp};

use super::decompose::unique_char_point;

/// `u_{i₁…iₙ}` for every corner block, `u_S` for every proper nonempty
/// subset `S` of axes, and `u_∅`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockUnits {
    pub char_point: Vec<Rat>,
    /// `(i₁,…,iₙ) ∈ {0,1}ⁿ ↦ Δ₁^{i₁}⋯Δₙ^{iₙ}F` with `Δ⁰ = Δ(−∞,t⁰)`,
    /// `Δ¹ = Δ(t⁰⁺,∞)`.
    pub corners: Vec<(Vec<u8>, LexElem)>,
    /// `S ↦ Π_{i∈S} Δᵢ(−∞,∞) Π_{i∉S} Δᵢ(t⁰ᵢ,t⁰ᵢ⁺)F` (axes 1-based).
    pub subsets: Vec<(Vec<usize>, LexElem)>,
    /// `Π Δᵢ(t⁰ᵢ,t⁰ᵢ⁺)F`.
    pub empty: LexElem,
    /// `Σ u_i + Σ_{k=1}^{n−1} (−1)^{n−k+1} Σ_{|S|=k} u_S + (−1)^{n+1} u_∅`.
    pub identity_sum: LexElem,
}

fn value_of(sr: &SpectralResolution, ops: Vec<DiffOp>) -> Result<LexElem> {
    Ok(sr.fun().delta_apply(&ops)?.top().clone())
}

/// Compute all block units and check that the alternating identity
/// reproduces `F(+∞,…,+∞)`.
pub fn block_units(sr: &SpectralResolution) -> Result<BlockUnits> {
    let cp = unique_char_point(sr)?;
    let n = sr.n();
    let m = sr.ctx().m;
    let t0 = |i: usize| DecReal::Fin(cp.point[i].clone());
    let t0p = |i: usize| DecReal::FinPlus(cp.point[i].clone());
    let jump = |i: usize| DiffOp::fixed(i, t0(i), t0p(i));

    let mut corners = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        // Most significant bit ↔ first axis, so the list is in lex order.
        let bits: Vec<u8> = (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as u8).collect();
        let ops = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| match b {
                0 => DiffOp::fixed(i, DecReal::NegInf, t0(i)),
                _ => DiffOp::fixed(i, t0p(i), DecReal::PosInf),
            })
            .collect();
        corners.push((bits, value_of(sr, ops)?));
    }

    let mut subsets = Vec::new();
    let mut sum = corners
        .iter()
        .fold(LexElem::zero(m), |acc, (_, u)| &acc + u);
    for mask in 1u32..((1 << n) - 1) {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let ops = (0..n)
            .map(|i| {
                if set.contains(&i) {
                    DiffOp::fixed(i, DecReal::NegInf, DecReal::PosInf)
                } else {
                    jump(i)
                }
            })
            .collect();
        let u = value_of(sr, ops)?;
        let k = set.len();
        sum = if (n - k + 1).is_multiple_of(2) {
            &sum + &u
        } else {
            &sum - &u
        };
        subsets.push((set.iter().map(|i| i + 1).collect::<Vec<usize>>(), u));
    }
    subsets.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));

    let empty = value_of(sr, (0..n).map(jump).collect())?;
    let identity_sum = if (n + 1).is_multiple_of(2) {
        &sum + &empty
    } else {
        &sum - &empty
    };
    if &identity_sum != sr.top() {
        return Err(Error::IdentityViolation(format!(
            "block units sum to {identity_sum}, expected {}",
            sr.top()
        )));
    }
    Ok(BlockUnits {
        char_point: cp.point,
        corners,
        subsets,
        empty,
        identity_sum,
    })
}
