//! Difference operators on a two-dimensional step function: collapsing an
//! axis, order independence, and additivity over adjacent intervals.
//!
//! Run with `cargo run --example delta_calculus`.

use lexspec::calculus::meet_joint;
use lexspec::stepfun::Grid;
use lexspec::{DecReal, DiffOp, Kind, LexElem, MvContext, SpectralResolution, StepFn};

fn resolution(breaks: &[i64], jump: i64) -> lexspec::Result<SpectralResolution> {
    let e = |h, g| LexElem::ints(h, &[g]);
    let f = StepFn::new(
        Grid::from_ints(&[breaks])?,
        1,
        vec![e(0, 0), e(0, jump), e(1, 0)],
    )?;
    SpectralResolution::validated(f, MvContext::new(1, 1)?, Kind::Spectral)
}

fn main() -> lexspec::Result<()> {
    let (sr, _) = meet_joint(&[resolution(&[2, 3], 3)?, resolution(&[1, 5], 4)?])?;
    let f = sr.fun();

    // The jump of F across x = 3 and y = 5, computed in both orders.
    let xy = f.delta_apply(&[
        DiffOp::fixed(0, DecReal::fin(3), DecReal::plus(3)),
        DiffOp::fixed(1, DecReal::fin(5), DecReal::plus(5)),
    ])?;
    let yx = f.delta_apply(&[
        DiffOp::fixed(1, DecReal::fin(5), DecReal::plus(5)),
        DiffOp::fixed(0, DecReal::fin(3), DecReal::plus(3)),
    ])?;
    println!("Δx(3,3⁺)Δy(5,5⁺)F = {}   Δy Δx F = {}", xy.top(), yx.top());

    // Δ along x collapses the axis and leaves a function of y.
    let slice = f.delta(0, DecReal::NegInf, DecReal::PosInf)?;
    println!("Δx(−∞,∞)F has {} axis, top {}", slice.n(), slice.top());

    // Additivity: Δ(a,c) = Δ(a,b) + Δ(b,c).
    let (a, b, c) = (DecReal::NegInf, DecReal::plus(2), DecReal::PosInf);
    let whole = f.delta(0, a.clone(), c.clone())?;
    let parts = f.delta(0, a, b.clone())?.add(&f.delta(0, b, c)?)?;
    println!(
        "additive over (−∞,2⁺] ∪ (2⁺,∞): {}",
        whole.same_function(&parts)
    );
    Ok(())
}
