//! Build the joint observable of two compatible one-dimensional resolutions
//! by taking cellwise meets, and show that the joint mass of a rectangle can
//! be strictly below the meet of the marginal masses.
//!
//! Run with `cargo run --example meet_joint`.

use lexspec::calculus::{marginal, meet_joint};
use lexspec::io::parse_region;
use lexspec::stepfun::Grid;
use lexspec::{observable_eval, Kind, LexElem, MvContext, SpectralResolution, StepFn};

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
    let (_, z) = meet_joint(&[resolution(&[2, 3], 3)?, resolution(&[1, 5], 4)?])?;
    print!("joint masses:\n{z}");

    let x = marginal(&z, 0)?;
    let y = marginal(&z, 1)?;
    let joint = observable_eval(&z, &parse_region(z.atoms(), "{3}x{1}")?)?;
    let a = observable_eval(&x, &parse_region(x.atoms(), "{3}")?)?;
    let b = observable_eval(&y, &parse_region(y.atoms(), "{1}")?)?;
    println!(
        "z({{3}}×{{1}}) = {}  <  x({{3}}) ∧ y({{1}}) = {}",
        joint.value(),
        a.meet(&b)?.value()
    );

    // Adding up the meets of all marginal masses overshoots the unit.
    let mut total = LexElem::zero(1);
    for (_, u) in x.nonzero() {
        for (_, v) in y.nonzero() {
            total = &total + &u.inf(&v)?;
        }
    }
    println!(
        "Σ meets of marginal masses = {total}, unit = {}",
        z.ctx().unit()
    );
    Ok(())
}
