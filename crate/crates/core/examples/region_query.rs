//! Evaluate an observable on unions of rectangles written as region
//! expressions: `{a}` is a point, `(a,b)` an open interval, `x` separates
//! factors and `|` separates rectangles.
//!
//! Run with `cargo run --example region_query`.

use lexspec::calculus::meet_joint;
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
    for expr in [
        "{3}x{1}",
        "{3}x(-inf,inf)",
        "{2}x{1} | {3}x{1}",
        "(-inf,inf)x(1,inf)",
    ] {
        let region = parse_region(z.atoms(), expr)?;
        println!("{expr:<22} {}", observable_eval(&z, &region)?.value());
    }
    match parse_region(z.atoms(), "{4}x{1}") {
        Ok(_) => println!("unexpected: {{4}} is not an atom"),
        Err(e) => println!("{{4}}x{{1}} rejected: {e}"),
    }
    Ok(())
}
