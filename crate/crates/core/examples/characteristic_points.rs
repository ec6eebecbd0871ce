//! Characteristic points of a staircase on the 2-perfect algebra
//! `Γ(ℤ lex ℚ, (2,0))`, and the ordering property.
//!
//! Run with `cargo run --example characteristic_points`.

use lexspec::stepfun::Grid;
use lexspec::{
    characteristic_points, ordering_property, Kind, LexElem, MvContext, SpectralResolution, StepFn,
};

fn main() -> lexspec::Result<()> {
    let e = |h, g| LexElem::ints(h, &[g]);
    let grid = Grid::from_ints(&[&[0, 1, 3]])?;
    let f = StepFn::new(grid, 1, vec![e(0, 0), e(0, 1), e(1, 1), e(2, 0)])?;
    let sr = SpectralResolution::validated(f, MvContext::new(2, 1)?, Kind::Spectral)?;

    let points = characteristic_points(&sr);
    for p in &points {
        let coords: Vec<String> = p.point.iter().map(ToString::to_string).collect();
        println!(
            "block {} starts at ({}), regular: {}",
            p.block,
            coords.join(", "),
            p.regular
        );
    }
    println!("ordering property: {}", ordering_property(&points));
    Ok(())
}
