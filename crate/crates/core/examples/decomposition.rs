//! Split a resolution into pseudo spectral resolutions whose values add up
//! to the original, then extend each piece.
//!
//! Run with `cargo run --example decomposition`.

use lexspec::extend::{check_decomposition, decompose_staircase};
use lexspec::stepfun::Grid;
use lexspec::{Kind, LexElem, MvContext, SpectralResolution, StepFn};

fn main() -> lexspec::Result<()> {
    let e = |h, g| LexElem::ints(h, &[g]);
    let grid = Grid::from_ints(&[&[0, 1, 3]])?;
    let f = StepFn::new(grid, 1, vec![e(0, 0), e(0, 1), e(1, 1), e(2, 0)])?;
    let sr = SpectralResolution::validated(f, MvContext::new(2, 1)?, Kind::Spectral)?;

    let comps = decompose_staircase(&sr)?;
    for c in &comps {
        print!(
            "component {:?}: top {}\n{}",
            c.label,
            c.sr.top(),
            c.extend()?
        );
    }
    check_decomposition(&sr, &comps)?;
    println!("{} components sum to {}", comps.len(), sr.top());
    Ok(())
}
