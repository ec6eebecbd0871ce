//! Validate step functions against the five spectral-resolution conditions
//! and print the witness for each failure.
//!
//! Run with `cargo run --example validate_resolution`.

use lexspec::stepfun::Grid;
use lexspec::{validate_spectral, Kind, LexElem, MvContext, StepFn};

fn e(h: i64, g: i64) -> LexElem {
    LexElem::ints(h, &[g])
}

fn main() -> lexspec::Result<()> {
    let ctx = MvContext::new(1, 1)?;

    // F jumps from 0 to (0,1) at 0 and reaches the unit after 2.
    let good = StepFn::new(
        Grid::from_ints(&[&[0, 2]])?,
        1,
        vec![e(0, 0), e(0, 1), e(1, 0)],
    )?;
    println!(
        "monotone one-dimensional F:\n{}",
        validate_spectral(&good, ctx, Kind::Spectral)
    );

    // A two-dimensional F that decreases along the second axis, so the
    // rectangle (0,1]×(1,∞) gets negative volume.
    let grid = Grid::from_ints(&[&[0, 1], &[0, 1]])?;
    let z = e(0, 0);
    #[rustfmt::skip]
    let cells = vec![
        z.clone(), z.clone(), z.clone(),
        z.clone(), e(0, 2),   e(0, 1),
        z,         e(0, 2),   e(1, 0),
    ];
    let bad = StepFn::new(grid, 1, cells)?;
    let report = validate_spectral(&bad, ctx, Kind::Spectral);
    println!("two-dimensional F with a defect:\n{report}");
    for failure in report.failures() {
        let witness = serde_json::to_string(&failure.witness).unwrap_or_default();
        println!("{} fails, witness {witness}", failure.condition);
    }
    Ok(())
}
