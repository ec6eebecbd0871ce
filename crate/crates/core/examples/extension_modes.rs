//! Extend a spectral resolution to an observable with every construction:
//! the projection formula, the component sum, and inclusion–exclusion.
//! Also prints the block units and the positive form of the projection
//! formula.
//!
//! Run with `cargo run --example extension_modes`.

use lexspec::extend::{block_units, positive_form};
use lexspec::stepfun::Grid;
use lexspec::{
    extend_observable, ExtensionMode, Kind, LexElem, MvContext, SpectralResolution, StepFn,
};

fn main() -> lexspec::Result<()> {
    let e = |h, g| LexElem::ints(h, &[g]);
    let f = StepFn::new(
        Grid::from_ints(&[&[0, 2]])?,
        1,
        vec![e(0, 0), e(0, 1), e(1, 0)],
    )?;
    let sr = SpectralResolution::validated(f, MvContext::new(1, 1)?, Kind::Spectral)?;

    for mode in ExtensionMode::ALL {
        let x = extend_observable(&sr, mode)?;
        print!("{}:\n{x}", mode.name());
    }

    let units = block_units(&sr)?;
    let t0: Vec<String> = units.char_point.iter().map(ToString::to_string).collect();
    println!(
        "characteristic point ({}), unit identity {}",
        t0.join(", "),
        units.identity_sum
    );
    let pos = positive_form(&sr)?;
    for (label, masses) in &pos.terms {
        let total = masses.iter().fold(LexElem::zero(1), |acc, v| &acc + v);
        println!("term {label}: total {total}");
    }
    println!("all terms nonnegative: {}", pos.all_nonnegative());
    Ok(())
}
