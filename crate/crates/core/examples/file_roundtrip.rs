//! Write an instance and its observable to JSON files, read them back, and
//! check that nothing changed. Values are exact rationals stored as strings.
//!
//! Run with `cargo run --example file_roundtrip`.

use lexspec::io::{read_instance, read_observable, write_instance, write_observable};
use lexspec::stepfun::Grid;
use lexspec::{oracle_observable, Kind, LexElem, MvContext, Rat, SpectralResolution, StepFn};

fn main() -> lexspec::Result<()> {
    let half = Rat::new(1, 2)?;
    let e = |h, g: &Rat| LexElem::new(h, lexspec::GVec::new(vec![g.clone()]).unwrap());
    let grid = Grid::new(vec![vec![Rat::from_int(-1), half.clone()]])?;
    let f = StepFn::new(
        grid,
        1,
        vec![e(0, &Rat::zero()), e(0, &half), e(1, &Rat::zero())],
    )?;
    let sr = SpectralResolution::validated(f, MvContext::new(1, 1)?, Kind::Spectral)?;
    let x = oracle_observable(&sr)?;

    let dir = std::env::temp_dir().join(format!("lexspec-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let (fi, fo) = (dir.join("instance.json"), dir.join("observable.json"));
    write_instance(&fi, &sr)?;
    write_observable(&fo, &x)?;
    println!("{}", std::fs::read_to_string(&fi)?);

    let back = read_instance(&fi)?;
    let y = read_observable(&fo)?;
    println!("instance unchanged: {}", back.fun() == sr.fun());
    println!("observable unchanged: {}", y == x);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
