//! Show that the observable is determined by its distribution function:
//! the indicator system on lower orthants is unit lower-triangular.
//!
//! Run with `cargo run --example uniqueness`.

use lexspec::extend::verify_uniqueness;
use lexspec::gen::{random_resolution, rng, seed_from_env, GenParams};

fn main() -> lexspec::Result<()> {
    let mut g = rng(seed_from_env(7));
    for _ in 0..5 {
        let sr = random_resolution(&mut g, &GenParams::default());
        let report = verify_uniqueness(&sr)?;
        println!(
            "n = {}, k = {}: {} atoms, triangular {}, solved {}, matches inclusion–exclusion {}",
            sr.n(),
            sr.ctx().k,
            report.atoms,
            report.triangular,
            if report.dense {
                "densely"
            } else {
                "by successive differences"
            },
            report.matches_oracle,
        );
    }
    Ok(())
}
