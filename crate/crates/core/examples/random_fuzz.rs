//! Generate random resolutions (seeded, reproducible) and run every check:
//! validity, all extension modes against inclusion–exclusion, uniqueness and
//! decomposition. Set `LEXSPEC_SEED` to pick the batch.
//!
//! Run with `cargo run --release --example random_fuzz`.

use lexspec::cli::check_all;
use lexspec::gen::{random_resolution, rng, seed_from_env, GenParams};

fn main() {
    let seed = seed_from_env(0);
    let mut g = rng(seed);
    let params = GenParams::default();
    let count = 500;
    let mut failed = 0;
    for i in 0..count {
        let sr = random_resolution(&mut g, &params);
        if let Err(e) = check_all(&sr) {
            failed += 1;
            println!("instance {i} (n = {}, k = {}): {e}", sr.n(), sr.ctx().k);
        }
    }
    println!(
        "seed {seed}: {} of {count} instances passed",
        count - failed
    );
}
