//! Sum of observables through the convolution of their distribution
//! functions, and the neutral observable concentrated at 0.
//!
//! Run with `cargo run --example observable_sum`.

use lexspec::calculus::{neutral_observable, sum_observables};
use lexspec::{LexElem, MvContext, Observable, Rat};

fn observable(points: &[(i64, i64, i64)]) -> lexspec::Result<Observable> {
    let pts: Vec<(Vec<Rat>, LexElem)> = points
        .iter()
        .map(|&(t, h, g)| (vec![Rat::from_int(t)], LexElem::ints(h, &[g])))
        .collect();
    Observable::from_points(1, MvContext::new(1, 1)?, &pts)
}

fn show(name: &str, x: &Observable) {
    print!("{name}:\n{x}");
}

fn main() -> lexspec::Result<()> {
    let x = observable(&[(0, 0, 1), (1, 1, -1)])?;
    let y = observable(&[(2, 0, 2), (3, 1, -2)])?;
    let s = sum_observables(&x, &y)?;
    show("x", &x);
    show("y", &y);
    show("x + y", &s);
    println!("commutative: {}", s.same_masses(&sum_observables(&y, &x)?));
    let o = neutral_observable(x.ctx(), 1)?;
    println!("x + o = x: {}", sum_observables(&x, &o)?.same_masses(&x));
    Ok(())
}
