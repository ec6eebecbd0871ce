mod common;

use common::{crossed, crossed_marginals, ctx, e, r, single_jump, staircase};
use lexspec::calculus::{marginal, meet_joint, neutral_observable, sum_observables};
use lexspec::extend::{
    block_units, component_sum, decompose_perfect, decompose_staircase, positive_form,
    projection_formula, Factor,
};
use lexspec::io::parse_region;
use lexspec::mvalg::MvElem;
use lexspec::{
    characteristic_points, mv_validate, observable_eval, oracle_observable, ordering_property,
    validate_spectral, DecReal, Kind, LexElem, Observable, Rat,
};

fn pt(xs: &[i64]) -> Vec<Factor> {
    xs.iter().map(|&x| Factor::Point { at: r(x) }).collect()
}

fn obs1(points: &[(i64, LexElem)]) -> Observable {
    let pts: Vec<(Vec<Rat>, LexElem)> = points
        .iter()
        .map(|(p, v)| (vec![r(*p)], v.clone()))
        .collect();
    Observable::from_points(1, ctx(1, 1), &pts).unwrap()
}

fn mv(h: i64, g: i64) -> MvElem {
    mv_validate(e(h, g), ctx(1, 1)).unwrap()
}

#[test]
fn single_jump_extension_masses() {
    let sr = single_jump();
    let x = oracle_observable(&sr).unwrap();
    let map = x.mass_map();
    assert_eq!(map.len(), 2);
    assert_eq!(map[&pt(&[0])], e(0, 1));
    assert_eq!(map[&pt(&[2])], e(1, -1));
    assert!(projection_formula(&sr).unwrap().same_masses(&x));
    assert!(component_sum(&sr).unwrap().same_masses(&x));
}

#[test]
fn single_jump_block_units_and_components() {
    let sr = single_jump();
    let u = block_units(&sr).unwrap();
    assert_eq!(u.char_point, vec![r(2)]);
    assert_eq!(u.identity_sum, e(1, 0));
    let comps = decompose_perfect(&sr).unwrap();
    assert_eq!(comps.len(), 3);
    for c in &comps {
        assert!(validate_spectral(c.sr.fun(), c.sr.ctx(), Kind::Pseudo).is_valid());
    }
    let pos = positive_form(&sr).unwrap();
    assert!(pos.all_nonnegative());
}

#[test]
fn single_jump_mass_is_unit_minus_radical_part() {
    // (1,[0]) − (0,[1]) = (1,[-1]) is exactly the mass at 2.
    assert_eq!(mv(1, 0).sub(&mv(0, 1)).unwrap().value(), &e(1, -1));
}

#[test]
fn crossed_joint_masses_and_marginals() {
    let (fx, fy) = crossed_marginals();
    let (sr, z) = meet_joint(&[fx.clone(), fy.clone()]).unwrap();
    assert!(sr.report().is_valid());
    let map = z.mass_map();
    assert_eq!(map.len(), 3);
    assert_eq!(map[&pt(&[2, 1])], e(0, 3));
    assert_eq!(map[&pt(&[3, 1])], e(0, 1));
    assert_eq!(map[&pt(&[3, 5])], e(1, -4));

    let x = marginal(&z, 0).unwrap().mass_map();
    assert_eq!(x[&pt(&[2])], e(0, 3));
    assert_eq!(x[&pt(&[3])], e(1, -3));
    let y = marginal(&z, 1).unwrap().mass_map();
    assert_eq!(y[&pt(&[1])], e(0, 4));
    assert_eq!(y[&pt(&[5])], e(1, -4));
    assert!(marginal(&z, 0)
        .unwrap()
        .same_masses(&oracle_observable(&fx).unwrap()));
}

#[test]
fn crossed_strict_inequality_and_contradiction_sum() {
    let z = oracle_observable(&crossed()).unwrap();
    let q = |s: &str| observable_eval(&z, &parse_region(z.atoms(), s).unwrap()).unwrap();
    let joint = q("{3}x{1}");
    let bound = mv(1, -3).meet(&mv(0, 4)).unwrap();
    assert_eq!(joint.value(), &e(0, 1));
    assert_eq!(bound.value(), &e(0, 4));
    assert!(joint.le(&bound) && joint != bound);

    let xs = [mv(0, 3), mv(1, -3)];
    let ys = [mv(0, 4), mv(1, -4)];
    let mut total = e(0, 0);
    for a in &xs {
        for b in &ys {
            total = &total + a.meet(b).unwrap().value();
        }
    }
    assert_eq!(total, LexElem::ints(1, &[6]));
    assert_ne!(total, ctx(1, 1).unit());
}

#[test]
fn crossed_delta_in_both_orders() {
    let f = crossed();
    let d1 = f
        .fun()
        .delta(0, DecReal::fin(3), DecReal::plus(3))
        .unwrap()
        .delta(0, DecReal::fin(5), DecReal::plus(5))
        .unwrap();
    let d2 = f
        .fun()
        .delta(1, DecReal::fin(5), DecReal::plus(5))
        .unwrap()
        .delta(0, DecReal::fin(3), DecReal::plus(3))
        .unwrap();
    assert_eq!(d1.top(), &e(1, -4));
    assert_eq!(d2.top(), &e(1, -4));
}

#[test]
fn two_point_staircase() {
    let sr = staircase();
    let cps = characteristic_points(&sr);
    let found: Vec<(i64, Vec<Rat>)> = cps.iter().map(|c| (c.block, c.point.clone())).collect();
    assert_eq!(found, vec![(1, vec![r(1)]), (2, vec![r(3)])]);
    assert!(cps.iter().all(|c| c.regular));
    assert!(ordering_property(&cps));
    let comps = decompose_staircase(&sr).unwrap();
    assert_eq!(comps.len(), 5);
    let total = comps.iter().fold(e(0, 0), |acc, c| &acc + c.sr.top());
    assert_eq!(total, e(2, 0));
    let x = component_sum(&sr).unwrap();
    let map = x.mass_map();
    assert_eq!(map.len(), 3);
    assert_eq!(map[&pt(&[0])], e(0, 1));
    assert_eq!(map[&pt(&[1])], e(1, 0));
    assert_eq!(map[&pt(&[3])], e(1, -1));
    assert!(x.same_masses(&oracle_observable(&sr).unwrap()));
}

#[test]
fn sum_example_and_neutral_element() {
    let x = obs1(&[(0, e(0, 1)), (1, e(1, -1))]);
    let y = obs1(&[(2, e(0, 2)), (3, e(1, -2))]);
    let want = obs1(&[(2, e(0, 1)), (3, e(0, 1)), (4, e(1, -2))]);
    assert!(sum_observables(&x, &y).unwrap().same_masses(&want));
    assert!(sum_observables(&y, &x).unwrap().same_masses(&want));
    let o = neutral_observable(ctx(1, 1), 1).unwrap();
    assert!(sum_observables(&x, &o).unwrap().same_masses(&x));
    assert!(sum_observables(&o, &o).unwrap().same_masses(&o));
}
