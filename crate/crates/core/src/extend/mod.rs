//! Extending spectral resolutions to observables.
//!
//! An observable here is a finitely additive assignment of algebra elements
//! to the atoms of a grid. Three independent routes produce it from a
//! spectral resolution:
//!
//! * [`oracle_observable`]: inclusion–exclusion over decorated atom corners;
//! * component sums over [`decompose_perfect`] / [`decompose_staircase`];
//! * the projection formula over the blocks around the characteristic point
//!   (perfect algebras only), see [`projection_formula`].
//!
//! [`verify_uniqueness`] confirms that the lower-rectangle constraints pin the
//! masses down.

mod atoms;
mod decompose;
mod formula;
mod oracle;
mod uniqueness;
mod units;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use atoms::{atom_decomposition, AtomDisplay, AtomSet, Factor, RegionSet};
pub use decompose::{
    check_decomposition, component_sum, decompose_perfect, decompose_staircase, Component,
};
pub use formula::{positive_form, projection_formula, PositiveForm};
pub use oracle::oracle_observable;
pub use uniqueness::{require_uniqueness, verify_uniqueness, UniquenessReport};
pub use units::{block_units, BlockUnits};

use crate::error::{Error, Result};
use crate::lexcore::{lex_sum, LexElem, Rat};
use crate::mvalg::{mv_validate, MvContext, MvElem};
use crate::spectral::SpectralResolution;
use crate::stepfun::{DecReal, Grid, StepFn};

/// A finitely additive observable on the atoms of a grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observable {
    atoms: AtomSet,
    mass: Vec<LexElem>,
    ctx: MvContext,
}

impl Observable {
    /// Masses are given per atom in enumeration order; each must lie in
    /// `[0, u]`.
    pub fn new(atoms: AtomSet, mass: Vec<LexElem>, ctx: MvContext) -> Result<Self> {
        if mass.len() != atoms.len() {
            return Err(Error::DimensionMismatch {
                expected: atoms.len(),
                got: mass.len(),
            });
        }
        for (i, m) in mass.iter().enumerate() {
            ctx.check(m).map_err(|e| match e {
                Error::OutOfInterval { value, reason } => Error::OutOfInterval {
                    value,
                    reason: format!("mass of atom {}: {reason}", AtomDisplay(&atoms.atom(i))),
                },
                other => other,
            })?;
        }
        Ok(Observable { atoms, mass, ctx })
    }

    pub fn zero(atoms: AtomSet, ctx: MvContext) -> Self {
        let mass = vec![LexElem::zero(ctx.m); atoms.len()];
        Observable { atoms, mass, ctx }
    }

    /// Build from a sparse list of `(atom, mass)` pairs on the given grid.
    pub fn from_atoms(
        grid: &Grid,
        ctx: MvContext,
        entries: impl IntoIterator<Item = (Vec<Factor>, LexElem)>,
    ) -> Result<Self> {
        let atoms = atom_decomposition(grid);
        let mut mass = vec![LexElem::zero(ctx.m); atoms.len()];
        for (atom, m) in entries {
            let i = atoms.index_of(&atom).ok_or_else(|| {
                Error::RegionNotAligned(format!(
                    "{} is not an atom of the grid",
                    AtomDisplay(&atom)
                ))
            })?;
            mass[i] = &mass[i] + &m;
        }
        Observable::new(atoms, mass, ctx)
    }

    /// Point masses at grid points (given by coordinates); the grid is the
    /// product of the coordinates that occur.
    pub fn from_points(n: usize, ctx: MvContext, points: &[(Vec<Rat>, LexElem)]) -> Result<Self> {
        let mut axes: Vec<Vec<Rat>> = vec![Vec::new(); n];
        for (p, _) in points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            for (i, c) in p.iter().enumerate() {
                axes[i].push(c.clone());
            }
        }
        for ax in &mut axes {
            ax.sort();
            ax.dedup();
        }
        let grid = Grid::new(axes)?;
        Observable::from_atoms(
            &grid,
            ctx,
            points.iter().map(|(p, m)| {
                (
                    p.iter().map(|c| Factor::Point { at: c.clone() }).collect(),
                    m.clone(),
                )
            }),
        )
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn grid(&self) -> &Grid {
        self.atoms.grid()
    }

    pub fn ctx(&self) -> MvContext {
        self.ctx
    }

    pub fn n(&self) -> usize {
        self.atoms.n()
    }

    pub fn mass(&self, flat: usize) -> &LexElem {
        &self.mass[flat]
    }

    pub fn masses(&self) -> &[LexElem] {
        &self.mass
    }

    /// `x(ℝⁿ)`.
    pub fn total(&self) -> LexElem {
        lex_sum(self.ctx.m, &self.mass)
    }

    /// Atoms with nonzero mass, in atom order.
    pub fn nonzero(&self) -> Vec<(Vec<Factor>, LexElem)> {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| (self.atoms.atom(i), m.clone()))
            .collect()
    }

    /// Grid-independent description: nonzero atom → mass.
    pub fn mass_map(&self) -> BTreeMap<Vec<Factor>, LexElem> {
        self.nonzero().into_iter().collect()
    }

    /// Same nonzero masses on the same sets (grids may differ).
    pub fn same_masses(&self, other: &Observable) -> bool {
        self.mass_map() == other.mass_map()
    }

    /// Re-express on another atom set. Every atom carrying mass must also be
    /// an atom of the target.
    pub fn embed(&self, target: &AtomSet) -> Result<Observable> {
        if self.atoms == *target {
            return Ok(self.clone());
        }
        let mut mass = vec![LexElem::zero(self.ctx.m); target.len()];
        for (atom, m) in self.nonzero() {
            let i = target.index_of(&atom).ok_or_else(|| {
                Error::RegionNotAligned(format!(
                    "mass on {} has no counterpart atom",
                    AtomDisplay(&atom)
                ))
            })?;
            mass[i] = m;
        }
        Ok(Observable {
            atoms: target.clone(),
            mass,
            ctx: self.ctx,
        })
    }

    /// The same observable on a refined grid (mass must sit on atoms that
    /// survive refinement, which is the case for point masses).
    pub fn refine(&self, extra: &Grid) -> Result<Observable> {
        self.embed(&atom_decomposition(&self.grid().union(extra)?))
    }

    /// The distribution function `t ↦ x((−∞,t))` on the observable's grid.
    ///
    /// This is a step function on the grid exactly when all mass sits on
    /// products of breakpoints; other observables are rejected.
    pub fn distribution(&self) -> Result<StepFn> {
        if let Some((atom, _)) = self
            .nonzero()
            .into_iter()
            .find(|(a, _)| !a.iter().all(Factor::is_point))
        {
            return Err(Error::Precondition(format!(
                "mass on the non-point atom {} has no step distribution function",
                AtomDisplay(&atom)
            )));
        }
        let grid = self.grid().clone();
        let nz: Vec<(Vec<usize>, LexElem)> = self
            .mass
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| (self.atoms.shape().unravel(i), m.clone()))
            .collect();
        let m = self.ctx.m;
        Ok(StepFn::from_fn(grid, m, |cell| {
            // Cell c along an axis lies above exactly the points b_0..b_{c−1},
            // i.e. the point factors 2j + 1 < 2c.
            let sum = nz
                .iter()
                .filter(|(a, _)| a.iter().zip(cell).all(|(&f, &c)| f < 2 * c))
                .map(|(_, v)| v);
            lex_sum(m, sum)
        }))
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz = self.nonzero();
        if nz.is_empty() {
            return writeln!(f, "  (all masses zero)");
        }
        for (atom, m) in nz {
            writeln!(f, "  {:<24} {m}", AtomDisplay(&atom).to_string())?;
        }
        Ok(())
    }
}

/// `x(A)` for an atom-aligned region.
pub fn observable_eval(x: &Observable, region: &RegionSet) -> Result<MvElem> {
    if region.grid() != x.grid() {
        return Err(Error::RegionNotAligned(
            "region built on a different grid".into(),
        ));
    }
    let v = lex_sum(x.ctx.m, region.members().map(|i| &x.mass[i]));
    mv_validate(v, x.ctx)
}

/// Confirm `x((−∞,t)) = F(t)` at every decorated grid point of `F`.
pub fn check_extension(sr: &SpectralResolution, x: &Observable) -> Result<()> {
    let x = x.embed(&atom_decomposition(sr.grid()))?;
    let f = sr.fun();
    let atoms = x.atoms();
    let nz: Vec<(Vec<usize>, &LexElem)> = x
        .mass
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, m)| (atoms.shape().unravel(i), m))
        .collect();
    for point in f.decorated_grid_points() {
        let bounds: Vec<Option<usize>> = point
            .iter()
            .enumerate()
            .map(|(i, t)| atoms.lower_bound(i, t))
            .collect::<Result<_>>()?;
        let sum = lex_sum(
            x.ctx.m,
            nz.iter()
                .filter(|(a, _)| {
                    a.iter()
                        .zip(&bounds)
                        .all(|(&fi, b)| b.is_some_and(|b| fi <= b))
                })
                .map(|(_, m)| *m),
        );
        let expected = f.eval_at(&point)?;
        if &sum != expected {
            return Err(Error::IdentityViolation(format!(
                "x((−∞,t)) = {sum} but F(t) = {expected} at t = ({})",
                point
                    .iter()
                    .map(DecReal::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
    }
    Ok(())
}

/// Which construction to use in [`extend_observable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionMode {
    /// The block-and-projection formula (perfect algebras only).
    Projection,
    /// Sum of extensions of the decomposition components.
    Component,
    /// Inclusion–exclusion over atom corners.
    Oracle,
}

impl ExtensionMode {
    pub const ALL: [ExtensionMode; 3] = [
        ExtensionMode::Projection,
        ExtensionMode::Component,
        ExtensionMode::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtensionMode::Projection => "projection",
            ExtensionMode::Component => "component",
            ExtensionMode::Oracle => "oracle",
        }
    }

    /// Whether the mode applies to the given algebra.
    pub fn applies_to(self, ctx: MvContext) -> bool {
        self != ExtensionMode::Projection || ctx.is_perfect()
    }
}

impl fmt::Display for ExtensionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtensionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection" | "projection-formula" => Ok(ExtensionMode::Projection),
            "component" | "component-sum" => Ok(ExtensionMode::Component),
            "oracle" => Ok(ExtensionMode::Oracle),
            _ => Err(Error::Parse(format!("unknown extension mode {s:?}"))),
        }
    }
}

/// Extend a spectral resolution to the observable on its grid's atoms.
pub fn extend_observable(sr: &SpectralResolution, mode: ExtensionMode) -> Result<Observable> {
    match mode {
        ExtensionMode::Oracle => oracle_observable(sr),
        ExtensionMode::Component => component_sum(sr),
        ExtensionMode::Projection => projection_formula(sr),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::spectral::Kind;

    fn e(h: i64, g: i64) -> LexElem {
        LexElem::ints(h, &[g])
    }

    fn ctx() -> MvContext {
        MvContext::new(1, 1).unwrap()
    }

    pub(crate) fn crossed() -> SpectralResolution {
        let fx = [e(0, 0), e(0, 3), e(1, 0)];
        let fy = [e(0, 0), e(0, 4), e(1, 0)];
        let f = StepFn::from_fn(Grid::from_ints(&[&[2, 3], &[1, 5]]).unwrap(), 1, |i| {
            fx[i[0]].inf(&fy[i[1]]).unwrap()
        });
        SpectralResolution::validated(f, ctx(), Kind::Spectral).unwrap()
    }

    fn pt(xs: &[i64]) -> Vec<Factor> {
        xs.iter()
            .map(|&x| Factor::Point {
                at: Rat::from_int(x),
            })
            .collect()
    }

    fn region(x: &Observable, per_axis: &[&[usize]]) -> RegionSet {
        let sets: Vec<Vec<bool>> = per_axis
            .iter()
            .enumerate()
            .map(|(i, fs)| {
                (0..x.atoms().factors_on(i))
                    .map(|f| fs.contains(&f))
                    .collect()
            })
            .collect();
        RegionSet::product(x.atoms(), &sets).unwrap()
    }

    #[test]
    fn eval_examples_on_e2() {
        let x = oracle_observable(&crossed()).unwrap();
        // {2}×{1}: factor 1 on both axes
        assert_eq!(
            observable_eval(&x, &region(&x, &[&[1], &[1]]))
                .unwrap()
                .value(),
            &e(0, 3)
        );
        // π₁⁻¹({3}): factor 3 on axis 1, everything on axis 2
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(
            observable_eval(&x, &region(&x, &[&[3], &all]))
                .unwrap()
                .value(),
            &e(1, -3)
        );
        assert_eq!(
            observable_eval(&x, &RegionSet::all(x.atoms()))
                .unwrap()
                .value(),
            &e(1, 0)
        );
    }

    #[test]
    fn distribution_round_trip() {
        let sr = crossed();
        let x = oracle_observable(&sr).unwrap();
        assert_eq!(&x.distribution().unwrap(), sr.fun());
        check_extension(&sr, &x).unwrap();
    }

    #[test]
    fn from_points_and_embed() {
        let x = Observable::from_points(
            2,
            ctx(),
            &[
                (vec![Rat::from_int(2), Rat::from_int(1)], e(0, 3)),
                (vec![Rat::from_int(3), Rat::from_int(1)], e(0, 1)),
                (vec![Rat::from_int(3), Rat::from_int(5)], e(1, -4)),
            ],
        )
        .unwrap();
        let y = oracle_observable(&crossed()).unwrap();
        assert!(x.same_masses(&y));
        assert_eq!(x, y);
        let fine = x.refine(&Grid::from_ints(&[&[0], &[7]]).unwrap()).unwrap();
        assert!(fine.same_masses(&x));
        assert_eq!(fine.mass_map().get(&pt(&[3, 5])), Some(&e(1, -4)));
    }

    #[test]
    fn masses_must_be_in_interval() {
        let atoms = atom_decomposition(&Grid::from_ints(&[&[0]]).unwrap());
        let bad = vec![e(0, 0), e(0, -1), e(0, 0)];
        assert!(matches!(
            Observable::new(atoms, bad, ctx()),
            Err(Error::OutOfInterval { .. })
        ));
    }

    #[test]
    fn mode_names() {
        for m in ExtensionMode::ALL {
            assert_eq!(m.name().parse::<ExtensionMode>().unwrap(), m);
        }
        assert!(!ExtensionMode::Projection.applies_to(MvContext::new(2, 1).unwrap()));
    }
}
