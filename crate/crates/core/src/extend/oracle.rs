//! Brute-force extension by inclusion–exclusion over atom corners.

use crate::error::{Error, Result};
use crate::lexcore::LexElem;
use crate::spectral::{cell_volume, SpectralResolution};
use crate::stepfun::StepFn;

use super::atoms::{atom_decomposition, AtomDisplay, AtomSet};
use super::Observable;

/// The observable whose atom masses are the `2ⁿ`-corner alternating sums of
/// `F` over each atom's decorated corners.
pub fn oracle_observable(sr: &SpectralResolution) -> Result<Observable> {
    let (atoms, mass) = oracle_masses(sr.fun());
    if let Some((i, m)) = mass.iter().enumerate().find(|(_, m)| !m.is_nonneg()) {
        return Err(Error::InvalidResolution(format!(
            "negative mass {m} on atom {}",
            AtomDisplay(&atoms.atom(i))
        )));
    }
    Observable::new(atoms, mass, sr.ctx())
}

/// Raw (signed) atom masses of an arbitrary step function.
pub(crate) fn oracle_masses(f: &StepFn) -> (AtomSet, Vec<LexElem>) {
    let atoms = atom_decomposition(f.grid());
    let grid = f.grid();
    // Per axis and factor: the cells read by the lower and upper corner.
    let corner_cells: Vec<Vec<(usize, usize)>> = (0..f.n())
        .map(|axis| {
            (0..atoms.factors_on(axis))
                .map(|k| {
                    let (lo, hi) = atoms.factor(axis, k).corners();
                    (grid.cell_index(axis, &lo), grid.cell_index(axis, &hi))
                })
                .collect()
        })
        .collect();
    let mass = atoms
        .shape()
        .iter()
        .map(|idx| {
            let (lo, hi): (Vec<usize>, Vec<usize>) = idx
                .iter()
                .enumerate()
                .map(|(axis, &k)| corner_cells[axis][k])
                .unzip();
            // Equal corner cells on any axis make the alternating sum cancel
            // term by term.
            if lo.iter().zip(&hi).any(|(a, b)| a == b) {
                LexElem::zero(f.m())
            } else {
                cell_volume(f, &lo, &hi)
            }
        })
        .collect();
    (atoms, mass)
}
