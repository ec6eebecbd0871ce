//! Uniqueness of the extension: the values `F(r)` at the decorated grid
//! points determine the atom masses through a unit lower-triangular system.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexcore::LexElem;
use crate::spectral::SpectralResolution;
use crate::stepfun::{DecReal, Shape};

use super::atoms::{atom_decomposition, AtomSet};
use super::oracle::oracle_masses;

/// Above this many atoms the dense system is not materialised; the
/// per-axis (Kronecker) structure is checked and solved instead.
const DENSE_LIMIT: usize = 2_000;

/// Outcome of [`verify_uniqueness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub atoms: usize,
    /// The indicator matrix is lower triangular with unit diagonal.
    pub triangular: bool,
    /// The dense matrix was built and solved by forward substitution.
    pub dense: bool,
    /// Solved masses coincide with the inclusion–exclusion masses.
    pub matches_oracle: bool,
    /// Every row with a `−∞` coordinate has `F = 0`.
    pub neg_inf_rows_zero: bool,
}

impl UniquenessReport {
    pub fn holds(&self) -> bool {
        self.triangular && self.matches_oracle && self.neg_inf_rows_zero
    }
}

/// Indicator of `atom ⊆ (−∞, row)` as a product over axes.
fn indicator(
    atoms: &AtomSet,
    rows: &[Vec<DecReal>],
    row: &[usize],
    atom: &[usize],
) -> Result<bool> {
    for axis in 0..atoms.n() {
        match atoms.lower_bound(axis, &rows[axis][row[axis]])? {
            Some(top) if atom[axis] <= top => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Build the system `F(r) = Σ_a [a ⊆ (−∞,r)] x(a)`, check that it is unit
/// lower triangular in lexicographic atom order, solve it and compare with
/// the inclusion–exclusion masses.
pub fn verify_uniqueness(sr: &SpectralResolution) -> Result<UniquenessReport> {
    let f = sr.fun();
    let n = f.n();
    let m = f.m();
    let atoms = atom_decomposition(f.grid());
    let rows: Vec<Vec<DecReal>> = (0..n).map(|i| atoms.row_values(i)).collect();
    let shape = atoms.shape().clone();
    let rhs: Vec<LexElem> = shape
        .iter()
        .map(|idx| {
            let pt: Vec<DecReal> = idx
                .iter()
                .enumerate()
                .map(|(i, &j)| rows[i][j].clone())
                .collect();
            f.eval_at(&pt).cloned()
        })
        .collect::<Result<_>>()?;

    // Per-axis structure: row f covers exactly the factors 0..=f.
    let mut triangular = true;
    for (axis, axis_rows) in rows.iter().enumerate() {
        for (j, r) in axis_rows.iter().enumerate() {
            triangular &= atoms.lower_bound(axis, r)? == Some(j);
        }
    }

    let dense = atoms.len() <= DENSE_LIMIT;
    let solved = if dense {
        let mut x: Vec<LexElem> = Vec::with_capacity(atoms.len());
        for (r, row) in shape.iter().enumerate() {
            if !indicator(&atoms, &rows, &row, &row)? {
                triangular = false;
            }
            let mut acc = rhs[r].clone();
            for (a, atom) in shape.iter().enumerate() {
                if !indicator(&atoms, &rows, &row, &atom)? {
                    continue;
                }
                if a > r {
                    triangular = false;
                } else if a < r && !x[a].is_zero() {
                    acc = &acc - &x[a];
                }
            }
            x.push(acc);
        }
        x
    } else {
        kronecker_solve(&shape, rhs)
    };

    let (_, oracle) = oracle_masses(f);
    let neg_inf_rows_zero = neg_inf_corner_rows_zero(sr);

    Ok(UniquenessReport {
        atoms: atoms.len(),
        triangular,
        dense,
        matches_oracle: solved == oracle && solved.iter().all(|v| v.dim() == m),
        neg_inf_rows_zero,
    })
}

/// Successive first differences along every axis: the inverse of the
/// Kronecker product of all-ones lower-triangular matrices.
fn kronecker_solve(shape: &Shape, mut t: Vec<LexElem>) -> Vec<LexElem> {
    let dims = shape.dims().to_vec();
    for axis in 0..dims.len() {
        for idx in shape.iter().collect::<Vec<_>>().into_iter().rev() {
            if idx[axis] == 0 {
                continue;
            }
            let mut prev = idx.clone();
            prev[axis] -= 1;
            let (a, b) = (shape.flat(&idx), shape.flat(&prev));
            t[a] = &t[a] - &t[b];
        }
    }
    t
}

/// Rows with a `−∞` coordinate read cell `0` on that axis, so `F` must
/// vanish at every cell whose index is `0` on some axis.
fn neg_inf_corner_rows_zero(sr: &SpectralResolution) -> bool {
    let f = sr.fun();
    f.shape()
        .iter()
        .all(|idx| !idx.contains(&0) || f.cell(&idx).is_zero())
}

/// Fail with [`Error::IdentityViolation`] unless uniqueness holds.
pub fn require_uniqueness(sr: &SpectralResolution) -> Result<UniquenessReport> {
    let rep = verify_uniqueness(sr)?;
    if !rep.holds() {
        return Err(Error::IdentityViolation(format!(
            "uniqueness check failed: {rep:?}"
        )));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvalg::MvContext;
    use crate::spectral::Kind;
    use crate::stepfun::{Grid, StepFn};

    fn e(h: i64, g: i64) -> LexElem {
        LexElem::ints(h, &[g])
    }

    #[test]
    fn single_jump_unique() {
        let f = StepFn::new(
            Grid::from_ints(&[&[0, 2]]).unwrap(),
            1,
            vec![e(0, 0), e(0, 1), e(1, 0)],
        )
        .unwrap();
        let sr = SpectralResolution::validated(f, MvContext::new(1, 1).unwrap(), Kind::Spectral)
            .unwrap();
        let rep = verify_uniqueness(&sr).unwrap();
        assert!(rep.holds() && rep.dense);
        assert_eq!(rep.atoms, 5);
    }

    #[test]
    fn crossed_unique() {
        let rep = require_uniqueness(&crate::extend::tests::crossed()).unwrap();
        assert_eq!(rep.atoms, 25);
    }

    #[test]
    fn kronecker_matches_dense() {
        let sr = crate::extend::tests::crossed();
        let atoms = atom_decomposition(sr.grid());
        let rows: Vec<Vec<DecReal>> = (0..2).map(|i| atoms.row_values(i)).collect();
        let rhs: Vec<LexElem> = atoms
            .shape()
            .iter()
            .map(|idx| {
                let pt: Vec<DecReal> = idx
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| rows[i][j].clone())
                    .collect();
                sr.fun().eval_at(&pt).unwrap().clone()
            })
            .collect();
        assert_eq!(
            kronecker_solve(atoms.shape(), rhs),
            oracle_masses(sr.fun()).1
        );
    }

    #[test]
    fn nonzero_bottom_detected() {
        let f = StepFn::new(Grid::from_ints(&[&[0]]).unwrap(), 1, vec![e(0, 1), e(1, 0)]).unwrap();
        let sr = SpectralResolution::new(f, MvContext::new(1, 1).unwrap(), Kind::Pseudo).unwrap();
        assert!(!verify_uniqueness(&sr).unwrap().neg_inf_rows_zero);
    }
}
