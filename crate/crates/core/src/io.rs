//! Exact JSON file formats and the region-expression grammar.
//!
//! All rationals are JSON strings (`"3"`, `"-1/2"`); floating-point literals
//! are rejected. Output is pretty-printed with a fixed key order, so equal
//! values always serialize to identical bytes.
//!
//! Instance file:
//!
//! ```json
//! { "context": {"k": 1, "m": 1}, "kind": "spectral",
//!   "axes": [["0", "2"]],
//!   "cells": [[0, ["0"]], [0, ["1"]], [1, ["0"]]] }
//! ```
//!
//! `cells` nests one array level per axis (row-major, cell `0` first).
//!
//! Observable file: `context`, `axes`, and the nonzero atoms with their
//! masses (`atoms[i]` is a list of factor descriptors, `mass[i]` its mass).
//!
//! Region expressions: products of factors joined by `x`, unions by `|`;
//! a factor is `(-inf,a)`, `{a}`, `(a,b)` or `(a,inf)` with `a`, `b`
//! breakpoints of the relevant axis.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::extend::{AtomSet, Factor, Observable, RegionSet};
use crate::lexcore::{LexElem, Rat};
use crate::mvalg::MvContext;
use crate::spectral::{Kind, SpectralResolution};
use crate::stepfun::{DecReal, Grid, Shape, StepFn};

/// On-disk form of a spectral resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub context: MvContext,
    pub kind: Kind,
    pub axes: Vec<Vec<Rat>>,
    pub cells: Value,
}

impl InstanceFile {
    pub fn from_resolution(sr: &SpectralResolution) -> Self {
        let f = sr.fun();
        InstanceFile {
            context: sr.ctx(),
            kind: sr.kind(),
            axes: f.grid().axes().to_vec(),
            cells: nest(&f.shape(), f.cells(), 0, 0),
        }
    }

    pub fn to_resolution(&self) -> Result<SpectralResolution> {
        let grid = Grid::new(self.axes.clone())?;
        let shape = grid.shape();
        let mut cells = Vec::with_capacity(shape.len());
        flatten(&self.cells, shape.dims(), &mut cells)?;
        let m = cells.first().map_or(self.context.m, LexElem::dim);
        let f = StepFn::new(grid, m, cells)?;
        SpectralResolution::new(f, self.context, self.kind)
    }
}

fn nest(shape: &Shape, cells: &[LexElem], depth: usize, offset: usize) -> Value {
    let dims = shape.dims();
    if depth == dims.len() {
        return serde_json::to_value(&cells[offset]).expect("lex elements serialize");
    }
    let stride: usize = dims[depth + 1..].iter().product();
    Value::Array(
        (0..dims[depth])
            .map(|i| nest(shape, cells, depth + 1, offset + i * stride))
            .collect(),
    )
}

fn flatten(v: &Value, dims: &[usize], out: &mut Vec<LexElem>) -> Result<()> {
    match dims.split_first() {
        None => {
            out.push(LexElem::deserialize(v)?);
            Ok(())
        }
        Some((&d, rest)) => {
            let items = v
                .as_array()
                .ok_or_else(|| Error::Parse(format!("expected an array of {d} cells")))?;
            if items.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: items.len(),
                });
            }
            items.iter().try_for_each(|item| flatten(item, rest, out))
        }
    }
}

/// On-disk form of an observable (nonzero atoms only).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableFile {
    pub context: MvContext,
    pub axes: Vec<Vec<Rat>>,
    pub atoms: Vec<Vec<Factor>>,
    pub mass: Vec<LexElem>,
}

impl ObservableFile {
    pub fn from_observable(x: &Observable) -> Self {
        let (atoms, mass) = x.nonzero().into_iter().unzip();
        ObservableFile {
            context: x.ctx(),
            axes: x.grid().axes().to_vec(),
            atoms,
            mass,
        }
    }

    pub fn to_observable(&self) -> Result<Observable> {
        if self.atoms.len() != self.mass.len() {
            return Err(Error::DimensionMismatch {
                expected: self.atoms.len(),
                got: self.mass.len(),
            });
        }
        let grid = Grid::new(self.axes.clone())?;
        Observable::from_atoms(
            &grid,
            self.context,
            self.atoms.iter().cloned().zip(self.mass.iter().cloned()),
        )
    }
}

fn to_pretty<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn instance_to_string(sr: &SpectralResolution) -> Result<String> {
    to_pretty(&InstanceFile::from_resolution(sr))
}

pub fn instance_from_str(s: &str) -> Result<SpectralResolution> {
    serde_json::from_str::<InstanceFile>(s)?.to_resolution()
}

pub fn observable_to_string(x: &Observable) -> Result<String> {
    to_pretty(&ObservableFile::from_observable(x))
}

pub fn observable_from_str(s: &str) -> Result<Observable> {
    serde_json::from_str::<ObservableFile>(s)?.to_observable()
}

/// Any serializable report, in the same deterministic layout.
pub fn report_to_string<T: Serialize>(report: &T) -> Result<String> {
    to_pretty(report)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<SpectralResolution> {
    instance_from_str(&fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, sr: &SpectralResolution) -> Result<()> {
    Ok(fs::write(path, instance_to_string(sr)?)?)
}

pub fn read_observable(path: impl AsRef<Path>) -> Result<Observable> {
    observable_from_str(&fs::read_to_string(path)?)
}

pub fn write_observable(path: impl AsRef<Path>, x: &Observable) -> Result<()> {
    Ok(fs::write(path, observable_to_string(x)?)?)
}

// ---------------------------------------------------------------------------
// Region expressions

/// Parse a region expression against an atom decomposition.
pub fn parse_region(atoms: &AtomSet, expr: &str) -> Result<RegionSet> {
    let mut acc = RegionSet::empty(atoms);
    for term in expr.split('|') {
        let factors: Vec<&str> = term.split('x').map(str::trim).collect();
        if atoms.n() == 0 && factors == [""] {
            acc = acc.union(&RegionSet::all(atoms))?;
            continue;
        }
        if factors.len() != atoms.n() {
            return Err(Error::Parse(format!(
                "region term {:?} has {} factors, expected {}",
                term.trim(),
                factors.len(),
                atoms.n()
            )));
        }
        let per_axis = factors
            .iter()
            .enumerate()
            .map(|(axis, s)| factor_members(atoms, axis, s))
            .collect::<Result<Vec<_>>>()?;
        acc = acc.union(&RegionSet::product(atoms, &per_axis)?)?;
    }
    Ok(acc)
}

fn endpoint(s: &str) -> Result<DecReal> {
    match s.trim() {
        "-inf" => Ok(DecReal::NegInf),
        "inf" | "+inf" => Ok(DecReal::PosInf),
        r => r
            .parse::<Rat>()
            .map(DecReal::Fin)
            .map_err(|_| Error::Parse(format!("bad region endpoint {r:?}"))),
    }
}

/// Factor indices `f` with `lb(lo) < f ≤ lb(hi)`, where `lb(t)` is the last
/// factor inside `(−∞, t)`.
fn factor_members(atoms: &AtomSet, axis: usize, s: &str) -> Result<Vec<bool>> {
    let (lo, hi) = if let Some(inner) = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        let a = endpoint(inner)?;
        if !matches!(a, DecReal::Fin(_)) {
            return Err(Error::Parse(format!(
                "singleton {s:?} needs a finite point"
            )));
        }
        (a.clone(), a.to_plus()?)
    } else if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("interval {s:?} needs two endpoints")))?;
        let (a, b) = (endpoint(a)?, endpoint(b)?);
        if a == DecReal::PosInf || b == DecReal::NegInf || a >= b {
            return Err(Error::Parse(format!("empty or malformed interval {s:?}")));
        }
        (a.to_plus()?, b)
    } else {
        return Err(Error::Parse(format!("unrecognised region factor {s:?}")));
    };
    let from = atoms.lower_bound(axis, &lo)?;
    let to = atoms.lower_bound(axis, &hi)?;
    Ok((0..atoms.factors_on(axis))
        .map(|f| from.is_none_or(|l| f > l) && to.is_some_and(|h| f <= h))
        .collect())
}
