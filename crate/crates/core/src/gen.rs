//! Seeded random instances for property suites and the `fuzz` command.
//!
//! Resolutions are built from point masses at grid points: a few radical
//! masses `(0, g)` with `g ≥ 0`, and "big" masses whose integer parts sum to
//! `k`, the last one absorbing the radical parts so that the total is the
//! unit. Candidates are re-validated and rejected if any condition fails.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extend::{oracle_observable, Observable};
use crate::lexcore::{lex_sum, GVec, LexElem, Rat};
use crate::mvalg::MvContext;
use crate::spectral::{validate_spectral, Kind, SpectralResolution};
use crate::stepfun::{Grid, StepFn};

/// Environment variable holding the generator seed.
pub const SEED_VAR: &str = "LEXSPEC_SEED";

/// Seed from [`SEED_VAR`], falling back to `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub max_n: usize,
    pub max_breaks: usize,
    pub max_k: i64,
    pub max_m: usize,
    /// Fixed dimension instead of `1..=max_n`.
    pub n: Option<usize>,
    /// Fixed algebra instead of a random one.
    pub ctx: Option<MvContext>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_n: 3,
            max_breaks: 3,
            max_k: 3,
            max_m: 2,
            n: None,
            ctx: None,
        }
    }
}

impl GenParams {
    pub fn perfect() -> Self {
        GenParams {
            max_k: 1,
            ..Self::default()
        }
    }

    pub fn with_n(self, n: usize) -> Self {
        GenParams { n: Some(n), ..self }
    }

    pub fn with_ctx(self, ctx: MvContext) -> Self {
        GenParams {
            ctx: Some(ctx),
            ..self
        }
    }
}

/// A small rational `p/q` with `|p| ≤ 12`, `q ∈ {1,2,3}`.
fn small_rat<R: Rng>(rng: &mut R) -> Rat {
    Rat::new(rng.random_range(-12..=12), rng.random_range(1..=3)).expect("nonzero denominator")
}

fn random_axis<R: Rng>(rng: &mut R, len: usize) -> Vec<Rat> {
    // Draw from a fixed pool of distinct values so the axis is strictly
    // increasing after sorting.
    let pool: Vec<Rat> = (-8..=8).map(|p| Rat::new(p, 2).expect("nonzero")).collect();
    let mut axis: Vec<Rat> = sample(rng, pool.len(), len)
        .into_iter()
        .map(|i| pool[i].clone())
        .collect();
    axis.sort();
    axis
}

fn radical_part<R: Rng>(rng: &mut R, m: usize) -> GVec {
    GVec::new(
        (0..m)
            .map(|_| Rat::new(rng.random_range(0..=4), rng.random_range(1..=2)).expect("nonzero"))
            .collect(),
    )
    .expect("m ≥ 1")
}

/// Split `k` into `parts` positive integers.
fn composition<R: Rng>(rng: &mut R, k: i64, parts: usize) -> Vec<i64> {
    let mut cuts: Vec<i64> = sample(rng, (k - 1) as usize, parts - 1)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort();
    cuts.push(k);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let d = c - prev;
            prev = c;
            d
        })
        .collect()
}

/// Step function from point masses at grid-point indices.
pub fn from_masses(grid: Grid, m: usize, masses: &[(Vec<usize>, LexElem)]) -> StepFn {
    StepFn::from_fn(grid, m, |cell| {
        lex_sum(
            m,
            masses
                .iter()
                .filter(|(p, _)| p.iter().zip(cell).all(|(&j, &c)| j < c))
                .map(|(_, v)| v),
        )
    })
}

/// One candidate (may fail condition (v) in dimension ≥ 2).
fn candidate<R: Rng>(rng: &mut R, p: &GenParams) -> SpectralResolution {
    let ctx = p.ctx.unwrap_or_else(|| {
        MvContext::new(rng.random_range(1..=p.max_k), rng.random_range(1..=p.max_m))
            .expect("positive parameters")
    });
    let n = p.n.unwrap_or_else(|| rng.random_range(1..=p.max_n));
    let axes: Vec<Vec<Rat>> = (0..n)
        .map(|_| {
            let len = rng.random_range(1..=p.max_breaks);
            random_axis(rng, len)
        })
        .collect();
    let grid = Grid::new(axes).expect("sorted distinct axes");
    let dims: Vec<usize> = grid.axes().iter().map(Vec::len).collect();
    let point =
        |rng: &mut R| -> Vec<usize> { dims.iter().map(|&d| rng.random_range(0..d)).collect() };

    let mut masses = Vec::new();
    let mut g_total = GVec::zero(ctx.m);
    for _ in 0..rng.random_range(0..=3) {
        let g = radical_part(rng, ctx.m);
        g_total = add_g(&g_total, &g);
        masses.push((point(rng), LexElem::new(0, g)));
    }
    let parts = rng.random_range(1..=ctx.k as usize);
    let hs = composition(rng, ctx.k, parts);
    for (i, &h) in hs.iter().enumerate() {
        let g = if i + 1 == hs.len() {
            neg_g(&g_total)
        } else {
            let g = GVec::new((0..ctx.m).map(|_| small_rat(rng)).collect()).expect("m ≥ 1");
            g_total = add_g(&g_total, &g);
            g
        };
        masses.push((point(rng), LexElem::new(h, g)));
    }
    let f = from_masses(grid, ctx.m, &masses);
    SpectralResolution::new(f, ctx, Kind::Spectral).expect("dimensions agree")
}

fn add_g(a: &GVec, b: &GVec) -> GVec {
    (LexElem::new(0, a.clone()) + LexElem::new(0, b.clone())).g
}

fn neg_g(a: &GVec) -> GVec {
    (-LexElem::new(0, a.clone())).g
}

/// A random valid spectral resolution (rejection sampling on validation).
pub fn random_resolution<R: Rng>(rng: &mut R, p: &GenParams) -> SpectralResolution {
    loop {
        let sr = candidate(rng, p);
        if validate_spectral(sr.fun(), sr.ctx(), Kind::Spectral).is_valid() {
            return sr;
        }
    }
}

/// A random observable: the extension of a random valid resolution.
pub fn random_observable<R: Rng>(rng: &mut R, p: &GenParams) -> Observable {
    oracle_observable(&random_resolution(rng, p)).expect("valid resolutions extend")
}

/// One extra breakpoint per axis, not already present: the midpoint of the
/// first gap if there is one, otherwise one past the last breakpoint.
pub fn extra_breakpoints(grid: &Grid) -> Grid {
    let axes = grid
        .axes()
        .iter()
        .map(|ax| match ax.as_slice() {
            [] => vec![Rat::zero()],
            [a, b, ..] => vec![a.midpoint(b)],
            [a] => vec![a + &Rat::one()],
        })
        .collect();
    Grid::new(axes).expect("single breakpoint per axis")
}
