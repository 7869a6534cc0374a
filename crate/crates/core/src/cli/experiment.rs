//! Seeded simulation sweeps behind `bdscore experiment`.
//!
//! Randomness comes from ChaCha20 (`rand_chacha` 0.3) seeded with
//! `seed_from_u64`. Each grid point draws from its own stream
//! (`set_stream(index)`), so rows do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::citest::{asymptotic_residuals, d_n};
use crate::dataset::{Dataset, VarSet, Variable};
use crate::error::{Error, Result};
use crate::numerics::LogBase;
use crate::regularity::jn_profile;
use crate::scores::PriorSpec;

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnSweepConfig {
    pub seed: u64,
    pub points: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// `P(X=1) = P(Y=1) = n^(-exponent)`.
    pub exponent: f64,
}

impl Default for DnSweepConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            points: 200,
            n_min: 10,
            n_max: 1000,
            exponent: 0.75,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DnRow {
    pub n: usize,
    pub d_n: f64,
    pub threshold: f64,
    pub above: bool,
}

/// `points` log-spaced sample sizes from `n_min` to `n_max`, rounded.
/// Rounding can repeat small sizes; each repeat is an independent draw.
pub fn log_spaced_grid(points: usize, n_min: usize, n_max: usize) -> Result<Vec<usize>> {
    if points == 0 || n_min == 0 || n_max < n_min {
        return Err(Error::InvalidArgument(format!(
            "need points ≥ 1 and 1 ≤ n_min ≤ n_max, got {points}, {n_min}, {n_max}"
        )));
    }
    if points == 1 {
        return Ok(vec![n_min]);
    }
    let (lo, hi) = ((n_min as f64).ln(), (n_max as f64).ln());
    Ok((0..points)
        .map(|k| {
            let t = k as f64 / (points - 1) as f64;
            (lo + t * (hi - lo)).exp().round() as usize
        })
        .collect())
}

/// Independent binary X, Y with `P(X=1) = P(Y=1) = p`.
pub fn sample_independent_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Result<Dataset> {
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        x.push(u32::from(rng.gen::<f64>() < p));
        y.push(u32::from(rng.gen::<f64>() < p));
    }
    Dataset::from_columns(vec![Variable::new("X", 2), Variable::new("Y", 2)], &[x, y])
}

/// `D_n` (base 2, δ = 1, empty Z) for one independent draw per grid point,
/// against the threshold `0.5 log₂ n`.
pub fn dn_sweep(cfg: &DnSweepConfig) -> Result<Vec<DnRow>> {
    let grid = log_spaced_grid(cfg.points, cfg.n_min, cfg.n_max)?;
    let x = VarSet::singleton(0);
    let y = VarSet::singleton(1);
    grid.par_iter()
        .enumerate()
        .map(|(k, &n)| {
            let mut rng = stream_rng(cfg.seed, k as u64);
            let p = (n as f64).powf(-cfg.exponent);
            let ds = sample_independent_pair(&mut rng, n, p)?;
            let d = d_n(&ds, &x, &y, &VarSet::empty(), 1.0, LogBase::Two)?;
            let threshold = 0.5 * (n as f64).log2();
            Ok(DnRow {
                n,
                d_n: d,
                threshold,
                above: d > threshold,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JnRow {
    pub r: usize,
    pub j_bdeu: f64,
    pub j_jeffreys: f64,
}

/// `J(n)` for X with `r` ones and Y all zeros, `r = 0..=n/2`.
pub fn jn_vs_r(n: usize, ess: f64) -> Result<Vec<JnRow>> {
    let bdeu = PriorSpec::bdeu(ess);
    (0..=n / 2)
        .map(|r| {
            Ok(JnRow {
                r,
                j_bdeu: jn_profile(n, r, &bdeu)?,
                j_jeffreys: jn_profile(n, r, &PriorSpec::Jeffreys)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualConfig {
    pub seed: u64,
    pub grid: Vec<usize>,
    pub ess: f64,
}

impl Default for ResidualConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            grid: vec![100, 1_000, 10_000, 100_000],
            ess: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualRow {
    pub n: usize,
    pub j_jeffreys: f64,
    pub j_bdeu: f64,
    pub i: f64,
    pub d_n: f64,
    pub residual_jeffreys: f64,
    pub residual_bdeu: f64,
}

/// Joint distribution of three binary variables with every cell at least
/// 0.1: `θ = 0.1 + 0.2 w` with `w` uniform on the simplex.
pub fn residual_theta(seed: u64) -> [f64; 8] {
    let mut rng = stream_rng(seed, u64::MAX);
    let mut w = [0.0; 8];
    for slot in &mut w {
        // 1 - U lies in (0, 1], so the log is finite
        *slot = -(1.0 - rng.gen::<f64>()).ln();
    }
    let total: f64 = w.iter().sum();
    w.map(|v| 0.1 + 0.2 * v / total)
}

/// Draws `n` rows of (X, Y, Z) from `theta` (cell index `4x + 2y + z`).
pub fn sample_triples<R: Rng + ?Sized>(rng: &mut R, theta: &[f64; 8], n: usize) -> Result<Dataset> {
    let mut cols: Vec<Vec<u32>> = (0..3).map(|_| Vec::with_capacity(n)).collect();
    for _ in 0..n {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut cell = 7;
        for (k, &p) in theta.iter().enumerate() {
            acc += p;
            if u < acc {
                cell = k;
                break;
            }
        }
        cols[0].push((cell >> 2 & 1) as u32);
        cols[1].push((cell >> 1 & 1) as u32);
        cols[2].push((cell & 1) as u32);
    }
    Dataset::from_columns(
        vec![
            Variable::new("X", 2),
            Variable::new("Y", 2),
            Variable::new("Z", 2),
        ],
        &cols,
    )
}

/// Jeffreys and BDeu residuals on prefixes of a single stream.
pub fn residual_sweep(cfg: &ResidualConfig) -> Result<([f64; 8], Vec<ResidualRow>)> {
    let theta = residual_theta(cfg.seed);
    let n_max = *cfg
        .grid
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidArgument("empty residual grid".into()))?;
    let mut rng = stream_rng(cfg.seed, 0);
    let ds = sample_triples(&mut rng, &theta, n_max)?;
    let (x, y, z) = (
        VarSet::singleton(0),
        VarSet::singleton(1),
        VarSet::singleton(2),
    );
    let jeff = asymptotic_residuals(&ds, &cfg.grid, &x, &y, &z, &PriorSpec::Jeffreys)?;
    let bdeu = asymptotic_residuals(&ds, &cfg.grid, &x, &y, &z, &PriorSpec::bdeu(cfg.ess))?;
    let rows = jeff
        .iter()
        .zip(&bdeu)
        .map(|(a, b)| ResidualRow {
            n: a.n,
            j_jeffreys: a.j,
            j_bdeu: b.j,
            i: a.i,
            d_n: b.d_n,
            residual_jeffreys: a.residual,
            residual_bdeu: b.residual,
        })
        .collect();
    Ok((theta, rows))
}
