//! Momentum distributions computed directly from pair wavefunctions, the
//! scaled tail extractors and least-squares tail fits.
//!
//! `n(k) = 2 int dz2 |int dz1 exp(-i k z1) Psi(z1, z2)|^2`. With `z = z1 - z2`
//! the inner integral becomes `exp(-i k z2) int dz exp(-i k z) Phi(z2 + z/2) psi(z)`,
//! so the relative factor is tabulated once on the relative-coordinate nodes and
//! reused for every `z2` and `k`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freespace::{half_angle, TailCoefficients};
use crate::numerics::gauss_legendre;
use crate::pair::{CenterOfMass, PairWavefunction};
use crate::statistics::{Family, StatisticsKind};
use crate::zerorange::Extended;

/// Mirror-symmetric grid, refined geometrically toward the origin, which it
/// never contains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonUniformGrid {
    pub nodes: Vec<f64>,
    /// Composite trapezoid weights on the nodes.
    pub weights: Vec<f64>,
    pub window: f64,
}

pub fn build_grid(window: f64, n_coarse: usize, n_fine: usize, fine_scale: f64) -> Result<NonUniformGrid> {
    if n_coarse < 8 || n_fine < 8 {
        return Err(Error::Domain(format!("grid needs at least 8 coarse and fine points, got {n_coarse}, {n_fine}")));
    }
    if !(window > 0.0 && fine_scale > 0.0 && fine_scale < window) {
        return Err(Error::Domain(format!("need 0 < fine_scale < window, got {fine_scale}, {window}")));
    }
    let mut half: Vec<f64> = (1..=n_coarse).map(|i| window * i as f64 / n_coarse as f64).collect();
    half.extend((0..=n_fine).map(|j| fine_scale * 0.5f64.powi(j as i32)));
    half.sort_by(f64::total_cmp);
    half.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
    let mut nodes: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    nodes.extend(&half);
    let n = nodes.len();
    let weights = (0..n)
        .map(|i| {
            let left = if i == 0 { nodes[0] } else { nodes[i - 1] };
            let right = if i + 1 == n { nodes[n - 1] } else { nodes[i + 1] };
            0.5 * (right - left)
        })
        .collect();
    Ok(NonUniformGrid { nodes, weights, window })
}

impl NonUniformGrid {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Consecutive-node intervals with the one straddling the origin split at 0.
    pub fn panels(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.nodes.len());
        for pair in self.nodes.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            if lo < 0.0 && hi > 0.0 {
                out.push((lo, 0.0));
                out.push((0.0, hi));
            } else {
                out.push((lo, hi));
            }
        }
        out
    }
}

const INNER_POINTS: usize = 6;
const PANELS_PER_PERIOD: f64 = 8.0;
const EDGE_TOLERANCE: f64 = 1e-8;

/// Gauss-Legendre nodes on the grid panels, subdivided so that no panel is
/// wider than an eighth of the shortest oscillation period.
fn relative_nodes(grid: &NonUniformGrid, k_max: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(INNER_POINTS);
    let max_width = if k_max > 0.0 { 2.0 * PI / k_max / PANELS_PER_PERIOD } else { f64::INFINITY };
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (lo, hi) in grid.panels() {
        let pieces = ((hi - lo) / max_width).ceil().max(1.0) as usize;
        let h = (hi - lo) / pieces as f64;
        for p in 0..pieces {
            let a = lo + p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(a + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
    }
    (nodes, weights)
}

/// Half-width beyond which a center-of-mass factor is negligible.
fn com_reach(com: &CenterOfMass) -> f64 {
    match *com {
        CenterOfMass::Box { length } => 0.5 * length,
        CenterOfMass::Oscillator { level } => 7.0 + 1.5 * (level as f64).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumDistribution {
    pub k_nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: StatisticsKind,
    /// `(1/2 pi) int n dk` by trapezoid over the sorted nodes; it only
    /// approaches 2 when the nodes cover the distribution.
    pub norm_check: Option<f64>,
}

impl MomentumDistribution {
    pub fn value_at(&self, k: f64) -> Option<f64> {
        self.k_nodes
            .iter()
            .position(|&q| (q - k).abs() <= 1e-12 * k.abs().max(1.0))
            .map(|i| self.values[i])
    }
}

/// Momentum distribution of a pair state on `k_nodes`.
///
/// A box center of mass is taken in the infinite-box limit, where the outer
/// integral is trivial and `n(k) = 2 |int dz exp(-i k z) psi(z)|^2`.
pub fn momentum_distribution(pair: &PairWavefunction, grid: &NonUniformGrid, k_nodes: &[f64]) -> Result<MomentumDistribution> {
    let k_max = k_nodes.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let (z, w) = relative_nodes(grid, k_max);
    let psi: Vec<Complex64> = z.par_iter().map(|&x| pair.relative.at(x)).collect();
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let edge = pair.relative.at(-grid.window).norm().max(pair.relative.at(grid.window).norm());
    if !(edge <= EDGE_TOLERANCE * peak) {
        return Err(Error::WindowTooSmall { edge, peak });
    }
    let weighted: Vec<Complex64> = psi.iter().zip(&w).map(|(p, wt)| p * wt).collect();

    let values: Vec<f64> = match pair.com {
        CenterOfMass::Box { .. } => k_nodes
            .par_iter()
            .map(|&k| {
                let ft: Complex64 = z.iter().zip(&weighted).map(|(&x, v)| Complex64::from_polar(1.0, -k * x) * v).sum();
                2.0 * ft.norm_sqr()
            })
            .collect(),
        CenterOfMass::Oscillator { .. } => {
            let bands = com_bands(&pair.com, &z, grid.window);
            let total: usize = bands.iter().map(|b| b.len).sum();
            let table: Option<Vec<Vec<f64>>> = (total <= TABLE_LIMIT).then(|| {
                bands
                    .par_iter()
                    .map(|b| (b.start..b.start + b.len).map(|j| pair.com.eval(b.z2 + 0.5 * z[j])).collect())
                    .collect()
            });
            k_nodes
                .par_iter()
                .map(|&k| {
                    let h: Vec<Complex64> = z.iter().zip(&weighted).map(|(&x, v)| Complex64::from_polar(1.0, -k * x) * v).collect();
                    let row_sum = |i: usize| -> f64 {
                        let b = &bands[i];
                        let hs = &h[b.start..b.start + b.len];
                        let acc: Complex64 = match &table {
                            Some(t) => t[i].iter().zip(hs).map(|(p, hv)| hv * p).sum(),
                            None => hs.iter().enumerate().map(|(j, hv)| hv * pair.com.eval(b.z2 + 0.5 * z[b.start + j])).sum(),
                        };
                        b.weight * acc.norm_sqr()
                    };
                    // collected before summing so the result does not depend on the thread split
                    let rows: Vec<f64> = (0..bands.len()).into_par_iter().map(row_sum).collect();
                    2.0 * rows.iter().sum::<f64>()
                })
                .collect()
        }
    };
    let norm_check = trapezoid_norm(k_nodes, &values);
    Ok(MomentumDistribution {
        k_nodes: k_nodes.to_vec(),
        values,
        kind: pair.kind(),
        norm_check,
    })
}

/// Largest number of tabulated center-of-mass values kept per call; beyond it
/// they are recomputed for every `k`.
const TABLE_LIMIT: usize = 1 << 24;

/// One outer node and the contiguous run of relative nodes where the
/// center-of-mass factor is not negligible.
struct Band {
    z2: f64,
    weight: f64,
    start: usize,
    len: usize,
}

/// Gauss-Legendre rule for the outer coordinate; `z` must be increasing.
fn com_bands(com: &CenterOfMass, z: &[f64], window: f64) -> Vec<Band> {
    let reach = com_reach(com);
    let outer = reach + 0.5 * window;
    let (x, w) = gauss_legendre(8);
    let panels = (2.0 * outer / 0.5).ceil() as usize;
    let h = 2.0 * outer / panels as f64;
    let mut out = Vec::with_capacity(panels * x.len());
    for p in 0..panels {
        let a = -outer + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            let z2 = a + 0.5 * h * (xi + 1.0);
            let start = z.partition_point(|&v| z2 + 0.5 * v <= -reach);
            let end = z.partition_point(|&v| z2 + 0.5 * v < reach);
            if end > start {
                out.push(Band { z2, weight: 0.5 * h * wi, start, len: end - start });
            }
        }
    }
    out
}

fn trapezoid_norm(k: &[f64], n: &[f64]) -> Option<f64> {
    if k.len() < 2 {
        return None;
    }
    let mut pts: Vec<(f64, f64)> = k.iter().copied().zip(n.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let area: f64 = pts.windows(2).map(|p| 0.5 * (p[1].0 - p[0].0) * (p[0].1 + p[1].1)).sum();
    Some(area / (2.0 * PI))
}

/// `(1/2 pi) int n dk` on `[-k_cut, k_cut]` by Gauss-Legendre in `k`, plus
/// the contribution of the supplied tail beyond the cut (odd terms cancel).
pub fn momentum_norm(pair: &PairWavefunction, grid: &NonUniformGrid, k_cut: f64, tail: &TailCoefficients) -> Result<f64> {
    let (x, w) = gauss_legendre(8);
    let panels = (2.0 * k_cut).ceil() as usize;
    let h = 2.0 * k_cut / panels as f64;
    let mut ks = Vec::with_capacity(panels * x.len());
    let mut ws = Vec::with_capacity(panels * x.len());
    for p in 0..panels {
        let a = -k_cut + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            ks.push(a + 0.5 * h * (xi + 1.0));
            ws.push(0.5 * h * wi);
        }
    }
    let nd = momentum_distribution(pair, grid, &ks)?;
    let body: f64 = nd.values.iter().zip(&ws).map(|(v, wt)| v * wt).sum();
    let rest = 2.0 * (tail.c2 / k_cut + tail.c4 / (3.0 * k_cut.powi(3)));
    Ok((body + rest) / (2.0 * PI))
}

/// Momentum distribution multiplied by `k^2`, then shifted and rescaled to
/// expose the `k^-3` and `k^-4` coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledTails {
    pub k: Vec<f64>,
    pub theta: Vec<f64>,
    pub xi: Vec<f64>,
    pub upsilon: Vec<f64>,
}

/// `c2` and `c3` of the universal tail for the kind of `nd`. With `a_sc = 0`
/// the contact vanishes like `a_sc^2`, so `C/a_sc` is taken as 0.
pub fn universal_c2_c3(kind: StatisticsKind, contact: f64, a_sc: Extended) -> (f64, f64) {
    let (c, s) = half_angle(kind.alpha());
    let over_a = match a_sc {
        Extended::Infinite => 0.0,
        Extended::Finite(a) if a == 0.0 => 0.0,
        Extended::Finite(a) => contact / a,
    };
    let sin_full = 2.0 * s * c;
    match kind.family() {
        Family::Plus => (4.0 * contact * s * s, 4.0 * over_a * sin_full),
        Family::Minus => (4.0 * contact * c * c, -4.0 * over_a * sin_full),
    }
}

pub fn theta_xi_upsilon(nd: &MomentumDistribution, contact: f64, a_sc: Extended) -> ScaledTails {
    let (c2, c3) = universal_c2_c3(nd.kind, contact, a_sc);
    let mut out = ScaledTails {
        k: nd.k_nodes.clone(),
        theta: Vec::with_capacity(nd.values.len()),
        xi: Vec::with_capacity(nd.values.len()),
        upsilon: Vec::with_capacity(nd.values.len()),
    };
    for (&k, &n) in nd.k_nodes.iter().zip(&nd.values) {
        let k2 = k * k;
        out.theta.push(n * k2);
        out.xi.push((n - c2 / k2) * k2 * k);
        out.upsilon.push((n - c2 / k2 - c3 / (k2 * k)) * k2 * k2);
    }
    out
}

/// Fitted tail coefficients with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// Root-mean-square residual of the scaled fit equations.
    pub rms_residual: f64,
    /// Largest condition number among the column-scaled design matrices.
    pub condition: f64,
}

pub const MAX_CONDITION: f64 = 1e10;

/// Even and odd parts `(k, [n(k) + n(-k)]/2, [n(k) - n(-k)]/2)` for `k` in range.
fn parity_parts(nd: &MomentumDistribution, k_min: f64, k_max: f64) -> Result<Vec<(f64, f64, f64)>> {
    if !(k_min > 0.0 && k_max >= 10.0 * k_min) {
        return Err(Error::Domain(format!("fit range needs 0 < k_min and k_max >= 10 k_min, got [{k_min}, {k_max}]")));
    }
    let mut out = Vec::new();
    for (&k, &n) in nd.k_nodes.iter().zip(&nd.values) {
        if k >= k_min && k <= k_max {
            let mirror = nd
                .value_at(-k)
                .ok_or_else(|| Error::Domain(format!("no sample at -{k} to pair with {k}")))?;
            out.push((k, 0.5 * (n + mirror), 0.5 * (n - mirror)));
        }
    }
    if out.len() < 4 {
        return Err(Error::Domain(format!("only {} samples in the fit range", out.len())));
    }
    Ok(out)
}

/// Least squares with unit-norm columns; returns coefficients, residual sum of
/// squares and the condition number.
fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64, f64)> {
    let (m, n) = (rows.len(), rows[0].len());
    let mut a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let scales: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    for (j, &s) in scales.iter().enumerate() {
        if s == 0.0 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let b = DVector::from_column_slice(rhs);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min();
    if !(cond <= MAX_CONDITION) {
        return Err(Error::IllConditioned(cond));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::Domain(e.to_string()))?;
    let resid = (&a * &x - &b).norm_squared();
    let coef = x.iter().zip(&scales).map(|(v, s)| v / s).collect();
    Ok((coef, resid, cond))
}

/// Joint fit: `E k^2 = c2 + c4/k^2 + c6/k^4` on the even part and
/// `O k^3 = c3 + c5/k^2` on the odd part; `c5`, `c6` absorb the remainder.
pub fn fit_tail(nd: &MomentumDistribution, k_min: f64, k_max: f64) -> Result<TailFit> {
    let parts = parity_parts(nd, k_min, k_max)?;
    let even_rows: Vec<Vec<f64>> = parts.iter().map(|&(k, _, _)| vec![1.0, k.powi(-2), k.powi(-4)]).collect();
    let even_rhs: Vec<f64> = parts.iter().map(|&(k, e, _)| e * k * k).collect();
    let odd_rows: Vec<Vec<f64>> = parts.iter().map(|&(k, _, _)| vec![1.0, k.powi(-2)]).collect();
    let odd_rhs: Vec<f64> = parts.iter().map(|&(k, _, o)| o * k.powi(3)).collect();
    let (even, r_e, cond_e) = least_squares(&even_rows, &even_rhs)?;
    let (odd, r_o, cond_o) = least_squares(&odd_rows, &odd_rhs)?;
    Ok(TailFit {
        c2: even[0],
        c3: odd[0],
        c4: even[1],
        rms_residual: ((r_e + r_o) / (2 * parts.len()) as f64).sqrt(),
        condition: cond_e.max(cond_o),
    })
}

/// Sequential subtraction: `c2` from `E k^2`, then `c4` from
/// `(E - c2/k^2) k^4`, and `c3` from `O k^3`.
///
/// The second stage multiplies any error in `c2` by `k^2`, so the first stage
/// is quadratic in `1/k^2`; the later stages are straight lines whose slope
/// takes up the next order.
pub fn fit_tail_sequential(nd: &MomentumDistribution, k_min: f64, k_max: f64) -> Result<TailFit> {
    let parts = parity_parts(nd, k_min, k_max)?;
    let line: Vec<Vec<f64>> = parts.iter().map(|&(k, _, _)| vec![1.0, k.powi(-2)]).collect();
    let stage = |rhs: Vec<f64>| least_squares(&line, &rhs);
    let quadratic: Vec<Vec<f64>> = parts.iter().map(|&(k, _, _)| vec![1.0, k.powi(-2), k.powi(-4)]).collect();
    let (s2, r2, k2) = least_squares(&quadratic, &parts.iter().map(|&(k, e, _)| e * k * k).collect::<Vec<_>>())?;
    let c2 = s2[0];
    let (s4, r4, k4) = stage(parts.iter().map(|&(k, e, _)| (e - c2 / (k * k)) * k.powi(4)).collect())?;
    let (s3, r3, k3) = stage(parts.iter().map(|&(k, _, o)| o * k.powi(3)).collect())?;
    Ok(TailFit {
        c2,
        c3: s3[0],
        c4: s4[0],
        rms_residual: ((r2 + r3 + r4) / (3 * parts.len()) as f64).sqrt(),
        condition: k2.max(k3).max(k4),
    })
}

/// `per_side` log-spaced magnitudes in `[lo, hi]` with both signs, sorted.
pub fn symmetric_log_k(lo: f64, hi: f64, per_side: usize) -> Vec<f64> {
    let mut out: Vec<f64> = crate::statistics::symmetric_log_samples(lo, hi, per_side);
    out.sort_by(f64::total_cmp);
    out
}
