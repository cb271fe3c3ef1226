//! Executable checks of the exchange, mapping and normalization relations over
//! a corpus of free bound states and trap states.
//!
//! Residuals are sup-norms over fixed sample sets, so every run reproduces
//! them exactly.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freespace::{contact_bound, momentum_bound, momentum_bound_raw, obdm_bound};
use crate::harmonic::{asc_from_epsilon, contact_ho, tail_ho, trap_contact, TrapRelativeState, TrapTwoBodyState};
use crate::momentum_numeric::{build_grid, momentum_distribution, momentum_norm, symmetric_log_k, NonUniformGrid};
use crate::numerics::{gauss_legendre, integrate_real, QuadratureSpec};
use crate::pair::{CenterOfMass, PairWavefunction};
use crate::statistics::{exchange_residual, symmetric_log_samples, Family, RelativeWavefunction, StatisticsKind};
use crate::zerorange::{boundary_residual, bound_state, contact_limits, Extended, ScatteringModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub states_tested: usize,
}

impl PropertyReport {
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64, states_tested: usize) -> Self {
        Self {
            name: name.into(),
            max_residual,
            tolerance,
            // a NaN residual must fail
            passed: max_residual <= tolerance,
            states_tested,
        }
    }
}

/// A physical two-body state; the statistics are supplied separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhysicalState {
    /// Free-space dimer at rest.
    Bound { a_sc: f64 },
    /// Trap state with the center of mass in its ground level.
    Trap { epsilon: f64 },
}

/// Which group of states a report covers; tolerances differ between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    Bound,
    Trap,
}

impl Group {
    fn name(self) -> &'static str {
        match self {
            Group::Bound => "bound",
            Group::Trap => "trap",
        }
    }
}

impl PhysicalState {
    fn group(&self) -> Group {
        match self {
            PhysicalState::Bound { .. } => Group::Bound,
            PhysicalState::Trap { .. } => Group::Trap,
        }
    }

    pub fn a_sc(&self) -> Extended {
        match *self {
            PhysicalState::Bound { a_sc } => Extended::Finite(a_sc),
            PhysicalState::Trap { epsilon } => asc_from_epsilon(epsilon),
        }
    }

    pub fn relative(&self, kind: StatisticsKind) -> Result<RelativeWavefunction> {
        match *self {
            PhysicalState::Bound { a_sc } => Ok(bound_state(kind, &ScatteringModel::new(a_sc))?.wavefunction),
            PhysicalState::Trap { epsilon } => Ok(TrapRelativeState::new(kind, epsilon)?.wavefunction()),
        }
    }

    pub fn pair(&self, kind: StatisticsKind) -> Result<PairWavefunction> {
        match *self {
            PhysicalState::Bound { .. } => Ok(PairWavefunction::new(self.relative(kind)?, CenterOfMass::Box { length: 2.0 * self.window() })),
            PhysicalState::Trap { epsilon } => Ok(TrapTwoBodyState::new(0, TrapRelativeState::new(kind, epsilon)?).pair()),
        }
    }

    /// Half-width beyond which the relative wavefunction is negligible.
    pub fn window(&self) -> f64 {
        match *self {
            PhysicalState::Bound { a_sc } => 40.0 * a_sc,
            PhysicalState::Trap { .. } => 12.0,
        }
    }

    /// Analytic contact of the pair state.
    pub fn contact(&self) -> Result<f64> {
        match *self {
            PhysicalState::Bound { a_sc } => contact_bound(a_sc),
            PhysicalState::Trap { epsilon } => contact_ho(epsilon),
        }
    }

    /// Length unit of the state, used to place sample points.
    fn scale(&self) -> f64 {
        match *self {
            PhysicalState::Bound { a_sc } => a_sc,
            PhysicalState::Trap { .. } => 1.0,
        }
    }
}

impl fmt::Display for PhysicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhysicalState::Bound { a_sc } => write!(f, "bound a_sc={a_sc}"),
            PhysicalState::Trap { epsilon } => write!(f, "trap eps={epsilon}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub states: Vec<PhysicalState>,
    pub alphas: Vec<f64>,
}

impl Corpus {
    /// The corpus the command-line `verify` runs on.
    pub fn shipped() -> Self {
        let mut states: Vec<PhysicalState> = [0.5, 1.0, 2.0].iter().map(|&a_sc| PhysicalState::Bound { a_sc }).collect();
        states.extend([-0.5, 0.5, 1.5].iter().map(|&epsilon| PhysicalState::Trap { epsilon }));
        Self {
            states,
            alphas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteOptions {
    /// Flip the sign of the mirror relation; a negative control that must fail.
    pub inject_sign_flip: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    All,
    FormalShift,
    ChiralMirror,
    Contacts,
    Normalizations,
    Exchange,
    Boundary,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["all", "formal-shift", "mirror", "contacts", "normalizations", "exchange", "boundary"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "formal-shift" => Suite::FormalShift,
            "mirror" => Suite::ChiralMirror,
            "contacts" => Suite::Contacts,
            "normalizations" => Suite::Normalizations,
            "exchange" => Suite::Exchange,
            "boundary" => Suite::Boundary,
            other => return Err(Error::Domain(format!("unknown suite '{other}', expected one of {}", Suite::NAMES.join(", ")))),
        })
    }
}

pub fn run_suite(corpus: &Corpus, suite: Suite, options: SuiteOptions) -> Result<Vec<PropertyReport>> {
    if corpus.states.is_empty() {
        return Err(Error::Domain("empty corpus".into()));
    }
    let mut out = Vec::new();
    let wants = |s: Suite| suite == Suite::All || suite == s;
    if wants(Suite::FormalShift) {
        out.extend(verify_formal_shift(corpus)?);
    }
    if wants(Suite::ChiralMirror) {
        out.extend(verify_chiral_mirror(corpus, options)?);
    }
    if wants(Suite::Contacts) {
        out.extend(verify_contact_independence(corpus)?);
    }
    if wants(Suite::Normalizations) {
        out.extend(verify_normalizations(corpus)?);
    }
    if wants(Suite::Exchange) {
        out.extend(verify_exchange(corpus)?);
    }
    if wants(Suite::Boundary) {
        out.extend(verify_boundary(corpus)?);
    }
    Ok(out)
}

const Z_PER_SIDE: usize = 50;
const K_PER_SIDE: usize = 32;

fn z_samples(state: &PhysicalState) -> Vec<f64> {
    symmetric_log_samples(1e-3, 10.0, Z_PER_SIDE).into_iter().map(|z| z * state.scale()).collect()
}

/// Accumulates the worst residual per state group.
struct Tally {
    name: &'static str,
    bound: (f64, usize),
    trap: (f64, usize),
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            bound: (0.0, 0),
            trap: (0.0, 0),
        }
    }

    fn record(&mut self, group: Group, residual: f64, states: usize) {
        let slot = match group {
            Group::Bound => &mut self.bound,
            Group::Trap => &mut self.trap,
        };
        // NaN propagates into the maximum so that it fails the report
        slot.0 = if residual.is_nan() || slot.0.is_nan() { f64::NAN } else { slot.0.max(residual) };
        slot.1 += states;
    }

    fn reports(self, bound_tol: f64, trap_tol: f64) -> Vec<PropertyReport> {
        let mut out = Vec::new();
        for (group, (res, n), tol) in [(Group::Bound, self.bound, bound_tol), (Group::Trap, self.trap, trap_tol)] {
            if n > 0 {
                out.push(PropertyReport::new(format!("{}/{}", self.name, group.name()), res, tol, n));
            }
        }
        out
    }
}

/// Parent boson and fermion states, checked to be real.
fn parents(state: &PhysicalState) -> Result<(RelativeWavefunction, RelativeWavefunction)> {
    let boson = state.relative(StatisticsKind::Boson)?;
    let fermion = state.relative(StatisticsKind::Fermion)?;
    let zs = z_samples(state);
    ensure_real(&boson, &zs)?;
    ensure_real(&fermion, &zs)?;
    Ok((boson, fermion))
}

fn ensure_real(w: &RelativeWavefunction, zs: &[f64]) -> Result<()> {
    for &z in zs {
        let v = w.at(z);
        if v.im.abs() > 1e-15 * v.re.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::ComplexParent(v.im.abs()));
        }
    }
    Ok(())
}

/// `exp(i pi alpha sign(z) / 2)` times the parent, without the constant phase,
/// for any real `alpha`.
fn phase_free(parent: &RelativeWavefunction, alpha: f64, z: f64) -> Complex64 {
    Complex64::from_polar(1.0, 0.5 * PI * alpha * z.signum()) * parent.at(z)
}

fn peak(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

/// `psi_{alpha,+} = -+ i psi_{alpha+-1,-}` and the same with the families
/// swapped, on the phase-free states; the shifted states must also obey the
/// exchange rule with the extended parameter.
pub fn verify_formal_shift(corpus: &Corpus) -> Result<Vec<PropertyReport>> {
    let mut tally = Tally::new("formal_shift");
    for state in &corpus.states {
        let (boson, fermion) = parents(state)?;
        let zs = z_samples(state);
        let scale = peak(zs.iter().map(|&z| boson.at(z).norm().max(fermion.at(z).norm())));
        let mut worst = 0.0f64;
        for &alpha in &corpus.alphas {
            for (shift, factor) in [(1.0, -Complex64::i()), (-1.0, Complex64::i())] {
                let shifted = alpha + shift;
                for (target, source, source_family) in [(&boson, &fermion, Family::Minus), (&fermion, &boson, Family::Plus)] {
                    for &z in &zs {
                        let lhs = phase_free(target, alpha, z);
                        let rhs = factor * phase_free(source, shifted, z);
                        worst = worst.max((lhs - rhs).norm() / scale);
                        let phase = crate::statistics::exchange_phase(shifted, z)?;
                        let swapped = phase_free(source, shifted, -z) - phase * phase_free(source, shifted, z) * source_family.sign();
                        worst = worst.max(swapped.norm() / scale);
                    }
                }
            }
        }
        if let PhysicalState::Bound { a_sc } = *state {
            let ks: Vec<f64> = symmetric_log_k(1e-2, 1e2, K_PER_SIDE).into_iter().map(|k| k / a_sc).collect();
            for &alpha in &corpus.alphas {
                // relative to the peak value 8 a_sc
                worst = worst.max(formal_shift_momentum_residual(a_sc, alpha, &ks) / (8.0 * a_sc));
            }
        }
        tally.record(state.group(), worst, 2 * corpus.alphas.len());
    }
    Ok(tally.reports(1e-13, 1e-12))
}

/// `psi_{alpha,+-} = i [psi_{1-alpha,-+}]^*` on the phase-free states, the
/// equivalent `Psi_{alpha,+-} = [Psi_{1-alpha,-+}]^*` on the library's states,
/// and the induced relations `rho_{alpha,+} = rho_{1-alpha,-}^*` and
/// `n_{alpha,+}(k) = n_{1-alpha,-}(-k)`.
pub fn verify_chiral_mirror(corpus: &Corpus, options: SuiteOptions) -> Result<Vec<PropertyReport>> {
    let flip = if options.inject_sign_flip { -1.0 } else { 1.0 };
    let mut wave = Tally::new("chiral_mirror_wavefunction");
    let mut obdm = Tally::new("chiral_mirror_obdm");
    let mut momentum = Tally::new("chiral_mirror_momentum");
    let trap_grid = build_grid(12.0, 64, 32, 0.1)?;
    for state in &corpus.states {
        let (boson, fermion) = parents(state)?;
        let zs = z_samples(state);
        let scale = peak(zs.iter().map(|&z| boson.at(z).norm().max(fermion.at(z).norm())));
        let mut worst_wave = 0.0f64;
        for &alpha in &corpus.alphas {
            let mirror = 1.0 - alpha;
            for (family, target, source) in [(Family::Plus, &boson, &fermion), (Family::Minus, &fermion, &boson)] {
                let here = state.relative(StatisticsKind::anyon(family, alpha)?)?;
                let there = state.relative(StatisticsKind::anyon(family.other(), mirror)?)?;
                for &z in &zs {
                    let lhs = phase_free(target, alpha, z);
                    let rhs = Complex64::i() * flip * phase_free(source, mirror, z).conj();
                    worst_wave = worst_wave.max((lhs - rhs).norm() / scale);
                    worst_wave = worst_wave.max((here.at(z) - there.at(z).conj() * flip).norm() / scale);
                }
            }
        }
        wave.record(state.group(), worst_wave, 2 * corpus.alphas.len());

        let ks: Vec<f64> = symmetric_log_k(1e-2, 1e2, K_PER_SIDE).into_iter().map(|k| k / state.scale()).collect();
        match *state {
            PhysicalState::Bound { a_sc } => {
                let mut worst_rho = 0.0f64;
                let mut worst_n = 0.0f64;
                for &alpha in &corpus.alphas {
                    let ba = StatisticsKind::anyon(Family::Plus, alpha)?;
                    let fa = StatisticsKind::anyon(Family::Minus, 1.0 - alpha)?;
                    for &z in &zs {
                        for zp in [-z, 0.5 * z, 2.0 * z] {
                            let r = obdm_bound(ba, a_sc, z, zp)? - obdm_bound(fa, a_sc, z, zp)?.conj();
                            worst_rho = worst_rho.max(r.norm());
                        }
                    }
                    let n_peak = peak(ks.iter().map(|&k| momentum_bound(ba, a_sc, k).unwrap_or(0.0)));
                    for &k in &ks {
                        let r = momentum_bound(ba, a_sc, k)? - momentum_bound(fa, a_sc, -k)?;
                        worst_n = worst_n.max(r.abs() / n_peak);
                    }
                }
                obdm.record(Group::Bound, worst_rho, 2 * corpus.alphas.len());
                momentum.record(Group::Bound, worst_n, 2 * corpus.alphas.len());
            }
            PhysicalState::Trap { .. } => {
                let ks = symmetric_log_k(0.3, 30.0, 8);
                let mut worst_n = 0.0f64;
                for &alpha in &corpus.alphas {
                    let ba = StatisticsKind::anyon(Family::Plus, alpha)?;
                    let fa = StatisticsKind::anyon(Family::Minus, 1.0 - alpha)?;
                    let n_ba = momentum_distribution(&state.pair(ba)?, &trap_grid, &ks)?.values;
                    let n_fa = momentum_distribution(&state.pair(fa)?, &trap_grid, &ks)?.values;
                    let n_peak = peak(n_ba.iter().copied());
                    let len = ks.len();
                    for i in 0..len {
                        worst_n = worst_n.max((n_ba[i] - n_fa[len - 1 - i]).abs() / n_peak);
                    }
                }
                momentum.record(Group::Trap, worst_n, 2 * corpus.alphas.len());
            }
        }
    }
    let mut out = wave.reports(1e-14, 1e-12);
    out.extend(obdm.reports(1e-14, 1e-14));
    out.extend(momentum.reports(1e-14, 1e-5));
    Ok(out)
}

fn all_kinds(alpha: f64) -> Result<[StatisticsKind; 4]> {
    Ok([
        StatisticsKind::Boson,
        StatisticsKind::Fermion,
        StatisticsKind::bosonic_anyon(alpha)?,
        StatisticsKind::fermionic_anyon(alpha)?,
    ])
}

/// `2 |psi(0+)|^2`: the contact of a pair whose center-of-mass factor is normalized.
fn contact_from_relative(w: &RelativeWavefunction) -> Result<f64> {
    Ok(2.0 * contact_limits(w, 1e-2)?.value_plus.norm_sqr())
}

/// The contact of the four statistics variants agrees, and matches the
/// analytic value.
pub fn verify_contact_independence(corpus: &Corpus) -> Result<Vec<PropertyReport>> {
    let mut spread = Tally::new("contact_independence");
    let mut analytic = Tally::new("contact_analytic");
    for state in &corpus.states {
        let exact = state.contact()?;
        let mut worst_spread = 0.0f64;
        let mut worst_exact = 0.0f64;
        for &alpha in &corpus.alphas {
            let values = all_kinds(alpha)?
                .iter()
                .map(|&kind| contact_from_relative(&state.relative(kind)?))
                .collect::<Result<Vec<f64>>>()?;
            let hi = peak(values.iter().copied());
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            worst_spread = worst_spread.max(hi - lo);
            worst_exact = worst_exact.max((values[0] - exact).abs());
        }
        if let PhysicalState::Trap { epsilon } = *state {
            // a vanishing contact must come with a finite C/a^2
            let tc = trap_contact(epsilon)?;
            if exact == 0.0 && !(tc.over_asc2.is_finite() && tc.over_asc2 > 0.0) {
                worst_exact = f64::NAN;
            }
        }
        spread.record(state.group(), worst_spread, 4 * corpus.alphas.len());
        analytic.record(state.group(), worst_exact, 1);
    }
    let mut out = spread.reports(1e-9, 1e-9);
    out.extend(analytic.reports(1e-9, 1e-7));
    Ok(out)
}

/// `|int rho(z, z) dz - 2|` for a pair, using its separable form.
pub fn position_norm_residual(pair: &PairWavefunction, window: f64) -> f64 {
    let quad = QuadratureSpec::split_at(-window, window, &[0.0], 16);
    let relative = integrate_real(|z| pair.relative.at(z).norm_sqr(), &quad);
    let com = match pair.com {
        CenterOfMass::Box { .. } => 1.0,
        CenterOfMass::Oscillator { .. } => integrate_real(|z| pair.com.eval(z).powi(2), &QuadratureSpec::uniform(-10.0, 10.0, 40, 16)),
    };
    (2.0 * relative * com - 2.0).abs()
}

/// `(1/2 pi) int n dk` of the dimer by Gauss-Legendre in `theta`, `a k = tan(theta)`.
fn bound_momentum_norm(kind: StatisticsKind, a_sc: f64) -> Result<f64> {
    let (x, w) = gauss_legendre(32);
    let panels = 16;
    let h = PI / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = -0.5 * PI + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            let theta = lo + 0.5 * h * (xi + 1.0);
            let k = theta.tan() / a_sc;
            let jac = 1.0 / (a_sc * theta.cos().powi(2));
            total += 0.5 * h * wi * momentum_bound(kind, a_sc, k)? * jac;
        }
    }
    Ok(total / (2.0 * PI))
}

/// Position- and momentum-space normalizations to 2.
///
/// The numeric momentum check runs on the bosonic family only: the mirror
/// relation checked by [`verify_chiral_mirror`] carries it over to the other.
pub fn verify_normalizations(corpus: &Corpus) -> Result<Vec<PropertyReport>> {
    let mut position = Tally::new("normalization_position");
    let mut momentum = Tally::new("normalization_momentum");
    let trap_grid: NonUniformGrid = build_grid(12.0, 64, 32, 0.1)?;
    for state in &corpus.states {
        let mut worst_pos = 0.0f64;
        let mut worst_mom = 0.0f64;
        for &alpha in &corpus.alphas {
            for kind in all_kinds(alpha)? {
                worst_pos = worst_pos.max(position_norm_residual(&state.pair(kind)?, state.window()));
            }
            let ba = StatisticsKind::bosonic_anyon(alpha)?;
            let norm = match *state {
                PhysicalState::Bound { a_sc } => bound_momentum_norm(ba, a_sc)?,
                PhysicalState::Trap { epsilon } => momentum_norm(&state.pair(ba)?, &trap_grid, 40.0, &tail_ho(ba, epsilon)?)?,
            };
            worst_mom = worst_mom.max((norm - 2.0).abs());
        }
        position.record(state.group(), worst_pos, 4 * corpus.alphas.len());
        momentum.record(state.group(), worst_mom, corpus.alphas.len());
    }
    let mut out = position.reports(1e-10, 1e-6);
    out.extend(momentum.reports(1e-10, 1e-6));
    Ok(out)
}

/// Position-space normalization of explicit pairs, for states outside a corpus.
pub fn verify_pair_normalizations(name: &str, pairs: &[(PairWavefunction, f64)], tolerance: f64) -> PropertyReport {
    let worst = pairs.iter().map(|(p, window)| position_norm_residual(p, *window)).fold(0.0, f64::max);
    PropertyReport::new(name, worst, tolerance, pairs.len())
}

pub fn verify_exchange(corpus: &Corpus) -> Result<Vec<PropertyReport>> {
    let mut tally = Tally::new("exchange");
    for state in &corpus.states {
        let mut worst = 0.0f64;
        for &alpha in &corpus.alphas {
            for kind in all_kinds(alpha)? {
                worst = worst.max(exchange_residual(&state.relative(kind)?, &z_samples(state))?);
            }
        }
        tally.record(state.group(), worst, 4 * corpus.alphas.len());
    }
    Ok(tally.reports(1e-13, 1e-12))
}

/// Short-distance boundary conditions. With `a_sc = 0` the condition is that
/// the state vanishes at contact, measured relative to its peak.
pub fn verify_boundary(corpus: &Corpus) -> Result<Vec<PropertyReport>> {
    let mut tally = Tally::new("boundary");
    for state in &corpus.states {
        let mut worst = 0.0f64;
        for &alpha in &corpus.alphas {
            for kind in all_kinds(alpha)? {
                let w = state.relative(kind)?;
                let r = if state.a_sc().is_zero() {
                    let lim = contact_limits(&w, 1e-2)?;
                    let top = peak(z_samples(state).iter().map(|&z| w.at(z).norm()));
                    lim.value_plus.norm().max(lim.value_minus.norm()) / top
                } else {
                    boundary_residual(&w, &ScatteringModel { a_sc: state.a_sc() })?
                };
                worst = worst.max(r);
            }
        }
        tally.record(state.group(), worst, 4 * corpus.alphas.len());
    }
    Ok(tally.reports(1e-10, 1e-8))
}

/// `n_{alpha,+}(k)` continued to `alpha +- 1` equals `n_{alpha+-1,-}(k)` of the
/// other family; the momentum-space image of the formal shift.
pub fn formal_shift_momentum_residual(a_sc: f64, alpha: f64, ks: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for shift in [-1.0, 1.0] {
        for &k in ks {
            let lhs = momentum_bound_raw(Family::Plus, alpha, a_sc, k);
            let rhs = momentum_bound_raw(Family::Minus, alpha + shift, a_sc, k);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parent_is_rejected() {
        let w = RelativeWavefunction::new(StatisticsKind::Boson, "complex", |z: f64| Complex64::new((-z.abs()).exp(), 0.1));
        assert!(matches!(ensure_real(&w, &[0.5, -0.5]), Err(Error::ComplexParent(_))));
        let state = PhysicalState::Bound { a_sc: 1.0 };
        assert!(ensure_real(&state.relative(StatisticsKind::Fermion).unwrap(), &z_samples(&state)).is_ok());
    }
}
