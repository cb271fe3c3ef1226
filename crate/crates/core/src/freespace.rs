//! Closed-form observables of the free-space anyonic dimer: one-body density
//! matrix, momentum distribution, its extrema, the contact and the large-k tail.
//!
//! Lengths are in the caller's unit and momenta in its inverse.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_real, QuadratureSpec};
use crate::pair::{CenterOfMass, PairWavefunction};
use crate::statistics::{Family, StatisticsKind};
use crate::zerorange::contact_limits;

/// `(cos(pi alpha / 2), sin(pi alpha / 2))`, exact at the endpoints so that
/// vanishing tail terms come out as exact zeros.
pub(crate) fn half_angle(alpha: f64) -> (f64, f64) {
    if alpha == 0.0 {
        (1.0, 0.0)
    } else if alpha == 1.0 {
        (0.0, 1.0)
    } else {
        let (s, c) = (0.5 * PI * alpha).sin_cos();
        (c, s)
    }
}

fn check_length(a_sc: f64) -> Result<()> {
    if a_sc > 0.0 && a_sc.is_finite() {
        Ok(())
    } else {
        Err(Error::NoBoundState(a_sc))
    }
}

/// `L rho(z1, z1')` for the dimer at rest; equals 1 on the diagonal.
pub fn obdm_bound(kind: StatisticsKind, a_sc: f64, z1: f64, z1p: f64) -> Result<Complex64> {
    check_length(a_sc)?;
    let d = z1 - z1p;
    if d == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let x = d.abs() / a_sc;
    let phase = Complex64::from_polar(1.0, PI * kind.alpha() * d.signum());
    Ok((phase * (kind.family().sign() * x) + 1.0) * (-x).exp())
}

/// Momentum distribution of the dimer for any real `alpha`; the formula is
/// continued past `[0, 1]` for the shifted-index relations.
pub fn momentum_bound_raw(family: Family, alpha: f64, a_sc: f64, k: f64) -> f64 {
    let (s, c) = (0.5 * PI * alpha).sin_cos();
    let ak = a_sc * k;
    let amp = match family {
        Family::Plus => c + ak * s,
        Family::Minus => s - ak * c,
    };
    let den = 1.0 + ak * ak;
    8.0 * a_sc * amp * amp / (den * den)
}

pub fn momentum_bound(kind: StatisticsKind, a_sc: f64, k: f64) -> Result<f64> {
    check_length(a_sc)?;
    Ok(momentum_bound_raw(kind.family(), kind.alpha(), a_sc, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    GlobalMax,
    LocalMax,
}

/// A stationary point of the momentum distribution. Locations that run off to
/// infinity at the endpoints of the `alpha` range are reported as infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremumRecord {
    pub location_k: f64,
    pub value: f64,
    pub which: ExtremumKind,
}

/// The two maxima of the dimer momentum distribution, global one first.
pub fn extrema_bound(kind: StatisticsKind, a_sc: f64) -> Result<Vec<ExtremumRecord>> {
    check_length(a_sc)?;
    let alpha = kind.alpha();
    let (s4, c4) = (0.25 * PI * alpha).sin_cos();
    let a = a_sc;
    let records = match kind.family() {
        Family::Plus => {
            let local_k = if s4 == 0.0 { f64::NEG_INFINITY } else { -c4 / s4 / a };
            [
                (s4 / c4 / a, 8.0 * a * c4.powi(4)),
                (local_k, 8.0 * a * s4.powi(4)),
            ]
        }
        Family::Minus => {
            let (c, s) = half_angle(alpha);
            // tan -+ sec, rewritten so neither piece diverges on its own
            let global_k = -c / (1.0 + s) / a;
            let local_k = if c == 0.0 { f64::INFINITY } else { (1.0 + s) / c / a };
            [
                (global_k, 2.0 * a * (c4 + s4).powi(4)),
                // equals a (3 - cos(pi alpha) - 4 sin(pi alpha / 2)), never negative in this form
                (local_k, 2.0 * a * (c4 - s4).powi(4)),
            ]
        }
    };
    Ok(vec![
        ExtremumRecord {
            location_k: records[0].0,
            value: records[0].1,
            which: ExtremumKind::GlobalMax,
        },
        ExtremumRecord {
            location_k: records[1].0,
            value: records[1].1,
            which: ExtremumKind::LocalMax,
        },
    ])
}

pub fn contact_bound(a_sc: f64) -> Result<f64> {
    check_length(a_sc)?;
    Ok(2.0 / a_sc)
}

/// Contact computed from a pair state together with its norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactEstimate {
    pub contact: f64,
    pub norm: f64,
    /// False when the norm deviates from 1 by more than `NORM_TOLERANCE`.
    pub normalized: bool,
}

pub const NORM_TOLERANCE: f64 = 1e-6;

/// `2 int dz1 |Psi(z1, z1)|^2` over `[-window, window]`.
///
/// The coincidence value is the extrapolated `0+` limit of the relative part;
/// `quad` integrates `|psi|^2` for the norm and must cover its support.
pub fn contact_from_wavefunction(pair: &PairWavefunction, window: f64, quad: &QuadratureSpec) -> Result<ContactEstimate> {
    if !(window > 0.0) {
        return Err(Error::Domain(format!("window must be positive, got {window}")));
    }
    let at_contact = contact_limits(&pair.relative, 1e-2)?.value_plus.norm_sqr();
    let com_weight = match pair.com {
        CenterOfMass::Box { length } => window.min(0.5 * length) * 2.0 / length,
        CenterOfMass::Oscillator { .. } => {
            let spec = QuadratureSpec::uniform(-window, window, 64, 16);
            integrate_real(|z| pair.com.eval(z).powi(2), &spec)
        }
    };
    let rel_norm = integrate_real(|z| pair.relative.at(z).norm_sqr(), quad);
    let norm = rel_norm * com_weight;
    Ok(ContactEstimate {
        contact: 2.0 * at_contact * com_weight,
        norm,
        normalized: (norm - 1.0).abs() <= NORM_TOLERANCE,
    })
}

/// How a tail coefficient depends on the short-distance physics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Universality {
    /// Fixed by the contact, `alpha` and the scattering length alone.
    Universal,
    /// Contains a state-dependent piece.
    MixedUniversality,
    /// The coefficient vanishes.
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailFlags {
    pub c2: Universality,
    pub c3: Universality,
    pub c4: Universality,
}

/// `n(k) ~ c2/k^2 + c3/k^3 + c4/k^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailCoefficients {
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub flags: TailFlags,
}

pub(crate) fn flag(value: f64, state_dependent: bool) -> Universality {
    if value == 0.0 {
        Universality::Absent
    } else if state_dependent {
        Universality::MixedUniversality
    } else {
        Universality::Universal
    }
}

impl TailCoefficients {
    /// `c4_extra` is the state-dependent part of the `k^-4` coefficient.
    pub(crate) fn assemble(c2: f64, c3: f64, c4_universal: f64, c4_extra: f64) -> Self {
        let c4 = c4_universal + c4_extra;
        Self {
            c2,
            c3,
            c4,
            flags: TailFlags {
                c2: flag(c2, false),
                c3: flag(c3, false),
                c4: flag(c4, c4_extra != 0.0),
            },
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c2, self.c3, self.c4]
    }
}

/// Large-k expansion of the dimer momentum distribution.
pub fn tail_bound(kind: StatisticsKind, a_sc: f64) -> Result<TailCoefficients> {
    let contact = contact_bound(a_sc)?;
    let (c, s) = half_angle(kind.alpha());
    let (lead, sub, sign3) = match kind.family() {
        Family::Plus => (s * s, c * c, 1.0),
        Family::Minus => (c * c, s * s, -1.0),
    };
    let pre = 4.0 * contact;
    Ok(TailCoefficients::assemble(
        pre * lead,
        sign3 * pre * 2.0 * s * c / a_sc,
        pre / (a_sc * a_sc) * sub,
        -2.0 * pre / (a_sc * a_sc) * lead,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_angle_is_exact_at_endpoints() {
        assert_eq!(half_angle(0.0), (1.0, 0.0));
        assert_eq!(half_angle(1.0), (0.0, 1.0));
    }

    #[test]
    fn tail_flags_follow_the_channels() {
        let t = tail_bound(StatisticsKind::BosonicAnyon(0.0), 1.0).unwrap();
        assert_eq!(t.flags.c2, Universality::Absent);
        assert_eq!(t.flags.c4, Universality::Universal);
        let t = tail_bound(StatisticsKind::BosonicAnyon(0.4), 1.0).unwrap();
        assert_eq!(t.flags.c4, Universality::MixedUniversality);
    }
}
