//! Zero-range scattering: phase-shift law, couplings, outside solutions,
//! short-distance boundary conditions and the free-space bound state.
//!
//! Units are hbar = mu = 1 with lengths in units of the caller's choice.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statistics::{anyonize, reference_function, Family, RelativeWavefunction, StatisticsKind, Which};

/// Real number or the infinite limit; used for scattering lengths and couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    /// `1/x`, with `1/inf = 0`; `None` for an exact zero.
    pub fn recip(self) -> Option<f64> {
        match self {
            Extended::Finite(v) if v == 0.0 => None,
            Extended::Finite(v) => Some(1.0 / v),
            Extended::Infinite => Some(0.0),
        }
    }

    pub fn is_zero(self) -> bool {
        self == Extended::Finite(0.0)
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// Low-energy scattering model characterized by the 1D scattering length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringModel {
    pub a_sc: Extended,
}

/// Pseudopotential strengths of the even and odd channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub g_plus: f64,
    pub g_minus: Extended,
}

impl ScatteringModel {
    pub fn new(a_sc: f64) -> Self {
        Self { a_sc: Extended::Finite(a_sc) }
    }

    pub fn hard_core() -> Self {
        Self { a_sc: Extended::Infinite }
    }

    /// `tan(delta) = -a k`; the infinite scattering length maps to an infinite tangent.
    pub fn tan_phase_shift(&self, k: f64) -> Result<Extended> {
        if !(k > 0.0) {
            return Err(Error::Domain(format!("wave number must be positive, got {k}")));
        }
        Ok(match self.a_sc {
            Extended::Finite(a) => Extended::Finite(-a * k),
            Extended::Infinite => Extended::Infinite,
        })
    }

    /// The same law continued to complex wave numbers.
    pub fn tan_phase_shift_complex(&self, k: Complex64) -> Result<Complex64> {
        match self.a_sc {
            Extended::Finite(a) => Ok(-k * a),
            Extended::Infinite => Err(Error::Domain("infinite scattering length has no finite phase".into())),
        }
    }

    /// `g+ = -1/a` and `g- = a`.
    pub fn couplings(&self) -> Result<Couplings> {
        match self.a_sc {
            Extended::Finite(a) if a == 0.0 => Err(Error::ZeroScatteringLength),
            Extended::Finite(a) => Ok(Couplings {
                g_plus: -1.0 / a,
                g_minus: Extended::Finite(a),
            }),
            Extended::Infinite => Ok(Couplings {
                g_plus: 0.0,
                g_minus: Extended::Infinite,
            }),
        }
    }
}

/// `f + tan(delta) g` outside the interaction region.
///
/// For an infinite scattering length the solution is rescaled by `1/tan(delta)`
/// and reduces to the irregular function alone.
pub fn outside_solution(kind: StatisticsKind, model: &ScatteringModel, k: f64, z: f64) -> Result<Complex64> {
    let g = reference_function(kind, Which::Irregular, k, z)?;
    match model.tan_phase_shift(k)? {
        Extended::Finite(t) => Ok(reference_function(kind, Which::Regular, k, z)? + g * t),
        Extended::Infinite => Ok(g),
    }
}

/// One-sided limits of a wavefunction and its derivative at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactLimits {
    pub value_plus: Complex64,
    pub value_minus: Complex64,
    pub slope_plus: Complex64,
    pub slope_minus: Complex64,
}

const LADDER_LEVELS: usize = 6;

/// Richardson-extrapolated one-sided value and slope at `0+` (`side = 1`) or `0-`.
fn one_sided(w: &RelativeWavefunction, side: f64, h0: f64) -> Result<(Complex64, Complex64)> {
    let hs: Vec<f64> = (0..LADDER_LEVELS).map(|j| h0 / 2f64.powi(j as i32)).collect();
    let vals: Vec<Complex64> = hs.iter().map(|&h| w.at(side * h)).collect();
    let (value, dv) = richardson(&vals);
    let scale = vals[0].norm().max(1e-300);
    if dv > 1e-9 * scale {
        return Err(Error::ExtrapolationFailure(dv / scale));
    }
    let slopes: Vec<Complex64> = hs.iter().zip(&vals).map(|(&h, &v)| (v - value) / (side * h)).collect();
    let (slope, _) = richardson(&slopes);
    Ok((value, slope))
}

/// Neville extrapolation to zero step for samples at `h0 / 2^j`; returns the
/// final estimate and the change from the previous one.
fn richardson(samples: &[Complex64]) -> (Complex64, f64) {
    let n = samples.len();
    let mut table = samples.to_vec();
    let mut prev_best = table[0];
    let mut best = table[0];
    for level in 1..n {
        let factor = 2f64.powi(level as i32);
        for i in (level..n).rev() {
            table[i] = (table[i] * factor - table[i - 1]) / (factor - 1.0);
        }
        prev_best = best;
        best = table[n - 1];
    }
    (best, (best - prev_best).norm())
}

/// Extrapolated value and slope on both sides of the origin.
pub fn contact_limits(w: &RelativeWavefunction, h0: f64) -> Result<ContactLimits> {
    let (value_plus, slope_plus) = one_sided(w, 1.0, h0)?;
    let (value_minus, slope_minus) = one_sided(w, -1.0, h0)?;
    Ok(ContactLimits {
        value_plus,
        value_minus,
        slope_plus,
        slope_minus,
    })
}

/// Expected `(value, slope)` at `0+` and `0-` of the kind-specific short-distance
/// form with unit amplitude.
fn expected_limits(kind: StatisticsKind, inv_a: f64) -> [(Complex64, Complex64); 2] {
    let alpha = kind.alpha();
    let c = (0.5 * PI * alpha).cos();
    let s = (0.5 * PI * alpha).sin();
    let mut out = [(Complex64::default(), Complex64::default()); 2];
    for (slot, side) in out.iter_mut().zip([1.0, -1.0]) {
        // even form 1 - |z|/a and odd form sign(z) - z/a
        let (even_v, even_d) = (1.0, -side * inv_a);
        let (odd_v, odd_d) = (side, -inv_a);
        let (v, d) = match kind.family() {
            Family::Plus => (Complex64::new(c * even_v, s * odd_v), Complex64::new(c * even_d, s * odd_d)),
            Family::Minus => (Complex64::new(c * odd_v, s * even_v), Complex64::new(c * odd_d, s * even_d)),
        };
        *slot = (v, d);
    }
    out
}

/// Largest deviation from the kind-specific short-distance form, after matching
/// the overall complex amplitude on the `0+` value. Relative to that amplitude.
pub fn boundary_residual(w: &RelativeWavefunction, model: &ScatteringModel) -> Result<f64> {
    let inv_a = model
        .a_sc
        .recip()
        .ok_or_else(|| Error::Domain("boundary condition needs a nonzero scattering length".into()))?;
    let h0 = match model.a_sc {
        Extended::Finite(a) => 1e-2 * a.abs().min(1.0),
        Extended::Infinite => 1e-2,
    };
    let lim = contact_limits(w, h0)?;
    let [(vp, dp), (vm, dm)] = expected_limits(w.kind(), inv_a);
    let amp = lim.value_plus / vp;
    if amp.norm() == 0.0 {
        return Err(Error::Domain("wavefunction vanishes at contact".into()));
    }
    let worst = [
        (lim.value_minus - amp * vm).norm(),
        (lim.slope_plus - amp * dp).norm(),
        (lim.slope_minus - amp * dm).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(worst / amp.norm())
}

/// Free-space two-body bound state.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub kappa: f64,
    pub energy: f64,
    pub wavefunction: RelativeWavefunction,
    pub kind: StatisticsKind,
}

/// Smallest scattering length accepted by [`bound_state`].
pub const BREAKDOWN_LENGTH: f64 = 1e-12;

/// Normalized bound state for positive scattering length.
pub fn bound_state(kind: StatisticsKind, model: &ScatteringModel) -> Result<BoundState> {
    let a = match model.a_sc {
        Extended::Finite(a) => a,
        Extended::Infinite => return Err(Error::NoBoundState(f64::INFINITY)),
    };
    if a <= 0.0 {
        return Err(Error::NoBoundState(a));
    }
    if a <= BREAKDOWN_LENGTH {
        return Err(Error::BreakdownRegime(a));
    }
    let amp = a.sqrt().recip();
    let even = move |z: f64| Complex64::new(amp * (-z.abs() / a).exp(), 0.0);
    let label = format!("bound a_sc={a}");
    let boson = RelativeWavefunction::new(StatisticsKind::Boson, label.clone(), even);
    let fermion = RelativeWavefunction::new(StatisticsKind::Fermion, label, move |z| even(z) * z.signum());
    let wavefunction = match kind {
        StatisticsKind::Boson => boson,
        StatisticsKind::Fermion => fermion,
        StatisticsKind::BosonicAnyon(_) => anyonize(kind, &boson)?,
        StatisticsKind::FermionicAnyon(_) => anyonize(kind, &fermion)?,
    };
    let kappa = 1.0 / a;
    Ok(BoundState {
        kappa,
        energy: -0.5 * kappa * kappa,
        wavefunction,
        kind,
    })
}
