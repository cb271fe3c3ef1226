//! Two anyons in a harmonic trap with a zero-range interaction.
//!
//! Oscillator units throughout: hbar = omega = m = 1, so the oscillator
//! length is 1 and the relative Hamiltonian is `-d^2/dz^2 + z^2/4`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freespace::{half_angle, TailCoefficients};
use crate::numerics::{find_root, gamma, integrate_real, kummer_u, recip_gamma, QuadratureSpec, KUMMER_A_MIN};
use crate::pair::{CenterOfMass, PairWavefunction};
use crate::statistics::{anyon_factor, anyonize, Family, RelativeWavefunction, StatisticsKind};
use crate::zerorange::Extended;

/// Kummer parameter `a = 1/4 - eps/2` of the even relative solution.
fn kummer_a(epsilon: f64) -> f64 {
    0.25 - 0.5 * epsilon
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `1/a_sc` as a function of the relative energy; finite except at
/// `eps = 3/2 + 2n`, where it is reported as a pole.
pub fn inverse_asc_from_epsilon(epsilon: f64) -> Result<f64> {
    let a = kummer_a(epsilon);
    Ok(SQRT_2 * gamma(a + 0.5)? * recip_gamma(a))
}

/// Scattering length that places a relative level at `epsilon`.
pub fn asc_from_epsilon(epsilon: f64) -> Extended {
    let a = kummer_a(epsilon);
    if is_nonpositive_integer(a) {
        return Extended::Infinite;
    }
    if is_nonpositive_integer(a + 0.5) {
        return Extended::Finite(0.0);
    }
    // both gamma arguments are off their poles here
    Extended::Finite(recip_gamma(a + 0.5) / (SQRT_2 * recip_gamma(a)))
}

/// Largest branch index whose level stays inside the Kummer evaluator's range.
pub const MAX_BRANCH: i64 = 39;

/// Relative energy on the given branch for a scattering length.
///
/// Branch `n` is the `n`-th root counted upward in energy. Between consecutive
/// poles of `1/a_sc` at `eps = 3/2 + 2(n - 1)` and `3/2 + 2n` the inverse
/// scattering length falls monotonically from `+inf` to `-inf`, so each branch
/// holds exactly one root: below `1/2 + 2n` for `a_sc > 0`, above it for
/// `a_sc < 0`.
pub fn epsilon_from_asc(a_sc: Extended, branch: i64) -> Result<f64> {
    if branch < 0 {
        return Err(Error::BranchOutOfRange {
            branch,
            reason: "branch index must be non-negative".into(),
        });
    }
    if branch > MAX_BRANCH {
        return Err(Error::BranchOutOfRange {
            branch,
            reason: format!("levels above branch {MAX_BRANCH} are outside the Kummer range"),
        });
    }
    let n = branch as f64;
    let free = 0.5 + 2.0 * n;
    let target = match a_sc {
        Extended::Infinite => return Ok(free),
        Extended::Finite(a) if a == 0.0 => return Ok(free + 1.0),
        Extended::Finite(a) if !a.is_finite() => return Err(Error::Domain(format!("scattering length {a}"))),
        Extended::Finite(a) => 1.0 / a,
    };
    let f = |eps: f64| inverse_asc_from_epsilon(eps).unwrap_or(f64::NAN) - target;
    const POLE_GAP: f64 = 1e-8;
    let (lo, hi) = if target > 0.0 {
        let hi = free;
        let lo = if branch == 0 {
            // 1/a_sc grows like sqrt(-eps) far below the spectrum
            let mut lo = -4.0 * target * target - 10.0;
            while f(lo) <= 0.0 {
                lo = 2.0 * lo - 1.0;
            }
            lo
        } else {
            free - 1.0 + POLE_GAP
        };
        (lo, hi)
    } else {
        (free, free + 1.0 - POLE_GAP)
    };
    let root = find_root(f, lo, hi, 1e-14)?;
    Ok(root)
}

/// Even relative solution without normalization.
fn even_profile(epsilon: f64, z: f64) -> f64 {
    let a = kummer_a(epsilon);
    (-0.25 * z * z).exp() * kummer_u(a, 0.5 * z * z).unwrap_or(f64::NAN)
}

/// Normalization of the even relative solution by graded quadrature on
/// `[0, 40]`, doubled by evenness and refined until the estimate settles.
fn normalization(epsilon: f64) -> Result<f64> {
    let mut spec = QuadratureSpec::split_at(0.0, 40.0, &[0.0], 16);
    let mut previous = integrate_real(|z| even_profile(epsilon, z).powi(2), &spec);
    for _ in 0..4 {
        spec = spec.refined();
        let next = integrate_real(|z| even_profile(epsilon, z).powi(2), &spec);
        if !next.is_finite() || next <= 0.0 {
            return Err(Error::Domain(format!("normalization integral failed at eps = {epsilon}")));
        }
        if (next - previous).abs() <= 1e-10 * next {
            return Ok((2.0 * next).sqrt().recip());
        }
        previous = next;
    }
    Err(Error::Domain(format!("normalization did not converge at eps = {epsilon}")))
}

/// A relative eigenstate of the trapped pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapRelativeState {
    pub epsilon: f64,
    pub nu_plus: f64,
    pub nu_minus: f64,
    pub a_sc: Extended,
    pub norm: f64,
    pub kind: StatisticsKind,
}

impl TrapRelativeState {
    pub fn new(kind: StatisticsKind, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::Domain(format!("relative energy {epsilon}")));
        }
        if kummer_a(epsilon) < KUMMER_A_MIN {
            return Err(Error::Domain(format!("relative energy {epsilon} is above the supported range")));
        }
        if kind.is_anyon() && !(0.0..=1.0).contains(&kind.alpha()) {
            return Err(Error::Domain(format!("statistical parameter {} outside [0, 1]", kind.alpha())));
        }
        let nu_plus = 0.5 * epsilon - 0.25;
        Ok(Self {
            epsilon,
            nu_plus,
            nu_minus: nu_plus - 0.5,
            a_sc: asc_from_epsilon(epsilon),
            norm: normalization(epsilon)?,
            kind,
        })
    }

    /// State on `branch` for the given scattering length.
    pub fn from_asc(kind: StatisticsKind, a_sc: Extended, branch: i64) -> Result<Self> {
        Self::new(kind, epsilon_from_asc(a_sc, branch)?)
    }

    pub fn with_kind(&self, kind: StatisticsKind) -> Self {
        Self { kind, ..*self }
    }

    /// Normalized even relative solution at `z`.
    pub fn even_part(&self, z: f64) -> f64 {
        self.norm * even_profile(self.epsilon, z)
    }

    pub fn eval(&self, z: f64) -> Result<Complex64> {
        if z == 0.0 {
            return Err(Error::Domain("relative wavefunction is evaluated off contact only".into()));
        }
        Ok(self.at(z))
    }

    fn at(&self, z: f64) -> Complex64 {
        let s = z.signum();
        let base = match self.kind.family() {
            Family::Plus => self.even_part(z),
            Family::Minus => s * self.even_part(z),
        };
        if self.kind.is_anyon() {
            anyon_factor(self.kind.alpha(), s) * base
        } else {
            Complex64::new(base, 0.0)
        }
    }

    pub fn wavefunction(&self) -> RelativeWavefunction {
        let me = *self;
        let label = format!("trap eps={}", self.epsilon);
        let parent = RelativeWavefunction::new(self.kind.parent(), label, move |z| {
            let v = me.even_part(z);
            Complex64::new(
                match me.kind.family() {
                    Family::Plus => v,
                    Family::Minus => z.signum() * v,
                },
                0.0,
            )
        });
        if self.kind.is_anyon() {
            anyonize(self.kind, &parent).expect("kind checked at construction")
        } else {
            parent
        }
    }
}

pub fn relative_wavefunction(state: &TrapRelativeState, z: f64) -> Result<Complex64> {
    state.eval(z)
}

/// Center-of-mass factor and relative state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapTwoBodyState {
    pub com_level: u32,
    pub relative: TrapRelativeState,
}

impl TrapTwoBodyState {
    pub fn new(com_level: u32, relative: TrapRelativeState) -> Self {
        Self { com_level, relative }
    }

    pub fn energy(&self) -> f64 {
        self.com_level as f64 + 0.5 + self.relative.epsilon
    }

    pub fn pair(&self) -> PairWavefunction {
        PairWavefunction::new(self.relative.wavefunction(), CenterOfMass::Oscillator { level: self.com_level })
    }
}

/// Normalized center-of-mass oscillator state of level `level` (total mass 2).
///
/// Built from the normalized Hermite-function recurrence, which stays finite
/// for levels where `2^M M!` alone would overflow.
pub fn com_wavefunction(level: u32, com: f64) -> f64 {
    let y = SQRT_2 * com;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * y * y).exp();
    for n in 0..level {
        let n = n as f64;
        let next = (2.0 / (n + 1.0)).sqrt() * y * cur - (n / (n + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    2f64.powf(0.25) * cur
}

/// The contact together with its ratios to the scattering length; the ratios
/// stay finite at the non-interacting and hard-core levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapContact {
    pub contact: f64,
    pub over_asc: f64,
    pub over_asc2: f64,
}

pub fn trap_contact(epsilon: f64) -> Result<TrapContact> {
    let a = kummer_a(epsilon);
    let m = normalization(epsilon)?;
    let (r_a, r_half) = (recip_gamma(a), recip_gamma(a + 0.5));
    Ok(TrapContact {
        contact: 2.0 * PI * (m * r_half).powi(2),
        over_asc: 2.0 * SQRT_2 * PI * m * m * r_half * r_a,
        over_asc2: 4.0 * PI * (m * r_a).powi(2),
    })
}

pub fn contact_ho(epsilon: f64) -> Result<f64> {
    Ok(trap_contact(epsilon)?.contact)
}

/// The trap coefficient `(2 eps + 3/4) a_sc^2`, or only its ratio to
/// `a_sc^2` where the scattering length is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "value")]
pub enum K2Coefficient {
    Value(f64),
    RatioToAsc2(f64),
}

pub fn k2_coefficient(epsilon: f64) -> K2Coefficient {
    let ratio = 2.0 * epsilon + 0.75;
    match asc_from_epsilon(epsilon) {
        Extended::Infinite => K2Coefficient::RatioToAsc2(ratio),
        Extended::Finite(a) => K2Coefficient::Value(ratio * a * a),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Domain(format!("statistical parameter {alpha} outside [0, 1]")))
    }
}

/// Large-k expansion for the center-of-mass ground state.
///
/// Written through `C`, `C/a_sc` and `C/a_sc^2`, one expression covers the
/// generic case and both limiting levels: the trap term `4 C K/a_sc^2` equals
/// `4 C (2 eps + 3/4)` and reduces to `(7 + 16n) C` at `eps = 1/2 + 2n`.
pub fn tail_ho(kind: StatisticsKind, epsilon: f64) -> Result<TailCoefficients> {
    check_alpha(kind.alpha())?;
    let tc = trap_contact(epsilon)?;
    let (c, s) = half_angle(kind.alpha());
    let (lead, sub, sign3) = match kind.family() {
        Family::Plus => (s * s, c * c, 1.0),
        Family::Minus => (c * c, s * s, -1.0),
    };
    Ok(TailCoefficients::assemble(
        4.0 * tc.contact * lead,
        sign3 * 4.0 * tc.over_asc * 2.0 * s * c,
        4.0 * tc.over_asc2 * sub,
        4.0 * tc.contact * (2.0 * epsilon + 0.75) * lead,
    ))
}

/// Small-separation form of the bosonic-anyon pair in the center-of-mass
/// ground state at `z1 = z2 + xi`:
///
/// `Psi = N(alpha) exp(i pi alpha sign(xi)/2) [constant + abs_linear |xi|
///  + linear xi + abs_mixed xi|xi| + quadratic xi^2 + quadratic_com xi^2] + O(xi^3)`.
///
/// `quadratic` comes from the relative energy and the Gaussians, while
/// `quadratic_com` carries the `z2^2` dependence of the center-of-mass factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShortDistanceExpansion {
    pub z2: f64,
    pub alpha: f64,
    pub constant: f64,
    pub abs_linear: f64,
    pub linear: f64,
    pub abs_mixed: f64,
    pub quadratic: f64,
    pub quadratic_com: f64,
}

impl ShortDistanceExpansion {
    /// The real bracket, without the exchange phase.
    pub fn series(&self, xi: f64) -> f64 {
        let ax = xi.abs();
        self.constant
            + self.abs_linear * ax
            + self.linear * xi
            + self.abs_mixed * xi * ax
            + (self.quadratic + self.quadratic_com) * xi * xi
    }

    pub fn phase(&self, xi: f64) -> Complex64 {
        anyon_factor(self.alpha, xi.signum())
    }
}

pub fn short_distance_expansion(state: &TrapTwoBodyState, z2: f64) -> Result<ShortDistanceExpansion> {
    if state.com_level != 0 {
        return Err(Error::Unsupported("expansion is derived for the center-of-mass ground state".into()));
    }
    if state.relative.kind.family() != Family::Plus {
        return Err(Error::KindMismatch("expansion is derived for the bosonic family".into()));
    }
    if z2.abs() > 4.0 {
        return Err(Error::Domain(format!("|z2| = {} beyond 4 oscillator lengths", z2.abs())));
    }
    let eps = state.relative.epsilon;
    let a = kummer_a(eps);
    let amp = state.relative.norm * (2.0 * PI).powf(0.25) * (-z2 * z2).exp() * recip_gamma(a + 0.5);
    let inv_a = inverse_asc_from_epsilon(eps)?;
    Ok(ShortDistanceExpansion {
        z2,
        alpha: state.relative.kind.alpha(),
        constant: amp,
        abs_linear: -amp * inv_a,
        linear: -amp * z2,
        abs_mixed: amp * inv_a * z2,
        quadratic: -amp * (0.25 + 0.5 * eps),
        quadratic_com: 0.5 * amp * z2 * z2,
    })
}
