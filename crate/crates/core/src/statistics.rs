//! Exchange statistics: the exchange phase, anyonic normalization phase,
//! reference scattering functions and the maps between statistics families.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which exchange rule a two-body state obeys.
///
/// `Boson` and `Fermion` behave as the anyonic variants at `alpha = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "alpha")]
pub enum StatisticsKind {
    Boson,
    Fermion,
    BosonicAnyon(f64),
    FermionicAnyon(f64),
}

/// Which exchange family: `Plus` is symmetric-type, `Minus` antisymmetric-type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Plus,
    Minus,
}

impl Family {
    pub fn sign(self) -> f64 {
        match self {
            Family::Plus => 1.0,
            Family::Minus => -1.0,
        }
    }

    pub fn other(self) -> Family {
        match self {
            Family::Plus => Family::Minus,
            Family::Minus => Family::Plus,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Domain(format!("statistical parameter {alpha} outside [0, 1]")))
    }
}

impl StatisticsKind {
    pub fn bosonic_anyon(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(StatisticsKind::BosonicAnyon(alpha))
    }

    pub fn fermionic_anyon(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(StatisticsKind::FermionicAnyon(alpha))
    }

    /// Anyonic kind of the given family.
    pub fn anyon(family: Family, alpha: f64) -> Result<Self> {
        match family {
            Family::Plus => Self::bosonic_anyon(alpha),
            Family::Minus => Self::fermionic_anyon(alpha),
        }
    }

    pub fn alpha(self) -> f64 {
        match self {
            StatisticsKind::Boson | StatisticsKind::Fermion => 0.0,
            StatisticsKind::BosonicAnyon(a) | StatisticsKind::FermionicAnyon(a) => a,
        }
    }

    pub fn family(self) -> Family {
        match self {
            StatisticsKind::Boson | StatisticsKind::BosonicAnyon(_) => Family::Plus,
            StatisticsKind::Fermion | StatisticsKind::FermionicAnyon(_) => Family::Minus,
        }
    }

    pub fn is_anyon(self) -> bool {
        matches!(self, StatisticsKind::BosonicAnyon(_) | StatisticsKind::FermionicAnyon(_))
    }

    /// The boson or fermion kind an anyonic kind is built from.
    pub fn parent(self) -> StatisticsKind {
        match self.family() {
            Family::Plus => StatisticsKind::Boson,
            Family::Minus => StatisticsKind::Fermion,
        }
    }

    /// Same parameter, other family.
    pub fn toggled(self) -> StatisticsKind {
        match self {
            StatisticsKind::Boson => StatisticsKind::Fermion,
            StatisticsKind::Fermion => StatisticsKind::Boson,
            StatisticsKind::BosonicAnyon(a) => StatisticsKind::FermionicAnyon(a),
            StatisticsKind::FermionicAnyon(a) => StatisticsKind::BosonicAnyon(a),
        }
    }

    /// Anyonic view of this kind (`Boson` becomes `BosonicAnyon(0)`).
    pub fn as_anyon(self) -> StatisticsKind {
        match self {
            StatisticsKind::Boson => StatisticsKind::BosonicAnyon(0.0),
            StatisticsKind::Fermion => StatisticsKind::FermionicAnyon(0.0),
            other => other,
        }
    }
}

impl fmt::Display for StatisticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatisticsKind::Boson => write!(f, "boson"),
            StatisticsKind::Fermion => write!(f, "fermion"),
            StatisticsKind::BosonicAnyon(a) => write!(f, "bosonic anyon (alpha={a})"),
            StatisticsKind::FermionicAnyon(a) => write!(f, "fermionic anyon (alpha={a})"),
        }
    }
}

pub(crate) fn sign_of(z: f64) -> Result<f64> {
    if z > 0.0 {
        Ok(1.0)
    } else if z < 0.0 {
        Ok(-1.0)
    } else {
        Err(Error::Domain("sign(z) is undefined at z = 0".into()))
    }
}

/// `exp(-i pi alpha sign z)`. Accepts `alpha` in `[0, 2]` so the shifted
/// parameters `alpha + 1` used by the formal relations stay reachable.
pub fn exchange_phase(alpha: f64, z: f64) -> Result<Complex64> {
    if !(-1.0..=2.0).contains(&alpha) {
        return Err(Error::Domain(format!("exchange phase parameter {alpha} outside [-1, 2]")));
    }
    let s = sign_of(z)?;
    Ok(Complex64::from_polar(1.0, -PI * alpha * s))
}

/// Constant unit phase attached to anyonic states.
pub fn anyon_norm(alpha: f64) -> Complex64 {
    let re = 1.0 - alpha;
    let im = -alpha;
    Complex64::new(re, im) / re.hypot(im)
}

/// `N(alpha) exp(+i pi alpha sign(z) / 2)`, the factor multiplying a parent state.
pub(crate) fn anyon_factor(alpha: f64, s: f64) -> Complex64 {
    anyon_norm(alpha) * Complex64::from_polar(1.0, 0.5 * PI * alpha * s)
}

/// Selects the regular or irregular member of a reference pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    Regular,
    Irregular,
}

/// Free-space reference solutions at wave number `k`; the anyonic rows are
/// the boson or fermion rows dressed by the anyonic factor.
pub fn reference_function(kind: StatisticsKind, which: Which, k: f64, z: f64) -> Result<Complex64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("wave number must be positive, got {k}")));
    }
    let s = sign_of(z)?;
    let (sin, cos) = (k * z).sin_cos();
    let plus = |w: Which| match w {
        Which::Regular => s * sin,
        Which::Irregular => cos,
    };
    let minus = |w: Which| match w {
        Which::Regular => sin,
        Which::Irregular => s * cos,
    };
    let c = (0.5 * PI * kind.alpha()).cos();
    let sn = (0.5 * PI * kind.alpha()).sin();
    let n = anyon_norm(kind.alpha());
    let value = match kind {
        StatisticsKind::Boson => Complex64::new(plus(which), 0.0),
        StatisticsKind::Fermion => Complex64::new(minus(which), 0.0),
        StatisticsKind::BosonicAnyon(_) => n * Complex64::new(c * plus(which), sn * minus(which)),
        StatisticsKind::FermionicAnyon(_) => n * Complex64::new(c * minus(which), sn * plus(which)),
    };
    Ok(value)
}

type Eval = dyn Fn(f64) -> Complex64 + Send + Sync;

/// A relative-coordinate wavefunction together with its exchange kind.
#[derive(Clone)]
pub struct RelativeWavefunction {
    eval: Arc<Eval>,
    kind: StatisticsKind,
    label: String,
}

impl fmt::Debug for RelativeWavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RelativeWavefunction")
            .field("kind", &self.kind)
            .field("label", &self.label)
            .finish()
    }
}

impl RelativeWavefunction {
    /// Wraps an evaluator. The closure is never called at `z = 0`.
    pub fn new(kind: StatisticsKind, label: impl Into<String>, eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            kind,
            label: label.into(),
        }
    }

    pub fn kind(&self) -> StatisticsKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, z: f64) -> Result<Complex64> {
        sign_of(z)?;
        Ok((self.eval)(z))
    }

    /// Unchecked evaluation for quadrature loops that never visit `z = 0`.
    pub fn at(&self, z: f64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Pointwise product with a real function of `z`; keeps kind and label.
    pub fn scaled(&self, factor: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |z| inner(z) * factor(z)),
            kind: self.kind,
            label: self.label.clone(),
        }
    }
}

/// Dresses a boson (fermion) state into a bosonic (fermionic) anyon state.
pub fn anyonize(target: StatisticsKind, base: &RelativeWavefunction) -> Result<RelativeWavefunction> {
    let ok = match (target, base.kind()) {
        (StatisticsKind::BosonicAnyon(_), StatisticsKind::Boson) => true,
        (StatisticsKind::FermionicAnyon(_), StatisticsKind::Fermion) => true,
        _ => false,
    };
    if !ok {
        return Err(Error::KindMismatch(format!("cannot build {target} from {}", base.kind())));
    }
    let alpha = target.alpha();
    check_alpha(alpha)?;
    let inner = base.eval.clone();
    Ok(RelativeWavefunction {
        eval: Arc::new(move |z| anyon_factor(alpha, z.signum()) * inner(z)),
        kind: target,
        label: base.label.clone(),
    })
}

/// Multiplies by `sign(z)` and switches between the two anyon families.
pub fn ba_fa_map(input: &RelativeWavefunction) -> Result<RelativeWavefunction> {
    if !input.kind().is_anyon() {
        return Err(Error::KindMismatch(format!("{} is not an anyonic kind", input.kind())));
    }
    let inner = input.eval.clone();
    Ok(RelativeWavefunction {
        eval: Arc::new(move |z| inner(z) * z.signum()),
        kind: input.kind().toggled(),
        label: input.label.clone(),
    })
}

/// Largest violation of the exchange rule `w(-z) = ±S_alpha(z) w(z)` over the samples.
pub fn exchange_residual(w: &RelativeWavefunction, z_samples: &[f64]) -> Result<f64> {
    let alpha = w.kind().alpha();
    let sign = w.kind().family().sign();
    let mut worst: f64 = 0.0;
    for &z in z_samples {
        let phase = exchange_phase(alpha, z)?;
        let r = (w.at(-z) - phase * w.at(z) * sign).norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Deterministic sample set: log-spaced magnitudes in `[lo, hi]`, both signs.
pub fn symmetric_log_samples(lo: f64, hi: f64, per_side: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    let mut out = Vec::with_capacity(2 * per_side);
    for i in 0..per_side {
        let t = if per_side == 1 { 0.0 } else { i as f64 / (per_side - 1) as f64 };
        let m = (l0 + t * (l1 - l0)).exp();
        out.push(-m);
        out.push(m);
    }
    out
}
