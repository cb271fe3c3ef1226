//! Two-particle wavefunctions that factor into center-of-mass and relative parts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::harmonic::com_wavefunction;
use crate::statistics::{RelativeWavefunction, StatisticsKind};

/// Center-of-mass factor of a pair state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CenterOfMass {
    /// Zero total momentum in a box of the given length, `1/sqrt(L)` inside.
    Box { length: f64 },
    /// Trap level `M` in oscillator units.
    Oscillator { level: u32 },
}

impl CenterOfMass {
    pub fn eval(&self, com: f64) -> f64 {
        match *self {
            CenterOfMass::Box { length } => {
                if com.abs() <= 0.5 * length {
                    length.sqrt().recip()
                } else {
                    0.0
                }
            }
            CenterOfMass::Oscillator { level } => com_wavefunction(level, com),
        }
    }
}

/// `Psi(z1, z2) = Phi((z1 + z2) / 2) psi(z1 - z2)`.
#[derive(Debug, Clone)]
pub struct PairWavefunction {
    pub relative: RelativeWavefunction,
    pub com: CenterOfMass,
}

impl PairWavefunction {
    pub fn new(relative: RelativeWavefunction, com: CenterOfMass) -> Self {
        Self { relative, com }
    }

    pub fn kind(&self) -> StatisticsKind {
        self.relative.kind()
    }

    /// Unchecked at coincidence: callers keep `z1 != z2`.
    pub fn eval(&self, z1: f64, z2: f64) -> Complex64 {
        self.relative.at(z1 - z2) * self.com.eval(0.5 * (z1 + z2))
    }
}
