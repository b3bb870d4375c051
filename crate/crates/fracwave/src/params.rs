use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Equation parameters: fractional order `s ∈ (0, 1]` and frequency `ω > 0`.
///
/// With `ω > 0` the symbol `|ξ|^{2s} + ω` of the linear part never vanishes,
/// so the Petviashvili update is well defined on every mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalParams {
    s: f64,
    omega: f64,
}

impl FractionalParams {
    pub fn new(s: f64, omega: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InvalidOrder(s));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidFrequency(omega));
        }
        Ok(Self { s, omega })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Same order, different frequency (used by frequency sweeps).
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.s, omega)
    }
}
