//! Permittivity models on the positive imaginary frequency axis.
//!
//! Causal permittivities are real, positive and monotone along the
//! imaginary axis, so every model here evaluates to a plain `f64`. The
//! Drude model `eps(i xi) = 1 + omega_p^2 / (xi (xi + omega_c))` is the
//! only dispersive one; a constant-permittivity variant exists as a test
//! fixture for the Fresnel formulas.

use crate::error::{Error, Result};

/// Dispersion law of a coating layer, evaluable at imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialModel {
    /// Empty space, `eps = 1`.
    Vacuum,
    /// Nondispersive dielectric with `eps > 0`.
    ConstantEps { eps: f64 },
    /// Lossless-by-default Drude metal. Frequencies in rad/s;
    /// `omega_p = 0` is identical to `Vacuum`.
    Drude { omega_p: f64, omega_c: f64 },
}

impl MaterialModel {
    /// Checks the model parameters without evaluating anything.
    pub fn validate(&self) -> Result<()> {
        match *self {
            MaterialModel::Vacuum => Ok(()),
            MaterialModel::ConstantEps { eps } => {
                if eps > 0.0 && eps.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "ConstantEps.eps must be a finite positive number, got {eps}"
                    )))
                }
            }
            MaterialModel::Drude { omega_p, omega_c } => {
                if !(omega_p >= 0.0 && omega_p.is_finite()) {
                    Err(Error::domain(format!(
                        "Drude.omega_p must be finite and >= 0, got {omega_p}"
                    )))
                } else if !(omega_c >= 0.0 && omega_c.is_finite()) {
                    Err(Error::domain(format!(
                        "Drude.omega_c must be finite and >= 0, got {omega_c}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Permittivity at imaginary frequency `i xi`, with `xi > 0` in rad/s.
    ///
    /// Real and >= 1 for `Vacuum` and `Drude`, equal to `eps` for
    /// `ConstantEps`, and strictly decreasing in `xi` for a Drude model
    /// with `omega_p > 0`.
    pub fn eps_imag_axis(&self, xi: f64) -> Result<f64> {
        self.validate()?;
        if !(xi > 0.0) {
            return Err(Error::domain(format!(
                "eps_imag_axis requires xi > 0, got {xi}"
            )));
        }
        Ok(self.eps_at(xi))
    }

    /// Unchecked evaluation; callers guarantee `xi > 0` and a valid model.
    pub(crate) fn eps_at(&self, xi: f64) -> f64 {
        match *self {
            MaterialModel::Vacuum => 1.0,
            MaterialModel::ConstantEps { eps } => eps,
            MaterialModel::Drude { omega_p, omega_c } => {
                1.0 + omega_p * omega_p / (xi * (xi + omega_c))
            }
        }
    }
}

/// Ideal substrate boundary behind the coating layers.
///
/// `Pmc` is treated as nondispersive and ideal at all frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// Perfect electric conductor (low-impedance wall).
    Pec,
    /// Perfect magnetic conductor (high-impedance wall).
    Pmc,
}
