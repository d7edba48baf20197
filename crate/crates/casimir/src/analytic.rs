//! Closed-form pressures of ideal two-mirror cavities.
//!
//! These are the asymptote lines of every coated-cavity sweep and the
//! primary oracles for the integrator: like walls attract with the ideal
//! conductor pressure, unlike (low vs high impedance) walls repel with
//! 7/8 of its magnitude.

use std::f64::consts::PI;

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// The three bare-wall cavity combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdealCavityKind {
    PecPec,
    PmcPmc,
    PecPmc,
}

/// Closed-form pressure in Pa of an ideal cavity at separation `gap`.
///
/// `PecPec` and `PmcPmc` give `-pi^2 hbar c / (240 gap^4)`; `PecPmc`
/// gives `+7/8` of that magnitude.
pub fn ideal_pressure(kind: IdealCavityKind, gap: f64) -> Result<f64> {
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(Error::domain(format!(
            "ideal_pressure requires gap > 0, got {gap}"
        )));
    }
    let base = -PI * PI * HBAR * SPEED_OF_LIGHT / (240.0 * gap.powi(4));
    Ok(match kind {
        IdealCavityKind::PecPec | IdealCavityKind::PmcPmc => base,
        IdealCavityKind::PecPmc => -7.0 / 8.0 * base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent derivation: reducing the ideal-mirror double integral
    /// termwise gives P = -(3 hbar c / 8 pi^2 l^4) * sum_n D^n / n^4 with
    /// D = +1 (like walls) or D = -1 (unlike walls). Summing numerically
    /// avoids trusting the printed closed forms.
    fn series_pressure(d_sign: f64, gap: f64) -> f64 {
        let mut s = 0.0;
        for n in 1..200_000u64 {
            s += d_sign.powi(n as i32) / (n as f64).powi(4);
        }
        -3.0 * HBAR * SPEED_OF_LIGHT / (8.0 * PI * PI * gap.powi(4)) * s
    }

    #[test]
    fn closed_form_matches_series_oracle() {
        for gap in [0.25e-6, 1e-6, 3e-6] {
            let oracle = series_pressure(1.0, gap);
            let v = ideal_pressure(IdealCavityKind::PecPec, gap).unwrap();
            assert_relative_eq!(v, oracle, max_relative = 1e-12);
        }
    }

    #[test]
    fn boyer_factor_matches_alternating_series() {
        // sum (-1)^(n+1) / n^4 = 7/8 zeta(4), checked numerically
        let gap = 1e-6;
        let oracle = series_pressure(-1.0, gap);
        let v = ideal_pressure(IdealCavityKind::PecPmc, gap).unwrap();
        assert_relative_eq!(v, oracle, max_relative = 1e-12);
        assert!(v > 0.0);
    }

    #[test]
    fn reference_values_at_one_micron() {
        let pec = ideal_pressure(IdealCavityKind::PecPec, 1e-6).unwrap();
        assert_relative_eq!(pec, -1.3001e-3, max_relative = 1e-4);
        let mixed = ideal_pressure(IdealCavityKind::PecPmc, 1e-6).unwrap();
        assert_relative_eq!(mixed, 1.1376e-3, max_relative = 1e-4);
    }

    #[test]
    fn inverse_fourth_power_scaling() {
        let p1 = ideal_pressure(IdealCavityKind::PecPec, 1e-6).unwrap();
        let p2 = ideal_pressure(IdealCavityKind::PecPec, 2e-6).unwrap();
        assert_relative_eq!(p2, p1 / 16.0, max_relative = 1e-12);
        assert_relative_eq!(p2, -8.1258e-5, max_relative = 1e-4);
    }

    #[test]
    fn pec_and_pmc_pairs_are_identical() {
        for gap in [0.1e-6, 1e-6, 10e-6] {
            assert_eq!(
                ideal_pressure(IdealCavityKind::PecPec, gap).unwrap(),
                ideal_pressure(IdealCavityKind::PmcPmc, gap).unwrap()
            );
        }
    }

    #[test]
    fn rejects_nonpositive_gap() {
        assert!(ideal_pressure(IdealCavityKind::PecPec, 0.0).is_err());
        assert!(ideal_pressure(IdealCavityKind::PecPec, -1e-6).is_err());
        assert!(ideal_pressure(IdealCavityKind::PecPec, f64::INFINITY).is_err());
    }
}
