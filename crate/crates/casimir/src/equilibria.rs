//! Zero-pressure equilibria as a function of the gap: scanning, bracket
//! refinement and mechanical stability classification.
//!
//! The scan grid is log-spaced because root locations move over decades
//! as the coating parameters change. Refinement is plain bisection (in
//! log space): each pressure evaluation is expensive but its sign is
//! reliable, and the quadrature absolute tolerance is raised near roots
//! where the pressure passes through zero and relative control loses
//! meaning.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lifshitz::{pressure, CavityConfig, PressureResult, QuadratureSettings};

/// Mechanical character of a zero-pressure separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    /// Repulsive at smaller gaps, attractive at larger gaps: the plate is
    /// pushed back toward the equilibrium (`dP/dl < 0`).
    Stable,
    /// The pressure drives the plate away from the equilibrium
    /// (`dP/dl > 0`).
    Unstable,
}

/// A refined zero-pressure crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    /// Separation of the crossing, m.
    pub gap: f64,
    pub stability: Stability,
    /// Numerical `dP/dl` at the root, Pa/m.
    pub pressure_slope: f64,
    /// Scan interval that contained the sign change.
    pub bracket: (f64, f64),
}

/// Relative gap resolution of the bisection refinement.
const GAP_RESOLUTION: f64 = 1e-4;

/// Central-difference pressure slope `dP/dl` at the gap of `cfg`.
///
/// The quadrature tolerance is tightened automatically until the
/// propagated integration noise stays below 10% of the slope estimate
/// (up to three passes).
pub fn pressure_slope(
    cfg: &CavityConfig,
    q: &QuadratureSettings,
    rel_step: f64,
) -> Result<f64> {
    if !(rel_step > 0.0 && rel_step < 0.1) {
        return Err(Error::domain(format!(
            "pressure_slope requires 0 < rel_step < 0.1, got {rel_step}"
        )));
    }
    cfg.validate()?;
    q.validate()?;

    let gap = cfg.gap;
    let dl = gap * rel_step;
    let mut settings = *q;
    let mut slope = 0.0;
    for _ in 0..3 {
        let hi = pressure(&cfg.with_gap(gap + dl), &settings)?;
        let lo = pressure(&cfg.with_gap(gap - dl), &settings)?;
        slope = (hi.total - lo.total) / (2.0 * dl);
        let noise = (hi.error_estimate + lo.error_estimate) / (2.0 * dl);
        if noise <= 0.1 * slope.abs() {
            return Ok(slope);
        }
        // demand per-evaluation error of 0.04 |slope| dl so the
        // difference noise lands near 4% of the estimate
        let want = (0.04 * slope.abs() * dl).max(f64::MIN_POSITIVE);
        settings.abs_tol = settings.abs_tol.min(want);
        settings.rel_tol = settings
            .rel_tol
            .min(want / hi.total.abs().max(lo.total.abs()).max(f64::MIN_POSITIVE))
            .max(1e-14);
    }
    Ok(slope)
}

/// Consecutive sample pairs whose pressures differ in sign.
///
/// `samples` are `(gap, total pressure)` tuples in ascending gap order.
pub fn find_sign_changes(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    samples
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .collect()
}

/// Refines one sign-change bracket to a zero-pressure point.
///
/// Bisection runs to a relative gap resolution of 1e-4; the slope at the
/// root then decides the stability label.
pub fn refine_equilibrium(
    cfg_template: &CavityConfig,
    bracket: (f64, f64),
    q: &QuadratureSettings,
) -> Result<EquilibriumPoint> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::domain(format!(
            "refine_equilibrium requires 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    cfg_template.validate()?;
    q.validate()?;

    let p_lo = pressure(&cfg_template.with_gap(lo), q)?;
    let p_hi = pressure(&cfg_template.with_gap(hi), q)?;
    if p_lo.total.signum() == p_hi.total.signum() {
        return Err(Error::domain(format!(
            "bracket ({lo}, {hi}) does not straddle a sign change: \
             P(lo) = {:e}, P(hi) = {:e}",
            p_lo.total, p_hi.total
        )));
    }

    // near the root |P| -> 0, so relative control is vacuous: raise the
    // absolute floor to a fraction of the bracket-edge pressure scale
    let edge_scale = p_lo.total.abs().min(p_hi.total.abs());
    let refined_q = QuadratureSettings {
        abs_tol: q.abs_tol.max(1e-3 * q.rel_tol * edge_scale),
        ..*q
    };

    let sign_lo = p_lo.total.signum();
    let (mut glo, mut ghi) = (lo, hi);
    for _ in 0..200 {
        let mid = (glo * ghi).sqrt();
        if ghi - glo <= GAP_RESOLUTION * mid {
            break;
        }
        let pm = pressure(&cfg_template.with_gap(mid), &refined_q)?;
        if pm.total.signum() == sign_lo {
            glo = mid;
        } else {
            ghi = mid;
        }
    }
    let root = (glo * ghi).sqrt();

    let slope = pressure_slope(&cfg_template.with_gap(root), &refined_q, 1e-3)?;
    Ok(EquilibriumPoint {
        gap: root,
        stability: if slope < 0.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        },
        pressure_slope: slope,
        bracket,
    })
}

/// Pressure on a log-spaced gap grid; the building block of
/// [`scan_equilibria`] exposed for callers that also want the curve.
///
/// Grid points are evaluated in parallel; the result order and values are
/// independent of the thread count.
pub fn scan_pressure_curve(
    cfg_template: &CavityConfig,
    gap_min: f64,
    gap_max: f64,
    n_scan: usize,
    q: &QuadratureSettings,
) -> Result<Vec<(f64, PressureResult)>> {
    if !(gap_min > 0.0 && gap_min < gap_max && gap_max.is_finite()) {
        return Err(Error::domain(format!(
            "scan requires 0 < gap_min < gap_max, got ({gap_min}, {gap_max})"
        )));
    }
    if n_scan < 8 {
        return Err(Error::domain(format!(
            "scan requires n_scan >= 8, got {n_scan}"
        )));
    }
    cfg_template.validate()?;
    q.validate()?;

    let gaps = log_spaced(gap_min, gap_max, n_scan);
    let results: Vec<Result<PressureResult>> = gaps
        .par_iter()
        .map(|&g| pressure(&cfg_template.with_gap(g), q))
        .collect();
    gaps.into_iter()
        .zip(results)
        .map(|(g, r)| r.map(|p| (g, p)))
        .collect()
}

/// Locates and classifies every zero-pressure crossing of the cavity
/// pressure over `[gap_min, gap_max]`.
///
/// Returns the refined points sorted by gap; an empty list (not an
/// error) when the pressure never changes sign on the scan grid. Roots
/// closer together than the scan resolution are reported as one.
pub fn scan_equilibria(
    cfg_template: &CavityConfig,
    gap_min: f64,
    gap_max: f64,
    n_scan: usize,
    q: &QuadratureSettings,
) -> Result<Vec<EquilibriumPoint>> {
    let curve = scan_pressure_curve(cfg_template, gap_min, gap_max, n_scan, q)?;
    let samples: Vec<(f64, f64)> = curve.iter().map(|(g, p)| (*g, p.total)).collect();
    find_sign_changes(&samples)
        .into_iter()
        .map(|bracket| refine_equilibrium(cfg_template, bracket, q))
        .collect()
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln();
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo * (ratio * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::BoundaryKind;
    use crate::reflection::MirrorStack;
    use approx::assert_relative_eq;

    fn ideal(left: BoundaryKind, right: BoundaryKind, gap: f64) -> CavityConfig {
        CavityConfig::new(MirrorStack::bare(left), MirrorStack::bare(right), gap)
    }

    #[test]
    fn slope_of_ideal_attraction() {
        // d/dl of -C l^-4 is +4 C l^-5: at 1 um this is +5.2005e3 Pa/m
        let cfg = ideal(BoundaryKind::Pec, BoundaryKind::Pec, 1e-6);
        let s = pressure_slope(&cfg, &QuadratureSettings::default(), 1e-3).unwrap();
        assert_relative_eq!(s, 5.2005e3, max_relative = 1e-3);
    }

    #[test]
    fn slope_of_boyer_repulsion() {
        let cfg = ideal(BoundaryKind::Pec, BoundaryKind::Pmc, 1e-6);
        let s = pressure_slope(&cfg, &QuadratureSettings::default(), 1e-3).unwrap();
        assert_relative_eq!(s, -7.0 / 8.0 * 5.2005e3, max_relative = 1e-3);
    }

    #[test]
    fn slope_converges_in_step_size() {
        let cfg = ideal(BoundaryKind::Pec, BoundaryKind::Pec, 1e-6);
        let q = QuadratureSettings::default();
        let a = pressure_slope(&cfg, &q, 1e-3).unwrap();
        let b = pressure_slope(&cfg, &q, 5e-4).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-2);
    }

    #[test]
    fn slope_rejects_bad_step() {
        let cfg = ideal(BoundaryKind::Pec, BoundaryKind::Pec, 1e-6);
        let q = QuadratureSettings::default();
        assert!(pressure_slope(&cfg, &q, 0.0).is_err());
        assert!(pressure_slope(&cfg, &q, 0.2).is_err());
    }

    #[test]
    fn purely_attractive_cavity_has_no_equilibria() {
        let cfg = ideal(BoundaryKind::Pec, BoundaryKind::Pec, 1e-6);
        let pts =
            scan_equilibria(&cfg, 0.1e-6, 5e-6, 12, &QuadratureSettings::default()).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn purely_repulsive_cavity_has_no_equilibria() {
        let cfg = ideal(BoundaryKind::Pec, BoundaryKind::Pmc, 1e-6);
        let pts =
            scan_equilibria(&cfg, 0.1e-6, 5e-6, 12, &QuadratureSettings::default()).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn sign_change_detection() {
        let samples = [(1.0, -2.0), (2.0, -0.5), (3.0, 0.7), (4.0, 0.1), (5.0, -1.0)];
        let brackets = find_sign_changes(&samples);
        assert_eq!(brackets, vec![(2.0, 3.0), (4.0, 5.0)]);
    }

    #[test]
    fn refine_rejects_non_straddling_bracket() {
        let cfg = ideal(BoundaryKind::Pec, BoundaryKind::Pec, 1e-6);
        let err = refine_equilibrium(&cfg, (0.5e-6, 2e-6), &QuadratureSettings::default())
            .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn scan_validates_inputs() {
        let cfg = ideal(BoundaryKind::Pec, BoundaryKind::Pec, 1e-6);
        let q = QuadratureSettings::default();
        assert!(scan_equilibria(&cfg, 2e-6, 1e-6, 12, &q).is_err());
        assert!(scan_equilibria(&cfg, 0.0, 1e-6, 12, &q).is_err());
        assert!(scan_equilibria(&cfg, 0.1e-6, 1e-6, 7, &q).is_err());
    }

    #[test]
    fn log_spacing_hits_both_ends() {
        let g = log_spaced(1e-7, 5e-6, 20);
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 1e-7);
        assert_eq!(g[19], 5e-6);
        for w in g.windows(2) {
            assert!(w[1] > w[0]);
        }
    }
}
