//! One-dimensional quadrature building blocks.
//!
//! [`adaptive_noisy`] is an adaptive Gauss-Kronrod (7-15) integrator whose
//! integrand may carry a known pointwise error bound; the bound is folded
//! into the interval error estimates so that nested integration can treat
//! an inner integral as a noisy function. Intervals whose discretization
//! error has dropped below their noise floor are frozen instead of being
//! split further.
//!
//! [`tanh_sinh_unit`] produces fixed double-exponential grids on (0, 1)
//! used by the brute-force pressure oracle. Nodes carry their distance to
//! the nearer endpoint so that endpoint-sensitive changes of variable can
//! be evaluated without cancellation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Outcome of a one-dimensional integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    /// Estimate of the integral.
    pub value: f64,
    /// Estimated absolute error, including propagated integrand noise.
    pub error: f64,
    /// Number of integrand evaluations.
    pub evals: usize,
    /// Whether `error <= max(abs_tol, rel_tol * |value|)` was reached.
    pub converged: bool,
}

// 15-point Kronrod abscissae (positive half, descending; last entry is the
// center) with the embedded 7-point Gauss rule on the odd indices.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    /// Gauss-Kronrod discrepancy estimate (refinable by splitting).
    err: f64,
    /// Quadrature-weighted integrand noise (not refinable).
    noise: f64,
}

impl Interval {
    fn refinable(&self) -> bool {
        self.err > self.noise && (self.b - self.a) > 1e-14 * (self.a.abs() + self.b.abs())
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// QUADPACK-style smoothing of the raw `|K15 - G7|` difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Interval
where
    F: FnMut(f64) -> (f64, f64),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let (fc, nc) = f(center);
    let mut res_k = WGK[7] * fc;
    let mut res_g = WG[3] * fc;
    let mut res_abs = WGK[7] * fc.abs();
    let mut noise = WGK[7] * nc;
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, n1) = f(center - dx);
        let (f2, n2) = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        noise += WGK[j] * (n1 + n2);
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let habs = half.abs();
    Interval {
        a,
        b,
        value: res_k * half,
        err: rescale_error((res_k - res_g) * half, res_abs * habs, res_asc * habs),
        noise: noise * habs,
    }
}

/// Adaptively integrates `f` over `[a, b]`.
///
/// `f` returns `(value, noise)` where `noise` bounds the absolute error of
/// `value`. Refinement stops per interval once the discretization error is
/// below the accumulated noise, and globally once the combined estimate
/// satisfies `max(abs_tol, rel_tol * |integral|)` or `max_evals` is spent.
pub fn adaptive_noisy<F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_evals: usize,
) -> QuadResult
where
    F: FnMut(f64) -> (f64, f64),
{
    let mut heap: BinaryHeap<Interval> = BinaryHeap::new();
    let mut frozen: Vec<Interval> = Vec::new();
    let mut evals = 15usize;
    heap.push(gk15(&mut f, a, b));

    let mut sum_value: f64 = heap.peek().map_or(0.0, |i| i.value);
    let mut sum_err: f64 = heap.peek().map_or(0.0, |i| i.err);
    let mut sum_noise: f64 = heap.peek().map_or(0.0, |i| i.noise);

    loop {
        let tol = abs_tol.max(rel_tol * sum_value.abs());
        if sum_err + sum_noise <= tol {
            break;
        }
        if evals + 30 > max_evals {
            break;
        }
        let Some(top) = heap.pop() else { break };
        if !top.refinable() {
            frozen.push(top);
            continue;
        }
        let mid = 0.5 * (top.a + top.b);
        if !(top.a < mid && mid < top.b) {
            frozen.push(top);
            continue;
        }
        sum_value -= top.value;
        sum_err -= top.err;
        sum_noise -= top.noise;
        for half in [gk15(&mut f, top.a, mid), gk15(&mut f, mid, top.b)] {
            sum_value += half.value;
            sum_err += half.err;
            sum_noise += half.noise;
            heap.push(half);
        }
        evals += 30;
    }

    // Fresh final sums; the incremental ones accumulate cancellation.
    frozen.extend(heap.into_vec());
    let value: f64 = frozen.iter().map(|i| i.value).sum();
    let error: f64 = frozen.iter().map(|i| i.err + i.noise).sum();
    QuadResult {
        value,
        error,
        evals,
        converged: error <= abs_tol.max(rel_tol * value.abs()),
    }
}

/// [`adaptive_noisy`] for exact integrands.
pub fn adaptive<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_evals: usize) -> QuadResult
where
    F: FnMut(f64) -> f64,
{
    adaptive_noisy(|x| (f(x), 0.0), a, b, abs_tol, rel_tol, max_evals)
}

/// A tanh-sinh node on the open unit interval.
#[derive(Debug, Clone, Copy)]
pub struct TanhSinhNode {
    /// Node position in (0, 1).
    pub x: f64,
    /// `1 - x`, computed without cancellation.
    pub one_minus_x: f64,
    /// Quadrature weight.
    pub weight: f64,
}

/// Fixed `n`-point tanh-sinh rule for integrals over (0, 1).
///
/// The node layout is symmetric and clipped where the distance to the
/// nearer endpoint falls below 1e-15, which keeps downstream changes of
/// variable finite while leaving the truncation error far below the
/// discretization error for any practical `n`.
pub fn tanh_sinh_unit(n: usize) -> Vec<TanhSinhNode> {
    assert!(n >= 2, "tanh-sinh rule needs at least 2 nodes");
    const DELTA_MIN: f64 = 1e-15;
    let a_max = 0.5 * (1.0 / DELTA_MIN - 1.0).ln();
    let t_max = (2.0 * a_max / PI).asinh();
    let h = 2.0 * t_max / (n - 1) as f64;

    (0..n)
        .map(|k| {
            let t = -t_max + k as f64 * h;
            let a = 0.5 * PI * t.sinh();
            // distance to the nearer endpoint: (1 - |tanh a|) / 2
            let delta = 1.0 / (1.0 + (2.0 * a.abs()).exp());
            let weight = 0.25 * h * PI * t.cosh() / (a.cosh() * a.cosh());
            let (x, one_minus_x) = if a < 0.0 {
                (delta, 1.0 - delta)
            } else {
                (1.0 - delta, delta)
            };
            TanhSinhNode {
                x,
                one_minus_x,
                weight,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_component_is_exact_on_low_degree_polynomials() {
        // catches typos in the embedded node/weight tables: G7 is exact
        // through degree 13, K15 through degree 22
        for k in 0..=13u32 {
            let exact = 1.0 / (k as f64 + 1.0);
            let r = adaptive(|x| x.powi(k as i32), 0.0, 1.0, 1e-14, 1e-14, 15);
            assert_relative_eq!(r.value, exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_integrable_endpoint_singularity() {
        // int_0^1 ln(x)^2 dx = 2
        let r = adaptive(|x| x.ln().powi(2), 0.0, 1.0, 1e-10, 1e-10, 200_000);
        assert!(r.converged);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn adaptive_oscillatory() {
        let r = adaptive(|x| (40.0 * x).sin(), 0.0, 1.0, 1e-12, 1e-12, 100_000);
        let exact = (1.0 - (40.0f64).cos()) / 40.0;
        assert!(r.converged);
        assert_relative_eq!(r.value, exact, max_relative = 1e-10);
    }

    #[test]
    fn noise_floor_stops_refinement() {
        // a constant function reported with large noise: the integrator
        // must not burn the whole budget trying to beat the noise
        let mut count = 0usize;
        let r = adaptive_noisy(
            |_| {
                count += 1;
                (1.0, 1e-3)
            },
            0.0,
            1.0,
            1e-12,
            1e-12,
            1_000_000,
        );
        assert!(!r.converged);
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.error >= 1e-3);
        assert!(count < 10_000, "refined past the noise floor: {count} evals");
    }

    #[test]
    fn noisy_error_bounds_hold() {
        let r = adaptive_noisy(|x: f64| (x.exp(), 1e-9), 0.0, 1.0, 1e-6, 1e-12, 100_000);
        let exact = 1.0f64.exp() - 1.0;
        assert!((r.value - exact).abs() <= r.error);
        assert!(r.error >= 1e-9); // noise cannot be estimated away
    }

    #[test]
    fn tanh_sinh_weights_sum_to_one() {
        for n in [16, 64, 256] {
            let nodes = tanh_sinh_unit(n);
            let total: f64 = nodes.iter().map(|p| p.weight).sum();
            assert_relative_eq!(total, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn tanh_sinh_integrates_log_singularity() {
        // int_0^1 ln(1/x) dx = 1, singular derivative at 0
        let nodes = tanh_sinh_unit(64);
        let total: f64 = nodes.iter().map(|p| p.weight * -p.x.ln()).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_distances_are_consistent() {
        for node in tanh_sinh_unit(128) {
            assert!(node.x > 0.0 && node.x < 1.0);
            assert!(node.one_minus_x > 0.0 && node.one_minus_x < 1.0);
            let direct = 1.0 - node.x;
            assert!((node.one_minus_x - direct).abs() <= 1e-15);
        }
    }
}
