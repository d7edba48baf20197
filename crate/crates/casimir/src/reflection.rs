//! TE/TM reflection coefficients of coated PEC/PMC mirrors, evaluated at
//! imaginary frequency `xi` and Lifshitz wavevector variable `p >= 1`, as
//! seen from the vacuum gap.
//!
//! A stack is resolved by the two-interface recursion from the substrate
//! outward: with `r` the pair accumulated so far and `r_if` the Fresnel
//! pair of the next interface (outer medium -> layer),
//!
//! ```text
//! r' = (r_if + r phi) / (1 + r_if r phi),   phi = exp(-2 (xi/c) s d)
//! ```
//!
//! where `s = sqrt(p^2 - 1 + eps)` is the layer's decay parameter. All
//! quantities are real on the imaginary axis. The sign convention is fixed
//! by the conductor limit: a bare PEC reflects as `(te, tm) = (-1, +1)`,
//! a bare PMC as `(+1, -1)`.

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::materials::{BoundaryKind, MaterialModel};

/// Exponents below this produce a round trip factor of exactly zero.
/// `exp(-700)` is still a normal double; clamping avoids denormals.
const PHI_EXPONENT_FLOOR: f64 = -700.0;

/// A single coating layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    pub material: MaterialModel,
    /// Layer thickness in meters, strictly positive. A zero-thickness
    /// layer must be expressed by omitting it.
    pub thickness: f64,
}

impl Layer {
    pub fn new(material: MaterialModel, thickness: f64) -> Self {
        Layer {
            material,
            thickness,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        if self.thickness > 0.0 && self.thickness.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "Layer.thickness must be finite and > 0, got {}",
                self.thickness
            )))
        }
    }
}

/// One mirror: an ideal substrate plus coating layers listed from the
/// substrate outward toward the gap. No layers means a bare wall.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorStack {
    pub substrate: BoundaryKind,
    pub layers: Vec<Layer>,
}

impl MirrorStack {
    pub fn new(substrate: BoundaryKind, layers: Vec<Layer>) -> Self {
        MirrorStack { substrate, layers }
    }

    pub fn bare(substrate: BoundaryKind) -> Self {
        MirrorStack {
            substrate,
            layers: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.layers.iter().try_for_each(Layer::validate)
    }

    /// Resolves the layer permittivities at one imaginary frequency.
    ///
    /// The returned view evaluates reflection coefficients for any `p`
    /// without touching the material models again, which is what the
    /// pressure integrand does along its inner integral.
    pub fn at_xi(&self, xi: f64) -> Result<StackAtXi> {
        self.validate()?;
        if !(xi > 0.0) {
            return Err(Error::domain(format!("at_xi requires xi > 0, got {xi}")));
        }
        Ok(StackAtXi {
            substrate: self.substrate,
            layers: self
                .layers
                .iter()
                .map(|l| ResolvedLayer {
                    eps: l.material.eps_at(xi),
                    thickness: l.thickness,
                })
                .collect(),
            xi_over_c: xi / SPEED_OF_LIGHT,
        })
    }

    /// Gap-facing reflection pair of the whole stack at `(xi, p)`.
    pub fn reflection(&self, xi: f64, p: f64) -> Result<ReflectionPair> {
        self.at_xi(xi)?.reflection(p)
    }
}

/// TE and TM reflection coefficients of one mirror at a single `(xi, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub te: f64,
    pub tm: f64,
}

/// Lifshitz auxiliary `s = sqrt(p^2 - 1 + eps)`; equals `p` in vacuum.
pub fn s_param(p: f64, eps: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("s_param requires p >= 1, got {p}")));
    }
    if !(eps > 0.0) {
        return Err(Error::domain(format!(
            "s_param requires eps > 0, got {eps}"
        )));
    }
    Ok(s_raw(p, eps))
}

#[inline]
fn s_raw(p: f64, eps: f64) -> f64 {
    (p * p - 1.0 + eps).sqrt()
}

/// Fresnel pair of a single interface crossed from `eps_from` into
/// `eps_to`. In the `eps_to -> inf` limit this tends to the PEC pair
/// `(-1, +1)`.
pub fn fresnel_interface(p: f64, eps_from: f64, eps_to: f64) -> Result<ReflectionPair> {
    let s_from = s_param(p, eps_from)?;
    let s_to = s_param(p, eps_to)?;
    Ok(interface_raw(eps_from, eps_to, s_from, s_to))
}

#[inline]
fn interface_raw(eps_from: f64, eps_to: f64, s_from: f64, s_to: f64) -> ReflectionPair {
    ReflectionPair {
        te: (s_from - s_to) / (s_from + s_to),
        tm: (eps_to * s_from - eps_from * s_to) / (eps_to * s_from + eps_from * s_to),
    }
}

/// Reflection pair of a bare ideal wall, independent of `xi` and `p`.
pub fn boundary_reflection(b: BoundaryKind) -> ReflectionPair {
    match b {
        BoundaryKind::Pec => ReflectionPair { te: -1.0, tm: 1.0 },
        BoundaryKind::Pmc => ReflectionPair { te: 1.0, tm: -1.0 },
    }
}

#[derive(Debug, Clone, Copy)]
struct ResolvedLayer {
    eps: f64,
    thickness: f64,
}

/// A [`MirrorStack`] with permittivities frozen at one imaginary frequency.
#[derive(Debug, Clone)]
pub struct StackAtXi {
    substrate: BoundaryKind,
    layers: Vec<ResolvedLayer>,
    xi_over_c: f64,
}

impl StackAtXi {
    /// Gap-facing reflection pair at wavevector variable `p >= 1`.
    pub fn reflection(&self, p: f64) -> Result<ReflectionPair> {
        if !(p >= 1.0) {
            return Err(Error::domain(format!(
                "stack reflection requires p >= 1, got {p}"
            )));
        }
        Ok(self.reflection_at(p))
    }

    /// Hot-path evaluation; `p >= 1` is guaranteed by the quadrature maps.
    pub(crate) fn reflection_at(&self, p: f64) -> ReflectionPair {
        debug_assert!(p >= 1.0);
        let mut r = boundary_reflection(self.substrate);
        for (i, layer) in self.layers.iter().enumerate() {
            let eps_out = self.layers.get(i + 1).map_or(1.0, |l| l.eps);
            let s_in = s_raw(p, layer.eps);
            let s_out = s_raw(p, eps_out);
            let r_if = interface_raw(eps_out, layer.eps, s_out, s_in);
            let exponent = -2.0 * self.xi_over_c * s_in * layer.thickness;
            let phi = if exponent < PHI_EXPONENT_FLOOR {
                0.0
            } else {
                exponent.exp()
            };
            r = ReflectionPair {
                te: (r_if.te + r.te * phi) / (1.0 + r_if.te * r.te * phi),
                tm: (r_if.tm + r.tm * phi) / (1.0 + r_if.tm * r.tm * phi),
            };
        }
        r
    }
}
