//! Space-time kernels of the three stationary processes and the transition
//! densities they are built from.
//!
//! Each extended kernel is a case split on the sign of t - s. The forward
//! branch (s < t) integrates over a bounded range, the backward branch
//! (s > t) over a semi-infinite one that is cut where the decay envelope
//! drops below 1e-14. The cut point is reported with the value.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{gauss_jacobi_unit, refine_until, QuadratureRule};
use crate::specfun::{airy, bessel_entire_neg, bessel_i_scaled, bessel_series_entire, jv, rgamma};
use crate::statickernels::StaticKernel;
use num_complex::Complex64;

/// -ln(1e-14): envelope level at which semi-infinite integrals are cut.
const TAIL: f64 = 32.3;
const PANEL_ORDER: usize = 16;
const MAX_PANELS: usize = 400_000;
const REFINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ExtendedKernel {
    ExtSine,
    ExtAiry,
    ExtBessel { nu: f64 },
}

/// A kernel value together with the quadrature that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtendedValue {
    pub value: f64,
    /// Where a semi-infinite integral was cut, if one was evaluated.
    pub truncation: Option<f64>,
    pub nodes: usize,
}

impl ExtendedKernel {
    /// The equal-time kernel.
    pub fn static_kernel(&self) -> StaticKernel {
        match *self {
            ExtendedKernel::ExtSine => StaticKernel::Sine,
            ExtendedKernel::ExtAiry => StaticKernel::Airy,
            ExtendedKernel::ExtBessel { nu } => StaticKernel::Bessel { nu },
        }
    }

    pub fn eval(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        Ok(self.eval_detailed(s, x, t, y)?.value)
    }

    pub fn eval_detailed(&self, s: f64, x: f64, t: f64, y: f64) -> Result<ExtendedValue> {
        for time in [s, t] {
            if !(time >= 0.0) || !time.is_finite() {
                return domain(format!("times must be finite and >= 0; got {time}"));
            }
        }
        if s == t {
            let value = self.static_kernel().eval(x, y)?;
            return Ok(ExtendedValue {
                value,
                truncation: None,
                nodes: 0,
            });
        }
        if s < t {
            self.forward_integral(t - s, x, y)
        } else {
            self.backward_integral(s - t, x, y)
        }
    }

    fn check_points(&self, x: f64, y: f64) -> Result<()> {
        // Reuse the static domain rules.
        self.static_kernel().eval(x, x)?;
        self.static_kernel().eval(y, y)?;
        Ok(())
    }

    /// The s < t representation as a function of the lag t - s >= 0. At lag
    /// zero it is an integral formula for the static kernel.
    pub fn forward_integral(&self, lag: f64, x: f64, y: f64) -> Result<ExtendedValue> {
        if !(lag >= 0.0) || !lag.is_finite() {
            return domain(format!("forward lag must be finite and >= 0; got {lag}"));
        }
        self.check_points(x, y)?;
        match *self {
            ExtendedKernel::ExtSine => {
                let d = y - x;
                let width = (PI / (d.abs() + 1.0)).min(4.0 / (lag + 1.0));
                let (value, nodes) = refine_panels(|k| {
                    let rule = QuadratureRule::panels_of_width(0.0, 1.0, width / k, PANEL_ORDER);
                    let v = rule.integrate(|u| (0.5 * u * u * lag).exp() * (u * d).cos());
                    Ok((v / PI, rule.len()))
                })?;
                Ok(ExtendedValue {
                    value,
                    truncation: None,
                    nodes,
                })
            }
            ExtendedKernel::ExtAiry => {
                let lo = x.min(y);
                let mut end = (16.0 - lo).max(0.0);
                if lag > 0.0 {
                    end = end.min(2.0 * (TAIL + 5.0) / lag);
                }
                if end == 0.0 {
                    return Ok(ExtendedValue {
                        value: 0.0,
                        truncation: Some(0.0),
                        nodes: 0,
                    });
                }
                let width = move |u: f64| {
                    let freq = 2.0 * (-(u + lo)).max(0.0).sqrt();
                    (PI / (freq + 1.0)).min(4.0 / lag.max(1e-300))
                };
                let (value, nodes) = refine_panels(|k| {
                    let rule = varying_panels(0.0, end, |u| width(u) / k)?;
                    let v = rule.integrate(|u| {
                        (-0.5 * u * lag).exp() * airy(u + x).ai * airy(u + y).ai
                    });
                    Ok((v, rule.len()))
                })?;
                Ok(ExtendedValue {
                    value,
                    truncation: Some(end),
                    nodes,
                })
            }
            ExtendedKernel::ExtBessel { nu } => {
                let prefactor = if nu == 0.0 { 1.0 } else { (x * y).powf(0.5 * nu) };
                let start = 16 + (2.0 * (x.sqrt() + y.sqrt()) + 2.0 * lag).ceil() as usize;
                let mut used = 0;
                let (value, _) = refine_until(start, 4096, REFINE_TOL, "forward Bessel integral", |n| {
                    let g = gauss_jacobi_unit(n, nu);
                    used = n;
                    Ok(g.nodes
                        .iter()
                        .zip(&g.weights)
                        .map(|(&u, &w)| {
                            w * (2.0 * u * lag).exp()
                                * bessel_entire_neg(nu, u * x)
                                * bessel_entire_neg(nu, u * y)
                        })
                        .sum::<f64>()
                        * prefactor)
                })?;
                Ok(ExtendedValue {
                    value,
                    truncation: None,
                    nodes: used,
                })
            }
        }
    }

    /// The s > t representation as a function of the lag s - t > 0,
    /// including its leading minus sign.
    pub fn backward_integral(&self, lag: f64, x: f64, y: f64) -> Result<ExtendedValue> {
        if !(lag > 0.0) || !lag.is_finite() {
            return Err(Error::Divergence(format!(
                "backward branch needs a positive lag; got {lag}"
            )));
        }
        self.check_points(x, y)?;
        match *self {
            ExtendedKernel::ExtSine => {
                let d = y - x;
                // e^{-u^2 lag / 2} < 1e-14 beyond u_max; integrate in v = u - 1.
                let end = (2.0 * TAIL / lag).sqrt().max(1.0) - 1.0;
                let width = (PI / (d.abs() + 1.0)).min(1.0 / lag.sqrt());
                check_panel_budget(end / width)?;
                let (value, nodes) = refine_panels(|k| {
                    let rule = QuadratureRule::panels_of_width(0.0, end, width / k, PANEL_ORDER);
                    let v = rule.integrate(|v| {
                        let u = v + 1.0;
                        (-0.5 * u * u * lag).exp() * (u * d).cos()
                    });
                    Ok((-v / PI, rule.len()))
                })?;
                Ok(ExtendedValue {
                    value,
                    truncation: Some(end + 1.0),
                    nodes,
                })
            }
            ExtendedKernel::ExtAiry => {
                // u = -v; |Ai| <= 0.54 so the exponential alone sets the cut.
                let lo = x.min(y);
                let end = 2.0 * TAIL / lag;
                let width = move |v: f64| {
                    let freq = 2.0 * (v - lo).max(0.0).sqrt();
                    (PI / (freq + 1.0)).min(4.0 / lag).min(1.0)
                };
                let (value, nodes) = refine_panels(|k| {
                    let rule = varying_panels(0.0, end, |v| width(v) / k)?;
                    let v = rule.integrate(|v| {
                        (-0.5 * v * lag).exp() * airy(x - v).ai * airy(y - v).ai
                    });
                    Ok((-v, rule.len()))
                })?;
                Ok(ExtendedValue {
                    value,
                    truncation: Some(-end),
                    nodes,
                })
            }
            ExtendedKernel::ExtBessel { nu } => {
                let end = (TAIL / (2.0 * lag)).max(1.0);
                if end == 1.0 {
                    return Ok(ExtendedValue {
                        value: 0.0,
                        truncation: Some(end),
                        nodes: 0,
                    });
                }
                let width = (PI / (x.sqrt() + y.sqrt() + 1.0)).min(1.0 / lag).min(1.0);
                check_panel_budget((end - 1.0) / width)?;
                let (value, nodes) = refine_panels(|k| {
                    let rule = QuadratureRule::panels_of_width(1.0, end, width / k, PANEL_ORDER);
                    let v = rule.integrate(|u| {
                        (-2.0 * u * lag).exp()
                            * jv(nu, 2.0 * (u * x).sqrt())
                            * jv(nu, 2.0 * (u * y).sqrt())
                    });
                    Ok((-v, rule.len()))
                })?;
                Ok(ExtendedValue {
                    value,
                    truncation: Some(end),
                    nodes,
                })
            }
        }
    }
}

/// Convenience wrapper for [`ExtendedKernel::eval`].
pub fn eval_extended(kernel: &ExtendedKernel, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
    kernel.eval(s, x, t, y)
}

fn check_panel_budget(panels: f64) -> Result<()> {
    if !(panels <= MAX_PANELS as f64) {
        return Err(Error::Divergence(format!(
            "truncated range needs {panels:.0} panels"
        )));
    }
    Ok(())
}

/// Composite Gauss-Legendre rule on [a, b] whose panel width follows the
/// local scale `width(u)` (evaluated at both ends of each panel).
fn varying_panels(a: f64, b: f64, width: impl Fn(f64) -> f64) -> Result<QuadratureRule> {
    let mut rule = QuadratureRule::default();
    let mut lo = a;
    let mut count = 0;
    while lo < b {
        let h0 = width(lo);
        let h = h0.min(width((lo + h0).min(b)));
        let hi = (lo + h).min(b);
        rule.extend(QuadratureRule::gauss_legendre(PANEL_ORDER, lo, hi));
        lo = hi;
        count += 1;
        if count > MAX_PANELS {
            return Err(Error::Divergence(format!(
                "more than {MAX_PANELS} panels needed on [{a}, {b}]"
            )));
        }
    }
    Ok(rule)
}

/// Halves panel widths until two successive values agree.
fn refine_panels(mut eval: impl FnMut(f64) -> Result<(f64, usize)>) -> Result<(f64, usize)> {
    let mut nodes = 0;
    let (value, _) = refine_until(1, 32, REFINE_TOL, "panel quadrature", |k| {
        let (v, n) = eval(k as f64)?;
        nodes = n;
        Ok(v)
    })?;
    Ok((value, nodes))
}

// ---------------------------------------------------------------------------
// Transition densities

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransitionDensity {
    /// Brownian motion, possibly run backward in time.
    Heat,
    /// Brownian motion plus t^2/4.
    Drifted,
    /// Squared Bessel process of dimension 2(nu + 1).
    SquaredBessel { nu: f64 },
}

/// A transition density, or the point mass it degenerates to at equal
/// times. The point mass is never turned into a number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TransitionValue {
    Density(f64),
    PointMass { at: f64 },
}

impl TransitionValue {
    pub fn density(self) -> Result<f64> {
        match self {
            TransitionValue::Density(v) => Ok(v),
            TransitionValue::PointMass { at } => Err(Error::Singularity(format!(
                "point mass at {at} has no density value"
            ))),
        }
    }
}

/// Gaussian kernel with signed time: (2 pi |t|)^{-1/2} exp(-d^2 / (2t)).
pub fn heat_kernel(t: f64, d: f64) -> f64 {
    (-(d * d) / (2.0 * t)).exp() / (2.0 * PI * t.abs()).sqrt()
}

/// Complex-argument version of [`heat_kernel`].
pub fn heat_kernel_complex(t: f64, d: Complex64) -> Complex64 {
    (-(d * d) / (2.0 * t)).exp() / (2.0 * PI * t.abs()).sqrt()
}

/// Density at time t of B(t) + t^2/4 started at time s, as a function of
/// the displacement d.
pub fn drifted_kernel(s: f64, t: f64, d: f64) -> f64 {
    heat_kernel(t - s, d - 0.25 * (t * t - s * s))
}

/// Squared Bessel density of moving from `from` to `to` in signed time t,
/// for real nonnegative positions.
pub fn squared_bessel_kernel(nu: f64, t: f64, to: f64, from: f64) -> Result<f64> {
    if !(nu > -1.0) {
        return domain(format!("index nu = {nu} must exceed -1"));
    }
    if !(to >= 0.0) || !(from >= 0.0) {
        return domain("squared Bessel density needs nonnegative positions");
    }
    if t == 0.0 {
        return Err(Error::Singularity("equal times give a point mass".into()));
    }
    let at = t.abs();
    if to == 0.0 && nu < 0.0 {
        return Err(Error::Overflow(
            "density with nu < 0 is unbounded at the origin".into(),
        ));
    }
    let from = if from < 1e-12 { 0.0 } else { from };
    let z = (from * to).sqrt() / at;
    let value = if z < 25.0 {
        // Entire form: (1/2|t|) (y/2|t|)^nu e^{-(x+y)/2t} S(xy/4t^2).
        let power = if nu == 0.0 { 1.0 } else { (to / (2.0 * at)).powf(nu) };
        let s = if z == 0.0 {
            rgamma(nu + 1.0)
        } else {
            bessel_series_entire(nu, Complex64::new(0.25 * z * z, 0.0)).re
        };
        power * (-(from + to) / (2.0 * t)).exp() * s / (2.0 * at)
    } else {
        let ratio = (to / from).powf(0.5 * nu);
        ratio * (z - (from + to) / (2.0 * t)).exp() * bessel_i_scaled(nu, z) / (2.0 * at)
    };
    if !value.is_finite() {
        return Err(Error::Overflow("squared Bessel density overflowed".into()));
    }
    Ok(value)
}

/// Transition density from (s, from) to (t, to).
pub fn eval_transition(
    td: &TransitionDensity,
    s: f64,
    t: f64,
    from: f64,
    to: f64,
) -> Result<TransitionValue> {
    if !s.is_finite() || !t.is_finite() || !from.is_finite() || !to.is_finite() {
        return domain("transition density arguments must be finite");
    }
    if s == t {
        if let TransitionDensity::SquaredBessel { .. } = td {
            if from < 0.0 || to < 0.0 {
                return domain("squared Bessel density needs nonnegative positions");
            }
        }
        return Ok(TransitionValue::PointMass { at: from });
    }
    let v = match *td {
        TransitionDensity::Heat => heat_kernel(t - s, to - from),
        TransitionDensity::Drifted => drifted_kernel(s, t, to - from),
        TransitionDensity::SquaredBessel { nu } => squared_bessel_kernel(nu, t - s, to, from)?,
    };
    Ok(TransitionValue::Density(v))
}
