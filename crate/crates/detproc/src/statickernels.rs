//! Equal-time correlation kernels and determinantal correlation functions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::QuadratureRule;
use crate::specfun::{airy, hermite_functions, jv, laguerre_functions, rgamma};

/// Largest coordinate at which the Bessel kernel is summed as a double
/// power series.
pub const BESSEL_SERIES_MAX: f64 = 9.0;

/// Static kernel families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StaticKernel {
    Sine,
    Airy,
    Bessel { nu: f64 },
    /// Finite-N Hermite kernel, bulk-scaled by sqrt(2N).
    Hermite { n: usize },
    /// Finite-N Laguerre kernel, scaled by 2N.
    Laguerre { n: usize, nu: f64 },
}

/// Below this separation the difference quotient is replaced by its
/// expansion about the midpoint.
pub fn near_diagonal_threshold(x: f64, y: f64) -> f64 {
    1e-4 * (1.0 + x.abs().max(y.abs()))
}

impl StaticKernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StaticKernel::Bessel { nu } | StaticKernel::Laguerre { nu, .. } if !(nu > -1.0) => {
                domain(format!("index nu = {nu} must exceed -1"))
            }
            StaticKernel::Hermite { n: 0 } | StaticKernel::Laguerre { n: 0, .. } => {
                domain("finite-N kernels need N >= 1")
            }
            _ => Ok(()),
        }
    }

    /// True for the kernels living on [0, inf).
    pub fn half_line(&self) -> bool {
        matches!(self, StaticKernel::Bessel { .. } | StaticKernel::Laguerre { .. })
    }

    pub fn finite_n(&self) -> Option<usize> {
        match *self {
            StaticKernel::Hermite { n } | StaticKernel::Laguerre { n, .. } => Some(n),
            _ => None,
        }
    }

    fn check_point(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return domain("kernel arguments must be finite");
        }
        if self.half_line() {
            if x < 0.0 {
                return domain(format!("{self:?} is defined on [0, inf); got {x}"));
            }
            let nu = match *self {
                StaticKernel::Bessel { nu } | StaticKernel::Laguerre { nu, .. } => nu,
                _ => 0.0,
            };
            if x == 0.0 && nu < 0.0 {
                return domain("kernel with nu < 0 is unbounded at the origin");
            }
        }
        Ok(())
    }

    /// K(x, y).
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        self.validate()?;
        self.check_point(x)?;
        self.check_point(y)?;
        // Fixed argument order makes every family exactly symmetric.
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        Ok(match *self {
            StaticKernel::Sine => sine(x, y),
            StaticKernel::Airy => airy_kernel(x, y),
            StaticKernel::Bessel { nu } => bessel_kernel(nu, x, y),
            StaticKernel::Hermite { .. } | StaticKernel::Laguerre { .. } => {
                let a = self.wave_functions(x)?;
                let b = self.wave_functions(y)?;
                a.iter().zip(&b).map(|(p, q)| p * q).sum()
            }
        })
    }

    /// Scaled wave functions a_k with K(x, y) = sum_k a_k(x) a_k(y); only
    /// for the finite-N families.
    pub fn wave_functions(&self, x: f64) -> Result<Vec<f64>> {
        match *self {
            StaticKernel::Hermite { n } => {
                let s = (2.0 * n as f64).sqrt();
                let c = s.sqrt().recip();
                Ok(hermite_functions(n, x / s).into_iter().map(|v| c * v).collect())
            }
            StaticKernel::Laguerre { n, nu } => {
                let s = 2.0 * n as f64;
                let c = s.sqrt().recip();
                Ok(laguerre_functions(n, nu, x / s)?
                    .into_iter()
                    .map(|v| c * v)
                    .collect())
            }
            _ => domain("wave functions exist only for the finite-N kernels"),
        }
    }

    /// Gram matrix [K(x_i, x_j)].
    pub fn gram(&self, points: &[f64]) -> Result<DMatrix<f64>> {
        let m = points.len();
        if self.finite_n().is_some() {
            let waves = points
                .iter()
                .map(|&x| {
                    self.check_point(x)?;
                    self.wave_functions(x)
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(DMatrix::from_fn(m, m, |i, j| {
                waves[i].iter().zip(&waves[j]).map(|(p, q)| p * q).sum()
            }));
        }
        let mut g = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = self.eval(points[i], points[j])?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        Ok(g)
    }
}

/// Convenience wrapper for [`StaticKernel::eval`].
pub fn eval_static(kernel: &StaticKernel, x: f64, y: f64) -> Result<f64> {
    kernel.eval(x, y)
}

fn sine(x: f64, y: f64) -> f64 {
    let d = y - x;
    if d.abs() < near_diagonal_threshold(x, y) {
        let d2 = d * d;
        let mut term: f64 = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        while term.abs() > 1e-18 {
            k += 1.0;
            term *= -d2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        sum / PI
    } else {
        d.sin() / (PI * d)
    }
}

/// (F(x)G(y) - G(x)F(y))/(x - y) near the diagonal, from the Taylor data
/// [f0..f3], [g0..g3] of F, G at the midpoint and the half-separation.
fn midpoint_expansion(f: [f64; 4], g: [f64; 4], half: f64) -> f64 {
    let lead = f[1] * g[0] - f[0] * g[1];
    let second = f[1] * g[2] / 2.0 + f[3] * g[0] / 6.0 - f[0] * g[3] / 6.0 - f[2] * g[1] / 2.0;
    lead + half * half * second
}

fn airy_kernel(x: f64, y: f64) -> f64 {
    if (y - x).abs() < near_diagonal_threshold(x, y) {
        let m = 0.5 * (x + y);
        let a = airy(m);
        let f = [a.ai, a.aip, m * a.ai, a.ai + m * a.aip];
        let g = [a.aip, m * a.ai, a.ai + m * a.aip, 2.0 * a.aip + m * m * a.ai];
        return midpoint_expansion(f, g, 0.5 * (y - x));
    }
    let (ax, ay) = (airy(x), airy(y));
    (ax.ai * ay.aip - ax.aip * ay.ai) / (x - y)
}

/// a_n = (-x)^n / (n! Gamma(n + nu + 1)) until negligible.
fn bessel_coefficients(nu: f64, x: f64) -> Vec<f64> {
    let mut out = vec![rgamma(nu + 1.0)];
    let mut term = out[0];
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x / (n * (n + nu));
        out.push(term);
        if n > x && term.abs() < 1e-18 {
            break;
        }
    }
    out
}

fn bessel_kernel(nu: f64, x: f64, y: f64) -> f64 {
    if x.max(y) <= BESSEL_SERIES_MAX {
        return bessel_double_series(nu, x, y);
    }
    if (y - x).abs() < near_diagonal_threshold(x, y) {
        let m = 0.5 * (x + y);
        let z = 2.0 * m.sqrt();
        let j = jv(nu, z);
        let j1 = jv(nu + 1.0, z);
        // phi(x) = J_nu(2 sqrt x), psi = x phi'.
        let phi0 = j;
        let phi1 = ((nu / z) * j - j1) / m.sqrt();
        let a = 1.0 - nu * nu / (4.0 * m);
        let a1 = nu * nu / (4.0 * m * m);
        let a2 = -nu * nu / (2.0 * m * m * m);
        let phi2 = (-phi1 - a * phi0) / m;
        let phi3 = (-2.0 * phi2 - a1 * phi0 - a * phi1) / m;
        let psi0 = m * phi1;
        let psi1 = -a * phi0;
        let psi2 = -a1 * phi0 - a * phi1;
        let psi3 = -a2 * phi0 - 2.0 * a1 * phi1 - a * phi2;
        return midpoint_expansion(
            [phi0, phi1, phi2, phi3],
            [psi0, psi1, psi2, psi3],
            0.5 * (y - x),
        );
    }
    let (zx, zy) = (2.0 * x.sqrt(), 2.0 * y.sqrt());
    (x.sqrt() * jv(nu + 1.0, zx) * jv(nu, zy) - y.sqrt() * jv(nu, zx) * jv(nu + 1.0, zy))
        / (x - y)
}

/// K(x,y) = (xy)^{nu/2} sum_{n,k} a_n(x) a_k(y) / (n + k + nu + 1).
fn bessel_double_series(nu: f64, x: f64, y: f64) -> f64 {
    let a = bessel_coefficients(nu, x);
    let b = bessel_coefficients(nu, y);
    let mut sum = 0.0;
    for (n, an) in a.iter().enumerate() {
        let mut row = 0.0;
        for (k, bk) in b.iter().enumerate() {
            row += bk / ((n + k) as f64 + nu + 1.0);
        }
        sum += an * row;
    }
    let prefactor = if nu == 0.0 { 1.0 } else { (x * y).powf(0.5 * nu) };
    prefactor * sum
}

/// The m-point correlation request det[K(x_i, x_j)].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRequest {
    pub kernel: StaticKernel,
    pub points: Vec<f64>,
}

/// rho_m(x_1..x_m) = det[K(x_i, x_j)]; exactly zero on coincident points.
pub fn rho_m(req: &CorrelationRequest) -> Result<f64> {
    if req.points.is_empty() {
        return domain("correlation function needs at least one point");
    }
    let mut sorted = req.points.clone();
    sorted.sort_by(f64::total_cmp);
    for p in &sorted {
        req.kernel.check_point(*p)?;
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(0.0);
    }
    let g = req.kernel.gram(&req.points)?;
    Ok(match g.nrows() {
        1 => g[(0, 0)],
        2 => g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)],
        _ => g.lu().determinant(),
    })
}

/// Quadrature rule in the kernel's own coordinates that integrates
/// products of the finite-N wave functions; the tail beyond the last node
/// is below 1e-12.
pub fn finite_n_rule(kernel: &StaticKernel) -> Result<QuadratureRule> {
    kernel.validate()?;
    match *kernel {
        StaticKernel::Hermite { n } => {
            let s = (2.0 * n as f64).sqrt();
            let edge = (2.0 * n as f64 + 1.0).sqrt() + 9.0;
            let width = (0.5f64).min(4.0 / s);
            let rule = QuadratureRule::panels_of_width(-edge, edge, width, 20);
            Ok(QuadratureRule {
                nodes: rule.nodes.iter().map(|u| s * u).collect(),
                weights: rule.weights.iter().map(|w| s * w).collect(),
                truncation: Some(s * edge),
            })
        }
        StaticKernel::Laguerre { n, nu } => {
            let s = 2.0 * n as f64;
            let nf = n as f64;
            let edge = 4.0 * nf + 2.0 * nu.abs() + 60.0 + 20.0 * (4.0 * nf).cbrt();
            let width = (0.25f64).min(1.0 / nf.sqrt());
            let base = QuadratureRule::panels_of_width(0.0, edge.sqrt(), width, 20);
            Ok(QuadratureRule {
                nodes: base.nodes.iter().map(|w| s * w * w).collect(),
                weights: base
                    .nodes
                    .iter()
                    .zip(&base.weights)
                    .map(|(w, q)| s * 2.0 * w * q)
                    .collect(),
                truncation: Some(s * edge),
            })
        }
        _ => domain("finite_n_rule applies to the finite-N kernels only"),
    }
}

/// Integral of K(x, x), which equals N for the finite-N kernels.
pub fn total_mass(kernel: &StaticKernel) -> Result<f64> {
    let rule = finite_n_rule(kernel)?;
    let mut sum = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let a = kernel.wave_functions(x)?;
        sum += w * a.iter().map(|v| v * v).sum::<f64>();
    }
    Ok(sum)
}
