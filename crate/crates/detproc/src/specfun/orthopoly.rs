use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{domain, Error, Result};

/// Polynomial family for [`orthopoly`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrthoKind {
    /// Physicists' Hermite polynomials H_k.
    Hermite,
    /// Generalized Laguerre polynomials L_k^nu, nu > -1.
    Laguerre { nu: f64 },
}

/// Raw polynomial value by three-term recurrence.
pub fn orthopoly(kind: OrthoKind, k: usize, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain("orthopoly argument must be finite");
    }
    let (mut prev, mut cur) = match kind {
        OrthoKind::Hermite => (1.0, 2.0 * x),
        OrthoKind::Laguerre { nu } => {
            if !(nu > -1.0) {
                return domain(format!("Laguerre parameter {nu} must exceed -1"));
            }
            (1.0, 1.0 + nu - x)
        }
    };
    if k == 0 {
        return Ok(1.0);
    }
    for j in 1..k {
        let jf = j as f64;
        let next = match kind {
            OrthoKind::Hermite => 2.0 * x * cur - 2.0 * jf * prev,
            OrthoKind::Laguerre { nu } => {
                ((2.0 * jf + 1.0 + nu - x) * cur - (jf + nu) * prev) / (jf + 1.0)
            }
        };
        if !next.is_finite() {
            return Err(Error::Overflow(format!(
                "recurrence overflow at degree {} for x = {x}",
                j + 1
            )));
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

const RESCALE: f64 = 1e200;

fn scaled(v: f64, log_scale: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * (v.abs().ln() + log_scale).exp()
    }
}

/// Runs a normalized recurrence `psi_{k+1} = a_k psi_k - b_k psi_{k-1}`
/// starting from psi_0 = 1, psi_1 = `first`, and multiplies by e^`log0`.
/// Rescaling keeps the raw values representable.
fn scaled_recurrence(
    n: usize,
    log0: f64,
    first: f64,
    step: impl Fn(usize) -> (f64, f64),
) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let mut log_scale = log0;
    let mut factor = log_scale.exp();
    let (mut prev, mut cur) = (1.0, first);
    out.push(factor);
    for k in 1..n {
        out.push(if factor.is_normal() {
            cur * factor
        } else {
            scaled(cur, log_scale)
        });
        let (a, b) = step(k);
        let next = a * cur - b * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
            factor = log_scale.exp();
        }
    }
    out
}

/// Hermite functions phi_0..phi_{n-1} at x, orthonormal in L^2(R).
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let log0 = -0.5 * x * x - 0.25 * PI.ln();
    scaled_recurrence(n, log0, 2f64.sqrt() * x, |k| {
        let kf = k as f64;
        ((2.0 / (kf + 1.0)).sqrt() * x, (kf / (kf + 1.0)).sqrt())
    })
}

/// A single Hermite function phi_k(x).
pub fn hermite_function(k: usize, x: f64) -> f64 {
    hermite_functions(k + 1, x)[k]
}

/// Laguerre functions phi_0^nu..phi_{n-1}^nu at x >= 0, orthonormal in
/// L^2(0, inf).
pub fn laguerre_functions(n: usize, nu: f64, x: f64) -> Result<Vec<f64>> {
    if !(nu > -1.0) {
        return domain(format!("Laguerre parameter {nu} must exceed -1"));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("Laguerre functions need x >= 0, got {x}"));
    }
    if x == 0.0 && nu < 0.0 {
        return domain("Laguerre functions with nu < 0 are unbounded at the origin");
    }
    let log_pow = if x == 0.0 {
        if nu == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        0.5 * nu * x.ln()
    };
    let log0 = log_pow - 0.5 * x - 0.5 * ln_gamma(nu + 1.0);
    let first = (1.0 + nu - x) / (1.0 + nu).sqrt();
    Ok(scaled_recurrence(n, log0, first, |k| {
        let kf = k as f64;
        let d = ((kf + 1.0) * (kf + 1.0 + nu)).sqrt();
        ((2.0 * kf + 1.0 + nu - x) / d, (kf * (kf + nu)).sqrt() / d)
    }))
}

/// A single Laguerre function phi_k^nu(x).
pub fn laguerre_function(k: usize, nu: f64, x: f64) -> Result<f64> {
    Ok(laguerre_functions(k + 1, nu, x)?[k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma;

    #[test]
    fn raw_matches_normalized() {
        for k in 0..12 {
            for &x in &[-2.0, 0.3, 1.7] {
                let h = orthopoly(OrthoKind::Hermite, k, x).unwrap();
                let norm = (PI.sqrt() * 2f64.powi(k as i32) * gamma(k as f64 + 1.0)).sqrt();
                let phi = (-0.5 * x * x).exp() * h / norm;
                assert!((phi - hermite_function(k, x)).abs() < 1e-13);
            }
            for &x in &[0.2, 1.0, 6.0] {
                let nu = 0.7;
                let l = orthopoly(OrthoKind::Laguerre { nu }, k, x).unwrap();
                let c = (gamma(k as f64 + 1.0) / gamma(k as f64 + nu + 1.0)).sqrt();
                let phi = c * x.powf(nu / 2.0) * l * (-x / 2.0).exp();
                assert!((phi - laguerre_function(k, nu, x).unwrap()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn large_arguments_stay_finite() {
        let v = hermite_functions(400, 30.0);
        assert!(v.iter().all(|x| x.is_finite()));
        assert!(v[399].abs() > 0.0);
        let w = laguerre_functions(300, 0.5, 1500.0).unwrap();
        assert!(w.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(
            orthopoly(OrthoKind::Hermite, 400, 1e3),
            Err(Error::Overflow(_))
        ));
    }
}
