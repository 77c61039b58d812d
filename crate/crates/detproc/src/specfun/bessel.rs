use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{cos_pi, rgamma, sin_pi};
use super::SpecFunResult;
use crate::error::{domain, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;

/// Above this argument J is evaluated by Steed's method instead of the series.
pub const J_SERIES_MAX: f64 = 8.0;
/// Above this argument the scaled I uses its large-argument expansion.
pub const I_ASYMPTOTIC_MIN: f64 = 30.0;

pub(crate) struct BesselJy {
    pub j: f64,
    pub y: f64,
}

/// J and Y for order `nu >= 0` and `x >= 2`, by a
/// continued fraction for J'/J followed by Steed's complex continued
/// fraction for the ratio of Hankel functions.
pub(crate) fn bessel_jy_steed(nu: f64, x: f64) -> BesselJy {
    debug_assert!(nu >= 0.0 && x >= 2.0);
    let nl = (nu + 0.5).floor() as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < 0.0 {
        rjmu = -rjmu;
    }
    let mut rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let mut ry1 = xmu * xi * rymu - rymup;
    let scale = rjmu / rjl;
    let j = rjl1 * scale;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    BesselJy { j, y: rymu }
}

/// K_mu and K_{mu+1} for `|mu| <= 1/2` and `x >= 2` (Steed/Temme continued
/// fraction).
pub(crate) fn bessel_k_steed(mu: f64, x: f64) -> (f64, f64) {
    debug_assert!(mu.abs() <= 0.5 && x >= 2.0);
    let xi = 1.0 / x;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAXIT {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let kmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = kmu * (mu + x + 0.5 - h) * xi;
    (kmu, k1)
}

fn j_series(nu: f64, z: f64) -> (f64, f64) {
    let q = 0.25 * z * z;
    let mut term = (0.5 * z).powf(nu) * rgamma(nu + 1.0);
    let mut sum = term;
    let mut abs_sum = term.abs();
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -q / (n * (n + nu));
        sum += term;
        abs_sum += term.abs();
        if n * n > q && term.abs() <= EPS * 1e-2 * sum.abs().max(FPMIN) {
            break;
        }
        if n > 500.0 {
            break;
        }
    }
    (sum, abs_sum)
}

/// J_nu(z) for nu > -2 and z >= 0, with a crude error estimate.
pub(crate) fn jv_with_error(nu: f64, z: f64) -> (f64, f64) {
    if z == 0.0 {
        return if nu == 0.0 {
            (1.0, 0.0)
        } else if nu > 0.0 || nu == nu.floor() {
            (0.0, 0.0)
        } else {
            (f64::INFINITY, 0.0)
        };
    }
    if nu < 0.0 && nu == nu.floor() {
        let m = -nu;
        let (v, e) = jv_with_error(m, z);
        let sign = if (m as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return (sign * v, e);
    }
    if z <= J_SERIES_MAX {
        let (v, abs_sum) = j_series(nu, z);
        return (v, 4.0 * f64::EPSILON * abs_sum);
    }
    if nu >= 0.0 {
        let r = bessel_jy_steed(nu, z);
        (r.j, 16.0 * f64::EPSILON * (r.j.abs() + r.y.abs()))
    } else {
        let mu = -nu;
        let r = bessel_jy_steed(mu, z);
        let v = cos_pi(mu) * r.j - sin_pi(mu) * r.y;
        (v, 16.0 * f64::EPSILON * (r.j.abs() + r.y.abs()))
    }
}

pub(crate) fn jv(nu: f64, z: f64) -> f64 {
    jv_with_error(nu, z).0
}

/// Bessel function of the first kind J_nu(z), nu > -1, z >= 0.
pub fn bessel_j(nu: f64, z: f64) -> Result<SpecFunResult> {
    if !(nu > -1.0) || !nu.is_finite() {
        return domain(format!("bessel_j order {nu} must exceed -1"));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return domain(format!("bessel_j argument {z} must be finite and >= 0"));
    }
    let (value, err) = jv_with_error(nu, z);
    SpecFunResult::checked(value, err, "bessel_j")
}

/// d/dz J_nu(z), nu > -1, z >= 0.
pub fn bessel_j_derivative(nu: f64, z: f64) -> Result<SpecFunResult> {
    let base = bessel_j(nu, z)?;
    if z == 0.0 {
        let value = if nu == 1.0 {
            0.5
        } else if nu == 0.0 || nu > 1.0 {
            0.0
        } else {
            f64::INFINITY
        };
        return SpecFunResult::checked(value, 0.0, "bessel_j_derivative");
    }
    let (next, e) = jv_with_error(nu + 1.0, z);
    let value = nu / z * base.value - next;
    SpecFunResult::checked(value, e + nu / z * base.abs_error_estimate, "bessel_j_derivative")
}

/// The entire part of the modified Bessel series,
/// `sum_n q^n / (n! Gamma(n + nu + 1))`, so that
/// `I_nu(z) = (z/2)^nu S(z^2/4)` and `J_nu(z) = (z/2)^nu S(-z^2/4)`.
pub fn bessel_series_entire(nu: f64, q: Complex64) -> Complex64 {
    let mut term = Complex64::new(rgamma(nu + 1.0), 0.0);
    let mut sum = term;
    let qn = q.norm();
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= q / (n * (n + nu));
        sum += term;
        if n * n > qn && term.norm() <= 1e-18 * sum.norm().max(FPMIN) {
            break;
        }
        if n > 2000.0 {
            break;
        }
    }
    sum
}

/// `S(-q)` for real q >= 0, where S is [`bessel_series_entire`]; equals
/// `J_nu(2 sqrt q) / q^(nu/2)` and stays accurate for large q.
pub(crate) fn bessel_entire_neg(nu: f64, q: f64) -> f64 {
    if q <= 16.0 {
        bessel_series_entire(nu, Complex64::new(-q, 0.0)).re
    } else {
        jv(nu, 2.0 * q.sqrt()) * q.powf(-0.5 * nu)
    }
}

/// Modified Bessel function I_nu(z) for complex z, principal branch of
/// (z/2)^nu.
pub fn bessel_i(nu: f64, z: Complex64) -> Result<Complex64> {
    if !(nu > -1.0) || !nu.is_finite() {
        return domain(format!("bessel_i order {nu} must exceed -1"));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return domain("bessel_i argument must be finite");
    }
    let s = bessel_series_entire(nu, 0.25 * z * z);
    if z == Complex64::new(0.0, 0.0) {
        return if nu == 0.0 {
            Ok(Complex64::new(1.0, 0.0))
        } else if nu > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            domain(format!("bessel_i of order {nu} is singular at 0"))
        };
    }
    Ok((0.5 * z).powf(nu) * s)
}

/// e^{-x} I_nu(x) for real x >= 0 and nu > -1; safe for large x.
pub fn bessel_i_scaled(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if x < I_ASYMPTOTIC_MIN {
        let s = bessel_series_entire(nu, Complex64::new(0.25 * x * x, 0.0)).re;
        return (nu * (0.5 * x).ln() - x).exp() * s;
    }
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * k * x);
        if next.abs() >= term.abs() || next == 0.0 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}
