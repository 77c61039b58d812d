use std::f64::consts::{FRAC_PI_4, PI};

use super::bessel::{bessel_jy_steed, bessel_k_steed};

/// Below this |x| Ai is summed from its Maclaurin series.
pub const AIRY_SERIES_MAX: f64 = 2.5;
/// From this |x| on the large-argument expansions are used.
pub const AIRY_ASYMPTOTIC_MIN: f64 = 9.0;

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = -0.258_819_403_792_806_8;

/// Ai(x) and Ai'(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Airy {
    pub ai: f64,
    pub aip: f64,
}

/// Airy function of the first kind and its derivative.
pub fn airy(x: f64) -> Airy {
    let ax = x.abs();
    if ax <= AIRY_SERIES_MAX {
        airy_series(x)
    } else if ax < AIRY_ASYMPTOTIC_MIN {
        if x > 0.0 {
            airy_positive_bessel(x)
        } else {
            airy_negative_bessel(ax)
        }
    } else if x > 0.0 {
        airy_positive_asymptotic(x)
    } else {
        airy_negative_asymptotic(ax)
    }
}

pub(crate) fn airy_series(x: f64) -> Airy {
    let x3 = x * x * x;
    // f, g are the two even/odd-type solutions with f(0)=1, g'(0)=1.
    let (mut f, mut t) = (1.0, 1.0);
    let (mut g, mut s) = (x, x);
    let (mut fp, mut u) = (0.5 * x * x, 0.5 * x * x);
    let (mut gp, mut v) = (1.0, 1.0);
    let mut k = 1.0_f64;
    loop {
        t *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
        s *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
        v *= x3 / ((3.0 * k - 2.0) * (3.0 * k));
        if k >= 2.0 {
            u *= x3 / ((3.0 * k - 1.0) * (3.0 * k - 3.0));
            fp += u;
        }
        f += t;
        g += s;
        gp += v;
        if t.abs() + s.abs() + u.abs() + v.abs() < 1e-18 || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    Airy {
        ai: AI0 * f + AIP0 * g,
        aip: AI0 * fp + AIP0 * gp,
    }
}

fn airy_positive_bessel(x: f64) -> Airy {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    // mu = -1/3 yields K_{-1/3} = K_{1/3} and K_{2/3}.
    let (k13, k23) = bessel_k_steed(-1.0 / 3.0, zeta);
    Airy {
        ai: (x / 3.0).sqrt() * k13 / PI,
        aip: -x / (PI * 3f64.sqrt()) * k23,
    }
}

fn airy_negative_bessel(z: f64) -> Airy {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let r13 = bessel_jy_steed(1.0 / 3.0, zeta);
    let r23 = bessel_jy_steed(2.0 / 3.0, zeta);
    let s3 = 3f64.sqrt();
    Airy {
        ai: 0.5 * z.sqrt() * (r13.j - r13.y / s3),
        aip: 0.5 * z * (r23.j + r23.y / s3),
    }
}

/// Coefficients u_k, v_k of the large-argument expansions, truncated where
/// the terms at the given zeta stop decreasing.
fn asymptotic_coefficients(zeta: f64) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    let mut last = 1.0_f64;
    for k in 1..200 {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        let vk = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk;
        let size = uk.abs().max(vk.abs()) / zeta.powi(k as i32);
        if size > last || size < 1e-18 {
            break;
        }
        last = size;
        u.push(uk);
        v.push(vk);
    }
    (u, v)
}

fn alternating_sum(c: &[f64], zeta: f64) -> f64 {
    let mut sum = 0.0;
    let mut p = 1.0;
    for (k, ck) in c.iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * ck * p;
        p /= zeta;
    }
    sum
}

fn airy_positive_asymptotic(x: f64) -> Airy {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (u, v) = asymptotic_coefficients(zeta);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    Airy {
        ai: e / q * alternating_sum(&u, zeta),
        aip: -e * q * alternating_sum(&v, zeta),
    }
}

/// Splits sum c_k zeta^-k into its even and odd parts with the sign
/// pattern (-1)^j attached to c_{2j} and c_{2j+1}.
fn paired_sums(c: &[f64], zeta: f64) -> (f64, f64) {
    let (mut even, mut odd) = (0.0, 0.0);
    let mut p = 1.0;
    for (k, ck) in c.iter().enumerate() {
        let j = k / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * ck * p;
        } else {
            odd += sign * ck * p;
        }
        p /= zeta;
    }
    (even, odd)
}

fn airy_negative_asymptotic(z: f64) -> Airy {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let (u, v) = asymptotic_coefficients(zeta);
    let (ue, uo) = paired_sums(&u, zeta);
    let (ve, vo) = paired_sums(&v, zeta);
    let phase = zeta - FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    let q = z.powf(0.25);
    Airy {
        ai: (c * ue + s * uo) / (PI.sqrt() * q),
        aip: q / PI.sqrt() * (s * ve - c * vo),
    }
}
