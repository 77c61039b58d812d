//! Space-time kernels of finite noncolliding systems started from a fixed
//! configuration without multiple points.
//!
//! Every kernel has the form
//! `K(s,x;t,y) = sum_j A_j(s,x) U_j(t,y) - 1(s>t) P(s,x;t,y)`
//! where the sum runs over the starting points, `A_j` is the transition
//! density out of point j and `U_j` is an integral of the Lagrange-type
//! product `l_j(w) = prod_{k != j} (x_k - w)/(x_k - x_j)` against a
//! backward kernel. Since `l_j` is a polynomial these integrals reduce to
//! finite Gaussian averages; the original contour form is kept as an
//! independent cross-check.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::configspace::Configuration;
use crate::error::{domain, Error, Result};
use crate::exttransition::{heat_kernel, heat_kernel_complex, squared_bessel_kernel};
use crate::quadrature::{gauss_gamma, gauss_hermite, gauss_jacobi_unit, QuadratureRule};
use crate::specfun::{bessel_entire_neg, bessel_series_entire};

/// Tolerance on the imaginary part of kernel values computed in complex
/// arithmetic.
pub const IMAG_TOL: f64 = 1e-8;
/// Gauss-Jacobi nodes on the negative half-line in the Bessel contour
/// check.
const CONTOUR_LINE_NODES: usize = 400;

/// (1 - u) exp(u + u^2/2 + ... + u^p/p).
pub fn weierstrass_g(u: Complex64, p: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if p == 0 {
        return one - u;
    }
    let mut exponent = Complex64::new(0.0, 0.0);
    let mut power = one;
    for k in 1..=p {
        power *= u;
        exponent += power / k as f64;
    }
    (one - u) * exponent.exp()
}

/// Product of G((w - z)/(x - z), 0) over the support points x != z,
/// with multiplicity.
pub fn phi_0(config: &Configuration, z: Complex64, w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (x, m) in config.iter() {
        let x = Complex64::new(x, 0.0);
        if x == z {
            continue;
        }
        acc *= weierstrass_g((w - z) / (x - z), 0).powu(m);
    }
    acc
}

/// Limit density of the soft-edge scaled GUE: sqrt(-x)/pi on x < 0.
pub fn rho_hat(x: f64) -> f64 {
    if x < 0.0 {
        (-x).sqrt() / PI
    } else {
        0.0
    }
}

/// Finite-N version of [`rho_hat`], supported on (-4 N^{2/3}, 0].
pub fn rho_hat_n(n: usize, x: f64) -> f64 {
    let edge = 4.0 * (n as f64).powf(2.0 / 3.0);
    if x <= -edge || x > 0.0 {
        0.0
    } else {
        (-x * (1.0 + x / edge)).max(0.0).sqrt() / PI
    }
}

/// Truncated M_A: the integral of rho_hat(x)/x over 0 < |x| < L, which
/// equals -(2/pi) sqrt(L), minus the sum of 1/x over points with
/// 0 < |x| < L.
pub fn m_airy(config: &Configuration, l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return domain(format!("truncation level L = {l} must be positive"));
    }
    let density = -2.0 / PI * l.sqrt();
    let points: f64 = config
        .iter()
        .filter(|&(x, _)| x != 0.0 && x.abs() < l)
        .map(|(x, m)| m as f64 / x)
        .sum();
    Ok(density - points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NonEqFamily {
    /// Dyson's Brownian motion.
    Sine,
    /// Dyson's Brownian motion shifted by t^2/4 - N^{1/3} t.
    AiryPrelimit { n: usize },
    /// Noncolliding squared Bessel process.
    Bessel { nu: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonEqKernelSpec {
    pub family: NonEqFamily,
    pub config: Configuration,
}

/// Residue-sum and contour evaluations of the same kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub residue_value: f64,
    pub contour_value: f64,
}

impl NonEqKernelSpec {
    pub fn new(family: NonEqFamily, config: Configuration) -> Result<Self> {
        let spec = NonEqKernelSpec { family, config };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.config.is_simple() {
            return Err(Error::Config(
                "starting configuration has a multiple point".into(),
            ));
        }
        match self.family {
            NonEqFamily::Sine => Ok(()),
            NonEqFamily::AiryPrelimit { n } => {
                if n == 0 {
                    return domain("the Airy pre-limit kernel needs N >= 1");
                }
                Ok(())
            }
            NonEqFamily::Bessel { nu } => {
                if !(nu > -1.0) {
                    return domain(format!("index nu = {nu} must exceed -1"));
                }
                if !self.config.is_nonnegative() {
                    return Err(Error::Config(
                        "Bessel starting points must be >= 0".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// N^{1/3}, the magnitude of the integral of rho_hat^N(v)/v.
    fn airy_shift(&self) -> f64 {
        match self.family {
            NonEqFamily::AiryPrelimit { n } => (n as f64).cbrt(),
            _ => 0.0,
        }
    }

    fn check_time(t: f64) -> Result<()> {
        if !(t > 0.0) || !t.is_finite() {
            return domain(format!("times must be finite and positive; got {t}"));
        }
        Ok(())
    }

    fn check_space(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return domain("positions must be finite");
        }
        if let NonEqFamily::Bessel { .. } = self.family {
            if x < 0.0 {
                return domain(format!("Bessel kernel positions must be >= 0; got {x}"));
            }
        }
        Ok(())
    }

    /// A_j(s, x): the forward factor of starting point j. For the sine and
    /// Bessel families it is the transition density out of point j; for the
    /// Airy family it is the density of B(s) + s^2/4 from point j, the
    /// -N^{1/3} s drift being carried by the dual factor.
    pub fn forward_factors(&self, s: f64, x: f64) -> Result<Vec<f64>> {
        Self::check_time(s)?;
        self.check_space(x)?;
        self.config
            .points()
            .iter()
            .map(|&p| match self.family {
                NonEqFamily::Sine => Ok(heat_kernel(s, x - p)),
                NonEqFamily::AiryPrelimit { .. } => Ok(heat_kernel(s, x - p - 0.25 * s * s)),
                NonEqFamily::Bessel { nu } => squared_bessel_kernel(nu, s, x, p),
            })
            .collect()
    }

    /// U_j(t, y). Each l_j is a polynomial of degree n - 1, so the dual
    /// factors are finite Gaussian averages computed exactly:
    ///
    /// * sine: `E l_j(y + i sqrt(t) Z)`;
    /// * Airy: `e^{-c(a - x_j) - c^2 t/2} E l_j(a + c t + i sqrt(t) Z)` with
    ///   `a = y - t^2/4`, after completing the square in `e^{-c w}`;
    /// * Bessel: the backward law on (-inf, 0] has Laplace transform
    ///   `(1 + 2t lam)^{-nu-1} exp(lam y / (1 + 2t lam))`, which is that of
    ///   `W = y - 2i sqrt(yt) Z - t Z^2 - 2t G` with G ~ Gamma(nu + 3/2)
    ///   times one extra factor `1 + 2t lam`, so
    ///   `U_j = E l_j(W) + 2t E l_j'(W)`.
    pub fn dual_factors(&self, t: f64, y: f64) -> Result<Vec<f64>> {
        Self::check_time(t)?;
        self.check_space(y)?;
        let pts = self.config.points();
        let np = pts.len();
        if np == 0 {
            return Ok(Vec::new());
        }
        let denominators = lagrange_denominators(pts);
        let mut acc = vec![Complex64::new(0.0, 0.0); np];
        // Absolute mass of each average, the scale of its roundoff.
        let mut mass = vec![0.0f64; np];
        let mut add = |j: usize, term: Complex64| {
            acc[j] += term;
            mass[j] += term.norm();
        };
        let mut prefactors = vec![1.0; np];
        match self.family {
            NonEqFamily::Sine | NonEqFamily::AiryPrelimit { .. } => {
                let c = self.airy_shift();
                let centre = if c == 0.0 {
                    y
                } else {
                    let a = y - 0.25 * t * t;
                    for (f, &p) in prefactors.iter_mut().zip(pts) {
                        *f = (-c * (a - p) - 0.5 * c * c * t).exp();
                    }
                    a + c * t
                };
                let gh = gauss_hermite(np / 2 + 2);
                let sd = t.sqrt();
                for (z, q) in gh.nodes.iter().zip(&gh.weights) {
                    let w = Complex64::new(centre, sd * z);
                    for (j, (l, _)) in lagrange_with_derivative(pts, &denominators, w)
                        .into_iter()
                        .enumerate()
                    {
                        add(j, l * q);
                    }
                }
            }
            NonEqFamily::Bessel { nu } => {
                let gh = gauss_hermite(np + 1);
                let gg = gauss_gamma(np / 2 + 2, nu + 1.5);
                let cross = 2.0 * (y * t).sqrt();
                for (z, qz) in gh.nodes.iter().zip(&gh.weights) {
                    let base = Complex64::new(y - t * z * z, -cross * z);
                    for (g, qg) in gg.nodes.iter().zip(&gg.weights) {
                        let w = base - 2.0 * t * g;
                        for (j, (l, dl)) in lagrange_with_derivative(pts, &denominators, w)
                            .into_iter()
                            .enumerate()
                        {
                            add(j, (l + 2.0 * t * dl) * (qz * qg));
                        }
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(np);
        for ((z, m), f) in acc.into_iter().zip(mass).zip(prefactors) {
            let tol = IMAG_TOL * m.max(1.0);
            if z.im.abs() > tol {
                return Err(Error::ImaginaryResidue {
                    imag: z.im.abs(),
                    tol,
                });
            }
            out.push(f * z.re);
        }
        Ok(out)
    }

    /// The free propagator subtracted when s > t.
    pub fn propagator(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        if s <= t {
            return Ok(0.0);
        }
        match self.family {
            NonEqFamily::Sine => Ok(heat_kernel(s - t, x - y)),
            NonEqFamily::AiryPrelimit { .. } => {
                let c = self.airy_shift();
                Ok(heat_kernel(s - t, x - y - 0.25 * (s * s - t * t) + c * (s - t)))
            }
            NonEqFamily::Bessel { nu } => squared_bessel_kernel(nu, s - t, x, y),
        }
    }

    /// K(s, x; t, y).
    pub fn eval(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        let a = self.forward_factors(s, x)?;
        let u = self.dual_factors(t, y)?;
        let sum: f64 = a.iter().zip(&u).map(|(p, q)| p * q).sum();
        Ok(sum - self.propagator(s, x, t, y)?)
    }

    /// Kernel value from the point sum and from trapezoidal contour
    /// integration with `circle_nodes` nodes per circle, both over the
    /// original w-line (imaginary axis, or the negative half-line for the
    /// Bessel family).
    pub fn contour_crosscheck_with(
        &self,
        s: f64,
        x: f64,
        t: f64,
        y: f64,
        circle_nodes: usize,
    ) -> Result<CrossCheck> {
        let residue_value = self.eval(s, x, t, y)?;
        let contour_value = self.contour_value(s, x, t, y, circle_nodes)?;
        Ok(CrossCheck {
            residue_value,
            contour_value,
        })
    }

    fn contour_value(&self, s: f64, x: f64, t: f64, y: f64, circle_nodes: usize) -> Result<f64> {
        Self::check_time(s)?;
        Self::check_time(t)?;
        self.check_space(x)?;
        self.check_space(y)?;
        let free = self.propagator(s, x, t, y)?;
        if self.config.is_empty() {
            return Ok(-free);
        }
        if circle_nodes < 8 {
            return domain("contour quadrature needs at least 8 nodes per circle");
        }
        let pts = self.config.points();
        let gaps: Vec<f64> = (0..pts.len())
            .map(|j| {
                let left = if j > 0 { pts[j] - pts[j - 1] } else { f64::INFINITY };
                let right = if j + 1 < pts.len() { pts[j + 1] - pts[j] } else { f64::INFINITY };
                left.min(right)
            })
            .collect();
        let c = self.airy_shift();
        let roots: Vec<Complex64> = (0..circle_nodes)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / circle_nodes as f64))
            .collect();
        // Integrand in z for a fixed w on the line, without the w-measure.
        let z_integral = |w: Complex64| -> Result<Complex64> {
            let mut total = Complex64::new(0.0, 0.0);
            for (j, &p) in pts.iter().enumerate() {
                let dist = (w - p).norm();
                let radius = (0.45 * gaps[j]).min(0.5 * dist).min(1.0);
                if !(radius > 1e-12) {
                    return Err(Error::Geometry(format!(
                        "circle around {p} would touch the line point {w}"
                    )));
                }
                let mut sum = Complex64::new(0.0, 0.0);
                for root in &roots {
                    let z = p + radius * root;
                    let mut prod = Complex64::new(1.0, 0.0);
                    for &q in pts {
                        prod *= (q - w) / (q - z);
                    }
                    let mut f = self.forward_complex(s, x, z)? * prod / (w - z);
                    if c != 0.0 {
                        f *= ((w - z) * (-c)).exp();
                    }
                    // dz / (2 pi i) = radius * root * dtheta / (2 pi)
                    sum += f * radius * root;
                }
                total += sum / circle_nodes as f64;
            }
            Ok(total)
        };
        let value = match self.family {
            NonEqFamily::Sine | NonEqFamily::AiryPrelimit { .. } => {
                // w = i u, u in R, against the backward Gaussian.
                let shift = if c == 0.0 { 0.0 } else { 0.25 * t * t };
                let b = y - shift;
                let half = ((2.0 * t * (40.0 + pts.len() as f64 * 3.0)) + b * b).sqrt() + 1.0;
                let width = (PI * t / (b.abs() + 1.0)).min(1.0);
                let rule = QuadratureRule::panels_of_width(-half, half, width, 16);
                let mut acc = Complex64::new(0.0, 0.0);
                for (u, q) in rule.nodes.iter().zip(&rule.weights) {
                    let w = Complex64::new(0.0, *u);
                    let backward = heat_kernel_complex(-t, w - b);
                    acc += z_integral(w)? * backward * q;
                }
                if acc.im.abs() > IMAG_TOL {
                    return Err(Error::ImaginaryResidue {
                        imag: acc.im.abs(),
                        tol: IMAG_TOL,
                    });
                }
                acc.re
            }
            NonEqFamily::Bessel { nu } => {
                let r_max = bessel_dual_cutoff(t, y, nu, pts);
                let beta = 2.0 * nu + 1.0;
                let gj = gauss_jacobi_unit(CONTOUR_LINE_NODES, beta);
                let scale = r_max.powf(beta + 1.0);
                let pref = 2.0 / (2.0 * t) * (2.0 * t).powf(-nu);
                let mut acc = Complex64::new(0.0, 0.0);
                for (u0, w0) in gj.nodes.iter().zip(&gj.weights) {
                    let r = r_max * u0;
                    let w = -r * r;
                    let kernel = pref
                        * ((y + w) / (2.0 * t)).exp()
                        * bessel_entire_neg(nu, r * r * y / (4.0 * t * t));
                    acc += z_integral(Complex64::new(w, 0.0))? * (scale * w0 * kernel);
                }
                if acc.im.abs() > IMAG_TOL {
                    return Err(Error::ImaginaryResidue {
                        imag: acc.im.abs(),
                        tol: IMAG_TOL,
                    });
                }
                acc.re
            }
        };
        Ok(value - free)
    }

    /// Forward density at (s, x) from a complex starting point z, as an
    /// entire function of z.
    fn forward_complex(&self, s: f64, x: f64, z: Complex64) -> Result<Complex64> {
        match self.family {
            NonEqFamily::Sine => Ok(heat_kernel_complex(s, x - z)),
            NonEqFamily::AiryPrelimit { .. } => Ok(heat_kernel_complex(s, x - z - 0.25 * s * s)),
            NonEqFamily::Bessel { nu } => {
                if x == 0.0 && nu < 0.0 {
                    return Err(Error::Overflow(
                        "squared Bessel density with nu < 0 is unbounded at 0".into(),
                    ));
                }
                let power = if nu == 0.0 { 1.0 } else { (x / (2.0 * s)).powf(nu) };
                let q = z * (x / (4.0 * s * s));
                Ok(power / (2.0 * s) * (-(z + x) / (2.0 * s)).exp() * bessel_series_entire(nu, q))
            }
        }
    }

    /// Checks residue and contour evaluations at 64 circle nodes.
    pub fn contour_crosscheck(&self, s: f64, x: f64, t: f64, y: f64) -> Result<CrossCheck> {
        self.contour_crosscheck_with(s, x, t, y, 64)
    }
}

/// Convenience wrapper for [`NonEqKernelSpec::eval`].
pub fn eval_noneq(spec: &NonEqKernelSpec, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
    spec.eval(s, x, t, y)
}

/// Convenience wrapper for [`NonEqKernelSpec::contour_crosscheck`].
pub fn contour_crosscheck(
    spec: &NonEqKernelSpec,
    s: f64,
    x: f64,
    t: f64,
    y: f64,
) -> Result<(f64, f64)> {
    let c = spec.contour_crosscheck(s, x, t, y)?;
    Ok((c.residue_value, c.contour_value))
}

fn lagrange_denominators(pts: &[f64]) -> Vec<f64> {
    (0..pts.len())
        .map(|j| {
            pts.iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &q)| q - pts[j])
                .product()
        })
        .collect()
}

/// l_j(w) and l_j'(w) for all j, from prefix and suffix products of
/// (x_k - w) so that w may coincide with a starting point.
fn lagrange_with_derivative(
    pts: &[f64],
    denominators: &[f64],
    w: Complex64,
) -> Vec<(Complex64, Complex64)> {
    let n = pts.len();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // (value, derivative) of the running products.
    let mut prefix = vec![(one, zero); n + 1];
    for k in 0..n {
        let (v, d) = prefix[k];
        let f = pts[k] - w;
        prefix[k + 1] = (v * f, d * f - v);
    }
    let mut out = vec![(zero, zero); n];
    let (mut sv, mut sd) = (one, zero);
    for j in (0..n).rev() {
        let (pv, pd) = prefix[j];
        out[j] = (pv * sv / denominators[j], (pd * sv + pv * sd) / denominators[j]);
        let f = pts[j] - w;
        sd = sd * f - sv;
        sv *= f;
    }
    out
}

/// r-range for the Bessel dual integral over w = -r^2: the factor
/// e^{-r^2/(2t)} r^{2 nu + 1} times the polynomial growth of l_j, relative
/// to e^{y/(2t)}, drops below 1e-16.
fn bessel_dual_cutoff(t: f64, y: f64, nu: f64, pts: &[f64]) -> f64 {
    let spread = pts.iter().fold(1.0f64, |m, p| m.max(p.abs()));
    let np = pts.len() as f64;
    let mut r2: f64 = 2.0 * t * 37.0;
    for _ in 0..4 {
        let growth = (np - 1.0).max(0.0) * (1.0 + r2 / spread).ln()
            + (nu + 0.5).max(0.0) * (1.0 + r2 / (2.0 * t)).ln();
        r2 = 2.0 * t * (37.0 + growth) + y;
    }
    r2.sqrt()
}
