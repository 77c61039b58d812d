//! Fredholm determinants on Gauss-Legendre grids.
//!
//! The multitime generating function is
//! `det(delta_{mn} delta(x - y) + K(t_m, x; t_n, y) chi_n(y))` with
//! `chi_n = e^{f_n} - 1`, discretised by Nystrom's method with one
//! Gauss-Legendre rule per window. Node counts are doubled until two
//! consecutive determinants agree.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exttransition::ExtendedKernel;
use crate::noneqkernels::NonEqKernelSpec;
use crate::quadrature::QuadratureRule;
use crate::statickernels::StaticKernel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FredholmKernel {
    Static(StaticKernel),
    Extended(ExtendedKernel),
    NonEq(NonEqKernelSpec),
}

impl FredholmKernel {
    fn half_line(&self) -> bool {
        match self {
            FredholmKernel::Static(k) => k.half_line(),
            FredholmKernel::Extended(k) => k.static_kernel().half_line(),
            FredholmKernel::NonEq(spec) => {
                matches!(spec.family, crate::noneqkernels::NonEqFamily::Bessel { .. })
            }
        }
    }
}

/// f on a window; zero outside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    Zero,
    /// chi = z on the window, i.e. f = log(1 + z); z = -1 is the gap
    /// probability.
    Chi { z: f64 },
    /// f = height (1 - u^2)^2 with u running from -1 to 1 across the window.
    Bump { height: f64 },
    /// f sampled at equally spaced points from a to b, interpolated by
    /// cubic Hermite pieces with centred-difference slopes.
    Samples { values: Vec<f64> },
}

impl TestFunction {
    fn validate(&self) -> Result<()> {
        match self {
            TestFunction::Chi { z } if !(*z >= -1.0) || !z.is_finite() => {
                domain(format!("chi = {z} must be finite and >= -1"))
            }
            TestFunction::Bump { height } if !height.is_finite() => domain("bump height must be finite"),
            TestFunction::Samples { values } => {
                if values.len() < 2 {
                    return domain("sampled test functions need at least two values");
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return domain("sampled test functions must be finite");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// f(x) for x in [a, b].
    pub fn f(&self, a: f64, b: f64, x: f64) -> f64 {
        if !(x >= a && x <= b) {
            return 0.0;
        }
        match self {
            TestFunction::Zero => 0.0,
            TestFunction::Chi { z } => z.ln_1p(),
            TestFunction::Bump { height } => {
                let u = if b > a { (2.0 * x - a - b) / (b - a) } else { 0.0 };
                height * (1.0 - u * u).powi(2)
            }
            TestFunction::Samples { values } => {
                let m = values.len() - 1;
                let h = (b - a) / m as f64;
                let pos = if h > 0.0 { ((x - a) / h).clamp(0.0, m as f64) } else { 0.0 };
                let i = (pos.floor() as usize).min(m - 1);
                let s = pos - i as f64;
                let slope = |k: usize| -> f64 {
                    if k == 0 {
                        values[1] - values[0]
                    } else if k == m {
                        values[m] - values[m - 1]
                    } else {
                        0.5 * (values[k + 1] - values[k - 1])
                    }
                };
                let (p0, p1) = (values[i], values[i + 1]);
                let (m0, m1) = (slope(i), slope(i + 1));
                let s2 = s * s;
                let s3 = s2 * s;
                (2.0 * s3 - 3.0 * s2 + 1.0) * p0
                    + (s3 - 2.0 * s2 + s) * m0
                    + (-2.0 * s3 + 3.0 * s2) * p1
                    + (s3 - s2) * m1
            }
        }
    }

    /// chi = e^f - 1, exact -1 for the gap case.
    pub fn chi(&self, a: f64, b: f64, x: f64) -> f64 {
        if !(x >= a && x <= b) {
            return 0.0;
        }
        match self {
            TestFunction::Chi { z } => *z,
            _ => self.f(a, b, x).exp_m1(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            TestFunction::Zero => true,
            TestFunction::Chi { z } => *z == 0.0,
            TestFunction::Bump { height } => *height == 0.0,
            TestFunction::Samples { values } => values.iter().all(|v| *v == 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub a: f64,
    pub b: f64,
    pub f: TestFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FredholmProblem {
    pub kernel: FredholmKernel,
    pub times: Vec<f64>,
    /// One window per time.
    pub windows: Vec<Window>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NystromSettings {
    pub start_nodes: usize,
    pub max_nodes: usize,
    pub tol: f64,
}

impl Default for NystromSettings {
    fn default() -> Self {
        NystromSettings {
            start_nodes: 16,
            max_nodes: 1024,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FredholmValue {
    pub value: f64,
    /// Nodes per window of the returned value.
    pub nodes_used: usize,
    /// |Det(n/2) - Det(n)| at the returned resolution.
    pub cauchy_gap: f64,
}

fn refine(
    settings: &NystromSettings,
    mut det_at: impl FnMut(usize) -> Result<f64>,
) -> Result<FredholmValue> {
    if settings.start_nodes < 4 {
        return domain("Nystrom discretisation needs at least 4 nodes");
    }
    let mut n = settings.start_nodes;
    let mut prev = det_at(n)?;
    loop {
        if 2 * n > settings.max_nodes {
            return Err(Error::Convergence(format!(
                "Fredholm determinant not converged to {:.1e} by {n} nodes",
                settings.tol
            )));
        }
        n *= 2;
        let next = det_at(n)?;
        let gap = (next - prev).abs();
        if gap <= settings.tol {
            return Ok(FredholmValue {
                value: next,
                nodes_used: n,
                cauchy_gap: gap,
            });
        }
        prev = next;
    }
}

/// det(I - K) on [a, b] with the symmetric weighting sqrt(w) K sqrt(w).
pub fn gap_probability_with(
    kernel: &StaticKernel,
    a: f64,
    b: f64,
    settings: &NystromSettings,
) -> Result<FredholmValue> {
    kernel.validate()?;
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return domain(format!("[{a}, {b}] is not a finite interval"));
    }
    if kernel.half_line() && a < 0.0 {
        return domain(format!("{kernel:?} lives on [0, inf); interval starts at {a}"));
    }
    if a == b {
        return Ok(FredholmValue {
            value: 1.0,
            nodes_used: 0,
            cauchy_gap: 0.0,
        });
    }
    let out = refine(settings, |n| {
        let rule = QuadratureRule::gauss_legendre(n, a, b);
        let root: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
        let mut m = DMatrix::<f64>::identity(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = root[i] * kernel.eval(rule.nodes[i], rule.nodes[j])? * root[j];
                m[(i, j)] -= v;
                if i != j {
                    m[(j, i)] -= v;
                }
            }
        }
        Ok(m.lu().determinant())
    })?;
    if !(-1e-9..=1.0 + 1e-9).contains(&out.value) {
        return Err(Error::Convergence(format!(
            "gap probability {} outside [0, 1]",
            out.value
        )));
    }
    Ok(out)
}

/// [`gap_probability_with`] starting from `nodes` nodes.
pub fn gap_probability(kernel: &StaticKernel, a: f64, b: f64, nodes: usize) -> Result<FredholmValue> {
    let settings = NystromSettings {
        start_nodes: nodes,
        ..NystromSettings::default()
    };
    gap_probability_with(kernel, a, b, &settings)
}

impl FredholmProblem {
    pub fn validate(&self) -> Result<()> {
        if self.times.is_empty() {
            return domain("at least one time is needed");
        }
        if self.times.len() != self.windows.len() {
            return domain("one window per time is needed");
        }
        if self.times.windows(2).any(|w| !(w[0] < w[1])) {
            return domain("times must be strictly increasing");
        }
        if self.times.iter().any(|t| !t.is_finite()) {
            return domain("times must be finite");
        }
        match &self.kernel {
            FredholmKernel::Static(k) => {
                k.validate()?;
                if self.times.len() > 1 {
                    return domain("a static kernel carries a single time");
                }
            }
            FredholmKernel::NonEq(spec) => {
                spec.validate()?;
                if self.times[0] <= 0.0 {
                    return domain("nonequilibrium kernels need positive times");
                }
            }
            FredholmKernel::Extended(_) => {}
        }
        for w in &self.windows {
            if !(w.a <= w.b) || !w.a.is_finite() || !w.b.is_finite() {
                return domain(format!("window [{}, {}] is not compact", w.a, w.b));
            }
            if self.kernel.half_line() && w.a < 0.0 {
                return domain(format!("window [{}, {}] leaves [0, inf)", w.a, w.b));
            }
            w.f.validate()?;
        }
        Ok(())
    }

    /// Determinant with n nodes per active window.
    pub fn determinant_at(&self, n: usize) -> Result<f64> {
        // Windows whose test function vanishes contribute identity blocks
        // and are dropped.
        let active: Vec<usize> = (0..self.times.len())
            .filter(|&m| !self.windows[m].f.is_zero() && self.windows[m].a < self.windows[m].b)
            .collect();
        if active.is_empty() {
            return Ok(1.0);
        }
        let mut nodes = Vec::new();
        for &m in &active {
            let w = &self.windows[m];
            let rule = QuadratureRule::gauss_legendre(n, w.a, w.b);
            for (x, q) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push((m, *x, w.f.chi(w.a, w.b, *x) * q));
            }
        }
        let size = nodes.len();
        let mut a = DMatrix::<f64>::identity(size, size);
        match &self.kernel {
            FredholmKernel::NonEq(spec) => {
                let forward: Vec<Vec<f64>> = nodes
                    .iter()
                    .map(|&(m, x, _)| spec.forward_factors(self.times[m], x))
                    .collect::<Result<_>>()?;
                let dual: Vec<Vec<f64>> = nodes
                    .iter()
                    .map(|&(m, y, _)| spec.dual_factors(self.times[m], y))
                    .collect::<Result<_>>()?;
                for (r, &(mr, x, _)) in nodes.iter().enumerate() {
                    for (c, &(mc, y, cw)) in nodes.iter().enumerate() {
                        let (s, t) = (self.times[mr], self.times[mc]);
                        let dot: f64 = forward[r].iter().zip(&dual[c]).map(|(p, q)| p * q).sum();
                        let k = dot - spec.propagator(s, x, t, y)?;
                        a[(r, c)] += k * cw;
                    }
                }
            }
            FredholmKernel::Static(k) => {
                for (r, &(_, x, _)) in nodes.iter().enumerate() {
                    for (c, &(_, y, cw)) in nodes.iter().enumerate() {
                        a[(r, c)] += k.eval(x, y)? * cw;
                    }
                }
            }
            FredholmKernel::Extended(k) => {
                for (r, &(mr, x, _)) in nodes.iter().enumerate() {
                    for (c, &(mc, y, cw)) in nodes.iter().enumerate() {
                        a[(r, c)] += k.eval(self.times[mr], x, self.times[mc], y)? * cw;
                    }
                }
            }
        }
        Ok(a.lu().determinant())
    }
}

/// The multitime generating function with default settings.
pub fn mgf(problem: &FredholmProblem) -> Result<FredholmValue> {
    mgf_with(problem, &NystromSettings::default())
}

pub fn mgf_with(problem: &FredholmProblem, settings: &NystromSettings) -> Result<FredholmValue> {
    problem.validate()?;
    if problem.windows.iter().all(|w| w.f.is_zero() || w.a == w.b) {
        return Ok(FredholmValue {
            value: 1.0,
            nodes_used: 0,
            cauchy_gap: 0.0,
        });
    }
    refine(settings, |n| problem.determinant_at(n))
}
