//! Monte Carlo estimators and statistical checks of the determinantal
//! identities and moment bounds.
//!
//! Every check returns its estimate together with a standard error; verdicts
//! use a 3 SE threshold unless stated otherwise. All randomness comes from
//! `(seed, index)` streams, so reports are reproducible.

use serde::{Deserialize, Serialize};

use crate::configspace::Configuration;
use crate::error::{domain, Error, Result};
use crate::exttransition::heat_kernel;
use crate::fredholm::{mgf_with, FredholmKernel, FredholmProblem, FredholmValue, NystromSettings, Window};
use crate::noneqkernels::{NonEqFamily, NonEqKernelSpec};
use crate::quadrature::{gauss_jacobi_unit, QuadratureRule};
use crate::rng::{par_streams, PathRng};
use crate::sampling::{EnsembleSpec, LaguerreWeight};
use crate::sde::{integrate_with, SdeSystem};
use crate::specfun::gauss_tail;
use crate::statickernels::StaticKernel;

/// Minimum number of samples for histogram estimates.
pub const MIN_RHO_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl EstimatorResult {
    /// Sample mean and its standard error.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return domain("an estimate needs at least two samples");
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        Ok(EstimatorResult {
            estimate: mean,
            std_error: (var / n).sqrt(),
            n_samples: values.len(),
        })
    }

    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.estimate - target).abs() <= sigmas * self.std_error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Bins {
    Fixed { lo: f64, hi: f64, count: usize },
    /// Width 2 IQR n^{-1/3} over the pooled points, spanning their range.
    FreedmanDiaconis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoBin {
    pub lo: f64,
    pub hi: f64,
    pub density: EstimatorResult,
}

fn bin_edges(samples: &[Vec<f64>], bins: &Bins) -> Result<(f64, f64, usize)> {
    match *bins {
        Bins::Fixed { lo, hi, count } => {
            if !(lo < hi) || count == 0 || !lo.is_finite() || !hi.is_finite() {
                return domain(format!("bad binning [{lo}, {hi}) x {count}"));
            }
            Ok((lo, hi, count))
        }
        Bins::FreedmanDiaconis => {
            let mut pooled: Vec<f64> = samples.iter().flatten().copied().collect();
            if pooled.len() < 2 {
                return domain("too few points for Freedman-Diaconis bins");
            }
            pooled.sort_by(f64::total_cmp);
            let q = |p: f64| pooled[((pooled.len() - 1) as f64 * p).round() as usize];
            let (lo, hi) = (pooled[0], *pooled.last().unwrap());
            let width = 2.0 * (q(0.75) - q(0.25)) / (pooled.len() as f64).cbrt();
            if !(width > 0.0) || !(hi > lo) {
                return domain("degenerate sample: Freedman-Diaconis width is zero");
            }
            let count = ((hi - lo) / width).ceil().max(1.0) as usize;
            // The top edge is nudged so the maximum lands in the last bin.
            Ok((lo, lo + count as f64 * width * (1.0 + 1e-12), count))
        }
    }
}

/// One-point density histogram. Bins are half-open [lo, hi); the standard
/// error of each bin comes from the per-sample counts.
pub fn estimate_rho(samples: &[Vec<f64>], bins: &Bins) -> Result<Vec<RhoBin>> {
    if samples.len() < MIN_RHO_SAMPLES {
        return domain(format!(
            "{} samples given, at least {MIN_RHO_SAMPLES} needed",
            samples.len()
        ));
    }
    let (lo, hi, count) = bin_edges(samples, bins)?;
    let width = (hi - lo) / count as f64;
    let mut per_bin = vec![vec![0.0; samples.len()]; count];
    for (s, x) in samples.iter().enumerate() {
        for &v in x {
            let b = ((v - lo) / width).floor();
            if b >= 0.0 && (b as usize) < count {
                per_bin[b as usize][s] += 1.0 / width;
            }
        }
    }
    per_bin
        .iter()
        .enumerate()
        .map(|(b, values)| {
            Ok(RhoBin {
                lo: lo + b as f64 * width,
                hi: lo + (b + 1) as f64 * width,
                density: EstimatorResult::from_values(values)?,
            })
        })
        .collect()
}

/// Two-point density on the product grid `edges x edges`: ordered pairs of
/// distinct particles per unit area.
pub fn estimate_pair_correlation(samples: &[Vec<f64>], edges: &[f64]) -> Result<Vec<Vec<EstimatorResult>>> {
    if samples.len() < MIN_RHO_SAMPLES {
        return domain(format!(
            "{} samples given, at least {MIN_RHO_SAMPLES} needed",
            samples.len()
        ));
    }
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) {
        return domain("pair grid edges must be strictly increasing");
    }
    let cells = edges.len() - 1;
    let locate = |v: f64| -> Option<usize> {
        if v < edges[0] || v >= edges[cells] {
            return None;
        }
        Some(edges.partition_point(|e| *e <= v) - 1)
    };
    let mut values = vec![vec![vec![0.0; samples.len()]; cells]; cells];
    for (s, x) in samples.iter().enumerate() {
        let located: Vec<Option<usize>> = x.iter().map(|&v| locate(v)).collect();
        for (i, a) in located.iter().enumerate() {
            for (j, b) in located.iter().enumerate() {
                if let (true, Some(a), Some(b)) = (i != j, a, b) {
                    let area = (edges[a + 1] - edges[*a]) * (edges[b + 1] - edges[*b]);
                    values[*a][*b][s] += 1.0 / area;
                }
            }
        }
    }
    values
        .iter()
        .map(|row| row.iter().map(|v| EstimatorResult::from_values(v)).collect())
        .collect()
}

/// Mass of the kernel diagonal over [a, b], clipped to the kernel domain.
pub fn kernel_mass(kernel: &StaticKernel, a: f64, b: f64) -> Result<f64> {
    kernel.validate()?;
    let a = if kernel.half_line() { a.max(0.0) } else { a };
    if !(b > a) {
        return Ok(0.0);
    }
    let edge_exponent = match *kernel {
        StaticKernel::Bessel { nu } | StaticKernel::Laguerre { nu, .. } if a == 0.0 => Some(nu),
        _ => None,
    };
    if let Some(nu) = edge_exponent {
        // K(x, x) = x^nu g(x) with g smooth: Gauss-Jacobi in u = x / b.
        let integrate = |n: usize| -> Result<f64> {
            let rule = gauss_jacobi_unit(n, nu);
            let mut acc = 0.0;
            for (u, w) in rule.nodes.iter().zip(&rule.weights) {
                let x = b * u;
                acc += w * kernel.eval(x, x)? / u.powf(nu);
            }
            Ok(acc * b)
        };
        let mut n = 16;
        let mut prev = integrate(n)?;
        while n < 512 {
            n *= 2;
            let next = integrate(n)?;
            if (next - prev).abs() <= 1e-12 * (1.0 + next.abs()) {
                return Ok(next);
            }
            prev = next;
        }
        return Err(Error::Convergence(format!("diagonal mass on [0, {b}] did not settle")));
    }
    let integrate = |n: usize| -> Result<f64> {
        let rule = QuadratureRule::panels(a, b, n, 16);
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w * kernel.eval(*x, *x)?;
        }
        Ok(acc)
    };
    let mut panels = 4;
    let mut prev = integrate(panels)?;
    while panels < 4096 {
        panels *= 2;
        let next = integrate(panels)?;
        if (next - prev).abs() <= 1e-12 * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Convergence(format!("diagonal mass on [{a}, {b}] did not settle")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoComparison {
    pub bins: Vec<RhoBin>,
    /// Bin average of K(x, x).
    pub expected: Vec<f64>,
    pub within: usize,
    pub fraction_within: f64,
}

/// Compares a histogram with the bin-averaged kernel diagonal, counting bins
/// within `sigmas` standard errors.
pub fn compare_rho(bins: Vec<RhoBin>, kernel: &StaticKernel, sigmas: f64) -> Result<RhoComparison> {
    let mut expected = Vec::with_capacity(bins.len());
    let mut within = 0;
    for b in &bins {
        let e = kernel_mass(kernel, b.lo, b.hi)? / (b.hi - b.lo);
        if b.density.within(e, sigmas) {
            within += 1;
        }
        expected.push(e);
    }
    let fraction_within = within as f64 / bins.len().max(1) as f64;
    Ok(RhoComparison {
        bins,
        expected,
        within,
        fraction_within,
    })
}

/// Correlation kernel of an ensemble, when one is implemented.
pub fn ensemble_kernel(spec: &EnsembleSpec) -> Result<StaticKernel> {
    match *spec {
        EnsembleSpec::GueScaled { n } => Ok(StaticKernel::Hermite { n }),
        EnsembleSpec::Laguerre {
            n,
            nu,
            weight: LaguerreWeight::KernelScale,
        } => Ok(StaticKernel::Laguerre { n, nu }),
        _ => domain(format!("no correlation kernel is implemented for {spec:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    ViolatedBeyond3Se,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Satisfied
        } else {
            Verdict::ViolatedBeyond3Se
        }
    }

    pub fn passed(&self) -> bool {
        *self == Verdict::Satisfied
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: EstimatorResult,
    pub rhs: f64,
    pub verdict: Verdict,
}

impl BoundCheck {
    /// lhs <= rhs up to 3 SE.
    fn upper(lhs: EstimatorResult, rhs: f64) -> Self {
        BoundCheck {
            lhs,
            rhs,
            verdict: Verdict::from_bool(lhs.estimate <= rhs + 3.0 * lhs.std_error),
        }
    }

    /// lhs = rhs up to 3 SE.
    fn equality(lhs: EstimatorResult, rhs: f64) -> Self {
        BoundCheck {
            lhs,
            rhs,
            verdict: Verdict::from_bool(lhs.within(rhs, 3.0)),
        }
    }
}

/// E|eta(D) - rho(D)|^{2k} against (3 rho(D))^k, with rho(D) from the
/// kernel diagonal.
pub fn check_moment_bound(
    samples: &[Vec<f64>],
    kernel: &StaticKernel,
    d: (f64, f64),
    k: u32,
) -> Result<BoundCheck> {
    if !(1..=3).contains(&k) {
        return domain(format!("moment order k = {k} must be 1, 2 or 3"));
    }
    if !(d.0 <= d.1) {
        return domain(format!("[{}, {}] is not an interval", d.0, d.1));
    }
    let rho = kernel_mass(kernel, d.0, d.1)?;
    let values: Vec<f64> = samples
        .iter()
        .map(|x| {
            let count = x.iter().filter(|&&v| v >= d.0 && v <= d.1).count() as f64;
            (count - rho).powi(2 * k as i32)
        })
        .collect();
    Ok(BoundCheck::upper(EstimatorResult::from_values(&values)?, (3.0 * rho).powi(k as i32)))
}

/// [`check_moment_bound`] on fresh draws from an ensemble.
pub fn check_moment_bound_for(
    spec: &EnsembleSpec,
    d: (f64, f64),
    k: u32,
    count: usize,
    seed: u64,
) -> Result<BoundCheck> {
    let kernel = ensemble_kernel(spec)?;
    let samples = crate::sampling::sample(spec, count, seed)?.configurations;
    check_moment_bound(&samples, &kernel, d, k)
}

/// A draw from the stationary law of a restoring system.
pub fn stationary_draw(system: &SdeSystem, rng: &mut PathRng) -> Result<Vec<f64>> {
    match *system {
        SdeSystem::DysonOu { n } => EnsembleSpec::GueScaled { n }.draw(rng),
        SdeSystem::AiryOu { n } => {
            let nf = n as f64;
            let x = EnsembleSpec::GueScaled { n }.draw(rng)?;
            Ok(x.iter().map(|v| v / nf.cbrt() - 2.0 * nf.powf(2.0 / 3.0)).collect())
        }
        SdeSystem::SqBesselOu { nu, n } => EnsembleSpec::Laguerre {
            n,
            nu,
            weight: LaguerreWeight::KernelScale,
        }
        .draw(rng),
        SdeSystem::BesselOu { nu, n } => {
            let x = EnsembleSpec::Laguerre {
                n,
                nu,
                weight: LaguerreWeight::KernelScale,
            }
            .draw(rng)?;
            Ok(x.iter().map(|v| v.sqrt()).collect())
        }
        _ => domain(format!("{system:?} has no stationary law")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSetup {
    /// DysonOu, or SqBesselOu with displacement measured on sqrt(X).
    pub system: SdeSystem,
    pub d: (f64, f64),
    /// eps = multiplier * sqrt(T).
    pub eps_multipliers: Vec<f64>,
    pub horizons: Vec<f64>,
    pub paths: usize,
    pub dt: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailCell {
    pub eps: f64,
    pub horizon: f64,
    pub probability: EstimatorResult,
    /// Upper normal tail at eps / sqrt(T).
    pub erf: f64,
    pub fitted_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementReport {
    pub rho_d: f64,
    pub cells: Vec<TailCell>,
    /// max / min of the fitted constants.
    pub c_ratio: f64,
    pub stable: bool,
    /// Estimates non-increasing in eps at each horizon.
    pub monotone: bool,
}

/// Probability that some particle starting in D moves farther than eps
/// within [0, T], against (rho(D) v 1) Erf(eps / sqrt T) with the constant
/// fitted per grid cell. Suprema are taken over the integration grid.
pub fn check_displacement_tail(setup: &DisplacementSetup) -> Result<DisplacementReport> {
    let (kernel, root) = match setup.system {
        SdeSystem::DysonOu { n } => (StaticKernel::Hermite { n }, false),
        SdeSystem::SqBesselOu { nu, n } => (StaticKernel::Laguerre { n, nu }, true),
        other => return domain(format!("displacement check is defined for dyson_ou and sqbessel_ou, not {other:?}")),
    };
    if setup.eps_multipliers.is_empty() || setup.horizons.is_empty() {
        return domain("the (eps, T) grid is empty");
    }
    if setup.eps_multipliers.iter().chain(&setup.horizons).any(|v| !(*v > 0.0)) {
        return domain("eps multipliers and horizons must be positive");
    }
    let rho_d = kernel_mass(&kernel, setup.d.0, setup.d.1)?;
    let coordinate = |v: f64| if root { v.max(0.0).sqrt() } else { v };
    let mut cells = Vec::new();
    let mut monotone = true;
    for (h, &horizon) in setup.horizons.iter().enumerate() {
        let displacement: Vec<f64> = par_streams(setup.seed.wrapping_add(h as u64), setup.paths, |_, rng| {
            let x0 = stationary_draw(&setup.system, rng)?;
            let tagged: Vec<usize> = (0..x0.len())
                .filter(|&j| x0[j] >= setup.d.0 && x0[j] <= setup.d.1)
                .collect();
            let start: Vec<f64> = x0.iter().map(|&v| coordinate(v)).collect();
            let mut worst = 0.0f64;
            integrate_with(&setup.system, &x0, horizon, setup.dt, rng, |_, x| {
                for &j in &tagged {
                    worst = worst.max((coordinate(x[j]) - start[j]).abs());
                }
                Ok(())
            })?;
            Ok(worst)
        })?;
        let mut previous = f64::INFINITY;
        for &m in &setup.eps_multipliers {
            let eps = m * horizon.sqrt();
            let hits: Vec<f64> = displacement.iter().map(|&w| if w > eps { 1.0 } else { 0.0 }).collect();
            let probability = EstimatorResult::from_values(&hits)?;
            let erf = gauss_tail(m);
            if probability.estimate > previous && setup.eps_multipliers.windows(2).all(|w| w[0] < w[1]) {
                monotone = false;
            }
            previous = probability.estimate;
            cells.push(TailCell {
                eps,
                horizon,
                probability,
                erf,
                fitted_c: probability.estimate / (rho_d.max(1.0) * erf),
            });
        }
    }
    let cmax = cells.iter().map(|c| c.fitted_c).fold(0.0, f64::max);
    let cmin = cells.iter().map(|c| c.fitted_c).fold(f64::INFINITY, f64::min);
    let c_ratio = if cmin > 0.0 { cmax / cmin } else { f64::INFINITY };
    Ok(DisplacementReport {
        rho_d,
        cells,
        c_ratio,
        stable: c_ratio <= 3.0,
        monotone,
    })
}

/// (sum_j phi(x_j))^power with phi(x) = (1 - ((x - center)/half_width)^2)^2
/// on |x - center| < half_width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearStatistic {
    pub center: f64,
    pub half_width: f64,
    pub power: u32,
}

impl LinearStatistic {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let sum: f64 = x
            .iter()
            .map(|v| {
                let u = (v - self.center) / self.half_width;
                if u.abs() < 1.0 {
                    (1.0 - u * u).powi(2)
                } else {
                    0.0
                }
            })
            .sum();
        sum.powi(self.power as i32)
    }
}

/// E[f(X(0)) g(X(t))] - E[g(X(0)) f(X(t))] from stationary starts; zero
/// for a reversible system.
pub fn check_reversibility(
    system: &SdeSystem,
    f: &LinearStatistic,
    g: &LinearStatistic,
    t: f64,
    paths: usize,
    dt: f64,
    seed: u64,
) -> Result<BoundCheck> {
    if !(t >= 0.0) {
        return domain(format!("lag t = {t} must be >= 0"));
    }
    if !(f.half_width > 0.0 && g.half_width > 0.0) {
        return domain("test functions need positive support width");
    }
    let diffs = par_streams(seed, paths, |_, rng| {
        let x0 = stationary_draw(system, rng)?;
        let mut last = x0.clone();
        if t > 0.0 {
            integrate_with(system, &x0, t, dt, rng, |_, x| {
                last.copy_from_slice(x);
                Ok(())
            })?;
        }
        Ok(f.eval(&x0) * g.eval(&last) - g.eval(&x0) * f.eval(&last))
    })?;
    let lhs = EstimatorResult::from_values(&diffs)?;
    Ok(BoundCheck::equality(lhs, 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultitimeSetup {
    pub config: Vec<f64>,
    pub times: Vec<f64>,
    pub windows: Vec<Window>,
    pub paths: usize,
    pub dt: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultitimeReport {
    pub fredholm: FredholmValue,
    pub monte_carlo: EstimatorResult,
    /// Gaussian quadrature value, for a single particle.
    pub oracle: Option<f64>,
    pub agree: bool,
    pub oracle_agree: Option<bool>,
}

/// E[exp sum_m f_m(B(t_m))] for a Brownian motion started at x0, by
/// nested Gauss-Legendre quadrature over the windows.
pub fn brownian_mgf_oracle(x0: f64, times: &[f64], windows: &[Window], nodes: usize) -> Result<f64> {
    if times.len() != windows.len() || times.is_empty() || times.len() > 2 {
        return domain("the quadrature oracle handles one or two times");
    }
    let chi_rule = |w: &Window| -> (Vec<f64>, Vec<f64>) {
        let rule = QuadratureRule::gauss_legendre(nodes, w.a, w.b);
        let weights = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, q)| q * w.f.chi(w.a, w.b, *x))
            .collect();
        (rule.nodes, weights)
    };
    // E prod (1 + chi_m) expanded over subsets of times.
    let (x1, w1) = chi_rule(&windows[0]);
    let t1 = times[0];
    let single1: f64 = x1.iter().zip(&w1).map(|(x, w)| w * heat_kernel(t1, x - x0)).sum();
    if times.len() == 1 {
        return Ok(1.0 + single1);
    }
    let (x2, w2) = chi_rule(&windows[1]);
    let t2 = times[1];
    let single2: f64 = x2.iter().zip(&w2).map(|(y, w)| w * heat_kernel(t2, y - x0)).sum();
    let mut pair = 0.0;
    for (x, wx) in x1.iter().zip(&w1) {
        let inner: f64 = x2.iter().zip(&w2).map(|(y, wy)| wy * heat_kernel(t2 - t1, y - x)).sum();
        pair += wx * heat_kernel(t1, x - x0) * inner;
    }
    Ok(1.0 + single1 + single2 + pair)
}

/// Fredholm determinant of the sine-type kernel started from `config`
/// against the direct Monte Carlo expectation over Dyson paths.
pub fn check_multitime_determinant(
    setup: &MultitimeSetup,
    settings: &NystromSettings,
) -> Result<MultitimeReport> {
    let n = setup.config.len();
    if n == 0 || n > 4 {
        return domain(format!("{n} particles given; 1 to 4 supported"));
    }
    if setup.times.is_empty() || setup.times.len() > 2 {
        return domain("one or two times supported");
    }
    if !(setup.dt > 0.0) {
        return domain("dt must be positive");
    }
    let config = Configuration::from_points(&setup.config)?;
    if !config.is_simple() {
        return domain("the starting configuration has a multiple point");
    }
    let problem = FredholmProblem {
        kernel: FredholmKernel::NonEq(NonEqKernelSpec::new(NonEqFamily::Sine, config)?),
        times: setup.times.clone(),
        windows: setup.windows.clone(),
    };
    let fredholm = mgf_with(&problem, settings)?;

    let steps: Vec<usize> = setup
        .times
        .iter()
        .map(|t| {
            let k = (t / setup.dt).round();
            if (k * setup.dt - t).abs() > 1e-9 * t.max(1.0) {
                domain(format!("time {t} is not a multiple of dt = {}", setup.dt))
            } else {
                Ok(k as usize)
            }
        })
        .collect::<Result<_>>()?;
    let mut start = setup.config.clone();
    start.sort_by(f64::total_cmp);
    let horizon = *setup.times.last().unwrap();
    let values = par_streams(setup.seed, setup.paths, |_, rng| {
        let mut exponent = 0.0;
        let mut step = 0usize;
        integrate_with(&SdeSystem::Dyson, &start, horizon, setup.dt, rng, |t, x| {
            let k = (t / setup.dt).round() as usize;
            if k >= step {
                for (m, &target) in steps.iter().enumerate() {
                    if k == target {
                        let w = &setup.windows[m];
                        exponent += x.iter().map(|&v| w.f.f(w.a, w.b, v)).sum::<f64>();
                    }
                }
                step = k + 1;
            }
            Ok(())
        })?;
        Ok(exponent.exp())
    })?;
    let monte_carlo = EstimatorResult::from_values(&values)?;
    let oracle = if n == 1 {
        Some(brownian_mgf_oracle(setup.config[0], &setup.times, &setup.windows, 256)?)
    } else {
        None
    };
    Ok(MultitimeReport {
        agree: monte_carlo.within(fredholm.value, 3.0),
        oracle_agree: oracle.map(|o| (o - fredholm.value).abs() <= 1e-3 && monte_carlo.within(o, 3.0)),
        fredholm,
        monte_carlo,
        oracle,
    })
}
