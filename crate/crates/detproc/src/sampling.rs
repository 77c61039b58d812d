//! Random-matrix samplers for the finite-N equilibrium ensembles and their
//! unnormalised log-densities.
//!
//! Hermite ensembles are drawn as eigenvalues of dense GUE matrices.
//! Laguerre ensembles with real index use the bidiagonal model
//! B B^T with chi-distributed entries, which has eigenvalue density
//! `prod |x_i - x_j|^2 prod x^a e^{-sum x/2}` for any real a > -1.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{ChiSquared, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{par_streams, PathRng};

/// Single-particle weight of the Laguerre family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaguerreWeight {
    /// x^nu e^{-x/(2N)}: the measure whose correlation kernel is the
    /// 2N-scaled Laguerre kernel, and the stationary law of the restoring
    /// squared Bessel system.
    #[default]
    KernelScale,
    /// x^{nu+1/2} e^{-x/(2N)}.
    HalfShiftedExponent,
    /// x^{nu+1/2} e^{-x/2}.
    UnitRateShifted,
}

impl LaguerreWeight {
    /// (exponent, rate) of the weight x^exponent e^{-rate x}.
    pub fn exponent_and_rate(&self, n: usize, nu: f64) -> (f64, f64) {
        let kernel_rate = 0.5 / n as f64;
        match self {
            LaguerreWeight::KernelScale => (nu, kernel_rate),
            LaguerreWeight::HalfShiftedExponent => (nu + 0.5, kernel_rate),
            LaguerreWeight::UnitRateShifted => (nu + 0.5, 0.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EnsembleSpec {
    /// prod |x_i - x_j|^2 exp(-sum x^2 / (2N)).
    GueScaled { n: usize },
    /// prod |x_i - x_j|^2 exp(-sum (x - N^{1/3})^2 / 2).
    GueShifted { n: usize },
    Laguerre {
        n: usize,
        nu: f64,
        #[serde(default)]
        weight: LaguerreWeight,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSample {
    pub spec: EnsembleSpec,
    pub seed: u64,
    pub configurations: Vec<Vec<f64>>,
}

impl EnsembleSpec {
    pub fn n(&self) -> usize {
        match *self {
            EnsembleSpec::GueScaled { n }
            | EnsembleSpec::GueShifted { n }
            | EnsembleSpec::Laguerre { n, .. } => n,
        }
    }

    pub fn half_line(&self) -> bool {
        matches!(self, EnsembleSpec::Laguerre { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n() == 0 {
            return domain("ensembles need N >= 1");
        }
        if let EnsembleSpec::Laguerre { nu, .. } = *self {
            if !(nu > -1.0) {
                return domain(format!("index nu = {nu} must exceed -1"));
            }
        }
        Ok(())
    }

    /// One sorted draw.
    pub fn draw(&self, rng: &mut PathRng) -> Result<Vec<f64>> {
        self.validate()?;
        let mut x = match *self {
            EnsembleSpec::GueScaled { n } => {
                let scale = (n as f64).sqrt();
                gue_eigenvalues(n, rng).into_iter().map(|v| scale * v).collect()
            }
            EnsembleSpec::GueShifted { n } => {
                let shift = (n as f64).cbrt();
                gue_eigenvalues(n, rng).into_iter().map(|v| v + shift).collect()
            }
            EnsembleSpec::Laguerre { n, nu, weight } => {
                let (exponent, rate) = weight.exponent_and_rate(n, nu);
                laguerre_eigenvalues(n, exponent, rng)?
                    .into_iter()
                    .map(|v| (v / (2.0 * rate)).max(0.0))
                    .collect::<Vec<f64>>()
            }
        };
        x.sort_by(f64::total_cmp);
        Ok(x)
    }

    /// log of the density without its normalising constant; -inf when two
    /// points coincide.
    pub fn log_density_unnormalized(&self, x: &[f64]) -> Result<f64> {
        self.validate()?;
        if x.len() != self.n() {
            return domain(format!("expected {} points, got {}", self.n(), x.len()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return domain("points must be finite");
        }
        let mut vandermonde = 0.0;
        for i in 0..x.len() {
            for j in 0..i {
                let d = (x[i] - x[j]).abs();
                if d == 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                vandermonde += 2.0 * d.ln();
            }
        }
        let nf = self.n() as f64;
        let single: f64 = match *self {
            EnsembleSpec::GueScaled { .. } => -x.iter().map(|v| v * v).sum::<f64>() / (2.0 * nf),
            EnsembleSpec::GueShifted { .. } => {
                let c = nf.cbrt();
                -0.5 * x.iter().map(|v| (v - c) * (v - c)).sum::<f64>()
            }
            EnsembleSpec::Laguerre { n, nu, weight } => {
                if x.iter().any(|&v| v < 0.0) {
                    return domain("Laguerre points must be >= 0");
                }
                let (exponent, rate) = weight.exponent_and_rate(n, nu);
                let mut acc = 0.0;
                for &v in x {
                    if v == 0.0 && exponent != 0.0 {
                        return Ok(if exponent > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY });
                    }
                    if exponent != 0.0 {
                        acc += exponent * v.ln();
                    }
                    acc -= rate * v;
                }
                acc
            }
        };
        Ok(vandermonde + single)
    }
}

/// Eigenvalues of a GUE matrix with density exp(-tr H^2 / 2).
fn gue_eigenvalues(n: usize, rng: &mut PathRng) -> Vec<f64> {
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let off = 0.5f64.sqrt();
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.normal(), 0.0);
        for j in 0..i {
            let z = Complex64::new(off * rng.normal(), off * rng.normal());
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// Eigenvalues with density prod |x_i - x_j|^2 prod x^exponent e^{-x/2}.
fn laguerre_eigenvalues(n: usize, exponent: f64, rng: &mut PathRng) -> Result<Vec<f64>> {
    let a = n as f64 + exponent;
    let mut b = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let dof = 2.0 * (a - i as f64);
        b[(i, i)] = chi(dof, rng)?;
        if i + 1 < n {
            b[(i + 1, i)] = chi(2.0 * (n - 1 - i) as f64, rng)?;
        }
    }
    let l = &b * b.transpose();
    Ok(l.symmetric_eigenvalues().iter().copied().collect())
}

fn chi(dof: f64, rng: &mut PathRng) -> Result<f64> {
    let dist = ChiSquared::new(dof)
        .map_err(|e| Error::Domain(format!("chi-square with {dof} degrees of freedom: {e}")))?;
    Ok(dist.sample(rng.generator()).sqrt())
}

/// `count` independent draws, draw i on stream i of `seed`.
pub fn sample(spec: &EnsembleSpec, count: usize, seed: u64) -> Result<EnsembleSample> {
    if count == 0 {
        return domain("count must be at least 1");
    }
    spec.validate()?;
    let configurations = par_streams(seed, count, |_, rng| spec.draw(rng))?;
    Ok(EnsembleSample {
        spec: *spec,
        seed,
        configurations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetropolisRun {
    pub states: Vec<Vec<f64>>,
    pub accepted: usize,
    pub proposed: usize,
}

/// Random-walk Metropolis chain on the unnormalised density, moving one
/// particle per proposal and recording the sorted state after every sweep.
pub fn metropolis(
    spec: &EnsembleSpec,
    start: &[f64],
    sweeps: usize,
    step: f64,
    rng: &mut PathRng,
) -> Result<MetropolisRun> {
    if !(step > 0.0) {
        return domain(format!("step {step} must be positive"));
    }
    let mut x = start.to_vec();
    let mut logp = spec.log_density_unnormalized(&x)?;
    if !logp.is_finite() {
        return domain("starting state has zero density");
    }
    let mut run = MetropolisRun {
        states: Vec::with_capacity(sweeps),
        accepted: 0,
        proposed: 0,
    };
    for _ in 0..sweeps {
        for j in 0..x.len() {
            let old = x[j];
            x[j] = old + step * rng.normal();
            run.proposed += 1;
            let candidate = if spec.half_line() && x[j] < 0.0 {
                f64::NEG_INFINITY
            } else {
                spec.log_density_unnormalized(&x)?
            };
            if rng.uniform().ln() < candidate - logp {
                logp = candidate;
                run.accepted += 1;
            } else {
                x[j] = old;
            }
        }
        let mut sorted = x.clone();
        sorted.sort_by(f64::total_cmp);
        run.states.push(sorted);
    }
    Ok(run)
}
