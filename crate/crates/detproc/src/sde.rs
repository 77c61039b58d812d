//! Euler-Maruyama integration of the finite noncolliding systems.
//!
//! Each step is checked before it is accepted: the proposed state must keep
//! the particle order, no gap may shrink below a tenth of its current
//! value, and on the half-line the lowest particle may not lose more than
//! 90% of its distance to the wall (unless the wall reflects). A rejected
//! step is split in two with a Brownian bridge, so the driving noise of the
//! path is unchanged and only the resolution adapts.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::configspace::Configuration;
use crate::error::{domain, Error, Result};
use crate::rng::PathRng;

const GAP_FLOOR: f64 = 0.1;
const MAX_HALVINGS: i32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SdeSystem {
    /// Dyson's Brownian motion; N is the length of the initial state.
    Dyson,
    /// Noncolliding squared Bessel processes of index nu.
    SqBessel { nu: f64 },
    /// Dyson model with the -x/(2N) restoring drift.
    DysonOu { n: usize },
    /// Dyson model shifted by t^2/4 - N^{1/3} t.
    AiryDrift { n: usize },
    /// Soft-edge rescaling of the restoring Dyson model.
    AiryOu { n: usize },
    /// Squared Bessel system with the -x/N restoring drift.
    SqBesselOu { nu: f64, n: usize },
    /// Square roots of [`SdeSystem::SqBesselOu`].
    BesselOu { nu: f64, n: usize },
}

impl SdeSystem {
    pub fn half_line(&self) -> bool {
        matches!(
            self,
            SdeSystem::SqBessel { .. } | SdeSystem::SqBesselOu { .. } | SdeSystem::BesselOu { .. }
        )
    }

    fn nu(&self) -> Option<f64> {
        match *self {
            SdeSystem::SqBessel { nu }
            | SdeSystem::SqBesselOu { nu, .. }
            | SdeSystem::BesselOu { nu, .. } => Some(nu),
            _ => None,
        }
    }

    /// Particle count fixed by the parameters, if any.
    pub fn particle_count(&self) -> Option<usize> {
        match *self {
            SdeSystem::Dyson | SdeSystem::SqBessel { .. } => None,
            SdeSystem::DysonOu { n }
            | SdeSystem::AiryDrift { n }
            | SdeSystem::AiryOu { n }
            | SdeSystem::SqBesselOu { n, .. }
            | SdeSystem::BesselOu { n, .. } => Some(n),
        }
    }

    /// True when the origin is a reflecting wall handled by |x|.
    fn reflects(&self) -> bool {
        self.nu().is_some_and(|nu| nu < 0.0)
    }

    pub fn validate(&self, initial: &[f64]) -> Result<()> {
        if let Some(nu) = self.nu() {
            if !(nu > -1.0) {
                return domain(format!("index nu = {nu} must exceed -1"));
            }
        }
        if let Some(n) = self.particle_count() {
            if n == 0 {
                return domain("N must be at least 1");
            }
            if initial.len() != n {
                return domain(format!("initial state has {} particles, expected {n}", initial.len()));
            }
        }
        if initial.is_empty() {
            return domain("initial state is empty");
        }
        if initial.iter().any(|x| !x.is_finite()) {
            return domain("initial state must be finite");
        }
        if initial.windows(2).any(|w| !(w[0] < w[1])) {
            return domain("initial state must be strictly increasing");
        }
        if self.half_line() && initial[0] < 0.0 {
            return domain("initial state must be nonnegative");
        }
        if matches!(self, SdeSystem::BesselOu { nu, .. } if *nu >= 0.0) && initial[0] == 0.0 {
            return domain("the 1/x drift needs a positive initial state when nu >= 0");
        }
        Ok(())
    }

    /// Drift of every coordinate at time t.
    pub fn drift(&self, t: f64, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        let nf = n as f64;
        for j in 0..n {
            let xj = x[j];
            let mut pair = 0.0;
            for (k, &xk) in x.iter().enumerate() {
                if k == j {
                    continue;
                }
                pair += match self {
                    SdeSystem::SqBessel { .. } | SdeSystem::SqBesselOu { .. } => 4.0 * xj / (xj - xk),
                    SdeSystem::BesselOu { .. } => 2.0 * xj / (xj * xj - xk * xk),
                    _ => 1.0 / (xj - xk),
                };
            }
            out[j] = pair
                + match *self {
                    SdeSystem::Dyson => 0.0,
                    SdeSystem::SqBessel { nu } => 2.0 * (nu + 1.0),
                    SdeSystem::DysonOu { .. } => -xj / (2.0 * nf),
                    SdeSystem::AiryDrift { .. } => 0.5 * t - nf.cbrt(),
                    SdeSystem::AiryOu { .. } => {
                        -(xj + 2.0 * nf.powf(2.0 / 3.0)) / (2.0 * nf.cbrt())
                    }
                    SdeSystem::SqBesselOu { nu, .. } => -xj / nf + 2.0 * (nu + 1.0),
                    SdeSystem::BesselOu { nu, .. } => -xj / (2.0 * nf) + (2.0 * nu + 1.0) / (2.0 * xj),
                };
        }
    }

    /// Diffusion coefficient; the square root uses max(x, 0).
    pub fn diffusion(&self, x: f64) -> f64 {
        match self {
            SdeSystem::SqBessel { .. } | SdeSystem::SqBesselOu { .. } => 2.0 * x.max(0.0).sqrt(),
            _ => 1.0,
        }
    }

    fn acceptable(&self, old: &[f64], new: &[f64]) -> bool {
        if new.iter().any(|v| !v.is_finite()) {
            return false;
        }
        for (o, n) in old.windows(2).zip(new.windows(2)) {
            let gap = n[1] - n[0];
            if !(gap > 0.0) || gap < GAP_FLOOR * (o[1] - o[0]) {
                return false;
            }
        }
        if self.half_line() && !self.reflects() && new[0] < GAP_FLOOR * old[0] {
            return false;
        }
        true
    }
}

/// Substep statistics of one path.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StepRecord {
    pub accepted: u64,
    pub rejected: u64,
    pub min_substep: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPath {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub seed: u64,
    pub stream: u64,
    pub record: StepRecord,
}

fn check_grid(horizon: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return domain(format!("step dt = {dt} must be positive"));
    }
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return domain(format!("horizon {horizon} must be finite and >= 0"));
    }
    Ok((horizon / dt - 1e-9).ceil().max(0.0) as usize)
}

/// Integrates from `initial` to `horizon`, calling `observe(t, state)` at
/// t = 0, dt, 2 dt, ... and at the horizon itself. Time-dependent drifts
/// are evaluated at the midpoint of each substep.
pub fn integrate_with(
    system: &SdeSystem,
    initial: &[f64],
    horizon: f64,
    dt: f64,
    rng: &mut PathRng,
    mut observe: impl FnMut(f64, &[f64]) -> Result<()>,
) -> Result<StepRecord> {
    system.validate(initial)?;
    let steps = check_grid(horizon, dt)?;
    let n = initial.len();
    let mut x = initial.to_vec();
    let mut proposal = vec![0.0; n];
    let mut drift = vec![0.0; n];
    let mut record = StepRecord {
        min_substep: f64::INFINITY,
        ..StepRecord::default()
    };
    let floor = dt * 2f64.powi(-MAX_HALVINGS);
    observe(0.0, &x)?;
    let mut pending: Vec<(f64, Vec<f64>)> = Vec::new();
    for k in 0..steps {
        let t0 = k as f64 * dt;
        let t1 = if k + 1 == steps { horizon } else { (k + 1) as f64 * dt };
        let h = t1 - t0;
        let mut dw = vec![0.0; n];
        rng.fill_normal(&mut dw);
        dw.iter_mut().for_each(|v| *v *= h.sqrt());
        pending.push((h, dw));
        let mut t = t0;
        while let Some((h, dw)) = pending.pop() {
            system.drift(t + 0.5 * h, &x, &mut drift);
            for j in 0..n {
                proposal[j] = x[j] + drift[j] * h + system.diffusion(x[j]) * dw[j];
                if system.reflects() {
                    proposal[j] = proposal[j].abs();
                }
            }
            if system.acceptable(&x, &proposal) {
                std::mem::swap(&mut x, &mut proposal);
                t += h;
                record.accepted += 1;
                record.min_substep = record.min_substep.min(h);
                continue;
            }
            record.rejected += 1;
            let half = 0.5 * h;
            if half < floor {
                return Err(Error::StepCollapse { t, h: half });
            }
            let mut first = vec![0.0; n];
            rng.fill_normal(&mut first);
            let spread = (0.25 * h).sqrt();
            let second: Vec<f64> = first
                .iter_mut()
                .zip(&dw)
                .map(|(z, w)| {
                    *z = 0.5 * w + spread * *z;
                    w - *z
                })
                .collect();
            pending.push((half, second));
            pending.push((half, first));
        }
        observe(t1, &x)?;
    }
    Ok(record)
}

/// Integrates one path on stream `stream` of `seed` and stores every state.
pub fn integrate_stream(
    system: &SdeSystem,
    initial: &[f64],
    horizon: f64,
    dt: f64,
    seed: u64,
    stream: u64,
) -> Result<LabeledPath> {
    let mut rng = PathRng::new(seed, stream);
    let mut times = Vec::new();
    let mut states = Vec::new();
    let record = integrate_with(system, initial, horizon, dt, &mut rng, |t, x| {
        times.push(t);
        states.push(x.to_vec());
        Ok(())
    })?;
    Ok(LabeledPath {
        times,
        states,
        seed,
        stream,
        record,
    })
}

/// [`integrate_stream`] on stream 0.
pub fn integrate(
    system: &SdeSystem,
    initial: &[f64],
    horizon: f64,
    dt: f64,
    seed: u64,
) -> Result<LabeledPath> {
    integrate_stream(system, initial, horizon, dt, seed, 0)
}

/// Time change linking the Dyson model and its restoring version:
/// tau_N(t) = (e^{2 gamma t} - 1)/(2 gamma) with gamma = 1/(2N).
pub fn tau_n(n: usize, t: f64) -> f64 {
    let gamma = 0.5 / n as f64;
    (2.0 * gamma * t).exp_m1() / (2.0 * gamma)
}

/// e^{-gamma t} X(tau_N(t)) from a Dyson state observed at tau_N(t).
pub fn dyson_to_ou(n: usize, t: f64, state_at_tau: &[f64]) -> Vec<f64> {
    let scale = (-0.5 * t / n as f64).exp();
    state_at_tau.iter().map(|x| scale * x).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum IsdeFamily {
    IsdeSin,
    IsdeAi,
    IsdeJ { nu: f64 },
}

/// Radius-r truncation of an infinite-system drift, seen by one tagged
/// particle of a finite configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedDrift {
    pub family: IsdeFamily,
    pub radius: f64,
    pub tagged: usize,
    pub config: Vec<f64>,
}

impl TruncatedDrift {
    /// The interaction sum over |x_k| < r. For the Airy family the
    /// compensator (2/pi) sqrt(r) is subtracted; for the Bessel family the
    /// constant 2(nu + 1) is not included.
    pub fn eval(&self) -> Result<f64> {
        if !(self.radius > 0.0) {
            return domain(format!("radius {} must be positive", self.radius));
        }
        let Some(&xj) = self.config.get(self.tagged) else {
            return domain(format!("no particle with index {}", self.tagged));
        };
        if !(xj.abs() < self.radius) {
            return domain(format!("tagged particle {xj} lies outside radius {}", self.radius));
        }
        if let IsdeFamily::IsdeJ { nu } = self.family {
            if !(nu > -1.0) {
                return domain(format!("index nu = {nu} must exceed -1"));
            }
        }
        let mut sum = 0.0;
        for (k, &xk) in self.config.iter().enumerate() {
            if k == self.tagged || !(xk.abs() < self.radius) {
                continue;
            }
            if xk == xj {
                return Err(Error::Singularity(format!(
                    "particles {k} and {} coincide at {xj}",
                    self.tagged
                )));
            }
            sum += match self.family {
                IsdeFamily::IsdeJ { .. } => 4.0 * xj / (xj - xk),
                _ => 1.0 / (xj - xk),
            };
        }
        if let IsdeFamily::IsdeAi = self.family {
            sum -= 2.0 / PI * self.radius.sqrt();
        }
        Ok(sum)
    }
}

pub fn truncated_drift(td: &TruncatedDrift) -> Result<f64> {
    td.eval()
}

/// The configuration of each stored state.
pub fn unlabel(path: &LabeledPath) -> Result<Vec<Configuration>> {
    path.states.iter().map(|s| Configuration::from_points(s)).collect()
}
