//! Validation suites behind `detproc validate <suite>`. Sizes come from the
//! flags; the checks themselves mirror the acceptance run.

use serde::Serialize;

use detproc::fredholm::{NystromSettings, TestFunction, Window};
use detproc::sampling::{sample, EnsembleSpec, LaguerreWeight};
use detproc::sde::SdeSystem;
use detproc::statickernels::StaticKernel;
use detproc::validate::*;

use crate::error::CliResult;
use crate::params::{Suite, ValidateParams};

#[derive(Debug, Serialize)]
pub struct VerdictEntry {
    pub check: String,
    pub passed: bool,
}

/// One entry of `verdicts`, `estimates` and `se` per check.
#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub verdicts: Vec<VerdictEntry>,
    pub estimates: Vec<f64>,
    pub se: Vec<Option<f64>>,
    pub seed: u64,
    pub config_echo: ValidateParams,
}

impl Report {
    fn push(&mut self, check: String, passed: bool, estimate: f64, se: Option<f64>) {
        self.verdicts.push(VerdictEntry { check, passed });
        self.estimates.push(estimate);
        self.se.push(se);
    }
}

pub fn run(suite: Suite, p: &ValidateParams) -> CliResult<Report> {
    let seed = p.seed.unwrap_or(0);
    let mut report = Report {
        suite,
        verdicts: Vec::new(),
        estimates: Vec::new(),
        se: Vec::new(),
        seed,
        config_echo: p.clone(),
    };
    let paths = p.paths.unwrap_or(10_000);
    let count = p.count.unwrap_or(100_000);
    let dt = p.dt.unwrap_or(1e-3);
    match suite {
        Suite::Rho => rho(&mut report, count, seed)?,
        Suite::Moments => moments(&mut report, count, seed)?,
        Suite::Displacement => displacement(&mut report, paths, dt, seed)?,
        Suite::Reversibility => reversibility(&mut report, paths, dt, seed)?,
        Suite::Multitime => multitime(&mut report, paths, dt, seed)?,
        Suite::ScalingLimits => scaling_limits(&mut report)?,
    }
    Ok(report)
}

fn rho(r: &mut Report, count: usize, seed: u64) -> CliResult<()> {
    let cases = [
        (EnsembleSpec::GueScaled { n: 8 }, (-18.0, 18.0)),
        (EnsembleSpec::Laguerre { n: 5, nu: 0.5, weight: LaguerreWeight::KernelScale }, (0.0, 120.0)),
    ];
    for (i, (spec, (lo, hi))) in cases.into_iter().enumerate() {
        let draws = sample(&spec, count, seed.wrapping_add(i as u64))?;
        let bins = estimate_rho(&draws.configurations, &Bins::Fixed { lo, hi, count: 40 })?;
        let cmp = compare_rho(bins, &ensemble_kernel(&spec)?, 2.0)?;
        r.push(
            format!("{spec:?}: fraction of 40 bins within 2 SE of the kernel diagonal >= 0.95"),
            cmp.fraction_within >= 0.95,
            cmp.fraction_within,
            None,
        );
    }
    Ok(())
}

fn moments(r: &mut Report, count: usize, seed: u64) -> CliResult<()> {
    let ensembles = [
        EnsembleSpec::GueScaled { n: 8 },
        EnsembleSpec::Laguerre { n: 8, nu: 0.0, weight: LaguerreWeight::KernelScale },
    ];
    for (i, spec) in ensembles.into_iter().enumerate() {
        let samples = sample(&spec, count, seed.wrapping_add(i as u64))?.configurations;
        let kernel = ensemble_kernel(&spec)?;
        for d in [(0.0, 1.0), (-2.0, 0.0)] {
            for k in [1, 2] {
                let b = check_moment_bound(&samples, &kernel, d, k)?;
                r.push(
                    format!("{spec:?} D = {d:?} k = {k}: E|eta(D) - rho(D)|^2k <= {:.6}", b.rhs),
                    b.verdict.passed(),
                    b.lhs.estimate,
                    Some(b.lhs.std_error),
                );
            }
        }
    }
    Ok(())
}

fn displacement(r: &mut Report, paths: usize, dt: f64, seed: u64) -> CliResult<()> {
    let setups = [
        (SdeSystem::DysonOu { n: 8 }, (-1.0, 1.0)),
        (SdeSystem::SqBesselOu { nu: 0.5, n: 8 }, (0.0, 4.0)),
    ];
    for (i, (system, d)) in setups.into_iter().enumerate() {
        let rep = check_displacement_tail(&DisplacementSetup {
            system,
            d,
            eps_multipliers: vec![0.5, 1.0, 2.0],
            horizons: vec![0.25, 1.0],
            paths,
            dt,
            seed: seed.wrapping_add(16 * i as u64),
        })?;
        r.push(
            format!("{system:?} D = {d:?}: max/min fitted C <= 3"),
            rep.stable,
            rep.c_ratio,
            None,
        );
    }
    Ok(())
}

fn reversibility(r: &mut Report, paths: usize, dt: f64, seed: u64) -> CliResult<()> {
    let stat = |center, half_width, power| LinearStatistic { center, half_width, power };
    let cases = [
        (SdeSystem::DysonOu { n: 4 }, [(stat(-1.0, 1.0, 1), stat(1.0, 1.0, 1)), (stat(0.0, 2.0, 2), stat(2.5, 1.5, 1))]),
        (
            SdeSystem::BesselOu { nu: 0.5, n: 4 },
            [(stat(2.0, 1.5, 1), stat(5.0, 1.5, 1)), (stat(3.0, 2.0, 2), stat(7.0, 2.0, 1))],
        ),
    ];
    let mut stream = seed;
    for (system, pairs) in cases {
        for (f, g) in pairs {
            let b = check_reversibility(&system, &f, &g, 0.5, paths, dt, stream)?;
            stream = stream.wrapping_add(1);
            r.push(
                format!("{system:?} {f:?} vs {g:?}: antisymmetric correlation = 0"),
                b.verdict.passed(),
                b.lhs.estimate,
                Some(b.lhs.std_error),
            );
        }
    }
    Ok(())
}

fn multitime(r: &mut Report, paths: usize, dt: f64, seed: u64) -> CliResult<()> {
    let windows = vec![
        Window { a: -3.0, b: 3.0, f: TestFunction::Bump { height: 0.5 } },
        Window { a: -3.0, b: 3.0, f: TestFunction::Bump { height: -0.7 } },
    ];
    for (i, config) in [vec![-1.0, 0.0, 1.0], vec![0.0]].into_iter().enumerate() {
        let setup = MultitimeSetup {
            config: config.clone(),
            times: vec![0.5, 1.0],
            windows: windows.clone(),
            paths,
            dt,
            seed: seed.wrapping_add(i as u64),
        };
        let rep = check_multitime_determinant(&setup, &NystromSettings::default())?;
        r.push(
            format!("xi = {config:?}: Fredholm mgf {:.8} equals the Monte Carlo mean", rep.fredholm.value),
            rep.agree,
            rep.monte_carlo.estimate,
            Some(rep.monte_carlo.std_error),
        );
        if let (Some(oracle), Some(ok)) = (rep.oracle, rep.oracle_agree) {
            r.push(
                format!("xi = {config:?}: Fredholm mgf within 1e-3 of the quadrature oracle"),
                ok,
                oracle,
                None,
            );
        }
    }
    Ok(())
}

fn sup_distance(grid: &[f64], f: impl Fn(f64, f64) -> detproc::Result<f64>) -> detproc::Result<f64> {
    let mut sup = 0.0f64;
    for &x in grid {
        for &y in grid {
            sup = sup.max(f(x, y)?.abs());
        }
    }
    Ok(sup)
}

fn scaling_limits(r: &mut Report) -> CliResult<()> {
    let sizes = [50usize, 200, 500];
    let bulk: Vec<f64> = (0..=20).map(|i| -2.0 + 0.2 * i as f64).collect();
    let hard: Vec<f64> = (0..=20).map(|i| 0.2 * i as f64).collect();
    let bessel = StaticKernel::Bessel { nu: 0.5 };
    let mut sine = Vec::new();
    let mut hard_edge = Vec::new();
    for &n in &sizes {
        let k = StaticKernel::Hermite { n };
        sine.push(sup_distance(&bulk, |x, y| Ok(k.eval(x, y)? - StaticKernel::Sine.eval(x, y)?))?);
        let k = StaticKernel::Laguerre { n, nu: 0.5 };
        hard_edge.push(sup_distance(&hard, |x, y| Ok(k.eval(x, y)? - bessel.eval(x, y)?))?);
    }
    for (name, d) in [("hermite -> sine on [-2, 2]^2", &sine), ("laguerre(nu = 0.5) -> bessel on [0, 4]^2", &hard_edge)] {
        let decreasing = d.windows(2).all(|w| w[1] < w[0]);
        for (n, v) in sizes.iter().zip(d.iter()) {
            r.push(
                format!("{name}: sup distance at N = {n}, strictly decreasing along N = 50, 200, 500"),
                decreasing,
                *v,
                None,
            );
        }
    }
    r.push("hermite -> sine: N = 500 distance <= 0.02".into(), sine[2] <= 0.02, sine[2], None);
    Ok(())
}
