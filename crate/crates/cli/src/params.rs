//! Per-command parameters. Each struct doubles as the clap flag set and as
//! the schema of the TOML config file; flags override file values.

use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use detproc::configspace::{Configuration, Density, SpaceParams};
use detproc::exttransition::ExtendedKernel;
use detproc::fredholm::{FredholmKernel, TestFunction, Window};
use detproc::noneqkernels::{NonEqFamily, NonEqKernelSpec};
use detproc::sampling::{EnsembleSpec, LaguerreWeight};
use detproc::sde::SdeSystem;
use detproc::statickernels::StaticKernel;

use crate::error::{config_error, CliResult};

/// Overlays non-null flag values on the file values, rejecting unknown keys
/// in the file.
pub fn merge<T>(file: Option<&toml::Table>, flags: &T) -> CliResult<T>
where
    T: Serialize + DeserializeOwned + Default,
{
    let base: T = match file {
        Some(table) => T::deserialize(toml::Value::Table(table.clone()))
            .map_err(|e| crate::error::CliError::Config(format!("config file: {e}")))?,
        None => T::default(),
    };
    let mut merged = serde_json::to_value(&base)?;
    let overlay = serde_json::to_value(flags)?;
    if let (Some(m), Some(o)) = (merged.as_object_mut(), overlay.as_object()) {
        for (k, v) in o {
            if !v.is_null() {
                m.insert(k.clone(), v.clone());
            }
        }
    }
    Ok(serde_json::from_value(merged)?)
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| crate::error::CliError::Config(format!("missing parameter --{name}")))
}

fn static_kernel(family: &str, nu: Option<f64>, n: Option<usize>) -> CliResult<StaticKernel> {
    Ok(match family {
        "sine" => StaticKernel::Sine,
        "airy" => StaticKernel::Airy,
        "bessel" => StaticKernel::Bessel { nu: need(&nu, "nu")? },
        "hermite" => StaticKernel::Hermite { n: need(&n, "n")? },
        "laguerre" => StaticKernel::Laguerre {
            n: need(&n, "n")?,
            nu: need(&nu, "nu")?,
        },
        other => return config_error(format!("unknown kernel family '{other}'")),
    })
}

fn extended_kernel(family: &str, nu: Option<f64>) -> CliResult<ExtendedKernel> {
    Ok(match family {
        "sine" => ExtendedKernel::ExtSine,
        "airy" => ExtendedKernel::ExtAiry,
        "bessel" => ExtendedKernel::ExtBessel { nu: need(&nu, "nu")? },
        other => return config_error(format!("no extended kernel for family '{other}'")),
    })
}

fn noneq_spec(family: &str, nu: Option<f64>, n: Option<usize>, points: &Option<Vec<f64>>) -> CliResult<NonEqKernelSpec> {
    let family = match family {
        "sine" => NonEqFamily::Sine,
        "airy_prelimit" => NonEqFamily::AiryPrelimit { n: need(&n, "n")? },
        "bessel" => NonEqFamily::Bessel { nu: need(&nu, "nu")? },
        other => return config_error(format!("unknown nonequilibrium family '{other}'")),
    };
    let config = Configuration::from_points(&need(points, "points")?)?;
    Ok(NonEqKernelSpec::new(family, config)?)
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct KernelEvalParams {
    /// sine, airy, bessel, hermite or laguerre.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Evaluate the space-time kernel at times s and t.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub extended: Option<bool>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
}

impl KernelEvalParams {
    pub fn resolved(mut self) -> Self {
        self.extended.get_or_insert(false);
        self
    }

    pub fn run(&self) -> CliResult<serde_json::Value> {
        let family = need(&self.family, "family")?;
        let (x, y) = (need(&self.x, "x")?, need(&self.y, "y")?);
        let value = if self.extended == Some(true) {
            let k = extended_kernel(&family, self.nu)?;
            k.eval(need(&self.s, "s")?, x, need(&self.t, "t")?, y)?
        } else {
            static_kernel(&family, self.nu, self.n)?.eval(x, y)?
        };
        Ok(serde_json::json!({ "value": value }))
    }
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct KernelNoneqParams {
    /// sine, airy_prelimit or bessel.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Starting configuration, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Also evaluate the contour representation.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub crosscheck: Option<bool>,
}

impl KernelNoneqParams {
    pub fn resolved(mut self) -> Self {
        self.crosscheck.get_or_insert(false);
        self
    }

    pub fn run(&self) -> CliResult<serde_json::Value> {
        let spec = noneq_spec(&need(&self.family, "family")?, self.nu, self.n, &self.points)?;
        let (s, x, t, y) = (need(&self.s, "s")?, need(&self.x, "x")?, need(&self.t, "t")?, need(&self.y, "y")?);
        if self.crosscheck == Some(true) {
            let c = spec.contour_crosscheck(s, x, t, y)?;
            Ok(serde_json::json!({
                "value": c.residue_value,
                "contour_value": c.contour_value,
            }))
        } else {
            Ok(serde_json::json!({ "value": spec.eval(s, x, t, y)? }))
        }
    }
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct SimulateParams {
    /// dyson, sqbessel, dyson_ou, airy_drift, airy_ou, sqbessel_ou or bessel_ou.
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Initial state; restoring systems default to a stationary draw.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Option<Vec<f64>>,
    /// Keep every k-th grid state (the final state is always kept).
    #[arg(long)]
    pub record_every: Option<usize>,
}

impl SimulateParams {
    pub fn resolved(mut self) -> Self {
        self.t.get_or_insert(1.0);
        self.dt.get_or_insert(1e-3);
        self.paths.get_or_insert(1);
        self.seed.get_or_insert(0);
        self.record_every.get_or_insert(1);
        if self.n.is_none() {
            self.n = self.points.as_ref().map(|p| p.len());
        }
        self
    }

    pub fn system(&self) -> CliResult<SdeSystem> {
        let name = need(&self.system, "system")?;
        let n = || need(&self.n, "n");
        let nu = || need(&self.nu, "nu");
        Ok(match name.as_str() {
            "dyson" => SdeSystem::Dyson,
            "sqbessel" => SdeSystem::SqBessel { nu: nu()? },
            "dyson_ou" => SdeSystem::DysonOu { n: n()? },
            "airy_drift" => SdeSystem::AiryDrift { n: n()? },
            "airy_ou" => SdeSystem::AiryOu { n: n()? },
            "sqbessel_ou" => SdeSystem::SqBesselOu { nu: nu()?, n: n()? },
            "bessel_ou" => SdeSystem::BesselOu { nu: nu()?, n: n()? },
            other => return config_error(format!("unknown system '{other}'")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum WeightArg {
    KernelScale,
    HalfShiftedExponent,
    UnitRateShifted,
}

impl From<WeightArg> for LaguerreWeight {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::KernelScale => LaguerreWeight::KernelScale,
            WeightArg::HalfShiftedExponent => LaguerreWeight::HalfShiftedExponent,
            WeightArg::UnitRateShifted => LaguerreWeight::UnitRateShifted,
        }
    }
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct SampleParams {
    /// gue_scaled, gue_shifted or laguerre.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Laguerre single-particle weight.
    #[arg(long, value_enum)]
    pub weight: Option<WeightArg>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SampleParams {
    pub fn resolved(mut self) -> Self {
        self.count.get_or_insert(1);
        self.seed.get_or_insert(0);
        if self.family.as_deref() == Some("laguerre") {
            self.weight.get_or_insert(WeightArg::KernelScale);
        }
        self
    }

    pub fn spec(&self) -> CliResult<EnsembleSpec> {
        let n = need(&self.n, "n")?;
        Ok(match need(&self.family, "family")?.as_str() {
            "gue_scaled" => EnsembleSpec::GueScaled { n },
            "gue_shifted" => EnsembleSpec::GueShifted { n },
            "laguerre" => EnsembleSpec::Laguerre {
                n,
                nu: need(&self.nu, "nu")?,
                weight: self.weight.unwrap_or(WeightArg::KernelScale).into(),
            },
            other => return config_error(format!("unknown ensemble '{other}'")),
        })
    }
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct GapParams {
    /// sine, airy, bessel, hermite or laguerre.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Starting node count, doubled until converged.
    #[arg(long)]
    pub nodes: Option<usize>,
}

impl GapParams {
    pub fn resolved(mut self) -> Self {
        self.nodes.get_or_insert(16);
        self
    }

    pub fn run(&self) -> CliResult<serde_json::Value> {
        let k = static_kernel(&need(&self.family, "family")?, self.nu, self.n)?;
        let v = detproc::fredholm::gap_probability(&k, need(&self.a, "a")?, need(&self.b, "b")?, self.nodes.unwrap_or(16))?;
        Ok(serde_json::to_value(v)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum KernelKind {
    Static,
    Extended,
    Noneq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FunctionKind {
    /// chi = z on the window (f = log(1 + z)); one value per time.
    Indicator,
    /// f = c0 + c1 x on the window; two values per time.
    Linear,
    /// f = h (1 - u^2)^2 across the window; one value per time.
    Bump,
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct MgfParams {
    #[arg(long, value_enum)]
    pub kernel: Option<KernelKind>,
    /// Kernel family, as for the kernel commands.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Starting configuration for nonequilibrium kernels.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub times: Option<Vec<f64>>,
    /// Left window ends, one per time.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<f64>>,
    /// Right window ends, one per time.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub function: Option<FunctionKind>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,
    #[arg(long)]
    pub nodes: Option<usize>,
}

impl MgfParams {
    pub fn resolved(mut self) -> Self {
        self.kernel.get_or_insert(KernelKind::Static);
        self.function.get_or_insert(FunctionKind::Indicator);
        self.nodes.get_or_insert(16);
        if self.times.is_none() && self.kernel == Some(KernelKind::Static) {
            self.times = Some(vec![0.0]);
        }
        self
    }

    pub fn run(&self) -> CliResult<serde_json::Value> {
        let family = need(&self.family, "family")?;
        let kernel = match self.kernel.unwrap_or(KernelKind::Static) {
            KernelKind::Static => FredholmKernel::Static(static_kernel(&family, self.nu, self.n)?),
            KernelKind::Extended => FredholmKernel::Extended(extended_kernel(&family, self.nu)?),
            KernelKind::Noneq => FredholmKernel::NonEq(noneq_spec(&family, self.nu, self.n, &self.points)?),
        };
        let times = need(&self.times, "times")?;
        let (a, b) = (need(&self.a, "a")?, need(&self.b, "b")?);
        let values = need(&self.values, "values")?;
        let m = times.len();
        let function = self.function.unwrap_or(FunctionKind::Indicator);
        let per = if function == FunctionKind::Linear { 2 } else { 1 };
        if a.len() != m || b.len() != m || values.len() != per * m {
            return config_error(format!(
                "{m} times need {m} window ends each and {} function values",
                per * m
            ));
        }
        let windows = (0..m)
            .map(|i| Window {
                a: a[i],
                b: b[i],
                f: match function {
                    FunctionKind::Indicator => TestFunction::Chi { z: values[i] },
                    FunctionKind::Bump => TestFunction::Bump { height: values[i] },
                    FunctionKind::Linear => TestFunction::Samples {
                        values: vec![values[2 * i] + values[2 * i + 1] * a[i], values[2 * i] + values[2 * i + 1] * b[i]],
                    },
                },
            })
            .collect();
        let problem = detproc::fredholm::FredholmProblem { kernel, times, windows };
        let settings = detproc::fredholm::NystromSettings {
            start_nodes: self.nodes.unwrap_or(16),
            ..Default::default()
        };
        Ok(serde_json::to_value(detproc::fredholm::mgf_with(&problem, &settings)?)?)
    }
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct ConfigCheckParams {
    /// CSV with a position column and an optional multiplicity column.
    #[arg(long)]
    pub input: Option<String>,
    /// zero, sine, airy or bessel.
    #[arg(long)]
    pub density: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub l0: Option<u32>,
    #[arg(long)]
    pub m0: Option<u32>,
    #[arg(long)]
    pub l_max: Option<f64>,
}

impl ConfigCheckParams {
    pub fn resolved(mut self) -> Self {
        self.epsilon.get_or_insert(0.5);
        self.l0.get_or_insert(1);
        self.m0.get_or_insert(1);
        if self.l_max.is_none() {
            self.l_max = self.l0.map(|l| 100.0 * l as f64);
        }
        self
    }

    pub fn space(&self) -> CliResult<SpaceParams> {
        let rho = match need(&self.density, "density")?.as_str() {
            "zero" => Density::Zero,
            "sine" => Density::Sine,
            "airy" => Density::Airy,
            "bessel" => Density::Bessel { nu: need(&self.nu, "nu")? },
            other => return config_error(format!("unknown density '{other}'")),
        };
        Ok(SpaceParams {
            rho,
            epsilon: need(&self.epsilon, "epsilon")?,
            kappa: need(&self.kappa, "kappa")?,
            l0: need(&self.l0, "l0")?,
            m0: need(&self.m0, "m0")?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
pub enum Suite {
    Rho,
    Moments,
    Displacement,
    Reversibility,
    Multitime,
    ScalingLimits,
}

#[derive(Args, Serialize, Deserialize, Default, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct ValidateParams {
    /// Monte Carlo paths per check.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Ensemble draws per check.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ValidateParams {
    pub fn resolved(mut self) -> Self {
        self.paths.get_or_insert(10_000);
        self.count.get_or_insert(100_000);
        self.dt.get_or_insert(1e-3);
        self.seed.get_or_insert(0);
        self
    }
}
