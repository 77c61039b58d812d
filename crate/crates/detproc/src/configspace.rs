//! Finite configurations of points on the line and the counting functionals
//! used to describe the configuration spaces of the three limit processes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::QuadratureRule;
use crate::specfun::airy;
use crate::statickernels::StaticKernel;

/// A finite point configuration: sorted distinct support points with
/// positive integer multiplicities.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, u32)>", into = "Vec<(f64, u32)>")]
pub struct Configuration {
    points: Vec<f64>,
    multiplicities: Vec<u32>,
}

impl TryFrom<Vec<(f64, u32)>> for Configuration {
    type Error = Error;
    fn try_from(pairs: Vec<(f64, u32)>) -> Result<Self> {
        Configuration::new(pairs)
    }
}

impl From<Configuration> for Vec<(f64, u32)> {
    fn from(c: Configuration) -> Self {
        c.iter().collect()
    }
}

impl Configuration {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a configuration from (point, multiplicity) pairs; repeated
    /// points are merged.
    pub fn new(pairs: impl IntoIterator<Item = (f64, u32)>) -> Result<Self> {
        let mut pairs: Vec<(f64, u32)> = pairs.into_iter().collect();
        for &(x, m) in &pairs {
            if !x.is_finite() {
                return Err(Error::Config(format!("point {x} is not finite")));
            }
            if m == 0 {
                return Err(Error::Config(format!("point {x} has multiplicity 0")));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut points: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut multiplicities: Vec<u32> = Vec::with_capacity(pairs.len());
        for (x, m) in pairs {
            match points.last() {
                Some(&last) if last == x => *multiplicities.last_mut().unwrap() += m,
                _ => {
                    points.push(x);
                    multiplicities.push(m);
                }
            }
        }
        Ok(Configuration {
            points,
            multiplicities,
        })
    }

    /// The unlabeled image of a point list.
    pub fn from_points(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| (x, 1)))
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, u32)> + '_ {
        self.points.iter().copied().zip(self.multiplicities.iter().copied())
    }

    /// Points repeated according to multiplicity, in increasing order.
    pub fn expanded(&self) -> Vec<f64> {
        self.iter()
            .flat_map(|(x, m)| std::iter::repeat_n(x, m as usize))
            .collect()
    }

    /// Total number of points, xi(R).
    pub fn total(&self) -> usize {
        self.multiplicities.iter().map(|&m| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// No multiple points.
    pub fn is_simple(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    /// No mass on (-inf, 0).
    pub fn is_nonnegative(&self) -> bool {
        self.points.first().is_none_or(|&x| x >= 0.0)
    }

    /// xi([a, b]).
    pub fn count_closed(&self, a: f64, b: f64) -> usize {
        self.iter()
            .filter(|&(x, _)| a <= x && x <= b)
            .map(|(_, m)| m as usize)
            .sum()
    }

    /// xi([a, b)).
    pub fn count_half_open(&self, a: f64, b: f64) -> usize {
        let lo = self.points.partition_point(|&x| x < a);
        let hi = self.points.partition_point(|&x| x < b);
        if hi <= lo {
            return 0;
        }
        self.multiplicities[lo..hi].iter().map(|&m| m as usize).sum()
    }

    /// Restriction to the closed interval [a, b].
    pub fn restrict(&self, a: f64, b: f64) -> Self {
        let (points, multiplicities) = self.iter().filter(|&(x, _)| a <= x && x <= b).unzip();
        Configuration {
            points,
            multiplicities,
        }
    }

    /// Every point moved by u.
    pub fn shift(&self, u: f64) -> Self {
        Configuration {
            points: self.points.iter().map(|x| x + u).collect(),
            multiplicities: self.multiplicities.clone(),
        }
    }

    /// Smallest distance between distinct support points.
    pub fn min_gap(&self) -> Option<f64> {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(|a, b| a.total_cmp(b))
    }
}

/// sign(x) |x|^kappa.
pub fn g_kappa(kappa: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(kappa)
    }
}

/// Index k of the half-open cell [g(k), g(k+1)) containing x.
pub fn cell_index(kappa: f64, x: f64) -> i64 {
    let mut k = g_kappa(1.0 / kappa, x).floor() as i64;
    while g_kappa(kappa, k as f64) > x {
        k -= 1;
    }
    while g_kappa(kappa, (k + 1) as f64) <= x {
        k += 1;
    }
    k
}

/// Occupation counts of the cells [g(k), g(k+1)), as sorted (k, count).
pub fn cell_counts(config: &Configuration, kappa: f64) -> Vec<(i64, usize)> {
    let mut out: Vec<(i64, usize)> = Vec::new();
    for (x, m) in config.iter() {
        let k = cell_index(kappa, x);
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += m as usize,
            _ => out.push((k, m as usize)),
        }
    }
    out
}

/// Reference one-point densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "density", rename_all = "snake_case")]
pub enum Density {
    Zero,
    Sine,
    Airy,
    Bessel { nu: f64 },
}

impl Density {
    /// Upper end of the admissible range for kappa.
    pub fn kappa_star(&self) -> f64 {
        match self {
            Density::Zero => f64::INFINITY,
            Density::Sine => 1.0,
            Density::Airy => 2.0 / 3.0,
            Density::Bessel { .. } => 2.0,
        }
    }

    /// rho(R) when finite.
    pub fn total(&self) -> Option<f64> {
        match self {
            Density::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn at(&self, x: f64) -> Result<f64> {
        match *self {
            Density::Zero => Ok(0.0),
            Density::Sine => Ok(1.0 / PI),
            Density::Airy => StaticKernel::Airy.eval(x, x),
            Density::Bessel { nu } => {
                if x < 0.0 {
                    Ok(0.0)
                } else {
                    StaticKernel::Bessel { nu }.eval(x, x)
                }
            }
        }
    }

    /// rho([a, b]).
    pub fn mass(&self, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        match *self {
            Density::Zero => Ok(0.0),
            Density::Sine => Ok((b - a) / PI),
            Density::Airy => Ok(airy_tail_mass(a) - airy_tail_mass(b)),
            Density::Bessel { nu } => {
                let (a, b) = (a.max(0.0), b.max(0.0));
                if b <= a {
                    return Ok(0.0);
                }
                // x = w^2 removes the x^nu behaviour at the origin and makes
                // the oscillation uniform.
                let (wa, wb) = (a.sqrt(), b.sqrt());
                let rule = QuadratureRule::panels_of_width(wa, wb, 0.5, 20);
                let k = StaticKernel::Bessel { nu };
                let mut sum = 0.0;
                for (w, q) in rule.nodes.iter().zip(&rule.weights) {
                    sum += q * 2.0 * w * k.eval(w * w, w * w)?;
                }
                Ok(sum)
            }
        }
    }
}

/// Integral of the Airy kernel diagonal over [s, inf).
fn airy_tail_mass(s: f64) -> f64 {
    if s == f64::INFINITY {
        return 0.0;
    }
    let a = airy(s);
    (2.0 * s * s * a.ai * a.ai - 2.0 * s * a.aip * a.aip - a.ai * a.aip) / 3.0
}

/// Parameters of a single set in the configuration-space family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub rho: Density,
    pub epsilon: f64,
    pub kappa: f64,
    pub l0: u32,
    pub m0: u32,
}

impl SpaceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return domain(format!("epsilon = {} must lie in (0, 1)", self.epsilon));
        }
        if !(self.kappa > 0.0 && self.kappa < self.rho.kappa_star()) {
            return domain(format!(
                "kappa = {} must lie in (0, {})",
                self.kappa,
                self.rho.kappa_star()
            ));
        }
        if self.l0 == 0 || self.m0 == 0 {
            return domain("L0 and m0 must be positive integers");
        }
        Ok(())
    }
}

/// First violated condition found by [`membership`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Witness {
    TotalMass { count: usize, rho: f64 },
    NegativePoint { x: f64 },
    RightWindow { l: f64, rho_mass: f64, count: usize },
    LeftWindow { l: f64, rho_mass: f64, count: usize },
    Cell { k: i64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// All conditions hold for window lengths in [L0, certified_up_to].
    Member { certified_up_to: f64 },
    Violated { witness: Witness },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Checks the window-count and cell-count conditions for window lengths
/// L in [L0, L_max]. Windows are [0, L] and [-L, 0].
pub fn membership(config: &Configuration, params: &SpaceParams, l_max: f64) -> Result<Membership> {
    membership_about(config, params, l_max, 0.0)
}

/// As [`membership`], with windows and cells placed relative to `origin`.
pub fn membership_about(
    config: &Configuration,
    params: &SpaceParams,
    l_max: f64,
    origin: f64,
) -> Result<Membership> {
    params.validate()?;
    let l0 = params.l0 as f64;
    if !(l_max >= l0) {
        return domain(format!("L_max = {l_max} is below L0 = {l0}"));
    }
    let local = config.shift(-origin);
    if let Some(total) = params.rho.total() {
        if local.total() as f64 != total {
            return Ok(Membership::Violated {
                witness: Witness::TotalMass {
                    count: local.total(),
                    rho: total,
                },
            });
        }
    }
    if let Density::Bessel { .. } = params.rho {
        if let Some(&x) = local.points().first().filter(|&&x| x < 0.0) {
            return Ok(Membership::Violated {
                witness: Witness::NegativePoint { x: x + origin },
            });
        }
    }
    // Counts jump only at support points, so checking a quarter-unit grid
    // plus every point (and just below it) covers the extremes.
    let mut lengths: Vec<f64> = (0..)
        .map(|i| l0 + 0.25 * i as f64)
        .take_while(|&l| l <= l_max)
        .collect();
    lengths.push(l_max);
    for &x in local.points() {
        let a = x.abs();
        if a >= l0 && a <= l_max {
            lengths.push(a);
            let below = a * (1.0 - 1e-12);
            if below >= l0 {
                lengths.push(below);
            }
        }
    }
    lengths.sort_by(|a, b| a.total_cmp(b));
    lengths.dedup();
    for &l in &lengths {
        let bound = l.powf(params.epsilon);
        let rho_mass = params.rho.mass(0.0, l)?;
        let count = local.count_closed(0.0, l);
        if (rho_mass - count as f64).abs() > bound {
            return Ok(Membership::Violated {
                witness: Witness::RightWindow { l, rho_mass, count },
            });
        }
    }
    for &l in &lengths {
        let bound = l.powf(params.epsilon);
        let rho_mass = params.rho.mass(-l, 0.0)?;
        let count = local.count_closed(-l, 0.0);
        if (rho_mass - count as f64).abs() > bound {
            return Ok(Membership::Violated {
                witness: Witness::LeftWindow { l, rho_mass, count },
            });
        }
    }
    if let Some(&(k, count)) = cell_counts(&local, params.kappa)
        .iter()
        .find(|&&(_, c)| c > params.m0 as usize)
    {
        return Ok(Membership::Violated {
            witness: Witness::Cell { k, count },
        });
    }
    Ok(Membership::Member {
        certified_up_to: l_max,
    })
}

/// Points ordered by nondecreasing absolute value; of x and -x the
/// negative one comes first. Multiplicities are repeated.
pub fn label_map(config: &Configuration) -> Vec<f64> {
    let mut v = config.expanded();
    v.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    v
}

/// The configuration formed by the first n labels.
pub fn first_labels(config: &Configuration, n: usize) -> Configuration {
    let labels = label_map(config);
    let take = &labels[..n.min(labels.len())];
    Configuration::from_points(take).expect("labels are finite")
}

/// Largest cell occupation over the dyadic-type time grid of each cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusReport {
    pub max_count: usize,
    pub witness_cell: Option<i64>,
    pub witness_time: Option<f64>,
    pub grid_points_checked: usize,
}

/// For each cell k the configuration is inspected at the times j/|k|^l,
/// j = 1..|k|^l (cell 0 uses the single time 1). Every such time must be
/// present in `path` (to relative accuracy 1e-9).
pub fn path_modulus(path: &[(f64, Configuration)], kappa: f64, ell: u32) -> Result<ModulusReport> {
    if !(kappa > 0.0) {
        return domain("kappa must be positive");
    }
    let mut report = ModulusReport {
        max_count: 0,
        witness_cell: None,
        witness_time: None,
        grid_points_checked: 0,
    };
    if path.is_empty() {
        return Ok(report);
    }
    let find = |t: f64| -> Result<&Configuration> {
        let i = path.partition_point(|(s, _)| *s < t - 1e-9 * t.max(1.0));
        match path.get(i) {
            Some((s, c)) if (s - t).abs() <= 1e-9 * t.max(1.0) => Ok(c),
            _ => domain(format!("path has no state at grid time {t}")),
        }
    };
    let mut cells: Vec<i64> = path
        .iter()
        .flat_map(|(_, c)| cell_counts(c, kappa).into_iter().map(|(k, _)| k))
        .collect();
    cells.sort_unstable();
    cells.dedup();
    for k in cells {
        let steps = (k.unsigned_abs().max(1)).pow(ell);
        let (lo, hi) = (g_kappa(kappa, k as f64), g_kappa(kappa, (k + 1) as f64));
        for j in 1..=steps {
            let t = j as f64 / steps as f64;
            let count = find(t)?.count_half_open(lo, hi);
            report.grid_points_checked += 1;
            if count > report.max_count {
                report.max_count = count;
                report.witness_cell = Some(k);
                report.witness_time = Some(t);
            }
        }
    }
    Ok(report)
}
