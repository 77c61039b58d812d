//! Gauss-Legendre rules and panel quadrature.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug)]
pub struct Legendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn compute_legendre(n: usize) -> Legendre {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 + 1.0) * z * p2 - j as f64 * p3) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Legendre { nodes, weights }
}

/// Cached Gauss-Legendre rule with `n` points.
pub fn legendre(n: usize) -> Arc<Legendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Legendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(compute_legendre(n)))
        .clone()
}

/// Concrete nodes and weights on an interval, with the truncation point
/// used when the interval replaces a semi-infinite range.
#[derive(Debug, Clone, Default, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub truncation: Option<f64>,
}

impl QuadratureRule {
    /// Single Gauss-Legendre rule on [a, b].
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Self {
        Self::panels(a, b, 1, n)
    }

    /// Composite rule: `panels` equal panels of `order` points each.
    pub fn panels(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let gl = legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        QuadratureRule {
            nodes,
            weights,
            truncation: None,
        }
    }

    /// Composite rule whose panel width does not exceed `width`.
    pub fn panels_of_width(a: f64, b: f64, width: f64, order: usize) -> Self {
        let count = ((b - a).abs() / width).ceil().max(1.0) as usize;
        Self::panels(a, b, count, order)
    }

    pub fn with_truncation(mut self, at: f64) -> Self {
        self.truncation = Some(at);
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Appends the nodes of another rule.
    pub fn extend(&mut self, other: QuadratureRule) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights);
    }
}

/// Integral over [0, b] of a function with an algebraic singularity at the
/// origin: substitutes x = w^2 on [0, b].
pub fn sqrt_substituted(b: f64, panels: usize, order: usize) -> QuadratureRule {
    let base = QuadratureRule::panels(0.0, b.sqrt(), panels, order);
    QuadratureRule {
        weights: base
            .nodes
            .iter()
            .zip(&base.weights)
            .map(|(w, q)| 2.0 * w * q)
            .collect(),
        nodes: base.nodes.iter().map(|w| w * w).collect(),
        truncation: None,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum RuleKey {
    Jacobi(usize, u64),
    Hermite(usize),
    Gamma(usize, u64),
}

fn cached(key: RuleKey, build: impl FnOnce() -> Legendre) -> Arc<Legendre> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<Legendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return r.clone();
    }
    let rule = Arc::new(build());
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, rule.clone());
    rule
}

/// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights
/// the squared first eigenvector components times the total mass.
fn golub_welsch(diag: &[f64], off: &[f64], mass: f64) -> Legendre {
    let n = diag.len();
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jac[(k, k)] = diag[k];
        if k + 1 < n {
            jac[(k, k + 1)] = off[k];
            jac[(k + 1, k)] = off[k];
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mass * v * v)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Legendre {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss-Jacobi rule on [0, 1] for the weight u^beta (beta > -1).
pub fn gauss_jacobi_unit(n: usize, beta: f64) -> Arc<Legendre> {
    cached(RuleKey::Jacobi(n, beta.to_bits()), || {
        // Recurrence for (1+x)^beta on [-1, 1], mapped to [0, 1].
        let b = beta;
        let diag: Vec<f64> = (0..n)
            .map(|k| {
                let s = 2.0 * k as f64 + b;
                if k == 0 {
                    b / (b + 2.0)
                } else {
                    b * b / (s * (s + 2.0))
                }
            })
            .collect();
        let off: Vec<f64> = (1..n)
            .map(|k| {
                let m = k as f64;
                let s = 2.0 * m + b;
                (4.0 * m * m * (m + b) * (m + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
            })
            .collect();
        let mut rule = golub_welsch(&diag, &off, 1.0 / (beta + 1.0));
        for x in &mut rule.nodes {
            *x = 0.5 * (1.0 + *x);
        }
        rule
    })
}

/// Gauss-Hermite rule for the standard normal law (weights sum to 1).
pub fn gauss_hermite(n: usize) -> Arc<Legendre> {
    cached(RuleKey::Hermite(n), || {
        let off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
        golub_welsch(&vec![0.0; n], &off, 1.0)
    })
}

/// Gauss rule for the Gamma(shape, 1) law (weights sum to 1).
pub fn gauss_gamma(n: usize, shape: f64) -> Arc<Legendre> {
    cached(RuleKey::Gamma(n, shape.to_bits()), || {
        let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + shape).collect();
        let off: Vec<f64> = (1..n)
            .map(|k| (k as f64 * (k as f64 + shape - 1.0)).sqrt())
            .collect();
        golub_welsch(&diag, &off, 1.0)
    })
}

/// Runs `eval` at successively doubled resolution until two consecutive
/// values agree to `tol`; returns the finer value and its resolution.
pub fn refine_until(
    start: usize,
    max: usize,
    tol: f64,
    what: &str,
    mut eval: impl FnMut(usize) -> crate::Result<f64>,
) -> crate::Result<(f64, usize)> {
    let mut n = start.max(1);
    let mut prev = eval(n)?;
    while n < max {
        n *= 2;
        let next = eval(n)?;
        if (next - prev).abs() <= tol {
            return Ok((next, n));
        }
        prev = next;
    }
    Err(crate::Error::Convergence(format!(
        "{what}: no agreement to {tol:.1e} by resolution {n}"
    )))
}
