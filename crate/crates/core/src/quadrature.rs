//! Globally adaptive Gauss-Legendre quadrature on a finite interval.
//!
//! Each panel carries a coarse rule on the whole panel and the same rule on
//! both halves; the difference is the error estimate. The panel with the
//! largest estimate is bisected until the summed estimate meets the tolerance.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Maximum number of panel bisections.
    pub max_subdivisions: usize,
    /// Gauss-Legendre points per panel.
    pub panel_order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Minimum power `k` of the substitution `λ = u^k` applied near `λ = 0`.
    pub endpoint_exponent: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            max_subdivisions: 40,
            panel_order: 16,
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            endpoint_exponent: 2.0,
        }
    }
}

impl QuadratureConfig {
    /// Tolerances near machine precision, for divided differences of reconstructed functions.
    pub fn tight() -> Self {
        Self { max_subdivisions: 200, abs_tol: 1e-14, rel_tol: 1e-14, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig("quadrature tolerances must be positive".into()));
        }
        if self.panel_order < 4 {
            return Err(Error::InvalidConfig("panel order must be at least 4".into()));
        }
        if !(self.endpoint_exponent >= 1.0) {
            return Err(Error::InvalidConfig("endpoint exponent must be at least 1".into()));
        }
        Ok(())
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn apply<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    error: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(rule: &Rule, f: &F, a: f64, b: f64, coarse: f64) -> Self {
        let m = 0.5 * (a + b);
        let left = rule.apply(f, a, m);
        let right = rule.apply(f, m, b);
        Self { a, b, left, right, error: (coarse - left - right).abs() }
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

/// `∫_a^b f`, with the initial panels split at `breakpoints` (those outside `(a, b)` are ignored).
pub fn integrate<F>(f: F, a: f64, b: f64, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if a == b {
        return Ok(0.0);
    }
    let (nodes, weights) = gauss_legendre(cfg.panel_order);
    let rule = Rule { nodes, weights };

    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let mut panels: Vec<Panel> = cuts
        .windows(2)
        .map(|w| {
            let coarse = rule.apply(&f, w[0], w[1]);
            Panel::new(&rule, &f, w[0], w[1], coarse)
        })
        .collect();

    let mut subdivisions = 0;
    loop {
        let total: f64 = panels.iter().map(Panel::value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureFailure { estimate: f64::INFINITY, subdivisions });
        }
        if error <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(total);
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::QuadratureFailure { estimate: error, subdivisions });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            return Err(Error::QuadratureFailure { estimate: error, subdivisions });
        }
        panels.push(Panel::new(&rule, &f, p.a, m, p.left));
        panels.push(Panel::new(&rule, &f, m, p.b, p.right));
        subdivisions += 1;
    }
}
