//! Sampled checks that a function is consistent with membership in the set of
//! representing functions: normalization, the functional equation, the
//! `f_min ≤ f ≤ f_max` bounds, Loewner matrix positivity and monotonicity on
//! random matrix pairs `0 < A ≤ B`.
//!
//! Passing is a necessary condition only; a report never claims a proof.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fisher::FisherFunction;
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::quadrature::QuadratureConfig;
use crate::random::{random_complex, random_hermitian, rng_from_seed, trial_seed};
use crate::spectral::{psd_min_eigenvalue, spectral_decompose};

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    /// Largest Loewner matrix size.
    pub max_points: usize,
    /// Sampling range for Loewner points.
    pub t_range: (f64, f64),
    /// Minimum spacing of Loewner points in `ln t`.
    pub min_log_gap: f64,
    pub matrix_dims: Vec<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            tol: 1e-9,
            seed: 42,
            max_points: 6,
            t_range: (1e-2, 1e2),
            min_log_gap: 0.05,
            matrix_dims: vec![2, 3, 4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the check's scale-normalized margin; negative beyond
    /// `-tolerance` is a failure.
    pub worst_margin: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub function: String,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

impl MembershipReport {
    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary(&self) -> String {
        if self.passed {
            format!("{}: consistent with operator monotone", self.function)
        } else {
            let failed: Vec<&str> =
                self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            format!("{}: not operator monotone (failed: {})", self.function, failed.join(", "))
        }
    }

    /// Worst normalized margin over all checks.
    pub fn worst_margin(&self) -> f64 {
        self.checks.iter().map(|c| c.worst_margin).fold(f64::INFINITY, f64::min)
    }
}

fn outcome(name: &str, tol: f64, result: Result<(f64, String)>) -> CheckOutcome {
    match result {
        Ok((worst, detail)) => CheckOutcome {
            name: name.into(),
            passed: worst >= -tol,
            worst_margin: worst,
            tolerance: tol,
            detail,
        },
        Err(e) => CheckOutcome {
            name: name.into(),
            passed: false,
            worst_margin: f64::NEG_INFINITY,
            tolerance: tol,
            detail: format!("evaluation failed: {e}"),
        },
    }
}

fn log_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub fn verify_fop_membership(f: &FisherFunction, cfg: &VerifyConfig) -> MembershipReport {
    let f = f.with_quadrature(QuadratureConfig::tight());
    let tol = cfg.tol;
    let checks = vec![
        outcome("normalization", tol, normalization(&f)),
        outcome("functional_equation", tol, functional_equation(&f)),
        outcome("bounds", tol, bounds(&f)),
        outcome("loewner", tol, loewner(&f, cfg)),
        outcome("matrix_pair", tol, matrix_pair(&f, cfg)),
    ];
    let passed = checks.iter().all(|c| c.passed);
    MembershipReport { function: f.name().to_string(), checks, passed }
}

fn normalization(f: &FisherFunction) -> Result<(f64, String)> {
    let v = f.eval(1.0)?;
    Ok((-(v - 1.0).abs(), format!("f(1) = {v}")))
}

fn functional_equation(f: &FisherFunction) -> Result<(f64, String)> {
    let mut worst = 0.0f64;
    let mut at = 1.0;
    for t in log_grid(41, 1e-4, 1e4) {
        let a = f.eval(t)?;
        let b = t * f.eval(1.0 / t)?;
        let r = (a - b).abs() / a.abs().max(1.0);
        if r > worst {
            worst = r;
            at = t;
        }
    }
    Ok((-worst, format!("max relative residual {worst:.3e} at t = {at}")))
}

fn bounds(f: &FisherFunction) -> Result<(f64, String)> {
    let mut worst = f64::INFINITY;
    let mut at = 1.0;
    for t in log_grid(41, 1e-4, 1e4) {
        let v = f.eval(t)?;
        let lo = 2.0 * t / (1.0 + t);
        let hi = 0.5 * (1.0 + t);
        let m = (v - lo).min(hi - v) / hi;
        if m < worst {
            worst = m;
            at = t;
        }
    }
    Ok((worst, format!("worst relative margin to [f_min, f_max] at t = {at}")))
}

fn sample_points<R: Rng>(rng: &mut R, m: usize, cfg: &VerifyConfig) -> Vec<f64> {
    let (lo, hi) = (cfg.t_range.0.ln(), cfg.t_range.1.ln());
    loop {
        let mut logs: Vec<f64> = (0..m).map(|_| rng.random_range(lo..hi)).collect();
        logs.sort_by(f64::total_cmp);
        if logs.windows(2).all(|w| w[1] - w[0] >= cfg.min_log_gap) {
            return logs.into_iter().map(f64::exp).collect();
        }
    }
}

/// Divided-difference matrix `[(f(t_i) - f(t_j)) / (t_i - t_j)]` with `f'(t_i)` on the diagonal.
pub fn loewner_matrix(f: &FisherFunction, points: &[f64]) -> Result<ComplexMatrix> {
    let values = points.iter().map(|&t| f.eval(t)).collect::<Result<Vec<f64>>>()?;
    let m = points.len();
    let mut rows = vec![vec![0.0; m]; m];
    for i in 0..m {
        rows[i][i] = f.derivative(points[i])?;
        for j in 0..i {
            let d = (values[i] - values[j]) / (points[i] - points[j]);
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }
    ComplexMatrix::from_real_rows(&rows)
}

fn loewner(f: &FisherFunction, cfg: &VerifyConfig) -> Result<(f64, String)> {
    let mut worst = f64::INFINITY;
    let mut worst_points = Vec::new();
    for trial in 0..cfg.trials {
        let mut rng = rng_from_seed(trial_seed(cfg.seed, trial as u64));
        let m = rng.random_range(2..=cfg.max_points.max(2));
        let points = sample_points(&mut rng, m, cfg);
        let l = loewner_matrix(f, &points)?;
        let scale = l.max_abs().max(1.0);
        let min_eig = psd_min_eigenvalue(&HermitianMatrix::from_hermitian_part(&l))? / scale;
        if min_eig < worst {
            worst = min_eig;
            worst_points = points;
        }
    }
    Ok((worst, format!("{} point sets; worst at {:?}", cfg.trials, worst_points)))
}

fn apply_function(f: &FisherFunction, h: &HermitianMatrix) -> Result<ComplexMatrix> {
    let d = spectral_decompose(h)?;
    let values = d.eigenvalues.iter().map(|&l| f.eval(l)).collect::<Result<Vec<f64>>>()?;
    Ok(d.synthesize(&values))
}

fn random_positive<R: Rng>(rng: &mut R, dim: usize) -> HermitianMatrix {
    let u = spectral_decompose(&random_hermitian(rng, dim)).expect("Jacobi on a random matrix").eigenvectors;
    let spectrum: Vec<f64> = (0..dim).map(|_| rng.random_range((0.05f64).ln()..(5.0f64).ln()).exp()).collect();
    HermitianMatrix::from_hermitian_part(&(&(&u * &ComplexMatrix::from_diag(&spectrum)) * &u.adjoint()))
}

fn matrix_pair(f: &FisherFunction, cfg: &VerifyConfig) -> Result<(f64, String)> {
    let mut worst = f64::INFINITY;
    let dims = if cfg.matrix_dims.is_empty() { vec![2] } else { cfg.matrix_dims.clone() };
    for trial in 0..cfg.trials {
        let mut rng = rng_from_seed(trial_seed(cfg.seed ^ 0x5_EED0_FA11, trial as u64));
        let dim = dims[trial % dims.len()];
        let a = random_positive(&mut rng, dim);
        let g = random_complex(&mut rng, dim);
        let p = &g * &g.adjoint();
        let s = rng.random_range(0.01..2.0) / p.trace().re;
        let b = HermitianMatrix::from_hermitian_part(&(a.as_matrix() + &p.scale_real(s)));
        let fa = apply_function(f, &a)?;
        let fb = apply_function(f, &b)?;
        let scale = fb.max_abs().max(1.0);
        let diff = HermitianMatrix::from_hermitian_part(&(&fb - &fa));
        worst = worst.min(psd_min_eigenvalue(&diff)? / scale);
    }
    Ok((worst, format!("{} pairs over dims {:?}", cfg.trials, dims)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_function_passes() {
        let r = verify_fop_membership(&FisherFunction::max(), &VerifyConfig::default());
        assert!(r.passed, "{r:?}");
        assert!(r.summary().contains("consistent with operator monotone"));
    }

    #[test]
    fn wyd_passes() {
        let r = verify_fop_membership(&FisherFunction::wyd(0.3).unwrap(), &VerifyConfig::default());
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn square_fails_loewner() {
        let sq = FisherFunction::custom("t^2", |t| t * t);
        let r = verify_fop_membership(&sq, &VerifyConfig::default());
        assert!(!r.passed);
        assert!(!r.check("loewner").unwrap().passed);
        assert!(!r.check("functional_equation").unwrap().passed);
    }

    #[test]
    fn two_point_counterexample_for_square() {
        // brute-force search over a small grid: the 2x2 Loewner matrix of t^2 is
        // [[2a, a+b], [a+b, 2b]] with determinant -(a-b)^2 < 0
        let sq = FisherFunction::custom("t^2", |t| t * t);
        let mut found = false;
        for &a in &[0.1, 0.5, 1.0, 2.0] {
            for &b in &[0.2, 0.7, 3.0] {
                let l = loewner_matrix(&sq, &[a, b]).unwrap();
                let min = psd_min_eigenvalue(&HermitianMatrix::from_hermitian_part(&l)).unwrap();
                found |= min < -1e-6;
            }
        }
        assert!(found);
    }

    #[test]
    fn failing_evaluation_is_a_report_entry() {
        let bad = FisherFunction::custom("nan", |_| f64::NAN);
        let r = verify_fop_membership(&bad, &VerifyConfig { trials: 3, ..Default::default() });
        assert!(!r.passed);
    }
}
