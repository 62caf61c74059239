//! Variance, covariance and metric adjusted skew information, with the
//! inequalities between them packaged as [`InequalityReport`]s.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::density::{apply_kernel_table, kernel_table, matrix_power, try_apply_bivariate, DensityMatrix};
use crate::error::{Error, Result};
use crate::fisher::{check_c, tilde_f, FisherFunction};
use crate::matrix::{commutator, ComplexMatrix, HermitianMatrix, C64};
use crate::spectral::spectral_decompose;

/// Relative size of an imaginary part that may be discarded from a real quantity.
pub const IMAG_RESIDUE_TOL: f64 = 1e-11;

/// Allowed Hermiticity defect of a Gram matrix before symmetrization.
const GRAM_HERMITIAN_TOL: f64 = 1e-11;

/// Returns the real part of a quantity that is real in exact arithmetic.
pub fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAG_RESIDUE_TOL * (1.0 + z.re.abs()) {
        return Err(Error::NumericalInconsistency { imag: z.im });
    }
    Ok(z.re)
}

fn require_regular(f: &FisherFunction) -> Result<()> {
    if !f.is_regular() {
        return Err(Error::NotRegular(f.name().to_string()));
    }
    Ok(())
}

/// `½ Tr ρ(A*A + AA*) - |Tr ρA|²`.
pub fn variance(rho: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    rho.check_dim(a.dim())?;
    let ad = a.adjoint();
    let second = rho.expectation(&(&(&ad * a) + &(a * &ad)))? * 0.5;
    let mean = rho.expectation(a)?;
    real_part(second - mean.norm_sqr())
}

/// `½ Tr ρ(A*B + BA*) - (Tr ρA*)(Tr ρB)`.
pub fn covariance(rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    rho.check_dim(a.dim())?;
    rho.check_dim(b.dim())?;
    let ad = a.adjoint();
    let second = rho.expectation(&(&(&ad * b) + &(b * &ad)))? * 0.5;
    Ok(second - rho.expectation(&ad)? * rho.expectation(b)?)
}

/// `i[ρ, X]`.
fn i_commutator(rho: &DensityMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(commutator(rho.as_matrix(), x)?.scale(C64::new(0.0, 1.0)))
}

/// `½ Tr i[ρ,A*] č(L_ρ,R_ρ) i[ρ,B]`, conjugate linear in `A` and linear in `B`.
pub fn skew_bilinear(f: &FisherFunction, rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    require_regular(f)?;
    rho.check_dim(a.dim())?;
    rho.check_dim(b.dim())?;
    let left = i_commutator(rho, &a.adjoint())?;
    let right = try_apply_bivariate(|x, y| check_c(f, x, y), rho, &i_commutator(rho, b)?)?;
    Ok(left.trace_product(&right) * 0.5)
}

/// Metric adjusted skew information `I^f_ρ(A)`.
pub fn skew_info(f: &FisherFunction, rho: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    real_part(skew_bilinear(f, rho, a, a)?)
}

/// `Tr ρA² - Tr A·R_ρ f̃(L_ρ R_ρ⁻¹) A` for Hermitian `A`.
pub fn skew_info_alt(f: &FisherFunction, rho: &DensityMatrix, a: &HermitianMatrix) -> Result<f64> {
    require_regular(f)?;
    let a = a.as_matrix();
    rho.check_dim(a.dim())?;
    let first = rho.expectation(&(a * a))?;
    let k = try_apply_bivariate(|x, y| Ok(y * tilde_f(f, x / y)?), rho, a)?;
    real_part(first - a.trace_product(&k))
}

/// `-½ Tr [ρ^p, A][ρ^{1-p}, A]`.
pub fn wyd_direct(p: f64, rho: &DensityMatrix, a: &HermitianMatrix) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::DomainError(format!("p out of range: {p} not in (0,1)")));
    }
    let a = a.as_matrix();
    rho.check_dim(a.dim())?;
    let x = commutator(matrix_power(rho, p)?.as_matrix(), a)?;
    let y = commutator(matrix_power(rho, 1.0 - p)?.as_matrix(), a)?;
    real_part(x.trace_product(&y) * -0.5)
}

/// A tuple `(A_1, …, A_k)` of observables of common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableTuple {
    dim: usize,
    members: Vec<ComplexMatrix>,
}

impl ObservableTuple {
    pub fn new(members: Vec<ComplexMatrix>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::DomainError("empty observable tuple".into()))?;
        let dim = first.dim();
        for m in &members {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
        }
        Ok(Self { dim, members })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    /// `Σ ξ_i A_i`.
    pub fn combination(&self, xi: &[C64]) -> Result<ComplexMatrix> {
        if xi.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: xi.len() });
        }
        let mut out = ComplexMatrix::zeros(self.dim);
        for (m, &c) in self.members.iter().zip(xi) {
            out = &out + &m.scale(c);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramPair {
    pub skew_gram: HermitianMatrix,
    pub cov_gram: HermitianMatrix,
}

impl GramPair {
    /// `ξ* M ξ`.
    pub fn quadratic_form(m: &HermitianMatrix, xi: &[C64]) -> Result<f64> {
        let m = m.as_matrix();
        m.check_same_dim(&ComplexMatrix::zeros(xi.len()))?;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..xi.len() {
            for j in 0..xi.len() {
                acc += xi[i].conj() * m[(i, j)] * xi[j];
            }
        }
        real_part(acc)
    }
}

fn hermitize(m: ComplexMatrix) -> Result<HermitianMatrix> {
    let dev = m.hermitian_deviation();
    if dev > GRAM_HERMITIAN_TOL * (1.0 + m.max_abs()) {
        return Err(Error::NumericalInconsistency { imag: dev });
    }
    Ok(HermitianMatrix::from_hermitian_part(&m))
}

/// `(I_ρ(A_i,A_j))` and `(Cov_ρ(A_i,A_j))`, symmetrized by `(M + M*)/2`.
pub fn gram_pair(f: &FisherFunction, rho: &DensityMatrix, tuple: &ObservableTuple) -> Result<GramPair> {
    require_regular(f)?;
    rho.check_dim(tuple.dim())?;
    let k = tuple.len();
    // the kernel table is shared by all k² entries
    let table = kernel_table(|x, y| check_c(f, x, y), rho)?;
    let comms = tuple.members().iter().map(|a| i_commutator(rho, a)).collect::<Result<Vec<_>>>()?;
    let scaled = comms
        .iter()
        .map(|c| apply_kernel_table(&table, rho, c))
        .collect::<Result<Vec<_>>>()?;
    let mut skew = ComplexMatrix::zeros(k);
    let mut cov = ComplexMatrix::zeros(k);
    for i in 0..k {
        let left = comms[i].adjoint();
        for j in 0..k {
            skew[(i, j)] = left.trace_product(&scaled[j]) * 0.5;
            cov[(i, j)] = covariance(rho, &tuple.members()[i], &tuple.members()[j])?;
        }
    }
    Ok(GramPair { skew_gram: hermitize(skew)?, cov_gram: hermitize(cov)? })
}

/// Determinant as the product of eigenvalues of a Hermitian matrix.
pub fn hermitian_det(m: &HermitianMatrix) -> Result<f64> {
    Ok(spectral_decompose(m)?.eigenvalues.iter().product())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub seed: u64,
    pub margin: f64,
    pub inputs_digest: String,
}

/// Outcome of one inequality check or of a randomized suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub suite: String,
    pub function_spec: String,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Smallest scale-normalized margin; the inequality is violated below `-tol`.
    pub worst_margin: f64,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl InequalityReport {
    /// A single-trial report from a normalized margin.
    pub fn single(suite: &str, function_spec: &str, dim: usize, margin: f64, tol: f64, digest: String) -> Self {
        let passed = margin >= -tol;
        let violations =
            if passed { Vec::new() } else { vec![Violation { seed: 0, margin, inputs_digest: digest }] };
        Self {
            suite: suite.into(),
            function_spec: function_spec.into(),
            dims: vec![dim],
            trials: 1,
            seed: 0,
            worst_margin: margin,
            violations,
            passed,
        }
    }
}

/// SHA-256 of the entries of the given matrices, as hex.
pub fn inputs_digest(matrices: &[&ComplexMatrix]) -> String {
    let mut hasher = Sha256::new();
    for m in matrices {
        hasher.update((m.dim() as u64).to_le_bytes());
        for z in m.as_slice() {
            hasher.update(z.re.to_le_bytes());
            hasher.update(z.im.to_le_bytes());
        }
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// `½ Tr ρ(A*A + AA*)`, the scale against which basic-inequality margins are measured.
fn second_moment(rho: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    let ad = a.adjoint();
    real_part(rho.expectation(&(&(&ad * a) + &(a * &ad)))? * 0.5)
}

/// Margins of `0 ≤ I ≤ Var`, divided by `max(1, ½ Tr ρ(A*A + AA*))`.
pub fn basic_margins(f: &FisherFunction, rho: &DensityMatrix, a: &ComplexMatrix) -> Result<(f64, f64)> {
    let i = skew_info(f, rho, a)?;
    let var = variance(rho, a)?;
    let scale = second_moment(rho, a)?.max(1.0);
    Ok((i / scale, (var - i) / scale))
}

pub fn verify_basic(f: &FisherFunction, rho: &DensityMatrix, a: &ComplexMatrix, tol: f64) -> Result<InequalityReport> {
    let (lo, hi) = basic_margins(f, rho, a)?;
    let digest = inputs_digest(&[rho.as_matrix(), a]);
    Ok(InequalityReport::single("basic", f.name(), rho.dim(), lo.min(hi), tol, digest))
}

/// `λ_min(Cov - I) / (1 + Tr Cov)`.
pub fn matrix_margin(gram: &GramPair) -> Result<f64> {
    let diff = HermitianMatrix::from_hermitian_part(&(gram.cov_gram.as_matrix() - gram.skew_gram.as_matrix()));
    let min = spectral_decompose(&diff)?.eigenvalues[0];
    Ok(min / (1.0 + gram.cov_gram.as_matrix().trace().re))
}

pub fn verify_matrix_inequality(
    f: &FisherFunction,
    rho: &DensityMatrix,
    tuple: &ObservableTuple,
    tol: f64,
) -> Result<InequalityReport> {
    let margin = matrix_margin(&gram_pair(f, rho, tuple)?)?;
    let digest = tuple_digest(rho, tuple);
    Ok(InequalityReport::single("matrix", f.name(), rho.dim(), margin, tol, digest))
}

/// Margins of `0 ≤ det I ≤ det Cov`, divided by `(1 + Tr Cov)^k`.
pub fn determinant_margin(gram: &GramPair) -> Result<f64> {
    let ds = hermitian_det(&gram.skew_gram)?;
    let dc = hermitian_det(&gram.cov_gram)?;
    let k = gram.cov_gram.dim() as i32;
    let scale = (1.0 + gram.cov_gram.as_matrix().trace().re).powi(k);
    Ok(ds.min(dc - ds) / scale)
}

pub fn verify_determinant(
    f: &FisherFunction,
    rho: &DensityMatrix,
    tuple: &ObservableTuple,
    tol: f64,
) -> Result<InequalityReport> {
    let margin = determinant_margin(&gram_pair(f, rho, tuple)?)?;
    let digest = tuple_digest(rho, tuple);
    Ok(InequalityReport::single("det", f.name(), rho.dim(), margin, tol, digest))
}

fn tuple_digest(rho: &DensityMatrix, tuple: &ObservableTuple) -> String {
    let mut all = vec![rho.as_matrix()];
    all.extend(tuple.members());
    inputs_digest(&all)
}

/// `p ↦ I_ρ(p, A)` over `p_grid`.
pub fn wyd_curve(rho: &DensityMatrix, a: &HermitianMatrix, p_grid: &[f64]) -> Result<Vec<f64>> {
    p_grid.iter().map(|&p| wyd_direct(p, rho, a)).collect()
}

/// Worst step of the rise-then-fall pattern of `values` over `p_grid` (ascending),
/// divided by `1 + max |value|`. Steps straddling `1/2` are unconstrained.
pub fn unimodal_margin(p_grid: &[f64], values: &[f64]) -> f64 {
    let scale = 1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = f64::INFINITY;
    for i in 1..p_grid.len() {
        let step = values[i] - values[i - 1];
        if p_grid[i] <= 0.5 {
            worst = worst.min(step / scale);
        } else if p_grid[i - 1] >= 0.5 {
            worst = worst.min(-step / scale);
        }
    }
    worst
}

fn check_p_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::DomainError("p grid must lie in (0,1)".into()));
    }
    if p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DomainError("p grid must be strictly ascending".into()));
    }
    Ok(())
}

/// 33 uniform points in `[0.02, 0.98]` plus `0.5`.
pub fn default_p_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..33).map(|i| 0.02 + 0.96 * i as f64 / 32.0).collect();
    match g.iter_mut().find(|p| (**p - 0.5).abs() < 1e-12) {
        Some(p) => *p = 0.5,
        None => {
            g.push(0.5);
            g.sort_by(f64::total_cmp);
        }
    }
    g
}

pub fn verify_p_monotonicity(
    rho: &DensityMatrix,
    a: &HermitianMatrix,
    p_grid: &[f64],
    tol: f64,
) -> Result<InequalityReport> {
    check_p_grid(p_grid)?;
    let values = wyd_curve(rho, a, p_grid)?;
    let margin = if values.len() < 2 { 0.0 } else { unimodal_margin(p_grid, &values) };
    let digest = inputs_digest(&[rho.as_matrix(), a.as_matrix()]);
    Ok(InequalityReport::single("pmono", "wyd", rho.dim(), margin, tol, digest))
}

/// Margins of convexity of `I` and concavity of `Var` in `ρ` along `sρ₁ + (1-s)ρ₂`,
/// divided by `max(1, ‖A‖²)`.
pub fn convexity_margins(
    f: &FisherFunction,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    s: f64,
    a: &ComplexMatrix,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::DomainError(format!("mixing weight {s} not in [0,1]")));
    }
    let mixed = rho1.mix(rho2, s)?;
    let scale = a.frobenius_norm().powi(2).max(1.0);
    let convex = s * skew_info(f, rho1, a)? + (1.0 - s) * skew_info(f, rho2, a)? - skew_info(f, &mixed, a)?;
    let concave = variance(&mixed, a)? - s * variance(rho1, a)? - (1.0 - s) * variance(rho2, a)?;
    Ok((convex / scale, concave / scale))
}

pub fn verify_convexity(
    f: &FisherFunction,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    s: f64,
    a: &ComplexMatrix,
    tol: f64,
) -> Result<InequalityReport> {
    let (c, v) = convexity_margins(f, rho1, rho2, s, a)?;
    let digest = inputs_digest(&[rho1.as_matrix(), rho2.as_matrix(), a]);
    Ok(InequalityReport::single("convexity", f.name(), rho1.dim(), c.min(v), tol, digest))
}

/// `|I - Var|` at the states `(1-ε)ψ + εI/n` for each `ε` of `eps_ladder`.
pub fn pure_state_gaps(
    f: &FisherFunction,
    projector: &ComplexMatrix,
    a: &ComplexMatrix,
    eps_ladder: &[f64],
) -> Result<Vec<f64>> {
    eps_ladder
        .iter()
        .map(|&eps| {
            let rho = DensityMatrix::smoothed(projector, eps)?;
            Ok((skew_info(f, &rho, a)? - variance(&rho, a)?).abs())
        })
        .collect()
}
