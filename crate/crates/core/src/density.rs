//! Density matrices and functions of the left/right multiplication operators.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, C64};
use crate::spectral::{spectral_decompose, SpectralDecomposition};

/// Thresholds used by [`validate_density`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub positivity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { hermitian: 1e-10, trace: 1e-10, positivity: 1e-12 }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self { hermitian: tol, trace: tol, positivity: tol }
    }
}

/// A positive definite, unit trace Hermitian matrix with its cached spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
}

pub fn validate_density(m: ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    let matrix = HermitianMatrix::new(m, tol.hermitian)?;
    let trace = matrix.as_matrix().trace().re;
    if (trace - 1.0).abs() >= tol.trace {
        return Err(Error::TraceNotOne { trace });
    }
    let spectrum = spectral_decompose(&matrix)?;
    let min_eigenvalue = spectrum.eigenvalues[0];
    if min_eigenvalue <= tol.positivity {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(DensityMatrix { matrix, spectrum })
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        validate_density(m, &Tolerances::default())
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(diag))
    }

    /// Maximally mixed state `I/n`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
            .expect("I/n is a valid state")
    }

    /// `(1-ε)ρ + ε I/n` for a positive semidefinite, unit trace `ρ` (which may be singular).
    pub fn smoothed(m: &ComplexMatrix, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::DomainError(format!("smoothing parameter {eps} not in (0,1]")));
        }
        let n = m.dim();
        let mixed = ComplexMatrix::identity(n).scale_real(eps / n as f64);
        Self::new(&m.scale_real(1.0 - eps) + &mixed)
    }

    /// `sρ₁ + (1-s)ρ₂`.
    pub fn mix(&self, other: &Self, s: f64) -> Result<Self> {
        self.check_dim(other.dim())?;
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::DomainError(format!("mixing weight {s} not in [0,1]")));
        }
        let m = &self.as_matrix().scale_real(s) + &other.as_matrix().scale_real(1.0 - s);
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        self.matrix.as_matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: dim });
        }
        Ok(())
    }

    /// `Tr(ρX)`.
    pub fn expectation(&self, x: &ComplexMatrix) -> Result<C64> {
        self.check_dim(x.dim())?;
        Ok(self.as_matrix().trace_product(x))
    }
}

/// `k(L_ρ, R_ρ) X`: entrywise scaling `X'_ij ← k(λ_i, λ_j) X'_ij` in the eigenbasis of `ρ`.
pub fn apply_bivariate<K>(k: K, rho: &DensityMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix>
where
    K: Fn(f64, f64) -> f64,
{
    let table = kernel_table(|a, b| Ok(k(a, b)), rho)?;
    apply_kernel_table(&table, rho, x)
}

/// Fallible variant of [`apply_bivariate`] for kernels that can fail (quadrature-backed ones).
pub fn try_apply_bivariate<K>(k: K, rho: &DensityMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix>
where
    K: Fn(f64, f64) -> Result<f64>,
{
    let table = kernel_table(k, rho)?;
    apply_kernel_table(&table, rho, x)
}

pub(crate) fn kernel_table<K>(k: K, rho: &DensityMatrix) -> Result<Vec<f64>>
where
    K: Fn(f64, f64) -> Result<f64>,
{
    let lambda = rho.eigenvalues();
    let n = lambda.len();
    let mut table = Vec::with_capacity(n * n);
    for &li in lambda {
        for &lj in lambda {
            table.push(k(li, lj)?);
        }
    }
    Ok(table)
}

pub(crate) fn apply_kernel_table(
    table: &[f64],
    rho: &DensityMatrix,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    rho.check_dim(x.dim())?;
    let n = rho.dim();
    let mut xp = rho.spectrum().to_eigenbasis(x);
    for i in 0..n {
        for j in 0..n {
            xp[(i, j)] *= table[i * n + j];
        }
    }
    Ok(rho.spectrum().from_eigenbasis(&xp))
}

/// `ρ^p = U diag(λ^p) U*` for `p > 0`.
pub fn matrix_power(rho: &DensityMatrix, p: f64) -> Result<HermitianMatrix> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::DomainError(format!("matrix power exponent {p} must be positive")));
    }
    Ok(HermitianMatrix::from_hermitian_part(&rho.spectrum().map(|l| l.powf(p))))
}
