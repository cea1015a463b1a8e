//! Dense complex Hermitian linear algebra and entropy kernels.
//!
//! Everything here works on small dense matrices (dimension at most a few
//! hundred). Entropies are reported in bits.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Maximum entrywise deviation from Hermiticity accepted as input.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_FLOOR, 0)` are rounding and clipped to zero.
pub const EIGEN_FLOOR: f64 = 1e-10;
/// Allowed deviation of a probability vector sum from one.
pub const PROB_SUM_TOL: f64 = 1e-10;
/// Negative probabilities down to this value are clipped.
pub const PROB_NEG_TOL: f64 = 1e-12;

/// Largest `|m[i,j] - conj(m[j,i])|` and the entry where it occurs.
pub fn hermiticity_defect(m: &CMatrix) -> (f64, (usize, usize)) {
    let mut worst = (0.0, (0, 0));
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst.0 {
                worst = (d, (i, j));
            }
        }
    }
    worst
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(())
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    check_square(m)?;
    let (defect, (row, col)) = hermiticity_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { row, col, defect });
    }
    Ok(())
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn is_diagonal(m: &CMatrix) -> bool {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)].norm() != 0.0 {
                return false;
            }
        }
    }
    true
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order and the unitary whose columns
/// are the matching eigenvectors, so that `m = V diag(λ) V†`.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m)?;
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues only, descending. Diagonal input skips the decomposition.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut values: Vec<f64> = if is_diagonal(m) {
        m.diagonal().iter().map(|z| z.re).collect()
    } else {
        SymmetricEigen::new(hermitian_part(m))
            .eigenvalues
            .iter()
            .copied()
            .collect()
    };
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

fn clip_spectrum(values: &mut [f64]) -> Result<()> {
    for v in values.iter_mut() {
        if *v < -EIGEN_FLOOR {
            return Err(Error::NegativeEigenvalue(*v));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(())
}

/// `-Σ x log2 x` with `0 log 0 := 0`.
fn entropy_terms(values: &[f64]) -> f64 {
    let s: f64 = values
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum();
    s.max(0.0)
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
///
/// The spectrum is computed once at construction and reused by the entropy
/// functions.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let mut spectrum = hermitian_eigenvalues(&matrix)?;
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(trace));
        }
        clip_spectrum(&mut spectrum)?;
        Ok(Self { matrix, spectrum })
    }

    /// Symmetrizes numerically computed input before validating it.
    pub fn from_hermitian_part(matrix: &CMatrix) -> Result<Self> {
        check_square(matrix)?;
        Self::new(hermitian_part(matrix))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let m = CMatrix::from_diagonal(&DVector::from_iterator(
            diag.len(),
            diag.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        Self::new(m)
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        Self::from_hermitian_part(&(psi * psi.adjoint()))
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0 / dim as f64; dim]).expect("maximally mixed state is valid")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Clipped eigenvalues, descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.iter().map(|x| x * x).sum()
    }

    /// `D(ρ) = ρ` with off-diagonal elements removed.
    pub fn dephased(&self) -> Self {
        Self::from_diagonal(&self.diagonal())
            .expect("diagonal of a density matrix is a density matrix")
    }
}

/// A validated discrete probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let mut entries = entries;
        for (index, p) in entries.iter_mut().enumerate() {
            if *p < -PROB_NEG_TOL || !p.is_finite() {
                return Err(Error::NegativeProbability { index, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::ProbabilitySum(sum));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_terms(&rho.spectrum)
}

/// Shannon entropy in bits.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    entropy_terms(&p.0)
}

/// Binary entropy `H2(x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-PROB_NEG_TOL..=1.0 + PROB_NEG_TOL).contains(&x) {
        return Err(Error::OutOfRange {
            name: "binary entropy argument",
            value: x,
        });
    }
    let x = x.clamp(0.0, 1.0);
    Ok(entropy_terms(&[x, 1.0 - x]))
}

/// Entropy of a (not necessarily normalized) nonnegative weight vector
/// treated as a spectrum. Used for diagonal states given by coefficients.
pub(crate) fn entropy_of_weights(weights: &[f64]) -> f64 {
    entropy_terms(weights)
}

/// Standard relative entropy of coherence `S(D(ρ)) - S(ρ)` in the
/// computational basis.
pub fn relative_entropy_of_coherence(rho: &DensityMatrix) -> f64 {
    (von_neumann_entropy(&rho.dephased()) - von_neumann_entropy(rho)).max(0.0)
}

/// Which factor of `system ⊗ ancilla` to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Ancilla,
}

/// Partial trace of a state on `system ⊗ ancilla`, with row index
/// `s * dim_ancilla + a`.
pub fn partial_trace(
    rho: &DensityMatrix,
    dim_system: usize,
    dim_ancilla: usize,
    over: Subsystem,
) -> Result<DensityMatrix> {
    let m = partial_trace_matrix(rho.matrix(), dim_system, dim_ancilla, over)?;
    DensityMatrix::from_hermitian_part(&m)
}

pub(crate) fn partial_trace_matrix(
    m: &CMatrix,
    dim_system: usize,
    dim_ancilla: usize,
    over: Subsystem,
) -> Result<CMatrix> {
    if m.nrows() != dim_system * dim_ancilla {
        return Err(Error::DimensionMismatch {
            expected: dim_system * dim_ancilla,
            found: m.nrows(),
        });
    }
    let idx = |s: usize, a: usize| s * dim_ancilla + a;
    Ok(match over {
        Subsystem::Ancilla => CMatrix::from_fn(dim_system, dim_system, |s, t| {
            (0..dim_ancilla).map(|a| m[(idx(s, a), idx(t, a))]).sum()
        }),
        Subsystem::System => CMatrix::from_fn(dim_ancilla, dim_ancilla, |a, b| {
            (0..dim_system).map(|s| m[(idx(s, a), idx(s, b))]).sum()
        }),
    })
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Diagonal complex matrix with real entries.
pub fn real_diagonal(diag: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(
        diag.len(),
        diag.iter().map(|&x| Complex64::new(x, 0.0)),
    ))
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
