//! Equiprobable symmetric pure-state ensembles.
//!
//! An ensemble of `N` states is fixed by nonnegative coefficients `a_k`
//! with `Σ a_k² = 1`; state `j` has amplitude `a_k ω^{jk}` on basis vector
//! `k`, where `ω = exp(2πi/N)`. Only the coefficients with `a_k > 0`
//! contribute, and their count `n` is the dimension spanned by the states.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CVector, DensityMatrix};
use crate::{Error, Result};

/// Coefficients at or below this value are outside the support.
pub const SUPPORT_EPS: f64 = 1e-12;
/// Relative tolerance used to decide which coefficients equal `a_min`.
pub const MIN_COEFF_REL_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    coeffs: Vec<f64>,
    support: Vec<bool>,
}

impl EnsembleSpec {
    /// Validates `coeffs`: at least two states, nonnegative, unit norm.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidCoefficients(format!(
                "need at least two states, got {}",
                coeffs.len()
            )));
        }
        if let Some((k, a)) = coeffs
            .iter()
            .enumerate()
            .find(|(_, a)| !a.is_finite() || **a < 0.0)
        {
            return Err(Error::InvalidCoefficients(format!(
                "coefficient {k} = {a} must be a nonnegative number"
            )));
        }
        let norm: f64 = coeffs.iter().map(|a| a * a).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidCoefficients(format!(
                "sum of squares is {norm}, expected 1"
            )));
        }
        let support = coeffs.iter().map(|&a| a > SUPPORT_EPS).collect();
        Ok(Self { coeffs, support })
    }

    /// Rescales `coeffs` to unit norm before validating.
    pub fn normalized(coeffs: Vec<f64>) -> Result<Self> {
        let norm = coeffs.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidCoefficients("zero coefficient vector".into()));
        }
        Self::new(coeffs.into_iter().map(|a| a / norm).collect())
    }

    /// `a_k = 1/√N` for all `k`: mutually orthogonal states.
    pub fn uniform(n_states: usize) -> Result<Self> {
        Self::new(vec![1.0 / (n_states as f64).sqrt(); n_states])
    }

    /// `a_k = δ_{k,index}`: all states identical.
    pub fn parallel(n_states: usize, index: usize) -> Result<Self> {
        if index >= n_states {
            return Err(Error::InvalidCoefficients(format!(
                "index {index} out of range for {n_states} states"
            )));
        }
        let mut a = vec![0.0; n_states];
        a[index] = 1.0;
        Self::new(a)
    }

    /// `N`.
    pub fn n_states(&self) -> usize {
        self.coeffs.len()
    }

    /// `n = Σ y_k`.
    pub fn support_dim(&self) -> usize {
        self.support.iter().filter(|&&y| y).count()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    /// Support mask `y_k`.
    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn in_support(&self, k: usize) -> bool {
        self.support[k]
    }

    /// Smallest supported coefficient.
    pub fn min_coefficient(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(&self.support)
            .filter(|(_, &y)| y)
            .map(|(&a, _)| a)
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether supported coefficient `k` equals `a_min` up to the relative
    /// tolerance.
    pub fn is_min_coefficient(&self, k: usize) -> bool {
        let amin = self.min_coefficient();
        self.support[k] && (self.coeffs[k] - amin).abs() <= MIN_COEFF_REL_TOL * amin
    }

    /// Multiplicity `μ` of `a_min`.
    pub fn min_multiplicity(&self) -> usize {
        (0..self.n_states())
            .filter(|&k| self.is_min_coefficient(k))
            .count()
    }

    pub fn is_parallel(&self) -> bool {
        self.support_dim() == 1
    }
}

/// `ω^m` for `ω = exp(2πi/N)`, reducing `m` mod `N` first.
pub fn root_of_unity_power(n_states: usize, m: i64) -> Complex64 {
    let r = m.rem_euclid(n_states as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r / n_states as f64)
}

/// The `N` symmetric states `|α_j⟩ = Σ_k a_k y_k ω^{jk} |k⟩`.
pub fn symmetric_states(spec: &EnsembleSpec) -> Vec<CVector> {
    symmetric_states_from(spec.coeffs(), spec.support())
}

/// Symmetric states generated from arbitrary real amplitudes on a support.
pub(crate) fn symmetric_states_from(coeffs: &[f64], support: &[bool]) -> Vec<CVector> {
    let n = coeffs.len();
    (0..n)
        .map(|j| {
            CVector::from_iterator(
                n,
                (0..n).map(|k| {
                    if support[k] {
                        root_of_unity_power(n, (j * k) as i64) * coeffs[k]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }),
            )
        })
        .collect()
}

/// `ρ = Σ_k a_k² y_k |k⟩⟨k|`, the uniform mixture of the symmetric states.
pub fn input_density_matrix(spec: &EnsembleSpec) -> DensityMatrix {
    let diag: Vec<f64> = spec
        .coeffs()
        .iter()
        .zip(spec.support())
        .map(|(&a, &y)| if y { a * a } else { 0.0 })
        .collect();
    DensityMatrix::from_diagonal(&diag).expect("validated coefficients give a valid state")
}

/// Average probability of a correct ME identification, `(Σ a_j)² / N`.
pub fn p_correct(spec: &EnsembleSpec) -> f64 {
    let s: f64 = spec.coeffs().iter().sum();
    s * s / spec.n_states() as f64
}

/// Distinguishability `n/(n-1) (P_corr - 1/N)`, in `[0, n/N]`.
///
/// Parallel ensembles (`n = 1`) have distinguishability zero.
pub fn distinguishability(spec: &EnsembleSpec) -> f64 {
    let n = spec.support_dim();
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    (nf / (nf - 1.0) * (p_correct(spec) - 1.0 / spec.n_states() as f64)).max(0.0)
}

/// Ensemble with coefficients `(a0, amin, √(1 - a0² - amin²), 0, …, 0)`.
pub fn coefficient_family(a0: f64, amin: f64, n_states: usize) -> Result<EnsembleSpec> {
    if n_states < 3 {
        return Err(Error::InvalidCoefficients(format!(
            "coefficient family needs N >= 3, got {n_states}"
        )));
    }
    if amin.is_nan() || amin < 0.0 || amin > a0 + 1e-15 {
        return Err(Error::InvalidCoefficients(format!(
            "need 0 <= amin <= a0, got a0 = {a0}, amin = {amin}"
        )));
    }
    let rest = 1.0 - a0 * a0 - amin * amin;
    if rest < -NORM_TOL {
        return Err(Error::InvalidCoefficients(format!(
            "a0² + amin² = {} exceeds 1",
            1.0 - rest
        )));
    }
    let mut a = vec![0.0; n_states];
    a[0] = a0;
    a[1] = amin.min(a0);
    a[2] = rest.max(0.0).sqrt();
    EnsembleSpec::new(a)
}

/// Seeded sampler of random ensembles on a fixed support.
///
/// The coefficient vector is uniform on the positive orthant of the unit
/// sphere of the support: `a_k = |g_k| / ‖g‖` with independent standard
/// normal `g_k`. These are the moduli of Haar-random pure-state amplitudes.
#[derive(Debug, Clone)]
pub struct RandomEnsemble {
    n_states: usize,
    support: Vec<usize>,
}

impl RandomEnsemble {
    /// Support on the first `support_dim` indices.
    pub fn new(n_states: usize, support_dim: usize) -> Result<Self> {
        if support_dim < 1 || support_dim > n_states || n_states < 2 {
            return Err(Error::InvalidCoefficients(format!(
                "need 1 <= n <= N and N >= 2, got N = {n_states}, n = {support_dim}"
            )));
        }
        Ok(Self {
            n_states,
            support: (0..support_dim).collect(),
        })
    }

    pub fn with_support(n_states: usize, support: Vec<usize>) -> Result<Self> {
        let mut sorted = support.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty()
            || sorted.len() != support.len()
            || sorted[sorted.len() - 1] >= n_states
        {
            return Err(Error::InvalidCoefficients(format!(
                "invalid support {support:?} for N = {n_states}"
            )));
        }
        Ok(Self {
            n_states,
            support: sorted,
        })
    }

    /// Draws one ensemble from `rng`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> EnsembleSpec {
        loop {
            let draws: Vec<f64> = self
                .support
                .iter()
                .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
                .collect();
            let norm = draws.iter().map(|g| g * g).sum::<f64>().sqrt();
            let mut a = vec![0.0; self.n_states];
            for (&k, &g) in self.support.iter().zip(&draws) {
                a[k] = g / norm;
            }
            // A draw that underflows below the support threshold would
            // change n; redraw instead.
            if self.support.iter().all(|&k| a[k] > SUPPORT_EPS) {
                if let Ok(spec) = EnsembleSpec::normalized(a) {
                    return spec;
                }
            }
        }
    }

    /// `count` ensembles from one seeded stream.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<EnsembleSpec> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.draw(&mut rng)).collect()
    }
}

/// One random ensemble with support on the first `support_dim` indices.
pub fn sample_random_spec(n_states: usize, support_dim: usize, seed: u64) -> Result<EnsembleSpec> {
    let sampler = RandomEnsemble::new(n_states, support_dim)?;
    Ok(sampler.draw(&mut ChaCha8Rng::seed_from_u64(seed)))
}
