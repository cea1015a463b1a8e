//! Optimal state separation of a symmetric ensemble.
//!
//! A unitary coupling with a qubit ancilla prepared in `|1⟩` maps each input
//! `|α_j⟩` to `√P |β_j(ξ)⟩|1⟩ + √Q |β̃_j⟩|0⟩`. Projecting the ancilla on `|1⟩`
//! (success) yields states that are more distinguishable than the inputs;
//! projecting on `|0⟩` (failure) yields less distinguishable ones. Every
//! quantity here is diagonal in the computational basis except the
//! system-ancilla coherences.

use num_complex::Complex64;

use crate::ensemble::{input_density_matrix, symmetric_states_from, EnsembleSpec};
use crate::linalg::{
    binary_entropy, entropy_of_weights, real_diagonal, von_neumann_entropy, CMatrix, CVector,
    DensityMatrix,
};
use crate::{Error, Result};

/// Failure probabilities below this are treated as zero.
pub const FAILURE_EPS: f64 = 1e-12;

fn check_xi(xi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::OutOfRange {
            name: "separation parameter xi",
            value: xi,
        });
    }
    Ok(())
}

/// `a_min` entering the separation at parameter `xi`.
///
/// Parallel inputs use `a_min = 0` for `ξ > 0`, which forces `P = 0`. At
/// `ξ = 0` the map is the identity for every ensemble.
fn effective_min_coefficient(spec: &EnsembleSpec, xi: f64) -> f64 {
    if spec.is_parallel() && xi > 0.0 {
        0.0
    } else {
        spec.min_coefficient()
    }
}

/// Optimal success and failure probabilities `(P, Q)`.
pub fn success_failure_probabilities(spec: &EnsembleSpec, xi: f64) -> Result<(f64, f64)> {
    check_xi(xi)?;
    if xi == 0.0 {
        return Ok((1.0, 0.0));
    }
    let n = spec.support_dim() as f64;
    let amin = effective_min_coefficient(spec, xi);
    let na2 = n * amin * amin;
    let p = (na2 / ((1.0 - xi) * na2 + xi)).clamp(0.0, 1.0);
    Ok((p, 1.0 - p))
}

/// Success-branch coefficients `b_k(ξ) = √((1-ξ) a_k² + y_k ξ / n)`.
pub fn success_coefficients(spec: &EnsembleSpec, xi: f64) -> Result<Vec<f64>> {
    check_xi(xi)?;
    let n = spec.support_dim() as f64;
    Ok((0..spec.n_states())
        .map(|k| {
            if spec.in_support(k) {
                let a = spec.coeff(k);
                ((1.0 - xi) * a * a + xi / n).sqrt()
            } else {
                0.0
            }
        })
        .collect())
}

/// Failure-branch coefficients `b̃_k = √((a_k² - a_min² y_k) / (1 - n a_min²))`,
/// independent of `ξ`.
///
/// The `μ` coefficients equal to `a_min` are exactly zero. Parallel inputs
/// (whose failure branch only exists for `ξ > 0`, where `a_min = 0`) return
/// the input coefficients. Ensembles with `n a_min² = 1` have no failure
/// branch.
pub fn failure_coefficients(spec: &EnsembleSpec) -> Result<Vec<f64>> {
    if spec.is_parallel() {
        return Ok(spec.coeffs().to_vec());
    }
    let amin = spec.min_coefficient();
    let n = spec.support_dim() as f64;
    let denom = 1.0 - n * amin * amin;
    if denom < FAILURE_EPS {
        return Err(Error::NoFailureBranch);
    }
    Ok((0..spec.n_states())
        .map(|k| {
            if !spec.in_support(k) || spec.is_min_coefficient(k) {
                0.0
            } else {
                let a = spec.coeff(k);
                ((a * a - amin * amin).max(0.0) / denom).sqrt()
            }
        })
        .collect())
}

/// Everything the separation step produces for one `(ensemble, ξ)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationProfile {
    pub xi: f64,
    /// Effective `a_min` (zero for parallel inputs at `ξ > 0`).
    pub a_min: f64,
    /// Multiplicity `μ` of `a_min` among the supported coefficients.
    pub multiplicity: usize,
    pub success_prob: f64,
    pub failure_prob: f64,
    pub success_coeffs: Vec<f64>,
    /// Absent when `Q` is below [`FAILURE_EPS`].
    pub failure_coeffs: Option<Vec<f64>>,
}

impl SeparationProfile {
    pub fn new(spec: &EnsembleSpec, xi: f64) -> Result<Self> {
        let (p, q) = success_failure_probabilities(spec, xi)?;
        let success_coeffs = success_coefficients(spec, xi)?;
        let failure_coeffs = if q < FAILURE_EPS {
            None
        } else {
            Some(failure_coefficients(spec)?)
        };
        Ok(Self {
            xi,
            a_min: effective_min_coefficient(spec, xi),
            multiplicity: spec.min_multiplicity(),
            success_prob: p,
            failure_prob: if failure_coeffs.is_some() { q } else { 0.0 },
            success_coeffs,
            failure_coeffs,
        })
    }

    pub fn has_failure_branch(&self) -> bool {
        self.failure_coeffs.is_some()
    }

    /// `Σ_k b_k b̃_k`, zero without a failure branch.
    pub fn branch_overlap(&self) -> f64 {
        self.failure_coeffs.as_ref().map_or(0.0, |bt| {
            self.success_coeffs.iter().zip(bt).map(|(b, t)| b * t).sum()
        })
    }

    fn squares(coeffs: &[f64]) -> Vec<f64> {
        coeffs.iter().map(|b| b * b).collect()
    }

    /// `S(ρ_s)`.
    pub fn success_entropy(&self) -> f64 {
        entropy_of_weights(&Self::squares(&self.success_coeffs))
    }

    /// `S(ρ_f)`, absent without a failure branch.
    pub fn failure_entropy(&self) -> Option<f64> {
        self.failure_coeffs
            .as_ref()
            .map(|bt| entropy_of_weights(&Self::squares(bt)))
    }
}

/// Diagonal detection operators `(A_s, A_f)` of the separation POVM.
///
/// On the support, `A_s |k⟩ = (√P b_k / a_k) |k⟩` and
/// `A_f |k⟩ = (√Q b̃_k / a_k) |k⟩`; both vanish off the support.
pub fn separation_detection_operators(spec: &EnsembleSpec, xi: f64) -> Result<(CMatrix, CMatrix)> {
    let profile = SeparationProfile::new(spec, xi)?;
    Ok(detection_operators_from(spec, &profile))
}

pub(crate) fn detection_operators_from(
    spec: &EnsembleSpec,
    profile: &SeparationProfile,
) -> (CMatrix, CMatrix) {
    let sp = profile.success_prob.sqrt();
    let sq = profile.failure_prob.sqrt();
    let n = spec.n_states();
    let mut s = vec![0.0; n];
    let mut f = vec![0.0; n];
    for k in 0..n {
        if !spec.in_support(k) {
            continue;
        }
        let a = spec.coeff(k);
        s[k] = sp * profile.success_coeffs[k] / a;
        if let Some(bt) = &profile.failure_coeffs {
            f[k] = sq * bt[k] / a;
        }
    }
    (real_diagonal(&s), real_diagonal(&f))
}

fn diagonal_state(coeffs: &[f64]) -> Result<DensityMatrix> {
    DensityMatrix::from_diagonal(&coeffs.iter().map(|b| b * b).collect::<Vec<_>>())
}

/// `(ρ_s, ρ_f)`, the averaged success and failure outputs. `ρ_f` is absent
/// when `Q = 0`.
pub fn output_density_matrices(
    spec: &EnsembleSpec,
    xi: f64,
) -> Result<(DensityMatrix, Option<DensityMatrix>)> {
    let profile = SeparationProfile::new(spec, xi)?;
    let rho_s = diagonal_state(&profile.success_coeffs)?;
    let rho_f = profile
        .failure_coeffs
        .as_deref()
        .map(diagonal_state)
        .transpose()?;
    Ok((rho_s, rho_f))
}

/// Ancilla basis index for `|0⟩` (failure) and `|1⟩` (success).
pub const ANCILLA_FAIL: usize = 0;
pub const ANCILLA_SUCCESS: usize = 1;

/// System-ancilla state after the coupling, on `system ⊗ ancilla` with
/// index `2k + a`.
pub fn bipartite_state(spec: &EnsembleSpec, xi: f64) -> Result<DensityMatrix> {
    let profile = SeparationProfile::new(spec, xi)?;
    bipartite_state_from(&profile)
}

pub(crate) fn bipartite_state_from(profile: &SeparationProfile) -> Result<DensityMatrix> {
    let n = profile.success_coeffs.len();
    let (p, q) = (profile.success_prob, profile.failure_prob);
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        let b = profile.success_coeffs[k];
        let s = 2 * k + ANCILLA_SUCCESS;
        let f = 2 * k + ANCILLA_FAIL;
        m[(s, s)] = Complex64::new(p * b * b, 0.0);
        if let Some(bt) = &profile.failure_coeffs {
            let t = bt[k];
            m[(f, f)] = Complex64::new(q * t * t, 0.0);
            let c = Complex64::new((p * q).sqrt() * b * t, 0.0);
            m[(s, f)] = c;
            m[(f, s)] = c;
        }
    }
    DensityMatrix::new(m)
}

/// `(1/N) Σ_j Û(|α_j⟩⟨α_j| ⊗ |1⟩⟨1|)Û†`, built from the action of the
/// coupling on each input. Used to cross-check [`bipartite_state`].
pub fn bipartite_state_from_unitary_action(spec: &EnsembleSpec, xi: f64) -> Result<DensityMatrix> {
    let profile = SeparationProfile::new(spec, xi)?;
    let n = spec.n_states();
    let betas = symmetric_states_from(&profile.success_coeffs, spec.support());
    let tildes = profile
        .failure_coeffs
        .as_ref()
        .map(|bt| symmetric_states_from(bt, spec.support()));
    let (sp, sq) = (profile.success_prob.sqrt(), profile.failure_prob.sqrt());
    let mut acc = CMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let mut psi = CVector::zeros(2 * n);
        for k in 0..n {
            psi[2 * k + ANCILLA_SUCCESS] = betas[j][k] * sp;
            if let Some(t) = &tildes {
                psi[2 * k + ANCILLA_FAIL] = t[j][k] * sq;
            }
        }
        acc += &psi * psi.adjoint();
    }
    DensityMatrix::from_hermitian_part(&acc.unscale(n as f64))
}

/// Ancilla state `P|1⟩⟨1| + Q|0⟩⟨0| + √(PQ) (Σ_k b_k b̃_k) σ_x`.
pub fn ancilla_state(spec: &EnsembleSpec, xi: f64) -> Result<DensityMatrix> {
    let profile = SeparationProfile::new(spec, xi)?;
    ancilla_state_from(&profile)
}

pub(crate) fn ancilla_state_from(profile: &SeparationProfile) -> Result<DensityMatrix> {
    let (p, q) = (profile.success_prob, profile.failure_prob);
    let c = Complex64::new((p * q).sqrt() * profile.branch_overlap(), 0.0);
    let mut m = CMatrix::zeros(2, 2);
    m[(ANCILLA_SUCCESS, ANCILLA_SUCCESS)] = Complex64::new(p, 0.0);
    m[(ANCILLA_FAIL, ANCILLA_FAIL)] = Complex64::new(q, 0.0);
    m[(0, 1)] = c;
    m[(1, 0)] = c;
    DensityMatrix::new(m)
}

/// Closed-form ancilla eigenvalues
/// `λ± = ½ {1 ± √(1 - 4PQ[1 - (Σ b_k b̃_k)²])}`.
pub fn ancilla_eigenvalues(profile: &SeparationProfile) -> (f64, f64) {
    let (p, q) = (profile.success_prob, profile.failure_prob);
    let c = profile.branch_overlap();
    let disc = (1.0 - 4.0 * p * q * (1.0 - c * c)).max(0.0).sqrt();
    (0.5 * (1.0 + disc), 0.5 * (1.0 - disc))
}

/// Relative entropy of coherence of the ancilla, `H2(P) - S(ρ_a)`.
pub fn ancilla_coherence(spec: &EnsembleSpec, xi: f64) -> Result<f64> {
    let profile = SeparationProfile::new(spec, xi)?;
    ancilla_coherence_from(&profile)
}

pub(crate) fn ancilla_coherence_from(profile: &SeparationProfile) -> Result<f64> {
    let (lp, lm) = ancilla_eigenvalues(profile);
    let s_a = entropy_of_weights(&[lp, lm]);
    Ok((binary_entropy(profile.success_prob)? - s_a).max(0.0))
}

/// POVM coherence of the separation measurement on the input,
/// `H2(P) + P S(ρ_s) + Q S(ρ_f) - S(ρ)`.
pub fn separation_coherence(spec: &EnsembleSpec, xi: f64) -> Result<f64> {
    let profile = SeparationProfile::new(spec, xi)?;
    separation_coherence_from(spec, &profile)
}

pub(crate) fn separation_coherence_from(
    spec: &EnsembleSpec,
    profile: &SeparationProfile,
) -> Result<f64> {
    let s_rho = von_neumann_entropy(&input_density_matrix(spec));
    let fail_term = profile
        .failure_entropy()
        .map_or(0.0, |s| profile.failure_prob * s);
    let c = binary_entropy(profile.success_prob)?
        + profile.success_prob * profile.success_entropy()
        + fail_term
        - s_rho;
    Ok(c.max(0.0))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::ensemble::{coefficient_family, distinguishability};
    use crate::linalg::{max_abs_diff, partial_trace, relative_entropy_of_coherence, Subsystem};
    use approx::assert_abs_diff_eq;

    fn e1() -> EnsembleSpec {
        coefficient_family(0.385, 0.2, 3).unwrap()
    }

    fn support_projector(spec: &EnsembleSpec) -> CMatrix {
        real_diagonal(
            &spec
                .support()
                .iter()
                .map(|&y| if y { 1.0 } else { 0.0 })
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn probabilities() {
        assert_eq!(
            success_failure_probabilities(&e1(), 0.0).unwrap(),
            (1.0, 0.0)
        );
        let u = EnsembleSpec::uniform(3).unwrap();
        for xi in [0.2, 0.7, 1.0] {
            let (p, q) = success_failure_probabilities(&u, xi).unwrap();
            assert_abs_diff_eq!(p, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(q, 0.0, epsilon = 1e-15);
        }
        let (p, q) = success_failure_probabilities(&e1(), 0.5).unwrap();
        assert_abs_diff_eq!(p, 3.0 / 14.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p + q, 1.0, epsilon = 1e-15);
        let par = EnsembleSpec::parallel(3, 1).unwrap();
        assert_eq!(
            success_failure_probabilities(&par, 0.3).unwrap(),
            (0.0, 1.0)
        );
        assert_eq!(
            success_failure_probabilities(&par, 0.0).unwrap(),
            (1.0, 0.0)
        );
        assert!(success_failure_probabilities(&e1(), 1.2).is_err());
    }

    #[test]
    fn success_coefficient_limits() {
        let s = e1();
        assert_eq!(success_coefficients(&s, 0.0).unwrap(), s.coeffs());
        let f4 = coefficient_family(0.3, 0.2, 4).unwrap();
        let b = success_coefficients(&f4, 1.0).unwrap();
        for (k, bk) in b.iter().enumerate() {
            let expect = if k < 3 { 1.0 / 3f64.sqrt() } else { 0.0 };
            assert_abs_diff_eq!(*bk, expect, epsilon = 1e-15);
        }
        let b = success_coefficients(&s, 0.5).unwrap();
        for (x, sq) in b.iter().zip([
            0.240_779_166_666_666_7,
            0.186_666_666_666_666_7,
            0.572_554_166_666_666_7,
        ]) {
            assert_abs_diff_eq!(x * x, sq, epsilon = 1e-14);
        }
    }

    #[test]
    fn failure_coefficient_cases() {
        assert_eq!(
            failure_coefficients(&EnsembleSpec::uniform(3).unwrap()),
            Err(Error::NoFailureBranch)
        );
        let bt = failure_coefficients(&e1()).unwrap();
        assert_eq!(bt[1], 0.0);
        assert_abs_diff_eq!(bt[0], (0.108225f64 / 0.88).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(bt[2], (0.771775f64 / 0.88).sqrt(), epsilon = 1e-12);
        let mu2 = coefficient_family(0.2, 0.2, 3).unwrap();
        let bt = failure_coefficients(&mu2).unwrap();
        assert_eq!(bt[0], 0.0);
        assert_eq!(bt[1], 0.0);
        assert_abs_diff_eq!(bt[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn detection_operators() {
        let s = e1();
        let proj = support_projector(&s);
        let (a_s, a_f) = separation_detection_operators(&s, 0.0).unwrap();
        assert!(max_abs_diff(&a_s, &proj) < 1e-15);
        assert!(a_f.norm() == 0.0);

        let u = EnsembleSpec::uniform(3).unwrap();
        let (a_s, a_f) = separation_detection_operators(&u, 0.6).unwrap();
        assert!(max_abs_diff(&a_s, &proj) < 1e-12);
        assert!(a_f.norm() == 0.0);

        let (a_s, a_f) = separation_detection_operators(&s, 0.5).unwrap();
        let complete = a_s.adjoint() * &a_s + a_f.adjoint() * &a_f;
        assert!(max_abs_diff(&complete, &proj) < 1e-12);
        let p = 3.0 / 14.0;
        let b = success_coefficients(&s, 0.5).unwrap();
        for (k, bk) in b.iter().enumerate() {
            let e = (a_s.adjoint() * &a_s)[(k, k)].re;
            assert_abs_diff_eq!(e, p * bk * bk / (s.coeff(k) * s.coeff(k)), epsilon = 1e-13);
        }

        let par = EnsembleSpec::parallel(3, 0).unwrap();
        let (a_s, a_f) = separation_detection_operators(&par, 0.4).unwrap();
        assert!(a_s.norm() == 0.0);
        assert!(max_abs_diff(&a_f, &support_projector(&par)) < 1e-15);
    }

    #[test]
    fn success_operator_maps_inputs_to_separated_states() {
        let s = e1();
        let xi = 0.5;
        let (a_s, a_f) = separation_detection_operators(&s, xi).unwrap();
        let alphas = crate::ensemble::symmetric_states(&s);
        let b = success_coefficients(&s, xi).unwrap();
        let bt = failure_coefficients(&s).unwrap();
        let betas = symmetric_states_from(&b, s.support());
        let tildes = symmetric_states_from(&bt, s.support());
        for j in 0..3 {
            let out = &a_s * &alphas[j];
            assert!((out.unscale(out.norm()) - &betas[j]).norm() < 1e-10);
            let out = &a_f * &alphas[j];
            assert!((out.unscale(out.norm()) - &tildes[j]).norm() < 1e-10);
        }
    }

    #[test]
    fn output_states_and_mixture() {
        let s = e1();
        let (rs, rf) = output_density_matrices(&s, 0.0).unwrap();
        assert!(max_abs_diff(rs.matrix(), input_density_matrix(&s).matrix()) < 1e-15);
        assert!(rf.is_none());

        let (rs, _) = output_density_matrices(&s, 1.0).unwrap();
        for d in rs.diagonal() {
            assert_abs_diff_eq!(d, 1.0 / 3.0, epsilon = 1e-15);
        }

        let (p, q) = success_failure_probabilities(&s, 0.5).unwrap();
        let (rs, rf) = output_density_matrices(&s, 0.5).unwrap();
        let mix = rs.matrix().scale(p) + rf.unwrap().matrix().scale(q);
        assert!(max_abs_diff(&mix, input_density_matrix(&s).matrix()) < 1e-12);
    }

    #[test]
    fn bipartite_state_cases() {
        let s = e1();
        let one = real_diagonal(&[0.0, 1.0]);
        let product = crate::linalg::kron(input_density_matrix(&s).matrix(), &one);
        let r = bipartite_state(&s, 0.0).unwrap();
        assert!(max_abs_diff(r.matrix(), &product) < 1e-15);

        let u = EnsembleSpec::uniform(3).unwrap();
        let product = crate::linalg::kron(input_density_matrix(&u).matrix(), &one);
        let r = bipartite_state(&u, 0.8).unwrap();
        assert!(max_abs_diff(r.matrix(), &product) < 1e-12);

        let r = bipartite_state(&s, 0.5).unwrap();
        let reduced = partial_trace(&r, 3, 2, Subsystem::Ancilla).unwrap();
        assert!(max_abs_diff(reduced.matrix(), input_density_matrix(&s).matrix()) < 1e-10);
        assert!(r.spectrum().iter().all(|&l| l >= -1e-10));
    }

    #[test]
    fn bipartite_state_matches_unitary_average() {
        for (spec, xi) in [
            (e1(), 0.5),
            (coefficient_family(0.2, 0.2, 4).unwrap(), 0.8),
            (EnsembleSpec::parallel(3, 2).unwrap(), 0.4),
        ] {
            let closed = bipartite_state(&spec, xi).unwrap();
            let built = bipartite_state_from_unitary_action(&spec, xi).unwrap();
            assert!(max_abs_diff(closed.matrix(), built.matrix()) < 1e-12);
            // Unitarily equivalent to ρ ⊗ |1⟩⟨1|.
            assert_abs_diff_eq!(
                closed.purity(),
                input_density_matrix(&spec).purity(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn ancilla_state_cases() {
        let s = e1();
        let a = ancilla_state(&s, 0.0).unwrap();
        assert!(max_abs_diff(a.matrix(), &real_diagonal(&[0.0, 1.0])) < 1e-15);
        let par = EnsembleSpec::parallel(3, 0).unwrap();
        let a = ancilla_state(&par, 0.3).unwrap();
        assert!(max_abs_diff(a.matrix(), &real_diagonal(&[1.0, 0.0])) < 1e-15);

        let a = ancilla_state(&s, 0.5).unwrap();
        let traced =
            partial_trace(&bipartite_state(&s, 0.5).unwrap(), 3, 2, Subsystem::System).unwrap();
        assert!(max_abs_diff(a.matrix(), traced.matrix()) < 1e-12);
        let (lp, lm) = ancilla_eigenvalues(&SeparationProfile::new(&s, 0.5).unwrap());
        assert_abs_diff_eq!(a.spectrum()[0], lp, epsilon = 1e-12);
        assert_abs_diff_eq!(a.spectrum()[1], lm, epsilon = 1e-12);
        // mpmath
        assert_abs_diff_eq!(lp, 0.960_677_201_765_821_4, epsilon = 1e-12);
    }

    #[test]
    fn ancilla_coherence_cases() {
        let s = e1();
        assert_eq!(ancilla_coherence(&s, 0.0).unwrap(), 0.0);
        assert_eq!(
            ancilla_coherence(&EnsembleSpec::parallel(3, 0).unwrap(), 0.5).unwrap(),
            0.0
        );
        let c = ancilla_coherence(&s, 0.5).unwrap();
        let generic = relative_entropy_of_coherence(&ancilla_state(&s, 0.5).unwrap());
        assert_abs_diff_eq!(c, generic, epsilon = 1e-10);
        assert_abs_diff_eq!(c, 0.510_416_674_754_006_0, epsilon = 1e-12);
    }

    #[test]
    fn separation_coherence_cases() {
        let s = e1();
        assert_abs_diff_eq!(separation_coherence(&s, 0.0).unwrap(), 0.0, epsilon = 1e-12);
        let u = EnsembleSpec::uniform(3).unwrap();
        assert_abs_diff_eq!(separation_coherence(&u, 0.7).unwrap(), 0.0, epsilon = 1e-12);
        let par = EnsembleSpec::parallel(3, 0).unwrap();
        assert_abs_diff_eq!(
            separation_coherence(&par, 0.7).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            separation_coherence(&s, 0.5).unwrap(),
            0.635_556_893_704_509_8,
            epsilon = 1e-12
        );
    }

    #[test]
    fn failure_coefficients_do_not_depend_on_xi() {
        let s = e1();
        let reference = SeparationProfile::new(&s, 0.1)
            .unwrap()
            .failure_coeffs
            .unwrap();
        for xi in [0.2, 0.4, 0.6, 0.8, 1.0] {
            let bt = SeparationProfile::new(&s, xi)
                .unwrap()
                .failure_coeffs
                .unwrap();
            assert_eq!(bt, reference);
        }
    }

    #[test]
    fn separation_increases_distinguishability() {
        for spec in [e1(), coefficient_family(0.192, 0.1, 4).unwrap()] {
            let mut prev = -1.0;
            for i in 0..50 {
                let xi = i as f64 / 49.0;
                let b = success_coefficients(&spec, xi).unwrap();
                let d = distinguishability(&EnsembleSpec::normalized(b).unwrap());
                assert!(d >= prev - 1e-12, "xi = {xi}: {d} < {prev}");
                prev = d;
            }
        }
    }
}
