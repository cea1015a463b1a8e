//! POVMs for symmetric-state discrimination and the POVM-based relative
//! entropy of coherence.
//!
//! All POVMs act on the `N`-dimensional space spanned by `{|k⟩}` but are
//! complete only on the support of the ensemble, so completeness is checked
//! against the support projector.

use num_complex::Complex64;

use crate::ensemble::{root_of_unity_power, EnsembleSpec};
use crate::linalg::{
    hermitian_eigenvalues, max_abs_diff, real_diagonal, shannon_entropy, von_neumann_entropy,
    CMatrix, CVector, DensityMatrix, ProbabilityVector,
};
use crate::separation::{detection_operators_from, SeparationProfile};
use crate::{Error, Result};

/// Outcomes with probability at or below this carry no postmeasurement state.
pub const PROB_EPS: f64 = 1e-12;
/// Completeness tolerance.
pub const COMPLETENESS_TOL: f64 = 1e-10;
const PSD_FLOOR: f64 = 1e-10;
const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// A POVM given by detection operators `A_i`, with elements `Π_i = A_i†A_i`.
#[derive(Debug, Clone)]
pub struct Povm {
    operators: Vec<CMatrix>,
    labels: Vec<String>,
    support: Vec<bool>,
}

impl Povm {
    /// Validates completeness on `support` and positivity of each element.
    pub fn new(operators: Vec<CMatrix>, labels: Vec<String>, support: Vec<bool>) -> Result<Self> {
        let dim = support.len();
        if labels.len() != operators.len() {
            return Err(Error::DimensionMismatch {
                expected: operators.len(),
                found: labels.len(),
            });
        }
        for a in &operators {
            if a.nrows() != dim || a.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.nrows(),
                });
            }
        }
        let povm = Self {
            operators,
            labels,
            support,
        };
        let residual = povm.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::Incomplete(residual));
        }
        for (index, e) in povm.elements().iter().enumerate() {
            let low = hermitian_eigenvalues(&crate::linalg::hermitian_part(e))?
                .last()
                .copied()
                .unwrap_or(0.0);
            if low < -PSD_FLOOR {
                return Err(Error::NotPositive { index, value: low });
            }
        }
        Ok(povm)
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn support_projector(&self) -> CMatrix {
        real_diagonal(
            &self
                .support
                .iter()
                .map(|&y| if y { 1.0 } else { 0.0 })
                .collect::<Vec<_>>(),
        )
    }

    /// `Π_i = A_i†A_i`.
    pub fn elements(&self) -> Vec<CMatrix> {
        self.operators.iter().map(|a| a.adjoint() * a).collect()
    }

    /// `max |Σ_i Π_i - P_support|`.
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.dim();
        let sum = self
            .elements()
            .into_iter()
            .fold(CMatrix::zeros(dim, dim), |acc, e| acc + e);
        max_abs_diff(&sum, &self.support_projector())
    }

    /// Same POVM with outcomes reordered by `order`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        Self::new(
            order.iter().map(|&i| self.operators[i].clone()).collect(),
            order.iter().map(|&i| self.labels[i].clone()).collect(),
            self.support.clone(),
        )
    }
}

/// `|u_j⟩ = (1/√n) Σ_k y_k ω^{jk} |k⟩`.
pub fn uniform_state(spec: &EnsembleSpec, j: usize) -> CVector {
    let n = spec.n_states();
    let norm = (spec.support_dim() as f64).sqrt();
    CVector::from_iterator(
        n,
        (0..n).map(|k| {
            if spec.in_support(k) {
                root_of_unity_power(n, (j * k) as i64) / norm
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    )
}

/// Positive square root of the ME element, `√(n/N) |u_j⟩⟨u_j|`.
pub fn me_element_root(spec: &EnsembleSpec, j: usize) -> CMatrix {
    let u = uniform_state(spec, j);
    let w = (spec.support_dim() as f64 / spec.n_states() as f64).sqrt();
    (&u * u.adjoint()).scale(w)
}

fn me_roots(spec: &EnsembleSpec) -> Vec<CMatrix> {
    (0..spec.n_states())
        .map(|j| me_element_root(spec, j))
        .collect()
}

/// Minimum-error POVM `Π_j = (n/N) |u_j⟩⟨u_j|`.
pub fn me_povm(spec: &EnsembleSpec) -> Result<Povm> {
    Povm::new(
        me_roots(spec),
        (0..spec.n_states()).map(|j| j.to_string()).collect(),
        spec.support().to_vec(),
    )
}

/// Two-outcome separation POVM `{A_s, A_f}`.
pub fn separation_povm(spec: &EnsembleSpec, xi: f64) -> Result<Povm> {
    let profile = SeparationProfile::new(spec, xi)?;
    let (a_s, a_f) = detection_operators_from(spec, &profile);
    Povm::new(
        vec![a_s, a_f],
        vec!["s".into(), "f".into()],
        spec.support().to_vec(),
    )
}

/// Standard FRIO POVM: `A_j = √Π_j^ME A_s` for `j < N`, then `A_? = A_f`.
pub fn frio_povm(spec: &EnsembleSpec, xi: f64) -> Result<Povm> {
    let profile = SeparationProfile::new(spec, xi)?;
    let (a_s, a_f) = detection_operators_from(spec, &profile);
    let mut ops: Vec<CMatrix> = me_roots(spec).iter().map(|r| r * &a_s).collect();
    ops.push(a_f);
    let mut labels: Vec<String> = (0..spec.n_states()).map(|j| j.to_string()).collect();
    labels.push("?".into());
    Povm::new(ops, labels, spec.support().to_vec())
}

/// Concatenated FRIO POVM: `A_j = √Π_j^ME A_s` and `A_j^? = √Π_j^ME A_f`.
pub fn concatenated_povm(spec: &EnsembleSpec, xi: f64) -> Result<Povm> {
    let profile = SeparationProfile::new(spec, xi)?;
    let (a_s, a_f) = detection_operators_from(spec, &profile);
    let roots = me_roots(spec);
    let mut ops: Vec<CMatrix> = roots.iter().map(|r| r * &a_s).collect();
    ops.extend(roots.iter().map(|r| r * &a_f));
    let n = spec.n_states();
    let labels = (0..n)
        .map(|j| j.to_string())
        .chain((0..n).map(|j| format!("?{j}")))
        .collect();
    Povm::new(ops, labels, spec.support().to_vec())
}

/// One measurement outcome.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub probability: f64,
    /// `A_i ρ A_i† / p_i`, absent when `p_i` is at most [`PROB_EPS`].
    pub state: Option<DensityMatrix>,
}

fn check_support(povm: &Povm, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let mut weight: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !povm.support[i] || !povm.support[j] {
                weight = weight.max(m[(i, j)].norm());
            }
        }
    }
    if weight > SUPPORT_LEAK_TOL {
        return Err(Error::SupportMismatch { weight });
    }
    Ok(())
}

/// Outcome probabilities `Tr(A_i ρ A_i†)` and postmeasurement states.
pub fn measure(povm: &Povm, rho: &DensityMatrix) -> Result<Vec<Outcome>> {
    check_support(povm, rho)?;
    povm.operators
        .iter()
        .map(|a| {
            let out = a * rho.matrix() * a.adjoint();
            let p = out.trace().re.max(0.0);
            let state = if p > PROB_EPS {
                Some(DensityMatrix::from_hermitian_part(&out.unscale(p))?)
            } else {
                None
            };
            Ok(Outcome {
                probability: p,
                state,
            })
        })
        .collect()
}

/// Outcome probabilities only.
pub fn outcome_probabilities(povm: &Povm, rho: &DensityMatrix) -> Result<Vec<f64>> {
    check_support(povm, rho)?;
    Ok(povm
        .operators
        .iter()
        .map(|a| (a * rho.matrix() * a.adjoint()).trace().re.max(0.0))
        .collect())
}

/// Relative entropy of POVM-based coherence,
/// `H({p_i}) + Σ_i p_i S(ρ_i) - S(ρ)`.
pub fn povm_coherence(rho: &DensityMatrix, povm: &Povm) -> Result<f64> {
    let outcomes = measure(povm, rho)?;
    let probs: Vec<f64> = outcomes
        .iter()
        .map(|o| {
            if o.probability > PROB_EPS {
                o.probability
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = probs.iter().sum();
    let h = shannon_entropy(&ProbabilityVector::new(
        probs.iter().map(|p| p / total).collect(),
    )?);
    let avg: f64 = outcomes
        .iter()
        .filter_map(|o| {
            o.state
                .as_ref()
                .map(|s| o.probability * von_neumann_entropy(s))
        })
        .sum();
    Ok((h + avg - von_neumann_entropy(rho)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{coefficient_family, input_density_matrix, p_correct, symmetric_states};
    use crate::linalg::hermitian_eigen;
    use crate::separation::success_failure_probabilities;
    use approx::assert_abs_diff_eq;

    fn e1() -> EnsembleSpec {
        coefficient_family(0.385, 0.2, 3).unwrap()
    }

    /// Generic eigendecomposition square root, as an oracle for the
    /// analytic rank-one root.
    fn sqrtm(m: &CMatrix) -> CMatrix {
        let (vals, vecs) = hermitian_eigen(m).unwrap();
        let roots: Vec<f64> = vals.iter().map(|v| v.max(0.0).sqrt()).collect();
        &vecs * real_diagonal(&roots) * vecs.adjoint()
    }

    #[test]
    fn me_povm_orthogonal_when_n_equals_n_states() {
        let spec = EnsembleSpec::uniform(3).unwrap();
        let povm = me_povm(&spec).unwrap();
        for e in povm.elements() {
            assert!(max_abs_diff(&(&e * &e), &e) < 1e-14);
        }
        let rho = input_density_matrix(&spec);
        for p in outcome_probabilities(&povm, &rho).unwrap() {
            assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn me_povm_linearly_dependent() {
        let spec = coefficient_family(0.3, 0.2, 4).unwrap();
        let povm = me_povm(&spec).unwrap();
        assert_eq!(povm.len(), 4);
        assert!(povm.completeness_residual() < 1e-12);
        for e in povm.elements() {
            assert_abs_diff_eq!(e.trace().re, 0.75, epsilon = 1e-14);
        }
    }

    #[test]
    fn analytic_root_matches_generic_root() {
        let spec = coefficient_family(0.3, 0.2, 4).unwrap();
        for (j, e) in me_povm(&spec).unwrap().elements().iter().enumerate() {
            assert!(max_abs_diff(&sqrtm(e), &me_element_root(&spec, j)) < 1e-12);
        }
    }

    #[test]
    fn me_correct_probability_matches_closed_form() {
        let spec = e1();
        let povm = me_povm(&spec).unwrap();
        let states = symmetric_states(&spec);
        let mut total = 0.0;
        for (j, e) in povm.elements().iter().enumerate() {
            total += states[j].dotc(&(e * &states[j])).re;
        }
        assert_abs_diff_eq!(total / 3.0, p_correct(&spec), epsilon = 1e-12);
    }

    #[test]
    fn frio_reduces_to_me_at_zero() {
        let spec = e1();
        let frio = frio_povm(&spec, 0.0).unwrap();
        assert_eq!(frio.len(), 4);
        assert_eq!(frio.operators()[3].norm(), 0.0);
        let me = me_povm(&spec).unwrap();
        for j in 0..3 {
            assert!(max_abs_diff(&frio.operators()[j], &me.operators()[j]) < 1e-14);
        }
    }

    #[test]
    fn frio_at_one_is_unambiguous() {
        let spec = e1();
        let frio = frio_povm(&spec, 1.0).unwrap();
        let (p, _) = success_failure_probabilities(&spec, 1.0).unwrap();
        assert_abs_diff_eq!(p, 3.0 * 0.04, epsilon = 1e-15);
        // Conclusive elements are rank one and never fire on the wrong input.
        let states = symmetric_states(&spec);
        for j in 0..3 {
            let e = frio.elements()[j].clone();
            let scale = e.trace().re;
            assert!(max_abs_diff(&(&e * &e), &e.scale(scale)) < 1e-12);
            for (i, s) in states.iter().enumerate() {
                if i != j {
                    assert!(s.dotc(&(&e * s)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn frio_probabilities_at_worked_point() {
        let spec = e1();
        let frio = frio_povm(&spec, 0.5).unwrap();
        assert!(frio.completeness_residual() < 1e-12);
        let out = measure(&frio, &input_density_matrix(&spec)).unwrap();
        for o in &out[..3] {
            assert_abs_diff_eq!(o.probability, 1.0 / 14.0, epsilon = 1e-12);
            assert!(von_neumann_entropy(o.state.as_ref().unwrap()) < 1e-9);
        }
        assert_abs_diff_eq!(out[3].probability, 11.0 / 14.0, epsilon = 1e-12);
    }

    #[test]
    fn concatenated_cases() {
        let spec = e1();
        let conc = concatenated_povm(&spec, 0.0).unwrap();
        assert_eq!(conc.len(), 6);
        for a in &conc.operators()[3..] {
            assert_eq!(a.norm(), 0.0);
        }
        let u = EnsembleSpec::uniform(3).unwrap();
        let conc = concatenated_povm(&u, 0.7).unwrap();
        let me = me_povm(&u).unwrap();
        for j in 0..3 {
            assert!(max_abs_diff(&conc.operators()[j], &me.operators()[j]) < 1e-12);
            assert_eq!(conc.operators()[j + 3].norm(), 0.0);
        }
        let conc = concatenated_povm(&spec, 0.5).unwrap();
        let out = measure(&conc, &input_density_matrix(&spec)).unwrap();
        for (i, o) in out.iter().enumerate() {
            let expect = if i < 3 { 1.0 / 14.0 } else { 11.0 / 42.0 };
            assert_abs_diff_eq!(o.probability, expect, epsilon = 1e-12);
            assert!(von_neumann_entropy(o.state.as_ref().unwrap()) < 1e-9);
        }
    }

    #[test]
    fn measure_trivial_and_projective() {
        let spec = EnsembleSpec::uniform(3).unwrap();
        let trivial = Povm::new(
            vec![CMatrix::identity(3, 3)],
            vec!["1".into()],
            vec![true; 3],
        )
        .unwrap();
        let rho = input_density_matrix(&e1());
        let out = measure(&trivial, &rho).unwrap();
        assert_abs_diff_eq!(out[0].probability, 1.0, epsilon = 1e-15);
        assert!(max_abs_diff(out[0].state.as_ref().unwrap().matrix(), rho.matrix()) < 1e-15);

        let u0 = DensityMatrix::pure(&uniform_state(&spec, 0)).unwrap();
        let out = measure(&me_povm(&spec).unwrap(), &u0).unwrap();
        assert_abs_diff_eq!(out[0].probability, 1.0, epsilon = 1e-14);
        assert!(out[1].probability < 1e-14 && out[1].state.is_none());
    }

    #[test]
    fn measure_rejects_off_support_state() {
        let spec = coefficient_family(0.3, 0.2, 4).unwrap();
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            measure(&me_povm(&spec).unwrap(), &rho),
            Err(Error::SupportMismatch { .. })
        ));
        let small = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            measure(&me_povm(&spec).unwrap(), &small),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn povm_rejects_incomplete_operators() {
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!(matches!(
            Povm::new(vec![half], vec!["x".into()], vec![true, true]),
            Err(Error::Incomplete(_))
        ));
    }

    #[test]
    fn coherence_examples() {
        // Eigenbasis projective measurement of a diagonal state.
        let rho = DensityMatrix::from_diagonal(&[0.2, 0.3, 0.5]).unwrap();
        let proj = Povm::new(
            (0..3)
                .map(|k| {
                    let mut d = vec![0.0; 3];
                    d[k] = 1.0;
                    real_diagonal(&d)
                })
                .collect(),
            vec!["0".into(), "1".into(), "2".into()],
            vec![true; 3],
        )
        .unwrap();
        assert_abs_diff_eq!(povm_coherence(&rho, &proj).unwrap(), 0.0, epsilon = 1e-12);

        // Maximally mixed state on the support: log2(N/n).
        let spec = coefficient_family(0.3, 0.2, 4).unwrap();
        let flat = DensityMatrix::from_diagonal(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]).unwrap();
        assert_abs_diff_eq!(
            povm_coherence(&flat, &me_povm(&spec).unwrap()).unwrap(),
            (4.0f64 / 3.0).log2(),
            epsilon = 1e-10
        );

        // Fourier states of the {|u_k⟩} basis reach log2 N.
        let spec = EnsembleSpec::uniform(3).unwrap();
        let me = me_povm(&spec).unwrap();
        for j in 0..3 {
            let mut psi = CVector::zeros(3);
            for k in 0..3 {
                psi += uniform_state(&spec, k) * root_of_unity_power(3, -((j * k) as i64));
            }
            let psi = psi.unscale(3f64.sqrt());
            let c = povm_coherence(&DensityMatrix::pure(&psi).unwrap(), &me).unwrap();
            assert_abs_diff_eq!(c, 3f64.log2(), epsilon = 1e-9);
        }
    }

    #[test]
    fn coherence_is_permutation_invariant() {
        let spec = e1();
        let rho = input_density_matrix(&spec);
        let conc = concatenated_povm(&spec, 0.4).unwrap();
        let c = povm_coherence(&rho, &conc).unwrap();
        let shuffled = conc.permuted(&[5, 2, 0, 4, 1, 3]).unwrap();
        assert_abs_diff_eq!(povm_coherence(&rho, &shuffled).unwrap(), c, epsilon = 1e-12);
    }
}
