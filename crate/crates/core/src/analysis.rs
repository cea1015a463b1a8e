//! Closed-form coherences, decomposition identities and bounds for one
//! `(ensemble, ξ)` point.
//!
//! Every coherence has a closed form in terms of `P`, `Q` and the
//! entropies of the diagonal states `ρ`, `ρ_s`, `ρ_f`. The generic POVM
//! evaluator in [`crate::povm`] provides the independent second route.

use std::collections::BTreeMap;
use std::fmt;

use crate::correlations::{
    closed_form_max_j_from, discord_from, max_classical_correlation, mutual_information,
};
use crate::ensemble::{distinguishability, input_density_matrix, EnsembleSpec};
use crate::linalg::{binary_entropy, von_neumann_entropy, CVector, DensityMatrix};
use crate::povm::{concatenated_povm, frio_povm, me_povm, povm_coherence, separation_povm, Povm};
use crate::separation::{
    ancilla_coherence_from, bipartite_state_from, separation_coherence_from, SeparationProfile,
};
use crate::{Error, Result};

/// Tolerance for identities that involve the numerically optimized discord.
pub const DISCORD_TOL: f64 = 1e-6;
/// Tolerance for identities between closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Failure probabilities at or below this count as zero.
pub const ZERO_FAILURE: f64 = 1e-12;

/// Decomposition identities checked per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    /// Separation coherence = ancilla coherence + discord.
    DiscordSplit,
    /// FRIO coherence = separation coherence + P · ME coherence of `ρ_s`.
    FrioSplit,
    /// Concatenated coherence = FRIO coherence + Q · ME coherence of `ρ_f`.
    ConcatenatedSplit,
    /// At `ξ = 1` with `N = n`, FRIO coherence = separation coherence.
    UdLimit,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::DiscordSplit => "discord split",
            Identity::FrioSplit => "FRIO split",
            Identity::ConcatenatedSplit => "concatenated split",
            Identity::UdLimit => "UD limit",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Identity::DiscordSplit => DISCORD_TOL,
            _ => CLOSED_FORM_TOL,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_diagonal(rho: &DensityMatrix) -> Result<()> {
    let m = rho.matrix();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)].norm() > 1e-12 {
                return Err(Error::NotDiagonal { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// ME coherence of a state diagonal in `{|k⟩}`: `log2 N - S(ρ)`.
pub fn me_coherence_closed(rho: &DensityMatrix, n_states: usize) -> Result<f64> {
    check_diagonal(rho)?;
    Ok(me_coherence_from_entropy(
        von_neumann_entropy(rho),
        n_states,
    ))
}

fn me_coherence_from_entropy(entropy: f64, n_states: usize) -> f64 {
    ((n_states as f64).log2() - entropy).max(0.0)
}

/// Standard FRIO coherence `H2(P) + P log2 N + Q S(ρ_f) - S(ρ)`.
pub fn frio_coherence_closed(spec: &EnsembleSpec, xi: f64) -> Result<f64> {
    let profile = SeparationProfile::new(spec, xi)?;
    frio_from(spec, &profile)
}

fn frio_from(spec: &EnsembleSpec, profile: &SeparationProfile) -> Result<f64> {
    let log_n = (spec.n_states() as f64).log2();
    let fail = profile
        .failure_entropy()
        .map_or(0.0, |s| profile.failure_prob * s);
    let c = binary_entropy(profile.success_prob)? + profile.success_prob * log_n + fail
        - von_neumann_entropy(&input_density_matrix(spec));
    Ok(c.max(0.0))
}

/// Concatenated FRIO coherence `H2(P) + log2 N - S(ρ)`.
pub fn conc_coherence_closed(spec: &EnsembleSpec, xi: f64) -> Result<f64> {
    let profile = SeparationProfile::new(spec, xi)?;
    conc_from(spec, &profile)
}

fn conc_from(spec: &EnsembleSpec, profile: &SeparationProfile) -> Result<f64> {
    let c = binary_entropy(profile.success_prob)? + (spec.n_states() as f64).log2()
        - von_neumann_entropy(&input_density_matrix(spec));
    Ok(c.max(0.0))
}

/// Secret-bit rate of the outcomes of `povm` on `rho` against an
/// eavesdropper holding a purification. Equal to the POVM coherence.
pub fn private_randomness(rho: &DensityMatrix, povm: &Povm) -> Result<f64> {
    povm_coherence(rho, povm)
}

/// Optimized classical correlation and the resulting discord.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    pub mutual_information: f64,
    pub j_max: f64,
    pub theta: f64,
    pub phi: f64,
}

/// All scalar outputs for one `(ensemble, ξ)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    pub n_states: usize,
    pub support_dim: usize,
    pub coeffs: Vec<f64>,
    pub a_min: f64,
    pub multiplicity: usize,
    pub xi: f64,
    pub distinguishability: f64,
    pub success_prob: f64,
    pub failure_prob: f64,
    pub s_rho: f64,
    pub s_rho_s: f64,
    pub s_rho_f: Option<f64>,
    pub c_sep: f64,
    pub c_ancilla: f64,
    /// `J` for the computational-basis ancilla measurement.
    pub j_computational: f64,
    /// Present when the discord optimization was requested.
    pub discord: Option<DiscordResult>,
    pub c_me: f64,
    pub c_me_s: f64,
    pub c_me_f: Option<f64>,
    pub c_frio: f64,
    pub c_conc: f64,
    /// `Q · C_me(ρ_f)`, the extra cost of the concatenated strategy.
    pub c_extra: f64,
    /// `Tr(ρ_da²)` of the system-ancilla state.
    pub bipartite_purity: f64,
    pub residuals: BTreeMap<Identity, f64>,
}

impl CoherenceReport {
    pub fn compute(spec: &EnsembleSpec, xi: f64, with_discord: bool) -> Result<Self> {
        let profile = SeparationProfile::new(spec, xi)?;
        let n_states = spec.n_states();
        let s_rho = von_neumann_entropy(&input_density_matrix(spec));
        let s_rho_s = profile.success_entropy();
        let s_rho_f = profile.failure_entropy();
        let (p, q) = (profile.success_prob, profile.failure_prob);

        let c_sep = separation_coherence_from(spec, &profile)?;
        let c_ancilla = ancilla_coherence_from(&profile)?;
        let c_me = me_coherence_from_entropy(s_rho, n_states);
        let c_me_s = me_coherence_from_entropy(s_rho_s, n_states);
        let c_me_f = s_rho_f.map(|s| me_coherence_from_entropy(s, n_states));
        let c_frio = frio_from(spec, &profile)?;
        let c_conc = conc_from(spec, &profile)?;
        let c_extra = c_me_f.map_or(0.0, |c| q * c);

        let rho_da = bipartite_state_from(&profile)?;
        let discord = if with_discord {
            let mutual = mutual_information(&rho_da)?;
            let (j_max, arg) = max_classical_correlation(&rho_da)?;
            Some(DiscordResult {
                discord: discord_from(mutual, j_max)?,
                mutual_information: mutual,
                j_max,
                theta: arg.theta,
                phi: arg.phi,
            })
        } else {
            None
        };

        let mut residuals = BTreeMap::new();
        if let Some(d) = &discord {
            residuals.insert(
                Identity::DiscordSplit,
                (c_sep - c_ancilla - d.discord).abs(),
            );
        }
        residuals.insert(Identity::FrioSplit, (c_frio - c_sep - p * c_me_s).abs());
        residuals.insert(
            Identity::ConcatenatedSplit,
            (c_conc - c_frio - c_extra).abs(),
        );
        if spec.support_dim() == n_states {
            let ud = SeparationProfile::new(spec, 1.0)?;
            let diff = frio_from(spec, &ud)? - separation_coherence_from(spec, &ud)?;
            residuals.insert(Identity::UdLimit, diff.abs());
        }

        Ok(Self {
            n_states,
            support_dim: spec.support_dim(),
            coeffs: spec.coeffs().to_vec(),
            a_min: profile.a_min,
            multiplicity: profile.multiplicity,
            xi,
            distinguishability: distinguishability(spec),
            success_prob: p,
            failure_prob: q,
            s_rho,
            s_rho_s,
            s_rho_f,
            c_sep,
            c_ancilla,
            j_computational: closed_form_max_j_from(spec, &profile),
            discord,
            c_me,
            c_me_s,
            c_me_f,
            c_frio,
            c_conc,
            c_extra,
            bipartite_purity: rho_da.purity(),
            residuals,
        })
    }

    /// Identities whose residual exceeds `tolerance × scale`.
    pub fn failed_identities(&self, scale: f64) -> Vec<(Identity, f64)> {
        self.residuals
            .iter()
            .filter(|(id, &r)| r > id.tolerance() * scale)
            .map(|(&id, &r)| (id, r))
            .collect()
    }
}

/// Decomposition residuals for one point, with the discord optimized.
pub fn decomposition_residuals(spec: &EnsembleSpec, xi: f64) -> Result<BTreeMap<Identity, f64>> {
    Ok(CoherenceReport::compute(spec, xi, true)?.residuals)
}

/// One POVM's coherence and its upper bound `log2(#outcomes)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub povm: &'static str,
    pub coherence: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub entries: Vec<BoundEntry>,
    /// ME coherence of `(1/n) Σ y_k |k⟩⟨k|`, expected `log2(N/n)`.
    pub me_flat: f64,
    /// ME coherences of the Fourier states `|j⟩` when `N = n`.
    pub me_fourier: Vec<f64>,
}

/// A violated bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundViolation {
    pub name: String,
    pub value: f64,
    pub expected: f64,
}

impl BoundsReport {
    pub fn violations(&self, tol: f64) -> Vec<BoundViolation> {
        let mut out = Vec::new();
        for e in &self.entries {
            if e.coherence < -tol || e.coherence > e.upper + tol {
                out.push(BoundViolation {
                    name: format!("{} coherence bound", e.povm),
                    value: e.coherence,
                    expected: e.upper,
                });
            }
        }
        let me_upper = self.entries[1].upper;
        for (j, &c) in self.me_fourier.iter().enumerate() {
            if (c - me_upper).abs() > tol {
                out.push(BoundViolation {
                    name: format!("ME Fourier state {j}"),
                    value: c,
                    expected: me_upper,
                });
            }
        }
        out
    }
}

/// `(1/n) Σ_k y_k |k⟩⟨k|`.
pub fn flat_support_state(spec: &EnsembleSpec) -> DensityMatrix {
    let n = spec.support_dim() as f64;
    let diag: Vec<f64> = spec
        .support()
        .iter()
        .map(|&y| if y { 1.0 / n } else { 0.0 })
        .collect();
    DensityMatrix::from_diagonal(&diag).expect("flat state is valid")
}

/// Fourier states `|j⟩ = (1/√N) Σ_k ω^{-jk} |u_k⟩` of the uniform basis.
pub fn fourier_state(n_states: usize, j: usize) -> CVector {
    let uniform = EnsembleSpec::uniform(n_states).expect("uniform ensemble is valid");
    let mut psi = CVector::zeros(n_states);
    for k in 0..n_states {
        psi += crate::povm::uniform_state(&uniform, k)
            * crate::ensemble::root_of_unity_power(n_states, -((j * k) as i64));
    }
    psi.unscale((n_states as f64).sqrt())
}

/// Coherence of the input under all four POVMs against `log2(#outcomes)`,
/// plus the ME extremal states. Uses the generic POVM evaluator.
pub fn bounds_check(spec: &EnsembleSpec, xi: f64) -> Result<BoundsReport> {
    let rho = input_density_matrix(spec);
    let povms = [
        ("separation", separation_povm(spec, xi)?),
        ("ME", me_povm(spec)?),
        ("FRIO", frio_povm(spec, xi)?),
        ("concatenated", concatenated_povm(spec, xi)?),
    ];
    let mut entries = Vec::with_capacity(povms.len());
    for (name, povm) in &povms {
        entries.push(BoundEntry {
            povm: name,
            coherence: povm_coherence(&rho, povm)?,
            upper: (povm.len() as f64).log2(),
        });
    }
    let me = &povms[1].1;
    let me_flat = povm_coherence(&flat_support_state(spec), me)?;
    let me_fourier = if spec.support_dim() == spec.n_states() {
        (0..spec.n_states())
            .map(|j| {
                povm_coherence(
                    &DensityMatrix::pure(&fourier_state(spec.n_states(), j))?,
                    me,
                )
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    Ok(BoundsReport {
        entries,
        me_flat,
        me_fourier,
    })
}
