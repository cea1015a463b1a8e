//! Identity suite: every closed form against an independent route, on
//! seeded random points plus fixed extreme cases.

use std::fmt;

use frio_coherence::analysis::{bounds_check, Identity, CLOSED_FORM_TOL, DISCORD_TOL};
use frio_coherence::ensemble::{coefficient_family, input_density_matrix, RandomEnsemble};
use frio_coherence::linalg::{
    hermitian_eigenvalues, max_abs_diff, partial_trace, von_neumann_entropy, Subsystem,
};
use frio_coherence::povm::{
    concatenated_povm, frio_povm, me_povm, outcome_probabilities, povm_coherence, separation_povm,
};
use frio_coherence::separation::{ancilla_eigenvalues, ancilla_state, bipartite_state};
use frio_coherence::{CoherenceReport, EnsembleSpec, SeparationProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::table::fmt_g;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

/// Deliberate corruption used to confirm the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fault {
    /// Multiply the failure-branch coefficients by this factor.
    FailureScale(f64),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub level: Level,
    pub seed: u64,
    pub tolerance_scale: f64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            level: Level::Quick,
            seed: 0,
            tolerance_scale: 1.0,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Mixture,
    Reduction,
    AncillaSpectrum,
    SeparationCoherence,
    MutualInformation,
    Maximizer,
    DiscordSplit,
    FrioProbabilities,
    FrioCoherence,
    MeCoherence,
    FrioSplit,
    UdLimit,
    ConcProbabilities,
    ConcCoherence,
    ConcSplit,
    Bounds,
    Dominance,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::Mixture,
        Check::Reduction,
        Check::AncillaSpectrum,
        Check::SeparationCoherence,
        Check::MutualInformation,
        Check::Maximizer,
        Check::DiscordSplit,
        Check::FrioProbabilities,
        Check::FrioCoherence,
        Check::MeCoherence,
        Check::FrioSplit,
        Check::UdLimit,
        Check::ConcProbabilities,
        Check::ConcCoherence,
        Check::ConcSplit,
        Check::Bounds,
        Check::Dominance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Mixture => "mixture identity",
            Check::Reduction => "system reduction",
            Check::AncillaSpectrum => "ancilla state and spectrum",
            Check::SeparationCoherence => "separation coherence",
            Check::MutualInformation => "mutual information = ancilla entropy",
            Check::Maximizer => "computational-basis maximizer",
            Check::DiscordSplit => Identity::DiscordSplit.name(),
            Check::FrioProbabilities => "FRIO outcome probabilities",
            Check::FrioCoherence => "FRIO coherence",
            Check::MeCoherence => "ME coherence",
            Check::FrioSplit => Identity::FrioSplit.name(),
            Check::UdLimit => Identity::UdLimit.name(),
            Check::ConcProbabilities => "concatenated outcome probabilities",
            Check::ConcCoherence => "concatenated coherence",
            Check::ConcSplit => Identity::ConcatenatedSplit.name(),
            Check::Bounds => "coherence bounds",
            Check::Dominance => "concatenated dominance",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Check::Mixture
            | Check::Reduction
            | Check::AncillaSpectrum
            | Check::MutualInformation => 1e-10,
            Check::Maximizer | Check::DiscordSplit => DISCORD_TOL,
            Check::FrioProbabilities | Check::ConcProbabilities => 1e-12,
            _ => CLOSED_FORM_TOL,
        }
    }
}

/// A `(spec, ξ)` point under test.
#[derive(Debug, Clone)]
pub struct Case {
    pub spec: EnsembleSpec,
    pub xi: f64,
}

/// Seeded random cases with `N ∈ {3, 4}`, `n = 3` and `ξ` uniform in `[0, 1]`.
pub fn random_cases(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samplers = [
        RandomEnsemble::new(3, 3).expect("valid sampler"),
        RandomEnsemble::new(4, 3).expect("valid sampler"),
    ];
    (0..count)
        .map(|i| {
            let spec = samplers[i % 2].draw(&mut rng);
            Case {
                spec,
                xi: rng.random::<f64>(),
            }
        })
        .collect()
}

/// Cases for the chosen level.
pub fn cases(level: Level, seed: u64) -> Vec<Case> {
    match level {
        Level::Quick => random_cases(20, seed),
        Level::Full => {
            let mut out = random_cases(200, seed);
            let large = RandomEnsemble::new(50, 3).expect("valid sampler");
            for spec in large.sample(3, seed.wrapping_add(1)) {
                for xi in [0.01, 0.6] {
                    out.push(Case {
                        spec: spec.clone(),
                        xi,
                    });
                }
            }
            let ud = RandomEnsemble::new(3, 3).expect("valid sampler");
            out.extend(
                ud.sample(20, seed.wrapping_add(2))
                    .into_iter()
                    .map(|spec| Case { spec, xi: 1.0 }),
            );
            let fixed = [
                coefficient_family(0.2, 0.2, 3),
                coefficient_family(0.3, 0.2, 4),
                EnsembleSpec::parallel(3, 0),
                EnsembleSpec::uniform(3),
            ];
            for spec in fixed {
                let spec = spec.expect("valid fixed ensemble");
                for xi in [0.0, 0.5, 1.0] {
                    out.push(Case {
                        spec: spec.clone(),
                        xi,
                    });
                }
            }
            out
        }
    }
}

fn mixture_residual(
    spec: &EnsembleSpec,
    xi: f64,
    fault: Option<Fault>,
) -> frio_coherence::Result<f64> {
    let profile = SeparationProfile::new(spec, xi)?;
    let scale = match fault {
        Some(Fault::FailureScale(s)) => s,
        None => 1.0,
    };
    let mut worst: f64 = 0.0;
    for k in 0..spec.n_states() {
        let fail = profile
            .failure_coeffs
            .as_ref()
            .map_or(0.0, |f| (scale * f[k]).powi(2));
        let mixed =
            profile.success_prob * profile.success_coeffs[k].powi(2) + profile.failure_prob * fail;
        worst = worst.max((mixed - spec.coeff(k).powi(2)).abs());
    }
    Ok(worst)
}

fn probability_residual(measured: &[f64], expected: &[f64]) -> f64 {
    measured
        .iter()
        .zip(expected)
        .map(|(m, e)| (m - e).abs())
        .fold(0.0, f64::max)
}

/// Residual of every applicable check at one case.
pub fn evaluate_case(
    case: &Case,
    fault: Option<Fault>,
) -> frio_coherence::Result<Vec<(Check, f64)>> {
    let Case { spec, xi } = case;
    let xi = *xi;
    let n = spec.n_states();
    let nf = n as f64;
    let rho = input_density_matrix(spec);
    let report = CoherenceReport::compute(spec, xi, true)?;
    let profile = SeparationProfile::new(spec, xi)?;
    let (p, q) = (report.success_prob, report.failure_prob);
    let mut out = Vec::with_capacity(Check::ALL.len());

    out.push((Check::Mixture, mixture_residual(spec, xi, fault)?));

    let rho_da = bipartite_state(spec, xi)?;
    let reduced = partial_trace(&rho_da, n, 2, Subsystem::Ancilla)?;
    out.push((
        Check::Reduction,
        max_abs_diff(reduced.matrix(), rho.matrix()),
    ));

    let rho_a = ancilla_state(spec, xi)?;
    let traced = partial_trace(&rho_da, n, 2, Subsystem::System)?;
    let (l_plus, l_minus) = ancilla_eigenvalues(&profile);
    let eig = hermitian_eigenvalues(traced.matrix())?;
    let spectrum = (eig[0] - l_plus).abs().max((eig[1] - l_minus).abs());
    out.push((
        Check::AncillaSpectrum,
        max_abs_diff(traced.matrix(), rho_a.matrix()).max(spectrum),
    ));

    let generic_sep = povm_coherence(&rho, &separation_povm(spec, xi)?)?;
    out.push((
        Check::SeparationCoherence,
        (generic_sep - report.c_sep).abs(),
    ));

    let d = report.discord.expect("discord requested");
    out.push((
        Check::MutualInformation,
        (d.mutual_information - von_neumann_entropy(&rho_a)).abs(),
    ));
    out.push((Check::Maximizer, (d.j_max - report.j_computational).abs()));
    out.push((
        Check::DiscordSplit,
        report.residuals[&Identity::DiscordSplit],
    ));

    let frio = frio_povm(spec, xi)?;
    let mut expected = vec![p / nf; n];
    expected.push(q);
    out.push((
        Check::FrioProbabilities,
        probability_residual(&outcome_probabilities(&frio, &rho)?, &expected),
    ));
    out.push((
        Check::FrioCoherence,
        (povm_coherence(&rho, &frio)? - report.c_frio).abs(),
    ));
    out.push((
        Check::MeCoherence,
        (povm_coherence(&rho, &me_povm(spec)?)? - report.c_me).abs(),
    ));
    out.push((Check::FrioSplit, report.residuals[&Identity::FrioSplit]));
    if let Some(&r) = report.residuals.get(&Identity::UdLimit) {
        out.push((Check::UdLimit, r));
    }

    let conc = concatenated_povm(spec, xi)?;
    let mut expected = vec![p / nf; n];
    expected.extend(std::iter::repeat_n(q / nf, n));
    out.push((
        Check::ConcProbabilities,
        probability_residual(&outcome_probabilities(&conc, &rho)?, &expected),
    ));
    out.push((
        Check::ConcCoherence,
        (povm_coherence(&rho, &conc)? - report.c_conc).abs(),
    ));
    out.push((
        Check::ConcSplit,
        report.residuals[&Identity::ConcatenatedSplit],
    ));

    let bounds = bounds_check(spec, xi)?;
    let mut excess: f64 = 0.0;
    for e in &bounds.entries {
        excess = excess.max(-e.coherence).max(e.coherence - e.upper);
    }
    for c in &bounds.me_fourier {
        excess = excess.max((c - nf.log2()).abs());
    }
    let flat = (nf / spec.support_dim() as f64).log2();
    excess = excess.max((bounds.me_flat - flat).abs());
    out.push((Check::Bounds, excess));

    let gap = report.c_conc - report.c_frio;
    let dominance = if q <= 1e-12 {
        gap.abs()
    } else if q > 1e-6 && gap <= 0.0 {
        // Strict dominance is required once the failure branch carries weight.
        1.0
    } else {
        (-gap).max(0.0)
    };
    out.push((Check::Dominance, dominance));

    Ok(out)
}

/// A check exceeding its tolerance at one case.
#[derive(Debug, Clone)]
pub struct Failure {
    pub coeffs: Vec<f64>,
    pub xi: f64,
    pub residual: f64,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.coeffs.iter().map(|&a| fmt_g(a)).collect();
        write!(
            f,
            "N={} a=[{}] xi={} residual={:.3e}",
            self.coeffs.len(),
            coeffs.join(","),
            fmt_g(self.xi),
            self.residual
        )
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: Check,
    pub tolerance: f64,
    pub cases: usize,
    pub max_residual: f64,
    pub failures: Vec<Failure>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures.is_empty()
    }

    /// The failing case with the largest residual.
    pub fn worst(&self) -> Option<&Failure> {
        self.failures
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn outcome(&self, check: Check) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.check == check)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let status = if o.passed() { "PASS" } else { "FAIL" };
            write!(
                f,
                "{status}  {:<38} cases={:<4} max_residual={:.3e} tol={:.0e}",
                o.check.name(),
                o.cases,
                o.max_residual,
                o.tolerance
            )?;
            if let Some(w) = o.worst() {
                write!(f, " failures={} worst: {w}", o.failures.len())?;
            }
            writeln!(f)?;
        }
        let passed = self.outcomes.iter().filter(|o| o.passed()).count();
        writeln!(f, "{passed}/{} checks passed", self.outcomes.len())
    }
}

/// Runs the suite over `cases`.
pub fn run_cases(
    cases: &[Case],
    tolerance_scale: f64,
    fault: Option<Fault>,
) -> Result<VerifyReport, CliError> {
    let per_case: Vec<Vec<(Check, f64)>> = cases
        .par_iter()
        .map(|c| {
            evaluate_case(c, fault).map_err(|e| {
                CliError::Evaluation(format!(
                    "verify case N={} xi={}: {e}",
                    c.spec.n_states(),
                    c.xi
                ))
            })
        })
        .collect::<Result<_, _>>()?;

    let mut outcomes: Vec<CheckOutcome> = Check::ALL
        .iter()
        .map(|&check| CheckOutcome {
            check,
            tolerance: check.tolerance() * tolerance_scale,
            cases: 0,
            max_residual: 0.0,
            failures: Vec::new(),
        })
        .collect();
    for (case, residuals) in cases.iter().zip(&per_case) {
        for &(check, r) in residuals {
            let o = &mut outcomes[check as usize];
            o.cases += 1;
            o.max_residual = o.max_residual.max(r);
            if r.is_nan() || r > o.tolerance {
                o.failures.push(Failure {
                    coeffs: case.spec.coeffs().to_vec(),
                    xi: case.xi,
                    residual: r,
                });
            }
        }
    }
    Ok(VerifyReport { outcomes })
}

pub fn run_verify(options: &VerifyOptions) -> Result<VerifyReport, CliError> {
    run_cases(
        &cases(options.level, options.seed),
        options.tolerance_scale,
        options.fault,
    )
}
