//! Grid sweeps over coefficient families and random ensembles.

use frio_coherence::ensemble::{coefficient_family, RandomEnsemble};
use frio_coherence::{CoherenceReport, EnsembleSpec};
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::table::{fmt_g, Row};
use crate::CliError;

/// One `(ensemble, ξ)` point with its row label.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub source: String,
    pub spec: EnsembleSpec,
    pub xi: f64,
}

/// Points in output order: families by index, then `a_min`, then `ξ`;
/// random draws by draw index, then `ξ`.
pub fn sweep_points(config: &SweepConfig) -> Result<Vec<SweepPoint>, CliError> {
    let mut points = Vec::new();
    for &a0 in &config.families {
        let source = format!("family:{}", fmt_g(a0));
        for amin in config.amin_grid(a0) {
            let spec =
                coefficient_family(a0, amin, config.n_states).map_err(CliError::from_input)?;
            for &xi in &config.xi_values {
                points.push(SweepPoint {
                    source: source.clone(),
                    spec: spec.clone(),
                    xi,
                });
            }
        }
    }
    if config.random_count > 0 {
        let sampler = RandomEnsemble::new(config.n_states, config.support_dim)
            .map_err(CliError::from_input)?;
        for spec in sampler.sample(config.random_count, config.seed) {
            for &xi in &config.xi_values {
                points.push(SweepPoint {
                    source: "random".into(),
                    spec: spec.clone(),
                    xi,
                });
            }
        }
    }
    Ok(points)
}

/// Evaluates every point in parallel; rows keep the input order.
pub fn evaluate(points: &[SweepPoint], with_discord: bool) -> Result<Vec<Row>, CliError> {
    points
        .par_iter()
        .map(|p| {
            let report = CoherenceReport::compute(&p.spec, p.xi, with_discord)
                .map_err(|e| CliError::Evaluation(format!("{} at xi = {}: {e}", p.source, p.xi)))?;
            Ok(Row {
                source: p.source.clone(),
                report,
            })
        })
        .collect()
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<Row>, CliError> {
    evaluate(&sweep_points(config)?, config.with_discord)
}
