//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use frio_coherence::ensemble::coefficient_family;
use frio_coherence::{CoherenceReport, EnsembleSpec};

use crate::config::{parse_list, Settings, SweepConfig};
use crate::sweep::run_sweep;
use crate::table::{all_columns, fmt_g, write_csv, Row};
use crate::verify::{run_verify, Level, VerifyOptions};
use crate::{CliError, EXIT_OK, EXIT_USAGE};

/// Largest `|Σa² − 1|` that `--coeffs` silently renormalizes.
pub const RENORMALIZE_TOL: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(
    name = "frio",
    version,
    about = "POVM coherence and discord for symmetric-state discrimination"
)]
pub struct Cli {
    /// Seed for random ensembles.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (CSV for point/sweep/sample, text for verify).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` configuration file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Optimize the ancilla measurement and report the discord.
    #[arg(long, global = true)]
    pub with_discord: bool,
    /// Multiplier applied to every residual tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for one ensemble and separation parameter.
    Point(PointArgs),
    /// Coefficient-family and random sweeps to CSV.
    Sweep(SweepArgs),
    /// Random ensembles to CSV.
    Sample(SampleArgs),
    /// Run the identity suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(id = "ensemble", required = true, multiple = false)]
pub struct EnsembleArgs {
    /// Comma-separated coefficients a_0,…,a_{N-1}.
    #[arg(long, group = "ensemble")]
    pub coeffs: Option<String>,
    /// Coefficient family, e.g. `a0=0.385,amin=0.2`.
    #[arg(long, group = "ensemble")]
    pub family: Option<String>,
    /// Equal coefficients 1/√N.
    #[arg(long, group = "ensemble")]
    pub uniform: bool,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Number of states; pads `--coeffs` with zeros.
    #[arg(long = "N")]
    pub n_states: Option<usize>,
    /// Separation parameter in [0, 1].
    #[arg(long)]
    pub xi: f64,
    /// Print the report as a single CSV row instead of text.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of states.
    #[arg(long = "N")]
    pub n_states: Option<String>,
    /// Support dimension of random ensembles.
    #[arg(long = "n")]
    pub support_dim: Option<String>,
    /// Comma-separated separation parameters.
    #[arg(long)]
    pub xi: Option<String>,
    /// Comma-separated family leading coefficients a0.
    #[arg(long)]
    pub families: Option<String>,
    /// Points per family on the a_min grid [0, a0].
    #[arg(long)]
    pub amin_steps: Option<String>,
    /// Drop the a_min = 0 point from each family grid.
    #[arg(long)]
    pub amin_exclude_zero: bool,
    /// Number of random ensembles appended after the families.
    #[arg(long)]
    pub random_count: Option<String>,
    /// Comma-separated subset of CSV columns.
    #[arg(long)]
    pub outputs: Option<String>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Number of states.
    #[arg(long = "N")]
    pub n_states: Option<String>,
    /// Support dimension.
    #[arg(long = "n")]
    pub support_dim: Option<String>,
    /// Number of random ensembles.
    #[arg(long)]
    pub count: usize,
    /// Comma-separated separation parameters (default 0.5).
    #[arg(long)]
    pub xi: Option<String>,
    /// Comma-separated subset of CSV columns.
    #[arg(long)]
    pub outputs: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Quick: 20 random cases. Full: random, large-N, ξ = 1 and fixed cases.
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    pub level: Level,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if !matches!(e, CliError::Verification) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    if !(cli.tolerance_scale > 0.0 && cli.tolerance_scale.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tolerance-scale must be positive, got {}",
            cli.tolerance_scale
        )));
    }
    match &cli.command {
        Command::Point(args) => point(cli, args),
        Command::Sweep(args) => sweep(cli, args),
        Command::Sample(args) => sample(cli, args),
        Command::Verify(args) => verify(cli, args),
    }
}

fn with_output<F>(out: Option<&Path>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

/// Parses `--coeffs`, padding to `n_states` and renormalizing small norm
/// defects such as those left by rounded literals.
pub fn parse_coeffs(text: &str, n_states: Option<usize>) -> Result<EnsembleSpec, CliError> {
    let mut coeffs: Vec<f64> = parse_list(text, "coeffs")?;
    if let Some(n) = n_states {
        if n < coeffs.len() {
            return Err(CliError::Usage(format!(
                "--N {n} is smaller than the {} coefficients given",
                coeffs.len()
            )));
        }
        coeffs.resize(n, 0.0);
    }
    let norm: f64 = coeffs.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > RENORMALIZE_TOL {
        return Err(CliError::Usage(format!(
            "coefficients have sum of squares {norm}, expected 1"
        )));
    }
    EnsembleSpec::normalized(coeffs).map_err(CliError::from_input)
}

/// Parses `--family a0=…,amin=…`.
pub fn parse_family(text: &str, n_states: usize) -> Result<EnsembleSpec, CliError> {
    let (mut a0, mut amin) = (None, None);
    for part in text.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("--family expects a0=…,amin=…, got `{text}`"))
        })?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid number `{}` in --family", v.trim())))?;
        match k.trim() {
            "a0" => a0 = Some(v),
            "amin" => amin = Some(v),
            other => return Err(CliError::Usage(format!("unknown --family key `{other}`"))),
        }
    }
    match (a0, amin) {
        (Some(a0), Some(amin)) => {
            coefficient_family(a0, amin, n_states).map_err(CliError::from_input)
        }
        _ => Err(CliError::Usage("--family needs both a0 and amin".into())),
    }
}

fn point_spec(args: &PointArgs) -> Result<EnsembleSpec, CliError> {
    let e = &args.ensemble;
    if let Some(c) = &e.coeffs {
        parse_coeffs(c, args.n_states)
    } else if let Some(f) = &e.family {
        parse_family(f, args.n_states.unwrap_or(3))
    } else {
        EnsembleSpec::uniform(args.n_states.unwrap_or(3)).map_err(CliError::from_input)
    }
}

fn point(cli: &Cli, args: &PointArgs) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.xi) {
        return Err(CliError::Usage(format!(
            "xi = {} is outside [0, 1]",
            args.xi
        )));
    }
    let spec = point_spec(args)?;
    let report = CoherenceReport::compute(&spec, args.xi, cli.with_discord)
        .map_err(|e| CliError::Evaluation(e.to_string()))?;
    let rows = [Row {
        source: "point".into(),
        report,
    }];
    let columns = all_columns();
    if args.csv {
        write_csv(io::stdout().lock(), &rows, &columns)?;
    } else {
        print!("{}", render_report(&rows[0].report, cli.tolerance_scale));
    }
    if let Some(path) = &cli.out {
        with_output(Some(path), |w| write_csv(w, &rows, &columns))?;
    }
    let failed = rows[0].report.failed_identities(cli.tolerance_scale);
    if failed.is_empty() {
        Ok(())
    } else {
        for (id, r) in failed {
            eprintln!(
                "residual {id} = {r:.3e} exceeds tolerance {:.0e}",
                id.tolerance() * cli.tolerance_scale
            );
        }
        Err(CliError::Verification)
    }
}

/// Aligned key/value rendering of a report.
pub fn render_report(r: &CoherenceReport, tolerance_scale: f64) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), fmt_g);
    let coeffs: Vec<String> = r.coeffs.iter().map(|&a| fmt_g(a)).collect();
    let mut lines: Vec<(String, String)> = vec![
        ("N".into(), r.n_states.to_string()),
        ("n".into(), r.support_dim.to_string()),
        ("coeffs".into(), coeffs.join(", ")),
        ("a_min".into(), fmt_g(r.a_min)),
        ("mu".into(), r.multiplicity.to_string()),
        ("xi".into(), fmt_g(r.xi)),
        ("D".into(), fmt_g(r.distinguishability)),
        ("P".into(), fmt_g(r.success_prob)),
        ("Q".into(), fmt_g(r.failure_prob)),
        ("S_rho".into(), fmt_g(r.s_rho)),
        ("S_rhoS".into(), fmt_g(r.s_rho_s)),
        ("S_rhoF".into(), opt(r.s_rho_f)),
        ("C_sep".into(), fmt_g(r.c_sep)),
        ("C_ancilla".into(), fmt_g(r.c_ancilla)),
        ("discord".into(), opt(r.discord.map(|d| d.discord))),
        ("J_max".into(), opt(r.discord.map(|d| d.j_max))),
        ("J_computational".into(), fmt_g(r.j_computational)),
        ("C_me".into(), fmt_g(r.c_me)),
        ("C_meS".into(), fmt_g(r.c_me_s)),
        ("C_meF".into(), opt(r.c_me_f)),
        ("C_frio".into(), fmt_g(r.c_frio)),
        ("C_conc".into(), fmt_g(r.c_conc)),
        ("C_extra".into(), fmt_g(r.c_extra)),
        ("purity(rho_da)".into(), fmt_g(r.bipartite_purity)),
    ];
    for (id, v) in &r.residuals {
        let tol = id.tolerance() * tolerance_scale;
        let status = if *v <= tol { "ok" } else { "FAIL" };
        lines.push((
            format!("residual[{id}]"),
            format!("{v:.3e} (tol {tol:.0e}) {status}"),
        ));
    }
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    lines
        .iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn base_settings(cli: &Cli) -> Result<Settings, CliError> {
    let mut s = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    s.set("seed", cli.seed.map(|v| v.to_string()));
    s.set("out", cli.out.as_ref().map(|p| p.display().to_string()));
    if cli.with_discord {
        s.set("with_discord", Some("true".into()));
    }
    Ok(s)
}

fn emit(config: &SweepConfig) -> Result<(), CliError> {
    let rows = run_sweep(config)?;
    with_output(config.out.as_deref(), |w| {
        write_csv(w, &rows, &config.outputs)
    })
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<(), CliError> {
    let mut s = base_settings(cli)?;
    s.set("N", args.n_states.clone());
    s.set("n", args.support_dim.clone());
    s.set("xi", args.xi.clone());
    s.set("families", args.families.clone());
    s.set("amin_steps", args.amin_steps.clone());
    if args.amin_exclude_zero {
        s.set("amin_exclude_zero", Some("true".into()));
    }
    s.set("random_count", args.random_count.clone());
    s.set("outputs", args.outputs.clone());
    emit(&SweepConfig::from_settings(&s)?)
}

fn sample(cli: &Cli, args: &SampleArgs) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let mut s = base_settings(cli)?;
    s.set("N", args.n_states.clone());
    s.set("n", args.support_dim.clone());
    s.set("xi", args.xi.clone());
    s.set("outputs", args.outputs.clone());
    s.set("random_count", Some(args.count.to_string()));
    let mut config = SweepConfig::from_settings(&s)?;
    config.families.clear();
    emit(&config)
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<(), CliError> {
    let options = VerifyOptions {
        level: args.level,
        seed: cli.seed.unwrap_or(0),
        tolerance_scale: cli.tolerance_scale,
        fault: None,
    };
    let report = run_verify(&options)?;
    let text = report.to_string();
    print!("{text}");
    if let Some(path) = &cli.out {
        with_output(Some(path), |w| Ok(w.write_all(text.as_bytes())?))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}
