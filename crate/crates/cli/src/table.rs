//! CSV schema and number formatting.

use std::io::Write;

use frio_coherence::CoherenceReport;

use crate::CliError;

pub const COLUMNS: [&str; 22] = [
    "source",
    "N",
    "n",
    "coeffs",
    "a_min",
    "mu",
    "xi",
    "D",
    "P",
    "Q",
    "S_rho",
    "S_rhoS",
    "S_rhoF",
    "C_sep",
    "C_ancilla",
    "discord",
    "C_me",
    "C_meS",
    "C_meF",
    "C_frio",
    "C_conc",
    "C_extra",
];

const SIGNIFICANT: usize = 12;

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros
/// stripped, exponent form outside `[1e-4, 1e12)`.
pub fn fmt_g(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (SIGNIFICANT as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_g).unwrap_or_default()
}

/// One output row: a labelled report.
#[derive(Debug, Clone)]
pub struct Row {
    pub source: String,
    pub report: CoherenceReport,
}

impl Row {
    pub fn field(&self, column: &str) -> Option<String> {
        let r = &self.report;
        let failure = r.s_rho_f.is_some();
        Some(match column {
            "source" => self.source.clone(),
            "N" => r.n_states.to_string(),
            "n" => r.support_dim.to_string(),
            "coeffs" => r
                .coeffs
                .iter()
                .map(|&a| fmt_g(a))
                .collect::<Vec<_>>()
                .join(";"),
            "a_min" => fmt_g(r.a_min),
            "mu" => r.multiplicity.to_string(),
            "xi" => fmt_g(r.xi),
            "D" => fmt_g(r.distinguishability),
            "P" => fmt_g(r.success_prob),
            "Q" => fmt_g(r.failure_prob),
            "S_rho" => fmt_g(r.s_rho),
            "S_rhoS" => fmt_g(r.s_rho_s),
            "S_rhoF" => opt(r.s_rho_f),
            "C_sep" => fmt_g(r.c_sep),
            "C_ancilla" => fmt_g(r.c_ancilla),
            "discord" => opt(r.discord.map(|d| d.discord)),
            "C_me" => fmt_g(r.c_me),
            "C_meS" => fmt_g(r.c_me_s),
            "C_meF" => opt(r.c_me_f),
            "C_frio" => fmt_g(r.c_frio),
            "C_conc" => fmt_g(r.c_conc),
            "C_extra" => {
                if failure {
                    fmt_g(r.c_extra)
                } else {
                    String::new()
                }
            }
            _ => return None,
        })
    }
}

/// Checks a requested column list against the schema.
pub fn validate_columns(columns: &[String]) -> Result<(), CliError> {
    if columns.is_empty() {
        return Err(CliError::Usage("no output columns requested".into()));
    }
    for c in columns {
        if !COLUMNS.contains(&c.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown column `{c}`; expected one of {}",
                COLUMNS.join(",")
            )));
        }
    }
    Ok(())
}

pub fn all_columns() -> Vec<String> {
    COLUMNS.iter().map(|c| c.to_string()).collect()
}

/// Writes a header and one record per row.
pub fn write_csv<W: Write>(out: W, rows: &[Row], columns: &[String]) -> Result<(), CliError> {
    validate_columns(columns)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(
            columns
                .iter()
                .map(|c| row.field(c).expect("validated column")),
        )?;
    }
    w.flush()?;
    Ok(())
}
