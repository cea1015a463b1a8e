//! Plain-text `key = value` configuration.
//!
//! Lists are comma-separated; `#` starts a comment. The same keys are
//! accepted from command-line flags, which take precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::table::{all_columns, validate_columns};
use crate::CliError;

pub const KEYS: [&str; 11] = [
    "N",
    "n",
    "xi",
    "families",
    "amin_steps",
    "amin_exclude_zero",
    "random_count",
    "seed",
    "outputs",
    "out",
    "with_discord",
];

/// Raw key/value settings, in the order of precedence they were merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets `key` if `value` is present, overriding earlier values.
    pub fn set(&mut self, key: &str, value: Option<String>) {
        debug_assert!(KEYS.contains(&key));
        if let Some(v) = value {
            self.0.insert(key.to_string(), v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("invalid value `{v}` for `{key}`")))
            })
            .transpose()
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError> {
        self.get(key).map(|v| parse_list(v, key)).transpose()
    }

    fn flag(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.get(key)
            .map(|v| match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(CliError::Usage(format!(
                    "invalid boolean `{v}` for `{key}`"
                ))),
            })
            .transpose()
    }
}

pub fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Usage(format!("invalid list entry `{s}` for `{key}`")))
        })
        .collect()
}

/// Fully resolved sweep parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_states: usize,
    pub support_dim: usize,
    pub xi_values: Vec<f64>,
    /// `a0` of each coefficient family; each is swept over `a_min ∈ [0, a0]`.
    pub families: Vec<f64>,
    pub amin_steps: usize,
    /// Drop `a_min = 0` for `a0 > 0`, where the support shrinks by one.
    pub amin_exclude_zero: bool,
    pub random_count: usize,
    pub seed: u64,
    pub outputs: Vec<String>,
    pub out: Option<PathBuf>,
    pub with_discord: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_states: 3,
            support_dim: 3,
            xi_values: vec![0.5],
            families: vec![0.0, 0.192, 0.385, 1.0 / 3f64.sqrt()],
            amin_steps: 11,
            amin_exclude_zero: false,
            random_count: 0,
            seed: 0,
            outputs: all_columns(),
            out: None,
            with_discord: false,
        }
    }
}

impl SweepConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let d = Self::default();
        let n_states = s.parsed("N")?.unwrap_or(d.n_states);
        let cfg = Self {
            n_states,
            support_dim: s.parsed("n")?.unwrap_or(n_states.min(d.support_dim)),
            xi_values: s.list("xi")?.unwrap_or(d.xi_values),
            families: s.list("families")?.unwrap_or(d.families),
            amin_steps: s.parsed("amin_steps")?.unwrap_or(d.amin_steps),
            amin_exclude_zero: s.flag("amin_exclude_zero")?.unwrap_or(d.amin_exclude_zero),
            random_count: s.parsed("random_count")?.unwrap_or(d.random_count),
            seed: s.parsed("seed")?.unwrap_or(d.seed),
            outputs: s.list("outputs")?.unwrap_or(d.outputs),
            out: s.get("out").map(PathBuf::from),
            with_discord: s.flag("with_discord")?.unwrap_or(d.with_discord),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_states < 2 {
            return Err(CliError::Usage(format!(
                "N must be at least 2, got {}",
                self.n_states
            )));
        }
        if self.support_dim < 1 || self.support_dim > self.n_states {
            return Err(CliError::Usage(format!(
                "n must lie in [1, N = {}], got {}",
                self.n_states, self.support_dim
            )));
        }
        if self.xi_values.is_empty() {
            return Err(CliError::Usage("no xi values given".into()));
        }
        if let Some(x) = self.xi_values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(CliError::Usage(format!("xi = {x} is outside [0, 1]")));
        }
        if !self.families.is_empty() && self.n_states < 3 {
            return Err(CliError::Usage("coefficient families need N >= 3".into()));
        }
        if let Some(a) = self.families.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(CliError::Usage(format!(
                "family a0 = {a} is outside [0, 1]"
            )));
        }
        if self.amin_steps < 1 {
            return Err(CliError::Usage("amin_steps must be at least 1".into()));
        }
        validate_columns(&self.outputs)
    }

    /// `a_min` grid of the family with leading coefficient `a0`.
    pub fn amin_grid(&self, a0: f64) -> Vec<f64> {
        if a0 == 0.0 || self.amin_steps == 1 {
            return vec![a0];
        }
        let last = self.amin_steps - 1;
        (0..=last)
            .filter(|&i| !(self.amin_exclude_zero && i == 0))
            .map(|i| {
                if i == last {
                    a0
                } else {
                    a0 * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let s = Settings::parse("# family cuts\nN = 4\nxi = 0.1, 0.6 # two cuts\n\nwith_discord = yes\n")
            .unwrap();
        let c = SweepConfig::from_settings(&s).unwrap();
        assert_eq!(c.n_states, 4);
        assert_eq!(c.support_dim, 3);
        assert_eq!(c.xi_values, vec![0.1, 0.6]);
        assert!(c.with_discord);
    }

    #[test]
    fn later_values_override() {
        let mut s = Settings::parse("N = 4\nseed = 3").unwrap();
        s.set("seed", Some("9".into()));
        s.set("N", None);
        let c = SweepConfig::from_settings(&s).unwrap();
        assert_eq!((c.n_states, c.seed), (4, 9));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Settings::parse("N 4").is_err());
        assert!(Settings::parse("colour = red").is_err());
        let bad = |text: &str| SweepConfig::from_settings(&Settings::parse(text).unwrap()).is_err();
        assert!(bad("xi = 1.5"));
        assert!(bad("N = 3\nn = 4"));
        assert!(bad("N = x"));
        assert!(bad("outputs = D,nope"));
        assert!(bad("with_discord = maybe"));
    }

    #[test]
    fn amin_grid_endpoints() {
        let mut c = SweepConfig {
            amin_steps: 5,
            ..Default::default()
        };
        assert_eq!(c.amin_grid(0.0), vec![0.0]);
        assert_eq!(
            c.amin_grid(0.4),
            vec![0.0, 0.1, 0.2, 0.30000000000000004, 0.4]
        );
        c.amin_exclude_zero = true;
        assert_eq!(c.amin_grid(0.4).len(), 4);
        assert_eq!(c.amin_grid(0.0), vec![0.0]);
    }
}
