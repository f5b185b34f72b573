//! Run settings: digits, tolerance, output, and the TOML config file that can
//! stand in for flags.
//!
//! A config file holds top-level keys for the global flags (`digits`, `tol`,
//! `format`, `out`), an optional `command`, and one table per subcommand whose
//! keys are that subcommand's long flag names. Flags given on the command line
//! win over the file.

use std::path::{Path, PathBuf};

use clap::ValueEnum;

pub const DEFAULT_DIGITS: u32 = 50;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DIGITS_ENV: &str = "HYPERSTOKES_DIGITS";
pub const SUBCOMMANDS: [&str; 6] = ["eval", "smooth", "terminant", "smoothing", "verify", "coeffs"];

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Digits requested explicitly (flag, file or environment).
    pub digits: Option<u32>,
    pub tol: f64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(digits: Option<u32>, tol: Option<f64>, format: Option<Format>, out: Option<PathBuf>) -> Result<Self, ConfigError> {
        let digits = match digits {
            Some(d) => Some(d),
            None => match std::env::var(DIGITS_ENV) {
                Ok(v) => Some(v.trim().parse().map_err(|_| ConfigError(format!("{DIGITS_ENV}={v:?} is not a digit count")))?),
                Err(_) => None,
            },
        };
        if let Some(d) = digits {
            if d < 30 {
                return Err(ConfigError(format!("digits must be at least 30, got {d}")));
            }
        }
        let tol = tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol <= 1e-4) {
            return Err(ConfigError(format!("tolerance must lie in (0, 1e-4], got {tol}")));
        }
        Ok(RunConfig { digits, tol, format, out })
    }

    pub fn digits_or_default(&self) -> u32 {
        self.digits.unwrap_or(DEFAULT_DIGITS)
    }
}

fn flag_value(v: &toml::Value) -> Result<Option<String>, ConfigError> {
    Ok(Some(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => format!("{f:e}"),
        toml::Value::Boolean(true) => return Ok(Some(String::new())),
        toml::Value::Boolean(false) => return Ok(None),
        toml::Value::Array(items) => {
            let parts: Result<Vec<String>, ConfigError> =
                items.iter().map(|i| flag_value(i).map(|s| s.unwrap_or_default())).collect();
            parts?.join(",")
        }
        other => return Err(ConfigError(format!("unsupported value {other}"))),
    }))
}

fn has_flag(args: &[String], name: &str) -> bool {
    let long = format!("--{name}");
    args.iter().any(|a| *a == long || a.starts_with(&format!("{long}=")))
}

fn push_flags(table: &toml::Table, user: &[String], out: &mut Vec<String>) -> Result<(), ConfigError> {
    for (k, v) in table {
        if v.is_table() || k == "command" || has_flag(user, k) {
            continue;
        }
        if let Some(val) = flag_value(v)? {
            out.push(format!("--{k}"));
            if !val.is_empty() {
                out.push(val);
            }
        }
    }
    Ok(())
}

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

pub fn read_table(path: &Path) -> Result<toml::Table, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    text.parse::<toml::Table>().map_err(|e| ConfigError(format!("{}: {e}", path.display())))
}

/// Command line with the config file's entries spliced in after the
/// subcommand (after `dump` for `coeffs`).
pub fn expand_args(args: Vec<String>) -> Result<Vec<String>, ConfigError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let table = read_table(&path)?;
    let mut args = args;
    let mut pos = args.iter().position(|a| SUBCOMMANDS.contains(&a.as_str()));
    if pos.is_none() {
        if let Some(cmd) = table.get("command").and_then(|v| v.as_str()) {
            if !SUBCOMMANDS.contains(&cmd) {
                return Err(ConfigError(format!("unknown command {cmd:?}")));
            }
            args.push(cmd.to_string());
            if cmd == "coeffs" {
                args.push("dump".into());
            }
            pos = Some(args.len() - if cmd == "coeffs" { 2 } else { 1 });
        }
    }
    let Some(mut at) = pos else {
        return Ok(args);
    };
    let cmd = args[at].clone();
    if cmd == "coeffs" && args.get(at + 1).map(String::as_str) == Some("dump") {
        at += 1;
    }
    let mut extra = Vec::new();
    push_flags(&table, &args, &mut extra)?;
    if let Some(sub) = table.get(&cmd).and_then(|v| v.as_table()) {
        push_flags(sub, &args, &mut extra)?;
    }
    let tail = args.split_off(at + 1);
    args.extend(extra);
    args.extend(tail);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn validation() {
        assert!(RunConfig::new(Some(29), None, None, None).is_err());
        assert!(RunConfig::new(Some(30), Some(1e-4), None, None).is_ok());
        assert!(RunConfig::new(Some(30), Some(2e-4), None, None).is_err());
        assert!(RunConfig::new(Some(30), Some(0.0), None, None).is_err());
    }

    #[test]
    fn splices_file_entries_after_the_subcommand() {
        let dir = std::env::temp_dir().join(format!("hyperstokes-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "digits = 40\n[eval]\nz-mod = \"5\"\nlevel = 1\n").unwrap();
        let p = path.to_string_lossy().to_string();
        let args = expand_args(strings(&["hs", "--config", &p, "eval", "--level", "0"])).unwrap();
        assert_eq!(args[..4], strings(&["hs", "--config", &p, "eval"])[..]);
        assert!(args.windows(2).any(|w| w == ["--digits", "40"]));
        assert!(args.windows(2).any(|w| w == ["--z-mod", "5"]));
        assert_eq!(args.iter().filter(|a| *a == "--level").count(), 1);
        assert_eq!(args.last().unwrap(), "0");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
