//! Run configuration: defaults, presets, TOML config file and flags, merged
//! in that order of increasing precedence.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Ccdf,
    Violation,
    Variance,
    Gen,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

/// Inclusive `lo:hi:step` grid in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl DbRange {
    pub const fn new(lo: f64, hi: f64, step: f64) -> Self {
        Self { lo, hi, step }
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| {
                // round to the step's decimal grid so 0.1 dB steps print as 4.1, not 4.1000000000000005
                let v = self.lo + self.step * i as f64;
                (v * 1e9).round() / 1e9
            })
            .collect()
    }
}

impl FromStr for DbRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:step, got `{s}`"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
        let r = DbRange::new(num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(r.step > 0.0) || !(r.hi >= r.lo) || !r.lo.is_finite() || !r.hi.is_finite() {
            return Err(format!("need lo <= hi and step > 0, got `{s}`"));
        }
        Ok(r)
    }
}

impl fmt::Display for DbRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl<'de> Deserialize<'de> for DbRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Command-line flags.
#[derive(Debug, Parser)]
#[command(name = "vlc-papr", version, about = "Upper/lower PAPR curves of real-valued VLC-OFDM")]
pub struct Args {
    /// Operation to run.
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// Figure preset (sets command, N, QAM orders, symbol count and grids).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// TOML file with any of the fields below (flags take precedence).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Subcarrier counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// QAM orders, comma separated (4, 64, 256).
    #[arg(long, value_delimiter = ',')]
    pub qam: Option<Vec<usize>>,
    /// Monte Carlo symbols per configuration.
    #[arg(long)]
    pub symbols: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// PAPR threshold grid in dB, lo:hi:step.
    #[arg(long)]
    pub thresholds_db: Option<DbRange>,
    /// Biasing ratios, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub biasing_ratios: Option<Vec<f64>>,
    /// Power back-off grid in dB, lo:hi:step.
    #[arg(long)]
    pub backoff_db: Option<DbRange>,
    /// Output path; `-` writes to stdout.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Adds a ripple of this amplitude to the normal CDF inside the selftest
    /// consistency check.
    #[arg(long, hide = true)]
    pub inject_phi_error: Option<f64>,
}

/// Every field optional; one layer of the precedence stack.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Layer {
    pub command: Option<Command>,
    pub preset: Option<Preset>,
    pub n: Option<Vec<usize>>,
    pub qam: Option<Vec<usize>>,
    pub symbols: Option<u64>,
    pub seed: Option<u64>,
    pub thresholds_db: Option<DbRange>,
    pub biasing_ratios: Option<Vec<f64>>,
    pub backoff_db: Option<DbRange>,
    pub out: Option<String>,
    pub format: Option<Format>,
}

impl Layer {
    fn from_args(a: &Args) -> Self {
        Self {
            command: a.command,
            preset: a.preset,
            n: a.n.clone(),
            qam: a.qam.clone(),
            symbols: a.symbols,
            seed: a.seed,
            thresholds_db: a.thresholds_db,
            biasing_ratios: a.biasing_ratios.clone(),
            backoff_db: a.backoff_db,
            out: a.out.clone(),
            format: a.format,
        }
    }

    fn preset(p: Preset) -> Self {
        let ratios = |v: &[f64]| Some(v.to_vec());
        let base = Layer {
            qam: Some(vec![4, 64, 256]),
            symbols: Some(100_000),
            ..Default::default()
        };
        match p {
            Preset::Fig1 => Layer {
                command: Some(Command::Ccdf),
                n: Some(vec![128, 1024]),
                thresholds_db: Some(DbRange::new(4.0, 14.0, 0.1)),
                ..base
            },
            Preset::Fig2 | Preset::Fig3 => Layer {
                command: Some(Command::Violation),
                n: Some(vec![if p == Preset::Fig2 { 128 } else { 1024 }]),
                biasing_ratios: ratios(&[0.1, 0.2, 0.3, 0.4, 0.5]),
                backoff_db: Some(DbRange::new(10.0, 36.0, 0.5)),
                ..base
            },
            Preset::Fig4 => Layer {
                command: Some(Command::Variance),
                n: Some(vec![128, 1024]),
                biasing_ratios: ratios(&[0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]),
                ..base
            },
        }
    }

    /// Fields set in `over` replace ours.
    fn overlay(self, over: Layer) -> Layer {
        Layer {
            command: over.command.or(self.command),
            preset: over.preset.or(self.preset),
            n: over.n.or(self.n),
            qam: over.qam.or(self.qam),
            symbols: over.symbols.or(self.symbols),
            seed: over.seed.or(self.seed),
            thresholds_db: over.thresholds_db.or(self.thresholds_db),
            biasing_ratios: over.biasing_ratios.or(self.biasing_ratios),
            backoff_db: over.backoff_db.or(self.backoff_db),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }
}

/// Effective, validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub preset: Option<Preset>,
    pub n_subcarriers: Vec<usize>,
    pub qam_orders: Vec<usize>,
    pub symbols: u64,
    pub seed: u64,
    pub thresholds_db: DbRange,
    pub biasing_ratios: Vec<f64>,
    pub backoff_db: DbRange,
    pub output_path: String,
    pub format: Format,
    pub phi_ripple: f64,
}

fn defaults() -> Layer {
    Layer {
        n: Some(vec![1024]),
        qam: Some(vec![4]),
        symbols: Some(100_000),
        seed: Some(1),
        thresholds_db: Some(DbRange::new(4.0, 14.0, 0.1)),
        biasing_ratios: Some(vec![0.1, 0.2, 0.3, 0.4, 0.5]),
        backoff_db: Some(DbRange::new(10.0, 36.0, 0.5)),
        out: Some("-".into()),
        format: Some(Format::Csv),
        ..Default::default()
    }
}

fn field(name: &str, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("field `{name}`: {msg}"))
}

impl RunConfig {
    /// Merges defaults, preset, config file and flags, then validates.
    pub fn resolve(args: &Args) -> Result<Self, CliError> {
        let flags = Layer::from_args(args);
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<Layer>(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => Layer::default(),
        };
        let preset = flags.preset.or(file.preset);
        let mut merged = defaults();
        if let Some(p) = preset {
            merged = merged.overlay(Layer::preset(p));
        }
        let merged = merged.overlay(file).overlay(flags);
        let cfg = RunConfig {
            command: merged
                .command
                .ok_or_else(|| field("command", "required (or pick a --preset)"))?,
            preset,
            n_subcarriers: merged.n.unwrap_or_default(),
            qam_orders: merged.qam.unwrap_or_default(),
            symbols: merged.symbols.unwrap_or_default(),
            seed: merged.seed.unwrap_or_default(),
            thresholds_db: merged.thresholds_db.expect("default"),
            biasing_ratios: merged.biasing_ratios.unwrap_or_default(),
            backoff_db: merged.backoff_db.expect("default"),
            output_path: merged.out.expect("default"),
            format: merged.format.expect("default"),
            phi_ripple: args.inject_phi_error.unwrap_or(0.0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        use vlc_papr::ofdm::{check_subcarriers, SUPPORTED_ORDERS};
        if self.command == Command::Selftest {
            return Ok(());
        }
        if self.n_subcarriers.is_empty() {
            return Err(field("n", "at least one subcarrier count"));
        }
        for &n in &self.n_subcarriers {
            check_subcarriers(n).map_err(|e| field("n", e))?;
        }
        if self.qam_orders.is_empty() {
            return Err(field("qam", "at least one QAM order"));
        }
        if let Some(m) = self.qam_orders.iter().find(|m| !SUPPORTED_ORDERS.contains(m)) {
            return Err(field("qam", format!("unsupported order {m}; allowed 4, 64, 256")));
        }
        match self.command {
            Command::Ccdf | Command::Gen if self.symbols == 0 => {
                return Err(field("symbols", "must be at least 1"));
            }
            Command::Variance if self.symbols != 0 && self.symbols < 1000 => {
                return Err(field("symbols", "must be 0 (quadrature only) or at least 1000"));
            }
            _ => {}
        }
        if matches!(self.command, Command::Violation | Command::Variance) {
            if self.biasing_ratios.is_empty() {
                return Err(field("biasing-ratios", "at least one ratio"));
            }
            if let Some(s) = self.biasing_ratios.iter().find(|&&s| !(s > 0.0 && s <= 0.5)) {
                return Err(field("biasing-ratios", format!("{s} outside (0, 0.5]")));
            }
        }
        if self.command == Command::Variance {
            if let Some(n) = self.n_subcarriers.iter().find(|&&n| n < 4) {
                return Err(field("n", format!("variance needs N >= 4, got {n}")));
            }
        }
        if self.command == Command::Gen && (self.n_subcarriers.len() != 1 || self.qam_orders.len() != 1) {
            return Err(field("n/qam", "gen takes exactly one subcarrier count and one QAM order"));
        }
        if self.output_path.is_empty() {
            return Err(field("out", "empty path"));
        }
        Ok(())
    }

    /// `key = value` lines echoed into output headers.
    pub fn echo(&self) -> Vec<(String, String)> {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("command".to_string(), format!("{:?}", self.command).to_lowercase()),
            (
                "preset".into(),
                self.preset.map_or("none".into(), |p| format!("{p:?}").to_lowercase()),
            ),
            ("n".into(), list(&self.n_subcarriers)),
            ("qam".into(), list(&self.qam_orders)),
            ("symbols".into(), self.symbols.to_string()),
            ("seed".into(), self.seed.to_string()),
        ];
        match self.command {
            Command::Ccdf => out.push(("thresholds-db".into(), self.thresholds_db.to_string())),
            Command::Violation => {
                out.push(("biasing-ratios".into(), join_f64(&self.biasing_ratios)));
                out.push(("backoff-db".into(), self.backoff_db.to_string()));
            }
            Command::Variance => {
                out.push(("biasing-ratios".into(), join_f64(&self.biasing_ratios)));
                out.push(("dynamic-range".into(), "1".into()));
            }
            Command::Gen | Command::Selftest => {}
        }
        out
    }
}

fn join_f64(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> Args {
        let mut v = vec!["vlc-papr"];
        v.extend_from_slice(extra);
        Args::parse_from(v)
    }

    #[test]
    fn range_parsing() {
        let r: DbRange = "4:14:0.1".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 101);
        assert_eq!(p[1], 4.1);
        assert_eq!(*p.last().unwrap(), 14.0);
        assert!("4:14".parse::<DbRange>().is_err());
        assert!("4:14:0".parse::<DbRange>().is_err());
        assert!("14:4:1".parse::<DbRange>().is_err());
    }

    #[test]
    fn flags_override_preset() {
        let cfg = RunConfig::resolve(&args(&["--preset", "fig4", "--n", "64", "--symbols", "2000"])).unwrap();
        assert_eq!(cfg.command, Command::Variance);
        assert_eq!(cfg.n_subcarriers, vec![64]);
        assert_eq!(cfg.symbols, 2000);
        assert_eq!(cfg.biasing_ratios.len(), 10);
    }

    #[test]
    fn config_file_sits_between_preset_and_flags() {
        let dir = std::env::temp_dir().join(format!("vlc-papr-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "preset = \"fig1\"\nseed = 9\nsymbols = 500\n").unwrap();
        let p = path.to_str().unwrap();
        let cfg = RunConfig::resolve(&args(&["--config", p, "--symbols", "700"])).unwrap();
        assert_eq!(cfg.command, Command::Ccdf);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.symbols, 700);
        assert_eq!(cfg.n_subcarriers, vec![128, 1024]);
        std::fs::write(&path, "seed = 9\nbogus = 1\n").unwrap();
        let err = RunConfig::resolve(&args(&["--config", p, "--command", "ccdf"])).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn validation_names_the_field() {
        let e = RunConfig::resolve(&args(&["--command", "ccdf", "--symbols", "0"])).unwrap_err();
        assert!(e.to_string().contains("symbols"));
        let e = RunConfig::resolve(&args(&["--command", "ccdf", "--n", "100"])).unwrap_err();
        assert!(e.to_string().contains("`n`"));
        let e = RunConfig::resolve(&args(&["--command", "violation", "--biasing-ratios", "0.1,0.7"])).unwrap_err();
        assert!(e.to_string().contains("0.7"));
        let e = RunConfig::resolve(&args(&["--command", "gen", "--n", "64,128"])).unwrap_err();
        assert!(e.to_string().contains("gen"));
        assert!(RunConfig::resolve(&args(&[])).is_err());
    }
}
