//! The five operations, each producing a [`Table`].

use vlc_papr::analytic::{
    ccdf_papr_real, ccdf_upapr, required_backoff, symbol_variant_variance, violation_probability,
    JointEvalConfig,
};
use vlc_papr::ofdm::SymbolSource;
use vlc_papr::scaling::{variance_mc_sweep, violation_counts_mc, ScalingMode};
use vlc_papr::selftest::{self, SelftestOptions};
use vlc_papr::stats::{ccdf_std_error, peak_triple, CcdfCounter};
use vlc_papr::{BiasScalePlan, Constellation};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Violation probability at which the required back-off is reported.
const BACKOFF_TARGET: f64 = 1e-2;

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn header(cfg: &RunConfig) -> Vec<(String, String)> {
    let mut meta = vec![("tool".to_string(), format!("vlc-papr {}", env!("CARGO_PKG_VERSION")))];
    meta.extend(cfg.echo());
    meta
}

/// Result of a command: the table to write, plus a failure to report after
/// writing it (used by `selftest`).
pub struct Outcome {
    pub table: Table,
    pub failure: Option<CliError>,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let table = match cfg.command {
        Command::Ccdf => ccdf(cfg)?,
        Command::Violation => violation(cfg)?,
        Command::Variance => variance(cfg)?,
        Command::Gen => generate(cfg)?,
        Command::Selftest => return Ok(run_selftest(cfg)),
    };
    Ok(Outcome { table, failure: None })
}

fn ccdf(cfg: &RunConfig) -> Result<Table, CliError> {
    let grid_db = cfg.thresholds_db.points();
    let grid: Vec<f64> = grid_db.iter().map(|&d| db_to_lin(d)).collect();
    let mut table = Table::new(
        header(cfg),
        &[
            "n",
            "qam",
            "threshold_db",
            "threshold",
            "upapr_ccdf",
            "lpapr_ccdf",
            "papr_ccdf",
            "upapr_analytic",
            "papr_analytic",
            "upapr_se",
            "papr_se",
        ],
    );
    for &n in &cfg.n_subcarriers {
        for &m in &cfg.qam_orders {
            let source = SymbolSource::new(n, Constellation::new(m)?, cfg.seed, true)?;
            let empty = || -> [CcdfCounter<f64>; 3] {
                let c = CcdfCounter::new(&grid).expect("grid validated");
                [c.clone(), c.clone(), c]
            };
            let [up, low, two] = source.fold(
                cfg.symbols,
                empty,
                |acc, sym| {
                    let p = peak_triple(sym).expect("hermitian source");
                    acc[0].push(p.upapr);
                    acc[1].push(p.lpapr);
                    acc[2].push(p.papr);
                },
                |a, b| a.iter_mut().zip(&b).for_each(|(x, y)| x.merge(y)),
            )?;
            let (up, low, two) = (up.curve()?, low.curve()?, two.curve()?);
            for (i, (&db, &r)) in grid_db.iter().zip(&grid).enumerate() {
                let pu = ccdf_upapr(r, n)?;
                let pp = ccdf_papr_real(r, n)?;
                table.push(vec![
                    n.into(),
                    m.into(),
                    db.into(),
                    r.into(),
                    up.probabilities[i].into(),
                    low.probabilities[i].into(),
                    two.probabilities[i].into(),
                    pu.into(),
                    pp.into(),
                    ccdf_std_error(pu, cfg.symbols).into(),
                    ccdf_std_error(pp, cfg.symbols).into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn fixed_plans(varsigma: f64, gammas: &[f64]) -> Result<Vec<BiasScalePlan>, CliError> {
    gammas
        .iter()
        .map(|&gamma| Ok(BiasScalePlan::normalized(varsigma, ScalingMode::FixedBackoff { gamma })?))
        .collect()
}

fn violation(cfg: &RunConfig) -> Result<Table, CliError> {
    let grid_db = cfg.backoff_db.points();
    let gammas: Vec<f64> = grid_db.iter().map(|&d| db_to_lin(d)).collect();
    let mut meta = header(cfg);
    for &n in &cfg.n_subcarriers {
        for &s in &cfg.biasing_ratios {
            let g = required_backoff(BACKOFF_TARGET, s, n)?;
            meta.push((
                format!("required-backoff-db n={n} biasing-ratio={s} target={BACKOFF_TARGET}"),
                format!("{:?}", 10.0 * g.log10()),
            ));
        }
    }
    let mut table = Table::new(
        meta,
        &["n", "qam", "biasing_ratio", "backoff_db", "backoff", "analytic", "mc_rate", "mc_se"],
    );
    for &n in &cfg.n_subcarriers {
        for &m in &cfg.qam_orders {
            for &s in &cfg.biasing_ratios {
                let counts = if cfg.symbols > 0 {
                    Some(violation_counts_mc(&fixed_plans(s, &gammas)?, n, m, cfg.symbols, cfg.seed)?)
                } else {
                    None
                };
                for (i, (&db, &gamma)) in grid_db.iter().zip(&gammas).enumerate() {
                    let p = violation_probability(gamma, s, n)?;
                    let rate = counts.as_ref().map(|c| c[i] as f64 / cfg.symbols as f64);
                    let se = counts.as_ref().map(|_| ccdf_std_error(p, cfg.symbols));
                    table.push(vec![
                        n.into(),
                        m.into(),
                        s.into(),
                        db.into(),
                        gamma.into(),
                        p.into(),
                        rate.into(),
                        se.into(),
                    ]);
                }
            }
        }
    }
    Ok(table)
}

fn variance(cfg: &RunConfig) -> Result<Table, CliError> {
    let quad_cfg = JointEvalConfig::default();
    let mut table = Table::new(
        header(cfg),
        &["n", "qam", "biasing_ratio", "variance_analytic", "variance_mc", "relative_gap"],
    );
    for &n in &cfg.n_subcarriers {
        let analytic: Vec<f64> = cfg
            .biasing_ratios
            .iter()
            .map(|&s| symbol_variant_variance(s, n, 1.0, &quad_cfg))
            .collect::<Result<_, _>>()?;
        for &m in &cfg.qam_orders {
            let mc = if cfg.symbols > 0 {
                Some(variance_mc_sweep(&cfg.biasing_ratios, n, m, cfg.symbols, cfg.seed, 1.0)?)
            } else {
                None
            };
            for (i, (&s, &a)) in cfg.biasing_ratios.iter().zip(&analytic).enumerate() {
                let v = mc.as_ref().map(|v| v[i]);
                table.push(vec![
                    n.into(),
                    m.into(),
                    s.into(),
                    a.into(),
                    v.into(),
                    v.map(|v| (a - v).abs() / v).into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn generate(cfg: &RunConfig) -> Result<Table, CliError> {
    let (n, m) = (cfg.n_subcarriers[0], cfg.qam_orders[0]);
    let source = SymbolSource::new(n, Constellation::new(m)?, cfg.seed, true)?;
    let mut meta = header(cfg);
    meta.push(("sigma2".into(), format!("{:?}", source.sigma2())));
    let mut columns: Vec<String> = vec!["index".into()];
    columns.extend((0..n).map(|k| format!("x{k}")));
    columns.extend(["papr", "upapr", "lpapr"].map(String::from));
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = Table::new(meta, &cols);
    for (index, sym) in source.stream(cfg.symbols)?.enumerate() {
        let sym = sym?;
        let p = peak_triple(&sym)?;
        let mut row: Vec<Cell> = Vec::with_capacity(n + 4);
        row.push(index.into());
        row.extend(sym.real_samples()?.iter().map(|&x| Cell::from(x)));
        row.extend([p.papr, p.upapr, p.lpapr].map(Cell::from));
        table.push(row);
    }
    Ok(table)
}

fn run_selftest(cfg: &RunConfig) -> Outcome {
    let checks = selftest::run(&SelftestOptions { phi_ripple: cfg.phi_ripple });
    let mut meta = vec![("tool".to_string(), format!("vlc-papr {}", env!("CARGO_PKG_VERSION")))];
    meta.push(("command".into(), "selftest".into()));
    if cfg.phi_ripple != 0.0 {
        meta.push(("phi-ripple".into(), format!("{:?}", cfg.phi_ripple)));
    }
    let mut table = Table::new(meta, &["check", "observed", "tolerance", "status"]);
    for c in &checks {
        table.push(vec![
            c.name.into(),
            c.observed.into(),
            c.tolerance.into(),
            if c.passed { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    Outcome {
        table,
        failure: (!failed.is_empty()).then(|| CliError::Selftest(failed.join(", "))),
    }
}
