//! `maxrep` command-line driver.

mod commands;
mod config;
mod report;

use clap::Parser;
use config::{RawConfig, RunConfig, SUBCOMMANDS};
use maxrep::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Runs symplectic identity batteries, positivity and Gromov-product checks,
/// and orbit-counting experiments. Settings come from built-in defaults, then
/// an optional `key=value` file, then the flags below.
#[derive(Parser, Debug)]
#[command(name = "maxrep", version)]
struct Cli {
    /// One of identities, positivity, gromov, entropy, manhattan, shadow, ahlfors, limitcurve.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUBCOMMANDS))]
    subcommand: Option<String>,
    /// Plain-text key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Half-rank of the symplectic group.
    #[arg(long)]
    n: Option<String>,
    /// modular | fricke:x,y[,z] | schottky:t | conjugated:a,b,c,d:BASE
    #[arg(long)]
    preset: Option<String>,
    /// rho_d or rho_12.
    #[arg(long)]
    rep: Option<String>,
    /// First preset of a pair.
    #[arg(long)]
    p1: Option<String>,
    /// Second preset of a pair.
    #[arg(long)]
    p2: Option<String>,
    /// Word-length radius.
    #[arg(long = "L")]
    l: Option<String>,
    /// Shadow radius.
    #[arg(long = "R")]
    r: Option<String>,
    /// Comma-separated list of alpha, omega_hat, dX, beta<i>.
    #[arg(long)]
    functional: Option<String>,
    /// Fit window Tmin:Tmax, or auto.
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Pass tolerance for the check batteries.
    #[arg(long)]
    tol: Option<String>,
    /// Random trials for the check batteries.
    #[arg(long)]
    trials: Option<String>,
    /// Tuple length for positivity.
    #[arg(long)]
    size: Option<String>,
    /// Boundary samples for limitcurve.
    #[arg(long)]
    count: Option<String>,
    /// CSV output path; the summary goes next to it with a .summary.txt suffix.
    #[arg(long)]
    out: Option<String>,
}

impl Cli {
    fn overrides(&self) -> [(&'static str, &Option<String>); 16] {
        [
            ("subcommand", &self.subcommand),
            ("n", &self.n),
            ("preset", &self.preset),
            ("rep", &self.rep),
            ("p1", &self.p1),
            ("p2", &self.p2),
            ("L", &self.l),
            ("R", &self.r),
            ("functional", &self.functional),
            ("window", &self.window),
            ("seed", &self.seed),
            ("tol", &self.tol),
            ("trials", &self.trials),
            ("size", &self.size),
            ("count", &self.count),
            ("out", &self.out),
        ]
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => 3,
        Error::Config(_) | Error::Domain(_) | Error::Index { .. } | Error::UnsupportedRank(_) | Error::Dimension(_) => 2,
        _ => 1,
    }
}

fn resolve(cli: &Cli) -> Result<RawConfig, Error> {
    let mut raw = RawConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        raw.apply_file(&text)?;
    }
    for (key, value) in cli.overrides() {
        if let Some(v) = value {
            raw.set(key, v)?;
        }
    }
    Ok(raw)
}

fn write_outputs(out: &str, summary: &str, csv: &str) -> std::io::Result<()> {
    std::fs::write(out, csv)?;
    std::fs::write(format!("{out}.summary.txt"), summary)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = resolve(&cli).and_then(|raw| {
        let cfg = RunConfig::validate(&raw)?;
        let out = commands::run(&cfg)?;
        Ok((raw, cfg, out))
    });
    let (raw, cfg, out) = match outcome {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let summary = format!("{}\n{}", raw.echo(), out.body);
    print!("{summary}");
    if let Some(path) = &cfg.out {
        if let Err(e) = write_outputs(path, &summary, &out.csv.render()) {
            eprintln!("error: cannot write {path}: {e}");
            return ExitCode::from(1);
        }
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
