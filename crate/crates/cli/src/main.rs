//! `phipoisson` — roots listing, end-to-end verification and self-tests.
//!
//! Settings are layered: built-in defaults, then the `PHIPOISSON_TOLERANCES`
//! environment variable (`"accept,reject"`), then a TOML config file, then
//! command-line flags. Exit codes: 0 success, 1 verification failure,
//! 2 usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phipoisson_core::poisson::Tolerances;
use phipoisson_core::rootsys::{RootSystem, SimpleLieType};
use phipoisson_core::verify::{self, ConfigError, Instance, OutputFormat, RunConfig, SelftestConfig};
use serde::Deserialize;

const TOLERANCE_ENV: &str = "PHIPOISSON_TOLERANCES";

#[derive(Parser)]
#[command(name = "phipoisson", version, about = "φ-Poisson structures on homogeneous spaces of simple Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the roots of a simple Lie algebra.
    Roots {
        /// Cartan type, e.g. E8.
        algebra: String,
        /// Print the coefficient of this (1-based) node in every positive root.
        #[arg(long)]
        node: Option<usize>,
    },
    /// Run the verification pipeline.
    Verify(VerifyArgs),
    /// Run the Hochschild and structure-constant property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cochains: usize,
        #[arg(long, default_value_t = 1000)]
        triples: usize,
        /// Flip one structure constant of A2 before checking.
        #[arg(long)]
        corrupt_signs: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args, Default)]
struct VerifyArgs {
    /// TOML file mirroring the run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Instance as TYPE:NODE:LEVEL (1-based Bourbaki node). Repeatable; replaces the configured list.
    #[arg(long = "instance", value_name = "TYPE:NODE:LEVEL")]
    instances: Vec<String>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    accept: Option<f64>,
    #[arg(long)]
    reject: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Perturb every solution's c_1 by this amount before verifying it.
    #[arg(long, value_name = "DELTA")]
    perturb: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTolerances {
    accept: Option<f64>,
    reject: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    instances: Option<Vec<Instance>>,
    kappa: Option<f64>,
    tolerances: Option<FileTolerances>,
    format: Option<OutputFormat>,
    output: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
    perturb: Option<f64>,
}

fn env_tolerances(value: &str) -> Result<Tolerances, String> {
    let (a, r) = value
        .split_once(',')
        .ok_or_else(|| format!("{TOLERANCE_ENV} must be \"accept,reject\""))?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{TOLERANCE_ENV}: {e}"));
    Ok(Tolerances {
        accept: parse(a)?,
        reject: parse(r)?,
    })
}

fn resolve(args: &VerifyArgs, env: Option<&str>, file: Option<FileConfig>) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(v) = env {
        cfg.tolerances = env_tolerances(v)?;
    }
    if let Some(f) = file {
        if let Some(v) = f.instances {
            cfg.instances = v;
        }
        if let Some(t) = f.tolerances {
            cfg.tolerances.accept = t.accept.unwrap_or(cfg.tolerances.accept);
            cfg.tolerances.reject = t.reject.unwrap_or(cfg.tolerances.reject);
        }
        cfg.kappa = f.kappa.unwrap_or(cfg.kappa);
        cfg.format = f.format.unwrap_or(cfg.format);
        cfg.output = f.output.or(cfg.output);
        cfg.seed = f.seed.unwrap_or(cfg.seed);
        cfg.threads = f.threads.unwrap_or(cfg.threads);
        cfg.perturb = f.perturb.or(cfg.perturb);
    }
    if !args.instances.is_empty() {
        cfg.instances = args
            .instances
            .iter()
            .map(|s| Instance::parse(s))
            .collect::<Result<_, ConfigError>>()
            .map_err(|e| e.to_string())?;
    }
    cfg.kappa = args.kappa.unwrap_or(cfg.kappa);
    cfg.tolerances.accept = args.accept.unwrap_or(cfg.tolerances.accept);
    cfg.tolerances.reject = args.reject.unwrap_or(cfg.tolerances.reject);
    if let Some(f) = args.format {
        cfg.format = match f {
            Format::Table => OutputFormat::Table,
            Format::Json => OutputFormat::Json,
        };
    }
    cfg.output = args.output.clone().or(cfg.output);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.threads = args.threads.unwrap_or(cfg.threads);
    cfg.perturb = args.perturb.or(cfg.perturb);
    Ok(cfg)
}

fn read_config(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let file = match args.config.as_deref().map(read_config).transpose() {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let env = std::env::var(TOLERANCE_ENV).ok();
    let cfg = match resolve(args, env.as_deref(), file) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    let report = match verify::run(&cfg) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    let text = report.render();
    match &cfg.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                return usage_error(&format!("{}: {e}", p.display()));
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for r in &report.instances {
            for c in r.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {} {}: {}", r.instance.label(), c.name, c.detail);
            }
        }
        for c in report.global_checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL {}: {}", c.name, c.detail);
        }
        ExitCode::from(1)
    }
}

fn cmd_roots(algebra: &str, node: Option<usize>) -> ExitCode {
    let t: SimpleLieType = match algebra.parse() {
        Ok(t) => t,
        Err(e) => return usage_error(&format!("{e}")),
    };
    let rs = RootSystem::build(t);
    if let Some(n) = node {
        if n == 0 || n > rs.rank() {
            return usage_error(&format!("node must be in 1..={}", rs.rank()));
        }
    }
    let fmt = |c: &[i32]| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    println!("type {t}");
    println!("roots {}", rs.len());
    println!("highest root ({})", fmt(rs.highest_root().coeffs()));
    for (i, c) in rs.highest_root().coeffs().iter().enumerate() {
        println!("  node {}: coefficient {c}", i + 1);
    }
    if let Some(n) = node {
        println!("positive roots with node {n} coefficient:");
        for i in rs.positive_indices() {
            let c = rs.root(i).coeffs();
            println!("  ({}) {}", fmt(c), c[n - 1]);
        }
    }
    ExitCode::SUCCESS
}

fn cmd_selftest(cfg: SelftestConfig) -> ExitCode {
    let report = verify::selftest(&cfg);
    for c in &report.checks {
        println!("{} {} — {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Roots { algebra, node } => cmd_roots(&algebra, node),
        Command::Verify(args) => cmd_verify(&args),
        Command::Selftest {
            seed,
            cochains,
            triples,
            corrupt_signs,
        } => cmd_selftest(SelftestConfig {
            seed,
            cochains,
            jacobi_triples: triples,
            corrupt_signs,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_over_file_over_env() {
        let env = Some("1e-11,1e-7");
        let cfg = resolve(&VerifyArgs::default(), env, None).unwrap();
        assert_eq!((cfg.tolerances.accept, cfg.tolerances.reject), (1e-11, 1e-7));

        let file: FileConfig = toml::from_str("[tolerances]\naccept = 1e-10\n").unwrap();
        let cfg = resolve(&VerifyArgs::default(), env, Some(file)).unwrap();
        assert_eq!((cfg.tolerances.accept, cfg.tolerances.reject), (1e-10, 1e-7));

        let file: FileConfig = toml::from_str("[tolerances]\naccept = 1e-10\n").unwrap();
        let args = VerifyArgs {
            accept: Some(1e-12),
            ..Default::default()
        };
        let cfg = resolve(&args, env, Some(file)).unwrap();
        assert_eq!((cfg.tolerances.accept, cfg.tolerances.reject), (1e-12, 1e-7));
    }

    #[test]
    fn file_instances() {
        let file: FileConfig = toml::from_str(
            "kappa = 2.0\nformat = \"json\"\n[[instances]]\nalgebra = \"G2\"\nnode = 1\nlevel = 3\n",
        )
        .unwrap();
        let cfg = resolve(&VerifyArgs::default(), None, Some(file)).unwrap();
        assert_eq!(cfg.instances, vec![Instance::new("G2", 1, 3)]);
        assert_eq!(cfg.kappa, 2.0);
        assert_eq!(cfg.format, OutputFormat::Json);
    }

    #[test]
    fn bad_env_value() {
        assert!(resolve(&VerifyArgs::default(), Some("1e-9"), None).is_err());
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }
}
