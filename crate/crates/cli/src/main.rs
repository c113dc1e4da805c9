use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nodal_core::hilb_localize::{fixed_point_contributions, Localizer};
use nodal_core::json::{node_record, poly_to_terms, records_to_string};
use nodal_core::nodepoly::{count_nodal, count_nodal_chern, node_polynomial_with, NodePolynomial};
use nodal_core::toric::{load_surface_file, ChernTuple, LibraryVariant, SurfaceInstance};
use nodal_core::universal_fit::{FitCache, UniversalFitter};
use nodal_core::validation::{self, Level};
use nodal_core::{Config, NodalError};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "nodal", version, about = "Universal node polynomials N_δ(x, y, z, t)")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Largest δ computed without --force.
    #[arg(long, global = true, env = "NODAL_MAX_DELTA", default_value_t = 4)]
    max_delta: usize,
    /// Equivariant samples each integral is checked on.
    #[arg(long, global = true, env = "NODAL_SAMPLE_COUNT", default_value_t = 3)]
    sample_count: usize,
    #[arg(long, global = true, env = "NODAL_RNG_SEED", default_value_t = nodal_core::config::DEFAULT_SEED)]
    rng_seed: u64,
    /// JSON file holding fitted polynomials.
    #[arg(long, global = true, env = "NODAL_CACHE_PATH")]
    cache_path: Option<PathBuf>,
    /// Worker threads, 0 for automatic.
    #[arg(long, global = true, env = "NODAL_THREAD_COUNT", default_value_t = 0)]
    thread_count: usize,
    /// Repeat for more log output; -vvv dumps fixed-point contributions.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Primary,
    Alternate,
}

impl From<Variant> for LibraryVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Primary => LibraryVariant::Primary,
            Variant::Alternate => LibraryVariant::Alternate,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CheckLevel {
    Quick,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print N_0 .. N_D.
    Polys {
        #[arg(long)]
        delta: usize,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        /// Allow δ above --max-delta.
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = Variant::Primary)]
        library: Variant,
    },
    /// Evaluate N_D on a surface file or a Chern tuple.
    Count {
        #[arg(long, conflicts_with = "chern", required_unless_present = "chern")]
        surface: Option<PathBuf>,
        /// x,y,z,t = L², L.K, K², c₂
        #[arg(long, value_parser = parse_chern, allow_hyphen_values = true)]
        chern: Option<ChernTuple>,
        #[arg(long)]
        delta: usize,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        force: bool,
    },
    /// Run the self-checks.
    Check {
        #[arg(long, value_enum, default_value_t = CheckLevel::Quick)]
        level: CheckLevel,
    },
    /// Rank and residual diagnostics of one fit.
    FitReport {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, value_enum, default_value_t = Variant::Primary)]
        library: Variant,
        #[arg(long)]
        force: bool,
    },
    /// Manage the fit cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    Clear,
    Inspect,
}

fn parse_chern(s: &str) -> Result<ChernTuple, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four integers x,y,z,t, got {} fields", parts.len()));
    }
    let mut v = [0i64; 4];
    for (k, p) in parts.iter().enumerate() {
        v[k] = p
            .parse()
            .map_err(|e| format!("field {} ({p:?}) is not an integer: {e}", k + 1))?;
    }
    Ok(ChernTuple::new(v[0], v[1], v[2], v[3]))
}

/// Failure with the process exit status attached.
struct Failure {
    code: u8,
    message: String,
}

impl From<NodalError> for Failure {
    fn from(e: NodalError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

fn config_from(g: &GlobalOpts) -> Result<Config, Failure> {
    let config = Config {
        max_delta: g.max_delta,
        sample_count: g.sample_count,
        rng_seed: g.rng_seed,
        cache_path: g.cache_path.clone(),
        thread_count: g.thread_count,
    };
    config.validate()?;
    Ok(config)
}

fn allow_delta(config: &mut Config, delta: usize, force: bool) -> Result<(), Failure> {
    if delta > config.max_delta {
        if !force {
            let e = config.check_delta(delta).expect_err("δ above the cap");
            return Err(Failure {
                code: e.exit_code() as u8,
                message: format!("{e}; pass --force to compute it anyway"),
            });
        }
        log::warn!(
            "δ = {delta} exceeds the default cap {}; fixed-point enumeration grows quickly",
            config.max_delta
        );
        config.max_delta = delta;
    }
    Ok(())
}

fn open_cache(config: &Config) -> Result<Option<FitCache>, Failure> {
    match &config.cache_path {
        Some(p) => Ok(Some(FitCache::open(p)?)),
        None => Ok(None),
    }
}

fn compute_polys(
    config: &Config,
    max_delta: usize,
    variant: LibraryVariant,
) -> Result<Vec<NodePolynomial>, Failure> {
    let mut cache = open_cache(config)?;
    let fitter = UniversalFitter::new(config, max_delta, variant)?;
    let polys = (0..=max_delta)
        .map(|d| node_polynomial_with(&fitter, d, cache.as_mut()))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(c) = &cache {
        c.save()?;
    }
    Ok(polys)
}

fn dump_fixed_points(config: &Config, instance: &SurfaceInstance, delta: usize) {
    if !log::log_enabled!(log::Level::Trace) {
        return;
    }
    let loc = Localizer::new(config.clone());
    for comp in instance.components() {
        let Ok(samples) = loc.samples_for(comp, delta) else {
            continue;
        };
        for k in 0..=delta {
            if let Ok(parts) = fixed_point_contributions(comp, k, delta, &samples[0]) {
                for (tuple, value) in parts {
                    log::trace!("{comp} k={k} {:?}: {:?}", tuple.0, value.0);
                }
            }
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut config = config_from(&cli.global)?;
    match cli.command {
        Command::Polys {
            delta,
            format,
            force,
            library,
        } => {
            allow_delta(&mut config, delta, force)?;
            let polys = compute_polys(&config, delta, library.into())?;
            Ok(match format {
                Format::Pretty => polys
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Json => records_to_string(
                    &polys
                        .iter()
                        .map(|p| node_record(p.delta, &p.polynomial))
                        .collect::<Vec<_>>(),
                ),
            })
        }
        Command::Count {
            surface,
            chern,
            delta,
            format,
            force,
        } => {
            allow_delta(&mut config, delta, force)?;
            let instance = match &surface {
                Some(path) => Some(load_surface_file(path)?),
                None => None,
            };
            let polys = compute_polys(&config, delta, LibraryVariant::Primary)?;
            let n = &polys[delta];
            let count = match (&instance, chern) {
                (Some(inst), _) => {
                    dump_fixed_points(&config, inst, delta);
                    count_nodal(n, inst)
                }
                (None, Some(c)) => count_nodal_chern(n, &c),
                (None, None) => unreachable!("clap requires --surface or --chern"),
            };
            let warnings = count
                .advisory
                .as_ref()
                .map(|a| a.warnings.clone())
                .unwrap_or_default();
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            Ok(match format {
                Format::Pretty => count.value.to_string(),
                Format::Json => serde_json::to_string_pretty(&json!({
                    "delta": delta,
                    "value_num": count.value.numer().to_string(),
                    "value_den": count.value.denom().to_string(),
                    "advisory": warnings,
                }))
                .expect("json"),
            })
        }
        Command::Check { level } => {
            let level = match level {
                CheckLevel::Quick => Level::Quick,
                CheckLevel::Full => Level::Full,
            };
            let report = validation::run(level, &config);
            if report.passed() {
                Ok(report.to_string())
            } else {
                Err(Failure {
                    code: 1,
                    message: report.to_string(),
                })
            }
        }
        Command::FitReport {
            i,
            delta,
            library,
            force,
        } => {
            allow_delta(&mut config, delta, force)?;
            if i > delta {
                return Err(NodalError::Config(format!("need i ≤ δ, got i = {i}, δ = {delta}")).into());
            }
            let fitter = UniversalFitter::new(&config, delta, library.into())?;
            let r = fitter.report(i, delta)?;
            let mut out = vec![
                format!("fit (i = {}, δ = {})", r.i, r.delta),
                format!("library: {}", fitter.library().hash()),
                format!("rank: {} / {}", r.rank, r.required),
                format!("instances: {} ({} duplicates removed)", r.instances.len(), r.duplicates_removed),
                format!("inconsistent rows: {}", r.inconsistent_rows),
                format!("pivot bits: {:?}", r.pivot_bits),
            ];
            for h in &r.held_out {
                let tag = if h.passed() { "ok" } else { "MISMATCH" };
                out.push(format!("held-out {}: {} vs {} {tag}", h.name, h.expected, h.predicted));
            }
            if r.full_rank() {
                let fit = fitter.fit(i, delta)?;
                out.push(format!("e(Hilb^{i}) = {}", fit.polynomial));
            }
            Ok(out.join("\n"))
        }
        Command::Cache { action } => {
            let Some(path) = config.cache_path.clone() else {
                return Err(NodalError::Config("no cache path; pass --cache-path or set NODAL_CACHE_PATH".into()).into());
            };
            match action {
                CacheAction::Clear => {
                    let removed = FitCache::clear(&path)?;
                    Ok(if removed {
                        format!("removed {}", path.display())
                    } else {
                        format!("{} does not exist", path.display())
                    })
                }
                CacheAction::Inspect => {
                    let cache = FitCache::open(&path)?;
                    let mut out = vec![format!("{}: {} entries", path.display(), cache.len())];
                    for ((i, delta, library, version), p) in cache.entries() {
                        let terms = poly_to_terms(p).len();
                        out.push(format!("i = {i}, δ = {delta}, library {library}, {version}, {terms} terms"));
                    }
                    Ok(out.join("\n"))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{out}").and_then(|()| stdout.flush()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: writing output: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
