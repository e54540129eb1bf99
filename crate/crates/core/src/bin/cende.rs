use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cende::bench::report::{read_results_csv, ReportFormat};
use cende::bench::{emit_report, run_experiment, ConfigFile, RunReport};
use cende::data::Manifest;
use cende::{Error, Execution};

#[derive(Parser)]
#[command(name = "cende", version, about = "Train MLP classifiers with centroid / opposition DE and benchmark them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cross-validation grid and write results.csv and summary.md.
    Run(RunArgs),
    /// Load every manifest entry and compare it with its expected shape.
    ValidateData {
        #[arg(long, default_value = "data/manifest.toml")]
        manifest: PathBuf,
        /// Do not fail on entries whose file is absent.
        #[arg(long)]
        allow_missing: bool,
    },
    /// Recompute summaries and ranks from a results CSV.
    Rank {
        csv: PathBuf,
        /// Also write summary.md into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Comma-separated manifest names.
    #[arg(long, value_delimiter = ',')]
    datasets: Option<Vec<String>>,
    /// Comma-separated algorithm names, e.g. CenDE-DOBL,DE.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum objective evaluations per run.
    #[arg(long)]
    budget: Option<usize>,
    /// Population size.
    #[arg(long)]
    pop: Option<usize>,
    /// Jumping rate, at most 0.4.
    #[arg(long)]
    jr: Option<f64>,
    /// Members averaged into the centroid; 0 disables injection.
    #[arg(long)]
    nbest: Option<usize>,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long)]
    cr: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::Toml(_)
        | Error::PopulationTooSmall { .. }
        | Error::SelectionTooLarge { .. }
        | Error::InvalidBounds { .. }
        | Error::OutOfRange { .. } => 1,
        Error::Data(_) | Error::Csv(_) | Error::Io { .. } | Error::EmptySamples => 2,
        _ => 3,
    }
}

fn build_config(args: &RunArgs) -> Result<ConfigFile, Error> {
    let mut cfg = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    if let Some(m) = &args.manifest {
        cfg.manifest = m.clone();
    }
    if let Some(d) = &args.datasets {
        cfg.datasets = d.clone();
    }
    if let Some(a) = &args.algorithms {
        cfg.select_algorithms(a)?;
    }
    if let Some(s) = args.seed {
        cfg.root_seed = s;
    }
    let o = &mut cfg.optimizer;
    o.max_evaluations = args.budget.or(o.max_evaluations);
    o.population_size = args.pop.or(o.population_size);
    o.jumping_rate = args.jr.or(o.jumping_rate);
    o.centroid_count = args.nbest.or(o.centroid_count);
    o.f = args.f.or(o.f);
    o.cr = args.cr.or(o.cr);
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(r) = args.repetitions {
        cfg.repetitions = r;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    match args.threads {
        Some(0) => return Err(Error::Config("--threads must be positive".into())),
        Some(1) => cfg.execution = Execution::Sequential,
        Some(n) => {
            cfg.execution = Execution::Parallel;
            set_threads(n)?;
        }
        None => {}
    }
    Ok(cfg)
}

#[cfg(feature = "parallel")]
fn set_threads(n: usize) -> Result<(), Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_: usize) -> Result<(), Error> {
    log::warn!("built without the parallel feature, running sequentially");
    Ok(())
}

fn run(args: &RunArgs) -> Result<(), Error> {
    let file = build_config(args)?;
    let cfg = file.resolve()?;
    let report = run_experiment(&cfg)?;
    let paths = emit_report(&report, &cfg.output_dir, &[ReportFormat::Csv, ReportFormat::Markdown])?;
    print!("{}", report.to_markdown());
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn validate_data(manifest: &PathBuf, allow_missing: bool) -> Result<(), Error> {
    let m = Manifest::load(manifest)?;
    let mut failures = 0;
    for e in &m.datasets {
        if !e.path.exists() {
            println!("{:<12} missing  {}", e.name, e.path.display());
            failures += usize::from(!allow_missing);
            continue;
        }
        match e.load().and_then(|ds| e.check(&ds).map(|_| ds)) {
            Ok(ds) => println!(
                "{:<12} ok       n={} D={} classes={} dropped={}",
                e.name,
                ds.len(),
                ds.dim(),
                ds.class_count(),
                ds.dropped_rows
            ),
            Err(err) => {
                println!("{:<12} invalid  {err}", e.name);
                failures += 1;
            }
        }
    }
    if failures > 0 {
        return Err(Error::Data(format!("{failures} dataset(s) failed validation")));
    }
    Ok(())
}

fn rank(csv: &PathBuf, out: Option<&PathBuf>) -> Result<(), Error> {
    let report = RunReport::from_rows(read_results_csv(csv)?)?;
    print!("{}", report.to_markdown());
    if let Some(dir) = out {
        emit_report(&report, dir, &[ReportFormat::Markdown])?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::ValidateData { manifest, allow_missing } => validate_data(manifest, *allow_missing),
        Command::Rank { csv, out } => rank(csv, out.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
