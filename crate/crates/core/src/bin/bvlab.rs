use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bvlab::harness::report::{write_claims_csv, write_json};
use bvlab::harness::{claim_suite, criteria, run, run_criterion, ClaimContext, ExperimentConfig, Function2DRef, FunctionRef, LambdaGrid, Mode};
use bvlab::Error;

#[derive(Parser)]
#[command(name = "bvlab", version, about = "Non-local BV functionals: sweeps, recovery families, slicing and claim checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML or JSON experiment configuration
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance per evaluation
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads for the evaluators
    #[arg(long)]
    threads: Option<usize>,
    /// Catalog function name when no configuration is given
    #[arg(long)]
    function: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// λ-sweep of a 1D function
    Sweep(Common),
    /// Recovery family with certified thresholds
    Recover(Common),
    /// Sliced evaluation of a planar function
    Slice2d(Common),
    /// Lower bound, limit and recovery claims for one function
    Verify(Common),
    /// Quadrature against Monte Carlo
    Oracle(Common),
    /// Full acceptance matrix
    Claims {
        #[command(flatten)]
        common: Common,
        /// Run only these criteria
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Override the 1D sphere constant in the targets
        #[arg(long)]
        c1: Option<f64>,
    },
}

fn default_config(mode: Mode, function: Option<String>) -> ExperimentConfig {
    let (f1, f2) = match mode {
        Mode::Sweep => (Some("linear"), None),
        Mode::Recover | Mode::Verify => (Some("cantor"), None),
        Mode::Slice2d => (None, Some("disk")),
        Mode::Oracle => (Some("step"), None),
    };
    let grid = match mode {
        Mode::Slice2d => LambdaGrid { start: 1e2, stop: 1e3, points: 3, scale: Default::default() },
        Mode::Verify => LambdaGrid { start: 1e4, stop: 1e6, points: 5, scale: Default::default() },
        _ => LambdaGrid { start: 1e2, stop: 1e6, points: 9, scale: Default::default() },
    };
    let (function, function2d) = match (mode, function) {
        (Mode::Slice2d, Some(n)) => (None, Some(Function2DRef::Named { name: n })),
        (_, Some(n)) => (Some(FunctionRef::Named { name: n }), None),
        _ => (
            f1.map(|n| FunctionRef::Named { name: n.into() }),
            f2.map(|n| Function2DRef::Named { name: n.into() }),
        ),
    };
    ExperimentConfig {
        mode,
        function,
        function2d,
        gamma: 1.0,
        lambda_grid: grid,
        tol: 1e-3,
        seed: 0,
        output: Default::default(),
        recover: Default::default(),
        oracle: Default::default(),
        slice: Default::default(),
    }
}

fn configure(mode: Mode, c: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &c.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => default_config(mode, c.function.clone()),
    };
    cfg.mode = mode;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(t) = c.tol {
        cfg.tol = t;
    }
    if let Some(o) = &c.out {
        cfg.output.dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn set_threads(c: &Common) -> Result<(), Error> {
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("--threads: {e}")))?;
    }
    Ok(())
}

fn claims(common: &Common, only: &[u8], c1: Option<f64>) -> Result<ExitCode, Error> {
    let mut ctx = ClaimContext::default();
    if let Some(s) = common.seed {
        ctx.seed = s;
    }
    if let Some(c) = c1 {
        ctx.c1 = c;
    }
    let outcomes: Vec<_> = if only.is_empty() {
        claim_suite(&ctx)
    } else {
        criteria().iter().filter(|c| only.contains(&c.id)).map(|c| run_criterion(c, &ctx)).collect()
    };
    let mut rows = Vec::new();
    for o in &outcomes {
        println!("[{}] criterion {}: {} ({:.2} s)", if o.pass() { "PASS" } else { "FAIL" }, o.id, o.name, o.runtime_s);
        for r in &o.rows {
            println!("    {r}");
        }
        rows.extend(o.rows.iter().cloned());
    }
    if let Some(dir) = &common.out {
        std::fs::create_dir_all(dir)?;
        write_claims_csv(std::fs::File::create(dir.join("claims.csv"))?, &rows)?;
        write_json(&dir.join("claims.json"), &rows)?;
    }
    Ok(if rows.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Claims { common, only, c1 } => set_threads(common).and_then(|_| claims(common, only, *c1)),
        cmd => {
            let (mode, common) = match cmd {
                Command::Sweep(c) => (Mode::Sweep, c),
                Command::Recover(c) => (Mode::Recover, c),
                Command::Slice2d(c) => (Mode::Slice2d, c),
                Command::Verify(c) => (Mode::Verify, c),
                Command::Oracle(c) => (Mode::Oracle, c),
                Command::Claims { .. } => unreachable!(),
            };
            set_threads(common).and_then(|_| configure(mode, common)).and_then(|cfg| {
                let out = run(&cfg)?;
                for r in &out.rows {
                    println!("{r}");
                }
                for a in &out.artifacts {
                    println!("wrote {}", a.display());
                }
                Ok(ExitCode::from(out.exit_code as u8))
            })
        }
    };
    match result {
        Ok(code) => code,
        Err(e @ Error::Config(_)) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
