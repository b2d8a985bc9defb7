use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cwbc::harness::{self, load_catalog, CampaignConfig, RUN_LOG};
use cwbc::oracle::exact_max_code;
use cwbc::rsdh::write_trajectory_csv;
use cwbc::tabu::run_tabu_observed;
use cwbc::verify::check;
use cwbc::{
    objective_trajectory, persist_verified, read_code_file, rerun_with_sv, run_msrsdh, run_rsdh, run_srsdh,
    Budget, CwcError, GreedyOutcome, Params, RngStream, ScoringVector, SliceConfig, TabuConfig, TabuOutcome,
    DEFAULT_MEMORY_LIMIT,
};

/// Exit status when a search ends without reaching its target size.
const NOT_REACHED: u8 = 1;
const FAILURE: u8 = 2;

#[derive(Parser)]
#[command(name = "cwbc", version, about = "Construct and check constant weight binary codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a code file; exit status 0 iff the code is valid.
    Verify(VerifyArgs),
    /// Bit-swap tabu search for a code of exactly s words.
    Tabu(TabuArgs),
    /// Random-score distance histogram greedy.
    Rsdh(GreedyArgs),
    /// RSDH seeded from one random low-bit slice.
    Srsdh(SlicedArgs),
    /// RSDH over all low-bit slices in random order.
    Msrsdh(SlicedArgs),
    /// Parallel multi-replica runs over a catalog.
    Campaign(CampaignArgs),
    /// Pairwise distance map of a code in file order.
    Distmap(DistmapArgs),
    /// Exact maximum code size for small instances (test support).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    w: u32,
    #[arg(long)]
    d: u32,
    /// Required code size.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    w: u32,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Bytes available for the candidate list.
    #[arg(long, default_value_t = DEFAULT_MEMORY_LIMIT)]
    memory_limit: u64,
}

impl Common {
    fn params(&self) -> cwbc::Result<Params> {
        Params::strict(self.n, self.w, self.d, self.s)
    }

    fn budget(&self) -> cwbc::Result<Budget> {
        match self.time_limit {
            None => Ok(Budget::unlimited()),
            Some(t) if t.is_finite() && t > 0.0 => Ok(Budget::seconds(t)),
            Some(t) => Err(CwcError::Validation(format!("time limit {t} must be positive"))),
        }
    }
}

#[derive(Args)]
struct TabuArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 5)]
    tmin: u32,
    #[arg(long, default_value_t = 15)]
    tmax: u32,
    /// Restart after this many steps without a new minimum penalty.
    #[arg(long, default_value_t = 1_000_000)]
    restart_steps: u64,
    /// Steps between progress lines on stderr; 0 disables them.
    #[arg(long, default_value_t = 100_000)]
    progress_every: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GreedyOutput {
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV of the objective after each accepted word.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Write the scoring vector behind the returned code.
    #[arg(long)]
    dump_sv: Option<PathBuf>,
}

#[derive(Args)]
struct GreedyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    output: GreedyOutput,
    /// Rebuild with a fixed scoring vector instead of sampling new ones.
    #[arg(long)]
    load_sv: Option<PathBuf>,
}

#[derive(Args)]
struct SlicedArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    output: GreedyOutput,
    #[arg(long)]
    b: u32,
    #[arg(long, default_value_t = cwbc::sliced::DEFAULT_TRIALS)]
    t: u32,
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long)]
    catalog: PathBuf,
    /// `CWC_WORKERS` in the environment takes precedence over this flag.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Replicas per instance; defaults to the worker count.
    #[arg(long)]
    replicas: Option<usize>,
    /// Seconds per replica unless the catalog row sets its own.
    #[arg(long)]
    budget: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DistmapArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    pgm: Option<PathBuf>,
    /// Defaults to stdout when neither output is given.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    w: u32,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 100_000_000)]
    node_limit: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Tabu(a) => cmd_tabu(a),
        Command::Rsdh(a) => cmd_rsdh(a),
        Command::Srsdh(a) => cmd_sliced(a, false),
        Command::Msrsdh(a) => cmd_sliced(a, true),
        Command::Campaign(a) => cmd_campaign(a),
        Command::Distmap(a) => cmd_distmap(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> cwbc::Result<ExitCode> {
    Params::new(a.n, a.w, a.d, a.s.unwrap_or(1))?;
    let words = read_code_file(&a.input, a.n)?;
    let report = check(&words, a.n, a.w, a.d, a.s);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{report}");
    }
    Ok(if report.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(NOT_REACHED)
    })
}

fn cmd_tabu(a: TabuArgs) -> cwbc::Result<ExitCode> {
    let params = a.common.params()?;
    let cfg = TabuConfig {
        t_min: a.tmin,
        t_max: a.tmax,
        max_no_improve_restart: a.restart_steps,
        report_every: a.progress_every,
        ..TabuConfig::default()
    };
    let mut rng = RngStream::new(a.common.seed);
    let outcome = run_tabu_observed(&params, &cfg, &mut rng, a.common.budget()?, |p| {
        eprintln!("step={} penalty={} minP={}", p.step, p.penalty, p.min_penalty);
    })?;
    let stats = outcome.stats();
    match &outcome {
        TabuOutcome::Solved { code, .. } => {
            persist_verified(&a.out, &code.words, &params)?;
            eprintln!(
                "solved {params} in {} steps, {} restarts, {:.2}s",
                stats.steps,
                stats.restarts,
                stats.elapsed.as_secs_f64()
            );
            Ok(ExitCode::SUCCESS)
        }
        TabuOutcome::Timeout { .. } => {
            eprintln!(
                "timeout after {} steps, {} restarts; best penalty {}",
                stats.steps, stats.restarts, stats.best_penalty
            );
            Ok(ExitCode::from(NOT_REACHED))
        }
    }
}

fn cmd_rsdh(a: GreedyArgs) -> cwbc::Result<ExitCode> {
    let params = a.common.params()?;
    let mut rng = RngStream::new(a.common.seed);
    let budget = a.common.budget()?;
    let out = match &a.load_sv {
        Some(path) => {
            let sv = ScoringVector::from_text(&fs::read_to_string(path)?, params.w)?;
            if sv.d() != params.d {
                return Err(CwcError::Validation(format!(
                    "scoring vector starts at distance {}, expected {}",
                    sv.d(),
                    params.d
                )));
            }
            rerun_with_sv(&params, &sv, &mut rng, budget, a.common.memory_limit)?
        }
        None => run_rsdh(&params, &mut rng, budget, a.common.memory_limit)?,
    };
    finish_greedy(&params, &out, &a.output)
}

fn cmd_sliced(a: SlicedArgs, multi: bool) -> cwbc::Result<ExitCode> {
    let params = a.common.params()?;
    let cfg = SliceConfig::new(a.b, a.t);
    let mut rng = RngStream::new(a.common.seed);
    let budget = a.common.budget()?;
    let out = if multi {
        run_msrsdh(&params, &cfg, &mut rng, budget, a.common.memory_limit)?
    } else {
        run_srsdh(&params, &cfg, &mut rng, budget, a.common.memory_limit)?
    };
    finish_greedy(&params, &out, &a.output)
}

fn finish_greedy(params: &Params, out: &GreedyOutcome, dest: &GreedyOutput) -> cwbc::Result<ExitCode> {
    let words = &out.code.words;
    if let Some(path) = &dest.out {
        persist_verified(path, words, &params.with_target(words.len()))?;
    }
    if let Some(path) = &dest.trajectory {
        let traj = objective_trajectory(words, &out.sv)?;
        write_trajectory_csv(BufWriter::new(File::create(path)?), &traj)?;
    }
    if let Some(path) = &dest.dump_sv {
        fs::write(path, out.sv.to_text())?;
    }
    eprintln!(
        "{} words (target {}) after {} iterations, {:.2}s",
        words.len(),
        params.s,
        out.iterations,
        out.elapsed.as_secs_f64()
    );
    if let Some(prefix) = out.slice_prefix {
        eprintln!("first {prefix} words come from the initial slice");
    }
    Ok(if out.reached {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(NOT_REACHED)
    })
}

fn cmd_campaign(a: CampaignArgs) -> cwbc::Result<ExitCode> {
    if !(a.budget.is_finite() && a.budget > 0.0) {
        return Err(CwcError::Validation(format!("budget {} must be positive", a.budget)));
    }
    let workers = match std::env::var("CWC_WORKERS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CwcError::Validation(format!("CWC_WORKERS={v:?} is not a worker count")))?,
        Err(_) => a.workers,
    };
    let catalog = load_catalog(&a.catalog)?;
    let mut cfg = CampaignConfig::new(&a.out_dir, workers, Budget::seconds(a.budget), a.seed);
    cfg.replicas = a.replicas;
    let records = harness::run_campaign(&catalog, &cfg)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut all_reached = true;
    for (inst, rec) in catalog.iter().zip(&records) {
        all_reached &= rec.size >= inst.params.s;
        writeln!(
            out,
            "{:<40} target={:<5} found={:<5} stored={:<5} {}",
            rec.instance,
            inst.params.s,
            rec.found,
            rec.size,
            if rec.errors.is_empty() { "" } else { "errors" }
        )?;
        for e in &rec.errors {
            writeln!(out, "    {e}")?;
        }
    }
    eprintln!("run log: {}", a.out_dir.join(RUN_LOG).display());
    Ok(if all_reached {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(NOT_REACHED)
    })
}

fn cmd_distmap(a: DistmapArgs) -> cwbc::Result<ExitCode> {
    let words = read_code_file(&a.input, a.n)?;
    if a.csv.is_none() && a.pgm.is_none() {
        harness::distmap::write_distance_csv(io::stdout().lock(), &words)?;
    } else {
        harness::export_distance_map(&words, a.n, a.csv.as_deref(), a.pgm.as_deref())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(a: OracleArgs) -> cwbc::Result<ExitCode> {
    let params = Params::new(a.n, a.w, a.d, 1)?;
    let r = exact_max_code(&params, a.node_limit)?;
    println!(
        "{}A({},{},{}) {} {} ({} nodes)",
        if r.optimal { "" } else { "lower bound " },
        a.n,
        a.d,
        a.w,
        if r.optimal { "=" } else { ">=" },
        r.size,
        r.nodes
    );
    if let Some(path) = &a.out {
        persist_verified(path, &r.code, &params.with_target(r.size))?;
    }
    Ok(ExitCode::SUCCESS)
}
