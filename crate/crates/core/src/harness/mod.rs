//! Multi-replica campaigns over instance catalogs.
//!
//! Each `(instance, replica)` pair runs single-threaded on a worker pool with
//! its own stream `derive_seed(seed, [instance index, replica index])`, so the
//! set of reachable results does not depend on the worker count. Finished
//! codes go to one aggregator (the calling thread) which verifies them and
//! persists the best per instance atomically. Every replica result is appended
//! to `runs.jsonl` in the output directory.

pub mod catalog;
pub mod distmap;

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::code::read_code_file;
use crate::error::{CwcError, Result};
use crate::rng::{derive_seed, RngStream};
use crate::rsdh::{run_rsdh, ScoringVector};
use crate::sliced::{run_msrsdh, run_srsdh};
use crate::tabu::{run_tabu, TabuOutcome};
use crate::verify::{check, persist_verified, verify};
use crate::word::{Codeword, Params, DEFAULT_MEMORY_LIMIT};

pub use catalog::{load_catalog, parse_catalog, Instance, Method};
pub use distmap::export_distance_map;

pub const RUN_LOG: &str = "runs.jsonl";

/// What one method invocation produced.
#[derive(Clone, Debug)]
pub struct MethodRun {
    /// Best code found (empty when tabu timed out).
    pub words: Vec<Codeword>,
    pub reached: bool,
    pub sv: Option<ScoringVector>,
    pub elapsed: Duration,
}

/// Runs `method` on `params` with the given stream and budget.
pub fn run_method(params: &Params, method: &Method, rng: &mut RngStream, budget: Budget, memory_limit: u64) -> Result<MethodRun> {
    let started = Instant::now();
    let greedy = |out: crate::rsdh::GreedyOutcome| MethodRun {
        reached: out.reached,
        words: out.code.words,
        sv: Some(out.sv),
        elapsed: started.elapsed(),
    };
    Ok(match method {
        Method::Tabu(cfg) => match run_tabu(params, cfg, rng, budget)? {
            TabuOutcome::Solved { code, .. } => MethodRun {
                words: code.words,
                reached: true,
                sv: None,
                elapsed: started.elapsed(),
            },
            TabuOutcome::Timeout { .. } => MethodRun {
                words: Vec::new(),
                reached: false,
                sv: None,
                elapsed: started.elapsed(),
            },
        },
        Method::Rsdh => greedy(run_rsdh(params, rng, budget, memory_limit)?),
        Method::Srsdh(cfg) => greedy(run_srsdh(params, cfg, rng, budget, memory_limit)?),
        Method::Msrsdh(cfg) => greedy(run_msrsdh(params, cfg, rng, budget, memory_limit)?),
    })
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub workers: usize,
    /// Replicas per instance; defaults to the worker count.
    pub replicas: Option<usize>,
    /// Default per-replica budget; a catalog row's `budget` overrides its time limit.
    pub budget: Budget,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub memory_limit: u64,
}

impl CampaignConfig {
    pub fn new(out_dir: impl Into<PathBuf>, workers: usize, budget: Budget, seed: u64) -> Self {
        Self {
            workers,
            replicas: None,
            budget,
            seed,
            out_dir: out_dir.into(),
            memory_limit: DEFAULT_MEMORY_LIMIT,
        }
    }
}

/// Outcome per instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    /// Stream seed of the replica that produced the best code this campaign.
    pub seed: Option<u64>,
    /// Size of the best code on disk after the campaign (including earlier campaigns).
    pub size: usize,
    /// Best size found by this campaign.
    pub found: usize,
    pub reached: bool,
    pub elapsed_ms: u64,
    pub path: Option<PathBuf>,
    pub verified: bool,
    pub errors: Vec<String>,
}

#[derive(Serialize)]
struct LogLine<'a> {
    instance: &'a str,
    seed: u64,
    size: usize,
    elapsed_ms: u64,
    path: Option<&'a Path>,
}

struct ReplicaResult {
    instance: usize,
    replica: usize,
    seed: u64,
    run: Result<MethodRun>,
}

struct Aggregate {
    best_found: Option<(usize, usize, u64)>,
    on_disk: usize,
    /// Replica of this campaign that wrote the stored code.
    persisted_by: Option<usize>,
    path: Option<PathBuf>,
    elapsed: Duration,
    errors: Vec<String>,
}

pub fn replica_seed(seed: u64, instance: usize, replica: usize) -> u64 {
    derive_seed(seed, &[instance as u64, replica as u64])
}

pub fn run_campaign(catalog: &[Instance], cfg: &CampaignConfig) -> Result<Vec<RunRecord>> {
    if cfg.workers == 0 {
        return Err(CwcError::Validation("workers must be at least 1".into()));
    }
    if catalog.is_empty() {
        return Err(CwcError::Validation("catalog is empty".into()));
    }
    fs::create_dir_all(&cfg.out_dir)?;
    let replicas = cfg.replicas.unwrap_or(cfg.workers).max(1);
    let paths: Vec<PathBuf> = catalog
        .iter()
        .map(|inst| cfg.out_dir.join(format!("{}.txt", inst.name())))
        .collect();
    let mut aggs: Vec<Aggregate> = catalog
        .iter()
        .zip(&paths)
        .map(|(inst, path)| {
            let existing = existing_size(path, &inst.params);
            Aggregate {
                best_found: None,
                on_disk: existing,
                persisted_by: None,
                path: (existing > 0).then(|| path.clone()),
                elapsed: Duration::ZERO,
                errors: Vec::new(),
            }
        })
        .collect();

    let jobs: Vec<(usize, usize)> = (0..catalog.len())
        .flat_map(|i| (0..replicas).map(move |r| (i, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CwcError::Validation(format!("worker pool: {e}")))?;
    let mut log = OpenOptions::new()
        .create(true)
        .append(true)
        .open(cfg.out_dir.join(RUN_LOG))?;

    let (tx, rx) = mpsc::channel::<ReplicaResult>();
    std::thread::scope(|scope| -> Result<()> {
        scope.spawn(|| {
            pool.install(|| {
                jobs.par_iter().for_each_with(tx, |tx, &(i, r)| {
                    let inst = &catalog[i];
                    let seed = replica_seed(cfg.seed, i, r);
                    let mut budget = cfg.budget;
                    if let Some(secs) = inst.budget_secs {
                        budget.time_limit = Some(Duration::from_secs_f64(secs));
                    }
                    let run = run_method(&inst.params, &inst.method, &mut RngStream::new(seed), budget, cfg.memory_limit);
                    let _ = tx.send(ReplicaResult {
                        instance: i,
                        replica: r,
                        seed,
                        run,
                    });
                });
            });
        });
        for msg in rx {
            let inst = &catalog[msg.instance];
            let agg = &mut aggs[msg.instance];
            let run = match msg.run {
                Ok(run) => run,
                Err(e) => {
                    agg.errors.push(format!("replica {}: {e}", msg.replica));
                    continue;
                }
            };
            agg.elapsed = agg.elapsed.max(run.elapsed);
            let size = run.words.len();
            let valid = check(&run.words, inst.params.n, inst.params.w, inst.params.d, None).valid;
            if !valid {
                agg.errors.push(format!("replica {}: produced an invalid code", msg.replica));
                continue;
            }
            let better = match agg.best_found {
                None => size > 0,
                Some((best, best_replica, _)) => size > best || (size == best && msg.replica < best_replica),
            };
            if better {
                agg.best_found = Some((size, msg.replica, msg.seed));
            }
            // Equal sizes go to the lowest replica index so the stored code does not
            // depend on completion order. Codes from earlier campaigns are only replaced
            // by strictly larger ones.
            let improves_disk = size > agg.on_disk
                || (size == agg.on_disk && agg.persisted_by.is_some_and(|r| msg.replica < r));
            if size > 0 && improves_disk {
                let target = inst.params.with_target(size);
                match persist_verified(&paths[msg.instance], &run.words, &target) {
                    Ok(_) => {
                        agg.on_disk = size;
                        agg.persisted_by = Some(msg.replica);
                        agg.path = Some(paths[msg.instance].clone());
                    }
                    Err(e) => agg.errors.push(format!("replica {}: {e}", msg.replica)),
                }
            }
            let line = LogLine {
                instance: &inst.name(),
                seed: msg.seed,
                size,
                elapsed_ms: run.elapsed.as_millis() as u64,
                path: agg.path.as_deref(),
            };
            serde_json::to_writer(&mut log, &line)?;
            log.write_all(b"\n")?;
        }
        Ok(())
    })?;
    log.flush()?;

    Ok(catalog
        .iter()
        .zip(aggs)
        .map(|(inst, agg)| {
            let verified = agg.path.as_ref().is_some_and(|p| {
                read_code_file(p, inst.params.n)
                    .map(|w| verify(&w, &inst.params.with_target(agg.on_disk)).valid)
                    .unwrap_or(false)
            });
            let found = agg.best_found.map_or(0, |b| b.0);
            RunRecord {
                instance: inst.name(),
                seed: agg.best_found.map(|b| b.2),
                size: agg.on_disk,
                found,
                reached: agg.on_disk >= inst.params.s,
                elapsed_ms: agg.elapsed.as_millis() as u64,
                path: agg.path,
                verified,
                errors: agg.errors,
            }
        })
        .collect())
}

/// Size of a valid code already at `path`, or 0.
fn existing_size(path: &Path, params: &Params) -> usize {
    match read_code_file(path, params.n) {
        Ok(words) if check(&words, params.n, params.w, params.d, None).valid => words.len(),
        _ => 0,
    }
}
