//! Checks shared by the property tests and the acceptance runner. Each returns
//! `Err` with a description of the first counterexample.

#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use cwbc::oracle::{find_extension, recompute_penalty};
use cwbc::rsdh::write_trajectory_csv;
use cwbc::tabu::random_distinct_words;
use cwbc::{
    objective_trajectory, pairwise_histogram, rand_vec, run_msrsdh, run_rsdh, run_srsdh, run_tabu,
    slice_candidates, Budget, Codeword, Move, Params, RngStream, SliceConfig, TabuConfig, TabuState,
    DEFAULT_MEMORY_LIMIT,
};
use rand::Rng;

pub const MEM: u64 = DEFAULT_MEMORY_LIMIT;

pub fn params(n: u32, w: u32, d: u32, s: usize) -> Params {
    Params::new(n, w, d, s).unwrap()
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog")
}

/// One row of `fixtures/manifest.csv`.
#[derive(Clone, Debug, serde::Deserialize)]
pub struct Fixture {
    pub file: String,
    pub n: u32,
    pub d: u32,
    pub w: u32,
    pub s: usize,
    pub method: String,
    /// Leading words that came from the first slice, for sliced runs.
    pub prefix: Option<usize>,
}

impl Fixture {
    pub fn params(&self) -> Params {
        params(self.n, self.w, self.d, self.s)
    }

    pub fn path(&self) -> PathBuf {
        fixtures_dir().join(&self.file)
    }
}

pub fn fixtures() -> Vec<Fixture> {
    let path = fixtures_dir().join("manifest.csv");
    let Ok(mut rdr) = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_path(&path) else {
        return Vec::new();
    };
    rdr.deserialize().map(|r| r.expect("manifest row")).collect()
}

/// A uniformly random valid move on `st`.
pub fn random_move(st: &TabuState, rng: &mut RngStream) -> Move {
    let n = st.params().n;
    let word = rng.random_range(0..st.len());
    let c = st.words()[word];
    loop {
        let clear = rng.random_range(0..n);
        let set = rng.random_range(0..n);
        if c.bit(clear) && !c.bit(set) {
            return Move { word, clear, set };
        }
    }
}

const REPLAY_PARAMS: [(u32, u32, u32, usize); 5] =
    [(10, 4, 4, 30), (13, 5, 6, 18), (18, 6, 6, 60), (22, 8, 10, 25), (31, 14, 16, 24)];

/// `states` random states, `moves` random swaps each, checked against a full
/// recomputation after every swap. Every state also gets one prediction check
/// from `evaluate_move` per swap.
pub fn replay_random_moves(states: usize, moves: usize, seed: u64) -> Result<(), String> {
    for k in 0..states {
        let (n, w, d, s) = REPLAY_PARAMS[k % REPLAY_PARAMS.len()];
        let p = params(n, w, d, s);
        let mut rng = RngStream::derive(seed, &[k as u64]);
        let mut st = TabuState::init_random(p, &mut rng).map_err(|e| e.to_string())?;
        for step in 0..moves {
            let m = random_move(&st, &mut rng);
            let predicted = st.evaluate_move(m).map_err(|e| e.to_string())?;
            st.apply_move(m).map_err(|e| e.to_string())?;
            let (pairs, penalty) = recompute_penalty(&st.words(), d);
            if st.penalty() != penalty || predicted != penalty {
                return Err(format!(
                    "state {k} move {step}: incremental {} predicted {predicted} recomputed {penalty}",
                    st.penalty()
                ));
            }
            if st.conflict_pairs() != pairs {
                return Err(format!("state {k} move {step}: conflict set differs"));
            }
            if st.words().iter().any(|c| c.weight() != w) {
                return Err(format!("state {k} move {step}: weight changed"));
            }
        }
    }
    Ok(())
}

/// Instances with `C(n, w) <= 10^6` for the maximality scan.
pub const MAXIMALITY_PARAMS: [(u32, u32, u32); 8] =
    [(10, 4, 4), (13, 5, 6), (14, 6, 6), (15, 7, 6), (18, 6, 8), (20, 7, 8), (17, 7, 6), (22, 9, 8)];

/// Outputs of RSDH, S-RSDH and MS-RSDH admit no extension by any weight-w word.
pub fn greedy_outputs_maximal(seeds: u64) -> Result<usize, String> {
    let mut checked = 0;
    for (k, &(n, w, d)) in MAXIMALITY_PARAMS.iter().enumerate() {
        let p = params(n, w, d, usize::MAX);
        for seed in 0..seeds {
            let rng = || RngStream::derive(seed, &[k as u64]);
            let one = Budget::iterations(1);
            let runs = [
                ("rsdh", run_rsdh(&p, &mut rng(), one, MEM)),
                ("srsdh", run_srsdh(&p, &SliceConfig::new(1, 3), &mut rng(), one, MEM)),
                ("msrsdh", run_msrsdh(&p, &SliceConfig::new(2, 2), &mut rng(), one, MEM)),
            ];
            for (name, out) in runs {
                let out = out.map_err(|e| e.to_string())?;
                if let Some(x) = find_extension(&out.code.words, n, w, d) {
                    return Err(format!("{name} ({n},{d},{w}) seed {seed}: {x:?} extends the code"));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

pub fn rand_vec_argmax_is_d(draws: u64) -> Result<(), String> {
    let mut rng = RngStream::new(7);
    for k in 0..draws {
        let (d, w) = [(4, 4), (6, 8), (8, 11), (8, 9), (10, 8), (16, 14)][k as usize % 6];
        let sv = rand_vec(d, w, &mut rng);
        let top = *sv.values().iter().max().unwrap();
        if sv.get(d) != Some(top) {
            return Err(format!("draw {k}: {:?} does not peak at d={d}", sv.values()));
        }
    }
    Ok(())
}

/// The `2^b` slice pools are disjoint, cover every weight-w word, and each
/// holds exactly the words with low bits `r`.
pub fn slices_partition(n: u32, w: u32, d: u32, b: u32) -> Result<(), String> {
    let p = params(n, w, d, 1);
    let mut seen: HashSet<u64> = HashSet::new();
    let mask = (1u64 << b) - 1;
    for r in 0..1u64 << b {
        let pool = slice_candidates(&p, b, r, MEM).map_err(|e| e.to_string())?;
        for &c in pool.words() {
            if c.0 & mask != r || c.weight() != w {
                return Err(format!("slice {r} holds {:#x}", c.0));
            }
            if !seen.insert(c.0) {
                return Err(format!("{:#x} in two slices", c.0));
            }
        }
    }
    let total = cwbc::binomial(n, w);
    if seen.len() as u128 != total {
        return Err(format!("slices hold {} words, C({n},{w}) = {total}", seen.len()));
    }
    Ok(())
}

fn all_methods(seed: u64) -> Vec<(&'static str, Vec<Codeword>)> {
    let tabu_p = params(13, 5, 6, 18);
    let greedy_p = params(17, 7, 6, usize::MAX);
    let one = Budget::iterations(1);
    let tabu = run_tabu(&tabu_p, &TabuConfig::default(), &mut RngStream::new(seed), Budget::iterations(2_000_000))
        .unwrap()
        .code()
        .map(|c| c.words.clone())
        .unwrap_or_default();
    let rsdh = run_rsdh(&greedy_p, &mut RngStream::new(seed), Budget::iterations(2), MEM).unwrap();
    let srsdh = run_srsdh(&greedy_p, &SliceConfig::new(1, 5), &mut RngStream::new(seed), one, MEM).unwrap();
    let msrsdh = run_msrsdh(&greedy_p, &SliceConfig::new(2, 3), &mut RngStream::new(seed), one, MEM).unwrap();
    vec![
        ("tabu", tabu),
        ("rsdh", rsdh.code.words),
        ("srsdh", srsdh.code.words),
        ("msrsdh", msrsdh.code.words),
    ]
}

/// Two runs per method with the same seed give the same word sequence.
pub fn methods_deterministic(seeds: u64) -> Result<(), String> {
    for seed in 0..seeds {
        let a = all_methods(seed);
        let b = all_methods(seed);
        for ((name, x), (_, y)) in a.iter().zip(&b) {
            if x.is_empty() {
                return Err(format!("{name} seed {seed}: no code"));
            }
            if x != y {
                return Err(format!("{name} seed {seed}: outputs differ"));
            }
        }
    }
    Ok(())
}

/// The last trajectory value of each run equals `dot(SV, histogram)` of the
/// returned code, and the CSV writer emits one row per word.
pub fn trajectory_matches_dot(runs: u64) -> Result<(), String> {
    for seed in 0..runs {
        let (n, w, d) = [(17, 7, 6), (14, 6, 6), (20, 8, 6), (15, 7, 6)][seed as usize % 4];
        let p = params(n, w, d, usize::MAX);
        let out = run_rsdh(&p, &mut RngStream::new(seed), Budget::iterations(1), MEM).map_err(|e| e.to_string())?;
        let traj = objective_trajectory(&out.code.words, &out.sv).map_err(|e| e.to_string())?;
        let dot = out.sv.dot(&pairwise_histogram(&out.code.words)).map_err(|e| e.to_string())?;
        let last = traj.last().map(|&(_, v)| v);
        if last != Some(dot) {
            return Err(format!("seed {seed}: trajectory ends at {last:?}, dot is {dot}"));
        }
        let mut csv = Vec::new();
        write_trajectory_csv(&mut csv, &traj).unwrap();
        if csv.iter().filter(|&&b| b == b'\n').count() != out.code.len() + 1 {
            return Err(format!("seed {seed}: CSV row count"));
        }
    }
    Ok(())
}

/// Fresh random code for tests that need arbitrary words.
pub fn random_code(p: &Params, seed: u64) -> Vec<Codeword> {
    random_distinct_words(p, &mut RngStream::new(seed)).unwrap()
}
