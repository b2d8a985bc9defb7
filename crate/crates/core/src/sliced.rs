//! Sliced RSDH variants.
//!
//! A slice is the set of weight-w words whose `b` lowest-order bits (the last
//! `b` symbols of a printed vector) equal a pattern `r`. S-RSDH builds a
//! maximal code inside one random slice, then takes the best of `t` greedy
//! completions over the full word set. MS-RSDH visits all `2^b` slices in a
//! random order; the first slice gets one greedy trial and every later slice
//! gets `t`, each trial extending the best code so far.
//!
//! A completion trial seeds each surviving candidate with
//! `Σ sv_init[HD(C, x)]` over the fixed prefix and then runs a greedy build
//! with an independent second scoring vector.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::budget::Budget;
use crate::error::{CwcError, Result};
use crate::rng::RngStream;
use crate::rsdh::{finish, greedy_build, rand_vec, CandidatePool, GreedyOutcome, ScoringVector};
use crate::word::{binomial, check_capacity, enumerate_weight_w, hamming_distance, Codeword, Params, WeightWords};

pub const DEFAULT_TRIALS: u32 = 1000;
pub const MAX_SLICE_BITS: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceConfig {
    pub b: u32,
    pub t: u32,
}

impl SliceConfig {
    pub fn new(b: u32, t: u32) -> Self {
        Self { b, t }
    }

    pub fn validate(&self, params: &Params) -> Result<()> {
        if self.b == 0 || self.b > MAX_SLICE_BITS {
            return Err(CwcError::Validation(format!(
                "slice bits b = {} must be in 1..={MAX_SLICE_BITS}",
                self.b
            )));
        }
        if self.b >= params.w || self.b >= params.n - params.w {
            return Err(CwcError::Validation(format!(
                "slice bits b = {} must be below w = {} and n - w = {}",
                self.b,
                params.w,
                params.n - params.w
            )));
        }
        if self.t == 0 {
            return Err(CwcError::Validation("completion trials t must be at least 1".into()));
        }
        Ok(())
    }
}

/// Weight-w words whose low `b` bits equal `r`, ascending, scores zero.
pub fn slice_candidates(params: &Params, b: u32, r: u64, memory_limit: u64) -> Result<CandidatePool> {
    let empty = || CwcError::EmptySlice {
        n: params.n,
        w: params.w,
        bits: b,
        pattern: r,
    };
    if b > params.n || (b < 64 && r >> b != 0) {
        return Err(empty());
    }
    let ones = r.count_ones();
    if ones > params.w || params.w - ones > params.n - b {
        return Err(empty());
    }
    let rest_n = params.n - b;
    let rest_w = params.w - ones;
    let count = binomial(rest_n, rest_w);
    if count == 0 {
        return Err(empty());
    }
    check_capacity(count, memory_limit)?;
    let words = WeightWords::new(rest_n, rest_w)
        .map(|x| Codeword((x.0 << b) | r))
        .collect();
    Ok(CandidatePool::new(words))
}

/// Drops candidates within distance `< d` of `code` and sets each survivor's
/// score to `Σ sv_init[HD(C, x)]` over `x ∈ code`.
pub fn seed_scores(code: &[Codeword], pool: CandidatePool, sv_init: &ScoringVector, d: u32) -> CandidatePool {
    let table = sv_init.lookup_table();
    let mut words = Vec::new();
    let mut scores = Vec::new();
    'cand: for &c in pool.words() {
        let mut score = 0i64;
        for &x in code {
            let hd = hamming_distance(c, x);
            if hd < d {
                continue 'cand;
            }
            score += table[hd as usize];
        }
        words.push(c);
        scores.push(score);
    }
    CandidatePool::with_scores(words, scores)
}

/// Candidates compatible with a fixed prefix, ready to be seeded for any
/// number of trials.
///
/// When memory allows, each survivor's histogram of distances to the prefix is
/// stored so a trial's seeding is a short dot product. Otherwise seeding
/// recomputes distances per trial. Both give identical scores.
enum SeedCache<'a> {
    Histograms {
        words: Vec<Codeword>,
        counts: Vec<u32>,
        slots: usize,
        d: u32,
    },
    Direct {
        words: Vec<Codeword>,
        prefix: &'a [Codeword],
    },
}

impl<'a> SeedCache<'a> {
    fn new(prefix: &'a [Codeword], candidates: &[Codeword], d: u32, w: u32, memory_limit: u64) -> Self {
        let slots = (w - d / 2 + 1) as usize;
        let mut words = Vec::new();
        let mut counts = Vec::new();
        let mut local = vec![0u32; slots];
        let budget = memory_limit / 4;
        let mut use_hist = true;
        'cand: for &c in candidates {
            local.fill(0);
            for &x in prefix {
                let hd = hamming_distance(c, x);
                if hd < d {
                    continue 'cand;
                }
                local[((hd - d) / 2) as usize] += 1;
            }
            words.push(c);
            if use_hist {
                counts.extend_from_slice(&local);
                if (counts.len() as u64) > budget {
                    use_hist = false;
                    counts = Vec::new();
                }
            }
        }
        if use_hist {
            SeedCache::Histograms {
                words,
                counts,
                slots,
                d,
            }
        } else {
            SeedCache::Direct { words, prefix }
        }
    }

    fn pool(&self, sv_init: &ScoringVector) -> CandidatePool {
        match self {
            SeedCache::Histograms {
                words,
                counts,
                slots,
                d,
            } => {
                debug_assert_eq!(sv_init.d(), *d);
                let values = sv_init.values();
                let scores = counts
                    .chunks_exact(*slots)
                    .map(|h| h.iter().zip(values).map(|(&c, &v)| c as i64 * v as i64).sum())
                    .collect();
                CandidatePool::with_scores(words.clone(), scores)
            }
            SeedCache::Direct { words, prefix } => {
                let table = sv_init.lookup_table();
                let scores = words
                    .iter()
                    .map(|&c| prefix.iter().map(|&x| table[hamming_distance(c, x) as usize]).sum())
                    .collect();
                CandidatePool::with_scores(words.clone(), scores)
            }
        }
    }
}

/// Best code found so far along with the scoring vector of its last greedy pass.
struct Best {
    words: Vec<Codeword>,
    sv: Option<ScoringVector>,
    slice_prefix: usize,
}

impl Best {
    fn empty() -> Self {
        Self {
            words: Vec::new(),
            sv: None,
            slice_prefix: 0,
        }
    }

    fn offer(&mut self, words: &[Codeword], sv: &ScoringVector, slice_prefix: usize) -> bool {
        if self.sv.is_none() || words.len() > self.words.len() {
            self.words = words.to_vec();
            self.sv = Some(sv.clone());
            self.slice_prefix = slice_prefix;
            true
        } else {
            false
        }
    }
}

/// One completion trial: seed from `cache`, greedy-build on top of `prefix`.
fn completion(prefix: &[Codeword], cache: &SeedCache<'_>, params: &Params, rng: &mut RngStream) -> (Vec<Codeword>, ScoringVector) {
    let sv_init = rand_vec(params.d, params.w, rng);
    let mut pool = cache.pool(&sv_init);
    let sv_build = rand_vec(params.d, params.w, rng);
    let mut code = prefix.to_vec();
    greedy_build(&mut code, &mut pool, &sv_build, params.d, rng);
    (code, sv_build)
}

/// S-RSDH: random slice, maximal greedy code in it, best of `t` full-space
/// completions; repeated until the best code reaches `s` or the budget ends.
///
/// The returned outcome's `slice_prefix` is the number of leading words that
/// came from the first slice.
pub fn run_srsdh(params: &Params, cfg: &SliceConfig, rng: &mut RngStream, budget: Budget, memory_limit: u64) -> Result<GreedyOutcome> {
    cfg.validate(params)?;
    let clock = budget.start();
    let all = enumerate_weight_w(params.n, params.w, memory_limit)?;
    let mut best = Best::empty();
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        let r = rng.random_range(0..1u64 << cfg.b);
        let mut slice = slice_candidates(params, cfg.b, r, memory_limit)?;
        let sv_slice = rand_vec(params.d, params.w, rng);
        let mut first = Vec::new();
        greedy_build(&mut first, &mut slice, &sv_slice, params.d, rng);
        best.offer(&first, &sv_slice, first.len());

        let cache = SeedCache::new(&first, &all, params.d, params.w, memory_limit);
        for _ in 0..cfg.t {
            let (code, sv) = completion(&first, &cache, params, rng);
            best.offer(&code, &sv, first.len());
            if clock.out_of_time() {
                break;
            }
        }
        if best.words.len() >= params.s || clock.expired(iterations) {
            let slice_prefix = best.slice_prefix;
            let mut out = finish(params, best.words, best.sv.expect("a round ran"), iterations, clock.elapsed());
            out.slice_prefix = Some(slice_prefix);
            return Ok(out);
        }
    }
}

/// MS-RSDH: all `2^b` slices in random order, first with one trial, the rest
/// with `t`, each trial extending the best code so far.
pub fn run_msrsdh(params: &Params, cfg: &SliceConfig, rng: &mut RngStream, budget: Budget, memory_limit: u64) -> Result<GreedyOutcome> {
    cfg.validate(params)?;
    check_capacity(params.word_count(), memory_limit)?;
    let clock = budget.start();
    let slices: Vec<CandidatePool> = (0..1u64 << cfg.b)
        .map(|r| slice_candidates(params, cfg.b, r, memory_limit))
        .collect::<Result<_>>()?;
    let mut overall = Best::empty();
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        let mut order: Vec<usize> = (0..slices.len()).collect();
        order.shuffle(rng);
        let mut round = Best::empty();
        let mut first_len = 0;
        let mut trials = 1;
        'slices: for (k, &r) in order.iter().enumerate() {
            let prefix = round.words.clone();
            let cache = SeedCache::new(&prefix, slices[r].words(), params.d, params.w, memory_limit);
            for _ in 0..trials {
                let (code, sv) = completion(&prefix, &cache, params, rng);
                let prefix_len = if k == 0 { code.len() } else { first_len };
                round.offer(&code, &sv, prefix_len);
                if clock.out_of_time() {
                    break 'slices;
                }
            }
            if k == 0 {
                first_len = round.words.len();
            }
            trials = cfg.t;
        }
        if let Some(sv) = &round.sv {
            overall.offer(&round.words, sv, first_len);
        }
        if overall.words.len() >= params.s || clock.expired(iterations) {
            let slice_prefix = overall.slice_prefix;
            let mut out = finish(params, overall.words, overall.sv.expect("a round ran"), iterations, clock.elapsed());
            out.slice_prefix = Some(slice_prefix);
            return Ok(out);
        }
    }
}
