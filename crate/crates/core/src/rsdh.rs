//! Random-score distance histogram (RSDH) construction.
//!
//! A scoring vector assigns an integer to every even distance `d, d+2, …, 2w`,
//! with the entry for `d` maximal. Starting from a pool of candidate words,
//! the greedy build repeatedly appends the candidate with the highest
//! accumulated score (ties broken uniformly at random), drops candidates that
//! are now too close, and adds `SV[HD(C, M)]` to every survivor `C`. A
//! candidate's score is therefore the dot product of the scoring vector with
//! its histogram of distances to the code built so far.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::Duration;

use rand::Rng;

use crate::budget::Budget;
use crate::code::Code;
use crate::error::{CwcError, Result};
use crate::rng::RngStream;
use crate::verify::check;
use crate::word::{enumerate_weight_w, hamming_distance, Codeword, DistanceHistogram, Params};

/// Resampling attempts for the entry at `d` before the whole vector is redrawn.
const RESAMPLE_CAP: u32 = 1_000_000;

/// Scores for the distances `d, d+2, …, 2w`; the score at `d` is maximal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoringVector {
    d: u32,
    w: u32,
    values: Vec<i32>,
}

impl ScoringVector {
    /// `values[k]` scores distance `d + 2k`; there must be `w - d/2 + 1` of them
    /// and the first must be at least every other.
    pub fn new(d: u32, w: u32, values: Vec<i32>) -> Result<Self> {
        if !d.is_multiple_of(2) || d == 0 || d > 2 * w {
            return Err(CwcError::Validation(format!(
                "scoring vector needs even 0 < d <= 2w, got d={d} w={w}"
            )));
        }
        let expected = (w - d / 2 + 1) as usize;
        if values.len() != expected {
            return Err(CwcError::Validation(format!(
                "scoring vector for d={d} w={w} needs {expected} entries, got {}",
                values.len()
            )));
        }
        if values.iter().any(|&v| v > values[0]) {
            return Err(CwcError::Validation(
                "the score at distance d must be the maximum".into(),
            ));
        }
        Ok(Self { d, w, values })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn get(&self, distance: u32) -> Option<i32> {
        if distance < self.d || distance > 2 * self.w || !distance.is_multiple_of(2) {
            return None;
        }
        Some(self.values[((distance - self.d) / 2) as usize])
    }

    /// `(distance, score)` pairs in increasing distance.
    pub fn entries(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.d + 2 * k as u32, v))
    }

    /// Score indexed directly by distance; slots outside `d..=2w` hold 0.
    pub fn lookup_table(&self) -> [i64; 65] {
        let mut t = [0i64; 65];
        for (x, v) in self.entries() {
            t[x as usize] = v as i64;
        }
        t
    }

    /// `Σ SV[x] · hist[x]`. Fails if the histogram has a distance the vector
    /// does not score (i.e. below `d`).
    pub fn dot(&self, hist: &DistanceHistogram) -> Result<i64> {
        let mut total = 0i64;
        for (x, count) in hist.iter() {
            let v = self.get(x).ok_or_else(|| {
                CwcError::Validation(format!("distance {x} has no score (d={}, w={})", self.d, self.w))
            })?;
            total += v as i64 * count as i64;
        }
        Ok(total)
    }

    /// One `distance score` pair per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (x, v) in self.entries() {
            writeln!(s, "{x} {v}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str, w: u32) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || CwcError::Parse {
                line: idx + 1,
                message: format!("expected `distance score`, got {line:?}"),
            };
            let mut it = line.split_whitespace();
            let x: u32 = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            let v: i32 = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            if it.next().is_some() {
                return Err(bad());
            }
            pairs.push((x, v));
        }
        let Some(&(d, _)) = pairs.first() else {
            return Err(CwcError::Parse {
                line: 1,
                message: "empty scoring vector".into(),
            });
        };
        for (k, &(x, _)) in pairs.iter().enumerate() {
            if x != d + 2 * k as u32 {
                return Err(CwcError::Validation(format!(
                    "scoring vector distances must run d, d+2, ...; entry {} is {x}",
                    k + 1
                )));
            }
        }
        Self::new(d, w, pairs.into_iter().map(|(_, v)| v).collect())
    }
}

/// Random scoring vector: entries uniform on `[-2^31, 2^31)`, then the entry
/// at `d` is redrawn uniformly from `[0, 2^31)` until no entry exceeds it.
pub fn rand_vec(d: u32, w: u32, rng: &mut RngStream) -> ScoringVector {
    assert!(d.is_multiple_of(2) && d >= 2 && d <= 2 * w, "rand_vec needs even 2 <= d <= 2w");
    let len = (w - d / 2 + 1) as usize;
    loop {
        let mut values: Vec<i32> = (0..len).map(|_| rng.random::<i32>()).collect();
        let top = values[1..].iter().copied().max().unwrap_or(i32::MIN);
        let mut attempts = 0;
        while values[0] < top && attempts < RESAMPLE_CAP {
            values[0] = rng.random_range(0..=i32::MAX);
            attempts += 1;
        }
        if values[0] >= top {
            return ScoringVector { d, w, values };
        }
    }
}

/// Candidate words with their accumulated scores, kept compact by
/// swap-with-last removal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidatePool {
    words: Vec<Codeword>,
    scores: Vec<i64>,
}

impl CandidatePool {
    /// Pool over `words` with all scores zero.
    pub fn new(words: Vec<Codeword>) -> Self {
        let scores = vec![0; words.len()];
        Self { words, scores }
    }

    pub fn with_scores(words: Vec<Codeword>, scores: Vec<i64>) -> Self {
        assert_eq!(words.len(), scores.len());
        Self { words, scores }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn scores(&self) -> &[i64] {
        &self.scores
    }

    #[inline]
    fn swap_remove(&mut self, k: usize) {
        self.words.swap_remove(k);
        self.scores.swap_remove(k);
    }

    /// Index of a maximal-score candidate, uniform among ties.
    fn argmax(&self, rng: &mut RngStream) -> Option<usize> {
        let mut best = i64::MIN;
        let mut pick = None;
        let mut ties = 0u64;
        for (k, &sc) in self.scores.iter().enumerate() {
            if sc > best {
                best = sc;
                pick = Some(k);
                ties = 1;
            } else if sc == best {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    pick = Some(k);
                }
            }
        }
        pick
    }
}

/// Greedily extends `code` from `pool` until the pool is empty.
///
/// Every live candidate must already be at distance `>= d` from `code`.
/// Candidates leave the pool when they come within `d` of an appended word;
/// survivors gain `sv[HD]`. Removal and the argmax for the next pick share a
/// single pass over the pool.
pub fn greedy_build(code: &mut Vec<Codeword>, pool: &mut CandidatePool, sv: &ScoringVector, d: u32, rng: &mut RngStream) {
    let table = sv.lookup_table();
    let mut pick = pool.argmax(rng);
    while let Some(i) = pick {
        let chosen = pool.words[i];
        code.push(chosen);
        pick = None;
        let mut best = i64::MIN;
        let mut ties = 0u64;
        let mut k = 0;
        while k < pool.words.len() {
            let hd = hamming_distance(pool.words[k], chosen);
            if hd < d {
                pool.swap_remove(k);
                continue;
            }
            let sc = pool.scores[k] + table[hd as usize];
            pool.scores[k] = sc;
            if sc > best {
                best = sc;
                pick = Some(k);
                ties = 1;
            } else if sc == best {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    pick = Some(k);
                }
            }
            k += 1;
        }
    }
}

/// Result of a greedy-family run.
#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    /// Largest code built, in construction order.
    pub code: Code,
    /// Scoring vector of the greedy pass that produced the final words.
    pub sv: ScoringVector,
    /// Whether `code` reached the target size `s`.
    pub reached: bool,
    /// Outer construction rounds performed.
    pub iterations: u64,
    /// For the sliced variants, how many leading words came from the first slice.
    pub slice_prefix: Option<usize>,
    pub elapsed: Duration,
}

/// Repeats {fresh scoring vector, full candidate pool, greedy build} until a
/// code of size `>= s` appears or the budget runs out.
pub fn run_rsdh(params: &Params, rng: &mut RngStream, budget: Budget, memory_limit: u64) -> Result<GreedyOutcome> {
    run_rsdh_inner(params, None, rng, budget, memory_limit)
}

/// Like [`run_rsdh`] but every round reuses `sv`; only the tie-breaking varies.
pub fn rerun_with_sv(params: &Params, sv: &ScoringVector, rng: &mut RngStream, budget: Budget, memory_limit: u64) -> Result<GreedyOutcome> {
    if sv.d() != params.d || sv.w() != params.w {
        return Err(CwcError::Validation(format!(
            "scoring vector is for d={} w={}, instance has d={} w={}",
            sv.d(),
            sv.w(),
            params.d,
            params.w
        )));
    }
    run_rsdh_inner(params, Some(sv), rng, budget, memory_limit)
}

fn run_rsdh_inner(
    params: &Params,
    fixed_sv: Option<&ScoringVector>,
    rng: &mut RngStream,
    budget: Budget,
    memory_limit: u64,
) -> Result<GreedyOutcome> {
    let clock = budget.start();
    let all = enumerate_weight_w(params.n, params.w, memory_limit)?;
    let mut best: Option<(Vec<Codeword>, ScoringVector)> = None;
    let mut iterations = 0u64;
    loop {
        iterations += 1;
        let sv = match fixed_sv {
            Some(sv) => sv.clone(),
            None => rand_vec(params.d, params.w, rng),
        };
        let mut pool = CandidatePool::new(all.clone());
        let mut code = Vec::new();
        greedy_build(&mut code, &mut pool, &sv, params.d, rng);
        if best.as_ref().is_none_or(|(b, _)| code.len() > b.len()) {
            best = Some((code, sv));
        }
        let best_len = best.as_ref().map_or(0, |(b, _)| b.len());
        if best_len >= params.s || clock.expired(iterations) {
            let (words, sv) = best.expect("at least one round ran");
            return Ok(finish(params, words, sv, iterations, clock.elapsed()));
        }
    }
}

pub(crate) fn finish(params: &Params, words: Vec<Codeword>, sv: ScoringVector, iterations: u64, elapsed: Duration) -> GreedyOutcome {
    assert!(
        check(&words, params.n, params.w, params.d, None).valid,
        "greedy construction produced an invalid code"
    );
    GreedyOutcome {
        reached: words.len() >= params.s,
        code: Code::new(*params, words),
        sv,
        iterations,
        slice_prefix: None,
        elapsed,
    }
}

/// `(k, objective of the first k words)` for `k = 1..=len`, the objective
/// being `Σ SV[HD]` over pairs.
pub fn objective_trajectory(words: &[Codeword], sv: &ScoringVector) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(words.len());
    let mut total = 0i64;
    for (k, &a) in words.iter().enumerate() {
        for (j, &b) in words[..k].iter().enumerate() {
            let hd = hamming_distance(a, b);
            match sv.get(hd) {
                Some(v) => total += v as i64,
                None if hd < sv.d() => {
                    return Err(CwcError::DistanceBelowD {
                        i: j,
                        j: k,
                        distance: hd,
                        d: sv.d(),
                    })
                }
                None => {
                    return Err(CwcError::Validation(format!(
                        "words {j} and {k} at distance {hd} outside the scored range"
                    )))
                }
            }
        }
        out.push((k + 1, total));
    }
    Ok(out)
}

/// CSV with header `k,objective`.
pub fn write_trajectory_csv<W: Write>(mut out: W, trajectory: &[(usize, i64)]) -> io::Result<()> {
    writeln!(out, "k,objective")?;
    for (k, v) in trajectory {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}
