//! Bit-swap tabu search.
//!
//! The search keeps exactly `s` words and minimizes the penalty
//! `Σ (d - HD(x, y))` over pairs closer than `d`. A move clears one 1-bit and
//! sets one 0-bit of a single word, so word weights never change. Each step
//! picks a random conflicting pair and tries every swap on either word that
//! touches positions the two words agree on, takes the best non-tabu move
//! (tabu moves are allowed when they beat the best penalty since the last
//! restart), and forbids the reverse swap for a random tenure.
//!
//! Pair distances, the conflict set and the penalty are maintained
//! incrementally; `TabuState::assert_consistent` checks them against a
//! from-scratch recomputation.

use std::collections::HashSet;
use std::time::Duration;

use rand::seq::index::sample;
use rand::Rng;

use crate::budget::Budget;
use crate::code::Code;
use crate::error::{CwcError, Result};
use crate::rng::RngStream;
use crate::verify::verify;
use crate::word::{enumerate_weight_w, Codeword, Params, DEFAULT_MEMORY_LIMIT};

const NO_SLOT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TabuConfig {
    pub t_min: u32,
    pub t_max: u32,
    /// Restart after this many steps without lowering the best penalty.
    pub max_no_improve_restart: u64,
    /// Progress callback interval in steps; 0 disables progress reports.
    pub report_every: u64,
    /// Recompute bookkeeping from scratch every this many steps and panic on
    /// mismatch; 0 disables the check.
    pub check_every: u64,
}

impl Default for TabuConfig {
    fn default() -> Self {
        Self {
            t_min: 5,
            t_max: 15,
            max_no_improve_restart: 1_000_000,
            report_every: 0,
            check_every: 0,
        }
    }
}

impl TabuConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_min == 0 || self.t_min > self.t_max {
            return Err(CwcError::Validation(format!(
                "tabu tenure needs 0 < t_min <= t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.max_no_improve_restart == 0 {
            return Err(CwcError::Validation("max_no_improve_restart must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Moved,
    NoValidMove,
}

/// A swap on word `word`: clear bit `clear`, set bit `set`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub word: usize,
    pub clear: u32,
    pub set: u32,
}

#[derive(Clone, Debug)]
pub struct TabuState {
    params: Params,
    words: Vec<u64>,
    /// `s × s` symmetric distance matrix.
    dist: Vec<u8>,
    /// Conflicting pairs `(i, j)`, `i < j`, swap-removal order.
    conflicts: Vec<(u32, u32)>,
    /// Slot of `(i, j)` in `conflicts`, at `i * s + j`.
    slot: Vec<u32>,
    penalty: u64,
    min_penalty: u64,
    /// Expiry step per `(word, clear, set)`; a move is tabu while `step < expiry`.
    tabu: Vec<u64>,
    step: u64,
    last_improvement: u64,
    scratch: Scratch,
}

#[derive(Clone, Debug, Default)]
struct Scratch {
    /// Bit `k` of `columns[i * chunks + k / 64]` is bit `i` of the k-th nearby word.
    columns: Vec<u64>,
    /// Nearby words at distance `<= d`.
    within: Vec<u64>,
    /// Nearby words at distance `< d`.
    below: Vec<u64>,
}

#[inline]
fn pair_penalty(d: u32, hd: u32) -> u64 {
    d.saturating_sub(hd) as u64
}

impl TabuState {
    /// State over an explicit word list (duplicates allowed).
    pub fn from_words(params: Params, words: &[Codeword]) -> Self {
        let s = words.len();
        let n = params.n as usize;
        let mut state = Self {
            params,
            words: words.iter().map(|w| w.0).collect(),
            dist: vec![0; s * s],
            conflicts: Vec::new(),
            slot: vec![NO_SLOT; s * s],
            penalty: 0,
            min_penalty: 0,
            tabu: vec![0; s * n * n],
            step: 0,
            last_improvement: 0,
            scratch: Scratch::default(),
        };
        state.rebuild();
        state
    }

    /// `s` distinct uniformly random weight-`w` words.
    pub fn init_random(params: Params, rng: &mut RngStream) -> Result<Self> {
        let words = random_distinct_words(&params, rng)?;
        Ok(Self::from_words(params, &words))
    }

    /// Replaces the code with fresh random words and clears tabu memory.
    /// The global step counter keeps running.
    pub fn reinitialize(&mut self, rng: &mut RngStream) -> Result<()> {
        let words = random_distinct_words(&self.params, rng)?;
        for (dst, w) in self.words.iter_mut().zip(&words) {
            *dst = w.0;
        }
        self.tabu.fill(0);
        self.rebuild();
        Ok(())
    }

    fn rebuild(&mut self) {
        let s = self.words.len();
        let d = self.params.d;
        self.conflicts.clear();
        self.slot.fill(NO_SLOT);
        self.penalty = 0;
        for i in 0..s {
            self.dist[i * s + i] = 0;
            for j in i + 1..s {
                let hd = (self.words[i] ^ self.words[j]).count_ones();
                self.dist[i * s + j] = hd as u8;
                self.dist[j * s + i] = hd as u8;
                if hd < d {
                    self.slot[i * s + j] = self.conflicts.len() as u32;
                    self.conflicts.push((i as u32, j as u32));
                    self.penalty += pair_penalty(d, hd);
                }
            }
        }
        self.min_penalty = self.penalty;
        self.last_improvement = self.step;
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn words(&self) -> Vec<Codeword> {
        self.words.iter().map(|&w| Codeword(w)).collect()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn penalty(&self) -> u64 {
        self.penalty
    }

    /// Lowest penalty since the last (re)initialization.
    pub fn min_penalty(&self) -> u64 {
        self.min_penalty
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn steps_since_improvement(&self) -> u64 {
        self.step - self.last_improvement
    }

    /// Conflicting pairs `(i, j)` with `i < j`, in sorted order.
    pub fn conflict_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self
            .conflicts
            .iter()
            .map(|&(i, j)| (i as usize, j as usize))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn distance(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.words.len() + j] as u32
    }

    #[inline]
    fn tabu_index(&self, m: Move) -> usize {
        let n = self.params.n as usize;
        (m.word * n + m.clear as usize) * n + m.set as usize
    }

    pub fn is_tabu(&self, m: Move) -> bool {
        self.step < self.tabu[self.tabu_index(m)]
    }

    /// Forbids `m` until global step `expiry`.
    pub fn forbid(&mut self, m: Move, expiry: u64) {
        let idx = self.tabu_index(m);
        self.tabu[idx] = expiry;
    }

    fn check_move(&self, m: Move) -> Result<()> {
        let n = self.params.n;
        let ok = m.word < self.words.len()
            && m.clear < n
            && m.set < n
            && (self.words[m.word] >> m.clear) & 1 == 1
            && (self.words[m.word] >> m.set) & 1 == 0;
        if ok {
            Ok(())
        } else {
            Err(CwcError::InvalidMove {
                word: m.word,
                clear: m.clear,
                set: m.set,
            })
        }
    }

    /// Total penalty after applying `m`, without mutating the state. O(s).
    pub fn evaluate_move(&self, m: Move) -> Result<u64> {
        self.check_move(m)?;
        let s = self.words.len();
        let d = self.params.d;
        let c = m.word;
        let mut total = self.penalty as i64;
        for y in 0..s {
            if y == c {
                continue;
            }
            let hd = self.dist[c * s + y] as i32;
            let yp = ((self.words[y] >> m.clear) & 1) as i32;
            let yq = ((self.words[y] >> m.set) & 1) as i32;
            let new_hd = (hd + 2 * yp - 2 * yq) as u32;
            total += pair_penalty(d, new_hd) as i64 - pair_penalty(d, hd as u32) as i64;
        }
        Ok(total as u64)
    }

    /// Applies `m` and updates distances, conflicts and penalty.
    pub fn apply_move(&mut self, m: Move) -> Result<()> {
        self.check_move(m)?;
        let s = self.words.len();
        let d = self.params.d;
        let c = m.word;
        let new_word = self.words[c] & !(1u64 << m.clear) | (1u64 << m.set);
        self.words[c] = new_word;
        for y in 0..s {
            if y == c {
                continue;
            }
            let old = self.dist[c * s + y] as u32;
            let new = (new_word ^ self.words[y]).count_ones();
            if old == new {
                continue;
            }
            self.dist[c * s + y] = new as u8;
            self.dist[y * s + c] = new as u8;
            self.penalty = self.penalty + pair_penalty(d, new) - pair_penalty(d, old);
            let (i, j) = if c < y { (c, y) } else { (y, c) };
            match (old < d, new < d) {
                (false, true) => {
                    self.slot[i * s + j] = self.conflicts.len() as u32;
                    self.conflicts.push((i as u32, j as u32));
                }
                (true, false) => self.remove_conflict(i, j),
                _ => {}
            }
        }
        Ok(())
    }

    fn remove_conflict(&mut self, i: usize, j: usize) {
        let s = self.words.len();
        let k = self.slot[i * s + j] as usize;
        debug_assert_ne!(k as u32, NO_SLOT);
        self.slot[i * s + j] = NO_SLOT;
        self.conflicts.swap_remove(k);
        if let Some(&(a, b)) = self.conflicts.get(k) {
            self.slot[a as usize * s + b as usize] = k as u32;
        }
    }

    /// Loads the words near `c` (distance `<= d`) into the bit-sliced scratch
    /// tables. Returns the number of 64-bit chunks per column.
    fn load_neighbourhood(&mut self, c: usize) -> usize {
        let s = self.words.len();
        let n = self.params.n as usize;
        let d = self.params.d;
        let near: Vec<usize> = (0..s)
            .filter(|&y| y != c && (self.dist[c * s + y] as u32) <= d)
            .collect();
        let chunks = near.len().div_ceil(64).max(1);
        let sc = &mut self.scratch;
        sc.columns.clear();
        sc.columns.resize(n * chunks, 0);
        sc.within.clear();
        sc.within.resize(chunks, 0);
        sc.below.clear();
        sc.below.resize(chunks, 0);
        for (k, &y) in near.iter().enumerate() {
            let (chunk, bit) = (k / 64, 1u64 << (k % 64));
            sc.within[chunk] |= bit;
            if (self.dist[c * s + y] as u32) < d {
                sc.below[chunk] |= bit;
            }
            let mut word = self.words[y];
            while word != 0 {
                let i = word.trailing_zeros() as usize;
                sc.columns[i * chunks + chunk] |= bit;
                word &= word - 1;
            }
        }
        chunks
    }

    /// Penalty change of clearing `p` and setting `q` on the word loaded by
    /// `load_neighbourhood`.
    ///
    /// A neighbour with bit p set and bit q clear moves 2 further away (gains
    /// 2 if it was conflicting); one with p clear and q set moves 2 closer
    /// (costs 2 if it ends below d, i.e. started at distance <= d).
    #[inline]
    fn neighbourhood_delta(&self, chunks: usize, p: usize, q: usize) -> i64 {
        let sc = &self.scratch;
        let cp = &sc.columns[p * chunks..(p + 1) * chunks];
        let cq = &sc.columns[q * chunks..(q + 1) * chunks];
        let mut closer = 0u32;
        let mut apart = 0u32;
        for k in 0..chunks {
            closer += (sc.within[k] & !cp[k] & cq[k]).count_ones();
            apart += (sc.below[k] & cp[k] & !cq[k]).count_ones();
        }
        2 * closer as i64 - 2 * apart as i64
    }

    /// One tabu step. Panics if the penalty is already zero.
    pub fn step(&mut self, cfg: &TabuConfig, rng: &mut RngStream) -> StepOutcome {
        assert!(self.penalty > 0, "tabu step called on a conflict-free code");
        let n = self.params.n;
        let full = if n == 64 { !0 } else { (1u64 << n) - 1 };
        let (x, y) = self.conflicts[rng.random_range(0..self.conflicts.len())];
        let mut best = u64::MAX;
        let mut chosen = None;
        let mut ties = 0u32;
        for (c, o) in [(x as usize, y as usize), (y as usize, x as usize)] {
            let wc = self.words[c];
            let wo = self.words[o];
            let ones = wc & wo;
            let zeros = !(wc | wo) & full;
            if ones == 0 || zeros == 0 {
                continue;
            }
            let chunks = self.load_neighbourhood(c);
            let mut pm = ones;
            while pm != 0 {
                let p = pm.trailing_zeros();
                pm &= pm - 1;
                let mut qm = zeros;
                while qm != 0 {
                    let q = qm.trailing_zeros();
                    qm &= qm - 1;
                    let delta = self.neighbourhood_delta(chunks, p as usize, q as usize);
                    let p_move = (self.penalty as i64 + delta) as u64;
                    let m = Move {
                        word: c,
                        clear: p,
                        set: q,
                    };
                    if self.is_tabu(m) && p_move >= self.min_penalty {
                        continue;
                    }
                    if p_move < best {
                        best = p_move;
                        chosen = Some(m);
                        ties = 1;
                    } else if p_move == best {
                        ties += 1;
                        if rng.random_range(0..ties) == 0 {
                            chosen = Some(m);
                        }
                    }
                }
            }
        }
        let Some(m) = chosen else {
            self.step += 1;
            return StepOutcome::NoValidMove;
        };
        self.apply_move(m).expect("enumerated swaps are valid");
        debug_assert_eq!(self.penalty, best);
        self.step += 1;
        let tenure = rng.random_range(cfg.t_min..=cfg.t_max) as u64;
        self.forbid(
            Move {
                word: m.word,
                clear: m.set,
                set: m.clear,
            },
            self.step + tenure,
        );
        if best < self.min_penalty {
            self.min_penalty = best;
            self.last_improvement = self.step;
        }
        StepOutcome::Moved
    }

    /// Panics unless the incremental bookkeeping matches a from-scratch recomputation.
    pub fn assert_consistent(&self) {
        let (pairs, penalty) = crate::oracle::recompute_penalty(&self.words(), self.params.d);
        assert_eq!(self.penalty, penalty, "penalty drifted");
        assert_eq!(self.conflict_pairs(), pairs, "conflict set drifted");
        let s = self.words.len();
        for i in 0..s {
            for j in 0..s {
                let hd = (self.words[i] ^ self.words[j]).count_ones();
                assert_eq!(self.dist[i * s + j] as u32, hd, "distance cache drifted");
            }
        }
        assert!(self.min_penalty <= self.penalty, "minP above current penalty");
    }
}

/// `s` distinct uniformly random weight-`w` words.
pub fn random_distinct_words(params: &Params, rng: &mut RngStream) -> Result<Vec<Codeword>> {
    let available = params.word_count();
    if available < params.s as u128 {
        return Err(CwcError::Infeasible {
            n: params.n,
            w: params.w,
            available,
            requested: params.s,
        });
    }
    if available <= 4 * params.s as u128 {
        let all = enumerate_weight_w(params.n, params.w, DEFAULT_MEMORY_LIMIT)?;
        return Ok(sample(rng, all.len(), params.s)
            .into_iter()
            .map(|i| all[i])
            .collect());
    }
    let mut seen = HashSet::with_capacity(params.s);
    let mut out = Vec::with_capacity(params.s);
    while out.len() < params.s {
        let word = Codeword::from_positions(
            sample(rng, params.n as usize, params.w as usize)
                .into_iter()
                .map(|i| i as u32),
        );
        if seen.insert(word) {
            out.push(word);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TabuStats {
    pub steps: u64,
    pub restarts: u64,
    /// Lowest penalty reached over the whole run.
    pub best_penalty: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TabuProgress {
    pub step: u64,
    pub penalty: u64,
    pub min_penalty: u64,
    pub restarts: u64,
}

#[derive(Clone, Debug)]
pub enum TabuOutcome {
    Solved { code: Code, stats: TabuStats },
    Timeout { stats: TabuStats },
}

impl TabuOutcome {
    pub fn code(&self) -> Option<&Code> {
        match self {
            TabuOutcome::Solved { code, .. } => Some(code),
            TabuOutcome::Timeout { .. } => None,
        }
    }

    pub fn stats(&self) -> &TabuStats {
        match self {
            TabuOutcome::Solved { stats, .. } | TabuOutcome::Timeout { stats } => stats,
        }
    }
}

pub fn run_tabu(params: &Params, cfg: &TabuConfig, rng: &mut RngStream, budget: Budget) -> Result<TabuOutcome> {
    run_tabu_observed(params, cfg, rng, budget, |_| {})
}

/// [`run_tabu`] with a progress callback fired every `cfg.report_every` steps.
pub fn run_tabu_observed<F>(
    params: &Params,
    cfg: &TabuConfig,
    rng: &mut RngStream,
    budget: Budget,
    mut progress: F,
) -> Result<TabuOutcome>
where
    F: FnMut(&TabuProgress),
{
    cfg.validate()?;
    let clock = budget.start();
    let mut state = TabuState::init_random(*params, rng)?;
    let mut stats = TabuStats {
        best_penalty: state.penalty(),
        ..Default::default()
    };
    loop {
        if state.penalty() == 0 {
            let code = Code::new(*params, state.words());
            assert!(verify(&code.words, params).valid, "tabu produced an invalid code");
            stats.steps = state.step_count();
            stats.elapsed = clock.elapsed();
            return Ok(TabuOutcome::Solved { code, stats });
        }
        let steps = state.step_count();
        if clock.out_of_iterations(steps) || (steps % 64 == 0 && clock.out_of_time()) {
            stats.steps = steps;
            stats.elapsed = clock.elapsed();
            return Ok(TabuOutcome::Timeout { stats });
        }
        let outcome = state.step(cfg, rng);
        stats.best_penalty = stats.best_penalty.min(state.penalty());
        if cfg.check_every > 0 && state.step_count() % cfg.check_every == 0 {
            state.assert_consistent();
        }
        if cfg.report_every > 0 && state.step_count() % cfg.report_every == 0 {
            progress(&TabuProgress {
                step: state.step_count(),
                penalty: state.penalty(),
                min_penalty: state.min_penalty(),
                restarts: stats.restarts,
            });
        }
        if outcome == StepOutcome::NoValidMove
            || state.steps_since_improvement() >= cfg.max_no_improve_restart
        {
            state.reinitialize(rng)?;
            stats.restarts += 1;
            stats.best_penalty = stats.best_penalty.min(state.penalty());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::recompute_penalty;

    fn cw(s: &str) -> Codeword {
        Codeword::from_bit_str(s).unwrap()
    }

    #[test]
    fn init_all_five_words() {
        let p = Params::new(5, 4, 2, 5).unwrap();
        let st = TabuState::init_random(p, &mut RngStream::new(1)).unwrap();
        assert_eq!(st.penalty(), 0);
        let mut w = st.words();
        w.sort();
        assert_eq!(w.len(), 5);
        w.dedup();
        assert_eq!(w.len(), 5);
    }

    #[test]
    fn init_single_word() {
        let p = Params::new(10, 4, 4, 1).unwrap();
        assert_eq!(TabuState::init_random(p, &mut RngStream::new(3)).unwrap().penalty(), 0);
    }

    #[test]
    fn init_matches_recompute() {
        let p = Params::new(10, 4, 4, 30).unwrap();
        for seed in 0..20 {
            let st = TabuState::init_random(p, &mut RngStream::new(seed)).unwrap();
            let (pairs, pen) = recompute_penalty(&st.words(), 4);
            assert_eq!(st.penalty(), pen);
            assert_eq!(st.conflict_pairs(), pairs);
            assert_eq!(st.min_penalty(), pen);
            st.assert_consistent();
        }
    }

    #[test]
    fn infeasible_when_too_few_words() {
        let p = Params::new(5, 4, 2, 6).unwrap();
        assert!(matches!(
            TabuState::init_random(p, &mut RngStream::new(0)),
            Err(CwcError::Infeasible { available: 5, .. })
        ));
    }

    #[test]
    fn evaluate_single_word_and_hand_example() {
        let p = Params::new(10, 4, 4, 1).unwrap();
        let st = TabuState::from_words(p, &[Codeword(0b1111)]);
        assert_eq!(st.evaluate_move(Move { word: 0, clear: 0, set: 9 }).unwrap(), 0);

        // {1100, 1100}; clearing bit 1 (column 1) and setting bit 2 yields 1010.
        let p = Params::new(4, 2, 4, 2).unwrap();
        let st = TabuState::from_words(p, &[cw("1100"), cw("1100")]);
        assert_eq!(st.penalty(), 4);
        let m = Move { word: 0, clear: 1, set: 2 };
        assert_eq!(st.evaluate_move(m).unwrap(), 2);
        assert!(st.evaluate_move(Move { word: 0, clear: 2, set: 1 }).is_err());
    }

    #[test]
    fn two_word_conflict_resolved_in_one_step() {
        // HD 4 < d = 6; a swap on common positions makes it 6.
        let p = Params::new(8, 3, 6, 2).unwrap();
        let words = [cw("11100000"), cw("10011000")];
        let mut st = TabuState::from_words(p, &words);
        assert_eq!(st.penalty(), 2);
        // Brute force: some valid swap reaches zero penalty.
        let mut zero_exists = false;
        for c in 0..2 {
            for clear in 0..8 {
                for set in 0..8 {
                    if let Ok(pm) = st.evaluate_move(Move { word: c, clear, set }) {
                        zero_exists |= pm == 0;
                    }
                }
            }
        }
        assert!(zero_exists);
        assert_eq!(st.step(&TabuConfig::default(), &mut RngStream::new(5)), StepOutcome::Moved);
        assert_eq!(st.penalty(), 0);
    }

    #[test]
    fn all_tabu_means_no_valid_move() {
        let p = Params::new(8, 3, 6, 2).unwrap();
        let mut st = TabuState::from_words(p, &[cw("11100000"), cw("10011000")]);
        for word in 0..2 {
            for clear in 0..8 {
                for set in 0..8 {
                    st.forbid(Move { word, clear, set }, 1_000);
                }
            }
        }
        // No penalty can undercut minP = 0, so aspiration never applies.
        st.min_penalty = 0;
        assert_eq!(
            st.step(&TabuConfig::default(), &mut RngStream::new(1)),
            StepOutcome::NoValidMove
        );
    }

    #[test]
    fn aspiration_overrides_tabu() {
        let p = Params::new(8, 3, 6, 2).unwrap();
        let mut st = TabuState::from_words(p, &[cw("11100000"), cw("10011000")]);
        for word in 0..2 {
            for clear in 0..8 {
                for set in 0..8 {
                    st.forbid(Move { word, clear, set }, 1_000);
                }
            }
        }
        assert_eq!(st.step(&TabuConfig::default(), &mut RngStream::new(1)), StepOutcome::Moved);
        assert_eq!(st.penalty(), 0);
    }

    #[test]
    fn tabu_expires_exactly() {
        let p = Params::new(8, 3, 6, 2).unwrap();
        let mut st = TabuState::from_words(p, &[cw("11100000"), cw("10011000")]);
        let m = Move { word: 0, clear: 0, set: 7 };
        st.forbid(m, 2);
        assert!(st.is_tabu(m));
        st.step = 1;
        assert!(st.is_tabu(m));
        st.step = 2;
        assert!(!st.is_tabu(m));
    }

    #[test]
    #[should_panic(expected = "conflict-free")]
    fn step_on_valid_code_panics() {
        let p = Params::new(10, 4, 4, 1).unwrap();
        let mut st = TabuState::from_words(p, &[Codeword(0b1111)]);
        st.step(&TabuConfig::default(), &mut RngStream::new(0));
    }

    #[test]
    fn steps_keep_bookkeeping_exact() {
        let p = Params::new(12, 5, 6, 25).unwrap();
        let cfg = TabuConfig::default();
        let mut rng = RngStream::new(17);
        let mut st = TabuState::init_random(p, &mut rng).unwrap();
        for _ in 0..200 {
            if st.penalty() == 0 {
                break;
            }
            let before = st.clone();
            st.step(&cfg, &mut rng);
            st.assert_consistent();
            assert!(st.words().iter().all(|w| w.weight() == 5));
            assert!(st.step_count() == before.step_count() + 1);
        }
    }

    #[test]
    fn run_small_instances() {
        let cfg = TabuConfig::default();
        let p = Params::new(10, 4, 4, 1).unwrap();
        let out = run_tabu(&p, &cfg, &mut RngStream::new(0), Budget::unlimited()).unwrap();
        assert_eq!(out.code().unwrap().len(), 1);
        assert_eq!(out.stats().steps, 0);

        let p = Params::new(10, 4, 4, 25).unwrap();
        let out = run_tabu(&p, &cfg, &mut RngStream::new(2), Budget::seconds(30.0)).unwrap();
        let code = out.code().expect("25 words of (10,4,4) are easy");
        assert!(verify(&code.words, &p).valid);
    }

    #[test]
    fn timeout_reports_stats() {
        // A(10,4,4) = 30 so 40 words is impossible.
        let p = Params::new(10, 4, 4, 40).unwrap();
        let out = run_tabu(&p, &TabuConfig::default(), &mut RngStream::new(2), Budget::iterations(500)).unwrap();
        match out {
            TabuOutcome::Timeout { stats } => {
                assert_eq!(stats.steps, 500);
                assert!(stats.best_penalty > 0);
            }
            _ => panic!("expected timeout"),
        }
    }

    #[test]
    fn restarts_after_stagnation() {
        let p = Params::new(10, 4, 4, 40).unwrap();
        let cfg = TabuConfig {
            max_no_improve_restart: 50,
            ..Default::default()
        };
        let out = run_tabu(&p, &cfg, &mut RngStream::new(2), Budget::iterations(2_000)).unwrap();
        assert!(out.stats().restarts >= 1);
    }

    #[test]
    fn fixed_seed_reproducible() {
        let p = Params::new(12, 5, 6, 20).unwrap();
        let cfg = TabuConfig::default();
        let a = run_tabu(&p, &cfg, &mut RngStream::new(9), Budget::iterations(100_000)).unwrap();
        let b = run_tabu(&p, &cfg, &mut RngStream::new(9), Budget::iterations(100_000)).unwrap();
        assert_eq!(a.code(), b.code());
        assert_eq!(a.stats().steps, b.stats().steps);
    }

    #[test]
    fn config_validation() {
        assert!(TabuConfig { t_min: 0, ..Default::default() }.validate().is_err());
        assert!(TabuConfig { t_min: 9, t_max: 8, ..Default::default() }.validate().is_err());
        assert!(TabuConfig::default().validate().is_ok());
    }
}
