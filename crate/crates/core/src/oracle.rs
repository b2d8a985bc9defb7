//! Brute-force and exact references.
//!
//! These back the tests of the incremental structures and give ground truth
//! on small instances. None of this code shares logic with the heuristics.
//!
//! [`exact_max_code`] finds a maximum clique in the compatibility graph
//! (weight-w words, edges between words at distance `>= d`) with a bitset
//! branch and bound using greedy colouring bounds. Coordinate permutations act
//! transitively on weight-w words and on the pairs at each fixed distance, so
//! the search fixes the first word and enumerates only one second word per
//! distance class.

use std::collections::HashMap;

use crate::error::{CwcError, Result};
use crate::word::{binomial, hamming_distance, Codeword, Params, WeightWords};

/// Largest graph the exact search will build.
pub const MAX_EXACT_VERTICES: u128 = 20_000;

/// From-scratch conflict set (pairs `i < j` closer than `d`, sorted) and
/// penalty `Σ (d - HD)` over those pairs.
pub fn recompute_penalty(words: &[Codeword], d: u32) -> (Vec<(usize, usize)>, u64) {
    let mut pairs = Vec::new();
    let mut penalty = 0u64;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let hd = hamming_distance(words[i], words[j]);
            if hd < d {
                pairs.push((i, j));
                penalty += (d - hd) as u64;
            }
        }
    }
    (pairs, penalty)
}

/// Some weight-`w` word at distance `>= d` from every word of `words`, if one exists.
pub fn find_extension(words: &[Codeword], n: u32, w: u32, d: u32) -> Option<Codeword> {
    WeightWords::new(n, w).find(|&c| words.iter().all(|&x| hamming_distance(c, x) >= d))
}

pub fn is_maximal(words: &[Codeword], n: u32, w: u32, d: u32) -> bool {
    find_extension(words, n, w, d).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub size: usize,
    pub code: Vec<Codeword>,
    /// Whether `size` is proven maximum, either by finishing the search or by
    /// meeting the supplied upper bound. When `false`, `size` is a lower bound.
    pub optimal: bool,
    pub nodes: u64,
}

/// Maximum code size `A(n, d, w)` with a witness, by exhaustive clique search.
pub fn exact_max_code(params: &Params, node_limit: u64) -> Result<ExactResult> {
    exact_max_code_from(params, node_limit, &[], None)
}

/// [`exact_max_code`] starting from a known valid code `incumbent`, stopping as
/// soon as the best code reaches `upper_bound`.
pub fn exact_max_code_from(
    params: &Params,
    node_limit: u64,
    incumbent: &[Codeword],
    upper_bound: Option<usize>,
) -> Result<ExactResult> {
    let count = binomial(params.n, params.w);
    if count > MAX_EXACT_VERTICES {
        return Err(CwcError::CapacityExceeded {
            count,
            bytes_per_candidate: 0,
            limit: MAX_EXACT_VERTICES as u64,
        });
    }
    let d = params.d;
    if !incumbent.is_empty() {
        let report = crate::verify::check(incumbent, params.n, params.w, d, None);
        if !report.valid {
            return Err(CwcError::Validation(format!("incumbent is not a valid code: {report}")));
        }
    }
    let words: Vec<Codeword> = WeightWords::new(params.n, params.w).collect();
    let first = words[0];
    let mut search = Search {
        best: if incumbent.is_empty() { vec![first] } else { incumbent.to_vec() },
        goal: upper_bound.unwrap_or(usize::MAX),
        nodes: 0,
        node_limit,
        aborted: false,
    };

    // One representative second word per distance class >= d.
    let mut reps: Vec<Codeword> = Vec::new();
    for &u in &words[1..] {
        let du = hamming_distance(first, u);
        if du >= d && !reps.iter().any(|&r| hamming_distance(first, r) == du) {
            reps.push(u);
        }
    }
    reps.sort_by_key(|&r| std::cmp::Reverse(hamming_distance(first, r)));

    for rep in reps {
        if search.stopped() {
            break;
        }
        if search.best.len() < 2 {
            search.best = vec![first, rep];
        }
        let cand: Vec<Codeword> = words
            .iter()
            .copied()
            .filter(|&c| hamming_distance(c, first) >= d && hamming_distance(c, rep) >= d)
            .collect();
        search.solve(&cand, &[first, rep], d);
    }

    let size = search.best.len();
    Ok(ExactResult {
        size,
        code: search.best,
        optimal: !search.aborted || size >= search.goal,
        nodes: search.nodes,
    })
}

/// Recursive Johnson bound `A(n,d,w) <= floor(n/w * A(n-1,d,w-1))`, also
/// applied to the complement weight. Sub-values come from the exact search
/// when it finishes within `node_limit`, otherwise from the bound itself.
pub fn johnson_upper_bound(n: u32, d: u32, w: u32, node_limit: u64) -> usize {
    JohnsonBound::new(node_limit).bound(n, d, w)
}

/// The recursive Johnson bound with a table of exact values that grows as
/// optima get proven, so later bounds build on them.
#[derive(Debug)]
pub struct JohnsonBound {
    node_limit: u64,
    /// Keyed by `(n, d, min(w, n - w))`.
    exact: HashMap<(u32, u32, u32), usize>,
    memo: HashMap<(u32, u32, u32), usize>,
}

impl JohnsonBound {
    pub fn new(node_limit: u64) -> Self {
        Self {
            node_limit,
            exact: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    /// Records a proven `A(n,d,w)`.
    pub fn record_exact(&mut self, n: u32, d: u32, w: u32, size: usize) {
        self.exact.insert((n, d, w.min(n - w)), size);
        self.memo.clear();
    }

    pub fn bound(&mut self, n: u32, d: u32, w: u32) -> usize {
        let w = w.min(n - w);
        if d > 2 * w {
            return 1;
        }
        if d == 2 * w {
            return (n / w) as usize;
        }
        if let Some(&v) = self.exact.get(&(n, d, w)).or_else(|| self.memo.get(&(n, d, w))) {
            return v;
        }
        let down = self.sub(n - 1, d, w - 1) * n as usize / w as usize;
        let bound = if n - 1 > w {
            down.min(self.sub(n - 1, d, w) * n as usize / (n - w) as usize)
        } else {
            down
        };
        self.memo.insert((n, d, w), bound);
        bound
    }

    fn sub(&mut self, n: u32, d: u32, w: u32) -> usize {
        let key = (n, d, w.min(n - w));
        if let Some(&v) = self.exact.get(&key) {
            return v;
        }
        if let Ok(p) = Params::new(n, w, d, 1) {
            if let Ok(r) = exact_max_code(&p, self.node_limit) {
                if r.optimal {
                    self.exact.insert(key, r.size);
                    return r.size;
                }
            }
        }
        self.bound(n, d, w)
    }
}

struct Search {
    best: Vec<Codeword>,
    /// Stop once `best` reaches this size.
    goal: usize,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

type Bits = Vec<u64>;

fn bit_test(b: &[u64], i: usize) -> bool {
    (b[i / 64] >> (i % 64)) & 1 == 1
}

fn bit_clear(b: &mut [u64], i: usize) {
    b[i / 64] &= !(1u64 << (i % 64));
}

fn bits_any(b: &[u64]) -> bool {
    b.iter().any(|&x| x != 0)
}

fn bits_first(b: &[u64]) -> Option<usize> {
    b.iter()
        .enumerate()
        .find(|(_, &x)| x != 0)
        .map(|(k, &x)| k * 64 + x.trailing_zeros() as usize)
}

impl Search {
    fn stopped(&self) -> bool {
        self.aborted || self.best.len() >= self.goal
    }

    /// Max clique among `cand` (all compatible with `fixed`), updating `best`.
    fn solve(&mut self, cand: &[Codeword], fixed: &[Codeword], d: u32) {
        if cand.is_empty() {
            return;
        }
        let order = degeneracy_order(cand, d);
        let verts: Vec<Codeword> = order.iter().map(|&i| cand[i]).collect();
        let m = verts.len();
        let chunks = m.div_ceil(64);
        let mut adj: Vec<Bits> = vec![vec![0; chunks]; m];
        for i in 0..m {
            for j in i + 1..m {
                if hamming_distance(verts[i], verts[j]) >= d {
                    adj[i][j / 64] |= 1 << (j % 64);
                    adj[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        let mut all = vec![0u64; chunks];
        for i in 0..m {
            all[i / 64] |= 1 << (i % 64);
        }
        let mut clique: Vec<usize> = Vec::new();
        self.expand(&verts, &adj, fixed, &mut clique, all);
    }

    fn expand(&mut self, verts: &[Codeword], adj: &[Bits], fixed: &[Codeword], clique: &mut Vec<usize>, mut p: Bits) {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        let (order, colors) = colour_sort(adj, &p);
        for k in (0..order.len()).rev() {
            if fixed.len() + clique.len() + colors[k] <= self.best.len() {
                return;
            }
            let v = order[k];
            clique.push(v);
            let next: Bits = p.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
            if bits_any(&next) {
                self.expand(verts, adj, fixed, clique, next);
            } else if fixed.len() + clique.len() > self.best.len() {
                self.best = fixed.iter().copied().chain(clique.iter().map(|&i| verts[i])).collect();
            }
            clique.pop();
            if self.stopped() {
                return;
            }
            bit_clear(&mut p, v);
        }
    }
}

/// Greedy sequential colouring of `p`; returns vertices in colour order with
/// the colour (1-based) of each, non-decreasing.
fn colour_sort(adj: &[Bits], p: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = p.to_vec();
    let mut order = Vec::new();
    let mut colours = Vec::new();
    let mut colour = 0;
    while bits_any(&uncoloured) {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = bits_first(&q) {
            bit_clear(&mut uncoloured, v);
            bit_clear(&mut q, v);
            for (qk, ak) in q.iter_mut().zip(&adj[v]) {
                *qk &= !ak;
            }
            order.push(v);
            colours.push(colour);
        }
    }
    debug_assert!(order.iter().all(|&v| bit_test(p, v)));
    (order, colours)
}

/// Indices of `cand` ordered with the highest-core vertices first.
fn degeneracy_order(cand: &[Codeword], d: u32) -> Vec<usize> {
    let m = cand.len();
    let mut degree: Vec<usize> = (0..m)
        .map(|i| (0..m).filter(|&j| j != i && hamming_distance(cand[i], cand[j]) >= d).count())
        .collect();
    let mut removed = vec![false; m];
    let mut peel = Vec::with_capacity(m);
    for _ in 0..m {
        let v = (0..m)
            .filter(|&i| !removed[i])
            .min_by_key(|&i| degree[i])
            .expect("vertices remain");
        removed[v] = true;
        peel.push(v);
        for j in 0..m {
            if !removed[j] && hamming_distance(cand[v], cand[j]) >= d {
                degree[j] -= 1;
            }
        }
    }
    peel.reverse();
    peel
}
