//! Exhaustive backtracking search for a family with given parameters.
//!
//! Sets are filled in index order, elements ascending within each set. The
//! identity is forced into `D_1`, and `D_1` must be lexicographically least
//! among its translates that contain the identity. Consecutive sets with
//! equal `(k, lambda)` have ascending least elements. Group automorphisms
//! are not used.
//!
//! A node is one element insertion. Counts are reproduced exactly whatever
//! the number of workers: the tree is split at a frontier, every subtree is
//! searched independently and the results are folded back in preorder.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::DiffFamily;
use crate::feasibility::{rule_out, FeasibilityStatus, ParamTuple, RuleOutStage};
use crate::group::{abelian_groups_of_order, AbelianGroup};

pub const SEARCH_V_BOUND: u64 = 4096;
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

pub const SYMMETRY_DECLARATION: &str = "translation: identity in D_1, D_1 least among its translates containing the identity; \
     permutation: sets with equal (k, lambda) ordered by least element; automorphisms: none";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    Exhausted,
    BudgetExceeded,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub group: Vec<u64>,
    pub status: SearchStatus,
    pub family: Option<DiffFamily>,
    pub nodes_explored: u64,
    #[serde(with = "secs")]
    pub elapsed: Duration,
    pub symmetry: String,
}

mod secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let x = f64::deserialize(d)?;
        Duration::try_from_secs_f64(x).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Node limit; exceeding it reports `budget_exceeded` with `budget + 1` nodes.
    pub budget: u64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, workers: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    Budget,
    Cancelled,
}

const FREE: u8 = u8::MAX;

#[derive(Clone)]
struct State {
    v: usize,
    diff: Arc<Vec<u32>>,
    ks: Vec<usize>,
    lambdas: Vec<u32>,
    /// `same_as_prev[i]`: set `i` has the same `(k, lambda)` as set `i - 1`.
    same_as_prev: Vec<bool>,
    total: usize,
    sets: Vec<Vec<u32>>,
    owner: Vec<u8>,
    counts: Vec<Vec<u32>>,
    filled: usize,
}

struct Ctx<'a> {
    nodes: u64,
    budget: u64,
    index: usize,
    found_min: &'a AtomicUsize,
}

impl State {
    fn new(g: &AbelianGroup, ks: &[u64], lambdas: &[u64]) -> Self {
        let v = g.len();
        let mut diff = vec![0u32; v * v];
        for a in 0..v {
            for b in 0..v {
                diff[a * v + b] = g.sub_rank(a, b) as u32;
            }
        }
        let m = ks.len();
        State {
            v,
            diff: Arc::new(diff),
            ks: ks.iter().map(|&k| k as usize).collect(),
            lambdas: lambdas.iter().map(|&l| l as u32).collect(),
            same_as_prev: (0..m).map(|i| i > 0 && ks[i] == ks[i - 1] && lambdas[i] == lambdas[i - 1]).collect(),
            total: ks.iter().sum::<u64>() as usize,
            sets: ks.iter().map(|&k| Vec::with_capacity(k as usize)).collect(),
            owner: vec![FREE; v],
            counts: vec![vec![0; v]; m],
            filled: 0,
        }
    }

    fn d(&self, a: u32, b: u32) -> usize {
        self.diff[a as usize * self.v + b as usize] as usize
    }

    /// Set being filled and the candidate range for its next element.
    fn next_slot(&self) -> (usize, u32, u32) {
        let i = self.sets.iter().zip(&self.ks).position(|(s, &k)| s.len() < k).expect("not complete");
        let set = &self.sets[i];
        let need = (self.ks[i] - set.len()) as u32;
        let hi = self.v as u32 - need + 1;
        let lo = match set.last() {
            Some(&x) => x + 1,
            None if i == 0 => return (0, 0, 1),
            None if self.same_as_prev[i] => self.sets[i - 1][0] + 1,
            None => 0,
        };
        (i, lo, hi)
    }

    /// Inserts `e` into set `i`; false when a count exceeds its lambda or the
    /// completed `D_1` is not canonical. The insertion is applied either way.
    fn push(&mut self, i: usize, e: u32) -> bool {
        let mut ok = true;
        for j in 0..self.sets.len() {
            if j == i {
                continue;
            }
            for idx in 0..self.sets[j].len() {
                let b = self.sets[j][idx];
                let (x, y) = (self.d(e, b), self.d(b, e));
                self.counts[i][x] += 1;
                self.counts[j][y] += 1;
                ok &= self.counts[i][x] <= self.lambdas[i] && self.counts[j][y] <= self.lambdas[j];
            }
        }
        self.sets[i].push(e);
        self.owner[e as usize] = i as u8;
        self.filled += 1;
        ok && !(i == 0 && self.sets[0].len() == self.ks[0] && !self.d1_canonical())
    }

    fn pop(&mut self, i: usize, e: u32) {
        self.sets[i].pop();
        self.owner[e as usize] = FREE;
        self.filled -= 1;
        for j in 0..self.sets.len() {
            if j == i {
                continue;
            }
            for idx in 0..self.sets[j].len() {
                let b = self.sets[j][idx];
                let (x, y) = (self.d(e, b), self.d(b, e));
                self.counts[i][x] -= 1;
                self.counts[j][y] -= 1;
            }
        }
    }

    fn d1_canonical(&self) -> bool {
        let d1 = &self.sets[0];
        let mut t = Vec::with_capacity(d1.len());
        d1[1..].iter().all(|&shift| {
            t.clear();
            t.extend(d1.iter().map(|&x| self.d(x, shift) as u32));
            t.sort_unstable();
            t.as_slice() >= d1.as_slice()
        })
    }

    fn dfs(&mut self, ctx: &mut Ctx) -> Step {
        if self.filled == self.total {
            return Step::Found;
        }
        let (i, lo, hi) = self.next_slot();
        for e in lo..hi {
            if self.owner[e as usize] != FREE {
                continue;
            }
            ctx.nodes += 1;
            if ctx.nodes > ctx.budget {
                return Step::Budget;
            }
            if ctx.nodes & 0xfff == 0 && ctx.found_min.load(Ordering::Relaxed) < ctx.index {
                return Step::Cancelled;
            }
            if self.push(i, e) {
                match self.dfs(ctx) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            self.pop(i, e);
        }
        Step::Exhausted
    }

    /// Collects the states after `depth` insertions (or complete states), in
    /// preorder, with the number of nodes visited up to and including each.
    fn expand(&mut self, depth: usize, nodes: &mut u64, out: &mut Vec<(State, u64)>) {
        if self.filled == depth || self.filled == self.total {
            out.push((self.clone(), *nodes));
            return;
        }
        let (i, lo, hi) = self.next_slot();
        for e in lo..hi {
            if self.owner[e as usize] != FREE {
                continue;
            }
            *nodes += 1;
            if self.push(i, e) {
                self.expand(depth, nodes, out);
            }
            self.pop(i, e);
        }
    }
}

fn check_params(g: &AbelianGroup, t: &ParamTuple) -> Result<Vec<u64>> {
    if g.order() != t.v {
        return Err(Error::InvalidArgument(format!("group of order {} for v = {}", g.order(), t.v)));
    }
    if t.v > SEARCH_V_BOUND {
        return Err(Error::TooLarge { what: "search group", size: t.v, bound: SEARCH_V_BOUND });
    }
    if t.m() > FREE as usize {
        return Err(Error::InvalidArgument(format!("at most {} sets supported", FREE)));
    }
    let verdict = rule_out(t);
    let early = [RuleOutStage::Capacity.as_str(), RuleOutStage::Counting.as_str()];
    if verdict.status == FeasibilityStatus::RuledOut && early.contains(&verdict.reason.as_str()) {
        return Err(Error::RejectedBeforeSearch(format!("{t} fails the {} check", verdict.reason)));
    }
    Ok(t.resolved_lambdas().expect("counting passed"))
}

/// Searches `g` for a family with parameters `t`.
pub fn exhaustive_search(g: &AbelianGroup, t: &ParamTuple, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let start = Instant::now();
    let lambdas = check_params(g, t)?;
    let root = State::new(g, &t.ks, &lambdas);
    let run = || search_state(root, cfg);
    let (status, nodes, state) = if cfg.workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run)
    };
    let family = match &state {
        Some(s) => {
            let sets: Vec<Vec<usize>> = s.sets.iter().map(|x| x.iter().map(|&r| r as usize).collect()).collect();
            Some(DiffFamily::from_ranks(g.clone(), &sets, lambdas)?)
        }
        None => None,
    };
    Ok(SearchOutcome {
        group: g.factors().to_vec(),
        status,
        family,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
        symmetry: SYMMETRY_DECLARATION.to_string(),
    })
}

fn search_state(mut root: State, cfg: &SearchConfig) -> (SearchStatus, u64, Option<State>) {
    let threads = rayon::current_num_threads();
    let unused = AtomicUsize::new(usize::MAX);
    if threads <= 1 {
        let mut ctx = Ctx { nodes: 0, budget: cfg.budget, index: 0, found_min: &unused };
        return match root.dfs(&mut ctx) {
            Step::Found => (SearchStatus::Found, ctx.nodes, Some(root)),
            Step::Exhausted => (SearchStatus::Exhausted, ctx.nodes, None),
            _ => (SearchStatus::BudgetExceeded, cfg.budget.saturating_add(1), None),
        };
    }

    let mut frontier = Vec::new();
    let mut shallow = 0;
    for depth in 1..=root.total.min(6) {
        frontier.clear();
        shallow = 0;
        root.expand(depth, &mut shallow, &mut frontier);
        if frontier.len() >= 8 * threads {
            break;
        }
    }

    let marks: Vec<u64> = frontier.iter().map(|(_, before)| *before).collect();
    let found_min = AtomicUsize::new(usize::MAX);
    let results: Vec<(Step, u64, Option<State>)> = frontier
        .into_par_iter()
        .enumerate()
        .map(|(index, (mut s, _))| {
            if found_min.load(Ordering::Relaxed) < index {
                return (Step::Cancelled, 0, None);
            }
            let mut ctx = Ctx { nodes: 0, budget: cfg.budget, index, found_min: &found_min };
            let step = s.dfs(&mut ctx);
            if step == Step::Found {
                found_min.fetch_min(index, Ordering::Relaxed);
                return (step, ctx.nodes, Some(s));
            }
            (step, ctx.nodes, None)
        })
        .collect();

    let mut deep = 0u64;
    let mut outcome = (SearchStatus::Exhausted, shallow, None);
    for ((step, n, state), before) in results.into_iter().zip(marks) {
        match step {
            Step::Exhausted => deep = deep.saturating_add(n),
            Step::Found => {
                outcome = (SearchStatus::Found, before + deep + n, state);
                break;
            }
            Step::Budget | Step::Cancelled => {
                outcome = (SearchStatus::BudgetExceeded, u64::MAX, None);
                break;
            }
        }
    }
    if outcome.0 == SearchStatus::Exhausted {
        outcome.1 = shallow.saturating_add(deep);
    }
    if outcome.1 > cfg.budget {
        return (SearchStatus::BudgetExceeded, cfg.budget.saturating_add(1), None);
    }
    outcome
}

/// Runs [`exhaustive_search`] in every abelian group of order `t.v`.
pub fn search_all_groups(t: &ParamTuple, cfg: &SearchConfig) -> Result<Vec<SearchOutcome>> {
    abelian_groups_of_order(t.v)?.iter().map(|g| exhaustive_search(g, t, cfg)).collect()
}

/// `exhausted` only when every group exhausted; `found` if any group found.
pub fn aggregate_status(outcomes: &[SearchOutcome]) -> SearchStatus {
    if outcomes.iter().any(|o| o.status == SearchStatus::Found) {
        SearchStatus::Found
    } else if outcomes.iter().all(|o| o.status == SearchStatus::Exhausted) {
        SearchStatus::Exhausted
    } else {
        SearchStatus::BudgetExceeded
    }
}
