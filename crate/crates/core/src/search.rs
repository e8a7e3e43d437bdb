//! Seeded backtracking search for (v,k,1) difference families.
//!
//! Blocks are built one at a time. Every block contains the identity, and
//! its second element is the first element (in the current candidate
//! order) that is not yet a difference. Some block must cover that
//! element, and translating it so the covering pair starts at the identity
//! puts the pair `{0, d}` into it. Every other element of that block comes
//! later in the candidate order, since anything earlier is already a
//! difference of some placed block. Each family is therefore visited once
//! per candidate order, up to translating its blocks.
//!
//! With `candidate_shuffle` off there is one exhaustive pass in ascending
//! index order. With it on, each restart draws a fresh candidate order
//! from the seeded RNG and explores at most `restart_node_limit` nodes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::time::Duration;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::family::{verify_lambda1, DifferenceCensus, DifferenceFamily};
use crate::group::GroupSpec;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_MAX_RESTARTS: u64 = 10_000;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const DEFAULT_RESTART_NODE_LIMIT: u64 = 100_000;

/// How often (in candidate tests) the budget is consulted.
const BUDGET_CHECK_INTERVAL: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("block size must be at least 2, got {0}")]
    BlockSizeTooSmall(usize),
    #[error("at least one block is required")]
    NoBlocks,
    #[error("divisibility fails: b*k*(k-1) = {lhs} but v-1 = {rhs}")]
    Divisibility { lhs: u64, rhs: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub spec: GroupSpec,
    pub k: usize,
    pub blocks: usize,
    pub seed: u64,
    pub max_restarts: u64,
    /// `None` disables the wall-clock limit.
    pub time_limit: Option<Duration>,
    pub candidate_shuffle: bool,
    /// Node budget of a single shuffled restart.
    pub restart_node_limit: u64,
}

impl SearchConfig {
    pub fn new(spec: GroupSpec, k: usize, blocks: usize) -> Result<Self, SearchError> {
        let cfg = Self {
            spec,
            k,
            blocks,
            seed: DEFAULT_SEED,
            max_restarts: DEFAULT_MAX_RESTARTS,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            candidate_shuffle: true,
            restart_node_limit: DEFAULT_RESTART_NODE_LIMIT,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.k < 2 {
            return Err(SearchError::BlockSizeTooSmall(self.k));
        }
        if self.blocks == 0 {
            return Err(SearchError::NoBlocks);
        }
        let (b, k) = (self.blocks as u64, self.k as u64);
        let lhs = b * k * (k - 1);
        let rhs = self.spec.order() as u64 - 1;
        if lhs != rhs {
            return Err(SearchError::Divisibility { lhs, rhs });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Found,
    RestartsExhausted,
    TimeLimit,
    /// Stopped by the budget's cancellation flag (another worker won).
    Cancelled,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Found => "found",
            Termination::RestartsExhausted => "restarts-exhausted",
            Termination::TimeLimit => "time-limit",
            Termination::Cancelled => "cancelled",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<DifferenceFamily>,
    pub restarts_used: u64,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
    pub terminated_by: Termination,
}

impl SearchOutcome {
    /// `key=value` statistics. Wall-clock time is left out so that equal
    /// configurations give identical text.
    pub fn key_values(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "found={}", self.found.is_some());
        let _ = writeln!(out, "terminated_by={}", self.terminated_by);
        let _ = writeln!(out, "restarts_used={}", self.restarts_used);
        let _ = writeln!(out, "nodes_expanded={}", self.nodes_expanded);
        out
    }
}

/// Clock and cancellation source for a search.
pub trait Budget {
    fn elapsed(&self) -> Duration;

    fn cancelled(&self) -> bool {
        false
    }
}

/// A budget without a clock: time limits never fire.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Budget for NoClock {
    fn elapsed(&self) -> Duration {
        Duration::ZERO
    }
}

impl<B: Budget + ?Sized> Budget for &B {
    fn elapsed(&self) -> Duration {
        (**self).elapsed()
    }

    fn cancelled(&self) -> bool {
        (**self).cancelled()
    }
}

/// Pluggable parts of the search: candidate ordering and extra pruning.
pub trait Strategy {
    /// Order in which non-identity elements are tried during `restart`.
    fn candidate_order(&mut self, spec: &GroupSpec, restart: u64) -> Vec<u32>;

    /// Extra filter consulted before the difference test.
    fn admit(&self, _state: &PartialFamily, _candidate: u32) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AscendingOrder;

impl Strategy for AscendingOrder {
    fn candidate_order(&mut self, spec: &GroupSpec, _restart: u64) -> Vec<u32> {
        (1..spec.order()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ShuffledOrder {
    rng: ChaCha8Rng,
}

impl ShuffledOrder {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Strategy for ShuffledOrder {
    fn candidate_order(&mut self, spec: &GroupSpec, _restart: u64) -> Vec<u32> {
        let mut order: Vec<u32> = (1..spec.order()).collect();
        order.shuffle(&mut self.rng);
        order
    }
}

/// Blocks under construction plus the set of differences they use.
///
/// The last block is the one being extended.
#[derive(Debug, Clone)]
pub struct PartialFamily {
    spec: GroupSpec,
    used: Vec<u64>,
    blocks: Vec<Vec<u32>>,
    scratch: Vec<u32>,
}

impl PartialFamily {
    pub fn new(spec: GroupSpec) -> Self {
        let words = (spec.order() as usize).div_ceil(64);
        Self {
            spec,
            used: alloc::vec![0; words],
            blocks: Vec::new(),
            scratch: Vec::new(),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn current_block(&self) -> &[u32] {
        self.blocks.last().map_or(&[], Vec::as_slice)
    }

    #[inline]
    pub fn is_used(&self, d: u32) -> bool {
        self.used[(d / 64) as usize] >> (d % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, d: u32) {
        self.used[(d / 64) as usize] |= 1 << (d % 64);
    }

    #[inline]
    fn clear(&mut self, d: u32) {
        self.used[(d / 64) as usize] &= !(1 << (d % 64));
    }

    /// Used differences in ascending index order.
    pub fn used_differences(&self) -> Vec<u32> {
        (0..self.spec.order()).filter(|&d| self.is_used(d)).collect()
    }

    /// Starts a new block holding just the identity.
    pub fn open_block(&mut self) {
        self.blocks.push(alloc::vec![0]);
    }

    /// Removes the current block, retracting all its elements.
    pub fn drop_block(&mut self) {
        while self.current_block().len() > 1 {
            self.retract();
        }
        self.blocks.pop();
    }

    /// Adds `candidate` to the current block if none of its differences
    /// with the block's members (either sign) are used yet, including by
    /// each other. On success exactly `2 * |block|` differences are marked.
    pub fn try_extend(&mut self, candidate: u32) -> bool {
        let Some(block) = self.blocks.last() else {
            return false;
        };
        if candidate >= self.spec.order() || block.contains(&candidate) {
            return false;
        }
        self.scratch.clear();
        for i in 0..block.len() {
            let x = self.blocks.last().unwrap()[i];
            for d in [self.spec.sub_index(candidate, x), self.spec.sub_index(x, candidate)] {
                if self.is_used(d) {
                    for j in 0..self.scratch.len() {
                        let s = self.scratch[j];
                        self.clear(s);
                    }
                    return false;
                }
                self.set(d);
                self.scratch.push(d);
            }
        }
        self.blocks.last_mut().unwrap().push(candidate);
        true
    }

    /// Removes the most recently added element of the current block.
    pub fn retract(&mut self) -> Option<u32> {
        let block = self.blocks.last_mut()?;
        if block.len() <= 1 {
            return None;
        }
        let c = block.pop().unwrap();
        for i in 0..self.blocks.last().unwrap().len() {
            let x = self.blocks.last().unwrap()[i];
            let (a, b) = (self.spec.sub_index(c, x), self.spec.sub_index(x, c));
            self.clear(a);
            self.clear(b);
        }
        Some(c)
    }

    /// Checks the mask against an independent census of the blocks.
    pub fn mask_matches_census(&self) -> bool {
        let census =
            DifferenceCensus::of_point_sets(&self.spec, self.blocks.iter().map(Vec::as_slice));
        census
            .counts()
            .iter()
            .enumerate()
            .all(|(d, &c)| (c >= 1) == self.is_used(d as u32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Found,
    Stop(Stop),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    NodeLimit,
    Time,
    Cancel,
}

struct Engine<'a, S, B> {
    cfg: &'a SearchConfig,
    strategy: S,
    budget: B,
    state: PartialFamily,
    order: Vec<u32>,
    nodes: u64,
    ticks: u64,
    restart_nodes: u64,
    node_limit: Option<u64>,
    count_all: bool,
    solutions: u64,
    found: Option<Vec<Vec<u32>>>,
}

impl<S: Strategy, B: Budget> Engine<'_, S, B> {
    fn check_budget(&mut self) -> Option<Stop> {
        if self.node_limit.is_some_and(|l| self.restart_nodes >= l) {
            return Some(Stop::NodeLimit);
        }
        self.ticks += 1;
        if self.ticks % BUDGET_CHECK_INTERVAL == 1 {
            if self.budget.cancelled() {
                return Some(Stop::Cancel);
            }
            if self
                .cfg
                .time_limit
                .is_some_and(|t| self.budget.elapsed() >= t)
            {
                return Some(Stop::Time);
            }
        }
        None
    }

    fn extend(&mut self, candidate: u32) -> bool {
        if !self.state.try_extend(candidate) {
            return false;
        }
        self.nodes += 1;
        self.restart_nodes += 1;
        if cfg!(debug_assertions) && self.nodes.is_multiple_of(509) {
            debug_assert!(self.state.mask_matches_census());
        }
        true
    }

    fn place_block(&mut self) -> Flow {
        if self.state.blocks().len() == self.cfg.blocks {
            if self.count_all {
                self.solutions += 1;
                return Flow::Continue;
            }
            self.found = Some(self.state.blocks().to_vec());
            return Flow::Found;
        }
        let Some(pos) = self.order.iter().position(|&e| !self.state.is_used(e)) else {
            return Flow::Continue;
        };
        self.state.open_block();
        let flow = if self.extend(self.order[pos]) {
            let flow = self.fill(pos + 1, self.cfg.k - 2);
            self.state.retract();
            flow
        } else {
            Flow::Continue
        };
        self.state.drop_block();
        flow
    }

    fn fill(&mut self, start: usize, remaining: usize) -> Flow {
        if remaining == 0 {
            return self.place_block();
        }
        let end = (self.order.len() + 1).saturating_sub(remaining);
        for pos in start..end {
            if let Some(stop) = self.check_budget() {
                return Flow::Stop(stop);
            }
            let c = self.order[pos];
            // c - 0 = c must be a fresh difference.
            if self.state.is_used(c) || !self.strategy.admit(&self.state, c) {
                continue;
            }
            if !self.extend(c) {
                continue;
            }
            let flow = self.fill(pos + 1, remaining - 1);
            self.state.retract();
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }
}

/// Runs the search with the default strategy for `cfg`.
pub fn search_difference_family<B: Budget>(
    cfg: &SearchConfig,
    budget: B,
) -> Result<SearchOutcome, SearchError> {
    if cfg.candidate_shuffle {
        search_with(cfg, ShuffledOrder::new(cfg.seed), budget)
    } else {
        search_with(cfg, AscendingOrder, budget)
    }
}

pub fn search_with<S: Strategy, B: Budget>(
    cfg: &SearchConfig,
    strategy: S,
    budget: B,
) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let mut engine = Engine {
        cfg,
        strategy,
        budget,
        state: PartialFamily::new(cfg.spec.clone()),
        order: Vec::new(),
        nodes: 0,
        ticks: 0,
        restart_nodes: 0,
        node_limit: cfg.candidate_shuffle.then_some(cfg.restart_node_limit),
        count_all: false,
        solutions: 0,
        found: None,
    };

    let mut restarts_used = 0;
    let terminated_by = loop {
        if restarts_used >= cfg.max_restarts.max(1) {
            break Termination::RestartsExhausted;
        }
        engine.order = engine.strategy.candidate_order(&cfg.spec, restarts_used);
        engine.restart_nodes = 0;
        restarts_used += 1;
        match engine.place_block() {
            Flow::Found => break Termination::Found,
            Flow::Stop(Stop::Time) => break Termination::TimeLimit,
            Flow::Stop(Stop::Cancel) => break Termination::Cancelled,
            Flow::Stop(Stop::NodeLimit) => continue,
            // The whole space was explored without a hit.
            Flow::Continue => break Termination::RestartsExhausted,
        }
    };

    let found = engine.found.take().map(|blocks| {
        let refs: Vec<&[u32]> = blocks.iter().map(Vec::as_slice).collect();
        let family = DifferenceFamily::from_index_blocks(cfg.spec.clone(), cfg.k, &refs)
            .expect("search produces well-formed blocks");
        assert!(
            verify_lambda1(&family).is_family,
            "search returned a family that fails the census check"
        );
        family
    });
    Ok(SearchOutcome {
        found,
        restarts_used,
        nodes_expanded: engine.nodes,
        elapsed: engine.budget.elapsed(),
        terminated_by,
    })
}

/// Counts all normalized families by exhaustive ascending search.
pub fn count_normalized_families(
    spec: &GroupSpec,
    k: usize,
    blocks: usize,
) -> Result<u64, SearchError> {
    let mut cfg = SearchConfig::new(spec.clone(), k, blocks)?;
    cfg.candidate_shuffle = false;
    cfg.time_limit = None;
    let mut engine = Engine {
        cfg: &cfg,
        strategy: AscendingOrder,
        budget: NoClock,
        state: PartialFamily::new(spec.clone()),
        order: (1..spec.order()).collect(),
        nodes: 0,
        ticks: 0,
        restart_nodes: 0,
        node_limit: None,
        count_all: true,
        solutions: 0,
        found: None,
    };
    engine.place_block();
    Ok(engine.solutions)
}
