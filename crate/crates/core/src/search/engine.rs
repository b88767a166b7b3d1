use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use super::compile::CompiledModel;
use super::lex::LexLeader;
use super::propagate::{propagate_counting, PruneCause, SearchState};
use super::VarOrder;
use crate::instance::Instance;
use crate::variety::NUM_VARIETIES;

/// Node and time limits shared by every worker of one run.
#[derive(Debug)]
pub(crate) struct Budget {
    nodes: AtomicU64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    exhausted: AtomicBool,
}

impl Budget {
    pub(crate) fn new(node_limit: Option<u64>, deadline: Option<Instant>) -> Budget {
        Budget { nodes: AtomicU64::new(0), node_limit, deadline, exhausted: AtomicBool::new(false) }
    }

    /// Counts one node; false once a limit is hit.
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let over = self.node_limit.is_some_and(|l| n > l)
            || (n.is_multiple_of(256) && self.deadline.is_some_and(|d| Instant::now() >= d));
        if over {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !over
    }

    pub(crate) fn is_exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

/// Raised when the budget runs out mid-search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct OutOfBudget;

#[derive(Clone, Debug, Default)]
pub(crate) struct Counters {
    pub nodes: u64,
    pub prunes: BTreeMap<PruneCause, u64>,
}

impl Counters {
    pub(crate) fn merge(&mut self, other: &Counters) {
        self.nodes += other.nodes;
        for (k, v) in &other.prunes {
            *self.prunes.entry(*k).or_insert(0) += v;
        }
    }
}

pub(crate) struct Engine<'a> {
    pub model: &'a CompiledModel,
    pub lex: &'a LexLeader,
    pub order: VarOrder,
    pub budget: &'a Budget,
    pub counters: Counters,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(model: &'a CompiledModel, lex: &'a LexLeader, order: VarOrder, budget: &'a Budget) -> Engine<'a> {
        Engine { model, lex, order, budget, counters: Counters::default() }
    }

    /// Model propagators and lex-leader cuts to a common fixpoint.
    fn settle(&mut self, s: &mut SearchState, tight: &mut [u32; NUM_VARIETIES]) -> bool {
        let outcome = loop {
            if let Err(c) = propagate_counting(s, self.model, tight) {
                break Err(c);
            }
            match self.lex.propagate(s) {
                Err(c) => break Err(c),
                Ok(true) => continue,
                Ok(false) => break Ok(()),
            }
        };
        match outcome {
            Ok(()) => true,
            Err(cause) => {
                *self.counters.prunes.entry(cause).or_insert(0) += 1;
                false
            }
        }
    }

    fn pick(&self, s: &SearchState, tight: &[u32; NUM_VARIETIES]) -> Option<usize> {
        let open = (0..NUM_VARIETIES).filter(|&v| !s.is_fixed(v));
        match self.order {
            VarOrder::Canonical => open.min(),
            VarOrder::Heuristic => open.min_by_key(|&v| (s.ub[v] - s.lb[v], std::cmp::Reverse(tight[v]), v)),
        }
    }

    /// Depth-first search below `state`, values tried from high to low.
    pub(crate) fn dfs(
        &mut self,
        state: SearchState,
        on_solution: &mut dyn FnMut(Instance) -> Flow,
    ) -> Result<Flow, OutOfBudget> {
        if !self.budget.tick() {
            return Err(OutOfBudget);
        }
        self.counters.nodes += 1;
        let mut s = state;
        let mut tight = [0; NUM_VARIETIES];
        if !self.settle(&mut s, &mut tight) {
            return Ok(Flow::Continue);
        }
        let Some(v) = self.pick(&s, &tight) else {
            let x = s.instance().expect("complete state");
            return Ok(on_solution(x));
        };
        for k in (s.lb[v]..=s.ub[v]).rev() {
            let mut child = s;
            child.lb[v] = k;
            child.ub[v] = k;
            if self.dfs(child, on_solution)? == Flow::Stop {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    /// The open subtrees after `depth` branching levels, in search order.
    /// Complete states met earlier are returned as they are.
    pub(crate) fn frontier(&mut self, state: SearchState, depth: usize, out: &mut Vec<SearchState>) {
        self.counters.nodes += 1;
        let mut s = state;
        let mut tight = [0; NUM_VARIETIES];
        if !self.settle(&mut s, &mut tight) {
            return;
        }
        let pick = self.pick(&s, &tight);
        match pick {
            Some(v) if depth > 0 => {
                for k in (s.lb[v]..=s.ub[v]).rev() {
                    let mut child = s;
                    child.lb[v] = k;
                    child.ub[v] = k;
                    self.frontier(child, depth - 1, out);
                }
            }
            _ => out.push(s),
        }
    }
}
