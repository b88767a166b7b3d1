//! Backtracking search over count vectors.
//!
//! Each node shrinks the bounds with the propagators in [`propagate`]
//! (linear bounds, composability of required and forbidden targets, f-bound
//! cuts, a covering bound) and with lex-leader cuts for the model's
//! symmetry group, then branches on one count, largest value first.
//! Optimization runs a sequence of decision searches with the total size
//! pinned, starting from the root's lower bound.
//!
//! Every witness is re-checked against the model and the matching oracle
//! before it is returned.

mod compile;
mod engine;
mod lex;
mod parallel;
mod propagate;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use compile::CompiledModel;
pub use lex::{symmetry_break, LexLeader};
pub use parallel::Checkpoint;
pub use propagate::{propagate, PruneCause, SearchState};

use crate::composability::is_composable_matching;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::model::{check_assignment, export_neutral, Model, Objective};
use crate::symmetry::Symmetry;
use crate::variety::iter_mask;
use engine::{Budget, Counters, Engine, Flow};
use parallel::{Outcome, Split};

/// Branching variable choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum VarOrder {
    /// Smallest domain, then most often critical, then canonical index.
    #[default]
    Heuristic,
    /// Canonical index only.
    Canonical,
}

impl std::str::FromStr for VarOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heuristic" => Ok(VarOrder::Heuristic),
            "canonical" => Ok(VarOrder::Canonical),
            _ => Err(Error::InvalidInput(format!("unknown variable order {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub symmetry: bool,
    /// Group to break; `None` uses the model's full stabilizer.
    pub group: Option<Vec<Symmetry>>,
    pub order: VarOrder,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Worker threads. More than one, or a checkpoint, splits the root into
    /// independent subtrees.
    pub jobs: usize,
    /// Roughly how many subtrees a split search aims for.
    pub split_units: usize,
    /// Progress file for split searches; a matching file is resumed.
    pub checkpoint: Option<PathBuf>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetry: true,
            group: None,
            order: VarOrder::Heuristic,
            node_budget: None,
            time_budget: None,
            jobs: 1,
            split_units: 256,
            checkpoint: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Sat(Instance),
    Unsat,
    Optimal { instance: Instance, objective: u64 },
    Timeout,
}

impl Verdict {
    pub fn witness(&self) -> Option<&Instance> {
        match self {
            Verdict::Sat(x) | Verdict::Optimal { instance: x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Optimal { .. } => "OPTIMAL",
            Verdict::Timeout => "TIMEOUT",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: BTreeMap<PruneCause, u64>,
    pub group_order: usize,
    /// Decision searches run (one per total size tried when optimizing).
    pub rounds: usize,
    /// Subtrees of split searches, and how many came from a checkpoint.
    pub units: usize,
    pub units_resumed: usize,
    pub wall_time: Duration,
}

impl SearchStats {
    fn absorb(&mut self, c: &Counters) {
        self.nodes += c.nodes;
        for (k, v) in &c.prunes {
            *self.prunes.entry(*k).or_insert(0) += v;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

impl fmt::Display for SearchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Optimal { objective, .. } => writeln!(f, "verdict OPTIMAL objective {objective}")?,
            v => writeln!(f, "verdict {}", v.name())?,
        }
        if let Some(x) = self.verdict.witness() {
            writeln!(f, "witness size {}", x.size())?;
            write!(f, "{x}")?;
        }
        let s = &self.stats;
        writeln!(f, "nodes {} rounds {} group {}", s.nodes, s.rounds, s.group_order)?;
        if s.units > 0 {
            writeln!(f, "units {} resumed {}", s.units, s.units_resumed)?;
        }
        let prunes: Vec<String> = s.prunes.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "prunes {}", if prunes.is_empty() { "-".to_string() } else { prunes.join(" ") })
    }
}

fn fingerprint(model: &Model, total: i64) -> String {
    // FNV-1a over the neutral dump: stable across builds and platforms
    let text = export_neutral(model);
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{}:{total}:{h:016x}", model.name)
}

/// Re-checks a witness against the model and, for required and forbidden
/// targets, against the matching oracle.
fn verify(model: &Model, compiled: &CompiledModel, x: &Instance) -> Result<()> {
    let report = check_assignment(model, x);
    if let Some(v) = report.violations.first() {
        return Err(Error::Internal(format!("search produced an invalid witness: {v}")));
    }
    for t in iter_mask(compiled.required()) {
        if !is_composable_matching(x, t) {
            return Err(Error::Internal(format!("witness does not compose required {t}")));
        }
    }
    for t in iter_mask(compiled.forbidden()) {
        if is_composable_matching(x, t) {
            return Err(Error::Internal(format!("witness composes forbidden {t}")));
        }
    }
    Ok(())
}

fn lex_for(model: &Model, options: &SearchOptions) -> Result<LexLeader> {
    if !options.symmetry {
        return Ok(LexLeader::trivial());
    }
    match &options.group {
        Some(g) => LexLeader::new(model, g),
        None => LexLeader::new(model, &model.symmetry_group()),
    }
}

struct Run<'a> {
    model: &'a Model,
    options: &'a SearchOptions,
    lex: LexLeader,
    budget: Budget,
    stats: SearchStats,
}

impl Run<'_> {
    /// One decision search with the total pinned to `total` when given.
    fn decide(&mut self, compiled: &CompiledModel, total: Option<i64>) -> Result<Outcome> {
        let mut c = compiled.clone();
        if let Some(k) = total {
            c.total_lo = c.total_lo.max(k);
            c.total_hi = c.total_hi.min(k);
        }
        self.stats.rounds += 1;
        let root = SearchState::root(&c);
        let mut counters = Counters::default();
        let outcome = if self.options.jobs > 1 || self.options.checkpoint.is_some() {
            let checkpoint = self.options.checkpoint.as_ref().map(|p| {
                let path = match total {
                    Some(k) => PathBuf::from(format!("{}.{k}", p.display())),
                    None => p.clone(),
                };
                (path, fingerprint(self.model, total.unwrap_or(-1)))
            });
            let split = Split {
                model: &c,
                lex: &self.lex,
                order: self.options.order,
                budget: &self.budget,
                jobs: self.options.jobs,
                target_units: self.options.split_units,
                checkpoint,
            };
            let (outcome, units, resumed) = split.run(root, &mut counters)?;
            self.stats.units += units;
            self.stats.units_resumed += resumed;
            outcome
        } else {
            let mut engine = Engine::new(&c, &self.lex, self.options.order, &self.budget);
            let mut witness = None;
            let flow = engine.dfs(root, &mut |x| {
                witness = Some(x);
                Flow::Stop
            });
            counters.merge(&engine.counters);
            match (flow, witness) {
                (Err(_), _) => Outcome::OutOfBudget,
                (Ok(_), Some(x)) => Outcome::Sat(x),
                (Ok(_), None) => Outcome::Unsat,
            }
        };
        self.stats.absorb(&counters);
        if let Outcome::Sat(x) = &outcome {
            verify(self.model, &c, x)?;
        }
        Ok(outcome)
    }

    /// Smallest total the root propagation allows, from the covering bound.
    fn lower_total(&self, compiled: &CompiledModel) -> Option<i64> {
        let mut s = SearchState::root(compiled);
        propagate(&mut s, compiled).ok()?;
        let mut lo = compiled.total_lo.max(s.total_lb());
        let hi = compiled.total_hi.min(s.total_ub());
        while lo <= hi {
            let mut c = compiled.clone();
            c.total_hi = lo;
            let mut probe = SearchState::root(&c);
            if propagate(&mut probe, &c).is_ok() {
                return Some(lo);
            }
            lo += 1;
        }
        None
    }
}

/// Solves `model`: a verdict for decision models, the optimum for models
/// with an objective on the total size.
pub fn solve(model: &Model, options: &SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    let compiled = CompiledModel::new(model);
    let lex = lex_for(model, options)?;
    let deadline = options.time_budget.map(|d| start + d);
    let mut run = Run {
        model,
        options,
        stats: SearchStats { group_order: lex.group_order(), ..Default::default() },
        lex,
        budget: Budget::new(options.node_budget, deadline),
    };
    let verdict = match compiled.objective() {
        Objective::None => match run.decide(&compiled, None)? {
            Outcome::Sat(x) => Verdict::Sat(x),
            Outcome::Unsat => Verdict::Unsat,
            Outcome::OutOfBudget => Verdict::Timeout,
        },
        Objective::MinimizeTotal => {
            let mut verdict = Verdict::Unsat;
            if let Some(lo) = run.lower_total(&compiled) {
                let hi = {
                    let s = SearchState::root(&compiled);
                    compiled.total_hi.min(s.total_ub())
                };
                for k in lo..=hi {
                    match run.decide(&compiled, Some(k))? {
                        Outcome::Sat(x) => {
                            verdict = Verdict::Optimal { instance: x, objective: k as u64 };
                            break;
                        }
                        Outcome::Unsat => {}
                        Outcome::OutOfBudget => {
                            verdict = Verdict::Timeout;
                            break;
                        }
                    }
                }
            }
            verdict
        }
        Objective::MaximizeTotal => {
            let mut verdict = Verdict::Unsat;
            let s = SearchState::root(&compiled);
            let (lo, hi) = (compiled.total_lo.max(s.total_lb()), compiled.total_hi.min(s.total_ub()));
            for k in (lo..=hi).rev() {
                match run.decide(&compiled, Some(k))? {
                    Outcome::Sat(x) => {
                        verdict = Verdict::Optimal { instance: x, objective: k as u64 };
                        break;
                    }
                    Outcome::Unsat => {}
                    Outcome::OutOfBudget => {
                        verdict = Verdict::Timeout;
                        break;
                    }
                }
            }
            verdict
        }
    };
    run.stats.wall_time = start.elapsed();
    Ok(SearchResult { verdict, stats: run.stats })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enumeration {
    /// Solutions in search order; one per orbit when symmetry is on.
    pub instances: Vec<Instance>,
    /// False when the budget ran out first.
    pub complete: bool,
    pub stats: SearchStats,
}

/// Every solution of `model` (ignoring any objective), one per orbit of the
/// symmetry group when symmetry breaking is on.
pub fn enumerate_all(model: &Model, options: &SearchOptions) -> Result<Enumeration> {
    let start = Instant::now();
    let compiled = CompiledModel::new(model);
    let lex = lex_for(model, options)?;
    let budget = Budget::new(options.node_budget, options.time_budget.map(|d| start + d));
    let mut engine = Engine::new(&compiled, &lex, options.order, &budget);
    let mut instances = Vec::new();
    let flow = engine.dfs(SearchState::root(&compiled), &mut |x| {
        instances.push(x);
        Flow::Continue
    });
    for x in &instances {
        verify(model, &compiled, x)?;
    }
    let mut stats = SearchStats { group_order: lex.group_order(), rounds: 1, ..Default::default() };
    stats.absorb(&engine.counters);
    stats.wall_time = start.elapsed();
    Ok(Enumeration { instances, complete: flow.is_ok(), stats })
}
