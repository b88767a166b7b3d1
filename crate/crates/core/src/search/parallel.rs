use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::compile::CompiledModel;
use super::engine::{Budget, Counters, Engine, Flow};
use super::lex::LexLeader;
use super::propagate::SearchState;
use super::VarOrder;
use crate::error::{Error, Result};
use crate::instance::Instance;

/// Progress of a split search, saved after every finished subtree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    /// Identifies the model, total window and split the file belongs to.
    pub fingerprint: String,
    pub units: usize,
    /// Subtrees already searched without a solution.
    pub done: BTreeSet<usize>,
    pub nodes: u64,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
        match std::fs::read_to_string(path) {
            Ok(text) => {
                serde_json::from_str(&text).map(Some).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::Checkpoint(format!("{}: {e}", path.display()))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Checkpoint(e.to_string()))?;
        std::fs::write(&tmp, text).map_err(|e| Error::Checkpoint(format!("{}: {e}", tmp.display())))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))
    }
}

pub(crate) enum Outcome {
    Sat(Instance),
    Unsat,
    OutOfBudget,
}

pub(crate) struct Split<'a> {
    pub model: &'a CompiledModel,
    pub lex: &'a LexLeader,
    pub order: VarOrder,
    pub budget: &'a Budget,
    pub jobs: usize,
    pub target_units: usize,
    pub checkpoint: Option<(PathBuf, String)>,
}

impl Split<'_> {
    fn units(&self, root: SearchState, counters: &mut Counters) -> Vec<SearchState> {
        let mut last = 0;
        for depth in 1..=30 {
            let mut engine = Engine::new(self.model, self.lex, self.order, self.budget);
            let mut out = Vec::new();
            engine.frontier(root, depth, &mut out);
            if out.len() >= self.target_units || out.len() == last || depth == 30 {
                counters.merge(&engine.counters);
                return out;
            }
            last = out.len();
        }
        unreachable!("loop returns at depth 30")
    }

    /// Searches the root's subtrees independently and returns the first
    /// solution in search order, as a single depth-first pass would.
    pub(crate) fn run(&self, root: SearchState, counters: &mut Counters) -> Result<(Outcome, usize, usize)> {
        let units = self.units(root, counters);
        let mut progress = Checkpoint { units: units.len(), ..Default::default() };
        if let Some((path, fingerprint)) = &self.checkpoint {
            progress.fingerprint = fingerprint.clone();
            if let Some(saved) = Checkpoint::load(path)? {
                if saved.fingerprint != *fingerprint || saved.units != units.len() {
                    return Err(Error::Checkpoint(format!("{} belongs to a different run", path.display())));
                }
                progress = saved;
            }
        }
        let resumed = progress.done.len();
        counters.nodes += progress.nodes;
        let progress = Mutex::new(progress);
        let merged = Mutex::new(Counters::default());
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        let found = pool.install(|| {
            units.par_iter().enumerate().find_map_first(|(i, unit)| {
                if progress.lock().expect("progress lock").done.contains(&i) {
                    return None;
                }
                let mut engine = Engine::new(self.model, self.lex, self.order, self.budget);
                let mut witness = None;
                let flow = engine.dfs(*unit, &mut |x| {
                    witness = Some(x);
                    Flow::Stop
                });
                merged.lock().expect("counter lock").merge(&engine.counters);
                match flow {
                    Ok(_) if witness.is_some() => Some(Ok(witness)),
                    Ok(_) => {
                        let mut p = progress.lock().expect("progress lock");
                        p.done.insert(i);
                        p.nodes += engine.counters.nodes;
                        match &self.checkpoint {
                            Some((path, _)) => p.save(path).err().map(Err),
                            None => None,
                        }
                    }
                    Err(_) => Some(Ok(None)),
                }
            })
        });
        counters.merge(&merged.into_inner().expect("counter lock"));
        let total = units.len();
        let outcome = match found {
            Some(Err(e)) => return Err(e),
            Some(Ok(Some(x))) => Outcome::Sat(x),
            Some(Ok(None)) => Outcome::OutOfBudget,
            None if self.budget.is_exhausted() => Outcome::OutOfBudget,
            None => Outcome::Unsat,
        };
        Ok((outcome, total, resumed))
    }
}
