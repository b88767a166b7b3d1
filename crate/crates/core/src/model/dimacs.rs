//! CNF encoding of a [`Model`].
//!
//! Each count `x_v` in `lo..=hi` becomes `hi - lo` order bits
//! `[x_v >= lo + k]`. Every sum is encoded with an integer sequential
//! counter whose auxiliary variables `[P_i >= j]` are fully defined (both
//! directions), so a sum's output literal can be used positively or
//! negatively. That makes the non-composability disjunction a single clause
//! over negated Hall outputs, and an upper bound a single negated output.

use std::fmt::Write;

use super::{check_assignment, fbound_cells, Cmp, Constraint, Domain, Model, Objective};
use crate::composability::target_info;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::variety::{iter_mask, Variety, NUM_VARIETIES};

const TRUE: i32 = i32::MAX;
const FALSE: i32 = -i32::MAX;

/// Clauses over variables `1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    /// `assignment[v]` is the value of variable `v`; index 0 is unused.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize] == (l > 0)))
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }
}

/// A unary term: `weight * (number of true literals)`, with `lits[k]`
/// meaning "value >= k + 1" before weighting.
#[derive(Clone, Debug)]
struct Term {
    lits: Vec<i32>,
    weight: u64,
}

impl Term {
    fn max(&self) -> u64 {
        self.weight * self.lits.len() as u64
    }

    fn geq(&self, b: u64) -> i32 {
        if b == 0 {
            return TRUE;
        }
        let k = b.div_ceil(self.weight) as usize;
        if k > self.lits.len() {
            FALSE
        } else {
            self.lits[k - 1]
        }
    }
}

#[derive(Clone, Debug)]
struct Counter {
    terms: Vec<Term>,
    /// `levels[i][j - 1]` is `[sum of the first i + 1 terms >= j]`.
    levels: Vec<Vec<i32>>,
}

/// The CNF together with the variable layout needed to map between counts
/// and assignments.
#[derive(Clone, Debug)]
pub struct DimacsEncoding {
    pub cnf: Cnf,
    name: String,
    objective: Objective,
    domains: [Domain; NUM_VARIETIES],
    first_bit: [i32; NUM_VARIETIES],
    counters: Vec<Counter>,
}

fn decode_order_bits(domains: &[Domain; NUM_VARIETIES], assignment: &[bool]) -> Instance {
    let (first_bit, _) = bit_layout(domains);
    let mut x = Instance::empty();
    for v in Variety::all() {
        let d = domains[v.index()];
        let on = (1..=(d.hi - d.lo)).filter(|&k| assignment[(first_bit[v.index()] + k as i32 - 1) as usize]).count();
        x.set(v, d.lo + on as u32);
    }
    x
}

fn bit_layout(domains: &[Domain; NUM_VARIETIES]) -> ([i32; NUM_VARIETIES], usize) {
    let mut first = [0; NUM_VARIETIES];
    let mut next = 1;
    for (v, d) in domains.iter().enumerate() {
        first[v] = next;
        next += (d.hi - d.lo) as i32;
    }
    (first, next as usize - 1)
}

impl DimacsEncoding {
    pub fn encode(model: &Model) -> DimacsEncoding {
        let domains = *model.domains();
        let (first_bit, num_vars) = bit_layout(&domains);
        let mut enc = DimacsEncoding {
            cnf: Cnf { num_vars, clauses: Vec::new() },
            name: model.name.clone(),
            objective: model.objective(),
            domains,
            first_bit,
            counters: Vec::new(),
        };
        for v in Variety::all() {
            let d = domains[v.index()];
            for k in 1..(d.hi - d.lo) {
                let b = first_bit[v.index()] + k as i32 - 1;
                enc.clause(&[-(b + 1), b]);
            }
        }
        for c in model.constraints() {
            enc.constraint(c);
        }
        enc
    }

    /// Literal for `[x_v >= k]`, possibly a constant.
    fn geq(&self, v: Variety, k: u32) -> i32 {
        let d = self.domains[v.index()];
        if k <= d.lo {
            TRUE
        } else if k > d.hi {
            FALSE
        } else {
            self.first_bit[v.index()] + (k - d.lo) as i32 - 1
        }
    }

    /// `min(x_v, cap)` as a unit-weight term.
    fn var_term(&self, v: Variety, cap: u32) -> Term {
        let hi = self.domains[v.index()].hi.min(cap);
        Term { lits: (1..=hi).map(|k| self.geq(v, k)).collect(), weight: 1 }
    }

    fn fresh(&mut self) -> i32 {
        self.cnf.num_vars += 1;
        self.cnf.num_vars as i32
    }

    fn clause(&mut self, lits: &[i32]) {
        if lits.contains(&TRUE) {
            return;
        }
        let kept: Vec<i32> = lits.iter().copied().filter(|&l| l != FALSE).collect();
        if kept.is_empty() {
            let z = self.fresh();
            self.cnf.clauses.push(vec![z]);
            self.cnf.clauses.push(vec![-z]);
        } else {
            self.cnf.clauses.push(kept);
        }
    }

    /// Output literal equivalent to `sum of terms >= bound`.
    fn at_least(&mut self, terms: Vec<Term>, bound: i64) -> i32 {
        if bound <= 0 {
            return TRUE;
        }
        let r = bound as u64;
        let terms: Vec<Term> = terms.into_iter().filter(|t| t.max() > 0).collect();
        if terms.iter().map(Term::max).sum::<u64>() < r {
            return FALSE;
        }
        let mut levels: Vec<Vec<i32>> = Vec::with_capacity(terms.len());
        let mut prev: Vec<i32> = Vec::new();
        let mut reach = 0u64;
        for t in &terms {
            reach += t.max();
            let top = reach.min(r);
            let cur: Vec<i32> = (0..top).map(|_| self.fresh()).collect();
            let prev_geq = |a: u64| {
                if a == 0 {
                    TRUE
                } else if a as usize <= prev.len() {
                    prev[a as usize - 1]
                } else {
                    FALSE
                }
            };
            for j in 1..=top {
                let out = cur[j as usize - 1];
                for a in 0..=j {
                    self.clause(&[-prev_geq(a), -t.geq(j - a), out]);
                }
                for a in 0..j {
                    self.clause(&[-out, prev_geq(a + 1), t.geq(j - a)]);
                }
            }
            levels.push(cur.clone());
            prev = cur;
        }
        let out = prev[r as usize - 1];
        self.counters.push(Counter { terms, levels });
        out
    }

    /// `sum coef * x >= rhs`: positive terms count `x - lo`, negative ones
    /// count `hi - x`, and the bound absorbs the shifts.
    fn linear_at_least(&mut self, terms: &[(Variety, i64)], rhs: i64) -> i32 {
        let mut shifted = rhs;
        let mut unary = Vec::new();
        for &(v, c) in terms {
            let d = self.domains[v.index()];
            let lits = if c > 0 {
                shifted -= c * i64::from(d.lo);
                (d.lo + 1..=d.hi).map(|k| self.geq(v, k)).collect()
            } else {
                // (hi - x) >= k  <=>  not (x >= hi - k + 1)
                shifted -= c * i64::from(d.hi);
                (1..=d.hi - d.lo).map(|k| -self.geq(v, d.hi - k + 1)).collect()
            };
            unary.push(Term { lits, weight: c.unsigned_abs() });
        }
        self.at_least(unary, shifted)
    }

    fn constraint(&mut self, c: &Constraint) {
        match c {
            Constraint::Linear { terms, cmp, rhs } => {
                let neg: Vec<(Variety, i64)> = terms.iter().map(|&(v, k)| (v, -k)).collect();
                if matches!(cmp, Cmp::Ge | Cmp::Eq) {
                    let o = self.linear_at_least(terms, *rhs);
                    self.clause(&[o]);
                }
                if matches!(cmp, Cmp::Le | Cmp::Eq) {
                    let o = self.linear_at_least(&neg, -rhs);
                    self.clause(&[o]);
                }
            }
            Constraint::HallRequired { target, subset } => {
                let o = self.hall_output(*target, *subset);
                self.clause(&[o]);
            }
            Constraint::NonComposable { target } => {
                let deficient: Vec<i32> = (1..=255u8).map(|s| -self.hall_output(*target, s)).collect();
                self.clause(&deficient);
            }
            Constraint::FBound { target, line } => {
                let mut terms = vec![self.var_term(*target, u32::MAX)];
                for v in fbound_cells(*target, *line) {
                    terms.push(self.var_term(v, 2));
                }
                let o = self.at_least(terms, 8);
                self.clause(&[-o]);
            }
        }
    }

    fn hall_output(&mut self, target: Variety, subset: u8) -> i32 {
        let need = subset.count_ones();
        let mut terms = vec![self.var_term(target, need)];
        for v in iter_mask(target_info(target).neighbors[subset as usize]) {
            terms.push(self.var_term(v, need));
        }
        self.at_least(terms, i64::from(need))
    }

    /// The assignment induced by the counts `x`: order bits from `x`, every
    /// counter variable from its definition. Unsatisfiable markers stay false.
    pub fn extend(&self, x: &Instance) -> Vec<bool> {
        let mut a = vec![false; self.cnf.num_vars + 1];
        for v in Variety::all() {
            let d = self.domains[v.index()];
            for k in 1..=(d.hi - d.lo) {
                a[(self.first_bit[v.index()] + k as i32 - 1) as usize] = x.get(v) >= d.lo + k;
            }
        }
        let value = |a: &[bool], l: i32| match l {
            TRUE => true,
            FALSE => false,
            _ => a[l.unsigned_abs() as usize] == (l > 0),
        };
        for c in &self.counters {
            let mut sum = 0u64;
            for (t, level) in c.terms.iter().zip(&c.levels) {
                sum += t.weight * t.lits.iter().filter(|&&l| value(&a, l)).count() as u64;
                for (j, &var) in level.iter().enumerate() {
                    a[var as usize] = sum > j as u64;
                }
            }
        }
        a
    }

    /// Counts read off the order bits of an assignment.
    pub fn decode(&self, assignment: &[bool]) -> Instance {
        decode_order_bits(&self.domains, assignment)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "c eightblocks model {}", self.name).expect("string write");
        if self.objective != Objective::None {
            writeln!(out, "c objective {:?} not encoded; add a total bound to the model instead", self.objective)
                .expect("string write");
        }
        for v in Variety::all() {
            let d = self.domains[v.index()];
            let (i, j) = v.coords();
            let first = self.first_bit[v.index()];
            writeln!(out, "c x_{i}_{j} lo {} bits {}..{}", d.lo, first, first + (d.hi - d.lo) as i32 - 1)
                .expect("string write");
        }
        writeln!(out, "p cnf {} {}", self.cnf.num_vars, self.cnf.clauses.len()).expect("string write");
        for c in &self.cnf.clauses {
            for l in c {
                write!(out, "{l} ").expect("string write");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// DIMACS CNF text for any model. Objectives are left out.
pub fn export_dimacs(model: &Model) -> String {
    DimacsEncoding::encode(model).to_dimacs()
}

/// Reads a SAT solver's answer for a model exported with
/// [`export_dimacs`]: `Ok(None)` for an unsatisfiable verdict, otherwise the
/// decoded instance after re-checking it against the model.
///
/// Accepts competition output (`s ...` and `v ...` lines) and the bare
/// MiniSat result file (`SAT` / `UNSAT` followed by literals).
pub fn decode_dimacs_solution(model: &Model, text: &str) -> Result<Option<Instance>> {
    let mut lits = Vec::new();
    let mut verdict = None;
    for line in text.lines() {
        let line = line.trim();
        let body = match line.split_once(char::is_whitespace) {
            Some(("s", rest)) => {
                verdict = Some(rest.trim() == "SATISFIABLE");
                continue;
            }
            Some(("v", rest)) => rest,
            Some(("c", _)) => continue,
            _ if line == "UNSAT" || line == "UNSATISFIABLE" => {
                verdict = Some(false);
                continue;
            }
            _ if line == "SAT" || line == "SATISFIABLE" => {
                verdict = Some(true);
                continue;
            }
            _ => line,
        };
        for tok in body.split_whitespace() {
            let l: i64 =
                tok.parse().map_err(|_| Error::MalformedInstance(format!("bad literal {tok:?} in solver output")))?;
            lits.push(l);
        }
    }
    match verdict {
        None => return Err(Error::MalformedInstance("no SAT/UNSAT verdict in solver output".into())),
        Some(false) => return Ok(None),
        Some(true) => {}
    }
    let (_, bits) = bit_layout(model.domains());
    let mut assignment = vec![false; bits + 1];
    for l in lits {
        let var = l.unsigned_abs() as usize;
        if l > 0 && var <= bits {
            assignment[var] = true;
        }
    }
    let x = decode_order_bits(model.domains(), &assignment);
    let report = check_assignment(model, &x);
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidInput(format!("decoded instance violates the model: {v}")));
    }
    Ok(Some(x))
}
