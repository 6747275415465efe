//! Explicit-state CTL model checking by fixpoint computation.

mod formula;
mod parse;

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::semantics::TransitionSystem;

pub use formula::Formula;
pub use parse::{parse_formula, FormulaParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CtlError {
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("component `{component}` has no location `{location}`")]
    UnknownLocation { component: String, location: String },
    #[error("witnesses are produced for `EF g` formulas only, got `{0}`")]
    UnsupportedWitness(String),
}

/// Satisfaction-set evaluator over one transition system.
///
/// Satisfaction sets of subformulas are memoized, so checking several
/// formulas sharing subterms (as the φ/ψ/ρ family does) costs little extra.
pub struct Checker<'a> {
    ts: &'a TransitionSystem,
    pred_offsets: Vec<u32>,
    preds: Vec<u32>,
    memo: HashMap<Formula, FixedBitSet>,
}

impl<'a> Checker<'a> {
    pub fn new(ts: &'a TransitionSystem) -> Self {
        let (pred_offsets, preds) = ts.predecessors();
        Checker {
            ts,
            pred_offsets,
            preds,
            memo: HashMap::new(),
        }
    }

    pub fn ts(&self) -> &TransitionSystem {
        self.ts
    }

    fn preds(&self, s: usize) -> &[u32] {
        &self.preds[self.pred_offsets[s] as usize..self.pred_offsets[s + 1] as usize]
    }

    fn n(&self) -> usize {
        self.ts.len()
    }

    /// Exact set of states satisfying `f`.
    pub fn eval(&mut self, f: &Formula) -> Result<FixedBitSet, CtlError> {
        if let Some(set) = self.memo.get(f) {
            return Ok(set.clone());
        }
        let n = self.n();
        let set = match f {
            Formula::True => {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert_range(..);
                s
            }
            Formula::False => FixedBitSet::with_capacity(n),
            Formula::At(c, l) => self.atom(c, l)?,
            Formula::Not(g) => {
                let mut s = self.eval(g)?;
                s.toggle_range(..);
                s
            }
            Formula::And(a, b) => {
                let mut s = self.eval(a)?;
                s.intersect_with(&self.eval(b)?);
                s
            }
            Formula::Or(a, b) => {
                let mut s = self.eval(a)?;
                s.union_with(&self.eval(b)?);
                s
            }
            Formula::EX(g) => {
                let target = self.eval(g)?;
                self.pre_exists(&target)
            }
            Formula::EU(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.exists_until(&a, b)
            }
            Formula::AU(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.always_until(&a, b)
            }
            Formula::EG(g) => {
                let g = self.eval(g)?;
                self.exists_globally(g)
            }
            Formula::EF(g) => self.eval(&Formula::True.eu((**g).clone()))?,
            Formula::AF(g) => self.eval(&Formula::True.au((**g).clone()))?,
            Formula::AG(g) => self.eval(&(**g).clone().not().ef().not())?,
            Formula::AX(g) => self.eval(&(**g).clone().not().ex().not())?,
        };
        self.memo.insert(f.clone(), set.clone());
        Ok(set)
    }

    pub fn holds_initially(&mut self, f: &Formula) -> Result<bool, CtlError> {
        Ok(self.eval(f)?.contains(self.ts.initial()))
    }

    fn atom(&self, component: &str, location: &str) -> Result<FixedBitSet, CtlError> {
        let a = self
            .ts
            .automaton_index(component)
            .ok_or_else(|| CtlError::UnknownComponent(component.to_string()))?;
        let l = self
            .ts
            .location_index(a, location)
            .ok_or_else(|| CtlError::UnknownLocation {
                component: component.to_string(),
                location: location.to_string(),
            })?;
        let mut s = FixedBitSet::with_capacity(self.n());
        for i in 0..self.n() {
            if self.ts.location(i, a) == l {
                s.insert(i);
            }
        }
        Ok(s)
    }

    fn pre_exists(&self, target: &FixedBitSet) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n());
        for t in target.ones() {
            for &p in self.preds(t) {
                s.insert(p as usize);
            }
        }
        s
    }

    /// Least fixpoint `b ∪ (a ∩ EX ·)`, by backward search from `b`.
    fn exists_until(&self, a: &FixedBitSet, mut result: FixedBitSet) -> FixedBitSet {
        let mut queue: VecDeque<usize> = result.ones().collect();
        while let Some(t) = queue.pop_front() {
            for &p in self.preds(t) {
                let p = p as usize;
                if a.contains(p) && !result.contains(p) {
                    result.insert(p);
                    queue.push_back(p);
                }
            }
        }
        result
    }

    /// Least fixpoint `b ∪ (a ∩ AX ·)`: a state joins once all its
    /// successors have.
    fn always_until(&self, a: &FixedBitSet, mut result: FixedBitSet) -> FixedBitSet {
        let mut pending: Vec<u32> = (0..self.n())
            .map(|s| self.ts.successors(s).len() as u32)
            .collect();
        let mut queue: VecDeque<usize> = result.ones().collect();
        while let Some(t) = queue.pop_front() {
            for &p in self.preds(t) {
                let p = p as usize;
                if result.contains(p) {
                    continue;
                }
                pending[p] -= 1;
                if pending[p] == 0 && a.contains(p) {
                    result.insert(p);
                    queue.push_back(p);
                }
            }
        }
        result
    }

    /// Greatest fixpoint `a ∩ EX ·`: repeatedly drop states of `a` with no
    /// successor left in the set.
    fn exists_globally(&self, mut set: FixedBitSet) -> FixedBitSet {
        let mut inside: Vec<u32> = vec![0; self.n()];
        let mut queue = VecDeque::new();
        for s in set.ones() {
            inside[s] = self
                .ts
                .successors(s)
                .iter()
                .filter(|&&t| set.contains(t as usize))
                .count() as u32;
            if inside[s] == 0 {
                queue.push_back(s);
            }
        }
        for &s in &queue {
            set.set(s, false);
        }
        while let Some(t) = queue.pop_front() {
            for &p in self.preds(t) {
                let p = p as usize;
                if set.contains(p) {
                    inside[p] -= 1;
                    if inside[p] == 0 {
                        set.set(p, false);
                        queue.push_back(p);
                    }
                }
            }
        }
        set
    }

    /// Finite stem from the initial state into `g` for a formula `EF g`;
    /// when `g` is `EG h`, additionally a cycle inside `EG h`.
    pub fn witness(&mut self, f: &Formula) -> Result<Option<Witness>, CtlError> {
        let Formula::EF(g) = f else {
            return Err(CtlError::UnsupportedWitness(f.to_string()));
        };
        let target = self.eval(g)?;
        let Some(mut stem) = self.shortest_path(&target) else {
            return Ok(None);
        };
        let mut cycle = Vec::new();
        if matches!(**g, Formula::EG(_)) {
            // walk inside the EG set until a state repeats
            let mut order: HashMap<usize, usize> = HashMap::new();
            let mut walk = vec![*stem.last().unwrap()];
            order.insert(walk[0], 0);
            loop {
                let s = *walk.last().unwrap();
                let next = self
                    .ts
                    .successors(s)
                    .iter()
                    .map(|&t| t as usize)
                    .find(|&t| target.contains(t))
                    .expect("every EG state has a successor in the set");
                if let Some(&k) = order.get(&next) {
                    cycle = walk[k..].to_vec();
                    stem.extend_from_slice(&walk[1..=k]);
                    break;
                }
                order.insert(next, walk.len());
                walk.push(next);
            }
        }
        Ok(Some(Witness { stem, cycle }))
    }

    fn shortest_path(&self, target: &FixedBitSet) -> Option<Vec<usize>> {
        let init = self.ts.initial();
        let mut parent = vec![u32::MAX; self.n()];
        parent[init] = init as u32;
        let mut queue = VecDeque::from([init]);
        while let Some(s) = queue.pop_front() {
            if target.contains(s) {
                let mut path = vec![s];
                let mut cur = s;
                while cur != init {
                    cur = parent[cur] as usize;
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &t in self.ts.successors(s) {
                if parent[t as usize] == u32::MAX {
                    parent[t as usize] = s as u32;
                    queue.push_back(t as usize);
                }
            }
        }
        None
    }
}

/// A lasso-shaped run: `stem` from the initial state, then `cycle` repeated
/// forever (empty when only reachability is witnessed). The last state of
/// `stem` is the first state of `cycle`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

/// One-shot evaluation.
pub fn eval(ts: &TransitionSystem, f: &Formula) -> Result<FixedBitSet, CtlError> {
    Checker::new(ts).eval(f)
}

pub fn holds_initially(ts: &TransitionSystem, f: &Formula) -> Result<bool, CtlError> {
    Checker::new(ts).holds_initially(f)
}

pub fn witness(ts: &TransitionSystem, f: &Formula) -> Result<Option<Witness>, CtlError> {
    Checker::new(ts).witness(f)
}
