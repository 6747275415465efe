//! Structural analyses of an elaborated network: Zeno-freedom and the
//! static partition of wait locations.

use serde::Serialize;

use crate::tast::{Action, Automaton, LocId, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZenoReason {
    /// Some loop crosses no guard `x ≥ e` with `e > 0`.
    NoPositiveGuard,
    /// Some loop never resets `x`.
    NoReset,
}

/// A set of locations carrying a loop that breaks the non-Zeno condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZenoViolation {
    pub automaton: String,
    pub reason: ZenoReason,
    pub locations: Vec<String>,
}

/// Strongly connected components of the subgraph made of `keep` edges.
fn components(a: &Automaton, keep: &[bool]) -> Vec<usize> {
    let n = a.locations.len();
    let succ: Vec<Vec<LocId>> = (0..n)
        .map(|l| {
            a.edges
                .iter()
                .zip(keep)
                .filter(|(e, k)| **k && e.from == l)
                .map(|(e, _)| e.to)
                .collect()
        })
        .collect();

    // iterative Tarjan
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Reports every loop that neither crosses a positive guard and a reset nor
/// consists of input actions only.
///
/// A loop avoiding all positive guards is a cycle of the subgraph without
/// such guards; it is harmful when it contains an edge that is not an input.
/// That edge lies on such a cycle iff both its ends share a strongly
/// connected component of the subgraph. The same holds for resets.
pub fn check_zeno_free(net: &Network) -> Vec<ZenoViolation> {
    let mut out = Vec::new();
    for a in &net.automata {
        for reason in [ZenoReason::NoPositiveGuard, ZenoReason::NoReset] {
            let keep: Vec<bool> = a
                .edges
                .iter()
                .map(|e| match reason {
                    ZenoReason::NoPositiveGuard => !matches!(e.action, Action::Guard(g) if g > 0),
                    ZenoReason::NoReset => !e.reset,
                })
                .collect();
            let comp = components(a, &keep);
            let mut flagged: Vec<usize> = a
                .edges
                .iter()
                .zip(&keep)
                .filter(|(e, k)| {
                    **k && comp[e.from] == comp[e.to] && !matches!(e.action, Action::Receive(_))
                })
                .map(|(e, _)| comp[e.from])
                .collect();
            flagged.sort_unstable();
            flagged.dedup();
            for c in flagged {
                out.push(ZenoViolation {
                    automaton: a.id.clone(),
                    reason,
                    locations: (0..a.locations.len())
                        .filter(|&l| comp[l] == c)
                        .map(|l| a.locations[l].name.clone())
                        .collect(),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StaticSet {
    /// Origin of an unlock: immune to every kind of indefinite waiting.
    #[serde(rename = "N")]
    N,
    /// Origin of a lock request: can only starve.
    #[serde(rename = "onlyS")]
    OnlyS,
    /// Every other wait location.
    #[serde(rename = "W")]
    W,
}

impl std::fmt::Display for StaticSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StaticSet::N => "N",
            StaticSet::OnlyS => "onlyS",
            StaticSet::W => "W",
        })
    }
}

/// Wait locations split into N, onlyS and W, each keyed by
/// (automaton index, location).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StaticPartition {
    pub n: Vec<(usize, LocId)>,
    pub only_s: Vec<(usize, LocId)>,
    pub w: Vec<(usize, LocId)>,
}

impl StaticPartition {
    pub fn set_of(&self, automaton: usize, loc: LocId) -> Option<StaticSet> {
        let key = (automaton, loc);
        if self.n.contains(&key) {
            Some(StaticSet::N)
        } else if self.only_s.contains(&key) {
            Some(StaticSet::OnlyS)
        } else if self.w.contains(&key) {
            Some(StaticSet::W)
        } else {
            None
        }
    }

    /// All classified locations in (automaton, location) order.
    pub fn all(&self) -> Vec<((usize, LocId), StaticSet)> {
        let mut out: Vec<_> = self
            .n
            .iter()
            .map(|k| (*k, StaticSet::N))
            .chain(self.only_s.iter().map(|k| (*k, StaticSet::OnlyS)))
            .chain(self.w.iter().map(|k| (*k, StaticSet::W)))
            .collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }
}

/// Classifies each original wait location by the actions leaving it.
/// Primed copies introduced by the urgency transform are not classified.
pub fn static_partition(net: &Network) -> StaticPartition {
    let mut part = StaticPartition::default();
    for (i, a) in net.automata.iter().enumerate() {
        for (l, loc) in a.locations.iter().enumerate() {
            if !loc.is_wait() || loc.primed_of.is_some() {
                continue;
            }
            let channels: Vec<_> = a.outgoing(l).filter_map(|e| e.action.channel()).collect();
            let sends_lock = a
                .outgoing(l)
                .any(|e| matches!(&e.action, Action::Send(c) if c.is_lock()));
            if channels.iter().any(|c| c.is_unlock()) {
                part.n.push((i, l));
            } else if sends_lock {
                part.only_s.push((i, l));
            } else {
                part.w.push((i, l));
            }
        }
    }
    part
}
