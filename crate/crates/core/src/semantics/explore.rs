use std::hash::BuildHasherDefault;
use std::io::{self, Write};

use indexmap::IndexSet;
use rustc_hash::FxHasher;
use thiserror::Error;

use super::Semantics;

/// Default bound on explored transitions.
pub const DEFAULT_STATE_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("initial state violates a location invariant")]
    InitialInvariant,
    #[error("exploration cap of {cap} transitions reached with {states} states stored and {frontier} still unexplored")]
    StateCap {
        cap: u64,
        states: usize,
        frontier: usize,
    },
    #[error("state space exceeds {} states", u32::MAX)]
    TooManyStates,
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Maximum number of transitions explored before giving up.
    pub transition_cap: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            transition_cap: DEFAULT_STATE_CAP,
        }
    }
}

/// Explicit Kripke structure over the reachable states, in BFS order.
#[derive(Debug, Clone)]
pub struct TransitionSystem {
    automata: Vec<String>,
    locations: Vec<Vec<String>>,
    stride: usize,
    states: Vec<u16>,
    offsets: Vec<u32>,
    successors: Vec<u32>,
}

impl TransitionSystem {
    /// Builds a transition system from explicit parts. `states` holds
    /// `stride` values per state, the first `automata.len()` being locations.
    pub fn from_parts(
        automata: Vec<String>,
        locations: Vec<Vec<String>>,
        stride: usize,
        states: Vec<u16>,
        adjacency: Vec<Vec<u32>>,
    ) -> Self {
        assert_eq!(states.len(), stride * adjacency.len());
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        let mut successors = Vec::new();
        offsets.push(0);
        for (i, mut succ) in adjacency.into_iter().enumerate() {
            succ.sort_unstable();
            succ.dedup();
            if succ.is_empty() {
                succ.push(i as u32);
            }
            successors.extend(succ);
            offsets.push(successors.len() as u32);
        }
        TransitionSystem {
            automata,
            locations,
            stride,
            states,
            offsets,
            successors,
        }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn transition_count(&self) -> usize {
        self.successors.len()
    }

    pub fn successors(&self, state: usize) -> &[u32] {
        &self.successors[self.offsets[state] as usize..self.offsets[state + 1] as usize]
    }

    pub fn state(&self, index: usize) -> &[u16] {
        &self.states[index * self.stride..(index + 1) * self.stride]
    }

    /// Location of `automaton` in state `index`.
    pub fn location(&self, index: usize, automaton: usize) -> usize {
        self.states[index * self.stride + automaton] as usize
    }

    pub fn automata(&self) -> &[String] {
        &self.automata
    }

    pub fn location_names(&self, automaton: usize) -> &[String] {
        &self.locations[automaton]
    }

    pub fn automaton_index(&self, name: &str) -> Option<usize> {
        self.automata.iter().position(|a| a == name)
    }

    pub fn location_index(&self, automaton: usize, name: &str) -> Option<usize> {
        self.locations.get(automaton)?.iter().position(|l| l == name)
    }

    /// `(component, location)` atoms holding in a state.
    pub fn labels(&self, index: usize) -> Vec<(&str, &str)> {
        (0..self.automata.len())
            .map(|a| {
                (
                    self.automata[a].as_str(),
                    self.locations[a][self.location(index, a)].as_str(),
                )
            })
            .collect()
    }

    /// Predecessor lists in CSR form: `(offsets, sources)`.
    pub fn predecessors(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.len();
        let mut counts = vec![0u32; n + 1];
        for &t in &self.successors {
            counts[t as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut preds = vec![0u32; self.successors.len()];
        for s in 0..n {
            for &t in self.successors(s) {
                preds[fill[t as usize] as usize] = s as u32;
                fill[t as usize] += 1;
            }
        }
        (counts, preds)
    }

    /// One line per transition: `source destination`.
    pub fn write_adjacency(&self, mut w: impl Write) -> io::Result<()> {
        for s in 0..self.len() {
            for t in self.successors(s) {
                writeln!(w, "{s} {t}")?;
            }
        }
        Ok(())
    }

    /// One line per state: index, location names, remaining clock values.
    pub fn write_state_table(&self, mut w: impl Write) -> io::Result<()> {
        let n = self.automata.len();
        writeln!(w, "# index\t{}\tclocks", self.automata.join(" "))?;
        for s in 0..self.len() {
            let locs: Vec<&str> = (0..n)
                .map(|a| self.locations[a][self.location(s, a)].as_str())
                .collect();
            let clocks: Vec<String> = self.state(s)[n..].iter().map(u16::to_string).collect();
            writeln!(w, "{s}\t{}\t{}", locs.join(" "), clocks.join(" "))?;
        }
        Ok(())
    }
}

type FxIndexSet<T> = IndexSet<T, BuildHasherDefault<FxHasher>>;

/// Breadth-first closure of the successor relation from the initial state.
/// States are numbered in discovery order; dead ends get a self-loop.
pub fn build_with<S: Semantics>(sem: &S, opts: BuildOptions) -> Result<TransitionSystem, BuildError> {
    let init = sem.initial();
    if !sem.invariants_hold(&init) {
        return Err(BuildError::InitialInvariant);
    }
    let stride = init.len();
    let mut seen: FxIndexSet<Box<[u16]>> = FxIndexSet::default();
    seen.insert(init.into_boxed_slice());
    let mut offsets: Vec<u32> = vec![0];
    let mut successors: Vec<u32> = Vec::new();
    let mut buf = Vec::new();
    let mut succ = Vec::new();
    let mut explored: u64 = 0;
    let mut next = 0;
    while next < seen.len() {
        buf.clear();
        sem.successors(&seen[next], &mut buf);
        explored += buf.len() as u64;
        if explored > opts.transition_cap {
            return Err(BuildError::StateCap {
                cap: opts.transition_cap,
                states: seen.len(),
                frontier: seen.len() - next,
            });
        }
        succ.clear();
        for t in buf.drain(..) {
            let (idx, _) = seen.insert_full(t.into_boxed_slice());
            succ.push(u32::try_from(idx).map_err(|_| BuildError::TooManyStates)?);
        }
        succ.sort_unstable();
        succ.dedup();
        if succ.is_empty() {
            succ.push(next as u32);
        }
        successors.extend_from_slice(&succ);
        offsets.push(
            u32::try_from(successors.len()).map_err(|_| BuildError::TooManyStates)?,
        );
        next += 1;
    }
    let mut states = Vec::with_capacity(seen.len() * stride);
    for s in seen {
        states.extend_from_slice(&s);
    }
    Ok(TransitionSystem {
        automata: sem.automata(),
        locations: sem.location_names(),
        stride,
        states,
        offsets,
        successors,
    })
}

/// [`build_with`] under the default cap.
pub fn build_ts<S: Semantics>(sem: &S) -> Result<TransitionSystem, BuildError> {
    build_with(sem, BuildOptions::default())
}
