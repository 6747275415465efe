//! Translation of a resolved specification into one automaton per component.

use std::collections::VecDeque;

use thiserror::Error;

use crate::spec::{Component, ComponentDecl, Interval, ResolvedSpec, Source};
use crate::tast::{Action, Automaton, Channel, Edge, LocId, Location, LocationKind, Network};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElaborateError {
    #[error("no interval for source `{source_id}` of `{component}`: no later source in the list carries one")]
    UnresolvedInterval { component: String, source_id: String },
    #[error("`{client}` targets memory `{memory}` which does not list it")]
    NotAMemoryClient { client: String, memory: String },
    #[error("automaton `{automaton}` violates a structural rule: {message}")]
    Malformed { automaton: String, message: String },
}

/// Effective interval of every source, in list order.
///
/// A source without an interval takes the interval of the nearest following
/// source that has one.
pub fn source_intervals(
    component: &str,
    sources: &[Source],
) -> Result<Vec<(String, Interval)>, ElaborateError> {
    let mut out = Vec::with_capacity(sources.len());
    for (i, s) in sources.iter().enumerate() {
        let itv = sources[i..]
            .iter()
            .find_map(|s| s.interval)
            .ok_or_else(|| ElaborateError::UnresolvedInterval {
                component: component.to_string(),
                source_id: s.id.clone(),
            })?;
        out.push((s.id.clone(), itv));
    }
    Ok(out)
}

enum Block {
    Data(Channel),
    Memory { memory: String, access: Interval },
}

struct Builder {
    locations: Vec<Location>,
    edges: Vec<Edge>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            locations: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn next_name(&self) -> String {
        format!("s{}", self.locations.len())
    }

    fn wait(&mut self) -> LocId {
        let loc = Location::wait(self.next_name());
        self.locations.push(loc);
        self.locations.len() - 1
    }

    fn activity(&mut self, invariant: Option<u32>) -> LocId {
        let loc = Location::activity(self.next_name(), invariant);
        self.locations.push(loc);
        self.locations.len() - 1
    }

    fn edge(&mut self, from: LocId, to: LocId, action: Action, reset: bool) {
        self.edges.push(Edge::new(from, to, action, reset));
    }

    /// Lays out the output sequence. `entries` are the edges leading into the
    /// sequence; the last edge of the sequence goes to `back`, resetting `x`
    /// when `reset_last` is set.
    fn outputs(
        &mut self,
        entries: Vec<(LocId, Action, bool)>,
        blocks: &[Block],
        back: LocId,
        reset_last: bool,
    ) {
        let mut pending = entries;
        for block in blocks {
            let w = self.wait();
            for (from, action, reset) in pending.drain(..) {
                self.edge(from, w, action, reset);
            }
            match block {
                Block::Data(ch) => pending.push((w, Action::Send(ch.clone()), false)),
                Block::Memory { memory, access } => {
                    let work = self.activity(Some(access.max));
                    self.edge(w, work, Action::Send(lock(memory)), true);
                    let release = self.wait();
                    self.edge(work, release, Action::Guard(access.min), false);
                    pending.push((release, Action::Send(unlock(memory)), false));
                }
            }
        }
        for (from, action, reset) in pending {
            self.edge(from, back, action, reset || reset_last);
        }
    }

    fn finish(self, decl: &ComponentDecl) -> Automaton {
        Automaton {
            id: decl.id.clone(),
            kind: decl.kind(),
            locations: self.locations,
            edges: self.edges,
            initial: 0,
        }
    }
}

fn lock(memory: &str) -> Channel {
    Channel::Lock {
        memory: memory.to_string(),
        client: None,
    }
}

fn unlock(memory: &str) -> Channel {
    Channel::Unlock {
        memory: memory.to_string(),
        client: None,
    }
}

fn data(from: &str, to: &str) -> Channel {
    Channel::Data {
        from: from.to_string(),
        to: to.to_string(),
    }
}

fn output_blocks(spec: &ResolvedSpec, decl: &ComponentDecl) -> Result<Vec<Block>, ElaborateError> {
    let mut blocks = Vec::new();
    for t in &decl.targets {
        let target = spec
            .component(t)
            .expect("resolved targets name declared components");
        match &target.component {
            Component::Memory { sources } => {
                let access = source_intervals(&target.id, sources)?
                    .into_iter()
                    .find(|(s, _)| *s == decl.id)
                    .map(|(_, itv)| itv)
                    .ok_or_else(|| ElaborateError::NotAMemoryClient {
                        client: decl.id.clone(),
                        memory: target.id.clone(),
                    })?;
                blocks.push(Block::Memory {
                    memory: target.id.clone(),
                    access,
                });
            }
            // a memory's targets are the rendering loops reading it
            Component::Rendering { .. } => {}
            _ => blocks.push(Block::Data(data(&decl.id, t))),
        }
    }
    Ok(blocks)
}

fn elaborate_component(
    spec: &ResolvedSpec,
    decl: &ComponentDecl,
) -> Result<Automaton, ElaborateError> {
    let mut b = Builder::new();
    let id = decl.id.as_str();
    match &decl.component {
        Component::Periodic { start, capture } => {
            let boot = b.activity(Some(start.max));
            let capture_loc = b.activity(Some(capture.max));
            b.edge(boot, capture_loc, Action::Guard(start.min), true);
            let blocks = output_blocks(spec, decl)?;
            b.outputs(
                vec![(capture_loc, Action::Guard(capture.min), false)],
                &blocks,
                capture_loc,
                true,
            );
        }
        Component::Aperiodic { min_event } => {
            let idle = b.activity(None);
            let blocks = output_blocks(spec, decl)?;
            b.outputs(vec![(idle, Action::Guard(*min_event), false)], &blocks, idle, true);
        }
        Component::First { sources } => {
            let idle = b.wait();
            let intervals = source_intervals(id, sources)?;
            let mut groups: Vec<(Interval, LocId)> = Vec::new();
            let mut receives = Vec::new();
            for (src, itv) in &intervals {
                let loc = match groups.iter().find(|(i, _)| i == itv) {
                    Some(&(_, loc)) => loc,
                    None => {
                        let loc = b.activity(Some(itv.max));
                        groups.push((*itv, loc));
                        loc
                    }
                };
                receives.push((src.as_str(), loc));
            }
            for (src, loc) in receives {
                b.edge(idle, loc, Action::Receive(data(src, id)), true);
            }
            let entries = groups
                .iter()
                .map(|(itv, loc)| (*loc, Action::Guard(itv.min), false))
                .collect();
            let blocks = output_blocks(spec, decl)?;
            b.outputs(entries, &blocks, idle, false);
        }
        Component::Both { sources, work } => {
            let idle = b.wait();
            let got_second = b.wait();
            let got_first = b.wait();
            let busy = b.activity(Some(work.max));
            let (first, second) = (data(&sources[0], id), data(&sources[1], id));
            b.edge(idle, got_second, Action::Receive(second.clone()), false);
            b.edge(got_second, busy, Action::Receive(first.clone()), true);
            b.edge(idle, got_first, Action::Receive(first), false);
            b.edge(got_first, busy, Action::Receive(second), true);
            let blocks = output_blocks(spec, decl)?;
            b.outputs(vec![(busy, Action::Guard(work.min), false)], &blocks, idle, false);
        }
        Component::Priority {
            master,
            master_work,
            slave,
            slave_work,
        } => {
            let idle = b.wait();
            let alone = b.activity(Some(master_work.max));
            let slave_ready = b.wait();
            let with_slave = b.activity(Some(slave_work.max));
            b.edge(idle, alone, Action::Receive(data(master, id)), true);
            b.edge(idle, slave_ready, Action::Receive(data(slave, id)), false);
            b.edge(slave_ready, with_slave, Action::Receive(data(master, id)), true);
            let blocks = output_blocks(spec, decl)?;
            b.outputs(
                vec![
                    (alone, Action::Guard(master_work.min), false),
                    (with_slave, Action::Guard(slave_work.min), false),
                ],
                &blocks,
                idle,
                false,
            );
        }
        Component::Memory { .. } => {
            let free = b.wait();
            let held = b.wait();
            b.edge(free, held, Action::Receive(lock(id)), false);
            b.edge(held, free, Action::Receive(unlock(id)), false);
        }
        Component::Rendering {
            period,
            memory,
            access,
        } => {
            let idle = b.wait();
            let reading = b.activity(Some(access.max));
            let release = b.wait();
            let rendering = b.activity(Some(period.max));
            b.edge(idle, reading, Action::Send(lock(memory)), true);
            b.edge(reading, release, Action::Guard(access.min), false);
            b.edge(release, rendering, Action::Send(unlock(memory)), true);
            b.edge(rendering, idle, Action::Guard(period.min), false);
        }
    }
    Ok(b.finish(decl))
}

/// Builds the automaton network of a specification, one automaton per
/// component in declaration order, and checks the structural rules.
pub fn elaborate(spec: &ResolvedSpec) -> Result<Network, ElaborateError> {
    let automata = spec
        .components
        .iter()
        .map(|d| elaborate_component(spec, d))
        .collect::<Result<Vec<_>, _>>()?;
    let net = Network {
        name: spec.name.clone(),
        automata,
    };
    if let Some((automaton, message)) = validate(&net).into_iter().next() {
        return Err(ElaborateError::Malformed { automaton, message });
    }
    Ok(net)
}

/// Structural rules every elaborated automaton obeys. Returns one
/// `(automaton, message)` per broken rule.
pub fn validate(net: &Network) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for a in &net.automata {
        let mut bad = |m: String| out.push((a.id.clone(), m));
        if a.initial >= a.locations.len() {
            bad("initial location does not exist".into());
            continue;
        }
        let mut seen = vec![false; a.locations.len()];
        let mut queue = VecDeque::from([a.initial]);
        seen[a.initial] = true;
        while let Some(l) = queue.pop_front() {
            for e in a.outgoing(l) {
                if !seen[e.to] {
                    seen[e.to] = true;
                    queue.push_back(e.to);
                }
            }
        }
        for (l, reached) in seen.iter().enumerate() {
            if !reached {
                bad(format!("location {} is unreachable", a.locations[l].name));
            }
        }
        for (l, loc) in a.locations.iter().enumerate() {
            match loc.kind {
                LocationKind::Activity => {
                    for e in a.outgoing(l) {
                        match e.action {
                            Action::Guard(g) => {
                                if g == 0 {
                                    bad(format!("guard out of {} has a zero bound", loc.name));
                                }
                                if let Some(inv) = loc.invariant {
                                    if g >= inv {
                                        bad(format!(
                                            "guard x >= {g} out of {} can never hold below its invariant x < {inv}",
                                            loc.name
                                        ));
                                    }
                                }
                            }
                            _ => bad(format!("activity location {} has an unguarded exit", loc.name)),
                        }
                    }
                    if a.edges.iter().any(|e| e.to == l && !e.reset) {
                        bad(format!("an edge enters activity location {} without resetting x", loc.name));
                    }
                }
                LocationKind::Wait => {
                    if loc.invariant.is_some() {
                        bad(format!("wait location {} has an invariant", loc.name));
                    }
                    if a.outgoing(l).any(|e| !e.action.is_communication()) {
                        bad(format!("wait location {} has a non-communication exit", loc.name));
                    }
                }
            }
        }
    }
    out
}
