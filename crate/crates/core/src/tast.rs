//! Networks of timed automata with synchronised tasks.
//!
//! Each automaton owns one clock `x` and, once the urgency transform has
//! run, one urgency clock `u`. Locations are either activity locations
//! (timed work bounded by `x < c`) or wait locations (communication only).

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::spec::ComponentKind;

pub type LocId = usize;

/// A synchronisation channel.
///
/// Lock and unlock channels carry the client once demultiplexed; before that
/// every client shares `lock`/`unlock` of the memory.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Channel {
    Data { from: String, to: String },
    Lock { memory: String, client: Option<String> },
    Unlock { memory: String, client: Option<String> },
}

impl Channel {
    pub fn is_unlock(&self) -> bool {
        matches!(self, Channel::Unlock { .. })
    }

    pub fn is_lock(&self) -> bool {
        matches!(self, Channel::Lock { .. })
    }

    /// Identifier-safe rendering (`k_S1_F1`, `lock_F1_M`, `unlock_M`).
    pub fn ident(&self) -> String {
        match self {
            Channel::Data { from, to } => format!("k_{from}_{to}"),
            Channel::Lock { memory, client } => match client {
                Some(c) => format!("lock_{c}_{memory}"),
                None => format!("lock_{memory}"),
            },
            Channel::Unlock { memory, client } => match client {
                Some(c) => format!("unlock_{c}_{memory}"),
                None => format!("unlock_{memory}"),
            },
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Data { from, to } => write!(f, "k_{{{from}-{to}}}"),
            Channel::Lock { client: None, .. } => f.write_str("lock"),
            Channel::Lock {
                memory,
                client: Some(c),
            } => write!(f, "lock_{{{c}-{memory}}}"),
            Channel::Unlock { client: None, .. } => f.write_str("unlock"),
            Channel::Unlock {
                memory,
                client: Some(c),
            } => write!(f, "unlock_{{{c}-{memory}}}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LocationKind {
    Activity,
    Wait,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Location {
    pub name: String,
    pub kind: LocationKind,
    /// Strict upper bound: the invariant is `x < c`.
    pub invariant: Option<u32>,
    /// Carries the urgency invariant `u ≤ 0`.
    pub urgent: bool,
    /// For a primed copy, the wait location it was split from.
    pub primed_of: Option<LocId>,
}

impl Location {
    pub fn activity(name: impl Into<String>, invariant: Option<u32>) -> Self {
        Location {
            name: name.into(),
            kind: LocationKind::Activity,
            invariant,
            urgent: false,
            primed_of: None,
        }
    }

    pub fn wait(name: impl Into<String>) -> Self {
        Location {
            name: name.into(),
            kind: LocationKind::Wait,
            invariant: None,
            urgent: false,
            primed_of: None,
        }
    }

    pub fn is_wait(&self) -> bool {
        self.kind == LocationKind::Wait
    }
}

/// "Peer automaton is in none of these locations."
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeerAbsent {
    pub automaton: usize,
    pub locations: Vec<LocId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Action {
    /// Internal move guarded by `x ≥ e`.
    Guard(u32),
    Send(Channel),
    Receive(Channel),
    /// Urgency escape: a conjunction of location predicates over peers.
    Escape(Vec<PeerAbsent>),
}

impl Action {
    pub fn channel(&self) -> Option<&Channel> {
        match self {
            Action::Send(c) | Action::Receive(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_communication(&self) -> bool {
        self.channel().is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: LocId,
    pub to: LocId,
    pub action: Action,
    /// `x := 0`
    pub reset: bool,
    /// `u := 0`
    pub reset_urgency: bool,
}

impl Edge {
    pub fn new(from: LocId, to: LocId, action: Action, reset: bool) -> Self {
        Edge {
            from,
            to,
            action,
            reset,
            reset_urgency: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Automaton {
    pub id: String,
    pub kind: ComponentKind,
    pub locations: Vec<Location>,
    pub edges: Vec<Edge>,
    pub initial: LocId,
}

impl Automaton {
    pub fn location_id(&self, name: &str) -> Option<LocId> {
        self.locations.iter().position(|l| l.name == name)
    }

    pub fn outgoing(&self, loc: LocId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == loc)
    }

    pub fn has_urgency_clock(&self) -> bool {
        self.locations.iter().any(|l| l.urgent)
    }

    /// Locations offering a communication on `channel`.
    pub fn offering(&self, channel: &Channel) -> Vec<LocId> {
        let mut out: Vec<LocId> = self
            .edges
            .iter()
            .filter(|e| e.action.channel() == Some(channel))
            .map(|e| e.from)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Largest constant compared against `x`.
    pub fn max_constant(&self) -> u32 {
        let guards = self.edges.iter().filter_map(|e| match e.action {
            Action::Guard(c) => Some(c),
            _ => None,
        });
        let invariants = self.locations.iter().filter_map(|l| l.invariant);
        guards.chain(invariants).max().unwrap_or(0)
    }

    /// Digital-clocks ceiling of `x`: one above every compared constant.
    pub fn clock_ceiling(&self) -> u32 {
        self.max_constant() + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Network {
    pub name: String,
    pub automata: Vec<Automaton>,
}

impl Network {
    pub fn automaton(&self, id: &str) -> Option<&Automaton> {
        self.automata.iter().find(|a| a.id == id)
    }

    pub fn automaton_index(&self, id: &str) -> Option<usize> {
        self.automata.iter().position(|a| a.id == id)
    }

    pub fn channels(&self) -> BTreeSet<Channel> {
        self.automata
            .iter()
            .flat_map(|a| a.edges.iter())
            .filter_map(|e| e.action.channel().cloned())
            .collect()
    }

    /// Automata sending and receiving on `channel`, in network order.
    pub fn endpoints(&self, channel: &Channel) -> (Vec<usize>, Vec<usize>) {
        let mut senders = Vec::new();
        let mut receivers = Vec::new();
        for (i, a) in self.automata.iter().enumerate() {
            for e in &a.edges {
                match &e.action {
                    Action::Send(c) if c == channel && !senders.contains(&i) => senders.push(i),
                    Action::Receive(c) if c == channel && !receivers.contains(&i) => {
                        receivers.push(i)
                    }
                    _ => {}
                }
            }
        }
        (senders, receivers)
    }

    /// Every timing constant used by a guard or an invariant.
    pub fn constants(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for a in &self.automata {
            out.extend(a.locations.iter().filter_map(|l| l.invariant));
            out.extend(a.edges.iter().filter_map(|e| match e.action {
                Action::Guard(c) => Some(c),
                _ => None,
            }));
        }
        out
    }

    /// Activity locations of aperiodic sensors: indefinite waiting there is
    /// intrinsic and needs no model checking.
    pub fn aperiodic_sites(&self) -> Vec<(usize, LocId)> {
        self.automata
            .iter()
            .enumerate()
            .filter(|(_, a)| a.kind == ComponentKind::Aperiodic)
            .map(|(i, a)| (i, a.initial))
            .collect()
    }
}
