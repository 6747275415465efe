//! Network rewrites towards n-ary, non-urgent synchronisation semantics:
//! lock/unlock demultiplexing and the urgency emulation construction.

use serde::Serialize;

use crate::spec::ComponentKind;
use crate::tast::{Action, Automaton, Channel, Edge, LocId, Location, Network, PeerAbsent};

/// Gives every memory client its own `lock_{C-M}` / `unlock_{C-M}` pair.
///
/// A memory with several clients is rebuilt as one
/// `s0 -lock_{C-M}?-> s1_C -unlock_{C-M}?-> s0` branch per client so that
/// the unlock always comes back from the client holding the lock. With a
/// single client only channel names change.
pub fn demux_channels(net: &Network) -> Network {
    let mut clients: Vec<(String, Vec<String>)> = Vec::new();
    for m in net.automata.iter().filter(|a| a.kind == ComponentKind::Memory) {
        let users = net
            .automata
            .iter()
            .filter(|a| {
                a.edges.iter().any(|e| {
                    matches!(&e.action, Action::Send(Channel::Lock { memory, .. }) if *memory == m.id)
                })
            })
            .map(|a| a.id.clone())
            .collect();
        clients.push((m.id.clone(), users));
    }

    let automata = net
        .automata
        .iter()
        .map(|a| {
            if a.kind == ComponentKind::Memory {
                let users = &clients.iter().find(|(m, _)| *m == a.id).unwrap().1;
                memory_branches(a, users)
            } else {
                let mut a = a.clone();
                let me = a.id.clone();
                for e in &mut a.edges {
                    if let Action::Send(Channel::Lock { client, .. } | Channel::Unlock { client, .. }) =
                        &mut e.action
                    {
                        *client = Some(me.clone());
                    }
                }
                a
            }
        })
        .collect();
    Network {
        name: net.name.clone(),
        automata,
    }
}

fn memory_branches(memory: &Automaton, clients: &[String]) -> Automaton {
    let mut locations = vec![Location::wait("s0")];
    let mut edges = Vec::new();
    for client in clients {
        let name = if clients.len() == 1 {
            "s1".to_string()
        } else {
            format!("s1_{client}")
        };
        locations.push(Location::wait(name));
        let held = locations.len() - 1;
        let lock = Channel::Lock {
            memory: memory.id.clone(),
            client: Some(client.clone()),
        };
        let unlock = Channel::Unlock {
            memory: memory.id.clone(),
            client: Some(client.clone()),
        };
        edges.push(Edge::new(0, held, Action::Receive(lock), false));
        edges.push(Edge::new(held, 0, Action::Receive(unlock), false));
    }
    if clients.is_empty() {
        // no client: keep the original shape, nothing can ever synchronise
        return memory.clone();
    }
    Automaton {
        id: memory.id.clone(),
        kind: memory.kind,
        locations,
        edges,
        initial: 0,
    }
}

/// Network whose urgent synchronisations are emulated structurally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UrgencyFreeNetwork {
    pub network: Network,
    /// `primed[a][w]` is the copy `w′` of wait location `w` of automaton `a`.
    pub primed: Vec<Vec<Option<LocId>>>,
}

impl UrgencyFreeNetwork {
    pub fn primed_of(&self, automaton: usize, loc: LocId) -> Option<LocId> {
        self.primed.get(automaton)?.get(loc).copied().flatten()
    }

    /// Maps a location of the transformed network back to the original one
    /// (`w′ ↦ w`).
    pub fn original(&self, automaton: usize, loc: LocId) -> LocId {
        self.network.automata[automaton].locations[loc]
            .primed_of
            .unwrap_or(loc)
    }
}

/// Applies the urgency emulation to every location with outgoing
/// communication edges.
///
/// Such a location `w` gets the invariant `u ≤ 0` (and `u := 0` on all edges
/// entering it), a copy `w′` without invariant that repeats the
/// communication edges of `w`, and an escape edge `w → w′` enabled only when
/// no peer sits at (or at the copy of) a location offering the matching
/// action.
pub fn emulate_urgency(net: &Network) -> UrgencyFreeNetwork {
    let urgent: Vec<Vec<bool>> = net
        .automata
        .iter()
        .map(|a| {
            (0..a.locations.len())
                .map(|l| a.outgoing(l).any(|e| e.action.is_communication()))
                .collect()
        })
        .collect();

    let primed: Vec<Vec<Option<LocId>>> = net
        .automata
        .iter()
        .zip(&urgent)
        .map(|(a, flags)| {
            let mut next = a.locations.len();
            flags
                .iter()
                .map(|&u| {
                    u.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();

    let automata = net
        .automata
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let mut locations = a.locations.clone();
            for (l, loc) in locations.iter_mut().enumerate() {
                loc.urgent = urgent[ai][l];
            }
            let mut edges: Vec<Edge> = a.edges.clone();
            for (l, &is_urgent) in urgent[ai].iter().enumerate() {
                if !is_urgent {
                    continue;
                }
                let copy = primed[ai][l].unwrap();
                let mut loc = Location::wait(format!("{}'", a.locations[l].name));
                loc.primed_of = Some(l);
                locations.push(loc);
                debug_assert_eq!(locations.len() - 1, copy);

                let comms: Vec<&Edge> = a.outgoing(l).filter(|e| e.action.is_communication()).collect();
                edges.push(Edge::new(l, copy, Action::Escape(escape_guard(net, ai, &comms, &primed)), false));
                for e in comms {
                    edges.push(Edge {
                        from: copy,
                        ..e.clone()
                    });
                }
            }
            for e in &mut edges {
                e.reset_urgency = urgent[ai].get(e.to).copied().unwrap_or(false);
            }
            Automaton {
                locations,
                edges,
                ..a.clone()
            }
        })
        .collect();

    UrgencyFreeNetwork {
        network: Network {
            name: net.name.clone(),
            automata,
        },
        primed,
    }
}

/// One `PeerAbsent` per distinct channel of `comms`: the peer holding the
/// other end of the channel is at none of the locations offering it, nor at
/// their copies.
fn escape_guard(
    net: &Network,
    me: usize,
    comms: &[&Edge],
    primed: &[Vec<Option<LocId>>],
) -> Vec<PeerAbsent> {
    let mut guard: Vec<PeerAbsent> = Vec::new();
    let mut done: Vec<&Channel> = Vec::new();
    for e in comms {
        let ch = e.action.channel().unwrap();
        if done.contains(&ch) {
            continue;
        }
        done.push(ch);
        let want_send = matches!(e.action, Action::Receive(_));
        for (pi, peer) in net.automata.iter().enumerate() {
            if pi == me {
                continue;
            }
            let mut locs: Vec<LocId> = peer
                .edges
                .iter()
                .filter(|pe| match &pe.action {
                    Action::Send(c) => want_send && c == ch,
                    Action::Receive(c) => !want_send && c == ch,
                    _ => false,
                })
                .map(|pe| pe.from)
                .collect();
            if locs.is_empty() {
                continue;
            }
            locs.sort_unstable();
            locs.dedup();
            let copies: Vec<LocId> = locs.iter().filter_map(|&l| primed[pi][l]).collect();
            let mut all = Vec::with_capacity(locs.len() * 2);
            for (l, c) in locs.iter().zip(copies.iter()) {
                all.push(*l);
                all.push(*c);
            }
            guard.push(PeerAbsent {
                automaton: pi,
                locations: all,
            });
        }
    }
    guard
}
