use crate::tast::{Action, Channel, Network};
use crate::transform::UrgencyFreeNetwork;

use super::{InvariantBound, Semantics, URGENCY_CEILING};

const NO_BOUND: u16 = u16::MAX;

#[derive(Debug, Clone, Copy)]
struct Move {
    to: u16,
    guard: u16,
    reset: bool,
    reset_urgency: bool,
}

#[derive(Debug, Clone)]
struct Escape {
    mv: Move,
    /// (peer, locations the peer must avoid)
    absent: Vec<(usize, Vec<u16>)>,
}

#[derive(Debug, Clone)]
struct Compiled {
    id: String,
    names: Vec<String>,
    initial: u16,
    ceiling: u16,
    has_urgency: bool,
    /// Largest admissible `x` per location.
    x_max: Vec<u16>,
    urgent: Vec<bool>,
    internal: Vec<Vec<Move>>,
    escapes: Vec<Vec<Escape>>,
    /// Per location: (channel index, move) for each send.
    sends: Vec<Vec<(usize, Move)>>,
}

/// Discrete-time successor relation of a (transformed) network.
///
/// Time passes in unit ticks only when every invariant still holds
/// afterwards; synchronisations are plain binary rendezvous, so urgency must
/// come from the urgency transform.
#[derive(Debug, Clone)]
pub struct DigitalClocks {
    automata: Vec<Compiled>,
    /// Per channel: (receiver automaton, per-location receive moves).
    receivers: Vec<Vec<(usize, Vec<Vec<Move>>)>>,
}

impl DigitalClocks {
    pub fn new(net: &UrgencyFreeNetwork, bound: InvariantBound) -> Self {
        Self::from_network(&net.network, bound)
    }

    /// Compiles any network; without urgent locations this is the plain
    /// non-urgent digital-clocks semantics.
    pub fn from_network(net: &Network, bound: InvariantBound) -> Self {
        let channels: Vec<Channel> = net.channels().into_iter().collect();
        let chan_index = |c: &Channel| channels.binary_search(c).expect("channel is collected");
        let as_move = |e: &crate::tast::Edge| Move {
            to: e.to as u16,
            guard: match e.action {
                Action::Guard(g) => g as u16,
                _ => 0,
            },
            reset: e.reset,
            reset_urgency: e.reset_urgency,
        };

        let mut receivers: Vec<Vec<(usize, Vec<Vec<Move>>)>> = vec![Vec::new(); channels.len()];
        let automata = net
            .automata
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let n = a.locations.len();
                let mut internal = vec![Vec::new(); n];
                let mut escapes = vec![Vec::new(); n];
                let mut sends = vec![Vec::new(); n];
                for e in &a.edges {
                    match &e.action {
                        Action::Guard(_) => internal[e.from].push(as_move(e)),
                        Action::Escape(absent) => escapes[e.from].push(Escape {
                            mv: as_move(e),
                            absent: absent
                                .iter()
                                .map(|p| (p.automaton, p.locations.iter().map(|&l| l as u16).collect()))
                                .collect(),
                        }),
                        Action::Send(c) => sends[e.from].push((chan_index(c), as_move(e))),
                        Action::Receive(c) => {
                            let slot = &mut receivers[chan_index(c)];
                            let pos = match slot.iter().position(|(i, _)| *i == ai) {
                                Some(p) => p,
                                None => {
                                    slot.push((ai, vec![Vec::new(); n]));
                                    slot.len() - 1
                                }
                            };
                            slot[pos].1[e.from].push(as_move(e));
                        }
                    }
                }
                Compiled {
                    id: a.id.clone(),
                    names: a.locations.iter().map(|l| l.name.clone()).collect(),
                    initial: a.initial as u16,
                    ceiling: a.clock_ceiling() as u16,
                    has_urgency: a.has_urgency_clock(),
                    x_max: a
                        .locations
                        .iter()
                        .map(|l| l.invariant.map_or(NO_BOUND, |c| bound.max_value(c) as u16))
                        .collect(),
                    urgent: a.locations.iter().map(|l| l.urgent).collect(),
                    internal,
                    escapes,
                    sends,
                }
            })
            .collect();
        DigitalClocks {
            automata,
            receivers,
        }
    }

    fn n(&self) -> usize {
        self.automata.len()
    }

    /// Ceilings of `x` per automaton.
    pub fn ceilings(&self) -> Vec<u16> {
        self.automata.iter().map(|a| a.ceiling).collect()
    }

    fn admissible(&self, a: usize, loc: u16, x: u16, u: u16) -> bool {
        let c = &self.automata[a];
        x <= c.x_max[loc as usize] && (!c.urgent[loc as usize] || u == 0)
    }

    /// Applies `mv` of automaton `a` in place; false if the target invariant fails.
    fn apply(&self, a: usize, mv: &Move, s: &mut [u16]) -> bool {
        let n = self.n();
        s[a] = mv.to;
        if mv.reset {
            s[n + a] = 0;
        }
        if mv.reset_urgency {
            s[2 * n + a] = 0;
        }
        self.admissible(a, mv.to, s[n + a], s[2 * n + a])
    }
}

impl Semantics for DigitalClocks {
    fn automata(&self) -> Vec<String> {
        self.automata.iter().map(|a| a.id.clone()).collect()
    }

    fn location_names(&self) -> Vec<Vec<String>> {
        self.automata.iter().map(|a| a.names.clone()).collect()
    }

    fn initial(&self) -> Vec<u16> {
        let n = self.n();
        let mut s = vec![0; 3 * n];
        for (i, a) in self.automata.iter().enumerate() {
            s[i] = a.initial;
        }
        s
    }

    fn invariants_hold(&self, s: &[u16]) -> bool {
        let n = self.n();
        (0..n).all(|a| self.admissible(a, s[a], s[n + a], s[2 * n + a]))
    }

    fn successors(&self, s: &[u16], out: &mut Vec<Vec<u16>>) {
        let n = self.n();

        // (a) tick
        let mut t = s.to_vec();
        for (i, a) in self.automata.iter().enumerate() {
            t[n + i] = (t[n + i] + 1).min(a.ceiling);
            if a.has_urgency {
                t[2 * n + i] = (t[2 * n + i] + 1).min(URGENCY_CEILING);
            }
        }
        if self.invariants_hold(&t) {
            out.push(t);
        }

        for (i, a) in self.automata.iter().enumerate() {
            let loc = s[i] as usize;
            let x = s[n + i];
            // (b) internal moves
            for mv in &a.internal[loc] {
                if x >= mv.guard {
                    let mut t = s.to_vec();
                    if self.apply(i, mv, &mut t) {
                        out.push(t);
                    }
                }
            }
            // (d) escape moves
            for esc in &a.escapes[loc] {
                let clear = esc
                    .absent
                    .iter()
                    .all(|(peer, locs)| !locs.contains(&s[*peer]));
                if clear {
                    let mut t = s.to_vec();
                    if self.apply(i, &esc.mv, &mut t) {
                        out.push(t);
                    }
                }
            }
            // (c) binary synchronisations, sender side drives
            for (ch, send) in &a.sends[loc] {
                for (j, per_loc) in &self.receivers[*ch] {
                    if *j == i {
                        continue;
                    }
                    for recv in &per_loc[s[*j] as usize] {
                        let mut t = s.to_vec();
                        if self.apply(i, send, &mut t) && self.apply(*j, recv, &mut t) {
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
}
