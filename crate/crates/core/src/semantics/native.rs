//! Reference semantics with native urgent binary channels.
//!
//! Works on the untransformed (demultiplexed) network: time may not pass
//! while any send/receive pair is jointly enabled. It shares no code with
//! [`DigitalClocks`](super::DigitalClocks) and serves as the oracle for the
//! urgency emulation.

use crate::tast::{Action, Edge, Network};

use super::{InvariantBound, Semantics};

pub struct UrgentNative<'a> {
    net: &'a Network,
    ceilings: Vec<u16>,
    bound: InvariantBound,
}

impl<'a> UrgentNative<'a> {
    pub fn new(net: &'a Network, bound: InvariantBound) -> Self {
        UrgentNative {
            net,
            bound,
            ceilings: net.automata.iter().map(|a| a.clock_ceiling() as u16).collect(),
        }
    }

    fn fits(&self, a: usize, loc: usize, x: u16) -> bool {
        match self.net.automata[a].locations[loc].invariant {
            Some(c) => u32::from(x) <= self.bound.max_value(c),
            None => true,
        }
    }

    fn fire(&self, a: usize, e: &Edge, s: &mut [u16]) -> bool {
        let n = self.net.automata.len();
        s[a] = e.to as u16;
        if e.reset {
            s[n + a] = 0;
        }
        self.fits(a, e.to, s[n + a])
    }

    fn syncs(&self, s: &[u16]) -> Vec<Vec<u16>> {
        let mut out = Vec::new();
        for (i, a) in self.net.automata.iter().enumerate() {
            for send in a.edges.iter().filter(|e| e.from == s[i] as usize) {
                let Action::Send(ch) = &send.action else { continue };
                for (j, b) in self.net.automata.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    for recv in b.edges.iter().filter(|e| e.from == s[j] as usize) {
                        if recv.action == Action::Receive(ch.clone()) {
                            let mut t = s.to_vec();
                            if self.fire(i, send, &mut t) && self.fire(j, recv, &mut t) {
                                out.push(t);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl Semantics for UrgentNative<'_> {
    fn automata(&self) -> Vec<String> {
        self.net.automata.iter().map(|a| a.id.clone()).collect()
    }

    fn location_names(&self) -> Vec<Vec<String>> {
        self.net
            .automata
            .iter()
            .map(|a| a.locations.iter().map(|l| l.name.clone()).collect())
            .collect()
    }

    fn initial(&self) -> Vec<u16> {
        let mut s: Vec<u16> = self.net.automata.iter().map(|a| a.initial as u16).collect();
        s.extend(std::iter::repeat_n(0, self.net.automata.len()));
        s
    }

    fn invariants_hold(&self, s: &[u16]) -> bool {
        let n = self.net.automata.len();
        (0..n).all(|a| self.fits(a, s[a] as usize, s[n + a]))
    }

    fn successors(&self, s: &[u16], out: &mut Vec<Vec<u16>>) {
        let n = self.net.automata.len();
        let syncs = self.syncs(s);
        if syncs.is_empty() {
            let mut t = s.to_vec();
            for a in 0..n {
                t[n + a] = (t[n + a] + 1).min(self.ceilings[a]);
            }
            if self.invariants_hold(&t) {
                out.push(t);
            }
        }
        for (i, a) in self.net.automata.iter().enumerate() {
            for e in a.edges.iter().filter(|e| e.from == s[i] as usize) {
                if let Action::Guard(g) = e.action {
                    if u32::from(s[n + i]) >= g {
                        let mut t = s.to_vec();
                        if self.fire(i, e, &mut t) {
                            out.push(t);
                        }
                    }
                }
            }
        }
        out.extend(syncs);
    }
}
