//! PRISM-language export of a transformed network, with the digital-clocks
//! encoding spelled out: integer clocks, an explicit global `tick` action
//! and location invariants folded into the guards.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::StaticPartition;
use crate::ctl::Formula;
use crate::semantics::{InvariantBound, URGENCY_CEILING};
use crate::tast::{Action, Automaton, Edge, Network};
use crate::transform::UrgencyFreeNetwork;

/// Integer code of every location: its index in the automaton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NameMap {
    pub automata: Vec<(String, Vec<String>)>,
}

impl NameMap {
    pub fn of(net: &Network) -> Self {
        NameMap {
            automata: net
                .automata
                .iter()
                .map(|a| {
                    let names: Vec<String> = a.locations.iter().map(|l| l.name.clone()).collect();
                    let mut sorted = names.clone();
                    sorted.sort();
                    sorted.dedup();
                    assert_eq!(sorted.len(), names.len(), "duplicate location name in {}", a.id);
                    (a.id.clone(), names)
                })
                .collect(),
        }
    }

    pub fn code(&self, component: &str, location: &str) -> Option<usize> {
        let (_, names) = self.automata.iter().find(|(id, _)| id == component)?;
        names.iter().position(|n| n == location)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedModel {
    pub model: String,
    pub names: NameMap,
}

/// Header information recorded as comments.
#[derive(Debug, Clone, Copy)]
pub struct EmitOptions {
    pub scale: u32,
    pub invariants: InvariantBound,
}

fn loc_var(id: &str) -> String {
    format!("l_{id}")
}

fn x_var(id: &str) -> String {
    format!("x_{id}")
}

fn u_var(id: &str) -> String {
    format!("u_{id}")
}

fn ident(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

pub fn emit_model(unet: &UrgencyFreeNetwork, opts: EmitOptions) -> EmittedModel {
    let net = &unet.network;
    let names = NameMap::of(net);
    let mut out = String::new();
    let _ = writeln!(out, "// {}: generated by mirela {}", net.name, env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        out,
        "// time constants divided by {}; invariants x<c read as x<={}",
        opts.scale,
        match opts.invariants {
            InvariantBound::Weak => "c",
            InvariantBound::Strict => "c-1",
        }
    );
    let _ = writeln!(out, "// location codes:");
    for (id, locs) in &names.automata {
        let codes: Vec<String> = locs.iter().enumerate().map(|(i, n)| format!("{i}={n}")).collect();
        let _ = writeln!(out, "//   {id}: {}", codes.join(" "));
    }
    out.push_str("\nmdp\n");
    for a in &net.automata {
        out.push('\n');
        emit_module(&mut out, net, a, opts.invariants);
    }
    EmittedModel { model: out, names }
}

fn emit_module(out: &mut String, net: &Network, a: &Automaton, bound: InvariantBound) {
    let id = ident(&a.id);
    let (l, x, u) = (loc_var(&id), x_var(&id), u_var(&id));
    let ceiling = a.clock_ceiling();
    let urgency = a.has_urgency_clock();
    let _ = writeln!(out, "module {id}");
    let _ = writeln!(out, "  {l} : [0..{}] init {};", a.locations.len() - 1, a.initial);
    let _ = writeln!(out, "  {x} : [0..{ceiling}] init 0;");
    if urgency {
        let _ = writeln!(out, "  {u} : [0..{URGENCY_CEILING}] init 0;");
    }
    for e in &a.edges {
        let label = match &e.action {
            Action::Send(c) | Action::Receive(c) => c.ident(),
            _ => String::new(),
        };
        let mut guard = vec![format!("{l}={}", e.from)];
        match &e.action {
            Action::Guard(g) if *g > 0 => guard.push(format!("{x}>={g}")),
            Action::Escape(absent) => {
                for p in absent {
                    let peer = loc_var(&ident(&net.automata[p.automaton].id));
                    let at: Vec<String> = p.locations.iter().map(|k| format!("{peer}={k}")).collect();
                    guard.push(format!("!({})", at.join(" | ")));
                }
            }
            _ => {}
        }
        if let Some(c) = a.locations[e.to].invariant {
            if !e.reset {
                guard.push(format!("{x}<={}", bound.max_value(c)));
            }
        }
        let _ = writeln!(out, "  [{label}] {} -> {};", guard.join(" & "), update(e, &l, &x, &u));
    }
    // time step: every invariant must hold after the increment
    let mut tick = Vec::new();
    for (k, loc) in a.locations.iter().enumerate() {
        if loc.urgent {
            tick.push(format!("{l}!={k}"));
        } else if let Some(c) = loc.invariant {
            tick.push(format!("({l}!={k} | {x}+1<={})", bound.max_value(c)));
        }
    }
    let mut step = vec![format!("({x}'=min({x}+1,{ceiling}))")];
    if urgency {
        step.push(format!("({u}'=min({u}+1,{URGENCY_CEILING}))"));
    }
    let guard = if tick.is_empty() { "true".to_string() } else { tick.join(" & ") };
    let _ = writeln!(out, "  [tick] {guard} -> {};", step.join(" & "));
    let _ = writeln!(out, "endmodule");
}

fn update(e: &Edge, l: &str, x: &str, u: &str) -> String {
    let mut parts = vec![format!("({l}'={})", e.to)];
    if e.reset {
        parts.push(format!("({x}'=0)"));
    }
    if e.reset_urgency {
        parts.push(format!("({u}'=0)"));
    }
    parts.join(" & ")
}

fn prism_formula(f: &Formula, names: &NameMap) -> String {
    let p = |g: &Formula| prism_formula(g, names);
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::At(c, l) => match names.code(c, l) {
            Some(k) => format!("{}={k}", loc_var(&ident(c))),
            None => panic!("no code for {c}.{l}"),
        },
        Formula::Not(g) => format!("!({})", p(g)),
        Formula::And(a, b) => format!("({}) & ({})", p(a), p(b)),
        Formula::Or(a, b) => format!("({}) | ({})", p(a), p(b)),
        Formula::EX(g) => format!("E [ X {} ]", p(g)),
        Formula::EF(g) => format!("E [ F {} ]", p(g)),
        Formula::EG(g) => format!("E [ G {} ]", p(g)),
        Formula::AX(g) => format!("A [ X {} ]", p(g)),
        Formula::AF(g) => format!("A [ F {} ]", p(g)),
        Formula::AG(g) => format!("A [ G {} ]", p(g)),
        Formula::EU(a, b) => format!("E [ {} U {} ]", p(a), p(b)),
        Formula::AU(a, b) => format!("A [ {} U {} ]", p(a), p(b)),
    }
}

/// φ, ψ and ρ for the primed copy of every onlyS and W location, one
/// property per line.
pub fn emit_properties(partition: &StaticPartition, unet: &UrgencyFreeNetwork, names: &NameMap) -> String {
    let mut keys: Vec<(usize, usize)> = partition.only_s.iter().chain(&partition.w).copied().collect();
    keys.sort_unstable();
    let mut out = String::new();
    for (ai, l) in keys {
        let a = &unet.network.automata[ai];
        let loc = unet.primed_of(ai, l).unwrap_or(l);
        let w = Formula::at(a.id.clone(), a.locations[loc].name.clone());
        for (tag, f) in [
            ("phi", Formula::phi(w.clone())),
            ("psi", Formula::psi(w.clone())),
            ("rho", Formula::rho(w)),
        ] {
            let _ = writeln!(
                out,
                "{} // {tag} {}.{}",
                prism_formula(&f, names),
                a.id,
                a.locations[loc].name
            );
        }
    }
    out
}
