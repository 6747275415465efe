//! Human-readable and Graphviz renderings of networks.

use std::fmt::Write as _;

use crate::tast::{Action, Automaton, Edge, LocationKind, Network};

fn action_text(net: &Network, e: &Edge) -> String {
    match &e.action {
        Action::Guard(0) => String::new(),
        Action::Guard(g) => format!("x>={g}"),
        Action::Send(c) => format!("{c}!"),
        Action::Receive(c) => format!("{c}?"),
        Action::Escape(absent) => {
            let parts: Vec<String> = absent
                .iter()
                .map(|p| {
                    let peer = &net.automata[p.automaton];
                    let locs: Vec<&str> = p.locations.iter().map(|&l| peer.locations[l].name.as_str()).collect();
                    format!("{} not in {{{}}}", peer.id, locs.join(","))
                })
                .collect();
            if parts.is_empty() {
                "escape".into()
            } else {
                format!("escape {}", parts.join(" & "))
            }
        }
    }
}

fn resets(e: &Edge) -> String {
    match (e.reset, e.reset_urgency) {
        (true, true) => "x:=0, u:=0".into(),
        (true, false) => "x:=0".into(),
        (false, true) => "u:=0".into(),
        (false, false) => String::new(),
    }
}

fn automaton_text(out: &mut String, net: &Network, a: &Automaton) {
    let _ = writeln!(
        out,
        "{} = {} (initial {})",
        a.id,
        a.kind.keyword(),
        a.locations[a.initial].name
    );
    for l in &a.locations {
        let mut attrs = vec![match l.kind {
            LocationKind::Activity => "activity".to_string(),
            LocationKind::Wait => "wait".to_string(),
        }];
        if let Some(c) = l.invariant {
            attrs.push(format!("x<{c}"));
        }
        if l.urgent {
            attrs.push("u<=0".into());
        }
        let _ = writeln!(out, "  {:<8} {}", l.name, attrs.join(" "));
    }
    for e in &a.edges {
        let mut line = format!(
            "  {} -> {}",
            a.locations[e.from].name, a.locations[e.to].name
        );
        let act = action_text(net, e);
        if !act.is_empty() {
            line.push_str("  ");
            line.push_str(&act);
        }
        let r = resets(e);
        if !r.is_empty() {
            let _ = write!(line, "  {{{r}}}");
        }
        out.push_str(&line);
        out.push('\n');
    }
}

/// One block per automaton: locations with their invariants, then edges.
pub fn network_text(net: &Network) -> String {
    let mut out = format!("network {}\n", net.name);
    for a in &net.automata {
        out.push('\n');
        automaton_text(&mut out, net, a);
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz digraph with one cluster per automaton.
pub fn network_dot(net: &Network) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", quote(&net.name));
    for (ai, a) in net.automata.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{ai} {{\n    label={};", quote(&a.id));
        for (li, l) in a.locations.iter().enumerate() {
            let mut label = l.name.clone();
            if let Some(c) = l.invariant {
                let _ = write!(label, "\\nx<{c}");
            }
            if l.urgent {
                label.push_str("\\nu<=0");
            }
            let shape = match (l.kind, li == a.initial) {
                (_, true) => "doublecircle",
                (LocationKind::Activity, false) => "box",
                (LocationKind::Wait, false) => "ellipse",
            };
            let _ = writeln!(out, "    n{ai}_{li} [label=\"{label}\", shape={shape}];");
        }
        for e in &a.edges {
            let mut label = action_text(net, e);
            let r = resets(e);
            if !r.is_empty() {
                let _ = write!(label, " {{{r}}}");
            }
            let _ = writeln!(out, "    n{ai}_{} -> n{ai}_{} [label={}];", e.from, e.to, quote(label.trim()));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
