#![allow(dead_code)]

use std::collections::VecDeque;

use mirela::ctl::Formula;
use mirela::semantics::TransitionSystem;
use mirela::spec::{load, resolve_targets, Component, ComponentDecl, Interval, ResolvedSpec, Source, SpecAst};
use mirela::tast::{Action, Automaton, Channel, LocationKind};
use rand::seq::SliceRandom;
use rand::rngs::StdRng;
use rand::Rng;

pub const EX1: &str = include_str!("../../../../models/ex1.mirela");
pub const EX2: &str = include_str!("../../../../models/ex2.mirela");

pub fn ex1() -> ResolvedSpec {
    load(EX1).unwrap()
}

pub fn ex2() -> ResolvedSpec {
    load(EX2).unwrap()
}

/// One expected verdict row; `None` marks a cell left blank.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    pub comp: &'static str,
    pub loc: &'static str,
    pub set: &'static str,
    pub phi: bool,
    pub psi: Option<bool>,
    pub rho: Option<bool>,
    pub status: &'static str,
}

const fn row(
    comp: &'static str,
    loc: &'static str,
    set: &'static str,
    phi: bool,
    psi: Option<bool>,
    rho: Option<bool>,
    status: &'static str,
) -> Row {
    Row {
        comp,
        loc,
        set,
        phi,
        psi,
        rho,
        status,
    }
}

const T: Option<bool> = Some(true);
const F: Option<bool> = Some(false);

pub fn table_ex1() -> Vec<Row> {
    vec![
        row("S1", "s2'", "W", false, None, None, "safe"),
        row("S2", "s2'", "W", true, T, T, "D and S"),
        row("S2", "s3'", "W", true, F, T, "S"),
        row("S3", "s2'", "W", true, T, T, "D and S"),
        row("S3", "s3'", "W", false, None, None, "safe"),
        row("F1", "s0'", "W", false, None, None, "safe"),
        row("F1", "s2'", "onlyS", false, None, None, "safe"),
        row("F2", "s0'", "W", false, None, None, "safe"),
        row("F2", "s2'", "W", true, T, T, "D and S"),
        row("B", "s0'", "W", false, None, None, "safe"),
        row("B", "s1'", "W", true, T, F, "D"),
        row("B", "s2'", "W", false, None, None, "safe"),
        row("B", "s4'", "onlyS", true, F, T, "S"),
        row("R", "s0'", "onlyS", false, None, None, "safe"),
    ]
}

/// Example 1's table with the four rows that change for Example 2.
pub fn table_ex2() -> Vec<Row> {
    table_ex1()
        .into_iter()
        .map(|r| match (r.comp, r.loc) {
            ("S2", "s2'") | ("S3", "s2'") | ("F2", "s2'") => row(r.comp, r.loc, r.set, true, T, F, "D"),
            ("B", "s4'") => row(r.comp, r.loc, r.set, false, None, None, "safe"),
            _ => r,
        })
        .collect()
}

/// Wait locations of the N set (unlock origins) after demultiplexing.
pub const N_SET: [(&str, &str); 6] = [
    ("F1", "s4"),
    ("B", "s6"),
    ("M", "s1_F1"),
    ("M", "s1_B"),
    ("M", "s1_R"),
    ("R", "s2"),
];

// ---------------------------------------------------------------------------
// Random transition systems and formulas

pub const LOCS_A: [&str; 3] = ["p", "q", "r"];
pub const LOCS_B: [&str; 2] = ["u", "v"];

/// `n` states over two automata with random labels and out-degree 0–3
/// (dead ends become self-loops).
pub fn random_ts(rng: &mut StdRng, n: usize) -> TransitionSystem {
    let mut states = Vec::with_capacity(2 * n);
    for _ in 0..n {
        states.push(rng.gen_range(0..LOCS_A.len()) as u16);
        states.push(rng.gen_range(0..LOCS_B.len()) as u16);
    }
    let adjacency = (0..n)
        .map(|s| {
            (0..rng.gen_range(0..4))
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        // stay local to create long chains and cycles
                        ((s + rng.gen_range(0..3)) % n) as u32
                    } else {
                        rng.gen_range(0..n) as u32
                    }
                })
                .collect()
        })
        .collect();
    TransitionSystem::from_parts(
        vec!["A".into(), "B".into()],
        vec![
            LOCS_A.iter().map(|s| s.to_string()).collect(),
            LOCS_B.iter().map(|s| s.to_string()).collect(),
        ],
        2,
        states,
        adjacency,
    )
}

/// Random formula of nesting depth at most `depth` (as counted by
/// [`Formula::depth`]).
pub fn random_formula(rng: &mut StdRng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..7) {
            0 => Formula::True,
            1 => Formula::False,
            2 | 3 => Formula::at("A", LOCS_A[rng.gen_range(0..LOCS_A.len())]),
            _ => Formula::at("B", LOCS_B[rng.gen_range(0..LOCS_B.len())]),
        };
    }
    let ops = if depth >= 2 { 13 } else { 11 };
    let op = rng.gen_range(0..ops);
    if op >= 11 {
        let w = random_formula(rng, depth - 2);
        return if op == 11 { Formula::phi(w) } else { Formula::psi(w) };
    }
    let mut sub = || random_formula(rng, depth - 1);
    match op {
        0 => sub().not(),
        1 => sub().and(sub()),
        2 => sub().or(sub()),
        3 => sub().ex(),
        4 => sub().ef(),
        5 => sub().eg(),
        6 => sub().ax(),
        7 => sub().af(),
        8 => sub().ag(),
        9 => {
            let a = sub();
            a.eu(sub())
        }
        _ => {
            let a = sub();
            a.au(sub())
        }
    }
}

// ---------------------------------------------------------------------------
// Brute-force CTL: per-state forward path search, no fixpoints.

/// States reachable from `s` along paths whose intermediate states all
/// satisfy `expand` (the last state need not). Includes `s`.
fn explore(ts: &TransitionSystem, s: usize, expand: &[bool]) -> Vec<usize> {
    let mut seen = vec![false; ts.len()];
    let mut order = vec![s];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(t) = queue.pop_front() {
        if !expand[t] {
            continue;
        }
        for &v in ts.successors(t) {
            let v = v as usize;
            if !seen[v] {
                seen[v] = true;
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    order
}

/// Whether some infinite path from `s` stays inside `inside` forever:
/// a depth-first search for a back edge within `inside`.
fn has_infinite_path(ts: &TransitionSystem, s: usize, inside: &[bool]) -> bool {
    if !inside[s] {
        return false;
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; ts.len()];
    let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
    color[s] = 1;
    while let Some(&mut (t, ref mut i)) = stack.last_mut() {
        let succ = ts.successors(t);
        if *i < succ.len() {
            let v = succ[*i] as usize;
            *i += 1;
            if !inside[v] {
                continue;
            }
            match color[v] {
                1 => return true,
                0 => {
                    color[v] = 1;
                    stack.push((v, 0));
                }
                _ => {}
            }
        } else {
            color[t] = 2;
            stack.pop();
        }
    }
    false
}

fn atom(ts: &TransitionSystem, c: &str, l: &str) -> Vec<bool> {
    let a = ts.automaton_index(c).expect("known automaton");
    let li = ts.location_index(a, l).expect("known location");
    (0..ts.len()).map(|s| ts.location(s, a) == li).collect()
}

pub fn brute_eval(ts: &TransitionSystem, f: &Formula) -> Vec<bool> {
    let n = ts.len();
    let all = vec![true; n];
    match f {
        Formula::True => all,
        Formula::False => vec![false; n],
        Formula::At(c, l) => atom(ts, c, l),
        Formula::Not(g) => brute_eval(ts, g).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => {
            let (a, b) = (brute_eval(ts, a), brute_eval(ts, b));
            (0..n).map(|s| a[s] && b[s]).collect()
        }
        Formula::Or(a, b) => {
            let (a, b) = (brute_eval(ts, a), brute_eval(ts, b));
            (0..n).map(|s| a[s] || b[s]).collect()
        }
        Formula::EX(g) => {
            let g = brute_eval(ts, g);
            (0..n).map(|s| ts.successors(s).iter().any(|&t| g[t as usize])).collect()
        }
        Formula::AX(g) => {
            let g = brute_eval(ts, g);
            (0..n).map(|s| ts.successors(s).iter().all(|&t| g[t as usize])).collect()
        }
        Formula::EF(g) => {
            let g = brute_eval(ts, g);
            (0..n).map(|s| explore(ts, s, &all).iter().any(|&t| g[t])).collect()
        }
        Formula::AG(g) => {
            let g = brute_eval(ts, g);
            (0..n).map(|s| explore(ts, s, &all).iter().all(|&t| g[t])).collect()
        }
        Formula::EU(a, b) => {
            let (a, b) = (brute_eval(ts, a), brute_eval(ts, b));
            let expand: Vec<bool> = (0..n).map(|s| a[s] && !b[s]).collect();
            (0..n).map(|s| explore(ts, s, &expand).iter().any(|&t| b[t])).collect()
        }
        Formula::EG(g) => {
            let g = brute_eval(ts, g);
            (0..n).map(|s| has_infinite_path(ts, s, &g)).collect()
        }
        Formula::AF(g) => {
            let g = brute_eval(ts, g);
            let avoid: Vec<bool> = g.iter().map(|b| !b).collect();
            (0..n).map(|s| !has_infinite_path(ts, s, &avoid)).collect()
        }
        Formula::AU(a, b) => {
            let (a, b) = (brute_eval(ts, a), brute_eval(ts, b));
            let pending: Vec<bool> = (0..n).map(|s| a[s] && !b[s]).collect();
            (0..n)
                .map(|s| {
                    // a violating path either leaves `a` before `b` or never meets `b`
                    let stuck = explore(ts, s, &pending).iter().any(|&t| !a[t] && !b[t]);
                    !stuck && !has_infinite_path(ts, s, &pending)
                })
                .collect()
        }
    }
}

/// Log-uniform state count in `1..=max`.
pub fn random_size(rng: &mut StdRng, max: usize) -> usize {
    let e = rng.gen_range(0.0..(max as f64).ln());
    (e.exp() as usize).clamp(1, max)
}

// ---------------------------------------------------------------------------
// Hand-drawn reference automata

/// A reference automaton: locations as `"W"` (wait) or `"A<c>"` (activity
/// with invariant `x<c`), the first one initial; edges as
/// `(from, to, label, reset)` with labels `x>=c`, `!a-b`, `?a-b`, `!lock`,
/// `?lock`, `!unlock`, `?unlock`.
pub struct Reference {
    pub id: &'static str,
    pub locations: Vec<(&'static str, &'static str)>,
    pub edges: Vec<(&'static str, &'static str, &'static str, bool)>,
}

fn channel_label(c: &Channel) -> String {
    match c {
        Channel::Data { from, to } => format!("{from}-{to}"),
        Channel::Lock { .. } => "lock".into(),
        Channel::Unlock { .. } => "unlock".into(),
    }
}

fn edge_label(a: &Action) -> String {
    match a {
        Action::Guard(0) => String::new(),
        Action::Guard(g) => format!("x>={g}"),
        Action::Send(c) => format!("!{}", channel_label(c)),
        Action::Receive(c) => format!("?{}", channel_label(c)),
        Action::Escape(_) => "escape".into(),
    }
}

fn location_label(a: &Automaton, l: usize) -> String {
    let loc = &a.locations[l];
    match (loc.kind, loc.invariant) {
        (LocationKind::Wait, _) => "W".into(),
        (LocationKind::Activity, Some(c)) => format!("A{c}"),
        (LocationKind::Activity, None) => "A".into(),
    }
}

fn permutations(n: usize, fixed: (usize, usize)) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, fixed: (usize, usize), out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let i = cur.len();
        for j in 0..n {
            if used[j] || (i == fixed.0) != (j == fixed.1) {
                continue;
            }
            used[j] = true;
            cur.push(j);
            go(n, cur, used, fixed, out);
            cur.pop();
            used[j] = false;
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], fixed, &mut out);
    out
}

/// Whether some bijection of locations, mapping initial to initial and
/// preserving location kinds and invariants, maps the reference edge
/// multiset exactly onto the automaton's.
pub fn isomorphic(reference: &Reference, a: &Automaton) -> bool {
    let n = reference.locations.len();
    if n != a.locations.len() || reference.edges.len() != a.edges.len() {
        return false;
    }
    let index = |name: &str| {
        reference
            .locations
            .iter()
            .position(|(l, _)| *l == name)
            .unwrap_or_else(|| panic!("{}: no location {name}", reference.id))
    };
    let mut actual: Vec<(usize, usize, String, bool)> = a
        .edges
        .iter()
        .map(|e| (e.from, e.to, edge_label(&e.action), e.reset))
        .collect();
    actual.sort();
    permutations(n, (0, a.initial)).into_iter().any(|sigma| {
        let kinds_match = (0..n).all(|i| reference.locations[i].1 == location_label(a, sigma[i]));
        if !kinds_match {
            return false;
        }
        let mut mapped: Vec<(usize, usize, String, bool)> = reference
            .edges
            .iter()
            .map(|(f, t, l, r)| (sigma[index(f)], sigma[index(t)], l.to_string(), *r))
            .collect();
        mapped.sort();
        mapped == actual
    })
}

/// Example 1's automata transcribed from the drawings, with the
/// processing interval of F2 taken from its declaration `S3[75,100]`.
pub fn references_ex1() -> Vec<Reference> {
    vec![
        Reference {
            id: "S1",
            locations: vec![("start", "A75"), ("capture", "A100"), ("out", "W")],
            edges: vec![
                ("start", "capture", "x>=50", true),
                ("capture", "out", "x>=75", false),
                ("out", "capture", "!S1-F1", true),
            ],
        },
        Reference {
            id: "S2",
            locations: vec![("start", "A300"), ("capture", "A400"), ("toF2", "W"), ("toF1", "W")],
            edges: vec![
                ("start", "capture", "x>=200", true),
                ("capture", "toF2", "x>=350", false),
                ("toF2", "toF1", "!S2-F2", false),
                ("toF1", "capture", "!S2-F1", true),
            ],
        },
        Reference {
            id: "S3",
            locations: vec![("start", "A300"), ("capture", "A400"), ("toF2", "W"), ("toB", "W")],
            edges: vec![
                ("start", "capture", "x>=200", true),
                ("capture", "toF2", "x>=350", false),
                ("toF2", "toB", "!S3-F2", false),
                ("toB", "capture", "!S3-B", true),
            ],
        },
        Reference {
            id: "F1",
            locations: vec![
                ("idle", "W"),
                ("work", "A75"),
                ("ask", "W"),
                ("write", "A50"),
                ("release", "W"),
            ],
            edges: vec![
                ("idle", "work", "?S1-F1", true),
                ("idle", "work", "?S2-F1", true),
                ("work", "ask", "x>=50", false),
                ("ask", "write", "!lock", true),
                ("write", "release", "x>=25", false),
                ("release", "idle", "!unlock", false),
            ],
        },
        Reference {
            id: "F2",
            locations: vec![("idle", "W"), ("work", "A100"), ("out", "W")],
            edges: vec![
                ("idle", "work", "?S2-F2", true),
                ("idle", "work", "?S3-F2", true),
                ("work", "out", "x>=75", false),
                ("out", "idle", "!F2-B", false),
            ],
        },
        Reference {
            id: "B",
            locations: vec![
                ("idle", "W"),
                ("gotF2", "W"),
                ("gotS3", "W"),
                ("work", "A50"),
                ("ask", "W"),
                ("write", "A50"),
                ("release", "W"),
            ],
            edges: vec![
                ("idle", "gotF2", "?F2-B", false),
                ("gotF2", "work", "?S3-B", true),
                ("idle", "gotS3", "?S3-B", false),
                ("gotS3", "work", "?F2-B", true),
                ("work", "ask", "x>=25", false),
                ("ask", "write", "!lock", true),
                ("write", "release", "x>=25", false),
                ("release", "idle", "!unlock", false),
            ],
        },
        Reference {
            id: "M",
            locations: vec![("free", "W"), ("held", "W")],
            edges: vec![("free", "held", "?lock", false), ("held", "free", "?unlock", false)],
        },
        Reference {
            id: "R",
            locations: vec![("idle", "W"), ("read", "A50"), ("release", "W"), ("render", "A75")],
            edges: vec![
                ("idle", "read", "!lock", true),
                ("read", "release", "x>=25", false),
                ("release", "render", "!unlock", true),
                ("render", "idle", "x>=50", false),
            ],
        },
    ]
}

/// Example 2 differs in the rendering period only.
pub fn references_ex2() -> Vec<Reference> {
    let mut refs = references_ex1();
    let r = refs.iter_mut().find(|r| r.id == "R").unwrap();
    r.locations[3] = ("render", "A100");
    r.edges[3] = ("render", "idle", "x>=75", false);
    refs
}

// ---------------------------------------------------------------------------
// Random well-formed specifications

fn interval(rng: &mut StdRng) -> Interval {
    let min = rng.gen_range(1..50);
    Interval::new(min, rng.gen_range(min + 1..=min + 50))
}

/// A random specification obeying every declaration rule: sensors, then
/// processing units over earlier producers, then memories and their
/// rendering loops, each producer naming a random subset of its consumers
/// as explicit targets.
pub fn random_spec(rng: &mut StdRng) -> ResolvedSpec {
    let mut decls: Vec<ComponentDecl> = Vec::new();
    let decl = |id: String, component: Component| ComponentDecl {
        id,
        component,
        targets: Vec::new(),
    };
    for i in 1..=rng.gen_range(1..=3) {
        let component = if rng.gen_bool(0.7) {
            Component::Periodic {
                start: interval(rng),
                capture: interval(rng),
            }
        } else {
            Component::Aperiodic {
                min_event: rng.gen_range(1..100),
            }
        };
        decls.push(decl(format!("S{i}"), component));
    }
    for i in 1..=rng.gen_range(0..=3) {
        let producers: Vec<String> = decls.iter().map(|d| d.id.clone()).collect();
        let kind = if producers.len() < 2 { 0 } else { rng.gen_range(0..3) };
        let mut pick = producers.clone();
        pick.shuffle(rng);
        let component = match kind {
            0 => {
                let k = rng.gen_range(1..=pick.len().min(3));
                let last = interval(rng);
                Component::First {
                    sources: pick[..k]
                        .iter()
                        .enumerate()
                        .map(|(j, s)| Source::new(s.clone(), (j + 1 == k).then_some(last)))
                        .collect(),
                }
            }
            1 => Component::Both {
                sources: [pick[0].clone(), pick[1].clone()],
                work: interval(rng),
            },
            _ => Component::Priority {
                master: pick[0].clone(),
                master_work: interval(rng),
                slave: pick[1].clone(),
                slave_work: interval(rng),
            },
        };
        decls.push(decl(format!("P{i}"), component));
    }
    let producers: Vec<String> = decls.iter().map(|d| d.id.clone()).collect();
    for i in 1..=rng.gen_range(0..=2) {
        let mut pick = producers.clone();
        pick.shuffle(rng);
        let k = rng.gen_range(1..=pick.len().min(2));
        let memory = format!("M{i}");
        decls.push(decl(
            memory.clone(),
            Component::Memory {
                sources: pick[..k].iter().map(|s| Source::new(s.clone(), Some(interval(rng)))).collect(),
            },
        ));
        if rng.gen_bool(0.8) {
            decls.push(decl(
                format!("R{i}"),
                Component::Rendering {
                    period: interval(rng),
                    memory,
                    access: interval(rng),
                },
            ));
        }
    }
    for i in 0..decls.len() {
        let id = decls[i].id.clone();
        let mut consumers: Vec<String> = decls
            .iter()
            .filter(|d| d.component.has_source(&id))
            .map(|d| d.id.clone())
            .collect();
        consumers.shuffle(rng);
        consumers.truncate(rng.gen_range(0..=consumers.len()));
        decls[i].targets = consumers;
    }
    let ast = SpecAst {
        name: format!("Rnd_{}", rng.gen_range(0..10_000)),
        decls,
        positions: Vec::new(),
    };
    resolve_targets(&ast).expect("generated specification is well formed")
}
