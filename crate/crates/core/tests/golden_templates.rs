mod common;

use std::collections::BTreeSet;

use mirela::elaborate::elaborate;
use mirela::tast::{Action, Channel, Network};
use mirela::transform::{demux_channels, emulate_urgency};

fn ex1_net() -> Network {
    elaborate(&common::ex1()).unwrap()
}

#[test]
fn example_one_matches_the_drawings() {
    let net = ex1_net();
    for r in common::references_ex1() {
        assert!(common::isomorphic(&r, net.automaton(r.id).unwrap()), "{}", r.id);
    }
}

#[test]
fn example_two_changes_only_the_rendering_loop() {
    let net = elaborate(&common::ex2()).unwrap();
    for r in common::references_ex2() {
        assert!(common::isomorphic(&r, net.automaton(r.id).unwrap()), "{}", r.id);
    }
    let one = common::references_ex1();
    let r1 = one.iter().find(|r| r.id == "R").unwrap();
    assert!(!common::isomorphic(r1, net.automaton("R").unwrap()));
}

#[test]
fn isomorphism_rejects_perturbations() {
    let net = ex1_net();
    let b = net.automaton("B").unwrap();
    let mut r = common::references_ex1().into_iter().find(|r| r.id == "B").unwrap();
    assert!(common::isomorphic(&r, b));
    // swap which branch resets the clock
    r.edges[0].3 = true;
    r.edges[1].3 = false;
    assert!(!common::isomorphic(&r, b));

    let mut r = common::references_ex1().into_iter().find(|r| r.id == "F2").unwrap();
    r.locations[1] = ("work", "A50");
    assert!(!common::isomorphic(&r, net.automaton("F2").unwrap()));

    let mut r = common::references_ex1().into_iter().find(|r| r.id == "R").unwrap();
    r.edges[0].2 = "?lock";
    assert!(!common::isomorphic(&r, net.automaton("R").unwrap()));
}

#[test]
fn demultiplexed_memory() {
    let net = demux_channels(&ex1_net());
    let m = net.automaton("M").unwrap();
    let names: Vec<&str> = m.locations.iter().map(|l| l.name.as_str()).collect();
    assert_eq!(names, ["s0", "s1_F1", "s1_B", "s1_R"]);
    for client in ["F1", "B", "R"] {
        let branch = m.location_id(&format!("s1_{client}")).unwrap();
        let lock = Channel::Lock {
            memory: "M".into(),
            client: Some(client.into()),
        };
        let unlock = Channel::Unlock {
            memory: "M".into(),
            client: Some(client.into()),
        };
        let pairs: Vec<(usize, usize, &Action)> = m.edges.iter().map(|e| (e.from, e.to, &e.action)).collect();
        assert!(pairs.contains(&(0, branch, &Action::Receive(lock.clone()))));
        assert!(pairs.contains(&(branch, 0, &Action::Receive(unlock.clone()))));
        let c = net.automaton(client).unwrap();
        assert!(c.edges.iter().any(|e| e.action == Action::Send(lock.clone())));
        assert!(c.edges.iter().any(|e| e.action == Action::Send(unlock.clone())));
    }
    // nothing else refers to the shared channels
    assert!(net.channels().iter().all(|c| match c {
        Channel::Lock { client, .. } | Channel::Unlock { client, .. } => client.is_some(),
        Channel::Data { .. } => true,
    }));
}

/// Expected escape guard of a wait location, recomputed from the
/// demultiplexed network: for every channel it offers, the peers' locations
/// offering the complementary action, together with their primed copies.
fn expected_absence(net: &Network, ai: usize, loc: usize) -> BTreeSet<(String, BTreeSet<String>)> {
    let a = &net.automata[ai];
    let mut out = BTreeSet::new();
    for e in a.edges.iter().filter(|e| e.from == loc) {
        let (chan, send) = match &e.action {
            Action::Send(c) => (c, true),
            Action::Receive(c) => (c, false),
            _ => continue,
        };
        for (pi, peer) in net.automata.iter().enumerate() {
            if pi == ai {
                continue;
            }
            let locs: BTreeSet<String> = peer
                .edges
                .iter()
                .filter(|p| match &p.action {
                    Action::Send(c) => !send && c == chan,
                    Action::Receive(c) => send && c == chan,
                    _ => false,
                })
                .flat_map(|p| {
                    let n = &peer.locations[p.from].name;
                    [n.clone(), format!("{n}'")]
                })
                .collect();
            if !locs.is_empty() {
                out.insert((peer.id.clone(), locs));
            }
        }
    }
    out
}

#[test]
fn urgency_transform_structure() {
    for spec in [common::ex1(), common::ex2()] {
        let demuxed = demux_channels(&elaborate(&spec).unwrap());
        let unet = emulate_urgency(&demuxed);
        let net = &unet.network;
        for (ai, a) in demuxed.automata.iter().enumerate() {
            let t = &net.automata[ai];
            for (l, loc) in a.locations.iter().enumerate() {
                let communicates = a.edges.iter().any(|e| e.from == l && e.action.is_communication());
                assert_eq!(t.locations[l].urgent, communicates, "{}.{}", a.id, loc.name);
                let Some(p) = unet.primed_of(ai, l) else {
                    assert!(!communicates, "{}.{} lacks a primed copy", a.id, loc.name);
                    continue;
                };
                let primed = &t.locations[p];
                assert_eq!(primed.name, format!("{}'", loc.name));
                assert!(!primed.urgent);
                assert_eq!(unet.original(ai, p), l);

                // the copy offers exactly the communications of the original
                let offers = |from: usize| -> BTreeSet<String> {
                    t.edges
                        .iter()
                        .filter(|e| e.from == from && e.action.is_communication())
                        .map(|e| format!("{:?}->{}{}", e.action, e.to, e.reset))
                        .collect()
                };
                assert_eq!(offers(l), offers(p), "{}.{}", a.id, loc.name);

                let escapes: Vec<_> = t
                    .edges
                    .iter()
                    .filter(|e| e.from == l && matches!(e.action, Action::Escape(_)))
                    .collect();
                assert_eq!(escapes.len(), 1);
                assert_eq!(escapes[0].to, p);
                let Action::Escape(absent) = &escapes[0].action else { unreachable!() };
                let got: BTreeSet<(String, BTreeSet<String>)> = absent
                    .iter()
                    .map(|pa| {
                        let peer = &net.automata[pa.automaton];
                        (
                            peer.id.clone(),
                            pa.locations.iter().map(|&k| peer.locations[k].name.clone()).collect(),
                        )
                    })
                    .collect();
                assert_eq!(got, expected_absence(&demuxed, ai, l), "{}.{}", a.id, loc.name);
            }
            // every edge entering an urgent location restarts the urgency clock
            for e in &t.edges {
                assert_eq!(e.reset_urgency, t.locations[e.to].urgent, "{} edge into {}", t.id, t.locations[e.to].name);
            }
        }
    }
}
