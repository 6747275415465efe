//! Status of every wait location, following the φ → ψ → ρ decision
//! procedure over the transformed network.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{static_partition, StaticPartition, StaticSet};
use crate::ctl::{Checker, CtlError, Formula};
use crate::elaborate::{elaborate, ElaborateError};
use crate::semantics::{
    build_with, constants_gcd, scale_constants, BuildError, BuildOptions, DigitalClocks,
    InvariantBound, ScaleError, TransitionSystem, DEFAULT_STATE_CAP,
};
use crate::spec::{Component, ComponentKind, ResolvedSpec};
use crate::tast::Network;
use crate::transform::{demux_channels, emulate_urgency, UrgencyFreeNetwork};

/// Serialized as its [`code`](Status::code).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Safe,
    Starvation,
    StarvationOrUnbounded,
    Deadlock,
    DeadlockAndStarvation,
    DeadlockAndStarvationOrUnbounded,
    /// Initial activity location of an aperiodic sensor.
    IntrinsicUnbounded,
}

impl Status {
    /// Compact machine-readable code.
    pub fn code(self) -> &'static str {
        match self {
            Status::Safe => "SAFE",
            Status::Starvation => "S",
            Status::StarvationOrUnbounded => "S/U",
            Status::Deadlock => "D",
            Status::DeadlockAndStarvation => "D+S",
            Status::DeadlockAndStarvationOrUnbounded => "D+S/U",
            Status::IntrinsicUnbounded => "U",
        }
    }

    /// Short form used in the verdict table.
    pub fn short(self) -> &'static str {
        match self {
            Status::Safe => "safe",
            Status::Starvation => "S",
            Status::StarvationOrUnbounded => "S/U",
            Status::Deadlock => "D",
            Status::DeadlockAndStarvation => "D and S",
            Status::DeadlockAndStarvationOrUnbounded => "D and S/U",
            Status::IntrinsicUnbounded => "U",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Status::Safe => "neither a starvation, unbounded waiting nor deadlock",
            Status::Starvation => "a starvation location",
            Status::StarvationOrUnbounded => "a starvation and/or an unbounded waiting",
            Status::Deadlock => "a deadlock location",
            Status::DeadlockAndStarvation => "a local deadlock and a starvation",
            Status::DeadlockAndStarvationOrUnbounded => {
                "a local deadlock, a starvation and/or an unbounded waiting"
            }
            Status::IntrinsicUnbounded => "an unbounded waiting of an aperiodic sensor",
        }
    }

    /// Statuses admitting unbounded waiting degrade to pure starvation when
    /// the specification has no aperiodic sensor.
    fn without_aperiodic(self) -> Status {
        match self {
            Status::StarvationOrUnbounded => Status::Starvation,
            Status::DeadlockAndStarvationOrUnbounded => Status::DeadlockAndStarvation,
            s => s,
        }
    }
}

impl Serialize for Status {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// The decision procedure as a pure function. Missing values are only read
/// on the branches that need them; `None` there is a caller error.
pub fn decide(
    set: StaticSet,
    phi: Option<bool>,
    psi: Option<bool>,
    rho: Option<bool>,
    has_aperiodic: bool,
) -> Status {
    let status = match set {
        StaticSet::N => Status::Safe,
        _ if !phi.expect("φ is evaluated") => Status::Safe,
        StaticSet::OnlyS => Status::Starvation,
        StaticSet::W if !psi.expect("ψ is evaluated") => Status::StarvationOrUnbounded,
        StaticSet::W if !rho.expect("ρ is evaluated") => Status::Deadlock,
        StaticSet::W => Status::DeadlockAndStarvationOrUnbounded,
    };
    if has_aperiodic {
        status
    } else {
        status.without_aperiodic()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocationVerdict {
    pub component: String,
    /// Wait location `w` of the elaborated automaton.
    pub location: String,
    /// Its copy `w′` in the transformed network, on which formulas are checked.
    pub primed: String,
    pub set: StaticSet,
    pub phi: Option<bool>,
    pub psi: Option<bool>,
    pub rho: Option<bool>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Site {
    pub component: String,
    pub location: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub component: String,
    pub location: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub spec: String,
    pub scale: u32,
    pub invariants: InvariantBound,
    pub states: usize,
    pub transitions: usize,
    pub verdicts: Vec<LocationVerdict>,
    pub skipped: Vec<Skipped>,
    pub aperiodic: Vec<Site>,
}

impl ClassificationReport {
    pub fn verdict(&self, component: &str, location: &str) -> Option<&LocationVerdict> {
        self.verdicts
            .iter()
            .find(|v| v.component == component && (v.location == location || v.primed == location))
    }

    /// Verdicts whose formulas were evaluated (everything outside N).
    pub fn evaluated(&self) -> impl Iterator<Item = &LocationVerdict> {
        self.verdicts.iter().filter(|v| v.set != StaticSet::N)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    /// Divide by the gcd of all timing constants.
    #[default]
    Auto,
    Divisor(u32),
    None,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Scale::Auto),
            "none" => Ok(Scale::None),
            n => match n.parse::<u32>() {
                Ok(d) if d > 0 => Ok(Scale::Divisor(d)),
                _ => Err(format!("invalid scale `{s}` (expected auto, none or a positive integer)")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub scale: Scale,
    pub include_memories: bool,
    /// Evaluate ψ and ρ even where the procedure does not need them.
    pub full_formulas: bool,
    pub invariants: InvariantBound,
    pub transition_cap: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            scale: Scale::Auto,
            include_memories: false,
            full_formulas: false,
            invariants: InvariantBound::default(),
            transition_cap: DEFAULT_STATE_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Elaborate(#[from] ElaborateError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Ctl(#[from] CtlError),
}

/// Elaborates, demultiplexes, scales and applies the urgency transform.
/// Returns the divisor actually used.
pub fn prepare(spec: &ResolvedSpec, scale: Scale) -> Result<(UrgencyFreeNetwork, u32), ClassifyError> {
    let net = demux_channels(&elaborate(spec)?);
    let divisor = match scale {
        Scale::Auto => constants_gcd(&net),
        Scale::Divisor(d) => d,
        Scale::None => 1,
    };
    let net = scale_constants(&net, divisor)?;
    Ok((emulate_urgency(&net), divisor))
}

/// φ, ψ and ρ (each unset when not evaluated) and the resulting status.
pub type Cells = (Option<bool>, Option<bool>, Option<bool>, Status);

/// Checks φ, then ψ and ρ as the decision procedure requires (all three
/// with `full`).
pub fn classify_location(
    checker: &mut Checker<'_>,
    component: &str,
    primed: &str,
    set: StaticSet,
    has_aperiodic: bool,
    full: bool,
) -> Result<Cells, CtlError> {
    let w = Formula::at(component, primed);
    let phi = checker.holds_initially(&Formula::phi(w.clone()))?;
    let need_psi = full || (phi && set == StaticSet::W);
    let psi = if need_psi {
        Some(checker.holds_initially(&Formula::psi(w.clone()))?)
    } else {
        None
    };
    let need_rho = full || (need_psi && psi == Some(true));
    let rho = if need_rho {
        Some(checker.holds_initially(&Formula::rho(w))?)
    } else {
        None
    };
    let status = decide(set, Some(phi), psi, rho, has_aperiodic);
    Ok((Some(phi), psi, rho, status))
}

/// Memories read by some rendering loop, which never need checking.
fn rendered_memories(spec: &ResolvedSpec) -> Vec<(String, String)> {
    spec.components
        .iter()
        .filter_map(|d| match &d.component {
            Component::Rendering { memory, .. } => Some((memory.clone(), d.id.clone())),
            _ => None,
        })
        .collect()
}

/// Static partition restricted to the locations worth checking: memories
/// read by a rendering loop are dropped unless `include_memories`.
pub fn checked_partition(spec: &ResolvedSpec, net: &Network, include_memories: bool) -> StaticPartition {
    let rendered = rendered_memories(spec);
    let keep = |&(ai, _): &(usize, usize)| {
        let a = &net.automata[ai];
        include_memories || a.kind != ComponentKind::Memory || !rendered.iter().any(|(m, _)| *m == a.id)
    };
    let p = static_partition(net);
    StaticPartition {
        n: p.n.into_iter().filter(keep).collect(),
        only_s: p.only_s.into_iter().filter(keep).collect(),
        w: p.w.into_iter().filter(keep).collect(),
    }
}

pub fn classify_spec(spec: &ResolvedSpec, opts: &ClassifyOptions) -> Result<ClassificationReport, ClassifyError> {
    let (unet, divisor) = prepare(spec, opts.scale)?;
    classify_network(spec, &unet, divisor, opts)
}

/// Classification over an already prepared network.
pub fn classify_network(
    spec: &ResolvedSpec,
    unet: &UrgencyFreeNetwork,
    divisor: u32,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport, ClassifyError> {
    let sem = DigitalClocks::new(unet, opts.invariants);
    let ts = build_with(
        &sem,
        BuildOptions {
            transition_cap: opts.transition_cap,
        },
    )?;
    classify_ts(spec, unet, &ts, divisor, opts)
}

/// Classification over a transition system already built from `unet`
/// (under `opts.invariants`).
pub fn classify_ts(
    spec: &ResolvedSpec,
    unet: &UrgencyFreeNetwork,
    ts: &TransitionSystem,
    divisor: u32,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport, ClassifyError> {
    let net: &Network = &unet.network;
    let mut checker = Checker::new(ts);
    let has_aperiodic = spec.has_aperiodic();
    let rendered = rendered_memories(spec);
    let partition = static_partition(net);

    let mut verdicts = Vec::new();
    let mut skipped = Vec::new();
    for ((ai, l), set) in partition.all() {
        let a = &net.automata[ai];
        let location = a.locations[l].name.clone();
        if a.kind == ComponentKind::Memory && !opts.include_memories {
            if let Some((_, reader)) = rendered.iter().find(|(m, _)| *m == a.id) {
                skipped.push(Skipped {
                    component: a.id.clone(),
                    location,
                    reason: format!("memory read by rendering loop {reader}"),
                });
                continue;
            }
        }
        let primed = match unet.primed_of(ai, l) {
            Some(p) => a.locations[p].name.clone(),
            None => location.clone(),
        };
        let (phi, psi, rho, status) = if set == StaticSet::N && !opts.full_formulas {
            (None, None, None, Status::Safe)
        } else {
            let (phi, psi, rho, status) =
                classify_location(&mut checker, &a.id, &primed, set, has_aperiodic, opts.full_formulas)?;
            // N locations keep their static verdict even when fully evaluated
            (phi, psi, rho, if set == StaticSet::N { Status::Safe } else { status })
        };
        verdicts.push(LocationVerdict {
            component: a.id.clone(),
            location,
            primed,
            set,
            phi,
            psi,
            rho,
            status,
        });
    }

    let aperiodic = net
        .aperiodic_sites()
        .into_iter()
        .map(|(ai, l)| Site {
            component: net.automata[ai].id.clone(),
            location: net.automata[ai].locations[l].name.clone(),
            status: Status::IntrinsicUnbounded,
        })
        .collect();

    Ok(ClassificationReport {
        spec: spec.name.clone(),
        scale: divisor,
        invariants: opts.invariants,
        states: ts.len(),
        transitions: ts.transition_count(),
        verdicts,
        skipped,
        aperiodic,
    })
}

fn cell(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

/// Table with one row per wait location: component, w′, static set, φ, ψ,
/// ρ and status.
pub fn render_table(report: &ClassificationReport) -> String {
    let mut rows: Vec<[String; 7]> = vec![[
        "comp.".into(),
        "w".into(),
        "set".into(),
        "phi".into(),
        "psi".into(),
        "rho".into(),
        "status".into(),
    ]];
    for v in &report.verdicts {
        rows.push([
            v.component.clone(),
            v.primed.clone(),
            v.set.to_string(),
            cell(v.phi).into(),
            cell(v.psi).into(),
            cell(v.rho).into(),
            v.status.short().into(),
        ]);
    }
    let widths: Vec<usize> = (0..7)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = format!(
        "{} (scale {}, {} invariants): {} states, {} transitions\n",
        report.spec,
        report.scale,
        match report.invariants {
            InvariantBound::Weak => "weak",
            InvariantBound::Strict => "strict",
        },
        report.states,
        report.transitions
    );
    for (i, r) in rows.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("  "));
            out.push('\n');
        }
    }
    for s in &report.skipped {
        out.push_str(&format!("skipped {}.{}: {}\n", s.component, s.location, s.reason));
    }
    for s in &report.aperiodic {
        out.push_str(&format!(
            "{}.{}: {}\n",
            s.component,
            s.location,
            s.status.description()
        ));
    }
    out
}
