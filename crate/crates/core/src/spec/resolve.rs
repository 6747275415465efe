use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::ast::{Component, ComponentDecl, ComponentKind, Interval, Position, SpecAst};
use super::{SpecError, SpecErrorKind};

/// A specification whose target lists are complete and validated.
/// Equality ignores warnings.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedSpec {
    pub name: String,
    pub components: Vec<ComponentDecl>,
    /// Non-fatal observations made while resolving.
    pub warnings: Vec<String>,
}

impl PartialEq for ResolvedSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.components == other.components
    }
}

impl Eq for ResolvedSpec {}

impl ResolvedSpec {
    pub fn component(&self, id: &str) -> Option<&ComponentDecl> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn kind_of(&self, id: &str) -> Option<ComponentKind> {
        self.component(id).map(ComponentDecl::kind)
    }

    /// Point-to-point data channels `k_{C-D}`: every (C, D) where D is a
    /// processing unit in C's target list.
    pub fn data_channels(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for c in &self.components {
            for t in &c.targets {
                if self.kind_of(t).is_some_and(ComponentKind::is_processing) {
                    out.push((c.id.clone(), t.clone()));
                }
            }
        }
        out
    }

    pub fn has_aperiodic(&self) -> bool {
        self.components
            .iter()
            .any(|c| c.kind() == ComponentKind::Aperiodic)
    }

    /// Every timing constant appearing in the specification.
    pub fn constants(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut push = |i: &Interval| {
            out.push(i.min);
            out.push(i.max);
        };
        for c in &self.components {
            match &c.component {
                Component::Periodic { start, capture } => {
                    push(start);
                    push(capture);
                }
                Component::Aperiodic { min_event } => push(&Interval::new(*min_event, *min_event)),
                Component::First { sources } | Component::Memory { sources } => {
                    sources.iter().filter_map(|s| s.interval.as_ref()).for_each(&mut push)
                }
                Component::Both { work, .. } => push(work),
                Component::Priority {
                    master_work,
                    slave_work,
                    ..
                } => {
                    push(master_work);
                    push(slave_work);
                }
                Component::Rendering { period, access, .. } => {
                    push(period);
                    push(access);
                }
            }
        }
        out
    }

    pub fn to_ast(&self) -> SpecAst {
        SpecAst {
            name: self.name.clone(),
            decls: self.components.clone(),
            positions: Vec::new(),
        }
    }
}

/// Completes target lists and validates the cross-declaration rules.
///
/// Missing targets are appended after the explicit ones, in declaration
/// order of the components that name the declarer as a source.
pub fn resolve_targets(ast: &SpecAst) -> Result<ResolvedSpec, SpecError> {
    let kinds: HashMap<&str, ComponentKind> =
        ast.decls.iter().map(|d| (d.id.as_str(), d.kind())).collect();
    let mut warnings = Vec::new();

    for (i, d) in ast.decls.iter().enumerate() {
        let pos = ast.position_of(i);
        check_sources(d, &kinds, pos)?;

        let mut seen = HashSet::new();
        for t in &d.targets {
            if !seen.insert(t.as_str()) {
                return Err(SpecError::new(
                    SpecErrorKind::DuplicateTarget,
                    pos,
                    format!("`{t}` appears twice in the target list of `{}`", d.id),
                ));
            }
            let Some(target) = ast.decl(t) else {
                return Err(SpecError::new(
                    SpecErrorKind::UnknownComponent,
                    pos,
                    format!("target `{t}` of `{}` is not declared", d.id),
                ));
            };
            if target.kind() == ComponentKind::Memory {
                warnings.push(format!(
                    "`{}` names memory `{t}` as an explicit target; it is accepted",
                    d.id
                ));
            }
            if !target.component.has_source(&d.id) {
                return Err(SpecError::new(
                    SpecErrorKind::TargetNotSource,
                    pos,
                    format!("`{t}` is a target of `{}` but does not list it as a source", d.id),
                ));
            }
        }
    }

    let components = ast
        .decls
        .iter()
        .map(|d| {
            let mut targets = d.targets.clone();
            for other in &ast.decls {
                if other.component.has_source(&d.id) && !targets.contains(&other.id) {
                    targets.push(other.id.clone());
                }
            }
            ComponentDecl {
                targets,
                ..d.clone()
            }
        })
        .collect();

    Ok(ResolvedSpec {
        name: ast.name.clone(),
        components,
        warnings,
    })
}

fn check_sources(
    d: &ComponentDecl,
    kinds: &HashMap<&str, ComponentKind>,
    pos: Position,
) -> Result<(), SpecError> {
    let sources = d.component.source_ids();
    let mut seen = HashSet::new();
    for s in &sources {
        if !seen.insert(*s) {
            return Err(SpecError::new(
                SpecErrorKind::DuplicateSource,
                pos,
                format!("`{s}` appears twice among the sources of `{}`", d.id),
            ));
        }
        if *s == d.id {
            return Err(SpecError::new(
                SpecErrorKind::KindRule,
                pos,
                format!("`{}` cannot be its own source", d.id),
            ));
        }
        let Some(&kind) = kinds.get(s) else {
            return Err(SpecError::new(
                SpecErrorKind::UnknownComponent,
                pos,
                format!("source `{s}` of `{}` is not declared", d.id),
            ));
        };
        let ok = match d.kind() {
            ComponentKind::First | ComponentKind::Both | ComponentKind::Priority => {
                kind.is_sensor() || kind.is_processing()
            }
            ComponentKind::Memory => kind.is_sensor() || kind.is_processing(),
            ComponentKind::Rendering => kind == ComponentKind::Memory,
            ComponentKind::Periodic | ComponentKind::Aperiodic => false,
        };
        if !ok {
            let expected = match d.kind() {
                ComponentKind::Rendering => "a Memory",
                _ => "a sensor or a processing unit",
            };
            return Err(SpecError::new(
                SpecErrorKind::KindRule,
                pos,
                format!(
                    "source `{s}` of {} `{}` is a {kind}, expected {expected}",
                    d.kind(),
                    d.id
                ),
            ));
        }
    }
    if matches!(d.component, Component::First { ref sources } | Component::Memory { ref sources } if sources.is_empty())
    {
        return Err(SpecError::arity(pos, format!("`{}` needs at least one source", d.id)));
    }
    Ok(())
}
