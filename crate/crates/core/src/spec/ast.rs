//! Syntax tree of a MIRELA specification.

use std::fmt;

use serde::Serialize;

/// Closed interval of time units `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    pub min: u32,
    pub max: u32,
}

impl Interval {
    pub fn new(min: u32, max: u32) -> Self {
        Interval { min, max }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.min, self.max)
    }
}

/// Line/column of a token, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// A source entry `id` or `id[min,max]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Source {
    pub id: String,
    pub interval: Option<Interval>,
}

impl Source {
    pub fn new(id: impl Into<String>, interval: Option<Interval>) -> Self {
        Source {
            id: id.into(),
            interval,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentKind {
    Periodic,
    Aperiodic,
    First,
    Both,
    Priority,
    Memory,
    Rendering,
}

impl ComponentKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ComponentKind::Periodic => "Periodic",
            ComponentKind::Aperiodic => "Aperiodic",
            ComponentKind::First => "First",
            ComponentKind::Both => "Both",
            ComponentKind::Priority => "Priority",
            ComponentKind::Memory => "Memory",
            ComponentKind::Rendering => "Rendering",
        }
    }

    pub fn is_sensor(self) -> bool {
        matches!(self, ComponentKind::Periodic | ComponentKind::Aperiodic)
    }

    pub fn is_processing(self) -> bool {
        matches!(
            self,
            ComponentKind::First | ComponentKind::Both | ComponentKind::Priority
        )
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Kind-specific parameters of a component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Component {
    /// `Periodic(min_start,max_start)[min,max]`
    Periodic { start: Interval, capture: Interval },
    /// `Aperiodic(min_event)`
    Aperiodic { min_event: u32 },
    /// `First(SList)`
    First { sources: Vec<Source> },
    /// `Both(id,id)[min,max]`
    Both { sources: [String; 2], work: Interval },
    /// `Priority(master[min,max],slave[min,max])`
    Priority {
        master: String,
        master_work: Interval,
        slave: String,
        slave_work: Interval,
    },
    /// `Memory(SList)`
    Memory { sources: Vec<Source> },
    /// `Rendering(min_rg,max_rg)(memory[min,max])`
    Rendering {
        period: Interval,
        memory: String,
        access: Interval,
    },
}

impl Component {
    pub fn kind(&self) -> ComponentKind {
        match self {
            Component::Periodic { .. } => ComponentKind::Periodic,
            Component::Aperiodic { .. } => ComponentKind::Aperiodic,
            Component::First { .. } => ComponentKind::First,
            Component::Both { .. } => ComponentKind::Both,
            Component::Priority { .. } => ComponentKind::Priority,
            Component::Memory { .. } => ComponentKind::Memory,
            Component::Rendering { .. } => ComponentKind::Rendering,
        }
    }

    /// Source identifiers in declaration order.
    pub fn source_ids(&self) -> Vec<&str> {
        match self {
            Component::Periodic { .. } | Component::Aperiodic { .. } => Vec::new(),
            Component::First { sources } | Component::Memory { sources } => {
                sources.iter().map(|s| s.id.as_str()).collect()
            }
            Component::Both { sources, .. } => sources.iter().map(String::as_str).collect(),
            Component::Priority { master, slave, .. } => vec![master.as_str(), slave.as_str()],
            Component::Rendering { memory, .. } => vec![memory.as_str()],
        }
    }

    pub fn has_source(&self, id: &str) -> bool {
        self.source_ids().contains(&id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentDecl {
    pub id: String,
    pub component: Component,
    pub targets: Vec<String>,
}

impl ComponentDecl {
    pub fn kind(&self) -> ComponentKind {
        self.component.kind()
    }
}

/// A parsed specification, declarations in source order.
#[derive(Debug, Clone, Serialize)]
pub struct SpecAst {
    pub name: String,
    pub decls: Vec<ComponentDecl>,
    /// Position of each declaration's identifier; not part of equality.
    #[serde(skip)]
    pub positions: Vec<Position>,
}

impl PartialEq for SpecAst {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.decls == other.decls
    }
}

impl Eq for SpecAst {}

impl SpecAst {
    pub fn decl(&self, id: &str) -> Option<&ComponentDecl> {
        self.decls.iter().find(|d| d.id == id)
    }

    pub fn position_of(&self, index: usize) -> Position {
        self.positions.get(index).copied().unwrap_or_default()
    }
}
