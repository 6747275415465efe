use std::fmt::{self, Write as _};

use super::ast::{Component, ComponentDecl, Source, SpecAst};
use super::resolve::ResolvedSpec;

fn write_sources(f: &mut impl fmt::Write, sources: &[Source]) -> fmt::Result {
    for (i, s) in sources.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(&s.id)?;
        if let Some(itv) = s.interval {
            write!(f, "{itv}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Periodic { start, capture } => {
                write!(f, "Periodic({},{}){capture}", start.min, start.max)
            }
            Component::Aperiodic { min_event } => write!(f, "Aperiodic({min_event})"),
            Component::First { sources } => {
                f.write_str("First(")?;
                write_sources(f, sources)?;
                f.write_str(")")
            }
            Component::Both { sources, work } => {
                write!(f, "Both({},{}){work}", sources[0], sources[1])
            }
            Component::Priority {
                master,
                master_work,
                slave,
                slave_work,
            } => write!(f, "Priority({master}{master_work},{slave}{slave_work})"),
            Component::Memory { sources } => {
                f.write_str("Memory(")?;
                write_sources(f, sources)?;
                f.write_str(")")
            }
            Component::Rendering {
                period,
                memory,
                access,
            } => write!(f, "Rendering({},{})({memory}{access})", period.min, period.max),
        }
    }
}

impl fmt::Display for ComponentDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.id, self.component)?;
        if !self.targets.is_empty() {
            write!(f, " -> ({})", self.targets.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for SpecAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.name)?;
        for (i, d) in self.decls.iter().enumerate() {
            let end = if i + 1 == self.decls.len() { '.' } else { ';' };
            writeln!(f, "  {d}{end}")?;
        }
        Ok(())
    }
}

/// Renders a resolved specification as MIRELA text with every target explicit.
pub fn pretty_print(spec: &ResolvedSpec) -> String {
    let mut out = String::new();
    write!(out, "{}", spec.to_ast()).expect("writing to a String cannot fail");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{load, parse, resolve_targets};

    const EX1: &str = include_str!("../../../../models/ex1.mirela");

    #[test]
    fn example_one_round_trips_with_explicit_targets() {
        let resolved = load(EX1).unwrap();
        let text = pretty_print(&resolved);
        assert!(text.contains("S1 = Periodic(50,75)[75,100] -> (F1);"));
        assert!(text.contains("S3 = Periodic(200,300)[350,400] -> (F2,B);"));
        assert!(text.contains("R = Rendering(50,75)(M[25,50])."));
        assert_eq!(parse(&text).unwrap(), resolved.to_ast());
        assert_eq!(resolve_targets(&parse(&text).unwrap()).unwrap(), resolved);
    }

    #[test]
    fn empty_targets_print_no_arrow() {
        let spec = load("X: A = Aperiodic(4).").unwrap();
        assert_eq!(pretty_print(&spec), "X:\n  A = Aperiodic(4).\n");
    }

    #[test]
    fn printing_is_a_fixpoint() {
        let first = pretty_print(&load(EX1).unwrap());
        let second = pretty_print(&load(&first).unwrap());
        assert_eq!(first, second);
    }
}
