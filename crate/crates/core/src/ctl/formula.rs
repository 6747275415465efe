use std::fmt;

use serde::Serialize;

/// CTL formula over location atoms `at(component, location)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Formula {
    True,
    False,
    At(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    EX(Box<Formula>),
    EF(Box<Formula>),
    EG(Box<Formula>),
    AX(Box<Formula>),
    AF(Box<Formula>),
    AG(Box<Formula>),
    EU(Box<Formula>, Box<Formula>),
    AU(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn at(component: impl Into<String>, location: impl Into<String>) -> Formula {
        Formula::At(component.into(), location.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn ex(self) -> Formula {
        Formula::EX(Box::new(self))
    }

    pub fn ef(self) -> Formula {
        Formula::EF(Box::new(self))
    }

    pub fn eg(self) -> Formula {
        Formula::EG(Box::new(self))
    }

    pub fn ax(self) -> Formula {
        Formula::AX(Box::new(self))
    }

    pub fn af(self) -> Formula {
        Formula::AF(Box::new(self))
    }

    pub fn ag(self) -> Formula {
        Formula::AG(Box::new(self))
    }

    pub fn eu(self, until: Formula) -> Formula {
        Formula::EU(Box::new(self), Box::new(until))
    }

    pub fn au(self, until: Formula) -> Formula {
        Formula::AU(Box::new(self), Box::new(until))
    }

    /// `EF EG w`: the component may stay at `w` forever.
    pub fn phi(w: Formula) -> Formula {
        w.eg().ef()
    }

    /// `EF AG w`: the component may get stuck at `w`.
    pub fn psi(w: Formula) -> Formula {
        w.ag().ef()
    }

    /// `EF EG (w ∧ EF ¬w)`: the component may stay at `w` forever while
    /// leaving it remains possible.
    pub fn rho(w: Formula) -> Formula {
        w.clone().and(w.not().ef()).eg().ef()
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::At(..) => 0,
            Formula::Not(f)
            | Formula::EX(f)
            | Formula::EF(f)
            | Formula::EG(f)
            | Formula::AX(f)
            | Formula::AF(f)
            | Formula::AG(f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::EU(a, b) | Formula::AU(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

fn wrap(f: &Formula) -> bool {
    matches!(f, Formula::And(..) | Formula::Or(..))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, g: &Formula| {
            if wrap(g) {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::At(c, l) => write!(f, "at({c},{l})"),
            Formula::Not(g) => {
                f.write_str("!")?;
                sub(f, g)
            }
            Formula::And(a, b) => {
                sub(f, a)?;
                f.write_str(" & ")?;
                sub(f, b)
            }
            Formula::Or(a, b) => {
                sub(f, a)?;
                f.write_str(" | ")?;
                sub(f, b)
            }
            Formula::EX(g) => {
                f.write_str("EX ")?;
                sub(f, g)
            }
            Formula::EF(g) => {
                f.write_str("EF ")?;
                sub(f, g)
            }
            Formula::EG(g) => {
                f.write_str("EG ")?;
                sub(f, g)
            }
            Formula::AX(g) => {
                f.write_str("AX ")?;
                sub(f, g)
            }
            Formula::AF(g) => {
                f.write_str("AF ")?;
                sub(f, g)
            }
            Formula::AG(g) => {
                f.write_str("AG ")?;
                sub(f, g)
            }
            Formula::EU(a, b) => write!(f, "E[{a} U {b}]"),
            Formula::AU(a, b) => write!(f, "A[{a} U {b}]"),
        }
    }
}
