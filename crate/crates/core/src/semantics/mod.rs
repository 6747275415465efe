//! Digital-clocks semantics: integer clocks advancing in unit ticks, clamped
//! one above the largest constant they are compared with.
//!
//! A global state is a flat `[u16]`: the location of every automaton, then
//! the clock `x` of every automaton, then (for the transformed semantics) the
//! urgency clock `u` of every automaton.

mod digital;
mod explore;
pub mod native;
mod scale;

pub use digital::DigitalClocks;
pub use native::UrgentNative;
pub use explore::{build_ts, build_with, BuildError, BuildOptions, TransitionSystem, DEFAULT_STATE_CAP};
pub use scale::{constants_gcd, scale_constants, ScaleError};

use serde::{Deserialize, Serialize};

use crate::tast::Automaton;

/// `1 +` the largest constant compared against the automaton's clock.
pub fn clock_ceiling(automaton: &Automaton) -> u32 {
    automaton.clock_ceiling()
}

/// How an activity invariant `x < c` is read over integer clocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvariantBound {
    /// `x ≤ c`: the closed reading a digital-clocks engine needs, since it
    /// admits no strict comparisons. Matches the reference verdicts of both
    /// example models.
    #[default]
    Weak,
    /// `x ≤ c−1`: exact integer reading of the strict bound.
    Strict,
}

impl InvariantBound {
    /// Largest admissible clock value under invariant constant `c`.
    pub fn max_value(self, c: u32) -> u32 {
        match self {
            InvariantBound::Weak => c,
            InvariantBound::Strict => c.saturating_sub(1),
        }
    }
}

impl std::str::FromStr for InvariantBound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "weak" => Ok(InvariantBound::Weak),
            "strict" => Ok(InvariantBound::Strict),
            _ => Err(format!("unknown invariant reading `{s}` (expected weak or strict)")),
        }
    }
}

/// Ceiling of an urgency clock, which is only ever compared with 0.
pub const URGENCY_CEILING: u16 = 1;

/// A successor relation over flat states.
///
/// Implementations must keep every automaton's location in slot `i` of the
/// state for automaton `i`.
pub trait Semantics {
    fn automata(&self) -> Vec<String>;

    /// Location names of each automaton.
    fn location_names(&self) -> Vec<Vec<String>>;

    fn initial(&self) -> Vec<u16>;

    /// Whether every location invariant holds in `state`.
    fn invariants_hold(&self, state: &[u16]) -> bool;

    /// Appends every successor of `state` to `out`.
    fn successors(&self, state: &[u16], out: &mut Vec<Vec<u16>>);
}
