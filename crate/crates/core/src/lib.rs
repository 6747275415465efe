//! Compiler and indefinite-waiting detector for MIRELA specifications.
//!
//! Pipeline: [`spec::load`] → [`elaborate::elaborate`] →
//! [`transform::demux_channels`] → [`semantics::scale_constants`] →
//! [`transform::emulate_urgency`] → [`semantics::build_ts`] → [`ctl`] →
//! [`classify`].

pub mod analysis;
pub mod classify;
pub mod ctl;
pub mod dump;
pub mod elaborate;
pub mod prism;
pub mod semantics;
pub mod spec;
pub mod tast;
pub mod transform;
