//! Exact dynamics on odometers and shift spaces, pseudo-orbit shadowing, and
//! a refinement pipeline that produces, near any given point, a point whose
//! ω-limit set is a periodic orbit or an odometer, together with a
//! checkable certificate. A δ-chain graph engine covers chain recurrence and
//! chain continuity on grid-discretised maps.
//!
//! Every distance is an exact [`Mag`]; every reported fact about an infinite
//! object is qualified by the finite depth at which it was checked.

pub mod chain_graph;
pub mod constructor;
pub mod error;
pub mod mag;
pub mod omega;
pub mod par;
pub mod pseudo_orbits;
pub mod recognition;
pub mod report;
pub mod spaces;

pub use error::{Error, Result};
pub use mag::Mag;
pub use par::Exec;
pub use pseudo_orbits::PseudoOrbit;
pub use spaces::{Point, System};
