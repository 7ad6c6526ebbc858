//! Simulation and bifurcation analysis of a planar Filippov predator-prey model
//! with prey refuge and threshold-triggered harvesting.
//!
//! Harvesting (`psi = 1`) switches on when the prey density exceeds the
//! threshold `S`. Solutions are concatenations of smooth flow in the two
//! regions and sliding motion along `x = S`.
//!
//! * [`model`]: parameters, the two vector fields and the switching function
//! * [`sliding`]: the sliding segment, Filippov/Utkin sliding flow, pseudo-equilibrium
//! * [`equilibria`]: interior, boundary and tangent points with stability
//! * [`integrator`]: event-driven hybrid simulation
//! * [`scan`]: parameter-plane scans, bifurcation points, basins of attraction

// `!(v > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod equilibria;
pub mod error;
pub mod integrator;
pub mod model;
pub mod poly;
pub mod sampling;
pub mod scan;
pub mod sliding;

pub use equilibria::{
    EquilibriumKind, EquilibriumMode, EquilibriumRecord, Placement, Stability, TangentPointRecord,
    Visibility,
};
pub use error::{Error, Result};
pub use integrator::{SimOptions, Trajectory};
pub use model::{ModelParams, ParamValues, PsiMode, State, Velocity};
pub use scan::{BasinLabel, GridResult, ModeStatus, PseudoStatus, RegionCode};
pub use sliding::{ManifoldRegime, SlidingBounds};
