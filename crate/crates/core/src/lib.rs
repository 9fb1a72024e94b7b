//! Continuous-time quantum walks on the rotational ladder of a diatomic
//! molecule driven by an optical frequency comb.
//!
//! * [`rotor`]: energies, transition frequencies and dipoles;
//! * [`comb`]: ideal and chirp-compensated comb fields;
//! * [`dynamics`]: RK4 integration of the driven ladder and the exact
//!   resonant-only propagator;
//! * [`oracles`]: Bessel-function walk solutions and the classical walk;
//! * [`metrics`]: distribution comparison;
//! * [`io`]: versioned CSV/JSON output.

pub mod comb;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod metrics;
pub mod oracles;
pub mod rotor;

pub use comb::{build_comb, CombComponent, CombSpec, FieldProfile};
pub use dynamics::{
    derivative, propagate, propagate_rwa, FieldEvaluation, RunConfig, Trajectory, WalkState,
};
pub use error::{Error, Result};
pub use metrics::{compare, moments, total_variation, ComparisonReport, Moments};
pub use oracles::{
    bessel_j, bessel_j_sequence, classical_ctrw, classical_distribution, ctqw_distribution,
    ctqw_finite, ctqw_infinite, scaled_bessel_i_sequence, LatticeDistribution,
    PathGraphPropagator,
};
pub use rotor::RotorSpec;
