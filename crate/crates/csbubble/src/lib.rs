//! Numerical construction and verification of non-topological bubbling
//! vortex profiles for rank-2 competitive Chern-Simons systems.
//!
//! The crate builds radially symmetric solutions of the two-component
//! self-dual system by shooting from a singular origin: the first
//! component starts on a scalar Chern-Simons-Higgs profile of prescribed
//! decay exponent `gamma`, the second at an interior height `ln eps`.
//! As `eps` decreases the run develops a multi-scale bubble structure
//! organized by five event radii; the crate detects them, compares each
//! bubble against its explicit Liouville profile, extracts the far-field
//! decay exponents, and audits integration accuracy with an exact
//! Pohozaev-type conservation ledger.
//!
//! Modules:
//! - [`model`]: couplings, the quadratic form `J`, exponent regions and
//!   the `gamma <-> (alpha1, alpha2)` correspondence;
//! - [`ode`]: embedded Dormand-Prince 5(4) stepper;
//! - [`system`], [`profile`]: the two-component initial problem in
//!   log-radius coordinates and stored trajectories with the ledger;
//! - [`scalar`]: the scalar sub-solver producing the initial height;
//! - [`shoot`]: event detection, single shots and `eps` sweeps;
//! - [`bubble`]: closed-form Liouville profiles and blow-down comparisons;
//! - [`verify`]: the acceptance checks run by `csbubble verify`.

// negated comparisons are deliberate: `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bubble;
pub mod model;
pub mod ode;
pub mod profile;
pub mod scalar;
pub mod shoot;
pub mod system;
pub mod verify;
