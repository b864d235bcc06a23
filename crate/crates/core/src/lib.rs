//! Radial bound states of a charged particle in a twisted screw-dislocation
//! background with a uniform axial field and an Aharonov-Bohm flux line.
//!
//! The 3D problem separates into plane waves along the axis, angular-momentum
//! eigenstates around it and a radial Sturm-Liouville problem for the Langer
//! field u = √r R, which [`solver`] discretizes on a uniform grid.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod observables;
pub mod oracles;
pub mod solver;
pub mod sweeps;
pub mod units;

pub use error::{Error, Result};
pub use model::{Fields, Geometry, Hamiltonian, Mode};
pub use solver::{CoreBoundary, Grid, RadialProblem, Spectrum};
pub use units::{ChargeSign, Material};
