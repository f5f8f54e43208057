//! Relative p-capacities, shell Poincaré constants, capacitary inradius
//! estimation and two-sided Poincaré bounds on benchmark domains, with
//! independent variational oracles for every closed form.

pub mod bounds;
pub mod capacity;
pub mod error;
pub mod exponents;
pub mod geometry;
pub mod grid2d;
pub mod quad;
pub mod shell;
pub mod shooting;
pub mod solver;
pub mod special;
pub mod variational;

pub use capacity::{CapacityValue, Method, Modulus, PointCapacity};
pub use error::{CapError, Result};
pub use exponents::{Exponents, Regime};
pub use geometry::{AnnulusGeometry, ShellGeometry};
