//! Numerical geometry in the first Heisenberg group `H^1` (with `H^n` group
//! operations): horizontal lifts of planar curves, surfaces and their
//! characteristic foliations, the Rumin complex and Stokes-type checks.

pub mod curves;
pub mod error;
pub mod exec;
pub mod field;
pub mod foliation;
pub mod group;
pub mod integrate;
pub mod ode;
pub mod quadrature;
pub mod rumin;
pub mod scenes;
pub mod surfaces;
pub mod taylor;

pub use error::{HeisError, Result};
pub use exec::Exec;
pub use group::{Point, Point1, TangentVector};
