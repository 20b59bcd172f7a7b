//! Exact linear algebra for Heisenberg actions on the homology of Hilbert
//! schemes of points on curves, the Macdonald transform to the D-graded
//! Jacobian polynomial, and BPS numbers from Euler series.

pub mod bps;
pub mod error;
pub mod graded;
pub mod heisenberg;
pub mod io;
pub mod laurent;
pub mod macdonald;
pub mod matrix;
pub mod models;
pub mod rational;

pub use error::{Error, Result};
pub use graded::{Bidegree, BigradedSpace, GradedOperator, Grading, OperatorQuartet, Role, Slice};
pub use laurent::{LaurentPoly, Monomial, Var};
pub use matrix::{RationalMatrix, Vector};
pub use rational::Rational;
