//! Exact computations for the mirror symmetry of two-variable invertible
//! polynomials: maximally graded matrix factorisations on one side, the
//! directed category of vanishing cycles of the transpose on the other.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod aside;
pub mod bside;
pub mod compare;
pub mod error;
pub mod export;
pub mod family;
pub mod grading;
pub mod linalg;
pub mod mf;
pub mod parallel;
pub mod polyring;
pub mod transport;

pub use error::Error;
pub use family::{Family, FamilySpec};
