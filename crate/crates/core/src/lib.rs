//! Words coding 2- and 3-interval exchange transformations, the morphisms
//! acting on them, and the integer matrix monoid their incidence matrices
//! live in. Every classification and set identity is decided in exact
//! quadratic-field arithmetic.

pub mod capset;
pub mod error;
pub mod iet;
pub mod monoid;
pub mod morphism;
pub mod parse;
pub mod preserve;
pub mod qfield;
pub mod repro;
pub mod words;

pub use error::Error;
pub use qfield::{QuadReal, Rational, RealParam};
