#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bohmian;
pub mod cli;
pub mod classical;
pub mod error;
pub mod model;
pub mod observables;
pub mod ode;
pub mod quadrature;
pub mod spectral;
pub mod validation;

pub use error::{Error, Result};
