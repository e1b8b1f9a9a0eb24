//! Screening genus-2 curves over Q for a mod-p Galois representation
//! induced from a real quadratic field, and classifying the survivors
//! by matching Frobenius statistics against subgroups of GSp4(F_p).

pub mod arith;
pub mod batch;
pub mod classify;
pub mod cli;
pub mod counting;
pub mod curve;
pub mod field;
pub mod gsp4;
pub mod jacobian;
pub mod quadfields;
pub mod screen;
pub mod tables;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
