//! Classical and quantum κ-deformed nonlinear oscillator with an isotonic
//! `k_g/x²` term: closed-form solutions and independent numerical oracles.

// `!(a > b)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod cli;
pub mod hypergeo;
pub mod model;
pub mod slsolver;
pub mod spectrum;
pub mod verify;
