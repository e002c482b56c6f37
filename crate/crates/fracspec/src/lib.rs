//! Eigenvalues and eigenfunctions of the covariance operators of three
//! fractional Gaussian processes on `[0, 1]` — fractional Brownian motion,
//! the fractional Ornstein-Uhlenbeck process, and integrated fractional
//! Brownian motion — computed two independent ways:
//!
//! * numerically, by a uniform-node quadrature discretization of the integral
//!   operator and an iterative symmetric eigensolver ([`nystrom`]), and
//! * in closed form, by second-order spectral asymptotics with boundary-layer
//!   eigenfunction corrections ([`asymptotics`]),
//!
//! together with a cross-validation harness and an application to optimal
//! linear filtering of a fractional signal in white noise ([`filtering`]).
//!
//! The `examples/` directory holds one runnable program per capability; the
//! thin `fracspec` binary exposes the same computations as reproducible
//! CSV/JSON runs (see [`cli`]).

// `!(x > 0.0)`-style guards deliberately reject NaN together with the
// out-of-range values, and parity reads clearer through `%`.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod filtering;
pub mod kernels;
pub mod nystrom;
pub mod specfun;

pub use error::{Error, Result};
pub use kernels::{ProcessKind, ProcessSpec};
