//! Minimum-time speed profiles for a longitudinal vehicle model with linear
//! and quadratic drag.
//!
//! The model is the Riccati ODE `v'(t) = a - c0 v - c1 v^2` under a piecewise
//! constant control `a`. Its solution exists in closed form but the direct
//! formulas are ill conditioned near several parameter limits (vanishing drag,
//! vanishing discriminant, times close to the domain boundaries). This crate
//! evaluates the closed forms through a small family of stable scalar kernels
//! with series fallbacks, and builds on them:
//!
//! - [`kernels`]: the scalar special functions with series switchover,
//! - [`arc`]: construction, classification and evaluation of a single
//!   constant-control arc (`v(t)`, `s(t)`, validity domains),
//! - [`inverse`]: inversion of the monotone space map `s(t) = zeta` with a
//!   barrier-safeguarded Newton iteration,
//! - [`ocp`]: the two-arc minimum-time problem (feasibility envelope,
//!   switching point, total time, trajectory sampling),
//! - [`oracle`]: an independent adaptive Runge-Kutta integrator with dense
//!   output, used for verification.
//!
//! Every type here is immutable plain data and every operation a pure
//! function of its arguments, so arcs and solutions can be shared and
//! evaluated concurrently without coordination.
//!
//! The crate is `no_std`-compatible (enable the `libm` feature and disable
//! `std`); an allocator is required for trajectory sampling.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("mintime-core requires either the `std` or the `libm` feature");

extern crate alloc;

mod math;

pub mod arc;
pub mod inverse;
pub mod kernels;
pub mod ocp;
pub mod oracle;

pub use arc::{build_arc, Arc, ArcDomain, ArcError, ArcInput, CaseKind, DragParams};
pub use inverse::{time_at_space, velocity_at_space, InversionResult, InversionSettings};
pub use ocp::{
    feasibility, sample_trajectory, solve, total_time_quadrature, BangBangProblem,
    BangBangSolution, Feasibility, FeasibilityVerdict, Phase, TrajectorySample,
};
pub use oracle::{integrate_arc, locate_space_event, shoot_bangbang, OracleSettings};
