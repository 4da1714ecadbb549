//! Inversion of the monotone space map: given a target abscissa `zeta`, find
//! the instant `t` with `s(t) = zeta`.
//!
//! The space map is strictly increasing wherever the speed is positive, so
//! the root is unique, but plain Newton can escape the validity window on the
//! blow-up side where `s -> -inf`. Near that barrier the iteration replaces
//! the tangent model by `g(t) = a - b / (t - t_min)`, which matches `f` and
//! `f'` at the current iterate and whose root stays right of the barrier:
//!
//! ```text
//! f(t_k) > 0:  dt = f / (f' + f / (t_k - t_min))     (barrier step)
//! f(t_k) <= 0: dt = f / f'                           (plain Newton)
//! ```
//!
//! With an infinite `t_min` the barrier term vanishes and both branches are
//! plain Newton. A bracketing/bisection fallback guards against the
//! floating-point pathologies the convergence theory does not cover.

use crate::arc::{self, Arc, ArcError, CaseKind};
use crate::math;
use alloc::vec::Vec;

/// Newton iteration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionSettings {
    /// Absolute time tolerance (s); also scales the residual test.
    pub abs_tol: f64,
    pub max_iter: usize,
    /// Geometric factor for bracket expansion when a side is unknown.
    pub bracket_expansion: f64,
}

impl InversionSettings {
    pub const DEFAULT: Self = Self { abs_tol: 1e-12, max_iter: 64, bracket_expansion: 2.0 };

    pub fn validate(&self) -> Result<(), InverseError> {
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(InverseError::InvalidSettings("abs_tol must be positive"));
        }
        if self.max_iter < 8 {
            return Err(InverseError::InvalidSettings("max_iter < 8"));
        }
        if self.bracket_expansion.is_nan() || self.bracket_expansion <= 1.0 {
            return Err(InverseError::InvalidSettings("bracket_expansion must exceed 1"));
        }
        Ok(())
    }
}

impl Default for InversionSettings {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Outcome of one inversion.
#[derive(Debug, Clone, Copy)]
pub struct InversionResult {
    pub t: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `s(t) - zeta` at the returned instant.
    pub f_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseError {
    /// Target abscissa outside the arc's reachable space window.
    OutOfRange { zeta: f64, s_min: f64, s_max: f64 },
    /// Iteration budget exhausted; indicates a defect for in-range targets.
    NoConvergence { iterations: usize, t: f64, residual: f64 },
    InvalidSettings(&'static str),
    Arc(ArcError),
}

impl From<ArcError> for InverseError {
    fn from(e: ArcError) -> Self {
        InverseError::Arc(e)
    }
}

impl core::fmt::Display for InverseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            InverseError::OutOfRange { zeta, s_min, s_max } => {
                write!(f, "zeta = {zeta} outside the reachable range ({s_min}, {s_max}]")
            }
            InverseError::NoConvergence { iterations, t, residual } => {
                write!(f, "no convergence after {iterations} iterations (t = {t}, residual = {residual})")
            }
            InverseError::InvalidSettings(msg) => write!(f, "invalid inversion settings: {msg}"),
            InverseError::Arc(e) => write!(f, "arc evaluation failed: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InverseError {}

/// Finds `t` with `s(t) = zeta` on the given arc.
pub fn time_at_space(
    arc: &Arc,
    zeta: f64,
    settings: &InversionSettings,
) -> Result<InversionResult, InverseError> {
    newton_invert(arc, zeta, settings, None)
}

/// Same as [`time_at_space`] but records the Newton iterates; used to verify
/// the barrier-safety and quadratic-convergence properties.
pub fn time_at_space_traced(
    arc: &Arc,
    zeta: f64,
    settings: &InversionSettings,
    trace: &mut Vec<f64>,
) -> Result<InversionResult, InverseError> {
    newton_invert(arc, zeta, settings, Some(trace))
}

/// `v(t(zeta))`: the speed as a function of the travelled space.
pub fn velocity_at_space(
    arc: &Arc,
    zeta: f64,
    settings: &InversionSettings,
) -> Result<f64, InverseError> {
    let res = time_at_space(arc, zeta, settings)?;
    Ok(arc::velocity(arc, res.t)?)
}

fn s_tol(x: f64) -> f64 {
    1e-9 * (1.0 + math::abs(x))
}

fn newton_invert(
    arc: &Arc,
    zeta: f64,
    settings: &InversionSettings,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<InversionResult, InverseError> {
    settings.validate()?;
    let d = &arc.domain;
    let out_of_range = InverseError::OutOfRange { zeta, s_min: d.s_min, s_max: d.s_max };
    if zeta.is_nan() || zeta > d.s_max + s_tol(d.s_max) || zeta < d.s_min - s_tol(d.s_min) {
        return Err(out_of_range);
    }
    // Open lower end: s -> -inf there, any finite zeta is reachable.
    if arc.kind != CaseKind::B && d.s_min.is_finite() && zeta <= d.s_min {
        return Err(out_of_range);
    }

    // Case A is linear.
    if arc.kind == CaseKind::A {
        let v0 = arc.input.v0;
        if v0 > 0.0 {
            let t = zeta / v0;
            return Ok(InversionResult { t, iterations: 0, converged: true, f_residual: 0.0 });
        }
        // Standstill arc: only zeta = 0 is reachable.
        return if math::abs(zeta) <= s_tol(0.0) {
            Ok(InversionResult { t: 0.0, iterations: 0, converged: true, f_residual: -zeta })
        } else {
            Err(out_of_range)
        };
    }

    // Boundary targets have closed-form answers where Newton would divide by
    // v = 0.
    let boundary = |x: f64| 4.0 * f64::EPSILON * (1.0 + math::abs(x));
    if matches!(arc.kind, CaseKind::D | CaseKind::E)
        && d.s_max.is_finite()
        && zeta >= d.s_max - boundary(d.s_max)
    {
        return Ok(InversionResult {
            t: d.t_max,
            iterations: 0,
            converged: true,
            f_residual: d.s_max - zeta,
        });
    }
    if arc.kind == CaseKind::B && zeta <= d.s_min + boundary(d.s_min) {
        return Ok(InversionResult {
            t: d.t_min,
            iterations: 0,
            converged: true,
            f_residual: d.s_min - zeta,
        });
    }

    // Initial guess: drag-free inversion for the rising case, the anchor
    // otherwise.
    let a = arc.input.accel;
    let v0 = arc.input.v0;
    let mut t = if arc.kind == CaseKind::B && zeta * a > 0.0 {
        2.0 * zeta / (v0 + math::sqrt(4.0 * zeta * a + v0 * v0))
    } else {
        0.0
    };
    if !(t > d.t_min && t <= d.t_max) {
        t = if d.t_min.is_finite() { 0.5 * (d.t_min + d.t_max) } else { d.t_max - 1.0 };
    }
    // A guess sitting on the zero-speed boundary stalls Newton; nudge inward.
    if t == d.t_max && matches!(arc.kind, CaseKind::D | CaseKind::E) {
        t = if d.t_min.is_finite() {
            0.5 * (d.t_min + d.t_max)
        } else {
            d.t_max - math::max(1.0, math::abs(d.t_max))
        };
    }

    let mut neg = f64::NAN; // largest t with f < 0 seen so far
    let mut pos = if d.t_max.is_finite() { d.t_max } else { f64::NAN }; // smallest with f >= 0
    let mut probe = math::max(1.0, math::abs(t));
    let mut last_step = f64::INFINITY;
    let mut f = 0.0;

    for it in 1..=settings.max_iter {
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(t);
        }
        f = arc::space(arc, t)? - zeta;
        let v = arc::velocity(arc, t)?;
        if f < 0.0 {
            neg = if neg.is_nan() { t } else { math::max(neg, t) };
        } else {
            pos = if pos.is_nan() { t } else { math::min(pos, t) };
        }

        let f_ok = math::abs(f) <= settings.abs_tol * (1.0 + math::abs(zeta)) * math::max(1.0, math::abs(v));
        if f_ok && last_step <= settings.abs_tol * (1.0 + math::abs(t)) {
            return Ok(InversionResult { t, iterations: it, converged: true, f_residual: f });
        }

        // Barrier step when above the root with a finite blow-up boundary;
        // with t_min = -inf the barrier term is exactly zero.
        let dt = if f > 0.0 && v > 0.0 {
            f / (v + f / (t - d.t_min))
        } else if v > 0.0 {
            f / v
        } else {
            f64::NAN
        };

        let mut t_new = t - dt;
        // Without a finite barrier the space map still dives super-linearly
        // to the left, so an unbracketed leftward Newton step can overshoot
        // by many orders; probe geometrically until a bracket exists.
        if f > 0.0 && neg.is_nan() && !d.t_min.is_finite() && t_new < t - probe {
            t_new = t - probe;
            probe *= settings.bracket_expansion;
        }
        // On exponential space tails Newton advances by a near-constant
        // increment per iteration; once bracketed, any step that fails to
        // halve the previous one is replaced by the bracket midpoint.
        if neg.is_finite() && pos.is_finite() && math::abs(t_new - t) > 0.5 * last_step {
            t_new = 0.5 * (neg + pos);
        }
        let ok = t_new.is_finite()
            && t_new > d.t_min
            && t_new <= d.t_max
            && (neg.is_nan() || t_new >= neg)
            && (pos.is_nan() || t_new <= pos);
        if !ok {
            t_new = if neg.is_finite() && pos.is_finite() {
                0.5 * (neg + pos)
            } else if pos.is_finite() {
                // Root lies left of every known point; approach the barrier
                // geometrically (or walk left unboundedly).
                if d.t_min.is_finite() {
                    d.t_min + (pos - d.t_min) / settings.bracket_expansion
                } else {
                    probe *= settings.bracket_expansion;
                    pos - probe
                }
            } else {
                // Root lies right of every known point.
                probe *= settings.bracket_expansion;
                math::min(neg + probe, d.t_max)
            };
        }
        last_step = math::abs(t_new - t);
        t = t_new;
    }

    Err(InverseError::NoConvergence { iterations: settings.max_iter, t, residual: f })
}
