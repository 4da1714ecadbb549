//! The two-arc minimum-time problem over a fixed length.
//!
//! The optimal control is bang-bang with a single switch: full acceleration
//! from `(0, v_i)`, full braking into `(L, v_f)`. In the space domain the
//! switching abscissa solves the single scalar equation
//!
//! ```text
//! g(s) = vL(s) - vR(s) = 0,
//! g'(s) = a_plus / vL + a_minus / vR + c1 (vR - vL),
//! ```
//!
//! where `vL` follows the accelerating arc from the start and `vR` the
//! braking arc anchored at the terminal point (evaluated at nonpositive
//! local times, abscissa shifted by `-L`). Feasibility is decided first from
//! the pure-acceleration and pure-braking reference speeds at `s = L`.

use crate::arc::{self, build_arc, Arc, ArcError, ArcInput, DragParams};
use crate::inverse::{self, InversionSettings, InverseError};
use crate::math;
use alloc::vec::Vec;

/// Boundary data and bounds of one minimum-time instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BangBangProblem {
    /// Initial speed (m/s), nonnegative.
    pub v_i: f64,
    /// Final speed (m/s), nonnegative.
    pub v_f: f64,
    /// Path length L (m), positive.
    pub length: f64,
    /// Maximum drive acceleration (m/s^2), positive.
    pub a_plus: f64,
    /// Maximum braking magnitude (m/s^2), positive.
    pub a_minus: f64,
    pub drag: DragParams,
}

impl BangBangProblem {
    pub fn new(
        v_i: f64,
        v_f: f64,
        length: f64,
        a_plus: f64,
        a_minus: f64,
        drag: DragParams,
    ) -> Result<Self, OcpError> {
        if !(v_i.is_finite() && v_i >= 0.0) {
            return Err(OcpError::InvalidInput("v_i must be finite and >= 0"));
        }
        if !(v_f.is_finite() && v_f >= 0.0) {
            return Err(OcpError::InvalidInput("v_f must be finite and >= 0"));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(OcpError::InvalidInput("length must be finite and > 0"));
        }
        if !(a_plus.is_finite() && a_plus > 0.0) {
            return Err(OcpError::InvalidInput("a_plus must be finite and > 0"));
        }
        if !(a_minus.is_finite() && a_minus > 0.0) {
            return Err(OcpError::InvalidInput("a_minus must be finite and > 0"));
        }
        Ok(Self { v_i, v_f, length, a_plus, a_minus, drag })
    }
}

/// Reachable final-speed envelope and the resulting classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    /// Final speed of the pure-acceleration manoeuvre.
    pub vf_max: f64,
    /// Final speed of the pure-braking manoeuvre (0 when the vehicle stops
    /// before reaching the end).
    pub vf_min: f64,
    pub verdict: FeasibilityVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityVerdict {
    Feasible,
    /// `v_f` exceeds what full acceleration can reach over L.
    InfeasibleTooFast,
    /// `v_f` is below what full braking leaves at L.
    InfeasibleTooSlow,
}

impl core::fmt::Display for FeasibilityVerdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            FeasibilityVerdict::Feasible => "Feasible",
            FeasibilityVerdict::InfeasibleTooFast => "InfeasibleTooFast",
            FeasibilityVerdict::InfeasibleTooSlow => "InfeasibleTooSlow",
        };
        f.write_str(s)
    }
}

/// A solved instance.
#[derive(Debug, Clone, Copy)]
pub struct BangBangSolution {
    /// Switching abscissa in [0, L].
    pub s_sigma: f64,
    /// Switching instant.
    pub t_sigma: f64,
    /// Total manoeuvre time T.
    pub total_time: f64,
    /// Path length L of the solved problem.
    pub length: f64,
    /// Accelerating arc, anchored at `(s, t, v) = (0, 0, v_i)`.
    pub left: Arc,
    /// Braking arc, anchored at the terminal point: local time 0 maps to
    /// `(L, T, v_f)`; the physical segment occupies nonpositive local times.
    pub right: Arc,
    /// Switch clamped to an endpoint (pure braking / pure acceleration).
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OcpError {
    InvalidInput(&'static str),
    /// `solve` called on a problem whose verdict is not `Feasible`.
    Infeasible(FeasibilityVerdict),
    /// No sign change of g on the admissible interval; indicates a defect.
    NoCrossing { g0: f64, g1: f64 },
    Arc(ArcError),
    Inverse(InverseError),
}

impl From<ArcError> for OcpError {
    fn from(e: ArcError) -> Self {
        OcpError::Arc(e)
    }
}

impl From<InverseError> for OcpError {
    fn from(e: InverseError) -> Self {
        OcpError::Inverse(e)
    }
}

impl core::fmt::Display for OcpError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OcpError::InvalidInput(msg) => write!(f, "invalid problem: {msg}"),
            OcpError::Infeasible(v) => write!(f, "problem is not feasible: {v}"),
            OcpError::NoCrossing { g0, g1 } => {
                write!(f, "no switching point: g(0) = {g0}, g(L) = {g1}")
            }
            OcpError::Arc(e) => write!(f, "{e}"),
            OcpError::Inverse(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OcpError {}

/// Switch abscissae within this relative distance of 0 or L are degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

fn inv_settings() -> InversionSettings {
    InversionSettings::DEFAULT
}

/// Final-speed envelope of the pure manoeuvres and the feasibility verdict.
pub fn feasibility(problem: &BangBangProblem) -> Result<Feasibility, OcpError> {
    let p = BangBangProblem::new(
        problem.v_i,
        problem.v_f,
        problem.length,
        problem.a_plus,
        problem.a_minus,
        problem.drag,
    )?;
    let accel = build_arc(ArcInput::new(p.a_plus, p.v_i, p.drag)?)?;
    let vf_max = inverse::velocity_at_space(&accel, p.length, &inv_settings())?;

    let brake = build_arc(ArcInput::new(-p.a_minus, p.v_i, p.drag)?)?;
    let vf_min = if brake.domain.s_max < p.length {
        0.0 // stopped before reaching the end
    } else {
        inverse::velocity_at_space(&brake, p.length, &inv_settings())?
    };

    let verdict = if p.v_f > vf_max {
        FeasibilityVerdict::InfeasibleTooFast
    } else if p.v_f < vf_min {
        FeasibilityVerdict::InfeasibleTooSlow
    } else {
        FeasibilityVerdict::Feasible
    };
    Ok(Feasibility { vf_max, vf_min, verdict })
}

/// Speed of the accelerating arc as a function of the global abscissa.
fn v_left(left: &Arc, s: f64) -> Result<f64, OcpError> {
    Ok(inverse::velocity_at_space(left, s, &inv_settings())?)
}

/// Speed of the braking arc as a function of the global abscissa.
fn v_right(right: &Arc, s: f64, length: f64) -> Result<f64, OcpError> {
    Ok(inverse::velocity_at_space(right, s - length, &inv_settings())?)
}

/// Solves the instance: switching abscissa, switching time, total time.
pub fn solve(problem: &BangBangProblem) -> Result<BangBangSolution, OcpError> {
    let feas = feasibility(problem)?;
    if feas.verdict != FeasibilityVerdict::Feasible {
        return Err(OcpError::Infeasible(feas.verdict));
    }
    let p = problem;
    let left = build_arc(ArcInput::new(p.a_plus, p.v_i, p.drag)?)?;
    let right = build_arc(ArcInput::new(-p.a_minus, p.v_f, p.drag)?)?;

    let g = |s: f64| -> Result<f64, OcpError> {
        Ok(v_left(&left, s)? - v_right(&right, s, p.length)?)
    };

    let g0 = g(0.0)?;
    let g1 = feas.vf_max - p.v_f;
    let v_scale = 1.0 + math::max(p.v_i, math::max(p.v_f, feas.vf_max));
    let g_tol = 1e-11 * v_scale;
    if g0 > g_tol || g1 < -g_tol {
        return Err(OcpError::NoCrossing { g0, g1 });
    }

    let s_sigma = if g1 <= g_tol {
        p.length // pure acceleration
    } else if g0 >= -g_tol {
        0.0 // pure braking
    } else {
        solve_switch(&left, &right, p, g0, g1, g_tol)?
    };

    let t_sigma = inverse::time_at_space(&left, s_sigma, &inv_settings())?.t;
    let tau_sigma = inverse::time_at_space(&right, s_sigma - p.length, &inv_settings())?.t;
    let total_time = t_sigma - tau_sigma;
    let degenerate =
        s_sigma <= DEGENERACY_TOL * p.length || s_sigma >= (1.0 - DEGENERACY_TOL) * p.length;

    Ok(BangBangSolution {
        s_sigma,
        t_sigma,
        total_time,
        length: p.length,
        left,
        right,
        degenerate,
    })
}

/// Safeguarded Newton on `g(s) = 0` over the bracket `[0, L]`.
fn solve_switch(
    left: &Arc,
    right: &Arc,
    p: &BangBangProblem,
    g0: f64,
    g1: f64,
    g_tol: f64,
) -> Result<f64, OcpError> {
    debug_assert!(g0 < 0.0 && g1 > 0.0);
    let length = p.length;
    let c1 = p.drag.c1;
    let mut neg = 0.0; // g < 0 side
    let mut pos = length; // g > 0 side
    let mut s = 0.5 * length;
    let mut last_step = f64::INFINITY;

    for _ in 0..80 {
        let vl = v_left(left, s)?;
        let vr = v_right(right, s, length)?;
        let gs = vl - vr;
        if gs < 0.0 {
            neg = math::max(neg, s);
        } else {
            pos = math::min(pos, s);
        }
        if math::abs(gs) <= g_tol && last_step <= 1e-12 * (1.0 + length) {
            return Ok(s);
        }
        let slope = p.a_plus / vl + p.a_minus / vr + c1 * (vr - vl);
        let mut s_new = s - gs / slope;
        if !(s_new.is_finite() && s_new > neg && s_new < pos) {
            s_new = 0.5 * (neg + pos);
        }
        last_step = math::abs(s_new - s);
        s = s_new;
        if pos - neg <= f64::EPSILON * length {
            return Ok(s);
        }
    }
    // The bracket is guaranteed; running out of iterations means the
    // tolerance chain is inconsistent.
    Err(OcpError::NoCrossing { g0, g1 })
}

/// Profile phase of one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Accel,
    Brake,
}

/// One row of a sampled trajectory. `a` carries the control acceleration of
/// the owning phase (`+a_plus` / `-a_minus`).
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub s: f64,
    pub t: f64,
    pub v: f64,
    pub a: f64,
    pub phase: Phase,
}

/// Samples the solved profile uniformly in s over `[0, L]`; `n >= 2`.
/// The first and last rows carry the exact boundary data.
pub fn sample_trajectory(
    solution: &BangBangSolution,
    n: usize,
) -> Result<Vec<TrajectorySample>, OcpError> {
    if n < 2 {
        return Err(OcpError::InvalidInput("sample count must be at least 2"));
    }
    let p_v_i = solution.left.input.v0;
    let p_v_f = solution.right.input.v0;
    let a_plus = solution.left.input.accel;
    let a_minus = -solution.right.input.accel;
    let length = solution.length;
    let total = solution.total_time;
    let inv = inv_settings();

    let mut out = Vec::with_capacity(n);
    out.push(TrajectorySample {
        s: 0.0,
        t: 0.0,
        v: p_v_i,
        a: if solution.s_sigma > 0.0 { a_plus } else { -a_minus },
        phase: if solution.s_sigma > 0.0 { Phase::Accel } else { Phase::Brake },
    });
    for i in 1..n - 1 {
        let s = length * i as f64 / (n - 1) as f64;
        let sample = if s < solution.s_sigma {
            let t = inverse::time_at_space(&solution.left, s, &inv)?.t;
            let v = arc::velocity(&solution.left, t)?;
            TrajectorySample { s, t, v, a: a_plus, phase: Phase::Accel }
        } else {
            let tau = inverse::time_at_space(&solution.right, s - length, &inv)?.t;
            let v = arc::velocity(&solution.right, tau)?;
            TrajectorySample { s, t: tau + total, v, a: -a_minus, phase: Phase::Brake }
        };
        out.push(sample);
    }
    out.push(TrajectorySample { s: length, t: total, v: p_v_f, a: -a_minus, phase: Phase::Brake });
    Ok(out)
}

/// `T` recomputed as the space-domain objective integral `int_0^L ds / v(s)`,
/// as a verification aid. `n` is the total panel budget of the composite
/// 5-point Gauss-Legendre rule; zero-speed endpoints are handled by the
/// square-root substitution that removes the integrable singularity.
pub fn total_time_quadrature(solution: &BangBangSolution, n: usize) -> Result<f64, OcpError> {
    let length = solution.length;
    let s_sigma = solution.s_sigma;
    let inv = inv_settings();

    let half = (n / 2).max(8) as f64;
    let left_panels = math::max(4.0, half * s_sigma / length) as usize;
    let right_panels = math::max(4.0, half * (length - s_sigma) / length) as usize;

    let vl = |s: f64| inverse::velocity_at_space(&solution.left, s, &inv);
    let vr = |s: f64| inverse::velocity_at_space(&solution.right, s - length, &inv);

    // An endpoint speed small against the segment's acceleration ramp makes
    // 1/v near-singular there; the sqrt substitution then takes over.
    let ramp = |a: f64, seg: f64| 0.05 * math::sqrt(2.0 * math::abs(a) * seg);
    let mut total = 0.0;
    if s_sigma > 0.0 {
        let singular_lo = solution.left.input.v0 < ramp(solution.left.input.accel, s_sigma);
        total += segment_time(&vl, 0.0, s_sigma, left_panels, singular_lo, false)?;
    }
    if s_sigma < length {
        let seg = length - s_sigma;
        let singular_hi = solution.right.input.v0 < ramp(solution.right.input.accel, seg);
        total += segment_time(&vr, s_sigma, length, right_panels, false, singular_hi)?;
    }
    Ok(total)
}

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

fn segment_time<F>(
    v: &F,
    lo: f64,
    hi: f64,
    panels: usize,
    sqrt_at_lo: bool,
    sqrt_at_hi: bool,
) -> Result<f64, OcpError>
where
    F: Fn(f64) -> Result<f64, InverseError>,
{
    // With a zero-speed endpoint, substitute s = end -+ u^2 so the 1/sqrt
    // singularity integrates exactly into a smooth 2u/v integrand.
    let (a, b): (f64, f64);
    enum Map {
        Identity,
        SqrtLo(f64),
        SqrtHi(f64),
    }
    let map = if sqrt_at_lo {
        a = 0.0;
        b = math::sqrt(hi - lo);
        Map::SqrtLo(lo)
    } else if sqrt_at_hi {
        a = 0.0;
        b = math::sqrt(hi - lo);
        Map::SqrtHi(hi)
    } else {
        a = lo;
        b = hi;
        Map::Identity
    };

    let mut sum = 0.0;
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let mid = a + width * (p as f64 + 0.5);
        let hw = 0.5 * width;
        for (x, wgt) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            let u = mid + hw * x;
            let (s, jac) = match map {
                Map::Identity => (u, 1.0),
                Map::SqrtLo(lo) => (lo + u * u, 2.0 * u),
                Map::SqrtHi(hi) => (hi - u * u, 2.0 * u),
            };
            let speed = v(s)?;
            sum += wgt * hw * jac / speed;
        }
    }
    Ok(sum)
}
