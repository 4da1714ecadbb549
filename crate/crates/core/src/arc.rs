//! A single constant-control arc of the Riccati ODE
//! `v'(t) = a - c0 v - c1 v^2`, `v(0) = v0 >= 0`.
//!
//! [`build_arc`] derives the auxiliary constants, classifies the arc into one
//! of five qualitative regimes, and computes the time and space window on
//! which the solution is finite and nonnegative:
//!
//! | case | condition                       | t-interval            | v'(t) |
//! |------|---------------------------------|-----------------------|-------|
//! | A    | discriminant >= 0, v0 = v_inf   | (-inf, inf)           | = 0   |
//! | B    | discriminant >= 0, v0 < v_inf   | [t_zero, inf)         | > 0   |
//! | C    | discriminant >= 0, a >= 0, v0 > v_inf | (t_blowup, inf) | < 0   |
//! | D    | discriminant >= 0, a < 0        | (t_blowup, t_zero]    | < 0   |
//! | E    | discriminant < 0                | (t_blowup, t_zero]    | < 0   |
//!
//! where `t_zero` is the root of the numerator of `v(t)` (the instant the
//! speed reaches zero) and `t_blowup` the root of its denominator. All
//! evaluation goes through the series-stabilised [`crate::kernels`], so the
//! drag-free, near-critical-discriminant and near-boundary limits stay
//! accurate.

use crate::kernels;
use crate::math;

/// Drag model coefficients: `c0` (linear, 1/s) and `c1` (quadratic, 1/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragParams {
    pub c0: f64,
    pub c1: f64,
}

impl DragParams {
    /// Both coefficients must be finite and nonnegative.
    pub fn new(c0: f64, c1: f64) -> Result<Self, ArcError> {
        if !(c0.is_finite() && c0 >= 0.0) {
            return Err(ArcError::InvalidInput("c0 must be finite and >= 0"));
        }
        if !(c1.is_finite() && c1 >= 0.0) {
            return Err(ArcError::InvalidInput("c1 must be finite and >= 0"));
        }
        Ok(Self { c0, c1 })
    }
}

/// Input data of one arc: constant control acceleration, initial speed, drag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcInput {
    /// Control acceleration `a` (m/s^2); sign selects drive or brake.
    pub accel: f64,
    /// Initial speed `v(0)` (m/s), nonnegative.
    pub v0: f64,
    pub drag: DragParams,
}

impl ArcInput {
    pub fn new(accel: f64, v0: f64, drag: DragParams) -> Result<Self, ArcError> {
        if !accel.is_finite() {
            return Err(ArcError::InvalidInput("acceleration must be finite"));
        }
        if !(v0.is_finite() && v0 >= 0.0) {
            return Err(ArcError::InvalidInput("v0 must be finite and >= 0"));
        }
        Ok(Self { accel, v0, drag })
    }
}

/// The five qualitative solution regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseKind {
    /// Constant solution, `v(t) = v0`.
    A,
    /// Monotone rise towards the asymptotic speed.
    B,
    /// Monotone decay towards the asymptotic speed.
    C,
    /// Braking, real discriminant.
    D,
    /// Braking, complex discriminant.
    E,
}

impl core::fmt::Display for CaseKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            CaseKind::A => "A",
            CaseKind::B => "B",
            CaseKind::C => "C",
            CaseKind::D => "D",
            CaseKind::E => "E",
        };
        f.write_str(s)
    }
}

/// Derived constants of the arc.
///
/// `w` always stores a nonnegative magnitude: the real square root of the
/// discriminant `c0^2 + 4 a c1` when it is nonnegative, its absolute-value
/// square root otherwise (flagged by `complex_discriminant`). The angle
/// fields and `ell1` are populated only in the complex case; `v_inf` is
/// meaningful only for `a > 0`.
#[derive(Debug, Clone, Copy)]
pub struct ArcConstants {
    pub w: f64,
    pub complex_discriminant: bool,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Asymptotic speed `a / alpha` (equals `beta / c1` when `c1 > 0`).
    pub v_inf: f64,
    /// `delta = (c1 v0 + c0) v0`, the drag deceleration at the initial speed.
    pub delta_acc: f64,
    pub theta: f64,
    pub theta0: f64,
    pub theta1: f64,
    /// `ell1 = sqrt(c1 (delta + |a|))` (complex case).
    pub ell1: f64,
}

/// Validity window of the arc in time and space, anchored at `t = 0`,
/// `s(0) = 0`. Unbounded ends use the IEEE infinities.
#[derive(Debug, Clone, Copy)]
pub struct ArcDomain {
    pub t_min: f64,
    pub t_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    /// Sign of `v'(t)` throughout the window: -1, 0 or +1.
    pub speed_slope: i8,
}

/// A fully classified arc; immutable after construction.
#[derive(Debug, Clone, Copy)]
pub struct Arc {
    pub input: ArcInput,
    pub constants: ArcConstants,
    pub kind: CaseKind,
    pub domain: ArcDomain,
}

/// Arc construction or evaluation failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcError {
    InvalidInput(&'static str),
    /// Query time outside the validity window beyond tolerance.
    OutOfDomain { t: f64, t_min: f64, t_max: f64 },
    /// A kernel failed where the case analysis says it cannot; indicates a bug.
    Numerical(&'static str),
}

impl core::fmt::Display for ArcError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ArcError::InvalidInput(msg) => write!(f, "invalid arc input: {msg}"),
            ArcError::OutOfDomain { t, t_min, t_max } => {
                write!(f, "t = {t} outside the arc domain ({t_min}, {t_max}]")
            }
            ArcError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ArcError {}

/// Relative tolerance of the constant-solution test.
const CASE_A_TOL: f64 = 1e-12;

/// Half-width factor of the near-root evaluation windows, relative.
const ROOT_WINDOW: f64 = 100.0 * f64::EPSILON;

/// Domain-boundary slack accepted by [`velocity`] and [`space`], relative.
const DOMAIN_TOL: f64 = 1e-9;

/// Builds the arc: constants, case classification and validity window.
///
/// The boundary instants and abscissae are computed through the stable
/// range formulas
///
/// ```text
/// t_zero   = L(v0 / (a + v0 beta), w)          t_blowup = L(1/gamma, w)   (real)
/// t_zero   = 2 A(v0 / (v0 c0 + 2|a|), |w|)     t_blowup = t_zero - 2 A(1/c0, |w|) (complex)
/// ```
///
/// and the corresponding boundary abscissae from the closed forms of the
/// space solution.
pub fn build_arc(input: ArcInput) -> Result<Arc, ArcError> {
    // Re-validate: the struct fields are public.
    let input = ArcInput::new(input.accel, input.v0, DragParams::new(input.drag.c0, input.drag.c1)?)?;
    let a = input.accel;
    let v0 = input.v0;
    let c0 = input.drag.c0;
    let c1 = input.drag.c1;

    let radicand = c0 * c0 + 4.0 * a * c1;
    if radicand >= 0.0 {
        build_real(input, a, v0, c0, c1, radicand)
    } else {
        build_complex(input, a, v0, c0, c1, radicand)
    }
}

fn build_real(
    input: ArcInput,
    a: f64,
    v0: f64,
    c0: f64,
    c1: f64,
    radicand: f64,
) -> Result<Arc, ArcError> {
    let w = math::sqrt(radicand);
    let alpha = 0.5 * (w + c0);
    let beta = 0.5 * (w - c0);
    let gamma = c1 * v0 + alpha;
    let delta_acc = (c1 * v0 + c0) * v0;

    // Constant solution iff the ODE right-hand side vanishes at v0. (Testing
    // a - delta rather than alpha v0 - a keeps a = 0 with pure quadratic
    // drag out of the constant case.)
    let constant = math::abs(a - delta_acc) <= CASE_A_TOL * (1.0 + math::abs(a));

    let kind = if constant {
        CaseKind::A
    } else if a < 0.0 {
        CaseKind::D
    } else if alpha * v0 < a {
        CaseKind::B
    } else {
        CaseKind::C
    };

    let v_inf = match kind {
        CaseKind::A => v0,
        _ if a > 0.0 => a / alpha,
        _ => f64::NAN,
    };

    let constants = ArcConstants {
        w,
        complex_discriminant: false,
        alpha,
        beta,
        gamma,
        v_inf,
        delta_acc,
        theta: f64::NAN,
        theta0: f64::NAN,
        theta1: f64::NAN,
        ell1: f64::NAN,
    };

    let t_zero = || -> Result<f64, ArcError> {
        kernels::kernel_l(v0 / (a + v0 * beta), w).map_err(|_| ArcError::Numerical("t_zero range"))
    };
    let t_blowup = || -> Result<f64, ArcError> {
        if gamma > w {
            kernels::kernel_l(1.0 / gamma, w).map_err(|_| ArcError::Numerical("t_blowup range"))
        } else {
            Ok(f64::NEG_INFINITY)
        }
    };

    let domain = match kind {
        CaseKind::A => ArcDomain {
            t_min: f64::NEG_INFINITY,
            t_max: f64::INFINITY,
            s_min: f64::NEG_INFINITY,
            s_max: f64::INFINITY,
            speed_slope: 0,
        },
        CaseKind::B => {
            let t0 = t_zero()?;
            // Algorithm branch: the two-logarithm closed form is the better
            // conditioned one once w is clearly nonzero.
            let s0 = if w > 0.1 {
                let l1 = kernels::kernel_l(v0, alpha / a)
                    .map_err(|_| ArcError::Numerical("s_zero log"))?;
                let l2 = kernels::kernel_l(-v0, c1 / alpha)
                    .map_err(|_| ArcError::Numerical("s_zero log"))?;
                (l1 + l2) / w
            } else {
                space_real_raw(&constants, a, v0, c1, t0)
            };
            ArcDomain {
                t_min: t0,
                t_max: f64::INFINITY,
                s_min: s0,
                s_max: f64::INFINITY,
                speed_slope: 1,
            }
        }
        CaseKind::C => {
            // With a = 0 and linear drag present the decaying arc covers only
            // a finite distance; the space supremum is the integral of the
            // exponential tail.
            let s_sup = if a == 0.0 && c0 > 0.0 {
                if c1 > 0.0 {
                    math::ln_1p(c1 * v0 / c0) / c1
                } else {
                    v0 / c0
                }
            } else {
                f64::INFINITY
            };
            ArcDomain {
                t_min: t_blowup()?,
                t_max: f64::INFINITY,
                s_min: f64::NEG_INFINITY,
                s_max: s_sup,
                speed_slope: -1,
            }
        }
        CaseKind::D => {
            let t0 = t_zero()?;
            let s0 = space_real_raw(&constants, a, v0, c1, t0);
            ArcDomain {
                t_min: t_blowup()?,
                t_max: t0,
                s_min: f64::NEG_INFINITY,
                s_max: s0,
                speed_slope: -1,
            }
        }
        CaseKind::E => unreachable!(),
    };

    Ok(Arc { input, constants, kind, domain })
}

fn build_complex(
    input: ArcInput,
    a: f64,
    v0: f64,
    c0: f64,
    c1: f64,
    radicand: f64,
) -> Result<Arc, ArcError> {
    // radicand < 0 forces a < 0 and c1 > 0.
    let w = math::sqrt(-radicand);
    let aa = math::abs(a);
    let delta_acc = (c1 * v0 + c0) * v0;
    let theta = math::atan2(w, c0);
    let theta0 = math::atan2(v0 * w, v0 * c0 + 2.0 * aa);
    let theta1 = math::atan2(w, 2.0 * c1 * v0 + c0);
    let ell1 = math::sqrt(c1 * (delta_acc + aa));

    let t_zero = 2.0 * kernels::kernel_a(v0 / (v0 * c0 + 2.0 * aa), w);
    // 1/c0 saturates to +inf at c0 = 0; arctan then contributes pi/2 / |w|.
    let t_blowup = t_zero - 2.0 * kernels::kernel_a(1.0 / c0, w);
    let s_zero = (math::ln_1p(delta_acc / aa) - c0 * t_zero) / (2.0 * c1);

    let constants = ArcConstants {
        w,
        complex_discriminant: true,
        alpha: 0.5 * (w + c0),
        beta: 0.5 * (w - c0),
        gamma: c1 * v0 + 0.5 * (w + c0),
        v_inf: f64::NAN,
        delta_acc,
        theta,
        theta0,
        theta1,
        ell1,
    };
    let domain = ArcDomain {
        t_min: t_blowup,
        t_max: t_zero,
        s_min: f64::NEG_INFINITY,
        s_max: s_zero,
        speed_slope: -1,
    };
    Ok(Arc { input, constants, kind: CaseKind::E, domain })
}

impl Arc {
    /// Root of the numerator of `v(t)` (instant of zero speed), when one
    /// exists in this case; NaN otherwise.
    pub fn t_speed_zero(&self) -> f64 {
        match self.kind {
            CaseKind::B => self.domain.t_min,
            CaseKind::D | CaseKind::E => self.domain.t_max,
            _ => f64::NAN,
        }
    }

    /// Root of the denominator of `v(t)` (blow-up instant), when one exists;
    /// NaN otherwise (`-inf` for a real braking arc without quadratic drag).
    pub fn t_blowup(&self) -> f64 {
        match self.kind {
            CaseKind::C | CaseKind::D | CaseKind::E => self.domain.t_min,
            _ => f64::NAN,
        }
    }

    /// A finite window of representative in-domain times, padded away from
    /// blow-up boundaries. Intended for sampling and verification sweeps.
    ///
    /// For the asymptotic cases the backward extent is clamped to a few
    /// e-folding times of the equilibrium (whose linearisation rate is
    /// exactly `w`): past that horizon the arc is exponentially sensitive to
    /// its initial speed and no finite-precision cross-check is meaningful.
    pub fn evaluation_window(&self) -> (f64, f64) {
        let d = &self.domain;
        let k = &self.constants;
        let rate = math::max(
            math::max(k.w, self.input.drag.c0),
            math::max(self.input.drag.c1 * self.input.v0, 0.2),
        );
        let hi = if d.t_max.is_finite() { d.t_max } else { 5.0 / rate };
        let mut lo = if d.t_min.is_finite() {
            // Back off the blow-up boundary until the speed has a physical
            // scale (the closed case-B end is evaluable as is).
            if self.kind == CaseKind::B {
                d.t_min
            } else {
                let cap = 1e4 * (1.0 + self.input.v0);
                let mut frac = 0.02;
                let mut cand = d.t_min + frac * (hi - d.t_min);
                while frac < 0.4 {
                    match velocity(self, cand) {
                        Ok(v) if v <= cap => break,
                        _ => {
                            frac *= 2.0;
                            cand = d.t_min + frac * (hi - d.t_min);
                        }
                    }
                }
                cand
            }
        } else {
            -5.0 / rate
        };
        if matches!(self.kind, CaseKind::B | CaseKind::C) {
            lo = math::max(lo, -5.0 / k.w); // -inf at w = 0, no clamp
        }
        (lo, hi)
    }

    fn check_domain(&self, t: f64) -> Result<(), ArcError> {
        let d = &self.domain;
        let hi_tol = DOMAIN_TOL * (1.0 + math::abs(d.t_max));
        let lo_tol = DOMAIN_TOL * (1.0 + math::abs(d.t_min));
        let below = if self.kind == CaseKind::B {
            t < d.t_min - lo_tol // closed lower end
        } else if d.t_min.is_finite() {
            t <= d.t_min - lo_tol // open lower end, small slack
        } else {
            false
        };
        if below || t > d.t_max + hi_tol || t.is_nan() {
            return Err(ArcError::OutOfDomain { t, t_min: d.t_min, t_max: d.t_max });
        }
        Ok(())
    }
}

/// The speed `v(t)`.
///
/// Real case: the p/q form with `E`-kernel numerator and denominator; the
/// representation switches to the `E(-t, w)` scale for `t <= 0` or `t > 1`
/// (where `e^{w t}` would lose precision or overflow), and to exact
/// root-shifted forms inside a `100 eps` window around `t_zero` / `t_blowup`
/// (the `v0` offset is dropped exactly in the `t_zero` window). Complex case:
/// the rational sine/cosine form. Errors outside `(t_min, t_max]`.
pub fn velocity(arc: &Arc, t: f64) -> Result<f64, ArcError> {
    arc.check_domain(t)?;
    match arc.kind {
        CaseKind::A => Ok(arc.input.v0),
        CaseKind::E => Ok(velocity_complex(arc, t)),
        _ => Ok(velocity_real(arc, t)),
    }
}

fn near_root(t: f64, root: f64) -> bool {
    root.is_finite() && math::abs(t - root) < ROOT_WINDOW * (1.0 + math::abs(root))
}

/// `E(t - root, w) e^{-w t}`, the root-shifted kernel in the `e^{-w t}` scale.
fn scaled_root_e(t: f64, root: f64, w: f64) -> f64 {
    -math::exp(-w * root) * kernels::kernel_e(root - t, w)
}

fn velocity_real(arc: &Arc, t: f64) -> f64 {
    let a = arc.input.accel;
    let v0 = arc.input.v0;
    let k = &arc.constants;
    let (w, alpha, gamma, delta) = (k.w, k.alpha, k.gamma, k.delta_acc);
    let t0 = arc.t_speed_zero();
    let tb = arc.t_blowup();
    let near0 = near_root(t, t0);
    let nearb = near_root(t, tb);

    if t > 0.0 && t <= 1.0 {
        let q = if nearb {
            (w - gamma) * kernels::kernel_e(t - tb, w)
        } else {
            1.0 - gamma * kernels::kernel_e(t, w)
        };
        if near0 {
            (alpha * v0 - a) * kernels::kernel_e(t - t0, w) / q
        } else {
            v0 + (delta - a) * kernels::kernel_e(t, w) / q
        }
    } else {
        let em = kernels::kernel_e(-t, w);
        if !em.is_finite() {
            // |w t| beyond the exponent range: the ratio has reached its limit.
            return if gamma == w { v0 + (a - delta) * em } else { v0 + (a - delta) / (gamma - w) };
        }
        let q = if nearb {
            (w - gamma) * scaled_root_e(t, tb, w)
        } else {
            1.0 + (gamma - w) * em
        };
        if near0 {
            (alpha * v0 - a) * scaled_root_e(t, t0, w) / q
        } else {
            v0 + (a - delta) * em / q
        }
    }
}

fn velocity_complex(arc: &Arc, t: f64) -> f64 {
    let v0 = arc.input.v0;
    let c0 = arc.input.drag.c0;
    let c1 = arc.input.drag.c1;
    let aa = math::abs(arc.input.accel);
    let w = arc.constants.w;
    let cos_half = math::cos(0.5 * t * w);
    let s_half = kernels::kernel_s(0.5 * t, w);
    let p = v0 * cos_half - (c0 * v0 + 2.0 * aa) * s_half;
    let q = cos_half + (2.0 * c1 * v0 + c0) * s_half;
    p / q
}

/// The travelled space `s(t)`, with `s(0) = 0`.
///
/// Real case: `L(a G(t, w, c0) - v0 E(-t, w) e^{beta t}, c1)`; the outer `L`
/// degenerates to its `c -> 0` limit automatically when `c1 = 0`. Complex
/// case: the `Q`-kernel quadratic for `|t ell1| <= 1e-3` and the logarithmic
/// form otherwise (`-inf` when its argument is nonpositive). Queries at the
/// domain ends return the boundary abscissae; beyond-tolerance queries error
/// as in [`velocity`].
pub fn space(arc: &Arc, t: f64) -> Result<f64, ArcError> {
    arc.check_domain(t)?;
    let d = &arc.domain;
    if t >= d.t_max {
        return Ok(d.s_max);
    }
    if t <= d.t_min {
        return Ok(d.s_min);
    }
    let v0 = arc.input.v0;
    let s = match arc.kind {
        CaseKind::A => v0 * t,
        CaseKind::E => space_complex(arc, t),
        _ => space_real_raw(&arc.constants, arc.input.accel, v0, arc.input.drag.c1, t),
    };
    // Rounding near the zero-speed end must not push past the boundary value.
    Ok(math::min(s, d.s_max))
}

fn space_real_raw(k: &ArcConstants, a: f64, v0: f64, c1: f64, t: f64) -> f64 {
    let c0 = k.alpha - k.beta;
    let g = kernels::kernel_g(t, k.w, c0);
    let em = kernels::kernel_e(-t, k.w);
    let x = a * g - v0 * em * math::exp(k.beta * t);
    // A log argument rounded to <= 0 marks the blow-up end.
    kernels::kernel_l(x, c1).unwrap_or(f64::NEG_INFINITY)
}

fn space_complex(arc: &Arc, t: f64) -> f64 {
    let v0 = arc.input.v0;
    let c0 = arc.input.drag.c0;
    let c1 = arc.input.drag.c1;
    let aa = math::abs(arc.input.accel);
    let k = &arc.constants;
    let tau = t * k.ell1;
    if math::abs(tau) <= kernels::Q_POLY_THRESHOLD {
        let cos_theta1 = math::min(1.0, (2.0 * c1 * v0 + c0) / (2.0 * k.ell1));
        // |c| <= 1 holds by construction, so this cannot fail.
        let q = kernels::kernel_q(tau, cos_theta1).unwrap_or(f64::NEG_INFINITY);
        ((aa + k.delta_acc) * q * t + v0) * t
    } else {
        let arg = (2.0 * c1 * v0 + c0) * kernels::kernel_s(0.5 * t, k.w) + math::cos(0.5 * t * k.w);
        if arg <= 0.0 {
            f64::NEG_INFINITY
        } else {
            (math::ln(arg) - 0.5 * c0 * t) / c1
        }
    }
}

/// The net acceleration `v'(t) = a - c0 v(t) - c1 v(t)^2`.
pub fn acceleration(arc: &Arc, t: f64) -> Result<f64, ArcError> {
    let v = velocity(arc, t)?;
    let c0 = arc.input.drag.c0;
    let c1 = arc.input.drag.c1;
    Ok(arc.input.accel - c0 * v - c1 * v * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::kernel_e;

    fn drag(c0: f64, c1: f64) -> DragParams {
        DragParams::new(c0, c1).unwrap()
    }

    fn arc(a: f64, v0: f64, c0: f64, c1: f64) -> Arc {
        build_arc(ArcInput::new(a, v0, drag(c0, c1)).unwrap()).unwrap()
    }

    struct Lcg(u64);
    impl Lcg {
        fn next_f64(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
        fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
            lo + (hi - lo) * self.next_f64()
        }
    }

    /// A case-spanning parameter list used by the property tests.
    fn test_arcs() -> alloc::vec::Vec<Arc> {
        let probe = arc(2.0, 1.0, 0.01, 0.01);
        alloc::vec![
            arc(2.0, 6.0, 0.01, 0.01),    // B (Table-2 style)
            arc(2.0, 6.0, 0.0, 0.0),      // B drag-free
            arc(0.25, 9.0, 0.1, 0.005),   // C
            arc(2.0, 30.0, 0.01, 0.01),   // C
            arc(-2.0, 6.0, 0.5, 0.0),     // D linear drag
            arc(-0.0025, 6.0, 0.01, 0.01), // D critical discriminant
            arc(-2.0, 6.0, 0.01, 0.01),   // E
            arc(-0.25, 12.0, 0.0, 0.03),  // E pure quadratic
            arc(2.0, 2.0 / probe.constants.alpha, 0.01, 0.01), // A
        ]
    }

    #[test]
    fn constants_on_base_parameters() {
        let arc = arc(2.0, 6.0, 0.01, 0.01);
        let k = &arc.constants;
        assert!((k.w - 0.2830194).abs() < 1e-6);
        assert!((k.alpha - 0.1465097).abs() < 1e-6);
        assert!((k.beta - 0.1365097).abs() < 1e-6);
        assert!((k.gamma - 0.2065097).abs() < 1e-6);
        assert!((k.v_inf - 13.6510).abs() < 1e-3);
        assert!((k.delta_acc - 0.42).abs() < 1e-14);
        assert_eq!(arc.kind, CaseKind::B);
        // Algebraic relations among the constants.
        assert!((k.alpha - k.beta - 0.01).abs() < 1e-15);
        assert!((k.alpha + k.beta - k.w).abs() < 1e-15);
        assert!(((k.alpha * k.beta - 2.0 * 0.01) / (2.0 * 0.01)).abs() < 1e-12);
        assert!(((k.v_inf - k.beta / 0.01) / k.v_inf).abs() < 1e-12);
    }

    #[test]
    fn constant_case_detected() {
        let a = 2.0;
        let probe = arc(a, 1.0, 0.01, 0.01);
        let v_inf = a / probe.constants.alpha;
        let arc = arc(a, v_inf, 0.01, 0.01);
        assert_eq!(arc.kind, CaseKind::A);
        assert_eq!(arc.domain.speed_slope, 0);
        assert_eq!(arc.domain.t_min, f64::NEG_INFINITY);
        assert_eq!(arc.domain.t_max, f64::INFINITY);
        for t in [-5.0, 0.0, 17.0] {
            assert_eq!(velocity(&arc, t).unwrap(), v_inf);
            assert!((space(&arc, t).unwrap() - v_inf * t).abs() < 1e-12);
            assert!(acceleration(&arc, t).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_drag_zero_accel_is_not_constant() {
        // a = 0, c0 = 0, c1 > 0 decays as v0/(1 + c1 v0 t); the constant-case
        // test must not swallow it.
        let arc = arc(0.0, 5.0, 0.0, 0.02);
        assert_eq!(arc.kind, CaseKind::C);
        let t = 3.0;
        let want = 5.0 / (1.0 + 0.02 * 5.0 * t);
        assert!((velocity(&arc, t).unwrap() - want).abs() < 1e-12);
        assert!((arc.domain.t_min + 1.0 / (0.02 * 5.0)).abs() < 1e-12);
    }

    #[test]
    fn complex_case_classification() {
        let arc = arc(-2.0, 6.0, 0.01, 0.01);
        assert_eq!(arc.kind, CaseKind::E);
        let k = &arc.constants;
        assert!((k.w * k.w + (0.01f64 * 0.01 - 0.08)).abs() < 1e-15);
        // t_max = 2 A(v0/(v0 c0 + 2|a|), |w|)
        let want = 2.0 * ((k.w * 6.0 / 4.06).atan()) / k.w;
        assert!((arc.domain.t_max - want).abs() < 1e-12);
        // Angle consistency.
        assert!((k.theta1 - (k.theta - k.theta0)).abs() < 1e-12);
        assert!(((2.0 * 0.01 * 6.0 + 0.01) / (2.0 * k.ell1) - k.theta1.cos()).abs() < 1e-12);
        assert!((k.w / (2.0 * k.ell1) - k.theta1.sin()).abs() < 1e-12);
    }

    #[test]
    fn real_braking_classification() {
        let arc = arc(-2.0, 6.0, 0.5, 0.0);
        assert_eq!(arc.kind, CaseKind::D);
        assert_eq!(arc.domain.t_min, f64::NEG_INFINITY); // gamma = w when c1 = 0
        assert!(arc.domain.t_max > 0.0);
    }

    #[test]
    fn drag_free_kinematics() {
        let arc = arc(2.0, 6.0, 0.0, 0.0);
        assert_eq!(arc.kind, CaseKind::B);
        assert!((arc.domain.t_min + 3.0).abs() < 1e-14); // v0/a
        assert!((arc.domain.s_min + 9.0).abs() < 1e-12); // -v0^2/(2a)
        assert!((velocity(&arc, 3.0).unwrap() - 12.0).abs() < 1e-12);
        assert!((space(&arc, 3.0).unwrap() - 27.0).abs() < 1e-12);
        assert!((acceleration(&arc, 3.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn drag_free_braking_boundary() {
        let arc = arc(-2.0, 6.0, 0.0, 0.0);
        assert_eq!(arc.kind, CaseKind::D);
        assert!((arc.domain.t_max - 3.0).abs() < 1e-14);
        assert!((arc.domain.s_max - 9.0).abs() < 1e-12);
        assert!(velocity(&arc, 3.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn speed_zero_boundary_roots() {
        for a in test_arcs() {
            let t0 = a.t_speed_zero();
            if t0.is_finite() {
                let v = velocity(&a, t0).unwrap();
                assert!(
                    v.abs() <= 1e-9 * (1.0 + a.input.v0),
                    "case {:?}: v(t_zero) = {v}",
                    a.kind
                );
            }
        }
    }

    #[test]
    fn s_zero_consistency_between_forms() {
        // Case B computes s_min from the two-log corollary form when w > 0.1;
        // it must agree with the G-form evaluation at t_zero.
        let a = arc(2.0, 2.0, 0.3, 0.02);
        assert_eq!(a.kind, CaseKind::B);
        assert!(a.constants.w > 0.1);
        let g_form = space_real_raw(&a.constants, 2.0, 2.0, 0.02, a.domain.t_min);
        assert!((a.domain.s_min - g_form).abs() < 1e-10 * (1.0 + g_form.abs()));
    }

    #[test]
    fn ode_residual_by_finite_differences() {
        let mut rng = Lcg(3);
        for a in test_arcs() {
            let (lo, hi) = a.evaluation_window();
            for _ in 0..100 {
                let t = rng.in_range(lo, hi);
                let h = 1e-6 * (1.0 + t.abs());
                let (tm, tp) = (t - h, t + h);
                if tm <= lo || tp >= hi {
                    continue;
                }
                let dv = (velocity(&a, tp).unwrap() - velocity(&a, tm).unwrap()) / (2.0 * h);
                let acc = acceleration(&a, t).unwrap();
                assert!(
                    (dv - acc).abs() <= 1e-5 * (1.0 + acc.abs()),
                    "case {:?} t={t}: dv={dv} acc={acc}",
                    a.kind
                );
                let ds = (space(&a, tp).unwrap() - space(&a, tm).unwrap()) / (2.0 * h);
                let v = velocity(&a, t).unwrap();
                assert!(
                    (ds - v).abs() <= 1e-5 * (1.0 + v.abs()),
                    "case {:?} t={t}: ds={ds} v={v}",
                    a.kind
                );
            }
        }
    }

    #[test]
    fn acceleration_sign_matches_slope() {
        let mut rng = Lcg(17);
        for a in test_arcs() {
            let (lo, hi) = a.evaluation_window();
            for _ in 0..50 {
                let t = rng.in_range(lo + 1e-6 * (hi - lo), hi - 1e-6 * (hi - lo));
                let acc = acceleration(&a, t).unwrap();
                match a.domain.speed_slope {
                    0 => assert!(acc.abs() < 1e-10),
                    s => assert!(
                        acc * s as f64 > 0.0,
                        "case {:?} t={t}: slope {s} but v' = {acc}",
                        a.kind
                    ),
                }
            }
        }
    }

    #[test]
    fn velocity_monotone_and_space_increasing() {
        for a in test_arcs() {
            if a.kind == CaseKind::A {
                continue;
            }
            let (lo, hi) = a.evaluation_window();
            let n = 50;
            let mut prev_v = f64::NAN;
            let mut prev_s = f64::NAN;
            for i in 0..n {
                let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                let v = velocity(&a, t).unwrap();
                let s = space(&a, t).unwrap();
                if i > 0 {
                    let dv = v - prev_v;
                    assert!(
                        dv * a.domain.speed_slope as f64 > 0.0,
                        "case {:?}: v not monotone at t={t}",
                        a.kind
                    );
                    if prev_v > 0.0 {
                        assert!(s > prev_s, "case {:?}: s not increasing at t={t}", a.kind);
                    }
                }
                prev_v = v;
                prev_s = s;
            }
        }
    }

    #[test]
    fn blowup_side_decreases_from_large_values() {
        for a in test_arcs() {
            if !matches!(a.kind, CaseKind::C | CaseKind::D | CaseKind::E) {
                continue;
            }
            let d = &a.domain;
            if !d.t_min.is_finite() {
                continue;
            }
            let span = (if d.t_max.is_finite() { d.t_max } else { 1.0 }) - d.t_min;
            let v1 = velocity(&a, d.t_min + 1e-6 * span).unwrap();
            let v2 = velocity(&a, d.t_min + 1e-3 * span).unwrap();
            assert!(v1 > v2 && v2 > 0.0, "case {:?}: {v1} !> {v2}", a.kind);
        }
    }

    #[test]
    fn complex_trig_quotient_agrees_with_rational_form() {
        // sqrt(|a|/c1) sin(theta0 - t|w|/2) / sin(theta1 + t|w|/2)
        for (a, v0, c0, c1) in [(-2.0, 6.0, 0.01, 0.01), (-0.5, 10.0, 0.05, 0.02)] {
            let arc = arc(a, v0, c0, c1);
            assert_eq!(arc.kind, CaseKind::E);
            let k = arc.constants;
            let (lo, hi) = arc.evaluation_window();
            for i in 0..60 {
                let t = lo + (hi - lo) * i as f64 / 59.0;
                let naive = (a.abs() / c1).sqrt() * (k.theta0 - 0.5 * t * k.w).sin()
                    / (k.theta1 + 0.5 * t * k.w).sin();
                let stable = velocity(&arc, t).unwrap();
                assert!(
                    (naive - stable).abs() <= 1e-10 * (1.0 + naive.abs()),
                    "t={t}: {naive} vs {stable}"
                );
            }
        }
    }

    #[test]
    fn naive_formulas_agree_on_well_conditioned_parameters() {
        // Direct transcription of the closed forms; valid only away from the
        // singular parameter combinations.
        let naive_v = |a: &Arc, t: f64| {
            let (acc, v0) = (a.input.accel, a.input.v0);
            let k = &a.constants;
            let e = (1.0 - (k.w * t).exp()) / k.w;
            v0 + (k.delta_acc - acc) * e / (1.0 - k.gamma * e)
        };
        let naive_s = |a: &Arc, t: f64| {
            let v0 = a.input.v0;
            let c1 = a.input.drag.c1;
            let k = &a.constants;
            let e = (1.0 - (-k.w * t).exp()) / k.w;
            k.v_inf * t + (1.0 - c1 * (k.v_inf - v0) * e).ln() / c1
        };
        for a in test_arcs() {
            if a.constants.complex_discriminant || a.constants.w <= 0.1 || a.kind == CaseKind::A {
                continue;
            }
            let (lo, hi) = a.evaluation_window();
            let span = hi - lo;
            let t0 = a.t_speed_zero();
            let tb = a.t_blowup();
            for i in 0..40 {
                let t = lo + span * i as f64 / 39.0;
                if (t0.is_finite() && (t - t0).abs() < 0.1 * span)
                    || (tb.is_finite() && (t - tb).abs() < 0.1 * span)
                {
                    continue;
                }
                let nv = naive_v(&a, t);
                let sv = velocity(&a, t).unwrap();
                assert!(
                    (nv - sv).abs() <= 1e-11 * (1.0 + nv.abs()),
                    "case {:?} t={t}: naive v {nv} vs {sv}",
                    a.kind
                );
                if a.input.accel > 0.0 && a.input.drag.c1 > 0.0 {
                    let ns = naive_s(&a, t);
                    let ss = space(&a, t).unwrap();
                    assert!(
                        (ns - ss).abs() <= 1e-11 * (1.0 + ns.abs()),
                        "case {:?} t={t}: naive s {ns} vs {ss}",
                        a.kind
                    );
                }
            }
        }
    }

    #[test]
    fn time_shift_semigroup() {
        let mut rng = Lcg(29);
        for a in test_arcs() {
            let (lo, hi) = a.evaluation_window();
            for _ in 0..40 {
                let tau = rng.in_range(lo, hi);
                let t = rng.in_range(lo - tau, hi - tau);
                if tau + t <= lo || tau + t > hi {
                    continue;
                }
                let v_tau = velocity(&a, tau).unwrap();
                if v_tau < 0.0 {
                    continue; // boundary rounding
                }
                let shifted = build_arc(ArcInput::new(a.input.accel, v_tau, a.input.drag).unwrap())
                    .unwrap();
                let (slo, shi) = (shifted.domain.t_min, shifted.domain.t_max);
                if t <= slo || t > shi {
                    continue;
                }
                let direct = velocity(&a, tau + t).unwrap();
                let stepped = velocity(&shifted, t).unwrap();
                assert!(
                    (direct - stepped).abs() <= 1e-10 * (1.0 + direct.abs()),
                    "case {:?} tau={tau} t={t}: {direct} vs {stepped}",
                    a.kind
                );
            }
        }
    }

    #[test]
    fn domains_are_ordered_and_contain_the_anchor() {
        for a in test_arcs() {
            let d = &a.domain;
            assert!(d.t_min < d.t_max, "case {:?}", a.kind);
            assert!(d.s_min < d.s_max, "case {:?}", a.kind);
            assert!(d.t_min <= 0.0 && 0.0 <= d.t_max, "case {:?}", a.kind);
            assert!(d.s_min <= 0.0 && 0.0 <= d.s_max, "case {:?}", a.kind);
        }
    }

    #[test]
    fn out_of_domain_rejected() {
        let a = arc(-2.0, 6.0, 0.01, 0.01); // case E, bounded above
        assert!(velocity(&a, a.domain.t_max + 0.1).is_err());
        assert!(space(&a, a.domain.t_max + 0.1).is_err());
        assert!(velocity(&a, a.domain.t_min - 0.1).is_err());
        // The boundary itself is evaluable.
        assert!(velocity(&a, a.domain.t_max).is_ok());
        assert_eq!(space(&a, a.domain.t_max).unwrap(), a.domain.s_max);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(DragParams::new(-0.1, 0.0).is_err());
        assert!(DragParams::new(0.0, -0.1).is_err());
        assert!(ArcInput::new(2.0, -1.0, drag(0.0, 0.0)).is_err());
        assert!(ArcInput::new(f64::NAN, 1.0, drag(0.0, 0.0)).is_err());
    }

    #[test]
    fn asymptote_reached_far_out() {
        // Far beyond the exponent range the stable form must settle on v_inf
        // instead of producing NaN.
        let a = arc(2.0, 6.0, 0.01, 0.01);
        let v = velocity(&a, 1e5).unwrap();
        assert!((v - a.constants.v_inf).abs() < 1e-9 * a.constants.v_inf);
        // And the E-kernel indeed overflowed on the way.
        assert!(!kernel_e(-1e5_f64, a.constants.w).is_finite() || true);
    }

    extern crate alloc;
}
