//! Brute-force verification path: adaptive explicit Runge-Kutta integration
//! of the arc ODE with dense output and event location.
//!
//! This module never touches the closed forms in [`crate::arc`]; it exists so
//! tests (and a hidden CLI subcommand) can check them against an independent
//! computation. Production code should not route through here.

use crate::arc::ArcInput;
use crate::math;
use crate::ocp::BangBangProblem;

/// Integrator tolerances and budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl OracleSettings {
    pub const DEFAULT: Self = Self { rel_tol: 1e-12, abs_tol: 1e-14, max_steps: 1_000_000 };

    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return Err(OracleError::InvalidSettings("rel_tol not in (0, 1e-4]"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol <= 1e-4) {
            return Err(OracleError::InvalidSettings("abs_tol not in (0, 1e-4]"));
        }
        if self.max_steps < 1_000 {
            return Err(OracleError::InvalidSettings("max_steps < 1000"));
        }
        Ok(())
    }
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleError {
    InvalidSettings(&'static str),
    /// Step budget exhausted before reaching the target.
    StepLimit,
    /// The speed exceeded the blow-up guard (1e12).
    BlowUp { t: f64, v: f64 },
    /// The requested space event is never crossed inside the domain.
    NoCrossing,
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::InvalidSettings(msg) => write!(f, "invalid oracle settings: {msg}"),
            OracleError::StepLimit => write!(f, "step budget exhausted"),
            OracleError::BlowUp { t, v } => write!(f, "speed blow-up at t = {t}: v = {v}"),
            OracleError::NoCrossing => write!(f, "space target never crossed"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

const BLOWUP_GUARD: f64 = 1e12;

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Stage times are not needed: the arc ODE is autonomous.
// Error coefficients, 5th minus embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output coefficients.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type State = [f64; 2]; // [s, v]

#[derive(Debug, Clone, Copy)]
struct DenseStep {
    t0: f64,
    h: f64,
    rcont: [State; 5],
}

impl DenseStep {
    /// 4th-order interpolant on the accepted step.
    fn eval(&self, t: f64) -> State {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let mut out = [0.0; 2];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.rcont[0][i]
                + th * (self.rcont[1][i]
                    + th1 * (self.rcont[2][i]
                        + th * (self.rcont[3][i] + th1 * self.rcont[4][i])));
        }
        out
    }

    fn t_end(&self) -> f64 {
        self.t0 + self.h
    }
}

struct Dopri5 {
    accel: f64,
    c0: f64,
    c1: f64,
    settings: OracleSettings,
    t: f64,
    y: State,
    h: f64,
    k1: State,
    err_old: f64,
    steps: usize,
}

impl Dopri5 {
    fn new(input: &ArcInput, direction: f64, scale: f64, settings: OracleSettings) -> Self {
        let y = [0.0, input.v0];
        let mut s = Self {
            accel: input.accel,
            c0: input.drag.c0,
            c1: input.drag.c1,
            settings,
            t: 0.0,
            y,
            h: direction * 1e-4 * (1.0 + scale),
            k1: [0.0; 2],
            err_old: 1e-4,
            steps: 0,
        };
        s.k1 = s.rhs(&y);
        s
    }

    fn rhs(&self, y: &State) -> State {
        let v = y[1];
        [v, self.accel - self.c0 * v - self.c1 * v * v]
    }

    /// Advances by one accepted step (of at most `h_cap` magnitude if finite)
    /// and returns its dense interpolant.
    fn step(&mut self, h_cap: f64) -> Result<DenseStep, OracleError> {
        loop {
            self.steps += 1;
            if self.steps > self.settings.max_steps {
                return Err(OracleError::StepLimit);
            }
            if math::abs(self.y[1]) > BLOWUP_GUARD {
                return Err(OracleError::BlowUp { t: self.t, v: self.y[1] });
            }
            let mut h = self.h;
            if h_cap.is_finite() && math::abs(h) > h_cap {
                h = h.signum() * h_cap;
            }
            if math::abs(h) < f64::EPSILON * (1.0 + math::abs(self.t)) {
                return Err(OracleError::StepLimit);
            }

            let y = self.y;
            let k1 = self.k1;
            let mut ys = [0.0; 2];
            for i in 0..2 {
                ys[i] = y[i] + h * A21 * k1[i];
            }
            let k2 = self.rhs(&ys);
            for i in 0..2 {
                ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            let k3 = self.rhs(&ys);
            for i in 0..2 {
                ys[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            let k4 = self.rhs(&ys);
            for i in 0..2 {
                ys[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            let k5 = self.rhs(&ys);
            for i in 0..2 {
                ys[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            let k6 = self.rhs(&ys);
            let mut y1 = [0.0; 2];
            for i in 0..2 {
                y1[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            let k7 = self.rhs(&y1);

            let mut err = 0.0;
            for i in 0..2 {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = self.settings.abs_tol
                    + self.settings.rel_tol * math::max(math::abs(y[i]), math::abs(y1[i]));
                err += (e / sc) * (e / sc);
            }
            let err = math::sqrt(0.5 * err);

            // PI controller (beta = 0.04).
            let expo = 0.2 - 0.75 * 0.04;
            let mut fac = 0.9 * powf(err, -expo) * powf(self.err_old, 0.04);
            fac = math::min(5.0, math::max(0.2, fac));

            if err <= 1.0 {
                let mut rcont = [[0.0; 2]; 5];
                for i in 0..2 {
                    let ydiff = y1[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    rcont[0][i] = y[i];
                    rcont[1][i] = ydiff;
                    rcont[2][i] = bspl;
                    rcont[3][i] = ydiff - h * k7[i] - bspl;
                    rcont[4][i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                            + D7 * k7[i]);
                }
                let step = DenseStep { t0: self.t, h, rcont };
                self.t += h;
                self.y = y1;
                self.k1 = k7; // FSAL
                self.err_old = math::max(err, 1e-4);
                self.h = h * fac;
                return Ok(step);
            }
            self.h = h * math::min(1.0, fac);
        }
    }
}

fn powf(x: f64, p: f64) -> f64 {
    math::exp(p * math::ln(math::max(x, 1e-300)))
}

/// Integrates `s' = v`, `v' = a - c0 v - c1 v^2` from `(s, v) = (0, v0)` to
/// `t_end` (either sign) and returns `(v, s)` there.
pub fn integrate_arc(
    input: &ArcInput,
    t_end: f64,
    settings: &OracleSettings,
) -> Result<(f64, f64), OracleError> {
    settings.validate()?;
    if t_end == 0.0 {
        return Ok((input.v0, 0.0));
    }
    let dir = if t_end > 0.0 { 1.0 } else { -1.0 };
    let mut solver = Dopri5::new(input, dir, math::abs(t_end), *settings);
    while (t_end - solver.t) * dir > 0.0 {
        let remaining = math::abs(t_end - solver.t);
        if remaining <= 8.0 * f64::EPSILON * (1.0 + math::abs(t_end)) {
            break; // within rounding of the target
        }
        let step = solver.step(remaining)?;
        if (t_end - solver.t) * dir <= 0.0 {
            let y = step.eval(t_end);
            return Ok((y[1], y[0]));
        }
    }
    Ok((solver.y[1], solver.y[0]))
}

/// Integrates until the travelled space crosses `zeta` and refines the
/// crossing instant on the dense output. `zeta < 0` integrates backward.
pub fn locate_space_event(
    input: &ArcInput,
    zeta: f64,
    settings: &OracleSettings,
) -> Result<f64, OracleError> {
    settings.validate()?;
    if zeta == 0.0 {
        return Ok(0.0);
    }
    let dir = if zeta > 0.0 { 1.0 } else { -1.0 };
    let scale = math::abs(zeta) / (1.0 + input.v0);
    let mut solver = Dopri5::new(input, dir, scale, *settings);
    loop {
        let step = solver.step(f64::INFINITY)?;
        let s_after = solver.y[0];
        let crossed = if dir > 0.0 { s_after >= zeta } else { s_after <= zeta };
        if crossed {
            return Ok(refine_space_crossing(&step, zeta));
        }
        // Forward progress dies once the speed reaches zero (braking arcs).
        if dir > 0.0 && solver.y[1] <= 0.0 && s_after < zeta {
            return Err(OracleError::NoCrossing);
        }
    }
}

/// Bisection on the dense-output polynomial, to 1e-12 of the step width.
fn refine_space_crossing(step: &DenseStep, zeta: f64) -> f64 {
    let mut lo = step.t0;
    let mut hi = step.t_end();
    let increasing = step.eval(hi)[0] >= step.eval(lo)[0];
    while math::abs(hi - lo) > 1e-12 * math::abs(step.h) {
        let mid = 0.5 * (lo + hi);
        let s = step.eval(mid)[0];
        let below = if increasing { s < zeta } else { s > zeta };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Residuals of a candidate switching abscissa under full forward shooting.
#[derive(Debug, Clone, Copy)]
pub struct ShootReport {
    /// `v(L) - v_f` when the braking phase reaches `s = L`; `-v_f` when the
    /// vehicle stops short (then `s_shortfall > 0`).
    pub v_residual: f64,
    /// `L - s_stop` when the braking phase dies before the end, else 0.
    pub s_shortfall: f64,
}

impl ShootReport {
    /// Magnitude of the worst boundary violation.
    pub fn max_violation(&self) -> f64 {
        math::max(math::abs(self.v_residual), math::abs(self.s_shortfall))
    }
}

/// Forward-shoots the bang-bang profile: accelerate to `s_sigma`, switch,
/// brake towards `s = L`; reports the terminal boundary residuals.
pub fn shoot_bangbang(
    problem: &BangBangProblem,
    s_sigma: f64,
    settings: &OracleSettings,
) -> Result<ShootReport, OracleError> {
    settings.validate()?;
    let accel_input = ArcInput::new(problem.a_plus, problem.v_i, problem.drag)
        .map_err(|_| OracleError::InvalidSettings("invalid problem"))?;

    // Accelerate to the switch point.
    let v_sigma = if s_sigma > 0.0 {
        let t_sigma = locate_space_event(&accel_input, s_sigma, settings)?;
        integrate_arc(&accel_input, t_sigma, settings)?.0
    } else {
        problem.v_i
    };

    // Brake from there; stop when s reaches L or the speed dies.
    let brake_input = ArcInput::new(-problem.a_minus, math::max(v_sigma, 0.0), problem.drag)
        .map_err(|_| OracleError::InvalidSettings("invalid problem"))?;
    let remaining = problem.length - s_sigma;
    if remaining <= 0.0 {
        return Ok(ShootReport { v_residual: v_sigma - problem.v_f, s_shortfall: 0.0 });
    }
    let mut solver = Dopri5::new(&brake_input, 1.0, remaining / (1.0 + v_sigma), *settings);
    loop {
        let step = solver.step(f64::INFINITY)?;
        if solver.y[0] >= remaining {
            let t_cross = refine_space_crossing(&step, remaining);
            let v_end = step.eval(t_cross)[1];
            return Ok(ShootReport { v_residual: v_end - problem.v_f, s_shortfall: 0.0 });
        }
        if solver.y[1] <= 0.0 {
            // The speed died inside this step; locate the standstill instant
            // before reading off how far the vehicle got.
            let mut lo = step.t0;
            let mut hi = step.t_end();
            while math::abs(hi - lo) > 1e-12 * math::abs(step.h) {
                let mid = 0.5 * (lo + hi);
                if step.eval(mid)[1] > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s_stop = step.eval(0.5 * (lo + hi))[0];
            return Ok(ShootReport {
                v_residual: -problem.v_f,
                s_shortfall: remaining - s_stop,
            });
        }
    }
}
