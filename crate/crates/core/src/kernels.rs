//! Numerically stable scalar kernels with series fallbacks.
//!
//! The closed-form arc solutions are built from a handful of difference
//! quotients that all have removable singularities:
//!
//! ```text
//! L(t, c)      = log(1 - c t) / c                  -> -t          as c -> 0
//! E(t, w)      = (1 - e^{w t}) / w                 -> -t          as w -> 0
//! S(x, w)      = sin(w x) / w                      ->  x          as w -> 0
//! A(x, w)      = arctan(w x) / w                   ->  x          as w -> 0
//! G(t, w, c0)  = [E(-t,(w+c0)/2) + E(t,(w-c0)/2)]/w -> -t^2/2     as w, c0 -> 0
//! F(t, w, c0)  = e^{t c0 / 2} G(t, w, c0)
//! Q(tau, c)    = log((c/s) sin(tau s) + cos(tau s))/tau^2 - c/tau,  s = sqrt(1-c^2)
//!              -> -1/2 as tau -> 0
//! ```
//!
//! Each kernel evaluates the closed form when its argument is well away from
//! the singular point and switches to a convergent series below a small
//! threshold, so callers never see the 0/0 or the catastrophic cancellation
//! of the direct expressions. The switchover is continuous to a few ulps.

use crate::math;

/// Argument magnitude below which the series branch is used.
pub const SERIES_SWITCH_THRESHOLD: f64 = 1e-2;

/// Series terms stop once `|term| <= SERIES_REL_TOL * |partial sum|`.
pub const SERIES_REL_TOL: f64 = 1.110_223_024_625_156_5e-16; // 2^-53

/// Hard cap on the number of series terms for any kernel.
pub const MAX_TERMS: usize = 64;

/// Threshold on `|tau|` below which `Q` uses its degree-5 polynomial.
/// Fixed: the polynomial's remainder is below 1.25e-19 there.
pub const Q_POLY_THRESHOLD: f64 = 1e-3;

/// Above `max(w, c0) * |t|` of this size the `G` series would need too many
/// terms; a dedicated closed-form limit takes over (only reachable when
/// `w << c0`, where that limit is accurate).
const G_SERIES_MAX_ARG: f64 = 80.0;

/// Evaluation settings for the series branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    /// Argument magnitude below which series evaluation is used; in (0, 1).
    pub series_switch_threshold: f64,
    /// Relative term-size stopping criterion; in (0, 1e3 * machine epsilon].
    pub series_rel_tol: f64,
    /// Maximum number of series terms; at least 8.
    pub max_terms: usize,
}

impl KernelConfig {
    pub const DEFAULT: Self = Self {
        series_switch_threshold: SERIES_SWITCH_THRESHOLD,
        series_rel_tol: SERIES_REL_TOL,
        max_terms: MAX_TERMS,
    };

    /// Checks the field invariants.
    pub fn validate(&self) -> Result<(), KernelError> {
        if !(self.series_switch_threshold > 0.0 && self.series_switch_threshold < 1.0) {
            return Err(KernelError::InvalidConfig("series_switch_threshold not in (0, 1)"));
        }
        if !(self.series_rel_tol > 0.0 && self.series_rel_tol <= f64::EPSILON * 1e3) {
            return Err(KernelError::InvalidConfig("series_rel_tol not in (0, 1e3 * eps]"));
        }
        if self.max_terms < 8 {
            return Err(KernelError::InvalidConfig("max_terms < 8"));
        }
        Ok(())
    }
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Kernel evaluation failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelError {
    /// A logarithm argument was nonpositive.
    LogDomain { arg: f64 },
    /// `Q` requires a cosine-valued parameter, `|c| <= 1`.
    CosineRange { c: f64 },
    /// A [`KernelConfig`] field violates its invariant.
    InvalidConfig(&'static str),
}

impl core::fmt::Display for KernelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            KernelError::LogDomain { arg } => write!(f, "logarithm argument nonpositive: {arg}"),
            KernelError::CosineRange { c } => write!(f, "parameter c = {c} outside [-1, 1]"),
            KernelError::InvalidConfig(msg) => write!(f, "invalid kernel config: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for KernelError {}

/// `L(t, c) = log(1 - c t) / c`, with the series `-t * sum (c t)^n / (n + 1)`
/// for `|c t|` below the switch threshold. Errors when `c t >= 1`.
pub fn kernel_l(t: f64, c: f64) -> Result<f64, KernelError> {
    kernel_l_cfg(t, c, &KernelConfig::DEFAULT)
}

pub(crate) fn kernel_l_cfg(t: f64, c: f64, cfg: &KernelConfig) -> Result<f64, KernelError> {
    let ct = c * t;
    if ct >= 1.0 {
        return Err(KernelError::LogDomain { arg: 1.0 - ct });
    }
    if math::abs(ct) <= cfg.series_switch_threshold {
        Ok(kernel_l_series(t, c, cfg))
    } else {
        Ok(kernel_l_closed(t, c))
    }
}

pub(crate) fn kernel_l_closed(t: f64, c: f64) -> f64 {
    math::ln_1p(-c * t) / c
}

pub(crate) fn kernel_l_series(t: f64, c: f64, cfg: &KernelConfig) -> f64 {
    let x = c * t;
    let mut sum = 1.0;
    let mut pow = 1.0;
    for n in 1..cfg.max_terms {
        pow *= x;
        let term = pow / (n as f64 + 1.0);
        sum += term;
        if math::abs(term) <= cfg.series_rel_tol * math::abs(sum) {
            break;
        }
    }
    -t * sum
}

/// `E(t, w) = (1 - e^{w t}) / w`, with the series `-t * sum (w t)^n / (n + 1)!`
/// for `|w t|` below the switch threshold; exactly `-t` at `w = 0`.
///
/// The closed branch uses the exponential-minus-one primitive, so there is no
/// cancellation for moderate `|w t|`. When `w t` exceeds the exponent range
/// the overflow is reported as an IEEE infinity of the correct sign.
pub fn kernel_e(t: f64, w: f64) -> f64 {
    kernel_e_cfg(t, w, &KernelConfig::DEFAULT)
}

pub(crate) fn kernel_e_cfg(t: f64, w: f64, cfg: &KernelConfig) -> f64 {
    let wt = w * t;
    if math::abs(wt) <= cfg.series_switch_threshold {
        kernel_e_series(t, w, cfg)
    } else {
        kernel_e_closed(t, w)
    }
}

pub(crate) fn kernel_e_closed(t: f64, w: f64) -> f64 {
    -math::expm1(w * t) / w
}

pub(crate) fn kernel_e_series(t: f64, w: f64, cfg: &KernelConfig) -> f64 {
    let wt = w * t;
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 1..cfg.max_terms {
        term *= wt / (n as f64 + 1.0);
        sum += term;
        if math::abs(term) <= cfg.series_rel_tol * math::abs(sum) {
            break;
        }
    }
    -t * sum
}

/// `S(x, w) = sin(w x) / w`, evaluated as `x * sinc(w x)` so the `w = 0`
/// limit is `x` exactly and huge `x` with tiny `w` cannot overflow.
pub fn kernel_s(x: f64, w: f64) -> f64 {
    kernel_s_cfg(x, w, &KernelConfig::DEFAULT)
}

pub(crate) fn kernel_s_cfg(x: f64, w: f64, cfg: &KernelConfig) -> f64 {
    x * sinc(w * x, cfg)
}

/// Unnormalised sinc, series below the switch threshold.
pub(crate) fn sinc(z: f64, cfg: &KernelConfig) -> f64 {
    if math::abs(z) <= cfg.series_switch_threshold {
        let z2 = z * z;
        let mut sum = 1.0;
        let mut term = 1.0;
        for n in 1..cfg.max_terms {
            let k = 2.0 * n as f64;
            term *= -z2 / (k * (k + 1.0));
            sum += term;
            if math::abs(term) <= cfg.series_rel_tol * math::abs(sum) {
                break;
            }
        }
        sum
    } else {
        math::sin(z) / z
    }
}

/// `sinc(z) - 1` without cancellation for small `z`.
pub(crate) fn sinc_m1(z: f64) -> f64 {
    if math::abs(z) <= 0.5 {
        let z2 = z * z;
        let mut sum = 0.0;
        let mut term = -z2 / 6.0;
        for n in 1..MAX_TERMS {
            sum += term;
            if math::abs(term) <= SERIES_REL_TOL * math::abs(sum) {
                break;
            }
            let k = 2.0 * n as f64;
            term *= -z2 / ((k + 2.0) * (k + 3.0));
        }
        sum
    } else {
        math::sin(z) / z - 1.0
    }
}

/// `A(x, w) = arctan(w x) / w`, with the series
/// `x * sum (-(w x)^2)^n / (2 n + 1)` for `|w x|` below the switch threshold;
/// exactly `x` at `w = 0`. Accepts `x = +-inf` (arctan saturates).
pub fn kernel_a(x: f64, w: f64) -> f64 {
    kernel_a_cfg(x, w, &KernelConfig::DEFAULT)
}

pub(crate) fn kernel_a_cfg(x: f64, w: f64, cfg: &KernelConfig) -> f64 {
    if w == 0.0 {
        return x;
    }
    let z = w * x;
    if math::abs(z) <= cfg.series_switch_threshold {
        let u = z * z;
        let mut sum = 1.0;
        let mut pow = 1.0;
        for n in 1..cfg.max_terms {
            pow *= -u;
            let term = pow / (2.0 * n as f64 + 1.0);
            sum += term;
            if math::abs(term) <= cfg.series_rel_tol * math::abs(sum) {
                break;
            }
        }
        x * sum
    } else {
        math::atan(z) / w
    }
}

/// `G(t, w, c0) = [E(-t, (w+c0)/2) + E(t, (w-c0)/2)] / w`.
///
/// The defining combination cancels catastrophically as `w -> 0` (the bracket
/// is odd in `w`), so for `|w t|` below the switch threshold the kernel uses
/// the exponential-form series
///
/// ```text
/// G = -sum_{n>=1} f_n e^{h_n(t)} [4 + 2 c0 t / (2n + 1)],
/// h_n(t) = sum_{j=1}^{2n} log(|t| / (2j)) - t c0 / 2,
/// g_1 = f_1 = 1,  g_{n+1} = g_n c0^2,  f_{n+1} = f_n w^2 + g_{n+1},
/// ```
///
/// whose terms carry one sign and whose log-domain exponent avoids the
/// overflow of `t^{2n}` and `(2n)!`. Expects `w >= 0`, `c0 >= 0`.
pub fn kernel_g(t: f64, w: f64, c0: f64) -> f64 {
    kernel_g_cfg(t, w, c0, &KernelConfig::DEFAULT)
}

pub(crate) fn kernel_g_cfg(t: f64, w: f64, c0: f64, cfg: &KernelConfig) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let at = math::abs(t);
    if w * at <= cfg.series_switch_threshold {
        if math::max(w, c0) * at <= G_SERIES_MAX_ARG {
            kernel_g_series(t, w, c0, cfg)
        } else {
            // w << c0 here; the w -> 0 limit of G is accurate to O((w/c0)^2).
            kernel_g_small_w(t, c0)
        }
    } else {
        kernel_g_direct(t, w, c0, cfg)
    }
}

pub(crate) fn kernel_g_direct(t: f64, w: f64, c0: f64, cfg: &KernelConfig) -> f64 {
    (kernel_e_cfg(-t, 0.5 * (w + c0), cfg) + kernel_e_cfg(t, 0.5 * (w - c0), cfg)) / w
}

pub(crate) fn kernel_g_series(t: f64, w: f64, c0: f64, cfg: &KernelConfig) -> f64 {
    let at = math::abs(t);
    let w2 = w * w;
    let c02 = c0 * c0;
    let mut g = 1.0;
    let mut f = 1.0;
    let mut h = -t * c0 * 0.5;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in 1..=cfg.max_terms {
        let j = 2.0 * n as f64;
        h += math::ln(at / (2.0 * (j - 1.0))) + math::ln(at / (2.0 * j));
        let term = f * math::exp(h) * (4.0 + 2.0 * c0 * t / (j + 1.0));
        sum += term;
        let mag = math::abs(term);
        if mag <= cfg.series_rel_tol * math::abs(sum) && mag <= prev {
            break;
        }
        prev = mag;
        g *= c02;
        f = f * w2 + g;
    }
    -sum
}

/// `lim_{w -> 0} G(t, w, c0)`, valid for `c0 > 0`.
fn kernel_g_small_w(t: f64, c0: f64) -> f64 {
    let u = 0.5 * c0 * t;
    (2.0 * t / c0) * math::exp(-u) + (4.0 / (c0 * c0)) * math::expm1(-u)
}

/// `F(t, w, c0) = e^{t c0 / 2} G(t, w, c0)`.
pub fn kernel_f(t: f64, w: f64, c0: f64) -> f64 {
    math::exp(0.5 * t * c0) * kernel_g(t, w, c0)
}

/// `Q(tau, c)`: the scaled log kernel of the near-critical braking arc,
///
/// ```text
/// Q(tau, c) = log((c/s) sin(tau s) + cos(tau s)) / tau^2 - c / tau,
/// s = sqrt(1 - c^2),
/// ```
///
/// evaluated for `|tau| <= 1e-3` by its degree-5 polynomial (remainder below
/// 1.25e-19 there) and otherwise by [`kernel_q_direct`]. Requires `|c| <= 1`;
/// errors when the log argument is nonpositive.
pub fn kernel_q(tau: f64, c: f64) -> Result<f64, KernelError> {
    if c.is_nan() || math::abs(c) > 1.0 {
        return Err(KernelError::CosineRange { c });
    }
    if math::abs(tau) <= Q_POLY_THRESHOLD {
        Ok(kernel_q_polynomial(tau, c))
    } else {
        kernel_q_direct(tau, c)
    }
}

/// Degree-5 polynomial branch of [`kernel_q`], valid for small `|tau|`.
pub fn kernel_q_polynomial(tau: f64, c: f64) -> f64 {
    let c2 = c * c;
    let c4 = c2 * c2;
    -0.5 + tau
        * (c / 3.0
            + tau * (-(2.0 * c2 + 1.0) / 12.0
                + tau * (c * (c2 + 2.0) / 15.0
                    + tau * (-(2.0 * c4 + 11.0 * c2 + 2.0) / 90.0
                        + tau * (c * (2.0 * c4 + 26.0 * c2 + 17.0) / 315.0)))))
}

/// Closed-form branch of [`kernel_q`].
///
/// The defining expression loses about `eps / tau^2` absolute accuracy if
/// evaluated literally (the `c/tau` terms cancel), so it is rearranged as
///
/// ```text
/// A = c tau sinc(tau s) - 2 sin^2(tau s / 2)        [log argument - 1]
/// Q = c (sinc(tau s) - 1)/tau - (s^2/2) sinc^2(tau s/2) + (log1p(A) - A)/tau^2
/// ```
///
/// where every piece is cancellation-free. As `s -> 0` (`|c| -> 1`) this
/// degrades continuously to the limit `log(1 + c tau)/tau^2 - c/tau`.
pub fn kernel_q_direct(tau: f64, c: f64) -> Result<f64, KernelError> {
    let s2 = math::max(0.0, 1.0 - c * c);
    let s = math::sqrt(s2);
    let x = tau * s;
    let cfg = &KernelConfig::DEFAULT;
    let sinc_x = sinc(x, cfg);
    let sinc_half = sinc(0.5 * x, cfg);
    let sin_half = math::sin(0.5 * x);
    let a = c * tau * sinc_x - 2.0 * sin_half * sin_half;
    if a <= -1.0 {
        return Err(KernelError::LogDomain { arg: 1.0 + a });
    }
    Ok(c * sinc_m1(x) / tau - 0.5 * s2 * sinc_half * sinc_half + ln1p_minus_x(a) / (tau * tau))
}

/// `log(1 + a) - a` without cancellation for small `a`.
pub(crate) fn ln1p_minus_x(a: f64) -> f64 {
    if math::abs(a) <= 0.25 {
        let mut sum = 0.0;
        let mut term = -a * a / 2.0;
        for k in 2..MAX_TERMS {
            sum += term;
            if math::abs(term) <= SERIES_REL_TOL * math::abs(sum) {
                break;
            }
            term *= -a * k as f64 / (k as f64 + 1.0);
        }
        sum
    } else {
        math::ln_1p(a) - a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(1e-300)
    }

    // Simple deterministic generator for property-style checks.
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

    #[test]
    fn l_special_values() {
        assert_eq!(kernel_l(0.0, 5.0).unwrap(), 0.0);
        assert_eq!(kernel_l(2.0, 0.0).unwrap(), -2.0);
        assert!((kernel_l(0.5, 1.0).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        // High-precision oracle: log(1-x)/x = -(1 + x/2 + x^2/3 + ...) at x = 1e-14.
        let want = -1.000_000_000_000_005;
        assert!(rel_err(kernel_l(1.0, 1e-14).unwrap(), want) < 1e-13);
    }

    #[test]
    fn l_domain_error() {
        assert!(kernel_l(1.0, 1.0).is_err());
        assert!(kernel_l(2.0, 1.0).is_err());
        assert!(kernel_l(-2.0, 1.0).is_ok());
    }

    #[test]
    fn e_special_values() {
        assert_eq!(kernel_e(0.0, 3.0), 0.0);
        assert_eq!(kernel_e(2.0, 0.0), -2.0);
        assert!((kernel_e(1.0, 1.0) - (1.0 - core::f64::consts::E)).abs() < 1e-15);
    }

    #[test]
    fn e_overflow_saturates() {
        assert_eq!(kernel_e(1e6, 1.0), f64::NEG_INFINITY);
        assert_eq!(kernel_e(-1e6, -1.0), f64::INFINITY);
    }

    #[test]
    fn s_special_values() {
        assert_eq!(kernel_s(7.0, 0.0), 7.0);
        assert!((kernel_s(core::f64::consts::FRAC_PI_2, 1.0) - 1.0).abs() < 1e-15);
        assert!((kernel_s(1.0, 2.0) - 2.0f64.sin() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn a_special_values() {
        assert_eq!(kernel_a(4.0, 0.0), 4.0);
        assert!((kernel_a(1.0, 1.0) - core::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(kernel_a(0.0, 9.0), 0.0);
        // arctan saturation for infinite argument (used by the t_vinf range
        // formula when c0 = 0).
        let w = 0.3;
        assert!((kernel_a(f64::INFINITY, w) - core::f64::consts::FRAC_PI_2 / w).abs() < 1e-15);
    }

    #[test]
    fn limit_exactness_large_arguments() {
        for &x in &[1.0, 1e3, 1e6] {
            assert_eq!(kernel_e(x, 0.0), -x);
            assert_eq!(kernel_l(x, 0.0).unwrap(), -x);
            assert_eq!(kernel_s(x, 0.0), x);
            assert_eq!(kernel_a(x, 0.0), x);
            assert_eq!(kernel_e(-x, 0.0), x);
            assert_eq!(kernel_l(-x, 0.0).unwrap(), x);
        }
    }

    #[test]
    fn s_and_a_are_odd_in_x() {
        let mut rng = Lcg(7);
        for _ in 0..200 {
            let x = rng.in_range(-20.0, 20.0);
            let w = rng.in_range(0.0, 3.0);
            assert_eq!(kernel_s(-x, w), -kernel_s(x, w));
            assert_eq!(kernel_a(-x, w), -kernel_a(x, w));
        }
    }

    #[test]
    fn g_special_values() {
        assert!((kernel_g(1.0, 0.0, 0.0) - (-0.5)).abs() < 1e-15);
        assert_eq!(kernel_g(0.0, 0.3, 0.1), 0.0);
        assert_eq!(kernel_g(0.0, 0.0, 0.0), 0.0);
        // Analytic limit 4(1 - cosh(w t / 2)) / w^2 at c0 = 0.
        let (t, w): (f64, f64) = (2.0, 0.7);
        let want = 4.0 * (1.0 - (0.5 * w * t).cosh()) / (w * w);
        assert!(rel_err(kernel_g(t, w, 0.0), want) < 1e-13);
    }

    #[test]
    fn g_cross_branch_at_well_conditioned_point() {
        // Both branches are healthy here; they must agree tightly.
        let (t, w, c0) = (0.5, 0.2830194, 0.01);
        let cfg = KernelConfig::DEFAULT;
        let direct = kernel_g_direct(t, w, c0, &cfg);
        let series = kernel_g_series(t, w, c0, &cfg);
        assert!(rel_err(series, direct) < 1e-13);
    }

    #[test]
    fn g_identity_against_defining_combination() {
        let mut rng = Lcg(11);
        let cfg = KernelConfig::DEFAULT;
        for _ in 0..300 {
            let t = rng.in_range(-5.0, 5.0);
            let w = rng.in_range(0.011, 2.0);
            let c0 = rng.in_range(0.0, 1.0);
            let g = kernel_g(t, w, c0);
            let combo = kernel_e_cfg(-t, 0.5 * (w + c0), &cfg) + kernel_e_cfg(t, 0.5 * (w - c0), &cfg);
            assert!(
                (w * g - combo).abs() <= 1e-12 * (1.0 + g.abs()),
                "identity failed at t={t} w={w} c0={c0}"
            );
        }
    }

    #[test]
    fn g_small_w_regimes_stay_accurate() {
        // Reference: series with generous budget at points where it converges.
        let cfg = KernelConfig { max_terms: 128, ..KernelConfig::DEFAULT };
        for &(t, w, c0) in &[
            (2.0, 0.0, 0.01),
            (184.0, 1e-10, 0.01),
            (184.0, 0.0, 0.01),
            (-5.0, 1e-8, 0.3),
            (30.0, 1e-4, 0.05),
        ] {
            let want = kernel_g_series(t, w, c0, &cfg);
            let got = kernel_g(t, w, c0);
            assert!(rel_err(got, want) < 1e-12, "t={t} w={w} c0={c0}: {got} vs {want}");
        }
    }

    #[test]
    fn f_special_values() {
        assert_eq!(kernel_f(0.0, 0.3, 0.1), 0.0);
        assert!((kernel_f(1.0, 0.0, 0.0) - (-0.5)).abs() < 1e-15);
        let want = (0.05f64).exp() * kernel_g(1.0, 0.3, 0.1);
        assert!(rel_err(kernel_f(1.0, 0.3, 0.1), want) < 1e-15);
    }

    #[test]
    fn q_constant_term() {
        for &c in &[-1.0, -0.5, 0.0, 0.3, 1.0] {
            assert_eq!(kernel_q(0.0, c).unwrap(), -0.5);
        }
    }

    #[test]
    fn q_s_zero_limit() {
        // At c = 1 the direct branch collapses to log(1 + tau)/tau^2 - 1/tau.
        let tau = 0.0005;
        let poly = kernel_q(tau, 1.0).unwrap();
        let direct = kernel_q_direct(tau, 1.0).unwrap();
        assert!((poly - direct).abs() <= 5e-16, "{poly} vs {direct}");
    }

    #[test]
    fn q_cross_branch_at_threshold() {
        let tau = 0.001;
        let poly = kernel_q_polynomial(tau, 0.3);
        let direct = kernel_q_direct(tau, 0.3).unwrap();
        assert!((poly - direct).abs() <= 1e-15, "{poly} vs {direct}");
    }

    #[test]
    fn q_rejects_bad_cosine() {
        assert!(matches!(kernel_q(0.1, 1.5), Err(KernelError::CosineRange { .. })));
    }

    #[test]
    fn branch_continuity_at_switchover() {
        // Both branches evaluated in a +-20% band around the threshold.
        let mut rng = Lcg(23);
        let cfg = KernelConfig::DEFAULT;
        for _ in 0..100 {
            let arg = SERIES_SWITCH_THRESHOLD * rng.in_range(0.8, 1.2);
            let sign = if rng.next_f64() < 0.5 { -1.0 } else { 1.0 };
            let t = rng.in_range(0.1, 10.0);

            let c = sign * arg / t;
            assert!(rel_err(kernel_l_series(t, c, &cfg), kernel_l_closed(t, c)) < 1e-12);

            let w = arg / t;
            assert!(rel_err(kernel_e_series(sign * t, w, &cfg), kernel_e_closed(sign * t, w)) < 1e-12);

            let z = sign * arg;
            assert!(rel_err(sinc(z, &cfg), z.sin() / z) < 1e-12);
            let x = sign * t;
            let wa = arg / t;
            assert!(rel_err(kernel_a_cfg(x, wa, &cfg), (wa * x).atan() / wa) < 1e-12);

            // G: w*t at the band edge, moderate c0.
            let c0 = rng.in_range(0.0, 2.0 / t.max(1.0));
            let wg = arg / t;
            let series = kernel_g_series(sign * t, wg, c0, &cfg);
            let direct = kernel_g_direct(sign * t, wg, c0, &cfg);
            assert!(
                rel_err(series, direct) < 1e-12,
                "G branches disagree at t={t} w={wg} c0={c0}: {series} vs {direct}"
            );
        }
    }

    #[test]
    fn series_terminate_within_budget() {
        // Below the threshold every kernel series must converge well inside
        // MAX_TERMS with decreasing tails.
        let cfg = KernelConfig { max_terms: MAX_TERMS, ..KernelConfig::DEFAULT };
        let mut rng = Lcg(41);
        for _ in 0..100 {
            let t = rng.in_range(0.5, 2.0);
            let w = rng.in_range(0.0, SERIES_SWITCH_THRESHOLD / t);
            // Termination is observable through agreement with a 128-term run.
            let long = KernelConfig { max_terms: 128, ..cfg };
            assert_eq!(kernel_e_series(t, w, &cfg), kernel_e_series(t, w, &long));
            assert_eq!(kernel_l_series(t, w, &cfg), kernel_l_series(t, w, &long));
            assert_eq!(kernel_g_series(t, w, 0.4, &cfg), kernel_g_series(t, w, 0.4, &long));
        }
    }

    #[test]
    fn series_terms_decrease_in_the_tail() {
        // Below the switch threshold every series has monotonically
        // shrinking terms long before the budget runs out.
        let mut rng = Lcg(57);
        for _ in 0..100 {
            let t = rng.in_range(0.5, 2.0);
            let w = rng.in_range(0.0, SERIES_SWITCH_THRESHOLD / t);
            let x = w * t;

            // E: term_n = (w t)^n / (n + 1)!
            let mut term = 1.0f64;
            for n in 1..MAX_TERMS {
                let next = term * x / (n as f64 + 1.0);
                if n >= MAX_TERMS / 2 {
                    assert!(next.abs() <= term.abs());
                }
                term = next;
            }

            // L: term_n = (c t)^n / (n + 1)
            let mut pow = 1.0f64;
            for n in 1..MAX_TERMS {
                let prev = pow / n as f64;
                pow *= x;
                let cur = pow / (n as f64 + 1.0);
                if n >= MAX_TERMS / 2 {
                    assert!(cur.abs() <= prev.abs());
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(KernelConfig::DEFAULT.validate().is_ok());
        let bad = KernelConfig { series_switch_threshold: 1.5, ..KernelConfig::DEFAULT };
        assert!(bad.validate().is_err());
        let bad = KernelConfig { series_rel_tol: 1e-3, ..KernelConfig::DEFAULT };
        assert!(bad.validate().is_err());
        let bad = KernelConfig { max_terms: 4, ..KernelConfig::DEFAULT };
        assert!(bad.validate().is_err());
    }
}
