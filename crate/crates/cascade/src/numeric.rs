//! Numerically stable scalar kernels shared by the closed-form solutions.
//!
//! Every expression in the closed-form dynamics is a combination of decaying
//! exponentials with denominators that can pass through zero (the A -> 0
//! exciton-mixing limit and the resonant denominators a0 +- A - 2*gamma).
//! These helpers evaluate those removable singularities without cancellation
//! and keep all intermediate exponents non-positive so nothing overflows.

/// (1 - e^{-y}) / y, continuous through y = 0 where it equals 1.
pub(crate) fn expm1_kernel(y: f64) -> f64 {
    if y.abs() < 1e-6 {
        // next omitted term is y^4/120 < 1e-25
        1.0 - y / 2.0 + y * y / 6.0 - y * y * y / 24.0
    } else {
        -(-y).exp_m1() / y
    }
}

/// Integral of e^{-x s} over [0, t]: (1 - e^{-x t}) / x, with the x -> 0 limit t.
pub(crate) fn ramp(x: f64, t: f64) -> f64 {
    t * expm1_kernel(x * t)
}

/// (e^{-p t} - e^{-q t}) / (q - p), symmetric in (p, q), with the q -> p
/// limit t e^{-p t}. Overflow-free for p, q >= 0.
pub(crate) fn decay_difference(p: f64, q: f64, t: f64) -> f64 {
    let (lo, gap) = if p <= q { (p, q - p) } else { (q, p - q) };
    (-lo * t).exp() * ramp(gap, t)
}

/// e^{-a0 t} cosh(A t) evaluated as a half-sum of decaying exponentials.
/// Requires a0 >= A >= 0, which `DerivedRates` guarantees.
pub(crate) fn exp_cosh(a0: f64, a: f64, t: f64) -> f64 {
    0.5 * ((-(a0 - a) * t).exp() + (-(a0 + a) * t).exp())
}

/// e^{-a0 t} sinh(A t) / A, with the A -> 0 limit t e^{-a0 t}.
pub(crate) fn exp_sinh_over(a0: f64, a: f64, t: f64) -> f64 {
    (-(a0 - a) * t).exp() * ramp(2.0 * a, t)
}

/// Integral of s e^{-b s} over [0, t], stable for b of either sign.
pub(crate) fn linear_ramp(b: f64, t: f64) -> f64 {
    let y = b * t;
    if y.abs() < 1e-2 {
        t * t * (0.5 - y / 3.0 + y * y / 8.0 - y * y * y / 30.0 + y * y * y * y / 144.0)
    } else {
        (1.0 - (1.0 + y) * (-y).exp()) / (b * b)
    }
}

/// Integral of e^{-b s} cosh(A s) over [0, t].
pub(crate) fn exp_cosh_integral(b: f64, a: f64, t: f64) -> f64 {
    0.5 * (ramp(b - a, t) + ramp(b + a, t))
}

/// Integral of e^{-b s} sinh(A s)/A over [0, t], with the A -> 0 limit
/// given by `linear_ramp`. The dropped A^2 correction in the series branch
/// is below (A t)^2/6 < 2e-13 in relative terms.
pub(crate) fn exp_sinh_integral(b: f64, a: f64, t: f64) -> f64 {
    if (a * t).abs() < 1e-6 {
        linear_ramp(b, t)
    } else {
        (ramp(b - a, t) - ramp(b + a, t)) / (2.0 * a)
    }
}

/// e^{-p t} * exp_cosh_integral(b, A, t) without forming overflowing factors.
/// Stable for p >= 0 and p + b >= A (all exponents stay non-positive).
pub(crate) fn weighted_exp_cosh_integral(p: f64, b: f64, a: f64, t: f64) -> f64 {
    0.5 * (decay_difference(p, p + b - a, t) + decay_difference(p, p + b + a, t))
}

/// e^{-p t} * exp_sinh_integral(b, A, t), same stability domain.
pub(crate) fn weighted_exp_sinh_integral(p: f64, b: f64, a: f64, t: f64) -> f64 {
    if (a * t).abs() < 1e-6 {
        weighted_linear_ramp(p, b, t)
    } else {
        (decay_difference(p, p + b - a, t) - decay_difference(p, p + b + a, t)) / (2.0 * a)
    }
}

/// e^{-p t} * linear_ramp(b, t), stable when p >= 0 and p + b >= 0.
pub(crate) fn weighted_linear_ramp(p: f64, b: f64, t: f64) -> f64 {
    let y = b * t;
    if y.abs() < 1e-2 {
        (-p * t).exp()
            * t
            * t
            * (0.5 - y / 3.0 + y * y / 8.0 - y * y * y / 30.0 + y * y * y * y / 144.0)
    } else {
        ((-p * t).exp() - (1.0 + y) * (-(p + b) * t).exp()) / (b * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson quadrature, used only as an independent reference.
    #[allow(clippy::too_many_arguments)]
    fn simpson<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1)
                + simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1)
        }
    }

    fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
        let m = 0.5 * (a + b);
        simpson(&f, a, b, f(a), f(m), f(b), 1e-13, 40)
    }

    #[test]
    fn expm1_kernel_limits_and_branch_boundary() {
        assert_eq!(expm1_kernel(0.0), 1.0);
        for &y in &[1e-7f64, 9.9e-7, 1.01e-6, 1e-3, 0.5, 3.0, -0.5, -1e-7] {
            let reference = -(-y).exp_m1() / y;
            assert!((expm1_kernel(y) - reference).abs() < 1e-14 * reference.abs().max(1.0));
        }
    }

    #[test]
    fn ramp_has_t_limit_at_zero_rate() {
        assert_eq!(ramp(0.0, 2.5), 2.5);
        assert!((ramp(1e-12, 2.5) - 2.5).abs() < 1e-9);
        assert!((ramp(3.0, 2.0) - (1.0 - (-6.0f64).exp()) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn decay_difference_is_symmetric_with_confluent_limit() {
        let v = decay_difference(1.0, 4.0, 0.7);
        let w = decay_difference(4.0, 1.0, 0.7);
        assert_eq!(v, w);
        let direct = ((-0.7f64).exp() - (-2.8f64).exp()) / 3.0;
        assert!((v - direct).abs() < 1e-15);
        let conf = decay_difference(2.0, 2.0, 0.7);
        assert!((conf - 0.7 * (-1.4f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn integral_kernels_match_quadrature() {
        let cases = [
            (0.0, 0.0, 1.0),
            (3.0, 1.0, 2.0),
            (5.0, 5.0, 0.6),
            (-1.5, 0.5, 1.2),
            (2.0, 0.0, 4.0),
            (0.7, 0.69, 3.0),
        ];
        for &(b, a, t) in &cases {
            let ic = quad(|s| (-b * s).exp() * (a * s).cosh(), 0.0, t);
            let is = if a == 0.0 {
                quad(|s| s * (-b * s).exp(), 0.0, t)
            } else {
                quad(|s| (-b * s).exp() * (a * s).sinh() / a, 0.0, t)
            };
            assert!(
                (exp_cosh_integral(b, a, t) - ic).abs() < 1e-10 * ic.abs().max(1.0),
                "cosh integral b={b} a={a} t={t}"
            );
            assert!(
                (exp_sinh_integral(b, a, t) - is).abs() < 1e-10 * is.abs().max(1.0),
                "sinh integral b={b} a={a} t={t}"
            );
        }
    }

    #[test]
    fn series_and_generic_branches_agree_near_threshold() {
        // straddle the A*t < 1e-6 switch
        let b = 1.7;
        let t = 1.0;
        let below = exp_sinh_integral(b, 0.9e-6, t);
        let above = exp_sinh_integral(b, 1.1e-6, t);
        assert!((below - above).abs() < 1e-9);
        let wbelow = weighted_exp_sinh_integral(0.8, b, 0.9e-6, t);
        let wabove = weighted_exp_sinh_integral(0.8, b, 1.1e-6, t);
        assert!((wbelow - wabove).abs() < 1e-9);
    }

    #[test]
    fn weighted_kernels_equal_plain_product_where_finite() {
        for &(p, b, a, t) in &[
            (2.0f64, 1.0, 0.5, 1.5),
            (0.5, -0.3, 0.1, 2.0),
            (3.0, -1.0, 0.0, 0.8),
        ] {
            let plain = (-p * t).exp() * exp_cosh_integral(b, a, t);
            assert!((weighted_exp_cosh_integral(p, b, a, t) - plain).abs() < 1e-13);
            let plain_s = (-p * t).exp() * exp_sinh_integral(b, a, t);
            assert!((weighted_exp_sinh_integral(p, b, a, t) - plain_s).abs() < 1e-13);
        }
    }

    #[test]
    fn weighted_kernels_survive_large_negative_shift() {
        // e^{-p t} * (growing integral) stays bounded; the naive product overflows
        let p = 80.0;
        let b = -78.0; // p + b = 2
        let t = 20.0;
        let v = weighted_exp_sinh_integral(p, b, 0.0, t);
        assert!(v.is_finite() && v > 0.0);
        let vc = weighted_exp_cosh_integral(p, b, 1.0, t);
        assert!(vc.is_finite() && vc > 0.0);
    }

    #[test]
    fn exp_cosh_sinh_match_naive_forms() {
        let cases: [(f64, f64, f64); 3] = [(2.0, 0.5, 1.0), (6.0, 4.0, 0.3), (1.0, 1.0, 2.0)];
        for (a0, a, t) in cases {
            let naive_c = (-a0 * t).exp() * (a * t).cosh();
            let naive_s = (-a0 * t).exp() * (a * t).sinh() / a;
            assert!((exp_cosh(a0, a, t) - naive_c).abs() < 1e-12 * naive_c.max(1.0));
            assert!((exp_sinh_over(a0, a, t) - naive_s).abs() < 1e-12 * naive_s.max(1.0));
        }
        // A = 0 limit
        assert!((exp_sinh_over(2.0, 0.0, 1.5) - 1.5 * (-3.0f64).exp()).abs() < 1e-15);
    }
}
