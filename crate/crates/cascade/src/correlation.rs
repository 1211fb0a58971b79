//! Two-time intensity-intensity correlations of the cascade emission and the
//! degree of polarization correlation derived from them.
//!
//! The reduced correlation is the bracket of the general two-detector
//! expression with the geometric/dipole prefactor dropped:
//!
//! ```text
//! g2(p1, p2, tau) = f1 + w1 + f2 + w2
//!   + (cos 2 theta1 + cos 2 theta2) (f1 - w2)
//!   + (cos 2 theta1 - cos 2 theta2) (w1 - f2)
//!   + cos 2 theta1 cos 2 theta2 (f1 + w2 - f2 - w1)
//!   + sin 2 theta1 sin 2 theta2 (e^{-i(phi1 + phi2)} u + c.c.)
//! ```
//!
//! with the kernels of [`kernels`]. For equal lower decays and equal dephasing
//! rates this reduces to exactly twice [`g2_symmetric`]. The degree of
//! correlation is the co-minus-cross contrast of a basis pair and is
//! independent of every prefactor.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::dynamics::exciton_propagator;
use crate::polarization::{BasisPair, PolarizerSetting};
use crate::rates::{DerivedRates, RateParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrelationError {
    #[error(
        "simplified correlation needs gamma2 = gamma4 and gamma_ab = gamma_ba \
         (got gamma2={gamma2}, gamma4={gamma4}, gamma_ab={gamma_ab}, gamma_ba={gamma_ba}); \
         use g2_general for asymmetric rates"
    )]
    AsymmetricParams {
        gamma2: f64,
        gamma4: f64,
        gamma_ab: f64,
        gamma_ba: f64,
    },
    #[error("time-averaged degree needs {field} > 0: the correlation tail is not integrable")]
    NonIntegrable { field: &'static str },
    #[error("{field} must be positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
}

/// Building blocks of the two-time correlation at delay tau: the exciton-block
/// propagator entries f1, f2, w1, w2 and the coherence kernel u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationKernel {
    pub f1: f64,
    pub f2: f64,
    pub w1: f64,
    pub w2: f64,
    pub u: C64,
    pub tau: f64,
}

/// Kernels at delay tau, with the same stable singular-limit handling as the
/// closed-form dynamics.
pub fn kernels(params: &RateParams, tau: f64) -> CorrelationKernel {
    assert!(tau >= 0.0, "delay must be non-negative");
    let (f1, f2, w1, w2) = exciton_propagator(params, tau);
    let d = params.derived();
    let u = C64::from_polar((-d.a0 * tau).exp(), params.delta() * tau);
    CorrelationKernel {
        f1,
        f2,
        w1,
        w2,
        u,
        tau,
    }
}

fn double_angles(p: &PolarizerSetting) -> (f64, f64) {
    let (s, c) = (2.0 * p.theta()).sin_cos();
    (c, s)
}

/// Reduced general correlation for arbitrary analyzer settings.
pub fn g2_general(
    params: &RateParams,
    p1: &PolarizerSetting,
    p2: &PolarizerSetting,
    tau: f64,
) -> f64 {
    let k = kernels(params, tau);
    let (c1, s1) = double_angles(p1);
    let (c2, s2) = double_angles(p2);
    let beat = 2.0 * (C64::from_polar(1.0, -(p1.phi() + p2.phi())) * k.u).re;
    (k.f1 + k.f2 + k.w1 + k.w2)
        + (c1 + c2) * (k.f1 - k.w2)
        + (c1 - c2) * (k.w1 - k.f2)
        + c1 * c2 * (k.f1 + k.w2 - k.f2 - k.w1)
        + s1 * s2 * beat
}

/// Simplified correlation for equal lower decays and equal dephasing rates
/// with linear analyzers (phi1 = phi2 = 0):
///
/// ```text
/// e^{-2 gamma2 tau}
///   + cos 2 theta1 cos 2 theta2 e^{-2(gamma2 + 2 gamma_ab) tau}
///   + sin 2 theta1 sin 2 theta2 e^{-2(gamma2 + gamma_ab) tau} cos(delta tau)
/// ```
///
/// Exactly half of [`g2_general`] at the same settings.
pub fn g2_symmetric(
    params: &RateParams,
    theta1: f64,
    theta2: f64,
    tau: f64,
) -> Result<f64, CorrelationError> {
    assert!(tau >= 0.0, "delay must be non-negative");
    if !params.is_symmetric() {
        return Err(CorrelationError::AsymmetricParams {
            gamma2: params.gamma2(),
            gamma4: params.gamma4(),
            gamma_ab: params.gamma_ab(),
            gamma_ba: params.gamma_ba(),
        });
    }
    let g2r = params.gamma2();
    let gd = params.gamma_ab();
    let value = (-2.0 * g2r * tau).exp()
        + (2.0 * theta1).cos() * (2.0 * theta2).cos() * (-2.0 * (g2r + 2.0 * gd) * tau).exp()
        + (2.0 * theta1).sin()
            * (2.0 * theta2).sin()
            * (-2.0 * (g2r + gd) * tau).exp()
            * (params.delta() * tau).cos();
    Ok(value)
}

/// Degree of correlation together with the 0/0 diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationDegree {
    /// (co - cross) / (co + cross), in [-1, 1]; 0 when indeterminate.
    pub value: f64,
    /// Set when both coincidence rates vanish and the ratio is 0/0.
    pub indeterminate: bool,
}

/// Degree of correlation at delay tau in the given basis: co-polarized uses
/// the primary setting in both arms, cross-polarized swaps the second arm to
/// the orthogonal setting.
pub fn degree_of_correlation(
    params: &RateParams,
    basis: &BasisPair,
    tau: f64,
) -> CorrelationDegree {
    let primary = basis.primary();
    let co = g2_general(params, &primary, &primary, tau);
    let cross = g2_general(params, &primary, &basis.orthogonal(), tau);
    degree_from_rates(co, cross)
}

fn degree_from_rates(co: f64, cross: f64) -> CorrelationDegree {
    let total = co + cross;
    if total.abs() < 1e-300 {
        return CorrelationDegree {
            value: 0.0,
            indeterminate: true,
        };
    }
    CorrelationDegree {
        value: (co - cross) / total,
        indeterminate: false,
    }
}

/// Closed-form integral of the reduced correlation over tau in [0, inf).
///
/// Requires gamma2 > 0 and gamma4 > 0 so every kernel decays (this makes
/// a0 > A, and the u-kernel integrable as well).
pub fn g2_time_integral(
    params: &RateParams,
    p1: &PolarizerSetting,
    p2: &PolarizerSetting,
) -> Result<f64, CorrelationError> {
    if params.gamma2() <= 0.0 {
        return Err(CorrelationError::NonIntegrable { field: "gamma2" });
    }
    if params.gamma4() <= 0.0 {
        return Err(CorrelationError::NonIntegrable { field: "gamma4" });
    }
    let d = params.derived();
    // a0^2 - A^2 in product form: exact and positive here
    let gap = DerivedRates::a0_sq_minus_a_sq(params);
    let int_f1 = (d.a0 + d.gamma_a) / gap;
    let int_f2 = 2.0 * params.gamma_ab() / gap;
    let int_w1 = 2.0 * params.gamma_ba() / gap;
    let int_w2 = (d.a0 - d.gamma_a) / gap;
    let phi = p1.phi() + p2.phi();
    let int_beat = 2.0 * (d.a0 * phi.cos() + params.delta() * phi.sin())
        / (d.a0 * d.a0 + params.delta() * params.delta());
    let (c1, s1) = double_angles(p1);
    let (c2, s2) = double_angles(p2);
    Ok((int_f1 + int_f2 + int_w1 + int_w2)
        + (c1 + c2) * (int_f1 - int_w2)
        + (c1 - c2) * (int_w1 - int_f2)
        + c1 * c2 * (int_f1 + int_w2 - int_f2 - int_w1)
        + s1 * s2 * int_beat)
}

/// Time-averaged degree of correlation: the contrast of tau-integrated
/// coincidence rates over [0, inf).
pub fn degree_time_averaged(
    params: &RateParams,
    basis: &BasisPair,
) -> Result<f64, CorrelationError> {
    let primary = basis.primary();
    let co = g2_time_integral(params, &primary, &primary)?;
    let cross = g2_time_integral(params, &primary, &basis.orthogonal())?;
    Ok(degree_from_rates(co, cross).value)
}

/// Fixed geometric/dipole prefactor of the unreduced correlation:
/// omega0^8 d1^2 d2^2 rho_ii(t) / (4 r^4), with c = 1 units.
///
/// The reduced correlation and every degree of correlation are independent of
/// all of these fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionPrefactor {
    omega0: f64,
    r: f64,
    d1: f64,
    d2: f64,
    rho_ii_t: f64,
}

impl EmissionPrefactor {
    pub fn new(
        omega0: f64,
        r: f64,
        d1: f64,
        d2: f64,
        rho_ii_t: f64,
    ) -> Result<Self, CorrelationError> {
        for (field, value) in [
            ("omega0", omega0),
            ("r", r),
            ("d1", d1),
            ("d2", d2),
            ("rho_ii_t", rho_ii_t),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(CorrelationError::NonPositive { field, value });
            }
        }
        Ok(Self {
            omega0,
            r,
            d1,
            d2,
            rho_ii_t,
        })
    }

    /// Scalar multiplying the reduced general correlation.
    pub fn value(&self) -> f64 {
        self.omega0.powi(8) * self.d1 * self.d1 * self.d2 * self.d2 * self.rho_ii_t
            / (4.0 * self.r.powi(4))
    }
}

/// Unreduced correlation: prefactor times the reduced bracket.
pub fn g2_general_unreduced(
    params: &RateParams,
    prefactor: &EmissionPrefactor,
    p1: &PolarizerSetting,
    p2: &PolarizerSetting,
    tau: f64,
) -> f64 {
    prefactor.value() * g2_general(params, p1, p2, tau)
}

/// A sampled correlation curve for one pair of analyzer settings.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Curve {
    samples: Vec<(f64, f64)>,
    settings_1: PolarizerSetting,
    settings_2: PolarizerSetting,
    reduced: bool,
}

impl G2Curve {
    /// Evaluate the reduced analytic correlation on a delay grid.
    pub fn from_analytic(
        params: &RateParams,
        p1: PolarizerSetting,
        p2: PolarizerSetting,
        taus: &[f64],
    ) -> Self {
        let samples = taus
            .iter()
            .map(|&tau| (tau, g2_general(params, &p1, &p2, tau)))
            .collect();
        Self {
            samples,
            settings_1: p1,
            settings_2: p2,
            reduced: true,
        }
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn settings(&self) -> (PolarizerSetting, PolarizerSetting) {
        (self.settings_1, self.settings_2)
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }
}
