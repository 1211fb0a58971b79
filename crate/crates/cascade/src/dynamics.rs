//! Closed-form single-time solutions of the cascade master equation.
//!
//! With populations (rho_ii, rho_aa, rho_bb, rho_jj), exciton coherence
//! rho_ab and a constant pump R into the upper level, the solutions are
//!
//! ```text
//! p_i(t)      = e^{-2 gamma t} p_i(0),          p_i = rho_ii - R / 2 gamma
//! rho_ab(t)   = e^{-(a0 - i delta) t} rho_ab(0)
//! rho_aa(t)   = f1 rho_aa(0) + f2 rho_bb(0) + (R/2 gamma) C(t) + p_i(0) e^{-2 gamma t} D(t)
//! rho_bb(t)   = w1 rho_aa(0) + w2 rho_bb(0) + (R/2 gamma) F(t) + p_i(0) e^{-2 gamma t} K(t)
//! ```
//!
//! where f1, f2, w1, w2 are the exciton-block propagator entries (shared with
//! the correlation kernels) and C, D, F, K are the feeding coefficients. The
//! ground population follows from trace bookkeeping: the trace grows exactly
//! as R t. All removable singularities (A -> 0, resonant denominators
//! a0 +- A - 2 gamma -> 0) are evaluated through the stable kernels in
//! [`crate::numeric`].

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::numeric::{
    exp_cosh, exp_cosh_integral, exp_sinh_integral, exp_sinh_over, weighted_exp_cosh_integral,
    weighted_exp_sinh_integral,
};
use crate::rates::RateParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("{field} must be finite")]
    NonFinite { field: &'static str },
    #[error("population {field} = {value} is below the -1e-12 floor")]
    NegativePopulation { field: &'static str, value: f64 },
    #[error(
        "coherence too large: |rho_ab|^2 = {coh_sq} exceeds rho_aa * rho_bb = {pop_product} + 1e-9"
    )]
    CoherenceBound { coh_sq: f64, pop_product: f64 },
    #[error("time must be non-negative")]
    NegativeTime,
}

/// Populations and exciton coherence of the cascade at one instant.
///
/// `rho_ab` is the exciton coherence in the convention where it evolves as
/// e^{-(a0 - i delta) t} rho_ab(0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeState {
    pub rho_ii: f64,
    pub rho_aa: f64,
    pub rho_bb: f64,
    pub rho_jj: f64,
    pub rho_ab: C64,
    pub time: f64,
}

impl CascadeState {
    pub fn new(
        rho_ii: f64,
        rho_aa: f64,
        rho_bb: f64,
        rho_jj: f64,
        rho_ab: C64,
        time: f64,
    ) -> Result<Self, StateError> {
        let state = Self {
            rho_ii,
            rho_aa,
            rho_bb,
            rho_jj,
            rho_ab,
            time,
        };
        state.validate()?;
        Ok(state)
    }

    /// The cascade initial condition: all population in the upper level at t = 0.
    pub fn initial_biexciton() -> Self {
        Self {
            rho_ii: 1.0,
            rho_aa: 0.0,
            rho_bb: 0.0,
            rho_jj: 0.0,
            rho_ab: C64::new(0.0, 0.0),
            time: 0.0,
        }
    }

    pub fn trace(&self) -> f64 {
        self.rho_ii + self.rho_aa + self.rho_bb + self.rho_jj
    }

    pub fn validate(&self) -> Result<(), StateError> {
        let populations = [
            ("rho_ii", self.rho_ii),
            ("rho_aa", self.rho_aa),
            ("rho_bb", self.rho_bb),
            ("rho_jj", self.rho_jj),
        ];
        for (field, value) in populations {
            if !value.is_finite() {
                return Err(StateError::NonFinite { field });
            }
            if value < -1e-12 {
                return Err(StateError::NegativePopulation { field, value });
            }
        }
        if !self.rho_ab.re.is_finite() || !self.rho_ab.im.is_finite() {
            return Err(StateError::NonFinite { field: "rho_ab" });
        }
        if !self.time.is_finite() || self.time < 0.0 {
            return Err(StateError::NegativeTime);
        }
        let coh_sq = self.rho_ab.norm_sqr();
        let pop_product = self.rho_aa.max(0.0) * self.rho_bb.max(0.0);
        if coh_sq > pop_product + 1e-9 {
            return Err(StateError::CoherenceBound {
                coh_sq,
                pop_product,
            });
        }
        Ok(())
    }
}

/// Exciton-block propagator entries over an interval t. These are exactly the
/// correlation kernels f1, f2, w1, w2 evaluated at delay t.
pub(crate) fn exciton_propagator(params: &RateParams, t: f64) -> (f64, f64, f64, f64) {
    let d = params.derived();
    let ec = exp_cosh(d.a0, d.a_mix, t);
    let es = exp_sinh_over(d.a0, d.a_mix, t);
    let f1 = ec + d.gamma_a * es;
    let f2 = 2.0 * params.gamma_ab() * es;
    let w1 = 2.0 * params.gamma_ba() * es;
    let w2 = ec - d.gamma_a * es;
    (f1, f2, w1, w2)
}

/// Coefficient weights of the two feeding quadratures: rho_aa collects
/// gamma1 * cosh and (gamma1 Gamma_a + 2 gamma3 gamma_ab) * sinh/A terms,
/// rho_bb the mirror combination.
fn feeding_weights(params: &RateParams) -> (f64, f64, f64, f64) {
    let d = params.derived();
    let alpha_cosh = 2.0 * params.gamma1();
    let alpha_sinh =
        2.0 * (params.gamma1() * d.gamma_a + 2.0 * params.gamma3() * params.gamma_ab());
    let beta_cosh = 2.0 * params.gamma3();
    let beta_sinh = 2.0 * (2.0 * params.gamma1() * params.gamma_ba() - params.gamma3() * d.gamma_a);
    (alpha_cosh, alpha_sinh, beta_cosh, beta_sinh)
}

/// Pump feeding coefficient C(t) for rho_aa.
pub fn coefficient_c(params: &RateParams, t: f64) -> f64 {
    let d = params.derived();
    let (ac, as_, _, _) = feeding_weights(params);
    ac * exp_cosh_integral(d.a0, d.a_mix, t) + as_ * exp_sinh_integral(d.a0, d.a_mix, t)
}

/// Initial-population feeding coefficient D(t) for rho_aa; enters the solution
/// as p_i(0) e^{-2 gamma t} D(t).
pub fn coefficient_d(params: &RateParams, t: f64) -> f64 {
    let d = params.derived();
    let b = d.a0 - 2.0 * d.gamma;
    let (ac, as_, _, _) = feeding_weights(params);
    ac * exp_cosh_integral(b, d.a_mix, t) + as_ * exp_sinh_integral(b, d.a_mix, t)
}

/// Pump feeding coefficient F(t) for rho_bb.
pub fn coefficient_f(params: &RateParams, t: f64) -> f64 {
    let d = params.derived();
    let (_, _, bc, bs) = feeding_weights(params);
    bc * exp_cosh_integral(d.a0, d.a_mix, t) + bs * exp_sinh_integral(d.a0, d.a_mix, t)
}

/// Initial-population feeding coefficient K(t) for rho_bb.
pub fn coefficient_k(params: &RateParams, t: f64) -> f64 {
    let d = params.derived();
    let b = d.a0 - 2.0 * d.gamma;
    let (_, _, bc, bs) = feeding_weights(params);
    bc * exp_cosh_integral(b, d.a_mix, t) + bs * exp_sinh_integral(b, d.a_mix, t)
}

/// Advance a state by t using the closed-form solutions.
///
/// The solutions are time-homogeneous, so composing two evolutions equals one
/// evolution over the summed interval. The products e^{-2 gamma t} D(t) and
/// e^{-2 gamma t} K(t) are evaluated jointly so no intermediate overflows even
/// when the bare coefficients would.
pub fn evolve_analytic(initial: &CascadeState, params: &RateParams, t: f64) -> CascadeState {
    assert!(t >= 0.0, "evolution time must be non-negative");
    let d = params.derived();
    let two_gamma = 2.0 * d.gamma;
    let pump_level = params.pump_rate() / two_gamma;
    let pi0 = initial.rho_ii - pump_level;
    let upper_decay = (-two_gamma * t).exp();
    let rho_ii = pump_level + pi0 * upper_decay;

    let (f1, f2, w1, w2) = exciton_propagator(params, t);
    let (ac, as_, bc, bs) = feeding_weights(params);
    let b = d.a0 - two_gamma;
    let wc = weighted_exp_cosh_integral(two_gamma, b, d.a_mix, t);
    let ws = weighted_exp_sinh_integral(two_gamma, b, d.a_mix, t);

    let mut rho_aa = f1 * initial.rho_aa + f2 * initial.rho_bb + pi0 * (ac * wc + as_ * ws);
    let mut rho_bb = w1 * initial.rho_aa + w2 * initial.rho_bb + pi0 * (bc * wc + bs * ws);
    if params.pump_rate() > 0.0 {
        rho_aa += pump_level * coefficient_c(params, t);
        rho_bb += pump_level * coefficient_f(params, t);
    }

    let u = C64::from_polar((-d.a0 * t).exp(), params.delta() * t);
    let rho_ab = u * initial.rho_ab;

    let trace = initial.trace() + params.pump_rate() * t;
    let rho_jj = trace - rho_ii - rho_aa - rho_bb;

    CascadeState {
        rho_ii,
        rho_aa,
        rho_bb,
        rho_jj,
        rho_ab,
        time: initial.time + t,
    }
}
