//! Brute-force numerical route: the full Liouvillian as a 16x16 superoperator
//! acting on vectorized 4x4 density matrices, integrated with fixed-step RK4,
//! and two-time correlations obtained by conditioned-state evolution.
//!
//! Nothing here reuses the closed-form solutions, so agreement with
//! [`crate::dynamics`] and [`crate::correlation`] is an independent check of
//! both routes. Basis ordering is (|i>, |alpha>, |beta>, |j|); the Hamiltonian
//! puts the level splitting on |alpha> (energies 0, delta, 0, 0), which is the
//! only energy that affects any computed observable.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::dynamics::CascadeState;
use crate::polarization::PolarizerSetting;
use crate::rates::RateParams;

/// Complex 4x4 density matrix in the cascade basis.
pub type DensityMatrix = SMatrix<C64, 4, 4>;
type SuperOp = SMatrix<C64, 16, 16>;
type StateVec = SVector<C64, 16>;

/// Basis index of the upper (biexciton) level |i>.
pub const UPPER: usize = 0;
/// Basis index of the H-branch exciton |alpha>.
pub const EXCITON_A: usize = 1;
/// Basis index of the V-branch exciton |beta>.
pub const EXCITON_B: usize = 2;
/// Basis index of the ground level |j>.
pub const GROUND: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("integration step must be positive and finite, got {step}")]
    InvalidStep { step: f64 },
    #[error("integration produced non-finite values by t = {t}")]
    Diverged { t: f64 },
    #[error("delay grid must be non-negative and non-decreasing")]
    BadGrid,
}

/// vec(A rho B) = S vec(rho) with column-major vectorization.
fn sandwich(a: &DensityMatrix, b: &DensityMatrix) -> SuperOp {
    let mut s = SuperOp::zeros();
    for r in 0..4 {
        for rp in 0..4 {
            for c in 0..4 {
                for cp in 0..4 {
                    s[(c * 4 + r, cp * 4 + rp)] = a[(r, rp)] * b[(cp, c)];
                }
            }
        }
    }
    s
}

fn to_vec(m: &DensityMatrix) -> StateVec {
    let mut v = StateVec::zeros();
    for c in 0..4 {
        for r in 0..4 {
            v[c * 4 + r] = m[(r, c)];
        }
    }
    v
}

fn from_vec(v: &StateVec) -> DensityMatrix {
    let mut m = DensityMatrix::zeros();
    for c in 0..4 {
        for r in 0..4 {
            m[(r, c)] = v[c * 4 + r];
        }
    }
    m
}

/// The generator of density-matrix evolution: Hamiltonian commutator plus the
/// six damping channels (two upper-level branches, two lower decays, two
/// incoherent dephasing transfers), plus an optional constant pump into |i>.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    generator: SuperOp,
    pump: StateVec,
    rate_scale: f64,
}

impl Liouvillian {
    /// Assemble the full generator including the pump feed.
    pub fn new(params: &RateParams) -> Self {
        Self::build(params, params.pump_rate())
    }

    /// Assemble the generator with the pump forced to zero (the pulsed-excitation
    /// convention used for every correlation computation).
    pub fn without_pump(params: &RateParams) -> Self {
        Self::build(params, 0.0)
    }

    fn build(params: &RateParams, pump_rate: f64) -> Self {
        let id = DensityMatrix::identity();
        let mut hamiltonian = DensityMatrix::zeros();
        hamiltonian[(EXCITON_A, EXCITON_A)] = C64::new(params.delta(), 0.0);

        let mut generator =
            (sandwich(&hamiltonian, &id) - sandwich(&id, &hamiltonian)) * C64::new(0.0, -1.0);

        let channels: [(usize, usize, f64); 6] = [
            (EXCITON_A, UPPER, 2.0 * params.gamma1()),
            (EXCITON_B, UPPER, 2.0 * params.gamma3()),
            (GROUND, EXCITON_A, 2.0 * params.gamma2()),
            (GROUND, EXCITON_B, 2.0 * params.gamma4()),
            (EXCITON_A, EXCITON_B, 2.0 * params.gamma_ab()),
            (EXCITON_B, EXCITON_A, 2.0 * params.gamma_ba()),
        ];
        for (to, from, rate) in channels {
            if rate == 0.0 {
                continue;
            }
            let mut jump = DensityMatrix::zeros();
            jump[(to, from)] = C64::new(1.0, 0.0);
            let jump_dag = jump.adjoint();
            let weight = jump_dag * jump;
            let term = sandwich(&jump, &jump_dag)
                - (sandwich(&weight, &id) + sandwich(&id, &weight)).scale(0.5);
            generator += term.scale(rate);
        }

        let mut pump = StateVec::zeros();
        pump[UPPER * 4 + UPPER] = C64::new(pump_rate, 0.0);

        let rate_scale = [
            2.0 * params.gamma(),
            2.0 * params.gamma2(),
            2.0 * params.gamma4(),
            2.0 * params.gamma_ab(),
            2.0 * params.gamma_ba(),
            params.delta().abs(),
            pump_rate,
        ]
        .into_iter()
        .fold(f64::MIN_POSITIVE, f64::max);

        Self {
            generator,
            pump,
            rate_scale,
        }
    }

    /// The 16x16 generator matrix (no pump term).
    pub fn generator(&self) -> &SMatrix<C64, 16, 16> {
        &self.generator
    }

    /// Largest rate (or |delta|) appearing in the generator.
    pub fn rate_scale(&self) -> f64 {
        self.rate_scale
    }

    /// Full right-hand side d rho / dt for a given density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let v = self.generator * to_vec(rho) + self.pump;
        from_vec(&v)
    }

    fn rk4_step(&self, v: &StateVec, h: f64) -> StateVec {
        let k1 = self.generator * v + self.pump;
        let k2 = self.generator * (v + k1.scale(0.5 * h)) + self.pump;
        let k3 = self.generator * (v + k2.scale(0.5 * h)) + self.pump;
        let k4 = self.generator * (v + k3.scale(h)) + self.pump;
        v + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0)
    }

    /// Propagate a density matrix over an interval t with steps no larger
    /// than `step` (classic fixed-step 4th order; global error O(step^4)).
    pub fn propagate(
        &self,
        rho: &DensityMatrix,
        t: f64,
        step: f64,
    ) -> Result<DensityMatrix, OracleError> {
        Ok(self
            .propagate_grid(rho, &[t], step)?
            .pop()
            .expect("one grid point"))
    }

    /// Propagate once and capture the state at every grid time. The grid must
    /// be non-negative and non-decreasing; each target is landed on exactly.
    pub fn propagate_grid(
        &self,
        rho: &DensityMatrix,
        times: &[f64],
        step: f64,
    ) -> Result<Vec<DensityMatrix>, OracleError> {
        if !step.is_finite() || step <= 0.0 {
            return Err(OracleError::InvalidStep { step });
        }
        let mut out = Vec::with_capacity(times.len());
        let mut v = to_vec(rho);
        let mut now = 0.0;
        for &target in times {
            if !target.is_finite() || target < 0.0 || target < now {
                return Err(OracleError::BadGrid);
            }
            let span = target - now;
            if span > 0.0 {
                let n = (span / step).ceil().max(1.0) as u64;
                let h = span / n as f64;
                for _ in 0..n {
                    v = self.rk4_step(&v, h);
                }
                now = target;
            }
            if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(OracleError::Diverged { t: now });
            }
            out.push(from_vec(&v));
        }
        Ok(out)
    }
}

/// Default integration step: 1e-3 in units of the inverse largest rate.
pub fn default_step(params: &RateParams) -> f64 {
    1e-3 / Liouvillian::new(params).rate_scale()
}

fn state_to_matrix(state: &CascadeState) -> DensityMatrix {
    let mut m = DensityMatrix::zeros();
    m[(UPPER, UPPER)] = C64::new(state.rho_ii, 0.0);
    m[(EXCITON_A, EXCITON_A)] = C64::new(state.rho_aa, 0.0);
    m[(EXCITON_B, EXCITON_B)] = C64::new(state.rho_bb, 0.0);
    m[(GROUND, GROUND)] = C64::new(state.rho_jj, 0.0);
    // rho_ab evolves as e^{-(a0 - i delta) t}; with the splitting on |alpha>
    // that is the (beta, alpha) matrix element
    m[(EXCITON_B, EXCITON_A)] = state.rho_ab;
    m[(EXCITON_A, EXCITON_B)] = state.rho_ab.conj();
    m
}

fn matrix_to_state(m: &DensityMatrix, time: f64) -> CascadeState {
    CascadeState {
        rho_ii: m[(UPPER, UPPER)].re,
        rho_aa: m[(EXCITON_A, EXCITON_A)].re,
        rho_bb: m[(EXCITON_B, EXCITON_B)].re,
        rho_jj: m[(GROUND, GROUND)].re,
        rho_ab: m[(EXCITON_B, EXCITON_A)],
        time,
    }
}

/// Integrate the master equation numerically from an arbitrary state.
pub fn integrate(
    initial: &CascadeState,
    params: &RateParams,
    t: f64,
    step: f64,
) -> Result<CascadeState, OracleError> {
    let generator = Liouvillian::new(params);
    let rho = generator.propagate(&state_to_matrix(initial), t, step)?;
    Ok(matrix_to_state(&rho, initial.time + t))
}

/// Integrate once and capture the state at every grid time (relative to the
/// initial state's clock).
pub fn integrate_grid(
    initial: &CascadeState,
    params: &RateParams,
    times: &[f64],
    step: f64,
) -> Result<Vec<CascadeState>, OracleError> {
    let generator = Liouvillian::new(params);
    let matrices = generator.propagate_grid(&state_to_matrix(initial), times, step)?;
    Ok(times
        .iter()
        .zip(matrices)
        .map(|(&t, m)| matrix_to_state(&m, initial.time + t))
        .collect())
}

/// Detection operators for the two cascade photons at given analyzer settings:
/// the first photon lowers |i> into the exciton doublet, the second lowers the
/// doublet into the ground state (unit dipole magnitudes).
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOperator {
    pub first_photon: DensityMatrix,
    pub second_photon: DensityMatrix,
}

impl CollapseOperator {
    pub fn new(p1: &PolarizerSetting, p2: &PolarizerSetting) -> Self {
        let (h1, v1) = p1.jones_vector();
        let (h2, v2) = p2.jones_vector();
        let mut first_photon = DensityMatrix::zeros();
        first_photon[(EXCITON_A, UPPER)] = h1;
        first_photon[(EXCITON_B, UPPER)] = v1;
        let mut second_photon = DensityMatrix::zeros();
        second_photon[(GROUND, EXCITON_A)] = h2;
        second_photon[(GROUND, EXCITON_B)] = v2;
        Self {
            first_photon,
            second_photon,
        }
    }
}

/// Conditioned-evolution correlation on a delay grid, in one integration pass.
///
/// Starting from rho = |i><i|, the first-photon collapse gives
/// sigma(0) = Pi1 rho Pi1^dagger; sigma is evolved for the delay under the
/// full (pump-free) generator and the second photon is read out as
/// Tr[Pi2^dagger Pi2 sigma(tau)]. The overall factor 4 aligns the result with
/// the reduced analytic correlation, fixed once by the co-polarized
/// rectilinear zero-delay value.
pub fn g2_conditioned_grid(
    params: &RateParams,
    p1: &PolarizerSetting,
    p2: &PolarizerSetting,
    taus: &[f64],
    step: f64,
) -> Result<Vec<f64>, OracleError> {
    let generator = Liouvillian::without_pump(params);
    let ops = CollapseOperator::new(p1, p2);

    let mut upper = DensityMatrix::zeros();
    upper[(UPPER, UPPER)] = C64::new(1.0, 0.0);
    let conditioned = ops.first_photon * upper * ops.first_photon.adjoint();

    let measure = ops.second_photon.adjoint() * ops.second_photon;
    let states = generator.propagate_grid(&conditioned, taus, step)?;
    Ok(states
        .iter()
        .map(|sigma| 4.0 * (measure * sigma).trace().re)
        .collect())
}

/// Single-delay conditioned correlation with the default step.
pub fn g2_conditioned(
    params: &RateParams,
    p1: &PolarizerSetting,
    p2: &PolarizerSetting,
    tau: f64,
) -> Result<f64, OracleError> {
    Ok(
        g2_conditioned_grid(params, p1, p2, &[tau], default_step(params))?
            .pop()
            .expect("one grid point"),
    )
}

/// Smallest eigenvalue of a (Hermitian) density matrix; used for positivity checks.
pub fn min_eigenvalue(m: &DensityMatrix) -> f64 {
    m.symmetric_eigen().eigenvalues.min()
}
