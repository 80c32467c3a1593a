//! Time evolution under the Liouvillian and its stationary state.

use alloc::vec::Vec;

use crate::linalg::{kron, trace_norm, unvectorize, vectorize, CMatrix, Operator, Superoperator};
use crate::model::{bath_beta, gibbs_state, hamiltonian_ancilla, hamiltonian_system, liouvillian_matrix};
use crate::ode::{integrate, Tolerances};
use crate::{math, DensityMatrix, Error, ModelParams, Result, Subsystem, C64};

/// Smallest eigenvalue tolerated in integrated snapshots.
pub const TRAJECTORY_PSD_TOL: f64 = 1e-8;
/// Relative singular-value threshold defining the null space of `L`.
pub const NULL_SPACE_RTOL: f64 = 1e-10;

/// Output times, starting at zero and strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid(Vec<f64>);

impl TimeGrid {
    /// `n_steps + 1` equally spaced points on `[0, t_max]`.
    pub fn uniform(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidGrid("t_max must be positive and finite"));
        }
        if n_steps == 0 {
            return Err(Error::InvalidGrid("at least one step is required"));
        }
        let dt = t_max / n_steps as f64;
        let mut times: Vec<f64> = (0..=n_steps).map(|i| i as f64 * dt).collect();
        times[n_steps] = t_max;
        Ok(Self(times))
    }

    /// Step `dt_fine` on `[0, t_fine]`, then step `dt_coarse` up to `t_max`.
    pub fn refined(t_fine: f64, dt_fine: f64, t_max: f64, dt_coarse: f64) -> Result<Self> {
        if !(dt_fine > 0.0 && dt_coarse >= dt_fine && t_fine > 0.0 && t_max > t_fine) {
            return Err(Error::InvalidGrid("need 0 < dt_fine <= dt_coarse and 0 < t_fine < t_max"));
        }
        let n_fine = libm::ceil(t_fine / dt_fine) as usize;
        let n_coarse = libm::ceil((t_max - t_fine) / dt_coarse) as usize;
        let h_fine = t_fine / n_fine as f64;
        let h_coarse = (t_max - t_fine) / n_coarse as f64;
        let mut times: Vec<f64> = (0..=n_fine).map(|i| i as f64 * h_fine).collect();
        times.extend((1..=n_coarse).map(|i| t_fine + i as f64 * h_coarse));
        times[n_fine + n_coarse] = t_max;
        Ok(Self(times))
    }

    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        if times.first() != Some(&0.0) {
            return Err(Error::InvalidGrid("grid must start at t = 0"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("times must be finite and strictly increasing"));
        }
        Ok(Self(times))
    }

    pub fn times(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

/// Joint states sampled on a time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Reduced states of one subsystem at every time.
    pub fn reduced(&self, keep: Subsystem) -> Vec<DensityMatrix> {
        self.states.iter().map(|r| r.reduced(keep)).collect()
    }

    pub fn last(&self) -> &DensityMatrix {
        &self.states[self.states.len() - 1]
    }
}

/// Stationary state of the Liouvillian.
#[derive(Clone, Debug)]
pub struct SteadyState {
    pub state: DensityMatrix,
    /// Number of singular values below `NULL_SPACE_RTOL · σ_max`.
    pub null_dim: usize,
    /// `max |L(ρ∞)|` entrywise.
    pub residual: f64,
}

impl SteadyState {
    pub fn is_unique(&self) -> bool {
        self.null_dim == 1
    }
}

/// Integrates `dρ/dt = L(ρ)` with the default tolerances.
pub fn evolve(p: &ModelParams, rho0: &DensityMatrix, grid: &TimeGrid) -> Result<Trajectory> {
    evolve_with(&liouvillian_matrix(p), rho0, grid, &Tolerances::default())
}

/// Integrates `dρ/dt = M(ρ)` for an arbitrary time-independent generator.
pub fn evolve_with(
    generator: &Superoperator,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    tol: &Tolerances,
) -> Result<Trajectory> {
    if generator.hilbert_dim() != rho0.dim() {
        return Err(Error::Dimension {
            expected: generator.hilbert_dim(),
            found: rho0.dim(),
        });
    }
    let m = generator.matrix();
    let n = m.nrows();
    let y0 = vectorize(rho0);
    let rhs = |_t: f64, y: &[C64], dy: &mut [C64]| matvec(m, n, y, dy);
    let raw = integrate(rhs, y0.as_slice(), grid.times(), tol)?;
    let mut states = Vec::with_capacity(raw.len());
    for y in raw {
        let op = unvectorize(&nalgebra::DVector::from_vec(y)).hermitian_part();
        states.push(DensityMatrix::with_psd_tolerance(op, TRAJECTORY_PSD_TOL)?);
    }
    Ok(Trajectory {
        times: grid.times().to_vec(),
        states,
    })
}

fn matvec(m: &CMatrix, n: usize, y: &[C64], dy: &mut [C64]) {
    let data = m.as_slice();
    dy.iter_mut().for_each(|d| *d = C64::new(0.0, 0.0));
    for (j, &yj) in y.iter().enumerate() {
        if yj == C64::new(0.0, 0.0) {
            continue;
        }
        let col = &data[j * n..(j + 1) * n];
        for (d, &a) in dy.iter_mut().zip(col) {
            *d += a * yj;
        }
    }
}

/// Null space of the Liouvillian by singular-value decomposition.
///
/// The returned state is the projection of the identity onto the null
/// space, Hermitised and normalised. It is the unique stationary state when
/// `null_dim == 1`; otherwise callers must decide how to use it.
pub fn steady_state(p: &ModelParams) -> Result<SteadyState> {
    steady_state_of(&liouvillian_matrix(p))
}

pub fn steady_state_of(generator: &Superoperator) -> Result<SteadyState> {
    let d = generator.hilbert_dim();
    let svd = generator.matrix().clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sv = &svd.singular_values;
    let s_max = sv.iter().cloned().fold(0.0, f64::max);
    let null: Vec<usize> = (0..sv.len())
        .filter(|&k| sv[k] < NULL_SPACE_RTOL * s_max)
        .collect();
    if null.is_empty() {
        let s_min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        return Err(Error::EmptyNullSpace(s_min / s_max));
    }

    // project vec(𝟙) onto span{v_k}, where v_k are conjugated rows of V^T
    let id = vectorize(&Operator::identity(d));
    let mut acc = nalgebra::DVector::<C64>::zeros(d * d);
    for &k in &null {
        let v = v_t.row(k).adjoint();
        let coeff = v.dotc(&id);
        acc += v * coeff;
    }
    let op = unvectorize(&acc);
    let state = DensityMatrix::from_hermitized(&op, TRAJECTORY_PSD_TOL)?;
    let residual = generator.apply(&state).max_abs();
    Ok(SteadyState {
        state,
        null_dim: null.len(),
        residual,
    })
}

/// `Gibbs(H_S, β) ⊗ Gibbs(H_A, β̃)` with `β̃ = β ω_S / ω_A`, the stationary
/// state when `J_x = J_y`.
pub fn product_steady_state(p: &ModelParams) -> Result<DensityMatrix> {
    let gap = math::abs(p.j_x - p.j_y);
    if gap > 1e-12 {
        return Err(Error::NotExcitationPreserving(gap));
    }
    if p.omega_a == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let beta = bath_beta(p)?;
    let beta_a = beta * p.omega_s / p.omega_a;
    let s = gibbs_state(&hamiltonian_system(p), beta)?;
    let a = gibbs_state(&hamiltonian_ancilla(p), beta_a)?;
    Ok(DensityMatrix::new_unchecked(kron(&s, &a)))
}

/// Trace norm `‖ρ − σ‖₁`.
pub fn trace_norm_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    trace_norm(&(rho.as_operator() - sigma.as_operator())).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::apply_lindbladian;

    fn fig_params() -> ModelParams {
        ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 10.0, 1.0).unwrap()
    }

    #[test]
    fn grids() {
        let g = TimeGrid::uniform(2.0, 4).unwrap();
        assert_eq!(g.times(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
        let r = TimeGrid::refined(0.01, 1e-3, 1.0, 0.1).unwrap();
        assert_eq!(r.times()[0], 0.0);
        assert!((r.times()[10] - 0.01).abs() < 1e-15);
        assert_eq!(r.t_max(), 1.0);
        assert!(TimeGrid::from_times(alloc::vec![0.1, 0.2]).is_err());
        assert!(TimeGrid::uniform(-1.0, 3).is_err());
    }

    #[test]
    fn uncoupled_thermal_state_is_stationary() {
        let p = fig_params().uncoupled();
        let beta = bath_beta(&p).unwrap();
        let s = gibbs_state(&hamiltonian_system(&p), beta).unwrap();
        let a = DensityMatrix::from_bloch(0.0, 0.0, 0.4).unwrap();
        let rho0 = DensityMatrix::product(&s, &a);
        let traj = evolve(&p, &rho0, &TimeGrid::uniform(5.0, 10).unwrap()).unwrap();
        for st in &traj.states {
            assert!((st.as_operator() - rho0.as_operator()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn first_step_matches_generator() {
        let p = fig_params();
        let rho0 = DensityMatrix::product(&DensityMatrix::excited(), &DensityMatrix::plus());
        let delta = 1e-6;
        let traj = evolve(&p, &rho0, &TimeGrid::uniform(delta, 1).unwrap()).unwrap();
        let fd = &(traj.states[1].as_operator() - rho0.as_operator()) * (1.0 / delta);
        let exact = apply_lindbladian(&p, &rho0);
        assert!((&fd - &exact).max_abs() < 1e-3);
    }

    #[test]
    fn steady_state_is_product_gibbs() {
        let ss = steady_state(&fig_params()).unwrap();
        assert_eq!(ss.null_dim, 1);
        assert!(ss.residual < 1e-10);
        let g = Operator::from_real_diagonal(&[10.0 / 11.0, 1.0 / 11.0]).unwrap();
        let expected = kron(&g, &g);
        assert!((ss.state.as_operator() - &expected).max_abs() < 1e-8);
        let prod = product_steady_state(&fig_params()).unwrap();
        assert!((prod.as_operator() - &expected).max_abs() < 1e-14);
    }

    #[test]
    fn uncoupled_steady_state_is_degenerate() {
        let p = fig_params().uncoupled();
        let ss = steady_state(&p).unwrap();
        assert!(ss.null_dim > 1);
        let s = ss.state.reduced(Subsystem::S);
        assert!((s.get(1, 1).re - 1.0 / 11.0).abs() < 1e-10);
    }

    #[test]
    fn generic_steady_state_is_x_form_and_jz_free() {
        let base = ModelParams::new(1.0, 1.3, 0.4, 1.0, 0.0, 10.0, 1.0).unwrap();
        let a = steady_state(&base).unwrap();
        let b = steady_state(&ModelParams { j_z: 0.9, ..base }).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert!(a.state.get(i, j).norm() < 1e-10);
        }
        assert!((a.state.as_operator() - b.state.as_operator()).max_abs() < 1e-10);
    }

    #[test]
    fn detuned_ancilla_temperature() {
        let p = ModelParams::new(1.0, 2.0, 0.5, 0.5, 0.0, 10.0, 1.0).unwrap();
        let prod = product_steady_state(&p).unwrap();
        let a = prod.reduced(Subsystem::A);
        assert!((a.get(1, 1).re / a.get(0, 0).re - 0.1).abs() < 1e-13);
        let ss = steady_state(&p).unwrap();
        assert!((ss.state.as_operator() - prod.as_operator()).max_abs() < 1e-8);
        let bad = ModelParams { j_y: 0.7, ..p };
        assert!(matches!(product_steady_state(&bad), Err(Error::NotExcitationPreserving(_))));
    }
}
