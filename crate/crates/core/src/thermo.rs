//! Entropy production and entropy production rates.
//!
//! For a reference state `w` the entropy production rate of a trajectory is
//! `σ(t) = −d/dt S(ρ(t)‖w)`. Since `Tr ρ̇ = 0` this equals
//! `Tr[ρ̇ (ln w − ln ρ)]`, which is the Spohn form when `ρ̇ = L(ρ)` and
//! `L(w) = 0`.

use alloc::vec::Vec;

use crate::dynamics::Trajectory;
use crate::linalg::{matrix_log, pauli, relative_entropy, von_neumann_entropy, Operator, Pauli, SUPPORT_TOL};
use crate::model::apply_lindbladian;
use crate::{correlations, math, DensityMatrix, Error, ModelParams, Result, Subsystem};

/// Largest imaginary part tolerated in a trace that must be real.
pub const IMAG_TOL: f64 = 1e-10;
/// Fraction of the series scale above which a finite-difference rate is flagged.
pub const TRUNCATION_RTOL: f64 = 1e-4;

/// `S(ρ₀‖w) − S(ρ_t‖w)`.
///
/// Infinite relative entropies propagate: `+∞` when only `ρ₀` leaves the
/// support of `w`, `−∞` when only `ρ_t` does, and NaN when both do.
pub fn entropy_production(rho_t: &DensityMatrix, rho_0: &DensityMatrix, reference: &DensityMatrix) -> Result<f64> {
    Ok(relative_entropy(rho_0, reference)? - relative_entropy(rho_t, reference)?)
}

/// `ΔS − β ΔQ` with `Q = Tr ρ ω_S σ_z`.
pub fn clausius_entropy_production(rho_t: &DensityMatrix, rho_0: &DensityMatrix, omega_s: f64, beta: f64) -> f64 {
    let ds = von_neumann_entropy(rho_t) - von_neumann_entropy(rho_0);
    let dq = heat(rho_t, omega_s) - heat(rho_0, omega_s);
    ds - beta * dq
}

/// `Tr[ρ ω_S σ_z]`.
pub fn heat(rho_s: &DensityMatrix, omega_s: f64) -> f64 {
    rho_s.trace_product(&pauli(Pauli::Z)).re * omega_s
}

/// An entropy production rate with a marker for clamp-dominated logarithms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpohnRate {
    pub value: f64,
    /// `ρ` has an eigenvalue at or below the support tolerance, so `ln ρ`
    /// was evaluated through the eigenvalue clamp.
    pub near_singular: bool,
}

/// `−d/dt S(ρ‖w) = Tr[ρ̇ (ln w − ln ρ)]` given `ρ̇`.
pub fn relative_entropy_rate(rho: &Operator, rho_dot: &Operator, reference: &Operator) -> Result<SpohnRate> {
    let diff = &matrix_log(reference) - &matrix_log(rho);
    let tr = rho_dot.trace_product(&diff);
    let scale = rho_dot.max_abs() * diff.max_abs();
    if math::abs(tr.im) > IMAG_TOL * scale.max(1.0) {
        return Err(Error::ComplexRate(tr.im));
    }
    let min = rho.eigenvalues_hermitian()[0];
    Ok(SpohnRate {
        value: tr.re,
        near_singular: min <= SUPPORT_TOL,
    })
}

/// `dS/dt = −Tr[ρ̇ ln ρ]` for the von Neumann entropy.
pub fn entropy_derivative(rho: &Operator, rho_dot: &Operator) -> f64 {
    -rho_dot.trace_product(&matrix_log(rho)).re
}

/// Spohn rate `Tr{L(ρ)(ln ρ̄ − ln ρ)}` for a generator `l_apply` with
/// stationary state `ρ̄`.
pub fn spohn_rate(
    l_apply: impl Fn(&Operator) -> Operator,
    rho: &DensityMatrix,
    rho_bar: &DensityMatrix,
) -> Result<SpohnRate> {
    let dot = l_apply(rho);
    relative_entropy_rate(rho, &dot, rho_bar)
}

/// First derivative of a sampled series on a non-uniform grid.
///
/// Three-point central stencil at interior points and three-point one-sided
/// stencils at the ends; second-order accurate throughout.
pub fn series_derivative(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let n = times.len();
    if n != values.len() {
        return Err(Error::LengthMismatch(n, values.len()));
    }
    if n < 3 {
        return Err(Error::InvalidGrid("need at least three points to differentiate"));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b, c) = match i {
            0 => (0, 1, 2),
            _ if i == n - 1 => (n - 3, n - 2, n - 1),
            _ => (i - 1, i, i + 1),
        };
        out.push(lagrange_derivative(
            [times[a], times[b], times[c]],
            [values[a], values[b], values[c]],
            times[i],
        ));
    }
    Ok(out)
}

fn lagrange_derivative(x: [f64; 3], y: [f64; 3], at: f64) -> f64 {
    let mut d = 0.0;
    for j in 0..3 {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        let denom = (x[j] - x[k]) * (x[j] - x[l]);
        d += y[j] * ((at - x[k]) + (at - x[l])) / denom;
    }
    d
}

/// Finite-difference entropy production rate of a reduced trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedRate {
    /// `−d/dt S(ρ(t)‖w)` at each grid time.
    pub values: Vec<f64>,
    /// Largest estimated truncation error, from comparing the stencil with
    /// the same stencil on every other grid point.
    pub truncation_estimate: f64,
    /// `truncation_estimate > TRUNCATION_RTOL · max |values|`.
    pub too_coarse: bool,
}

/// `−d/dt S(ρ(t)‖w)` by finite differences of the relative-entropy series.
pub fn reduced_rate(times: &[f64], states: &[DensityMatrix], reference: &DensityMatrix) -> Result<ReducedRate> {
    if times.len() != states.len() {
        return Err(Error::LengthMismatch(times.len(), states.len()));
    }
    let series = states
        .iter()
        .map(|s| relative_entropy(s, reference))
        .collect::<Result<Vec<f64>>>()?;
    rate_of_series(times, &series)
}

/// `−d/dt` of an arbitrary series, with the same truncation estimate as
/// [`reduced_rate`].
pub fn rate_of_series(times: &[f64], series: &[f64]) -> Result<ReducedRate> {
    let values: Vec<f64> = series_derivative(times, series)?.into_iter().map(|d| -d).collect();
    let mut estimate: f64 = 0.0;
    let n = times.len();
    // compare against the stencil with doubled spacing at interior points
    for i in 2..n.saturating_sub(2) {
        let coarse = -lagrange_derivative(
            [times[i - 2], times[i], times[i + 2]],
            [series[i - 2], series[i], series[i + 2]],
            times[i],
        );
        estimate = estimate.max(math::abs(coarse - values[i]) / 3.0);
    }
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(math::abs(*v)));
    Ok(ReducedRate {
        too_coarse: estimate > TRUNCATION_RTOL * scale,
        values,
        truncation_estimate: estimate,
    })
}

/// `|S(ρ‖τ⊗w) − [I(ρ) + S(ρ_S‖τ) + S(ρ_A‖w)]|`.
pub fn decomposition_check(rho_sa: &DensityMatrix, tau_s: &DensityMatrix, w_a: &DensityMatrix) -> Result<f64> {
    let reference = DensityMatrix::product(tau_s, w_a);
    let lhs = relative_entropy(rho_sa, &reference)?;
    let rhs = correlations::mutual_information(rho_sa)?
        + relative_entropy(&rho_sa.reduced(Subsystem::S), tau_s)?
        + relative_entropy(&rho_sa.reduced(Subsystem::A), w_a)?;
    Ok(math::abs(lhs - rhs))
}

/// Entropy production series along a joint trajectory.
///
/// Rates are exact derivatives: `ρ̇ = L(ρ)` for `S+A` and its partial traces
/// for the marginals. The reduced references are the marginals of `ρ∞`.
#[derive(Clone, Debug)]
pub struct ThermoTrajectory {
    pub times: Vec<f64>,
    /// Spohn rate of `S+A` relative to `ρ∞`.
    pub sigma_sa: Vec<f64>,
    /// `−d/dt S(ρ_S‖Tr_A ρ∞)`.
    pub sigma_s: Vec<f64>,
    /// `−d/dt S(ρ_A‖Tr_S ρ∞)`.
    pub sigma_a: Vec<f64>,
    /// Mutual information in nats.
    pub mutual_info: Vec<f64>,
    /// `dI/dt`.
    pub mi_rate: Vec<f64>,
    /// `S(ρ_S(0)‖τ) − S(ρ_S(t)‖τ)`.
    pub entropy_production_s: Vec<f64>,
    /// `Tr[ρ_S H_S]`.
    pub heat: Vec<f64>,
    /// `|σ_SA − (σ_S + σ_A − dI/dt)|`.
    pub decomposition_residual: Vec<f64>,
    /// `σ_S` by finite differences of the relative-entropy series.
    pub sigma_s_fd: ReducedRate,
    /// Any logarithm at this time went through the eigenvalue clamp.
    pub near_singular: Vec<bool>,
}

pub fn thermo_trajectory(p: &ModelParams, traj: &Trajectory, steady: &DensityMatrix) -> Result<ThermoTrajectory> {
    let tau = steady.reduced(Subsystem::S);
    let w = steady.reduced(Subsystem::A);
    let n = traj.len();
    let mut out = ThermoTrajectory {
        times: traj.times.clone(),
        sigma_sa: Vec::with_capacity(n),
        sigma_s: Vec::with_capacity(n),
        sigma_a: Vec::with_capacity(n),
        mutual_info: Vec::with_capacity(n),
        mi_rate: Vec::with_capacity(n),
        entropy_production_s: Vec::with_capacity(n),
        heat: Vec::with_capacity(n),
        decomposition_residual: Vec::with_capacity(n),
        sigma_s_fd: ReducedRate {
            values: Vec::new(),
            truncation_estimate: 0.0,
            too_coarse: false,
        },
        near_singular: Vec::with_capacity(n),
    };
    let reduced_s = traj.reduced(Subsystem::S);
    let s0 = &reduced_s[0];
    for (rho, rho_s) in traj.states.iter().zip(&reduced_s) {
        let rho_a = rho.reduced(Subsystem::A);
        let dot = apply_lindbladian(p, rho);
        let dot_s = crate::linalg::partial_trace(&dot, Subsystem::S);
        let dot_a = crate::linalg::partial_trace(&dot, Subsystem::A);

        let sa = relative_entropy_rate(rho, &dot, steady)?;
        let s = relative_entropy_rate(rho_s, &dot_s, &tau)?;
        let a = relative_entropy_rate(&rho_a, &dot_a, &w)?;
        let mi_rate = entropy_derivative(rho_s, &dot_s) + entropy_derivative(&rho_a, &dot_a)
            - entropy_derivative(rho, &dot);

        out.decomposition_residual
            .push(math::abs(sa.value - (s.value + a.value - mi_rate)));
        out.sigma_sa.push(sa.value);
        out.sigma_s.push(s.value);
        out.sigma_a.push(a.value);
        out.mi_rate.push(mi_rate);
        out.mutual_info.push(correlations::mutual_information(rho)?);
        out.entropy_production_s.push(entropy_production(rho_s, s0, &tau)?);
        out.heat.push(heat(rho_s, p.omega_s));
        out.near_singular
            .push(sa.near_singular || s.near_singular || a.near_singular);
    }
    if n >= 3 {
        out.sigma_s_fd = reduced_rate(&traj.times, &reduced_s, &tau)?;
    }
    Ok(out)
}
