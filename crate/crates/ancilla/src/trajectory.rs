//! Time series of distances, correlations and entropy production.

use ancilla_core::correlations::eof;
use ancilla_core::dynamics::{evolve, steady_state, trace_norm_distance, SteadyState, TimeGrid, Trajectory};
use ancilla_core::nonmarkov::{distance_trajectory, DistanceTrajectory};
use ancilla_core::thermo::{entropy_production, thermo_trajectory, ThermoTrajectory};
use ancilla_core::{DensityMatrix, Subsystem};

use crate::config::RunConfig;
use crate::output::{Cell, Manifest, Table};

/// Everything computed for one trajectory run.
#[derive(Clone, Debug)]
pub struct TrajectoryRun {
    pub trajectory: Trajectory,
    pub thermo: ThermoTrajectory,
    pub steady: SteadyState,
    pub distances: Option<DistanceTrajectory>,
    /// `S(ρ_S(0)‖τ) − S(ρ_S(t)‖τ)` of the run with `H_I = 0`.
    pub uncoupled_production: Vec<f64>,
    /// `‖ρ(t_max) − ρ∞‖₁`.
    pub final_distance: f64,
}

/// Uniform grid in units of `1/|ω_S|`.
pub fn time_grid(config: &RunConfig) -> crate::Result<TimeGrid> {
    let unit = match config.params.omega_s.abs() {
        w if w > 0.0 => 1.0 / w,
        _ => 1.0,
    };
    Ok(TimeGrid::uniform(config.t_max * unit, config.n_steps)?)
}

pub fn run(config: &RunConfig) -> crate::Result<TrajectoryRun> {
    config.validate()?;
    let p = &config.params;
    let grid = time_grid(config)?;
    let rho_a0 = config.state_a.density_matrix()?;
    let rho0 = DensityMatrix::product(&config.state_s.density_matrix()?, &rho_a0);

    let trajectory = evolve(p, &rho0, &grid)?;
    let steady = steady_state(p)?;
    let thermo = thermo_trajectory(p, &trajectory, &steady.state)?;

    let free = p.uncoupled();
    let free_traj = evolve(&free, &rho0, &grid)?;
    let tau = steady_state(&free)?.state.reduced(Subsystem::S);
    let free_s = free_traj.reduced(Subsystem::S);
    let uncoupled_production = free_s
        .iter()
        .map(|s| entropy_production(s, &free_s[0], &tau))
        .collect::<ancilla_core::Result<Vec<f64>>>()?;

    let distances = match config.pair {
        Some((a, b)) => Some(distance_trajectory(
            p,
            (&a.density_matrix()?, &b.density_matrix()?),
            &rho_a0,
            &grid,
        )?),
        None => None,
    };
    let final_distance = trace_norm_distance(trajectory.last(), &steady.state);
    Ok(TrajectoryRun {
        trajectory,
        thermo,
        steady,
        distances,
        uncoupled_production,
        final_distance,
    })
}

impl TrajectoryRun {
    pub fn table(&self, config: &RunConfig) -> Table {
        let mut headers = vec!["t"];
        if self.distances.is_some() {
            headers.extend(["d_sa", "d_s"]);
        }
        headers.extend([
            "mutual_info",
            "eof",
            "sigma_sa",
            "sigma_s",
            "sigma_a",
            "mi_rate",
            "entropy_production_s",
            "entropy_production_s_uncoupled",
            "heat",
            "decomposition_residual",
            "sigma_s_fd",
            "near_singular",
        ]);
        let mut table = Table::new(headers);
        let th = &self.thermo;
        let omega = config.params.omega_s.abs();
        let unit = if omega > 0.0 { omega } else { 1.0 };
        for (k, &t) in th.times.iter().enumerate() {
            let mut row: Vec<Cell> = vec![(t * unit).into()];
            if let Some(d) = &self.distances {
                row.extend([d.d_sa[k].into(), d.d_s[k].into()]);
            }
            row.extend([
                config.log_base.from_nats(th.mutual_info[k]).into(),
                config.log_base.from_bits(eof(&self.trajectory.states[k])).into(),
                th.sigma_sa[k].into(),
                th.sigma_s[k].into(),
                th.sigma_a[k].into(),
                th.mi_rate[k].into(),
                th.entropy_production_s[k].into(),
                self.uncoupled_production[k].into(),
                th.heat[k].into(),
                th.decomposition_residual[k].into(),
                th.sigma_s_fd.values.get(k).copied().into(),
                usize::from(th.near_singular[k]).into(),
            ]);
            table.push(row);
        }
        table
    }

    /// Run-specific manifest entries.
    pub fn annotate(&self, m: &mut Manifest) {
        m.set("final_distance_to_steady_state", format!("{:.3e}", self.final_distance));
        m.set("steady_state_null_dim", self.steady.null_dim);
        m.set("steady_state_residual", format!("{:.3e}", self.steady.residual));
        m.set("sigma_s_fd_truncation_estimate", format!("{:.3e}", self.thermo.sigma_s_fd.truncation_estimate));
        if let Some(d) = &self.distances {
            m.set("revivals", d.revivals.len());
        }
    }
}
