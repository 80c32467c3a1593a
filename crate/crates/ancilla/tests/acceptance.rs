//! Acceptance criteria 1–11. Prints one line per criterion and exits nonzero
//! if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ancilla::config::{Param, Preset, RunConfig};
use ancilla::states::StateSpec;
use ancilla::{sweep, trajectory};
use ancilla_core::analytic::{
    element_rhs, literal, tcl_apply, tcl_rates, ElementState, ReducedSolution, RestrictedParams,
};
use ancilla_core::dynamics::{evolve, steady_state, TimeGrid};
use ancilla_core::linalg::partial_trace;
use ancilla_core::model::apply_lindbladian;
use ancilla_core::nonmarkov::{distance_trajectory, TOL_MONO};
use ancilla_core::thermo::{decomposition_check, relative_entropy_rate};
use ancilla_core::{DensityMatrix, ModelParams, Operator, Subsystem, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        summary: summary.into(),
    }
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let g: Vec<C64> = (0..dim * dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = Operator::from_rows(dim, &g).unwrap();
    let gg = &(&g * &g.adjoint()) + &(&Operator::identity(dim) * 1e-3);
    let tr = gg.trace().re;
    DensityMatrix::from_hermitized(&(&gg * (1.0 / tr)), 1e-10).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng, excitation_preserving: bool) -> ModelParams {
    let jx = rng.gen_range(-1.5..1.5);
    let jy = if excitation_preserving { jx } else { rng.gen_range(-1.5..1.5) };
    ModelParams::new(
        rng.gen_range(0.3..2.0),
        rng.gen_range(0.3..2.0),
        jx,
        jy,
        rng.gen_range(-1.0..1.0),
        rng.gen_range(0.5..10.0),
        rng.gen_range(0.05..2.0),
    )
    .unwrap()
}

/// Diagonal of `e^{−β ω σ_z}/Z` as (ground, excited).
fn thermal_qubit(beta: f64, omega: f64) -> [f64; 2] {
    let (w0, w1) = ((beta * omega).exp(), (-beta * omega).exp());
    [w0 / (w0 + w1), w1 / (w0 + w1)]
}

fn bath_beta(p: &ModelParams) -> f64 {
    (p.gamma / p.big_gamma).ln() / (2.0 * p.omega_s)
}

fn c1_product_steady_state() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = random_params(&mut rng, true);
        let beta = bath_beta(&p);
        let s = thermal_qubit(beta, p.omega_s);
        let a = thermal_qubit(beta * p.omega_s / p.omega_a, p.omega_a);
        let rho = steady_state(&p).unwrap().state;
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { s[i / 2] * a[i % 2] } else { 0.0 };
                worst = worst.max((rho.get(i, j) - C64::new(expected, 0.0)).norm());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(5),
        format!("max entry error {worst:.2e} (tol 1e-8), {:.2} s (limit 5 s)", elapsed.as_secs_f64()),
    )
}

fn c2_x_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let (mut off_x, mut jz_shift): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let p = random_params(&mut rng, false);
        let a = steady_state(&p).unwrap().state;
        let mut q = p;
        q.j_z = rng.gen_range(-1.0..1.0);
        let b = steady_state(&q).unwrap().state;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    off_x = off_x.max(a.get(i, j).norm());
                }
                jz_shift = jz_shift.max((a.get(i, j) - b.get(i, j)).norm());
            }
        }
    }
    outcome(
        off_x <= 1e-10 && jz_shift <= 1e-10,
        format!("off-X {off_x:.2e}, J_z change {jz_shift:.2e} (tol 1e-10)"),
    )
}

fn c3_spohn_positivity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let grid = TimeGrid::uniform(10.0, 1999).unwrap();
    let mut lowest = f64::INFINITY;
    for _ in 0..20 {
        let p = random_params(&mut rng, false);
        let ss = steady_state(&p).unwrap().state;
        let traj = evolve(&p, &random_state(&mut rng, 4), &grid).unwrap();
        for rho in &traj.states {
            let r = relative_entropy_rate(rho, &apply_lindbladian(&p, rho), &ss).unwrap();
            lowest = lowest.min(r.value);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        lowest >= -1e-8 && elapsed < Duration::from_secs(30),
        format!("min joint rate {lowest:.2e} (tol -1e-8), {:.1} s (limit 30 s)", elapsed.as_secs_f64()),
    )
}

fn c4_decomposition_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_state(&mut rng, 4);
        let tau = random_state(&mut rng, 2);
        let w = random_state(&mut rng, 2);
        worst = worst.max(decomposition_check(&rho, &tau, &w).unwrap());
    }
    outcome(worst <= 1e-10, format!("max residual {worst:.2e} (tol 1e-10)"))
}

fn c5_sum_rule() -> Outcome {
    let config = RunConfig::from_preset(Preset::Fig4);
    let run = trajectory::run(&config).unwrap();
    let th = &run.thermo;
    let n = th.times.len();
    let mut worst_ratio: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for k in 1..n - 1 {
        let allowed = (1e-3 * th.sigma_sa[k].abs()).max(1e-6);
        worst_ratio = worst_ratio.max(th.decomposition_residual[k] / allowed);
        worst_residual = worst_residual.max(th.decomposition_residual[k]);
    }
    outcome(
        worst_ratio <= 1.0,
        format!("max residual {worst_residual:.2e}, worst residual/allowed {worst_ratio:.2e} over {} interior points", n - 2),
    )
}

fn c6_element_equations_and_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let p = ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 10.0, 1.0).unwrap();
    let rp = RestrictedParams::from_model(&p).unwrap();
    let mut rhs_err: f64 = 0.0;
    for _ in 0..20 {
        let rho = random_state(&mut rng, 4);
        let d = element_rhs(&rp, &ElementState::from_operator(&rho));
        rhs_err = rhs_err.max((&d.to_operator(0.0) - &apply_lindbladian(&p, &rho)).max_abs());
    }
    let mut closed_err: f64 = 0.0;
    let grid = TimeGrid::uniform(10.0, 1000).unwrap();
    for s0 in [
        DensityMatrix::from_bloch(0.3, 0.5, 0.6).unwrap(),
        DensityMatrix::excited(),
        DensityMatrix::plus(),
    ] {
        let sol = ReducedSolution::new(&rp, &s0).unwrap();
        let traj = evolve(&p, &DensityMatrix::product(&s0, &DensityMatrix::maximally_mixed(2)), &grid).unwrap();
        for (t, s) in traj.times.iter().zip(traj.reduced(Subsystem::S)) {
            closed_err = closed_err.max((sol.state_at(*t).unwrap().as_operator() - s.as_operator()).max_abs());
        }
    }
    outcome(
        rhs_err <= 1e-10 && closed_err <= 1e-6,
        format!("element RHS {rhs_err:.2e} (tol 1e-10), closed form {closed_err:.2e} (tol 1e-6)"),
    )
}

fn c7_time_local_generator() -> Outcome {
    let p = ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 10.0, 1.0).unwrap();
    let rp = RestrictedParams::from_model(&p).unwrap();
    let rho0 = DensityMatrix::product(&DensityMatrix::from_bloch(0.3, 0.5, 0.6).unwrap(), &DensityMatrix::maximally_mixed(2));
    let traj = evolve(&p, &rho0, &TimeGrid::uniform(10.0, 1000).unwrap()).unwrap();
    let (mut tcl_err, mut literal_err, mut singular): (f64, f64, usize) = (0.0, 0.0, 0);
    for (t, rho) in traj.times.iter().zip(&traj.states) {
        let exact = partial_trace(&apply_lindbladian(&p, rho), Subsystem::S);
        let rho_s = rho.reduced(Subsystem::S);
        let (k, rates) = tcl_apply(&rho_s, *t, &rp).unwrap();
        if rates.singular {
            singular += 1;
        } else {
            tcl_err = tcl_err.max((&k - &exact).max_abs());
        }
        if *t > 0.05 {
            let frame = ancilla_core::analytic::to_excited_first(&rho_s);
            let (kp, c) = literal::generator_apply(&frame, *t, &rp).unwrap();
            if !c.singular {
                let back = ancilla_core::analytic::to_excited_first(&kp);
                literal_err = literal_err.max((&back - &exact).max_abs());
            }
        }
    }
    let mut relation: f64 = 0.0;
    for i in 1..=200 {
        let c = tcl_rates(i as f64 * 0.05, rp.gamma, rp.big_gamma, rp.j).unwrap();
        let ([l1, l2, l3, l4, _], [_, d2, d3, d4, _]) = (c.lambda, c.lambda_dot);
        let g2 = -2.0 * l1 * (l4 * (d2 + d3) + (l2 - 1.0) * (d3 - d4) - l3 * (d2 + d4));
        let g3 = 4.0 * l1 * (d3 - d4) - g2;
        relation = relation.max((c.gamma_s[1] - g2).abs()).max((c.gamma_s[2] - g3).abs());
    }
    outcome(
        tcl_err <= 1e-5 && relation <= 1e-12 && 2 * singular < traj.len(),
        format!(
            "exact-rate generator {tcl_err:.2e} (tol 1e-5, {singular} singular points), literal rate relation {relation:.2e} (tol 1e-12); literal generator as-is deviates by {literal_err:.2e}"
        ),
    )
}

fn c8_backflow() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for preset in [Preset::Fig2a, Preset::Fig2b] {
        let c = RunConfig::from_preset(preset);
        let (a, b) = c.pair.unwrap();
        let d = distance_trajectory(
            &c.params,
            (&a.density_matrix().unwrap(), &b.density_matrix().unwrap()),
            &c.state_a.density_matrix().unwrap(),
            &trajectory::time_grid(&c).unwrap(),
        )
        .unwrap();
        let violations = d.joint_monotonicity_violations(TOL_MONO);
        pass &= !d.revivals.is_empty() && violations == 0;
        parts.push(format!("{preset}: {} revivals, {violations} joint violations", d.revivals.len()));
    }
    outcome(pass, parts.join("; "))
}

fn c9_long_time_production() -> Outcome {
    let run = trajectory::run(&RunConfig::from_preset(Preset::Fig3)).unwrap();
    let coupled = *run.thermo.entropy_production_s.last().unwrap();
    let free = *run.uncoupled_production.last().unwrap();
    // S(|1⟩⟨1| ‖ ρ_β) = −ln p_e with p_e = Γ/(γ+Γ) = 1/11
    let expected = 11f64.ln();
    let pass = (coupled - free).abs() <= 1e-4 && (coupled - expected).abs() <= 1e-4 && (free - expected).abs() <= 1e-4;
    outcome(
        pass,
        format!("coupled {coupled:.8}, uncoupled {free:.8}, ln 11 = {expected:.8} (tol 1e-4)"),
    )
}

fn c10_negative_rate() -> Outcome {
    let run = trajectory::run(&RunConfig::from_preset(Preset::Fig4)).unwrap();
    let min_pure = run.thermo.sigma_s.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut mixed = RunConfig::from_preset(Preset::Fig4);
    mixed.state_s = StateSpec::Mixed;
    mixed.state_a = StateSpec::Mixed;
    let run = trajectory::run(&mixed).unwrap();
    let min_mixed = run.thermo.sigma_s.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(
        min_pure < -1e-4 && min_mixed >= -1e-8,
        format!("min system rate e/plus {min_pure:.3e} (need < -1e-4), mixed/mixed {min_mixed:.2e} (need >= -1e-8)"),
    )
}

fn c11_fig1_sweep() -> Outcome {
    let start = Instant::now();
    let config = RunConfig::from_preset(Preset::Fig1);
    let axes = config.sweep_axes();
    let jx_axis = axes.iter().position(|a| a.param == Param::Jx).unwrap();
    let beta = bath_beta(&config.params);
    let points = sweep::run_points(&config).unwrap();
    let (mut on_mi, mut on_beta): (f64, f64) = (0.0, 0.0);
    let mut off_min = f64::INFINITY;
    let (mut hotter_violations, mut failures) = (0, 0);
    for pt in &points {
        let Ok(r) = &pt.outcome else {
            failures += 1;
            continue;
        };
        let mi = r.record.mutual_info;
        let j = pt.index[jx_axis];
        if (pt.params.j_x - 1.0).abs() < 1e-12 {
            on_mi = on_mi.max(mi);
            let b = r.record.beta_eff_s.unwrap_or(f64::NAN);
            on_beta = on_beta.max((b - beta).abs());
        } else if j.abs_diff(20) >= 2 {
            off_min = off_min.min(mi);
        }
        if mi > 1e-6 && r.record.beta_eff_s.is_none_or(|b| b >= beta) {
            hotter_violations += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = failures == 0
        && on_mi <= 1e-8
        && off_min > 1e-6
        && on_beta <= 1e-8
        && hotter_violations == 0
        && elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!(
            "{} points, MI on J_x=1 column {on_mi:.2e}, min MI off column {off_min:.2e}, |β_eff - β| on column {on_beta:.2e}, {hotter_violations} cells not hotter, {:.2} s",
            points.len(),
            elapsed.as_secs_f64()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("product steady state", c1_product_steady_state),
        ("X-form and J_z independence", c2_x_form),
        ("joint rate positivity", c3_spohn_positivity),
        ("relative entropy decomposition", c4_decomposition_identity),
        ("rate sum rule", c5_sum_rule),
        ("element equations and closed forms", c6_element_equations_and_closed_forms),
        ("time-local generator", c7_time_local_generator),
        ("trace distance backflow", c8_backflow),
        ("long-time entropy production", c9_long_time_production),
        ("negative system rate", c10_negative_rate),
        ("steady-state sweep structure", c11_fig1_sweep),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.summary);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
