use std::path::PathBuf;
use std::process::ExitCode;

use ancilla::config::{LogBase, Preset, RunConfig, SweepAxis};
use ancilla::output::{Manifest, Table};
use ancilla::states::StateSpec;
use ancilla::validate::{run_suites, Hooks};
use ancilla::{sweep, trajectory, Error};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ancilla", version, about = "Qubit coupled to a thermal bath through an ancilla: steady states, dynamics and entropy production")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state correlations over a one- or two-parameter grid
    SteadySweep,
    /// Time series of distances, correlations and entropy production rates
    Trajectory,
    /// Run the cross-check suites; exits 1 on failure
    Validate,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true)]
    omega_s: Option<f64>,
    #[arg(long, global = true)]
    omega_a: Option<f64>,
    #[arg(long, global = true)]
    jx: Option<f64>,
    #[arg(long, global = true)]
    jy: Option<f64>,
    #[arg(long, global = true)]
    jz: Option<f64>,
    /// Decay rate γ
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Excitation rate Γ
    #[arg(long = "Gamma", global = true)]
    big_gamma: Option<f64>,
    /// g, e, plus, minus, mixed or bloch:x:y:z
    #[arg(long, global = true)]
    state_s: Option<String>,
    #[arg(long, global = true)]
    state_a: Option<String>,
    /// Two system states whose trace distance is tracked, e.g. g,e
    #[arg(long, global = true)]
    pair: Option<String>,
    /// Final time in units of 1/ω_S
    #[arg(long, global = true)]
    t_max: Option<f64>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// param:min:max:n, at most twice
    #[arg(long, global = true)]
    sweep: Vec<String>,
    /// CSV path; stdout when omitted. The manifest goes to <out>.manifest
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["2", "e"])]
    log_base: Option<String>,
    #[arg(long, global = true, value_parser = ["fig1", "fig2a", "fig2b", "fig3", "fig4"])]
    preset: Option<String>,
}

impl Opts {
    fn into_config(self) -> ancilla::Result<RunConfig> {
        let mut c = match &self.preset {
            Some(p) => RunConfig::from_preset(p.parse::<Preset>()?),
            None => RunConfig::default(),
        };
        let p = &mut c.params;
        let overrides = [
            (self.omega_s, &mut p.omega_s),
            (self.omega_a, &mut p.omega_a),
            (self.jx, &mut p.j_x),
            (self.jy, &mut p.j_y),
            (self.jz, &mut p.j_z),
            (self.gamma, &mut p.gamma),
            (self.big_gamma, &mut p.big_gamma),
        ];
        for (v, slot) in overrides {
            if let Some(v) = v {
                *slot = v;
            }
        }
        if let Some(s) = &self.state_s {
            c.state_s = s.parse()?;
        }
        if let Some(s) = &self.state_a {
            c.state_a = s.parse()?;
        }
        if let Some(pair) = &self.pair {
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| Error::config(format!("pair '{pair}' is not a,b")))?;
            c.pair = Some((a.parse::<StateSpec>()?, b.parse::<StateSpec>()?));
        }
        if let Some(t) = self.t_max {
            c.t_max = t;
        }
        if let Some(n) = self.steps {
            c.n_steps = n;
        }
        if !self.sweep.is_empty() {
            c.sweeps = self.sweep.iter().map(|s| s.parse::<SweepAxis>()).collect::<Result<_, _>>()?;
        }
        if let Some(b) = &self.log_base {
            c.log_base = b.parse::<LogBase>()?;
        }
        c.out = self.out;
        c.validate()?;
        Ok(c)
    }
}

fn emit(table: &Table, manifest: &Manifest, config: &RunConfig) -> ancilla::Result<()> {
    table.write(config.out.as_deref())?;
    if let Some(path) = &config.out {
        manifest.write_to(std::fs::File::create(Manifest::path_for(path))?)?;
    }
    Ok(())
}

fn run(cli: Cli) -> ancilla::Result<bool> {
    let config = cli.opts.into_config()?;
    match cli.command {
        Command::SteadySweep => {
            let table = sweep::steady_sweep(&config)?;
            let mut m = config.manifest("steady-sweep");
            let axes: Vec<String> = config.sweep_axes().iter().map(|a| a.to_string()).collect();
            m.set("sweeps", axes.join(";"));
            m.set("rows", table.rows.len());
            emit(&table, &m, &config)?;
            Ok(true)
        }
        Command::Trajectory => {
            let run = trajectory::run(&config)?;
            let mut m = config.manifest("trajectory");
            run.annotate(&mut m);
            emit(&run.table(&config), &m, &config)?;
            Ok(true)
        }
        Command::Validate => {
            let report = run_suites(&config, &Hooks::default())?;
            let mut m = config.manifest("validate");
            m.set("passed", report.passed());
            if config.out.is_some() {
                emit(&report.table(), &m, &config)?;
            }
            for r in &report.results {
                println!("{:<40} {:<8} {:>10.3e}  tol {:.1e}  {}", r.name, r.status, r.measured, r.tolerance, r.detail);
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
