//! Run configuration and presets.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ancilla_core::dynamics::{NULL_SPACE_RTOL, TRAJECTORY_PSD_TOL};
use ancilla_core::ode::Tolerances;
use ancilla_core::ModelParams;

use crate::output::Manifest;
use crate::states::StateSpec;
use crate::Error;

/// A sweepable model parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    OmegaS,
    OmegaA,
    Jx,
    Jy,
    Jz,
    Gamma,
    BigGamma,
}

impl Param {
    pub const ALL: [Param; 7] = [
        Param::OmegaS,
        Param::OmegaA,
        Param::Jx,
        Param::Jy,
        Param::Jz,
        Param::Gamma,
        Param::BigGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::OmegaS => "omega_s",
            Param::OmegaA => "omega_a",
            Param::Jx => "jx",
            Param::Jy => "jy",
            Param::Jz => "jz",
            Param::Gamma => "gamma",
            Param::BigGamma => "Gamma",
        }
    }

    pub fn get(self, p: &ModelParams) -> f64 {
        match self {
            Param::OmegaS => p.omega_s,
            Param::OmegaA => p.omega_a,
            Param::Jx => p.j_x,
            Param::Jy => p.j_y,
            Param::Jz => p.j_z,
            Param::Gamma => p.gamma,
            Param::BigGamma => p.big_gamma,
        }
    }

    pub fn set(self, p: &mut ModelParams, v: f64) {
        match self {
            Param::OmegaS => p.omega_s = v,
            Param::OmegaA => p.omega_a = v,
            Param::Jx => p.j_x = v,
            Param::Jy => p.j_y = v,
            Param::Jz => p.j_z = v,
            Param::Gamma => p.gamma = v,
            Param::BigGamma => p.big_gamma = v,
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        // gamma and Gamma differ only by case
        match s {
            "Gamma" => return Ok(Param::BigGamma),
            "gamma" => return Ok(Param::Gamma),
            _ => {}
        }
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "omega_s" | "ws" => Ok(Param::OmegaS),
            "omega_a" | "wa" => Ok(Param::OmegaA),
            "jx" | "j_x" => Ok(Param::Jx),
            "jy" | "j_y" => Ok(Param::Jy),
            "jz" | "j_z" => Ok(Param::Jz),
            _ => Err(Error::config(format!(
                "unknown parameter '{s}' (expected one of omega_s, omega_a, jx, jy, jz, gamma, Gamma)"
            ))),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One sweep axis, `param:min:max:n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepAxis {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl SweepAxis {
    /// Evenly spaced values including both ends.
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|k| self.min + k as f64 * step).collect()
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, n] = parts[..] else {
            return Err(Error::config(format!("sweep '{s}' is not param:min:max:n")));
        };
        let num = |x: &str| {
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::config(format!("bad number '{x}' in sweep '{s}'")))
        };
        let n: usize = n
            .parse()
            .map_err(|_| Error::config(format!("bad point count '{n}' in sweep '{s}'")))?;
        if n == 0 {
            return Err(Error::config(format!("sweep '{s}' has no points")));
        }
        Ok(SweepAxis {
            param: name.parse()?,
            min: num(min)?,
            max: num(max)?,
            n,
        })
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.param, self.min, self.max, self.n)
    }
}

/// Logarithm base for reported correlation quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl LogBase {
    pub fn from_nats(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x / std::f64::consts::LN_2,
            LogBase::E => x,
        }
    }

    pub fn from_bits(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x,
            LogBase::E => x * std::f64::consts::LN_2,
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            _ => Err(Error::config(format!("log base must be 2 or e, got '{s}'"))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "fig1" => Ok(Preset::Fig1),
            "fig2a" => Ok(Preset::Fig2a),
            "fig2b" => Ok(Preset::Fig2b),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            _ => Err(Error::config(format!("unknown preset '{s}'"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        })
    }
}

/// Time horizon of the dynamical presets, in units of `1/ω_S`.
pub const PRESET_T_MAX: f64 = 60.0;
/// Step count of the dynamical presets.
pub const PRESET_STEPS: usize = 6000;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub state_s: StateSpec,
    pub state_a: StateSpec,
    /// System states whose trace distance is tracked.
    pub pair: Option<(StateSpec, StateSpec)>,
    /// Final time in units of `1/ω_S`.
    pub t_max: f64,
    pub n_steps: usize,
    pub sweeps: Vec<SweepAxis>,
    pub out: Option<PathBuf>,
    pub log_base: LogBase,
    pub preset: Option<Preset>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams {
                omega_s: 1.0,
                omega_a: 1.0,
                j_x: 1.0,
                j_y: 1.0,
                j_z: 0.0,
                gamma: 10.0,
                big_gamma: 1.0,
            },
            state_s: StateSpec::Excited,
            state_a: StateSpec::Plus,
            pair: None,
            t_max: 10.0,
            n_steps: 1000,
            sweeps: Vec::new(),
            out: None,
            log_base: LogBase::Two,
            preset: None,
        }
    }
}

impl RunConfig {
    pub fn from_preset(preset: Preset) -> Self {
        let mut c = RunConfig {
            preset: Some(preset),
            ..RunConfig::default()
        };
        match preset {
            Preset::Fig1 => {
                c.params.j_y = 1.0;
                c.sweeps = fig1_axes().to_vec();
            }
            _ => {
                c.params.gamma = 1.0;
                c.params.big_gamma = 0.1;
                c.t_max = PRESET_T_MAX;
                c.n_steps = PRESET_STEPS;
                c.state_a = StateSpec::Plus;
                c.state_s = StateSpec::Excited;
            }
        }
        match preset {
            Preset::Fig2a => c.pair = Some((StateSpec::Ground, StateSpec::Excited)),
            Preset::Fig2b => c.pair = Some((StateSpec::Plus, StateSpec::Minus)),
            _ => {}
        }
        c
    }

    pub fn validate(&self) -> crate::Result<()> {
        self.params
            .validate()
            .map_err(|e| Error::config(format!("invalid parameters: {e}")))?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::config("t_max must be positive"));
        }
        if self.n_steps == 0 {
            return Err(Error::config("steps must be at least 1"));
        }
        if self.sweeps.len() > 2 {
            return Err(Error::config("at most two sweep axes"));
        }
        if let [a, b] = &self.sweeps[..] {
            if a.param == b.param {
                return Err(Error::config("sweep axes must differ"));
            }
        }
        Ok(())
    }

    /// Parameters, grid, tolerances and version for the sidecar manifest.
    pub fn manifest(&self, command: &str) -> Manifest {
        let mut m = Manifest::default();
        m.set("artifact", env!("CARGO_PKG_NAME"));
        m.set("version", env!("CARGO_PKG_VERSION"));
        m.set("command", command);
        m.set("preset", self.preset.map_or("none".to_string(), |p| p.to_string()));
        for p in Param::ALL {
            m.set(p.name(), p.get(&self.params));
        }
        m.set("state_s", self.state_s);
        m.set("state_a", self.state_a);
        if let Some((a, b)) = self.pair {
            m.set("pair", format!("{a},{b}"));
        }
        m.set("t_max", self.t_max);
        m.set("steps", self.n_steps);
        m.set("time_unit", "1/omega_s");
        let axes: Vec<String> = self.sweeps.iter().map(|a| a.to_string()).collect();
        m.set("sweeps", axes.join(";"));
        m.set("log_base", self.log_base);
        let tol = Tolerances::default();
        m.set("ode_method", "dormand-prince-5(4)");
        m.set("ode_rtol", tol.rtol);
        m.set("ode_atol", tol.atol);
        m.set("null_space_rtol", NULL_SPACE_RTOL);
        m.set("trajectory_psd_tol", TRAJECTORY_PSD_TOL);
        m
    }

    /// Sweep axes, falling back to the `ω_A × J_x` grid.
    pub fn sweep_axes(&self) -> Vec<SweepAxis> {
        if self.sweeps.is_empty() {
            fig1_axes().to_vec()
        } else {
            self.sweeps.clone()
        }
    }
}

pub fn fig1_axes() -> [SweepAxis; 2] {
    [
        SweepAxis {
            param: Param::OmegaA,
            min: 0.5,
            max: 2.0,
            n: 41,
        },
        SweepAxis {
            param: Param::Jx,
            min: 0.0,
            max: 2.0,
            n: 41,
        },
    ]
}
