use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum System {
    Rossler { a: f64, b: f64, c: f64 },
    Lorenz { sigma: f64, rho: f64, beta: f64 },
}

impl System {
    /// a = b = 0.2, c = 5.7.
    pub fn rossler() -> Self {
        System::Rossler { a: 0.2, b: 0.2, c: 5.7 }
    }

    /// σ = 10, ρ = 28, β = 8/3.
    pub fn lorenz() -> Self {
        System::Lorenz { sigma: 10.0, rho: 28.0, beta: 8.0 / 3.0 }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "rossler" | "rössler" => Some(Self::rossler()),
            "lorenz" => Some(Self::lorenz()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            System::Rossler { .. } => "rossler",
            System::Lorenz { .. } => "lorenz",
        }
    }

    pub fn default_initial(&self) -> [f64; 3] {
        match self {
            System::Rossler { .. } => [1.0, 1.0, 0.0],
            System::Lorenz { .. } => [1.0, 1.0, 1.0],
        }
    }

    pub fn rhs(&self, x: &[f64; 3]) -> [f64; 3] {
        match *self {
            System::Rossler { a, b, c } => [-x[1] - x[2], x[0] + a * x[1], b + x[2] * (x[0] - c)],
            System::Lorenz { sigma, rho, beta } => {
                [sigma * (x[1] - x[0]), x[0] * (rho - x[2]) - x[1], x[0] * x[1] - beta * x[2]]
            }
        }
    }

    fn rk4_step(&self, x: &[f64; 3], h: f64) -> [f64; 3] {
        let add = |a: &[f64; 3], k: &[f64; 3], s: f64| [a[0] + s * k[0], a[1] + s * k[1], a[2] + s * k[2]];
        let k1 = self.rhs(x);
        let k2 = self.rhs(&add(x, &k1, h / 2.0));
        let k3 = self.rhs(&add(x, &k2, h / 2.0));
        let k4 = self.rhs(&add(x, &k3, h));
        std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    #[serde(flatten)]
    pub system: System,
    /// Recorded duration after the transient.
    pub duration: f64,
    pub dt: f64,
    /// Discarded lead-in duration.
    pub transient: f64,
    /// Keep every `sample_every`-th step.
    pub sample_every: usize,
    pub initial: [f64; 3],
}

impl SimulationConfig {
    pub fn new(system: System, duration: f64, dt: f64) -> Self {
        SimulationConfig { system, duration, dt, transient: 100.0, sample_every: 1, initial: system.default_initial() }
    }
}

/// Fixed-step classical Runge–Kutta integration. Recorded times start at 0
/// once the transient is discarded.
pub fn simulate(cfg: &SimulationConfig) -> Result<Trajectory> {
    if !(cfg.dt > 0.0) || !cfg.dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {}", cfg.dt)));
    }
    if !(cfg.duration >= 0.0) || !(cfg.transient >= 0.0) || cfg.sample_every == 0 {
        return Err(Error::InvalidParameter("duration, transient and sampling must be non-negative".into()));
    }
    let warm = (cfg.transient / cfg.dt).round() as usize;
    let steps = (cfg.duration / cfg.dt).round() as usize;
    let mut x = cfg.initial;
    for i in 0..warm {
        x = cfg.system.rk4_step(&x, cfg.dt);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState((i + 1) as f64 * cfg.dt - cfg.transient));
        }
    }
    let mut times = Vec::with_capacity(steps / cfg.sample_every + 1);
    let mut points = Vec::with_capacity(steps / cfg.sample_every + 1);
    for i in 0..=steps {
        if i > 0 {
            x = cfg.system.rk4_step(&x, cfg.dt);
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteState(i as f64 * cfg.dt));
            }
        }
        if i % cfg.sample_every == 0 {
            times.push(i as f64 * cfg.dt);
            points.push(x.to_vec());
        }
    }
    Ok(Trajectory { times, points })
}
