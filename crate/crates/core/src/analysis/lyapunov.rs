//! Largest Lyapunov exponent from a renormalized twin trajectory.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A model advanced in fixed steps over a real coordinate vector.
pub trait Dynamics {
    fn state(&self) -> Vec<f64>;
    /// Replaces the state; any multistep history is discarded.
    fn set_state(&mut self, v: &[f64]);
    fn step(&mut self) -> Result<()>;
    /// Step length in model time `t`.
    fn dt(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LyapunovConfig {
    /// Total integration time of the estimate.
    pub horizon: f64,
    /// Time between renormalizations.
    pub renorm_interval: f64,
    /// Initial and renormalized separation.
    pub d0: f64,
    /// Leading fraction of the intervals left out of the average.
    pub discard_fraction: f64,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self { horizon: 10.0, renorm_interval: 0.05, d0: 1e-8, discard_fraction: 0.2 }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Average exponential separation rate (1/t) of `base` and a copy
/// displaced by `d0` along a fixed direction. `twin` must start in the
/// same state as `base`.
pub fn lyapunov_largest(base: &mut dyn Dynamics, twin: &mut dyn Dynamics, cfg: &LyapunovConfig) -> Result<f64> {
    if !(cfg.horizon > 0.0 && cfg.renorm_interval > 0.0 && cfg.d0 > 0.0) {
        return Err(Error::InvalidParameter("Lyapunov horizon, interval and d0 must be positive".into()));
    }
    let dt = base.dt();
    let per = ((cfg.renorm_interval / dt).round() as usize).max(1);
    let n_int = ((cfg.horizon / (per as f64 * dt)).round() as usize).max(1);
    let skip = ((n_int as f64 * cfg.discard_fraction) as usize).min(n_int - 1);
    let v0 = base.state();
    // fixed, dense direction: alternating signs with slowly varying weights
    let mut dir: Vec<f64> =
        (0..v0.len()).map(|i| if i % 2 == 0 { 1.0 } else { -0.5 } * (1.0 + (i as f64 * 0.7).sin() * 0.3)).collect();
    let n0 = norm(&dir);
    dir.iter_mut().for_each(|d| *d *= cfg.d0 / n0);
    let start: Vec<f64> = v0.iter().zip(&dir).map(|(a, d)| a + d).collect();
    // both restart together so multistep schemes treat them alike
    base.set_state(&v0);
    twin.set_state(&start);
    // coordinates the model pins (e.g. imaginary parts of real modes)
    let d_start = norm(&twin.state().iter().zip(&v0).map(|(a, b)| a - b).collect::<Vec<_>>());
    if !(d_start > 0.0) {
        return Err(Error::InvalidParameter("perturbation vanished on the model's state space".into()));
    }
    let mut d_ref = d_start;
    let mut sum = 0.0;
    for k in 0..n_int {
        for _ in 0..per {
            base.step()?;
            twin.step()?;
        }
        let a = base.state();
        let b = twin.state();
        let diff: Vec<f64> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        let d = norm(&diff);
        if !d.is_finite() {
            return Err(Error::BlowUp { t: (k + 1) as f64 * per as f64 * dt });
        }
        if d == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if k >= skip {
            sum += (d / d_ref).ln();
        }
        let next: Vec<f64> = a.iter().zip(&diff).map(|(x, e)| x + e * (cfg.d0 / d)).collect();
        base.set_state(&a);
        twin.set_state(&next);
        d_ref = norm(&twin.state().iter().zip(&a).map(|(x, y)| x - y).collect::<Vec<_>>());
    }
    Ok(sum / ((n_int - skip) as f64 * per as f64 * dt))
}
