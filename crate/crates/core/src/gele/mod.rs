//! Galerkin truncation of the convection equations at arbitrary `(L, M)`.

mod convolution;

pub use convolution::{convolution, ConvolutionTerms, DirectConvolution};

use crate::analysis::{classify_fixed_point, ClassifierConfig};
use crate::diagnostics::energy_report;
use crate::error::{Error, Result};
use crate::imex::{rhs_with, ImexStepper, Nonlinear, NonlinearScheme};
use crate::params::Params;
use crate::spectral::{project_xyz, SpectralState};
use crate::trajectory::{Sample, Trajectory};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepperConfig {
    pub dt: f64,
    pub t_end: f64,
    pub output_every: usize,
    /// Keep a spectral snapshot every this many outputs; `0` keeps none.
    #[serde(default)]
    pub snapshot_every: usize,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self { dt: 1e-5, t_end: 5.0, output_every: 100, snapshot_every: 0 }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.output_every == 0 {
            return Err(Error::InvalidParameter("output_every must be at least 1".into()));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Time derivative of the Galerkin model.
pub fn gele_rhs(s: &SpectralState, p: &Params) -> SpectralState {
    rhs_with(s, p, &mut DirectConvolution::new(p))
}

/// One IMEX step from `s`.
pub fn step(s: &SpectralState, p: &Params, dt: f64) -> Result<SpectralState> {
    let mut st = ImexStepper::new(p, dt, NonlinearScheme::ForwardEuler)?;
    let mut out = s.clone();
    st.step(&mut out, &mut DirectConvolution::new(p))?;
    Ok(out)
}

pub(crate) fn sample(s: &SpectralState, p: &Params) -> Sample {
    let (x, y, z) = project_xyz(s, p);
    Sample { t: s.t, x, y, z, energy: energy_report(s, p) }
}

/// Drives any nonlinearity with the shared stepper and collects samples.
pub(crate) fn run(
    s0: &SpectralState,
    p: &Params,
    cfg: &StepperConfig,
    scheme: NonlinearScheme,
    nl: &mut dyn Nonlinear,
) -> Result<Trajectory> {
    cfg.validate()?;
    let mut st = ImexStepper::new(p, cfg.dt, scheme)?;
    let mut s = s0.clone();
    s.enforce_reality();
    let t0 = s.t;
    let n = cfg.n_steps();
    let mut tr = Trajectory::default();
    tr.samples.reserve(n / cfg.output_every + 1);
    tr.samples.push(sample(&s, p));
    if cfg.snapshot_every > 0 {
        tr.snapshots.push(s.clone());
    }
    for k in 1..=n {
        st.step(&mut s, nl)?;
        s.t = t0 + k as f64 * cfg.dt;
        if k % cfg.output_every == 0 {
            tr.samples.push(sample(&s, p));
            let j = k / cfg.output_every;
            if cfg.snapshot_every > 0 && j % cfg.snapshot_every == 0 {
                tr.snapshots.push(s.clone());
            }
        }
    }
    tr.final_state = Some(s);
    Ok(tr)
}

pub fn integrate(s0: &SpectralState, p: &Params, cfg: &StepperConfig) -> Result<Trajectory> {
    run(s0, p, cfg, NonlinearScheme::ForwardEuler, &mut DirectConvolution::new(p))
}

/// Final state of a trajectory that has settled on a fixed point.
pub fn equilibrium_modes(tr: &Trajectory, cfg: &ClassifierConfig) -> Result<SpectralState> {
    let change = classify_fixed_point(tr, cfg)?;
    if change >= cfg.fixed_point_tol {
        return Err(Error::NotConverged { change });
    }
    tr.final_state.clone().ok_or_else(|| Error::InsufficientData("trajectory carries no final state".into()))
}
