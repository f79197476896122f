//! Uniform front end over the three models.

use crate::analysis::{lyapunov_largest, Dynamics, LyapunovConfig};
use crate::dns::{integrate_dns_with, Grid, TransformNonlinear};
use crate::error::{Error, Result};
use crate::gele::{integrate, DirectConvolution, StepperConfig};
use crate::imex::{ImexStepper, NonlinearScheme};
use crate::lorenz::{integrate_lorenz_with, LorenzScheme, LorenzState, LorenzStepper};
use crate::params::{t_of_tau, tau_of_t, Params};
use crate::spectral::{lorenz_to_spectral, project_xyz, SpectralState};
use crate::trajectory::Trajectory;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Lorenz,
    Gele,
    Dns,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Lorenz => "lorenz",
            Self::Gele => "gele",
            Self::Dns => "dns",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lorenz" => Ok(Self::Lorenz),
            "gele" => Ok(Self::Gele),
            "dns" => Ok(Self::Dns),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

/// Model choice with its truncation and, for the DNS, its grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(rename = "L")]
    pub l_max: usize,
    #[serde(rename = "M")]
    pub m_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    /// Overrides the model's nonlinear scheme (the DNS default is
    /// Adams-Bashforth, the Galerkin model uses forward Euler).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<NonlinearScheme>,
}

impl ModelSpec {
    pub fn lorenz() -> Self {
        Self { kind: ModelKind::Lorenz, l_max: 1, m_max: 2, grid: None, scheme: None }
    }

    pub fn gele(l_max: usize, m_max: usize) -> Self {
        Self { kind: ModelKind::Gele, l_max, m_max, grid: None, scheme: None }
    }

    pub fn dns(l_max: usize, m_max: usize, grid: Grid) -> Self {
        Self { kind: ModelKind::Dns, l_max, m_max, grid: Some(grid), scheme: None }
    }

    /// Parameters at `r` with this model's truncation.
    pub fn params(&self, r: f64) -> Result<Params> {
        match self.kind {
            ModelKind::Lorenz => Params::new(r, 1, 2),
            _ => Params::new(r, self.l_max, self.m_max),
        }
    }

    pub fn grid_or_default(&self) -> Grid {
        self.grid.unwrap_or_else(|| Grid::for_truncation(self.l_max, self.m_max))
    }

    pub fn scheme(&self) -> NonlinearScheme {
        self.scheme.unwrap_or(match self.kind {
            ModelKind::Dns => NonlinearScheme::AdamsBashforth2,
            _ => NonlinearScheme::ForwardEuler,
        })
    }
}

/// Runs the selected model from `s0` (for the Lorenz model only the
/// projected `(X, Y, Z)` of `s0` is used). `cfg.dt` is in model time.
pub fn simulate(spec: &ModelSpec, p: &Params, s0: &SpectralState, cfg: &StepperConfig) -> Result<Trajectory> {
    match spec.kind {
        ModelKind::Lorenz => {
            cfg.validate()?;
            let (x, y, z) = project_xyz(s0, p);
            let start = LorenzState { x, y, z, tau: tau_of_t(s0.t, p) };
            let dtau = tau_of_t(cfg.dt, p);
            let tau_end = start.tau + cfg.n_steps() as f64 * dtau;
            let lt = integrate_lorenz_with(start, tau_end, dtau, p, LorenzScheme::Imex, cfg.output_every)?;
            let mut tr = lt.to_trajectory(p)?;
            let last = lt.samples.last().copied().unwrap_or(start);
            let mut fin = lorenz_to_spectral(last.x, last.y, last.z, &p.with_truncation(1, 2)?);
            fin.t = t_of_tau(last.tau, p);
            tr.final_state = Some(fin);
            Ok(tr)
        }
        ModelKind::Gele => match spec.scheme() {
            NonlinearScheme::ForwardEuler => integrate(s0, p, cfg),
            scheme => crate::gele::run(s0, p, cfg, scheme, &mut DirectConvolution::new(p)),
        },
        ModelKind::Dns => integrate_dns_with(s0, p, &spec.grid_or_default(), cfg, spec.scheme()),
    }
}

struct LorenzDynamics {
    st: LorenzStepper,
    s: LorenzState,
    dt: f64,
}

impl Dynamics for LorenzDynamics {
    fn state(&self) -> Vec<f64> {
        self.s.xyz().to_vec()
    }
    fn set_state(&mut self, v: &[f64]) {
        self.s.x = v[0];
        self.s.y = v[1];
        self.s.z = v[2];
    }
    fn step(&mut self) -> Result<()> {
        self.st.step(&mut self.s)
    }
    fn dt(&self) -> f64 {
        self.dt
    }
}

struct SpectralDynamics<N> {
    st: ImexStepper,
    nl: N,
    s: SpectralState,
}

impl<N: crate::imex::Nonlinear> Dynamics for SpectralDynamics<N> {
    fn state(&self) -> Vec<f64> {
        self.s.to_real_vec()
    }
    fn set_state(&mut self, v: &[f64]) {
        self.s = SpectralState::from_real_vec(self.s.l_max(), self.s.m_max(), self.s.t, v);
        self.s.enforce_reality();
        self.st.reset_history();
    }
    fn step(&mut self) -> Result<()> {
        self.st.step(&mut self.s, &mut self.nl)
    }
    fn dt(&self) -> f64 {
        self.st.dt()
    }
}

fn dynamics(spec: &ModelSpec, p: &Params, s0: &SpectralState, dt: f64) -> Result<Box<dyn Dynamics>> {
    Ok(match spec.kind {
        ModelKind::Lorenz => {
            let (x, y, z) = project_xyz(s0, p);
            Box::new(LorenzDynamics {
                st: LorenzStepper::new(p, tau_of_t(dt, p), LorenzScheme::Imex)?,
                s: LorenzState::new(x, y, z),
                dt,
            })
        }
        ModelKind::Gele => Box::new(SpectralDynamics {
            st: ImexStepper::new(p, dt, spec.scheme())?,
            nl: DirectConvolution::new(p),
            s: s0.clone(),
        }),
        ModelKind::Dns => Box::new(SpectralDynamics {
            st: ImexStepper::new(p, dt, spec.scheme())?,
            nl: TransformNonlinear::new(p, &spec.grid_or_default())?,
            s: s0.clone(),
        }),
    })
}

/// Largest Lyapunov exponent (1/t) of the selected model started at `s0`.
pub fn model_lyapunov(spec: &ModelSpec, p: &Params, s0: &SpectralState, dt: f64, cfg: &LyapunovConfig) -> Result<f64> {
    let mut a = dynamics(spec, p, s0, dt)?;
    let mut b = dynamics(spec, p, s0, dt)?;
    lyapunov_largest(a.as_mut(), b.as_mut(), cfg)
}
