//! Run configuration: TOML file, command-line overrides and resolution of
//! per-model defaults.

use crate::CliError;
use rblab::analysis::{ClassifierConfig, LyapunovConfig, SweepConfig, DEFAULT_T_CUT};
use rblab::dns::{default_resolution, Grid};
use rblab::gele::StepperConfig;
use rblab::ic::{IcKind, IcSpec};
use rblab::imex::NonlinearScheme;
use rblab::model::{ModelKind, ModelSpec};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub nx: usize,
    pub nz: usize,
}

/// Everything a run needs. Unset optional fields are filled in by
/// [`RunConfig::resolve`]; the resolved form is what gets echoed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_model")]
    pub model: ModelKind,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l_max: Option<usize>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_output_every")]
    pub output_every: usize,
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_t_cut")]
    pub t_cut: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<NonlinearScheme>,
    #[serde(default = "IcSpec::standard")]
    pub ic: IcSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub classifier: ClassifierConfig,
    #[serde(default)]
    pub lyapunov: LyapunovConfig,
}

fn default_model() -> ModelKind {
    ModelKind::Lorenz
}
fn default_r() -> f64 {
    30.0
}
fn default_dt() -> f64 {
    StepperConfig::default().dt
}
fn default_t_end() -> f64 {
    StepperConfig::default().t_end
}
fn default_output_every() -> usize {
    StepperConfig::default().output_every
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_t_cut() -> f64 {
    DEFAULT_T_CUT
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("every field has a default")
    }
}

/// Command-line values that override the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub model: Option<ModelKind>,
    pub r: Option<f64>,
    pub l_max: Option<usize>,
    pub m_max: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub output_every: Option<usize>,
    pub snapshot_every: Option<usize>,
    pub ic: Option<IcKind>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub nx: Option<usize>,
    pub nz: Option<usize>,
    pub scheme: Option<NonlinearScheme>,
    pub t_cut: Option<f64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: &Overrides) {
        fn set<T: Copy>(dst: &mut T, v: Option<T>) {
            if let Some(v) = v {
                *dst = v;
            }
        }
        set(&mut self.model, o.model);
        set(&mut self.r, o.r);
        if o.l_max.is_some() {
            self.l_max = o.l_max;
        }
        if o.m_max.is_some() {
            self.m_max = o.m_max;
        }
        set(&mut self.dt, o.dt);
        set(&mut self.t_end, o.t_end);
        set(&mut self.output_every, o.output_every);
        set(&mut self.snapshot_every, o.snapshot_every);
        set(&mut self.ic.kind, o.ic);
        if o.x.is_some() {
            self.ic.x = o.x;
        }
        if o.y.is_some() {
            self.ic.y = o.y;
        }
        if o.z.is_some() {
            self.ic.z = o.z;
        }
        set(&mut self.ic.epsilon, o.epsilon);
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if let Some(out) = &o.out {
            self.out_dir = out.clone();
        }
        if o.nx.is_some() || o.nz.is_some() {
            let base = self.grid.unwrap_or(GridConfig { nx: 0, nz: 0 });
            self.grid = Some(GridConfig { nx: o.nx.unwrap_or(base.nx), nz: o.nz.unwrap_or(base.nz) });
        }
        if o.scheme.is_some() {
            self.scheme = o.scheme;
        }
        set(&mut self.t_cut, o.t_cut);
    }

    /// Fills in truncation, grid, seed and initial amplitudes and checks
    /// the result against the model's preconditions.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        let (dl, dm, dgrid) = match self.model {
            ModelKind::Lorenz => (1, 2, None),
            ModelKind::Gele => (10, 10, None),
            ModelKind::Dns => {
                let (l, m, g) = default_resolution(self.r);
                (l, m, Some(g))
            }
        };
        if self.model == ModelKind::Lorenz {
            if self.l_max.is_some_and(|l| l != 1) || self.m_max.is_some_and(|m| m != 2) {
                return Err(CliError::Config("the Lorenz model has fixed truncation L=1, M=2".into()));
            }
            if self.grid.is_some() {
                return Err(CliError::Config("grid applies to the dns model only".into()));
            }
        }
        let explicit_lm = self.l_max.is_some() || self.m_max.is_some();
        let l = *self.l_max.get_or_insert(dl);
        let m = *self.m_max.get_or_insert(dm);
        if self.model == ModelKind::Dns && self.grid.is_none() {
            let g = if explicit_lm { Grid::for_truncation(l, m) } else { dgrid.expect("dns default grid") };
            self.grid = Some(GridConfig { nx: g.nx, nz: g.nz });
        }
        if self.model == ModelKind::Gele && self.grid.is_some() {
            return Err(CliError::Config("grid applies to the dns model only".into()));
        }
        if self.ic.kind == IcKind::LorenzLike {
            self.seed.get_or_insert(0);
        } else if self.seed.is_none() {
            return Err(CliError::Config("a seed is required for random initial conditions".into()));
        }
        let p = self.model_spec().params(self.r).map_err(CliError::from_config)?;
        self.ic = self.ic.resolved(&p);
        self.ic.validate().map_err(CliError::from_config)?;
        self.stepper().validate().map_err(CliError::from_config)?;
        if let Some(g) = self.grid {
            Grid::new(g.nx, g.nz).validate(l, m).map_err(CliError::from_config)?;
        }
        if !(self.t_cut >= 0.0) {
            return Err(CliError::Config(format!("t_cut must be non-negative, got {}", self.t_cut)));
        }
        Ok(self)
    }

    pub fn model_spec(&self) -> ModelSpec {
        ModelSpec {
            kind: self.model,
            l_max: self.l_max.unwrap_or(1),
            m_max: self.m_max.unwrap_or(2),
            grid: self.grid.map(|g| Grid::new(g.nx, g.nz)),
            scheme: self.scheme,
        }
    }

    pub fn stepper(&self) -> StepperConfig {
        StepperConfig { dt: self.dt, t_end: self.t_end, output_every: self.output_every, snapshot_every: self.snapshot_every }
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            stepper: self.stepper(),
            t_cut: self.t_cut,
            classifier: self.classifier,
            lyapunov: self.lyapunov,
            seed: self.seed.unwrap_or(0),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration serializes")
    }
}
