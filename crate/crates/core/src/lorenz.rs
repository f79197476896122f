//! The three-variable Lorenz model in rescaled time `tau`.

use crate::diagnostics::energy_report;
use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::params::{t_of_tau, Params};
use crate::spectral::{lorenz_to_spectral, synthesize, PhysicalFields};
use crate::trajectory::{csv_err, fmt_f64, Sample, Trajectory};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorenzState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub tau: f64,
}

impl LorenzState {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z, tau: 0.0 }
    }

    pub fn xyz(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LorenzTrajectory {
    pub samples: Vec<LorenzState>,
    pub dtau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LorenzScheme {
    /// Implicit Euler on the linear part, forward Euler on `-XZ`, `XY`.
    #[default]
    Imex,
    Rk4,
}

pub fn lorenz_rhs(s: &LorenzState, p: &Params) -> (f64, f64, f64) {
    (p.sigma * (s.y - s.x), p.r * s.x - s.y - s.x * s.z, s.x * s.y - p.b * s.z)
}

/// Origin, plus the two convecting states for `r > 1`.
pub fn lorenz_fixed_points(p: &Params) -> Vec<(f64, f64, f64)> {
    let mut out = vec![(0.0, 0.0, 0.0)];
    if p.r > 1.0 {
        let c = (p.b * (p.r - 1.0)).sqrt();
        out.push((c, c, p.r - 1.0));
        out.push((-c, -c, p.r - 1.0));
    }
    out
}

/// Jacobian of `lorenz_rhs` at `s`.
pub fn lorenz_jacobian(s: &LorenzState, p: &Params) -> [[f64; 3]; 3] {
    [[-p.sigma, p.sigma, 0.0], [p.r - s.z, -1.0, -s.x], [s.y, s.x, -p.b]]
}

/// Single-step integrator for the Lorenz model.
#[derive(Debug, Clone)]
pub struct LorenzStepper {
    p: Params,
    dtau: f64,
    scheme: LorenzScheme,
    // inverse of the (X, Y) block of I - dtau A, and 1 / (1 + dtau b)
    inv: [[f64; 2]; 2],
    inv_z: f64,
}

impl LorenzStepper {
    pub fn new(p: &Params, dtau: f64, scheme: LorenzScheme) -> Result<Self> {
        if !(dtau > 0.0 && dtau.is_finite()) {
            return Err(Error::InvalidParameter(format!("dtau must be positive, got {dtau}")));
        }
        let a = 1.0 + dtau * p.sigma;
        let d = 1.0 + dtau;
        let det = a * d - dtau * dtau * p.sigma * p.r;
        if !(det > 0.0) {
            return Err(Error::InvalidParameter(format!("dtau = {dtau} too large for the implicit Lorenz solve")));
        }
        Ok(Self {
            p: *p,
            dtau,
            scheme,
            inv: [[d / det, dtau * p.sigma / det], [dtau * p.r / det, a / det]],
            inv_z: 1.0 / (1.0 + dtau * p.b),
        })
    }

    pub fn dtau(&self) -> f64 {
        self.dtau
    }

    pub fn step(&self, s: &mut LorenzState) -> Result<()> {
        let h = self.dtau;
        match self.scheme {
            LorenzScheme::Imex => {
                let rx = s.x;
                let ry = s.y - h * s.x * s.z;
                let rz = s.z + h * s.x * s.y;
                s.x = self.inv[0][0] * rx + self.inv[0][1] * ry;
                s.y = self.inv[1][0] * rx + self.inv[1][1] * ry;
                s.z = self.inv_z * rz;
            }
            LorenzScheme::Rk4 => {
                let f = |v: &LorenzState| lorenz_rhs(v, &self.p);
                let at = |v: &LorenzState, k: (f64, f64, f64), c: f64| LorenzState {
                    x: v.x + c * k.0,
                    y: v.y + c * k.1,
                    z: v.z + c * k.2,
                    tau: v.tau,
                };
                let k1 = f(s);
                let k2 = f(&at(s, k1, 0.5 * h));
                let k3 = f(&at(s, k2, 0.5 * h));
                let k4 = f(&at(s, k3, h));
                s.x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                s.y += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
                s.z += h / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2);
            }
        }
        s.tau += h;
        if !s.is_finite() {
            return Err(Error::BlowUp { t: t_of_tau(s.tau, &self.p) });
        }
        Ok(())
    }
}

/// IMEX trajectory sampled at every step, `tau` in `[s0.tau, tau_end]`.
pub fn integrate_lorenz(s0: LorenzState, tau_end: f64, dtau: f64, p: &Params) -> Result<LorenzTrajectory> {
    integrate_lorenz_with(s0, tau_end, dtau, p, LorenzScheme::Imex, 1)
}

pub fn integrate_lorenz_with(
    s0: LorenzState,
    tau_end: f64,
    dtau: f64,
    p: &Params,
    scheme: LorenzScheme,
    every: usize,
) -> Result<LorenzTrajectory> {
    let st = LorenzStepper::new(p, dtau, scheme)?;
    let every = every.max(1);
    let n = ((tau_end - s0.tau) / dtau).round().max(0.0) as usize;
    let mut s = s0;
    let mut samples = Vec::with_capacity(n / every + 1);
    samples.push(s);
    for k in 1..=n {
        st.step(&mut s)?;
        // tau from the step count keeps the spacing exactly uniform
        s.tau = s0.tau + k as f64 * dtau;
        if k % every == 0 {
            samples.push(s);
        }
    }
    Ok(LorenzTrajectory { samples, dtau: dtau * every as f64 })
}

/// Lorenz streamfunction and temperature on an `nx x nz` interior grid.
pub fn reconstruct_fields(s: &LorenzState, p: &Params, nx: usize, nz: usize) -> Result<PhysicalFields> {
    let q = p.with_truncation(1, 2)?;
    let mut spec = lorenz_to_spectral(s.x, s.y, s.z, &q);
    spec.t = t_of_tau(s.tau, p);
    synthesize(&spec, p.lx, nx, nz)
}

impl LorenzTrajectory {
    pub fn to_csv_string(&self, p: &Params) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["tau", "t", "X", "Y", "Z"]).map_err(csv_err)?;
        for s in &self.samples {
            w.write_record([s.tau, t_of_tau(s.tau, p), s.x, s.y, s.z].map(fmt_f64)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write_csv(&self, path: &Path, p: &Params) -> Result<()> {
        write_atomic(path, self.to_csv_string(p)?.as_bytes())
    }

    /// Model-time trajectory with the energies of the equivalent spectral
    /// state attached.
    pub fn to_trajectory(&self, p: &Params) -> Result<Trajectory> {
        let q = p.with_truncation(1, 2)?;
        let samples = self
            .samples
            .iter()
            .map(|s| {
                let mut spec = lorenz_to_spectral(s.x, s.y, s.z, &q);
                spec.t = t_of_tau(s.tau, p);
                Sample { t: spec.t, x: s.x, y: s.y, z: s.z, energy: energy_report(&spec, &q) }
            })
            .collect();
        Ok(Trajectory::from_samples(samples))
    }
}
