//! Pseudospectral simulation: spectral derivatives, products on a padded
//! collocation grid, and the shared IMEX stepper with Adams-Bashforth
//! nonlinear terms.
//!
//! The vertical direction uses interior collocation points with a sine
//! transform, so the wall conditions hold exactly. Quadratic products are
//! free of aliasing into the retained modes when `N_x >= 3L + 1` and
//! `2 (N_z + 1) >= 3M + 1`; the grid check uses the slightly stronger
//! padding rule `N_x >= p (2L + 1)`, `N_z >= p (M + 1)`.

mod dump;

pub use dump::{field_dump_from_str, field_dump_to_string, read_field_dump, write_field_dump};

use crate::error::{Error, Result};
use crate::gele::{run, StepperConfig};
use crate::imex::{ImexStepper, Nonlinear, NonlinearScheme};
use crate::params::Params;
use crate::spectral::{analyze, PhysicalFields, SpectralState, Transform, ZBasis};
use crate::trajectory::Trajectory;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Ceiling on the time step.
pub const DT_MAX: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub nz: usize,
    pub dealias_pad: f64,
}

impl Grid {
    pub fn new(nx: usize, nz: usize) -> Self {
        Self { nx, nz, dealias_pad: 1.5 }
    }

    /// Smallest padded grid for `(L, M)`, with an even `N_x`.
    pub fn for_truncation(l_max: usize, m_max: usize) -> Self {
        let nx = (3 * (2 * l_max + 1)).div_ceil(2);
        let nz = (3 * (m_max + 1)).div_ceil(2);
        Self::new(nx + nx % 2, nz)
    }

    pub fn validate(&self, l_max: usize, m_max: usize) -> Result<()> {
        if !(self.dealias_pad >= 1.5) {
            return Err(Error::InvalidParameter(format!("dealias_pad must be at least 3/2, got {}", self.dealias_pad)));
        }
        let err = |reason| Error::UnresolvedGrid { nx: self.nx, nz: self.nz, l_max, m_max, reason };
        if (self.nx as f64) < self.dealias_pad * (2 * l_max + 1) as f64 {
            return Err(err("N_x below the padded streamwise mode count"));
        }
        if (self.nz as f64) < self.dealias_pad * (m_max + 1) as f64 {
            return Err(err("N_z below the padded vertical mode count"));
        }
        Ok(())
    }
}

/// Default retained spectrum and grid for a normalized Rayleigh number.
pub fn default_resolution(r: f64) -> (usize, usize, Grid) {
    if r <= 100.0 {
        (26, 26, Grid::new(80, 80))
    } else {
        (40, 40, Grid::new(128, 128))
    }
}

/// Transform-method convolution terms.
pub struct TransformNonlinear {
    tr: Transform,
    l_max: usize,
    m_max: usize,
    kx: Vec<Complex64>,
    kz: Vec<f64>,
    lap: Vec<f64>,
    coef: [Vec<Complex64>; 6],
    grid: [Vec<f64>; 6],
    prod: [Vec<f64>; 2],
}

impl std::fmt::Debug for TransformNonlinear {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransformNonlinear").field("transform", &self.tr).finish()
    }
}

impl TransformNonlinear {
    pub fn new(p: &Params, g: &Grid) -> Result<Self> {
        g.validate(p.l_max, p.m_max)?;
        let tr = Transform::new(p.l_max, p.m_max, g.nx, g.nz)?;
        let n = p.n_modes();
        let mut kx = vec![Complex64::new(0.0, 0.0); n];
        let mut kz = vec![0.0; n];
        let mut lap = vec![0.0; n];
        for l in 0..=p.l_max {
            for m in 1..=p.m_max {
                let k = l * p.m_max + m - 1;
                kx[k] = Complex64::new(0.0, p.alpha_l(l as i64));
                kz[k] = p.beta_m(m);
                lap[k] = -p.k2(l as i64, m);
            }
        }
        let zc = || vec![Complex64::new(0.0, 0.0); n];
        let zr = || vec![0.0; g.nx * g.nz];
        Ok(Self {
            tr,
            l_max: p.l_max,
            m_max: p.m_max,
            kx,
            kz,
            lap,
            coef: [zc(), zc(), zc(), zc(), zc(), zc()],
            grid: [zr(), zr(), zr(), zr(), zr(), zr()],
            prod: [zr(), zr()],
        })
    }

    /// Velocity components `(u, w) = (-psi_z, psi_x)` on the grid.
    pub fn velocity(&mut self, s: &SpectralState) -> (Vec<f64>, Vec<f64>) {
        let n = self.kx.len();
        let mut cz = vec![Complex64::new(0.0, 0.0); n];
        let mut cx = cz.clone();
        for k in 0..n {
            cz[k] = -s.psi[k] * self.kz[k];
            cx[k] = s.psi[k] * self.kx[k];
        }
        let len = self.tr.nx() * self.tr.nz();
        let (mut u, mut w) = (vec![0.0; len], vec![0.0; len]);
        self.tr.to_grid_pair(&cz, ZBasis::Cos, &cx, ZBasis::Sin, &mut u, &mut w);
        (u, w)
    }
}

impl Nonlinear for TransformNonlinear {
    fn eval(&mut self, s: &SpectralState, n_psi: &mut [Complex64], n_theta: &mut [Complex64]) {
        assert_eq!((s.l_max(), s.m_max()), (self.l_max, self.m_max), "truncation mismatch");
        let [c0, c1, c2, c3, c4, c5] = &mut self.coef;
        for k in 0..s.psi.len() {
            let (ps, th) = (s.psi[k], s.theta[k]);
            let lp = ps * self.lap[k];
            c0[k] = ps * self.kz[k]; // psi_z
            c1[k] = ps * self.kx[k]; // psi_x
            c2[k] = lp * self.kx[k]; // (lap psi)_x
            c3[k] = lp * self.kz[k]; // (lap psi)_z
            c4[k] = th * self.kx[k]; // theta_x
            c5[k] = th * self.kz[k]; // theta_z
        }
        let [g0, g1, g2, g3, g4, g5] = &mut self.grid;
        self.tr.to_grid_pair(c0, ZBasis::Cos, c1, ZBasis::Sin, g0, g1);
        self.tr.to_grid_pair(c2, ZBasis::Sin, c3, ZBasis::Cos, g2, g3);
        self.tr.to_grid_pair(c4, ZBasis::Sin, c5, ZBasis::Cos, g4, g5);
        let [pp, pt] = &mut self.prod;
        for i in 0..pp.len() {
            pp[i] = g0[i] * g2[i] - g1[i] * g3[i];
            pt[i] = g0[i] * g4[i] - g1[i] * g5[i];
        }
        self.tr.from_grid_pair(pp, pt, n_psi, n_theta);
        for m in 0..self.m_max {
            n_psi[m].im = 0.0;
            n_theta[m].im = 0.0;
        }
    }
}

/// Nonlinear terms of gridded fields, returned on the same grid (the `psi`
/// slot holds `N_psi`, the `theta` slot `N_theta`). Products are formed on
/// the padded grid `g` and truncated to the spectrum of `p`.
pub fn nonlinear_terms(f: &PhysicalFields, p: &Params, g: &Grid) -> Result<PhysicalFields> {
    let s = analyze(f, p)?;
    let terms = nonlinear_spectral(&s, p, g)?;
    let mut tr = Transform::new(p.l_max, p.m_max, f.nx, f.nz)?;
    let mut out = PhysicalFields::zeros(f.nx, f.nz, f.lx);
    tr.to_grid_pair(&terms.psi, ZBasis::Sin, &terms.theta, ZBasis::Sin, &mut out.psi, &mut out.theta);
    out.t = f.t;
    Ok(out)
}

/// Transform-method convolution terms packed into a state (`psi` holds
/// `N_psi`, `theta` holds `N_theta`).
pub fn nonlinear_spectral(s: &SpectralState, p: &Params, g: &Grid) -> Result<SpectralState> {
    let mut nl = TransformNonlinear::new(p, g)?;
    let mut out = SpectralState::for_params(p);
    nl.eval(s, &mut out.psi, &mut out.theta);
    out.t = s.t;
    Ok(out)
}

/// Largest stable step allowed by the advective CFL bound, capped at
/// [`DT_MAX`].
pub fn cfl_dt(s: &SpectralState, p: &Params, g: &Grid, safety: f64) -> Result<f64> {
    let mut nl = TransformNonlinear::new(&p.with_truncation(s.l_max(), s.m_max())?, g)?;
    Ok(cfl_dt_with(&mut nl, s, p, g, safety))
}

fn cfl_dt_with(nl: &mut TransformNonlinear, s: &SpectralState, p: &Params, g: &Grid, safety: f64) -> f64 {
    let (u, w) = nl.velocity(s);
    let umax = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let wmax = w.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let dx = p.lx / g.nx as f64;
    let dz = 1.0 / (g.nz + 1) as f64;
    let lim = |h: f64, v: f64| if v > 0.0 { h / v } else { f64::INFINITY };
    (safety * lim(dx, umax).min(lim(dz, wmax))).min(DT_MAX)
}

/// One step with forward-Euler nonlinear terms (the bootstrap step of the
/// Adams-Bashforth scheme).
pub fn step_dns(s: &SpectralState, p: &Params, g: &Grid, dt: f64) -> Result<SpectralState> {
    let mut st = ImexStepper::new(p, dt, NonlinearScheme::AdamsBashforth2)?;
    let mut nl = TransformNonlinear::new(p, g)?;
    let mut out = s.clone();
    st.step(&mut out, &mut nl)?;
    Ok(out)
}

/// Integrates with Adams-Bashforth nonlinear terms.
pub fn integrate_dns(s0: &SpectralState, p: &Params, g: &Grid, cfg: &StepperConfig) -> Result<Trajectory> {
    integrate_dns_with(s0, p, g, cfg, NonlinearScheme::AdamsBashforth2)
}

/// Integrates with a chosen nonlinear scheme. The CFL bound is checked at
/// every output sample; violations are recorded as warnings.
pub fn integrate_dns_with(
    s0: &SpectralState,
    p: &Params,
    g: &Grid,
    cfg: &StepperConfig,
    scheme: NonlinearScheme,
) -> Result<Trajectory> {
    let mut nl = CflMonitor {
        inner: TransformNonlinear::new(p, g)?,
        p: *p,
        g: *g,
        dt: cfg.dt,
        calls: 0,
        every: cfg.output_every,
        warnings: Vec::new(),
    };
    let mut tr = run(s0, p, cfg, scheme, &mut nl)?;
    tr.warnings = nl.warnings;
    Ok(tr)
}

struct CflMonitor {
    inner: TransformNonlinear,
    p: Params,
    g: Grid,
    dt: f64,
    calls: usize,
    every: usize,
    warnings: Vec<String>,
}

impl Nonlinear for CflMonitor {
    fn eval(&mut self, s: &SpectralState, n_psi: &mut [Complex64], n_theta: &mut [Complex64]) {
        if self.calls % self.every == 0 {
            let lim = cfl_dt_with(&mut self.inner, s, &self.p, &self.g, 1.0);
            if self.dt > lim && lim < DT_MAX && self.warnings.len() < 100 {
                self.warnings.push(format!("t = {:.6}: dt = {:e} exceeds the CFL limit {:e}", s.t, self.dt, lim));
            }
        }
        self.calls += 1;
        self.inner.eval(s, n_psi, n_theta);
    }
}
