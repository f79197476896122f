//! Implicit-explicit stepping shared by the Galerkin and pseudospectral
//! models.
//!
//! Each mode `(l, m)` carries the linear 2x2 system
//!
//! ```text
//! d psi/dt   = -sigma k^2 psi - i alpha_l sigma Ra theta / k^2 + f_psi
//! d theta/dt =  i alpha_l psi - k^2 theta                     + f_theta
//! ```
//!
//! with `f_psi = -N_psi / k^2` and `f_theta = N_theta`. The full linear block
//! is advanced with implicit Euler; the nonlinear forcing is explicit.

use crate::error::{Error, Result};
use crate::params::Params;
use crate::spectral::SpectralState;
use num_complex::Complex64;

/// Source of the convolution terms `(N_psi, N_theta)` for a state.
pub trait Nonlinear {
    fn eval(&mut self, s: &SpectralState, n_psi: &mut [Complex64], n_theta: &mut [Complex64]);
}

/// Nonlinearity switched off; used to study the linear operator alone.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoNonlinear;

impl Nonlinear for NoNonlinear {
    fn eval(&mut self, _: &SpectralState, n_psi: &mut [Complex64], n_theta: &mut [Complex64]) {
        n_psi.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        n_theta.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearScheme {
    ForwardEuler,
    /// Second-order Adams-Bashforth, bootstrapped with one forward Euler step.
    AdamsBashforth2,
}

/// Per-mode inverse of `I - dt A`:
/// `psi' = a r_psi + i b r_theta`, `theta' = i c r_psi + d r_theta`.
#[derive(Debug, Clone)]
struct LinearInverse {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
}

impl LinearInverse {
    fn new(p: &Params, dt: f64) -> Result<Self> {
        let n = p.n_modes();
        let mut inv = Self { a: vec![0.0; n], b: vec![0.0; n], c: vec![0.0; n], d: vec![0.0; n] };
        for l in 0..=p.l_max {
            let al = p.alpha_l(l as i64);
            for m in 1..=p.m_max {
                let k2 = p.k2(l as i64, m);
                let pp = 1.0 + dt * p.sigma * k2;
                let qq = 1.0 + dt * k2;
                let det = pp * qq - dt * dt * al * al * p.sigma * p.ra / k2;
                if !(det > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "dt = {dt} too large for the implicit solve of mode ({l}, {m})"
                    )));
                }
                let i = l * p.m_max + (m - 1);
                inv.a[i] = qq / det;
                inv.b[i] = -dt * al * p.sigma * p.ra / (k2 * det);
                inv.c[i] = dt * al / det;
                inv.d[i] = pp / det;
            }
        }
        Ok(inv)
    }
}

/// Time stepper for one truncation and one `dt`.
#[derive(Debug, Clone)]
pub struct ImexStepper {
    params: Params,
    dt: f64,
    scheme: NonlinearScheme,
    inv: LinearInverse,
    inv_k2: Vec<f64>,
    n_psi: Vec<Complex64>,
    n_theta: Vec<Complex64>,
    prev: Option<(Vec<Complex64>, Vec<Complex64>)>,
}

impl ImexStepper {
    pub fn new(p: &Params, dt: f64, scheme: NonlinearScheme) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let n = p.n_modes();
        let mut inv_k2 = vec![0.0; n];
        for l in 0..=p.l_max {
            for m in 1..=p.m_max {
                inv_k2[l * p.m_max + m - 1] = 1.0 / p.k2(l as i64, m);
            }
        }
        let zero = Complex64::new(0.0, 0.0);
        Ok(Self {
            params: *p,
            dt,
            scheme,
            inv: LinearInverse::new(p, dt)?,
            inv_k2,
            n_psi: vec![zero; n],
            n_theta: vec![zero; n],
            prev: None,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Drops the Adams-Bashforth history so the next step is forward Euler.
    pub fn reset_history(&mut self) {
        self.prev = None;
    }

    /// Advances `s` by one step in place.
    pub fn step(&mut self, s: &mut SpectralState, nl: &mut dyn Nonlinear) -> Result<()> {
        nl.eval(s, &mut self.n_psi, &mut self.n_theta);
        // forcing: f_psi = -N_psi / k^2, f_theta = N_theta
        for (f, &w) in self.n_psi.iter_mut().zip(&self.inv_k2) {
            *f *= -w;
        }
        let dt = self.dt;
        let ab2 = self.scheme == NonlinearScheme::AdamsBashforth2;
        let inv = &self.inv;
        let i = Complex64::new(0.0, 1.0);
        match (&self.prev, ab2) {
            (Some((pp, pt)), true) => {
                for k in 0..s.psi.len() {
                    let rp = s.psi[k] + (self.n_psi[k] * 1.5 - pp[k] * 0.5) * dt;
                    let rt = s.theta[k] + (self.n_theta[k] * 1.5 - pt[k] * 0.5) * dt;
                    s.psi[k] = rp * inv.a[k] + i * rt * inv.b[k];
                    s.theta[k] = i * rp * inv.c[k] + rt * inv.d[k];
                }
            }
            _ => {
                for k in 0..s.psi.len() {
                    let rp = s.psi[k] + self.n_psi[k] * dt;
                    let rt = s.theta[k] + self.n_theta[k] * dt;
                    s.psi[k] = rp * inv.a[k] + i * rt * inv.b[k];
                    s.theta[k] = i * rp * inv.c[k] + rt * inv.d[k];
                }
            }
        }
        if ab2 {
            match &mut self.prev {
                Some((pp, pt)) => {
                    pp.copy_from_slice(&self.n_psi);
                    pt.copy_from_slice(&self.n_theta);
                }
                None => self.prev = Some((self.n_psi.clone(), self.n_theta.clone())),
            }
        }
        s.enforce_reality();
        s.t += dt;
        if !s.is_finite() {
            return Err(Error::BlowUp { t: s.t });
        }
        Ok(())
    }
}

/// Time derivative of the full model: linear operator plus convolution terms.
pub fn rhs_with(s: &SpectralState, p: &Params, nl: &mut dyn Nonlinear) -> SpectralState {
    let n = p.n_modes();
    let zero = Complex64::new(0.0, 0.0);
    let mut n_psi = vec![zero; n];
    let mut n_theta = vec![zero; n];
    nl.eval(s, &mut n_psi, &mut n_theta);
    let i = Complex64::new(0.0, 1.0);
    let mut d = SpectralState::for_params(p);
    d.t = s.t;
    for l in 0..=p.l_max {
        let al = p.alpha_l(l as i64);
        for m in 1..=p.m_max {
            let k = l * p.m_max + m - 1;
            let k2 = p.k2(l as i64, m);
            d.theta[k] = -k2 * s.theta[k] + i * al * s.psi[k] + n_theta[k];
            d.psi[k] = -p.sigma * k2 * s.psi[k] - (i * al * p.sigma * p.ra * s.theta[k] + n_psi[k]) / k2;
        }
    }
    d.enforce_reality();
    d
}
