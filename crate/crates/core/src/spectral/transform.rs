//! Transforms between half-spectrum amplitudes and physical grids.
//!
//! The grid is uniform in `x` on `[0, l_x)` and uses the interior points
//! `z_j = j / (N_z + 1)`, `j = 1..=N_z` in the vertical, so that the discrete
//! sine transform is exact for modes `m <= N_z`. Grid arrays are stored
//! z-major: row `j` holds the `N_x` samples at height `z_j`.

use super::SpectralState;
use crate::error::{Error, Result};
use crate::params::Params;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Vertical basis used when synthesizing a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZBasis {
    Sin,
    Cos,
}

/// Streamfunction and temperature sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalFields {
    pub nx: usize,
    pub nz: usize,
    pub lx: f64,
    pub psi: Vec<f64>,
    pub theta: Vec<f64>,
    pub x_coords: Vec<f64>,
    pub z_coords: Vec<f64>,
    pub t: f64,
}

impl PhysicalFields {
    pub fn zeros(nx: usize, nz: usize, lx: f64) -> Self {
        Self {
            nx,
            nz,
            lx,
            psi: vec![0.0; nx * nz],
            theta: vec![0.0; nx * nz],
            x_coords: uniform_x(nx, lx),
            z_coords: interior_z(nz),
            t: 0.0,
        }
    }

    #[inline]
    pub fn at(&self, field: &[f64], ix: usize, iz: usize) -> f64 {
        field[iz * self.nx + ix]
    }

    pub fn max_abs(&self) -> (f64, f64) {
        let m = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        (m(&self.psi), m(&self.theta))
    }
}

pub fn uniform_x(nx: usize, lx: f64) -> Vec<f64> {
    (0..nx).map(|n| n as f64 * lx / nx as f64).collect()
}

pub fn interior_z(nz: usize) -> Vec<f64> {
    (1..=nz).map(|j| j as f64 / (nz + 1) as f64).collect()
}

/// Reusable transform engine for one truncation and one grid.
pub struct Transform {
    l_max: usize,
    m_max: usize,
    nx: usize,
    nz: usize,
    uniform: bool,
    z_nodes: Vec<f64>,
    // [m][j], m = 1..=M stored at m-1
    sin_tab: Vec<f64>,
    cos_tab: Vec<f64>,
    // [j][m], transposed sine table for the forward projection
    sin_tab_t: Vec<f64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
    prof_a: Vec<Complex64>,
    prof_b: Vec<Complex64>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform")
            .field("l_max", &self.l_max)
            .field("m_max", &self.m_max)
            .field("nx", &self.nx)
            .field("nz", &self.nz)
            .finish()
    }
}

impl Transform {
    /// Engine on the uniform interior grid. Requires `nx >= 2L+1` and
    /// `nz >= M` for exactness of the forward projection.
    pub fn new(l_max: usize, m_max: usize, nx: usize, nz: usize) -> Result<Self> {
        if nx < 2 * l_max + 1 {
            return Err(Error::UnresolvedGrid { nx, nz, l_max, m_max, reason: "N_x must be at least 2L+1" });
        }
        if nz < m_max {
            return Err(Error::UnresolvedGrid { nx, nz, l_max, m_max, reason: "N_z must be at least M" });
        }
        Ok(Self::build(l_max, m_max, nx, interior_z(nz), true))
    }

    /// Synthesis-only engine evaluating profiles at arbitrary heights.
    pub fn with_z_nodes(l_max: usize, m_max: usize, nx: usize, z_nodes: Vec<f64>) -> Result<Self> {
        if nx < 2 * l_max + 1 {
            return Err(Error::UnresolvedGrid { nx, nz: z_nodes.len(), l_max, m_max, reason: "N_x must be at least 2L+1" });
        }
        Ok(Self::build(l_max, m_max, nx, z_nodes, false))
    }

    fn build(l_max: usize, m_max: usize, nx: usize, z_nodes: Vec<f64>, uniform: bool) -> Self {
        let nz = z_nodes.len();
        let mut sin_tab = vec![0.0; m_max * nz];
        let mut cos_tab = vec![0.0; m_max * nz];
        let mut sin_tab_t = vec![0.0; m_max * nz];
        for m in 1..=m_max {
            for (j, &z) in z_nodes.iter().enumerate() {
                let arg = m as f64 * PI * z;
                sin_tab[(m - 1) * nz + j] = arg.sin();
                cos_tab[(m - 1) * nz + j] = arg.cos();
                sin_tab_t[j * m_max + (m - 1)] = arg.sin();
            }
        }
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(nx);
        let fft_inv = planner.plan_fft_inverse(nx);
        let scratch_len = fft_fwd.get_inplace_scratch_len().max(fft_inv.get_inplace_scratch_len());
        let zero = Complex64::new(0.0, 0.0);
        Self {
            l_max,
            m_max,
            nx,
            nz,
            uniform,
            z_nodes,
            sin_tab,
            cos_tab,
            sin_tab_t,
            fft_fwd,
            fft_inv,
            prof_a: vec![zero; (l_max + 1) * nz],
            prof_b: vec![zero; (l_max + 1) * nz],
            buf: vec![zero; nx],
            scratch: vec![zero; scratch_len],
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn z_nodes(&self) -> &[f64] {
        &self.z_nodes
    }

    fn profiles(
        coeffs: &[Complex64],
        basis: ZBasis,
        sin_tab: &[f64],
        cos_tab: &[f64],
        l_max: usize,
        m_max: usize,
        nz: usize,
        prof: &mut [Complex64],
    ) {
        let tab = match basis {
            ZBasis::Sin => sin_tab,
            ZBasis::Cos => cos_tab,
        };
        prof.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for l in 0..=l_max {
            let row = &mut prof[l * nz..(l + 1) * nz];
            for m in 0..m_max {
                let c = coeffs[l * m_max + m];
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                let t = &tab[m * nz..(m + 1) * nz];
                for (p, &s) in row.iter_mut().zip(t) {
                    p.re += c.re * s;
                    p.im += c.im * s;
                }
            }
        }
    }

    /// Synthesizes two real fields at once from half-spectrum coefficients
    /// `(L+1) x M`, each with its own vertical basis. Outputs are z-major.
    pub fn to_grid_pair(
        &mut self,
        ca: &[Complex64],
        basis_a: ZBasis,
        cb: &[Complex64],
        basis_b: ZBasis,
        out_a: &mut [f64],
        out_b: &mut [f64],
    ) {
        let (l_max, m_max, nz, nx) = (self.l_max, self.m_max, self.nz, self.nx);
        debug_assert_eq!(ca.len(), (l_max + 1) * m_max);
        debug_assert_eq!(cb.len(), (l_max + 1) * m_max);
        Self::profiles(ca, basis_a, &self.sin_tab, &self.cos_tab, l_max, m_max, nz, &mut self.prof_a);
        Self::profiles(cb, basis_b, &self.sin_tab, &self.cos_tab, l_max, m_max, nz, &mut self.prof_b);
        let i = Complex64::new(0.0, 1.0);
        for j in 0..nz {
            self.buf.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            let a0 = self.prof_a[j];
            let b0 = self.prof_b[j];
            self.buf[0] = Complex64::new(a0.re - b0.im, a0.im + b0.re);
            for l in 1..=l_max {
                let a = self.prof_a[l * nz + j];
                let b = self.prof_b[l * nz + j];
                self.buf[l] = a + i * b;
                self.buf[nx - l] = a.conj() + i * b.conj();
            }
            self.fft_inv.process_with_scratch(&mut self.buf, &mut self.scratch);
            let ra = &mut out_a[j * nx..(j + 1) * nx];
            for (o, c) in ra.iter_mut().zip(&self.buf) {
                *o = c.re;
            }
            let rb = &mut out_b[j * nx..(j + 1) * nx];
            for (o, c) in rb.iter_mut().zip(&self.buf) {
                *o = c.im;
            }
        }
    }

    /// Synthesizes a single field.
    pub fn to_grid(&mut self, c: &[Complex64], basis: ZBasis, out: &mut [f64]) {
        let (l_max, m_max, nz, nx) = (self.l_max, self.m_max, self.nz, self.nx);
        Self::profiles(c, basis, &self.sin_tab, &self.cos_tab, l_max, m_max, nz, &mut self.prof_a);
        for j in 0..nz {
            self.buf.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            self.buf[0] = self.prof_a[j];
            for l in 1..=l_max {
                let a = self.prof_a[l * nz + j];
                self.buf[l] = a;
                self.buf[nx - l] = a.conj();
            }
            self.fft_inv.process_with_scratch(&mut self.buf, &mut self.scratch);
            for (o, c) in out[j * nx..(j + 1) * nx].iter_mut().zip(&self.buf) {
                *o = c.re;
            }
        }
    }

    /// Largest imaginary residue left by synthesizing `c`; zero up to
    /// roundoff for any half-spectrum input.
    pub fn synthesis_imag_residue(&mut self, c: &[Complex64]) -> f64 {
        let (l_max, m_max, nz, nx) = (self.l_max, self.m_max, self.nz, self.nx);
        Self::profiles(c, ZBasis::Sin, &self.sin_tab, &self.cos_tab, l_max, m_max, nz, &mut self.prof_a);
        let mut worst = 0.0f64;
        for j in 0..nz {
            self.buf.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            self.buf[0] = self.prof_a[j];
            for l in 1..=l_max {
                let a = self.prof_a[l * nz + j];
                self.buf[l] = a;
                self.buf[nx - l] = a.conj();
            }
            self.fft_inv.process_with_scratch(&mut self.buf, &mut self.scratch);
            worst = self.buf.iter().fold(worst, |w, c| w.max(c.im.abs()));
        }
        worst
    }

    /// Projects two z-major sine-type grid fields onto the retained
    /// half-spectrum. Only valid on the uniform interior grid.
    pub fn from_grid_pair(&mut self, fa: &[f64], fb: &[f64], ca: &mut [Complex64], cb: &mut [Complex64]) {
        assert!(self.uniform, "forward projection needs the uniform interior grid");
        let (l_max, m_max, nz, nx) = (self.l_max, self.m_max, self.nz, self.nx);
        let norm = 1.0 / nx as f64;
        for j in 0..nz {
            let ra = &fa[j * nx..(j + 1) * nx];
            let rb = &fb[j * nx..(j + 1) * nx];
            for ((c, &a), &b) in self.buf.iter_mut().zip(ra).zip(rb) {
                *c = Complex64::new(a, b);
            }
            self.fft_fwd.process_with_scratch(&mut self.buf, &mut self.scratch);
            let z0 = self.buf[0];
            self.prof_a[j] = Complex64::new(z0.re * norm, 0.0);
            self.prof_b[j] = Complex64::new(z0.im * norm, 0.0);
            for l in 1..=l_max {
                let zk = self.buf[l];
                let zn = self.buf[nx - l].conj();
                // F_a = (Z_k + conj Z_{-k}) / 2, F_b = (Z_k - conj Z_{-k}) / 2i
                let fa_k = (zk + zn) * 0.5;
                let d = (zk - zn) * 0.5;
                let fb_k = Complex64::new(d.im, -d.re);
                self.prof_a[l * nz + j] = fa_k * norm;
                self.prof_b[l * nz + j] = fb_k * norm;
            }
        }
        let w = 2.0 / (nz + 1) as f64;
        Self::project_z(&self.prof_a, &self.sin_tab_t, l_max, m_max, nz, w, ca);
        Self::project_z(&self.prof_b, &self.sin_tab_t, l_max, m_max, nz, w, cb);
    }

    fn project_z(prof: &[Complex64], tab_t: &[f64], l_max: usize, m_max: usize, nz: usize, w: f64, out: &mut [Complex64]) {
        out.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for l in 0..=l_max {
            let row = &mut out[l * m_max..(l + 1) * m_max];
            for j in 0..nz {
                let f = prof[l * nz + j] * w;
                let t = &tab_t[j * m_max..(j + 1) * m_max];
                for (o, &s) in row.iter_mut().zip(t) {
                    o.re += f.re * s;
                    o.im += f.im * s;
                }
            }
        }
    }
}

fn check_output_grid(p_l: usize, p_m: usize, nx: usize, nz: usize) -> Result<()> {
    if nx < 2 * (2 * p_l + 1) {
        return Err(Error::UnresolvedGrid { nx, nz, l_max: p_l, m_max: p_m, reason: "N_x must be at least 2(2L+1)" });
    }
    if nz < 2 * (p_m + 1) {
        return Err(Error::UnresolvedGrid { nx, nz, l_max: p_l, m_max: p_m, reason: "N_z must be at least 2(M+1)" });
    }
    Ok(())
}

/// Evaluates `psi` and `theta` on an `nx x nz` interior grid.
pub fn synthesize(s: &SpectralState, lx: f64, nx: usize, nz: usize) -> Result<PhysicalFields> {
    check_output_grid(s.l_max(), s.m_max(), nx, nz)?;
    let mut tr = Transform::new(s.l_max(), s.m_max(), nx, nz)?;
    let mut f = PhysicalFields::zeros(nx, nz, lx);
    tr.to_grid_pair(&s.psi, ZBasis::Sin, &s.theta, ZBasis::Sin, &mut f.psi, &mut f.theta);
    f.t = s.t;
    Ok(f)
}

/// Discrete-quadrature mode amplitudes of gridded fields, truncated to the
/// `(L, M)` of `p`.
pub fn analyze(f: &PhysicalFields, p: &Params) -> Result<SpectralState> {
    check_output_grid(p.l_max, p.m_max, f.nx, f.nz)?;
    let mut tr = Transform::new(p.l_max, p.m_max, f.nx, f.nz)?;
    let mut s = SpectralState::for_params(p);
    tr.from_grid_pair(&f.psi, &f.theta, &mut s.psi, &mut s.theta);
    s.enforce_reality();
    s.t = f.t;
    Ok(s)
}
