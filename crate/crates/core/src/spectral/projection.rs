//! Maps between Lorenz amplitudes `(X, Y, Z)` and the spectral state.

use super::{PhysicalFields, SpectralState};
use crate::params::Params;
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

/// Scale factors of the Lorenz ansatz
/// `psi = cx X sin(ax) sin(bz)`, `theta = cy Y cos(ax) sin(bz) - cz Z sin(2bz)`.
#[derive(Debug, Clone, Copy)]
pub struct LorenzCoefficients {
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl LorenzCoefficients {
    pub fn new(p: &Params) -> Self {
        let k2 = p.k2_fundamental();
        let a = p.alpha;
        let b = p.beta;
        let cz = k2.powi(3) / (a * a * b * p.ra);
        Self { cx: SQRT_2 * k2 / (a * b), cy: SQRT_2 * cz, cz }
    }
}

/// Lorenz amplitudes embedded as `psi_11`, `theta_11` and `theta_02` in a
/// state of truncation `(p.l_max, p.m_max)`.
pub fn lorenz_to_spectral(x: f64, y: f64, z: f64, p: &Params) -> SpectralState {
    let c = LorenzCoefficients::new(p);
    let mut s = SpectralState::for_params(p);
    s.set_psi(1, 1, Complex64::new(0.0, -0.5 * x * c.cx));
    s.set_theta(1, 1, Complex64::new(0.5 * y * c.cy, 0.0));
    s.set_theta(0, 2, Complex64::new(-z * c.cz, 0.0));
    s
}

/// Lorenz amplitudes carried by a spectral state.
pub fn project_xyz(s: &SpectralState, p: &Params) -> (f64, f64, f64) {
    let c = LorenzCoefficients::new(p);
    let x = -2.0 / c.cx * s.psi_at(1, 1).im;
    let y = 2.0 / c.cy * s.theta_at(1, 1).re;
    let z = -s.theta_at(0, 2).re / c.cz;
    (x, y, z)
}

/// Lorenz amplitudes by direct quadrature of gridded fields: trapezoid in
/// the periodic direction and over the interior points (the fields vanish
/// on the walls) in the vertical.
pub fn project_xyz_from_fields(f: &PhysicalFields, p: &Params) -> (f64, f64, f64) {
    let k2 = p.k2_fundamental();
    let (a, b) = (p.alpha, p.beta);
    let dx = f.lx / f.nx as f64;
    let dz = 1.0 / (f.nz + 1) as f64;
    let sx: Vec<f64> = f.x_coords.iter().map(|&x| (a * x).sin()).collect();
    let cx: Vec<f64> = f.x_coords.iter().map(|&x| (a * x).cos()).collect();
    let (mut ix, mut iy, mut iz) = (0.0, 0.0, 0.0);
    for (j, &z) in f.z_coords.iter().enumerate() {
        let s1 = (b * z).sin();
        let s2 = (2.0 * b * z).sin();
        let row_p = &f.psi[j * f.nx..(j + 1) * f.nx];
        let row_t = &f.theta[j * f.nx..(j + 1) * f.nx];
        let (mut rx, mut ry, mut rz) = (0.0, 0.0, 0.0);
        for n in 0..f.nx {
            rx += row_p[n] * sx[n];
            ry += row_t[n] * cx[n];
            rz += row_t[n];
        }
        ix += rx * s1;
        iy += ry * s1;
        iz += rz * s2;
    }
    let w = dx * dz;
    let x = SQRT_2 * a * a * b / (PI * k2) * ix * w;
    let y = SQRT_2 * a.powi(3) * b * p.ra / (PI * k2.powi(3)) * iy * w;
    let z = -a.powi(3) * b * p.ra / (PI * k2.powi(3)) * iz * w;
    (x, y, z)
}
