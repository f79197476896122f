//! Initial conditions.

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::CounterRng;
use crate::spectral::{lorenz_to_spectral, synthesize, SpectralState};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IcKind {
    LorenzLike,
    RandomModes,
    RandomFields,
}

/// Initial-condition description. `X`, `Y`, `Z` default to
/// `(0.01, 0, r - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcSpec {
    pub kind: IcKind,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(rename = "Z", default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_epsilon() -> f64 {
    1e-4
}

impl IcSpec {
    pub fn lorenz_like(x: f64, y: f64, z: f64) -> Self {
        Self { kind: IcKind::LorenzLike, x: Some(x), y: Some(y), z: Some(z), epsilon: default_epsilon() }
    }

    /// `(0.01, 0, r - 1)`, resolved at run time.
    pub fn standard() -> Self {
        Self { kind: IcKind::LorenzLike, x: None, y: None, z: None, epsilon: default_epsilon() }
    }

    pub fn random_modes(epsilon: f64) -> Self {
        Self { kind: IcKind::RandomModes, epsilon, ..Self::standard() }
    }

    pub fn random_fields(epsilon: f64) -> Self {
        Self { kind: IcKind::RandomFields, epsilon, ..Self::standard() }
    }

    pub fn xyz(&self, p: &Params) -> (f64, f64, f64) {
        (self.x.unwrap_or(0.01), self.y.unwrap_or(0.0), self.z.unwrap_or(p.r - 1.0))
    }

    /// Fills in the defaulted amplitudes for `p`.
    pub fn resolved(&self, p: &Params) -> Self {
        let (x, y, z) = self.xyz(p);
        Self { x: Some(x), y: Some(y), z: Some(z), ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind != IcKind::LorenzLike && !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1] for random initial conditions, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Per-mode draws in `(l, m)` row-major order, `psi` block before `theta`,
/// real part before imaginary part; every complex entry has modulus below
/// `eps`. The `l = 0` imaginary draws are consumed and discarded.
fn random_state(p: &Params, eps: f64, seed: u64) -> SpectralState {
    let mut rng = CounterRng::new(seed);
    let a = eps * FRAC_1_SQRT_2;
    let mut s = SpectralState::for_params(p);
    for field in [&mut s.psi, &mut s.theta] {
        for c in field.iter_mut() {
            let re = rng.next_symmetric(a);
            let im = rng.next_symmetric(a);
            *c = Complex64::new(re, im);
        }
    }
    s.enforce_reality();
    s
}

pub fn make_initial_state(ic: &IcSpec, p: &Params, seed: u64) -> Result<SpectralState> {
    ic.validate()?;
    let (x, y, z) = ic.xyz(p);
    match ic.kind {
        IcKind::LorenzLike => Ok(lorenz_to_spectral(x, y, z, p)),
        IcKind::RandomModes => {
            // Lorenz amplitudes on top of small random values in every other
            // real coordinate
            let mut s = random_state(p, ic.epsilon, seed);
            let base = lorenz_to_spectral(x, y, z, p);
            s.psi[p.m_max].im = base.psi_at(1, 1).im;
            s.theta[p.m_max].re = base.theta_at(1, 1).re;
            s.theta[1].re = base.theta_at(0, 2).re;
            Ok(s)
        }
        IcKind::RandomFields => {
            let mut s = random_state(p, ic.epsilon, seed);
            let f = synthesize(&s, p.lx, 2 * (2 * p.l_max + 1), 2 * (p.m_max + 1))?;
            let (mp, mt) = f.max_abs();
            // keep both fields strictly below eps on the grid
            for (field, peak) in [(&mut s.psi, mp), (&mut s.theta, mt)] {
                if peak >= ic.epsilon {
                    let k = 0.999 * ic.epsilon / peak;
                    field.iter_mut().for_each(|c| *c *= k);
                }
            }
            Ok(s)
        }
    }
}
