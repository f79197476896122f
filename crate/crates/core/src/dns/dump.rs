//! Gridded field dumps.
//!
//! A dump is a JSON object `{"N_x", "N_z", "l_x", "t", "z", "psi", "theta"}`.
//! `N_z` counts interior heights; `z` lists `N_z + 2` heights including both
//! walls, and `psi`, `theta` are row-major `(N_z + 2) x N_x` arrays whose row
//! `j` holds the samples at `z[j]` for `x = k l_x / N_x`, `k = 0..N_x`.

use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::spectral::snapshot::to_json_17;
use crate::spectral::PhysicalFields;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct FieldDump {
    #[serde(rename = "N_x")]
    nx: usize,
    #[serde(rename = "N_z")]
    nz: usize,
    l_x: f64,
    t: f64,
    z: Vec<f64>,
    psi: Vec<Vec<f64>>,
    theta: Vec<Vec<f64>>,
}

fn with_walls(field: &[f64], nx: usize, nz: usize) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(nz + 2);
    rows.push(vec![0.0; nx]);
    rows.extend(field.chunks(nx).map(|r| r.to_vec()));
    rows.push(vec![0.0; nx]);
    rows
}

pub fn field_dump_to_string(f: &PhysicalFields) -> Result<String> {
    let mut z = Vec::with_capacity(f.nz + 2);
    z.push(0.0);
    z.extend_from_slice(&f.z_coords);
    z.push(1.0);
    to_json_17(&FieldDump {
        nx: f.nx,
        nz: f.nz,
        l_x: f.lx,
        t: f.t,
        z,
        psi: with_walls(&f.psi, f.nx, f.nz),
        theta: with_walls(&f.theta, f.nx, f.nz),
    })
}

/// Parses a dump back into interior-grid fields.
pub fn field_dump_from_str(text: &str) -> Result<PhysicalFields> {
    let d: FieldDump = serde_json::from_str(text)?;
    let shape_ok = |a: &Vec<Vec<f64>>| a.len() == d.nz + 2 && a.iter().all(|r| r.len() == d.nx);
    if d.nx == 0 || d.nz == 0 || !shape_ok(&d.psi) || !shape_ok(&d.theta) || d.z.len() != d.nz + 2 {
        return Err(Error::Format(format!("field dump arrays do not match N_x = {}, N_z = {}", d.nx, d.nz)));
    }
    let mut f = PhysicalFields::zeros(d.nx, d.nz, d.l_x);
    for j in 0..d.nz {
        f.psi[j * d.nx..(j + 1) * d.nx].copy_from_slice(&d.psi[j + 1]);
        f.theta[j * d.nx..(j + 1) * d.nx].copy_from_slice(&d.theta[j + 1]);
    }
    f.z_coords = d.z[1..=d.nz].to_vec();
    f.t = d.t;
    Ok(f)
}

pub fn write_field_dump(path: &Path, f: &PhysicalFields) -> Result<()> {
    write_atomic(path, field_dump_to_string(f)?.as_bytes())
}

pub fn read_field_dump(path: &Path) -> Result<PhysicalFields> {
    field_dump_from_str(&std::fs::read_to_string(path)?)
}
