//! Spectral snapshot documents.
//!
//! A snapshot is a JSON object with keys `sigma`, `r`, `L`, `M`, `t`,
//! `psi_hat` and `theta_hat`; the amplitude arrays are `(L+1) x M` nested
//! arrays of `[re, im]` pairs in row-major `(l, m)` order. Floats are written
//! with 17 significant digits so that reading back is bit-exact.

use super::SpectralState;
use crate::error::{Error, Result};
use crate::params::Params;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct SnapshotDoc {
    sigma: f64,
    r: f64,
    #[serde(rename = "L")]
    l: usize,
    #[serde(rename = "M")]
    m: usize,
    t: f64,
    psi_hat: Vec<Vec<[f64; 2]>>,
    theta_hat: Vec<Vec<[f64; 2]>>,
}

/// JSON formatter writing every float as `{:.16e}`.
pub(crate) struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub(crate) fn to_json_17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

fn rows(v: &[Complex64], l_max: usize, m_max: usize) -> Vec<Vec<[f64; 2]>> {
    (0..=l_max).map(|l| v[l * m_max..(l + 1) * m_max].iter().map(|c| [c.re, c.im]).collect()).collect()
}

pub fn snapshot_to_string(s: &SpectralState, p: &Params) -> Result<String> {
    let doc = SnapshotDoc {
        sigma: p.sigma,
        r: p.r,
        l: s.l_max(),
        m: s.m_max(),
        t: s.t,
        psi_hat: rows(&s.psi, s.l_max(), s.m_max()),
        theta_hat: rows(&s.theta, s.l_max(), s.m_max()),
    };
    to_json_17(&doc)
}

/// Parses a snapshot, returning the state along with `(sigma, r)`.
pub fn snapshot_from_str(text: &str) -> Result<(SpectralState, f64, f64)> {
    let doc: SnapshotDoc = serde_json::from_str(text)?;
    if doc.m < 1 {
        return Err(Error::Format("snapshot has M = 0".into()));
    }
    let mut s = SpectralState::zeros(doc.l, doc.m);
    s.t = doc.t;
    for (name, src, dst) in [("psi_hat", &doc.psi_hat, &mut s.psi), ("theta_hat", &doc.theta_hat, &mut s.theta)] {
        if src.len() != doc.l + 1 || src.iter().any(|r| r.len() != doc.m) {
            return Err(Error::Format(format!("{name} must be a {} x {} array", doc.l + 1, doc.m)));
        }
        for (i, pair) in src.iter().flatten().enumerate() {
            dst[i] = Complex64::new(pair[0], pair[1]);
        }
    }
    Ok((s, doc.sigma, doc.r))
}

pub fn write_snapshot(path: &Path, s: &SpectralState, p: &Params) -> Result<()> {
    crate::io::write_atomic(path, snapshot_to_string(s, p)?.as_bytes())
}

pub fn read_snapshot(path: &Path) -> Result<(SpectralState, f64, f64)> {
    snapshot_from_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn snapshot_round_trip_is_bit_exact(
            vals in proptest::collection::vec(-1e6f64..1e6, 24),
            t in 0.0f64..100.0,
            scale in -300i32..300,
        ) {
            let p = Params::new(30.0, 2, 4).unwrap();
            let mut s = SpectralState::for_params(&p);
            let f = 10f64.powi(scale / 10);
            for (i, c) in s.psi.iter_mut().chain(s.theta.iter_mut()).enumerate() {
                *c = Complex64::new(vals[i % 24] * f, vals[(i + 7) % 24] / 3.0);
            }
            s.t = t;
            let text = snapshot_to_string(&s, &p).unwrap();
            let (back, sigma, r) = snapshot_from_str(&text).unwrap();
            prop_assert_eq!(sigma, 10.0);
            prop_assert_eq!(r, 30.0);
            prop_assert_eq!(back.t.to_bits(), s.t.to_bits());
            for (a, b) in back.psi.iter().chain(&back.theta).zip(s.psi.iter().chain(&s.theta)) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn document_layout() {
        let p = Params::new(30.0, 1, 2).unwrap();
        let mut s = SpectralState::for_params(&p);
        s.set_psi(1, 1, Complex64::new(0.0, -0.015));
        let text = snapshot_to_string(&s, &p).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["L"], 1);
        assert_eq!(v["M"], 2);
        assert_eq!(v["psi_hat"].as_array().unwrap().len(), 2);
        assert_eq!(v["psi_hat"][1][0][1].as_f64().unwrap(), -0.015);
        assert!(text.contains("-1.4999999999999999e-2"));
    }

    #[test]
    fn rejects_misshapen_arrays() {
        let bad = r#"{"sigma":10,"r":30,"L":1,"M":2,"t":0,"psi_hat":[[[0,0]]],"theta_hat":[[[0,0],[0,0]],[[0,0],[0,0]]]}"#;
        assert!(snapshot_from_str(bad).is_err());
    }
}
