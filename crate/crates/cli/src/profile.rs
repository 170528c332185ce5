//! Profile specifications: `sin`, `cos`, `zero`, `sawtooth` (optionally
//! scaled, e.g. `sin*2`), `fourier:b1,b2,...` for `sum b_k sin(k u)`, and
//! `sampled:PATH` for a `u,psi` CSV file.

use std::path::{Path, PathBuf};

use lebedev_core::transforms::PeriodicProfile;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Builtin { name: String, amplitude: f64 },
    Fourier(Vec<f64>),
    Sampled(PathBuf),
}

impl ProfileSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("fourier:") {
            let coefficients = rest
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad coefficient '{c}': {e}"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if coefficients.is_empty() {
                return Err("fourier profile needs at least one coefficient".into());
            }
            return Ok(ProfileSpec::Fourier(coefficients));
        }
        if let Some(path) = s.strip_prefix("sampled:") {
            return Ok(ProfileSpec::Sampled(PathBuf::from(path)));
        }
        let body = s.strip_prefix("builtin:").unwrap_or(s);
        let (name, amplitude) = match body.split_once('*') {
            Some((n, a)) => (n, a.parse::<f64>().map_err(|e| format!("bad amplitude '{a}': {e}"))?),
            None => (body, 1.0),
        };
        match name {
            "sin" | "cos" | "zero" | "sawtooth" => Ok(ProfileSpec::Builtin {
                name: name.into(),
                amplitude,
            }),
            other => Err(format!(
                "unknown profile '{other}' (expected sin, cos, zero, sawtooth, fourier:..., sampled:PATH)"
            )),
        }
    }

    pub fn build(&self) -> Result<PeriodicProfile, String> {
        let p = match self {
            ProfileSpec::Builtin { name, amplitude } => {
                let a = *amplitude;
                match name.as_str() {
                    "sin" => PeriodicProfile::sine_series(vec![a]),
                    "cos" => PeriodicProfile::cosine_series(vec![a]),
                    "zero" => Ok(PeriodicProfile::zero()),
                    _ if a == 1.0 => Ok(PeriodicProfile::sawtooth()),
                    _ => PeriodicProfile::new(format!("sawtooth*{a}"), a.abs(), move |u| {
                        a * PeriodicProfile::sawtooth().psi(u)
                    }),
                }
            }
            ProfileSpec::Fourier(b) => PeriodicProfile::sine_series(b.clone()),
            ProfileSpec::Sampled(path) => {
                let (us, psis) = read_samples(path)?;
                PeriodicProfile::sampled(us, psis)
            }
        };
        p.map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
struct Sample {
    u: f64,
    psi: f64,
}

fn read_samples(path: &Path) -> Result<(Vec<f64>, Vec<f64>), String> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["u", "psi"] {
        return Err(format!("{}: header must be 'u,psi'", path.display()));
    }
    let mut us = Vec::new();
    let mut psis = Vec::new();
    for row in reader.deserialize::<Sample>() {
        let s = row.map_err(|e| format!("{}: {e}", path.display()))?;
        us.push(s.u);
        psis.push(s.psi);
    }
    Ok((us, psis))
}
