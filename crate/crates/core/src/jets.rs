//! Sequence-space side of the Borel map: jets, seminorms |a|_{M,h}, the
//! convolution ring, and Roumieu/Beurling classification.
//!
//! A jet is a finite list of complex coefficients (the only thing the
//! extension operator consumes at desk scale) plus an optional growth
//! envelope |a_p| <= C h0^p M_p that stands in for the tail during
//! classification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weight::WeightSequence;

/// Roumieu ("exists h") or Beurling ("for all h") quantification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Roumieu,
    Beurling,
}

/// Declared tail growth |a_p| <= C * h^p * M_p relative to the reference
/// sequence used for classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JetEnvelope {
    #[serde(rename = "C")]
    pub c: f64,
    pub h: f64,
}

/// A finite jet targeted at the ramified Borel map: f^{(r j)}(0) = a_j.
#[derive(Debug, Clone, PartialEq)]
pub struct JetSpec {
    pub r: u32,
    pub coeffs: Vec<Complex64>,
    pub envelope: Option<JetEnvelope>,
    pub flavor: Flavor,
}

impl JetSpec {
    pub fn new(r: u32, coeffs: Vec<Complex64>) -> Self {
        JetSpec { r, coeffs, envelope: None, flavor: Flavor::Roumieu }
    }

    /// Unit jet e^p (1 at index p, zero elsewhere).
    pub fn unit(r: u32, p: usize, len: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len.max(p + 1)];
        coeffs[p] = Complex64::new(1.0, 0.0);
        JetSpec::new(r, coeffs)
    }

    pub fn with_envelope(mut self, c: f64, h: f64) -> Self {
        self.envelope = Some(JetEnvelope { c, h });
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Wire form: {"r", "coeffs": [[re, im], ...], "envelope", "flavor"}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.r,
            "coeffs": self.coeffs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "envelope": self.envelope,
            "flavor": self.flavor,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let r = v["r"].as_u64().ok_or_else(|| Error::InvalidArgument("jet: missing r".into()))? as u32;
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("jet: missing coeffs".into()))?
            .iter()
            .map(|c| {
                let re = c[0].as_f64().unwrap_or(f64::NAN);
                let im = c[1].as_f64().unwrap_or(f64::NAN);
                if re.is_nan() || im.is_nan() {
                    Err(Error::InvalidArgument("jet: bad coefficient".into()))
                } else {
                    Ok(Complex64::new(re, im))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let envelope = if v["envelope"].is_null() {
            None
        } else {
            Some(JetEnvelope {
                c: v["envelope"]["C"]
                    .as_f64()
                    .ok_or_else(|| Error::InvalidArgument("jet envelope: missing C".into()))?,
                h: v["envelope"]["h"]
                    .as_f64()
                    .ok_or_else(|| Error::InvalidArgument("jet envelope: missing h".into()))?,
            })
        };
        let flavor = match v["flavor"].as_str() {
            Some("beurling") => Flavor::Beurling,
            _ => Flavor::Roumieu,
        };
        Ok(JetSpec { r, coeffs, envelope, flavor })
    }
}

/// |a|_{M,h}, possibly infinite when the declared envelope outgrows h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Seminorm {
    Finite(f64),
    Infinite,
}

impl Seminorm {
    pub fn value(self) -> Option<f64> {
        match self {
            Seminorm::Finite(v) => Some(v),
            Seminorm::Infinite => None,
        }
    }
}

/// |a|_{M,h} = sup_p |a_p| / (h^p M_p), explicit part plus envelope tail.
///
/// The tail supremum of the envelope C h0^p M_p / (h^p M_p) is C (h0/h)^{P+1}
/// for h0 <= h and infinite otherwise.
pub fn seminorm(jet: &JetSpec, m: &WeightSequence, h: f64) -> Result<Seminorm> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("h = {h} must be > 0")));
    }
    let p_max = jet.order();
    let logs = m.logs(p_max)?;
    let log_h = h.ln();
    let mut sup = 0.0f64;
    for (p, a) in jet.coeffs.iter().enumerate() {
        let mag = a.norm();
        if mag > 0.0 {
            let v = (mag.ln() - p as f64 * log_h - logs[p]).exp();
            sup = sup.max(v);
        }
    }
    if let Some(env) = jet.envelope {
        if env.h > h {
            return Ok(Seminorm::Infinite);
        }
        let tail = env.c * (env.h / h).powi(p_max as i32 + 1);
        sup = sup.max(tail);
    }
    Ok(Seminorm::Finite(sup))
}

/// Cauchy product of the finite parts: (a * b)_n = sum_k a_k b_{n-k}.
/// Defined through the smaller of the two explicit orders; the result carries
/// no envelope and the weaker (Roumieu) flavor when the inputs disagree.
pub fn convolve(a: &JetSpec, b: &JetSpec) -> Result<JetSpec> {
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return Err(Error::ConvolutionOrder { requested: 0, available: 0 });
    }
    let n_max = a.order().min(b.order());
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for (n, c) in coeffs.iter_mut().enumerate() {
        for k in 0..=n {
            *c += a.coeffs[k] * b.coeffs[n - k];
        }
    }
    let flavor = if a.flavor == Flavor::Beurling && b.flavor == Flavor::Beurling {
        Flavor::Beurling
    } else {
        Flavor::Roumieu
    };
    Ok(JetSpec { r: a.r, coeffs, envelope: None, flavor })
}

/// Classification of a jet against a reference sequence over a grid of h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    /// Finite seminorm at every grid h and the envelope permits smaller h
    /// still (h0 strictly below the grid).
    BeurlingConsistent,
    /// Smallest grid h with a finite, non-growing seminorm.
    Roumieu { h_star: f64 },
    /// No grid h works at the explicit horizon.
    OutsideAtHorizon,
}

/// Decide where the jet sits relative to Lambda_{[M]} on the given h-grid.
///
/// With an envelope the tail rules: h passes iff h >= h0. Without one the
/// explicit coefficients are subjected to a trend test: a jet whose ratio
/// |a_p|/(h^p M_p) is still climbing at its last index is treated as outside
/// at that h (hence "at horizon").
pub fn classify(jet: &JetSpec, m: &WeightSequence, h_grid: &[f64]) -> Result<Classification> {
    if h_grid.is_empty() {
        return Err(Error::InvalidArgument("empty h grid".into()));
    }
    let mut grid = h_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let p_max = jet.order();
    let logs = m.logs(p_max)?;

    let passes = |h: f64| -> bool {
        if let Some(env) = jet.envelope {
            return env.h <= h;
        }
        // Trend test on log ratios.
        let v: Vec<f64> = jet
            .coeffs
            .iter()
            .enumerate()
            .map(|(p, a)| {
                if a.norm() == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    a.norm().ln() - p as f64 * h.ln() - logs[p]
                }
            })
            .collect();
        if v.len() < 4 {
            return true;
        }
        let argmax = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        let quarter = (v.len() / 4).max(2);
        let start = v.len() - quarter;
        let growing = argmax == v.len() - 1 && v[v.len() - 1] > v[start - 1] + 1e-12;
        !growing
    };

    let first_pass = grid.iter().copied().find(|&h| passes(h));
    match first_pass {
        None => Ok(Classification::OutsideAtHorizon),
        Some(h_star) => {
            let all_pass = grid.iter().all(|&h| passes(h));
            let env_permits_all = match jet.envelope {
                Some(env) => env.h < grid[0],
                None => true,
            };
            if all_pass && env_permits_all {
                Ok(Classification::BeurlingConsistent)
            } else {
                Ok(Classification::Roumieu { h_star })
            }
        }
    }
}
