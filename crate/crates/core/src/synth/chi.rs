//! The chi_{h,rp} building blocks of the extension operator.
//!
//! For p >= 1 the governing quotient sequence is
//!
//! ```text
//! tau^p = (1, (h lambda_{p,s})^{1/r} x 2pr, (h nu_{2p+1})^{1/r} x r,
//!            (h nu_{2p+2})^{1/r} x r, ...)
//! ```
//!
//! (p = 0 degenerates to the scaled interpolating quotients of N). The bump
//! rho_{h,p} over tau^p is multiplied by t^{rp}/(rp)! in the spatial domain:
//!
//! ```text
//! chi_{h,rp}(t) = rho_{h,p}(t) t^{rp} / (rp)!
//! ```
//!
//! which gives chi^(j)(0) = delta_{j,rp} up to the truncation order, support
//! inside [-1, 1] once the parameter conditions hold, and the derivative
//! bound |chi^{(rj)}(t)| <= (N_j/M_p) (2 A e s / h^{1/r})^{rp} h^j
//! (2 + 1/(2A))^{rj}.

use crate::conditions::lambda_ps;
use crate::error::{Error, Result};
use crate::synth::bump::{build_bump_on, Bump};
use crate::synth::rep::{FunctionRep, Grid, MonomialFactor};
use crate::weight::WeightSequence;

/// Smallest integer l satisfying the three parameter conditions
///
/// (a) B/l < 1/2,
/// (b) 2 A r p / (l lambda_{p,s}^{1/r}) < 1 for all p,
/// (c) 2 A e s / l^{1/r} < 1/2,
///
/// together with d = l^{1/r} (2 + 1/(2A)).
///
/// `lambda_logs[p]` holds log lambda_{p,s} for p = 1..; condition (b)'s sup
/// is taken over the table and must have settled (the last quarter may not
/// carry the maximum while still rising), else the table is too short.
pub fn choose_parameters(
    a_const: f64,
    s: u32,
    r: u32,
    b_sum: f64,
    lambda_logs: &[f64],
) -> Result<(u64, f64)> {
    if !(a_const >= 1.0) || s < 1 || r < 1 || !(b_sum >= 0.0) {
        return Err(Error::InvalidArgument("choose_parameters: need A >= 1, s, r >= 1, B >= 0".into()));
    }
    if lambda_logs.len() < 8 {
        return Err(Error::LambdaTableTooShort(format!(
            "{} entries; need at least 8",
            lambda_logs.len()
        )));
    }
    let rf = r as f64;
    // (b): l > 2 A r * sup_p p / lambda_{p,s}^{1/r}.
    let ratios: Vec<f64> = lambda_logs
        .iter()
        .enumerate()
        .map(|(i, &ll)| (i + 1) as f64 * (-ll / rf).exp())
        .collect();
    let w_sup = ratios.iter().cloned().fold(0.0f64, f64::max);
    let quarter = ratios.len() / 4;
    let tail_max = ratios[ratios.len() - quarter..]
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    if tail_max >= w_sup && ratios[ratios.len() - 1] >= 0.999 * tail_max && w_sup > 0.0 {
        return Err(Error::LambdaTableTooShort(format!(
            "p / lambda^(1/r) still rising at the end of the table (sup {w_sup:.3e})"
        )));
    }
    let l_a = (2.0 * b_sum).floor() as u64 + 1;
    let l_b = (2.0 * a_const * rf * w_sup).floor() as u64 + 1;
    let c_bound = (4.0 * a_const * std::f64::consts::E * s as f64).powi(r as i32);
    if !c_bound.is_finite() {
        return Err(Error::InvalidArgument("condition (c) bound overflows".into()));
    }
    let l_c = c_bound.floor() as u64 + 1;
    let l = l_a.max(l_b).max(l_c);
    let d = (l as f64).powf(1.0 / rf) * (2.0 + 1.0 / (2.0 * a_const));
    Ok((l, d))
}

/// A constructed chi block.
#[derive(Debug, Clone)]
pub struct Chi {
    pub rep: FunctionRep,
    pub p: usize,
    pub h: u64,
    /// Sum of the widths actually convolved (measured support radius).
    pub support_radius: f64,
    pub k_boxes: usize,
}

/// Log quotients of tau^p (indices 1..=k_boxes).
fn tau_p_logs(
    m: &WeightSequence,
    n: &WeightSequence,
    r: u32,
    h: u64,
    p: usize,
    s: u32,
    k_boxes: usize,
) -> Result<Vec<f64>> {
    let rf = r as f64;
    let log_h = (h as f64).ln();
    let mut out = Vec::with_capacity(k_boxes);
    if p >= 1 {
        let ll = lambda_ps(m, n, p, s)?;
        let w = (log_h + ll) / rf;
        for _ in 0..(2 * p * r as usize).min(k_boxes) {
            out.push(w);
        }
    }
    let mut k = 2 * p + 1;
    while out.len() < k_boxes {
        let lq = n.log_quotient(k)?;
        for _ in 0..r {
            if out.len() >= k_boxes {
                break;
            }
            out.push((log_h + lq) / rf);
        }
        k += 1;
    }
    Ok(out)
}

/// Build chi_{h,rp} on the given grid. The support is verified directly
/// against the [-1, 1] budget; the grid must resolve the smallest width.
#[allow(clippy::too_many_arguments)]
pub fn build_chi(
    m: &WeightSequence,
    n: &WeightSequence,
    r: u32,
    h: u64,
    p: usize,
    s: u32,
    k_boxes: usize,
    grid: Grid,
) -> Result<Chi> {
    if r < 1 || s < 1 || h < 1 {
        return Err(Error::InvalidArgument("build_chi: need r, s, h >= 1".into()));
    }
    let tau = tau_p_logs(m, n, r, h, p, s, k_boxes)?;
    let plan_radius: f64 = tau.iter().map(|&lt| (-lt).exp()).sum();
    if plan_radius > 1.0 {
        return Err(Error::SupportExceeded { radius: plan_radius, budget: 1.0 });
    }
    let Bump { rep: rho, plan, .. } = build_bump_on(&tau, grid)?;
    let rp = r as usize * p;
    let rep = if rp == 0 {
        rho
    } else {
        let scale = (1..=rp).fold(1.0f64, |acc, i| acc * i as f64);
        rho.with_factors(
            vec![MonomialFactor { degree: rp, scale }],
            format!("chi: h={h}, rp={rp}, {k_boxes} boxes"),
        )
    };
    Ok(Chi { rep, p, h, support_radius: plan.support_radius, k_boxes })
}
