//! Associated weight function omega_M(t) = sup_p log(t^p / M_p), the counting
//! function Sigma_M(t) = #{p >= 1 : mu_p <= t}, and the identities tying them
//! together.
//!
//! For log-convex M the summand p log t - log M_p increases while mu_p <= t
//! and decreases afterwards, so the sup is attained at p = Sigma_M(t) and
//!
//! ```text
//! omega_M(t) = sum_{k <= Sigma_M(t)} log(t / mu_k) = int_0^t Sigma_M(u) du/u
//! ```
//!
//! holds *exactly* as a finite sum of logs. The identity test is therefore a
//! structural check, not a quadrature-tolerance check. The mixed integral
//! condition int_1^inf omega_N(tu)/u^{1+1/r} du <= C omega_M(t) + C is the
//! only place where real quadrature enters.

use crate::error::{Error, Result};
use crate::report::{CondParams, Condition, ConditionReport, Verdict};
use crate::util::{kahan_sum, log_spaced};
use crate::weight::WeightSequence;

/// One evaluation of the associated function.
#[derive(Debug, Clone, Copy)]
pub struct AssocEval {
    pub t: f64,
    pub omega: f64,
    /// Index attaining the sup.
    pub argmax_p: usize,
    /// Sigma_M(t); equals argmax_p for log-convex M.
    pub sigma: usize,
}

/// Check that (M_p)^{1/p} tends to infinity, the standing assumption that
/// keeps omega finite. Envelope route when available, last-quarter scan
/// fallback otherwise.
fn roots_diverge(m: &WeightSequence, horizon: usize) -> Result<bool> {
    if let Some(env) = m.envelope() {
        return Ok(env.beta > 0.0 || (env.beta == 0.0 && env.alpha > 0.0));
    }
    let logs = m.logs(horizon)?;
    let at = |p: usize| logs[p] / p as f64;
    Ok(at(horizon) > at(horizon / 2) + 0.1)
}

/// omega_M(t) by direct maximization. For log-convex M the scan stops once
/// mu_p > t; otherwise all p up to the horizon are visited.
pub fn omega(m: &WeightSequence, t: f64, horizon: usize) -> Result<AssocEval> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must be > 0")));
    }
    let horizon = m.clamp_horizon(horizon);
    if !roots_diverge(m, horizon)? {
        return Err(Error::OmegaInfinite);
    }
    let log_t = t.ln();
    let lc = m.is_log_convex(horizon.max(2))?.verdict.holds();
    let logs = m.logs(horizon)?;

    let mut best = 0.0f64; // p = 0 term is 0
    let mut argmax = 0usize;
    let mut sigma = 0usize;
    let mut stopped = false;
    for p in 1..=horizon {
        let q = logs[p] - logs[p - 1];
        if q <= log_t {
            sigma = p;
        }
        let v = p as f64 * log_t - logs[p];
        if v > best {
            best = v;
            argmax = p;
        }
        if lc && q > log_t {
            // Summand decreasing from here on.
            stopped = true;
            break;
        }
    }
    if !stopped && lc {
        return Err(Error::HorizonExhausted(format!(
            "mu_p <= t for all p <= {horizon}; omega_M({t}) needs a larger horizon"
        )));
    }
    Ok(AssocEval { t, omega: best, argmax_p: argmax, sigma })
}

/// Sigma_M(t) = #{p >= 1 : mu_p <= t} by binary search (log-convex M).
pub fn sigma(m: &WeightSequence, t: f64, horizon: usize) -> Result<usize> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must be > 0")));
    }
    let horizon = m.clamp_horizon(horizon);
    let log_t = t.ln();
    let q = m.log_quotients(horizon)?;
    if q[horizon] <= log_t {
        return Err(Error::HorizonExhausted(format!(
            "mu_{horizon} <= t = {t}: count not resolved at the horizon"
        )));
    }
    // Quotients nondecreasing: find the last p with log mu_p <= log t.
    let (mut lo, mut hi) = (0usize, horizon);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if q[mid] <= log_t {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

/// Both routes to omega_M(t): the direct sup and the exact piecewise
/// evaluation of the integral of Sigma_M(u)/u.
pub fn integral_identity_check(
    m: &WeightSequence,
    t: f64,
    horizon: usize,
) -> Result<(f64, f64, f64)> {
    let eval = omega(m, t, horizon)?;
    let s = sigma(m, t, horizon)?;
    let log_t = t.ln();
    let q = m.log_quotients(m.clamp_horizon(horizon))?;
    // int_0^t Sigma(u) du/u = sum_{k <= sigma} log(t / mu_k), a sum of logs.
    let integral = kahan_sum((1..=s).map(|k| log_t - q[k]));
    let err = (eval.omega - integral).abs();
    Ok((eval.omega, integral, err))
}

/// Both sides of the power law omega_M(t^s) = s * omega_{M^{1/s}}(t).
pub fn power_law_check(
    m: &WeightSequence,
    t: f64,
    s: f64,
    horizon: usize,
) -> Result<(f64, f64)> {
    if !(t > 0.0 && s > 0.0) {
        return Err(Error::InvalidArgument("power law needs t > 0, s > 0".into()));
    }
    let lhs = omega(m, t.powf(s), horizon)?.omega;
    let root = m.power(1.0 / s)?;
    let rhs = s * omega(&root, t, horizon)?.omega;
    Ok((lhs, rhs))
}

/// Result of the mixed integral condition scan.
#[derive(Debug, Clone)]
pub struct IntegralConditionReport {
    pub report: ConditionReport,
    /// Per-grid-point (t, I(t), C_hat(t)).
    pub samples: Vec<(f64, f64, f64)>,
    pub u_max: f64,
}

/// Evaluate I(t) = int_1^inf omega_N(t u) / u^{1+1/r} du across a log-spaced
/// t-grid and fit the constant C_hat(t) = I(t)/(1 + omega_M(t)).
///
/// The integral is split at `u_max`; the remainder is bounded rigorously from
/// N's envelope (power or log-power growth of omega_N). Without an envelope
/// the verdict degrades to Undetermined and I(t) is the truncated value.
pub fn check_integral_condition(
    m: &WeightSequence,
    n: &WeightSequence,
    r: f64,
    t_grid: &[f64],
    u_max: f64,
    horizon: usize,
) -> Result<IntegralConditionReport> {
    if !(r > 0.0) || t_grid.is_empty() || !(u_max > 1.0) {
        return Err(Error::InvalidArgument("integral condition needs r > 0, a t-grid, u_max > 1".into()));
    }
    let mut report = ConditionReport::new(Condition::IntegralGammaR, Verdict::Undetermined, horizon);
    report.params = CondParams::r(r);

    // Divergence certificate: with beta = 0 and alpha <= r the integrand
    // decays like u^{alpha-stuff}; omega_N(tu) grows at least like a positive
    // power of u^{1/alpha} with 1/alpha >= 1/r, so I(t) = +infinity.
    if let Some(env) = n.envelope() {
        if env.beta == 0.0 && env.alpha <= r {
            report.verdict = Verdict::Fails;
            report.sup_value = f64::INFINITY;
            report.note(format!(
                "envelope: omega_N(x) grows like x^(1/{}) with 1/{} >= 1/{r}; integral diverges",
                env.alpha, env.alpha
            ));
            return Ok(IntegralConditionReport { report, samples: Vec::new(), u_max });
        }
    }

    let mut samples = Vec::with_capacity(t_grid.len());
    let mut tail_missing = false;
    for &t in t_grid {
        let integral = integral_of_omega(n, t, r, u_max, horizon)?;
        let tail = envelope_tail(n, t, r, u_max);
        let total = integral + tail.unwrap_or(0.0);
        if tail.is_none() {
            tail_missing = true;
        }
        let om = omega(m, t, horizon)?.omega;
        let c_hat = total / (1.0 + om);
        samples.push((t, total, c_hat));
    }

    let c_max = samples.iter().map(|s| s.2).fold(f64::NEG_INFINITY, f64::max);
    let (witness, _) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .2.total_cmp(&b.1 .2))
        .unwrap();
    report.sup_value = c_max;
    report.witness_p = witness;

    // Stabilized when the top decade of t no longer pushes C_hat up by more
    // than 10% over the earlier maximum.
    let t_max = samples.last().unwrap().0;
    let top: Vec<f64> =
        samples.iter().filter(|s| s.0 >= t_max / 10.0).map(|s| s.2).collect();
    let rest: Vec<f64> =
        samples.iter().filter(|s| s.0 < t_max / 10.0).map(|s| s.2).collect();
    let top_max = top.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let rest_max = rest.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let growing = top_max > 1.1 * rest_max;
    if tail_missing {
        report.note("no envelope for the u-tail: truncated integral only");
        report.verdict = Verdict::Undetermined;
    } else if growing {
        report.verdict = Verdict::Fails;
        report.note(format!("C_hat grows: top-decade max {top_max:.4e} vs {rest_max:.4e}"));
    } else {
        report.verdict = Verdict::Holds;
        report.note(format!("C_hat stabilized at {c_max:.6e}"));
    }
    Ok(IntegralConditionReport { report, samples, u_max })
}

/// Adaptive Simpson quadrature of int_1^{u_max} omega_N(tu)/u^{1+1/r} du on
/// the substitution u = e^v.
fn integral_of_omega(
    n: &WeightSequence,
    t: f64,
    r: f64,
    u_max: f64,
    horizon: usize,
) -> Result<f64> {
    // omega_N(t e^v) e^{-v/r} dv on [0, ln u_max]. Fast omega via the
    // counting-function form for log-convex N.
    let horizon = n.clamp_horizon(horizon);
    let logs = n.logs(horizon)?;
    let q = n.log_quotients(horizon)?;
    let om = |x: f64| -> Result<f64> {
        let log_x = x.ln();
        if q[horizon] <= log_x {
            return Err(Error::HorizonExhausted(format!(
                "omega_N({x:.3e}) needs quotients beyond the horizon {horizon}"
            )));
        }
        let (mut lo, mut hi) = (0usize, horizon);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if q[mid] <= log_x {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok((lo as f64 * log_x - logs[lo]).max(0.0))
    };
    let f = |v: f64| -> Result<f64> { Ok(om(t * v.exp())? * (-v / r).exp()) };
    adaptive_simpson(&f, 0.0, u_max.ln(), 1e-9, 40)
}

fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a)?, f(b)?, f(c)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_rec(f, a, b, fa, fb, fc, whole, tol.max(1e-12 * whole.abs()), depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let (fd, fe) = (f(d)?, f(e)?);
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        Ok(left + right + delta / 15.0)
    } else {
        let l = simpson_rec(f, a, c, fa, fc, fd, left, tol / 2.0, depth - 1)?;
        let r = simpson_rec(f, c, b, fc, fb, fe, right, tol / 2.0, depth - 1)?;
        Ok(l + r)
    }
}

/// Rigorous bound on int_{u_max}^inf omega_N(tu)/u^{1+1/r} du from N's
/// envelope: omega_N(x) <= Sigma-bar(x) * ln x with Sigma-bar from the band.
fn envelope_tail(n: &WeightSequence, t: f64, r: f64, u_max: f64) -> Option<f64> {
    let env = n.envelope()?;
    let a = 1.0 / r;
    if env.beta == 0.0 {
        if env.alpha <= r {
            return None;
        }
        // Sigma_N(x) <= (x K)^(1/alpha) + onset with K = e^{slack - c}.
        let k1 = (env.slack - env.c).exp();
        let pow = 1.0 / env.alpha;
        let coeff = (t * k1).powf(pow);
        // omega_N(tu) <= coeff u^pow ln(tu) + onset ln(tu).
        let a_eff = a - pow; // > 0 since alpha > r
        let log_t = t.ln();
        // int_U^inf u^{-1-a_eff} (log_t + ln u) du and the onset part with
        // exponent -1-a.
        let part_pow = coeff * tail_loglinear(u_max, a_eff, log_t);
        let part_onset = env.onset as f64 * tail_loglinear(u_max, a, log_t);
        Some(part_pow + part_onset)
    } else if env.beta > 0.0 && env.alpha >= 0.0 {
        // Sigma_N(x) <= (ln x + slack - c)/beta + onset: omega is log-power.
        let log_t = t.ln();
        let c0 = (env.slack - env.c) / env.beta + env.onset as f64;
        // omega_N(tu) <= ((ln tu)/beta + c0) ln(tu)
        //            = (1/beta)(log_t + ln u)^2 + c0 (log_t + ln u).
        let q2 = tail_logquad(u_max, a);
        let q1 = tail_loglinear(u_max, a, 0.0);
        let q0 = u_max.powf(-a) / a;
        let sq = q2 + 2.0 * log_t * q1 + log_t * log_t * q0;
        Some(sq / env.beta + c0 * (q1 + log_t * q0))
    } else {
        None
    }
}

/// int_U^inf u^{-1-a} (k + ln u) du for a > 0.
fn tail_loglinear(u: f64, a: f64, k: f64) -> f64 {
    u.powf(-a) * ((k + u.ln()) / a + 1.0 / (a * a))
}

/// int_U^inf u^{-1-a} (ln u)^2 du for a > 0.
fn tail_logquad(u: f64, a: f64) -> f64 {
    let l = u.ln();
    u.powf(-a) * (l * l / a + 2.0 * l / (a * a) + 2.0 / (a * a * a))
}

/// Convenience wrapper used by the CLI: the default log-spaced t-grid.
pub fn default_t_grid() -> Vec<f64> {
    log_spaced(10.0, 1e6, 25)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle for omega: direct sup over p <= cap.
    fn omega_brute(m: &WeightSequence, t: f64, cap: usize) -> f64 {
        let logs = m.logs(cap).unwrap();
        (0..=cap)
            .map(|p| p as f64 * t.ln() - logs[p])
            .fold(0.0f64, f64::max)
    }

    #[test]
    fn omega_gevrey1_values() {
        let g1 = WeightSequence::gevrey(1.0).unwrap();
        // t = 3.5: sup at p = 3, value 3 ln 3.5 - ln 6.
        let eval = omega(&g1, 3.5, 1000).unwrap();
        let oracle = omega_brute(&g1, 3.5, 20);
        assert!((eval.omega - oracle).abs() < 1e-13);
        assert!((eval.omega - (3.0 * 3.5f64.ln() - 6f64.ln())).abs() < 1e-13);
        assert_eq!(eval.argmax_p, 3);

        // t = 1: p^0 wins.
        let eval = omega(&g1, 1.0, 1000).unwrap();
        assert_eq!(eval.omega, 0.0);
        assert_eq!(eval.argmax_p, 0);

        // t = e: p = 2 wins with 2 - ln 2.
        let eval = omega(&g1, std::f64::consts::E, 1000).unwrap();
        assert!((eval.omega - (2.0 - 2f64.ln())).abs() < 1e-13);
        assert_eq!(eval.argmax_p, 2);
    }

    #[test]
    fn omega_is_zero_below_m1_and_monotone_convex() {
        for m in crate::weight::catalog() {
            // omega = 0 for t <= M_1 on normalized log-convex members.
            let eval = omega(&m, 0.5, 1000).unwrap();
            assert_eq!(eval.omega, 0.0, "{}", m.label());

            // Nondecreasing in t and convex in log t. Keep t small enough
            // that Sigma stays within the horizon for gevrey s = 0.5.
            let ts = log_spaced(1.0, 100.0, 41);
            let vals: Vec<f64> = ts.iter().map(|&t| omega(&m, t, 200_000).unwrap().omega).collect();
            for w in vals.windows(2) {
                assert!(w[1] >= w[0] - 1e-12);
            }
            for i in 1..vals.len() - 1 {
                assert!(
                    vals[i] <= 0.5 * (vals[i - 1] + vals[i + 1]) + 1e-9,
                    "{} not log-convex at i={i}",
                    m.label()
                );
            }
        }
    }

    #[test]
    fn sigma_counts() {
        let g1 = WeightSequence::gevrey(1.0).unwrap();
        assert_eq!(sigma(&g1, 3.5, 1000).unwrap(), 3);
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        assert_eq!(sigma(&g2, 10.0, 1000).unwrap(), 3);
        assert_eq!(sigma(&g2, 0.5, 1000).unwrap(), 0);
    }

    #[test]
    fn sigma_equals_argmax_for_log_convex() {
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        for &t in &[2.0, 7.3, 100.0, 1234.5] {
            let eval = omega(&g2, t, 100_000).unwrap();
            assert_eq!(eval.argmax_p, eval.sigma);
            assert_eq!(eval.sigma, sigma(&g2, t, 100_000).unwrap());
        }
    }

    #[test]
    fn integral_identity_exact() {
        let g1 = WeightSequence::gevrey(1.0).unwrap();
        let (direct, integral, err) = integral_identity_check(&g1, 3.5, 1000).unwrap();
        // log 2 + 2 log(3/2) + 3 log(3.5/3).
        let expect = 2f64.ln() + 2.0 * 1.5f64.ln() + 3.0 * (3.5f64 / 3.0).ln();
        assert!((integral - expect).abs() < 1e-12);
        assert!(err <= 1e-10 * (1.0 + direct.abs()));

        // t below mu_1: both sides zero.
        let (d, i, _) = integral_identity_check(&g1, 0.5, 1000).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(i, 0.0);

        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let (d, _i, err) = integral_identity_check(&g2, 10.0, 1000).unwrap();
        assert!(err <= 1e-10 * (1.0 + d.abs()));
    }

    #[test]
    fn power_law_examples() {
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let (lhs, rhs) = power_law_check(&g2, 2.0, 2.0, 100_000).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));

        let (lhs, rhs) = power_law_check(&g2, 17.0, 1.0, 100_000).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));

        let g1 = WeightSequence::gevrey(1.0).unwrap();
        let (lhs, rhs) = power_law_check(&g1, 3.5, 3.0, 100_000).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
    }

    #[test]
    fn gevrey_slope_is_inverse_s() {
        // d log omega / d log t over [1e3, 1e6] equals 1/s within 0.05.
        for s in [1.0, 2.0, 3.0] {
            let m = WeightSequence::gevrey(s).unwrap();
            let o1 = omega(&m, 1e3, 2_000_000).unwrap().omega;
            let o2 = omega(&m, 1e6, 2_000_000).unwrap().omega;
            let slope = (o2.ln() - o1.ln()) / (1e6f64.ln() - 1e3f64.ln());
            assert!((slope - 1.0 / s).abs() < 0.05, "gevrey {s}: slope {slope}");
        }
    }

    #[test]
    fn integral_condition_matches_gamma() {
        let grid = log_spaced(10.0, 1e6, 20);
        let g3 = WeightSequence::gevrey(3.0).unwrap();
        let rep = check_integral_condition(&g3, &g3, 2.0, &grid, 1e6, 2_000_000).unwrap();
        assert!(rep.report.verdict.holds(), "{:?}", rep.report);

        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let rep = check_integral_condition(&g2, &g2, 3.0, &grid, 1e6, 2_000_000).unwrap();
        assert_eq!(rep.report.verdict, Verdict::Fails);

        let rep = check_integral_condition(&g2, &g2, 1.0, &grid, 1e6, 2_000_000).unwrap();
        assert!(rep.report.verdict.holds());
    }

    #[test]
    fn envelope_tail_dominates_truth() {
        // Compare the envelope tail bound against brute quadrature on a
        // segment beyond u_max.
        let g3 = WeightSequence::gevrey(3.0).unwrap();
        let t = 100.0;
        let r = 2.0;
        let u_max = 1e4;
        let bound = envelope_tail(&g3, t, r, u_max).unwrap();
        let f = |u: f64| omega_brute(&g3, t * u, 4000) / u.powf(1.0 + 1.0 / r);
        // Trapezoid on log-spaced points from u_max to 1e8.
        let grid = log_spaced(u_max, 1e8, 400);
        let mut truth = 0.0;
        for w in grid.windows(2) {
            truth += 0.5 * (f(w[0]) + f(w[1])) * (w[1] - w[0]);
        }
        assert!(bound >= truth, "tail bound {bound} below brute value {truth}");
        assert!(bound.is_finite());
    }
}
