//! The (non)quasianalyticity condition lattice.
//!
//! Everything here scans quotient data up to a horizon and combines it with
//! envelope tail bounds where available:
//!
//! * `nq_sum` - partial sums of sum (1/mu_p)^(1/r) with a rigorous tail,
//! * `lower_order` - liminf/limsup estimators for omega(M) and the exponent
//!   of convergence,
//! * `check_beta1` - liminf_p mu_{Qp}/mu_p > Q for some Q,
//! * `lambda_ps` - the kernel lambda^{M,N}_{p,s},
//! * `check_gamma_r` / `check_sv_r` - the mixed strong-nonquasianalyticity
//!   conditions,
//! * `is_quasianalytic` - the Denjoy-Carleman style decision for plain and
//!   r-ramified classes.

use crate::error::{Error, Result};
use crate::report::{scan_sup, CondParams, Condition, ConditionReport, Verdict};
use crate::util::{kahan_sum, suffix_sums};
use crate::weight::{WeightSequence, STAB_TOL};

/// Partial sum of sum_p (1/mu_p)^(1/r) together with convergence data.
#[derive(Debug, Clone)]
pub struct PartialSumReport {
    pub r: f64,
    pub horizon: usize,
    /// sum_{p=1}^{horizon} (1/mu_p)^{1/r}.
    pub partial_sum: f64,
    /// Rigorous bound on the tail beyond the horizon (envelope only).
    pub tail_bound: Option<f64>,
    pub converges: Verdict,
    pub notes: Vec<String>,
}

impl PartialSumReport {
    /// Partial sum plus tail bound when present.
    pub fn total_upper(&self) -> f64 {
        self.partial_sum + self.tail_bound.unwrap_or(0.0)
    }
}

/// sum_p (1/mu_p)^(1/r) decided at a horizon.
pub fn nq_sum(m: &WeightSequence, r: f64, horizon: usize) -> Result<PartialSumReport> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r = {r} must be > 0")));
    }
    let horizon = m.clamp_horizon(horizon).max(1);
    let q = m.log_quotients(horizon)?;
    let terms: Vec<f64> = (1..=horizon).map(|p| (-q[p] / r).exp()).collect();
    let partial_sum = kahan_sum(terms.iter().copied());
    let mut notes = Vec::new();

    let (converges, tail_bound) = match m.envelope() {
        Some(env) => {
            let verdict = env.nq_verdict(r);
            let tail = if verdict.holds() { env.nq_tail_upper(r, horizon) } else { None };
            notes.push("verdict from tail envelope".into());
            (verdict, tail)
        }
        None => {
            // No envelope: a finite scan cannot certify convergence. Flag
            // divergence when the terms have stopped decreasing (constant
            // quotients extend to a divergent series under any log-convex
            // continuation bounded by the last quotient).
            let quarter = (horizon / 4).max(1);
            let window = &q[horizon + 1 - quarter..=horizon];
            let spread = window.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
                - window.iter().fold(f64::INFINITY, |a, &b| a.min(b));
            if spread <= STAB_TOL && terms[horizon - 1] > 0.0 {
                notes.push("terms stopped decreasing over the last quarter".into());
                (Verdict::Fails, None)
            } else {
                notes.push("no envelope: tail unknown".into());
                (Verdict::Undetermined, None)
            }
        }
    };

    Ok(PartialSumReport { r, horizon, partial_sum, tail_bound, converges, notes })
}

/// Estimates of the lower order omega(M) = liminf log mu_p / log p and the
/// exponent of convergence lambda = limsup log p / log mu_p.
#[derive(Debug, Clone, Copy)]
pub struct LowerOrderEstimate {
    /// liminf estimator (min over the last quarter); infinite under a
    /// super-polynomial envelope.
    pub omega: f64,
    /// limsup estimator of log p / log mu_p over the same window.
    pub lambda: f64,
    /// Window [lo, hi] of indices the estimators were taken over.
    pub window: (usize, usize),
}

pub fn lower_order(m: &WeightSequence, horizon: usize) -> Result<LowerOrderEstimate> {
    if horizon < 100 {
        return Err(Error::HorizonTooSmall {
            horizon,
            need: "lower-order estimators need horizon >= 100".into(),
        });
    }
    let horizon = m.clamp_horizon(horizon);
    let q = m.log_quotients(horizon)?;
    let lo = horizon - horizon / 4;
    let mut omega = f64::INFINITY;
    let mut lambda = f64::NEG_INFINITY;
    for p in lo..=horizon {
        let lp = (p as f64).ln();
        let ratio = q[p] / lp;
        omega = omega.min(ratio);
        lambda = lambda.max(if q[p] > 0.0 { lp / q[p] } else { f64::INFINITY });
    }
    if let Some(env) = m.envelope() {
        if env.beta > 0.0 {
            omega = f64::INFINITY;
            lambda = 0.0;
        }
    }
    Ok(LowerOrderEstimate { omega, lambda, window: (lo, horizon) })
}

/// (beta_1): exists Q with liminf_p mu_{Qp}/mu_p > Q.
pub fn check_beta1(m: &WeightSequence, q_max: u32, horizon: usize) -> Result<ConditionReport> {
    if q_max < 2 {
        return Err(Error::InvalidArgument("Q_max must be >= 2".into()));
    }
    let horizon = m.clamp_horizon(horizon);
    if horizon < 8 {
        return Err(Error::HorizonTooSmall { horizon, need: "beta_1 scan needs horizon >= 8".into() });
    }
    let q = m.log_quotients(horizon)?;
    let margin = 1e-3;

    let mut report = ConditionReport::new(Condition::Beta1, Verdict::Undetermined, horizon);
    report.params = CondParams::none();

    // Envelope route: mu_{Qp}/mu_p tends to Q^alpha e^{beta(Q-1)p}.
    if let Some(env) = m.envelope() {
        if env.beta > 0.0 {
            report.verdict = Verdict::Holds;
            report.params.q = Some(2);
            report.sup_value = f64::INFINITY;
            report.note("envelope: ratio diverges for every Q");
            return Ok(report);
        }
        if env.beta == 0.0 && env.slack == 0.0 {
            // ratio -> Q^alpha exactly; (beta_1) iff alpha > 1.
            if env.alpha > 1.0 {
                let best_q = 2u32;
                report.verdict = Verdict::Holds;
                report.params.q = Some(best_q);
                report.sup_value = (best_q as f64).powf(env.alpha);
                report.note(format!("envelope: liminf mu_Qp/mu_p = Q^{} > Q", env.alpha));
            } else {
                report.verdict = Verdict::Fails;
                report.params.q = Some(q_max);
                report.sup_value = (2.0f64).powf(env.alpha);
                report.note(format!(
                    "envelope: liminf mu_Qp/mu_p = Q^{} <= Q for every Q",
                    env.alpha
                ));
            }
            return Ok(report);
        }
    }

    // Scan route: per-Q liminf estimate over the last quarter of p <= horizon/Q.
    let mut all_stable_below = true;
    let mut best: Option<(u32, f64)> = None;
    for qq in 2..=q_max {
        let pmax = horizon / qq as usize;
        if pmax < 4 {
            all_stable_below = false;
            continue;
        }
        let lo = pmax - pmax / 4;
        let mut est = f64::INFINITY;
        for p in lo..=pmax {
            est = est.min(q[qq as usize * p] - q[p]);
        }
        // Compare against the preceding quarter to see whether the estimate
        // has settled.
        let prev_lo = lo.saturating_sub(pmax / 4).max(1);
        let mut prev_est = f64::INFINITY;
        for p in prev_lo..lo {
            prev_est = prev_est.min(q[qq as usize * p] - q[p]);
        }
        let settled = (est - prev_est).abs() <= 1e-6 * est.abs().max(1.0);
        let ratio = est.exp();
        if ratio > qq as f64 + margin {
            best = Some((qq, ratio));
            break;
        }
        if !settled {
            all_stable_below = false;
        }
        if best.is_none() {
            best = Some((qq, ratio));
        }
    }
    match best {
        Some((qq, ratio)) if ratio > qq as f64 + margin => {
            report.verdict = Verdict::Holds;
            report.params.q = Some(qq);
            report.sup_value = ratio;
            report.witness_p = horizon / qq as usize;
            report.note("scan: liminf estimate exceeds Q + margin");
        }
        Some((qq, ratio)) => {
            report.verdict = if all_stable_below { Verdict::Fails } else { Verdict::Undetermined };
            report.params.q = Some(qq);
            report.sup_value = ratio;
            report.note("scan: no Q exceeded Q + margin up to Q_max");
        }
        None => {
            report.note("horizon too small for any Q");
        }
    }
    Ok(report)
}

/// log lambda^{M,N}_{p,s}: exact maximization over j = 0..p-1 of
/// (log M_p - p log s - log N_j)/(p - j).
pub fn lambda_ps(m: &WeightSequence, n: &WeightSequence, p: usize, s: u32) -> Result<f64> {
    if p < 1 || s < 1 {
        return Err(Error::InvalidArgument("lambda_{p,s} needs p >= 1, s >= 1".into()));
    }
    let lm_p = m.log_value(p)?;
    let ln = n.logs(p - 1 + 1)?;
    Ok(lambda_log_brute(lm_p, &ln[..p], p, s))
}

fn lambda_log_brute(lm_p: f64, log_n: &[f64], p: usize, s: u32) -> f64 {
    let c = lm_p - p as f64 * (s as f64).ln();
    let mut best = f64::NEG_INFINITY;
    for j in 0..p {
        best = best.max((c - log_n[j]) / (p - j) as f64);
    }
    best
}

/// Fast path: for discrete-convex log N the slope j -> (c - logN_j)/(p - j) is
/// weakly unimodal, so a ternary search finds its maximum.
fn lambda_log_unimodal(lm_p: f64, log_n: &[f64], p: usize, s: u32) -> f64 {
    let c = lm_p - p as f64 * (s as f64).ln();
    let g = |j: usize| (c - log_n[j]) / (p - j) as f64;
    let (mut lo, mut hi) = (0usize, p - 1);
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if g(m1) < g(m2) {
            lo = m1 + 1;
        } else {
            hi = m2;
        }
    }
    let mut best = f64::NEG_INFINITY;
    for j in lo..=hi {
        best = best.max(g(j));
    }
    best
}

/// Per-p table of log lambda^{M,N}_{p,s}. Uses the unimodal fast path when
/// the caller certifies log-convexity of N.
fn lambda_log_table(
    log_m: &[f64],
    log_n: &[f64],
    p_max: usize,
    s: u32,
    n_log_convex: bool,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(p_max + 1);
    out.push(f64::NEG_INFINITY); // p = 0 unused
    for p in 1..=p_max {
        let v = if n_log_convex && p > 64 {
            lambda_log_unimodal(log_m[p], log_n, p, s)
        } else {
            lambda_log_brute(log_m[p], &log_n[..p], p, s)
        };
        out.push(v);
    }
    out
}

/// Common scaffolding for the gamma_r / SV_r scans: nu-term suffix sums plus
/// a rigorous tail.
struct NuTail {
    suffix: Vec<f64>,
    tail: Option<f64>,
    nq: PartialSumReport,
}

fn nu_tail(n: &WeightSequence, r: f64, horizon: usize) -> Result<NuTail> {
    let nq = nq_sum(n, r, horizon)?;
    let qn = n.log_quotients(horizon)?;
    let terms: Vec<f64> = (1..=horizon).map(|k| (-qn[k] / r).exp()).collect();
    let mut suffix = suffix_sums(&terms);
    // suffix[k - 1] = sum_{j >= k}; re-index so suffix[k] = sum_{j >= k}.
    suffix.insert(0, f64::NAN);
    Ok(NuTail { suffix, tail: nq.tail_bound, nq })
}

/// Envelope verdict for sup_{p > p0} mu_p^{1/r}/p * sum_{k >= p}(1/nu_k)^{1/r}:
/// decides whether the un-scanned region can push the sup beyond a bound.
///
/// With quotient exponents (alpha, beta) for both sequences the product
/// behaves like p^{(alpha_m - alpha_n)/r} times exp-of-(beta difference):
/// bounded iff the M-growth does not outrun the N-tail decay.
enum TailSup {
    /// Rigorous bound on the sup over p > p0.
    Bounded(f64),
    /// The product provably diverges.
    Divergent,
    /// No envelopes, or the bands are too loose to decide.
    Unknown,
}

fn envelope_tail_sup(
    env_m: Option<crate::weight::TailEnvelope>,
    env_n: Option<crate::weight::TailEnvelope>,
    r: f64,
    p0: usize,
) -> TailSup {
    let (Some(em), Some(en)) = (env_m, env_n) else {
        return TailSup::Unknown;
    };
    if p0 + 1 < em.onset.max(en.onset) {
        return TailSup::Unknown;
    }
    let db = em.beta - en.beta;
    let da = em.alpha - en.alpha;
    if db > 0.0 || (db == 0.0 && da > 0.0) {
        // Lower bound: p terms of the nu-sum give
        // mu_p^{1/r}/p * p (1/nu_2p)^{1/r} >= (mu_p / nu_{2p})^{1/r} -> inf.
        return TailSup::Divergent;
    }
    // The per-p bound A(p) = e^{hi(mu_p)/r} / p * tail_upper(nu, p-1) has
    // p-exponent (alpha_m - alpha_n)/r <= 0 (and an extra exponential decay
    // when beta_m < beta_n), so its sup over p > p0 is controlled by A(p0+1)
    // up to the slop of replacing p-1 by p.
    let p1 = p0 + 1;
    let Some(tail) = en.nq_tail_upper(r, p1 - 1) else {
        return TailSup::Unknown;
    };
    let a1 = (em.log_quotient_hi(p1) / r).exp() / p1 as f64 * tail;
    // Margin for the discrete p-dependence around p1.
    TailSup::Bounded(a1 * (1.0 + 2.0 / p1 as f64).powf(em.alpha.abs() / r + 1.0))
}

/// (M,N)_{gamma_r}: sup_p (mu_p)^{1/r}/p * sum_{k>=p} (1/nu_k)^{1/r} < infinity.
/// Call with M = N for the plain (gamma_r).
pub fn check_gamma_r(
    m: &WeightSequence,
    n: &WeightSequence,
    r: f64,
    horizon: usize,
) -> Result<ConditionReport> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r = {r} must be > 0")));
    }
    let horizon = m.clamp_horizon(n.clamp_horizon(horizon));
    if horizon < 8 {
        return Err(Error::HorizonTooSmall { horizon, need: "gamma_r scan needs horizon >= 8".into() });
    }
    let mut report = ConditionReport::new(Condition::GammaR, Verdict::Undetermined, horizon);
    report.params = CondParams::r(r);

    let cmp = m.compare(n, horizon)?;
    if !cmp.preceq_holds() {
        report.note("warning: M preceq N not confirmed at horizon");
    }

    let tail = nu_tail(n, r, horizon)?;
    if tail.nq.converges == Verdict::Fails {
        report.verdict = Verdict::Fails;
        report.sup_value = f64::INFINITY;
        report.witness_p = 1;
        report.note("sum (1/nu_k)^{1/r} diverges, so every partial product does");
        return Ok(report);
    }
    let tail_bound = tail.tail;
    report.tail_bound = tail_bound;

    let qm = m.log_quotients(horizon)?;
    let p_max = horizon / 2;
    let extra = tail_bound.unwrap_or(0.0);
    let vals: Vec<f64> = (1..=p_max)
        .map(|p| (qm[p] / r).exp() / p as f64 * (tail.suffix[p] + extra))
        .collect();
    let scan = scan_sup(&vals, 1, STAB_TOL);
    report.sup_value = scan.sup;
    report.witness_p = scan.witness;

    let rigorous = tail.nq.converges == Verdict::Holds && tail_bound.is_some();
    match envelope_tail_sup(m.envelope(), n.envelope(), r, p_max) {
        TailSup::Bounded(beyond) if rigorous => {
            // sup_value stays the scanned supremum; the un-scanned region is
            // certified separately.
            report.verdict = Verdict::Holds;
            report.note(format!("envelope bounds the un-scanned region by {beyond:.6e}"));
        }
        TailSup::Divergent => {
            report.verdict = Verdict::Fails;
            report.sup_value = f64::INFINITY;
            report.note("envelope: mu-growth outruns the nu-tail decay");
        }
        _ if rigorous && scan.stabilized => {
            report.verdict = Verdict::Holds;
            report.note("nu-tail rigorous; scan stabilized");
        }
        _ if rigorous => {
            report.verdict = Verdict::Undetermined;
            report.note("sup still growing at horizon");
        }
        _ => {
            report.note("nu-tail not certified");
        }
    }
    Ok(report)
}

/// (M,N)_{SV_r}: exists s with
/// sup_p (lambda^{M,N}_{p,s})^{1/r}/p * sum_{k>=p} (1/nu_k)^{1/r} < infinity.
///
/// Searches s = 1..=s_max and reports the first stabilized s. Larger s only
/// shrinks lambda, so small s suffice in practice; the cap is recorded.
pub fn check_sv_r(
    m: &WeightSequence,
    n: &WeightSequence,
    r: f64,
    s_max: u32,
    horizon: usize,
) -> Result<ConditionReport> {
    if !(r > 0.0) || s_max < 1 {
        return Err(Error::InvalidArgument("SV_r needs r > 0, s_max >= 1".into()));
    }
    let horizon = m.clamp_horizon(n.clamp_horizon(horizon));
    if horizon < 8 {
        return Err(Error::HorizonTooSmall { horizon, need: "SV_r scan needs horizon >= 8".into() });
    }
    let mut report = ConditionReport::new(Condition::SvR, Verdict::Undetermined, horizon);
    report.params = CondParams::r(r);

    let cmp = m.compare(n, horizon)?;
    if !cmp.preceq_holds() {
        report.note("warning: M preceq N not confirmed at horizon");
    }

    let tail = nu_tail(n, r, horizon)?;
    if tail.nq.converges == Verdict::Fails {
        // Choosing p = 1 in the condition forces (nq_r) for N.
        report.verdict = Verdict::Fails;
        report.sup_value = f64::INFINITY;
        report.witness_p = 1;
        report.params.s = Some(1);
        report.note("N fails (nq_r): the k >= 1 tail already diverges");
        return Ok(report);
    }
    let tail_bound = tail.tail;
    report.tail_bound = tail_bound;
    let extra = tail_bound.unwrap_or(0.0);

    let p_max = horizon / 2;
    let log_m = m.logs(p_max)?;
    let log_n = n.logs(p_max)?;
    let n_lc = n.is_log_convex(p_max)?.verdict.holds();

    // Pointwise constant M <= C N (when it settles): lets the envelope bound
    // the un-scanned region through lambda_{p,s} <= C min(mu_p, nu_p).
    let gaps: Vec<f64> = (0..=p_max).map(|p| log_m[p] - log_n[p]).collect();
    let gap_scan = scan_sup(&gaps, 0, STAB_TOL);
    let tail_sup_bound = if gap_scan.stabilized {
        match envelope_tail_sup(m.envelope(), n.envelope(), r, p_max) {
            TailSup::Bounded(beyond) => Some((gap_scan.sup.max(0.0) / r).exp() * beyond),
            _ => None,
        }
    } else {
        None
    };
    let rigorous = tail.nq.converges == Verdict::Holds && tail_bound.is_some();

    let mut last = None;
    for s in 1..=s_max {
        let lambda = lambda_log_table(&log_m, &log_n, p_max, s, n_lc);
        let vals: Vec<f64> = (1..=p_max)
            .map(|p| (lambda[p] / r).exp() / p as f64 * (tail.suffix[p] + extra))
            .collect();
        let scan = scan_sup(&vals, 1, STAB_TOL);
        last = Some((s, scan));
        if rigorous && (scan.stabilized || tail_sup_bound.is_some()) {
            report.verdict = Verdict::Holds;
            report.sup_value = scan.sup;
            report.witness_p = scan.witness;
            report.params.s = Some(s);
            if scan.stabilized {
                report.note(format!("stabilized at s = {s} (search capped at s_max = {s_max})"));
            } else if let Some(beyond) = tail_sup_bound {
                report.note(format!(
                    "s = {s}: envelope bounds the un-scanned region by {beyond:.6e} (cap s_max = {s_max})"
                ));
            }
            return Ok(report);
        }
    }
    if let Some((s, scan)) = last {
        report.sup_value = scan.sup;
        report.witness_p = scan.witness;
        report.params.s = Some(s);
        report.note(format!("no s <= {s_max} stabilized"));
    }
    Ok(report)
}

/// Quasianalyticity of the r-ramified class generated by M: quasianalytic
/// iff sum (1/mu_p)^{1/r} diverges. For r = 1 the decision runs on the
/// log-convex minorant (the class only sees M^lc).
pub fn is_quasianalytic(m: &WeightSequence, r: u32, horizon: usize) -> Result<ConditionReport> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    let horizon = m.clamp_horizon(horizon);
    let mut report = ConditionReport::new(Condition::Quasianalytic, Verdict::Undetermined, horizon);
    report.params = CondParams::r(r as f64);

    let (seq, note) = if r == 1 && !m.is_log_convex(horizon.max(2))?.verdict.holds() {
        (m.lc_minorant(horizon)?, Some("routed through lc_minorant"))
    } else {
        (m.clone(), None)
    };
    if let Some(note) = note {
        report.note(note);
    }

    let nq = nq_sum(&seq, r as f64, horizon)?;
    report.sup_value = nq.total_upper();
    report.tail_bound = nq.tail_bound;
    report.verdict = match nq.converges {
        Verdict::Holds => Verdict::Fails, // nonquasianalytic
        Verdict::Fails => Verdict::Holds, // quasianalytic
        Verdict::Undetermined => Verdict::Undetermined,
    };
    report.note(format!("nq_{r} partial sum {:.6e}", nq.partial_sum));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::catalog;

    const H: usize = 100_000;

    #[test]
    fn nq_gevrey2_r1_matches_basel() {
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let rep = nq_sum(&g2, 1.0, H).unwrap();
        assert_eq!(rep.converges, Verdict::Holds);
        let basel = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!(
            (rep.total_upper() - basel).abs() < 1e-6,
            "sum {} vs pi^2/6 {}",
            rep.total_upper(),
            basel
        );
    }

    #[test]
    fn nq_gevrey2_r2_diverges() {
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let rep = nq_sum(&g2, 2.0, 10_000).unwrap();
        assert_eq!(rep.converges, Verdict::Fails);
    }

    #[test]
    fn nq_qgevrey_r3_converges_geometric() {
        let q2 = WeightSequence::qgevrey(2.0).unwrap();
        let rep = nq_sum(&q2, 3.0, 2_000).unwrap();
        assert_eq!(rep.converges, Verdict::Holds);
        // Oracle: direct summation of q^{-(2k-1)/3} far past the horizon.
        let oracle: f64 = (1..4000)
            .map(|k| (-(2 * k - 1) as f64 * 2f64.ln() / 3.0).exp())
            .sum();
        assert!((rep.total_upper() - oracle).abs() < 1e-9);
    }

    #[test]
    fn nq_monotone_in_r_over_catalog() {
        // (nq_r) implies (nq_s) for s < r when mu is nondecreasing.
        let rs = [1.0, 1.5, 2.0, 3.0];
        for m in catalog() {
            for (i, &r) in rs.iter().enumerate() {
                if nq_sum(&m, r, 20_000).unwrap().converges == Verdict::Holds {
                    for &s in &rs[..i] {
                        assert_eq!(
                            nq_sum(&m, s, 20_000).unwrap().converges,
                            Verdict::Holds,
                            "{}: nq_{r} holds but nq_{s} does not",
                            m.label()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn lower_order_gevrey() {
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let est = lower_order(&g2, H).unwrap();
        assert!((est.omega - 2.0).abs() < 0.05);
        assert!((est.lambda - 0.5).abs() < 0.05);

        let g1 = WeightSequence::gevrey(1.0).unwrap();
        let est = lower_order(&g1, H).unwrap();
        assert!((est.omega - 1.0).abs() < 0.05);

        let q2 = WeightSequence::qgevrey(2.0).unwrap();
        let est = lower_order(&q2, H).unwrap();
        assert!(est.omega > 50.0);
        assert!(est.omega.is_infinite());
    }

    #[test]
    fn beta1_examples() {
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let rep = check_beta1(&g2, 4, 10_000).unwrap();
        assert!(rep.verdict.holds());
        // mu_{2p}/mu_p = 4 > 2.
        assert!((rep.sup_value - 4.0).abs() < 1e-6);

        let g1 = WeightSequence::gevrey(1.0).unwrap();
        assert_eq!(check_beta1(&g1, 6, 10_000).unwrap().verdict, Verdict::Fails);

        let c = WeightSequence::from_values("const", &[1.0; 128]).unwrap();
        assert_eq!(check_beta1(&c, 4, 127).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn beta1_gamma1_agree_on_log_convex_catalog() {
        for s in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let m = WeightSequence::gevrey(s).unwrap();
            let b = check_beta1(&m, 8, 50_000).unwrap().verdict;
            let g = check_gamma_r(&m, &m, 1.0, 50_000).unwrap().verdict;
            assert_eq!(b, g, "beta_1 vs gamma_1 disagree for gevrey s={s}");
        }
    }

    #[test]
    fn lambda_brute_force_example() {
        let g1 = WeightSequence::gevrey(1.0).unwrap();
        // Oracle: brute force over j in {0,1,2,3}: {24^{1/4}, 24^{1/3}, 12^{1/2}, 4}.
        let candidates = [
            24f64.powf(0.25),
            24f64.powf(1.0 / 3.0),
            12f64.sqrt(),
            4.0,
        ];
        let oracle = candidates.iter().cloned().fold(f64::MIN, f64::max);
        let got = lambda_ps(&g1, &g1, 4, 1).unwrap().exp();
        assert!((got - oracle).abs() < 1e-12);
        assert!((got - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_lower_bound_j0() {
        // lambda_{p,s} >= (M_p)^{1/p} / (s N_0^{1/p}).
        let m = WeightSequence::gevrey(1.5).unwrap();
        let n = WeightSequence::gevrey(2.0).unwrap();
        for s in [1u32, 2, 5] {
            for p in 1..=40 {
                let lhs = lambda_ps(&m, &n, p, s).unwrap();
                let rhs = m.log_value(p).unwrap() / p as f64 - (s as f64).ln();
                assert!(lhs >= rhs - 1e-12);
            }
        }
    }

    #[test]
    fn lambda_upper_bound_lemma() {
        // For log-convex M <= C N: lambda_{p,s} <= C min(mu_p, nu_p).
        let pairs = [
            (WeightSequence::gevrey(1.0).unwrap(), WeightSequence::gevrey(2.0).unwrap()),
            (WeightSequence::gevrey(2.0).unwrap(), WeightSequence::gevrey(3.0).unwrap()),
        ];
        for (m, n) in &pairs {
            for s in [1u32, 3] {
                for p in 1..=60 {
                    let lhs = lambda_ps(m, n, p, s).unwrap();
                    let bound = m.log_quotient(p).unwrap().min(n.log_quotient(p).unwrap());
                    assert!(lhs <= bound + 1e-10, "p={p} s={s}: {lhs} > {bound}");
                }
            }
        }
    }

    #[test]
    fn lambda_fast_path_matches_brute_force() {
        let m = WeightSequence::gevrey(2.0).unwrap();
        let n = WeightSequence::gevrey(3.0).unwrap();
        let log_m = m.logs(400).unwrap();
        let log_n = n.logs(400).unwrap();
        for s in [1u32, 2, 7] {
            for p in 1..=400usize {
                let brute = lambda_log_brute(log_m[p], &log_n[..p], p, s);
                let fast = lambda_log_unimodal(log_m[p], &log_n[..p], p, s);
                assert!(
                    (brute - fast).abs() < 1e-12,
                    "fast path diverges at p={p}, s={s}"
                );
            }
        }
        // Also against an interpolated (piecewise-linear log) sequence.
        let pi = n.interpolate(3).unwrap();
        let log_pi = pi.logs(400).unwrap();
        for p in 1..=400usize {
            let brute = lambda_log_brute(log_pi[p], &log_pi[..p], p, 1);
            let fast = lambda_log_unimodal(log_pi[p], &log_pi[..p], p, 1);
            assert!((brute - fast).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_examples() {
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let rep = check_gamma_r(&g2, &g2, 1.0, H).unwrap();
        assert!(rep.verdict.holds());
        // Q(1) = zeta(2); brute-force partial sum with integral tail.
        let mut oracle: f64 = (1..=2_000_000u64).map(|k| 1.0 / (k as f64 * k as f64)).sum();
        oracle += 1.0 / 2_000_000f64;
        assert!((rep.sup_value - oracle).abs() < 1e-5, "sup {} vs {}", rep.sup_value, oracle);
        assert_eq!(rep.witness_p, 1);

        let g1 = WeightSequence::gevrey(1.0).unwrap();
        assert_eq!(check_gamma_r(&g1, &g1, 1.0, 10_000).unwrap().verdict, Verdict::Fails);

        let g3 = WeightSequence::gevrey(3.0).unwrap();
        assert!(check_gamma_r(&g3, &g3, 2.0, H).unwrap().verdict.holds());
    }

    #[test]
    fn sv_examples() {
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let rep = check_sv_r(&g2, &g2, 1.0, 8, 50_000).unwrap();
        assert!(rep.verdict.holds());
        assert_eq!(rep.params.s, Some(1));
        // Lemma 3.2 chain: SV sup bounded by the gamma_1 sup (C = 1 here).
        let gamma = check_gamma_r(&g2, &g2, 1.0, 50_000).unwrap();
        assert!(rep.sup_value <= gamma.sup_value + 1e-9);

        let rep = check_sv_r(&g2, &g2, 2.0, 4, 20_000).unwrap();
        assert_eq!(rep.verdict, Verdict::Fails);

        let g1 = WeightSequence::gevrey(1.0).unwrap();
        let g3 = WeightSequence::gevrey(3.0).unwrap();
        let rep = check_sv_r(&g1, &g3, 1.0, 8, 20_000).unwrap();
        assert!(rep.verdict.holds());
    }

    #[test]
    fn gamma_implies_sv_with_s1_over_catalog() {
        for m in catalog() {
            for r in [1.0, 2.0] {
                let g = check_gamma_r(&m, &m, r, 30_000).unwrap();
                if g.verdict.holds() {
                    let sv = check_sv_r(&m, &m, r, 4, 30_000).unwrap();
                    assert!(sv.verdict.holds(), "{} r={r}", m.label());
                    assert_eq!(sv.params.s, Some(1));
                    assert!(sv.sup_value <= g.sup_value + 1e-9);
                }
            }
        }
    }

    #[test]
    fn quasianalyticity_decisions() {
        let g1 = WeightSequence::gevrey(1.0).unwrap();
        assert!(is_quasianalytic(&g1, 1, 50_000).unwrap().verdict.holds());

        let g2 = WeightSequence::gevrey(2.0).unwrap();
        assert_eq!(is_quasianalytic(&g2, 1, 50_000).unwrap().verdict, Verdict::Fails);

        let g3 = WeightSequence::gevrey(3.0).unwrap();
        assert_eq!(is_quasianalytic(&g3, 2, 50_000).unwrap().verdict, Verdict::Fails);
        assert!(is_quasianalytic(&g3, 3, 50_000).unwrap().verdict.holds());
    }

    #[test]
    fn quasianalytic_routes_tables_through_minorant() {
        let t = WeightSequence::from_values("t", &[1.0, 1.0, 4.0, 8.0]).unwrap();
        let rep = is_quasianalytic(&t, 1, 3).unwrap();
        assert!(rep.notes.iter().any(|n| n.contains("lc_minorant")));
        // Constant trailing quotients of the minorant: divergent under the
        // stop-decreasing heuristic, hence quasianalytic at the horizon.
        assert_eq!(rep.verdict, Verdict::Holds);
    }
}
