//! The r-interpolating sequence and its transfer lemmas, exposed as
//! executable cross-checks.
//!
//! P^{M,r}_{rk+j} = (M_k^{r-j} M_{k+1}^j)^{1/r} reduces r-ramified questions
//! to classical ones: its quotients repeat (mu_{k+1})^{1/r} exactly r times,
//! so (nq_r) for M becomes (nq) for P^{M,r}, (mg) transfers both ways, and
//! the mixed gamma conditions transfer with explicit constants. Each transfer
//! is checked here as verdict agreement plus the quantitative bound from the
//! corresponding proof, never as prose.

use crate::conditions::{check_gamma_r, nq_sum};
use crate::error::{Error, Result};
use crate::report::ConditionReport;
use crate::util::kahan_sum;
use crate::weight::WeightSequence;

/// Construct P^{M,r}. Thin wrapper over [`WeightSequence::interpolate`] so the
/// operation is available where the transfer oracles live.
pub fn interpolate(m: &WeightSequence, r: u32) -> Result<WeightSequence> {
    m.interpolate(r)
}

/// Both sides of the partial-sum identity
/// sum_{l=1}^{rK} 1/pi_l = r sum_{k=1}^{K} (1/mu_k)^{1/r}.
pub fn nq_partial_sum_identity(
    m: &WeightSequence,
    r: u32,
    k_max: usize,
) -> Result<(f64, f64)> {
    if k_max < 1 || r < 1 {
        return Err(Error::InvalidArgument("need K >= 1 and r >= 1".into()));
    }
    let p = m.interpolate(r)?;
    let qp = p.log_quotients(r as usize * k_max)?;
    let lhs = kahan_sum((1..=r as usize * k_max).map(|l| (-qp[l]).exp()));
    let qm = m.log_quotients(k_max)?;
    let rhs = r as f64 * kahan_sum((1..=k_max).map(|k| (-qm[k] / r as f64).exp()));
    Ok((lhs, rhs))
}

/// Which transfer lemma to exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferKind {
    Mg,
    Nq,
    Gamma,
}

/// A quantitative bound checked alongside the verdict agreement.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub description: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// Paired base/interpolated reports plus the proof's quantitative bounds.
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub kind: TransferKind,
    pub base: ConditionReport,
    pub interpolated: ConditionReport,
    pub agree: bool,
    pub bounds: Vec<BoundCheck>,
}

/// Run a base condition on (M, N, r) and the r = 1 condition on the
/// interpolated sequences, and compare.
///
/// For `Gamma` the two-sided estimates from the transfer proof are also
/// evaluated: interpolated sup <= (1+r) * base sup, and base sup <= r *
/// interpolated sup.
pub fn transfer_check(
    m: &WeightSequence,
    n: Option<&WeightSequence>,
    r: u32,
    kind: TransferKind,
    horizon: usize,
) -> Result<TransferReport> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    let p_m = m.interpolate(r)?;
    let interp_horizon = horizon.saturating_mul(r as usize);
    let mut bounds = Vec::new();

    let (base, interpolated) = match kind {
        TransferKind::Mg => {
            let base = m.check_mg(horizon)?;
            let interp = p_m.check_mg(interp_horizon)?;
            (base, interp)
        }
        TransferKind::Nq => {
            let base_sum = nq_sum(m, r as f64, horizon)?;
            let interp_sum = nq_sum(&p_m, 1.0, interp_horizon)?;
            // The finite sums obey the exact identity; record it.
            bounds.push(BoundCheck {
                description: format!(
                    "partial-sum identity: sum 1/pi (K={horizon}) vs r*sum (1/mu)^(1/r)"
                ),
                lhs: interp_sum.partial_sum,
                rhs: r as f64 * base_sum.partial_sum,
                satisfied: (interp_sum.partial_sum - r as f64 * base_sum.partial_sum).abs()
                    <= 1e-12 * (1.0 + interp_sum.partial_sum.abs()),
            });
            (nq_as_report(&base_sum), nq_as_report(&interp_sum))
        }
        TransferKind::Gamma => {
            let n = n.unwrap_or(m);
            let p_n = n.interpolate(r)?;
            let base = check_gamma_r(m, n, r as f64, horizon)?;
            let interp = check_gamma_r(&p_m, &p_n, 1.0, interp_horizon)?;
            if base.verdict.holds() && interp.verdict.holds() {
                bounds.push(BoundCheck {
                    description: format!("interpolated sup <= (1+{r}) * base sup"),
                    lhs: interp.sup_value,
                    rhs: (1.0 + r as f64) * base.sup_value,
                    satisfied: interp.sup_value <= (1.0 + r as f64) * base.sup_value + 1e-6,
                });
                bounds.push(BoundCheck {
                    description: format!("base sup <= {r} * interpolated sup"),
                    lhs: base.sup_value,
                    rhs: r as f64 * interp.sup_value,
                    satisfied: base.sup_value <= r as f64 * interp.sup_value + 1e-6,
                });
            }
            (base, interp)
        }
    };

    let agree = base.verdict == interpolated.verdict;
    Ok(TransferReport { kind, base, interpolated, agree, bounds })
}

fn nq_as_report(sum: &crate::conditions::PartialSumReport) -> ConditionReport {
    use crate::report::{CondParams, Condition};
    let mut rep = ConditionReport::new(Condition::NqR, sum.converges, sum.horizon);
    rep.params = CondParams::r(sum.r);
    rep.sup_value = sum.total_upper();
    rep.tail_bound = sum.tail_bound;
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use crate::weight::catalog;

    #[test]
    fn interpolation_substitution_example() {
        // P_3 for gevrey s=1, r=2: (1! * 2!)^{1/2}.
        let g1 = WeightSequence::gevrey(1.0).unwrap();
        let p = g1.interpolate(2).unwrap();
        assert!((p.log_value(3).unwrap() - 0.5 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn endpoints_reproduce_base_over_catalog() {
        for m in catalog() {
            for r in [1u32, 2, 3, 5] {
                let p = m.interpolate(r).unwrap();
                for n in 0..=50usize {
                    assert_eq!(
                        p.log_value(r as usize * n).unwrap(),
                        m.log_value(n).unwrap(),
                        "{} r={r} n={n}",
                        m.label()
                    );
                }
            }
        }
    }

    #[test]
    fn quotient_identity_over_catalog() {
        // log pi_{rk+j} = (log mu_{k+1})/r, j = 1..r.
        for m in catalog() {
            for r in [2u32, 3, 5] {
                let p = m.interpolate(r).unwrap();
                let qp = p.log_quotients(r as usize * 101).unwrap();
                let qm = m.log_quotients(101).unwrap();
                for k in 0..=100usize {
                    for j in 1..=r as usize {
                        let lhs = qp[r as usize * k + j];
                        let rhs = qm[k + 1] / r as f64;
                        let scale = p.log_value(r as usize * k + j).unwrap().abs().max(1.0);
                        assert!(
                            (lhs - rhs).abs() <= 1e-12 * scale,
                            "{} r={r} k={k} j={j}: {lhs} vs {rhs}",
                            m.label()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn interpolation_preserves_log_convexity() {
        for m in catalog() {
            for r in [2u32, 3] {
                let p = m.interpolate(r).unwrap();
                assert!(p.is_log_convex(600).unwrap().verdict.holds());
                assert!(p.is_normalized());
            }
        }
    }

    #[test]
    fn comparison_transfers_with_root_constant() {
        // M_k <= C^k N_k  =>  P^M_l <= (C^{1/r})^l P^N_l; C = 1 for this pair.
        let m = WeightSequence::gevrey(1.0).unwrap();
        let n = WeightSequence::gevrey(2.0).unwrap();
        for r in [2u32, 3] {
            let pm = m.interpolate(r).unwrap();
            let pn = n.interpolate(r).unwrap();
            for l in 0..=200usize {
                assert!(
                    pm.log_value(l).unwrap() <= pn.log_value(l).unwrap() + 1e-12,
                    "r={r} l={l}"
                );
            }
        }
    }

    #[test]
    fn partial_sum_identity_examples() {
        // Gevrey s=2, r=2, K=100: both sides equal 2 * harmonic(100).
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let (lhs, rhs) = nq_partial_sum_identity(&g2, 2, 100).unwrap();
        let harmonic: f64 = (1..=100).map(|k| 1.0 / k as f64).sum();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        assert!((rhs - 2.0 * harmonic).abs() < 1e-12);

        // r = 1 collapse.
        for m in catalog() {
            let (lhs, rhs) = nq_partial_sum_identity(&m, 1, 50).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }

        let q2 = WeightSequence::qgevrey(2.0).unwrap();
        let (lhs, rhs) = nq_partial_sum_identity(&q2, 3, 30).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn nq_transfer_agreement() {
        // Gevrey s=2, r=2: base (nq_2) fails and interpolated (nq) fails.
        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let rep = transfer_check(&g2, None, 2, TransferKind::Nq, 20_000).unwrap();
        assert_eq!(rep.base.verdict, Verdict::Fails);
        assert_eq!(rep.interpolated.verdict, Verdict::Fails);
        assert!(rep.agree);

        let g3 = WeightSequence::gevrey(3.0).unwrap();
        let rep = transfer_check(&g3, None, 2, TransferKind::Nq, 20_000).unwrap();
        assert_eq!(rep.base.verdict, Verdict::Holds);
        assert!(rep.agree);
        assert!(rep.bounds.iter().all(|b| b.satisfied));
    }

    #[test]
    fn gamma_transfer_with_proof_constant() {
        let g3 = WeightSequence::gevrey(3.0).unwrap();
        let rep = transfer_check(&g3, Some(&g3), 2, TransferKind::Gamma, 40_000).unwrap();
        assert!(rep.base.verdict.holds());
        assert!(rep.interpolated.verdict.holds());
        assert!(rep.agree);
        assert!(rep.bounds.iter().all(|b| b.satisfied), "{:#?}", rep.bounds);
    }

    #[test]
    fn mg_transfer_agreement() {
        let q2 = WeightSequence::qgevrey(2.0).unwrap();
        let rep = transfer_check(&q2, None, 3, TransferKind::Mg, 5_000).unwrap();
        assert_eq!(rep.base.verdict, Verdict::Fails);
        assert_eq!(rep.interpolated.verdict, Verdict::Fails);
        assert!(rep.agree);

        let g2 = WeightSequence::gevrey(2.0).unwrap();
        let rep = transfer_check(&g2, None, 2, TransferKind::Mg, 5_000).unwrap();
        assert!(rep.base.verdict.holds());
        assert!(rep.agree);
    }

    #[test]
    fn stirling_condition_transfers() {
        // liminf (M_p^{1/r}/p!)^{1/p} > 0 at the horizon estimator implies the
        // same for the interpolated sequence: checked on gevrey s >= r.
        // The liminf is positive iff its log estimator is bounded below; for
        // these members it sits above -2 (e.g. -ln 3 for s = r = 3) and is
        // not collapsing between half and full horizon.
        for (s, r) in [(2.0, 2u32), (3.0, 2), (3.0, 3)] {
            let m = WeightSequence::gevrey(s).unwrap();
            let p = m.interpolate(r).unwrap();
            let horizon = 4_000usize;
            let est_base = stirling_estimate(&m, r as f64, horizon);
            let est_interp = stirling_estimate(&p, 1.0, horizon * r as usize);
            let est_interp_half = stirling_estimate(&p, 1.0, horizon * r as usize / 2);
            assert!(est_base > -2.0, "gevrey {s} r={r}: base estimate {est_base}");
            assert!(est_interp > -2.0, "gevrey {s} r={r}: interp estimate {est_interp}");
            assert!(est_interp >= est_interp_half - 0.05, "gevrey {s} r={r}: collapsing");
        }
    }

    /// Last-quarter min of (1/p)(log M_p / r - log p!), the log of the
    /// liminf in the Stirling-type standing assumption.
    fn stirling_estimate(m: &WeightSequence, r: f64, horizon: usize) -> f64 {
        let logs = m.logs(horizon).unwrap();
        let mut lfac = vec![0.0f64; horizon + 1];
        for p in 1..=horizon {
            lfac[p] = lfac[p - 1] + (p as f64).ln();
        }
        let mut est = f64::INFINITY;
        for p in horizon - horizon / 4..=horizon {
            est = est.min((logs[p] / r - lfac[p]) / p as f64);
        }
        est
    }
}
