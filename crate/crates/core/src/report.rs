//! Three-valued condition reports.
//!
//! Every asymptotic condition is decided at a finite horizon, so a verdict is
//! `Holds`, `Fails` or `Undetermined` together with witness data. A report can
//! be upgraded to a rigorous statement when the sequence carries a tail
//! envelope; the `notes` field records which route produced the verdict.

use serde_json::json;

/// Finite-horizon verdict for an asymptotic condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Undetermined,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undetermined => "undetermined",
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which condition a report talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    LogConvex,
    ModerateGrowth,
    DerivationClosed,
    NqR,
    Beta1,
    GammaR,
    SvR,
    IntegralGammaR,
    Quasianalytic,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::LogConvex => "lc",
            Condition::ModerateGrowth => "mg",
            Condition::DerivationClosed => "dc",
            Condition::NqR => "nq_r",
            Condition::Beta1 => "beta_1",
            Condition::GammaR => "gamma_r",
            Condition::SvR => "sv_r",
            Condition::IntegralGammaR => "integral_gamma_r",
            Condition::Quasianalytic => "quasianalytic",
        }
    }
}

/// Parameters a condition was checked with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondParams {
    pub r: f64,
    pub s: Option<u32>,
    pub q: Option<u32>,
}

impl CondParams {
    pub fn r(r: f64) -> Self {
        CondParams { r, s: None, q: None }
    }

    pub fn none() -> Self {
        CondParams { r: 1.0, s: None, q: None }
    }
}

/// Verdict plus the numeric witness data behind it.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: Verdict,
    /// Scanned supremum in linear domain (constant estimate for mg/dc).
    pub sup_value: f64,
    /// Index attaining the supremum.
    pub witness_p: usize,
    pub horizon: usize,
    /// Rigorous tail contribution when an envelope was available.
    pub tail_bound: Option<f64>,
    pub params: CondParams,
    /// Human-readable provenance of the verdict (scan window, envelope route,
    /// stabilization outcome). Not part of the wire schema.
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn new(condition: Condition, verdict: Verdict, horizon: usize) -> Self {
        ConditionReport {
            condition,
            verdict,
            sup_value: f64::NAN,
            witness_p: 0,
            horizon,
            tail_bound: None,
            params: CondParams::none(),
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    /// Wire representation. The key set is fixed:
    /// `condition`, `verdict`, `sup_value`, `witness_p`, `horizon`,
    /// `tail_bound`, `params` (with `r`, `s`, `Q`).
    pub fn schema_json(&self) -> serde_json::Value {
        json!({
            "condition": self.condition.name(),
            "verdict": self.verdict.name(),
            "sup_value": self.sup_value,
            "witness_p": self.witness_p,
            "horizon": self.horizon,
            "tail_bound": self.tail_bound,
            "params": {
                "r": self.params.r,
                "s": self.params.s,
                "Q": self.params.q,
            },
        })
    }
}

impl std::fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} [r={}{}]: {} (sup {:.6e} at p = {}, horizon {})",
            self.condition.name(),
            self.params.r,
            self.params.s.map(|s| format!(", s={s}")).unwrap_or_default(),
            self.verdict,
            self.sup_value,
            self.witness_p,
            self.horizon
        )
    }
}

/// Outcome of scanning a sequence of values for a supremum and deciding
/// whether the scan has settled.
#[derive(Debug, Clone, Copy)]
pub struct ScanOutcome {
    pub sup: f64,
    pub witness: usize,
    pub stabilized: bool,
}

/// Supremum of `values[start..]` (indexed by offset + position) together with
/// the stabilization heuristic: the scan has settled when the max over the
/// last quarter of the window does not exceed the max over the first three
/// quarters by more than `tol`.
pub fn scan_sup(values: &[f64], first_index: usize, tol: f64) -> ScanOutcome {
    assert!(!values.is_empty());
    let mut sup = f64::NEG_INFINITY;
    let mut witness = first_index;
    let split = values.len() - values.len() / 4;
    let mut head_max = f64::NEG_INFINITY;
    let mut tail_max = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > sup {
            sup = v;
            witness = first_index + i;
        }
        if i < split {
            head_max = head_max.max(v);
        } else {
            tail_max = tail_max.max(v);
        }
    }
    let stabilized = values.len() < 8 || tail_max <= head_max + tol;
    ScanOutcome { sup, witness, stabilized }
}
