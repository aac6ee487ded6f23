//! Vanishing bound diagnostic: for f in C^l vanishing on (-inf, 0] and a
//! nonincreasing width list a_1 >= ... >= a_l with 0 < A <= sum a_i,
//!
//! ```text
//! |f(t)| <= sum_{j in J_l} 2^{2j} a_1...a_j sup_{s < t} |f^{(j)}(s)|
//! ```
//!
//! for all t <= A, where J_l keeps the indices at which the widths strictly
//! drop (plus l itself). Both sides are evaluated numerically; derivative
//! sups come from per-point central differences on the samples (the test
//! functions may grow past the grid edge, so global spectral differentiation
//! is not applicable).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::synth::rep::FunctionRep;

/// One row per j in J_l.
#[derive(Debug, Clone)]
pub struct VanishingLedger {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// (j, width product a_1..a_j, sup_{s<t} |f^(j)(s)|) per retained index.
    pub terms: Vec<(usize, f64, f64)>,
    pub satisfied: bool,
}

/// Central FD derivative grid at a fixed stride (order <= 8 intended).
fn fd_grid(samples: &[Complex64], dx: f64, stride: usize, order: usize) -> Vec<f64> {
    // Iterated first differences: error O(sigma^2) per level, adequate for a
    // diagnostic ledger. Values outside the reach are skipped by the caller.
    let n = samples.len();
    let sigma = stride as f64 * dx;
    let mut cur: Vec<f64> = samples.iter().map(|v| v.re).collect();
    for _ in 0..order {
        let mut next = vec![0.0f64; n];
        for k in stride..n - stride {
            next[k] = (cur[k + stride] - cur[k - stride]) / (2.0 * sigma);
        }
        cur = next;
    }
    cur
}

/// Evaluate the ledger at a single t. `widths` must be nonincreasing; the
/// function must vanish on (-inf, 0] to 1e-12 of its max.
pub fn vanishing_bound_check(
    f: &FunctionRep,
    widths: &[f64],
    a_bound: f64,
    t: f64,
) -> Result<VanishingLedger> {
    if widths.is_empty() {
        return Err(Error::InvalidArgument("empty width list".into()));
    }
    for w in widths.windows(2) {
        if w[1] > w[0] * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument("widths must be nonincreasing".into()));
        }
    }
    let total: f64 = widths.iter().sum();
    if !(a_bound > 0.0 && a_bound <= total * (1.0 + 1e-12) && t <= a_bound) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < t <= A <= sum a_i (t = {t}, A = {a_bound}, sum = {total})"
        )));
    }
    let grid = f.grid;
    let n = grid.len();
    let zero = grid.zero_index();
    let scale = f.max_abs().max(1e-300);
    let left_max = f.samples()[..zero]
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max);
    if left_max > 1e-12 * scale {
        return Err(Error::InvalidArgument(format!(
            "f does not vanish on (-inf, 0]: residue {left_max:.3e}"
        )));
    }

    // J_l: indices with a strict width drop, plus l.
    let l = widths.len();
    let mut j_set = Vec::new();
    for j in 1..=l {
        if j == l || widths[j] < widths[j - 1] {
            j_set.push(j);
        }
    }

    let t_index = ((t + grid.half_length) / grid.dx()).floor() as usize;
    let lhs = f.samples()[t_index.min(n - 1)].norm();

    let stride = 4usize;
    let mut rhs = 0.0f64;
    let mut terms = Vec::new();
    for &j in &j_set {
        let dgrid = fd_grid(f.samples(), grid.dx(), stride, j);
        let reach = stride * j;
        let mut sup = 0.0f64;
        for (k, d) in dgrid.iter().enumerate().take(t_index.min(n - reach)).skip(reach) {
            let _ = k;
            sup = sup.max(d.abs());
        }
        let prod: f64 = widths[..j].iter().product();
        let term = 4f64.powi(j as i32) * prod * sup;
        rhs += term;
        terms.push((j, prod, sup));
    }
    Ok(VanishingLedger { t, lhs, rhs, terms, satisfied: lhs <= rhs * (1.0 + 1e-6) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::rep::Grid;

    #[test]
    fn zero_function_is_trivially_fine() {
        let grid = Grid::new(12, 2.0);
        let f = FunctionRep::from_samples(
            grid,
            vec![Complex64::new(0.0, 0.0); grid.len()],
            "zero",
            None,
        );
        let ledger = vanishing_bound_check(&f, &[0.5, 0.5, 0.5], 1.0, 0.75).unwrap();
        assert_eq!(ledger.lhs, 0.0);
        assert!(ledger.satisfied);
    }

    #[test]
    fn positive_cubic_ledger() {
        // f(t) = t_+^3: J_l = {3} for constant widths, rhs = 2^6 a^3 sup|f'''|
        // with sup |f'''| = 6 on (0, t).
        let grid = Grid::new(14, 2.0);
        let samples: Vec<Complex64> = (0..grid.len())
            .map(|k| {
                let x = grid.x(k);
                Complex64::new(if x > 0.0 { x * x * x } else { 0.0 }, 0.0)
            })
            .collect();
        let f = FunctionRep::from_samples(grid, samples, "t_+^3", None);
        let a = 0.4f64;
        let t = 1.0f64;
        let ledger = vanishing_bound_check(&f, &[a, a, a], 3.0 * a, t).unwrap();
        assert_eq!(ledger.terms.len(), 1);
        assert_eq!(ledger.terms[0].0, 3);
        assert!((ledger.terms[0].2 - 6.0).abs() < 1e-3, "sup f''' = {}", ledger.terms[0].2);
        assert!((ledger.lhs - 1.0).abs() < 1e-6);
        assert!(ledger.satisfied, "lhs {} rhs {}", ledger.lhs, ledger.rhs);
    }

    #[test]
    fn precondition_violations_are_rejected() {
        let grid = Grid::new(12, 2.0);
        let samples: Vec<Complex64> = (0..grid.len())
            .map(|k| Complex64::new(grid.x(k).cos(), 0.0))
            .collect();
        let f = FunctionRep::from_samples(grid, samples, "cos", None);
        assert!(vanishing_bound_check(&f, &[0.5, 0.5], 1.0, 0.5).is_err());
    }
}
