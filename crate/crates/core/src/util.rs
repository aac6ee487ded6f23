//! Small numeric helpers shared across modules.

/// Compensated (Neumaier) summation; deterministic left-to-right order.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Suffix sums tail[k] = sum_{j >= k} terms[j] (compensated, reverse order).
pub fn suffix_sums(terms: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; terms.len() + 1];
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in (0..terms.len()).rev() {
        let v = terms[k];
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        out[k] = sum + comp;
    }
    out
}

/// Geometric grid of `n` points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let step = (hi / lo).powf(1.0 / (n - 1) as f64);
    let mut out = Vec::with_capacity(n);
    let mut t = lo;
    for _ in 0..n - 1 {
        out.push(t);
        t *= step;
    }
    out.push(hi);
    out
}
