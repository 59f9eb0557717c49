//! Shared numeric helpers: entropy over count vectors and the binomial
//! upper confidence bound behind pessimistic error estimates.

/// Entropy in bits of a count vector. Zero counts contribute nothing;
/// a zero total yields 0 (callers validate totals where that matters).
pub(crate) fn entropy_of(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total;
            h -= p * p.log2();
        }
    }
    h
}

/// Upper confidence bound on the true error rate of a leaf or rule that
/// misclassified `errors` of `n` covered training instances: the largest
/// rate `p` with `P(X <= errors | Binomial(n, p)) >= cf`, found by
/// bisection on the binomial CDF.
pub(crate) fn pessimistic_error_rate(errors: usize, n: usize, cf: f64) -> f64 {
    assert!(n > 0, "pessimistic bound needs coverage");
    assert!(cf > 0.0 && cf < 1.0, "confidence must be in (0,1)");
    if errors >= n {
        return 1.0;
    }
    // Exact closed form for the zero-error case: p with (1-p)^n = cf.
    if errors == 0 {
        return 1.0 - cf.powf(1.0 / (n as f64));
    }
    let mut lo = errors as f64 / n as f64;
    let mut hi = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if binomial_cdf(errors, n, mid) >= cf {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Expected error count under the pessimistic bound.
pub(crate) fn pessimistic_errors(errors: usize, n: usize, cf: f64) -> f64 {
    n as f64 * pessimistic_error_rate(errors, n, cf)
}

/// P(X <= k) for X ~ Binomial(n, p), summed in log space for stability.
fn binomial_cdf(k: usize, n: usize, p: f64) -> f64 {
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return if k >= n { 1.0 } else { 0.0 };
    }
    let ln_p = p.ln();
    let ln_q = (1.0 - p).ln();
    let mut ln_choose = 0.0; // ln C(n, 0)
    let mut terms = Vec::with_capacity(k + 1);
    for i in 0..=k {
        if i > 0 {
            ln_choose += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        terms.push(ln_choose + i as f64 * ln_p + (n - i) as f64 * ln_q);
    }
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    (max + sum.ln()).exp().min(1.0)
}
