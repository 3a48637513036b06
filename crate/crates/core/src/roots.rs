//! Bracketing and bisection shared by the eigenvalue scans.

/// A refined root with the bracket it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub root: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
    /// false when bisection stopped on a `NaN` or ran out of iterations
    pub converged: bool,
}

/// Bisects `f` on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs
/// (or one of them is zero). Stops once the bracket is narrower than `tol` or
/// cannot be split further in floating point.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, f_lo: f64, tol: f64) -> Refined {
    let bracket = (lo, hi);
    let (mut lo, mut hi, mut f_lo) = (lo, hi, f_lo);
    let mut iterations = 0;
    if f_lo == 0.0 {
        return Refined {
            root: lo,
            bracket,
            iterations,
            converged: true,
        };
    }
    let mut converged = false;
    while iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        iterations += 1;
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Refined {
                root: mid,
                bracket,
                iterations,
                converged: true,
            };
        }
        if f_mid.is_nan() {
            break;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Refined {
        root: 0.5 * (lo + hi),
        bracket,
        iterations,
        converged,
    }
}

/// Indices `i` such that `values[i]` and `values[i + 1]` are finite and
/// straddle zero (a zero at the right end is reported once, by its left
/// neighbour).
pub fn sign_changes(values: &[f64]) -> Vec<usize> {
    values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| {
            w[0].is_finite() && w[1].is_finite() && w[0] != 0.0 && (w[1] == 0.0 || (w[0] < 0.0) != (w[1] < 0.0))
        })
        .map(|(i, _)| i)
        .collect()
}

/// `n` evenly spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
