use crate::{Error, Result};

/// Uniform deviation `α(m) = sqrt((k ln(2m) + ln(2/δ)) / (2(m-k)))` between
/// empirical and true means of all reconstructions from subsamples of size at
/// most `k`, holding with probability `1 - δ/2`.
pub fn lw_deviation(k: usize, m: usize, delta: f64) -> f64 {
    assert!(m > k, "deviation needs m > k");
    let num = k as f64 * (2.0 * m as f64).ln() + (2.0 / delta).ln();
    (num / (2.0 * (m - k) as f64)).sqrt()
}

/// Least `m > k` with `lw_deviation(k, m, δ) <= ε/2`.
///
/// The deviation is strictly decreasing in `m` on `m > k`, so an
/// exponential bracket followed by bisection finds the threshold.
pub fn sample_size(k: usize, eps: f64, delta: f64) -> Result<usize> {
    for (name, v) in [("epsilon", eps), ("delta", delta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!("{name} = {v} is not in (0, 1)")));
        }
    }
    let ok = |m: usize| lw_deviation(k, m, delta) <= eps / 2.0;
    let mut lo = k; // invariant: lo == k or !ok(lo)
    let mut hi = k + 1;
    while !ok(hi) {
        lo = hi;
        hi = hi.checked_mul(2).ok_or(Error::Overflow)?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Linear scan oracle, independent of the bracketing.
    fn scan(k: usize, eps: f64, delta: f64) -> usize {
        (k + 1..).find(|&m| lw_deviation(k, m, delta) <= eps / 2.0).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(sample_size(1, 1.0 / 3.0, 1.0 / 3.0).unwrap(), 134);
        assert!(lw_deviation(1, 134, 1.0 / 3.0) <= 1.0 / 6.0);
        assert!(lw_deviation(1, 133, 1.0 / 3.0) > 1.0 / 6.0);
        assert_eq!(sample_size(0, 0.1, 0.05).unwrap(), 738);
        assert_eq!(738, (2.0 * (2.0f64 / 0.05).ln() / 0.01).ceil() as usize);
    }

    #[test]
    fn agrees_with_scan_and_is_monotone() {
        let grid = [0.05, 0.1, 0.2, 1.0 / 3.0, 0.5, 0.9];
        for k in 0..5 {
            for &eps in &grid {
                for &delta in &grid {
                    let m = sample_size(k, eps, delta).unwrap();
                    assert!(m > k);
                    assert_eq!(m, scan(k, eps, delta), "k={k} eps={eps} delta={delta}");
                    assert!(m < sample_size(k + 1, eps, delta).unwrap());
                }
            }
        }
        for k in 0..4 {
            for w in grid.windows(2) {
                let (small, large) = (w[0], w[1]);
                assert!(sample_size(k, small, 0.1).unwrap() >= sample_size(k, large, 0.1).unwrap());
                assert!(sample_size(k, 0.1, small).unwrap() >= sample_size(k, 0.1, large).unwrap());
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(sample_size(1, 0.0, 0.5).is_err());
        assert!(sample_size(1, 0.5, 1.0).is_err());
        assert!(sample_size(1, f64::NAN, 0.5).is_err());
    }
}
