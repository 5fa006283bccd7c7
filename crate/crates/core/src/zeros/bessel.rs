//! Positive zeros of half-integer Bessel functions `J_{n+1/2}`, which are
//! the zeros of the spherical Bessel function `j_n`.

use std::f64::consts::PI;

pub const MAX_ORDER: usize = 20;
pub const MAX_X: f64 = 200.0;

/// `j_n(x)` for `x > 0`, by upward recurrence when `x > n` and by
/// normalized downward recurrence otherwise.
pub fn spherical_jn(n: usize, x: f64) -> f64 {
    let j0 = x.sin() / x;
    if n == 0 {
        return j0;
    }
    if x > n as f64 {
        let mut prev = j0;
        let mut cur = x.sin() / (x * x) - x.cos() / x;
        for k in 1..n {
            let next = (2 * k + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    let start = n + 20 + (x.abs() as usize) * 2;
    let mut above = 0.0;
    let mut cur = 1e-300;
    let mut at_n = 0.0;
    for k in (1..=start).rev() {
        let below = (2 * k + 1) as f64 / x * cur - above;
        above = cur;
        cur = below;
        if k - 1 == n {
            at_n = cur;
        }
        if cur.abs() > 1e250 {
            above *= 1e-250;
            cur *= 1e-250;
            at_n *= 1e-250;
        }
    }
    // `cur` now holds the unnormalized j_0
    at_n * j0 / cur
}

fn refine(n: usize, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = spherical_jn(n, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-15 * mid {
            break;
        }
        let fm = spherical_jn(n, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Positive zeros of `J_{n+1/2}` in `(0, x_max]`, ascending.
///
/// Returns `None` outside `n ≤ 20`, `0 < x_max ≤ 200`.
pub fn bessel_reference(n: usize, x_max: f64) -> Option<Vec<f64>> {
    if n > MAX_ORDER || !(x_max > 0.0 && x_max <= MAX_X) {
        return None;
    }
    // consecutive zeros are at least π apart, so this step cannot skip a pair
    let step = PI / 8.0;
    let mut zeros = Vec::new();
    let mut x = (n as f64).max(step);
    let mut fx = spherical_jn(n, x);
    while x < x_max {
        let next = (x + step).min(x_max);
        let fn_ = spherical_jn(n, next);
        if fn_ == 0.0 {
            zeros.push(next);
        } else if (fx > 0.0) != (fn_ > 0.0) && fx != 0.0 {
            zeros.push(refine(n, x, next));
        }
        x = next;
        fx = fn_;
    }
    Some(zeros)
}
