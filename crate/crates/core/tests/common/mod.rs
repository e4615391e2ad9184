//! Reference implementations used only by the tests. They share no code with
//! the library: a different erf expansion and a plain bisection.

#![allow(dead_code)]

use std::f64::consts::PI;

/// erf by the alternating Maclaurin series on `[0, 1.5]` and a continued
/// fraction for erfc, evaluated bottom-up from a fixed depth, beyond.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x <= 1.5 {
        // erf(x) = 2/sqrt(pi) sum (-1)^n x^(2n+1) / (n! (2n+1))
        let x2 = x * x;
        let mut power = x;
        let mut sum = 0.0;
        let mut comp = 0.0;
        for n in 0..200 {
            let term = power / (2 * n + 1) as f64;
            let signed = if n % 2 == 0 { term } else { -term };
            let y = signed - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            if term < 1e-20 {
                break;
            }
            power *= x2 / (n + 1) as f64;
        }
        2.0 / PI.sqrt() * sum
    } else {
        1.0 - erfc_cf(x)
    }
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
fn erfc_cf(x: f64) -> f64 {
    let mut tail = x;
    for k in (1..=4000).rev() {
        tail = x + (k as f64 / 2.0) / tail;
    }
    (-x * x).exp() / (PI.sqrt() * tail)
}

/// Root of a continuous `f` with a sign change on `[lo, hi]`, by bisection
/// down to adjacent floats.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Full acceptance matrix: `(ste, delta, p)`.
pub fn matrix() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &ste in &[0.1, 0.5, 1.0] {
        for &delta in &[0.0, 1.0, 5.0] {
            for &p in &[0.0, 1.0, 2.5, 5.0, 10.0] {
                out.push((ste, delta, p));
            }
        }
    }
    out
}

pub const GAMMAS: [f64; 2] = [1.0, 50.0];
