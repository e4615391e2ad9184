//! Error function and the exponential growth composites built on it.
//!
//! Only `exp`, `sqrt` and `powi` from the platform are used. `erf` is a
//! positive-term power series on `|x| <= 2` and `1 - erfc` with a
//! Lentz-evaluated continued fraction beyond. The absolute error stays
//! below `1e-14` on `[-6, 6]`.

use crate::error::{Error, Result};

/// `2 / sqrt(pi)`.
pub const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// `sqrt(pi)`.
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Largest argument accepted by [`f_neumann`] and [`growth`].
pub const OVERFLOW_GUARD: f64 = 26.0;

const SERIES_CUTOFF: f64 = 2.0;
const SERIES_STOP: f64 = 1e-17;
const MAX_TERMS: usize = 500;

/// Documented accuracy of the special functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
        }
    }
}

impl Accuracy {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::validation("abs_tol", "must be positive"));
        }
        if !(rel_tol > 0.0) {
            return Err(Error::validation("rel_tol", "must be positive"));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    /// True when `a` and `b` agree within either tolerance.
    pub fn agrees(&self, a: f64, b: f64) -> bool {
        let diff = (a - b).abs();
        diff <= self.abs_tol || diff <= self.rel_tol * a.abs().max(b.abs())
    }
}

/// The error function.
pub fn erf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            what: "erf",
            value: x,
        });
    }
    Ok(erf_finite(x))
}

pub(crate) fn erf_finite(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_CUTOFF {
        erf_series(ax)
    } else {
        1.0 - erfc_continued_fraction(ax)
    };
    if x.is_sign_negative() {
        -v
    } else {
        v
    }
}

// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n (2x^2)^n x / (2n+1)!!
fn erf_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let two_x2 = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..MAX_TERMS {
        term *= two_x2 / (2 * n + 1) as f64;
        sum += term;
        if term < SERIES_STOP * sum {
            break;
        }
    }
    (FRAC_2_SQRT_PI * (-x * x).exp() * sum).min(1.0)
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..MAX_TERMS {
        let a = n as f64 * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (SQRT_PI * f)
}

/// Complementary error function for `x >= 0`.
fn erfc_nonneg(x: f64) -> f64 {
    if x <= SERIES_CUTOFF {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// `erf(a) - erf(b)` for `0 <= b <= a`, avoiding cancellation at both ends
/// of the range: a factored series when both arguments are tiny and a
/// difference of `erfc` values when both are large.
pub fn erf_diff(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || b < 0.0 || b > a {
        return Err(Error::Domain {
            what: "erf_diff",
            value: if b > a { b } else { a },
        });
    }
    Ok(erf_diff_unchecked(a, b))
}

pub(crate) fn erf_diff_unchecked(a: f64, b: f64) -> f64 {
    if a < 1e-4 {
        // a^(2n+1) - b^(2n+1) = (a - b) * sum_k a^k b^(2n-k), truncated at n = 2.
        let (a2, b2, ab) = (a * a, b * b, a * b);
        let s1 = a2 + ab + b2;
        let s2 = a2 * a2 + a2 * ab + ab * ab + ab * b2 + b2 * b2;
        FRAC_2_SQRT_PI * (a - b) * (1.0 - s1 / 3.0 + s2 / 10.0)
    } else if b > SERIES_CUTOFF {
        erfc_nonneg(b) - erfc_nonneg(a)
    } else {
        erf_finite(a) - erf_finite(b)
    }
}

fn check_growth_arg(what: &'static str, x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::Domain { what, value: x });
    }
    if x > OVERFLOW_GUARD {
        return Err(Error::Overflow {
            what,
            value: x,
            limit: OVERFLOW_GUARD,
        });
    }
    Ok(())
}

/// `x * exp(x^2) * erf(x)`, the left-hand side of the Dirichlet front equation.
pub fn f_neumann(x: f64) -> Result<f64> {
    check_growth_arg("f_neumann", x)?;
    Ok(x * (x * x).exp() * erf_finite(x))
}

/// `x * exp(x^2)`.
pub fn growth(x: f64) -> Result<f64> {
    check_growth_arg("growth", x)?;
    Ok(x * (x * x).exp())
}
