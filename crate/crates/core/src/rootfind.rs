//! Bracketed scalar root finding.
//!
//! [`solve_bracketed`] is an ITP iteration (interpolate, truncate, project):
//! a regula-falsi estimate is perturbed towards the midpoint and then
//! projected into a shrinking window around it, so a step can never leave
//! the bracket and the bracket never shrinks slower than bisection does.
//! [`solve_newton_bracketed`] is Newton's method with a bisection fallback
//! for smooth functions whose derivative is available.

use crate::error::{Error, Result};
use crate::specfun::OVERFLOW_GUARD;

/// Relative tolerance the front-coefficient solves tighten to when it is
/// below the configured absolute tolerance. Profiles inherit the error in
/// `lambda` almost one to one, and they are checked at `1e-12`.
pub const FRONT_REL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Tolerance on the argument.
    pub abs_tol: f64,
    pub max_iter: usize,
    /// Factor used by [`expand_upward`].
    pub bracket_growth: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_iter: 200,
            bracket_growth: 2.0,
        }
    }
}

impl RootConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::validation("abs_tol", "must be positive"));
        }
        if self.max_iter < 1 {
            return Err(Error::validation("max_iter", "must be at least 1"));
        }
        if !(self.bracket_growth > 1.0) {
            return Err(Error::validation("bracket_growth", "must exceed 1"));
        }
        Ok(())
    }

    /// Copy with the tolerance tightened to `rel` times `scale` when that is smaller.
    pub fn relative_to(&self, scale: f64, rel: f64) -> Self {
        let mut cfg = *self;
        let scaled = rel * scale.abs();
        if scaled > 0.0 && scaled < cfg.abs_tol {
            cfg.abs_tol = scaled;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    /// Function value at `root`.
    pub residual: f64,
    pub iterations: usize,
    /// Final bracket `(lo, hi)`.
    pub bracket: (f64, f64),
}

fn eval<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { x })
    }
}

/// Finds a root of `f` in `[lo, hi]`, which must satisfy `f(lo) * f(hi) <= 0`.
///
/// Terminates once the bracket is no wider than `2 * cfg.abs_tol` and
/// returns its midpoint. An exact zero is returned as soon as it is hit.
pub fn solve_bracketed<F>(mut f: F, lo: f64, hi: f64, cfg: &RootConfig) -> Result<RootResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(lo <= hi) {
        return Err(Error::Domain {
            what: "solve_bracketed: lo > hi",
            value: lo,
        });
    }
    let f_lo = eval(&mut f, lo)?;
    if f_lo == 0.0 {
        return Ok(exact(lo));
    }
    let f_hi = eval(&mut f, hi)?;
    if f_hi == 0.0 {
        return Ok(exact(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }

    // Orient so that g(a) < 0 < g(b).
    let sign = if f_lo < 0.0 { 1.0 } else { -1.0 };
    let (mut a, mut b) = (lo, hi);
    let (mut ga, mut gb) = (sign * f_lo, sign * f_hi);

    let eps = cfg.abs_tol;
    let width0 = b - a;
    let k1 = 0.2 / width0;
    let n_half = if width0 > 2.0 * eps {
        ((width0 / (2.0 * eps)).log2().ceil()) as i32
    } else {
        0
    };
    let n_max = n_half + 1;

    let mut iterations = 0;
    while b - a > 2.0 * eps {
        if iterations >= cfg.max_iter {
            return Err(Error::Convergence {
                iterations,
                lo: a,
                hi: b,
            });
        }
        let width = b - a;
        let mid = 0.5 * (a + b);
        let radius = eps * 2f64.powi(n_max - iterations as i32) - 0.5 * width;
        let shift = k1 * width * width;

        let falsi = (gb * a - ga * b) / (gb - ga);
        let x = if falsi.is_finite() {
            let sigma = (mid - falsi).signum();
            let truncated = if shift <= (mid - falsi).abs() {
                falsi + sigma * shift
            } else {
                mid
            };
            if (truncated - mid).abs() <= radius {
                truncated
            } else {
                mid - sigma * radius
            }
        } else {
            mid
        };
        let x = if x > a && x < b { x } else { mid };
        // Floating-point floor: the bracket cannot shrink any further.
        if x <= a || x >= b {
            break;
        }

        iterations += 1;
        let gx = sign * eval(&mut f, x)?;
        if gx > 0.0 {
            b = x;
            gb = gx;
        } else if gx < 0.0 {
            a = x;
            ga = gx;
        } else {
            return Ok(RootResult {
                root: x,
                residual: 0.0,
                iterations,
                bracket: (x, x),
            });
        }
    }
    let root = 0.5 * (a + b);
    let residual = eval(&mut f, root)?;
    Ok(RootResult {
        root,
        residual,
        iterations,
        bracket: (a, b),
    })
}

fn exact(root: f64) -> RootResult {
    RootResult {
        root,
        residual: 0.0,
        iterations: 0,
        bracket: (root, root),
    }
}

/// Newton's method on `[lo, hi]` starting from `x0`, falling back to
/// bisection whenever a step would leave the current bracket.
///
/// `f_df` returns the value and the derivative. Stops when a Newton step is
/// shorter than `cfg.abs_tol` or the bracket collapses below `2 * abs_tol`.
pub fn solve_newton_bracketed<F>(
    mut f_df: F,
    lo: f64,
    hi: f64,
    x0: f64,
    cfg: &RootConfig,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (f_lo, _) = f_df(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let (f_hi, _) = f_df(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    let sign = if f_lo < 0.0 { 1.0 } else { -1.0 };
    let (mut a, mut b) = (lo, hi);
    let mut x = x0.clamp(lo, hi);
    for _ in 0..cfg.max_iter {
        let (fx, dfx) = f_df(x)?;
        if !fx.is_finite() {
            return Err(Error::NonFinite { x });
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if sign * fx > 0.0 {
            b = x;
        } else {
            a = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= cfg.abs_tol || b - a <= 2.0 * cfg.abs_tol || next == x {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence {
        iterations: cfg.max_iter,
        lo: a,
        hi: b,
    })
}

/// Grows an upper bound geometrically until `f(hi) >= target` for an
/// increasing `f` with `f(lo) <= target`.
///
/// Candidates are `lo * g^k` for `lo > 0` and `g^k` (starting at 1) for
/// `lo = 0`, where `g = cfg.bracket_growth`. Candidates are capped at the
/// special-function overflow guard.
pub fn expand_upward<F>(mut f: F, target: f64, lo: f64, cfg: &RootConfig) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(lo >= 0.0) || lo > OVERFLOW_GUARD {
        return Err(Error::Domain {
            what: "expand_upward lower end",
            value: lo,
        });
    }
    let f_lo = eval(&mut f, lo)?;
    if f_lo > target {
        return Err(Error::Bracket {
            lo,
            hi: lo,
            f_lo,
            f_hi: f_lo,
        });
    }
    let mut hi = if lo == 0.0 {
        1.0
    } else {
        lo * cfg.bracket_growth
    };
    loop {
        let capped = hi.min(OVERFLOW_GUARD);
        if eval(&mut f, capped)? >= target {
            return Ok((lo, capped));
        }
        if capped >= OVERFLOW_GUARD {
            return Err(Error::Unbounded {
                target,
                limit: OVERFLOW_GUARD,
            });
        }
        hi *= cfg.bracket_growth;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{f_neumann, growth, SQRT_PI};

    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
        let fa = f(a);
        while b - a > tol {
            let m = 0.5 * (a + b);
            if (f(m) > 0.0) == (fa > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn sqrt_two() {
        let r = solve_bracketed(|x| Ok(x * x - 2.0), 1.0, 2.0, &RootConfig::default()).unwrap();
        assert!((r.root - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(r.bracket.1 - r.bracket.0 <= 2e-12);
        assert!(r.bracket.0 <= r.root && r.root <= r.bracket.1);
    }

    #[test]
    fn exact_zero_at_midpoint() {
        let r = solve_bracketed(Ok, -1.0, 1.0, &RootConfig::default()).unwrap();
        assert_eq!(r.root, 0.0);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn classical_neumann_root() {
        let target = 1.0 / SQRT_PI;
        let r = solve_bracketed(
            |x| Ok(f_neumann(x)? - target),
            0.1,
            2.0,
            &RootConfig::default(),
        )
        .unwrap();
        let oracle = bisect(|x| f_neumann(x).unwrap() - target, 0.1, 2.0, 1e-13);
        assert!((r.root - oracle).abs() < 1e-12);
        assert!((r.root - 0.620_062_633_313_595_5).abs() < 1e-11);
    }

    #[test]
    fn decreasing_functions_work() {
        let r = solve_bracketed(|x| Ok(3.0 - x * x * x), 0.0, 3.0, &RootConfig::default()).unwrap();
        assert!((r.root - 3f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn bracket_and_iteration_errors() {
        let cfg = RootConfig::default();
        assert!(matches!(
            solve_bracketed(|x| Ok(x * x + 1.0), -1.0, 1.0, &cfg),
            Err(Error::Bracket { .. })
        ));
        let tight = RootConfig { max_iter: 2, ..cfg };
        assert!(matches!(
            solve_bracketed(|x| Ok(x.powi(3) - 0.3), 0.0, 10.0, &tight),
            Err(Error::Convergence { .. })
        ));
        assert!(matches!(
            solve_bracketed(|_| Ok(f64::NAN), 0.0, 1.0, &cfg),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = [
            RootConfig {
                abs_tol: 0.0,
                ..Default::default()
            },
            RootConfig {
                max_iter: 0,
                ..Default::default()
            },
            RootConfig {
                bracket_growth: 1.0,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
    }

    #[test]
    fn expand_upward_examples() {
        let cfg = RootConfig::default();
        let (lo, hi) = expand_upward(f_neumann, 0.5642, 0.0, &cfg).unwrap();
        assert!(lo <= 0.620 && 0.620 <= hi);

        let (_, hi) = expand_upward(Ok, 5.0, 0.0, &cfg).unwrap();
        assert!(hi >= 5.0);

        let (lo, hi) = expand_upward(growth, 12.5, 0.0, &cfg).unwrap();
        assert!(lo <= 1.464 && 1.464 <= hi);

        let (lo, hi) = expand_upward(Ok, 5.0, 0.5, &cfg).unwrap();
        assert_eq!(lo, 0.5);
        assert_eq!(hi, 8.0);
    }

    #[test]
    fn expand_upward_hits_guard() {
        let cfg = RootConfig::default();
        assert!(matches!(
            expand_upward(Ok, 100.0, 0.0, &cfg),
            Err(Error::Unbounded { .. })
        ));
        assert!(matches!(
            expand_upward(Ok, 0.1, 1.0, &cfg),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn newton_with_fallback() {
        let cfg = RootConfig::default();
        // A poor start sends plain Newton out of the bracket.
        let x = solve_newton_bracketed(
            |x| Ok((x.atan(), 1.0 / (1.0 + x * x))),
            -1.0,
            20.0,
            15.0,
            &cfg,
        )
        .unwrap();
        assert!(x.abs() < 1e-12);
        let x =
            solve_newton_bracketed(|x| Ok((x * x - 2.0, 2.0 * x)), 0.0, 2.0, 2.0, &cfg).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-15);
    }
}
