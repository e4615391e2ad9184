//! Prescribed temperature at the fixed face.
//!
//! The similarity problem reduces to a scalar front equation
//! `x exp(x^2) erf(x) = g` with `g = Ste / sqrt(pi) * (1 + delta / (p + 1))`,
//! and an implicit profile `F(y(eta)) = G(eta)` where
//!
//! ```text
//! F(x)   = x + delta / (p + 1) * x^(p + 1)
//! G(eta) = sqrt(pi) / Ste * lambda exp(lambda^2) (erf(lambda) - erf(eta))
//! ```
//!
//! `F` is increasing, so `y = F^-1(G)` is evaluated pointwise on demand.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{power, DimensionlessConfig};
use crate::profile::SimilaritySolution;
use crate::rootfind::{
    expand_upward, solve_bracketed, solve_newton_bracketed, RootConfig, RootResult, FRONT_REL_TOL,
};
use crate::specfun::{erf_diff_unchecked, erf_finite, f_neumann, OVERFLOW_GUARD, SQRT_PI};

/// `Ste / sqrt(pi) * (1 + delta / (p + 1))`.
pub fn g_constant(config: &DimensionlessConfig) -> f64 {
    config.ste / SQRT_PI * (1.0 + config.kirchhoff_coef())
}

/// `F(x) = x + delta / (p + 1) * x^(p + 1)`.
pub fn big_f(x: f64, delta: f64, p: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "F",
            value: x,
        });
    }
    Ok(big_f_unchecked(x, delta, p))
}

#[inline]
pub(crate) fn big_f_unchecked(x: f64, delta: f64, p: f64) -> f64 {
    x + delta / (p + 1.0) * x * power(x, p)
}

/// Inverse of [`big_f`] on `[0, inf)`.
///
/// `delta = 0` returns `z`, `p = 1` uses the positive root of the quadratic,
/// anything else goes through [`inv_f_newton`].
pub fn inv_f(z: f64, delta: f64, p: f64, cfg: &RootConfig) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "F^-1",
            value: z,
        });
    }
    if delta == 0.0 {
        Ok(z)
    } else if p == 1.0 {
        // delta/2 x^2 + x - z = 0, written without cancellation.
        Ok(2.0 * z / (1.0 + (1.0 + 2.0 * delta * z).sqrt()))
    } else if p == 0.0 {
        Ok(z / (1.0 + delta))
    } else {
        inv_f_newton(z, delta, p, cfg)
    }
}

/// Inverse of [`big_f`] by bracketed Newton on `[0, max(1, z)]`, valid for
/// every `delta >= 0, p >= 0`.
pub fn inv_f_newton(z: f64, delta: f64, p: f64, cfg: &RootConfig) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "F^-1",
            value: z,
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let coef = delta / (p + 1.0);
    let hi = z.max(1.0);
    // F is convex, so Newton from the right of the root (F(x) >= x puts z
    // there) descends monotonically.
    solve_newton_bracketed(
        |x| {
            let xp = power(x, p);
            Ok((x + coef * x * xp - z, 1.0 + delta * xp))
        },
        0.0,
        hi,
        z,
        cfg,
    )
}

/// `G(eta) = sqrt(pi) / Ste * lambda exp(lambda^2) (erf(lambda) - erf(eta))`.
pub fn big_g(eta: f64, lambda: f64, ste: f64) -> Result<f64> {
    if !(eta >= 0.0 && eta <= lambda) {
        return Err(Error::Domain {
            what: "G",
            value: eta,
        });
    }
    if lambda > OVERFLOW_GUARD {
        return Err(Error::Overflow {
            what: "G",
            value: lambda,
            limit: OVERFLOW_GUARD,
        });
    }
    Ok(SQRT_PI / ste * lambda * (lambda * lambda).exp() * erf_diff_unchecked(lambda, eta))
}

/// Explicit `p = 1` profile
/// `y = (sqrt((1 + delta)^2 - delta (2 + delta) erf(eta) / erf(lambda)) - 1) / delta`.
///
/// `delta = 0` falls back to `1 - erf(eta) / erf(lambda)`.
pub fn closed_form_p1(eta: f64, lambda: f64, delta: f64) -> Result<f64> {
    if !(eta >= 0.0 && eta <= lambda) || !(lambda > 0.0) {
        return Err(Error::Domain {
            what: "closed_form_p1",
            value: eta,
        });
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain {
            what: "closed_form_p1: delta",
            value: delta,
        });
    }
    // 1 - erf(eta)/erf(lambda)
    let q = erf_diff_unchecked(lambda, eta) / erf_finite(lambda);
    if delta == 0.0 {
        return Ok(q);
    }
    let s = 1.0 + delta * (2.0 + delta) * q;
    Ok((2.0 + delta) * q / (s.sqrt() + 1.0))
}

/// Solution of the Dirichlet problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletSolution {
    pub config: DimensionlessConfig,
    pub lambda: f64,
    pub g_target: f64,
    #[serde(skip)]
    pub solve_report: RootResult,
    #[serde(skip)]
    pub root_cfg: RootConfig,
}

/// Solves `f(lambda) = g` for the Dirichlet front coefficient.
pub fn solve_lambda(config: &DimensionlessConfig, cfg: &RootConfig) -> Result<DirichletSolution> {
    DirichletSolution::solve(config, cfg)
}

impl DirichletSolution {
    pub fn solve(config: &DimensionlessConfig, cfg: &RootConfig) -> Result<Self> {
        config.validate()?;
        cfg.validate()?;
        let g = g_constant(config);
        let (lo, hi) = expand_upward(f_neumann, g, 0.0, cfg).map_err(|e| match e {
            Error::Unbounded { limit, .. } => Error::Overflow {
                what: "front equation target g",
                value: g,
                limit,
            },
            other => other,
        })?;
        let tight = cfg.relative_to(hi, FRONT_REL_TOL);
        let report = solve_bracketed(|x| Ok(f_neumann(x)? - g), lo, hi, &tight)?;
        Ok(Self {
            config: *config,
            lambda: report.root,
            g_target: g,
            solve_report: report,
            root_cfg: *cfg,
        })
    }

    /// `G(eta)` for this solution.
    pub fn big_g(&self, eta: f64) -> Result<f64> {
        big_g(eta, self.lambda, self.config.ste)
    }

    /// `y(eta) = F^-1(G(eta))`.
    pub fn profile_y(&self, eta: f64) -> Result<f64> {
        if !(eta >= 0.0 && eta <= self.lambda) {
            return Err(Error::Domain {
                what: "profile_y",
                value: eta,
            });
        }
        if eta == self.lambda {
            return Ok(0.0);
        }
        let y = inv_f(
            self.big_g(eta)?,
            self.config.delta,
            self.config.p,
            &self.root_cfg,
        )?;
        // G(0) matches F(1) only up to the front-equation tolerance.
        Ok(y.min(1.0))
    }
}

impl SimilaritySolution for DirichletSolution {
    fn config(&self) -> &DimensionlessConfig {
        &self.config
    }

    fn front_coefficient(&self) -> f64 {
        self.lambda
    }

    fn y(&self, eta: f64) -> Result<f64> {
        self.profile_y(eta)
    }

    fn kirchhoff_rhs(&self, eta: f64) -> Result<f64> {
        self.big_g(eta)
    }

    fn surface_value(&self) -> f64 {
        1.0
    }
}
