//! Convective (Robin) condition at the fixed face.
//!
//! The surface value is tied to the front coefficient through
//! `y(0) = beta(lambda) = 1 - 2 lambda exp(lambda^2) / (gamma Ste)`, and the
//! front equation becomes
//!
//! ```text
//! Ste / sqrt(pi) * F(beta(x)) = x exp(x^2) erf(x),    0 < x < lambda0,
//! ```
//!
//! with `lambda0` the zero of `beta`. The left side falls from
//! `Ste / sqrt(pi) * F(1)` to 0 and the right side rises from 0, so
//! `[0, lambda0]` always brackets exactly one root.

use serde::Serialize;

use crate::dirichlet::{big_f_unchecked, big_g, inv_f};
use crate::error::{Error, Result};
use crate::model::{power, DimensionlessConfig};
use crate::profile::SimilaritySolution;
use crate::rootfind::{expand_upward, solve_bracketed, RootConfig, RootResult, FRONT_REL_TOL};
use crate::specfun::{f_neumann, growth, SQRT_PI};

const BETA_SLACK: f64 = 1e-12;

/// `beta(x) = 1 - 2 x exp(x^2) / (gamma Ste)` on `[0, lambda0]`.
pub fn beta(x: f64, gamma: f64, ste: f64) -> Result<f64> {
    let b = 1.0 - 2.0 * growth(x)? / (gamma * ste);
    if b >= 0.0 {
        Ok(b)
    } else if b > -BETA_SLACK {
        // lambda0 itself is only known to the front tolerance.
        Ok(0.0)
    } else {
        Err(Error::Domain {
            what: "beta: argument beyond lambda0",
            value: x,
        })
    }
}

/// The zero of `beta`, i.e. the root of `x exp(x^2) = gamma Ste / 2`.
pub fn lambda0(gamma: f64, ste: f64, cfg: &RootConfig) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::validation("gamma", "must be positive"));
    }
    if !(ste > 0.0) {
        return Err(Error::validation("ste", "must be positive"));
    }
    let target = 0.5 * gamma * ste;
    let (lo, hi) = expand_upward(growth, target, 0.0, cfg).map_err(|e| match e {
        Error::Unbounded { limit, .. } => Error::Overflow {
            what: "lambda0 target gamma*Ste/2",
            value: target,
            limit,
        },
        other => other,
    })?;
    // x exp(x^2) >= x, so the root is at most `target`.
    let tight = cfg.relative_to(hi.min(target), FRONT_REL_TOL);
    Ok(solve_bracketed(|x| Ok(growth(x)? - target), lo, hi, &tight)?.root)
}

/// `G_gamma(eta)`, the same form as the Dirichlet `G` with `lambda_gamma`.
pub fn big_g_gamma(eta: f64, lambda_gamma: f64, ste: f64) -> Result<f64> {
    big_g(eta, lambda_gamma, ste)
}

/// Solution of the Robin problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobinSolution {
    pub config: DimensionlessConfig,
    pub gamma: f64,
    pub lambda_gamma: f64,
    pub lambda0: f64,
    pub surface_y0: f64,
    #[serde(skip)]
    pub solve_report: RootResult,
    #[serde(skip)]
    pub root_cfg: RootConfig,
}

/// Solves the Robin front equation.
pub fn solve_lambda_gamma(config: &DimensionlessConfig, cfg: &RootConfig) -> Result<RobinSolution> {
    RobinSolution::solve(config, cfg)
}

impl RobinSolution {
    pub fn solve(config: &DimensionlessConfig, cfg: &RootConfig) -> Result<Self> {
        config.validate()?;
        cfg.validate()?;
        let gamma = config.require_gamma()?;
        let ste = config.ste;
        let (delta, p) = (config.delta, config.p);
        let l0 = lambda0(gamma, ste, cfg)?;

        let h = |x: f64| -> Result<f64> {
            let b = beta(x.min(l0), gamma, ste)?;
            Ok(ste / SQRT_PI * big_f_unchecked(b, delta, p) - f_neumann(x)?)
        };
        let tight = cfg.relative_to(l0, FRONT_REL_TOL);
        let eps = 1e-15 * l0;
        let report = match solve_bracketed(h, eps, l0 - eps, &tight) {
            Ok(r) => r,
            Err(Error::Bracket { .. }) => solve_bracketed(h, 0.0, l0, &tight)?,
            Err(e) => return Err(e),
        };
        let lambda_gamma = report.root;
        Ok(Self {
            config: *config,
            gamma,
            lambda_gamma,
            lambda0: l0,
            surface_y0: beta(lambda_gamma, gamma, ste)?,
            solve_report: report,
            root_cfg: *cfg,
        })
    }

    pub fn big_g_gamma(&self, eta: f64) -> Result<f64> {
        big_g_gamma(eta, self.lambda_gamma, self.config.ste)
    }

    /// `y_gamma(eta) = F^-1(G_gamma(eta))`.
    pub fn profile_y_gamma(&self, eta: f64) -> Result<f64> {
        if !(eta >= 0.0 && eta <= self.lambda_gamma) {
            return Err(Error::Domain {
                what: "profile_y_gamma",
                value: eta,
            });
        }
        if eta == self.lambda_gamma {
            return Ok(0.0);
        }
        inv_f(
            self.big_g_gamma(eta)?,
            self.config.delta,
            self.config.p,
            &self.root_cfg,
        )
    }

    /// `|(1 + delta y(0)^p) y'(0) - gamma (y(0) - 1)|` with `y'(0)` from a
    /// one-sided second-order difference of step `grid_h`.
    pub fn convective_residual(&self, grid_h: f64) -> Result<f64> {
        if !(grid_h > 0.0) || 2.0 * grid_h > self.lambda_gamma {
            return Err(Error::Domain {
                what: "convective_residual: step",
                value: grid_h,
            });
        }
        let y0 = self.profile_y_gamma(0.0)?;
        let y1 = self.profile_y_gamma(grid_h)?;
        let y2 = self.profile_y_gamma(2.0 * grid_h)?;
        let dy0 = (-3.0 * y0 + 4.0 * y1 - y2) / (2.0 * grid_h);
        let flux = (1.0 + self.config.delta * power(y0, self.config.p)) * dy0;
        Ok((flux - self.gamma * (y0 - 1.0)).abs())
    }
}

/// Free-function form of [`RobinSolution::convective_residual`].
pub fn convective_residual(sol: &RobinSolution, grid_h: f64) -> Result<f64> {
    sol.convective_residual(grid_h)
}

impl SimilaritySolution for RobinSolution {
    fn config(&self) -> &DimensionlessConfig {
        &self.config
    }

    fn front_coefficient(&self) -> f64 {
        self.lambda_gamma
    }

    fn y(&self, eta: f64) -> Result<f64> {
        self.profile_y_gamma(eta)
    }

    fn kirchhoff_rhs(&self, eta: f64) -> Result<f64> {
        self.big_g_gamma(eta)
    }

    fn surface_value(&self) -> f64 {
        self.surface_y0
    }
}
