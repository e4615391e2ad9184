//! Independent check of the functional solutions by backward shooting.
//!
//! Both front conditions `y(lambda) = 0` and
//! `(1 + delta 0^p) y'(lambda) = -2 lambda / Ste` are known at `eta = lambda`, so
//! the similarity ODE can be integrated from the front towards the fixed
//! face for any trial `lambda`. The trial is then adjusted until the face
//! condition holds. Written as a first-order system with the flux
//! `v = (1 + delta y^p) y'`:
//!
//! ```text
//! y' = v / (1 + delta y^p),    v' = -2 eta v
//! ```
//!
//! integrated with fixed-step classical RK4.

use serde::Serialize;

use crate::dirichlet::DirichletSolution;
use crate::error::{Error, Result};
use crate::model::{power, Boundary, DimensionlessConfig};
use crate::profile::{Profile, SimilaritySolution};
use crate::robin::RobinSolution;
use crate::rootfind::{solve_bracketed, RootConfig};

/// Endpoint data of one backward integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Shot {
    pub y0: f64,
    pub yprime0: f64,
    /// Flux `(1 + delta y^p) y'` at `eta = 0`.
    pub flux0: f64,
    /// Trace on `steps + 1` ascending nodes of `[0, lambda]`.
    pub profile: Profile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShootingResult {
    pub lambda_shoot: f64,
    pub profile: Profile,
    /// `|y(0) - 1|` (Dirichlet) or `|(1 + delta y^p(0)) y'(0) - gamma (y(0) - 1)|` (Robin).
    pub boundary_mismatch: f64,
    pub steps: usize,
}

fn rhs(delta: f64, p: f64, eta: f64, y: f64, v: f64) -> (f64, f64) {
    // Clamp keeps fractional powers defined if the trace dips below zero.
    let k = 1.0 + delta * power(y.max(0.0), p);
    (v / k, -2.0 * eta * v)
}

/// Integrates from `eta = lambda` down to `0` in `steps` RK4 steps.
pub fn integrate_backward(lambda: f64, config: &DimensionlessConfig, steps: usize) -> Result<Shot> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain {
            what: "integrate_backward: lambda",
            value: lambda,
        });
    }
    if steps < 100 {
        return Err(Error::validation("steps", "at least 100 integration steps"));
    }
    let (delta, p) = (config.delta, config.p);
    let h = -lambda / steps as f64;
    let mut y = 0.0;
    let mut v = -2.0 * lambda / config.ste;
    let mut values = vec![0.0; steps + 1];
    for i in (0..steps).rev() {
        let eta = lambda * (i + 1) as f64 / steps as f64;
        let (k1y, k1v) = rhs(delta, p, eta, y, v);
        let (k2y, k2v) = rhs(
            delta,
            p,
            eta + 0.5 * h,
            y + 0.5 * h * k1y,
            v + 0.5 * h * k1v,
        );
        let (k3y, k3v) = rhs(
            delta,
            p,
            eta + 0.5 * h,
            y + 0.5 * h * k2y,
            v + 0.5 * h * k2v,
        );
        let (k4y, k4v) = rhs(delta, p, eta + h, y + h * k3y, v + h * k3v);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if !y.is_finite() || !v.is_finite() {
            return Err(Error::Integration { eta: eta + h });
        }
        values[i] = y;
    }
    let etas = (0..=steps)
        .map(|i| {
            if i == steps {
                lambda
            } else {
                lambda * i as f64 / steps as f64
            }
        })
        .collect();
    let k0 = 1.0 + delta * power(y.max(0.0), p);
    Ok(Shot {
        y0: y,
        yprime0: v / k0,
        flux0: v,
        profile: Profile { etas, values },
    })
}

fn mismatch(shot: &Shot, boundary: Boundary, gamma: f64) -> f64 {
    match boundary {
        Boundary::Dirichlet => shot.y0 - 1.0,
        Boundary::Robin => shot.flux0 - gamma * (shot.y0 - 1.0),
    }
}

/// Finds `lambda` by root-finding on the face mismatch.
///
/// The bracket is seeded around the functional solution when it solves, and
/// falls back to `[1e-6, 3]` otherwise.
pub fn shoot(
    config: &DimensionlessConfig,
    boundary: Boundary,
    cfg: &RootConfig,
    steps: usize,
) -> Result<ShootingResult> {
    config.validate()?;
    let gamma = match boundary {
        Boundary::Dirichlet => 0.0,
        Boundary::Robin => config.require_gamma()?,
    };
    let seed = match boundary {
        Boundary::Dirichlet => DirichletSolution::solve(config, cfg).map(|s| s.lambda).ok(),
        Boundary::Robin => RobinSolution::solve(config, cfg)
            .map(|s| s.lambda_gamma)
            .ok(),
    };
    let g = |lambda: f64| -> Result<f64> {
        Ok(mismatch(
            &integrate_backward(lambda, config, steps)?,
            boundary,
            gamma,
        ))
    };

    let bracket = seed
        .and_then(|s| {
            let mut width = 1e-3;
            while width < 1.0 {
                let (lo, hi) = (s * (1.0 - width), s * (1.0 + width));
                if let (Ok(a), Ok(b)) = (g(lo), g(hi)) {
                    if a.signum() != b.signum() {
                        return Some((lo, hi));
                    }
                }
                width *= 4.0;
            }
            None
        })
        .unwrap_or((1e-6, 3.0));

    let tight = cfg.relative_to(bracket.1, crate::rootfind::FRONT_REL_TOL);
    let report = solve_bracketed(&g, bracket.0, bracket.1, &tight)
        .map_err(|e| Error::Oracle(format!("{boundary:?} shot: {e}")))?;
    let shot = integrate_backward(report.root, config, steps)?;
    Ok(ShootingResult {
        lambda_shoot: report.root,
        boundary_mismatch: mismatch(&shot, boundary, gamma).abs(),
        profile: shot.profile,
        steps,
    })
}

/// Max-norm gap between the shooting trace and a functional solution on the
/// trace nodes, with the functional profile extended by zero.
pub fn profile_gap<S: SimilaritySolution + ?Sized>(shot: &ShootingResult, sol: &S) -> Result<f64> {
    let mut gap: f64 = 0.0;
    for (&eta, &y) in shot.profile.etas.iter().zip(&shot.profile.values) {
        gap = gap.max((sol.y_extended(eta)? - y).abs());
    }
    Ok(gap)
}

/// Relative spread of `Q(eta) = (1 + delta y^p) y' exp(eta^2)` about `Q(lambda / 2)`
/// over the interior nodes of a `grid_points` uniform grid, with `y'` by
/// central differences of step `lambda / (10 grid_points)`.
pub fn ode_residual<F>(y: F, lambda: f64, delta: f64, p: f64, grid_points: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if grid_points < 2 {
        return Err(Error::validation("grid_points", "need at least 2 nodes"));
    }
    let h = lambda / (10.0 * grid_points as f64);
    let q = |eta: f64| -> Result<f64> {
        let dy = (y(eta + h)? - y(eta - h)?) / (2.0 * h);
        Ok((1.0 + delta * power(y(eta)?.max(0.0), p)) * dy * (eta * eta).exp())
    };
    let q_mid = q(0.5 * lambda)?;
    let mut worst: f64 = 0.0;
    for i in 1..grid_points {
        let eta = lambda * i as f64 / grid_points as f64;
        worst = worst.max((q(eta)? - q_mid).abs());
    }
    Ok(worst / q_mid.abs())
}
