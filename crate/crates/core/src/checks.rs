//! Residual probes for computed profiles.
//!
//! Every solution of the similarity ODE keeps the flux
//! `Q(eta) = (1 + delta y^p) y' exp(eta^2)` constant, reaches the front with
//! flux `-2 lambda / Ste` and satisfies `F(y) = G` pointwise. These probes
//! measure each identity with finite differences of the evaluated profile.

use serde::Serialize;

use crate::dirichlet::big_f_unchecked;
use crate::error::Result;
use crate::exec::Execution;
use crate::model::power;
use crate::profile::{uniform_grid, SimilaritySolution};

/// Finite-difference step for derivative probes on `[0, lambda]`:
/// `1e-6 * max(1, lambda)`, shrunk proportionally for very short fronts.
pub fn fd_step(lambda: f64) -> f64 {
    if lambda >= 1e-2 {
        1e-6 * lambda.max(1.0)
    } else {
        1e-4 * lambda
    }
}

/// `y'(eta)` by central differences, switching to one-sided second-order
/// stencils within `h` of either end of `[0, lambda]`.
pub fn derivative<S: SimilaritySolution + ?Sized>(sol: &S, eta: f64, h: f64) -> Result<f64> {
    let lambda = sol.front_coefficient();
    if eta - h < 0.0 {
        let (y0, y1, y2) = (sol.y(eta)?, sol.y(eta + h)?, sol.y(eta + 2.0 * h)?);
        Ok((-3.0 * y0 + 4.0 * y1 - y2) / (2.0 * h))
    } else if eta + h > lambda {
        let (y0, y1, y2) = (sol.y(eta)?, sol.y(eta - h)?, sol.y(eta - 2.0 * h)?);
        Ok((3.0 * y0 - 4.0 * y1 + y2) / (2.0 * h))
    } else {
        Ok((sol.y(eta + h)? - sol.y(eta - h)?) / (2.0 * h))
    }
}

/// `(1 + delta y^p) y'` at `eta`.
pub fn flux<S: SimilaritySolution + ?Sized>(sol: &S, eta: f64, h: f64) -> Result<f64> {
    let c = sol.config();
    Ok((1.0 + c.delta * power(sol.y(eta)?, c.p)) * derivative(sol, eta, h)?)
}

/// `max |Q(eta) - Q(0)| / |Q(0)|` over `nodes` uniform points of `[0, lambda]`.
pub fn flux_constant_deviation<S: SimilaritySolution + ?Sized>(
    sol: &S,
    nodes: usize,
    exec: Execution,
) -> Result<f64> {
    let lambda = sol.front_coefficient();
    let h = fd_step(lambda);
    let q = |eta: f64| -> Result<f64> { Ok(flux(sol, eta, h)? * (eta * eta).exp()) };
    let q0 = q(0.0)?;
    let devs = exec.try_map(&uniform_grid(lambda, nodes), |&eta| {
        Ok::<_, crate::Error>((q(eta)? - q0).abs())
    })?;
    Ok(devs.into_iter().fold(0.0, f64::max) / q0.abs())
}

/// Relative mismatch of the front condition `(1 + delta 0^p) y'(lambda) = -2 lambda / Ste`.
///
/// For `p > 0` this is `y'(lambda) = -2 lambda / Ste`.
pub fn stefan_residual<S: SimilaritySolution + ?Sized>(sol: &S) -> Result<f64> {
    let lambda = sol.front_coefficient();
    let expected = -2.0 * lambda / sol.config().ste;
    let got = flux(sol, lambda, fd_step(lambda))?;
    Ok(((got - expected) / expected).abs())
}

/// `max |F(y(eta)) - G(eta)|` over `nodes` uniform points.
pub fn functional_residual<S: SimilaritySolution + ?Sized>(
    sol: &S,
    nodes: usize,
    exec: Execution,
) -> Result<f64> {
    let c = *sol.config();
    let gaps = exec.try_map(&uniform_grid(sol.front_coefficient(), nodes), |&eta| {
        let y = sol.y(eta)?;
        Ok::<_, crate::Error>((big_f_unchecked(y, c.delta, c.p) - sol.kirchhoff_rhs(eta)?).abs())
    })?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeReport {
    pub min: f64,
    pub max: f64,
    pub non_increasing: bool,
}

impl ShapeReport {
    pub fn in_unit_interval(&self) -> bool {
        self.min >= 0.0 && self.max <= 1.0
    }
}

/// Range and monotonicity of the profile on `nodes` uniform points.
pub fn shape<S: SimilaritySolution + ?Sized>(
    sol: &S,
    nodes: usize,
    exec: Execution,
) -> Result<ShapeReport> {
    let values = exec.try_map(&uniform_grid(sol.front_coefficient(), nodes), |&eta| {
        sol.y(eta)
    })?;
    Ok(ShapeReport {
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        non_increasing: values.windows(2).all(|w| w[1] <= w[0]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::solve_lambda;
    use crate::model::DimensionlessConfig;
    use crate::robin::solve_lambda_gamma;
    use crate::rootfind::RootConfig;

    #[test]
    fn dirichlet_probes() {
        for &(ste, delta, p) in &[
            (1.0, 0.0, 1.0),
            (0.5, 5.0, 1.0),
            (0.8, 5.0, 2.5),
            (0.1, 1.0, 10.0),
        ] {
            let s = solve_lambda(
                &DimensionlessConfig::new(ste, delta, p),
                &RootConfig::default(),
            )
            .unwrap();
            let exec = Execution::default();
            assert!(flux_constant_deviation(&s, 1000, exec).unwrap() <= 1e-4);
            assert!(stefan_residual(&s).unwrap() <= 1e-4);
            assert!(functional_residual(&s, 1000, exec).unwrap() <= 1e-10);
            let sh = shape(&s, 1000, exec).unwrap();
            assert!(sh.in_unit_interval() && sh.non_increasing);
        }
    }

    #[test]
    fn robin_probes() {
        let config = DimensionlessConfig::new(0.5, 5.0, 1.0).with_gamma(50.0);
        let r = solve_lambda_gamma(&config, &RootConfig::default()).unwrap();
        let exec = Execution::Sequential;
        assert!(flux_constant_deviation(&r, 500, exec).unwrap() <= 1e-4);
        assert!(stefan_residual(&r).unwrap() <= 1e-4);
        assert!(functional_residual(&r, 500, exec).unwrap() <= 1e-10);
    }

    #[test]
    fn zero_exponent_uses_flux_form() {
        let s = solve_lambda(
            &DimensionlessConfig::new(0.5, 5.0, 0.0),
            &RootConfig::default(),
        )
        .unwrap();
        assert!(stefan_residual(&s).unwrap() <= 1e-4);
        // The bare slope is smaller by the factor 1 + delta.
        let slope = derivative(&s, s.lambda, fd_step(s.lambda)).unwrap();
        assert!((slope * 6.0 / (-2.0 * s.lambda / 0.5) - 1.0).abs() < 1e-4);
    }
}
