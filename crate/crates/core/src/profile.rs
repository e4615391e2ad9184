//! Behaviour shared by the Dirichlet and Robin solutions: profile
//! evaluation with zero extension, the dimensional temperature field and
//! the front position.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{DimensionlessConfig, TemperatureScale};

/// A similarity solution `(y, lambda)` on `[0, lambda]`.
pub trait SimilaritySolution: Sync {
    fn config(&self) -> &DimensionlessConfig;

    /// The front coefficient `lambda` in `s(t) = 2 a lambda sqrt(t)`.
    fn front_coefficient(&self) -> f64;

    /// The profile `y(eta)` for `0 <= eta <= lambda`.
    fn y(&self, eta: f64) -> Result<f64>;

    /// The right-hand side `G(eta)` of `F(y(eta)) = G(eta)`.
    fn kirchhoff_rhs(&self, eta: f64) -> Result<f64>;

    /// `y(0)`.
    fn surface_value(&self) -> f64;

    /// `y` extended by zero beyond the front.
    fn y_extended(&self, eta: f64) -> Result<f64> {
        if eta > self.front_coefficient() {
            Ok(0.0)
        } else {
            self.y(eta)
        }
    }

    /// `s(t) = 2 a lambda sqrt(t)`.
    fn front(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain {
                what: "front: time",
                value: t,
            });
        }
        Ok(2.0 * self.config().diffusivity_a * self.front_coefficient() * t.sqrt())
    }

    /// `T(x, t) = (T0 - Tf) y(x / (2 a sqrt(t))) + Tf` for `0 <= x <= s(t)`.
    fn temperature(&self, scale: &TemperatureScale, x: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain {
                what: "temperature: time",
                value: t,
            });
        }
        if !(x >= 0.0) {
            return Err(Error::Domain {
                what: "temperature: position",
                value: x,
            });
        }
        let s = self.front(t)?;
        if x > s {
            return Err(Error::Domain {
                what: "temperature: position beyond the front",
                value: x,
            });
        }
        let eta =
            (x / (2.0 * self.config().diffusivity_a * t.sqrt())).min(self.front_coefficient());
        Ok((scale.t0 - scale.tf) * self.y(eta)? + scale.tf)
    }

    /// Like [`temperature`](Self::temperature) but `Tf` beyond the front.
    fn temperature_extended(&self, scale: &TemperatureScale, x: f64, t: f64) -> Result<f64> {
        if x > self.front(t)? {
            Ok(scale.tf)
        } else {
            self.temperature(scale, x, t)
        }
    }
}

/// Profile values on a grid of similarity coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub etas: Vec<f64>,
    pub values: Vec<f64>,
}

/// `n` uniform nodes on `[0, end]`, hitting both ends exactly.
pub fn uniform_grid(end: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid needs at least two nodes");
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                end
            } else {
                end * i as f64 / last
            }
        })
        .collect()
}

impl Profile {
    /// Samples `sol` on `n` uniform nodes of `[0, lambda]`.
    pub fn sample<S: SimilaritySolution + ?Sized>(
        sol: &S,
        n: usize,
        exec: Execution,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::validation("grid_points", "need at least 2 nodes"));
        }
        let etas = uniform_grid(sol.front_coefficient(), n);
        Self::sample_on(sol, etas, exec)
    }

    /// Samples `sol` on the given nodes, extending by zero beyond the front.
    pub fn sample_on<S: SimilaritySolution + ?Sized>(
        sol: &S,
        etas: Vec<f64>,
        exec: Execution,
    ) -> Result<Self> {
        let values = exec.try_map(&etas, |&eta| sol.y_extended(eta))?;
        Ok(Self { etas, values })
    }

    pub fn len(&self) -> usize {
        self.etas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.etas.is_empty()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn within_unit_interval(&self) -> bool {
        self.values.iter().all(|&v| (0.0..=1.0).contains(&v))
    }

    /// Max-norm distance to another profile on the same nodes.
    pub fn max_gap(&self, other: &Profile) -> f64 {
        assert_eq!(self.len(), other.len(), "profiles on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_ends() {
        let g = uniform_grid(0.7, 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 0.7);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
