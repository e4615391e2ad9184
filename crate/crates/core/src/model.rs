//! Physical parameters, the power-law coefficient laws and the reduction to
//! dimensionless groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which condition is imposed at the fixed face `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Prescribed temperature `T0`.
    Dirichlet,
    /// Convective exchange with a bulk at `T0`, coefficient `h / sqrt(t)`.
    Robin,
}

/// Dimensional material and boundary data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub rho: f64,
    /// Specific heat at the phase-change temperature.
    pub c0: f64,
    /// Conductivity at the phase-change temperature.
    pub k0: f64,
    /// Latent heat per unit mass.
    pub latent: f64,
    /// Fixed-face (Dirichlet) or bulk (Robin) temperature.
    pub t0: f64,
    /// Phase-change temperature.
    pub tf: f64,
    /// Heat-transfer coefficient, only read for the Robin condition.
    pub h: Option<f64>,
    pub delta: f64,
    pub p: f64,
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

fn non_negative(field: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            format!("must be non-negative and finite, got {v}"),
        ))
    }
}

impl MaterialSpec {
    pub fn validate(&self, boundary: Boundary) -> Result<()> {
        positive("rho", self.rho)?;
        positive("c0", self.c0)?;
        positive("k0", self.k0)?;
        positive("latent", self.latent)?;
        if !self.t0.is_finite() {
            return Err(Error::validation("T0", "must be finite"));
        }
        if !self.tf.is_finite() {
            return Err(Error::validation("Tf", "must be finite"));
        }
        if !(self.t0 > self.tf) {
            return Err(Error::validation(
                "T0",
                format!("must exceed Tf ({} <= {})", self.t0, self.tf),
            ));
        }
        non_negative("delta", self.delta)?;
        non_negative("p", self.p)?;
        if boundary == Boundary::Robin {
            match self.h {
                Some(h) => positive("h", h)?,
                None => return Err(Error::validation("h", "required for the Robin condition")),
            }
        }
        Ok(())
    }

    /// Thermal diffusivity scale `a = sqrt(k0 / (rho c0))`.
    pub fn diffusivity(&self) -> f64 {
        (self.k0 / (self.rho * self.c0)).sqrt()
    }

    pub fn temperature_scale(&self) -> TemperatureScale {
        TemperatureScale {
            t0: self.t0,
            tf: self.tf,
        }
    }

    fn bracket(&self, temperature: f64, what: &'static str) -> Result<f64> {
        if !(temperature >= self.tf && temperature <= self.t0) {
            return Err(Error::Domain {
                what,
                value: temperature,
            });
        }
        let u = (temperature - self.tf) / (self.t0 - self.tf);
        Ok(1.0 + self.delta * power(u, self.p))
    }

    /// `k(T) = k0 (1 + delta u^p)` with `u = (T - Tf) / (T0 - Tf)`.
    pub fn conductivity(&self, temperature: f64) -> Result<f64> {
        Ok(self.k0 * self.bracket(temperature, "conductivity")?)
    }

    /// `c(T) = c0 (1 + delta u^p)`.
    pub fn heat_capacity(&self, temperature: f64) -> Result<f64> {
        Ok(self.c0 * self.bracket(temperature, "heat_capacity")?)
    }
}

/// `u^p` with `0^0 = 1`.
#[inline]
pub fn power(u: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 1.0 {
        u
    } else {
        u.powf(p)
    }
}

/// Temperatures used to map the similarity profile back to `T(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureScale {
    pub t0: f64,
    pub tf: f64,
}

/// Reduced parameters consumed by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessConfig {
    /// Stefan number `c0 (T0 - Tf) / l`.
    pub ste: f64,
    pub delta: f64,
    pub p: f64,
    /// `2 h a / k0`; present only for the Robin condition.
    pub gamma: Option<f64>,
    /// `a`, length per square-root time.
    pub diffusivity_a: f64,
}

impl DimensionlessConfig {
    /// Dirichlet configuration with unit diffusivity.
    pub fn new(ste: f64, delta: f64, p: f64) -> Self {
        Self {
            ste,
            delta,
            p,
            gamma: None,
            diffusivity_a: 1.0,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn without_gamma(mut self) -> Self {
        self.gamma = None;
        self
    }

    pub fn with_diffusivity(mut self, a: f64) -> Self {
        self.diffusivity_a = a;
        self
    }

    pub fn validate(&self) -> Result<()> {
        positive("ste", self.ste)?;
        non_negative("delta", self.delta)?;
        non_negative("p", self.p)?;
        positive("a", self.diffusivity_a)?;
        if let Some(g) = self.gamma {
            positive("gamma", g)?;
        }
        Ok(())
    }

    /// `gamma`, or a validation error naming the field when absent.
    pub fn require_gamma(&self) -> Result<f64> {
        let g = self
            .gamma
            .ok_or_else(|| Error::validation("gamma", "required for the Robin condition"))?;
        positive("gamma", g)?;
        Ok(g)
    }

    /// `delta / (p + 1)`, the coefficient shared by `F` and `g`.
    pub(crate) fn kirchhoff_coef(&self) -> f64 {
        self.delta / (self.p + 1.0)
    }
}

/// Reduces dimensional data to the solver inputs.
pub fn reduce(spec: &MaterialSpec, boundary: Boundary) -> Result<DimensionlessConfig> {
    spec.validate(boundary)?;
    let a = spec.diffusivity();
    let gamma = match boundary {
        Boundary::Dirichlet => None,
        Boundary::Robin => spec.h.map(|h| 2.0 * h * a / spec.k0),
    };
    Ok(DimensionlessConfig {
        ste: spec.c0 * (spec.t0 - spec.tf) / spec.latent,
        delta: spec.delta,
        p: spec.p,
        gamma,
        diffusivity_a: a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_spec() -> MaterialSpec {
        MaterialSpec {
            rho: 1.0,
            c0: 1.0,
            k0: 1.0,
            latent: 20.0,
            t0: 10.0,
            tf: 0.0,
            h: Some(25.0),
            delta: 1.0,
            p: 2.0,
        }
    }

    #[test]
    fn reduction_examples() {
        let cfg = reduce(&unit_spec(), Boundary::Dirichlet).unwrap();
        assert_eq!(cfg.ste, 0.5);
        assert_eq!(cfg.diffusivity_a, 1.0);
        assert_eq!(cfg.gamma, None);

        let cfg = reduce(&unit_spec(), Boundary::Robin).unwrap();
        assert_eq!(cfg.gamma, Some(50.0));

        let spec = MaterialSpec {
            t0: 1.0,
            latent: 1.0,
            ..unit_spec()
        };
        assert_eq!(reduce(&spec, Boundary::Dirichlet).unwrap().ste, 1.0);
    }

    #[test]
    fn validation_names_field() {
        let spec = MaterialSpec {
            t0: -1.0,
            ..unit_spec()
        };
        match reduce(&spec, Boundary::Dirichlet) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "T0"),
            other => panic!("{other:?}"),
        }
        let spec = MaterialSpec {
            h: None,
            ..unit_spec()
        };
        assert!(reduce(&spec, Boundary::Dirichlet).is_ok());
        match reduce(&spec, Boundary::Robin) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "h"),
            other => panic!("{other:?}"),
        }
        let spec = MaterialSpec {
            rho: 0.0,
            ..unit_spec()
        };
        assert!(matches!(
            spec.validate(Boundary::Dirichlet),
            Err(Error::Validation { field: "rho", .. })
        ));
    }

    #[test]
    fn coefficient_laws() {
        let spec = unit_spec();
        assert_eq!(spec.conductivity(0.0).unwrap(), 1.0);
        assert_eq!(spec.conductivity(10.0).unwrap(), 2.0);
        assert!((spec.conductivity(5.0).unwrap() - 1.25).abs() < 1e-15);
        assert_eq!(spec.heat_capacity(0.0).unwrap(), 1.0);
        let spec = MaterialSpec {
            delta: 5.0,
            p: 1.0,
            ..spec
        };
        assert!((spec.heat_capacity(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(spec.conductivity(10.5).is_err());
        assert!(spec.heat_capacity(-0.1).is_err());
    }

    #[test]
    fn zero_exponent_is_constant() {
        let spec = MaterialSpec {
            p: 0.0,
            ..unit_spec()
        };
        assert_eq!(spec.conductivity(0.0).unwrap(), 2.0);
        assert_eq!(spec.conductivity(7.0).unwrap(), 2.0);
    }

    #[test]
    fn ratio_identity_and_monotonicity() {
        let spec = MaterialSpec {
            k0: 3.0,
            c0: 0.7,
            delta: 2.0,
            p: 1.5,
            ..unit_spec()
        };
        let mut prev = 0.0;
        for i in 0..=100 {
            let t = 0.1 * i as f64;
            let k = spec.conductivity(t).unwrap();
            let c = spec.heat_capacity(t).unwrap();
            assert!((k / c - 3.0 / 0.7).abs() < 1e-14);
            assert!(k > prev);
            prev = k;
        }
    }

    #[test]
    fn dimensionless_validation() {
        assert!(DimensionlessConfig::new(0.0, 1.0, 1.0).validate().is_err());
        assert!(DimensionlessConfig::new(1.0, -1.0, 1.0).validate().is_err());
        assert!(DimensionlessConfig::new(1.0, 1.0, 1.0)
            .with_gamma(0.0)
            .validate()
            .is_err());
        assert!(matches!(
            DimensionlessConfig::new(1.0, 1.0, 1.0).require_gamma(),
            Err(Error::Validation { field: "gamma", .. })
        ));
    }
}
