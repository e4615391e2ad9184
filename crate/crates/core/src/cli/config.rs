//! Flat `key = value` run configuration.
//!
//! Either dimensional keys (`rho`, `c0`, `k0`, `latent`, `h`) or
//! dimensionless ones (`ste`, `gamma`, `a`) may appear, never both. `delta`,
//! `p`, `T0` and `Tf` are shared; `p`, `gamma` and `h` accept comma-separated
//! lists. `x_lattice` / `t_lattice` take `start, end, count` and request a
//! temperature lattice. `p` may be omitted when `delta = 0`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{reduce, Boundary, DimensionlessConfig, MaterialSpec, TemperatureScale};

const DIMENSIONAL: [&str; 5] = ["rho", "c0", "k0", "latent", "h"];
const DIMENSIONLESS: [&str; 3] = ["ste", "gamma", "a"];
const SHARED: [&str; 6] = ["delta", "p", "T0", "Tf", "x_lattice", "t_lattice"];

/// Uniform `count` points on `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.end
                } else {
                    self.start + (self.end - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub x: Axis,
    pub t: Axis,
}

#[derive(Debug, Clone, PartialEq)]
enum Physics {
    Dimensional {
        rho: f64,
        c0: f64,
        k0: f64,
        latent: f64,
        t0: f64,
        tf: f64,
        h: Vec<f64>,
    },
    Dimensionless {
        ste: f64,
        gamma: Vec<f64>,
        a: f64,
        scale: Option<TemperatureScale>,
    },
}

/// A parsed configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    physics: Physics,
    pub delta: f64,
    pub ps: Vec<f64>,
    pub lattice: Option<Lattice>,
}

fn parse_list(key: &'static str, raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::validation(key, format!("`{s}` is not a finite number")))
        })
        .collect()
}

fn static_key(key: &str) -> Option<&'static str> {
    DIMENSIONAL
        .iter()
        .chain(DIMENSIONLESS.iter())
        .chain(SHARED.iter())
        .find(|k| **k == key)
        .copied()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::validation(
                    "config",
                    format!("line {}: expected `key = value`", lineno + 1),
                )
            })?;
            let key = key.trim();
            let key = static_key(key).ok_or_else(|| {
                Error::validation(
                    "config",
                    format!("line {}: unknown key `{key}`", lineno + 1),
                )
            })?;
            if raw.contains_key(key) {
                return Err(Error::validation(key, "given more than once"));
            }
            let values = parse_list(key, value)?;
            if values.is_empty() {
                return Err(Error::validation(key, "no value"));
            }
            raw.insert(key, values);
        }

        let has_dim = DIMENSIONAL.iter().find(|k| raw.contains_key(*k));
        let has_nodim = DIMENSIONLESS.iter().find(|k| raw.contains_key(*k));
        if let (Some(d), Some(n)) = (has_dim, has_nodim) {
            return Err(Error::validation(
                n,
                format!("cannot mix dimensionless `{n}` with dimensional `{d}`"),
            ));
        }

        let scalar = |key: &'static str| -> Result<Option<f64>> {
            match raw.get(key) {
                None => Ok(None),
                Some(v) if v.len() == 1 => Ok(Some(v[0])),
                Some(_) => Err(Error::validation(key, "expects a single value")),
            }
        };
        let required = |key: &'static str| -> Result<f64> {
            scalar(key)?.ok_or_else(|| Error::validation(key, "missing"))
        };
        let axis = |key: &'static str| -> Result<Option<Axis>> {
            match raw.get(key) {
                None => Ok(None),
                Some(v) if v.len() == 3 && v[2] >= 1.0 && v[2].fract() == 0.0 && v[1] >= v[0] => {
                    Ok(Some(Axis {
                        start: v[0],
                        end: v[1],
                        count: v[2] as usize,
                    }))
                }
                Some(_) => Err(Error::validation(
                    key,
                    "expects `start, end, count` with end >= start and a whole count >= 1",
                )),
            }
        };

        let delta = required("delta")?;
        // With delta = 0 the exponent has no effect, so it may be left out.
        let ps = match raw.get("p") {
            Some(ps) => ps.clone(),
            None if delta == 0.0 => vec![1.0],
            None => return Err(Error::validation("p", "missing")),
        };
        let lattice = match (axis("x_lattice")?, axis("t_lattice")?) {
            (None, None) => None,
            (Some(x), Some(t)) => {
                if x.start < 0.0 {
                    return Err(Error::validation("x_lattice", "positions must be >= 0"));
                }
                if !(t.start > 0.0) {
                    return Err(Error::validation("t_lattice", "times must be > 0"));
                }
                Some(Lattice { x, t })
            }
            (Some(_), None) => return Err(Error::validation("t_lattice", "missing")),
            (None, Some(_)) => return Err(Error::validation("x_lattice", "missing")),
        };

        let physics = if has_dim.is_some() {
            Physics::Dimensional {
                rho: required("rho")?,
                c0: required("c0")?,
                k0: required("k0")?,
                latent: required("latent")?,
                t0: required("T0")?,
                tf: required("Tf")?,
                h: raw.get("h").cloned().unwrap_or_default(),
            }
        } else {
            let scale = match (scalar("T0")?, scalar("Tf")?) {
                (Some(t0), Some(tf)) => {
                    if !(t0 > tf) {
                        return Err(Error::validation("T0", "must exceed Tf"));
                    }
                    Some(TemperatureScale { t0, tf })
                }
                (None, None) => None,
                (Some(_), None) => return Err(Error::validation("Tf", "missing")),
                (None, Some(_)) => return Err(Error::validation("T0", "missing")),
            };
            if lattice.is_some() && scale.is_none() {
                return Err(Error::validation(
                    "T0",
                    "required for a temperature lattice",
                ));
            }
            Physics::Dimensionless {
                ste: required("ste")?,
                gamma: raw.get("gamma").cloned().unwrap_or_default(),
                a: scalar("a")?.unwrap_or(1.0),
                scale,
            }
        };
        let cfg = RunConfig {
            physics,
            delta,
            ps,
            lattice,
        };
        // Surface parameter errors before any solve.
        for p in &cfg.ps {
            cfg.config_for(*p, None)?;
        }
        Ok(cfg)
    }

    pub fn is_dimensional(&self) -> bool {
        matches!(self.physics, Physics::Dimensional { .. })
    }

    /// Whether any heat-transfer data (`h` or `gamma`) was supplied.
    pub fn has_transfer_coefficient(&self) -> bool {
        !self.transfer_values().is_empty()
    }

    fn transfer_values(&self) -> &[f64] {
        match &self.physics {
            Physics::Dimensional { h, .. } => h,
            Physics::Dimensionless { gamma, .. } => gamma,
        }
    }

    /// Name of the heat-transfer key in this configuration's input mode.
    pub fn transfer_key(&self) -> &'static str {
        if self.is_dimensional() {
            "h"
        } else {
            "gamma"
        }
    }

    /// Number of heat-transfer values supplied.
    pub fn transfer_count(&self) -> usize {
        self.transfer_values().len()
    }

    pub fn temperature_scale(&self) -> Option<TemperatureScale> {
        match &self.physics {
            Physics::Dimensional { t0, tf, .. } => Some(TemperatureScale { t0: *t0, tf: *tf }),
            Physics::Dimensionless { scale, .. } => *scale,
        }
    }

    /// Reduced configuration for exponent `p` and the `index`-th heat-transfer
    /// value (`None` for the Dirichlet problem).
    pub fn config_for(&self, p: f64, index: Option<usize>) -> Result<DimensionlessConfig> {
        match &self.physics {
            Physics::Dimensional {
                rho,
                c0,
                k0,
                latent,
                t0,
                tf,
                h,
            } => {
                let boundary = if index.is_some() {
                    Boundary::Robin
                } else {
                    Boundary::Dirichlet
                };
                let spec = MaterialSpec {
                    rho: *rho,
                    c0: *c0,
                    k0: *k0,
                    latent: *latent,
                    t0: *t0,
                    tf: *tf,
                    h: index.and_then(|i| h.get(i).copied()),
                    delta: self.delta,
                    p,
                };
                reduce(&spec, boundary)
            }
            Physics::Dimensionless { ste, gamma, a, .. } => {
                let mut c = DimensionlessConfig::new(*ste, self.delta, p).with_diffusivity(*a);
                if let Some(i) = index {
                    let g = gamma
                        .get(i)
                        .copied()
                        .ok_or_else(|| Error::validation("gamma", "missing"))?;
                    c = c.with_gamma(g);
                }
                c.validate()?;
                Ok(c)
            }
        }
    }

    /// Reduced `gamma` values, in file order.
    pub fn gammas(&self) -> Result<Vec<f64>> {
        let p = self.ps[0];
        (0..self.transfer_count())
            .map(|i| self.config_for(p, Some(i))?.require_gamma())
            .collect()
    }
}
