//! Behaviour of the Robin solution as the heat-transfer coefficient grows.
//!
//! `lambda_gamma` increases with `gamma` and stays below the Dirichlet
//! `lambda`, and `y_gamma` tends to `y` pointwise. The study below solves the
//! Dirichlet problem once, then one Robin problem per `gamma`, and compares
//! the profiles on a shared grid with `y_gamma` extended by zero past its
//! own front.

use serde::Serialize;

use crate::dirichlet::DirichletSolution;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::DimensionlessConfig;
use crate::profile::{uniform_grid, SimilaritySolution};
use crate::robin::RobinSolution;
use crate::rootfind::RootConfig;

/// Fractions of `lambda` at which pointwise gaps are recorded.
pub const PROBE_FRACTIONS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub gamma_grid: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub lambda_limit: f64,
    /// `max |y_gamma - y|` over the shared grid, per gamma.
    pub sup_errors: Vec<f64>,
    /// `|y_gamma(eta) - y(eta)|` at `PROBE_FRACTIONS * lambda`, per gamma.
    pub pointwise_gaps: Vec<[f64; 4]>,
    /// `lambdas` strictly increasing along the grid.
    pub monotone: bool,
    /// Every `lambda_gamma` below `lambda_limit`.
    pub bounded: bool,
}

impl ConvergenceReport {
    /// `lambda - lambda_gamma` per gamma.
    pub fn lambda_gaps(&self) -> Vec<f64> {
        self.lambdas.iter().map(|l| self.lambda_limit - l).collect()
    }

    /// Whether the gap at every probe point is non-increasing in gamma.
    pub fn pointwise_non_increasing(&self) -> bool {
        self.pointwise_gaps
            .windows(2)
            .all(|w| (0..4).all(|k| w[1][k] <= w[0][k]))
    }

    pub fn sup_errors_non_increasing(&self) -> bool {
        self.sup_errors.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Per-gamma output of [`converge_study`], kept for callers that also want the profiles.
#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub report: ConvergenceReport,
    pub dirichlet: DirichletSolution,
    pub robin: Vec<RobinSolution>,
    pub etas: Vec<f64>,
}

/// Runs the study. Any `gamma` in `config` is ignored.
pub fn converge_study(
    config: &DimensionlessConfig,
    gamma_grid: &[f64],
    eta_samples: usize,
    cfg: &RootConfig,
    exec: Execution,
) -> Result<ConvergenceStudy> {
    if gamma_grid.is_empty() {
        return Err(Error::validation("gamma", "empty gamma list"));
    }
    if let Some(bad) = gamma_grid.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
        return Err(Error::validation(
            "gamma",
            format!("must be positive, got {bad}"),
        ));
    }
    if gamma_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::validation(
            "gamma",
            "list must be strictly ascending",
        ));
    }
    if eta_samples < 2 {
        return Err(Error::validation("eta_samples", "need at least 2 samples"));
    }
    let base = config.without_gamma();
    let dirichlet = DirichletSolution::solve(&base, cfg)?;
    let lambda = dirichlet.lambda;
    let etas = uniform_grid(lambda, eta_samples);
    let y_ref: Vec<f64> = etas
        .iter()
        .map(|&eta| dirichlet.profile_y(eta))
        .collect::<Result<_>>()?;
    let probes: Vec<f64> = PROBE_FRACTIONS.iter().map(|f| f * lambda).collect();
    let y_probe: Vec<f64> = probes
        .iter()
        .map(|&eta| dirichlet.profile_y(eta))
        .collect::<Result<_>>()?;

    let per_gamma = exec.try_map(gamma_grid, |&gamma| {
        let annotate = |e: Error| Error::AtGamma {
            gamma,
            source: Box::new(e),
        };
        let sol = RobinSolution::solve(&base.with_gamma(gamma), cfg).map_err(annotate)?;
        let mut sup: f64 = 0.0;
        for (&eta, &y) in etas.iter().zip(&y_ref) {
            sup = sup.max((sol.y_extended(eta).map_err(annotate)? - y).abs());
        }
        let mut gaps = [0.0; 4];
        for k in 0..4 {
            gaps[k] = (sol.y_extended(probes[k]).map_err(annotate)? - y_probe[k]).abs();
        }
        Ok::<_, Error>((sol, sup, gaps))
    })?;

    let lambdas: Vec<f64> = per_gamma.iter().map(|(s, _, _)| s.lambda_gamma).collect();
    let report = ConvergenceReport {
        gamma_grid: gamma_grid.to_vec(),
        monotone: lambdas.windows(2).all(|w| w[1] > w[0]),
        bounded: lambdas.iter().all(|&l| l < lambda),
        lambdas,
        lambda_limit: lambda,
        sup_errors: per_gamma.iter().map(|(_, e, _)| *e).collect(),
        pointwise_gaps: per_gamma.iter().map(|(_, _, g)| *g).collect(),
    };
    Ok(ConvergenceStudy {
        report,
        dirichlet,
        robin: per_gamma.into_iter().map(|(s, _, _)| s).collect(),
        etas,
    })
}
