//! Exact similarity solutions of one-phase Stefan (melting) problems whose
//! conductivity and specific heat share the power-law bracket
//! `1 + delta ((T - Tf) / (T0 - Tf))^p`.
//!
//! Two fixed-face conditions are supported: a prescribed temperature
//! ([`dirichlet`]) and convective exchange ([`robin`]). Each reduces to a
//! scalar front equation for `lambda` in `s(t) = 2 a lambda sqrt(t)` and an
//! implicit profile `F(y) = G(eta)`. [`asymptotics`] tracks the Robin
//! solution as the heat-transfer coefficient grows, and [`oracle`]
//! re-derives both by shooting on the similarity ODE.

// Negated float comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod checks;
pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod exec;
pub mod model;
pub mod oracle;
pub mod profile;
pub mod robin;
pub mod rootfind;
pub mod specfun;

pub use dirichlet::DirichletSolution;
pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{reduce, Boundary, DimensionlessConfig, MaterialSpec, TemperatureScale};
pub use profile::{Profile, SimilaritySolution};
pub use robin::RobinSolution;
pub use rootfind::{RootConfig, RootResult};
