//! The `stefan` command-line tool.
//!
//! ```text
//! stefan {dirichlet|robin|converge|validate} --config <path> --out <dir>
//!        [--grid N] [--formats csv,json,svg] [--steps N]
//! ```
//!
//! Exit codes: 0 success, 2 bad input, 3 solver failure, 4 a validation
//! check or reported invariant failed.

mod config;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use config::{Axis, Lattice, RunConfig};

use crate::asymptotics::{converge_study, ConvergenceReport, PROBE_FRACTIONS};
use crate::checks;
use crate::dirichlet::DirichletSolution;
use crate::error::Error;
use crate::exec::Execution;
use crate::model::{Boundary, DimensionlessConfig};
use crate::oracle;
use crate::profile::{uniform_grid, Profile, SimilaritySolution};
use crate::robin::RobinSolution;
use crate::rootfind::RootConfig;
use output::{csv_table, json, svg_overlay, tag, Curve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

/// Thresholds used by `validate`.
pub const LAMBDA_GAP_TOL: f64 = 1e-6;
pub const PROFILE_GAP_TOL: f64 = 1e-6;
pub const RESIDUAL_TOL: f64 = 1e-4;
pub const FUNCTIONAL_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(
    name = "stefan",
    version,
    about = "Similarity solutions of a one-phase Stefan problem with power-law thermal coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prescribed face temperature: one solution per exponent `p`.
    Dirichlet(RunArgs),
    /// Convective face condition: one solution per (`p`, `gamma`) pair.
    Robin(RunArgs),
    /// Robin solutions along an ascending `gamma` list against the Dirichlet limit.
    Converge(RunArgs),
    /// Cross-check functional solutions against shooting and residual probes.
    Validate(RunArgs),
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Sampling nodes on [0, lambda].
    #[arg(long, default_value_t = 512)]
    grid: usize,
    #[arg(long, value_delimiter = ',', default_value = "csv,json,svg")]
    formats: Vec<Format>,
    /// RK4 steps for the shooting oracle.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Solver(String),
    Invariant(Vec<String>),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Solver(_) => EXIT_SOLVER,
            Failure::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input: {m}"),
            Failure::Solver(m) => write!(f, "solver: {m}"),
            Failure::Invariant(names) => write!(f, "failed: {}", names.join(", ")),
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    match e {
        Error::Validation { .. } => true,
        Error::AtGamma { source, .. } => is_input_error(source),
        _ => false,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if is_input_error(&e) {
            Failure::Input(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Dirichlet(a) => Job::load(a).and_then(|j| j.dirichlet()),
        Command::Robin(a) => Job::load(a).and_then(|j| j.robin()),
        Command::Converge(a) => Job::load(a).and_then(|j| j.converge()),
        Command::Validate(a) => Job::load(a).and_then(|j| j.validate()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

struct Job {
    args: RunArgs,
    cfg: RunConfig,
    root: RootConfig,
    exec: Execution,
}

#[derive(Serialize)]
struct Residuals {
    functional_residual: f64,
    flux_residual: f64,
    stefan_residual: f64,
}

#[derive(Serialize)]
struct DirichletSummary {
    ste: f64,
    delta: f64,
    p: f64,
    lambda: f64,
    g: f64,
    #[serde(flatten)]
    residuals: Residuals,
}

#[derive(Serialize)]
struct RobinSummary {
    ste: f64,
    delta: f64,
    p: f64,
    gamma: f64,
    lambda0: f64,
    lambda_gamma: f64,
    surface_y0: f64,
    convective_residual: f64,
    #[serde(flatten)]
    residuals: Residuals,
}

#[derive(Serialize)]
struct ConvergeSummary<'a> {
    ste: f64,
    delta: f64,
    p: f64,
    probe_fractions: [f64; 4],
    lambda_gaps: Vec<f64>,
    #[serde(flatten)]
    report: &'a ConvergenceReport,
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: String,
    value: f64,
    threshold: f64,
    pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

#[derive(Serialize)]
struct Scorecard {
    ste: f64,
    delta: f64,
    p: f64,
    gamma: Option<f64>,
    grid_points: usize,
    steps: usize,
    passed: bool,
    checks: Vec<Check>,
}

impl Job {
    fn load(args: RunArgs) -> Result<Self, Failure> {
        if args.grid < 2 {
            return Err(Failure::Input("`grid` must be at least 2".into()));
        }
        if args.steps < 100 {
            return Err(Failure::Input("`steps` must be at least 100".into()));
        }
        let text = fs::read_to_string(&args.config)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.config.display())))?;
        let cfg = RunConfig::parse(&text)?;
        fs::create_dir_all(&args.out)
            .map_err(|e| Failure::Input(format!("cannot create {}: {e}", args.out.display())))?;
        Ok(Job {
            args,
            cfg,
            root: RootConfig::default(),
            exec: Execution::default(),
        })
    }

    fn wants(&self, f: Format) -> bool {
        self.args.formats.contains(&f)
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), Failure> {
        output::write(&self.args.out, name, contents).map_err(|e| {
            Failure::Input(format!(
                "cannot write {}: {e}",
                Path::new(&self.args.out).join(name).display()
            ))
        })
    }

    fn residuals<S: SimilaritySolution>(&self, sol: &S) -> Result<Residuals, Failure> {
        let n = self.args.grid;
        Ok(Residuals {
            functional_residual: checks::functional_residual(sol, n, self.exec)?,
            flux_residual: checks::flux_constant_deviation(sol, n, self.exec)?,
            stefan_residual: checks::stefan_residual(sol)?,
        })
    }

    /// Writes one profile CSV per solution on a grid shared by all of them,
    /// the overlay SVG and the temperature lattices.
    fn write_profiles<S: SimilaritySolution>(
        &self,
        stem: &str,
        title: &str,
        items: &[(String, &S)],
    ) -> Result<(), Failure> {
        let end = items
            .iter()
            .map(|(_, s)| s.front_coefficient())
            .fold(0.0, f64::max);
        let etas = uniform_grid(end, self.args.grid);
        let profiles = items
            .iter()
            .map(|(_, s)| Profile::sample_on(*s, etas.clone(), self.exec))
            .collect::<Result<Vec<_>, Error>>()?;
        if self.wants(Format::Csv) {
            for ((name, _), prof) in items.iter().zip(&profiles) {
                let rows = prof
                    .etas
                    .iter()
                    .zip(&prof.values)
                    .map(|(&e, &y)| vec![e, y]);
                self.write(
                    &format!("{stem}_{name}.csv"),
                    &csv_table(&["eta", "y"], rows),
                )?;
            }
            if let (Some(lattice), Some(scale)) = (&self.cfg.lattice, self.cfg.temperature_scale())
            {
                let xs = lattice.x.points();
                let ts = lattice.t.points();
                for (name, sol) in items {
                    let mut rows = Vec::with_capacity(xs.len() * ts.len());
                    for &t in &ts {
                        let temps = self
                            .exec
                            .try_map(&xs, |&x| sol.temperature_extended(&scale, x, t))?;
                        rows.extend(xs.iter().zip(temps).map(|(&x, temp)| vec![x, t, temp]));
                    }
                    self.write(
                        &format!("{stem}_temperature_{name}.csv"),
                        &csv_table(&["x", "t", "T"], rows),
                    )?;
                }
            }
        }
        if self.wants(Format::Svg) {
            let curves: Vec<Curve> = items
                .iter()
                .zip(profiles)
                .map(|((name, s), prof)| Curve {
                    label: name.clone(),
                    lambda: s.front_coefficient(),
                    etas: prof.etas,
                    values: prof.values,
                })
                .collect();
            self.write(&format!("{stem}.svg"), &svg_overlay(title, &curves))?;
        }
        Ok(())
    }

    fn dirichlet_configs(&self) -> Result<Vec<DimensionlessConfig>, Failure> {
        Ok(self
            .cfg
            .ps
            .iter()
            .map(|&p| self.cfg.config_for(p, None))
            .collect::<Result<_, Error>>()?)
    }

    fn dirichlet(&self) -> Result<(), Failure> {
        if self.cfg.has_transfer_coefficient() {
            eprintln!(
                "warning: `{}` is ignored under the Dirichlet condition",
                self.cfg.transfer_key()
            );
        }
        let configs = self.dirichlet_configs()?;
        let sols = self
            .exec
            .try_map(&configs, |c| DirichletSolution::solve(c, &self.root))?;
        if self.wants(Format::Json) {
            let summaries = sols
                .iter()
                .map(|s| {
                    Ok(DirichletSummary {
                        ste: s.config.ste,
                        delta: s.config.delta,
                        p: s.config.p,
                        lambda: s.lambda,
                        g: s.g_target,
                        residuals: self.residuals(s)?,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            self.write("dirichlet.json", &json(&summaries))?;
        }
        let items: Vec<(String, &DirichletSolution)> = sols
            .iter()
            .map(|s| (format!("p{}", tag(s.config.p)), s))
            .collect();
        self.write_profiles("dirichlet", "Dirichlet profiles", &items)
    }

    fn robin(&self) -> Result<(), Failure> {
        if !self.cfg.has_transfer_coefficient() {
            return Err(Failure::Input(format!(
                "`{}` missing: required for the Robin condition",
                self.cfg.transfer_key()
            )));
        }
        let mut configs = Vec::new();
        for &p in &self.cfg.ps {
            for i in 0..self.cfg.transfer_count() {
                configs.push(self.cfg.config_for(p, Some(i))?);
            }
        }
        let sols = self
            .exec
            .try_map(&configs, |c| RobinSolution::solve(c, &self.root))?;
        if self.wants(Format::Json) {
            let summaries = sols
                .iter()
                .map(|s| {
                    Ok(RobinSummary {
                        ste: s.config.ste,
                        delta: s.config.delta,
                        p: s.config.p,
                        gamma: s.gamma,
                        lambda0: s.lambda0,
                        lambda_gamma: s.lambda_gamma,
                        surface_y0: s.surface_y0,
                        convective_residual: s
                            .convective_residual(checks::fd_step(s.lambda_gamma))?,
                        residuals: self.residuals(s)?,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            self.write("robin.json", &json(&summaries))?;
        }
        let items: Vec<(String, &RobinSolution)> = sols
            .iter()
            .map(|s| (format!("p{}_gamma{}", tag(s.config.p), tag(s.gamma)), s))
            .collect();
        self.write_profiles("robin", "Robin profiles", &items)
    }

    fn single_p(&self, command: &str) -> Result<f64, Failure> {
        match self.cfg.ps.as_slice() {
            [p] => Ok(*p),
            _ => Err(Failure::Input(format!(
                "`p`: {command} takes a single exponent"
            ))),
        }
    }

    fn converge(&self) -> Result<(), Failure> {
        let p = self.single_p("converge")?;
        let gammas = self.cfg.gammas()?;
        if gammas.is_empty() {
            return Err(Failure::Input(format!(
                "`{}` missing: converge needs an ascending list",
                self.cfg.transfer_key()
            )));
        }
        let config = self.cfg.config_for(p, None)?;
        let study = converge_study(&config, &gammas, self.args.grid, &self.root, self.exec)?;
        let report = &study.report;

        if self.wants(Format::Json) {
            let summary = ConvergeSummary {
                ste: config.ste,
                delta: config.delta,
                p,
                probe_fractions: PROBE_FRACTIONS,
                lambda_gaps: report.lambda_gaps(),
                report,
            };
            self.write("converge.json", &json(&summary))?;
        }
        let mut profiles = vec![(
            "dirichlet".to_string(),
            study.dirichlet.lambda,
            Profile::sample_on(&study.dirichlet, study.etas.clone(), self.exec)?,
        )];
        for sol in &study.robin {
            profiles.push((
                format!("gamma{}", tag(sol.gamma)),
                sol.lambda_gamma,
                Profile::sample_on(sol, study.etas.clone(), self.exec)?,
            ));
        }
        if self.wants(Format::Csv) {
            let rows = (0..gammas.len()).map(|i| {
                let mut row = vec![
                    gammas[i],
                    report.lambdas[i],
                    report.lambda_limit - report.lambdas[i],
                    report.sup_errors[i],
                ];
                row.extend_from_slice(&report.pointwise_gaps[i]);
                row
            });
            self.write(
                "converge.csv",
                &csv_table(
                    &[
                        "gamma",
                        "lambda_gamma",
                        "lambda_gap",
                        "sup_error",
                        "gap_0",
                        "gap_0.25",
                        "gap_0.5",
                        "gap_0.75",
                    ],
                    rows,
                ),
            )?;
            for (name, _, prof) in &profiles {
                let rows = prof
                    .etas
                    .iter()
                    .zip(&prof.values)
                    .map(|(&e, &y)| vec![e, y]);
                self.write(
                    &format!("converge_{name}.csv"),
                    &csv_table(&["eta", "y"], rows),
                )?;
            }
        }
        if self.wants(Format::Svg) {
            let curves: Vec<Curve> = profiles
                .into_iter()
                .map(|(label, lambda, prof)| Curve {
                    label,
                    lambda,
                    etas: prof.etas,
                    values: prof.values,
                })
                .collect();
            self.write(
                "converge.svg",
                &svg_overlay("Robin profiles approaching the Dirichlet limit", &curves),
            )?;
        }
        convergence_verdict(report)
    }

    fn solution_checks<S: SimilaritySolution>(
        &self,
        prefix: &str,
        sol: &S,
        boundary: Boundary,
    ) -> Result<Vec<Check>, Failure> {
        let n = self.args.grid;
        let config = sol.config();
        let lambda = sol.front_coefficient();
        let shot = oracle::shoot(config, boundary, &self.root, self.args.steps)?;
        let ode = oracle::ode_residual(
            |eta| sol.y(eta.clamp(0.0, lambda)),
            lambda,
            config.delta,
            config.p,
            n,
        )?;
        let shape = checks::shape(sol, n, self.exec)?;
        let range_violation = (-shape.min).max(shape.max - 1.0).max(0.0);
        let name = |s: &str| format!("{prefix}.{s}");
        Ok(vec![
            Check::at_most(
                name("lambda_gap"),
                (shot.lambda_shoot - lambda).abs(),
                LAMBDA_GAP_TOL,
            ),
            Check::at_most(
                name("profile_gap"),
                oracle::profile_gap(&shot, sol)?,
                PROFILE_GAP_TOL,
            ),
            Check::at_most(name("ode_residual"), ode, RESIDUAL_TOL),
            Check::at_most(
                name("flux_residual"),
                checks::flux_constant_deviation(sol, n, self.exec)?,
                RESIDUAL_TOL,
            ),
            Check::at_most(
                name("stefan_residual"),
                checks::stefan_residual(sol)?,
                RESIDUAL_TOL,
            ),
            Check::at_most(
                name("functional_residual"),
                checks::functional_residual(sol, n, self.exec)?,
                FUNCTIONAL_TOL,
            ),
            Check::at_most(name("range_violation"), range_violation, 0.0),
            Check::at_most(
                name("monotonicity_violation"),
                if shape.non_increasing { 0.0 } else { 1.0 },
                0.0,
            ),
        ])
    }

    fn validate(&self) -> Result<(), Failure> {
        let p = self.single_p("validate")?;
        if self.cfg.transfer_count() > 1 {
            return Err(Failure::Input(format!(
                "`{}`: validate takes at most one value",
                self.cfg.transfer_key()
            )));
        }
        let config = self.cfg.config_for(p, None)?;
        let dirichlet = DirichletSolution::solve(&config, &self.root)?;
        let mut list = self.solution_checks("dirichlet", &dirichlet, Boundary::Dirichlet)?;
        let mut gamma = None;
        if self.cfg.has_transfer_coefficient() {
            let rc = self.cfg.config_for(p, Some(0))?;
            let robin = RobinSolution::solve(&rc, &self.root)?;
            gamma = Some(robin.gamma);
            list.extend(self.solution_checks("robin", &robin, Boundary::Robin)?);
            list.push(Check::at_most(
                "robin.convective_residual",
                robin.convective_residual(checks::fd_step(robin.lambda_gamma))?,
                RESIDUAL_TOL * robin.gamma,
            ));
            list.push(Check::at_most(
                "robin.surface_identity",
                (robin.y(0.0)? - robin.surface_y0).abs(),
                FUNCTIONAL_TOL,
            ));
        }
        let failing: Vec<String> = list
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect();
        for c in &list {
            println!(
                "{} {} = {:e} (threshold {:e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.threshold
            );
        }
        let card = Scorecard {
            ste: config.ste,
            delta: config.delta,
            p,
            gamma,
            grid_points: self.args.grid,
            steps: self.args.steps,
            passed: failing.is_empty(),
            checks: list,
        };
        self.write("validate.json", &json(&card))?;
        if failing.is_empty() {
            Ok(())
        } else {
            Err(Failure::Invariant(failing))
        }
    }
}

fn convergence_verdict(report: &ConvergenceReport) -> Result<(), Failure> {
    let mut broken = Vec::new();
    if !report.monotone {
        broken.push("monotone".to_string());
    }
    if !report.bounded {
        broken.push("bounded".to_string());
    }
    if broken.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(broken))
    }
}
