use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

struct Run {
    out: PathBuf,
    output: Output,
}

impl Run {
    fn code(&self) -> i32 {
        self.output.status.code().expect("exited normally")
    }
    fn stderr(&self) -> String {
        String::from_utf8_lossy(&self.output.stderr).into_owned()
    }
    fn file(&self, name: &str) -> String {
        fs::read_to_string(self.out.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
    }
    fn json(&self, name: &str) -> Value {
        serde_json::from_str(&self.file(name)).unwrap()
    }
}

fn stefan(dir: &Path, command: &str, config: &str, extra: &[&str]) -> Run {
    let cfg = dir.join(format!("{command}.cfg"));
    fs::write(&cfg, config).unwrap();
    let out = dir.join(format!("{command}-out"));
    let output = Command::new(env!("CARGO_BIN_EXE_stefan"))
        .args([command, "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    Run { out, output }
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn classical_dirichlet_summary() {
    let dir = tempfile::tempdir().unwrap();
    let run = stefan(dir.path(), "dirichlet", "ste = 1\ndelta = 0\n", &[]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let json = run.json("dirichlet.json");
    let lambda = json[0]["lambda"].as_f64().unwrap();
    assert!((lambda - 0.620_062_633_313_595_5).abs() < 1e-12);
    for key in [
        "ste",
        "delta",
        "p",
        "g",
        "functional_residual",
        "flux_residual",
        "stefan_residual",
    ] {
        assert!(json[0][key].is_number(), "{key}");
    }
    let csv = run.file("dirichlet_p1.csv");
    assert!(csv.starts_with("eta,y\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(rows(&csv).len(), 512);
    assert!(run.out.join("dirichlet.svg").exists());
}

#[test]
fn zero_extension_beyond_each_front() {
    let dir = tempfile::tempdir().unwrap();
    let run = stefan(
        dir.path(),
        "robin",
        "ste = 0.5\ndelta = 5\np = 1, 5, 10\ngamma = 50\n",
        &["--grid", "300"],
    );
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let json = run.json("robin.json");
    for (i, p) in ["1", "5", "10"].iter().enumerate() {
        let lambda = json[i]["lambda_gamma"].as_f64().unwrap();
        let data = rows(&run.file(&format!("robin_p{p}_gamma50.csv")));
        assert_eq!(data.len(), 300);
        let beyond: Vec<_> = data.iter().filter(|r| r[0] > lambda).collect();
        if i > 0 {
            assert!(!beyond.is_empty());
        }
        assert!(beyond.iter().all(|r| r[1] == 0.0));
        assert!(data.iter().filter(|r| r[0] < lambda).all(|r| r[1] > 0.0));
    }
    for key in [
        "gamma",
        "lambda0",
        "lambda_gamma",
        "surface_y0",
        "convective_residual",
    ] {
        assert!(json[0][key].is_number(), "{key}");
    }
}

#[test]
fn temperature_lattice_is_tf_past_the_front() {
    let dir = tempfile::tempdir().unwrap();
    let config = "ste = 0.5\ndelta = 1\np = 1\nT0 = 10\nTf = 0\na = 1\n\
                  x_lattice = 0, 4, 41\nt_lattice = 0.25, 1, 4\n";
    let run = stefan(dir.path(), "dirichlet", config, &[]);
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let json = run.json("dirichlet.json");
    let lambda = json[0]["lambda"].as_f64().unwrap();
    let data = rows(&run.file("dirichlet_temperature_p1.csv"));
    assert_eq!(data.len(), 41 * 4);
    for r in &data {
        let (x, t, temp) = (r[0], r[1], r[2]);
        let front = 2.0 * lambda * t.sqrt();
        if x > front {
            assert_eq!(temp, 0.0);
        } else {
            assert!((0.0..=10.0).contains(&temp));
        }
        if x == 0.0 {
            assert!((temp - 10.0).abs() < 1e-9);
        }
    }
}

#[test]
fn dimensional_robin_matches_dimensionless() {
    let dir = tempfile::tempdir().unwrap();
    let a = stefan(
        dir.path(),
        "robin",
        "rho = 1\nc0 = 1\nk0 = 1\nlatent = 20\nT0 = 10\nTf = 0\nh = 25\ndelta = 1\np = 1\n",
        &["--formats", "json"],
    );
    assert_eq!(a.code(), 0, "{}", a.stderr());
    let sub = dir.path().join("second");
    fs::create_dir(&sub).unwrap();
    let b = stefan(
        &sub,
        "robin",
        "ste = 0.5\ngamma = 50\ndelta = 1\np = 1\n",
        &["--formats", "json"],
    );
    assert_eq!(a.file("robin.json"), b.file("robin.json"));
    assert!(!a.out.join("robin.svg").exists());
    assert!(!a.out.join("robin_p1_gamma50.csv").exists());
}

#[test]
fn input_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("robin", "ste = 0.5\ndelta = 5\np = 1\n", "gamma"),
        (
            "robin",
            "rho=1\nc0=1\nk0=1\nlatent=1\nT0=1\nTf=0\ndelta=1\np=1\n",
            "h",
        ),
        (
            "converge",
            "ste = 0.5\ndelta = 5\np = 1\ngamma =\n",
            "gamma",
        ),
        ("converge", "ste = 0.5\ndelta = 5\np = 1\n", "gamma"),
        (
            "converge",
            "ste = 0.5\ndelta = 5\np = 1\ngamma = 50, 25\n",
            "gamma",
        ),
        ("dirichlet", "ste = 0.5\nrho = 1\ndelta = 5\np = 1\n", "ste"),
        ("dirichlet", "ste = -0.5\ndelta = 5\np = 1\n", "ste"),
        (
            "dirichlet",
            "ste = 0.5\ndelta = 5\np = 1\ncolour = 3\n",
            "colour",
        ),
        ("validate", "ste = 0.5\ndelta = 5\np = 1, 2\n", "p"),
    ];
    for (command, config, field) in cases {
        let run = stefan(dir.path(), command, config, &[]);
        assert_eq!(run.code(), 2, "{command} / {config}");
        assert!(run.stderr().contains(field), "{}", run.stderr());
    }
    let run = stefan(
        dir.path(),
        "dirichlet",
        "ste=1\ndelta=0\n",
        &["--grid", "1"],
    );
    assert_eq!(run.code(), 2);
    let run = stefan(
        dir.path(),
        "dirichlet",
        "ste=1\ndelta=0\n",
        &["--formats", "png"],
    );
    assert_eq!(run.code(), 2);
    let status = Command::new(env!("CARGO_BIN_EXE_stefan"))
        .args(["dirichlet", "--config", "/nonexistent/cfg", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn solver_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let run = stefan(dir.path(), "dirichlet", "ste = 1e300\ndelta = 0\n", &[]);
    assert_eq!(run.code(), 3, "{}", run.stderr());
}

#[test]
fn dirichlet_warns_about_transfer_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let run = stefan(
        dir.path(),
        "dirichlet",
        "ste = 0.5\ndelta = 5\np = 1\ngamma = 50\n",
        &[],
    );
    assert_eq!(run.code(), 0);
    assert!(run.stderr().contains("warning"));
}

#[test]
fn converge_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let run = stefan(
        dir.path(),
        "converge",
        "ste = 0.5\ndelta = 5\np = 1\ngamma = 1, 25, 50, 100\n",
        &[],
    );
    assert_eq!(run.code(), 0, "{}", run.stderr());
    let json = run.json("converge.json");
    assert_eq!(json["monotone"], Value::Bool(true));
    assert_eq!(json["bounded"], Value::Bool(true));
    assert_eq!(json["lambdas"].as_array().unwrap().len(), 4);
    let svg = run.file("converge.svg");
    assert_eq!(svg.matches("<polyline").count(), 5);
    assert_eq!(rows(&run.file("converge.csv")).len(), 4);
}

#[test]
fn validate_examples_pass() {
    let configs = [
        "ste = 0.5\ndelta = 5\np = 1\n",
        "ste = 1\ndelta = 0\n",
        "ste = 0.8\ndelta = 5\np = 2.5\ngamma = 10\n",
    ];
    for config in configs {
        let dir = tempfile::tempdir().unwrap();
        let run = stefan(dir.path(), "validate", config, &["--formats", "csv"]);
        assert_eq!(run.code(), 0, "{config}: {}", run.stderr());
        let card = run.json("validate.json");
        assert_eq!(card["passed"], Value::Bool(true));
        let checks = card["checks"].as_array().unwrap();
        assert!(checks.iter().all(|c| c["pass"] == Value::Bool(true)));
        let has_robin = checks
            .iter()
            .any(|c| c["name"] == "robin.convective_residual");
        assert_eq!(has_robin, config.contains("gamma"));
    }
}

#[test]
fn low_step_count_still_validates_or_reports() {
    // Coarse shooting can only widen the gaps; the exit code must say which.
    let dir = tempfile::tempdir().unwrap();
    let run = stefan(
        dir.path(),
        "validate",
        "ste = 0.1\ndelta = 5\np = 10\n",
        &["--steps", "100"],
    );
    let card = run.json("validate.json");
    let passed = card["passed"].as_bool().unwrap();
    assert_eq!(run.code(), if passed { 0 } else { 4 });
    if !passed {
        assert!(run.stderr().contains("dirichlet."));
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = "ste = 0.5\ndelta = 5\np = 1, 2.5, 10\ngamma = 1, 50\n";
    let a = stefan(dir.path(), "robin", config, &[]);
    let sub = dir.path().join("again");
    fs::create_dir(&sub).unwrap();
    let b = stefan(&sub, "robin", config, &[]);
    let mut names: Vec<_> = fs::read_dir(&a.out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 6 + 1 + 1);
    for name in names {
        assert_eq!(a.file(&name), b.file(&name), "{name}");
    }
}
