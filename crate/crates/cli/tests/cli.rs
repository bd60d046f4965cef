use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ewmt_cli::output::{read_profile_csv, PROFILE_HEADER, SWEEP_HEADER};
use ewmt_core::{
    rebuild_profile, verify_invariants, EllipticFunction, SolverOptions, WarpingFunction,
};

const MINIMAL: &str =
    "warping.family = \"linear\"\nweingarten.family = \"zero\"\nsolve.rho0 = 1.0\n";
const SQUARE_ROOT: &str =
    "warping.family = \"linear\"\nweingarten.family = \"sqrt_scaled\"\nweingarten.alpha = 0.5\nsolve.rho0 = 1.0\n";
const CATENARY: &str = "warping.family = \"constant\"\nsolve.rho0 = 1.0\n";

struct Run {
    dir: tempfile::TempDir,
}

impl Run {
    fn new() -> Self {
        Run {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn ewmt(&self, command: &str, name: &str, config: &str) -> Output {
        let file = self.path(&format!("{name}.toml"));
        fs::write(&file, config).unwrap();
        Command::new(env!("CARGO_BIN_EXE_ewmt"))
            .arg(command)
            .arg(&file)
            .env("EWMT_OUTPUT_DIR", self.dir.path())
            .output()
            .unwrap()
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.path(name)).unwrap()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn configuration_errors_exit_2() {
    let run = Run::new();
    let out = run.ewmt("solve", "neg", &MINIMAL.replace("1.0", "-1.0"));
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("rho0 must be positive"),
        "{}",
        stderr(&out)
    );

    let out = run.ewmt("solve", "alpha", &SQUARE_ROOT.replace("0.5", "1.0"));
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not elliptic"));

    let out = run.ewmt(
        "sweep",
        "empty",
        &format!("{MINIMAL}sweep.rho0_list = []\n"),
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("rho0_list must not be empty"));

    let out = run.ewmt("solve", "unknown", &format!("{MINIMAL}solve.speed = 3\n"));
    assert_eq!(code(&out), 2);

    let out = run.ewmt("sweep", "nolist", MINIMAL);
    assert_eq!(code(&out), 2);

    let missing = Command::new(env!("CARGO_BIN_EXE_ewmt"))
        .args(["verify", "/nonexistent/config.toml"])
        .output()
        .unwrap();
    assert_eq!(code(&missing), 2);
}

#[test]
fn solver_error_exits_3() {
    let run = Run::new();
    let config = "warping.family = \"affine\"\nwarping.coefficients = [-3.0, 0.0]\n\
                  weingarten.family = \"sqrt_scaled\"\nweingarten.alpha = 0.9\n\
                  solve.rho0 = 1.0\nsolve.newton_max_iter = 1\n";
    let out = run.ewmt("solve", "diverge", config);
    assert_eq!(code(&out), 3);
    assert!(
        stderr(&out).contains("NewtonDivergence"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn unwritable_output_exits_4() {
    let run = Run::new();
    fs::write(run.path("blocker"), "file").unwrap();
    let config = format!("{MINIMAL}output.csv_path = \"blocker/profile.csv\"\n");
    let out = run.ewmt("solve", "blocked", &config);
    assert_eq!(code(&out), 4);
}

#[test]
fn verify_passes_on_the_examples_and_the_catenary() {
    let run = Run::new();
    for (name, config, class) in [
        ("minimal", MINIMAL, "catenoidal"),
        ("square_root", SQUARE_ROOT, "catenoidal"),
        ("catenary", CATENARY, "unbounded_height"),
    ] {
        let out = run.ewmt("verify", name, config);
        assert_eq!(
            code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let report: serde_json::Value =
            serde_json::from_str(&run.read(&format!("{name}.json"))).unwrap();
        assert_eq!(report["classification"], class);
        assert_eq!(report["overall"], true);
        let checks = report["checks"].as_array().unwrap();
        assert_eq!(checks.len(), 12);
        for c in checks {
            for key in ["check_name", "passed", "worst_residual", "location_s"] {
                assert!(c.get(key).is_some(), "{name}: missing {key}");
            }
        }
    }
    let report: serde_json::Value = serde_json::from_str(&run.read("catenary.json")).unwrap();
    assert_eq!(report["t0"], "inf");
}

fn max_abs_t(csv: &str) -> f64 {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse::<f64>().unwrap().abs())
        .fold(0.0, f64::max)
}

#[test]
fn solve_writes_the_profile_csv() {
    let run = Run::new();
    for (name, config, t0) in [
        ("minimal", MINIMAL, 0.23334),
        ("square_root", SQUARE_ROOT, 0.30816),
    ] {
        let out = run.ewmt("solve", name, config);
        assert_eq!(code(&out), 0);
        let csv = run.read(&format!("{name}.csv"));
        assert_eq!(csv.lines().next().unwrap(), PROFILE_HEADER);
        assert!(
            (max_abs_t(&csv) - t0).abs() <= 0.01,
            "{name}: {}",
            max_abs_t(&csv)
        );
        let row = csv.lines().nth(1).unwrap();
        assert_eq!(row.split(',').count(), 10);
        // Seventeen significant digits per number.
        let first = row.split(',').next().unwrap();
        assert_eq!(
            first
                .split('e')
                .next()
                .unwrap()
                .replace(['-', '.'], "")
                .len(),
            17
        );
    }
}

#[test]
fn outputs_are_byte_deterministic() {
    let run = Run::new();
    let config = |tag: &str| {
        format!(
            "{SQUARE_ROOT}output.csv_path = \"{tag}.csv\"\noutput.svg_path = \"{tag}.svg\"\noutput.report_path = \"{tag}.json\"\n"
        )
    };
    for tag in ["a", "b"] {
        assert_eq!(code(&run.ewmt("solve", tag, &config(tag))), 0);
        assert_eq!(code(&run.ewmt("plot", tag, &config(tag))), 0);
    }
    for ext in ["csv", "svg", "json"] {
        assert_eq!(
            run.read(&format!("a.{ext}")),
            run.read(&format!("b.{ext}")),
            "{ext}"
        );
    }
}

#[test]
fn csv_round_trip_keeps_the_verdict() {
    let run = Run::new();
    assert_eq!(code(&run.ewmt("solve", "minimal", MINIMAL)), 0);
    let samples = read_profile_csv(&run.read("minimal.csv")).unwrap();
    let (w, f) = (WarpingFunction::Linear, EllipticFunction::zero());
    let sol = rebuild_profile(&w, &f, samples, &SolverOptions::default()).unwrap();
    let report = verify_invariants(&sol, &w, &f);
    assert!(report.overall, "{:?}", report.failed().collect::<Vec<_>>());
    let json: serde_json::Value = serde_json::from_str(&run.read("minimal.json")).unwrap();
    let t0 = json["t0"].as_f64().unwrap();
    let rebuilt = sol.t0_estimate.unwrap().t0.finite().unwrap();
    assert!((t0 - rebuilt).abs() < 1e-12);
}

fn asymptote_t(svg: &str, class: &str) -> Option<f64> {
    let start = svg.find(&format!("class=\"{class}\" data-t=\""))?;
    let rest = &svg[start..];
    let value = rest.split("data-t=\"").nth(1)?.split('"').next()?;
    value.parse().ok()
}

#[test]
fn plot_draws_asymptotes_only_for_finite_heights() {
    let run = Run::new();
    for (name, config, t0) in [
        ("minimal", MINIMAL, 0.23334),
        ("square_root", SQUARE_ROOT, 0.30816),
    ] {
        assert_eq!(code(&run.ewmt("plot", name, config)), 0);
        let svg = run.read(&format!("{name}.svg"));
        assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
        assert!(svg.contains("class=\"profile\""));
        let plus = asymptote_t(&svg, "asymptote-plus").unwrap();
        let minus = asymptote_t(&svg, "asymptote-minus").unwrap();
        assert!(
            (plus - t0).abs() <= 0.01 && (minus + t0).abs() <= 0.01,
            "{name}"
        );
    }
    assert_eq!(code(&run.ewmt("plot", "catenary", CATENARY)), 0);
    let svg = run.read("catenary.svg");
    assert!(svg.contains("class=\"profile\""));
    assert!(!svg.contains("asymptote"));
}

#[test]
fn sweep_reports_each_radius() {
    let run = Run::new();
    let config = format!("{MINIMAL}sweep.rho0_list = [0.5, 1.0, 2.0]\n");
    let out = run.ewmt("sweep", "family", &config);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("warning"));
    let csv = run.read("family_sweep.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), SWEEP_HEADER);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let products: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(products, [0.5, 1.0, 2.0]);
    let flags: Vec<&str> = rows.iter().map(|r| r[4]).collect();
    assert_eq!(flags, ["warn", "ok", "ok"]);
    assert!(rows.iter().all(|r| r[2] == "catenoidal" && r[5].is_empty()));
    let t0: f64 = rows[1][1].parse().unwrap();
    assert!((t0 - 0.23334).abs() < 0.01);
}

#[test]
fn output_dir_is_honoured() {
    let run = Run::new();
    let out = run.ewmt("plot", "here", MINIMAL);
    assert_eq!(code(&out), 0);
    assert!(Path::new(&run.path("here.svg")).exists());
}
