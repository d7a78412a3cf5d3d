use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coarse-metric"));
    cmd.env_remove("COARSE_METRIC_BUDGET");
    cmd
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .arg(sub)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn shipped(sub: &str, name: &str, out: &Path) -> Output {
    run(sub, &configs().join(name), out, &[])
}

/// Writes `json` to a config file in `dir`.
fn config(dir: &TempDir, json: &str) -> PathBuf {
    let path = dir.path().join(format!("cfg{}.json", json.len()));
    std::fs::write(&path, json).unwrap();
    path
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn growth_on_graded_integers() {
    let dir = TempDir::new().unwrap();
    let o = shipped("growth", "growth_z_graded.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("census.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,ball_size,sphere_size,bound_3n,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    // |D(e,n)| = 2n + 1 for the graded scheme on Z
    assert!(rows[10].starts_with("10,21,2,59049,"));
    let cert = read_json(dir.path().join("certificate.json"));
    assert_eq!(cert["three_n_bound"], true);
    assert_eq!(cert["passed"], true);
}

#[test]
fn growth_rate_of_free_group() {
    let dir = TempDir::new().unwrap();
    let o = shipped("growth", "growth_f2.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert = read_json(dir.path().join("certificate.json"));
    let rate = cert["growth_rate"].as_f64().unwrap();
    assert!((rate - 3f64.ln()).abs() < 0.05, "{rate}");
    assert_eq!(cert["beta"], 5.0);
    assert_eq!(cert["three_n_bound"], Value::Null);
}

#[test]
fn growth_needs_positive_radius() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        r#"{"group": {"kind": "free", "rank": 2}, "radius": 0}"#,
    );
    let o = run("growth", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("radius"));
}

#[test]
fn embed_on_integers() {
    let dir = TempDir::new().unwrap();
    let o = shipped("embed", "embed_z.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = read_json(dir.path().join("embedding.json"));
    assert!(report["c1"].as_f64().unwrap() > 0.0);
    assert!(report["c2"].as_f64().unwrap().is_finite());
    assert_eq!(report["c3"], 3.0);
    assert_eq!(report["N_trunc"], 8);
    assert!(report["translation_defect"].as_f64().unwrap() <= 1e-9);
    let csv = std::fs::read_to_string(dir.path().join("embedding.csv")).unwrap();
    assert!(csv.starts_with("d,norm_lower,norm,norm_plus_tail\n"));
    // pairs in [-20, 20] at distance >= 3
    assert_eq!(csv.lines().count() - 1, 741);
}

#[test]
fn embed_truncation_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let o = run(
        "embed",
        &configs().join("embed_z.json"),
        dir.path(),
        &["--truncation", "5"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(read_json(dir.path().join("embedding.json"))["N_trunc"], 5);
}

#[test]
fn embed_cocycle_identity_on_free_group() {
    let dir = TempDir::new().unwrap();
    let o = shipped("embed", "embed_f2.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = read_json(dir.path().join("embedding.json"));
    assert_eq!(report["sample_size"], 1457);
    assert!(report["identity"]["max_defect"].as_f64().unwrap() <= 1e-12);
    assert_eq!(report["identity"]["max_isometry_gap"], 0.0);
    assert_eq!(report["passed"], true);
}

#[test]
fn embed_without_far_pairs_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        r#"{"group": {"kind": "integer-lattice", "rank": 1}, "radius": 0}"#,
    );
    let o = run("embed", &cfg, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no sampled pair"), "{}", stderr(&o));
}

#[test]
fn lattice_on_plane_ball() {
    let dir = TempDir::new().unwrap();
    let o = shipped("lattice", "lattice_z2.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = read_json(dir.path().join("lattice.json"));
    assert_eq!(report["points"], 221);
    assert_eq!(report["covering_radius"], 0);
    let census = std::fs::read_to_string(dir.path().join("census.csv")).unwrap();
    assert_eq!(
        census,
        "m,gamma,ratio_bound,within_ratio\n1,5,5.0,true\n2,13,13.0,true\n3,25,25.0,true\n"
    );
    let lattice = std::fs::read_to_string(dir.path().join("lattice.csv")).unwrap();
    assert_eq!(lattice.lines().count(), 222);
    assert!(lattice.starts_with("index,element\n0,\"[0,0]\"\n"));
}

#[test]
fn lattice_rejects_nonpositive_separation() {
    let dir = TempDir::new().unwrap();
    for sep in ["0", "-2"] {
        let cfg = config(
            &dir,
            &format!(
                r#"{{"group": {{"kind": "integer-lattice", "rank": 2}}, "radius": 3, "separation": {sep}}}"#
            ),
        );
        assert_eq!(run("lattice", &cfg, dir.path(), &[]).status.code(), Some(3));
    }
}

#[test]
fn star_clouds_gamma_grows() {
    let dir = TempDir::new().unwrap();
    let o = shipped("lattice", "lattice_clouds.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("clouds.csv")).unwrap();
    let gammas: Vec<u64> = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(gammas.len(), 10);
    assert!(gammas.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn default_verify_suite_passes() {
    let dir = TempDir::new().unwrap();
    let o = bin()
        .args(["verify", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    for suite in [
        "Z^2",
        "F_2",
        "H_3(Z)",
        "S_3",
        "Z graded",
        "Z^2 lattice",
        "GL(2)",
    ] {
        assert!(stdout.contains(&format!("PASS {suite}: ")), "{suite}");
    }
    assert!(!stdout.contains("FAIL"));
    assert_eq!(read_json(dir.path().join("verify.json"))["passed"], true);
}

#[test]
fn verify_names_the_broken_axiom() {
    let dir = TempDir::new().unwrap();
    let o = shipped("verify", "verify_bad_weight.json", dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("inverse symmetry l(g) = l(g^-1)"), "{err}");
    assert!(err.contains("generating set symmetric"), "{err}");
    let csv = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    assert!(csv.starts_with("suite,check,passed,detail\n"));
}

#[test]
fn verify_matrix_suite() {
    let dir = TempDir::new().unwrap();
    let o = shipped("verify", "verify_gl2.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("PASS GL(2): triangle inequality"));
    assert!(stdout.contains("8000000 triples"));
}

#[test]
fn gl_on_listed_matrices() {
    let dir = TempDir::new().unwrap();
    let o = shipped("gl", "gl_matrices.json", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("gl.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("index,dim,norm,inverse_norm,condition_number,length")
    );
    // diag(2, 1): max(ln 2, ln 1.5)
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((first[2] - 2.0).abs() < 1e-12);
    assert!((first[5] - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn gl_rejects_singular_input() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, r#"{"matrices": [[[1, 2], [2, 4]]]}"#);
    assert_eq!(run("gl", &cfg, dir.path(), &[]).status.code(), Some(3));
}

#[test]
fn outputs_are_reproducible() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let c = TempDir::new().unwrap();
    let cfg = configs().join("embed_f2.json");
    for (dir, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        let o = run("embed", &cfg, dir.path(), &["--seed", seed]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for name in ["embedding.csv", "embedding.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    assert_ne!(
        std::fs::read(a.path().join("embedding.csv")).unwrap(),
        std::fs::read(c.path().join("embedding.csv")).unwrap()
    );

    let gl = configs().join("verify_gl2.json");
    run("verify", &gl, a.path(), &[]);
    run("verify", &gl, b.path(), &[]);
    assert_eq!(
        std::fs::read(a.path().join("verify.csv")).unwrap(),
        std::fs::read(b.path().join("verify.csv")).unwrap()
    );
}

#[test]
fn budget_from_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = configs().join("growth_f2.json");
    let o = bin()
        .env("COARSE_METRIC_BUDGET", "100")
        .args(["growth", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("budget"));

    let o = bin()
        .env("COARSE_METRIC_BUDGET", "plenty")
        .args(["growth", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_errors_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let unknown = config(
        &dir,
        r#"{"group": {"kind": "free", "rank": 2}, "radius": 3, "colour": 1}"#,
    );
    assert_eq!(
        run("growth", &unknown, dir.path(), &[]).status.code(),
        Some(3)
    );

    let mismatch = configs().join("growth_f2.json");
    assert_eq!(
        run("lattice", &mismatch, dir.path(), &[]).status.code(),
        Some(3)
    );

    let missing = dir.path().join("absent.json");
    assert_eq!(
        run("growth", &missing, dir.path(), &[]).status.code(),
        Some(3)
    );

    let o = bin().arg("growth").output().unwrap();
    assert_eq!(o.status.code(), Some(3));

    let matrix = config(
        &dir,
        r#"{"group": {"kind": "matrix", "n": 2}, "radius": 3}"#,
    );
    assert_eq!(
        run("growth", &matrix, dir.path(), &[]).status.code(),
        Some(3)
    );

    let bad_element = config(
        &dir,
        r#"{"group": {"kind": "free", "rank": 2}, "radius": 2, "generators": {"kind": "graded", "elements": [[3]]}}"#,
    );
    assert_eq!(
        run("growth", &bad_element, dir.path(), &[]).status.code(),
        Some(3)
    );
}
