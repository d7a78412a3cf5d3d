//! Norms and metric checks for invertible matrices.
//!
//! Writes `gl.csv` (index, dim, norm, inverse_norm, condition_number,
//! length) and `gl.json` with the checks.

use coarse_metric::matrix::{
    gl_length, gl_length_function, gl_metric, matrices_from_json, product_bound_holds,
    properness_probe, GeneralLinear, SquareMatrix,
};
use coarse_metric::weight::FLOAT_TOLERANCE;
use coarse_metric::{validate_length_axioms, GroupSpec, RandomElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::verify::{checks_from_report, Check};
use super::Report;
use crate::config::Settings;
use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLES: usize = 200;
const DEFAULT_PROBE_RADIUS: f64 = 1.0;

#[derive(Serialize)]
struct MatrixRow {
    index: usize,
    dim: usize,
    norm: f64,
    inverse_norm: f64,
    condition_number: f64,
    length: f64,
}

#[derive(Serialize)]
struct GlFile<'a> {
    samples: usize,
    dim: usize,
    checks: &'a [Check],
    passed: bool,
}

/// Seeded well-conditioned samples of `GL(n)`.
pub fn random_samples(n: usize, count: usize, seed: u64) -> Vec<SquareMatrix> {
    let gl = GeneralLinear::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| gl.random_element(&mut rng, 2)).collect()
}

fn within(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + FLOAT_TOLERANCE * rhs.max(1.0)
}

/// Length axioms (through the shared validator), exact `l(I) = 0` and
/// `l(A) = l(A⁻¹)`, the triangle inequality on every triple, `l(AB) ≤
/// l(A) + l(B)` on every pair, and the properness probe at `radius`.
pub fn gl_suite(suite: &str, samples: &[SquareMatrix], radius: f64) -> CliResult<Vec<Check>> {
    let n = samples
        .first()
        .map(SquareMatrix::dim)
        .ok_or_else(|| CliError::config("no matrices to check"))?;
    if let Some(bad) = samples.iter().find(|a| a.dim() != n) {
        return Err(CliError::config(format!(
            "all matrices must be {n}x{n}, found {0}x{0}",
            bad.dim()
        )));
    }
    let group = GeneralLinear::new(n);
    let mut checks = checks_from_report(
        suite,
        &validate_length_axioms(&group, &gl_length_function(), samples)?,
    );

    let identity = gl_length(&SquareMatrix::identity(n));
    checks.push(Check::new(
        suite,
        "l(I) = 0 exactly",
        identity == 0.0,
        format!("l(I) = {identity}"),
    ));

    let asym = samples
        .iter()
        .filter(|a| gl_length(a) != gl_length(&a.inverse()))
        .count();
    checks.push(Check::new(
        suite,
        "inverse symmetry l(A) = l(A^-1) exactly",
        asym == 0,
        format!("{asym} of {} samples differ", samples.len()),
    ));

    let d: Vec<Vec<f64>> = samples
        .iter()
        .map(|a| samples.iter().map(|b| gl_metric(a, b)).collect())
        .collect();
    let mut bad_triples = 0usize;
    let mut worst: f64 = 0.0;
    for row in &d {
        for (j, &dij) in row.iter().enumerate() {
            for (&dik, djk) in row.iter().zip(&d[j]) {
                let rhs = dij + djk;
                worst = worst.max(dik - rhs);
                if !within(dik, rhs) {
                    bad_triples += 1;
                }
            }
        }
    }
    checks.push(Check::new(
        suite,
        "triangle inequality d(A, C) <= d(A, B) + d(B, C)",
        bad_triples == 0,
        format!("{} triples, worst excess {worst:e}", samples.len().pow(3)),
    ));

    let bad_pairs = samples
        .iter()
        .map(|a| {
            samples
                .iter()
                .filter(|b| !product_bound_holds(a, b))
                .count()
        })
        .sum::<usize>();
    checks.push(Check::new(
        suite,
        "product bound l(AB) <= l(A) + l(B)",
        bad_pairs == 0,
        format!("{bad_pairs} of {} pairs fail", samples.len().pow(2)),
    ));

    let probe = properness_probe(radius, samples)?;
    checks.push(Check::new(
        suite,
        "properness: l(A) <= r implies |A|, |A^-1| <= e^r",
        probe.passed(),
        format!(
            "r = {radius}, {} of {} samples inside, {} violations",
            probe.within_radius,
            probe.sampled,
            probe.violations.len()
        ),
    ));
    Ok(checks)
}

pub fn run(s: &Settings) -> CliResult<Report> {
    let cfg = &s.config;
    let samples = match (&cfg.matrices, &cfg.group) {
        (Some(m), _) => matrices_from_json(&m.to_string())?,
        (None, Some(GroupSpec::Matrix { n })) => {
            random_samples(*n, cfg.samples.unwrap_or(DEFAULT_SAMPLES), s.seed)
        }
        _ => {
            return Err(CliError::config(
                "gl needs `matrices` or a group of kind `matrix`",
            ))
        }
    };
    let radius = cfg.probe_radius.unwrap_or(DEFAULT_PROBE_RADIUS);
    let checks = gl_suite("GL", &samples, radius)?;

    let mut w = csv::Writer::from_writer(s.output("gl.csv")?);
    for (index, a) in samples.iter().enumerate() {
        w.serialize(MatrixRow {
            index,
            dim: a.dim(),
            norm: a.norm(),
            inverse_norm: a.inverse_norm(),
            condition_number: a.condition_number(),
            length: gl_length(a),
        })?;
    }
    w.flush()?;

    let mut report = Report::default();
    for c in &checks {
        report.line(c.to_string());
        report.require(c.passed, c.failure());
    }
    s.write_json(
        "gl.json",
        &GlFile {
            samples: samples.len(),
            dim: samples[0].dim(),
            checks: &checks,
            passed: report.passed(),
        },
    )?;
    Ok(report)
}
