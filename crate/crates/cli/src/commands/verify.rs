//! The invariant suite: group, length and metric axioms, growth bounds,
//! the cocycle identity, coarse lattices and the matrix metric.
//!
//! Without a config it runs a fixed menu of groups; with one it runs the
//! suite for the configured group. Writes `verify.csv` (suite, check,
//! passed, detail) and `verify.json`.

use std::fmt;

use coarse_metric::coarse::build_coarse_lattice;
use coarse_metric::cocycle::CocycleContext;
use coarse_metric::group::{
    validate_group_axioms, FiniteGroup, FreeGroup, Heisenberg, IntegerLattice,
};
use coarse_metric::word::verify_3n_bound;
use coarse_metric::{
    metric_from_length, validate_length_axioms, validate_metric_axioms, GroupSpec, ValidationReport,
};
use serde::Serialize;
use serde_json::json;

use super::gl::{gl_suite, random_samples, DEFAULT_SAMPLES};
use super::Report;
use crate::config::{check_radius, GeneratorSpec, Settings};
use crate::error::{CliError, CliResult};
use crate::groups::{with_group, word_metric, CliGroup, GroupTask};

const DEFAULT_RADIUS: u64 = 3;
/// Cubic checks (group and metric axioms) use at most this many elements.
const CUBIC_SAMPLE: usize = 30;
const IDENTITY_ELEMENTS: usize = 20;
const IDENTITY_LAYERS: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(
        suite: &str,
        check: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        Check {
            suite: suite.to_string(),
            check: check.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn failure(&self) -> String {
        format!("{}: {} ({})", self.suite, self.check, self.detail)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {} ({})", self.suite, self.check, self.detail)
    }
}

/// One check per axiom, named by the axiom.
pub fn checks_from_report(suite: &str, report: &ValidationReport) -> Vec<Check> {
    report
        .checks
        .iter()
        .map(|c| {
            let mut detail = format!("{} checked, {} violations", c.checked, c.violations);
            if let Some(w) = &c.worst {
                detail.push_str(&format!(
                    "; worst at {}: {} vs {}",
                    w.elements.join(", "),
                    w.lhs,
                    w.rhs
                ));
            }
            Check::new(suite, c.axiom.to_string(), c.passed, detail)
        })
        .collect()
}

struct WordSuite<'a> {
    name: String,
    gens: &'a GeneratorSpec,
    radius: u64,
    budget: usize,
}

impl GroupTask for WordSuite<'_> {
    type Output = Vec<Check>;

    fn run<G: CliGroup>(self, group: G) -> CliResult<Vec<Check>> {
        let suite = self.name.as_str();
        let mut checks = Vec::new();
        if let GeneratorSpec::Explicit { .. } = self.gens {
            let checked = word_metric(&group, self.gens, self.budget, true);
            checks.push(Check::new(
                suite,
                "generating set symmetric with w(s) = w(s^-1)",
                checked.is_ok(),
                match checked {
                    Ok(_) => "ok".to_string(),
                    Err(CliError::Config(msg)) => msg,
                    Err(e) => e.to_string(),
                },
            ));
        }
        // unchecked, so a bad weight shows up as a failed axiom
        let metric = word_metric(&group, self.gens, self.budget, false)?;
        let table = metric.enumerate_ball(self.radius as i64)?;
        let ball: Vec<G::Element> = table.elements().cloned().collect();
        let small = &ball[..ball.len().min(CUBIC_SAMPLE)];

        let axioms = validate_group_axioms(&group, small)?;
        checks.push(Check::new(
            suite,
            "group axioms",
            axioms.passed(),
            format!("{} triples", axioms.triples_checked),
        ));

        let length = metric.length_function(2 * self.radius as i64)?;
        checks.extend(checks_from_report(
            suite,
            &validate_length_axioms(&group, &length, &ball)?,
        ));
        let d = metric_from_length(&group, &length);
        checks.extend(checks_from_report(
            suite,
            &validate_metric_axioms(&group, &d, small)?,
        ));

        if metric.generators().graded_scheme().is_some() {
            let r = verify_3n_bound(&metric, self.radius.max(1))?;
            checks.push(Check::new(
                suite,
                "3^n bound |D(e,n)| <= 3^n, |S(e,n)| <= 2*3^(n-1)",
                r.passed,
                format!("n <= {}", self.radius.max(1)),
            ));
        }

        let ctx = CocycleContext::from_word_metric(&metric, IDENTITY_LAYERS)?;
        let near: Vec<G::Element> = table
            .iter()
            .filter(|(_, l)| *l <= 2)
            .map(|(g, _)| g.clone())
            .take(IDENTITY_ELEMENTS)
            .collect();
        let sweep = ctx.identity_sweep(&near, IDENTITY_LAYERS)?;
        checks.push(Check::new(
            suite,
            "cocycle identity b(st) = pi(s)b(t) + b(s)",
            sweep.passed(1e-12),
            format!(
                "{} pairs, n <= {IDENTITY_LAYERS}, max defect {:e}",
                sweep.pairs, sweep.max_defect
            ),
        ));
        Ok(checks)
    }
}

fn lattice_checks(budget: usize) -> CliResult<Vec<Check>> {
    let suite = "Z^2 lattice";
    let z2 = IntegerLattice::new(2);
    let metric = word_metric(&z2, &GeneratorSpec::default(), budget, true)?;
    let points: Vec<_> = metric.enumerate_ball(10)?.elements().cloned().collect();
    let lattice = build_coarse_lattice(&points, &metric.metric_view(20)?, 1)?;
    let min_sep = lattice.min_separation()?;
    Ok(vec![
        Check::new(
            suite,
            "greedy lattice is 1-separated",
            min_sep.is_none_or(|m| m >= 1),
            format!("{} points, closest pair {min_sep:?}", lattice.len()),
        ),
        Check::new(
            suite,
            "covering radius <= 1",
            lattice.covering_radius() <= 1,
            format!("covering radius {}", lattice.covering_radius()),
        ),
    ])
}

fn default_suite(s: &Settings) -> CliResult<Vec<Check>> {
    let standard = GeneratorSpec::default();
    let suite = |name: &str, radius| WordSuite {
        name: name.into(),
        gens: &standard,
        radius,
        budget: s.budget,
    };
    let mut checks = Vec::new();
    checks.extend(suite("Z^2", 3).run(IntegerLattice::new(2))?);
    checks.extend(suite("F_2", 3).run(FreeGroup::new(2))?);
    checks.extend(suite("H_3(Z)", 2).run(Heisenberg)?);
    checks.extend(suite("S_3", 2).run(FiniteGroup::symmetric3())?);

    let graded = GeneratorSpec::Graded {
        elements: (1..=8).map(|n| json!([n])).collect(),
    };
    checks.extend(
        WordSuite {
            name: "Z graded".into(),
            gens: &graded,
            radius: 8,
            budget: s.budget,
        }
        .run(IntegerLattice::new(1))?,
    );
    checks.extend(lattice_checks(s.budget)?);
    checks.extend(gl_suite(
        "GL(2)",
        &random_samples(2, DEFAULT_SAMPLES, s.seed),
        1.0,
    )?);
    Ok(checks)
}

fn configured_suite(s: &Settings, group: &GroupSpec) -> CliResult<Vec<Check>> {
    let cfg = &s.config;
    if let GroupSpec::Matrix { n } = group {
        let samples = random_samples(*n, cfg.samples.unwrap_or(DEFAULT_SAMPLES), s.seed);
        return gl_suite(
            &format!("GL({n})"),
            &samples,
            cfg.probe_radius.unwrap_or(1.0),
        );
    }
    let name = match group {
        GroupSpec::IntegerLattice { rank } => format!("Z^{rank}"),
        GroupSpec::Free { rank } => format!("F_{rank}"),
        GroupSpec::Heisenberg => "H_3(Z)".into(),
        _ => "table group".into(),
    };
    with_group(
        group,
        WordSuite {
            name,
            gens: &cfg.generators,
            radius: check_radius(cfg.radius.unwrap_or(DEFAULT_RADIUS))?,
            budget: s.budget,
        },
    )
}

pub fn run(s: &Settings) -> CliResult<Report> {
    let checks = match &s.config.group {
        Some(group) => configured_suite(s, group)?,
        None => default_suite(s)?,
    };
    let mut w = csv::Writer::from_writer(s.output("verify.csv")?);
    let mut report = Report::default();
    for c in &checks {
        w.serialize(c)?;
        report.line(c.to_string());
        report.require(c.passed, c.failure());
    }
    w.flush()?;
    s.write_json(
        "verify.json",
        &json!({ "checks": checks.len(), "failed": report.failures, "passed": report.passed() }),
    )?;
    Ok(report)
}
