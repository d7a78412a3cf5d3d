//! Sphere census and growth certificate.
//!
//! Writes `census.csv` (n, ball_size, sphere_size, bound_3n, pass) and
//! `certificate.json`. For graded schemes `pass` is the `3ⁿ` bound on
//! balls and spheres; otherwise it is the certificate bound `β·e^{αn}`.

use coarse_metric::word::{growth_certificate, verify_3n_bound, GrowthCertificate};
use serde::Serialize;

use super::Report;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::groups::{with_group, word_metric, CliGroup, GroupTask};

#[derive(Serialize)]
struct CertificateFile {
    group: String,
    radius: u64,
    #[serde(flatten)]
    certificate: GrowthCertificate,
    ball_sizes: Vec<usize>,
    /// `None` unless the generating set is a graded scheme.
    three_n_bound: Option<bool>,
    certificate_holds: bool,
    passed: bool,
}

struct Growth<'a>(&'a Settings);

impl GroupTask for Growth<'_> {
    type Output = Report;

    fn run<G: CliGroup>(self, group: G) -> CliResult<Report> {
        let s = self.0;
        let n = s.config.radius()?;
        if n == 0 {
            return Err(CliError::config("growth needs radius >= 1"));
        }
        let metric = word_metric(&group, &s.config.generators, s.budget, true)?;
        let census = metric.sphere_counts(n)?;
        let cert = growth_certificate(&census);
        let three_n = match metric.generators().graded_scheme() {
            Some(_) => Some(verify_3n_bound(&metric, n)?),
            None => None,
        };

        let row_pass = |n: u64, ball: usize| match &three_n {
            Some(r) => r
                .rows
                .iter()
                .find(|row| row.n == n)
                .is_none_or(|row| row.pass),
            None => cert.holds(n, ball),
        };
        census.write_csv(s.output("census.csv")?, |r| row_pass(r.n, r.ball_size))?;

        let certificate_holds = cert.holds_on(&census);
        let three_n_ok = three_n.as_ref().map(|r| r.passed);
        let mut report = Report::default();
        report.require(
            certificate_holds,
            "growth certificate fails on its own grid",
        );
        report.require(
            three_n_ok != Some(false),
            "3^n bound |D(e,n)| <= 3^n, |S(e,n)| <= 2*3^(n-1) violated",
        );
        let ball_sizes: Vec<usize> = census.rows().iter().map(|r| r.ball_size).collect();
        s.write_json(
            "certificate.json",
            &CertificateFile {
                group: group.label(),
                radius: n,
                certificate: cert,
                ball_sizes: ball_sizes.clone(),
                three_n_bound: three_n_ok,
                certificate_holds,
                passed: report.passed(),
            },
        )?;

        report.line(format!("group {}, census to n = {n}", group.label()));
        report.line(format!(
            "|D(e,{n})| = {}, alpha = {}, beta = {}",
            ball_sizes.last().copied().unwrap_or(0),
            cert.alpha,
            cert.beta
        ));
        if let Some(rate) = cert.growth_rate {
            report.line(format!("growth rate estimate {rate}"));
        }
        if let Some(ok) = three_n_ok {
            report.line(format!("3^n bound: {}", if ok { "pass" } else { "FAIL" }));
        }
        Ok(report)
    }
}

pub fn run(s: &Settings) -> CliResult<Report> {
    with_group(s.config.group()?, Growth(s))
}
