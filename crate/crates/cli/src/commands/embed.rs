//! Cocycle embedding on a word-metric ball.
//!
//! Writes `embedding.csv` (d, norm_lower, norm, norm_plus_tail) and
//! `embedding.json` with the extracted constants and the cocycle identity
//! sweep.

use coarse_metric::coarse::all_pairs;
use coarse_metric::cocycle::{CocycleContext, EmbeddingConstants, IdentitySweep};
use coarse_metric::word::growth_certificate;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Report;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::groups::{with_group, word_metric, CliGroup, GroupTask};

pub const DEFAULT_TRUNCATION: u64 = 8;
pub const DEFAULT_PAIRS: usize = 2000;
pub const DEFAULT_IDENTITY_ELEMENTS: usize = 12;
const IDENTITY_TOL: f64 = 1e-12;
const TRANSLATION_TOL: f64 = 1e-9;

#[derive(Serialize)]
struct EmbeddingFile {
    group: String,
    radius: u64,
    sample_size: usize,
    #[serde(flatten)]
    constants: EmbeddingConstants,
    identity: IdentitySweep,
    passed: bool,
}

struct Embed<'a>(&'a Settings);

impl GroupTask for Embed<'_> {
    type Output = Report;

    fn run<G: CliGroup>(self, group: G) -> CliResult<Report> {
        let s = self.0;
        let cfg = &s.config;
        let radius = cfg.radius()?;
        let trunc = s.truncation.unwrap_or(DEFAULT_TRUNCATION);
        if trunc == 0 {
            return Err(CliError::config("truncation must be at least 1"));
        }
        let metric = word_metric(&group, &cfg.generators, s.budget, true)?;
        let ball: Vec<G::Element> = metric
            .enumerate_ball(radius as i64)?
            .elements()
            .cloned()
            .collect();
        // quotients of sampled pairs have length up to 2·radius; one table
        // for all of them beats a search per pair
        let length = metric.length_function(2 * radius.max(trunc) as i64)?;
        let ctx = CocycleContext::new(group.clone(), metric.enumerate_ball(trunc as i64)?, length);
        let cert = growth_certificate(&metric.sphere_counts(trunc)?);

        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        let mut pairs = all_pairs(&ball);
        let max_pairs = cfg.samples.unwrap_or(DEFAULT_PAIRS);
        if pairs.len() > max_pairs {
            pairs.shuffle(&mut rng);
            pairs.truncate(max_pairs);
        }
        let constants = ctx.embedding_constants(&pairs, trunc, &cert)?;

        let k = cfg.identity_elements.unwrap_or(DEFAULT_IDENTITY_ELEMENTS);
        let elements: Vec<G::Element> = ball.choose_multiple(&mut rng, k).cloned().collect();
        let identity = ctx.identity_sweep(&elements, trunc)?;

        let mut report = Report::default();
        report.require(
            identity.passed(IDENTITY_TOL),
            format!(
                "cocycle identity b(st) = pi(s)b(t) + b(s): defect {:e}, isometry gap {:e}",
                identity.max_defect, identity.max_isometry_gap
            ),
        );
        report.require(
            constants.passed(),
            "norm sandwich c1*sqrt(d) <= |b(g) - b(h)| <= c2*d",
        );
        report.require(
            constants.translation_defect <= TRANSLATION_TOL,
            format!(
                "translation identity |b(g) - b(h)| = |b(h^-1 g)|: defect {:e}",
                constants.translation_defect
            ),
        );

        constants.write_csv(s.output("embedding.csv")?)?;
        report.line(format!(
            "group {}, ball radius {radius} ({} elements), truncation {trunc}",
            group.label(),
            ball.len()
        ));
        report.line(format!(
            "{} pairs at distance >= {}: c1 = {}, c2 = {}",
            constants.pairs_used, constants.c3, constants.c1, constants.c2
        ));
        report.line(format!(
            "cocycle identity on {} pairs: max defect {:e}",
            identity.pairs, identity.max_defect
        ));
        s.write_json(
            "embedding.json",
            &EmbeddingFile {
                group: group.label(),
                radius,
                sample_size: ball.len(),
                constants,
                identity,
                passed: report.passed(),
            },
        )?;
        Ok(report)
    }
}

pub fn run(s: &Settings) -> CliResult<Report> {
    with_group(s.config.group()?, Embed(s))
}
