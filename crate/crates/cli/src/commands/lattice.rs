//! Greedy coarse lattice in a word-metric ball, or the star-cloud fixture.
//!
//! Writes `lattice.csv` (index, element), `census.csv` (m, gamma,
//! ratio_bound, within_ratio) and `lattice.json`; the fixture writes
//! `clouds.csv` (clouds, points, lattice_size, gamma_1).

use coarse_metric::coarse::{bounded_geometry_census, build_coarse_lattice, star_clouds};
use serde::Serialize;

use super::Report;
use crate::config::{Fixture, Settings};
use crate::error::{CliError, CliResult};
use crate::groups::{with_group, word_metric, CliGroup, GroupTask};

#[derive(Serialize)]
struct LatticeFile {
    group: String,
    radius: u64,
    points: usize,
    lattice_size: usize,
    separation: i64,
    min_separation: Option<i64>,
    covering_radius: i64,
    passed: bool,
}

#[derive(Serialize)]
struct LatticeRow<'a> {
    index: usize,
    element: &'a str,
}

#[derive(Serialize)]
struct CensusRow {
    m: i64,
    gamma: usize,
    ratio_bound: Option<f64>,
    within_ratio: Option<bool>,
}

#[derive(Serialize)]
struct CloudRow {
    clouds: u32,
    points: usize,
    lattice_size: usize,
    gamma_1: usize,
}

struct Lattice<'a>(&'a Settings);

impl GroupTask for Lattice<'_> {
    type Output = Report;

    fn run<G: CliGroup>(self, group: G) -> CliResult<Report> {
        let s = self.0;
        let cfg = &s.config;
        let radius = cfg.radius()?;
        let sep = cfg.separation.unwrap_or(1);
        if sep <= 0 {
            return Err(CliError::config(format!(
                "separation must be positive, got {sep}"
            )));
        }
        let grid = cfg.grid.clone().unwrap_or_else(|| vec![1, 2, 3]);
        if let Some(m) = grid.iter().find(|&&m| m < 0) {
            return Err(CliError::config(format!(
                "grid values must be >= 0, got {m}"
            )));
        }
        let metric = word_metric(&group, &cfg.generators, s.budget, true)?;
        let points: Vec<G::Element> = metric
            .enumerate_ball(radius as i64)?
            .elements()
            .cloned()
            .collect();
        let view = metric.metric_view(2 * radius as i64)?;
        let lattice = build_coarse_lattice(&points, &view, sep)?;
        let min_sep = lattice.min_separation()?;

        let mut report = Report::default();
        report.require(
            min_sep.is_none_or(|m| m >= sep),
            format!("lattice is not {sep}-separated (closest pair at {min_sep:?})"),
        );
        report.require(
            lattice.covering_radius() <= sep,
            format!(
                "covering radius {} exceeds separation {sep}",
                lattice.covering_radius()
            ),
        );

        // |B(e, r)| for the packing bound, from one table deep enough for
        // every M + ½ in the grid
        let deepest = grid.iter().copied().max().unwrap_or(0) + 1;
        let table = metric.enumerate_ball(deepest)?;
        let measure = |r: f64| Ok(table.iter().filter(|(_, l)| (*l as f64) <= r).count());
        let mut w = csv::Writer::from_writer(s.output("census.csv")?);
        for &m in &grid {
            let census = bounded_geometry_census(&lattice, m, Some(&measure))?;
            report.require(
                census.within_ratio != Some(false),
                format!(
                    "Gamma_{m} = {} exceeds |B(e,M+1/2)|/|B(e,1/2)| = {:?}",
                    census.gamma, census.ratio_bound
                ),
            );
            report.line(format!(
                "M = {m}: Gamma = {}, ratio bound {}",
                census.gamma,
                census.ratio_bound.map_or("-".into(), |r| r.to_string())
            ));
            w.serialize(CensusRow {
                m,
                gamma: census.gamma,
                ratio_bound: census.ratio_bound,
                within_ratio: census.within_ratio,
            })?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_writer(s.output("lattice.csv")?);
        for (index, p) in lattice.points().iter().enumerate() {
            w.serialize(LatticeRow {
                index,
                element: &group.show(p),
            })?;
        }
        w.flush()?;

        report.lines.insert(
            0,
            format!(
                "group {}, ball radius {radius}: {} points, lattice of {} at separation {sep}, covering radius {}",
                group.label(),
                points.len(),
                lattice.len(),
                lattice.covering_radius()
            ),
        );
        s.write_json(
            "lattice.json",
            &LatticeFile {
                group: group.label(),
                radius,
                points: points.len(),
                lattice_size: lattice.len(),
                separation: sep,
                min_separation: min_sep,
                covering_radius: lattice.covering_radius(),
                passed: report.passed(),
            },
        )?;
        Ok(report)
    }
}

fn clouds(s: &Settings, count: u32) -> CliResult<Report> {
    if count < 2 {
        return Err(CliError::config(
            "star-clouds fixture needs at least 2 clouds",
        ));
    }
    let mut report = Report::default();
    let mut w = csv::Writer::from_writer(s.output("clouds.csv")?);
    let mut gammas = Vec::new();
    for j in 1..=count {
        let (points, metric) = star_clouds(j);
        let lattice = build_coarse_lattice(&points, &metric, 1)?;
        let gamma = bounded_geometry_census(&lattice, 1, None)?.gamma;
        gammas.push(gamma);
        w.serialize(CloudRow {
            clouds: j,
            points: points.len(),
            lattice_size: lattice.len(),
            gamma_1: gamma,
        })?;
    }
    w.flush()?;
    let growing = gammas.windows(2).all(|p| p[0] < p[1]);
    report.require(growing, "Gamma_1 does not grow with the number of clouds");
    report.line(format!("star clouds 1..={count}: Gamma_1 = {gammas:?}"));
    Ok(report)
}

pub fn run(s: &Settings) -> CliResult<Report> {
    match &s.config.fixture {
        Some(Fixture::StarClouds { clouds: n }) => clouds(s, *n),
        None => with_group(s.config.group()?, Lattice(s)),
    }
}
