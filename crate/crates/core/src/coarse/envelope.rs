//! Sampled control functions. Every verdict here concerns the sampled
//! pairs only; nothing is claimed about pairs outside the sample.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::length::MetricView;
use crate::weight::Weight;

/// All unordered pairs `(sample[i], sample[j])` with `i < j`.
pub fn all_pairs<E: Clone>(sample: &[E]) -> Vec<(E, E)> {
    let mut out = Vec::with_capacity(sample.len() * sample.len().saturating_sub(1) / 2);
    for (i, x) in sample.iter().enumerate() {
        for y in &sample[i + 1..] {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

fn sorted_grid(distances: &[(f64, f64)]) -> Vec<f64> {
    let mut grid: Vec<f64> = distances.iter().map(|(dx, _)| *dx).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn check_distances(distances: &[(f64, f64)]) -> Result<()> {
    if distances.is_empty() {
        return Err(Error::EmptySample);
    }
    if distances.iter().any(|(a, b)| a.is_nan() || b.is_nan()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn distance_pairs<X, Y, Wx: Weight, Wy: Weight>(
    f: impl Fn(&X) -> Y,
    dx: &MetricView<X, Wx>,
    dy: &MetricView<Y, Wy>,
    pairs: &[(X, X)],
) -> Result<Vec<(f64, f64)>> {
    pairs
        .iter()
        .map(|(a, b)| Ok((dx.dist_f64(a, b)?, dy.dist_f64(&f(a), &f(b))?)))
        .collect()
}

/// `S(R) = max { d_Y(f(x), f(x')) : d_X(x, x') ≤ R }` on the grid of sampled
/// source distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansivenessEnvelope {
    pub steps: Vec<(f64, f64)>,
}

impl ExpansivenessEnvelope {
    /// From `(d_X, d_Y)` pairs.
    pub fn from_distances(distances: &[(f64, f64)]) -> Result<Self> {
        check_distances(distances)?;
        let mut sorted = distances.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut steps: Vec<(f64, f64)> = Vec::new();
        let mut running = f64::NEG_INFINITY;
        for (dx, dy) in sorted {
            running = running.max(dy);
            match steps.last_mut() {
                Some(last) if last.0 == dx => last.1 = running,
                _ => steps.push((dx, running)),
            }
        }
        Ok(ExpansivenessEnvelope { steps })
    }

    /// `S(r)` at the largest grid point `≤ r`.
    pub fn control(&self, r: f64) -> Option<f64> {
        self.steps
            .iter()
            .rev()
            .find(|(g, _)| *g <= r)
            .map(|(_, s)| *s)
    }

    pub fn is_finite(&self) -> bool {
        !self.steps.is_empty()
            && self
                .steps
                .iter()
                .all(|(r, s)| r.is_finite() && s.is_finite())
    }
}

pub fn expansiveness_envelope<X, Y, Wx: Weight, Wy: Weight>(
    f: impl Fn(&X) -> Y,
    dx: &MetricView<X, Wx>,
    dy: &MetricView<Y, Wy>,
    pairs: &[(X, X)],
) -> Result<ExpansivenessEnvelope> {
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    ExpansivenessEnvelope::from_distances(&distance_pairs(f, dx, dy, pairs)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub t: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
}

/// Empirical `ρ₋(t) = min { d_Y : d_X ≥ t }` and `ρ₊(t) = max { d_Y : d_X ≤ t }`
/// over the grid of sampled source distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingEnvelope {
    pub rows: Vec<EnvelopeRow>,
    pub verdict: Verdict,
    pub scope: &'static str,
}

impl EmbeddingEnvelope {
    pub fn from_distances(distances: &[(f64, f64)]) -> Result<Self> {
        check_distances(distances)?;
        let grid = sorted_grid(distances);
        let mut sorted = distances.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut rho_plus = Vec::with_capacity(grid.len());
        let mut running = f64::NEG_INFINITY;
        let mut i = 0;
        for t in &grid {
            while i < sorted.len() && sorted[i].0 <= *t {
                running = running.max(sorted[i].1);
                i += 1;
            }
            rho_plus.push(running);
        }
        let mut rho_minus = vec![0.0; grid.len()];
        let mut running = f64::INFINITY;
        let mut j = sorted.len();
        for (k, t) in grid.iter().enumerate().rev() {
            while j > 0 && sorted[j - 1].0 >= *t {
                running = running.min(sorted[j - 1].1);
                j -= 1;
            }
            rho_minus[k] = running;
        }
        let rows: Vec<EnvelopeRow> = grid
            .iter()
            .zip(rho_minus.iter().zip(&rho_plus))
            .map(|(&t, (&rho_minus, &rho_plus))| EnvelopeRow {
                t,
                rho_minus,
                rho_plus,
            })
            .collect();
        let verdict = Self::judge(&rows);
        Ok(EmbeddingEnvelope {
            rows,
            verdict,
            scope: "sampled range only",
        })
    }

    /// PASS when `ρ₊` is finite and `ρ₋` is positive at the top of the grid
    /// and strictly larger there than at the grid midpoint.
    fn judge(rows: &[EnvelopeRow]) -> Verdict {
        let finite = rows.iter().all(|r| r.rho_plus.is_finite());
        let (Some(last), Some(mid)) = (rows.last(), rows.get(rows.len() / 2)) else {
            return Verdict::Fail;
        };
        if finite && rows.len() >= 2 && last.rho_minus > mid.rho_minus && last.rho_minus > 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// CSV with columns `t, rho_minus, rho_plus`.
    pub fn write_csv<Wr: Write>(&self, out: Wr) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn verify_uniform_embedding<X, Y, Wx: Weight, Wy: Weight>(
    f: impl Fn(&X) -> Y,
    dx: &MetricView<X, Wx>,
    dy: &MetricView<Y, Wy>,
    pairs: &[(X, X)],
) -> Result<EmbeddingEnvelope> {
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    EmbeddingEnvelope::from_distances(&distance_pairs(f, dx, dy, pairs)?)
}

/// Envelopes of the identity map in both directions between two metrics on
/// the same points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoarseEquivalenceProbe {
    pub forward: ExpansivenessEnvelope,
    pub backward: ExpansivenessEnvelope,
    pub verdict: Verdict,
    pub scope: &'static str,
}

pub fn plig_coarse_equivalence_probe<E: Clone, W1: Weight, W2: Weight>(
    d1: &MetricView<E, W1>,
    d2: &MetricView<E, W2>,
    pairs: &[(E, E)],
) -> Result<CoarseEquivalenceProbe> {
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    let distances: Vec<(f64, f64)> = pairs
        .iter()
        .map(|(a, b)| Ok((d1.dist_f64(a, b)?, d2.dist_f64(a, b)?)))
        .collect::<Result<_>>()?;
    let swapped: Vec<(f64, f64)> = distances.iter().map(|(a, b)| (*b, *a)).collect();
    let forward = ExpansivenessEnvelope::from_distances(&distances)?;
    let backward = ExpansivenessEnvelope::from_distances(&swapped)?;
    let verdict = if forward.is_finite() && backward.is_finite() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CoarseEquivalenceProbe {
        forward,
        backward,
        verdict,
        scope: "sampled range only",
    })
}
