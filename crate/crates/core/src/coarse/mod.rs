//! Coarse lattices, bounded-geometry censuses, and sampled control
//! envelopes for maps between metric spaces.

mod clouds;
mod envelope;

pub use clouds::{star_clouds, CloudPoint};
pub use envelope::{
    all_pairs, expansiveness_envelope, plig_coarse_equivalence_probe, verify_uniform_embedding,
    CoarseEquivalenceProbe, EmbeddingEnvelope, EnvelopeRow, ExpansivenessEnvelope, Verdict,
};

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::length::MetricView;
use crate::weight::Weight;

/// A separated subset of a finite host sample, maximal in the sample.
#[derive(Debug, Clone)]
pub struct CoarseLattice<E, W> {
    points: Vec<E>,
    separation: W,
    covering_radius: W,
    metric: MetricView<E, W>,
}

impl<E: Clone + Debug, W: Weight> CoarseLattice<E, W> {
    pub fn points(&self) -> &[E] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn separation(&self) -> W {
        self.separation
    }

    /// Largest distance from a host point to its nearest lattice point.
    pub fn covering_radius(&self) -> W {
        self.covering_radius
    }

    pub fn metric(&self) -> &MetricView<E, W> {
        &self.metric
    }

    /// Smallest distance between distinct lattice points.
    pub fn min_separation(&self) -> Result<Option<W>> {
        let mut best: Option<W> = None;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                let d = self.metric.dist(p, q)?;
                if best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
        Ok(best)
    }
}

/// Greedy maximal separated family: walks `points` in order and keeps each
/// point at distance `≥ separation` from all points kept so far.
pub fn build_coarse_lattice<E: Clone + Debug, W: Weight>(
    points: &[E],
    metric: &MetricView<E, W>,
    separation: W,
) -> Result<CoarseLattice<E, W>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !separation.is_valid() || separation <= W::zero() {
        return Err(Error::InvalidArgument(format!(
            "separation must be positive, got {separation}"
        )));
    }
    let mut kept: Vec<E> = Vec::new();
    for p in points {
        let mut far = true;
        for q in &kept {
            if metric.dist(p, q)? < separation {
                far = false;
                break;
            }
        }
        if far {
            kept.push(p.clone());
        }
    }
    let mut covering = W::zero();
    for p in points {
        let mut nearest: Option<W> = None;
        for q in &kept {
            let d = metric.dist(p, q)?;
            if nearest.is_none_or(|n| d < n) {
                nearest = Some(d);
            }
        }
        let nearest = nearest.expect("lattice is nonempty");
        if nearest > covering {
            covering = nearest;
        }
    }
    Ok(CoarseLattice {
        points: kept,
        separation,
        covering_radius: covering,
        metric: metric.clone(),
    })
}

/// The owner of `y`'s cell: the first lattice point at distance
/// `< separation`. Cells are disjoint and each contains its owner.
pub fn retract_to_lattice<E: Clone + Debug, W: Weight>(
    lattice: &CoarseLattice<E, W>,
    y: &E,
) -> Result<E> {
    for p in &lattice.points {
        if lattice.metric.dist(p, y)? < lattice.separation {
            return Ok(p.clone());
        }
    }
    Err(Error::OutOfRange(format!(
        "{y:?} is at distance >= {} from every lattice point",
        lattice.separation
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryCensus {
    pub m: f64,
    /// `Γ_M = max_q |{p : d(q, p) ≤ M}|` over lattice points.
    pub gamma: usize,
    /// `|B(e, M + ½)| / |B(e, ½)|` when ball measures were supplied.
    pub ratio_bound: Option<f64>,
    pub within_ratio: Option<bool>,
}

/// `Γ_M` for the lattice. With `ball_measure(r) = |B(e, r)|` (open balls
/// of a left-invariant metric under counting measure) also reports the
/// packing bound `|B(e, M + ½)| / |B(e, ½)|` for a 1-separated lattice.
pub fn bounded_geometry_census<E: Clone + Debug, W: Weight>(
    lattice: &CoarseLattice<E, W>,
    m: W,
    ball_measure: Option<&dyn Fn(f64) -> Result<usize>>,
) -> Result<GeometryCensus> {
    let mut gamma = 0;
    for q in &lattice.points {
        let mut count = 0;
        for p in &lattice.points {
            if lattice.metric.dist(q, p)? <= m {
                count += 1;
            }
        }
        gamma = gamma.max(count);
    }
    let ratio_bound = match ball_measure {
        Some(mu) => {
            let outer = mu(m.to_f64() + 0.5)?;
            let inner = mu(0.5)?;
            if inner == 0 {
                return Err(Error::InvalidArgument(
                    "ball of radius 1/2 has measure zero".into(),
                ));
            }
            Some(outer as f64 / inner as f64)
        }
        None => None,
    };
    Ok(GeometryCensus {
        m: m.to_f64(),
        gamma,
        ratio_bound,
        within_ratio: ratio_bound.map(|r| gamma as f64 <= r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_metric() -> MetricView<i64, i64> {
        MetricView::from_fn("|x - y|", |x: &i64, y: &i64| (x - y).abs())
    }

    #[test]
    fn single_point_lattice() {
        let l = build_coarse_lattice(&[5i64], &abs_metric(), 1).unwrap();
        assert_eq!(l.points(), &[5]);
        assert_eq!(l.covering_radius(), 0);
    }

    #[test]
    fn separated_input_is_kept() {
        let pts = vec![0i64, 3, 6, 9];
        let l = build_coarse_lattice(&pts, &abs_metric(), 3).unwrap();
        assert_eq!(l.points(), pts.as_slice());
    }

    #[test]
    fn greedy_order_and_covering() {
        let pts: Vec<i64> = (0..10).collect();
        let l = build_coarse_lattice(&pts, &abs_metric(), 3).unwrap();
        assert_eq!(l.points(), &[0, 3, 6, 9]);
        assert_eq!(l.covering_radius(), 1);
        assert_eq!(retract_to_lattice(&l, &4).unwrap(), 3);
        assert_eq!(retract_to_lattice(&l, &5).unwrap(), 3);
        assert_eq!(retract_to_lattice(&l, &9).unwrap(), 9);
    }

    #[test]
    fn strict_cells_leave_equidistant_points_out() {
        let pts = vec![0i64, 2];
        let l = build_coarse_lattice(&pts, &abs_metric(), 1).unwrap();
        assert!(matches!(
            retract_to_lattice(&l, &1),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn errors() {
        assert_eq!(
            build_coarse_lattice(&[] as &[i64], &abs_metric(), 1).err(),
            Some(Error::EmptyInput)
        );
        assert!(matches!(
            build_coarse_lattice(&[1i64], &abs_metric(), 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn integer_census() {
        let pts: Vec<i64> = (-20..=20).collect();
        let l = build_coarse_lattice(&pts, &abs_metric(), 1).unwrap();
        let mu = |r: f64| -> Result<usize> {
            Ok((-20i64..=20).filter(|x| (x.abs() as f64) < r).count())
        };
        let c = bounded_geometry_census(&l, 3, Some(&mu)).unwrap();
        assert_eq!(c.gamma, 7);
        assert_eq!(c.ratio_bound, Some(7.0));
        assert_eq!(c.within_ratio, Some(true));
        assert_eq!(bounded_geometry_census(&l, 0, None).unwrap().gamma, 1);
    }
}
