//! The affine isometric action of a discrete group on
//! `X = ⊕ₙ L^{2n}(G)` (ℓ²-sum, counting measure) built from the bumps
//! `φⁿ_e(x) = max(0, 1 − l(x)/n)`.
//!
//! The cocycle is `bⁿ(g) = λ(g)φⁿ_e − φⁿ_e`, and the action is
//! `α(g)ξ = λ(g)ξ + b(g)`. Everything is truncated at a finite number of
//! layers; the truncated norm bounds the true norm from below, and adding
//! the tail estimate bounds it from above.

mod sparse;

pub use sparse::SparseFunction;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{CanonicalElement, Group};
use crate::length::{LengthFunction, MetricView};
use crate::weight::Weight;
use crate::word::{BallTable, GrowthCertificate, WordMetric};

/// Pairs closer than this are left out of the embedding constants.
pub const SANDWICH_THRESHOLD: f64 = 3.0;

/// `φⁿ_x(y) = 1 − d(x, y)/n` if `d(x, y) ≤ n`, else `0`.
pub fn bump_value<E, W: Weight>(n: u64, x: &E, y: &E, metric: &MetricView<E, W>) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "bump scale must be at least 1".into(),
        ));
    }
    Ok(bump_at_distance(n, metric.dist_f64(x, y)?))
}

fn bump_at_distance(n: u64, d: f64) -> f64 {
    let n = n as f64;
    if d >= n {
        0.0
    } else {
        (n - d) / n
    }
}

/// `N(g)`, the integer with `d/2 − 1 ≤ N < d/2`; `None` unless `d > 2`.
pub fn disjoint_layer_count(d: f64) -> Option<u64> {
    (d > 2.0).then(|| ((d / 2.0).ceil() - 1.0) as u64)
}

/// `Σ_{n > N} n⁻²`.
fn inverse_square_tail(n: u64) -> f64 {
    let partial: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
    (PI * PI / 6.0 - partial).max(0.0)
}

/// A ball table of radius `R` around `e` and the length function; layers
/// `n ≤ R` need nothing else, since `φⁿ_e` vanishes off `B(e, n)`.
#[derive(Debug, Clone)]
pub struct CocycleContext<G: Group, W> {
    group: G,
    table: BallTable<G::Element, W>,
    length: LengthFunction<G::Element, W>,
}

/// One layer `bⁿ(g)`, stored on `B(e, n) ∪ B(g, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleLayer<E: Ord> {
    pub n: u64,
    pub values: SparseFunction<E>,
}

impl<E: CanonicalElement> CocycleLayer<E> {
    pub fn norm(&self) -> f64 {
        self.values.norm_2n(self.n)
    }
}

/// `‖·‖_{2n}` of a layer.
pub fn layer_norm<E: CanonicalElement>(layer: &CocycleLayer<E>) -> f64 {
    layer.norm()
}

/// `b(g)` truncated to layers `1..=N`, with its norm bounds.
#[derive(Debug, Clone, Serialize)]
pub struct CocycleVector<E: Ord> {
    pub distance: f64,
    pub layers: Vec<CocycleLayer<E>>,
    pub layer_norms: Vec<f64>,
    /// Norm of the truncation; a lower bound for `‖b(g)‖_X`.
    pub x_norm: f64,
    /// Bound on `Σ_{n>N} ‖bⁿ(g)‖²_{2n}`.
    pub tail_bound: f64,
    /// `sqrt(x_norm² + tail_bound)`, an upper bound for `‖b(g)‖_X`.
    pub upper_bound: f64,
}

/// A point of the truncated space: one finitely supported function per
/// layer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffinePoint<E: Ord> {
    pub layers: Vec<SparseFunction<E>>,
}

impl<E: CanonicalElement> AffinePoint<E> {
    pub fn zero(truncation: u64) -> Self {
        AffinePoint {
            layers: (0..truncation).map(|_| SparseFunction::new()).collect(),
        }
    }

    pub fn truncation(&self) -> u64 {
        self.layers.len() as u64
    }

    /// `(Σₙ ‖ξⁿ‖²_{2n})^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.layers
            .iter()
            .enumerate()
            .map(|(i, f)| f.norm_2n(i as u64 + 1).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest pointwise difference over all layers.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.layers
            .iter()
            .zip(&other.layers)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

impl<E: CanonicalElement> From<&CocycleVector<E>> for AffinePoint<E> {
    fn from(v: &CocycleVector<E>) -> Self {
        AffinePoint {
            layers: v.layers.iter().map(|l| l.values.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentitySweep {
    pub elements: usize,
    pub max_n: u64,
    pub pairs: usize,
    /// Largest `|bⁿ(st) − λ(s)bⁿ(t) − bⁿ(s)|` at any point.
    pub max_defect: f64,
    /// Largest `|‖λ(s)bⁿ(t)‖ − ‖bⁿ(t)‖|`.
    pub max_isometry_gap: f64,
}

impl IdentitySweep {
    /// Within `tol` for the identity, exact for the isometry.
    pub fn passed(&self, tol: f64) -> bool {
        self.max_defect <= tol && self.max_isometry_gap == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfBallReport {
    pub n: u64,
    pub checked: usize,
    pub in_half_ball: usize,
    pub min_value: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProperRow {
    pub distance: f64,
    pub disjoint_layers: Option<u64>,
    /// `N(g)/4`.
    pub lower_bound: Option<f64>,
    /// `Σ_{n ≤ max(N, N(g))} ‖bⁿ(g)‖²_{2n}`.
    pub norm_sq: f64,
    pub upper_bound: f64,
    /// `2√β·e^{α/2}·d(g, e)`.
    pub growth_upper_bound: f64,
    /// Largest relative gap in `‖bⁿ(g)‖^{2n} = ‖φⁿ_g‖^{2n} + ‖φⁿ_e‖^{2n}`
    /// over layers `n ≤ N(g)`.
    pub disjoint_support_gap: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProperReport {
    pub rows: Vec<ProperRow>,
    pub monotone: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingRow {
    pub d: f64,
    /// `sqrt(N(d)/4)`, the properness lower bound (0 below `d = 3`).
    pub norm_lower: f64,
    pub norm: f64,
    pub norm_plus_tail: f64,
}

/// Constants with `c₁√d ≤ ‖b(g) − b(h)‖_X ≤ c₂·d` for all sampled pairs at
/// distance `d ≥ c₃`. `c₁` uses truncated norms (lower bounds) and `c₂`
/// adds the tail (upper bounds), so both hold for the untruncated norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "N_trunc")]
    pub n_trunc: u64,
    pub pairs_used: usize,
    /// Largest `|‖b(g) − b(h)‖ − ‖b(h⁻¹g)‖|` over the sample.
    pub translation_defect: f64,
    #[serde(skip)]
    pub rows: Vec<EmbeddingRow>,
}

impl EmbeddingConstants {
    /// CSV with columns `d, norm_lower, norm, norm_plus_tail`.
    pub fn write_csv<Wr: Write>(&self, out: Wr) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Whether the sampled sandwich holds with `c₁ > 0` and finite `c₂`.
    pub fn passed(&self) -> bool {
        self.c1 > 0.0
            && self.c2.is_finite()
            && self.rows.iter().all(|r| {
                self.c1 * r.d.sqrt() <= r.norm * (1.0 + 1e-12)
                    && r.norm_plus_tail <= self.c2 * r.d * (1.0 + 1e-12)
            })
    }
}

impl<G, W> CocycleContext<G, W>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    pub fn new(
        group: G,
        table: BallTable<G::Element, W>,
        length: LengthFunction<G::Element, W>,
    ) -> Self {
        CocycleContext {
            group,
            table,
            length,
        }
    }

    /// Context for a word metric with a ball table of integer radius
    /// `radius`; layers up to `radius` are available.
    pub fn from_word_metric(metric: &WordMetric<G, W>, radius: u64) -> Result<Self> {
        let r = W::from_index(radius);
        Ok(CocycleContext {
            group: metric.group().clone(),
            table: metric.enumerate_ball(r)?,
            length: metric.length_function(r)?,
        })
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    /// The largest layer index available.
    pub fn max_layer(&self) -> u64 {
        self.table.radius().floor_index().max(0) as u64
    }

    fn check_layer(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "layer index must be at least 1".into(),
            ));
        }
        if n > self.max_layer() {
            return Err(Error::InvalidArgument(format!(
                "layer {n} needs a ball table of radius {n}, have {}",
                self.table.radius()
            )));
        }
        Ok(())
    }

    /// `d(g, e)`.
    pub fn distance(&self, g: &G::Element) -> Result<f64> {
        self.length.eval(g).map(Weight::to_f64)
    }

    /// `φⁿ_e(x)`, for `n ≤ max_layer`.
    pub fn bump(&self, n: u64, x: &G::Element) -> f64 {
        match self.table.get(x) {
            Some(l) => bump_at_distance(n, l.to_f64()),
            None => 0.0,
        }
    }

    /// `φⁿ_e` as a sparse function on `B(e, n)`.
    pub fn bump_function(&self, n: u64) -> Result<SparseFunction<G::Element>> {
        self.check_layer(n)?;
        let mut f = SparseFunction::new();
        for x in self.table.open_ball(W::from_index(n)) {
            f.insert(x.clone(), self.bump(n, x));
        }
        Ok(f)
    }

    /// Checks `φⁿ_e(x) ≥ ½` for sampled `x` with `d(x, e) ≤ n/2`.
    pub fn half_ball_lower_bound(&self, n: u64, sample: &[G::Element]) -> Result<HalfBallReport> {
        self.check_layer(n)?;
        let mut min_value: Option<f64> = None;
        let mut in_half = 0;
        for x in sample {
            if self.distance(x)? <= n as f64 / 2.0 {
                in_half += 1;
                let v = self.bump(n, x);
                min_value = Some(min_value.map_or(v, |m: f64| m.min(v)));
            }
        }
        Ok(HalfBallReport {
            n,
            checked: sample.len(),
            in_half_ball: in_half,
            min_value,
            passed: min_value.is_none_or(|m| m >= 0.5),
        })
    }

    /// `bⁿ(g)(h) = φⁿ_e(g⁻¹h) − φⁿ_e(h)` on `B(e, n) ∪ g·B(e, n)`.
    pub fn cocycle_layer(&self, n: u64, g: &G::Element) -> Result<CocycleLayer<G::Element>> {
        self.check_layer(n)?;
        let mut values = SparseFunction::new();
        for x in self.table.open_ball(W::from_index(n)) {
            let gx = self.group.mul(g, x);
            for h in [x.clone(), gx] {
                let v = self.bump(n, &self.group.left_quotient(g, &h)) - self.bump(n, &h);
                values.insert(h, v);
            }
        }
        Ok(CocycleLayer { n, values })
    }

    /// `b(g)` truncated at `truncation` layers, with bounds from `cert`.
    pub fn cocycle_vector(
        &self,
        g: &G::Element,
        truncation: u64,
        cert: &GrowthCertificate,
    ) -> Result<CocycleVector<G::Element>> {
        if truncation == 0 {
            return Err(Error::InvalidArgument(
                "truncation must be at least 1".into(),
            ));
        }
        let layers = (1..=truncation)
            .map(|n| self.cocycle_layer(n, g))
            .collect::<Result<Vec<_>>>()?;
        let distance = self.distance(g)?;
        Ok(assemble(distance, layers, cert))
    }

    /// `α(g)ξ = λ(g)ξ + b(g)`, layer by layer.
    pub fn affine_apply(
        &self,
        g: &G::Element,
        xi: &AffinePoint<G::Element>,
        truncation: u64,
    ) -> Result<AffinePoint<G::Element>> {
        if xi.truncation() != truncation {
            return Err(Error::TruncationMismatch {
                expected: truncation as usize,
                found: xi.layers.len(),
            });
        }
        let layers = xi
            .layers
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let b = self.cocycle_layer(i as u64 + 1, g)?;
                Ok(f.translate(&self.group, g).add(&b.values))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AffinePoint { layers })
    }

    /// Checks `bⁿ(st) = λ(s)bⁿ(t) + bⁿ(s)` pointwise and
    /// `‖λ(s)bⁿ(t)‖_{2n} = ‖bⁿ(t)‖_{2n}` for all `s, t` in `elements` and
    /// `n ≤ max_n`. Pairs are split across threads; layers of the sampled
    /// elements are computed once.
    pub fn identity_sweep(&self, elements: &[G::Element], max_n: u64) -> Result<IdentitySweep> {
        if elements.is_empty() {
            return Err(Error::EmptySample);
        }
        let layers: Vec<Vec<CocycleLayer<G::Element>>> = elements
            .iter()
            .map(|g| (1..=max_n).map(|n| self.cocycle_layer(n, g)).collect())
            .collect::<Result<_>>()?;
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        let chunk = elements.len().div_ceil(threads);
        let partial: Vec<Result<(f64, f64)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..elements.len())
                .step_by(chunk)
                .map(|start| {
                    let layers = &layers;
                    scope.spawn(move || -> Result<(f64, f64)> {
                        let (mut defect, mut isometry): (f64, f64) = (0.0, 0.0);
                        for i in start..(start + chunk).min(elements.len()) {
                            let s = &elements[i];
                            for (t, t_layers) in elements.iter().zip(layers) {
                                let st = self.group.mul(s, t);
                                for (k, (bt, bs)) in t_layers.iter().zip(&layers[i]).enumerate() {
                                    let n = k as u64 + 1;
                                    let moved = bt.values.translate(&self.group, s);
                                    let rhs = moved.add(&bs.values);
                                    let lhs = self.cocycle_layer(n, &st)?.values;
                                    defect = defect.max(lhs.max_abs_diff(&rhs));
                                    let gap = (moved.norm_2n(n) - bt.norm()).abs();
                                    isometry = isometry.max(gap);
                                }
                            }
                        }
                        Ok((defect, isometry))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        });
        let (mut defect, mut isometry): (f64, f64) = (0.0, 0.0);
        for r in partial {
            let (d, i) = r?;
            defect = defect.max(d);
            isometry = isometry.max(i);
        }
        Ok(IdentitySweep {
            elements: elements.len(),
            max_n,
            pairs: elements.len() * elements.len(),
            max_defect: defect,
            max_isometry_gap: isometry,
        })
    }

    /// Largest pointwise defect of `bⁿ(st) = λ(s)bⁿ(t) + bⁿ(s)`.
    pub fn cocycle_identity_defect(&self, n: u64, s: &G::Element, t: &G::Element) -> Result<f64> {
        let st = self.group.mul(s, t);
        let lhs = self.cocycle_layer(n, &st)?.values;
        let rhs = self
            .cocycle_layer(n, t)?
            .values
            .translate(&self.group, s)
            .add(&self.cocycle_layer(n, s)?.values);
        Ok(lhs.max_abs_diff(&rhs))
    }

    /// `‖b(g)‖²` against `N(g)/4` for each element of `grid` (in increasing
    /// distance), using at least `N(g)` layers, plus the growth upper bound
    /// `2√β·e^{α/2}·d`.
    pub fn properness_report(
        &self,
        grid: &[G::Element],
        truncation: u64,
        cert: &GrowthCertificate,
    ) -> Result<ProperReport> {
        let mut rows = Vec::with_capacity(grid.len());
        for g in grid {
            let d = self.distance(g)?;
            let disjoint = disjoint_layer_count(d);
            let layers_needed = truncation.max(disjoint.unwrap_or(0));
            let v = self.cocycle_vector(g, layers_needed, cert)?;
            let norm_sq = v.x_norm.powi(2);
            let lower_bound = disjoint.map(|k| k as f64 / 4.0);

            let mut gap: f64 = 0.0;
            for n in 1..=disjoint.unwrap_or(0) {
                let phi_e = self.bump_function(n)?;
                let phi_g = phi_e.translate(&self.group, g);
                let p = 2 * n as u32;
                let lhs = v.layers[n as usize - 1].values.power_sum(p);
                let rhs = phi_g.power_sum(p) + phi_e.power_sum(p);
                gap = gap.max((lhs - rhs).abs() / rhs);
            }

            let growth_upper_bound = 2.0 * cert.beta.sqrt() * (cert.alpha / 2.0).exp() * d;
            let holds = lower_bound.is_none_or(|lb| norm_sq >= lb)
                && v.upper_bound <= growth_upper_bound
                && gap <= 1e-12;
            rows.push(ProperRow {
                distance: d,
                disjoint_layers: disjoint,
                lower_bound,
                norm_sq,
                upper_bound: v.upper_bound,
                growth_upper_bound,
                disjoint_support_gap: gap,
                holds,
            });
        }
        let bounds: Vec<f64> = rows.iter().filter_map(|r| r.lower_bound).collect();
        let monotone = bounds.windows(2).all(|w| w[0] <= w[1]);
        let passed = monotone && rows.iter().all(|r| r.holds);
        Ok(ProperReport {
            rows,
            monotone,
            passed,
        })
    }

    /// Extracts `c₁` and `c₂` over the pairs at distance `≥ 3`, and checks
    /// `‖b(g) − b(h)‖ = ‖b(h⁻¹g)‖` on every such pair.
    pub fn embedding_constants(
        &self,
        pairs: &[(G::Element, G::Element)],
        truncation: u64,
        cert: &GrowthCertificate,
    ) -> Result<EmbeddingConstants> {
        let mut cache: HashMap<G::Element, CocycleVector<G::Element>> = HashMap::new();
        let mut vector = |g: &G::Element| -> Result<CocycleVector<G::Element>> {
            if let Some(v) = cache.get(g) {
                return Ok(v.clone());
            }
            let v = self.cocycle_vector(g, truncation, cert)?;
            cache.insert(g.clone(), v.clone());
            Ok(v)
        };
        let mut rows = Vec::new();
        let mut c1 = f64::INFINITY;
        let mut c2: f64 = 0.0;
        let mut defect: f64 = 0.0;
        for (g, h) in pairs {
            let q = self.group.left_quotient(h, g);
            let d = self.distance(&q)?;
            if d < SANDWICH_THRESHOLD {
                continue;
            }
            let (bg, bh) = (vector(g)?, vector(h)?);
            let diff: Vec<CocycleLayer<G::Element>> = bg
                .layers
                .iter()
                .zip(&bh.layers)
                .map(|(a, b)| CocycleLayer {
                    n: a.n,
                    values: a.values.sub(&b.values),
                })
                .collect();
            let diff = assemble(d, diff, cert);
            let direct = vector(&q)?;
            defect = defect.max((diff.x_norm - direct.x_norm).abs());
            c1 = c1.min(diff.x_norm / d.sqrt());
            c2 = c2.max(diff.upper_bound / d);
            let lower = disjoint_layer_count(d).map_or(0.0, |k| (k as f64 / 4.0).sqrt());
            rows.push(EmbeddingRow {
                d,
                norm_lower: lower,
                norm: diff.x_norm,
                norm_plus_tail: diff.upper_bound,
            });
        }
        if rows.is_empty() {
            return Err(Error::InsufficientRange(SANDWICH_THRESHOLD));
        }
        Ok(EmbeddingConstants {
            c1,
            c2,
            c3: SANDWICH_THRESHOLD,
            alpha: cert.alpha,
            beta: cert.beta,
            n_trunc: truncation,
            pairs_used: rows.len(),
            translation_defect: defect,
            rows,
        })
    }
}

fn assemble<E: CanonicalElement>(
    distance: f64,
    layers: Vec<CocycleLayer<E>>,
    cert: &GrowthCertificate,
) -> CocycleVector<E> {
    let layer_norms: Vec<f64> = layers.iter().map(CocycleLayer::norm).collect();
    let x_sq: f64 = layer_norms.iter().map(|v| v * v).sum();
    let tail_bound = distance
        * distance
        * 2.0
        * cert.beta
        * cert.alpha.exp()
        * inverse_square_tail(layers.len() as u64);
    CocycleVector {
        distance,
        layers,
        layer_norms,
        x_norm: x_sq.sqrt(),
        tail_bound,
        upper_bound: (x_sq + tail_bound).sqrt(),
    }
}
