//! Length functions, the left-invariant metrics they induce, and sampled
//! axiom validators.
//!
//! A length function `l` satisfies `l(g) = 0 ⇔ g = e`, `l(g) = l(g⁻¹)` and
//! `l(gh) ≤ l(g) + l(h)`. It induces the left-invariant metric
//! `d(x, y) = l(y⁻¹x)`, and every left-invariant metric arises this way from
//! `l(x) = d(x, e)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::weight::Weight;

type LengthEval<E, W> = dyn Fn(&E) -> Result<W> + Send + Sync;
type MetricEval<E, W> = dyn Fn(&E, &E) -> Result<W> + Send + Sync;

/// A named evaluator `G → [0, ∞)`.
#[derive(Clone)]
pub struct LengthFunction<E, W> {
    name: String,
    source: String,
    eval: Arc<LengthEval<E, W>>,
}

impl<E, W: Weight> LengthFunction<E, W> {
    pub fn new(
        name: impl Into<String>,
        source: impl Into<String>,
        eval: impl Fn(&E) -> Result<W> + Send + Sync + 'static,
    ) -> Self {
        LengthFunction {
            name: name.into(),
            source: source.into(),
            eval: Arc::new(eval),
        }
    }

    /// Wraps an infallible evaluator.
    pub fn from_fn(
        name: impl Into<String>,
        source: impl Into<String>,
        eval: impl Fn(&E) -> W + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, source, move |g| Ok(eval(g)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, g: &E) -> Result<W> {
        (self.eval)(g)
    }
}

impl<E, W> fmt::Debug for LengthFunction<E, W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LengthFunction")
            .field("name", &self.name)
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

/// A named evaluator `G × G → [0, ∞)`.
#[derive(Clone)]
pub struct MetricView<E, W> {
    name: String,
    eval: Arc<MetricEval<E, W>>,
}

impl<E, W: Weight> MetricView<E, W> {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&E, &E) -> Result<W> + Send + Sync + 'static,
    ) -> Self {
        MetricView {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn from_fn(
        name: impl Into<String>,
        eval: impl Fn(&E, &E) -> W + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, move |x, y| Ok(eval(x, y)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dist(&self, x: &E, y: &E) -> Result<W> {
        (self.eval)(x, y)
    }

    /// Distance as `f64`, for envelopes and norms.
    pub fn dist_f64(&self, x: &E, y: &E) -> Result<f64> {
        self.dist(x, y).map(Weight::to_f64)
    }
}

impl<E, W> fmt::Debug for MetricView<E, W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricView")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// `d(x, y) = l(y⁻¹x)`. Left invariant by construction.
pub fn metric_from_length<G: Group, W: Weight>(
    group: &G,
    length: &LengthFunction<G::Element, W>,
) -> MetricView<G::Element, W> {
    let group = group.clone();
    let length = length.clone();
    MetricView::new(format!("metric({})", length.name()), move |x, y| {
        length.eval(&group.left_quotient(y, x))
    })
}

/// `l(x) = d(x, e)`.
pub fn length_from_metric<G: Group, W: Weight>(
    group: &G,
    metric: &MetricView<G::Element, W>,
) -> LengthFunction<G::Element, W> {
    let e = group.identity();
    let metric = metric.clone();
    LengthFunction::new(
        format!("length({})", metric.name()),
        "distance to identity",
        move |x| metric.dist(x, &e),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// `l(e) = 0`.
    IdentityZero,
    /// `l(g) > 0` for `g ≠ e`.
    Positivity,
    /// `l(g) = l(g⁻¹)`.
    InverseSymmetry,
    /// `l(gh) ≤ l(g) + l(h)`.
    Subadditivity,
    /// `d(x, x) = 0`.
    ZeroDiagonal,
    /// `d(x, y) > 0` for `x ≠ y`.
    Indiscernibles,
    /// `d(x, y) = d(y, x)`.
    Symmetry,
    /// `d(x, z) ≤ d(x, y) + d(y, z)`.
    Triangle,
    /// `d(gx, gy) = d(x, y)`.
    LeftInvariance,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::IdentityZero => "l(e) = 0",
            Axiom::Positivity => "l(g) > 0 for g != e",
            Axiom::InverseSymmetry => "inverse symmetry l(g) = l(g^-1)",
            Axiom::Subadditivity => "subadditivity l(gh) <= l(g) + l(h)",
            Axiom::ZeroDiagonal => "d(x, x) = 0",
            Axiom::Indiscernibles => "identity of indiscernibles",
            Axiom::Symmetry => "symmetry d(x, y) = d(y, x)",
            Axiom::Triangle => "triangle inequality",
            Axiom::LeftInvariance => "left invariance d(gx, gy) = d(x, y)",
        };
        f.write_str(s)
    }
}

/// The worst instance of a failed check: `lhs` should have been related to
/// `rhs` but was not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub elements: Vec<String>,
    pub lhs: f64,
    pub rhs: f64,
}

impl Violation {
    fn excess(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    pub worst: Option<Violation>,
}

impl AxiomCheck {
    fn new(axiom: Axiom) -> Self {
        AxiomCheck {
            axiom,
            passed: true,
            checked: 0,
            violations: 0,
            worst: None,
        }
    }

    fn record(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.checked += 1;
        if ok {
            return;
        }
        self.passed = false;
        self.violations += 1;
        let v = violation();
        if self.worst.as_ref().is_none_or(|w| v.excess() > w.excess()) {
            self.worst = Some(v);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub exact: bool,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failed_axioms(&self) -> Vec<Axiom> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.axiom)
            .collect()
    }
}

fn label<E: fmt::Debug>(items: &[&E]) -> Vec<String> {
    items.iter().map(|e| format!("{e:?}")).collect()
}

/// Checks the three length axioms on `sample` (and on `e`).
///
/// Subadditivity is checked on every ordered pair of the sample, so the cost
/// is quadratic in its size. Integer and rational lengths compare exactly;
/// float lengths within `1e-9`.
pub fn validate_length_axioms<G: Group, W: Weight>(
    group: &G,
    length: &LengthFunction<G::Element, W>,
    sample: &[G::Element],
) -> Result<ValidationReport> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let e = group.identity();
    let mut identity = AxiomCheck::new(Axiom::IdentityZero);
    let mut positivity = AxiomCheck::new(Axiom::Positivity);
    let mut symmetry = AxiomCheck::new(Axiom::InverseSymmetry);
    let mut subadditivity = AxiomCheck::new(Axiom::Subadditivity);

    let le = length.eval(&e)?;
    identity.record(le.approx_eq(W::zero()), || Violation {
        elements: label(&[&e]),
        lhs: le.to_f64(),
        rhs: 0.0,
    });

    let values = sample
        .iter()
        .map(|g| length.eval(g))
        .collect::<Result<Vec<W>>>()?;

    for (g, &lg) in sample.iter().zip(&values) {
        if !group.is_identity(g) {
            positivity.record(lg > W::zero(), || Violation {
                elements: label(&[g]),
                lhs: lg.to_f64(),
                rhs: 0.0,
            });
        }
        let lgi = length.eval(&group.inv(g))?;
        symmetry.record(lg.approx_eq(lgi), || Violation {
            elements: label(&[g]),
            lhs: lg.to_f64(),
            rhs: lgi.to_f64(),
        });
    }

    for (g, &lg) in sample.iter().zip(&values) {
        for (h, &lh) in sample.iter().zip(&values) {
            let lgh = length.eval(&group.mul(g, h))?;
            subadditivity.record(lgh.approx_le(lg + lh), || Violation {
                elements: label(&[g, h]),
                lhs: lgh.to_f64(),
                rhs: (lg + lh).to_f64(),
            });
        }
    }

    Ok(ValidationReport {
        subject: length.name().to_string(),
        exact: W::EXACT,
        checks: vec![identity, positivity, symmetry, subadditivity],
    })
}

/// Checks the metric axioms and left invariance on `sample`.
///
/// Triangle and left-invariance checks run over all ordered triples, so the
/// cost is cubic in the sample size.
pub fn validate_metric_axioms<G: Group, W: Weight>(
    group: &G,
    metric: &MetricView<G::Element, W>,
    sample: &[G::Element],
) -> Result<ValidationReport> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sample.len();
    let mut table = Vec::with_capacity(n * n);
    for x in sample {
        for y in sample {
            table.push(metric.dist(x, y)?);
        }
    }
    let d = |i: usize, j: usize| table[i * n + j];

    let mut diagonal = AxiomCheck::new(Axiom::ZeroDiagonal);
    let mut indiscernible = AxiomCheck::new(Axiom::Indiscernibles);
    let mut symmetry = AxiomCheck::new(Axiom::Symmetry);
    let mut triangle = AxiomCheck::new(Axiom::Triangle);
    let mut invariance = AxiomCheck::new(Axiom::LeftInvariance);

    for i in 0..n {
        for j in 0..n {
            let dij = d(i, j);
            if i == j || sample[i] == sample[j] {
                diagonal.record(dij.approx_eq(W::zero()), || Violation {
                    elements: label(&[&sample[i], &sample[j]]),
                    lhs: dij.to_f64(),
                    rhs: 0.0,
                });
            } else {
                indiscernible.record(dij > W::zero(), || Violation {
                    elements: label(&[&sample[i], &sample[j]]),
                    lhs: dij.to_f64(),
                    rhs: 0.0,
                });
            }
            let dji = d(j, i);
            symmetry.record(dij.approx_eq(dji), || Violation {
                elements: label(&[&sample[i], &sample[j]]),
                lhs: dij.to_f64(),
                rhs: dji.to_f64(),
            });
            for k in 0..n {
                let via = dij + d(j, k);
                let direct = d(i, k);
                triangle.record(direct.approx_le(via), || Violation {
                    elements: label(&[&sample[i], &sample[j], &sample[k]]),
                    lhs: direct.to_f64(),
                    rhs: via.to_f64(),
                });
            }
        }
    }

    for g in sample {
        for i in 0..n {
            let gx = group.mul(g, &sample[i]);
            for j in 0..n {
                let moved = metric.dist(&gx, &group.mul(g, &sample[j]))?;
                let dij = d(i, j);
                invariance.record(moved.approx_eq(dij), || Violation {
                    elements: label(&[g, &sample[i], &sample[j]]),
                    lhs: moved.to_f64(),
                    rhs: dij.to_f64(),
                });
            }
        }
    }

    Ok(ValidationReport {
        subject: metric.name().to_string(),
        exact: W::EXACT,
        checks: vec![diagonal, indiscernible, symmetry, triangle, invariance],
    })
}
