//! Lengths built from a subgroup `G₀` and coset representatives.
//!
//! `l̃(g)` is the least cost of a factorization
//! `g = h₀·s₁·h₁⋯s_k·h_k` with `hᵢ ∈ G₀` costing their `G₀` word length and
//! each representative `sᵢ = x_j` costing its own weight. Representatives
//! enter only in the forward direction, so `l̃` need not be symmetric; the
//! length is `l(g) = max(l̃(g), l̃(g⁻¹))`.

use std::fmt;
use std::sync::Arc;

use super::covering::{check_unit, cover_translate};
use super::search::least_cost_search;
use super::{CoveringReport, WeightedGeneratingSet, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::group::{CanonicalElement, Group};
use crate::length::LengthFunction;
use crate::weight::Weight;

type RepFn<E> = dyn Fn(u64) -> Option<E> + Send + Sync;
type RepWeightFn<W> = dyn Fn(u64) -> W + Send + Sync;
type MemberFn<E> = dyn Fn(&E) -> bool + Send + Sync;

/// Generators of `G₀` with their weights, and representatives `x₁, x₂, …`
/// with weights `≥ i` (default exactly `i`).
#[derive(Clone)]
pub struct TwoLevelSpec<E, W> {
    base: WeightedGeneratingSet<E, W>,
    reps: Arc<RepFn<E>>,
    rep_weight: Arc<RepWeightFn<W>>,
    in_base: Option<Arc<MemberFn<E>>>,
    rep_limit: Option<u64>,
}

impl<E: CanonicalElement, W: Weight> TwoLevelSpec<E, W> {
    /// `reps(i)` is `xᵢ` for `i ≥ 1`, or `None` past the last one.
    pub fn new(
        base: WeightedGeneratingSet<E, W>,
        reps: impl Fn(u64) -> Option<E> + Send + Sync + 'static,
    ) -> Self {
        TwoLevelSpec {
            base,
            reps: Arc::new(reps),
            rep_weight: Arc::new(W::from_index),
            in_base: None,
            rep_limit: None,
        }
    }

    /// Membership test for `G₀`, used to reject representatives inside it.
    pub fn with_base_membership(
        mut self,
        in_base: impl Fn(&E) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.in_base = Some(Arc::new(in_base));
        self
    }

    /// Keeps only `x₁, …, x_limit`.
    pub fn with_rep_limit(mut self, limit: u64) -> Self {
        self.rep_limit = Some(limit);
        self
    }

    pub fn base(&self) -> &WeightedGeneratingSet<E, W> {
        &self.base
    }

    pub fn rep(&self, i: u64) -> Option<E> {
        if i == 0 || self.rep_limit.is_some_and(|l| i > l) {
            return None;
        }
        (self.reps)(i)
    }

    pub fn rep_weight(&self, i: u64) -> W {
        (self.rep_weight)(i)
    }

    fn with_weights<V: Weight>(
        &self,
        weight: impl Fn(u64) -> V + Send + Sync + 'static,
        base: WeightedGeneratingSet<E, V>,
    ) -> TwoLevelSpec<E, V> {
        TwoLevelSpec {
            base,
            reps: self.reps.clone(),
            rep_weight: Arc::new(weight),
            in_base: self.in_base.clone(),
            rep_limit: self.rep_limit,
        }
    }

    /// Directed edge list: `G₀` generators in both directions, then the
    /// representatives of weight `≤ cap` in the forward direction only.
    /// Representative weights are at least their index, so indices above
    /// `cap` are never needed.
    fn edges<G: Group<Element = E>>(&self, group: &G, cap: W) -> Result<Vec<(E, W)>> {
        let mut edges = self.base.entries_up_to(group, cap)?;
        let top = cap.floor_index().max(0) as u64;
        for i in 1..=top {
            let Some(x) = self.rep(i) else { break };
            let w = self.rep_weight(i);
            if !w.is_valid() || w < W::from_index(1) {
                return Err(Error::NonPositiveWeight(format!(
                    "representative x{i} has weight {w} < 1"
                )));
            }
            if group.is_identity(&x) || self.in_base.as_ref().is_some_and(|f| f(&x)) {
                return Err(Error::InvalidArgument(format!(
                    "representative x{i} = {x:?} lies in the base subgroup"
                )));
            }
            if w <= cap {
                edges.push((x, w));
            }
        }
        Ok(edges)
    }
}

impl<E, W> fmt::Debug for TwoLevelSpec<E, W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoLevelSpec")
            .field("rep_limit", &self.rep_limit)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub struct TwoLevelMetric<G: Group, W> {
    group: G,
    spec: TwoLevelSpec<G::Element, W>,
    budget: usize,
}

impl<G, W> TwoLevelMetric<G, W>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    pub fn new(group: G, spec: TwoLevelSpec<G::Element, W>) -> Self {
        TwoLevelMetric {
            group,
            spec,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn spec(&self) -> &TwoLevelSpec<G::Element, W> {
        &self.spec
    }

    /// `l̃(g)` if it is at most `cap`.
    pub fn tilde_length(&self, g: &G::Element, cap: W) -> Result<Option<W>> {
        if self.group.is_identity(g) {
            return Ok(Some(W::zero()));
        }
        if !cap.is_valid() || cap <= W::zero() {
            return Err(Error::InvalidArgument(format!(
                "cost cap must be positive, got {cap}"
            )));
        }
        let edges = self.spec.edges(&self.group, cap)?;
        let tree = least_cost_search(&self.group, &edges, cap, self.budget, Some(g))?;
        Ok(tree.settled.get(g).map(|n| n.cost))
    }

    /// `max(l̃(g), l̃(g⁻¹))` if it is at most `cap`.
    pub fn two_level_length(&self, g: &G::Element, cap: W) -> Result<Option<W>> {
        let Some(a) = self.tilde_length(g, cap)? else {
            return Ok(None);
        };
        let Some(b) = self.tilde_length(&self.group.inv(g), cap)? else {
            return Ok(None);
        };
        Ok(Some(if a >= b { a } else { b }))
    }

    /// The length as a [`LengthFunction`], doubling the cap from `start`
    /// until the value is found.
    pub fn length_function(&self, start: W) -> LengthFunction<G::Element, W> {
        let metric = self.clone();
        let start = if start > W::zero() {
            start
        } else {
            W::from_index(1)
        };
        LengthFunction::new(
            "two-level length",
            "subgroup word length plus coset representatives",
            move |g| {
                let mut cap = start;
                loop {
                    if let Some(l) = metric.two_level_length(g, cap)? {
                        return Ok(l);
                    }
                    cap = cap + cap;
                }
            },
        )
    }
}

/// Replaces the representative weights by `wᵢ + log₂ p(i)`, where `p(i)` is
/// the size of a greedy cover of `U·xᵢ` by left translates of `U`. Covers for
/// `i ≤ report_upto` are returned; later ones are computed on demand.
#[allow(clippy::type_complexity)]
pub fn starred_weights<G, W>(
    group: &G,
    spec: &TwoLevelSpec<G::Element, W>,
    unit: &[G::Element],
    report_upto: u64,
) -> Result<(
    TwoLevelSpec<G::Element, f64>,
    Vec<CoveringReport<G::Element>>,
)>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    check_unit(group, unit)?;
    let mut reports = Vec::new();
    for i in 1..=report_upto {
        let Some(x) = spec.rep(i) else { break };
        reports.push(cover_translate(group, unit, &x, i)?);
    }
    let known: Vec<usize> = reports.iter().map(|r| r.covering_number).collect();
    let (g, u, s) = (group.clone(), unit.to_vec(), spec.clone());
    let weight = move |i: u64| {
        let p = match known.get(i as usize - 1) {
            Some(&p) => p,
            None => s
                .rep(i)
                .and_then(|x| cover_translate(&g, &u, &x, i).ok())
                // the centers U·xᵢ themselves always form a cover
                .map_or(u.len(), |r| r.covering_number),
        };
        s.rep_weight(i).to_f64() + (p as f64).log2()
    };
    let base = spec.base.map_weights(|w| w.to_f64());
    Ok((spec.with_weights(weight, base), reports))
}
