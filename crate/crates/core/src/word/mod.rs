//! Weighted word metrics on countable groups.
//!
//! A symmetric weighted generating set `S` defines the length
//! `l(g) = inf { Σ w(gᵢ) : g = g₁⋯g_m, gᵢ ∈ S }`, computed here as a
//! least-cost path in the Cayley graph. Every query carries a cost cap:
//! positive weights with finite sublevel sets make each capped search
//! finite, and results are exact for values up to the cap.

mod census;
mod compositions;
mod covering;
mod regularized;
pub(crate) mod search;
mod two_level;

pub use census::{
    growth_certificate, verify_3n_bound, BallCensus, CensusRow, GrowthCertificate, ThreeNReport,
    ThreeNRow,
};
pub use compositions::{count_compositions, enumerate_compositions};
pub use covering::{greedy_left_cover, unit_square_cover, CoveringReport};
pub use regularized::{
    BallInclusionReport, BallInclusionRow, MinimalFactorization, MinimalFactorizations,
    RegularizedLength, RegularizedMetric, UnitBall,
};
pub use two_level::{starred_weights, TwoLevelMetric, TwoLevelSpec};

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::group::{CanonicalElement, FinitelyGenerated, Group};
use crate::length::{metric_from_length, LengthFunction, MetricView};
use crate::weight::Weight;
use search::least_cost_search;

/// Default cap on the number of elements a single search may discover.
/// The CLI overrides it from `COARSE_METRIC_BUDGET`.
pub const DEFAULT_BUDGET: usize = 4_000_000;

type GradedFn<E> = dyn Fn(u64) -> Option<E> + Send + Sync;

/// An infinite (or truncated) generating sequence `x₁, x₂, …` where `xₙ`
/// and `xₙ⁻¹` both get weight `n`. Only entries below the current budget
/// are ever materialized.
#[derive(Clone)]
pub struct GradedScheme<E> {
    name: String,
    generator: Arc<GradedFn<E>>,
    limit: Option<u64>,
}

impl<E> GradedScheme<E> {
    /// `generator(n)` returns `xₙ` for `n ≥ 1`, or `None` past the end.
    pub fn new(
        name: impl Into<String>,
        generator: impl Fn(u64) -> Option<E> + Send + Sync + 'static,
    ) -> Self {
        GradedScheme {
            name: name.into(),
            generator: Arc::new(generator),
            limit: None,
        }
    }

    /// Keeps only `x₁, …, x_limit`.
    pub fn truncated(mut self, limit: u64) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn element(&self, n: u64) -> Option<E> {
        if n == 0 || self.limit.is_some_and(|l| n > l) {
            return None;
        }
        (self.generator)(n)
    }
}

impl<E> fmt::Debug for GradedScheme<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedScheme")
            .field("name", &self.name)
            .field("limit", &self.limit)
            .finish_non_exhaustive()
    }
}

/// A symmetric, identity-free set of weighted generators, given explicitly,
/// by a graded scheme, or both.
#[derive(Clone, Debug)]
pub struct WeightedGeneratingSet<E, W> {
    entries: Vec<(E, W)>,
    graded: Option<GradedScheme<E>>,
}

impl<E: CanonicalElement, W: Weight> WeightedGeneratingSet<E, W> {
    /// Validated explicit set. With `symmetric_closure`, missing inverses are
    /// added with the weight of their partner.
    pub fn explicit<G>(group: &G, entries: Vec<(E, W)>, symmetric_closure: bool) -> Result<Self>
    where
        G: Group<Element = E>,
    {
        let mut out: Vec<(E, W)> = Vec::with_capacity(entries.len());
        for (s, w) in entries {
            check_entry(group, &s, w)?;
            match out.iter().find(|(t, _)| *t == s) {
                Some((_, v)) if *v == w => continue,
                Some((_, v)) => {
                    return Err(Error::InvalidArgument(format!(
                        "generator {s:?} listed with weights {v} and {w}"
                    )))
                }
                None => out.push((s, w)),
            }
        }
        if symmetric_closure {
            let missing: Vec<(E, W)> = out
                .iter()
                .map(|(s, w)| (group.inv(s), *w))
                .filter(|(si, _)| !out.iter().any(|(t, _)| t == si))
                .collect();
            for m in missing {
                if !out.iter().any(|(t, _)| *t == m.0) {
                    out.push(m);
                }
            }
        }
        for (s, w) in &out {
            let si = group.inv(s);
            match out.iter().find(|(t, _)| *t == si) {
                Some((_, v)) if v == w => {}
                Some((_, v)) => {
                    return Err(Error::NonSymmetricGeneratingSet(format!(
                        "weight({s:?}) = {w} but weight({si:?}) = {v}"
                    )))
                }
                None => {
                    return Err(Error::NonSymmetricGeneratingSet(format!(
                        "{s:?} present but its inverse {si:?} is missing"
                    )))
                }
            }
        }
        Ok(WeightedGeneratingSet {
            entries: out,
            graded: None,
        })
    }

    /// Entries taken as given, without the symmetry check. Word lengths over
    /// such a set need not satisfy the length axioms; used for directed
    /// searches and for exercising the validators.
    pub fn unchecked<G>(group: &G, entries: Vec<(E, W)>) -> Result<Self>
    where
        G: Group<Element = E>,
    {
        for (s, w) in &entries {
            check_entry(group, s, *w)?;
        }
        Ok(WeightedGeneratingSet {
            entries,
            graded: None,
        })
    }

    /// The group's standard generators, all with weight `weight`.
    pub fn uniform<G>(group: &G, weight: W) -> Result<Self>
    where
        G: FinitelyGenerated<Element = E>,
    {
        let entries = group
            .standard_generators()
            .into_iter()
            .map(|s| (s, weight))
            .collect();
        Self::explicit(group, entries, true)
    }

    /// Generators `xₙ^{±1}` with weight `n`.
    pub fn graded(scheme: GradedScheme<E>) -> Self {
        WeightedGeneratingSet {
            entries: Vec::new(),
            graded: Some(scheme),
        }
    }

    pub fn entries(&self) -> &[(E, W)] {
        &self.entries
    }

    pub fn graded_scheme(&self) -> Option<&GradedScheme<E>> {
        self.graded.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.graded.as_ref().is_none_or(|g| g.limit.is_some())
    }

    /// Adds one generator (and its inverse) to a copy of the set.
    pub fn with_generator<G>(&self, group: &G, s: E, w: W) -> Result<Self>
    where
        G: Group<Element = E>,
    {
        let mut entries = self.entries.clone();
        entries.push((group.inv(&s), w));
        entries.push((s, w));
        let mut out = Self::explicit(group, entries, false)?;
        out.graded = self.graded.clone();
        Ok(out)
    }

    /// All entries of weight `≤ cap`, explicit ones first, then `x₁^{±1}`,
    /// `x₂^{±1}`, … from the graded scheme.
    pub fn entries_up_to<G>(&self, group: &G, cap: W) -> Result<Vec<(E, W)>>
    where
        G: Group<Element = E>,
    {
        let mut out: Vec<(E, W)> = self
            .entries
            .iter()
            .filter(|(_, w)| *w <= cap)
            .cloned()
            .collect();
        if let Some(scheme) = &self.graded {
            let top = cap.floor_index().max(0) as u64;
            for n in 1..=top {
                let Some(x) = scheme.element(n) else { break };
                if group.is_identity(&x) {
                    return Err(Error::IdentityGenerator);
                }
                let w = W::from_index(n);
                let xi = group.inv(&x);
                let self_inverse = xi == x;
                out.push((x, w));
                if !self_inverse {
                    out.push((xi, w));
                }
            }
        }
        Ok(out)
    }

    pub fn map_weights<V: Weight>(&self, f: impl Fn(W) -> V) -> WeightedGeneratingSet<E, V> {
        WeightedGeneratingSet {
            entries: self
                .entries
                .iter()
                .map(|(s, w)| (s.clone(), f(*w)))
                .collect(),
            graded: self.graded.clone(),
        }
    }
}

fn check_entry<G: Group, W: Weight>(group: &G, s: &G::Element, w: W) -> Result<()> {
    if group.is_identity(s) {
        return Err(Error::IdentityGenerator);
    }
    if !w.is_valid() || w <= W::zero() {
        return Err(Error::NonPositiveWeight(format!("{s:?} has weight {w}")));
    }
    Ok(())
}

/// All elements of a closed ball with their lengths, in order of increasing
/// length (ties in discovery order).
#[derive(Debug, Clone)]
pub struct BallTable<E, W> {
    radius: W,
    lengths: IndexMap<E, W>,
}

impl<E: CanonicalElement, W: Weight> BallTable<E, W> {
    pub fn new(radius: W, lengths: IndexMap<E, W>) -> Self {
        BallTable { radius, lengths }
    }

    pub fn radius(&self) -> W {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Length of `g` if `l(g) ≤ radius`, `None` otherwise.
    pub fn get(&self, g: &E) -> Option<W> {
        self.lengths.get(g).copied()
    }

    pub fn contains(&self, g: &E) -> bool {
        self.lengths.contains_key(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, W)> {
        self.lengths.iter().map(|(e, w)| (e, *w))
    }

    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.lengths.keys()
    }

    /// `D(e, r) = { g : l(g) ≤ r }`, for `r ≤ radius`.
    pub fn closed_ball(&self, r: W) -> impl Iterator<Item = &E> {
        self.lengths
            .iter()
            .filter(move |(_, w)| **w <= r)
            .map(|(e, _)| e)
    }

    /// `B(e, r) = { g : l(g) < r }`, for `r ≤ radius`.
    pub fn open_ball(&self, r: W) -> impl Iterator<Item = &E> {
        self.lengths
            .iter()
            .filter(move |(_, w)| **w < r)
            .map(|(e, _)| e)
    }

    pub fn sphere(&self, r: W) -> impl Iterator<Item = &E> {
        self.lengths
            .iter()
            .filter(move |(_, w)| **w == r)
            .map(|(e, _)| e)
    }
}

/// A group together with a weighted generating set.
#[derive(Clone, Debug)]
pub struct WordMetric<G: Group, W> {
    group: G,
    gens: WeightedGeneratingSet<G::Element, W>,
    budget: usize,
}

impl<G, W> WordMetric<G, W>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    pub fn new(group: G, gens: WeightedGeneratingSet<G::Element, W>) -> Self {
        WordMetric {
            group,
            gens,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Maximum number of elements one search may discover.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn generators(&self) -> &WeightedGeneratingSet<G::Element, W> {
        &self.gens
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn check_cap(cap: W) -> Result<()> {
        if !cap.is_valid() || cap <= W::zero() {
            return Err(Error::InvalidArgument(format!(
                "cost cap must be positive, got {cap}"
            )));
        }
        Ok(())
    }

    /// The word length of `g` if it is at most `cap`; `None` means the
    /// infimum exceeds the cap.
    pub fn word_length(&self, g: &G::Element, cap: W) -> Result<Option<W>> {
        if self.group.is_identity(g) {
            return Ok(Some(W::zero()));
        }
        Self::check_cap(cap)?;
        let edges = self.gens.entries_up_to(&self.group, cap)?;
        let tree = least_cost_search(&self.group, &edges, cap, self.budget, Some(g))?;
        Ok(tree.settled.get(g).map(|n| n.cost))
    }

    /// A cheapest factorization of `g` (fewest factors among cheapest, then
    /// earliest generators), if its cost is at most `cap`.
    pub fn factorization(&self, g: &G::Element, cap: W) -> Result<Option<Vec<G::Element>>> {
        if self.group.is_identity(g) {
            return Ok(Some(Vec::new()));
        }
        Self::check_cap(cap)?;
        let edges = self.gens.entries_up_to(&self.group, cap)?;
        let tree = least_cost_search(&self.group, &edges, cap, self.budget, Some(g))?;
        Ok(tree
            .path_edges(g)
            .map(|p| p.into_iter().map(|i| edges[i].0.clone()).collect()))
    }

    /// `D(e, radius)`, every element of length at most `radius`.
    pub fn enumerate_ball(&self, radius: W) -> Result<BallTable<G::Element, W>> {
        if radius < W::zero() {
            return Err(Error::InvalidArgument(format!(
                "radius must be non-negative, got {radius}"
            )));
        }
        if radius == W::zero() {
            let mut lengths = IndexMap::new();
            lengths.insert(self.group.identity(), W::zero());
            return Ok(BallTable::new(radius, lengths));
        }
        let edges = self.gens.entries_up_to(&self.group, radius)?;
        let tree = least_cost_search(&self.group, &edges, radius, self.budget, None)?;
        let lengths = tree.settled.into_iter().map(|(e, n)| (e, n.cost)).collect();
        Ok(BallTable::new(radius, lengths))
    }

    /// Exact length with no caller-supplied cap: doubles the cap from
    /// `start` until `g` is reached or the budget runs out.
    pub fn exact_length(&self, g: &G::Element, start: W) -> Result<W> {
        let mut cap = if start > W::zero() {
            start
        } else {
            W::from_index(1)
        };
        loop {
            if let Some(l) = self.word_length(g, cap)? {
                return Ok(l);
            }
            cap = cap + cap;
        }
    }

    /// The word length as a [`LengthFunction`], backed by a precomputed ball
    /// of radius `table_radius` with on-demand search outside it.
    pub fn length_function(&self, table_radius: W) -> Result<LengthFunction<G::Element, W>> {
        let table = Arc::new(self.enumerate_ball(table_radius)?);
        let metric = self.clone();
        Ok(LengthFunction::new(
            format!("word length ({} generators)", self.gens.entries().len()),
            "least-cost path in weighted Cayley graph",
            move |g| match table.get(g) {
                Some(l) => Ok(l),
                None => metric.exact_length(g, table.radius() + table.radius()),
            },
        ))
    }

    /// `d(x, y) = l(y⁻¹x)` for the word length.
    pub fn metric_view(&self, table_radius: W) -> Result<MetricView<G::Element, W>> {
        Ok(metric_from_length(
            &self.group,
            &self.length_function(table_radius)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FreeGroup, FreeWord, IntegerLattice, LatticePoint};

    fn z_graded() -> WordMetric<IntegerLattice, i64> {
        let scheme = GradedScheme::new("Z graded", |n| Some(LatticePoint(vec![n as i64])));
        WordMetric::new(
            IntegerLattice::new(1),
            WeightedGeneratingSet::graded(scheme),
        )
    }

    #[test]
    fn identity_has_length_zero() {
        let m = z_graded();
        assert_eq!(m.word_length(&LatticePoint(vec![0]), 1).unwrap(), Some(0));
    }

    #[test]
    fn cap_excludes_far_elements() {
        let f2 = FreeGroup::new(2);
        let m = WordMetric::new(f2, WeightedGeneratingSet::uniform(&f2, 1i64).unwrap());
        let g = FreeWord::reduce([1, 2, -1]);
        assert_eq!(m.word_length(&g, 2).unwrap(), None);
        assert_eq!(m.word_length(&g, 3).unwrap(), Some(3));
        assert_eq!(m.factorization(&g, 3).unwrap().unwrap().len(), 3);
    }

    #[test]
    fn rejects_asymmetric_weights() {
        let z = IntegerLattice::new(1);
        let err = WeightedGeneratingSet::explicit(
            &z,
            vec![(LatticePoint(vec![1]), 1i64), (LatticePoint(vec![-1]), 2)],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonSymmetricGeneratingSet(_)));
    }

    #[test]
    fn rejects_missing_inverse_without_closure() {
        let z = IntegerLattice::new(1);
        let gens = vec![(LatticePoint(vec![1]), 1i64)];
        assert!(matches!(
            WeightedGeneratingSet::explicit(&z, gens.clone(), false),
            Err(Error::NonSymmetricGeneratingSet(_))
        ));
        let closed = WeightedGeneratingSet::explicit(&z, gens, true).unwrap();
        assert_eq!(closed.entries().len(), 2);
    }

    #[test]
    fn rejects_identity_and_nonpositive_weights() {
        let z = IntegerLattice::new(1);
        assert_eq!(
            WeightedGeneratingSet::explicit(&z, vec![(LatticePoint(vec![0]), 1i64)], true)
                .unwrap_err(),
            Error::IdentityGenerator
        );
        assert!(matches!(
            WeightedGeneratingSet::explicit(&z, vec![(LatticePoint(vec![1]), 0i64)], true),
            Err(Error::NonPositiveWeight(_))
        ));
        assert!(matches!(
            WeightedGeneratingSet::explicit(&z, vec![(LatticePoint(vec![1]), f64::NAN)], true),
            Err(Error::NonPositiveWeight(_))
        ));
    }

    #[test]
    fn nonpositive_cap_is_rejected() {
        let m = z_graded();
        assert!(matches!(
            m.word_length(&LatticePoint(vec![3]), 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn graded_entries_materialize_lazily() {
        let m = z_graded();
        let entries = m.generators().entries_up_to(m.group(), 3).unwrap();
        let weights: Vec<i64> = entries.iter().map(|(_, w)| *w).collect();
        assert_eq!(weights, vec![1, 1, 2, 2, 3, 3]);
        assert!(!m.generators().is_finite());
    }

    #[test]
    fn length_function_falls_back_outside_table() {
        let m = z_graded();
        let l = m.length_function(3).unwrap();
        assert_eq!(l.eval(&LatticePoint(vec![2])).unwrap(), 2);
        assert_eq!(l.eval(&LatticePoint(vec![-11])).unwrap(), 11);
    }

    #[test]
    fn ball_table_views() {
        let z = IntegerLattice::new(1);
        let m = WordMetric::new(z, WeightedGeneratingSet::uniform(&z, 1i64).unwrap());
        let t = m.enumerate_ball(3).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.open_ball(2).count(), 3);
        assert_eq!(t.closed_ball(2).count(), 5);
        assert_eq!(t.sphere(3).count(), 2);
        assert_eq!(m.enumerate_ball(0).unwrap().len(), 1);
    }
}
