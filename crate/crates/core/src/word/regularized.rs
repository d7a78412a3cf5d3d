//! The length obtained from a unit ball `U` with small lengths `l_δ`:
//! `l(g) = inf { Σ l_δ(gᵢ) : g = g₁⋯g_k, gᵢ ∈ U }`.
//!
//! It agrees with `l_δ` on `U`, dominates it everywhere, and each open ball
//! `B(e, n)` sits inside the product set `U^{2n-1}`: a factorization with the
//! fewest factors among those of cost `< n` has adjacent pairs of total
//! length `≥ 1`.

use indexmap::{IndexMap, IndexSet};
use serde::Serialize;

use super::{BallTable, WeightedGeneratingSet, WordMetric};
use crate::error::{Error, Result};
use crate::group::{CanonicalElement, Group};
use crate::weight::Weight;

/// A symmetric finite set containing `e`, with `l_δ(e) = 0` and
/// `l_δ(u) ∈ (0, 1)` otherwise.
#[derive(Debug, Clone)]
pub struct UnitBall<E, W> {
    entries: Vec<(E, W)>,
}

impl<E: CanonicalElement, W: Weight> UnitBall<E, W> {
    /// The identity may be omitted; it is added with length zero.
    pub fn new<G: Group<Element = E>>(group: &G, entries: Vec<(E, W)>) -> Result<Self> {
        let one = W::from_index(1);
        let mut out: Vec<(E, W)> = vec![(group.identity(), W::zero())];
        for (u, w) in entries {
            if group.is_identity(&u) {
                if w != W::zero() {
                    return Err(Error::InvalidArgument(format!(
                        "identity must have length 0, got {w}"
                    )));
                }
                continue;
            }
            if !w.is_valid() || w <= W::zero() || w >= one {
                return Err(Error::NonPositiveWeight(format!(
                    "{u:?} has length {w}, expected a value in (0, 1)"
                )));
            }
            match out.iter().find(|(v, _)| *v == u) {
                Some((_, x)) if *x == w => {}
                Some((_, x)) => {
                    return Err(Error::InvalidArgument(format!(
                        "{u:?} listed with lengths {x} and {w}"
                    )))
                }
                None => out.push((u, w)),
            }
        }
        for (u, w) in &out {
            let ui = group.inv(u);
            match out.iter().find(|(v, _)| *v == ui) {
                Some((_, x)) if x == w => {}
                _ => {
                    return Err(Error::NonSymmetricGeneratingSet(format!(
                        "{u:?} has length {w} but {ui:?} does not match"
                    )))
                }
            }
        }
        Ok(UnitBall { entries: out })
    }

    /// The elements of `U`, identity first.
    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.entries.iter().map(|(u, _)| u)
    }

    pub fn entries(&self) -> &[(E, W)] {
        &self.entries
    }

    pub fn delta_length(&self, u: &E) -> Option<W> {
        self.entries.iter().find(|(v, _)| v == u).map(|(_, w)| *w)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn non_identity(&self) -> &[(E, W)] {
        &self.entries[1..]
    }
}

/// A value of the regularized length with a cheapest factorization, the
/// fewest factors among cheapest ones.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedLength<E, W> {
    pub value: W,
    pub factors: Vec<E>,
}

#[derive(Debug, Clone)]
pub struct RegularizedMetric<G: Group, W> {
    unit: UnitBall<G::Element, W>,
    words: WordMetric<G, W>,
}

/// Per element of an open ball, the fewest factors from `U` in a
/// factorization of cost `< bound`, with one such factorization.
#[derive(Debug, Clone)]
pub struct MinimalFactorization<E, W> {
    pub cost: W,
    pub factors: Vec<E>,
}

pub type MinimalFactorizations<E, W> = IndexMap<E, MinimalFactorization<E, W>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallInclusionRow {
    pub n: u64,
    pub ball_size: usize,
    pub product_size: usize,
    pub max_factors: usize,
    pub contained: bool,
    pub adjacent_pairs_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallInclusionReport {
    pub rows: Vec<BallInclusionRow>,
    pub passed: bool,
}

impl<G, W> RegularizedMetric<G, W>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    pub fn new(group: G, unit: UnitBall<G::Element, W>) -> Result<Self> {
        let gens = WeightedGeneratingSet::explicit(&group, unit.non_identity().to_vec(), false)?;
        Ok(RegularizedMetric {
            unit,
            words: WordMetric::new(group, gens),
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.words = self.words.with_budget(budget);
        self
    }

    pub fn unit(&self) -> &UnitBall<G::Element, W> {
        &self.unit
    }

    pub fn group(&self) -> &G {
        self.words.group()
    }

    /// The underlying word metric over `U ∖ {e}`.
    pub fn word_metric(&self) -> &WordMetric<G, W> {
        &self.words
    }

    /// `l(g)` with a witness; `NotGenerated` when no factorization of cost
    /// `≤ cap` exists.
    pub fn regularized_length(
        &self,
        g: &G::Element,
        cap: W,
    ) -> Result<RegularizedLength<G::Element, W>> {
        let not_generated = || Error::NotGenerated(format!("{g:?}"), format!("cost cap {cap}"));
        let factors = self
            .words
            .factorization(g, cap)?
            .ok_or_else(not_generated)?;
        let value = factors
            .iter()
            .map(|u| self.unit.delta_length(u).expect("factors come from U"))
            .fold(W::zero(), |a, b| a + b);
        Ok(RegularizedLength { value, factors })
    }

    /// Every element with `l(g) ≤ radius`.
    pub fn closed_ball(&self, radius: W) -> Result<BallTable<G::Element, W>> {
        self.words.enumerate_ball(radius)
    }

    /// `B(e, n) = { g : l(g) < n }`.
    pub fn open_ball(&self, n: u64) -> Result<IndexSet<G::Element>> {
        let r = W::from_index(n);
        Ok(self
            .words
            .enumerate_ball(r)?
            .open_ball(r)
            .cloned()
            .collect())
    }

    /// For each `g` with `l(g) < bound`: the fewest factors `k` over all
    /// factorizations `g = g₁⋯g_k` (`gᵢ ∈ U ∖ {e}`) of cost `< bound`, and
    /// the cheapest such `k`-factor product. Computed layer by layer: layer
    /// `k` holds the cheapest cost of each `k`-fold product below the bound.
    pub fn minimal_factorizations(&self, bound: W) -> Result<MinimalFactorizations<G::Element, W>> {
        let group = self.group();
        let gens = self.unit.non_identity();
        let budget = self.words.budget();
        // layer entries: element -> (cost, parent index in previous layer, generator index)
        let mut layers: Vec<IndexMap<G::Element, (W, usize, usize)>> = Vec::new();
        let mut first = IndexMap::new();
        first.insert(group.identity(), (W::zero(), 0, 0));
        layers.push(first);
        let mut found: IndexMap<G::Element, (usize, usize)> = IndexMap::new();
        found.insert(group.identity(), (0, 0));
        let mut total = 1usize;
        loop {
            let prev = layers.last().unwrap();
            let mut next: IndexMap<G::Element, (W, usize, usize)> = IndexMap::new();
            for (pi, (x, (c, _, _))) in prev.iter().enumerate() {
                for (gi, (u, w)) in gens.iter().enumerate() {
                    let cost = *c + *w;
                    if cost >= bound {
                        continue;
                    }
                    let y = group.mul(x, u);
                    match next.get(&y) {
                        Some((old, _, _)) if *old <= cost => {}
                        _ => {
                            next.insert(y, (cost, pi, gi));
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            total += next.len();
            if total > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let k = layers.len();
            for (i, y) in next.keys().enumerate() {
                found.entry(y.clone()).or_insert((k, i));
            }
            layers.push(next);
        }
        let out = found
            .into_iter()
            .map(|(g, (k, mut idx))| {
                let cost = layers[k][idx].0;
                let mut factors = Vec::with_capacity(k);
                for layer in (1..=k).rev() {
                    let (_, parent, gen) = layers[layer][idx];
                    factors.push(gens[gen].0.clone());
                    idx = parent;
                }
                factors.reverse();
                (g, MinimalFactorization { cost, factors })
            })
            .collect();
        Ok(out)
    }

    /// `U^k`, all products of `k` elements of `U` (which contains `e`, so
    /// this also covers shorter products).
    pub fn product_set(&self, k: usize) -> Result<IndexSet<G::Element>> {
        let group = self.group();
        let budget = self.words.budget();
        let mut set: IndexSet<G::Element> = IndexSet::new();
        set.insert(group.identity());
        for _ in 0..k {
            let mut next = IndexSet::with_capacity(set.len() * 2);
            for x in &set {
                for u in self.unit.elements() {
                    next.insert(group.mul(x, u));
                }
                if next.len() > budget {
                    return Err(Error::BudgetExceeded(budget));
                }
            }
            set = next;
        }
        Ok(set)
    }

    /// Checks `B(e, n) ⊆ U^{2n-1}` for `1 ≤ n ≤ max_n`, and that every
    /// minimal-factor witness has adjacent pairs of total length `≥ 1`.
    /// The product sets grow like `|U|^{2n-1}` before deduplication.
    pub fn verify_ball_inclusion(&self, max_n: u64) -> Result<BallInclusionReport> {
        let one = W::from_index(1);
        let mut rows = Vec::new();
        for n in 1..=max_n {
            let ball = self.open_ball(n)?;
            let product = self.product_set(2 * n as usize - 1)?;
            let minimal = self.minimal_factorizations(W::from_index(n))?;
            let contained = ball.iter().all(|g| product.contains(g));
            let max_factors = minimal.values().map(|m| m.factors.len()).max().unwrap_or(0);
            let adjacent_pairs_ok = minimal.values().all(|m| {
                m.factors.windows(2).all(|pair| {
                    let a = self.unit.delta_length(&pair[0]).unwrap();
                    let b = self.unit.delta_length(&pair[1]).unwrap();
                    one <= a + b
                })
            });
            let same_ball =
                minimal.len() == ball.len() && ball.iter().all(|g| minimal.contains_key(g));
            rows.push(BallInclusionRow {
                n,
                ball_size: ball.len(),
                product_size: product.len(),
                max_factors,
                contained: contained && same_ball && max_factors < 2 * n as usize,
                adjacent_pairs_ok,
            });
        }
        let passed = rows.iter().all(|r| r.contained && r.adjacent_pairs_ok);
        Ok(BallInclusionReport { rows, passed })
    }
}
