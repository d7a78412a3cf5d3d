use std::collections::BTreeMap;

use serde::Serialize;

use crate::group::{CanonicalElement, Group};

/// A finitely supported real function on a group, in key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseFunction<E: Ord> {
    values: BTreeMap<E, f64>,
}

impl<E: Ord> Default for SparseFunction<E> {
    fn default() -> Self {
        SparseFunction {
            values: BTreeMap::new(),
        }
    }
}

impl<E: CanonicalElement> SparseFunction<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(values: BTreeMap<E, f64>) -> Self {
        SparseFunction { values }
    }

    pub fn get(&self, h: &E) -> f64 {
        self.values.get(h).copied().unwrap_or(0.0)
    }

    pub fn insert(&mut self, h: E, v: f64) {
        self.values.insert(h, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, f64)> {
        self.values.iter().map(|(k, v)| (k, *v))
    }

    /// Points where the function is nonzero.
    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.values
            .iter()
            .filter(|(_, v)| **v != 0.0)
            .map(|(k, _)| k)
    }

    pub fn stored_len(&self) -> usize {
        self.values.len()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(λ(g)f)(h) = f(g⁻¹h)`, i.e. the value at `k` moves to `g·k`.
    pub fn translate<G: Group<Element = E>>(&self, group: &G, g: &E) -> Self {
        SparseFunction {
            values: self
                .values
                .iter()
                .map(|(k, v)| (group.mul(g, k), *v))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            *values.entry(k.clone()).or_insert(0.0) += v;
        }
        SparseFunction { values }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            *values.entry(k.clone()).or_insert(0.0) -= v;
        }
        SparseFunction { values }
    }

    /// Largest pointwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).sup_norm()
    }

    /// `Σ |f(h)|^p`, summed in increasing order of magnitude.
    pub fn power_sum(&self, p: u32) -> f64 {
        let mut terms: Vec<f64> = self
            .values
            .values()
            .map(|v| v.abs().powi(p as i32))
            .collect();
        terms.sort_by(f64::total_cmp);
        terms.iter().sum()
    }

    /// `(Σ |f(h)|^{2n})^{1/(2n)}`, accumulated in log space so that small
    /// values do not underflow at large `n`. Terms are combined in sorted
    /// order, so the result depends only on the multiset of values.
    pub fn norm_2n(&self, n: u64) -> f64 {
        let p = 2.0 * n as f64;
        let mut logs: Vec<f64> = self
            .values
            .values()
            .filter(|v| **v != 0.0)
            .map(|v| p * v.abs().ln())
            .collect();
        if logs.is_empty() {
            return 0.0;
        }
        logs.sort_by(f64::total_cmp);
        let top = *logs.last().unwrap();
        let s: f64 = logs.iter().map(|t| (t - top).exp()).sum();
        ((top + s.ln()) / p).exp()
    }
}
