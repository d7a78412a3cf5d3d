//! Least-cost search in a weighted Cayley graph.
//!
//! Edges are right multiplications `x → x·s`, so a path `e → g` with labels
//! `s₁, …, s_m` is a factorization `g = s₁⋯s_m` and its cost is the sum of
//! the label weights. Nodes are ordered by `(cost, steps)` and then by
//! discovery order, which makes witnesses deterministic: among cheapest
//! factorizations the one with the fewest factors wins, and remaining ties
//! go to the generator listed first.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::group::{CanonicalElement, Group};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Node<W> {
    pub cost: W,
    pub steps: usize,
    /// Index of the predecessor in the settled map, and the edge taken.
    pub parent: Option<(usize, usize)>,
}

pub(crate) struct SearchTree<E, W> {
    pub settled: IndexMap<E, Node<W>>,
}

impl<E: CanonicalElement, W: Weight> SearchTree<E, W> {
    /// Edge indices along the tree path from the root to `target`.
    pub fn path_edges(&self, target: &E) -> Option<Vec<usize>> {
        let mut idx = self.settled.get_index_of(target)?;
        let mut edges = Vec::new();
        while let Some((parent, edge)) = self.settled[idx].parent {
            edges.push(edge);
            idx = parent;
        }
        edges.reverse();
        Some(edges)
    }
}

struct Entry<E, W> {
    cost: W,
    steps: usize,
    seq: u64,
    element: E,
}

impl<E, W: PartialOrd> Entry<E, W> {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.cost
            .partial_cmp(&other.cost)
            .expect("weights are validated finite")
            .then(self.steps.cmp(&other.steps))
            .then(self.seq.cmp(&other.seq))
    }
}

impl<E, W: PartialOrd> PartialEq for Entry<E, W> {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}

impl<E, W: PartialOrd> Eq for Entry<E, W> {}

impl<E, W: PartialOrd> PartialOrd for Entry<E, W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E, W: PartialOrd> Ord for Entry<E, W> {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.key_cmp(self)
    }
}

fn better<W: PartialOrd>(cost: W, steps: usize, old: &Node<W>) -> bool {
    match cost.partial_cmp(&old.cost) {
        Some(Ordering::Less) => true,
        Some(Ordering::Equal) => steps < old.steps,
        _ => false,
    }
}

/// Settles every element of cost `≤ cap` (stopping early once `target` is
/// settled). Errors when more than `budget` elements are discovered.
pub(crate) fn least_cost_search<G, W>(
    group: &G,
    edges: &[(G::Element, W)],
    cap: W,
    budget: usize,
    target: Option<&G::Element>,
) -> Result<SearchTree<G::Element, W>>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    let root = group.identity();
    let mut settled: IndexMap<G::Element, Node<W>> = IndexMap::new();
    let mut tentative: HashMap<G::Element, Node<W>> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;

    tentative.insert(
        root.clone(),
        Node {
            cost: W::zero(),
            steps: 0,
            parent: None,
        },
    );
    heap.push(Entry {
        cost: W::zero(),
        steps: 0,
        seq,
        element: root,
    });

    while let Some(entry) = heap.pop() {
        if entry.cost > cap {
            break;
        }
        if settled.contains_key(&entry.element) {
            continue;
        }
        let node = tentative[&entry.element];
        if node.cost != entry.cost || node.steps != entry.steps {
            continue; // stale heap entry
        }
        let (index, _) = settled.insert_full(entry.element.clone(), node);
        if target == Some(&entry.element) {
            break;
        }
        for (edge, (s, w)) in edges.iter().enumerate() {
            let cost = entry.cost + *w;
            if cost > cap {
                continue;
            }
            let next = group.mul(&entry.element, s);
            if settled.contains_key(&next) {
                continue;
            }
            let steps = entry.steps + 1;
            if let Some(old) = tentative.get(&next) {
                if !better(cost, steps, old) {
                    continue;
                }
            }
            tentative.insert(
                next.clone(),
                Node {
                    cost,
                    steps,
                    parent: Some((index, edge)),
                },
            );
            if tentative.len() > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            seq += 1;
            heap.push(Entry {
                cost,
                steps,
                seq,
                element: next,
            });
        }
    }
    Ok(SearchTree { settled })
}
