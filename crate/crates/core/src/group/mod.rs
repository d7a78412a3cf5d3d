//! Concrete groups with canonical element forms.
//!
//! Every element type canonicalizes on construction, so structural equality
//! and hashing agree with group equality. Sparse functions on a group
//! (cocycle layers, ball tables) key directly on elements.

mod free;
mod heisenberg;
mod lattice;
mod table;

pub use free::{FreeGroup, FreeWord};
pub use heisenberg::{Heisenberg, HeisenbergElement};
pub use lattice::{IntegerLattice, LatticePoint};
pub use table::FiniteGroup;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait Group: Clone + Send + Sync + 'static {
    type Element: Clone + PartialEq + Debug + Send + Sync + 'static;

    fn identity(&self) -> Self::Element;

    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn inv(&self, a: &Self::Element) -> Self::Element;

    fn is_identity(&self, a: &Self::Element) -> bool {
        *a == self.identity()
    }

    /// `a⁻¹ · b`, the element whose length is the distance `d(b, a)`.
    fn left_quotient(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        self.mul(&self.inv(a), b)
    }
}

/// Elements of groups with exact canonical forms, usable as map keys.
pub trait CanonicalElement: Clone + Eq + Hash + Ord + Debug + Send + Sync + 'static {}

impl<T: Clone + Eq + Hash + Ord + Debug + Send + Sync + 'static> CanonicalElement for T {}

/// Groups with a distinguished finite symmetric generating set.
pub trait FinitelyGenerated: Group {
    /// Symmetric, identity-free generators in a fixed order.
    fn standard_generators(&self) -> Vec<Self::Element>;
}

/// Seeded random elements, for sampled checks.
pub trait RandomElement: Group {
    /// A random element whose "size" (word length, coordinate bound) is
    /// roughly at most `scale`.
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, scale: u32) -> Self::Element;
}

/// Serializable description of a group, as used in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSpec {
    IntegerLattice { rank: usize },
    Free { rank: usize },
    Heisenberg,
    Matrix { n: usize },
    Table { table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::IntegerLattice { rank } | GroupSpec::Free { rank } if *rank == 0 => {
                Err(Error::InvalidGroup("rank must be at least 1".into()))
            }
            GroupSpec::Matrix { n } if *n == 0 => Err(Error::InvalidGroup(
                "matrix dimension must be at least 1".into(),
            )),
            GroupSpec::Table { table } => FiniteGroup::from_table(table.clone()).map(|_| ()),
            _ => Ok(()),
        }
    }
}

/// Outcome of [`validate_group_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupAxiomReport {
    pub triples_checked: usize,
    pub associativity_failures: usize,
    pub inverse_of_product_failures: usize,
    pub inverse_cancellation_failures: usize,
}

impl GroupAxiomReport {
    pub fn passed(&self) -> bool {
        self.associativity_failures == 0
            && self.inverse_of_product_failures == 0
            && self.inverse_cancellation_failures == 0
    }
}

/// Checks associativity and `(ab)⁻¹ = b⁻¹a⁻¹` on all triples of `sample`,
/// and `g·g⁻¹ = e` on every sampled element.
pub fn validate_group_axioms<G: Group>(
    group: &G,
    sample: &[G::Element],
) -> Result<GroupAxiomReport> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut report = GroupAxiomReport {
        triples_checked: 0,
        associativity_failures: 0,
        inverse_of_product_failures: 0,
        inverse_cancellation_failures: 0,
    };
    for a in sample {
        if !group.is_identity(&group.mul(a, &group.inv(a))) {
            report.inverse_cancellation_failures += 1;
        }
        for b in sample {
            let ab = group.mul(a, b);
            if group.inv(&ab) != group.mul(&group.inv(b), &group.inv(a)) {
                report.inverse_of_product_failures += 1;
            }
            for c in sample {
                report.triples_checked += 1;
                if group.mul(&ab, c) != group.mul(a, &group.mul(b, c)) {
                    report.associativity_failures += 1;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_spec_round_trips_through_json() {
        let spec: GroupSpec =
            serde_json::from_str(r#"{"kind":"integer-lattice","rank":2}"#).unwrap();
        assert_eq!(spec, GroupSpec::IntegerLattice { rank: 2 });
        let spec: GroupSpec = serde_json::from_str(r#"{"kind":"heisenberg"}"#).unwrap();
        assert_eq!(spec, GroupSpec::Heisenberg);
        assert!(GroupSpec::Free { rank: 0 }.validate().is_err());
        assert!(GroupSpec::Table {
            table: vec![vec![0, 1], vec![1, 1]]
        }
        .validate()
        .is_err());
    }

    #[test]
    fn empty_sample_rejected() {
        let z = IntegerLattice::new(1);
        assert_eq!(validate_group_axioms(&z, &[]), Err(Error::EmptySample));
    }
}
