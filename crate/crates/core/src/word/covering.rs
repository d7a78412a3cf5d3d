use indexmap::IndexSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{CanonicalElement, Group};

/// A cover of `U·xᵢ` (or of `U²`) by left translates `y·U`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringReport<E> {
    pub index: u64,
    pub covering_number: usize,
    pub centers: Vec<E>,
}

/// Greedy cover of `target` by left translates `y·U` of a symmetric `unit`.
///
/// Candidate centers are `z·u⁻¹` for `z ∈ target`, `u ∈ U`, in that order;
/// each round takes the candidate covering the most uncovered points, the
/// earliest on ties. The result upper-bounds the minimum cover size.
pub fn greedy_left_cover<G>(
    group: &G,
    unit: &[G::Element],
    target: &[G::Element],
) -> Result<Vec<G::Element>>
where
    G: Group,
    G::Element: CanonicalElement,
{
    let targets: IndexSet<G::Element> = target.iter().cloned().collect();
    let mut candidates: IndexSet<G::Element> = IndexSet::new();
    for z in &targets {
        for u in unit {
            candidates.insert(group.mul(z, &group.inv(u)));
        }
    }
    let covered_by: Vec<Vec<usize>> = candidates
        .iter()
        .map(|y| {
            unit.iter()
                .filter_map(|u| targets.get_index_of(&group.mul(y, u)))
                .collect()
        })
        .collect();

    let mut uncovered = vec![true; targets.len()];
    let mut remaining = targets.len();
    let mut centers = Vec::new();
    while remaining > 0 {
        let (best, gain) = covered_by
            .iter()
            .enumerate()
            .map(|(i, pts)| (i, pts.iter().filter(|&&p| uncovered[p]).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if gain == 0 {
            return Err(Error::UncoverableSet(0));
        }
        for &p in &covered_by[best] {
            if uncovered[p] {
                uncovered[p] = false;
                remaining -= 1;
            }
        }
        centers.push(candidates[best].clone());
    }
    Ok(centers)
}

pub(crate) fn check_unit<G>(group: &G, unit: &[G::Element]) -> Result<()>
where
    G: Group,
    G::Element: CanonicalElement,
{
    if !unit.iter().any(|u| group.is_identity(u)) {
        return Err(Error::InvalidArgument(
            "unit set must contain the identity".into(),
        ));
    }
    if let Some(u) = unit.iter().find(|u| !unit.contains(&group.inv(u))) {
        return Err(Error::InvalidArgument(format!(
            "unit set is not symmetric at {u:?}"
        )));
    }
    Ok(())
}

/// Cover of `U·x` by left translates of `U`, with every point's membership
/// checked.
pub(crate) fn cover_translate<G>(
    group: &G,
    unit: &[G::Element],
    x: &G::Element,
    index: u64,
) -> Result<CoveringReport<G::Element>>
where
    G: Group,
    G::Element: CanonicalElement,
{
    let target: Vec<G::Element> = unit.iter().map(|u| group.mul(u, x)).collect();
    let centers =
        greedy_left_cover(group, unit, &target).map_err(|_| Error::UncoverableSet(index))?;
    verify_cover(group, unit, &target, &centers)
        .then_some(())
        .ok_or(Error::UncoverableSet(index))?;
    Ok(CoveringReport {
        index,
        covering_number: centers.len(),
        centers,
    })
}

/// Cover of `U² = {uv}` by left translates of `U`; its size is the constant
/// `q` of the exponential growth estimate.
pub fn unit_square_cover<G>(group: &G, unit: &[G::Element]) -> Result<CoveringReport<G::Element>>
where
    G: Group,
    G::Element: CanonicalElement,
{
    check_unit(group, unit)?;
    let square: IndexSet<G::Element> = unit
        .iter()
        .flat_map(|u| unit.iter().map(move |v| (u, v)))
        .map(|(u, v)| group.mul(u, v))
        .collect();
    let target: Vec<G::Element> = square.into_iter().collect();
    let centers = greedy_left_cover(group, unit, &target)?;
    Ok(CoveringReport {
        index: 0,
        covering_number: centers.len(),
        centers,
    })
}

fn verify_cover<G>(
    group: &G,
    unit: &[G::Element],
    target: &[G::Element],
    centers: &[G::Element],
) -> bool
where
    G: Group,
    G::Element: CanonicalElement,
{
    target.iter().all(|z| {
        centers
            .iter()
            .any(|y| unit.contains(&group.left_quotient(y, z)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FreeGroup, FreeWord, IntegerLattice, LatticePoint};

    #[test]
    fn integer_translate_needs_one_center() {
        let z = IntegerLattice::new(1);
        let unit: Vec<LatticePoint> = (-1..=1).map(|k| LatticePoint(vec![k])).collect();
        let report = cover_translate(&z, &unit, &LatticePoint(vec![5]), 5).unwrap();
        assert_eq!(report.covering_number, 1);
        assert_eq!(report.centers, vec![LatticePoint(vec![5])]);
    }

    #[test]
    fn singleton_unit_gives_singleton_cover() {
        let f = FreeGroup::new(2);
        let unit = vec![FreeWord::default()];
        let x = FreeWord::reduce([2, 2, 1]);
        let report = cover_translate(&f, &unit, &x, 3).unwrap();
        assert_eq!(report.covering_number, 1);
    }

    #[test]
    fn free_group_conjugation_forces_three_centers() {
        // U·b = {b, ab, Ab}; no translate y·U = {y, ya, yA} holds two of them
        let f = FreeGroup::new(2);
        let unit = vec![
            FreeWord::default(),
            FreeWord::reduce([1]),
            FreeWord::reduce([-1]),
        ];
        let report = cover_translate(&f, &unit, &FreeWord::reduce([2]), 1).unwrap();
        assert_eq!(report.covering_number, 3);
    }

    #[test]
    fn square_cover_on_integers() {
        let z = IntegerLattice::new(1);
        let unit: Vec<LatticePoint> = (-1..=1).map(|k| LatticePoint(vec![k])).collect();
        // U² = {-2..2} needs two translates of {-1, 0, 1}
        assert_eq!(unit_square_cover(&z, &unit).unwrap().covering_number, 2);
    }

    #[test]
    fn unit_must_be_symmetric_with_identity() {
        let z = IntegerLattice::new(1);
        let no_e = vec![LatticePoint(vec![1]), LatticePoint(vec![-1])];
        assert!(unit_square_cover(&z, &no_e).is_err());
        let lopsided = vec![LatticePoint(vec![0]), LatticePoint(vec![1])];
        assert!(unit_square_cover(&z, &lopsided).is_err());
    }
}
