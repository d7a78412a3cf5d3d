use rand::Rng;

use super::{FinitelyGenerated, Group, RandomElement};

/// A point of `ℤᵏ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// ℓ¹ norm, the standard word length.
    pub fn l1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

/// The free abelian group `ℤᵏ` under addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegerLattice {
    rank: usize,
}

impl IntegerLattice {
    pub fn new(rank: usize) -> Self {
        assert!(rank > 0, "lattice rank must be positive");
        IntegerLattice { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn point(&self, coords: &[i64]) -> LatticePoint {
        assert_eq!(coords.len(), self.rank, "coordinate count must match rank");
        LatticePoint(coords.to_vec())
    }

    /// `k · eᵢ`.
    pub fn axis(&self, i: usize, k: i64) -> LatticePoint {
        let mut v = vec![0; self.rank];
        v[i] = k;
        LatticePoint(v)
    }
}

impl Group for IntegerLattice {
    type Element = LatticePoint;

    fn identity(&self) -> LatticePoint {
        LatticePoint(vec![0; self.rank])
    }

    fn mul(&self, a: &LatticePoint, b: &LatticePoint) -> LatticePoint {
        LatticePoint(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    fn inv(&self, a: &LatticePoint) -> LatticePoint {
        LatticePoint(a.0.iter().map(|x| -x).collect())
    }
}

impl FinitelyGenerated for IntegerLattice {
    fn standard_generators(&self) -> Vec<LatticePoint> {
        (0..self.rank)
            .flat_map(|i| [self.axis(i, 1), self.axis(i, -1)])
            .collect()
    }
}

impl RandomElement for IntegerLattice {
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, scale: u32) -> LatticePoint {
        let s = scale as i64;
        LatticePoint((0..self.rank).map(|_| rng.gen_range(-s..=s)).collect())
    }
}
