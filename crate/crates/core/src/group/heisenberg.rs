use rand::Rng;

use super::{FinitelyGenerated, Group, RandomElement};

/// The integer matrix
/// ```text
/// [1 a c]
/// [0 1 b]
/// [0 0 1]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisenbergElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HeisenbergElement {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        HeisenbergElement { a, b, c }
    }

    /// Row-major entries of the 3×3 unipotent matrix.
    pub fn matrix_entries(&self) -> [f64; 9] {
        [
            1.0,
            self.a as f64,
            self.c as f64,
            0.0,
            1.0,
            self.b as f64,
            0.0,
            0.0,
            1.0,
        ]
    }
}

/// Integer Heisenberg group, upper unitriangular 3×3 integer matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Heisenberg;

impl Group for Heisenberg {
    type Element = HeisenbergElement;

    fn identity(&self) -> HeisenbergElement {
        HeisenbergElement::new(0, 0, 0)
    }

    fn mul(&self, x: &HeisenbergElement, y: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement::new(x.a + y.a, x.b + y.b, x.c + y.c + x.a * y.b)
    }

    fn inv(&self, x: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement::new(-x.a, -x.b, -x.c + x.a * x.b)
    }
}

impl FinitelyGenerated for Heisenberg {
    fn standard_generators(&self) -> Vec<HeisenbergElement> {
        vec![
            HeisenbergElement::new(1, 0, 0),
            HeisenbergElement::new(-1, 0, 0),
            HeisenbergElement::new(0, 1, 0),
            HeisenbergElement::new(0, -1, 0),
        ]
    }
}

impl RandomElement for Heisenberg {
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, scale: u32) -> HeisenbergElement {
        let s = scale as i64;
        HeisenbergElement::new(
            rng.gen_range(-s..=s),
            rng.gen_range(-s..=s),
            rng.gen_range(-s * s..=s * s),
        )
    }
}
