use std::fmt;

use rand::Rng;

use super::{FinitelyGenerated, Group, RandomElement};

/// A freely reduced word. Letter `i > 0` is the generator `aᵢ`, `-i` its
/// inverse; no letter is adjacent to its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    /// Reduces `letters`. Zero letters are dropped.
    pub fn reduce(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for x in letters {
            if x == 0 {
                continue;
            }
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        FreeWord(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for &x in &self.0 {
            let base = letter_name(x.unsigned_abs());
            if x > 0 {
                write!(f, "{base}")?;
            } else {
                write!(f, "{}", base.to_uppercase())?;
            }
        }
        Ok(())
    }
}

fn letter_name(i: u32) -> String {
    if (1..=26).contains(&i) {
        char::from(b'a' + (i - 1) as u8).to_string()
    } else {
        format!("x{i}")
    }
}

/// Free group on `rank` generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        assert!(rank > 0, "free group rank must be positive");
        FreeGroup { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The generator `aᵢ`, 1-based.
    pub fn generator(&self, i: usize) -> FreeWord {
        assert!((1..=self.rank).contains(&i), "generator index out of range");
        FreeWord(vec![i as i32])
    }

    /// Parses a word, checking letters are in range.
    pub fn word(&self, letters: &[i32]) -> Option<FreeWord> {
        letters
            .iter()
            .all(|x| x.unsigned_abs() as usize <= self.rank)
            .then(|| FreeWord::reduce(letters.iter().copied()))
    }
}

impl Group for FreeGroup {
    type Element = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::default()
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        // Cancel at the seam only: both inputs are already reduced.
        let mut i = 0;
        while i < a.0.len() && i < b.0.len() && a.0[a.0.len() - 1 - i] == -b.0[i] {
            i += 1;
        }
        let mut out = Vec::with_capacity(a.0.len() + b.0.len() - 2 * i);
        out.extend_from_slice(&a.0[..a.0.len() - i]);
        out.extend_from_slice(&b.0[i..]);
        FreeWord(out)
    }

    fn inv(&self, a: &FreeWord) -> FreeWord {
        FreeWord(a.0.iter().rev().map(|x| -x).collect())
    }
}

impl FinitelyGenerated for FreeGroup {
    fn standard_generators(&self) -> Vec<FreeWord> {
        (1..=self.rank as i32)
            .flat_map(|i| [FreeWord(vec![i]), FreeWord(vec![-i])])
            .collect()
    }
}

impl RandomElement for FreeGroup {
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, scale: u32) -> FreeWord {
        let len = rng.gen_range(0..=scale);
        let r = self.rank as i32;
        FreeWord::reduce((0..len).map(|_| {
            let g = rng.gen_range(1..=r);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        }))
    }
}
