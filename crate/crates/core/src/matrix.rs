//! The length `l(A) = max(ln(1 + ‖A − I‖), ln(1 + ‖A⁻¹ − I‖))` on
//! `GL(n, ℝ)`, with `‖·‖` the operator norm for the Euclidean norm.
//!
//! Matrices carry their inverse, so inverting swaps the two and
//! `l(A) = l(A⁻¹)` holds bit for bit. A product stores `B⁻¹A⁻¹` as its
//! inverse instead of re-inverting.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{Group, HeisenbergElement, RandomElement};
use crate::length::{metric_from_length, LengthFunction, MetricView};
use crate::weight::FLOAT_TOLERANCE;

/// Reject matrices with `‖A‖·‖A⁻¹‖` above this.
pub const MAX_CONDITION: f64 = 1e12;

/// An invertible real matrix with its inverse.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    a: DMatrix<f64>,
    inv: DMatrix<f64>,
}

/// Largest singular value. Errors on non-finite entries.
pub fn operator_norm(a: &DMatrix<f64>) -> Result<f64> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let sv = a.clone().singular_values();
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

fn norm_unchecked(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

impl SquareMatrix {
    /// From `n × n` row-major entries, with invertibility and conditioning
    /// checks.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let a = DMatrix::from_row_slice(n, n, entries);
        let inv = a.clone().try_inverse().ok_or(Error::SingularMatrix)?;
        if inv.iter().any(|x| !x.is_finite()) {
            return Err(Error::SingularMatrix);
        }
        let m = SquareMatrix { a, inv };
        let cond = m.condition_number();
        if cond.is_nan() || cond > MAX_CONDITION {
            return Err(Error::IllConditioned(cond));
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(n, &flat)
    }

    pub fn identity(n: usize) -> Self {
        SquareMatrix {
            a: DMatrix::identity(n, n),
            inv: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut entries = vec![0.0; n * n];
        for (i, x) in d.iter().enumerate() {
            entries[i * n + i] = *x;
        }
        Self::from_row_major(n, &entries)
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        SquareMatrix {
            a: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
            inv: DMatrix::from_row_slice(2, 2, &[c, s, -s, c]),
        }
    }

    /// The Heisenberg element as a unipotent 3×3 matrix.
    pub fn heisenberg(h: &HeisenbergElement) -> Self {
        let a = DMatrix::from_row_slice(3, 3, &h.matrix_entries());
        let hi = HeisenbergElement::new(-h.a, -h.b, -h.c + h.a * h.b);
        let inv = DMatrix::from_row_slice(3, 3, &hi.matrix_entries());
        SquareMatrix { a, inv }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[(i, j)]
    }

    pub fn row_major(&self) -> Vec<f64> {
        self.a.transpose().iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.a
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn inverse_matrix(&self) -> &DMatrix<f64> {
        &self.inv
    }

    pub fn inverse(&self) -> Self {
        SquareMatrix {
            a: self.inv.clone(),
            inv: self.a.clone(),
        }
    }

    /// `AB`, with `B⁻¹A⁻¹` as its inverse and no conditioning check.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in product");
        SquareMatrix {
            a: &self.a * &other.a,
            inv: &other.inv * &self.inv,
        }
    }

    /// `AB`, rejecting ill-conditioned results.
    pub fn checked_product(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let p = self.product(other);
        let cond = p.condition_number();
        if cond.is_nan() || cond > MAX_CONDITION {
            return Err(Error::IllConditioned(cond));
        }
        Ok(p)
    }

    pub fn norm(&self) -> f64 {
        norm_unchecked(&self.a)
    }

    pub fn inverse_norm(&self) -> f64 {
        norm_unchecked(&self.inv)
    }

    /// `‖A‖·‖A⁻¹‖`.
    pub fn condition_number(&self) -> f64 {
        self.norm() * self.inverse_norm()
    }

    /// `‖A − I‖`.
    pub fn distance_to_identity(&self) -> f64 {
        let n = self.dim();
        norm_unchecked(&(&self.a - DMatrix::identity(n, n)))
    }

    /// Largest entrywise deviation of `A·A⁻¹` from `I`.
    pub fn inverse_residual(&self) -> f64 {
        let n = self.dim();
        (&self.a * &self.inv - DMatrix::<f64>::identity(n, n)).amax()
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// `l(A)`.
pub fn gl_length(a: &SquareMatrix) -> f64 {
    let fwd = a.distance_to_identity().ln_1p();
    let back = a.inverse().distance_to_identity().ln_1p();
    fwd.max(back)
}

/// `d(A, B) = l(B⁻¹A)`.
pub fn gl_metric(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    gl_length(&b.inverse().product(a))
}

/// `l` as a [`LengthFunction`].
pub fn gl_length_function() -> LengthFunction<SquareMatrix, f64> {
    LengthFunction::from_fn("GL length", "max(ln(1+|A-I|), ln(1+|A^-1-I|))", gl_length)
}

pub fn gl_metric_view(n: usize) -> MetricView<SquareMatrix, f64> {
    metric_from_length(&GeneralLinear::new(n), &gl_length_function())
}

/// `ln(1 + ‖AB − I‖) ≤ l(A) + l(B)`, within tolerance.
pub fn product_bound_holds(a: &SquareMatrix, b: &SquareMatrix) -> bool {
    let lhs = a.product(b).distance_to_identity().ln_1p();
    let rhs = gl_length(a) + gl_length(b);
    lhs <= rhs + FLOAT_TOLERANCE * rhs.max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProperProbeRow {
    pub index: usize,
    pub length: f64,
    pub norm: f64,
    pub inverse_norm: f64,
    pub inside: bool,
}

/// Whether each sample with `l(A) ≤ r` has `‖A‖, ‖A⁻¹‖ ≤ eʳ`, and whether
/// `‖A‖ ≤ 1 + ‖A − I‖ ≤ e^{l(A)}` for every sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProperProbeReport {
    pub radius: f64,
    pub norm_bound: f64,
    pub sampled: usize,
    pub within_radius: usize,
    pub violations: Vec<ProperProbeRow>,
    pub norm_chain_holds: bool,
}

impl ProperProbeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.norm_chain_holds
    }
}

pub fn properness_probe(r: f64, samples: &[SquareMatrix]) -> Result<ProperProbeReport> {
    if r.is_nan() || r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {r}"
        )));
    }
    let bound = r.exp();
    let tol = |x: f64| FLOAT_TOLERANCE * x.max(1.0);
    let mut violations = Vec::new();
    let mut within = 0;
    let mut chain = true;
    for (index, a) in samples.iter().enumerate() {
        let length = gl_length(a);
        let (norm, inverse_norm) = (a.norm(), a.inverse_norm());
        let mid = 1.0 + a.distance_to_identity();
        let top = length.exp();
        chain &= norm <= mid + tol(mid) && mid <= top + tol(top);
        if length <= r {
            within += 1;
            let inside = norm <= bound + tol(bound) && inverse_norm <= bound + tol(bound);
            if !inside {
                violations.push(ProperProbeRow {
                    index,
                    length,
                    norm,
                    inverse_norm,
                    inside,
                });
            }
        }
    }
    Ok(ProperProbeReport {
        radius: r,
        norm_bound: bound,
        sampled: samples.len(),
        within_radius: within,
        violations,
        norm_chain_holds: chain,
    })
}

/// `GL(n, ℝ)` in double precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneralLinear {
    n: usize,
}

impl GeneralLinear {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        GeneralLinear { n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

impl Group for GeneralLinear {
    type Element = SquareMatrix;

    fn identity(&self) -> SquareMatrix {
        SquareMatrix::identity(self.n)
    }

    fn mul(&self, a: &SquareMatrix, b: &SquareMatrix) -> SquareMatrix {
        a.product(b)
    }

    fn inv(&self, a: &SquareMatrix) -> SquareMatrix {
        a.inverse()
    }
}

/// Condition number accepted for random samples.
const SAMPLE_CONDITION: f64 = 100.0;

impl RandomElement for GeneralLinear {
    /// Entries uniform in `[-scale, scale]` (at least `[-1, 1]`), redrawn
    /// until the condition number is at most 100.
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, scale: u32) -> SquareMatrix {
        let s = scale.max(1) as f64;
        loop {
            let entries: Vec<f64> = (0..self.n * self.n)
                .map(|_| rng.gen_range(-s..=s))
                .collect();
            if let Ok(m) = SquareMatrix::from_row_major(self.n, &entries) {
                if m.condition_number() <= SAMPLE_CONDITION {
                    return m;
                }
            }
        }
    }
}

/// Generators of `SL(2, ℤ)` and their inverses.
pub fn sl2_generators() -> Vec<SquareMatrix> {
    let rows = [
        [1.0, 1.0, 0.0, 1.0],
        [1.0, -1.0, 0.0, 1.0],
        [1.0, 0.0, 1.0, 1.0],
        [1.0, 0.0, -1.0, 1.0],
    ];
    rows.iter()
        .map(|r| SquareMatrix::from_row_major(2, r).expect("unimodular"))
        .collect()
}

/// A product of `len` uniformly chosen `SL(2, ℤ)` generators.
pub fn random_sl2_word<R: Rng + ?Sized>(rng: &mut R, len: usize) -> SquareMatrix {
    let gens = sl2_generators();
    (0..len).fold(SquareMatrix::identity(2), |acc, _| {
        acc.product(&gens[rng.gen_range(0..gens.len())])
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixJson {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

/// Parses a JSON list of matrices, each either nested rows or a flat
/// row-major array of square length.
pub fn matrices_from_json(text: &str) -> Result<Vec<SquareMatrix>> {
    let raw: Vec<MatrixJson> = serde_json::from_str(text)?;
    raw.into_iter()
        .map(|m| match m {
            MatrixJson::Nested(rows) => SquareMatrix::from_rows(&rows),
            MatrixJson::Flat(flat) => {
                let n = (flat.len() as f64).sqrt().round() as usize;
                SquareMatrix::from_row_major(n, &flat)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Largest singular value of a 2×2 matrix in closed form.
    fn norm_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
        let s = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        ((s + (s * s - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
    }

    #[test]
    fn norms_of_simple_matrices() {
        assert!((SquareMatrix::identity(3).norm() - 1.0).abs() < 1e-15);
        assert!((SquareMatrix::diagonal(&[2.0, 0.5]).unwrap().norm() - 2.0).abs() < 1e-15);
        assert!((SquareMatrix::rotation(0.7).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn norm_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let got = operator_norm(&DMatrix::from_row_slice(2, 2, &v)).unwrap();
            let want = norm_2x2(v[0], v[1], v[2], v[3]);
            assert!((got - want).abs() <= 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn non_finite_rejected() {
        let m = DMatrix::from_row_slice(1, 1, &[f64::NAN]);
        assert_eq!(operator_norm(&m), Err(Error::NonFinite));
        assert_eq!(
            SquareMatrix::from_row_major(1, &[f64::INFINITY]).err(),
            Some(Error::NonFinite)
        );
    }

    #[test]
    fn singular_and_ill_conditioned_rejected() {
        assert_eq!(
            SquareMatrix::from_row_major(2, &[1.0, 2.0, 2.0, 4.0]).err(),
            Some(Error::SingularMatrix)
        );
        assert!(matches!(
            SquareMatrix::diagonal(&[1e7, 1e-7]),
            Err(Error::IllConditioned(_))
        ));
    }

    #[test]
    fn scalar_lengths() {
        let two = SquareMatrix::diagonal(&[2.0]).unwrap();
        assert!((gl_length(&two) - 2f64.ln()).abs() < 1e-15);
        let four = SquareMatrix::diagonal(&[4.0]).unwrap();
        assert!((gl_metric(&four, &two) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(gl_length(&SquareMatrix::identity(2)), 0.0);
    }

    #[test]
    fn inverse_has_identical_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let gl = GeneralLinear::new(3);
        for _ in 0..20 {
            let a = gl.random_element(&mut rng, 1);
            assert_eq!(gl_length(&a), gl_length(&a.inverse()));
            assert!(a.inverse_residual() < 1e-9);
        }
    }

    #[test]
    fn heisenberg_embedding_is_a_homomorphism() {
        let g = HeisenbergElement::new(2, -1, 3);
        let h = HeisenbergElement::new(-1, 4, 0);
        let gh = crate::group::Heisenberg.mul(&g, &h);
        let lhs = SquareMatrix::heisenberg(&g).product(&SquareMatrix::heisenberg(&h));
        assert_eq!(lhs.row_major(), SquareMatrix::heisenberg(&gh).row_major());
        assert!(SquareMatrix::heisenberg(&g).inverse_residual() == 0.0);
    }

    #[test]
    fn probe_on_identity_and_sl2_words() {
        let report = properness_probe(0.5, &[SquareMatrix::identity(2)]).unwrap();
        assert!(report.passed());
        assert_eq!(report.within_radius, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let words: Vec<_> = (0..50).map(|i| random_sl2_word(&mut rng, i % 6)).collect();
        for r in [0.5, 1.0, 2.0, 4.0] {
            assert!(properness_probe(r, &words).unwrap().passed());
        }
        assert!(properness_probe(0.0, &words).is_err());
    }

    #[test]
    fn json_import_accepts_nested_and_flat() {
        let ms = matrices_from_json("[[[2, 0], [0, 1]], [1, 1, 0, 1]]").unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0].row_major(), vec![2.0, 0.0, 0.0, 1.0]);
        assert_eq!(ms[1].rows(), vec![vec![1.0, 1.0], vec![0.0, 1.0]]);
        assert!(matrices_from_json("[[1, 2, 3]]").is_err());
    }
}
