//! Ball and sphere counts, exponential growth certificates, and the `3ⁿ`
//! bound for graded generating schemes.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::WordMetric;
use crate::error::{Error, Result};
use crate::group::{CanonicalElement, Group};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: u64,
    pub ball_size: usize,
    pub sphere_size: usize,
}

/// `|D(e, n)|` and `|∂(e, n)|` for `n = 0, …, N`, with the enumerated
/// elements and their (integer) lengths.
#[derive(Debug, Clone)]
pub struct BallCensus<E> {
    rows: Vec<CensusRow>,
    elements: Vec<(E, u64)>,
}

impl<E: CanonicalElement> BallCensus<E> {
    /// Builds a census from `(element, length)` pairs with lengths `≤ max_n`.
    pub fn from_lengths(elements: Vec<(E, u64)>, max_n: u64) -> Self {
        let mut sphere = vec![0usize; max_n as usize + 1];
        for (_, l) in &elements {
            sphere[*l as usize] += 1;
        }
        let mut ball = 0;
        let rows = sphere
            .iter()
            .enumerate()
            .map(|(n, &s)| {
                ball += s;
                CensusRow {
                    n: n as u64,
                    ball_size: ball,
                    sphere_size: s,
                }
            })
            .collect();
        BallCensus { rows, elements }
    }

    pub fn rows(&self) -> &[CensusRow] {
        &self.rows
    }

    pub fn max_radius(&self) -> u64 {
        self.rows.last().map_or(0, |r| r.n)
    }

    pub fn ball_size(&self, n: u64) -> Option<usize> {
        self.rows.get(n as usize).map(|r| r.ball_size)
    }

    pub fn sphere_size(&self, n: u64) -> Option<usize> {
        self.rows.get(n as usize).map(|r| r.sphere_size)
    }

    /// Elements of `D(e, n)`.
    pub fn ball(&self, n: u64) -> impl Iterator<Item = &E> {
        self.elements
            .iter()
            .filter(move |(_, l)| *l <= n)
            .map(|(e, _)| e)
    }

    /// Elements of `∂(e, n)`.
    pub fn sphere(&self, n: u64) -> impl Iterator<Item = &E> {
        self.elements
            .iter()
            .filter(move |(_, l)| *l == n)
            .map(|(e, _)| e)
    }

    /// CSV with columns `n, ball_size, sphere_size, bound_3n, pass`, where
    /// `pass` is decided per row by the caller.
    pub fn write_csv<Wr: Write>(&self, out: Wr, pass: impl Fn(&CensusRow) -> bool) -> Result<()> {
        #[derive(Serialize)]
        struct Record {
            n: u64,
            ball_size: usize,
            sphere_size: usize,
            bound_3n: u128,
            pass: bool,
        }
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(Record {
                n: row.n,
                ball_size: row.ball_size,
                sphere_size: row.sphere_size,
                bound_3n: pow3(row.n),
                pass: pass(row),
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

fn pow3(n: u64) -> u128 {
    3u128.saturating_pow(n.min(u32::MAX as u64) as u32)
}

impl<G, W> WordMetric<G, W>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    /// Census of `D(e, n)` and `∂(e, n)` for `n ≤ max_n`. Needs integer
    /// weights so that every length lies on the integer grid.
    pub fn sphere_counts(&self, max_n: u64) -> Result<BallCensus<G::Element>> {
        if max_n == 0 {
            return Err(Error::InvalidArgument(
                "census radius must be at least 1".into(),
            ));
        }
        let cap = W::from_index(max_n);
        for (s, w) in self.generators().entries_up_to(self.group(), cap)? {
            if w.as_integer().is_none() {
                return Err(Error::NonIntegerWeights(format!("{s:?} has weight {w}")));
            }
        }
        let table = self.enumerate_ball(cap)?;
        let elements = table
            .iter()
            .map(|(e, l)| {
                let k = l
                    .as_integer()
                    .expect("integer weights give integer lengths");
                (e.clone(), k as u64)
            })
            .collect();
        Ok(BallCensus::from_lengths(elements, max_n))
    }
}

/// Constants with `|D(e, n)| ≤ β·e^{αn}` on the census grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthCertificate {
    pub alpha: f64,
    pub beta: f64,
    pub grid_bound: u64,
    /// `ln(|D(e, N)| / |D(e, N-1)|)` at the top of the grid, an estimate of
    /// the asymptotic exponential growth rate.
    pub growth_rate: Option<f64>,
}

impl GrowthCertificate {
    /// `β·e^{αn}`.
    pub fn bound(&self, n: u64) -> f64 {
        self.beta * (self.alpha * n as f64).exp()
    }

    /// Whether `ball_size ≤ β·e^{αn}`, compared in log space.
    pub fn holds(&self, n: u64, ball_size: usize) -> bool {
        (ball_size as f64).ln() <= self.beta.ln() + self.alpha * n as f64 + 1e-12
    }

    pub fn holds_on<E: CanonicalElement>(&self, census: &BallCensus<E>) -> bool {
        census.rows().iter().all(|r| self.holds(r.n, r.ball_size))
    }
}

/// `β = max(1, |D(e,1)|)` and `α = max_n (ln|D(e,n)| − ln β)/n` over the
/// grid `n = 1..N`, clamped at zero.
pub fn growth_certificate<E: CanonicalElement>(census: &BallCensus<E>) -> GrowthCertificate {
    let beta = census.ball_size(1).map_or(1.0, |b| (b as f64).max(1.0));
    let alpha = census
        .rows()
        .iter()
        .filter(|r| r.n >= 1)
        .map(|r| ((r.ball_size as f64).ln() - beta.ln()) / r.n as f64)
        .fold(0.0f64, f64::max);
    let top = census.max_radius();
    let growth_rate = (top >= 2).then(|| {
        let hi = census.ball_size(top).unwrap() as f64;
        let lo = census.ball_size(top - 1).unwrap() as f64;
        (hi / lo).ln()
    });
    GrowthCertificate {
        alpha,
        beta,
        grid_bound: top,
        growth_rate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThreeNRow {
    pub n: u64,
    pub ball_size: usize,
    pub sphere_size: usize,
    pub ball_bound: u128,
    pub sphere_bound: u128,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeNReport {
    pub rows: Vec<ThreeNRow>,
    pub passed: bool,
}

/// Checks that the generating set is graded (each weight level `n` is an
/// inverse pair `{xₙ, xₙ⁻¹}` and all weights are positive integers), then
/// checks `|D(e,n)| ≤ 3ⁿ` and `|∂(e,n)| ≤ 2·3ⁿ⁻¹` for `1 ≤ n ≤ max_n`.
pub fn verify_3n_bound<G, W>(metric: &WordMetric<G, W>, max_n: u64) -> Result<ThreeNReport>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    check_graded(metric, max_n)?;
    let census = metric.sphere_counts(max_n)?;
    let rows: Vec<ThreeNRow> = census
        .rows()
        .iter()
        .map(|r| {
            let ball_bound = pow3(r.n);
            let sphere_bound = if r.n == 0 { 1 } else { 2 * pow3(r.n - 1) };
            ThreeNRow {
                n: r.n,
                ball_size: r.ball_size,
                sphere_size: r.sphere_size,
                ball_bound,
                sphere_bound,
                pass: (r.ball_size as u128) <= ball_bound
                    && (r.sphere_size as u128) <= sphere_bound,
            }
        })
        .collect();
    let passed = rows.iter().all(|r| r.pass);
    Ok(ThreeNReport { rows, passed })
}

fn check_graded<G, W>(metric: &WordMetric<G, W>, max_n: u64) -> Result<()>
where
    G: Group,
    G::Element: CanonicalElement,
    W: Weight,
{
    let group = metric.group();
    let entries = metric
        .generators()
        .entries_up_to(group, W::from_index(max_n))?;
    let mut levels: BTreeMap<i64, Vec<G::Element>> = BTreeMap::new();
    for (s, w) in entries {
        let k = w.as_integer().filter(|k| *k >= 1).ok_or_else(|| {
            Error::SchemeMismatch(format!("weight {w} of {s:?} is not a positive integer"))
        })?;
        let level = levels.entry(k).or_default();
        if !level.contains(&s) {
            level.push(s);
        }
    }
    for (k, level) in levels {
        let ok = match level.as_slice() {
            [x] => group.inv(x) == *x,
            [x, y] => group.inv(x) == *y,
            _ => false,
        };
        if !ok {
            return Err(Error::SchemeMismatch(format!(
                "weight level {k} is {level:?}, expected an inverse pair"
            )));
        }
    }
    Ok(())
}
