//! Dispatch from a [`GroupSpec`] to concrete groups, with a JSON format for
//! elements of each:
//!
//! - `integer-lattice`: `[x₁, …, x_k]`
//! - `free`: a word as nonzero letters, `[1, -2]` for `a b⁻¹`
//! - `heisenberg`: `[a, b, c]`
//! - `table`: the element's row index

use coarse_metric::group::{FiniteGroup, FreeGroup, FreeWord, Heisenberg, HeisenbergElement};
use coarse_metric::group::{IntegerLattice, LatticePoint};
use coarse_metric::word::GradedScheme;
use coarse_metric::{
    CanonicalElement, FinitelyGenerated, GroupSpec, RandomElement, WeightedGeneratingSet,
    WordMetric,
};
use serde_json::Value;

use crate::config::GeneratorSpec;
use crate::error::{CliError, CliResult};

pub trait CliGroup: FinitelyGenerated<Element: CanonicalElement> + RandomElement {
    fn parse(&self, v: &Value) -> Result<Self::Element, String>;

    fn show(&self, e: &Self::Element) -> String;

    fn label(&self) -> String;
}

fn int_array(v: &Value, len: Option<usize>) -> Result<Vec<i64>, String> {
    let items = v
        .as_array()
        .ok_or_else(|| format!("expected an array, got {v}"))?;
    if let Some(n) = len {
        if items.len() != n {
            return Err(format!("expected {n} entries, got {v}"));
        }
    }
    items
        .iter()
        .map(|x| {
            x.as_i64()
                .ok_or_else(|| format!("expected integers, got {v}"))
        })
        .collect()
}

fn show_ints(xs: &[i64]) -> String {
    serde_json::to_string(xs).unwrap_or_default()
}

impl CliGroup for IntegerLattice {
    fn parse(&self, v: &Value) -> Result<LatticePoint, String> {
        Ok(LatticePoint(int_array(v, Some(self.rank()))?))
    }

    fn show(&self, e: &LatticePoint) -> String {
        show_ints(&e.0)
    }

    fn label(&self) -> String {
        format!("Z^{}", self.rank())
    }
}

impl CliGroup for FreeGroup {
    fn parse(&self, v: &Value) -> Result<FreeWord, String> {
        let letters = int_array(v, None)?;
        let mut out = Vec::with_capacity(letters.len());
        for x in letters {
            if x == 0 || x.unsigned_abs() as usize > self.rank() {
                return Err(format!("letter {x} outside 1..={}", self.rank()));
            }
            out.push(x as i32);
        }
        Ok(FreeWord::reduce(out))
    }

    fn show(&self, e: &FreeWord) -> String {
        let xs: Vec<i64> = e.letters().iter().map(|&x| x as i64).collect();
        show_ints(&xs)
    }

    fn label(&self) -> String {
        format!("F_{}", self.rank())
    }
}

impl CliGroup for Heisenberg {
    fn parse(&self, v: &Value) -> Result<HeisenbergElement, String> {
        let xs = int_array(v, Some(3))?;
        Ok(HeisenbergElement::new(xs[0], xs[1], xs[2]))
    }

    fn show(&self, e: &HeisenbergElement) -> String {
        show_ints(&[e.a, e.b, e.c])
    }

    fn label(&self) -> String {
        "H_3(Z)".into()
    }
}

impl CliGroup for FiniteGroup {
    fn parse(&self, v: &Value) -> Result<usize, String> {
        v.as_u64()
            .map(|x| x as usize)
            .filter(|&x| x < self.order())
            .ok_or_else(|| format!("expected an index below {}, got {v}", self.order()))
    }

    fn show(&self, e: &usize) -> String {
        e.to_string()
    }

    fn label(&self) -> String {
        format!("table group of order {}", self.order())
    }
}

/// Work generic over the group in a config.
pub trait GroupTask {
    type Output;

    fn run<G: CliGroup>(self, group: G) -> CliResult<Self::Output>;
}

pub fn with_group<T: GroupTask>(spec: &GroupSpec, task: T) -> CliResult<T::Output> {
    match spec {
        GroupSpec::IntegerLattice { rank } => task.run(IntegerLattice::new(*rank)),
        GroupSpec::Free { rank } => task.run(FreeGroup::new(*rank)),
        GroupSpec::Heisenberg => task.run(Heisenberg),
        GroupSpec::Table { table } => task.run(FiniteGroup::from_table(table.clone())?),
        GroupSpec::Matrix { .. } => Err(CliError::config(
            "matrix groups have no word metric here; use the `gl` or `verify` subcommands",
        )),
    }
}

fn parse_all<G: CliGroup>(group: &G, values: &[Value]) -> CliResult<Vec<G::Element>> {
    values
        .iter()
        .map(|v| group.parse(v).map_err(CliError::Config))
        .collect()
}

/// Word metric for `spec`. With `checked = false` explicit entries skip the
/// symmetry check so that validators can report on them.
pub fn word_metric<G: CliGroup>(
    group: &G,
    spec: &GeneratorSpec,
    budget: usize,
    checked: bool,
) -> CliResult<WordMetric<G, i64>> {
    let gens = match spec {
        GeneratorSpec::Standard { weight } => WeightedGeneratingSet::uniform(group, *weight)?,
        GeneratorSpec::Explicit {
            entries,
            symmetric_closure,
        } => {
            let elements: Vec<Value> = entries.iter().map(|(e, _)| e.clone()).collect();
            let parsed = parse_all(group, &elements)?;
            let entries: Vec<_> = parsed
                .into_iter()
                .zip(entries.iter().map(|e| e.1))
                .collect();
            if checked {
                WeightedGeneratingSet::explicit(group, entries, *symmetric_closure)?
            } else {
                WeightedGeneratingSet::unchecked(group, entries)?
            }
        }
        GeneratorSpec::Graded { elements } => {
            if elements.is_empty() {
                return Err(CliError::config("graded scheme needs at least one element"));
            }
            let xs = parse_all(group, elements)?;
            let len = xs.len() as u64;
            let scheme = GradedScheme::new("config graded", move |n| {
                n.checked_sub(1).and_then(|i| xs.get(i as usize).cloned())
            });
            WeightedGeneratingSet::graded(scheme.truncated(len))
        }
    };
    Ok(WordMetric::new(group.clone(), gens).with_budget(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn element_round_trips() {
        let f = FreeGroup::new(2);
        let w = f.parse(&json!([1, -2, 2, 1])).unwrap();
        assert_eq!(f.show(&w), "[1,1]");
        assert!(f.parse(&json!([3])).is_err());
        assert!(f.parse(&json!([0])).is_err());

        let z2 = IntegerLattice::new(2);
        assert_eq!(z2.show(&z2.parse(&json!([3, -4])).unwrap()), "[3,-4]");
        assert!(z2.parse(&json!([3])).is_err());

        let h = Heisenberg;
        assert_eq!(
            h.parse(&json!([1, 2, 3])).unwrap(),
            HeisenbergElement::new(1, 2, 3)
        );
        let c = FiniteGroup::cyclic(4);
        assert_eq!(c.parse(&json!(3)).unwrap(), 3);
        assert!(c.parse(&json!(4)).is_err());
    }

    #[test]
    fn graded_generators_from_config() {
        let z = IntegerLattice::new(1);
        let spec = GeneratorSpec::Graded {
            elements: vec![json!([1]), json!([2]), json!([3])],
        };
        let m = word_metric(&z, &spec, 1000, true).unwrap();
        assert_eq!(m.word_length(&LatticePoint(vec![3]), 10).unwrap(), Some(3));
        assert_eq!(m.word_length(&LatticePoint(vec![7]), 10).unwrap(), Some(7));
    }

    #[test]
    fn explicit_asymmetric_weights_need_unchecked() {
        let z = IntegerLattice::new(1);
        let spec = GeneratorSpec::Explicit {
            entries: vec![(json!([1]), 1), (json!([-1]), 2)],
            symmetric_closure: false,
        };
        assert!(matches!(
            word_metric(&z, &spec, 1000, true),
            Err(CliError::Config(_))
        ));
        assert!(word_metric(&z, &spec, 1000, false).is_ok());
    }
}
