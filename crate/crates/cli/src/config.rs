//! Experiment configuration: one JSON file per run.

use std::path::{Path, PathBuf};

use coarse_metric::word::DEFAULT_BUDGET;
use coarse_metric::GroupSpec;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const BUDGET_VAR: &str = "COARSE_METRIC_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Growth,
    Embed,
    Lattice,
    Verify,
    Gl,
}

/// Generating set with integer weights. Elements are JSON values in the
/// group's element format (see [`crate::groups::CliGroup`]).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// The group's standard generators, all with one weight.
    Standard {
        #[serde(default = "one")]
        weight: i64,
    },
    /// `[element, weight]` pairs; missing inverses are added when
    /// `symmetric_closure` is set.
    Explicit {
        entries: Vec<(Value, i64)>,
        #[serde(default)]
        symmetric_closure: bool,
    },
    /// `xₙ = elements[n − 1]`, with `xₙ^{±1}` of weight `n`.
    Graded { elements: Vec<Value> },
}

fn one() -> i64 {
    1
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec::Standard { weight: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Fixture {
    /// Clouds of `1, 2, …, clouds` points.
    StarClouds { clouds: u32 },
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub generators: GeneratorSpec,
    /// Census depth, sample-ball radius or point-set radius.
    pub radius: Option<u64>,
    /// `M` values for the bounded-geometry census.
    pub grid: Option<Vec<i64>>,
    pub separation: Option<i64>,
    pub truncation: Option<u64>,
    /// Pair budget for embeddings, sample count for matrix suites.
    pub samples: Option<usize>,
    /// Elements taken from the sample ball for the cocycle identity sweep.
    pub identity_elements: Option<usize>,
    pub probe_radius: Option<f64>,
    /// Matrices as nested rows or flat row-major arrays.
    pub matrices: Option<Value>,
    pub fixture: Option<Fixture>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        if let Some(group) = &cfg.group {
            group
                .validate()
                .map_err(|e| CliError::config(e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn group(&self) -> CliResult<&GroupSpec> {
        self.group
            .as_ref()
            .ok_or_else(|| CliError::config("missing field `group`"))
    }

    pub fn radius(&self) -> CliResult<u64> {
        let r = self
            .radius
            .ok_or_else(|| CliError::config("missing field `radius`"))?;
        check_radius(r)
    }
}

/// Larger radii would exhaust any enumeration budget long before use; the
/// cap keeps conversions to signed weights lossless.
pub const MAX_RADIUS: u64 = 1 << 20;

pub fn check_radius(r: u64) -> CliResult<u64> {
    if r > MAX_RADIUS {
        return Err(CliError::config(format!("radius {r} exceeds {MAX_RADIUS}")));
    }
    Ok(r)
}

/// Config plus command-line overrides.
#[derive(Debug, Clone)]
pub struct Settings {
    pub config: ExperimentConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub budget: usize,
    pub truncation: Option<u64>,
}

impl Settings {
    pub fn resolve(
        config: ExperimentConfig,
        expected: Experiment,
        out: Option<PathBuf>,
        seed: Option<u64>,
        truncation: Option<u64>,
        budget_var: Option<String>,
    ) -> CliResult<Self> {
        if let Some(kind) = config.experiment {
            if kind != expected {
                return Err(CliError::config(format!(
                    "config is for `{kind:?}`, not `{expected:?}`"
                )));
            }
        }
        let budget = match budget_var {
            Some(v) => v.trim().parse::<usize>().map_err(|_| {
                CliError::config(format!(
                    "{BUDGET_VAR} must be a positive integer, got {v:?}"
                ))
            })?,
            None => config.budget.unwrap_or(DEFAULT_BUDGET),
        };
        if budget == 0 {
            return Err(CliError::config("budget must be positive"));
        }
        Ok(Settings {
            out_dir: out
                .or_else(|| config.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out")),
            seed: seed.or(config.seed).unwrap_or(0),
            truncation: truncation.or(config.truncation),
            budget,
            config,
        })
    }

    pub fn output(&self, name: &str) -> CliResult<std::fs::File> {
        std::fs::create_dir_all(&self.out_dir)?;
        Ok(std::fs::File::create(self.out_dir.join(name))?)
    }

    pub fn write_json<T: serde::Serialize>(&self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::create_dir_all(&self.out_dir)?;
        std::fs::write(self.out_dir.join(name), text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg =
            ExperimentConfig::from_json(r#"{"group": {"kind": "free", "rank": 2}, "radius": 4}"#)
                .unwrap();
        assert_eq!(cfg.group, Some(GroupSpec::Free { rank: 2 }));
        assert_eq!(cfg.generators, GeneratorSpec::Standard { weight: 1 });
    }

    #[test]
    fn rejects_unknown_fields_and_bad_groups() {
        assert!(ExperimentConfig::from_json(r#"{"radius": 1, "colour": 2}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"group": {"kind": "free", "rank": 0}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"group": {"kind": "torus"}}"#).is_err());
    }

    #[test]
    fn flags_override_config() {
        let cfg =
            ExperimentConfig::from_json(r#"{"seed": 4, "truncation": 3, "budget": 10}"#).unwrap();
        let s =
            Settings::resolve(cfg.clone(), Experiment::Embed, None, Some(9), None, None).unwrap();
        assert_eq!((s.seed, s.truncation, s.budget), (9, Some(3), 10));
        let s = Settings::resolve(
            cfg.clone(),
            Experiment::Embed,
            None,
            None,
            Some(5),
            Some("77".into()),
        )
        .unwrap();
        assert_eq!((s.seed, s.truncation, s.budget), (4, Some(5), 77));
        assert!(Settings::resolve(
            cfg,
            Experiment::Embed,
            None,
            None,
            None,
            Some("lots".into())
        )
        .is_err());
    }

    #[test]
    fn experiment_must_match_subcommand() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "growth"}"#).unwrap();
        assert!(Settings::resolve(cfg, Experiment::Lattice, None, None, None, None).is_err());
    }
}
