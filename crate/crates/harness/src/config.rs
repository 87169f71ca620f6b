//! Experiment configuration files and the environment/distribution JSON
//! schemas. Environment descriptions round-trip exactly: parse -> build ->
//! serialize reproduces the same JSON value.

use prophet_core::dist::Marginal;
use prophet_core::env::{EnvKind, Environment, Graph};
use prophet_core::graph::{BipartiteEdge, BipartiteGraph};
use prophet_core::mech::{ReserveKind, ReserveMode, ReservePolicy};
use prophet_core::ProductDistribution;
use serde::{Deserialize, Serialize};

use crate::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub left: usize,
    pub right: usize,
    #[serde(rename = "leftOrdinal")]
    pub left_ordinal: usize,
    #[serde(rename = "rightOrdinal")]
    pub right_ordinal: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnvSpec {
    Uniform { n: usize, k: usize },
    Partition { n: usize, blocks: Vec<Vec<usize>>, capacities: Vec<usize> },
    Laminar { n: usize, family: Vec<Vec<usize>>, capacities: Vec<usize> },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Transversal { left: usize, right: usize, edges: Vec<EdgeSpec> },
    BipartiteMatching { left: usize, right: usize, edges: Vec<EdgeSpec> },
}

fn edges_to_core(edges: &[EdgeSpec]) -> Vec<BipartiteEdge> {
    edges
        .iter()
        .map(|e| BipartiteEdge {
            left: e.left,
            right: e.right,
            left_ordinal: e.left_ordinal,
            right_ordinal: e.right_ordinal,
        })
        .collect()
}

fn edges_from_core(g: &BipartiteGraph) -> Vec<EdgeSpec> {
    g.edges()
        .iter()
        .map(|e| EdgeSpec {
            left: e.left,
            right: e.right,
            left_ordinal: e.left_ordinal,
            right_ordinal: e.right_ordinal,
        })
        .collect()
}

impl EnvSpec {
    pub fn build(&self) -> Result<Environment> {
        Ok(match self {
            EnvSpec::Uniform { n, k } => Environment::uniform(*n, *k),
            EnvSpec::Partition { n, blocks, capacities } => {
                Environment::partition(*n, blocks.clone(), capacities.clone())?
            }
            EnvSpec::Laminar { n, family, capacities } => {
                Environment::laminar(*n, family.clone(), capacities.clone())?
            }
            EnvSpec::Graphic { vertices, edges } => {
                Environment::graphic(Graph::new(*vertices, edges.clone())?)
            }
            EnvSpec::Transversal { left, right, edges } => Environment::transversal(
                BipartiteGraph::with_ordinals(*left, *right, edges_to_core(edges))?,
            ),
            EnvSpec::BipartiteMatching { left, right, edges } => Environment::bipartite_matching(
                BipartiteGraph::with_ordinals(*left, *right, edges_to_core(edges))?,
            ),
        })
    }

    pub fn from_env(env: &Environment) -> EnvSpec {
        match env.kind() {
            EnvKind::Uniform { k } => EnvSpec::Uniform { n: env.n(), k: *k },
            EnvKind::Partition { blocks, capacities } => EnvSpec::Partition {
                n: env.n(),
                blocks: blocks.clone(),
                capacities: capacities.clone(),
            },
            EnvKind::Laminar { family, capacities } => EnvSpec::Laminar {
                n: env.n(),
                family: family.clone(),
                capacities: capacities.clone(),
            },
            EnvKind::Graphic(g) => {
                EnvSpec::Graphic { vertices: g.vertices, edges: g.edges.clone() }
            }
            EnvKind::Transversal(g) => EnvSpec::Transversal {
                left: g.left_count(),
                right: g.right_count(),
                edges: edges_from_core(g),
            },
            EnvKind::BipartiteMatching(g) => EnvSpec::BipartiteMatching {
                left: g.left_count(),
                right: g.right_count(),
                edges: edges_from_core(g),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum MarginalSpec {
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    PointMass { value: f64 },
    TruncatedEqualRevenue { cap: f64 },
    Empirical { atoms: Vec<(f64, f64)> },
}

impl MarginalSpec {
    pub fn build(&self) -> Marginal {
        match self.clone() {
            MarginalSpec::Uniform { lo, hi } => Marginal::Uniform { lo, hi },
            MarginalSpec::Exponential { rate } => Marginal::Exponential { rate },
            MarginalSpec::PointMass { value } => Marginal::PointMass { value },
            MarginalSpec::TruncatedEqualRevenue { cap } => {
                Marginal::TruncatedEqualRevenue { cap }
            }
            MarginalSpec::Empirical { atoms } => Marginal::Empirical { atoms },
        }
    }
}

/// `{family, n}` for i.i.d. marginals or an explicit per-element list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistSpec {
    Iid { family: MarginalSpec, n: usize },
    PerElement { marginals: Vec<MarginalSpec> },
}

impl DistSpec {
    pub fn build(&self) -> Result<ProductDistribution> {
        Ok(match self {
            DistSpec::Iid { family, n } => ProductDistribution::iid(family.build(), *n)?,
            DistSpec::PerElement { marginals } => {
                ProductDistribution::new(marginals.iter().map(MarginalSpec::build).collect())?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum OrderSpec {
    Increasing,
    Decreasing,
    Random,
    Fixed { permutation: Vec<usize> },
    /// Search all n! orders for the welfare-minimizing one (n <= 8).
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReserveKindSpec {
    None,
    Monopoly,
    SingleSample,
    Quantile,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReserveModeSpec {
    Lazy,
    Eager,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReserveSpec {
    pub kind: ReserveKindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantile: Option<f64>,
    pub mode: ReserveModeSpec,
}

impl ReserveSpec {
    pub fn build(&self) -> Result<ReservePolicy> {
        let kind = match self.kind {
            ReserveKindSpec::None => ReserveKind::None,
            ReserveKindSpec::Monopoly => ReserveKind::Monopoly,
            ReserveKindSpec::SingleSample => ReserveKind::SingleSample,
            ReserveKindSpec::Quantile => ReserveKind::Quantile(
                self.quantile.ok_or_else(|| invalid("quantile reserves need a `quantile`"))?,
            ),
        };
        let mode = match self.mode {
            ReserveModeSpec::Lazy => ReserveMode::Lazy,
            ReserveModeSpec::Eager => ReserveMode::Eager,
        };
        let policy = ReservePolicy { kind, mode };
        policy.validate()?;
        Ok(policy)
    }
}

/// Configuration switches for the transversal algorithm's unspecified
/// choices: the auxiliary-matching build order and the right-vertex ranking
/// (input order of R when absent).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_phase_order: Option<SampleOrderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleOrderSpec {
    DecreasingValue,
    InputOrder,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub environment: EnvSpec,
    pub distribution: DistSpec,
    /// Algorithm name, or absent for a benchmark-only run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    pub order: OrderSpec,
    pub trials: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reserve: Option<ReserveSpec>,
    /// Acceptance coin probability for the priced matching rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transversal: Option<TransversalOptions>,
    /// Output path prefix; `<prefix>.json` and `<prefix>.csv` are written.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if matches!(self.order, OrderSpec::Exhaustive) {
            let n = self.environment.build()?.n();
            if n > 8 {
                return Err(invalid("exhaustive order search is capped at n = 8"));
            }
        }
        if let OrderSpec::Fixed { permutation } = &self.order {
            let n = self.environment.build()?.n();
            let mut seen = vec![false; n];
            if permutation.len() != n
                || permutation.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
            {
                return Err(invalid("fixed order must be a permutation of 0..n"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn environment_specs_round_trip() {
        let specs = vec![
            serde_json::json!({"kind": "uniform", "n": 6, "k": 2}),
            serde_json::json!({"kind": "partition", "n": 4, "blocks": [[0, 1], [2, 3]], "capacities": [1, 2]}),
            serde_json::json!({"kind": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2]]}),
            serde_json::json!({
                "kind": "bipartite-matching", "left": 2, "right": 2,
                "edges": [
                    {"left": 0, "right": 0, "leftOrdinal": 0, "rightOrdinal": 0},
                    {"left": 1, "right": 1, "leftOrdinal": 0, "rightOrdinal": 0},
                ],
            }),
        ];
        for json in specs {
            let spec: EnvSpec = serde_json::from_value(json.clone()).unwrap();
            let env = spec.build().unwrap();
            let back = EnvSpec::from_env(&env);
            assert_eq!(spec, back);
            assert_eq!(serde_json::to_value(&back).unwrap(), json);
        }
    }

    #[test]
    fn distribution_specs_parse_both_shapes() {
        let iid: DistSpec = serde_json::from_value(serde_json::json!({
            "family": {"family": "uniform", "lo": 0.0, "hi": 1.0},
            "n": 4,
        }))
        .unwrap();
        assert_eq!(iid.build().unwrap().n(), 4);
        let explicit: DistSpec = serde_json::from_value(serde_json::json!({
            "marginals": [
                {"family": "exponential", "rate": 1.0},
                {"family": "point-mass", "value": 2.0},
            ],
        }))
        .unwrap();
        let dist = explicit.build().unwrap();
        assert_eq!(dist.n(), 2);
        assert!(!dist.is_iid());
    }

    #[test]
    fn validation_catches_bad_orders() {
        let config = ExperimentConfig {
            environment: EnvSpec::Uniform { n: 12, k: 2 },
            distribution: DistSpec::Iid {
                family: MarginalSpec::Uniform { lo: 0.0, hi: 1.0 },
                n: 12,
            },
            algorithm: None,
            order: OrderSpec::Exhaustive,
            trials: 1,
            seed: 0,
            reserve: None,
            coin_prob: None,
            transversal: None,
            output: None,
        };
        assert!(config.validate().is_err());
    }
}
