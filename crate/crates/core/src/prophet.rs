//! Sample-fed online selection algorithms.
//!
//! Three routes produce a prophet-style run from limited distributional
//! information:
//!
//! 1. [`reduce_to_prophet`] feeds a random half of the sample profile into
//!    any order-oblivious secretary algorithm as its observation phase and
//!    forwards the remaining arrivals untouched;
//! 2. [`rehearsal_thresholds`]/[`rehearsal_run`] implement the k-slot
//!    threshold rule for uniform matroids, with the top `k - floor(2*sqrt k)`
//!    sample values as distinct thresholds and the last of them repeated;
//! 3. [`p_matching`] prices every edge of a degree-d bipartite graph from
//!    its own sample profile via exact matching thresholds, then buys
//!    arrivals above price after a coin flip.
//!
//! Strict comparison (`value > threshold`) is used everywhere; ties resolve
//! against acceptance.

use alloc::vec;
use alloc::vec::Vec;

use crate::env::{EnvKind, Environment, FeasibleSet, WeightVector};
use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::secretary::{
    BlockwiseRank1, GvSecretary, OrderObliviousSecretary, SamplePhaseOrder, TransversalDp,
};

/// floor(2 * sqrt(k)), computed in integers.
pub fn floor_two_sqrt(k: usize) -> usize {
    (4 * k as u64).isqrt() as usize
}

/// How the adversary (or the mechanism) orders arrivals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrivalOrder {
    /// Values revealed smallest first — the worst case for the rehearsal rule.
    Increasing,
    Decreasing,
    Random,
    Fixed(Vec<usize>),
}

impl ArrivalOrder {
    /// The arrival permutation for one value draw.
    pub fn arrange(&self, values: &[f64], rng: &mut Stream) -> Vec<usize> {
        let n = values.len();
        match self {
            ArrivalOrder::Increasing => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
                idx
            }
            ArrivalOrder::Decreasing => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap().then(a.cmp(&b)));
                idx
            }
            ArrivalOrder::Random => rng.permutation(n),
            ArrivalOrder::Fixed(perm) => perm.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionOutcome {
    Accepted,
    Rejected,
    /// The element was already consumed as a sample-phase stand-in.
    Ignored,
}

/// One line of the per-run decision trace.
#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub element: usize,
    pub value: f64,
    pub threshold: Option<f64>,
    pub coin: Option<bool>,
    pub outcome: DecisionOutcome,
}

/// Result of one online run: the accepted set, the acceptance threshold per
/// winner (the posted price), which sample coordinates the algorithm
/// consumed, and the decision trace.
#[derive(Clone, Debug)]
pub struct ProphetOutcome {
    pub accepted: FeasibleSet,
    pub thresholds: Vec<(usize, f64)>,
    pub consumed: Vec<bool>,
    pub decisions: Vec<Decision>,
}

/// Black-box reduction from an order-oblivious secretary algorithm to a
/// single-sample online algorithm: draw `k` (the algorithm's sample-phase
/// size) indices at random, feed their sample values as the observation
/// phase, then ignore those indices online and forward everything else.
///
/// Samples of indices that stayed online are never looked at, so they remain
/// available for reserve prices downstream; `consumed` records exactly the
/// sample-phase indices.
pub fn reduce_to_prophet<S: OrderObliviousSecretary>(
    alg: &mut S,
    sample: &WeightVector,
    online: &[(usize, f64)],
    rng: &mut Stream,
) -> ProphetOutcome {
    let n = sample.len();
    let k = rng.binomial_half(n);
    let perm = rng.permutation(n);
    let mut in_sample = vec![false; n];
    for &j in perm.iter().take(k) {
        in_sample[j] = true;
    }
    let phase: Vec<(usize, f64)> = perm.iter().take(k).map(|&j| (j, sample[j])).collect();
    run_reduction(alg, &in_sample, &phase, online)
}

/// Reduction with a forced sample-phase set (sample values fed in index
/// order); the randomized entry point above is the normal route.
pub fn reduce_to_prophet_with_set<S: OrderObliviousSecretary>(
    alg: &mut S,
    in_sample: &[bool],
    sample: &WeightVector,
    online: &[(usize, f64)],
) -> ProphetOutcome {
    let phase: Vec<(usize, f64)> = (0..sample.len())
        .filter(|&j| in_sample[j])
        .map(|j| (j, sample[j]))
        .collect();
    run_reduction(alg, in_sample, &phase, online)
}

fn run_reduction<S: OrderObliviousSecretary>(
    alg: &mut S,
    in_sample: &[bool],
    phase: &[(usize, f64)],
    online: &[(usize, f64)],
) -> ProphetOutcome {
    alg.observe_samples(phase);
    let mut decisions = Vec::with_capacity(online.len());
    let mut thresholds = Vec::new();
    for &(i, v) in online {
        if in_sample[i] {
            decisions.push(Decision {
                element: i,
                value: v,
                threshold: None,
                coin: None,
                outcome: DecisionOutcome::Ignored,
            });
            continue;
        }
        let taken = alg.offer(i, v);
        if let Some(t) = taken {
            thresholds.push((i, t));
        }
        decisions.push(Decision {
            element: i,
            value: v,
            threshold: taken,
            coin: None,
            outcome: if taken.is_some() {
                DecisionOutcome::Accepted
            } else {
                DecisionOutcome::Rejected
            },
        });
    }
    ProphetOutcome {
        accepted: alg.accepted().iter().copied().collect(),
        thresholds,
        consumed: in_sample.to_vec(),
        decisions,
    }
}

/// Slot thresholds for the k-slot rehearsal rule: with
/// `q = max(1, k - floor(2*sqrt k))`, the top `q` sample values in order,
/// then the q-th value repeated through slot k.
pub fn rehearsal_thresholds(sample: &[f64], k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > sample.len() {
        return Err(Error::Invalid("rehearsal needs 1 <= k <= n sample values"));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let q = k.saturating_sub(floor_two_sqrt(k)).max(1);
    let mut thresholds = Vec::with_capacity(k);
    thresholds.extend_from_slice(&sorted[..q]);
    thresholds.resize(k, sorted[q - 1]);
    Ok(thresholds)
}

/// One rehearsal run over an arrival stream: an arriving value fills the
/// open slot with the highest threshold it strictly exceeds, or is
/// rejected when no such slot is open. The recorded price is the critical
/// bid — the lowest open threshold at arrival — since that is where the
/// arrival's win/lose step sits; which slot gets burned only shapes the
/// options left for later arrivals.
pub fn rehearsal_run(thresholds: &[f64], online: &[(usize, f64)]) -> Result<ProphetOutcome> {
    if thresholds.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Invalid("rehearsal thresholds must be non-increasing"));
    }
    let k = thresholds.len();
    let mut open: alloc::collections::BTreeSet<usize> = (0..k).collect();
    let mut accepted = Vec::new();
    let mut prices = Vec::new();
    let mut decisions = Vec::new();
    for &(i, v) in online {
        // the cheapest open slot decides winning; the highest-threshold
        // open slot strictly below v is the one that gets filled
        let posted = open.iter().next_back().map(|&m| thresholds[m]);
        let alpha = thresholds.partition_point(|&t| t >= v);
        let slot = open.range(alpha..).next().copied();
        if let Some(m) = slot {
            let price = posted.expect("a slot below v implies an open slot");
            open.remove(&m);
            accepted.push(i);
            prices.push((i, price));
        }
        decisions.push(Decision {
            element: i,
            value: v,
            threshold: posted,
            coin: None,
            outcome: if slot.is_some() {
                DecisionOutcome::Accepted
            } else {
                DecisionOutcome::Rejected
            },
        });
    }
    Ok(ProphetOutcome {
        accepted: accepted.iter().copied().collect(),
        thresholds: prices,
        consumed: Vec::new(),
        decisions,
    })
}

/// Which sample profile prices each edge: `EdgeIndex` uses profile
/// `edge_index(e) - 1` out of d^2 profiles (incident edges never share one);
/// `PerEdge` gives every edge its own profile out of |E|, the variant for
/// matchings without a useful degree bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleIndexing {
    EdgeIndex,
    PerEdge,
}

/// Priced bipartite matching: edge e is priced by the exact matching
/// threshold of its assigned sample profile, then accepted online iff a
/// 1/3 coin comes up, its value strictly beats the price, and the matching
/// stays valid. `greedy_prices` switches to greedy matching thresholds,
/// the comparison-based variant.
pub fn p_matching(
    env: &Environment,
    samples: &[WeightVector],
    online: &[(usize, f64)],
    coin_prob: f64,
    greedy_prices: bool,
    rng: &mut Stream,
) -> Result<ProphetOutcome> {
    p_matching_with(env, samples, online, coin_prob, greedy_prices, SampleIndexing::EdgeIndex, rng)
}

pub fn p_matching_with(
    env: &Environment,
    samples: &[WeightVector],
    online: &[(usize, f64)],
    coin_prob: f64,
    greedy_prices: bool,
    indexing: SampleIndexing,
    rng: &mut Stream,
) -> Result<ProphetOutcome> {
    let EnvKind::BipartiteMatching(graph) = env.kind() else {
        return Err(Error::Unsupported("p_matching needs a bipartite matching environment"));
    };
    let m = graph.edge_count();
    let d = graph.degree_bound();
    let needed = match indexing {
        SampleIndexing::EdgeIndex => d * d,
        SampleIndexing::PerEdge => m,
    };
    if samples.len() < needed {
        return Err(Error::SampleBudget { needed, got: samples.len() });
    }
    let mut prices = vec![0.0; m];
    for e in 0..m {
        let profile = match indexing {
            SampleIndexing::EdgeIndex => &samples[graph.edge_index(e) - 1],
            SampleIndexing::PerEdge => &samples[e],
        };
        if profile.len() != m {
            return Err(Error::Invalid("sample profile length mismatch"));
        }
        prices[e] = if greedy_prices {
            graph.greedy_edge_threshold(e, profile)
        } else {
            graph.edge_threshold(e, profile)?
        };
    }
    let mut guard = env.guard();
    let mut accepted = Vec::new();
    let mut thresholds = Vec::new();
    let mut decisions = Vec::new();
    for &(e, v) in online {
        let coin = rng.bernoulli(coin_prob);
        let take = coin && v > prices[e] && guard.try_insert(e);
        if take {
            accepted.push(e);
            thresholds.push((e, prices[e]));
        }
        decisions.push(Decision {
            element: e,
            value: v,
            threshold: Some(prices[e]),
            coin: Some(coin),
            outcome: if take { DecisionOutcome::Accepted } else { DecisionOutcome::Rejected },
        });
    }
    Ok(ProphetOutcome {
        accepted: accepted.iter().copied().collect(),
        thresholds,
        consumed: vec![true; env.n()],
        decisions,
    })
}

/// Algorithm selection, also used by the harness config files.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmName {
    Rank1,
    Blockwise,
    GraphicKp,
    TransversalDp,
    Gv,
    FreeOrder,
    Rehearsal,
    PMatching,
    PMatchingGreedy,
    /// One sample profile per edge instead of d^2 indexed profiles.
    PMatchingPerEdge,
}

impl AlgorithmName {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "rank1" => AlgorithmName::Rank1,
            "blockwise" => AlgorithmName::Blockwise,
            "graphic-kp" => AlgorithmName::GraphicKp,
            "transversal-dp" => AlgorithmName::TransversalDp,
            "gv" => AlgorithmName::Gv,
            "free-order" => AlgorithmName::FreeOrder,
            "rehearsal" => AlgorithmName::Rehearsal,
            "p-matching" => AlgorithmName::PMatching,
            "p-matching-greedy" => AlgorithmName::PMatchingGreedy,
            "p-matching-per-edge" => AlgorithmName::PMatchingPerEdge,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            AlgorithmName::Rank1 => "rank1",
            AlgorithmName::Blockwise => "blockwise",
            AlgorithmName::GraphicKp => "graphic-kp",
            AlgorithmName::TransversalDp => "transversal-dp",
            AlgorithmName::Gv => "gv",
            AlgorithmName::FreeOrder => "free-order",
            AlgorithmName::Rehearsal => "rehearsal",
            AlgorithmName::PMatching => "p-matching",
            AlgorithmName::PMatchingGreedy => "p-matching-greedy",
            AlgorithmName::PMatchingPerEdge => "p-matching-per-edge",
        }
    }

    pub fn all() -> &'static [AlgorithmName] {
        &[
            AlgorithmName::Rank1,
            AlgorithmName::Blockwise,
            AlgorithmName::GraphicKp,
            AlgorithmName::TransversalDp,
            AlgorithmName::Gv,
            AlgorithmName::FreeOrder,
            AlgorithmName::Rehearsal,
            AlgorithmName::PMatching,
            AlgorithmName::PMatchingGreedy,
            AlgorithmName::PMatchingPerEdge,
        ]
    }

    /// Number of full sample profiles the algorithm consumes.
    pub fn sample_budget(&self, env: &Environment) -> usize {
        let EnvKind::BipartiteMatching(g) = env.kind() else { return 1 };
        match self {
            AlgorithmName::PMatching | AlgorithmName::PMatchingGreedy => {
                g.degree_bound() * g.degree_bound()
            }
            AlgorithmName::PMatchingPerEdge => g.edge_count(),
            _ => 1,
        }
    }

    /// Whether the allocation depends only on the relative order of values
    /// and samples.
    pub fn comparison_based(&self) -> bool {
        !matches!(self, AlgorithmName::PMatching | AlgorithmName::PMatchingPerEdge)
    }
}

/// Run one algorithm on one draw: samples, values, and an arrival order
/// (ignored by the free-order algorithm, which picks its own). All
/// randomness comes from `rng`.
pub fn run_algorithm(
    env: &Environment,
    name: AlgorithmName,
    samples: &[WeightVector],
    values: &WeightVector,
    order: &[usize],
    rng: &mut Stream,
) -> Result<ProphetOutcome> {
    if values.len() != env.n() {
        return Err(Error::Invalid("value vector length mismatch"));
    }
    let budget = name.sample_budget(env);
    if samples.len() < budget {
        return Err(Error::SampleBudget { needed: budget, got: samples.len() });
    }
    let online: Vec<(usize, f64)> = order.iter().map(|&i| (i, values[i])).collect();
    match name {
        AlgorithmName::Rank1 => {
            // one block holding every element whose singleton is feasible,
            // so dependent elements (self-loops, unmatchable vertices) are
            // not candidates
            let candidates: Vec<usize> = (0..env.n())
                .filter(|&e| {
                    env.is_feasible(&FeasibleSet::from_unsorted(vec![e])).unwrap_or(false)
                })
                .collect();
            let mut alg = BlockwiseRank1::from_blocks(env.n(), &[candidates], None)?;
            Ok(reduce_to_prophet(&mut alg, &samples[0], &online, rng))
        }
        AlgorithmName::Blockwise => {
            let mut alg = match env.kind() {
                EnvKind::Partition { .. } => BlockwiseRank1::from_partition(env)?,
                EnvKind::Laminar { .. } => BlockwiseRank1::laminar_approx(env)?,
                EnvKind::Uniform { .. } => {
                    BlockwiseRank1::from_blocks(env.n(), &[(0..env.n()).collect()], Some(env.guard()))?
                }
                _ => return Err(Error::Unsupported("blockwise needs partition/laminar/uniform")),
            };
            Ok(reduce_to_prophet(&mut alg, &samples[0], &online, rng))
        }
        AlgorithmName::GraphicKp => {
            let EnvKind::Graphic(graph) = env.kind() else {
                return Err(Error::Unsupported("graphic-kp needs a graphic environment"));
            };
            let coin = rng.coin();
            let mut alg = BlockwiseRank1::graphic(graph, coin)?;
            Ok(reduce_to_prophet(&mut alg, &samples[0], &online, rng))
        }
        AlgorithmName::TransversalDp => {
            let EnvKind::Transversal(graph) = env.kind() else {
                return Err(Error::Unsupported("transversal-dp needs a transversal environment"));
            };
            let mut alg = TransversalDp::new(graph, None, SamplePhaseOrder::DecreasingValue)?;
            Ok(reduce_to_prophet(&mut alg, &samples[0], &online, rng))
        }
        AlgorithmName::Gv => {
            let mut alg = GvSecretary::new(env)?;
            Ok(reduce_to_prophet(&mut alg, &samples[0], &online, rng))
        }
        AlgorithmName::FreeOrder => {
            let in_sample: Vec<bool> = (0..env.n()).map(|_| rng.coin()).collect();
            let observed: Vec<f64> = (0..env.n())
                .map(|i| if in_sample[i] { samples[0][i] } else { values[i] })
                .collect();
            let out = crate::secretary::free_order_run(env, &in_sample, &observed)?;
            let decisions = out
                .thresholds
                .iter()
                .map(|&(e, t)| Decision {
                    element: e,
                    value: values[e],
                    threshold: Some(t),
                    coin: None,
                    outcome: DecisionOutcome::Accepted,
                })
                .collect();
            Ok(ProphetOutcome {
                accepted: out.accepted,
                thresholds: out.thresholds,
                consumed: in_sample,
                decisions,
            })
        }
        AlgorithmName::Rehearsal => {
            let EnvKind::Uniform { k } = *env.kind() else {
                return Err(Error::Unsupported("rehearsal needs a uniform environment"));
            };
            let thresholds = rehearsal_thresholds(&samples[0], k)?;
            let mut out = rehearsal_run(&thresholds, &online)?;
            out.consumed = vec![true; env.n()];
            Ok(out)
        }
        AlgorithmName::PMatching => p_matching(env, samples, &online, 1.0 / 3.0, false, rng),
        AlgorithmName::PMatchingGreedy => p_matching(env, samples, &online, 1.0 / 3.0, true, rng),
        AlgorithmName::PMatchingPerEdge => p_matching_with(
            env,
            samples,
            &online,
            1.0 / 3.0,
            false,
            SampleIndexing::PerEdge,
            rng,
        ),
    }
}

/// The environment families an algorithm binding targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvFamily {
    UniformK,
    Partition,
    Graphic,
    Transversal,
    LaminarApprox,
    GeneralIid,
    Matching,
}

impl EnvFamily {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "uniform-k" => EnvFamily::UniformK,
            "partition" => EnvFamily::Partition,
            "graphic" => EnvFamily::Graphic,
            "transversal" => EnvFamily::Transversal,
            "laminar-approx" => EnvFamily::LaminarApprox,
            "general-iid" => EnvFamily::GeneralIid,
            "matching" => EnvFamily::Matching,
            _ => return None,
        })
    }
}

/// A competitive-ratio claim carried as metadata next to a binding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RatioClaim {
    /// A plain constant lower bound on E[alg] / E[opt].
    Constant(f64),
    /// A per-block constant (partition-style analyses).
    PerBlock(f64),
    /// 1 - O(1/sqrt k): no single number at finite k.
    AsymptoticInK,
}

/// A prophet algorithm bound to an environment family, with its claimed
/// ratio attached as metadata. `asserted` marks whether the test suites
/// treat the ratio as a hard lower bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgorithmBinding {
    pub family: EnvFamily,
    pub algorithm: AlgorithmName,
    pub ratio: RatioClaim,
    pub asserted: bool,
}

pub const RATIO_GRAPHIC: f64 = 1.0 / 8.0;
pub const RATIO_TRANSVERSAL: f64 = 1.0 / 16.0;
pub const RATIO_MATCHING: f64 = 1.0 / 6.75;
pub const SQRT_3: f64 = 1.732_050_807_568_877_2;
pub const RATIO_LAMINAR: f64 = 1.0 / (12.0 * SQRT_3);
pub const RATIO_GENERAL_IID: f64 = (1.0 - 1.0 / core::f64::consts::E) / 20.0;
pub const RATIO_FREE_ORDER: f64 = 1.0 / 4.0;

/// The algorithm (and claimed ratio) serving each environment family.
pub fn prophet_for(family: EnvFamily) -> AlgorithmBinding {
    match family {
        EnvFamily::UniformK => AlgorithmBinding {
            family,
            algorithm: AlgorithmName::Rehearsal,
            ratio: RatioClaim::AsymptoticInK,
            asserted: false,
        },
        EnvFamily::Partition => AlgorithmBinding {
            family,
            algorithm: AlgorithmName::Blockwise,
            ratio: RatioClaim::PerBlock(0.25),
            asserted: true,
        },
        EnvFamily::Graphic => AlgorithmBinding {
            family,
            algorithm: AlgorithmName::GraphicKp,
            ratio: RatioClaim::Constant(RATIO_GRAPHIC),
            asserted: true,
        },
        EnvFamily::Transversal => AlgorithmBinding {
            family,
            algorithm: AlgorithmName::TransversalDp,
            ratio: RatioClaim::Constant(RATIO_TRANSVERSAL),
            asserted: true,
        },
        EnvFamily::LaminarApprox => AlgorithmBinding {
            family,
            algorithm: AlgorithmName::Blockwise,
            ratio: RatioClaim::Constant(RATIO_LAMINAR),
            asserted: false, // block decomposition approximates the cited algorithm
        },
        EnvFamily::GeneralIid => AlgorithmBinding {
            family,
            algorithm: AlgorithmName::Gv,
            ratio: RatioClaim::Constant(RATIO_GENERAL_IID),
            asserted: true,
        },
        EnvFamily::Matching => AlgorithmBinding {
            family,
            algorithm: AlgorithmName::PMatching,
            ratio: RatioClaim::Constant(RATIO_MATCHING),
            asserted: true,
        },
    }
}
