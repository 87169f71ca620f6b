//! Posted-price mechanisms built on the online allocation rules.
//!
//! Every algorithm in [`prophet`](crate::prophet) allocates by comparing an
//! arriving value against a threshold that does not depend on that value, so
//! the unique truthful payment is the threshold itself (clamped at zero).
//! Reserve prices compose either lazily (run, then drop winners below
//! reserve, charging `max(threshold, reserve)`) or eagerly (drop bidders
//! below reserve first). Sample reserves prefer the unconsumed coordinates
//! of the algorithm's own sample profile, which the reduction never looks
//! at for online elements.

use alloc::vec;
use alloc::vec::Vec;

use crate::dist::{Marginal, ProductDistribution};
use crate::env::{Environment, FeasibleSet, WeightVector};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::prophet::{run_algorithm, AlgorithmName, ArrivalOrder};
use crate::rng::Stream;

/// Payment of a step allocation rule: the threshold when served, else 0.
pub fn threshold_payment(accepted: bool, threshold: f64) -> f64 {
    if accepted {
        threshold.max(0.0)
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReserveKind {
    None,
    Monopoly,
    SingleSample,
    Quantile(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReserveMode {
    Lazy,
    Eager,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReservePolicy {
    pub kind: ReserveKind,
    pub mode: ReserveMode,
}

impl ReservePolicy {
    pub fn none() -> Self {
        ReservePolicy { kind: ReserveKind::None, mode: ReserveMode::Lazy }
    }

    pub fn validate(&self) -> Result<()> {
        if let ReserveKind::Quantile(p) = self.kind {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Invalid("reserve quantile must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Winners of an allocation run with their acceptance thresholds.
#[derive(Clone, Debug, Default)]
pub struct Allocation {
    pub winners: Vec<(usize, f64)>,
}

#[derive(Clone, Debug)]
pub struct MechanismOutcome {
    pub winners: FeasibleSet,
    pub payments: Vec<(usize, f64)>,
    pub welfare: f64,
    pub revenue: f64,
}

impl MechanismOutcome {
    fn settle(kept: Vec<(usize, f64)>, values: &[f64], reserves: &[f64]) -> Self {
        let mut payments = Vec::with_capacity(kept.len());
        let mut welfare = 0.0;
        let mut revenue = 0.0;
        for &(i, threshold) in &kept {
            let pay = threshold_payment(true, threshold).max(reserves[i]);
            payments.push((i, pay));
            welfare += values[i];
            revenue += pay;
        }
        MechanismOutcome {
            winners: kept.iter().map(|&(i, _)| i).collect(),
            payments,
            welfare,
            revenue,
        }
    }
}

/// Lazy composition: drop winners whose value misses their reserve and
/// charge the survivors `max(threshold, reserve)`.
pub fn settle_lazy(alloc: &Allocation, values: &[f64], reserves: &[f64]) -> MechanismOutcome {
    let kept: Vec<(usize, f64)> =
        alloc.winners.iter().copied().filter(|&(i, _)| values[i] >= reserves[i]).collect();
    MechanismOutcome::settle(kept, values, reserves)
}

/// Run an allocation under a reserve policy. `run` executes the allocation
/// on a participation mask; lazily it runs everyone and filters afterwards,
/// eagerly the mask removes under-reserve bidders up front.
pub fn apply_reserves<F>(
    run: F,
    values: &[f64],
    reserves: &[f64],
    mode: ReserveMode,
) -> Result<MechanismOutcome>
where
    F: FnOnce(&[bool]) -> Result<Allocation>,
{
    match mode {
        ReserveMode::Lazy => {
            let alloc = run(&vec![true; values.len()])?;
            Ok(settle_lazy(&alloc, values, reserves))
        }
        ReserveMode::Eager => {
            let mask: Vec<bool> =
                values.iter().zip(reserves).map(|(&v, &r)| v >= r).collect();
            let alloc = run(&mask)?;
            Ok(MechanismOutcome::settle(alloc.winners, values, reserves))
        }
    }
}

/// Per-bidder reserve prices. Single-sample reserves reuse the unconsumed
/// coordinates of `ledger` when available and draw fresh otherwise.
pub fn draw_reserves(
    policy: &ReservePolicy,
    dist: &ProductDistribution,
    ledger: Option<(&WeightVector, &[bool])>,
    rng: &mut Stream,
) -> Result<Vec<f64>> {
    policy.validate()?;
    let n = dist.n();
    match policy.kind {
        ReserveKind::None => Ok(vec![0.0; n]),
        ReserveKind::Monopoly => {
            (0..n).map(|i| dist.marginal(i).monopoly_reserve()).collect()
        }
        ReserveKind::SingleSample => Ok((0..n)
            .map(|i| match ledger {
                Some((sample, consumed)) if !consumed[i] => sample[i],
                _ => dist.marginal(i).sample(rng),
            })
            .collect()),
        ReserveKind::Quantile(p) => Ok((0..n).map(|i| dist.marginal(i).quantile(p)).collect()),
    }
}

/// Mean with a 95% normal-approximation half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub ci_half: f64,
    pub trials: usize,
}

pub(crate) fn estimate(samples: &[f64]) -> Estimate {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    Estimate { mean, ci_half: 1.96 * libm::sqrt(var / n as f64), trials: n }
}

/// Virtual value with the atom conventions used by the benchmark: a point
/// mass carries its own value, as does the cap atom of the equal-revenue
/// family.
fn virtual_value_with_atoms(m: &Marginal, v: f64) -> Result<f64> {
    match m {
        Marginal::PointMass { .. } => Ok(v),
        _ => m.virtual_value(v),
    }
}

/// Monte-Carlo estimate of the optimal expected revenue: the expectation of
/// the maximum feasible clamped virtual surplus.
pub fn myerson_benchmark(
    env: &Environment,
    dist: &ProductDistribution,
    trials: usize,
    rng: &mut Stream,
) -> Result<Estimate> {
    if !dist.all_regular() {
        return Err(Error::NotRegular);
    }
    if dist.n() != env.n() {
        return Err(Error::Invalid("distribution size must match the environment"));
    }
    let mut per_trial = Vec::with_capacity(trials);
    for _ in 0..trials {
        let v = dist.sample(rng);
        let phi_plus: Vec<f64> = (0..env.n())
            .map(|i| virtual_value_with_atoms(dist.marginal(i), v[i]).map(|x| x.max(0.0)))
            .collect::<Result<_>>()?;
        let (_, surplus) = env.offline_opt(&phi_plus)?;
        per_trial.push(surplus);
    }
    Ok(estimate(&per_trial))
}

/// The single-dimensional surrogate of a unit-demand matching market: one
/// agent per present (buyer, item) pair, feasibility = the matchings of the
/// buyer-item graph.
#[derive(Clone, Debug)]
pub struct CopiesInstance {
    pub buyers: usize,
    pub items: usize,
    pub agents: Vec<(usize, usize)>,
    pub env: Environment,
    pub dist: ProductDistribution,
}

/// Split every buyer into one single-dimensional agent per item they value;
/// `marginals` is buyers x items row-major, `None` marking absent pairs.
pub fn build_copies(
    buyers: usize,
    items: usize,
    marginals: &[Option<Marginal>],
) -> Result<CopiesInstance> {
    if marginals.len() != buyers * items {
        return Err(Error::Invalid("need one marginal slot per (buyer, item) pair"));
    }
    let mut agents = Vec::new();
    let mut pairs = Vec::new();
    let mut agent_marginals = Vec::new();
    for b in 0..buyers {
        for j in 0..items {
            if let Some(m) = &marginals[b * items + j] {
                agents.push((b, j));
                pairs.push((b, j));
                agent_marginals.push(m.clone());
            }
        }
    }
    if agents.is_empty() {
        return Err(Error::Invalid("copies instance has no (buyer, item) pairs"));
    }
    let graph = BipartiteGraph::new(buyers, items, &pairs)?;
    Ok(CopiesInstance {
        buyers,
        items,
        agents,
        env: Environment::bipartite_matching(graph),
        dist: ProductDistribution::new(agent_marginals)?,
    })
}

/// One order-oblivious posted-price run on a copies instance: draw the
/// algorithm's sample budget and the values, allocate, then apply reserves.
/// Lazy single-sample reserves draw one extra profile beyond the budget.
pub fn opm_revenue_run(
    copies: &CopiesInstance,
    algorithm: AlgorithmName,
    policy: &ReservePolicy,
    order: &ArrivalOrder,
    rng: &mut Stream,
) -> Result<MechanismOutcome> {
    let env = &copies.env;
    let budget = algorithm.sample_budget(env);
    let samples: Vec<WeightVector> = (0..budget).map(|_| copies.dist.sample(rng)).collect();
    let values = copies.dist.sample(rng);
    let arrival = order.arrange(&values, rng);
    let reserves = draw_reserves(policy, &copies.dist, None, rng)?;
    apply_reserves(
        |mask| {
            let active: Vec<usize> =
                arrival.iter().copied().filter(|&i| mask[i]).collect();
            let out = run_algorithm(env, algorithm, &samples, &values, &active, rng)?;
            Ok(Allocation { winners: out.thresholds })
        },
        &values,
        &reserves,
        policy.mode,
    )
}

/// Sequential posted prices from the free-order algorithm: the mechanism
/// chooses its own processing order, prices winners at the spanning basis
/// value, and applies the reserve policy on top. Winner samples are never
/// consumed by the allocation, so single-sample reserves read them from the
/// ledger.
pub fn spm_free_order(
    env: &Environment,
    dist: &ProductDistribution,
    policy: &ReservePolicy,
    rng: &mut Stream,
) -> Result<MechanismOutcome> {
    if dist.n() != env.n() {
        return Err(Error::Invalid("distribution size must match the environment"));
    }
    let sample = dist.sample(rng);
    let values = dist.sample(rng);
    let in_sample: Vec<bool> = (0..env.n()).map(|_| rng.coin()).collect();
    let observed: Vec<f64> = (0..env.n())
        .map(|i| if in_sample[i] { sample[i] } else { values[i] })
        .collect();
    match policy.mode {
        ReserveMode::Lazy => {
            let out = crate::secretary::free_order_run(env, &in_sample, &observed)?;
            let reserves = draw_reserves(policy, dist, Some((&sample, &in_sample)), rng)?;
            Ok(settle_lazy(&Allocation { winners: out.thresholds }, &values, &reserves))
        }
        ReserveMode::Eager => {
            let reserves = draw_reserves(policy, dist, Some((&sample, &in_sample)), rng)?;
            apply_reserves(
                |mask| {
                    let out = crate::secretary::free_order_run_filtered(
                        env,
                        &in_sample,
                        &observed,
                        Some(mask),
                    )?;
                    Ok(Allocation { winners: out.thresholds })
                },
                &values,
                &reserves,
                ReserveMode::Eager,
            )
        }
    }
}

/// Claimed revenue ratio of a welfare-alpha mechanism with lazy sample
/// reserves: alpha/2 for i.i.d. regular marginals, alpha/(2e) for MHR.
pub fn revenue_ratio_for(alpha: f64, mhr: bool) -> f64 {
    if mhr {
        alpha / (2.0 * core::f64::consts::E)
    } else {
        alpha / 2.0
    }
}

/// Claimed ratios for the free-order posted-price mechanism.
pub const SPM_WELFARE_MHR: f64 = 0.125;
pub const SPM_REVENUE_MHR: f64 = 0.125 / core::f64::consts::E;
pub const SPM_REVENUE_IID_REGULAR: f64 = 0.125;

/// Selection-mass report for a comparison-based allocation: per-rank
/// selection frequencies under a fixed relative value order, checked to be
/// identical under two monotone value embeddings.
#[derive(Clone, Debug)]
pub struct ComparisonMassReport {
    /// Acceptance patterns agreed between the embeddings on every trial.
    pub matched: bool,
    /// q_j: selection frequency of the rank-j bidder (rank 0 = highest).
    pub selection_mass: Vec<f64>,
    /// Running sums of q_j.
    pub prefix_mass: Vec<f64>,
    /// J(i): the largest feasible subset of the top-i bidders.
    pub feasible_prefix: Vec<usize>,
}

/// Estimate the per-rank selection mass of a comparison-based algorithm:
/// element i always holds the (i+1)-st largest value, raw draws vary per
/// trial, and each trial runs twice — once on the raw uniforms and once on
/// their cubes — with identical coins.
pub fn comparison_mass_check(
    env: &Environment,
    algorithm: AlgorithmName,
    trials: usize,
    seed: u64,
) -> Result<ComparisonMassReport> {
    if !algorithm.comparison_based() {
        return Err(Error::Unsupported("the priced matching rule is not comparison-based"));
    }
    let n = env.n();
    let budget = algorithm.sample_budget(env);
    let mut counts = vec![0usize; n];
    let mut matched = true;
    let order: Vec<usize> = (0..n).collect();
    for t in 0..trials {
        let mut draw_rng = Stream::new(seed, 2 * t as u64);
        let mut raw_values: Vec<f64> = (0..n).map(|_| draw_rng.next_f64()).collect();
        raw_values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let raw_samples: Vec<Vec<f64>> =
            (0..budget).map(|_| (0..n).map(|_| draw_rng.next_f64()).collect()).collect();
        let mut accepted_patterns: Vec<Vec<usize>> = Vec::with_capacity(2);
        for cube in [false, true] {
            let embed = |x: f64| if cube { x * x * x } else { x };
            let values = WeightVector::new(raw_values.iter().map(|&x| embed(x)).collect())?;
            let samples: Vec<WeightVector> = raw_samples
                .iter()
                .map(|s| WeightVector::new(s.iter().map(|&x| embed(x)).collect()))
                .collect::<Result<_>>()?;
            let mut run_rng = Stream::new(seed, 2 * t as u64 + 1);
            let out = run_algorithm(env, algorithm, &samples, &values, &order, &mut run_rng)?;
            accepted_patterns.push(out.accepted.items().to_vec());
        }
        if accepted_patterns[0] != accepted_patterns[1] {
            matched = false;
        }
        for &i in &accepted_patterns[0] {
            counts[i] += 1;
        }
    }
    let selection_mass: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let mut prefix_mass = Vec::with_capacity(n);
    let mut acc = 0.0;
    for q in &selection_mass {
        acc += q;
        prefix_mass.push(acc);
    }
    let mut feasible_prefix = Vec::with_capacity(n);
    for i in 1..=n {
        let indicator: Vec<f64> = (0..n).map(|e| if e < i { 1.0 } else { 0.0 }).collect();
        let (_, w) = env.offline_opt(&indicator)?;
        feasible_prefix.push(libm::round(w) as usize);
    }
    Ok(ComparisonMassReport { matched, selection_mass, prefix_mass, feasible_prefix })
}
