//! Monte-Carlo experiment runner: per-trial streams, adversarial order
//! strategies, paired offline benchmarks, and report emission.

use std::io::Write;
use std::time::Instant;

use prophet_core::mech::{draw_reserves, settle_lazy, Allocation, ReserveMode, ReservePolicy};
use prophet_core::prophet::{
    p_matching, reduce_to_prophet, run_algorithm, AlgorithmName, ArrivalOrder, Decision,
    DecisionOutcome, ProphetOutcome,
};
use prophet_core::secretary::{SamplePhaseOrder, TransversalDp};
use prophet_core::{Environment, ProductDistribution, Stream, WeightVector};
use serde::Serialize;

use crate::config::{ExperimentConfig, OrderSpec, SampleOrderSpec, TransversalOptions};
use crate::{invalid, stats, Result};

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub welfare: f64,
    pub revenue: f64,
    pub benchmark: f64,
    pub winners: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub mean_welfare: f64,
    pub mean_revenue: f64,
    pub mean_benchmark: f64,
    /// mean welfare / mean benchmark, with a paired delta-method CI.
    pub welfare_ratio: f64,
    pub welfare_ratio_ci_half: f64,
    pub revenue_ratio: f64,
    pub revenue_ratio_ci_half: f64,
    pub seed: u64,
    pub wall_clock_ms: u64,
    pub records: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Plot-ready per-trial CSV. Winners are space-separated element ids;
    /// the paired benchmark values live in the JSON report.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,welfare,revenue,winners\n");
        for r in &self.records {
            let winners: Vec<String> = r.winners.iter().map(|w| w.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.trial,
                r.welfare,
                r.revenue,
                winners.join(" ")
            ));
        }
        out
    }

    /// Write `<prefix>.json` and `<prefix>.csv`.
    pub fn write(&self, prefix: &str) -> Result<()> {
        let mut json = std::fs::File::create(format!("{prefix}.json"))?;
        json.write_all(self.to_json().as_bytes())?;
        let mut csv = std::fs::File::create(format!("{prefix}.csv"))?;
        csv.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// One decision per line: element, value, threshold/price, coin, decision.
pub fn decisions_to_jsonl(decisions: &[Decision]) -> String {
    let mut out = String::new();
    for d in decisions {
        let line = serde_json::json!({
            "index": d.element,
            "value": d.value,
            "threshold": d.threshold.filter(|t| t.is_finite()),
            "coin": d.coin,
            "decision": match d.outcome {
                DecisionOutcome::Accepted => "accept",
                DecisionOutcome::Rejected => "reject",
                DecisionOutcome::Ignored => "ignore",
            },
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

pub fn worker_count() -> usize {
    std::env::var("PROPHET_WORKERS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(1)
}

struct AlgorithmOptions<'a> {
    coin_prob: Option<f64>,
    transversal: Option<&'a TransversalOptions>,
}

fn execute(
    env: &Environment,
    alg: AlgorithmName,
    samples: &[WeightVector],
    values: &WeightVector,
    arrival: &[usize],
    options: &AlgorithmOptions<'_>,
    rng: &mut Stream,
) -> prophet_core::Result<ProphetOutcome> {
    match (alg, options.coin_prob) {
        (AlgorithmName::PMatching, Some(p)) | (AlgorithmName::PMatchingGreedy, Some(p)) => {
            let online: Vec<(usize, f64)> = arrival.iter().map(|&i| (i, values[i])).collect();
            let greedy = alg == AlgorithmName::PMatchingGreedy;
            p_matching(env, samples, &online, p, greedy, rng)
        }
        (AlgorithmName::TransversalDp, _) if options.transversal.is_some() => {
            let opts = options.transversal.expect("guarded");
            let prophet_core::env::EnvKind::Transversal(graph) = env.kind() else {
                return Err(prophet_core::Error::Unsupported(
                    "transversal-dp needs a transversal environment",
                ));
            };
            let order = match opts.sample_phase_order {
                Some(SampleOrderSpec::InputOrder) => SamplePhaseOrder::InputOrder,
                _ => SamplePhaseOrder::DecreasingValue,
            };
            let mut inner = TransversalDp::new(graph, opts.ranking.as_deref(), order)?;
            let online: Vec<(usize, f64)> = arrival.iter().map(|&i| (i, values[i])).collect();
            Ok(reduce_to_prophet(&mut inner, &samples[0], &online, rng))
        }
        _ => run_algorithm(env, alg, samples, values, arrival, rng),
    }
}

struct TrialSetup<'a> {
    env: &'a Environment,
    dist: &'a ProductDistribution,
    algorithm: Option<AlgorithmName>,
    order: &'a OrderSpec,
    policy: Option<ReservePolicy>,
    options: AlgorithmOptions<'a>,
    seed: u64,
}

fn run_trial(setup: &TrialSetup<'_>, trial: usize) -> Result<TrialRecord> {
    let env = setup.env;
    let mut rng = Stream::new(setup.seed, trial as u64);
    let budget = setup.algorithm.map_or(0, |a| a.sample_budget(env));
    let samples: Vec<WeightVector> = (0..budget).map(|_| setup.dist.sample(&mut rng)).collect();
    let values = setup.dist.sample(&mut rng);
    let (_, benchmark) = env.offline_opt(&values)?;

    let Some(alg) = setup.algorithm else {
        return Ok(TrialRecord { trial, welfare: 0.0, revenue: 0.0, benchmark, winners: vec![] });
    };

    // Pick the arrival order; the exhaustive adversary replays every
    // permutation with identical coins and keeps the welfare minimizer.
    let arrival: Vec<usize> = match setup.order {
        OrderSpec::Increasing => ArrivalOrder::Increasing.arrange(&values, &mut rng),
        OrderSpec::Decreasing => ArrivalOrder::Decreasing.arrange(&values, &mut rng),
        OrderSpec::Random => ArrivalOrder::Random.arrange(&values, &mut rng),
        OrderSpec::Fixed { permutation } => permutation.clone(),
        OrderSpec::Exhaustive => {
            let mut best: Option<(f64, Vec<usize>)> = None;
            for order in permutations(env.n()) {
                let mut probe = rng.clone();
                let out =
                    execute(env, alg, &samples, &values, &order, &setup.options, &mut probe)?;
                let welfare = out.accepted.weight(&values);
                if best.as_ref().is_none_or(|(w, _)| welfare < *w) {
                    best = Some((welfare, order));
                }
            }
            best.expect("n >= 1").1
        }
    };

    let policy = setup.policy.unwrap_or(ReservePolicy::none());
    let outcome = match policy.mode {
        ReserveMode::Lazy => {
            let out = execute(env, alg, &samples, &values, &arrival, &setup.options, &mut rng)?;
            let ledger = if budget == 1 { Some((&samples[0], &out.consumed[..])) } else { None };
            let reserves = draw_reserves(&policy, setup.dist, ledger, &mut rng)?;
            settle_lazy(&Allocation { winners: out.thresholds }, &values, &reserves)
        }
        ReserveMode::Eager => {
            let reserves = draw_reserves(&policy, setup.dist, None, &mut rng)?;
            prophet_core::mech::apply_reserves(
                |mask| {
                    let active: Vec<usize> =
                        arrival.iter().copied().filter(|&i| mask[i]).collect();
                    let out =
                        execute(env, alg, &samples, &values, &active, &setup.options, &mut rng)?;
                    Ok(Allocation { winners: out.thresholds })
                },
                &values,
                &reserves,
                ReserveMode::Eager,
            )?
        }
    };
    Ok(TrialRecord {
        trial,
        welfare: outcome.welfare,
        revenue: outcome.revenue,
        benchmark,
        winners: outcome.winners.items().to_vec(),
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let env = config.environment.build()?;
    let dist = config.distribution.build()?;
    if dist.n() != env.n() {
        return Err(invalid(format!(
            "distribution covers {} elements but the environment has {}",
            dist.n(),
            env.n()
        )));
    }
    let algorithm = match &config.algorithm {
        None => None,
        Some(name) => Some(
            AlgorithmName::parse(name)
                .ok_or_else(|| invalid(format!("unknown algorithm `{name}`")))?,
        ),
    };
    let policy = config.reserve.as_ref().map(|r| r.build()).transpose()?;
    let setup = TrialSetup {
        env: &env,
        dist: &dist,
        algorithm,
        order: &config.order,
        policy,
        options: AlgorithmOptions {
            coin_prob: config.coin_prob,
            transversal: config.transversal.as_ref(),
        },
        seed: config.seed,
    };

    let workers = worker_count().min(config.trials.max(1));
    let records: Vec<TrialRecord> = if workers <= 1 {
        (0..config.trials).map(|t| run_trial(&setup, t)).collect::<Result<_>>()?
    } else {
        let chunk = config.trials.div_ceil(workers);
        let mut chunks: Vec<Result<Vec<TrialRecord>>> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..workers {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(config.trials);
                let setup = &setup;
                handles
                    .push(scope.spawn(move || (lo..hi).map(|t| run_trial(setup, t)).collect()));
            }
            for handle in handles {
                chunks.push(handle.join().expect("worker panicked"));
            }
        });
        let mut all = Vec::with_capacity(config.trials);
        for chunk in chunks {
            all.extend(chunk?);
        }
        all
    };

    let welfare: Vec<f64> = records.iter().map(|r| r.welfare).collect();
    let revenue: Vec<f64> = records.iter().map(|r| r.revenue).collect();
    let benchmark: Vec<f64> = records.iter().map(|r| r.benchmark).collect();
    let (welfare_ratio, welfare_se) = stats::ratio_of_means(&welfare, &benchmark);
    let (revenue_ratio, revenue_se) = stats::ratio_of_means(&revenue, &benchmark);
    Ok(ExperimentReport {
        config: config.clone(),
        mean_welfare: stats::mean(&welfare),
        mean_revenue: stats::mean(&revenue),
        mean_benchmark: stats::mean(&benchmark),
        welfare_ratio,
        welfare_ratio_ci_half: 1.96 * welfare_se,
        revenue_ratio,
        revenue_ratio_ci_half: 1.96 * revenue_se,
        seed: config.seed,
        wall_clock_ms: started.elapsed().as_millis() as u64,
        records,
    })
}

/// All permutations of 0..n (Heap's algorithm); n <= 8 by config validation.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap(n, &mut items, &mut out);
    out
}
