//! Property tests: downward closure, quantile/CDF inversion,
//! irrevocability of online decisions, and value monotonicity.

use proptest::prelude::*;

use prophet_core::dist::Marginal;
use prophet_core::env::{Environment, FeasibleSet, Graph};
use prophet_core::graph::BipartiteGraph;
use prophet_core::prophet::{run_algorithm, AlgorithmName, DecisionOutcome};
use prophet_core::{Stream, WeightVector};

fn arb_environment() -> impl Strategy<Value = Environment> {
    prop_oneof![
        (1usize..10, 1usize..5).prop_map(|(n, k)| Environment::uniform(n, k)),
        (2usize..8, 1usize..4).prop_map(|(n, cut)| {
            let cut = cut.min(n - 1);
            Environment::partition(
                n,
                vec![(0..cut).collect(), (cut..n).collect()],
                vec![1, 2],
            )
            .unwrap()
        }),
        proptest::collection::vec((0usize..5, 0usize..5), 1..8).prop_map(|pairs| {
            let edges: Vec<(usize, usize)> =
                pairs.into_iter().filter(|&(a, b)| a != b).collect();
            if edges.is_empty() {
                Environment::uniform(1, 1)
            } else {
                Environment::graphic(Graph::new(5, edges).unwrap())
            }
        }),
        proptest::collection::vec((0usize..4, 0usize..4), 1..8).prop_map(|pairs| {
            Environment::bipartite_matching(BipartiteGraph::new(4, 4, &pairs).unwrap())
        }),
    ]
}

proptest! {
    /// Any subset of a feasible set is feasible.
    #[test]
    fn downward_closure(env in arb_environment(), seed in 0u64..1000) {
        let mut rng = Stream::new(seed, 0);
        let n = env.n();
        let order = rng.permutation(n);
        let mut guard = env.guard();
        let feasible: FeasibleSet = order.into_iter().filter(|&e| guard.try_insert(e)).collect();
        prop_assert!(env.is_feasible(&feasible).unwrap());
        let sub: FeasibleSet = feasible.iter().filter(|_| rng.coin()).collect();
        prop_assert!(env.is_feasible(&sub).unwrap());
    }

    /// quantile(cdf(x)) = x on continuous supports away from the far tail.
    #[test]
    fn quantile_inverts_cdf(
        lo in 0.0f64..2.0,
        width in 0.1f64..5.0,
        rate in 0.1f64..4.0,
        p in 0.001f64..0.999,
    ) {
        let uniform = Marginal::Uniform { lo, hi: lo + width };
        let x = uniform.quantile(p);
        prop_assert!((uniform.quantile(uniform.cdf(x)) - x).abs() <= 1e-9 * (1.0 + x.abs()));
        let exp = Marginal::Exponential { rate };
        let x = exp.quantile(p);
        prop_assert!((exp.quantile(exp.cdf(x)) - x).abs() <= 1e-9 * (1.0 + x.abs()));
    }

    /// The quantile function is the generalized inverse: F(quantile(p)) >= p.
    #[test]
    fn quantile_is_generalized_inverse(p in 0.0f64..=1.0) {
        let families = [
            Marginal::Uniform { lo: 0.0, hi: 2.0 },
            Marginal::TruncatedEqualRevenue { cap: 7.0 },
            Marginal::Empirical { atoms: vec![(1.0, 0.25), (2.0, 0.5), (5.0, 0.25)] },
            Marginal::PointMass { value: 3.0 },
        ];
        for m in families {
            let x = m.quantile(p);
            prop_assert!(m.cdf(x) >= p - 1e-9, "{m:?} at p={p}");
        }
    }
}

fn all_algorithms_for(env: &Environment) -> Vec<AlgorithmName> {
    use prophet_core::env::EnvKind;
    match env.kind() {
        EnvKind::Uniform { .. } => vec![
            AlgorithmName::Rank1,
            AlgorithmName::Blockwise,
            AlgorithmName::Gv,
            AlgorithmName::FreeOrder,
            AlgorithmName::Rehearsal,
        ],
        EnvKind::Partition { .. } | EnvKind::Laminar { .. } => {
            vec![AlgorithmName::Blockwise, AlgorithmName::Gv, AlgorithmName::FreeOrder]
        }
        EnvKind::Graphic(_) => {
            vec![AlgorithmName::GraphicKp, AlgorithmName::Gv, AlgorithmName::FreeOrder]
        }
        EnvKind::Transversal(_) => {
            vec![AlgorithmName::TransversalDp, AlgorithmName::Gv, AlgorithmName::FreeOrder]
        }
        EnvKind::BipartiteMatching(_) => {
            vec![AlgorithmName::PMatching, AlgorithmName::PMatchingGreedy]
        }
    }
}

fn test_environments() -> Vec<Environment> {
    vec![
        Environment::uniform(8, 3),
        Environment::partition(8, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]], vec![2, 1]).unwrap(),
        Environment::laminar(6, vec![vec![0, 1, 2], vec![0, 1, 2, 3, 4, 5]], vec![1, 3]).unwrap(),
        Environment::graphic(Graph::complete(4)),
        Environment::transversal(
            BipartiteGraph::new(5, 4, &[(0, 0), (0, 1), (1, 1), (2, 2), (3, 2), (3, 3), (4, 0)])
                .unwrap(),
        ),
        Environment::bipartite_matching(
            BipartiteGraph::new(3, 3, &[(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2)]).unwrap(),
        ),
    ]
}

/// Replaying a prefix of the arrival stream reproduces the prefix of the
/// decision log: decisions are irrevocable and online.
#[test]
fn decisions_are_irrevocable() {
    let mut case_rng = Stream::new(99, 0);
    let mut cases = 0;
    while cases < 2_000 {
        for env in test_environments() {
            for alg in all_algorithms_for(&env) {
                if alg == AlgorithmName::FreeOrder {
                    continue; // chooses its own order; no adversary stream
                }
                let n = env.n();
                let budget = alg.sample_budget(&env);
                let seed = case_rng.next_u64();
                let mut rng = Stream::new(seed, 0);
                let samples: Vec<WeightVector> = (0..budget)
                    .map(|_| {
                        WeightVector::new((0..n).map(|_| rng.next_f64()).collect()).unwrap()
                    })
                    .collect();
                let values =
                    WeightVector::new((0..n).map(|_| rng.next_f64()).collect()).unwrap();
                let order = rng.permutation(n);
                let mut run_rng = Stream::new(seed, 1);
                let full =
                    run_algorithm(&env, alg, &samples, &values, &order, &mut run_rng).unwrap();
                let cut = 1 + case_rng.next_below(n);
                let mut run_rng = Stream::new(seed, 1);
                let prefix =
                    run_algorithm(&env, alg, &samples, &values, &order[..cut], &mut run_rng)
                        .unwrap();
                assert_eq!(&full.decisions[..cut], &prefix.decisions[..]);
                cases += 1;
            }
        }
    }
}

/// Raising a single element's value, with everything else fixed (same
/// coins, same order), never flips that element from accepted to rejected.
#[test]
fn acceptance_is_monotone_in_own_value() {
    let mut case_rng = Stream::new(7_000, 0);
    let mut cases = 0;
    while cases < 10_000 {
        for env in test_environments() {
            for alg in all_algorithms_for(&env) {
                let n = env.n();
                let budget = alg.sample_budget(&env);
                let seed = case_rng.next_u64();
                let mut rng = Stream::new(seed, 0);
                let samples: Vec<WeightVector> = (0..budget)
                    .map(|_| {
                        WeightVector::new((0..n).map(|_| rng.next_f64()).collect()).unwrap()
                    })
                    .collect();
                let mut values: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
                let order = rng.permutation(n);
                let target = case_rng.next_below(n);

                let mut run_rng = Stream::new(seed, 1);
                let before = run_algorithm(
                    &env,
                    alg,
                    &samples,
                    &WeightVector::new(values.clone()).unwrap(),
                    &order,
                    &mut run_rng,
                )
                .unwrap();
                if !before.accepted.contains(target) {
                    cases += 1;
                    continue;
                }
                values[target] += 0.5 + case_rng.next_f64();
                let mut run_rng = Stream::new(seed, 1);
                let after = run_algorithm(
                    &env,
                    alg,
                    &samples,
                    &WeightVector::new(values.clone()).unwrap(),
                    &order,
                    &mut run_rng,
                )
                .unwrap();
                assert!(
                    after.accepted.contains(target),
                    "{}: raising element {target} lost its slot",
                    alg.as_str()
                );
                cases += 1;
            }
        }
    }
}

/// Decision traces mark ignored sample-phase elements and never accept an
/// element twice.
#[test]
fn traces_are_consistent() {
    let mut case_rng = Stream::new(12, 0);
    for _ in 0..500 {
        for env in test_environments() {
            for alg in all_algorithms_for(&env) {
                let n = env.n();
                let budget = alg.sample_budget(&env);
                let seed = case_rng.next_u64();
                let mut rng = Stream::new(seed, 0);
                let samples: Vec<WeightVector> = (0..budget)
                    .map(|_| {
                        WeightVector::new((0..n).map(|_| rng.next_f64()).collect()).unwrap()
                    })
                    .collect();
                let values =
                    WeightVector::new((0..n).map(|_| rng.next_f64()).collect()).unwrap();
                let order = rng.permutation(n);
                let out =
                    run_algorithm(&env, alg, &samples, &values, &order, &mut rng).unwrap();
                let accepted_in_trace: Vec<usize> = out
                    .decisions
                    .iter()
                    .filter(|d| d.outcome == DecisionOutcome::Accepted)
                    .map(|d| d.element)
                    .collect();
                let mut sorted = accepted_in_trace.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), accepted_in_trace.len());
                assert_eq!(out.accepted.items(), &sorted[..]);
                for d in &out.decisions {
                    if d.outcome == DecisionOutcome::Ignored {
                        assert!(out.consumed[d.element]);
                    }
                }
            }
        }
    }
}
