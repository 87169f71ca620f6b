//! Order-oblivious secretary algorithms and the free-order matroid algorithm.
//!
//! Every algorithm here follows the same two-phase contract: it observes a
//! sample phase without accepting anything, then makes irrevocable accept /
//! reject decisions on the remaining elements in whatever order they show
//! up. That contract is exactly what the sample-fed reduction in
//! [`prophet`](crate::prophet) needs.
//!
//! Thresholds default to negative infinity when the sample phase is empty,
//! so the algorithms accept-first rather than stall.

use alloc::vec;
use alloc::vec::Vec;

use crate::env::{EnvKind, Environment, FeasibleSet, Graph, Guard};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::rng::Stream;

/// Sort items by decreasing weight, ties toward the smaller index.
pub(crate) fn weight_sorted_desc(w: &[f64], mut items: Vec<usize>) -> Vec<usize> {
    items.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap().then(a.cmp(&b)));
    items
}

/// The sample-phase/online contract shared by all order-oblivious
/// secretary algorithms.
pub trait OrderObliviousSecretary {
    /// Observe the sample phase. Called once, before any online offer.
    fn observe_samples(&mut self, samples: &[(usize, f64)]);

    /// Irrevocable decision on one arriving element; `Some(threshold)` when
    /// accepted, where the threshold is the lowest value that would still
    /// have been accepted in this position (used for posted prices).
    fn offer(&mut self, element: usize, value: f64) -> Option<f64>;

    fn accepted(&self) -> &[usize];
}

/// Classical single-choice secretary: threshold = max of the sample phase,
/// accept the first strict exceeder.
#[derive(Clone, Debug)]
pub struct Rank1Secretary {
    threshold: f64,
    done: bool,
    accepted: Vec<usize>,
}

impl Rank1Secretary {
    pub fn new() -> Self {
        Rank1Secretary { threshold: f64::NEG_INFINITY, done: false, accepted: Vec::new() }
    }
}

impl Default for Rank1Secretary {
    fn default() -> Self {
        Self::new()
    }
}

impl OrderObliviousSecretary for Rank1Secretary {
    fn observe_samples(&mut self, samples: &[(usize, f64)]) {
        for &(_, v) in samples {
            self.threshold = self.threshold.max(v);
        }
    }

    fn offer(&mut self, element: usize, value: f64) -> Option<f64> {
        if self.done || value <= self.threshold {
            return None;
        }
        self.done = true;
        self.accepted.push(element);
        Some(self.threshold)
    }

    fn accepted(&self) -> &[usize] {
        &self.accepted
    }
}

/// One independent rank-1 run per block of a partition of the universe.
/// Serves partition matroids directly, graphic matroids through the
/// orientation trick, and laminar matroids as a documented approximation
/// (blocks from the family's minimal sets plus a feasibility guard).
pub struct BlockwiseRank1<'a> {
    block_of: Vec<Option<usize>>,
    thresholds: Vec<f64>,
    filled: Vec<bool>,
    guard: Option<Guard<'a>>,
    accepted: Vec<usize>,
}

impl<'a> BlockwiseRank1<'a> {
    /// Explicit disjoint blocks; elements outside every block are never
    /// accepted. The optional guard adds an outer feasibility filter; a
    /// block whose exceeder is vetoed by the guard still burns its one slot.
    pub fn from_blocks(
        n: usize,
        blocks: &[Vec<usize>],
        guard: Option<Guard<'a>>,
    ) -> Result<Self> {
        let mut block_of = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::IndexOutOfRange { index: e, n });
                }
                if block_of[e].is_some() {
                    return Err(Error::Invalid("blocks must be disjoint"));
                }
                block_of[e] = Some(b);
            }
        }
        Ok(BlockwiseRank1 {
            block_of,
            thresholds: vec![f64::NEG_INFINITY; blocks.len()],
            filled: vec![false; blocks.len()],
            guard,
            accepted: Vec::new(),
        })
    }

    pub fn from_partition(env: &'a Environment) -> Result<Self> {
        let EnvKind::Partition { blocks, .. } = env.kind() else {
            return Err(Error::Invalid("blockwise from_partition needs a partition environment"));
        };
        Self::from_blocks(env.n(), blocks, None)
    }

    /// Laminar approximation: one block per minimal family set, singleton
    /// blocks for uncovered elements, and the full laminar guard on top.
    pub fn laminar_approx(env: &'a Environment) -> Result<Self> {
        let EnvKind::Laminar { family, .. } = env.kind() else {
            return Err(Error::Invalid("laminar_approx needs a laminar environment"));
        };
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, a) in family.iter().enumerate() {
            let a_sorted = {
                let mut s = a.clone();
                s.sort_unstable();
                s.dedup();
                s
            };
            let minimal = family.iter().enumerate().all(|(j, b)| {
                if i == j {
                    return true;
                }
                let mut b_sorted = b.clone();
                b_sorted.sort_unstable();
                b_sorted.dedup();
                let strictly_inside = b_sorted.len() < a_sorted.len()
                    && b_sorted.iter().all(|e| a_sorted.binary_search(e).is_ok());
                let duplicate_earlier = j < i && b_sorted == a_sorted;
                !strictly_inside && !duplicate_earlier
            });
            if minimal {
                blocks.push(a_sorted);
            }
        }
        let mut covered = vec![false; env.n()];
        for block in &blocks {
            for &e in block {
                covered[e] = true;
            }
        }
        for (e, seen) in covered.iter().enumerate() {
            if !seen {
                blocks.push(vec![e]);
            }
        }
        Self::from_blocks(env.n(), &blocks, Some(env.guard()))
    }

    /// Korula-Pal blocks for a graphic matroid: orient every edge low-to-high
    /// (coin = false) or high-to-low (coin = true) and group edges by the
    /// vertex they leave. At most one accepted edge leaves each vertex of an
    /// acyclic orientation, so the output is always a forest.
    pub fn graphic(graph: &Graph, coin: bool) -> Result<Self> {
        let n = graph.edges.len();
        let mut block_of = vec![None; n];
        for (e, &(u, v)) in graph.edges.iter().enumerate() {
            if u != v {
                block_of[e] = Some(if coin { u.max(v) } else { u.min(v) });
            }
        }
        Ok(BlockwiseRank1 {
            block_of,
            thresholds: vec![f64::NEG_INFINITY; graph.vertices],
            filled: vec![false; graph.vertices],
            guard: None,
            accepted: Vec::new(),
        })
    }

    pub fn block_of(&self, element: usize) -> Option<usize> {
        self.block_of[element]
    }
}

impl OrderObliviousSecretary for BlockwiseRank1<'_> {
    fn observe_samples(&mut self, samples: &[(usize, f64)]) {
        for &(e, v) in samples {
            if let Some(b) = self.block_of[e] {
                self.thresholds[b] = self.thresholds[b].max(v);
            }
        }
    }

    fn offer(&mut self, element: usize, value: f64) -> Option<f64> {
        let b = self.block_of[element]?;
        if self.filled[b] || value <= self.thresholds[b] {
            return None;
        }
        self.filled[b] = true;
        if let Some(guard) = &mut self.guard {
            if !guard.try_insert(element) {
                return None;
            }
        }
        self.accepted.push(element);
        Some(self.thresholds[b])
    }

    fn accepted(&self) -> &[usize] {
        &self.accepted
    }
}

/// Threshold algorithm for general matroids under i.i.d. values: observe the
/// sample phase, set the threshold to the (floor(rank/4) + 1)-st largest
/// sample value, then accept every strict exceeder that keeps the accepted
/// set independent. Matroids of rank below 12 fall back to the rank-1 rule.
pub struct GvSecretary<'a> {
    rank1: bool,
    threshold_rank: usize,
    threshold: f64,
    done: bool,
    guard: Guard<'a>,
    accepted: Vec<usize>,
}

impl<'a> GvSecretary<'a> {
    pub fn new(env: &'a Environment) -> Result<Self> {
        if !env.is_matroid() {
            return Err(Error::Unsupported("gv on a matching environment"));
        }
        let r = env.rank();
        Ok(GvSecretary {
            rank1: r < 12,
            threshold_rank: r / 4 + 1,
            threshold: f64::NEG_INFINITY,
            done: false,
            guard: env.guard(),
            accepted: Vec::new(),
        })
    }
}

impl OrderObliviousSecretary for GvSecretary<'_> {
    fn observe_samples(&mut self, samples: &[(usize, f64)]) {
        let mut values: Vec<f64> = samples.iter().map(|&(_, v)| v).collect();
        if self.rank1 {
            self.threshold =
                values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        } else {
            values.sort_by(|a, b| b.partial_cmp(a).unwrap());
            self.threshold =
                values.get(self.threshold_rank - 1).copied().unwrap_or(f64::NEG_INFINITY);
        }
    }

    fn offer(&mut self, element: usize, value: f64) -> Option<f64> {
        if (self.rank1 && self.done) || value <= self.threshold {
            return None;
        }
        if !self.guard.try_insert(element) {
            return None;
        }
        self.done = true;
        self.accepted.push(element);
        Some(self.threshold)
    }

    fn accepted(&self) -> &[usize] {
        &self.accepted
    }
}

/// Sample-phase processing order for the transversal algorithm's auxiliary
/// matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplePhaseOrder {
    DecreasingValue,
    InputOrder,
}

/// Dimitrov-Plaxton style transversal algorithm. The sample phase greedily
/// builds an auxiliary matching M0 against a fixed ranking of the right
/// vertices; each arriving left vertex targets its highest-ranked neighbour
/// not matched in M0 and is accepted iff that vertex is still free in the
/// real matching M1.
pub struct TransversalDp<'a> {
    graph: &'a BipartiteGraph,
    rank_of: Vec<usize>,
    m0: Vec<bool>,
    m1: Vec<bool>,
    order: SamplePhaseOrder,
    accepted: Vec<usize>,
}

impl<'a> TransversalDp<'a> {
    /// `ranking` lists right vertices from highest to lowest priority;
    /// defaults to the input order of R.
    pub fn new(
        graph: &'a BipartiteGraph,
        ranking: Option<&[usize]>,
        order: SamplePhaseOrder,
    ) -> Result<Self> {
        let r = graph.right_count();
        let mut rank_of: Vec<usize> = (0..r).collect();
        if let Some(ranking) = ranking {
            if ranking.len() != r {
                return Err(Error::Invalid("ranking must cover every right vertex"));
            }
            let mut seen = vec![false; r];
            for (pos, &v) in ranking.iter().enumerate() {
                if v >= r || seen[v] {
                    return Err(Error::Invalid("ranking must be a permutation of R"));
                }
                seen[v] = true;
                rank_of[v] = pos;
            }
        }
        Ok(TransversalDp {
            graph,
            rank_of,
            m0: vec![false; r],
            m1: vec![false; r],
            order,
            accepted: Vec::new(),
        })
    }

    fn best_free(&self, l: usize, used: &[bool]) -> Option<usize> {
        self.graph
            .edges_at_left(l)
            .iter()
            .map(|&e| self.graph.edge(e).right)
            .filter(|&r| !used[r])
            .min_by_key(|&r| self.rank_of[r])
    }
}

impl OrderObliviousSecretary for TransversalDp<'_> {
    fn observe_samples(&mut self, samples: &[(usize, f64)]) {
        let mut ordered: Vec<(usize, f64)> = samples.to_vec();
        if self.order == SamplePhaseOrder::DecreasingValue {
            ordered.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        }
        for (l, _) in ordered {
            if let Some(r) = self.best_free(l, &self.m0) {
                self.m0[r] = true;
            }
        }
    }

    fn offer(&mut self, element: usize, _value: f64) -> Option<f64> {
        let r = self.best_free(element, &self.m0)?;
        if self.m1[r] {
            return None;
        }
        self.m1[r] = true;
        self.accepted.push(element);
        // the decision never looks at the arriving value, so the lowest
        // winning bid is zero
        Some(0.0)
    }

    fn accepted(&self) -> &[usize] {
        &self.accepted
    }
}

/// Result of one free-order run: the accepted set plus the acceptance
/// threshold charged to each winner (negative infinity for elements that
/// were accepted with no spanning basis element).
#[derive(Clone, Debug)]
pub struct FreeOrderOutcome {
    pub accepted: FeasibleSet,
    pub thresholds: Vec<(usize, f64)>,
    pub sample_set: Vec<bool>,
}

/// Free-order matroid algorithm: split the universe into a sample half S and
/// a processing half P, compute the max-weight basis X1 >= X2 >= ... of S,
/// then walk P in nested-span order — elements newly spanned by {X1..Xi}
/// are offered at threshold value(Xi) — and finally the elements S never
/// spans, offered unconditionally. Acceptance always keeps the set
/// independent.
pub fn free_order_run(
    env: &Environment,
    in_sample: &[bool],
    observed: &[f64],
) -> Result<FreeOrderOutcome> {
    free_order_run_filtered(env, in_sample, observed, None)
}

/// Free-order run where elements outside `active` are never offered
/// (eager-reserve filtering); samples still inform the thresholds.
pub fn free_order_run_filtered(
    env: &Environment,
    in_sample: &[bool],
    observed: &[f64],
    active: Option<&[bool]>,
) -> Result<FreeOrderOutcome> {
    if !env.is_matroid() {
        return Err(Error::Unsupported("free-order on a matching environment"));
    }
    let n = env.n();
    if in_sample.len() != n || observed.len() != n {
        return Err(Error::Invalid("free-order inputs must cover the universe"));
    }
    let sample: Vec<usize> = (0..n).filter(|&i| in_sample[i]).collect();
    let rest: Vec<usize> = (0..n)
        .filter(|&i| !in_sample[i] && active.is_none_or(|m| m[i]))
        .collect();
    let basis = env.max_weight_basis(observed, sample);
    let basis_by_weight = weight_sorted_desc(observed, basis.items().to_vec());

    let mut span_guard = env.guard();
    let mut accept_guard = env.guard();
    let mut decided = vec![false; n];
    let mut accepted = Vec::new();
    let mut thresholds = Vec::new();
    for &x in &basis_by_weight {
        let inserted = span_guard.try_insert(x);
        debug_assert!(inserted, "basis elements are independent");
        let threshold = observed[x];
        for &y in &rest {
            if !decided[y] && !span_guard.can_insert(y) {
                decided[y] = true;
                if observed[y] > threshold && accept_guard.try_insert(y) {
                    accepted.push(y);
                    thresholds.push((y, threshold));
                }
            }
        }
    }
    for &y in &rest {
        if !decided[y] && accept_guard.try_insert(y) {
            accepted.push(y);
            thresholds.push((y, f64::NEG_INFINITY));
        }
    }
    Ok(FreeOrderOutcome {
        accepted: FeasibleSet::from_unsorted(accepted),
        thresholds,
        sample_set: in_sample.to_vec(),
    })
}

/// Secretary form: the sample half is observed at its true weights.
pub fn free_order_secretary(
    env: &Environment,
    w: &[f64],
    rng: &mut Stream,
) -> Result<FreeOrderOutcome> {
    let in_sample: Vec<bool> = (0..env.n()).map(|_| rng.coin()).collect();
    free_order_run(env, &in_sample, w)
}

/// Cost of `y` with respect to `set`: the weight of the last element of the
/// shortest weight-descending prefix of `set` that spans `y`, or 0 when no
/// prefix does.
pub fn span_cost(env: &Environment, y: usize, set: &[usize], w: &[f64]) -> Result<f64> {
    if !env.is_matroid() {
        return Err(Error::Unsupported("span cost on a matching environment"));
    }
    if y >= env.n() {
        return Err(Error::IndexOutOfRange { index: y, n: env.n() });
    }
    let order = weight_sorted_desc(w, set.to_vec());
    let mut guard = env.guard();
    if !guard.can_insert(y) {
        return Ok(0.0); // dependent singleton: spanned before any prefix
    }
    for &z in &order {
        guard.try_insert(z);
        if z == y || !guard.can_insert(y) {
            return Ok(w[z]);
        }
    }
    Ok(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offer_all<S: OrderObliviousSecretary>(alg: &mut S, online: &[(usize, f64)]) -> Vec<usize> {
        for &(e, v) in online {
            alg.offer(e, v);
        }
        alg.accepted().to_vec()
    }

    #[test]
    fn rank1_examples() {
        let mut alg = Rank1Secretary::new();
        alg.observe_samples(&[(0, 5.0)]);
        assert_eq!(offer_all(&mut alg, &[(1, 3.0), (2, 7.0), (3, 2.0)]), vec![2]);

        let mut alg = Rank1Secretary::new();
        alg.observe_samples(&[(0, 5.0)]);
        assert_eq!(offer_all(&mut alg, &[(1, 3.0), (2, 4.0)]), Vec::<usize>::new());

        // empty sample phase: first element beats -inf
        let mut alg = Rank1Secretary::new();
        alg.observe_samples(&[]);
        assert_eq!(offer_all(&mut alg, &[(0, 6.0), (1, 9.0)]), vec![0]);
    }

    #[test]
    fn rank1_rejects_ties() {
        let mut alg = Rank1Secretary::new();
        alg.observe_samples(&[(0, 5.0)]);
        assert!(alg.offer(1, 5.0).is_none());
        assert!(alg.offer(2, 5.1).is_some());
    }

    #[test]
    fn blockwise_examples() {
        // blocks {0,1} and {2,3}: per-block sample maxima 5 and 2
        let blocks = vec![vec![0, 1], vec![2, 3]];
        let mut alg = BlockwiseRank1::from_blocks(4, &blocks, None).unwrap();
        alg.observe_samples(&[(0, 5.0), (2, 2.0)]);
        assert_eq!(offer_all(&mut alg, &[(1, 7.0), (3, 1.0)]), vec![1]);

        // overlapping blocks are rejected
        assert!(BlockwiseRank1::from_blocks(3, &[vec![0, 1], vec![1, 2]], None).is_err());

        // one block over everything behaves exactly like rank-1
        let one = vec![vec![0, 1, 2, 3]];
        let mut blockwise = BlockwiseRank1::from_blocks(4, &one, None).unwrap();
        let mut rank1 = Rank1Secretary::new();
        let samples = [(0, 4.0)];
        blockwise.observe_samples(&samples);
        rank1.observe_samples(&samples);
        let online = [(1, 2.0), (2, 6.0), (3, 9.0)];
        assert_eq!(offer_all(&mut blockwise, &online), offer_all(&mut rank1, &online));
    }

    #[test]
    fn graphic_orientation_blocks() {
        // triangle on vertices 0 < 1 < 2; edges 0=(0,1), 1=(0,2), 2=(1,2)
        let graph = Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        let alg = BlockwiseRank1::graphic(&graph, false).unwrap();
        assert_eq!(alg.block_of(0), Some(0));
        assert_eq!(alg.block_of(1), Some(0));
        assert_eq!(alg.block_of(2), Some(1));
        let alg = BlockwiseRank1::graphic(&graph, true).unwrap();
        assert_eq!(alg.block_of(0), Some(1));
        assert_eq!(alg.block_of(1), Some(2));
        assert_eq!(alg.block_of(2), Some(2));
    }

    #[test]
    fn graphic_output_is_always_a_forest() {
        let mut rng = Stream::new(31, 0);
        for _ in 0..1000 {
            let v = 2 + rng.next_below(5);
            let mut edges = Vec::new();
            for _ in 0..(1 + rng.next_below(8)) {
                let a = rng.next_below(v);
                let b = rng.next_below(v);
                if a != b {
                    edges.push((a, b));
                }
            }
            if edges.is_empty() {
                continue;
            }
            let graph = Graph::new(v, edges).unwrap();
            let env = Environment::graphic(graph.clone());
            let n = env.n();
            let mut alg = BlockwiseRank1::graphic(&graph, rng.coin()).unwrap();
            let mut samples: Vec<(usize, f64)> = Vec::new();
            for e in 0..n {
                if rng.coin() {
                    let v = rng.next_f64();
                    samples.push((e, v));
                }
            }
            alg.observe_samples(&samples);
            let online: Vec<(usize, f64)> = rng
                .permutation(n)
                .into_iter()
                .map(|e| (e, rng.next_f64()))
                .collect();
            let accepted: FeasibleSet = offer_all(&mut alg, &online).into_iter().collect();
            assert!(env.is_feasible(&accepted).unwrap(), "accepted set contains a cycle");
        }
    }

    #[test]
    fn graphic_fixed_trace() {
        // path 0-1-2-3 plus chord (0,2); coin = false orients low -> high.
        // Blocks: vertex0 = {e0=(0,1), e3=(0,2)}, vertex1 = {e1=(1,2)},
        // vertex2 = {e2=(2,3)}.
        let graph = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let mut alg = BlockwiseRank1::graphic(&graph, false).unwrap();
        // samples: e0 at 0.9 sets block 0's threshold; block 1 and 2 stay open
        alg.observe_samples(&[(0, 0.9)]);
        // arrivals: e3=0.5 (below 0.9, reject), e1=0.7 (block 1, accept),
        // e2=0.3 (block 2, accept), e0=0.95 (block 0, accept)
        let accepted =
            offer_all(&mut alg, &[(3, 0.5), (1, 0.7), (2, 0.3), (0, 0.95)]);
        assert_eq!(accepted, vec![1, 2, 0]);
    }

    #[test]
    fn gv_threshold_examples() {
        // rank 16 >= 12: threshold is the 5th largest sample value
        let env = Environment::uniform(32, 16);
        let mut alg = GvSecretary::new(&env).unwrap();
        let samples: Vec<(usize, f64)> = (0..16).map(|i| (i, 16.0 - i as f64)).collect();
        alg.observe_samples(&samples);
        assert_eq!(alg.threshold, 12.0);
        // value 13 arrives with all 16 slots free
        assert!(alg.offer(20, 13.0).is_some());
        assert!(alg.offer(21, 11.0).is_none());

        // rank 4 < 12: rank-1 delegation takes one element only
        let env = Environment::uniform(8, 4);
        let mut alg = GvSecretary::new(&env).unwrap();
        assert!(alg.rank1);
        alg.observe_samples(&[(0, 2.0)]);
        assert!(alg.offer(1, 3.0).is_some());
        assert!(alg.offer(2, 9.0).is_none(), "rank-1 mode accepts a single element");
    }

    #[test]
    fn transversal_examples() {
        // R ranked r0 > r1; sample la (adjacent to both) takes r0 in M0.
        let graph = BipartiteGraph::new(3, 2, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 1)]).unwrap();
        let mut alg =
            TransversalDp::new(&graph, None, SamplePhaseOrder::DecreasingValue).unwrap();
        alg.observe_samples(&[(0, 1.0)]);
        // lb adjacent to both: highest-ranked right not in M0 is r1 -> accept
        assert!(alg.offer(1, 0.5).is_some());
        // lc adjacent only to r1: r1 already in M1 -> reject
        assert!(alg.offer(2, 9.0).is_none());
    }

    #[test]
    fn laminar_blocks_respect_outer_capacities() {
        // two minimal blocks under a root of capacity 1: at most one accept
        let env = Environment::laminar(
            6,
            vec![vec![0, 1, 2], vec![3, 4, 5], (0..6).collect()],
            vec![1, 1, 1],
        )
        .unwrap();
        let mut rng = Stream::new(41, 0);
        for _ in 0..300 {
            let mut alg = BlockwiseRank1::laminar_approx(&env).unwrap();
            let mut samples = Vec::new();
            for e in 0..6 {
                if rng.coin() {
                    let v = rng.next_f64();
                    samples.push((e, v));
                }
            }
            alg.observe_samples(&samples);
            let order = rng.permutation(6);
            for e in order {
                let v = rng.next_f64();
                alg.offer(e, v);
            }
            let accepted: FeasibleSet = alg.accepted().iter().copied().collect();
            assert!(accepted.len() <= 1);
            assert!(env.is_feasible(&accepted).unwrap());
        }
    }

    #[test]
    fn free_order_examples() {
        // uniform k=1 with basis value 8: processing order P = {9, 7}
        let env = Environment::uniform(3, 1);
        let observed = [8.0, 9.0, 7.0];
        let in_sample = [true, false, false];
        let out = free_order_run(&env, &in_sample, &observed).unwrap();
        assert_eq!(out.accepted.items(), &[1]);
        assert_eq!(out.thresholds, vec![(1, 8.0)]);

        // empty sample: everything is unspanned and accepted while feasible
        let env = Environment::uniform(3, 2);
        let out = free_order_run(&env, &[false; 3], &[5.0, 1.0, 3.0]).unwrap();
        assert_eq!(out.accepted.items(), &[0, 1]);
        assert!(out.thresholds.iter().all(|&(_, t)| t == f64::NEG_INFINITY));
    }

    #[test]
    fn free_order_triangle_all_splits() {
        // Triangle edges e0=(0,1) w3, e1=(0,2) w2, e2=(1,2) w1, hand-traced
        // per split. A single edge spans nothing here, so singleton samples
        // push both other edges to the unconditional leftover step; with two
        // sampled edges the remaining edge is spanned at threshold w(X2).
        let env = Environment::graphic(Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap());
        let w = [3.0, 2.0, 1.0];
        let expect: [(&[usize], &[usize]); 8] = [
            (&[], &[0, 1]),    // e2 would close the cycle
            (&[0], &[1, 2]),   // leftovers in index order, both fit
            (&[1], &[0, 2]),
            (&[2], &[0, 1]),
            (&[0, 1], &[]),    // e2 spanned at threshold 2, and 1 < 2
            (&[0, 2], &[1]),   // e1 spanned at threshold 1, and 2 > 1
            (&[1, 2], &[0]),   // e0 spanned at threshold 1, and 3 > 1
            (&[0, 1, 2], &[]),
        ];
        for (sample, want) in expect {
            let in_sample: Vec<bool> = (0..3).map(|e| sample.contains(&e)).collect();
            let out = free_order_run(&env, &in_sample, &w).unwrap();
            assert_eq!(out.accepted.items(), want, "split {sample:?}");
        }
    }

    #[test]
    fn span_cost_examples() {
        let env = Environment::uniform(4, 1);
        let w = [8.0, 6.0, 0.0, 0.0];
        assert_eq!(span_cost(&env, 2, &[0, 1], &w).unwrap(), 8.0);
        assert_eq!(span_cost(&env, 2, &[], &w).unwrap(), 0.0);

        let env = Environment::graphic(Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap());
        let w = [5.0, 4.0, 1.0];
        // edge 2 closes the cycle with Z1 = e0, Z2 = e1: cost = w(e1) = 4
        assert_eq!(span_cost(&env, 2, &[0, 1], &w).unwrap(), 4.0);
        // a single other edge never spans it
        assert_eq!(span_cost(&env, 2, &[0], &w).unwrap(), 0.0);
    }
}
