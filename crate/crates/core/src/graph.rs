//! Bipartite graphs, exact matching solvers, and edge thresholds.
//!
//! Every edge carries an incidence ordinal at each endpoint; the ordinals
//! feed the per-edge index `1 + j + d*k` that decides which sample profile
//! prices an edge. The weighted solver is an exact dynamic program over
//! vertex subsets of the smaller side, which at the instance sizes used here
//! beats the bookkeeping of an augmenting-path solver and makes the
//! deterministic tie rule (max weight, then prefer smaller edge indices)
//! trivial to enforce.

use alloc::vec;
use alloc::vec::Vec;

use crate::env::FeasibleSet;
use crate::error::{Error, Result};

/// Largest vertex count on the masked side of the exact weighted solver.
const MAX_MASK_SIDE: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteEdge {
    pub left: usize,
    pub right: usize,
    pub left_ordinal: usize,
    pub right_ordinal: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<BipartiteEdge>,
    degree_bound: usize,
    by_left: Vec<Vec<usize>>,
    by_right: Vec<Vec<usize>>,
}

/// Total score used by the exact solvers: weight first, then a dyadic
/// preference bonus that makes the argmax unique (smaller edge indices win).
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Score {
    pub weight: f64,
    pub pref: f64,
}

impl Score {
    pub const ZERO: Score = Score { weight: 0.0, pref: 0.0 };

    pub fn plus(self, weight: f64, item: usize) -> Score {
        Score { weight: self.weight + weight, pref: self.pref + item_pref(item) }
    }

    pub fn better_than(&self, other: &Score) -> bool {
        self.weight > other.weight || (self.weight == other.weight && self.pref > other.pref)
    }
}

/// 2^-(i+1); exact in f64 for i < 1074, and sums of distinct terms stay
/// exact for universes up to 52 elements.
pub(crate) fn item_pref(item: usize) -> f64 {
    libm::scalbn(1.0, -(item as i32) - 1)
}

impl BipartiteGraph {
    /// Build a graph from `(left, right)` endpoint pairs; incidence ordinals
    /// are assigned in input order at each endpoint.
    pub fn new(left: usize, right: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut left_deg = vec![0usize; left];
        let mut right_deg = vec![0usize; right];
        let mut edges = Vec::with_capacity(pairs.len());
        for &(l, r) in pairs {
            if l >= left || r >= right {
                return Err(Error::Invalid("edge endpoint out of range"));
            }
            edges.push(BipartiteEdge {
                left: l,
                right: r,
                left_ordinal: left_deg[l],
                right_ordinal: right_deg[r],
            });
            left_deg[l] += 1;
            right_deg[r] += 1;
        }
        Self::with_ordinals(left, right, edges)
    }

    /// Build a graph from fully specified edges, validating that the
    /// incidence ordinals at every vertex are distinct.
    pub fn with_ordinals(left: usize, right: usize, edges: Vec<BipartiteEdge>) -> Result<Self> {
        let mut by_left = vec![Vec::new(); left];
        let mut by_right = vec![Vec::new(); right];
        let mut degree_bound = 1;
        for (id, e) in edges.iter().enumerate() {
            if e.left >= left || e.right >= right {
                return Err(Error::Invalid("edge endpoint out of range"));
            }
            by_left[e.left].push(id);
            by_right[e.right].push(id);
            degree_bound = degree_bound.max(e.left_ordinal + 1).max(e.right_ordinal + 1);
        }
        for (incident, pick) in [(&by_left, true), (&by_right, false)] {
            for ids in incident.iter() {
                degree_bound = degree_bound.max(ids.len());
                let mut seen: Vec<usize> = ids
                    .iter()
                    .map(|&id| if pick { edges[id].left_ordinal } else { edges[id].right_ordinal })
                    .collect();
                seen.sort_unstable();
                if seen.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Invalid("duplicate incidence ordinal at a vertex"));
                }
            }
        }
        Ok(BipartiteGraph { left, right, edges, degree_bound, by_left, by_right })
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Max degree over all vertices (at least 1 for a usable index range).
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn edge(&self, e: usize) -> &BipartiteEdge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[BipartiteEdge] {
        &self.edges
    }

    pub fn edges_at_left(&self, l: usize) -> &[usize] {
        &self.by_left[l]
    }

    pub fn edges_at_right(&self, r: usize) -> &[usize] {
        &self.by_right[r]
    }

    /// `1 + j + d*k` where j, k are the edge's incidence ordinals at its left
    /// and right endpoint. Lands in `1..=d^2`; incident edges get distinct
    /// values.
    pub fn edge_index(&self, e: usize) -> usize {
        let edge = &self.edges[e];
        1 + edge.left_ordinal + self.degree_bound * edge.right_ordinal
    }

    /// True iff every left vertex in `lefts` can be matched simultaneously.
    pub fn can_match_all(&self, lefts: &[usize]) -> bool {
        self.max_matchable(lefts) == lefts.len()
    }

    /// Size of the maximum matching that uses only the given left vertices.
    pub fn max_matchable(&self, lefts: &[usize]) -> usize {
        let mut matched_to: Vec<Option<usize>> = vec![None; self.right];
        let mut count = 0;
        let mut seen = vec![false; self.right];
        for &l in lefts {
            seen.fill(false);
            if self.augment(l, &mut seen, &mut matched_to) {
                count += 1;
            }
        }
        count
    }

    fn augment(&self, l: usize, seen: &mut [bool], matched_to: &mut [Option<usize>]) -> bool {
        for &e in &self.by_left[l] {
            let r = self.edges[e].right;
            if !seen[r] {
                seen[r] = true;
                let free = match matched_to[r] {
                    None => true,
                    Some(other) => self.augment(other, seen, matched_to),
                };
                if free {
                    matched_to[r] = Some(l);
                    return true;
                }
            }
        }
        false
    }

    /// Exact maximum-weight matching over edge ids, deterministic under the
    /// crate tie rule. `skip` marks edges excluded from the instance.
    fn solve_matching(&self, w: &[f64], skip: &[bool]) -> Result<(FeasibleSet, f64)> {
        // Mask the smaller side; rows are vertices of the other side.
        let mask_right = self.right <= self.left;
        let (rows, mask_side) =
            if mask_right { (self.left, self.right) } else { (self.right, self.left) };
        if mask_side > MAX_MASK_SIDE {
            return Err(Error::Invalid("matching instance too large for the exact solver"));
        }
        let masks = 1usize << mask_side;
        // dp[mask]: best score for the rows seen so far, matched into a
        // subset of `mask`. choice[row][mask]: NONE = row unmatched, else
        // the edge id used.
        const NONE: u32 = u32::MAX;
        let mut dp: Vec<Score> = vec![Score::ZERO; masks];
        let mut next: Vec<Score> = vec![Score::ZERO; masks];
        let mut choice: Vec<u32> = vec![NONE; rows * masks];
        for row in 0..rows {
            let incident = if mask_right { &self.by_left[row] } else { &self.by_right[row] };
            for mask in 0..masks {
                let mut best = dp[mask];
                let mut pick = NONE;
                for &e in incident {
                    if skip[e] {
                        continue;
                    }
                    let other = if mask_right { self.edges[e].right } else { self.edges[e].left };
                    if mask & (1 << other) == 0 {
                        continue;
                    }
                    let cand = dp[mask ^ (1 << other)].plus(w[e], e);
                    if cand.better_than(&best) {
                        best = cand;
                        pick = e as u32;
                    }
                }
                next[mask] = best;
                choice[row * masks + mask] = pick;
            }
            core::mem::swap(&mut dp, &mut next);
        }
        // dp is monotone in the mask, so the full mask is optimal; walk the
        // choices backward to recover the edge set.
        let mut picked = Vec::new();
        let mut mask = masks - 1;
        for row in (0..rows).rev() {
            let c = choice[row * masks + mask];
            if c != NONE {
                let e = c as usize;
                picked.push(e);
                let other = if mask_right { self.edges[e].right } else { self.edges[e].left };
                mask ^= 1 << other;
            }
        }
        let total = dp[masks - 1].weight;
        Ok((FeasibleSet::from_unsorted(picked), total))
    }

    /// Maximum-weight matching of the whole graph.
    pub fn max_weight_matching(&self, w: &[f64]) -> Result<(FeasibleSet, f64)> {
        if w.len() != self.edges.len() {
            return Err(Error::Invalid("weight vector length mismatch"));
        }
        self.solve_matching(w, &vec![false; self.edges.len()])
    }

    /// The lowest weight edge `e` needs to enter the maximum-weight matching
    /// when all other edges weigh `others`: computed as
    /// `MaxMatch(G - e) - MaxMatch(G - both endpoints of e)`.
    pub fn edge_threshold(&self, e: usize, others: &[f64]) -> Result<f64> {
        if e >= self.edges.len() {
            return Err(Error::IndexOutOfRange { index: e, n: self.edges.len() });
        }
        if others.len() != self.edges.len() {
            return Err(Error::Invalid("weight vector length mismatch"));
        }
        let mut skip = vec![false; self.edges.len()];
        skip[e] = true;
        let (_, without_edge) = self.solve_matching(others, &skip)?;
        let (el, er) = (self.edges[e].left, self.edges[e].right);
        for (id, edge) in self.edges.iter().enumerate() {
            skip[id] = edge.left == el || edge.right == er;
        }
        let (_, without_endpoints) = self.solve_matching(others, &skip)?;
        Ok((without_edge - without_endpoints).max(0.0))
    }

    /// Greedy matching: edges in decreasing weight (ties to the smaller id),
    /// kept when both endpoints are still free.
    pub fn greedy_matching(&self, w: &[f64]) -> FeasibleSet {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap().then(a.cmp(&b)));
        let mut left_used = vec![false; self.left];
        let mut right_used = vec![false; self.right];
        let mut picked = Vec::new();
        for e in order {
            let edge = &self.edges[e];
            if !left_used[edge.left] && !right_used[edge.right] {
                left_used[edge.left] = true;
                right_used[edge.right] = true;
                picked.push(e);
            }
        }
        FeasibleSet::from_unsorted(picked)
    }

    /// Threshold for `e` to enter the greedy matching: the weight of the
    /// first greedy-accepted edge (over the other weights) that takes one of
    /// e's endpoints, or 0 when nothing ever blocks it.
    pub fn greedy_edge_threshold(&self, e: usize, others: &[f64]) -> f64 {
        let mut order: Vec<usize> = (0..self.edges.len()).filter(|&x| x != e).collect();
        order.sort_by(|&a, &b| others[b].partial_cmp(&others[a]).unwrap().then(a.cmp(&b)));
        let (el, er) = (self.edges[e].left, self.edges[e].right);
        let mut left_used = vec![false; self.left];
        let mut right_used = vec![false; self.right];
        for x in order {
            let edge = &self.edges[x];
            if !left_used[edge.left] && !right_used[edge.right] {
                left_used[edge.left] = true;
                right_used[edge.right] = true;
                if edge.left == el || edge.right == er {
                    return others[x];
                }
            }
        }
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use alloc::vec;

    fn k22() -> BipartiteGraph {
        // edges: 0=e11 1=e12 2=e21 3=e22
        BipartiteGraph::new(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    /// Brute force over all edge subsets that form a matching, with the same
    /// tie rule as the solver.
    fn brute_matching(g: &BipartiteGraph, w: &[f64]) -> (Vec<usize>, f64) {
        let m = g.edge_count();
        let mut best: Option<(f64, f64, Vec<usize>)> = None;
        for mask in 0u32..(1 << m) {
            let edges: Vec<usize> = (0..m).filter(|&e| mask & (1 << e) != 0).collect();
            let mut lu = vec![false; g.left_count()];
            let mut ru = vec![false; g.right_count()];
            let mut ok = true;
            for &e in &edges {
                let edge = g.edge(e);
                if lu[edge.left] || ru[edge.right] {
                    ok = false;
                    break;
                }
                lu[edge.left] = true;
                ru[edge.right] = true;
            }
            if !ok {
                continue;
            }
            let weight: f64 = edges.iter().map(|&e| w[e]).sum();
            let pref: f64 = edges.iter().map(|&e| item_pref(e)).sum();
            let better = match &best {
                None => true,
                Some((bw, bp, _)) => weight > *bw || (weight == *bw && pref > *bp),
            };
            if better {
                best = Some((weight, pref, edges));
            }
        }
        let (w, _, edges) = best.unwrap();
        (edges, w)
    }

    #[test]
    fn edge_index_formula() {
        // d = 2: ordinals j=0 at left, k=1 at right give 1 + 0 + 2*1 = 3
        let g = k22();
        assert_eq!(g.degree_bound(), 2);
        // edge 1 = (0,1): left ordinal 1? assigned in input order: edges at
        // left 0 are [0, 1] so edge 1 has left_ordinal 1. Build a bespoke
        // graph to pin the exact ordinals instead.
        let g = BipartiteGraph::with_ordinals(
            1,
            2,
            vec![
                BipartiteEdge { left: 0, right: 0, left_ordinal: 0, right_ordinal: 0 },
                BipartiteEdge { left: 0, right: 1, left_ordinal: 1, right_ordinal: 1 },
            ],
        )
        .unwrap();
        assert_eq!(g.degree_bound(), 2);
        assert_eq!(g.edge_index(0), 1); // j=0, k=0
        let g = BipartiteGraph::with_ordinals(
            2,
            2,
            vec![BipartiteEdge { left: 0, right: 0, left_ordinal: 0, right_ordinal: 1 }],
        )
        .unwrap();
        // degree bound inferred from ordinals: max ordinal + 1 = 2
        assert_eq!(g.edge_index(0), 3); // 1 + 0 + 2*1
        let g = BipartiteGraph::with_ordinals(
            3,
            3,
            vec![BipartiteEdge { left: 0, right: 0, left_ordinal: 2, right_ordinal: 2 }],
        )
        .unwrap();
        assert_eq!(g.edge_index(0), 9); // d=3 max: 1 + 2 + 3*2
    }

    #[test]
    fn incident_edges_have_distinct_indices() {
        let mut rng = Stream::new(11, 0);
        for _ in 0..200 {
            let l = 1 + rng.next_below(5);
            let r = 1 + rng.next_below(5);
            let mut pairs = Vec::new();
            for a in 0..l {
                for b in 0..r {
                    if rng.bernoulli(0.5) {
                        pairs.push((a, b));
                    }
                }
            }
            let g = match BipartiteGraph::new(l, r, &pairs) {
                Ok(g) => g,
                Err(_) => continue,
            };
            for a in 0..g.edge_count() {
                for b in (a + 1)..g.edge_count() {
                    let (ea, eb) = (g.edge(a), g.edge(b));
                    if ea.left == eb.left || ea.right == eb.right {
                        assert_ne!(g.edge_index(a), g.edge_index(b));
                    }
                    assert!(g.edge_index(a) >= 1);
                    assert!(g.edge_index(a) <= g.degree_bound() * g.degree_bound());
                }
            }
        }
    }

    #[test]
    fn weighted_matching_matches_brute_force() {
        let mut rng = Stream::new(5, 0);
        for _ in 0..300 {
            let l = 1 + rng.next_below(4);
            let r = 1 + rng.next_below(4);
            let mut pairs = Vec::new();
            for a in 0..l {
                for b in 0..r {
                    if rng.bernoulli(0.6) {
                        pairs.push((a, b));
                    }
                }
            }
            if pairs.is_empty() || pairs.len() > 8 {
                continue;
            }
            let g = BipartiteGraph::new(l, r, &pairs).unwrap();
            let w: Vec<f64> = (0..g.edge_count()).map(|_| rng.next_f64()).collect();
            let (set, weight) = g.max_weight_matching(&w).unwrap();
            let (bset, bweight) = brute_matching(&g, &w);
            assert_eq!(set.items(), &bset[..]);
            assert!((weight - bweight).abs() <= 1e-12 * (1.0 + bweight));
        }
    }

    #[test]
    fn threshold_examples() {
        // Two edges sharing a vertex, the other edge weighs 5.
        let g = BipartiteGraph::new(2, 1, &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(g.edge_threshold(0, &[0.0, 5.0]).unwrap(), 5.0);
        // An isolated edge is in every maximum matching at any positive weight.
        let g = BipartiteGraph::new(2, 2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(g.edge_threshold(0, &[0.0, 5.0]).unwrap(), 0.0);
        // K22 with (v12, v21, v22) = (3, 2, 4): threshold of e11 is 1.
        let g = k22();
        let t = g.edge_threshold(0, &[0.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_is_the_entry_infimum() {
        // x_e(t + eps) = 1 and x_e(t - eps) = 0, via the exact solver.
        let mut rng = Stream::new(17, 0);
        for _ in 0..150 {
            let l = 1 + rng.next_below(3);
            let r = 1 + rng.next_below(3);
            let mut pairs = Vec::new();
            for a in 0..l {
                for b in 0..r {
                    if rng.bernoulli(0.7) {
                        pairs.push((a, b));
                    }
                }
            }
            if pairs.is_empty() || pairs.len() > 8 {
                continue;
            }
            let g = BipartiteGraph::new(l, r, &pairs).unwrap();
            let mut w: Vec<f64> = (0..g.edge_count()).map(|_| rng.next_f64()).collect();
            for e in 0..g.edge_count() {
                let t = g.edge_threshold(e, &w).unwrap();
                let eps = 1e-9 * (1.0 + t);
                let old = w[e];
                w[e] = t + eps;
                let (above, _) = g.max_weight_matching(&w).unwrap();
                assert!(above.contains(e), "edge {e} missing just above its threshold");
                if t > 0.0 {
                    w[e] = t - eps;
                    let (below, _) = g.max_weight_matching(&w).unwrap();
                    assert!(!below.contains(e), "edge {e} present just below its threshold");
                }
                w[e] = old;
            }
        }
    }

    #[test]
    fn greedy_threshold_is_the_greedy_entry_infimum() {
        let mut rng = Stream::new(23, 0);
        for _ in 0..200 {
            let g = k22();
            let mut w: Vec<f64> = (0..4).map(|_| rng.next_f64()).collect();
            for e in 0..4 {
                let t = g.greedy_edge_threshold(e, &w);
                let eps = 1e-9 * (1.0 + t);
                let old = w[e];
                w[e] = t + eps;
                assert!(g.greedy_matching(&w).contains(e));
                if t > 0.0 {
                    w[e] = t - eps;
                    assert!(!g.greedy_matching(&w).contains(e));
                }
                w[e] = old;
            }
        }
    }

    #[test]
    fn transversal_matchability() {
        // L = {a, b}, R = {r}, both adjacent to r: {a, b} cannot be matched.
        let g = BipartiteGraph::new(2, 1, &[(0, 0), (1, 0)]).unwrap();
        assert!(g.can_match_all(&[0]));
        assert!(g.can_match_all(&[1]));
        assert!(!g.can_match_all(&[0, 1]));
        assert_eq!(g.max_matchable(&[0, 1]), 1);
    }
}
