//! Selection environments and their exact offline oracles.
//!
//! An environment is a universe `0..n` plus a downward-closed feasibility
//! family: a matroid (uniform, partition, laminar, graphic, transversal) or
//! the matchings of a degree-bounded bipartite graph. All oracles are pure
//! and deterministic; ties between equal-weight optima are broken toward the
//! set preferring smaller element indices, which makes the argmax unique.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{item_pref, BipartiteGraph};

/// Undirected multigraph backing a graphic matroid. Parallel edges are
/// allowed (a parallel pair is a 2-cycle, hence dependent); self-loops are
/// dependent singletons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.iter().any(|&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::Invalid("graph edge endpoint out of range"));
        }
        Ok(Graph { vertices, edges })
    }

    pub fn complete(vertices: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..vertices {
            for v in (u + 1)..vertices {
                edges.push((u, v));
            }
        }
        Graph { vertices, edges }
    }
}

/// Non-negative finite weights for every universe element. Used both for
/// realized values and for sample profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Invalid("weights must be finite and non-negative"));
        }
        Ok(WeightVector(w))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl core::ops::Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A set of universe elements, stored sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FeasibleSet {
    items: Vec<usize>,
}

impl FeasibleSet {
    pub fn new() -> Self {
        FeasibleSet { items: Vec::new() }
    }

    pub fn from_unsorted(mut items: Vec<usize>) -> Self {
        items.sort_unstable();
        items.dedup();
        FeasibleSet { items }
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.items.binary_search(&e).is_ok()
    }

    pub fn insert(&mut self, e: usize) {
        if let Err(pos) = self.items.binary_search(&e) {
            self.items.insert(pos, e);
        }
    }

    /// Copy of this set with `e` added.
    pub fn with(&self, e: usize) -> Self {
        let mut out = self.clone();
        out.insert(e);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.items.iter().copied()
    }

    /// Total weight, summed in index order so equal sets sum identically.
    pub fn weight(&self, w: &[f64]) -> f64 {
        self.items.iter().map(|&i| w[i]).sum()
    }
}

impl FromIterator<usize> for FeasibleSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        FeasibleSet::from_unsorted(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EnvKind {
    Uniform { k: usize },
    Partition { blocks: Vec<Vec<usize>>, capacities: Vec<usize> },
    Laminar { family: Vec<Vec<usize>>, capacities: Vec<usize> },
    Graphic(Graph),
    Transversal(BipartiteGraph),
    BipartiteMatching(BipartiteGraph),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    n: usize,
    kind: EnvKind,
    /// Partition: block id per element.
    block_of: Vec<usize>,
    /// Laminar: ids of family sets containing each element.
    member_sets: Vec<Vec<usize>>,
    rank: usize,
}

impl Environment {
    fn build(n: usize, kind: EnvKind) -> Result<Self> {
        let mut block_of = Vec::new();
        let mut member_sets = Vec::new();
        match &kind {
            EnvKind::Partition { blocks, capacities } => {
                if blocks.len() != capacities.len() {
                    return Err(Error::Invalid("one capacity per block required"));
                }
                if capacities.contains(&0) {
                    return Err(Error::Invalid("block capacities must be positive"));
                }
                block_of = vec![usize::MAX; n];
                for (b, block) in blocks.iter().enumerate() {
                    for &e in block {
                        if e >= n {
                            return Err(Error::IndexOutOfRange { index: e, n });
                        }
                        if block_of[e] != usize::MAX {
                            return Err(Error::Invalid("partition blocks must be disjoint"));
                        }
                        block_of[e] = b;
                    }
                }
                if block_of.contains(&usize::MAX) {
                    return Err(Error::Invalid("partition blocks must cover the universe"));
                }
            }
            EnvKind::Laminar { family, capacities } => {
                if family.len() != capacities.len() {
                    return Err(Error::Invalid("one capacity per family set required"));
                }
                if capacities.contains(&0) {
                    return Err(Error::Invalid("laminar capacities must be positive"));
                }
                let sets: Vec<FeasibleSet> =
                    family.iter().map(|s| FeasibleSet::from_unsorted(s.clone())).collect();
                for s in &sets {
                    if let Some(&max) = s.items().last() {
                        if max >= n {
                            return Err(Error::IndexOutOfRange { index: max, n });
                        }
                    }
                }
                for a in 0..sets.len() {
                    for b in (a + 1)..sets.len() {
                        let inter = sets[a].iter().filter(|&e| sets[b].contains(e)).count();
                        let nested = inter == sets[a].len() || inter == sets[b].len();
                        if inter != 0 && !nested {
                            return Err(Error::Invalid(
                                "laminar family sets must nest or be disjoint",
                            ));
                        }
                    }
                }
                member_sets = vec![Vec::new(); n];
                for (id, s) in sets.iter().enumerate() {
                    for e in s.iter() {
                        member_sets[e].push(id);
                    }
                }
            }
            _ => {}
        }
        let mut env = Environment { n, kind, block_of, member_sets, rank: 0 };
        let rank = {
            let mut guard = env.guard();
            (0..n).filter(|&e| guard.try_insert(e)).count()
        };
        env.rank = rank;
        Ok(env)
    }

    pub fn uniform(n: usize, k: usize) -> Self {
        Self::build(n, EnvKind::Uniform { k }).expect("uniform environments are always valid")
    }

    pub fn partition(n: usize, blocks: Vec<Vec<usize>>, capacities: Vec<usize>) -> Result<Self> {
        Self::build(n, EnvKind::Partition { blocks, capacities })
    }

    pub fn laminar(n: usize, family: Vec<Vec<usize>>, capacities: Vec<usize>) -> Result<Self> {
        Self::build(n, EnvKind::Laminar { family, capacities })
    }

    pub fn graphic(graph: Graph) -> Self {
        let n = graph.edges.len();
        Self::build(n, EnvKind::Graphic(graph)).expect("graphic environments are always valid")
    }

    pub fn transversal(graph: BipartiteGraph) -> Self {
        let n = graph.left_count();
        Self::build(n, EnvKind::Transversal(graph))
            .expect("transversal environments are always valid")
    }

    pub fn bipartite_matching(graph: BipartiteGraph) -> Self {
        let n = graph.edge_count();
        Self::build(n, EnvKind::BipartiteMatching(graph))
            .expect("matching environments are always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &EnvKind {
        &self.kind
    }

    pub fn is_matroid(&self) -> bool {
        !matches!(self.kind, EnvKind::BipartiteMatching(_))
    }

    /// Rank of the full universe (size of a maximum feasible set).
    pub fn rank(&self) -> usize {
        self.rank
    }

    fn check_indices(&self, set: &FeasibleSet) -> Result<()> {
        if let Some(&max) = set.items().last() {
            if max >= self.n {
                return Err(Error::IndexOutOfRange { index: max, n: self.n });
            }
        }
        Ok(())
    }

    /// Membership oracle for the feasibility family.
    pub fn is_feasible(&self, set: &FeasibleSet) -> Result<bool> {
        self.check_indices(set)?;
        let mut guard = self.guard();
        Ok(set.iter().all(|e| guard.try_insert(e)))
    }

    /// `rank` of `set` and whether `element` lies in its span. Defined for
    /// matroid kinds only.
    pub fn rank_and_span(&self, set: &FeasibleSet, element: usize) -> Result<(usize, bool)> {
        if !self.is_matroid() {
            return Err(Error::Unsupported("rank/span on a matching environment"));
        }
        self.check_indices(set)?;
        if element >= self.n {
            return Err(Error::IndexOutOfRange { index: element, n: self.n });
        }
        let mut guard = self.guard();
        let rank = set.iter().filter(|&e| guard.try_insert(e)).count();
        let spans = set.contains(element) || !guard.try_insert(element);
        Ok((rank, spans))
    }

    /// Maximum-weight feasible set and its weight. Matroids are solved by
    /// the weight-descending greedy; matchings by the exact solver. The
    /// argmax is unique under the crate tie rule.
    pub fn offline_opt(&self, w: &[f64]) -> Result<(FeasibleSet, f64)> {
        if w.len() != self.n {
            return Err(Error::Invalid("weight vector length mismatch"));
        }
        if let EnvKind::BipartiteMatching(g) = &self.kind {
            return g.max_weight_matching(w);
        }
        let set = self.max_weight_basis(w, (0..self.n).collect());
        let weight = set.weight(w);
        Ok((set, weight))
    }

    /// Greedy max-weight independent subset of `from` (decreasing weight,
    /// ties to the smaller index). For matroids this is the exact optimum.
    pub fn max_weight_basis(&self, w: &[f64], mut from: Vec<usize>) -> FeasibleSet {
        from.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap().then(a.cmp(&b)));
        let mut guard = self.guard();
        FeasibleSet::from_unsorted(from.into_iter().filter(|&e| guard.try_insert(e)).collect())
    }

    /// Incremental independence oracle starting from the empty set.
    pub fn guard(&self) -> Guard<'_> {
        let state = match &self.kind {
            EnvKind::Uniform { k } => GuardState::Uniform { left: *k },
            EnvKind::Partition { capacities, .. } => {
                GuardState::Partition { remaining: capacities.clone() }
            }
            EnvKind::Laminar { capacities, .. } => {
                GuardState::Laminar { remaining: capacities.clone() }
            }
            EnvKind::Graphic(g) => GuardState::Graphic { dsu: Dsu::new(g.vertices) },
            EnvKind::Transversal(g) => {
                GuardState::Transversal { matched_to: vec![None; g.right_count()] }
            }
            EnvKind::BipartiteMatching(g) => GuardState::Matching {
                left_used: vec![false; g.left_count()],
                right_used: vec![false; g.right_count()],
            },
        };
        Guard { env: self, state }
    }
}

#[derive(Clone, Debug)]
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

#[derive(Clone, Debug)]
enum GuardState {
    Uniform { left: usize },
    Partition { remaining: Vec<usize> },
    Laminar { remaining: Vec<usize> },
    Graphic { dsu: Dsu },
    Transversal { matched_to: Vec<Option<usize>> },
    Matching { left_used: Vec<bool>, right_used: Vec<bool> },
}

/// Incremental independence state: feeds elements one at a time and keeps
/// the accepted set independent. Cloneable, so speculative checks are cheap.
#[derive(Clone, Debug)]
pub struct Guard<'a> {
    env: &'a Environment,
    state: GuardState,
}

impl Guard<'_> {
    /// Add `e` if the set stays feasible; reports whether it was added.
    pub fn try_insert(&mut self, e: usize) -> bool {
        debug_assert!(e < self.env.n);
        match &mut self.state {
            GuardState::Uniform { left } => {
                if *left == 0 {
                    return false;
                }
                *left -= 1;
                true
            }
            GuardState::Partition { remaining } => {
                let b = self.env.block_of[e];
                if remaining[b] == 0 {
                    return false;
                }
                remaining[b] -= 1;
                true
            }
            GuardState::Laminar { remaining } => {
                if self.env.member_sets[e].iter().any(|&s| remaining[s] == 0) {
                    return false;
                }
                for &s in &self.env.member_sets[e] {
                    remaining[s] -= 1;
                }
                true
            }
            GuardState::Graphic { dsu } => {
                let EnvKind::Graphic(g) = &self.env.kind else { unreachable!() };
                let (u, v) = g.edges[e];
                if dsu.find(u) == dsu.find(v) {
                    return false;
                }
                dsu.union(u, v);
                true
            }
            GuardState::Transversal { matched_to } => {
                let EnvKind::Transversal(g) = &self.env.kind else { unreachable!() };
                let mut seen = vec![false; g.right_count()];
                augment_left(g, e, &mut seen, matched_to)
            }
            GuardState::Matching { left_used, right_used } => {
                let EnvKind::BipartiteMatching(g) = &self.env.kind else { unreachable!() };
                let edge = g.edge(e);
                if left_used[edge.left] || right_used[edge.right] {
                    return false;
                }
                left_used[edge.left] = true;
                right_used[edge.right] = true;
                true
            }
        }
    }

    /// Would `e` keep the set feasible? Leaves the state unchanged.
    pub fn can_insert(&mut self, e: usize) -> bool {
        match &mut self.state {
            GuardState::Uniform { left } => *left > 0,
            GuardState::Partition { remaining } => remaining[self.env.block_of[e]] > 0,
            GuardState::Laminar { remaining } => {
                self.env.member_sets[e].iter().all(|&s| remaining[s] > 0)
            }
            GuardState::Graphic { dsu } => {
                let EnvKind::Graphic(g) = &self.env.kind else { unreachable!() };
                let (u, v) = g.edges[e];
                dsu.find(u) != dsu.find(v)
            }
            GuardState::Transversal { matched_to } => {
                let EnvKind::Transversal(g) = &self.env.kind else { unreachable!() };
                let snapshot = matched_to.clone();
                let mut seen = vec![false; g.right_count()];
                let ok = augment_left(g, e, &mut seen, matched_to);
                *matched_to = snapshot;
                ok
            }
            GuardState::Matching { left_used, right_used } => {
                let EnvKind::BipartiteMatching(g) = &self.env.kind else { unreachable!() };
                let edge = g.edge(e);
                !left_used[edge.left] && !right_used[edge.right]
            }
        }
    }
}

/// Kuhn augmenting step: try to match left vertex `l`, displacing earlier
/// matches along alternating paths. Only mutates `matched_to` on success.
fn augment_left(
    g: &BipartiteGraph,
    l: usize,
    seen: &mut [bool],
    matched_to: &mut [Option<usize>],
) -> bool {
    for &e in g.edges_at_left(l) {
        let r = g.edge(e).right;
        if !seen[r] {
            seen[r] = true;
            let free = match matched_to[r] {
                None => true,
                Some(other) => augment_left(g, other, seen, matched_to),
            };
            if free {
                matched_to[r] = Some(l);
                return true;
            }
        }
    }
    false
}

/// Brute-force maximum-weight feasible subset with the crate tie rule.
/// Exponential; intended as an independent oracle for tests and small
/// verification suites.
pub fn brute_force_opt(env: &Environment, w: &[f64]) -> (FeasibleSet, f64) {
    assert!(env.n() <= 20, "brute force oracle capped at n = 20");
    let n = env.n();
    let mut best: Option<(f64, f64, FeasibleSet)> = None;
    for mask in 0u32..(1 << n) {
        let set: FeasibleSet = (0..n).filter(|&e| mask & (1 << e) != 0).collect();
        if !env.is_feasible(&set).unwrap() {
            continue;
        }
        let weight = set.weight(w);
        let pref: f64 = set.iter().map(item_pref).sum();
        let better = match &best {
            None => true,
            Some((bw, bp, _)) => weight > *bw || (weight == *bw && pref > *bp),
        };
        if better {
            best = Some((weight, pref, set));
        }
    }
    let (weight, _, set) = best.expect("empty set is always feasible");
    (set, weight)
}
