//! Correlated random walks and the exact enumeration oracles built on them.
//!
//! The rehearsal analysis couples two draws per coordinate, sorts all 2n
//! draws, and reads the sorted list as walk steps: a "value" steps down, the
//! first thresholds step up, the repeated threshold jumps, later samples
//! stay flat. The facts connecting walk heights to rehearsal acceptance,
//! the reflection identity, and the decorrelation/deletion monotonicity
//! lemmas are all finite combinatorial statements here, checked by exhaustive
//! enumeration with exact dyadic arithmetic.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::prophet::{floor_two_sqrt, rehearsal_run, rehearsal_thresholds};
use crate::rng::Stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Value,
    Sample,
}

/// A coupled draw list: two draws per coordinate, sorted decreasing, with
/// exactly one member of every couple labelled a value.
#[derive(Clone, Debug)]
pub struct FlipAssignment {
    /// Y_1 >= Y_2 >= ... >= Y_2n.
    pub sorted: Vec<f64>,
    /// Coordinate id per sorted position.
    pub couple: Vec<usize>,
    /// Label per sorted position.
    pub labels: Vec<Label>,
    /// Sorted position of the couple partner.
    pub partner: Vec<usize>,
    pub k: usize,
}

impl FlipAssignment {
    /// `first_is_value[i]` decides which member of `couples[i]` plays the
    /// value. Ties in the sort are broken by (coordinate, member) so the
    /// layout is deterministic; the walk facts assume distinct draws.
    pub fn new(couples: &[(f64, f64)], first_is_value: &[bool], k: usize) -> Self {
        assert_eq!(couples.len(), first_is_value.len());
        let mut pos: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * couples.len());
        for (i, &(a, b)) in couples.iter().enumerate() {
            pos.push((a, i, 0));
            pos.push((b, i, 1));
        }
        pos.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let mut slot_of = vec![[usize::MAX; 2]; couples.len()];
        for (j, &(_, i, m)) in pos.iter().enumerate() {
            slot_of[i][m as usize] = j;
        }
        let sorted: Vec<f64> = pos.iter().map(|p| p.0).collect();
        let couple: Vec<usize> = pos.iter().map(|p| p.1).collect();
        let labels: Vec<Label> = pos
            .iter()
            .map(|&(_, i, m)| {
                let value_member = u8::from(!first_is_value[i]);
                if m == value_member {
                    Label::Value
                } else {
                    Label::Sample
                }
            })
            .collect();
        let partner: Vec<usize> =
            pos.iter().map(|&(_, i, m)| slot_of[i][1 - m as usize]).collect();
        FlipAssignment { sorted, couple, labels, partner, k }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn n_couples(&self) -> usize {
        self.sorted.len() / 2
    }

    /// The value draw per coordinate.
    pub fn values(&self) -> Vec<f64> {
        self.member_per_couple(Label::Value)
    }

    /// The sample draw per coordinate.
    pub fn samples(&self) -> Vec<f64> {
        self.member_per_couple(Label::Sample)
    }

    fn member_per_couple(&self, label: Label) -> Vec<f64> {
        let mut out = vec![0.0; self.n_couples()];
        for j in 0..self.len() {
            if self.labels[j] == label {
                out[self.couple[j]] = self.sorted[j];
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkStep {
    Down,
    Up,
    Jump(i64),
    Flat,
}

/// Walk positions RW(0..=len), RW(0) = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkTrace {
    pub positions: Vec<i64>,
    pub steps: Vec<WalkStep>,
}

impl WalkTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Build the correlated walk for a label sequence: values step -1; the
/// first q-1 samples step +1; the q-th sample jumps by k - q + 1 (the slots
/// its threshold serves, `floor(2 sqrt k) + 1` when the clamp is inactive);
/// later samples stay flat. `q = max(1, k - floor(2 sqrt k))` matches the
/// rehearsal threshold rule.
pub fn build_rw(labels: &[Label], k: usize) -> WalkTrace {
    let q = k.saturating_sub(floor_two_sqrt(k)).max(1);
    let jump = (k - q + 1) as i64;
    let mut positions = Vec::with_capacity(labels.len() + 1);
    positions.push(0i64);
    let mut steps = Vec::with_capacity(labels.len());
    let mut samples_seen = 0usize;
    for &label in labels {
        let delta = match label {
            Label::Value => {
                steps.push(WalkStep::Down);
                -1
            }
            Label::Sample => {
                samples_seen += 1;
                if samples_seen < q {
                    steps.push(WalkStep::Up);
                    1
                } else if samples_seen == q {
                    steps.push(WalkStep::Jump(jump));
                    jump
                } else {
                    steps.push(WalkStep::Flat);
                    0
                }
            }
        };
        positions.push(positions.last().unwrap() + delta);
    }
    WalkTrace { positions, steps }
}

/// Diagnostic variant with the jump at a fixed index
/// `2k - floor(4 sqrt k) + floor(2 k^(2/3))` of size `floor(sqrt k)`,
/// independent of the labels; flat afterwards.
pub fn build_rw_prime(labels: &[Label], k: usize) -> WalkTrace {
    let k64 = k as u64;
    let jump_at = (2 * k64 + icbrt(8 * k64 * k64)).saturating_sub((16 * k64).isqrt()).max(1);
    let jump = k64.isqrt() as i64;
    let mut positions = Vec::with_capacity(labels.len() + 1);
    positions.push(0i64);
    let mut steps = Vec::with_capacity(labels.len());
    for (j, &label) in labels.iter().enumerate() {
        let idx = (j + 1) as u64;
        let (step, delta) = if idx == jump_at {
            (WalkStep::Jump(jump), jump)
        } else if idx > jump_at {
            (WalkStep::Flat, 0)
        } else {
            match label {
                Label::Value => (WalkStep::Down, -1),
                Label::Sample => (WalkStep::Up, 1),
            }
        };
        steps.push(step);
        positions.push(positions.last().unwrap() + delta);
    }
    WalkTrace { positions, steps }
}

fn icbrt(x: u64) -> u64 {
    let mut lo = 0u64;
    let mut hi = 1 << 22;
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if mid.saturating_mul(mid).saturating_mul(mid) <= x {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// (H_L, H_R) at walk index j: the maximum elevation of the walk to the
/// left/right of j, relative to position j. Both are >= 0.
pub fn heights(trace: &WalkTrace, j: usize) -> (i64, i64) {
    let p = &trace.positions;
    let here = p[j];
    let h_l = p[..=j].iter().copied().max().unwrap() - here;
    let h_r = p[j..].iter().copied().max().unwrap() - here;
    (h_l, h_r)
}

/// Heights at every index in one pass (prefix/suffix maxima).
pub fn heights_all(trace: &WalkTrace) -> Vec<(i64, i64)> {
    let p = &trace.positions;
    let mut out = Vec::with_capacity(p.len());
    let mut prefix = i64::MIN;
    let mut suffix = vec![0i64; p.len()];
    let mut running = i64::MIN;
    for j in (0..p.len()).rev() {
        running = running.max(p[j]);
        suffix[j] = running;
    }
    for j in 0..p.len() {
        prefix = prefix.max(p[j]);
        out.push((prefix - p[j], suffix[j] - p[j]));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactsMismatch {
    /// 1 = selection iff value with positive right height; 2 = prefix
    /// missing count equals max(H_L - H_R, 0).
    pub fact: u8,
    pub index: usize,
    pub expected: i64,
    pub got: i64,
}

#[derive(Clone, Debug)]
pub struct FactsReport {
    pub pass: bool,
    pub first_mismatch: Option<FactsMismatch>,
}

/// Check both rehearsal-walk facts against a direct rehearsal simulation on
/// the increasing-value order. Draws must be pairwise distinct.
pub fn walk_facts_check(
    couples: &[(f64, f64)],
    first_is_value: &[bool],
    k: usize,
) -> Result<FactsReport> {
    let flips = FlipAssignment::new(couples, first_is_value, k);
    let thresholds = rehearsal_thresholds(&flips.samples(), k)?;
    let arrivals: Vec<(usize, f64)> = (0..flips.len())
        .rev()
        .filter(|&j| flips.labels[j] == Label::Value)
        .map(|j| (j, flips.sorted[j]))
        .collect();
    let run = rehearsal_run(&thresholds, &arrivals)?;
    let mut selected = vec![false; flips.len()];
    for j in run.accepted.iter() {
        selected[j] = true;
    }
    let trace = build_rw(&flips.labels, k);
    let all_heights = heights_all(&trace);

    for j in 0..flips.len() {
        let (_, h_r) = all_heights[j + 1];
        let expected = flips.labels[j] == Label::Value && h_r > 0;
        if expected != selected[j] {
            return Ok(FactsReport {
                pass: false,
                first_mismatch: Some(FactsMismatch {
                    fact: 1,
                    index: j,
                    expected: i64::from(expected),
                    got: i64::from(selected[j]),
                }),
            });
        }
    }
    let mut missing = 0i64;
    for i in 1..=flips.len() {
        if flips.labels[i - 1] == Label::Value && !selected[i - 1] {
            missing += 1;
        }
        let (h_l, h_r) = all_heights[i];
        let expected = (h_l - h_r).max(0);
        if expected != missing {
            return Ok(FactsReport {
                pass: false,
                first_mismatch: Some(FactsMismatch {
                    fact: 2,
                    index: i,
                    expected,
                    got: missing,
                }),
            });
        }
    }
    Ok(FactsReport { pass: true, first_mismatch: None })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoSampleBound {
    /// Expected prophet reward over the coupling space.
    pub lhs: f64,
    /// Half the sum of the top 2k draws.
    pub rhs: f64,
    pub exact: bool,
    /// Monte-Carlo half-width (0 in exact mode).
    pub ci_half: f64,
}

/// The prophet upper bound over couple orientations: the expected top-k
/// value mass never exceeds half the top-2k draw mass. Exact enumeration up
/// to 20 couples, Monte-Carlo beyond.
pub fn prophet_two_sample_bound(
    couples: &[(f64, f64)],
    k: usize,
    rng: &mut Stream,
) -> TwoSampleBound {
    let n = couples.len();
    assert!(k <= n, "prophet bound needs k <= n");
    let mut pos: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * n);
    for (i, &(a, b)) in couples.iter().enumerate() {
        pos.push((a, i, 0));
        pos.push((b, i, 1));
    }
    pos.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let rhs = 0.5 * pos.iter().take(2 * k).map(|p| p.0).sum::<f64>();

    let prophet_take = |is_value: &dyn Fn(usize, u8) -> bool| -> f64 {
        let mut taken = 0;
        let mut total = 0.0;
        for &(y, i, m) in &pos {
            if taken == k {
                break;
            }
            if is_value(i, m) {
                total += y;
                taken += 1;
            }
        }
        total
    };

    if n <= 20 {
        let mut sum = 0.0;
        for mask in 0u64..(1 << n) {
            sum += prophet_take(&|i, m| ((mask >> i) & 1) as u8 == m);
        }
        let lhs = sum / (1u64 << n) as f64;
        TwoSampleBound { lhs, rhs, exact: true, ci_half: 0.0 }
    } else {
        let trials = 100_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let mask: Vec<bool> = (0..n).map(|_| rng.coin()).collect();
            let reward = prophet_take(&|i, m| mask[i] == (m == 0));
            sum += reward;
            sum_sq += reward * reward;
        }
        let mean = sum / trials as f64;
        let var = (sum_sq / trials as f64 - mean * mean).max(0.0);
        let ci = 1.96 * libm::sqrt(var / trials as f64);
        TwoSampleBound { lhs: mean, rhs, exact: false, ci_half: ci }
    }
}

/// Exact counts for the reflection identity on n-step independent walks:
/// #\{H > 0 and end <= -m\} versus #\{end >= m + 2\}, out of 2^n.
pub fn reflection_identity(n: usize, m: i64) -> Result<(u64, u64, u64)> {
    if n > 20 {
        return Err(Error::Invalid("reflection enumeration capped at 20 steps"));
    }
    let total = 1u64 << n;
    let mut count_a = 0;
    let mut count_b = 0;
    for mask in 0..total {
        let mut position = 0i64;
        let mut high = 0i64;
        for b in 0..n {
            position += if (mask >> b) & 1 == 1 { 1 } else { -1 };
            high = high.max(position);
        }
        if high > 0 && position <= -m {
            count_a += 1;
        }
        if position >= m + 2 {
            count_b += 1;
        }
    }
    Ok((count_a, count_b, total))
}

/// Exact dyadic rational `num / 2^log2_den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub num: i128,
    pub log2_den: u32,
}

impl Dyadic {
    pub fn as_f64(&self) -> f64 {
        libm::scalbn(self.num as f64, -(self.log2_den as i32))
    }

    pub fn le(&self, other: &Dyadic) -> bool {
        (self.num << other.log2_den) <= (other.num << self.log2_den)
    }
}

/// A +/-1 walk with some step pairs anti-correlated (the first member up
/// forces the second down and vice versa).
#[derive(Clone, Debug)]
pub struct PairedWalk {
    pub steps: usize,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    Correlated,
    Decorrelated,
    Deleted,
}

impl PairedWalk {
    pub fn new(steps: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut used = vec![false; steps];
        for &(x, y) in &pairs {
            if x >= y || y >= steps {
                return Err(Error::Invalid("pair indices must satisfy x < y < steps"));
            }
            if used[x] || used[y] {
                return Err(Error::Invalid("pairs must be disjoint"));
            }
            used[x] = true;
            used[y] = true;
        }
        Ok(PairedWalk { steps, pairs })
    }

    /// Index of the pair that ends earliest.
    pub fn earliest_ending_pair(&self) -> Option<usize> {
        (0..self.pairs.len()).min_by_key(|&i| self.pairs[i].1)
    }

    /// Enumerate all step assignments under the given per-pair modes and
    /// fold (height, end) through `f`. Returns the number of random bits.
    fn enumerate(&self, modes: &[PairMode], mut f: impl FnMut(i64, i64)) -> u32 {
        assert_eq!(modes.len(), self.pairs.len());
        // bit layout: unpaired steps first, then per-pair bits
        let mut bit_of_step = vec![usize::MAX; self.steps];
        let mut paired = vec![false; self.steps];
        for &(x, y) in &self.pairs {
            paired[x] = true;
            paired[y] = true;
        }
        let mut bits = 0usize;
        for s in 0..self.steps {
            if !paired[s] {
                bit_of_step[s] = bits;
                bits += 1;
            }
        }
        let mut pair_bits = Vec::with_capacity(self.pairs.len());
        for mode in modes {
            match mode {
                PairMode::Correlated => {
                    pair_bits.push((bits, usize::MAX));
                    bits += 1;
                }
                PairMode::Decorrelated => {
                    pair_bits.push((bits, bits + 1));
                    bits += 2;
                }
                PairMode::Deleted => pair_bits.push((usize::MAX, usize::MAX)),
            }
        }
        assert!(bits <= 24, "paired-walk enumeration capped at 24 random bits");
        let mut deltas = vec![0i64; self.steps];
        for mask in 0u64..(1 << bits) {
            let bit = |b: usize| (mask >> b) & 1 == 1;
            for s in 0..self.steps {
                if !paired[s] {
                    deltas[s] = if bit(bit_of_step[s]) { 1 } else { -1 };
                }
            }
            for (p, &(x, y)) in self.pairs.iter().enumerate() {
                match modes[p] {
                    PairMode::Correlated => {
                        let up = bit(pair_bits[p].0);
                        deltas[x] = if up { 1 } else { -1 };
                        deltas[y] = -deltas[x];
                    }
                    PairMode::Decorrelated => {
                        deltas[x] = if bit(pair_bits[p].0) { 1 } else { -1 };
                        deltas[y] = if bit(pair_bits[p].1) { 1 } else { -1 };
                    }
                    PairMode::Deleted => {
                        deltas[x] = 0;
                        deltas[y] = 0;
                    }
                }
            }
            let mut position = 0i64;
            let mut height = 0i64;
            for &d in &deltas {
                position += d;
                height = height.max(position);
            }
            f(height, position);
        }
        bits as u32
    }

    /// Exact expected height under the given modes (all pairs correlated
    /// when `modes` is None).
    pub fn expected_height(&self, modes: &[PairMode]) -> Dyadic {
        let mut total = 0i128;
        let bits = self.enumerate(modes, |height, _| total += height as i128);
        Dyadic { num: total, log2_den: bits }
    }

    /// Exact Pr[H = 0 and end <= -m] under the given modes.
    pub fn flat_tail_probability(&self, modes: &[PairMode], m: i64) -> Dyadic {
        let mut count = 0i128;
        let bits = self.enumerate(modes, |height, end| {
            if height == 0 && end <= -m {
                count += 1;
            }
        });
        Dyadic { num: count, log2_den: bits }
    }
}

/// Expected height with every pair correlated versus with `pair`
/// decorrelated: decorrelating never decreases it.
pub fn decorrelation_experiment(walk: &PairedWalk, pair: usize) -> (Dyadic, Dyadic) {
    let correlated = vec![PairMode::Correlated; walk.pairs.len()];
    let mut decorrelated = correlated.clone();
    decorrelated[pair] = PairMode::Decorrelated;
    (walk.expected_height(&correlated), walk.expected_height(&decorrelated))
}

/// Pr[H = 0 and end <= -m] with every pair correlated versus with the
/// earliest-ending pair deleted: deleting never decreases it.
pub fn deletion_experiment(walk: &PairedWalk, m: i64) -> (Dyadic, Dyadic) {
    let correlated = vec![PairMode::Correlated; walk.pairs.len()];
    let mut deleted = correlated.clone();
    if let Some(p) = walk.earliest_ending_pair() {
        deleted[p] = PairMode::Deleted;
    }
    (walk.flat_tail_probability(&correlated, m), walk.flat_tail_probability(&deleted, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_fragment_example() {
        // k = 9: three samples then a value -> positions 1, 2, 9, 8
        let labels = [Label::Sample, Label::Sample, Label::Sample, Label::Value];
        let trace = build_rw(&labels, 9);
        assert_eq!(trace.positions, vec![0, 1, 2, 9, 8]);
        assert_eq!(trace.steps[2], WalkStep::Jump(7));
    }

    #[test]
    fn all_values_descend() {
        let labels = vec![Label::Value; 6];
        let trace = build_rw(&labels, 4);
        assert_eq!(trace.positions, vec![0, -1, -2, -3, -4, -5, -6]);
    }

    #[test]
    fn jump_occurs_exactly_once_when_enough_samples() {
        // exhaustive over label sequences of length <= 6
        for k in [4usize, 9] {
            let q = k.saturating_sub(floor_two_sqrt(k)).max(1);
            for n in 1..=6 {
                for mask in 0u32..(1 << n) {
                    let labels: Vec<Label> = (0..n)
                        .map(|j| if mask >> j & 1 == 1 { Label::Sample } else { Label::Value })
                        .collect();
                    let samples = labels.iter().filter(|&&l| l == Label::Sample).count();
                    let trace = build_rw(&labels, k);
                    let jumps =
                        trace.steps.iter().filter(|s| matches!(s, WalkStep::Jump(_))).count();
                    assert_eq!(jumps, usize::from(samples >= q));
                }
            }
        }
    }

    #[test]
    fn step_sizes_are_constrained() {
        let mut rng = Stream::new(21, 0);
        for _ in 0..200 {
            let k = 1 + rng.next_below(20);
            let n = 1 + rng.next_below(12);
            let labels: Vec<Label> = (0..n)
                .map(|_| if rng.coin() { Label::Sample } else { Label::Value })
                .collect();
            let trace = build_rw(&labels, k);
            let jump = (k - k.saturating_sub(floor_two_sqrt(k)).max(1) + 1) as i64;
            for w in trace.positions.windows(2) {
                let d = w[1] - w[0];
                assert!(d == -1 || d == 0 || d == 1 || d == jump, "step {d}");
            }
        }
    }

    #[test]
    fn heights_example() {
        let trace = WalkTrace {
            positions: vec![0, -1, 0, 1, 0],
            steps: vec![WalkStep::Down, WalkStep::Up, WalkStep::Up, WalkStep::Down],
        };
        assert_eq!(heights(&trace, 4), (1, 0));
        assert_eq!(heights(&trace, 3), (0, 0));
        assert_eq!(heights(&trace, 1), (1, 2));
    }

    #[test]
    fn heights_all_matches_direct_scan() {
        let mut rng = Stream::new(4, 0);
        for _ in 0..100 {
            let n = 1 + rng.next_below(20);
            let k = 1 + rng.next_below(10);
            let labels: Vec<Label> = (0..n)
                .map(|_| if rng.coin() { Label::Sample } else { Label::Value })
                .collect();
            let trace = build_rw(&labels, k);
            let fast = heights_all(&trace);
            for (j, &pair) in fast.iter().enumerate() {
                assert_eq!(pair, heights(&trace, j));
            }
        }
    }

    #[test]
    fn facts_hand_trace() {
        // k = 9, nine couples arranged so the sorted list opens with three
        // samples (20, 19, 18) and then nine values, with the remaining six
        // samples at the bottom. Every threshold is >= 18 while every value
        // is < 18, so the rehearsal run selects nothing; on the walk side,
        // Y_4 is a value whose right height is 0.
        let couples = [
            (20.0, 17.0),
            (19.0, 16.0),
            (18.0, 15.0),
            (0.6, 14.0),
            (0.5, 13.0),
            (0.4, 12.0),
            (0.3, 11.0),
            (0.2, 10.0),
            (0.1, 9.5),
        ];
        let first_is_value = [false; 9];
        let report = walk_facts_check(&couples, &first_is_value, 9).unwrap();
        assert!(report.pass, "{:?}", report.first_mismatch);

        let flips = FlipAssignment::new(&couples, &first_is_value, 9);
        assert_eq!(
            &flips.labels[..4],
            &[Label::Sample, Label::Sample, Label::Sample, Label::Value]
        );
        let trace = build_rw(&flips.labels, 9);
        assert_eq!(&trace.positions[..5], &[0, 1, 2, 9, 8]);
        let (_, h_r) = heights(&trace, 4);
        assert_eq!(h_r, 0, "the hand trace expects a flat right height at Y_4");
    }

    #[test]
    fn all_sample_walks_miss_nothing() {
        // no values anywhere: the walk never descends, so the prefix
        // missing-count expression max(H_L - H_R, 0) is 0 at every index
        for k in [4usize, 9] {
            let labels = vec![Label::Sample; 12];
            let trace = build_rw(&labels, k);
            for (h_l, h_r) in heights_all(&trace) {
                assert_eq!((h_l - h_r).max(0), 0);
            }
        }
    }

    #[test]
    fn two_sample_bound_single_couple() {
        // one couple (a, b), k = 1: each orientation hands the prophet one
        // of the draws, so lhs = (a + b)/2 = rhs.
        let mut rng = Stream::new(0, 0);
        let out = prophet_two_sample_bound(&[(7.0, 3.0)], 1, &mut rng);
        assert!(out.exact);
        assert_eq!(out.lhs, 5.0);
        assert_eq!(out.rhs, 5.0);
    }

    #[test]
    fn two_sample_bound_equal_draws() {
        let couples = vec![(2.0, 2.0); 4];
        let mut rng = Stream::new(0, 0);
        let out = prophet_two_sample_bound(&couples, 2, &mut rng);
        assert_eq!(out.lhs, out.rhs);
    }

    #[test]
    fn two_sample_bound_random_list() {
        // n = 10, k = 3: full 2^10 enumeration
        let mut rng = Stream::new(88, 0);
        let couples: Vec<(f64, f64)> =
            (0..10).map(|_| (rng.next_f64() * 4.0, rng.next_f64() * 4.0)).collect();
        let out = prophet_two_sample_bound(&couples, 3, &mut rng);
        assert!(out.exact);
        assert!(out.lhs <= out.rhs + 1e-12 * (1.0 + out.rhs));
    }

    #[test]
    fn decorrelating_one_of_two_pairs_is_monotone() {
        let walk = PairedWalk::new(6, vec![(0, 3), (1, 5)]).unwrap();
        for pair in 0..2 {
            let (correlated, decorrelated) = decorrelation_experiment(&walk, pair);
            assert!(correlated.le(&decorrelated), "pair {pair}");
        }
    }

    #[test]
    fn two_sample_bound_falls_back_to_sampling() {
        let mut rng = Stream::new(6, 0);
        let couples: Vec<(f64, f64)> =
            (0..25).map(|_| (rng.next_f64(), rng.next_f64())).collect();
        let out = prophet_two_sample_bound(&couples, 5, &mut rng);
        assert!(!out.exact);
        assert!(out.ci_half > 0.0);
        assert!(out.lhs <= out.rhs + out.ci_half);
    }

    #[test]
    fn reflection_spot_values() {
        let (a, b, total) = reflection_identity(4, 2).unwrap();
        assert_eq!((a, b, total), (1, 1, 16));
        // impossible events for m > n
        let (a, b, _) = reflection_identity(3, 5).unwrap();
        assert_eq!((a, b), (0, 0));
        let (a, b, _) = reflection_identity(2, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn decorrelation_two_step_example() {
        let walk = PairedWalk::new(2, vec![(0, 1)]).unwrap();
        let (corr, decorr) = decorrelation_experiment(&walk, 0);
        assert_eq!(corr.as_f64(), 0.5);
        assert_eq!(decorr.as_f64(), 0.75);
        assert!(corr.le(&decorr));
    }

    #[test]
    fn deleted_pair_equals_excised_steps() {
        // flattening a pair's two steps gives the same height distribution
        // as removing them from the walk outright
        let with_pair = PairedWalk::new(5, vec![(1, 3)]).unwrap();
        let flattened = with_pair.expected_height(&[PairMode::Deleted]);
        let excised = PairedWalk::new(3, vec![]).unwrap().expected_height(&[]);
        assert_eq!(flattened.as_f64(), excised.as_f64());
    }

    #[test]
    fn dyadic_comparison() {
        let half = Dyadic { num: 1, log2_den: 1 };
        let three_quarters = Dyadic { num: 3, log2_den: 2 };
        assert!(half.le(&three_quarters));
        assert!(!three_quarters.le(&half));
        assert!(half.le(&half));
    }

    #[test]
    fn rw_prime_is_flat_after_its_jump() {
        let labels = vec![Label::Sample; 40];
        let k = 16;
        let trace = build_rw_prime(&labels, k);
        let jump_pos = trace.steps.iter().position(|s| matches!(s, WalkStep::Jump(_)));
        if let Some(j) = jump_pos {
            assert!(trace.steps[j + 1..].iter().all(|s| *s == WalkStep::Flat));
            assert_eq!(trace.steps[j], WalkStep::Jump(4));
        }
    }
}
