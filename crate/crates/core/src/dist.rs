//! Product value distributions and single-dimensional revenue quantities.
//!
//! Marginals are drawn by inverse transform, so `sample = quantile(u)` with
//! `u` from a [`Stream`](crate::rng::Stream); that makes the quantile
//! convention (`inf {x : F(x) >= p}`) the single source of truth for both
//! sampling and reserve pricing. The truncated-equal-revenue family is the
//! canonical regular-but-not-MHR stressor.

use alloc::vec;
use alloc::vec::Vec;

use crate::env::WeightVector;
use crate::error::{Error, Result};
use crate::rng::Stream;

#[derive(Clone, Debug, PartialEq)]
pub enum Marginal {
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    PointMass { value: f64 },
    /// F(v) = 1 - 1/v on [1, cap), with the remaining 1/cap mass at cap.
    TruncatedEqualRevenue { cap: f64 },
    /// Finite atoms (value, probability); probabilities sum to 1.
    Empirical { atoms: Vec<(f64, f64)> },
}

impl Marginal {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Marginal::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && *lo >= 0.0 && hi > lo,
            Marginal::Exponential { rate } => rate.is_finite() && *rate > 0.0,
            Marginal::PointMass { value } => value.is_finite() && *value >= 0.0,
            Marginal::TruncatedEqualRevenue { cap } => cap.is_finite() && *cap > 1.0,
            Marginal::Empirical { atoms } => {
                !atoms.is_empty()
                    && atoms.iter().all(|&(v, p)| v.is_finite() && v >= 0.0 && (0.0..=1.0).contains(&p))
                    && (atoms.iter().map(|&(_, p)| p).sum::<f64>() - 1.0).abs() < 1e-9
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid("marginal parameters out of range"))
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Marginal::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Marginal::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - libm::exp(-rate * x)
                }
            }
            Marginal::PointMass { value } => {
                if x >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            Marginal::TruncatedEqualRevenue { cap } => {
                if x < 1.0 {
                    0.0
                } else if x >= *cap {
                    1.0
                } else {
                    1.0 - 1.0 / x
                }
            }
            Marginal::Empirical { atoms } => {
                let mut sorted: Vec<(f64, f64)> = atoms.clone();
                sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                sorted.iter().take_while(|&&(v, _)| v <= x).map(|&(_, p)| p).sum()
            }
        }
    }

    /// Probability density, for the continuous families on their support.
    pub fn density(&self, x: f64) -> Result<f64> {
        match self {
            Marginal::Uniform { lo, hi } => {
                Ok(if (*lo..=*hi).contains(&x) { 1.0 / (hi - lo) } else { 0.0 })
            }
            Marginal::Exponential { rate } => {
                Ok(if x >= 0.0 { rate * libm::exp(-rate * x) } else { 0.0 })
            }
            Marginal::TruncatedEqualRevenue { cap } => {
                Ok(if (1.0..*cap).contains(&x) { 1.0 / (x * x) } else { 0.0 })
            }
            _ => Err(Error::Unsupported("density of a discrete marginal")),
        }
    }

    /// `inf {x : F(x) >= p}` for p in [0, 1]; at p = 0 the support minimum.
    pub fn quantile(&self, p: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&p));
        match self {
            Marginal::Uniform { lo, hi } => lo + p * (hi - lo),
            Marginal::Exponential { rate } => {
                if p >= 1.0 {
                    f64::INFINITY
                } else {
                    -libm::log(1.0 - p) / rate
                }
            }
            Marginal::PointMass { value } => *value,
            Marginal::TruncatedEqualRevenue { cap } => {
                if p <= 1.0 - 1.0 / cap {
                    1.0 / (1.0 - p)
                } else {
                    *cap
                }
            }
            Marginal::Empirical { atoms } => {
                let mut sorted: Vec<(f64, f64)> = atoms.clone();
                sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let mut acc = 0.0;
                for &(v, q) in &sorted {
                    acc += q;
                    if acc >= p - 1e-12 {
                        return v;
                    }
                }
                sorted.last().unwrap().0
            }
        }
    }

    pub fn sample(&self, rng: &mut Stream) -> f64 {
        self.quantile(rng.next_f64())
    }

    /// Myerson virtual value `v - (1 - F(v)) / f(v)`.
    pub fn virtual_value(&self, v: f64) -> Result<f64> {
        match self {
            Marginal::Uniform { hi, .. } => Ok(2.0 * v - hi),
            Marginal::Exponential { rate } => Ok(v - 1.0 / rate),
            Marginal::TruncatedEqualRevenue { cap } => {
                // (1 - F)/f = v on the continuous part; the atom at the cap
                // carries its full value.
                Ok(if v >= *cap { *cap } else { 0.0 })
            }
            Marginal::PointMass { .. } | Marginal::Empirical { .. } => {
                Err(Error::Unsupported("virtual value of a marginal without a density"))
            }
        }
    }

    /// The monopoly reserve `phi^{-1}(0)`, clamped into the support. For a
    /// point mass this is the atom; for the equal-revenue family, where every
    /// price earns the same, the support minimum.
    pub fn monopoly_reserve(&self) -> Result<f64> {
        if !self.is_regular() {
            return Err(Error::NotRegular);
        }
        Ok(match self {
            Marginal::Uniform { lo, hi } => (hi / 2.0).max(*lo),
            Marginal::Exponential { rate } => 1.0 / rate,
            Marginal::PointMass { value } => *value,
            Marginal::TruncatedEqualRevenue { .. } => 1.0,
            Marginal::Empirical { .. } => unreachable!("empirical marginals are not regular"),
        })
    }

    pub fn is_regular(&self) -> bool {
        !matches!(self, Marginal::Empirical { .. })
    }

    pub fn is_mhr(&self) -> bool {
        matches!(
            self,
            Marginal::Uniform { .. } | Marginal::Exponential { .. } | Marginal::PointMass { .. }
        )
    }

    /// Hazard rate f/(1-F) on the continuous support.
    pub fn hazard(&self, x: f64) -> Result<f64> {
        let f = self.density(x)?;
        let tail = 1.0 - self.cdf(x);
        if tail <= 0.0 {
            return Err(Error::Invalid("hazard rate beyond the support"));
        }
        Ok(f / tail)
    }

    /// (support minimum, support maximum); the maximum may be infinite.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Marginal::Uniform { lo, hi } => (*lo, *hi),
            Marginal::Exponential { .. } => (0.0, f64::INFINITY),
            Marginal::PointMass { value } => (*value, *value),
            Marginal::TruncatedEqualRevenue { cap } => (1.0, *cap),
            Marginal::Empirical { atoms } => {
                let lo = atoms.iter().map(|&(v, _)| v).fold(f64::INFINITY, f64::min);
                let hi = atoms.iter().map(|&(v, _)| v).fold(0.0, f64::max);
                (lo, hi)
            }
        }
    }
}

/// Independent marginals, one per universe element.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductDistribution {
    marginals: Vec<Marginal>,
}

impl ProductDistribution {
    pub fn new(marginals: Vec<Marginal>) -> Result<Self> {
        for m in &marginals {
            m.validate()?;
        }
        Ok(ProductDistribution { marginals })
    }

    pub fn iid(marginal: Marginal, n: usize) -> Result<Self> {
        marginal.validate()?;
        Ok(ProductDistribution { marginals: vec![marginal; n] })
    }

    pub fn n(&self) -> usize {
        self.marginals.len()
    }

    pub fn marginal(&self, i: usize) -> &Marginal {
        &self.marginals[i]
    }

    pub fn marginals(&self) -> &[Marginal] {
        &self.marginals
    }

    /// All marginals identical.
    pub fn is_iid(&self) -> bool {
        self.marginals.windows(2).all(|w| w[0] == w[1])
    }

    pub fn all_regular(&self) -> bool {
        self.marginals.iter().all(Marginal::is_regular)
    }

    pub fn all_mhr(&self) -> bool {
        self.marginals.iter().all(Marginal::is_mhr)
    }

    pub fn sample(&self, rng: &mut Stream) -> WeightVector {
        WeightVector::new(self.marginals.iter().map(|m| m.sample(rng)).collect())
            .expect("marginal samples are finite and non-negative")
    }
}
