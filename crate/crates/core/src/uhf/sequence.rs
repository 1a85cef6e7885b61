//! Factor sequences `(n_l)` describing a UHF tensor decomposition.
//!
//! Levels are 1-based throughout: `factor(1)` is `n_1`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, is_prime};
use crate::error::{Error, Result};
use crate::uhf::supernatural::SupernaturalNumber;

/// Default upper bound on stage dimensions.
pub const DEFAULT_STAGE_CAP: usize = 4096;

/// Closed-form or tabulated rule generating `n_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum FactorRule {
    /// `n_l = c`.
    Constant { value: u64 },
    /// `n_l = (l+1)!`.
    Factorial,
    /// `n_l = l + 1`.
    Linear,
    /// `n_l = p^l`.
    PrimePower { prime: u64 },
    /// `n_l` cycles through the listed values.
    Periodic { values: Vec<u64> },
    /// A finite custom table; levels past its end are unknown.
    Table { values: Vec<u64> },
    /// Diagonal resequencing of `inner`: level `m` reads inner level
    /// `cantor_source(m, bound)`.
    Resequenced {
        inner: Box<FactorRule>,
        bound: Option<usize>,
    },
}

/// Source level visited at output level `m` (1-based) by the Cantor diagonal
/// schedule `1, 1,2, 1,2,3, ...`. With a `bound`, diagonals are truncated at
/// `bound` so only levels `1..=bound` are visited, each infinitely often.
pub fn cantor_source(m: usize, bound: Option<usize>) -> usize {
    assert!(m >= 1, "levels are 1-based");
    let mut remaining = m;
    let mut d = 1usize;
    loop {
        let len = match bound {
            Some(b) => d.min(b),
            None => d,
        };
        if remaining <= len {
            return remaining;
        }
        remaining -= len;
        d += 1;
    }
}

/// First output level whose source is `source`, at or after output level `from`.
pub fn cantor_next_visit(source: usize, from: usize, bound: Option<usize>) -> usize {
    let mut m = from.max(1);
    loop {
        if cantor_source(m, bound) == source {
            return m;
        }
        m += 1;
    }
}

impl FactorRule {
    fn validate(&self) -> Result<()> {
        let check = |v: u64| {
            if v < 2 {
                Err(Error::InvalidInput(format!("factor {v} must be at least 2")))
            } else {
                Ok(())
            }
        };
        match self {
            FactorRule::Constant { value } => check(*value),
            FactorRule::Factorial | FactorRule::Linear => Ok(()),
            FactorRule::PrimePower { prime } => {
                if is_prime(*prime) {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!("{prime} is not prime")))
                }
            }
            FactorRule::Periodic { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidInput("periodic rule needs values".into()));
                }
                values.iter().try_for_each(|&v| check(v))
            }
            FactorRule::Table { values } => values.iter().try_for_each(|&v| check(v)),
            FactorRule::Resequenced { inner, bound } => {
                if let (FactorRule::Table { values }, Some(b)) = (inner.as_ref(), bound) {
                    if *b > values.len() {
                        return Err(Error::InvalidInput("resequence bound exceeds table length".into()));
                    }
                }
                if *bound == Some(0) {
                    return Err(Error::InvalidInput("resequence bound must be positive".into()));
                }
                inner.validate()
            }
        }
    }

    pub fn factor(&self, level: usize) -> Result<BigUint> {
        if level == 0 {
            return Err(Error::OutOfRange("levels start at 1".into()));
        }
        Ok(match self {
            FactorRule::Constant { value } => BigUint::from(*value),
            FactorRule::Factorial => factorial(level as u64 + 1),
            FactorRule::Linear => BigUint::from(level as u64 + 1),
            FactorRule::PrimePower { prime } => num_traits::pow(BigUint::from(*prime), level),
            FactorRule::Periodic { values } => BigUint::from(values[(level - 1) % values.len()]),
            FactorRule::Table { values } => match values.get(level - 1) {
                Some(&v) => BigUint::from(v),
                None => {
                    return Err(Error::OutOfRange(format!(
                        "level {level} beyond table of length {}",
                        values.len()
                    )))
                }
            },
            FactorRule::Resequenced { inner, bound } => return inner.factor(cantor_source(level, *bound)),
        })
    }

    /// Number of known levels for finite tables, `None` for infinite rules.
    pub fn known_levels(&self) -> Option<usize> {
        match self {
            FactorRule::Table { values } => Some(values.len()),
            _ => None,
        }
    }

    /// True when `n_l` is nondecreasing and unbounded.
    pub fn is_growing(&self) -> bool {
        matches!(
            self,
            FactorRule::Factorial | FactorRule::Linear | FactorRule::PrimePower { .. }
        )
    }

    /// Period for constant and periodic rules.
    pub fn period(&self) -> Option<usize> {
        match self {
            FactorRule::Constant { .. } => Some(1),
            FactorRule::Periodic { values } => Some(values.len()),
            _ => None,
        }
    }
}

/// A factor sequence `(n_l)` with every `n_l ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSequence {
    rule: FactorRule,
}

impl FactorSequence {
    pub fn new(rule: FactorRule) -> Result<Self> {
        rule.validate()?;
        Ok(FactorSequence { rule })
    }

    pub fn constant(value: u64) -> Result<Self> {
        Self::new(FactorRule::Constant { value })
    }

    pub fn table(values: Vec<u64>) -> Result<Self> {
        Self::new(FactorRule::Table { values })
    }

    pub fn rule(&self) -> &FactorRule {
        &self.rule
    }

    pub fn factor(&self, level: usize) -> Result<BigUint> {
        self.rule.factor(level)
    }

    pub fn factor_u64(&self, level: usize) -> Result<u64> {
        self.factor(level)?
            .to_u64()
            .ok_or_else(|| Error::OutOfRange(format!("factor at level {level} exceeds u64")))
    }

    /// `n_1, ..., n_L`.
    pub fn prefix(&self, len: usize) -> Result<Vec<u64>> {
        (1..=len).map(|l| self.factor_u64(l)).collect()
    }

    pub fn known_levels(&self) -> Option<usize> {
        self.rule.known_levels()
    }

    /// The stage `M_{n_1} ⊗ ... ⊗ M_{n_L}`, refused above `cap`.
    pub fn stage(&self, len: usize, cap: usize) -> Result<Stage> {
        let dim = stage_dim(self, len)?;
        match dim.to_usize() {
            Some(d) if d <= cap => Stage::new(self.prefix(len)?, cap),
            _ => Err(Error::StageCap {
                dim: dim.to_string(),
                cap,
            }),
        }
    }
}

/// `∏_{l ≤ L} n_l`; the empty product is 1.
pub fn stage_dim(seq: &FactorSequence, len: usize) -> Result<BigUint> {
    (1..=len).try_fold(BigUint::one(), |acc, l| Ok(acc * seq.factor(l)?))
}

/// Supernatural number of the sequence. Finite tables use their first
/// `horizon` entries and are flagged as lower bounds.
pub fn supernatural_of(seq: &FactorSequence, horizon: usize) -> Result<SupernaturalNumber> {
    supernatural_of_rule(seq.rule(), horizon)
}

fn supernatural_of_rule(rule: &FactorRule, horizon: usize) -> Result<SupernaturalNumber> {
    Ok(match rule {
        FactorRule::Constant { value } => SupernaturalNumber::infinite_power_of(*value),
        FactorRule::Factorial | FactorRule::Linear => SupernaturalNumber::universal(),
        FactorRule::PrimePower { prime } => SupernaturalNumber::infinite_power_of(*prime),
        FactorRule::Periodic { values } => values.iter().fold(SupernaturalNumber::one(), |acc, &v| {
            acc.multiply(&SupernaturalNumber::infinite_power_of(v))
        }),
        FactorRule::Table { values } => {
            if values.is_empty() {
                return Err(Error::InvalidInput("empty factor sequence".into()));
            }
            values
                .iter()
                .take(horizon.max(1))
                .fold(SupernaturalNumber::one(), |acc, &v| {
                    acc.multiply(&SupernaturalNumber::of_integer(v))
                })
                .as_lower_bound()
        }
        FactorRule::Resequenced { inner, bound } => match (inner.as_ref(), bound) {
            // A bounded schedule repeats the first `b` table entries forever.
            (FactorRule::Table { values }, Some(b)) => {
                if values.is_empty() {
                    return Err(Error::InvalidInput("empty factor sequence".into()));
                }
                values[..*b].iter().fold(SupernaturalNumber::one(), |acc, &v| {
                    acc.multiply(&SupernaturalNumber::infinite_power_of(v))
                })
            }
            (inner, Some(b)) => {
                let mut acc = SupernaturalNumber::one();
                for l in 1..=*b {
                    let n = inner.factor(l)?;
                    let n = n
                        .to_u64()
                        .ok_or_else(|| Error::OutOfRange("factor too large to factorise".into()))?;
                    acc = acc.multiply(&SupernaturalNumber::infinite_power_of(n));
                }
                acc
            }
            (inner, None) => supernatural_of_rule(inner, horizon)?.infinite_closure(),
        },
    })
}

/// Factor sizes of a concrete stage, little-endian: factor 1 varies slowest in
/// the Kronecker index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    factors: Vec<u64>,
    dim: usize,
}

impl Stage {
    pub fn new(factors: Vec<u64>, cap: usize) -> Result<Self> {
        let mut dim: usize = 1;
        for &n in &factors {
            if n < 2 {
                return Err(Error::InvalidInput(format!("factor {n} must be at least 2")));
            }
            dim = dim
                .checked_mul(n as usize)
                .filter(|&d| d <= cap)
                .ok_or_else(|| Error::StageCap {
                    dim: factors
                        .iter()
                        .map(|&n| BigUint::from(n))
                        .product::<BigUint>()
                        .to_string(),
                    cap,
                })?;
        }
        Ok(Stage { factors, dim })
    }

    pub fn trivial() -> Self {
        Stage {
            factors: Vec::new(),
            dim: 1,
        }
    }

    /// Number of tensor factors `L`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// True when `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &Stage) -> bool {
        other.factors.starts_with(&self.factors)
    }

    /// Product of the factors strictly after `level` (1-based).
    pub fn stride(&self, level: usize) -> usize {
        self.factors[level..].iter().map(|&n| n as usize).product()
    }

    /// Splits a global index into per-factor coordinates.
    pub fn coordinates(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % n as usize;
            index /= n as usize;
        }
        out
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, &n)| acc * n as usize + c)
    }
}
