//! Supernatural numbers: formal prime products with exponents in N ∪ {∞}.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    fn add(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(e) => s.serialize_u32(*e),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A supernatural number. When `universal` is set every prime carries an
/// infinite exponent and the explicit map is empty. `lower_bound` marks values
/// computed from a finite table, whose true exponents may be larger.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<u64, Exponent>,
    universal: bool,
    lower_bound: bool,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn universal() -> Self {
        SupernaturalNumber {
            exponents: BTreeMap::new(),
            universal: true,
            lower_bound: false,
        }
    }

    pub fn from_exponents(exponents: BTreeMap<u64, Exponent>) -> Result<Self> {
        for (&p, &e) in &exponents {
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            if e == Exponent::Finite(0) {
                return Err(Error::InvalidInput(format!(
                    "exponent of {p} must be at least 1 when present"
                )));
            }
        }
        Ok(SupernaturalNumber {
            exponents,
            universal: false,
            lower_bound: false,
        })
    }

    /// `n^∞`: every prime dividing `n` with infinite exponent.
    pub fn infinite_power_of(n: u64) -> Self {
        let exponents = factorize(n).into_iter().map(|(p, _)| (p, Exponent::Infinite)).collect();
        SupernaturalNumber {
            exponents,
            universal: false,
            lower_bound: false,
        }
    }

    pub fn of_integer(n: u64) -> Self {
        let exponents = factorize(n)
            .into_iter()
            .map(|(p, e)| (p, Exponent::Finite(e)))
            .collect();
        SupernaturalNumber {
            exponents,
            universal: false,
            lower_bound: false,
        }
    }

    pub fn multiply(&self, other: &SupernaturalNumber) -> SupernaturalNumber {
        let lower_bound = self.lower_bound || other.lower_bound;
        if self.universal || other.universal {
            return SupernaturalNumber {
                lower_bound,
                ..Self::universal()
            };
        }
        let mut exponents = self.exponents.clone();
        for (&p, &e) in &other.exponents {
            exponents.entry(p).and_modify(|x| *x = x.add(e)).or_insert(e);
        }
        SupernaturalNumber {
            exponents,
            universal: false,
            lower_bound,
        }
    }

    /// Replaces every finite exponent by ∞.
    pub fn infinite_closure(&self) -> SupernaturalNumber {
        SupernaturalNumber {
            exponents: self.exponents.keys().map(|&p| (p, Exponent::Infinite)).collect(),
            universal: self.universal,
            lower_bound: false,
        }
    }

    pub fn as_lower_bound(mut self) -> Self {
        self.lower_bound = true;
        self
    }

    pub fn is_universal(&self) -> bool {
        self.universal
    }

    pub fn is_lower_bound(&self) -> bool {
        self.lower_bound
    }

    pub fn exponent(&self, p: u64) -> Option<Exponent> {
        if self.universal {
            return Some(Exponent::Infinite);
        }
        self.exponents.get(&p).copied()
    }

    pub fn exponents(&self) -> &BTreeMap<u64, Exponent> {
        &self.exponents
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.universal {
            return write!(f, "universal");
        }
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| match e {
                Exponent::Finite(1) => p.to_string(),
                Exponent::Finite(k) => format!("{p}^{k}"),
                Exponent::Infinite => format!("{p}^inf"),
            })
            .collect();
        write!(f, "{}", parts.join("*"))?;
        if self.lower_bound {
            write!(f, " (lower bound)")?;
        }
        Ok(())
    }
}

impl Serialize for SupernaturalNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("universal", &self.universal)?;
        map.serialize_entry("lower_bound", &self.lower_bound)?;
        let exps: BTreeMap<String, Exponent> = self.exponents.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        map.serialize_entry("exponents", &exps)?;
        map.serialize_entry("display", &self.to_string())?;
        map.end()
    }
}
