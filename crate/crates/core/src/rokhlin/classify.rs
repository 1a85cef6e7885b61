//! Element-level Rokhlin classification from pattern certificates.

use serde::Serialize;

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::groups::{EmbeddingPattern, Eventual, GroupElement};

/// Powers `j·g`, `j ≤ DEFAULT_POWER_BOUND`, checked for infinite-order elements.
pub const DEFAULT_POWER_BOUND: i64 = 10;

/// Why `m·g` stays outside the direct sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCertificate {
    pub multiple: i64,
    pub witness: usize,
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum RokhlinVerdict {
    /// For each prime `P | k`, `(k/P)·g` is nonzero at infinitely many
    /// levels, so `P^r` divides the image order infinitely often.
    FiniteOrderRokhlin {
        order: u64,
        certificates: Vec<PowerCertificate>,
    },
    InfiniteOrderUniformlyOuter {
        certificates: Vec<PowerCertificate>,
    },
    /// `element` lies in the direct sum: zero from `vanishes_from` on.
    Fails {
        element: GroupElement,
        multiple: i64,
        vanishes_from: usize,
    },
    Unknown {
        multiple: i64,
        checked_up_to: usize,
    },
}

impl RokhlinVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            RokhlinVerdict::FiniteOrderRokhlin { .. } => "FiniteOrderRokhlin",
            RokhlinVerdict::InfiniteOrderUniformlyOuter { .. } => "InfiniteOrderUniformlyOuter",
            RokhlinVerdict::Fails { .. } => "Fails",
            RokhlinVerdict::Unknown { .. } => "Unknown",
        }
    }
}

pub fn rokhlin_classify(
    pattern: &EmbeddingPattern,
    g: &GroupElement,
    horizon: usize,
    power_bound: i64,
) -> Result<RokhlinVerdict> {
    pattern.check_element(g)?;
    if g.is_zero() {
        return Err(Error::InvalidInput("the identity has no Rokhlin data".into()));
    }
    let order = pattern.element_order(g);
    let multiples: Vec<i64> = match order {
        Some(k) => factorize(k).iter().map(|&(p, _)| (k / p) as i64).collect(),
        None => {
            if power_bound < 1 {
                return Err(Error::InvalidInput("power bound must be at least 1".into()));
            }
            (1..=power_bound).collect()
        }
    };
    let mut certificates = Vec::with_capacity(multiples.len());
    for m in multiples {
        let h = pattern.scale(g, m);
        match pattern.eventual(&h, horizon)? {
            Eventual::NonzeroInfinitelyOften { witness, certificate } => certificates.push(PowerCertificate {
                multiple: m,
                witness,
                certificate,
            }),
            Eventual::VanishesFrom { level } => {
                return Ok(RokhlinVerdict::Fails {
                    element: h,
                    multiple: m,
                    vanishes_from: level,
                })
            }
            Eventual::Unknown { checked_up_to, .. } => {
                return Ok(RokhlinVerdict::Unknown {
                    multiple: m,
                    checked_up_to,
                })
            }
        }
    }
    Ok(match order {
        Some(k) => RokhlinVerdict::FiniteOrderRokhlin { order: k, certificates },
        None => RokhlinVerdict::InfiniteOrderUniformlyOuter { certificates },
    })
}
