//! Closed-form K-groups of the crossed product by a finitely generated
//! abelian group.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::groups::FgAbelianGroup;

/// A rational vector space `Q^rank`, possibly of countably infinite rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KGroup {
    RationalVectorSpace {
        #[serde(serialize_with = "big")]
        rank: BigUint,
    },
    CountablyInfinite,
    /// The hypothesis needed by the formula was not supplied.
    Undetermined,
}

fn big<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl KGroup {
    fn of_rank(rank: BigUint) -> Self {
        KGroup::RationalVectorSpace { rank }
    }

    /// The rational rank when finite and determined.
    pub fn rank(&self) -> Option<&BigUint> {
        match self {
            KGroup::RationalVectorSpace { rank } => Some(rank),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            KGroup::RationalVectorSpace { rank } if rank.is_zero() => "0".into(),
            KGroup::RationalVectorSpace { rank } if rank.is_one() => "Q".into(),
            KGroup::RationalVectorSpace { rank } => format!("Q^{rank}"),
            KGroup::CountablyInfinite => "Q^(countably infinite)".into(),
            KGroup::Undetermined => "undetermined".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KInvariants {
    /// Free rank `r` of the acting group; `None` for infinite rank.
    pub group_rank: Option<usize>,
    pub rokhlin_hypothesis: bool,
    pub k0: KGroup,
    pub k1: KGroup,
    /// Adopted order on K_0: positive iff the unique trace is strictly
    /// positive, or zero.
    pub order: String,
    pub unit: String,
    pub trace_normalization: String,
}

const ORDER: &str = "trace-induced strict order: x > 0 iff tau(x) > 0";
const UNIT: &str = "[1], with tau([1]) = 1";

fn assemble(group_rank: Option<usize>, rokhlin: bool, k0: KGroup, k1: KGroup) -> KInvariants {
    KInvariants {
        group_rank,
        rokhlin_hypothesis: rokhlin,
        k0,
        k1,
        order: ORDER.into(),
        unit: UNIT.into(),
        trace_normalization: "tau normalised so tau(1) = 1; tau(K_0) is a subgroup of Q".into(),
    }
}

/// `K_0 = K_1 = Q^{2^{r−1}}` for `r ≥ 1`; `(Q, 0)` for finite groups, where
/// the crossed product is again the universal UHF algebra. `rokhlin` is the
/// caller's assertion that the action has the Rokhlin property.
pub fn k_invariants(group: &FgAbelianGroup, rokhlin: bool) -> KInvariants {
    let r = group.rank();
    if !rokhlin {
        return assemble(Some(r), false, KGroup::Undetermined, KGroup::Undetermined);
    }
    if r == 0 {
        return assemble(
            Some(0),
            true,
            KGroup::of_rank(BigUint::one()),
            KGroup::of_rank(BigUint::zero()),
        );
    }
    let rank = BigUint::one() << (r - 1);
    assemble(Some(r), true, KGroup::of_rank(rank.clone()), KGroup::of_rank(rank))
}

/// Free abelian group of countably infinite rank.
pub fn k_invariants_infinite_rank(rokhlin: bool) -> KInvariants {
    if !rokhlin {
        return assemble(None, false, KGroup::Undetermined, KGroup::Undetermined);
    }
    assemble(None, true, KGroup::CountablyInfinite, KGroup::CountablyInfinite)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranks(k: &KInvariants) -> (u64, u64) {
        let f = |g: &KGroup| {
            g.rank()
                .map(|r| r.to_u64_digits().first().copied().unwrap_or(0))
                .unwrap()
        };
        (f(&k.k0), f(&k.k1))
    }

    #[test]
    fn rank_formula() {
        for (r, expect) in [(1, 1), (2, 2), (3, 4), (7, 64)] {
            let k = k_invariants(&FgAbelianGroup::free(r), true);
            assert_eq!(ranks(&k), (expect, expect));
        }
        let k = k_invariants(&FgAbelianGroup::new(0, vec![2]).unwrap(), true);
        assert_eq!(ranks(&k), (1, 0));
        assert_eq!(k.k0.describe(), "Q");
        assert_eq!(k.k1.describe(), "0");
        assert_eq!(k_invariants(&FgAbelianGroup::free(3), true).k0.describe(), "Q^4");
        assert_eq!(k_invariants(&FgAbelianGroup::free(2), false).k0, KGroup::Undetermined);
        assert_eq!(k_invariants_infinite_rank(true).k1, KGroup::CountablyInfinite);
        // Torsion does not change the answer.
        let k = k_invariants(&FgAbelianGroup::new(2, vec![3]).unwrap(), true);
        assert_eq!(ranks(&k), (2, 2));
    }
}
