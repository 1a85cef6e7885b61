//! Level-indexed families of finite G-sets and their vanishing-trace profiles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{EmbeddingPattern, Eventual, GroupElement};
use crate::gset::{klein_induced, GroupModel, ModelElement};
use crate::perm::Permutation;
use crate::uhf::stage::global_permutation;
use crate::uhf::Stage;

/// Long-run behaviour of the set of levels where `g` acts without fixed points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FreeLevels {
    Infinite {
        witness: usize,
        certificate: String,
    },
    /// `g` has fixed points at every level `≥ from`.
    Finite {
        from: usize,
    },
    /// Undecided; data exists for levels `1..=checked_up_to`.
    Unknown {
        checked_up_to: usize,
    },
}

/// A sequence of finite G-sets `X_l`, one per level.
pub trait ActionFamily {
    type Element;

    fn describe(&self) -> String;
    fn is_identity(&self, g: &Self::Element) -> bool;
    fn degree(&self, level: usize) -> Result<BigInt>;
    fn fixed_points(&self, g: &Self::Element, level: usize) -> Result<BigInt>;
    /// Closed-form certificate for the free levels; `horizon` bounds scans
    /// of tabulated data only.
    fn free_levels(&self, g: &Self::Element, horizon: usize) -> Result<FreeLevels>;
}

/// `g` acts on `Z/n_l` by translation through its coordinate.
impl ActionFamily for EmbeddingPattern {
    type Element = GroupElement;

    fn describe(&self) -> String {
        format!("translations of {} on Z/n_l", self.describe_group())
    }

    fn is_identity(&self, g: &GroupElement) -> bool {
        g.is_zero()
    }

    fn degree(&self, level: usize) -> Result<BigInt> {
        self.modulus(level)
    }

    fn fixed_points(&self, g: &GroupElement, level: usize) -> Result<BigInt> {
        if self.coordinate(g, level)?.is_zero() {
            self.modulus(level)
        } else {
            Ok(BigInt::zero())
        }
    }

    fn free_levels(&self, g: &GroupElement, horizon: usize) -> Result<FreeLevels> {
        Ok(match self.eventual(g, horizon)? {
            Eventual::NonzeroInfinitelyOften { witness, certificate } => FreeLevels::Infinite { witness, certificate },
            Eventual::VanishesFrom { level } => FreeLevels::Finite { from: level },
            Eventual::Unknown { checked_up_to, .. } => FreeLevels::Unknown { checked_up_to },
        })
    }
}

/// Klein-bottle family `Y_l = (Z ⋊ Z) ×_N (Z/p^l × Z/p^l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KleinFamily {
    pub prime: u64,
}

impl KleinFamily {
    pub fn new(prime: u64) -> Result<Self> {
        if prime < 2 {
            return Err(Error::InvalidInput(format!("modulus base {prime} must be at least 2")));
        }
        Ok(KleinFamily { prime })
    }

    fn side(&self, level: usize) -> BigInt {
        num_traits::pow(BigInt::from(self.prime), level)
    }
}

impl ActionFamily for KleinFamily {
    type Element = ModelElement;

    fn describe(&self) -> String {
        format!("Klein bottle group on (Z ⋊ Z) ×_N (Z/{p}^l)^2", p = self.prime)
    }

    fn is_identity(&self, g: &ModelElement) -> bool {
        GroupModel::KleinBottle.is_identity(g)
    }

    fn degree(&self, level: usize) -> Result<BigInt> {
        let s = self.side(level);
        Ok(BigInt::from(2) * &s * &s)
    }

    /// `g = a^m b^n` fixes nothing unless `n` is even; then its conjugates
    /// in `N` are `(±m, n/2)`, each fixing all of `X_l` or none of it.
    fn fixed_points(&self, g: &ModelElement, level: usize) -> Result<BigInt> {
        if level == 0 {
            return Err(Error::OutOfRange("levels start at 1".into()));
        }
        let (m, n) = (g[0], g[1]);
        if n.rem_euclid(2) != 0 {
            return Ok(BigInt::zero());
        }
        let s = self.side(level);
        let trivial_on_x = BigInt::from(m).is_multiple_of(&s) && BigInt::from(n / 2).is_multiple_of(&s);
        Ok(if trivial_on_x {
            self.degree(level)?
        } else {
            BigInt::zero()
        })
    }

    fn free_levels(&self, g: &ModelElement, _horizon: usize) -> Result<FreeLevels> {
        if self.is_identity(g) {
            return Ok(FreeLevels::Finite { from: 1 });
        }
        let (m, n) = (g[0], g[1]);
        if n.rem_euclid(2) != 0 {
            return Ok(FreeLevels::Infinite {
                witness: 1,
                certificate: "odd b-exponent: no conjugate lies in N, so Y_l has no fixed points".into(),
            });
        }
        let bound = BigInt::from(m.abs().max((n / 2).abs()));
        let mut l = 1;
        while self.side(l) <= bound {
            l += 1;
        }
        Ok(FreeLevels::Infinite {
            witness: l,
            certificate: format!(
                "{}^l > {bound} for l ≥ {l}, so the translations (±{m}, {}) of (Z/{}^l)^2 are free",
                self.prime,
                n / 2,
                self.prime
            ),
        })
    }
}

impl KleinFamily {
    /// Fixed points counted on the materialised induced set.
    pub fn brute_force_fixed_points(&self, g: &ModelElement, level: u32) -> Result<usize> {
        let y = klein_induced(self.prime, level)?;
        Ok(y.fixed_points(&GroupModel::KleinBottle.to_word(g)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelTrace {
    pub level: usize,
    pub fixed_points: String,
    pub degree: String,
    /// Normalised trace `fix / degree` of the permutation unitary.
    pub trace: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ProfileVerdict {
    ProvenInfinite {
        certificate: String,
    },
    /// Nonzero trace at every level `≥ nonzero_from`.
    ProvenFinite {
        nonzero_from: usize,
    },
    UnknownUpTo {
        horizon: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceProfile {
    pub family: String,
    pub levels: Vec<LevelTrace>,
    pub zero_levels: Vec<usize>,
    pub verdict: ProfileVerdict,
}

impl ProfileVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ProfileVerdict::ProvenInfinite { .. } => "ProvenInfinite",
            ProfileVerdict::ProvenFinite { .. } => "ProvenFinite",
            ProfileVerdict::UnknownUpTo { .. } => "UnknownUpTo",
        }
    }
}

/// Levels `≤ horizon` where `τ(ρ_l(g)) = 0`, plus the long-run verdict.
pub fn vanishing_trace_profile<F: ActionFamily>(family: &F, g: &F::Element, horizon: usize) -> Result<TraceProfile> {
    if family.is_identity(g) {
        return Err(Error::InvalidInput("the identity has full trace at every level".into()));
    }
    let free = family.free_levels(g, horizon)?;
    let scan = match free {
        FreeLevels::Unknown { checked_up_to } => horizon.min(checked_up_to),
        _ => horizon,
    };
    let mut levels = Vec::with_capacity(scan);
    let mut zero_levels = Vec::new();
    for l in 1..=scan {
        let fix = family.fixed_points(g, l)?;
        let deg = family.degree(l)?;
        let trace = BigRational::new(fix.clone(), deg.clone());
        if trace.is_zero() {
            zero_levels.push(l);
        }
        levels.push(LevelTrace {
            level: l,
            fixed_points: fix.to_string(),
            degree: deg.to_string(),
            trace: crate::arith::format_rational(&trace),
        });
    }
    let verdict = match free {
        FreeLevels::Infinite { certificate, .. } => ProfileVerdict::ProvenInfinite { certificate },
        FreeLevels::Finite { from } => ProfileVerdict::ProvenFinite { nonzero_from: from },
        FreeLevels::Unknown { .. } => ProfileVerdict::UnknownUpTo { horizon: scan },
    };
    Ok(TraceProfile {
        family: family.describe(),
        levels,
        zero_levels,
        verdict,
    })
}

/// The permutation of the stage's global index set implementing `α_g`:
/// translation by the coordinate of `g` on every factor.
pub fn alpha_permutation(pattern: &EmbeddingPattern, g: &GroupElement, stage: &Stage) -> Result<Permutation> {
    let perms = stage
        .factors()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let c = pattern.coordinate(g, i + 1)?;
            let shift: usize = c
                .try_into()
                .map_err(|_| Error::OutOfRange("coordinate too large".into()))?;
            Ok(Permutation::rotation(n as usize, shift))
        })
        .collect::<Result<Vec<_>>>()?;
    global_permutation(stage, &perms)
}
