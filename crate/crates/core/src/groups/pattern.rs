//! Embeddings `i: G → ∏_l Z/n_l` given by per-generator coordinate rules,
//! and the trivial-intersection predicate `i(G) ∩ ⊕_l Z/n_l = 0`.
//!
//! Whether a coordinate is nonzero at infinitely many levels is decided by a
//! closed-form argument for each library rule; finite tables only ever give
//! horizon-bounded answers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mod_inverse, modulo};
use crate::error::{Error, Result};
use crate::groups::abelian::{FgAbelianGroup, GroupElement};
use crate::uhf::sequence::{cantor_next_visit, cantor_source, FactorRule, FactorSequence};

/// Default coefficient bound for generating-box quantifiers.
pub const DEFAULT_BOX_BOUND: i64 = 10;

const MAX_BOX_SIZE: usize = 2_000_000;

/// Image of one generator at each level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoordinateRule {
    /// Free generator ↦ `scale mod n_l`; torsion generator of order `d` ↦
    /// `scale · n_l / gcd(n_l, d)`.
    QuotientMod {
        #[serde(default = "default_scale")]
        scale: i64,
    },
    /// `Z → Z/(l+1)!`, generator ↦ 1. Requires the factorial sequence.
    FactorialMod,
    /// `Z_(p) → Z/p^l`, `a/b ↦ a·b⁻¹`. Requires the prime-power sequence.
    PadicDigits { prime: u64 },
    /// Nonzero only at the listed `(level, residue)` pairs.
    FiniteSupport { entries: Vec<(usize, i64)> },
    /// Explicit residues for levels `1..=values.len()`; unknown beyond.
    CustomTable { values: Vec<i64> },
}

fn default_scale() -> i64 {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GenKind {
    Free,
    Torsion(u64),
    Local(u64),
}

/// Long-run behaviour of the coordinates of one element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "behaviour", rename_all = "kebab-case")]
pub enum Eventual {
    /// Nonzero at `witness` and at infinitely many later levels.
    NonzeroInfinitelyOften { witness: usize, certificate: String },
    /// Zero at every level `≥ level`.
    VanishesFrom { level: usize },
    /// Not decidable from the data; levels `1..=checked_up_to` were inspected.
    Unknown {
        checked_up_to: usize,
        last_nonzero: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IntersectionVerdict {
    ProvenTrivial {
        box_bound: i64,
        elements_checked: usize,
    },
    Counterexample {
        element: GroupElement,
        vanishes_from: usize,
    },
    UnknownUpTo {
        horizon: usize,
        box_bound: i64,
        elements_checked: usize,
    },
}

impl IntersectionVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            IntersectionVerdict::ProvenTrivial { .. } => "ProvenTrivial",
            IntersectionVerdict::Counterexample { .. } => "Counterexample",
            IntersectionVerdict::UnknownUpTo { .. } => "UnknownUpTo",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingPattern {
    group: FgAbelianGroup,
    /// One `Z_(p)` summand per entry, after the finitely generated part.
    local_primes: Vec<u64>,
    /// Free generators, then torsion generators, then local generators.
    rules: Vec<CoordinateRule>,
    base: FactorSequence,
    /// Cantor resequencing layers, innermost first; each carries its bound.
    schedule: Vec<Option<usize>>,
}

impl EmbeddingPattern {
    pub fn new(
        group: FgAbelianGroup,
        local_primes: Vec<u64>,
        rules: Vec<CoordinateRule>,
        base: FactorSequence,
    ) -> Result<Self> {
        let pattern = EmbeddingPattern {
            group,
            local_primes,
            rules,
            base,
            schedule: Vec::new(),
        };
        pattern.validate()?;
        Ok(pattern)
    }

    /// Every generator mapped by `QuotientMod { scale: 1 }`.
    pub fn diagonal(group: FgAbelianGroup, base: FactorSequence) -> Result<Self> {
        let rules = vec![CoordinateRule::QuotientMod { scale: 1 }; group.ngens()];
        Self::new(group, Vec::new(), rules, base)
    }

    fn validate(&self) -> Result<()> {
        let expected = self.group.ngens() + self.local_primes.len();
        if self.rules.len() != expected {
            return Err(Error::InvalidInput(format!(
                "pattern needs {expected} coordinate rules, got {}",
                self.rules.len()
            )));
        }
        if let Some(&p) = self.local_primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidInput(format!("local summand prime {p} is not prime")));
        }
        let base_rule = self.base.rule();
        let known = self.base.known_levels();
        for (i, rule) in self.rules.iter().enumerate() {
            let kind = self.kind(i);
            let where_ = format!("generator {}", i + 1);
            match (rule, kind) {
                (CoordinateRule::QuotientMod { .. }, GenKind::Local(_)) => {
                    return Err(Error::InvalidInput(format!(
                        "{where_}: Z_(p) summands need padic-digits"
                    )))
                }
                (CoordinateRule::QuotientMod { .. }, _) => {}
                (CoordinateRule::FactorialMod, GenKind::Local(_)) => {
                    return Err(Error::InvalidInput(format!(
                        "{where_}: Z_(p) summands need padic-digits"
                    )))
                }
                (CoordinateRule::FactorialMod, _) => {
                    if *base_rule != FactorRule::Factorial {
                        return Err(Error::InvalidInput(format!(
                            "{where_}: factorial-mod requires the factorial sequence"
                        )));
                    }
                }
                (CoordinateRule::PadicDigits { prime }, kind) => {
                    if *base_rule != (FactorRule::PrimePower { prime: *prime }) {
                        return Err(Error::InvalidInput(format!(
                            "{where_}: padic-digits({prime}) requires the sequence n_l = {prime}^l"
                        )));
                    }
                    match kind {
                        GenKind::Torsion(_) => {
                            return Err(Error::InvalidInput(format!(
                                "{where_}: padic-digits cannot carry a torsion generator"
                            )))
                        }
                        GenKind::Local(p) if p != *prime => {
                            return Err(Error::InvalidInput(format!(
                                "{where_}: padic-digits({prime}) on a Z_({p}) summand"
                            )))
                        }
                        _ => {}
                    }
                }
                (CoordinateRule::FiniteSupport { entries }, kind) => {
                    if let GenKind::Local(_) = kind {
                        return Err(Error::InvalidInput(format!(
                            "{where_}: Z_(p) summands need padic-digits"
                        )));
                    }
                    for &(level, residue) in entries {
                        if level == 0 {
                            return Err(Error::InvalidInput(format!("{where_}: levels start at 1")));
                        }
                        if matches!(known, Some(k) if level > k) {
                            return Err(Error::InvalidInput(format!(
                                "{where_}: level {level} beyond the factor table"
                            )));
                        }
                        self.check_relation(kind, level, residue, &where_)?;
                    }
                    let mut levels: Vec<usize> = entries.iter().map(|e| e.0).collect();
                    levels.sort_unstable();
                    if levels.windows(2).any(|w| w[0] == w[1]) {
                        return Err(Error::InvalidInput(format!(
                            "{where_}: repeated level in finite support"
                        )));
                    }
                }
                (CoordinateRule::CustomTable { values }, kind) => {
                    if let GenKind::Local(_) = kind {
                        return Err(Error::InvalidInput(format!(
                            "{where_}: Z_(p) summands need padic-digits"
                        )));
                    }
                    if values.is_empty() {
                        return Err(Error::InvalidInput(format!("{where_}: empty custom table")));
                    }
                    let limit = known.map_or(values.len(), |k| k.min(values.len()));
                    for (l, &residue) in values.iter().enumerate().take(limit) {
                        self.check_relation(kind, l + 1, residue, &where_)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// A torsion generator of order `d` must land in the `d`-torsion of `Z/n_l`.
    fn check_relation(&self, kind: GenKind, level: usize, residue: i64, where_: &str) -> Result<()> {
        if let GenKind::Torsion(d) = kind {
            let n = BigInt::from(self.base.factor(level)?);
            if !(BigInt::from(d) * BigInt::from(residue)).is_multiple_of(&n) {
                return Err(Error::RelationViolation {
                    relation: format!("{where_}: {d}·{residue} ≢ 0 mod n_{level} = {n}"),
                });
            }
        }
        Ok(())
    }

    fn kind(&self, i: usize) -> GenKind {
        let r = self.group.rank();
        let t = self.group.torsion().len();
        if i < r {
            GenKind::Free
        } else if i < r + t {
            GenKind::Torsion(self.group.torsion()[i - r])
        } else {
            GenKind::Local(self.local_primes[i - r - t])
        }
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn local_primes(&self) -> &[u64] {
        &self.local_primes
    }

    pub fn rules(&self) -> &[CoordinateRule] {
        &self.rules
    }

    pub fn ngens(&self) -> usize {
        self.rules.len()
    }

    /// The sequence before resequencing.
    pub fn base_sequence(&self) -> &FactorSequence {
        &self.base
    }

    /// The sequence `(n_l)` the pattern actually maps into.
    pub fn sequence(&self) -> FactorSequence {
        let rule = self
            .schedule
            .iter()
            .fold(self.base.rule().clone(), |inner, &bound| FactorRule::Resequenced {
                inner: Box::new(inner),
                bound,
            });
        FactorSequence::new(rule).expect("resequencing preserves validity")
    }

    pub fn schedule(&self) -> &[Option<usize>] {
        &self.schedule
    }

    /// Base level read at output level `level`.
    pub fn source_level(&self, level: usize) -> usize {
        self.schedule
            .iter()
            .rev()
            .fold(level, |l, &bound| cantor_source(l, bound))
    }

    pub fn modulus(&self, level: usize) -> Result<BigInt> {
        if level == 0 {
            return Err(Error::OutOfRange("levels start at 1".into()));
        }
        Ok(BigInt::from(self.base.factor(self.source_level(level))?))
    }

    /// Levels with known data: bounded by factor and custom tables, unless a
    /// bounded resequencing keeps every visit inside them.
    pub fn known_levels(&self) -> Option<usize> {
        if self.schedule.iter().any(Option::is_some) {
            return None;
        }
        self.base_known_levels(None)
    }

    fn base_known_levels(&self, only: Option<&GroupElement>) -> Option<usize> {
        let mut known = self.base.known_levels();
        for (i, rule) in self.rules.iter().enumerate() {
            if let Some(g) = only {
                if coefficient_is_zero(g, i, &self.group) {
                    continue;
                }
            }
            if let CoordinateRule::CustomTable { values } = rule {
                known = Some(known.map_or(values.len(), |k| k.min(values.len())));
            }
        }
        known
    }

    /// The generators: free, torsion, then `1 ∈ Z_(p)` for each local summand.
    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.ngens())
            .map(|i| {
                let mut g = self.identity();
                let r = self.group.rank();
                let t = self.group.torsion().len();
                if i < r {
                    g.free[i] = 1;
                } else if i < r + t {
                    g.tors[i - r] = 1;
                } else {
                    g.local[i - r - t] = Rational64::one();
                }
                g
            })
            .collect()
    }

    pub fn identity(&self) -> GroupElement {
        let mut g = self.group.identity();
        g.local = vec![Rational64::zero(); self.local_primes.len()];
        g
    }

    /// Builds and validates an element.
    pub fn element(&self, free: Vec<i64>, tors: Vec<i64>, local: Vec<Rational64>) -> Result<GroupElement> {
        let mut g = self.group.element(free, tors)?;
        g.local = local;
        self.check_element(&g)?;
        Ok(g)
    }

    pub fn check_element(&self, g: &GroupElement) -> Result<()> {
        if g.free.len() != self.group.rank()
            || g.tors.len() != self.group.torsion().len()
            || g.local.len() != self.local_primes.len()
        {
            return Err(Error::InvalidElement(format!(
                "element {g} does not match the shape of {}",
                self.describe_group()
            )));
        }
        for (&t, &d) in g.tors.iter().zip(self.group.torsion()) {
            if t < 0 || t >= d as i64 {
                return Err(Error::InvalidElement(format!("residue {t} not reduced mod {d}")));
            }
        }
        for (q, &p) in g.local.iter().zip(&self.local_primes) {
            if q.denom().rem_euclid(p as i64) == 0 {
                return Err(Error::InvalidElement(format!(
                    "{q} is not in Z_({p}): denominator divisible by {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn describe_group(&self) -> String {
        let mut s = self.group.to_string();
        for p in &self.local_primes {
            if s == "0" {
                s = format!("Z_({p})");
            } else {
                s.push_str(&format!(" + Z_({p})"));
            }
        }
        s
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.group.add(g, h)
    }

    pub fn scale(&self, g: &GroupElement, j: i64) -> GroupElement {
        self.group.scale(g, j)
    }

    pub fn element_order(&self, g: &GroupElement) -> Option<u64> {
        g.order(self.group.torsion())
    }

    /// Residue of `i(g)` in `Z/n_l`, in `[0, n_l)`.
    pub fn coordinate(&self, g: &GroupElement, level: usize) -> Result<BigInt> {
        self.check_element(g)?;
        let n = self.modulus(level)?;
        self.coordinate_at_source(g, self.source_level(level), &n)
    }

    fn coordinate_at_source(&self, g: &GroupElement, s: usize, n: &BigInt) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        let r = self.group.rank();
        let t = self.group.torsion().len();
        for (i, rule) in self.rules.iter().enumerate() {
            let kind = self.kind(i);
            if let GenKind::Local(p) = kind {
                let q = g.local[i - r - t];
                if q.is_zero() {
                    continue;
                }
                let b = BigInt::from(*q.denom());
                let inv = mod_inverse(&b, n)
                    .ok_or_else(|| Error::InvalidElement(format!("{q}: {p} divides the denominator")))?;
                acc += BigInt::from(*q.numer()) * inv;
                continue;
            }
            let c = if i < r { g.free[i] } else { g.tors[i - r] };
            if c == 0 {
                continue;
            }
            acc += BigInt::from(c) * self.rule_value(rule, kind, s, n)?;
        }
        Ok(modulo(&acc, n))
    }

    fn rule_value(&self, rule: &CoordinateRule, kind: GenKind, s: usize, n: &BigInt) -> Result<BigInt> {
        let torsion_generator = |d: u64| n / n.gcd(&BigInt::from(d));
        Ok(match (rule, kind) {
            (CoordinateRule::QuotientMod { scale }, GenKind::Torsion(d)) => BigInt::from(*scale) * torsion_generator(d),
            (CoordinateRule::QuotientMod { scale }, _) => BigInt::from(*scale),
            (CoordinateRule::FactorialMod, GenKind::Torsion(d)) => torsion_generator(d),
            (CoordinateRule::FactorialMod | CoordinateRule::PadicDigits { .. }, _) => BigInt::one(),
            (CoordinateRule::FiniteSupport { entries }, _) => entries
                .iter()
                .find(|e| e.0 == s)
                .map_or_else(BigInt::zero, |e| BigInt::from(e.1)),
            (CoordinateRule::CustomTable { values }, _) => match values.get(s - 1) {
                Some(&v) => BigInt::from(v),
                None => {
                    return Err(Error::OutOfRange(format!(
                        "level {s} beyond custom table of length {}",
                        values.len()
                    )))
                }
            },
        })
    }

    /// Order of `i(g)`'s image in `Z/n_l`.
    pub fn level_order(&self, g: &GroupElement, level: usize) -> Result<BigInt> {
        let n = self.modulus(level)?;
        let c = self.coordinate(g, level)?;
        Ok(&n / n.gcd(&c))
    }

    /// Decides whether the coordinates of `g` are nonzero infinitely often.
    /// `horizon` only limits the scan of tabulated data.
    pub fn eventual(&self, g: &GroupElement, horizon: usize) -> Result<Eventual> {
        self.check_element(g)?;
        self.eventual_with_schedule(g, horizon, self.schedule.len())
    }

    fn eventual_with_schedule(&self, g: &GroupElement, horizon: usize, layers: usize) -> Result<Eventual> {
        if layers == 0 {
            return self.eventual_base(g, horizon);
        }
        let bound = self.schedule[layers - 1];
        let inner_coordinate = |s: usize| -> Result<BigInt> {
            let s = self.schedule[..layers - 1]
                .iter()
                .rev()
                .fold(s, |l, &b| cantor_source(l, b));
            let n = BigInt::from(self.base.factor(s)?);
            self.coordinate_at_source(g, s, &n)
        };
        let revisit = |s: usize| Eventual::NonzeroInfinitelyOften {
            witness: cantor_next_visit(s, 1, bound),
            certificate: format!(
                "coordinate nonzero at source level {s}, which the diagonal schedule revisits infinitely often"
            ),
        };
        if let Some(b) = bound {
            for s in 1..=b {
                if !inner_coordinate(s)?.is_zero() {
                    return Ok(revisit(s));
                }
            }
            return Ok(Eventual::VanishesFrom { level: 1 });
        }
        match self.eventual_with_schedule(g, horizon, layers - 1)? {
            Eventual::NonzeroInfinitelyOften { witness, .. } => Ok(revisit(witness)),
            Eventual::VanishesFrom { level } => {
                for s in 1..level {
                    if !inner_coordinate(s)?.is_zero() {
                        return Ok(revisit(s));
                    }
                }
                Ok(Eventual::VanishesFrom { level: 1 })
            }
            Eventual::Unknown {
                checked_up_to,
                last_nonzero,
            } => Ok(match last_nonzero {
                Some(s) => revisit(s),
                None => Eventual::Unknown {
                    checked_up_to,
                    last_nonzero: None,
                },
            }),
        }
    }

    fn eventual_base(&self, g: &GroupElement, horizon: usize) -> Result<Eventual> {
        let coord = |l: usize| -> Result<BigInt> {
            let n = BigInt::from(self.base.factor(l)?);
            self.coordinate_at_source(g, l, &n)
        };
        if g.is_zero() {
            return Ok(Eventual::VanishesFrom { level: 1 });
        }

        if let Some(known) = self.base_known_levels(Some(g)) {
            let limit = known.min(horizon);
            let mut last_nonzero = None;
            for l in 1..=limit {
                if !coord(l)?.is_zero() {
                    last_nonzero = Some(l);
                }
            }
            return Ok(Eventual::Unknown {
                checked_up_to: limit,
                last_nonzero,
            });
        }

        let r = self.group.rank();
        let t = self.group.torsion().len();
        // Past the largest finite-support level only closed-form rules contribute.
        let mut support = 0usize;
        let mut free_value = BigRational::zero();
        let mut torsion_lcm = BigInt::one();
        for (i, rule) in self.rules.iter().enumerate() {
            if coefficient_is_zero(g, i, &self.group) {
                continue;
            }
            let kind = self.kind(i);
            match (rule, kind) {
                (CoordinateRule::FiniteSupport { entries }, _) => {
                    support = support.max(entries.iter().map(|e| e.0).max().unwrap_or(0));
                }
                (_, GenKind::Local(_)) => {
                    let q = g.local[i - r - t];
                    free_value += BigRational::new((*q.numer()).into(), (*q.denom()).into());
                }
                (CoordinateRule::QuotientMod { scale }, GenKind::Free) => {
                    free_value += BigRational::from_integer(BigInt::from(g.free[i]) * scale);
                }
                (_, GenKind::Free) => {
                    free_value += BigRational::from_integer(BigInt::from(g.free[i]));
                }
                (_, GenKind::Torsion(d)) => {
                    torsion_lcm = torsion_lcm.lcm(&BigInt::from(d));
                }
            }
        }

        let base_rule = self.base.rule();
        if let Some(period) = base_rule.period() {
            for l in support + 1..=support + period {
                if !coord(l)?.is_zero() {
                    return Ok(Eventual::NonzeroInfinitelyOften {
                        witness: l,
                        certificate: format!("coordinates repeat with period {period} after level {support}"),
                    });
                }
            }
            return Ok(Eventual::VanishesFrom { level: support + 1 });
        }

        if !free_value.is_zero() {
            // The torsion part is a multiple of n_l / gcd(n_l, D), so a zero
            // coordinate forces n_l / D to divide the numerator of the free part.
            let bound = &torsion_lcm * free_value.numer().abs();
            let start = match base_rule {
                FactorRule::Linear => {
                    let b: usize = bound
                        .clone()
                        .try_into()
                        .map_err(|_| Error::OutOfRange("certificate level exceeds the address space".into()))?;
                    b.max(support + 1)
                }
                _ => {
                    let mut l = support + 1;
                    while BigInt::from(self.base.factor(l)?) <= bound {
                        l += 1;
                    }
                    l
                }
            };
            if coord(start)?.is_zero() {
                return Err(Error::Inconsistency(format!(
                    "growth certificate for {g} failed at level {start}"
                )));
            }
            return Ok(Eventual::NonzeroInfinitelyOften {
                witness: start,
                certificate: format!("free part {free_value} ≠ 0 and n_l > {bound} for every l ≥ {start}"),
            });
        }

        if torsion_lcm.is_one() {
            return Ok(Eventual::VanishesFrom { level: support + 1 });
        }

        // Torsion only: whether the coordinate vanishes depends on the pattern
        // of gcd(n_l, d_j), which stabilises (factorial, prime powers) or is
        // periodic in n_l mod D (linear).
        let (levels, certificate): (Vec<usize>, String) = match base_rule {
            FactorRule::Factorial => {
                let mut l = 1usize;
                while !BigInt::from(self.base.factor(l)?).is_multiple_of(&torsion_lcm) {
                    l += 1;
                }
                let l = l.max(support + 1);
                (vec![l], format!("{torsion_lcm} divides n_m for every m ≥ {l}"))
            }
            FactorRule::PrimePower { prime } => {
                let mut l = 1usize;
                while torsion_lcm.is_multiple_of(&num_traits::pow(BigInt::from(*prime), l)) {
                    l += 1;
                }
                let l = l.max(support + 1);
                (vec![l], format!("gcd(n_m, {torsion_lcm}) is constant for m ≥ {l}"))
            }
            FactorRule::Linear => {
                let d: usize = torsion_lcm
                    .clone()
                    .try_into()
                    .map_err(|_| Error::OutOfRange("torsion exponent exceeds the address space".into()))?;
                (
                    (support + 1..=support + d).collect(),
                    format!("n_m mod {d} is periodic, so every residue recurs"),
                )
            }
            other => return Err(Error::Inconsistency(format!("no certificate for sequence {other:?}"))),
        };
        for &l in &levels {
            if !coord(l)?.is_zero() {
                return Ok(Eventual::NonzeroInfinitelyOften {
                    witness: l,
                    certificate,
                });
            }
        }
        Ok(Eventual::VanishesFrom { level: levels[0] })
    }

    /// First level with a nonzero coordinate, searching known levels up to
    /// `horizon` and using the analytic certificates beyond.
    pub fn first_nonzero_level(&self, g: &GroupElement, horizon: usize) -> Result<Option<usize>> {
        let limit = match self.eventual(g, horizon)? {
            Eventual::NonzeroInfinitelyOften { witness, .. } => witness,
            Eventual::VanishesFrom { level } => level.saturating_sub(1),
            Eventual::Unknown { checked_up_to, .. } => checked_up_to,
        };
        for l in 1..=limit {
            if !self.coordinate(g, l)?.is_zero() {
                return Ok(Some(l));
            }
        }
        Ok(None)
    }

    /// Nonzero elements with coefficients bounded by `bound`, ordered by size
    /// and then lexicographically.
    pub fn generating_box(&self, bound: i64) -> Result<Vec<GroupElement>> {
        if bound < 1 {
            return Err(Error::InvalidInput("box bound must be at least 1".into()));
        }
        let mut axes: Vec<Vec<(i64, Option<Rational64>)>> = Vec::new();
        for _ in 0..self.group.rank() {
            axes.push((-bound..=bound).map(|c| (c, None)).collect());
        }
        for &d in self.group.torsion() {
            axes.push((0..d as i64).map(|c| (c, None)).collect());
        }
        for &p in &self.local_primes {
            let mut values = vec![(0, Some(Rational64::zero()))];
            for b in 1..=bound {
                if b.rem_euclid(p as i64) == 0 {
                    continue;
                }
                for a in -bound..=bound {
                    if a != 0 && a.gcd(&b) == 1 {
                        values.push((0, Some(Rational64::new(a, b))));
                    }
                }
            }
            axes.push(values);
        }
        let size = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
        match size {
            Some(s) if s <= MAX_BOX_SIZE => {}
            _ => {
                return Err(Error::InvalidInput(format!(
                    "generating box with bound {bound} is too large; lower the bound"
                )))
            }
        }
        let r = self.group.rank();
        let t = self.group.torsion().len();
        let mut out = Vec::new();
        let mut idx = vec![0usize; axes.len()];
        'outer: loop {
            let mut g = self.identity();
            for (k, &j) in idx.iter().enumerate() {
                let (c, q) = axes[k][j];
                if k < r {
                    g.free[k] = c;
                } else if k < r + t {
                    g.tors[k - r] = c;
                } else {
                    g.local[k - r - t] = q.expect("local axis");
                }
            }
            if !g.is_zero() {
                out.push(g);
            }
            let mut k = axes.len();
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
        let torsion = self.group.torsion().to_vec();
        let height = |g: &GroupElement| -> i64 {
            g.free.iter().map(|x| x.abs()).sum::<i64>()
                + g.tors
                    .iter()
                    .zip(&torsion)
                    .map(|(&x, &d)| x.min(d as i64 - x))
                    .sum::<i64>()
                + g.local.iter().map(|q| q.numer().abs() + q.denom() - 1).sum::<i64>()
        };
        out.sort_by_cached_key(|g| {
            let local: Vec<(i64, i64)> = g.local.iter().map(|q| (*q.numer(), *q.denom())).collect();
            (height(g), g.free.clone(), g.tors.clone(), local)
        });
        Ok(out)
    }
}

fn coefficient_is_zero(g: &GroupElement, i: usize, group: &FgAbelianGroup) -> bool {
    let r = group.rank();
    let t = group.torsion().len();
    if i < r {
        g.free[i] == 0
    } else if i < r + t {
        g.tors[i - r] == 0
    } else {
        g.local[i - r - t].is_zero()
    }
}

/// Decides `i(G) ∩ ⊕_l Z/n_l = 0` over the generating box.
pub fn trivial_intersection(pattern: &EmbeddingPattern, horizon: usize, box_bound: i64) -> Result<IntersectionVerdict> {
    let elements = pattern.generating_box(box_bound)?;
    let mut unknown = false;
    for g in &elements {
        match pattern.eventual(g, horizon)? {
            Eventual::NonzeroInfinitelyOften { .. } => {}
            Eventual::VanishesFrom { level } => {
                return Ok(IntersectionVerdict::Counterexample {
                    element: g.clone(),
                    vanishes_from: level,
                })
            }
            Eventual::Unknown { .. } => unknown = true,
        }
    }
    Ok(if unknown {
        IntersectionVerdict::UnknownUpTo {
            horizon: pattern.known_levels().map_or(horizon, |k| k.min(horizon)),
            box_bound,
            elements_checked: elements.len(),
        }
    } else {
        IntersectionVerdict::ProvenTrivial {
            box_bound,
            elements_checked: elements.len(),
        }
    })
}

/// The diagonal embedding `i^N` resequenced along the Cantor schedule, so
/// every original level is visited infinitely often. Tabulated data bounds
/// the schedule to its known levels.
pub fn diagonal_resequence(pattern: &EmbeddingPattern) -> EmbeddingPattern {
    let mut out = pattern.clone();
    let bound = pattern.known_levels();
    out.schedule.push(bound);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial_z() -> EmbeddingPattern {
        EmbeddingPattern::new(
            FgAbelianGroup::free(1),
            vec![],
            vec![CoordinateRule::FactorialMod],
            FactorSequence::new(FactorRule::Factorial).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn padic_coordinate() {
        let p = EmbeddingPattern::new(
            FgAbelianGroup::trivial(),
            vec![3],
            vec![CoordinateRule::PadicDigits { prime: 3 }],
            FactorSequence::new(FactorRule::PrimePower { prime: 3 }).unwrap(),
        )
        .unwrap();
        let half = p.element(vec![], vec![], vec![Rational64::new(1, 2)]).unwrap();
        assert_eq!(p.modulus(2).unwrap(), BigInt::from(9));
        assert_eq!(p.coordinate(&half, 2).unwrap(), BigInt::from(5));
        assert!(p.element(vec![], vec![], vec![Rational64::new(1, 3)]).is_err());
    }

    #[test]
    fn quotient_coordinate() {
        let p = EmbeddingPattern::diagonal(FgAbelianGroup::free(1), FactorSequence::constant(6).unwrap()).unwrap();
        let g = p.element(vec![4], vec![], vec![]).unwrap();
        assert_eq!(p.coordinate(&g, 1).unwrap(), BigInt::from(4));
        assert_eq!(p.coordinate(&p.identity(), 3).unwrap(), BigInt::zero());
    }

    #[test]
    fn trichotomy() {
        assert_eq!(
            trivial_intersection(&factorial_z(), 64, 10).unwrap().label(),
            "ProvenTrivial"
        );
        let single = EmbeddingPattern::new(
            FgAbelianGroup::new(0, vec![2]).unwrap(),
            vec![],
            vec![CoordinateRule::FiniteSupport { entries: vec![(1, 1)] }],
            FactorSequence::constant(2).unwrap(),
        )
        .unwrap();
        match trivial_intersection(&single, 64, 10).unwrap() {
            IntersectionVerdict::Counterexample { element, vanishes_from } => {
                assert_eq!(element.tors, vec![1]);
                assert_eq!(vanishes_from, 2);
            }
            other => panic!("{other:?}"),
        }
        let diag = EmbeddingPattern::diagonal(
            FgAbelianGroup::new(0, vec![2]).unwrap(),
            FactorSequence::constant(2).unwrap(),
        )
        .unwrap();
        assert_eq!(trivial_intersection(&diag, 64, 10).unwrap().label(), "ProvenTrivial");
        let table = EmbeddingPattern::new(
            FgAbelianGroup::free(1),
            vec![],
            vec![CoordinateRule::CustomTable { values: vec![1, 1, 1] }],
            FactorSequence::constant(5).unwrap(),
        )
        .unwrap();
        assert_eq!(
            trivial_intersection(&table, 64, 10).unwrap(),
            IntersectionVerdict::UnknownUpTo {
                horizon: 3,
                box_bound: 10,
                elements_checked: 20
            }
        );
    }

    #[test]
    fn resequencing_repairs_finite_support() {
        let single = EmbeddingPattern::new(
            FgAbelianGroup::new(0, vec![2]).unwrap(),
            vec![],
            vec![CoordinateRule::FiniteSupport { entries: vec![(1, 1)] }],
            FactorSequence::constant(2).unwrap(),
        )
        .unwrap();
        let r = diagonal_resequence(&single);
        assert_eq!(trivial_intersection(&r, 64, 10).unwrap().label(), "ProvenTrivial");
        let sources: Vec<usize> = (1..=6).map(|m| r.source_level(m)).collect();
        assert_eq!(sources, vec![1, 1, 2, 1, 2, 3]);

        let table = EmbeddingPattern::new(
            FgAbelianGroup::free(1),
            vec![],
            vec![CoordinateRule::CustomTable { values: vec![1, 0, 2] }],
            FactorSequence::table(vec![3, 3, 3]).unwrap(),
        )
        .unwrap();
        let r = diagonal_resequence(&table);
        // Multiples of 3 vanish everywhere, so the table was never injective.
        assert_eq!(trivial_intersection(&r, 64, 10).unwrap().label(), "Counterexample");
        assert_eq!(trivial_intersection(&r, 64, 2).unwrap().label(), "ProvenTrivial");
    }

    #[test]
    fn certificates_for_torsion_under_growth() {
        // Z/4 into Linear: the coordinate n/gcd(n, 4) mod n is nonzero for even n.
        let p = EmbeddingPattern::diagonal(
            FgAbelianGroup::new(0, vec![4]).unwrap(),
            FactorSequence::new(FactorRule::Linear).unwrap(),
        )
        .unwrap();
        let g = p.element(vec![], vec![1], vec![]).unwrap();
        assert!(matches!(
            p.eventual(&g, 64).unwrap(),
            Eventual::NonzeroInfinitelyOften { .. }
        ));
        let p = EmbeddingPattern::diagonal(
            FgAbelianGroup::new(0, vec![2]).unwrap(),
            FactorSequence::new(FactorRule::PrimePower { prime: 3 }).unwrap(),
        )
        .unwrap();
        let g = p.element(vec![], vec![1], vec![]).unwrap();
        assert_eq!(p.eventual(&g, 64).unwrap(), Eventual::VanishesFrom { level: 1 });
    }

    #[test]
    fn validation_errors() {
        let seq = FactorSequence::constant(6).unwrap();
        assert!(EmbeddingPattern::new(FgAbelianGroup::free(1), vec![], vec![], seq.clone()).is_err());
        assert!(EmbeddingPattern::new(
            FgAbelianGroup::free(1),
            vec![],
            vec![CoordinateRule::FactorialMod],
            seq.clone()
        )
        .is_err());
        // 4·1 ≢ 0 mod 6.
        assert!(matches!(
            EmbeddingPattern::new(
                FgAbelianGroup::new(0, vec![4]).unwrap(),
                vec![],
                vec![CoordinateRule::CustomTable { values: vec![1] }],
                seq,
            ),
            Err(Error::RelationViolation { .. })
        ));
    }
}
