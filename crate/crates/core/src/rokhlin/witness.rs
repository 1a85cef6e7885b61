//! Finite-stage uniform-outerness witnesses: cut `p` into pieces `p_j` with
//! `p_j a α_g(p_j) ≈ 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{format_rational, rational_to_f64};
use crate::error::{Error, Result};
use crate::groups::{EmbeddingPattern, GroupElement};
use crate::rokhlin::family::alpha_permutation;
use crate::uhf::{embed_stage, op_norm_bracket, NormBracket, StageElement};

/// Bracket tolerance used for certified bounds.
pub const WITNESS_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct OuternessWitness {
    pub level: usize,
    /// Order `k` of the image of `g` in `Z/n_l`.
    pub order: usize,
    pub stage: Vec<u64>,
    /// Diagonal supports of `q_j' = Σ_{⌊ik/n_l⌋ = j} e_{i,i}` (as global
    /// indices at the witness stage); `p_j = p q_j'`.
    pub blocks: Vec<Vec<usize>>,
    /// Bracket of `‖p_j a α_g(p_j)‖` per piece; exact zeros give `(0, 0)`.
    pub bounds: Vec<NormBracket>,
    pub exact_zero: Vec<bool>,
    /// Largest upper bound over the pieces.
    pub achieved: f64,
    /// The certified contract `13ε`, as an exact rational.
    pub contract: String,
    pub certified: bool,
    /// `Σ_j p_j = p`, checked exactly.
    pub sums_to_p: bool,
    #[serde(skip)]
    pub pieces: Vec<StageElement>,
}

/// Builds the witness at `level` for `a` (stage `≤ level`) and a projection
/// `p` at a stage strictly below `level`.
pub fn outerness_witness(
    a: &StageElement,
    p: &StageElement,
    g: &GroupElement,
    pattern: &EmbeddingPattern,
    epsilon: &BigRational,
    level: usize,
    stage_cap: usize,
) -> Result<OuternessWitness> {
    if *epsilon <= BigRational::zero() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    if p.stage().len() >= level {
        return Err(Error::InvalidInput(format!(
            "level {level} must exceed the stage {} of p",
            p.stage().len()
        )));
    }
    if a.stage().len() > level {
        return Err(Error::InvalidInput(format!(
            "a lives at stage {}, above the witness level {level}",
            a.stage().len()
        )));
    }
    if !p.is_projection() || p.is_zero() {
        return Err(Error::NotProjection("p must be a nonzero projection".into()));
    }
    let norm_a = op_norm_bracket(a, WITNESS_TOLERANCE)?;
    if norm_a.lower > 1.0 + 1e-12 {
        return Err(Error::InvalidInput(format!("‖a‖ ≥ {} exceeds 1", norm_a.lower)));
    }

    let stage = pattern.sequence().stage(level, stage_cap)?;
    if !p.stage().is_prefix_of(&stage) || !a.stage().is_prefix_of(&stage) {
        return Err(Error::StageMismatch("a and p must sit on the pattern's factors".into()));
    }
    let n = pattern.modulus(level)?;
    let c = pattern.coordinate(g, level)?;
    let k_big = &n / n.gcd(&c);
    if k_big == BigInt::from(1) {
        return Err(Error::InvalidInput(format!("g has trivial image at level {level}")));
    }
    let k = k_big.to_usize().expect("order bounded by the stage dimension");
    let n = n.to_usize().expect("factor bounded by the stage dimension");

    let mut blocks = vec![Vec::new(); k];
    for x in 0..stage.dim() {
        let i = x % n;
        blocks[i * k / n].push(x);
    }

    let alpha = alpha_permutation(pattern, g, &stage)?;
    let a_l = embed_stage(a, &stage)?;
    let p_l = embed_stage(p, &stage)?;
    let contract = epsilon * BigRational::from_integer(13.into());
    let contract_f = rational_to_f64(&contract);

    let mut pieces = Vec::with_capacity(k);
    let mut bounds = Vec::with_capacity(k);
    let mut exact_zero = Vec::with_capacity(k);
    let mut total = StageElement::zero(&stage);
    for block in &blocks {
        let q = StageElement::diagonal_projection(&stage, block)?;
        let pj = p_l.mul(&q)?;
        let x = pj.mul(&a_l)?.mul(&pj.conjugate_by_permutation(&alpha)?)?;
        if x.is_zero() {
            exact_zero.push(true);
            bounds.push(NormBracket {
                lower: 0.0,
                upper: 0.0,
                converged: true,
                squarings: 0,
            });
        } else {
            exact_zero.push(false);
            bounds.push(op_norm_bracket(&x, WITNESS_TOLERANCE)?);
        }
        total = total.add(&pj)?;
        pieces.push(pj);
    }
    let achieved = bounds.iter().map(|b| b.upper).fold(0.0, f64::max);
    let certified = bounds.iter().all(|b| b.converged && b.upper <= contract_f);
    Ok(OuternessWitness {
        level,
        order: k,
        stage: stage.factors().to_vec(),
        blocks,
        bounds,
        exact_zero,
        achieved,
        contract: format_rational(&contract),
        certified,
        sums_to_p: total == p_l,
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{CoordinateRule, FgAbelianGroup};
    use crate::uhf::{FactorRule, FactorSequence, RatMatrix, DEFAULT_STAGE_CAP};

    fn z_factorial() -> EmbeddingPattern {
        EmbeddingPattern::new(
            FgAbelianGroup::free(1),
            vec![],
            vec![CoordinateRule::FactorialMod],
            FactorSequence::new(FactorRule::Factorial).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_element_gives_zero_bounds() {
        let pat = z_factorial();
        let s1 = pat.sequence().stage(1, DEFAULT_STAGE_CAP).unwrap();
        let g = pat.element(vec![1], vec![], vec![]).unwrap();
        let eps = BigRational::new(1.into(), 100.into());
        let w = outerness_witness(
            &StageElement::zero(&s1),
            &StageElement::identity(&s1),
            &g,
            &pat,
            &eps,
            2,
            DEFAULT_STAGE_CAP,
        )
        .unwrap();
        assert_eq!(w.order, 6);
        assert!(w.exact_zero.iter().all(|&z| z));
        assert!(w.certified && w.sums_to_p);
    }

    #[test]
    fn staged_a_gives_exact_zero() {
        let pat = z_factorial();
        let s1 = pat.sequence().stage(1, DEFAULT_STAGE_CAP).unwrap();
        let h = BigRational::new(1.into(), 2.into());
        let a = StageElement::new(
            s1.clone(),
            RatMatrix::from_rows(2, vec![h.clone(), h.clone(), h.clone(), -h]),
        )
        .unwrap();
        let g = pat.element(vec![2], vec![], vec![]).unwrap();
        let eps = BigRational::new(1.into(), 100.into());
        let w = outerness_witness(&a, &StageElement::identity(&s1), &g, &pat, &eps, 2, DEFAULT_STAGE_CAP).unwrap();
        assert_eq!(w.order, 3);
        assert!(w.exact_zero.iter().all(|&z| z));
    }

    #[test]
    fn preconditions() {
        let pat = z_factorial();
        let s1 = pat.sequence().stage(1, DEFAULT_STAGE_CAP).unwrap();
        let g = pat.element(vec![6], vec![], vec![]).unwrap();
        let eps = BigRational::new(1.into(), 100.into());
        let one = StageElement::identity(&s1);
        // 6 ≡ 0 mod 3! at level 2.
        assert!(outerness_witness(&one, &one, &g, &pat, &eps, 2, DEFAULT_STAGE_CAP).is_err());
        assert!(outerness_witness(&one, &one, &g, &pat, &eps, 1, DEFAULT_STAGE_CAP).is_err());
    }
}
