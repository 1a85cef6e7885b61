//! Elements of a finite tensor stage `M_{n_1} ⊗ ... ⊗ M_{n_L}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::uhf::matrix::RatMatrix;
use crate::uhf::sequence::Stage;

/// An exact rational matrix living at a concrete stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageElement {
    stage: Stage,
    matrix: RatMatrix,
}

impl StageElement {
    pub fn new(stage: Stage, matrix: RatMatrix) -> Result<Self> {
        if matrix.dim() != stage.dim() {
            return Err(Error::StageMismatch(format!(
                "matrix of size {} at stage of dimension {}",
                matrix.dim(),
                stage.dim()
            )));
        }
        Ok(StageElement { stage, matrix })
    }

    pub fn identity(stage: &Stage) -> Self {
        StageElement {
            matrix: RatMatrix::identity(stage.dim()),
            stage: stage.clone(),
        }
    }

    pub fn zero(stage: &Stage) -> Self {
        StageElement {
            matrix: RatMatrix::zeros(stage.dim()),
            stage: stage.clone(),
        }
    }

    /// Sum of the diagonal matrix units `e_{i,i}` for `i` in `indices`.
    pub fn diagonal_projection(stage: &Stage, indices: &[usize]) -> Result<Self> {
        let mut matrix = RatMatrix::zeros(stage.dim());
        for &i in indices {
            if i >= stage.dim() {
                return Err(Error::OutOfRange(format!(
                    "index {i} outside stage of dimension {}",
                    stage.dim()
                )));
            }
            matrix.set(i, i, BigRational::one());
        }
        Ok(StageElement {
            stage: stage.clone(),
            matrix,
        })
    }

    pub fn matrix_unit(stage: &Stage, i: usize, j: usize) -> Result<Self> {
        let d = stage.dim();
        if i >= d || j >= d {
            return Err(Error::OutOfRange(format!("matrix unit ({i},{j}) at dimension {d}")));
        }
        let mut matrix = RatMatrix::zeros(d);
        matrix.set(i, j, BigRational::one());
        Ok(StageElement {
            stage: stage.clone(),
            matrix,
        })
    }

    /// The permutation unitary `P` with `P e_x = e_{π(x)}` for a permutation of
    /// the global index set.
    pub fn permutation(stage: &Stage, pi: &Permutation) -> Result<Self> {
        if pi.degree() != stage.dim() {
            return Err(Error::StageMismatch(format!(
                "permutation of degree {} at dimension {}",
                pi.degree(),
                stage.dim()
            )));
        }
        let mut matrix = RatMatrix::zeros(stage.dim());
        for x in 0..stage.dim() {
            matrix.set(pi.apply(x), x, BigRational::one());
        }
        Ok(StageElement {
            stage: stage.clone(),
            matrix,
        })
    }

    pub fn stage(&self) -> &Stage {
        &self.stage
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.stage.dim()
    }

    fn same_stage(&self, other: &StageElement) -> Result<()> {
        if self.stage != other.stage {
            return Err(Error::StageMismatch(format!(
                "stages {:?} and {:?} differ; embed first",
                self.stage.factors(),
                other.stage.factors()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &StageElement) -> Result<StageElement> {
        self.same_stage(other)?;
        Ok(StageElement {
            stage: self.stage.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn add(&self, other: &StageElement) -> Result<StageElement> {
        self.same_stage(other)?;
        Ok(StageElement {
            stage: self.stage.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &StageElement) -> Result<StageElement> {
        self.same_stage(other)?;
        Ok(StageElement {
            stage: self.stage.clone(),
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn scale(&self, c: &BigRational) -> StageElement {
        StageElement {
            stage: self.stage.clone(),
            matrix: self.matrix.scale(c),
        }
    }

    /// Adjoint; entries are real so this is the transpose.
    pub fn adjoint(&self) -> StageElement {
        StageElement {
            stage: self.stage.clone(),
            matrix: self.matrix.transpose(),
        }
    }

    pub fn commutator(&self, other: &StageElement) -> Result<StageElement> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == RatMatrix::identity(self.dim())
    }

    /// Exact check of `p = p* = p²`.
    pub fn is_projection(&self) -> bool {
        self.matrix == self.matrix.transpose() && &self.matrix * &self.matrix == self.matrix
    }

    /// Exact check of `u u* = 1`.
    pub fn is_unitary(&self) -> bool {
        &self.matrix * &self.matrix.transpose() == RatMatrix::identity(self.dim())
    }

    /// Tensor product placing `self` on the earlier factors.
    pub fn tensor(&self, other: &StageElement, cap: usize) -> Result<StageElement> {
        let mut factors = self.stage.factors().to_vec();
        factors.extend_from_slice(other.stage.factors());
        let stage = Stage::new(factors, cap)?;
        Ok(StageElement {
            stage,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    /// Conjugation `P x P*` by the permutation unitary of a global
    /// permutation, computed by reindexing.
    pub fn conjugate_by_permutation(&self, pi: &Permutation) -> Result<StageElement> {
        let d = self.dim();
        if pi.degree() != d {
            return Err(Error::StageMismatch(format!(
                "permutation of degree {} at dimension {d}",
                pi.degree()
            )));
        }
        let mut out = RatMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let x = self.matrix.get(i, j);
                if !x.is_zero() {
                    out.set(pi.apply(i), pi.apply(j), x.clone());
                }
            }
        }
        Ok(StageElement {
            stage: self.stage.clone(),
            matrix: out,
        })
    }
}

/// `x ⊗ 1` at a finer stage; `target` must extend the stage of `x`.
pub fn embed_stage(x: &StageElement, target: &Stage) -> Result<StageElement> {
    if !x.stage.is_prefix_of(target) {
        return Err(Error::StageMismatch(format!(
            "cannot embed stage {:?} into {:?}",
            x.stage.factors(),
            target.factors()
        )));
    }
    if x.stage.len() == target.len() {
        return Ok(x.clone());
    }
    let tail = target.dim() / x.dim();
    Ok(StageElement {
        stage: target.clone(),
        matrix: x.matrix.kron(&RatMatrix::identity(tail)),
    })
}

/// Lifts per-level permutations (one per factor, in order) to the global index set.
pub fn global_permutation(stage: &Stage, level_perms: &[Permutation]) -> Result<Permutation> {
    if level_perms.len() != stage.len() {
        return Err(Error::StageMismatch(format!(
            "{} level permutations for a stage with {} factors",
            level_perms.len(),
            stage.len()
        )));
    }
    for (l, (p, &n)) in level_perms.iter().zip(stage.factors()).enumerate() {
        if p.degree() as u64 != n {
            return Err(Error::StageMismatch(format!(
                "permutation of degree {} at level {} with n = {n}",
                p.degree(),
                l + 1
            )));
        }
    }
    let images = (0..stage.dim())
        .map(|i| {
            let coords: Vec<usize> = stage
                .coordinates(i)
                .iter()
                .zip(level_perms)
                .map(|(&c, p)| p.apply(c))
                .collect();
            stage.index_of(&coords)
        })
        .collect();
    Permutation::from_images(images)
}

/// The unitary `1 ⊗ ... ⊗ P_σ ⊗ ... ⊗ 1` acting by `σ` on factor `position`
/// (1-based).
pub fn perm_unitary(sigma: &Permutation, position: usize, stage: &Stage) -> Result<StageElement> {
    if position == 0 || position > stage.len() {
        return Err(Error::OutOfRange(format!(
            "factor position {position} outside 1..={}",
            stage.len()
        )));
    }
    let perms: Vec<Permutation> = stage
        .factors()
        .iter()
        .enumerate()
        .map(|(l, &n)| {
            if l + 1 == position {
                sigma.clone()
            } else {
                Permutation::identity(n as usize)
            }
        })
        .collect();
    let global = global_permutation(stage, &perms)?;
    StageElement::permutation(stage, &global)
}

/// `Ad u (x) = u x u*`.
pub fn ad(u: &StageElement, x: &StageElement) -> Result<StageElement> {
    u.same_stage(x)?;
    if !u.is_unitary() {
        return Err(Error::NotUnitary("u u* ≠ 1".into()));
    }
    u.mul(x)?.mul(&u.adjoint())
}

/// Trace divided by the dimension.
pub fn normalized_trace(x: &StageElement) -> BigRational {
    x.matrix.trace() / BigRational::from_integer(BigInt::from(x.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stage(f: &[u64]) -> Stage {
        Stage::new(f.to_vec(), 4096).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn perm_unitary_traces() {
        let s = stage(&[3]);
        let id = perm_unitary(&Permutation::identity(3), 1, &s).unwrap();
        assert!(id.is_identity());
        assert_eq!(normalized_trace(&id), rat(1, 1));
        let cyc = Permutation::parse_cycles(3, "(1 2 3)").unwrap();
        assert_eq!(normalized_trace(&perm_unitary(&cyc, 1, &s).unwrap()), rat(0, 1));
        let tr = Permutation::parse_cycles(3, "(1 2)").unwrap();
        let u = perm_unitary(&tr, 1, &s).unwrap();
        // Brute-force trace: count diagonal ones.
        let ones = (0..3).filter(|&i| u.matrix().get(i, i).is_one()).count();
        assert_eq!(ones, 1);
        assert_eq!(normalized_trace(&u), rat(1, 3));
    }

    #[test]
    fn perm_unitary_moves_matrix_units() {
        let s = stage(&[2, 3]);
        let sigma = Permutation::parse_cycles(3, "(1 2 3)").unwrap();
        let u = perm_unitary(&sigma, 2, &s).unwrap();
        // e_{(0,1),(0,1)} ↦ e_{(0,2),(0,2)}.
        let e = StageElement::matrix_unit(&s, s.index_of(&[0, 1]), s.index_of(&[0, 1])).unwrap();
        let moved = ad(&u, &e).unwrap();
        let want = StageElement::matrix_unit(&s, s.index_of(&[0, 2]), s.index_of(&[0, 2])).unwrap();
        assert_eq!(moved, want);
        assert_eq!(
            e.conjugate_by_permutation(&global_permutation(&s, &[Permutation::identity(2), sigma]).unwrap())
                .unwrap(),
            want
        );
    }

    #[test]
    fn embed_is_unital_and_trace_preserving() {
        let s1 = stage(&[2]);
        let s2 = stage(&[2, 3]);
        let x = StageElement::new(
            s1.clone(),
            RatMatrix::from_rows(2, vec![rat(1, 2), rat(1, 3), rat(-2, 5), rat(7, 1)]),
        )
        .unwrap();
        let y = embed_stage(&x, &s2).unwrap();
        assert_eq!(y.dim(), 6);
        assert_eq!(normalized_trace(&y), normalized_trace(&x));
        assert_eq!(embed_stage(&x, &s1).unwrap(), x);
        assert!(embed_stage(&y, &s1).is_err());
        assert!(embed_stage(&StageElement::identity(&s1), &s2).unwrap().is_identity());
    }

    #[test]
    fn tensor_trace_is_multiplicative() {
        let a = perm_unitary(&Permutation::parse_cycles(3, "(1 2)").unwrap(), 1, &stage(&[3])).unwrap();
        let b = perm_unitary(&Permutation::parse_cycles(4, "(1 2)").unwrap(), 1, &stage(&[4])).unwrap();
        let ab = a.tensor(&b, 4096).unwrap();
        // Independent count on the Kronecker product: fixed points 1·2 out of 12.
        let ones = (0..12).filter(|&i| ab.matrix().get(i, i).is_one()).count();
        assert_eq!(ones, 2);
        assert_eq!(normalized_trace(&ab), normalized_trace(&a) * normalized_trace(&b));
    }

    #[test]
    fn ad_rejects_non_unitary_and_mismatch() {
        let s = stage(&[2]);
        let x = StageElement::identity(&s).scale(&rat(2, 1));
        assert!(matches!(ad(&x, &x), Err(Error::NotUnitary(_))));
        let t = stage(&[3]);
        assert!(matches!(
            ad(&StageElement::identity(&s), &StageElement::identity(&t)),
            Err(Error::StageMismatch(_))
        ));
    }

    #[test]
    fn rank_one_projection_trace() {
        let s = stage(&[4]);
        let p = StageElement::diagonal_projection(&s, &[2]).unwrap();
        assert!(p.is_projection());
        assert_eq!(normalized_trace(&p), rat(1, 4));
    }
}
