//! Finitely generated abelian groups `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t` and their
//! elements.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::snf::{smith_normal_form, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<u64>,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(&d) = torsion.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidInput(format!(
                "torsion coefficient {d} must be at least 2"
            )));
        }
        if let Some(w) = torsion.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidInput(format!(
                "torsion coefficients must form a divisibility chain, {} does not divide {}",
                w[0], w[1]
            )));
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    pub fn trivial() -> Self {
        FgAbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/m_1 ⊕ ... ⊕ Z/m_s` for arbitrary orders, brought into canonical form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        let diag: Vec<BigInt> = orders.iter().map(|&m| BigInt::from(m)).collect();
        Ok(canonical_decomposition(&IntMatrix::diagonal(&diag), orders.len())?.group)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<u64> {
        if self.rank > 0 {
            return None;
        }
        self.torsion.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            free: vec![0; self.rank],
            tors: vec![0; self.torsion.len()],
            local: Vec::new(),
        }
    }

    /// The `i`-th canonical generator: free generators first, then torsion.
    pub fn generator(&self, i: usize) -> Result<GroupElement> {
        let mut g = self.identity();
        if i < self.rank {
            g.free[i] = 1;
        } else if i < self.ngens() {
            g.tors[i - self.rank] = 1;
        } else {
            return Err(Error::OutOfRange(format!("generator {i} of {}", self.ngens())));
        }
        Ok(g)
    }

    pub fn element(&self, free: Vec<i64>, tors: Vec<i64>) -> Result<GroupElement> {
        if free.len() != self.rank || tors.len() != self.torsion.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} free and {} torsion coordinates, got {} and {}",
                self.rank,
                self.torsion.len(),
                free.len(),
                tors.len()
            )));
        }
        let tors = tors
            .iter()
            .zip(&self.torsion)
            .map(|(&t, &d)| t.rem_euclid(d as i64))
            .collect();
        Ok(GroupElement {
            free,
            tors,
            local: Vec::new(),
        })
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.free.len() == self.rank
            && g.tors.len() == self.torsion.len()
            && g.local.is_empty()
            && g.tors.iter().zip(&self.torsion).all(|(&t, &d)| 0 <= t && t < d as i64)
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let mut out = g.add(h);
        out.reduce(&self.torsion);
        out
    }

    pub fn neg(&self, g: &GroupElement) -> GroupElement {
        let mut out = g.scale(-1);
        out.reduce(&self.torsion);
        out
    }

    pub fn scale(&self, g: &GroupElement, j: i64) -> GroupElement {
        let mut out = g.scale(j);
        out.reduce(&self.torsion);
        out
    }

    /// Order of `g`, `None` when infinite.
    pub fn element_order(&self, g: &GroupElement) -> Option<u64> {
        g.order(&self.torsion)
    }

    /// All elements of a finite group, torsion coordinates in lexicographic
    /// order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let order = self
            .order()
            .ok_or_else(|| Error::InvalidInput("cannot enumerate an infinite group".into()))?;
        let mut out = Vec::with_capacity(order as usize);
        let mut coords = vec![0i64; self.torsion.len()];
        loop {
            out.push(GroupElement {
                free: Vec::new(),
                tors: coords.clone(),
                local: Vec::new(),
            });
            let mut i = coords.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < self.torsion[i] as i64 {
                    break;
                }
                coords[i] = 0;
            }
        }
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// An element with free coordinates, torsion residues and, for groups with
/// `Z_(p)` summands, reduced fractions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    pub free: Vec<i64>,
    pub tors: Vec<i64>,
    #[serde(serialize_with = "serialize_fractions")]
    pub local: Vec<Rational64>,
}

fn serialize_fractions<S: serde::Serializer>(v: &[Rational64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

impl GroupElement {
    pub fn new(free: Vec<i64>, tors: Vec<i64>, local: Vec<Rational64>) -> Self {
        GroupElement { free, tors, local }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.tors.iter().all(|&x| x == 0) && self.local.iter().all(Zero::is_zero)
    }

    /// Coordinatewise sum without torsion reduction.
    pub fn add(&self, other: &GroupElement) -> GroupElement {
        fn zip<T: Copy + std::ops::Add<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
            assert_eq!(a.len(), b.len(), "element shape mismatch");
            a.iter().zip(b).map(|(&x, &y)| x + y).collect()
        }
        GroupElement {
            free: zip(&self.free, &other.free),
            tors: zip(&self.tors, &other.tors),
            local: zip(&self.local, &other.local),
        }
    }

    pub fn scale(&self, j: i64) -> GroupElement {
        GroupElement {
            free: self.free.iter().map(|&x| x * j).collect(),
            tors: self.tors.iter().map(|&x| x * j).collect(),
            local: self.local.iter().map(|&q| q * j).collect(),
        }
    }

    pub fn reduce(&mut self, torsion: &[u64]) {
        for (t, &d) in self.tors.iter_mut().zip(torsion) {
            *t = t.rem_euclid(d as i64);
        }
    }

    /// Order given the torsion moduli; `None` when infinite.
    pub fn order(&self, torsion: &[u64]) -> Option<u64> {
        if self.free.iter().any(|&x| x != 0) || self.local.iter().any(|q| !q.is_zero()) {
            return None;
        }
        Some(self.tors.iter().zip(torsion).fold(1u64, |acc, (&t, &d)| {
            let t = t.rem_euclid(d as i64) as u64;
            acc.lcm(&(d / d.gcd(&t)))
        }))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        parts.extend(self.free.iter().map(|x| x.to_string()));
        parts.extend(self.tors.iter().map(|x| x.to_string()));
        parts.extend(self.local.iter().map(|q| q.to_string()));
        write!(f, "({})", parts.join(", "))
    }
}

/// A presentation `Z^ngens / rowspace(R)` brought into canonical form, with
/// the coordinate change from the original generators.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub group: FgAbelianGroup,
    /// `V` from the Smith form: a coefficient row vector `x` has Smith
    /// coordinates `x·V`, since the relation rows span `rowspace(D)·V⁻¹`.
    coordinate_change: IntMatrix,
    /// Smith diagonal, padded with zeros to `ngens`.
    diagonal: Vec<BigInt>,
}

impl Decomposition {
    /// Canonical coordinates of the element `Σ c_i x_i` of the presented group.
    pub fn normal_form(&self, coefficients: &[i64]) -> Result<GroupElement> {
        if coefficients.len() != self.diagonal.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} coefficients, got {}",
                self.diagonal.len(),
                coefficients.len()
            )));
        }
        let x = IntMatrix::from_rows(coefficients.len(), &[coefficients.to_vec()]);
        let y = x.mul(&self.coordinate_change).to_rows().remove(0);
        let mut tors = Vec::new();
        let mut free = Vec::new();
        for (yi, d) in y.iter().zip(&self.diagonal) {
            if d.is_zero() {
                free.push(
                    yi.to_i64()
                        .ok_or_else(|| Error::OutOfRange("free coordinate exceeds 64 bits".into()))?,
                );
            } else if !d.is_one() {
                tors.push(yi.mod_floor(d).to_i64().expect("residue fits"));
            }
        }
        Ok(GroupElement {
            free,
            tors,
            local: Vec::new(),
        })
    }
}

/// Decomposes `Z^ngens / rowspace(relations)`.
pub fn canonical_decomposition(relations: &IntMatrix, ngens: usize) -> Result<Decomposition> {
    if relations.cols() != ngens {
        return Err(Error::InvalidInput(format!(
            "relation matrix has {} columns, expected {ngens}",
            relations.cols()
        )));
    }
    let snf = smith_normal_form(relations);
    let mut diagonal = snf.invariant_factors();
    diagonal.resize(ngens, BigInt::zero());
    let mut torsion = Vec::new();
    let mut rank = 0;
    for d in &diagonal {
        if d.is_zero() {
            rank += 1;
        } else if !d.is_one() {
            let d = d
                .abs()
                .to_u64()
                .ok_or_else(|| Error::OutOfRange(format!("torsion coefficient {d} too large")))?;
            torsion.push(d);
        }
    }
    Ok(Decomposition {
        group: FgAbelianGroup { rank, torsion },
        coordinate_change: snf.v,
        diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_examples() {
        let d = canonical_decomposition(&IntMatrix::from_rows(2, &[vec![2, 0]]), 2).unwrap();
        assert_eq!(d.group, FgAbelianGroup::new(1, vec![2]).unwrap());
        let d = canonical_decomposition(&IntMatrix::zeros(0, 3), 3).unwrap();
        assert_eq!(d.group, FgAbelianGroup::free(3));
        let d = canonical_decomposition(&IntMatrix::identity(3), 3).unwrap();
        assert!(d.group.is_trivial());
        assert!(canonical_decomposition(&IntMatrix::identity(3), 2).is_err());
    }

    #[test]
    fn normal_form_respects_relations() {
        // Z² / ⟨(2, 4)⟩ ≅ Z ⊕ Z/2.
        let d = canonical_decomposition(&IntMatrix::from_rows(2, &[vec![2, 4]]), 2).unwrap();
        assert_eq!(d.group.to_string(), "Z + Z/2");
        assert!(d.normal_form(&[2, 4]).unwrap().is_zero());
        assert!(!d.normal_form(&[1, 2]).unwrap().is_zero());
        let a = d.normal_form(&[1, 2]).unwrap();
        assert_eq!(d.group.element_order(&a), Some(2));
    }

    #[test]
    fn cyclic_orders_merge() {
        let g = FgAbelianGroup::from_cyclic_orders(&[2, 3]).unwrap();
        assert_eq!(g.torsion(), &[6]);
        let g = FgAbelianGroup::from_cyclic_orders(&[4, 2]).unwrap();
        assert_eq!(g.torsion(), &[2, 4]);
        assert_eq!(g.order(), Some(8));
        assert_eq!(g.elements().unwrap().len(), 8);
    }

    #[test]
    fn rejects_broken_chain() {
        assert!(FgAbelianGroup::new(0, vec![2, 3]).is_err());
        assert!(FgAbelianGroup::new(0, vec![1]).is_err());
    }

    #[test]
    fn element_orders() {
        let g = FgAbelianGroup::new(1, vec![4]).unwrap();
        assert_eq!(g.element_order(&g.element(vec![0], vec![2]).unwrap()), Some(2));
        assert_eq!(g.element_order(&g.element(vec![1], vec![0]).unwrap()), None);
        assert_eq!(g.element_order(&g.identity()), Some(1));
        assert_eq!(g.to_string(), "Z + Z/4");
    }
}
