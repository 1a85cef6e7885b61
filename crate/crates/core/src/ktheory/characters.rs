//! Character tables of finite abelian groups and permutation-character
//! multiplicities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gset::PermutationAction;
use crate::gset::{Letter, Word};
use crate::ktheory::cyclotomic::RootSum;
use crate::perm::Permutation;

/// `H = Z/d_1 × ... × Z/d_k`. Elements and characters are tuples indexed in
/// mixed radix, first factor slowest; `χ_c(h) = ζ_N^{Σ c_i h_i N/d_i}` with
/// `N = lcm(d_i)`, stored as the exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    orders: Vec<u64>,
    exponent: u64,
    size: usize,
}

pub fn characters(orders: &[u64]) -> Result<CharacterTable> {
    if orders.contains(&0) {
        return Err(Error::InvalidInput("cyclic factors must be finite".into()));
    }
    let exponent = orders.iter().fold(1u64, |acc, &d| acc.lcm(&d));
    let size = orders
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
        .filter(|&s| s <= 1 << 16)
        .ok_or_else(|| Error::OutOfRange("group too large for a character table".into()))?;
    Ok(CharacterTable {
        orders: orders.to_vec(),
        exponent,
        size,
    })
}

impl CharacterTable {
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Exponent `N` of the group; values are powers of `ζ_N`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `|H| = |Ĥ|`.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tuple(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &d) in out.iter_mut().zip(&self.orders).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        out
    }

    pub fn index(&self, tuple: &[u64]) -> usize {
        tuple
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&t, &d)| acc * d as usize + (t % d) as usize)
    }

    /// Exponent `e` with `χ(h) = ζ_N^e`, in `[0, N)`.
    pub fn value(&self, chi: usize, h: usize) -> u64 {
        let c = self.tuple(chi);
        let x = self.tuple(h);
        let n = self.exponent;
        c.iter()
            .zip(&x)
            .zip(&self.orders)
            .fold(0, |acc, ((&ci, &hi), &d)| (acc + ci * hi % d * (n / d)) % n)
    }

    pub fn multiply(&self, chi: usize, psi: usize) -> usize {
        let a = self.tuple(chi);
        let b = self.tuple(psi);
        let sum: Vec<u64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        self.index(&sum)
    }

    pub fn inverse(&self, chi: usize) -> usize {
        let a = self.tuple(chi);
        let neg: Vec<u64> = a.iter().zip(&self.orders).map(|(&x, &d)| (d - x) % d).collect();
        self.index(&neg)
    }

    pub fn label(&self, chi: usize) -> String {
        let t: Vec<String> = self.tuple(chi).iter().map(u64::to_string).collect();
        format!("chi({})", t.join(","))
    }

    /// True when every value is `±1`.
    pub fn is_real(&self, chi: usize) -> bool {
        (0..self.size).all(|h| {
            let e = self.value(chi, h);
            e == 0 || 2 * e == self.exponent
        })
    }

    /// `(1/|H|) Σ_h χ(h) χ'(h)⁻¹ = δ_{χχ'}` for every pair, checked exactly.
    pub fn check_orthogonality(&self) -> bool {
        let n = self.exponent as i64;
        (0..self.size).all(|a| {
            (0..self.size).all(|b| {
                let mut s = RootSum::zero(self.exponent);
                for h in 0..self.size {
                    let e = self.value(a, h) as i64 - self.value(b, h) as i64;
                    s.add_term(e.rem_euclid(n), &BigInt::from(1));
                }
                let expect = if a == b { self.size } else { 0 };
                s.as_integer() == Some(BigInt::from(expect))
            })
        })
    }

    /// The word `g_1^{h_1} ... g_k^{h_k}` of an element.
    pub fn word(&self, h: usize) -> Word {
        Word::from_letters(self.tuple(h).into_iter().enumerate().map(|(generator, e)| Letter {
            generator,
            exponent: e as i64,
        }))
    }
}

/// `fix(h)` for every `h ∈ H`, after checking that the generator
/// permutations define an action of `H`.
pub fn fixed_point_vector(table: &CharacterTable, action: &PermutationAction) -> Result<Vec<BigInt>> {
    let perms = action.generator_perms();
    if perms.len() != table.orders().len() {
        return Err(Error::InvalidInput(format!(
            "action has {} generators, the group {}",
            perms.len(),
            table.orders().len()
        )));
    }
    check_abelian_action(table.orders(), perms)?;
    Ok((0..table.len())
        .map(|h| BigInt::from(action.evaluate(&table.word(h)).fixed_points()))
        .collect())
}

fn check_abelian_action(orders: &[u64], perms: &[Permutation]) -> Result<()> {
    for (i, (p, &d)) in perms.iter().zip(orders).enumerate() {
        if !p.pow(d as i64).is_identity() {
            return Err(Error::RelationViolation {
                relation: format!("g{}^{d}", i + 1),
            });
        }
        for (j, q) in perms.iter().enumerate().skip(i + 1) {
            if p.compose(q) != q.compose(p) {
                return Err(Error::RelationViolation {
                    relation: format!("g{} g{} = g{} g{}", i + 1, j + 1, j + 1, i + 1),
                });
            }
        }
    }
    Ok(())
}

/// `m(ψ) = (1/|H|) Σ_h fix(h) ψ(h)⁻¹` for every `ψ`, exact.
pub fn multiplicities(table: &CharacterTable, fix: &[BigInt]) -> Result<Vec<BigInt>> {
    if fix.len() != table.len() {
        return Err(Error::InvalidInput(format!(
            "{} fixed-point counts for a group of order {}",
            fix.len(),
            table.len()
        )));
    }
    let order = BigInt::from(table.len());
    (0..table.len())
        .map(|psi| {
            let mut s = RootSum::zero(table.exponent());
            for (h, f) in fix.iter().enumerate() {
                if !f.is_zero() {
                    s.add_term(-(table.value(psi, h) as i64), f);
                }
            }
            let total = s
                .as_integer()
                .ok_or_else(|| Error::Inconsistency(format!("multiplicity of {} is not rational", table.label(psi))))?;
            let (q, r) = total.div_rem(&order);
            if !r.is_zero() || q.is_negative() {
                return Err(Error::Inconsistency(format!(
                    "multiplicity of {} is {total}/{order}, not a nonnegative integer",
                    table.label(psi)
                )));
            }
            Ok(q)
        })
        .collect()
}

pub fn perm_character_multiplicity(action: &PermutationAction, table: &CharacterTable, psi: usize) -> Result<BigInt> {
    if psi >= table.len() {
        return Err(Error::OutOfRange(format!("character index {psi}")));
    }
    let fix = fixed_point_vector(table, action)?;
    Ok(multiplicities(table, &fix)?.swap_remove(psi))
}
