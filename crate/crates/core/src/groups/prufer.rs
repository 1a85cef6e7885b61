//! Finite shadow of the fact that a Prüfer group `Z(p^∞)` has no nonzero
//! homomorphism into a finite cyclic group that is injective on its socle.
//!
//! For each modulus `n` the truncation `Z/p^K` with `K = v_p(n) + 1` is
//! mapped into `Z/n` in every possible way; the order-`p` element
//! `x_1 = p^{K-1} x_K` dies under all of them.

use serde::Serialize;

use crate::arith::{is_prime, valuation};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusCheck {
    pub modulus: u64,
    /// Depth `K` of the truncation `Z/p^K` tested against this modulus.
    pub depth: u32,
    pub homomorphisms: u64,
    /// True when every homomorphism kills the order-`p` element.
    pub socle_killed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PruferReport {
    pub prime: u64,
    pub checks: Vec<ModulusCheck>,
    /// No level admits a coordinate that is nonzero on the order-`p` element.
    pub no_injective_pattern: bool,
}

pub fn prufer_obstruction(p: u64, moduli: &[u64]) -> Result<PruferReport> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let mut checks = Vec::with_capacity(moduli.len());
    for &n in moduli {
        if n < 2 {
            return Err(Error::InvalidInput(format!("modulus {n} must be at least 2")));
        }
        let depth = valuation(&n.into(), p) + 1;
        let top = p
            .checked_pow(depth)
            .ok_or_else(|| Error::OutOfRange(format!("{p}^{depth} overflows")))?;
        let bottom = top / p;
        // Homomorphisms Z/p^K → Z/n are x_K ↦ y with p^K·y ≡ 0 (mod n).
        let mut homomorphisms = 0u64;
        let mut socle_killed = true;
        for y in 0..n {
            if !(top as u128 * y as u128).is_multiple_of(n as u128) {
                continue;
            }
            homomorphisms += 1;
            if !(bottom as u128 * y as u128).is_multiple_of(n as u128) {
                socle_killed = false;
            }
        }
        checks.push(ModulusCheck {
            modulus: n,
            depth,
            homomorphisms,
            socle_killed,
        });
    }
    let no_injective_pattern = checks.iter().all(|c| c.socle_killed);
    Ok(PruferReport {
        prime: p,
        checks,
        no_injective_pattern,
    })
}
