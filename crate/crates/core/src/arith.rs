//! Small exact-arithmetic helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicity of `p` in `n` (n > 0).
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Least nonnegative residue of `a` modulo `m` (m > 0).
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `b` modulo `m`, if it exists.
pub fn mod_inverse(b: &BigInt, m: &BigInt) -> Option<BigInt> {
    let ext = b.extended_gcd(m);
    if !ext.gcd.is_one() && ext.gcd != -BigInt::one() {
        return None;
    }
    let inv = ext.x * ext.gcd.signum();
    Some(inv.mod_floor(m))
}

/// Parses `a/b`, `a`, or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: `{text}`"));
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac = BigRational::new(frac_num, scale);
        let int = BigRational::from_integer(int_part);
        return Ok(if negative { int - frac } else { int + frac });
    }
    let n: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest binary64 to an exact rational; adequate for reporting and for the
/// floating-point norm kernel.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Very large numerator or denominator: shift both down first.
    let bits = q.numer().bits().max(q.denom().bits());
    let shift = bits.saturating_sub(900);
    let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

pub fn abs_rational(q: &BigRational) -> BigRational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factorisation() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert!(factorize(1).is_empty());
    }

    #[test]
    fn inverse_mod_nine() {
        let inv = mod_inverse(&BigInt::from(2), &BigInt::from(9)).unwrap();
        assert_eq!(inv, BigInt::from(5));
        assert!(mod_inverse(&BigInt::from(3), &BigInt::from(9)).is_none());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/100").unwrap(), BigRational::new(1.into(), 100.into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigUint::from(48u32), 2), 4);
        assert_eq!(valuation(&factorial(10), 5), 2);
    }
}
