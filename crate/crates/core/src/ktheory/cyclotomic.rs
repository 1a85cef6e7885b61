//! Exact sums of `N`-th roots of unity, reduced modulo `Φ_N`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients (constant term first) of the cyclotomic polynomial `Φ_n`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic index must be positive");
    // x^n − 1 = Π_{d | n} Φ_d.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = divide_exact(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// Quotient of `a` by the monic `b`; the division must be exact.
fn divide_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (q, r) = divmod_monic(a, b);
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

fn divmod_monic(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![BigInt::zero()], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            r[i - db + j] -= &c * bj;
        }
    }
    r.truncate(db);
    (q, r)
}

/// `Σ_j c_j ζ_N^j` with `ζ_N = e^{2πi/N}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl RootSum {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "root order must be positive");
        RootSum {
            order,
            coeffs: vec![BigInt::zero(); order as usize],
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Adds `c · ζ^exponent`; the exponent is taken mod `N`.
    pub fn add_term(&mut self, exponent: i64, c: &BigInt) {
        let e = exponent.rem_euclid(self.order as i64) as usize;
        self.coeffs[e] += c;
    }

    /// Coordinates in the basis `1, ζ, ..., ζ^{φ(N)−1}` of `Q(ζ_N)`.
    pub fn reduced(&self) -> Vec<BigInt> {
        let phi = cyclotomic_polynomial(self.order);
        let (_, mut r) = divmod_monic(&self.coeffs, &phi);
        r.resize(phi.len() - 1, BigInt::zero());
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Zero::is_zero)
    }

    /// The value when it is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.reduced();
        r[1..].iter().all(Zero::is_zero).then(|| r[0].clone())
    }
}
