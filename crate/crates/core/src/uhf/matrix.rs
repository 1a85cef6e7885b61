//! Dense square matrices over arbitrary-precision rationals.

use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::rational_to_f64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        RatMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    /// Builds from row-major entries. Panics if `data.len() != n * n`.
    pub fn from_rows(n: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), n * n, "row-major data must have n*n entries");
        RatMatrix { n, data }
    }

    pub fn from_diagonal(diag: &[BigRational]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.data[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| i == j || self.data[i * n + j].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigRational> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RatMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`; the index of `self` varies slowest.
    pub fn kron(&self, other: &RatMatrix) -> Self {
        let (a, b) = (self.n, other.n);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        let y = other.get(k, l);
                        if !y.is_zero() {
                            out.data[(i * b + k) * n + (j * b + l)] = x * y;
                        }
                    }
                }
            }
        }
        out
    }

    /// Largest absolute entry, exact.
    pub fn max_abs_entry(&self) -> BigRational {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(rational_to_f64).collect()
    }

    fn zip_with(&self, other: &RatMatrix, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        RatMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(x, y)| f(x, y)).collect(),
        }
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    // Skips zero entries of the left factor; permutation and projection
    // matrices are sparse.
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = RatMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = &self.data[i * n + k];
                if x.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let x_is_one = x.is_one();
                for (j, y) in row.iter().enumerate() {
                    if y.is_zero() {
                        continue;
                    }
                    let slot = &mut out.data[i * n + j];
                    if x_is_one {
                        *slot += y;
                    } else {
                        *slot += x * y;
                    }
                }
            }
        }
        out
    }
}
