//! Permutations of `{0, ..., n-1}`, printed 1-based in cycle notation.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotBijection(format!(
                    "image list {images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds from 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::NotBijection(format!("point {x} outside 1..{n}")));
                }
                if touched[x - 1] {
                    return Err(Error::NotBijection(format!("point {x} repeated in cycles")));
                }
                touched[x - 1] = true;
                let next = cycle[(i + 1) % cycle.len()];
                if next == 0 || next > n {
                    return Err(Error::NotBijection(format!("point {next} outside 1..{n}")));
                }
                images[x - 1] = next - 1;
            }
        }
        Self::from_images(images)
    }

    /// Parses one-line cycle notation such as `(1 2 3)(4 5)`; `()` is the identity.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed cycle notation `{text}`"));
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let inner = &body[..close];
            let cycle: Vec<usize> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut result = Permutation::identity(self.degree());
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = sq.compose(&result);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, x)| i == *x).count()
    }

    /// Orbits in increasing order of their minimal point; each orbit starts at
    /// its minimum and follows the permutation.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                orbit.push(x);
                x = self.images[x];
            }
            out.push(orbit);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.orbits().iter().fold(1, |acc, o| acc.lcm(&o.len()))
    }

    /// Product permutation on `X × Y`, with the `X` index varying slowest.
    pub fn product(&self, other: &Permutation) -> Permutation {
        let m = other.degree();
        let mut images = Vec::with_capacity(self.degree() * m);
        for x in 0..self.degree() {
            for y in 0..m {
                images.push(self.images[x] * m + other.images[y]);
            }
        }
        Permutation { images }
    }

    /// The translation `x ↦ x + shift (mod n)`.
    pub fn rotation(n: usize, shift: usize) -> Permutation {
        Permutation {
            images: (0..n).map(|x| (x + shift) % n).collect(),
        }
    }

    pub fn to_cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .orbits()
            .into_iter()
            .filter(|o| o.len() > 1)
            .map(|o| {
                let pts: Vec<String> = o.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", pts.join(" "))
            })
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.concat()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}
