//! Rational rank and prime divisibility of direct limits of free abelian
//! groups `Z^{r_1} → Z^{r_2} → ...`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::groups::{smith_normal_form, IntMatrix};

/// Default bound on the primes checked for divisibility.
pub const DEFAULT_PRIME_BOUND: u64 = 97;

/// Connecting maps; a matrix maps column vectors, so step `m` has shape
/// `r_{m+1} × r_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapSchedule {
    /// Explicit maps; nothing is known past the last one.
    Table {
        matrices: Vec<Vec<Vec<i64>>>,
    },
    /// `Z → Z`, multiplication by `m + 1` at step `m`.
    ScaleBySuccessor,
    Constant {
        matrix: Vec<Vec<i64>>,
    },
    /// The listed maps repeated forever.
    Periodic {
        matrices: Vec<Vec<Vec<i64>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectLimitSystem {
    pub schedule: MapSchedule,
}

impl DirectLimitSystem {
    pub fn new(schedule: MapSchedule) -> Result<Self> {
        let sys = DirectLimitSystem { schedule };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<()> {
        let check_chain = |ms: &[Vec<Vec<i64>>], cyclic: bool| -> Result<()> {
            if ms.is_empty() {
                return Err(Error::InvalidInput("at least one connecting map is needed".into()));
            }
            let shapes = ms.iter().map(|m| shape(m)).collect::<Result<Vec<_>>>()?;
            let pairs = shapes.len() - usize::from(!cyclic);
            for i in 0..pairs {
                let (rows, _) = shapes[i];
                let (_, next_cols) = shapes[(i + 1) % shapes.len()];
                if rows != next_cols {
                    return Err(Error::InvalidInput(format!(
                        "map {} has {rows} rows but map {} has {next_cols} columns",
                        i + 1,
                        (i + 1) % shapes.len() + 1
                    )));
                }
            }
            Ok(())
        };
        match &self.schedule {
            MapSchedule::Table { matrices } => check_chain(matrices, false),
            MapSchedule::ScaleBySuccessor => Ok(()),
            MapSchedule::Constant { matrix } => check_chain(std::slice::from_ref(matrix), true),
            MapSchedule::Periodic { matrices } => check_chain(matrices, true),
        }
    }

    /// The map at step `m` (1-based), when known.
    pub fn step(&self, m: usize) -> Option<IntMatrix> {
        match &self.schedule {
            MapSchedule::Table { matrices } => matrices.get(m.checked_sub(1)?).map(|x| to_int(x)),
            MapSchedule::ScaleBySuccessor => Some(IntMatrix::from_rows(1, &[vec![m as i64 + 1]])),
            MapSchedule::Constant { matrix } => Some(to_int(matrix)),
            MapSchedule::Periodic { matrices } => Some(to_int(&matrices[(m - 1) % matrices.len()])),
        }
    }

    /// Number of known steps; `None` when unbounded.
    pub fn known_steps(&self) -> Option<usize> {
        match &self.schedule {
            MapSchedule::Table { matrices } => Some(matrices.len()),
            _ => None,
        }
    }

    /// Composite of steps `from..=to`.
    pub fn composite(&self, from: usize, to: usize) -> Result<IntMatrix> {
        let mut acc = self
            .step(from)
            .ok_or_else(|| Error::OutOfRange(format!("step {from} is not known")))?;
        for m in from + 1..=to {
            let s = self
                .step(m)
                .ok_or_else(|| Error::OutOfRange(format!("step {m} is not known")))?;
            acc = s.mul(&acc);
        }
        Ok(acc)
    }
}

fn shape(m: &[Vec<i64>]) -> Result<(usize, usize)> {
    let cols = m.first().map_or(0, Vec::len);
    if m.is_empty() || cols == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput(
            "connecting maps must be nonempty rectangular matrices".into(),
        ));
    }
    Ok((m.len(), cols))
}

fn to_int(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(m[0].len(), m)
}

fn mod_p(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let pb = BigInt::from(p);
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let r = ((m.get(i, j) % &pb) + &pb) % &pb;
                    r.to_u64().expect("reduced mod p")
                })
                .collect()
        })
        .collect()
}

fn nilpotent_mod_p(a: &IntMatrix, p: u64) -> bool {
    let n = a.rows();
    let a = mod_p(a, p);
    let mul = |x: &Vec<Vec<u64>>, y: &Vec<Vec<u64>>| -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(0, |acc, k| (acc + x[i][k] * y[k][j]) % p))
                    .collect()
            })
            .collect()
    };
    let mut pow = a.clone();
    for _ in 1..n {
        pow = mul(&pow, &a);
    }
    pow.iter().flatten().all(|&x| x == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Divisibility {
    /// Composites of every long enough window vanish mod `p`.
    Certified {
        certificate: String,
    },
    /// Table data only: the steps whose map vanishes mod `p`.
    Observed {
        steps: Vec<usize>,
        horizon: usize,
    },
    NotCertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeDivisibility {
    pub prime: u64,
    #[serde(flatten)]
    pub status: Divisibility,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitInvariants {
    /// `dim_Q (lim G_m) ⊗ Q`.
    pub rank: usize,
    /// False for tables, where the rank is the stabilised value over the data.
    pub exact: bool,
    pub rank_certificate: String,
    /// Elementary divisors of the composite of the first `composite_steps` maps.
    pub composite_steps: usize,
    pub composite_divisors: Vec<String>,
    pub divisibility: Vec<PrimeDivisibility>,
}

impl LimitInvariants {
    pub fn divisible_by(&self, p: u64) -> bool {
        self.divisibility
            .iter()
            .any(|d| d.prime == p && matches!(d.status, Divisibility::Certified { .. }))
    }
}

/// Stabilised rank of powers of a square matrix.
fn stable_rank(a: &IntMatrix) -> usize {
    let mut pow = a.clone();
    for _ in 1..a.rows() {
        pow = pow.mul(a);
    }
    pow.rank()
}

pub fn direct_limit_invariants(
    system: &DirectLimitSystem,
    horizon: usize,
    prime_bound: u64,
) -> Result<LimitInvariants> {
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be positive".into()));
    }
    let primes = primes_up_to(prime_bound);
    let (rank, exact, rank_certificate) = match &system.schedule {
        MapSchedule::ScaleBySuccessor => (1, true, "every map is a nonzero scalar on Z".to_string()),
        MapSchedule::Constant { matrix } => {
            let r = stable_rank(&to_int(matrix));
            (
                r,
                true,
                format!("rank of A^{} (powers stabilise by then)", matrix.len()),
            )
        }
        MapSchedule::Periodic { matrices } => {
            let period = system.composite(1, matrices.len())?;
            let r = stable_rank(&period);
            (
                r,
                true,
                format!("stabilised rank of the period composite of {} maps", matrices.len()),
            )
        }
        MapSchedule::Table { matrices } => {
            let last = matrices.len();
            let r = (1..=last)
                .map(|a| system.composite(a, last).map(|c| c.rank()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or(0);
            (
                r,
                false,
                format!("largest rank of the composites ending at step {last}"),
            )
        }
    };

    let composite_steps = system.known_steps().map_or(horizon, |k| k.min(horizon));
    let composite = system.composite(1, composite_steps)?;
    let composite_divisors = smith_normal_form(&composite)
        .invariant_factors()
        .iter()
        .map(BigInt::to_string)
        .collect();

    let divisibility = primes
        .iter()
        .map(|&p| {
            let status = match &system.schedule {
                MapSchedule::ScaleBySuccessor => Divisibility::Certified {
                    certificate: format!("{p} divides m + 1 at every step m ≡ {} mod {p}", p - 1),
                },
                MapSchedule::Constant { matrix } => {
                    if nilpotent_mod_p(&to_int(matrix), p) {
                        Divisibility::Certified {
                            certificate: format!("A^{} ≡ 0 mod {p}", matrix.len()),
                        }
                    } else {
                        Divisibility::NotCertified
                    }
                }
                MapSchedule::Periodic { matrices } => {
                    let period = system.composite(1, matrices.len())?;
                    if nilpotent_mod_p(&period, p) {
                        Divisibility::Certified {
                            certificate: format!("the period composite is nilpotent mod {p}"),
                        }
                    } else {
                        Divisibility::NotCertified
                    }
                }
                MapSchedule::Table { matrices } => {
                    let steps: Vec<usize> = (1..=matrices.len().min(horizon))
                        .filter(|&m| {
                            let s = system.step(m).expect("table step");
                            mod_p(&s, p).iter().flatten().all(|&x| x == 0)
                        })
                        .collect();
                    if steps.is_empty() {
                        Divisibility::NotCertified
                    } else {
                        Divisibility::Observed {
                            steps,
                            horizon: matrices.len().min(horizon),
                        }
                    }
                }
            };
            Ok(PrimeDivisibility { prime: p, status })
        })
        .collect::<Result<_>>()?;

    Ok(LimitInvariants {
        rank,
        exact,
        rank_certificate,
        composite_steps,
        composite_divisors,
        divisibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorial;

    #[test]
    fn successor_scaling_gives_the_rationals() {
        let sys = DirectLimitSystem::new(MapSchedule::ScaleBySuccessor).unwrap();
        let inv = direct_limit_invariants(&sys, 10, DEFAULT_PRIME_BOUND).unwrap();
        assert_eq!(inv.rank, 1);
        assert_eq!(inv.divisibility.len(), 25);
        assert!(inv
            .divisibility
            .iter()
            .all(|d| matches!(d.status, Divisibility::Certified { .. })));
        // Composite through step m is (m+1)!.
        assert_eq!(inv.composite_divisors, vec![factorial(11).to_string()]);
    }

    #[test]
    fn identity_and_diagonal_maps() {
        let id = DirectLimitSystem::new(MapSchedule::Constant { matrix: vec![vec![1]] }).unwrap();
        let inv = direct_limit_invariants(&id, 5, DEFAULT_PRIME_BOUND).unwrap();
        assert_eq!(inv.rank, 1);
        assert!(!inv.divisible_by(2));
        let d = DirectLimitSystem::new(MapSchedule::Constant {
            matrix: vec![vec![2, 0], vec![0, 2]],
        })
        .unwrap();
        let inv = direct_limit_invariants(&d, 5, DEFAULT_PRIME_BOUND).unwrap();
        assert_eq!(inv.rank, 2);
        assert!(inv.divisible_by(2) && !inv.divisible_by(3));
        let nil = DirectLimitSystem::new(MapSchedule::Constant {
            matrix: vec![vec![0, 1], vec![0, 0]],
        })
        .unwrap();
        assert_eq!(direct_limit_invariants(&nil, 5, 10).unwrap().rank, 0);
    }

    #[test]
    fn shapes_must_chain() {
        let bad = MapSchedule::Table {
            matrices: vec![vec![vec![1, 0]], vec![vec![1, 0]]],
        };
        assert!(DirectLimitSystem::new(bad).is_err());
        let ok = MapSchedule::Table {
            matrices: vec![vec![vec![1, 0]], vec![vec![3], vec![0]]],
        };
        let sys = DirectLimitSystem::new(ok).unwrap();
        let inv = direct_limit_invariants(&sys, 10, 5).unwrap();
        assert_eq!(inv.rank, 1);
        assert!(!inv.exact);
        let status = |p: u64| inv.divisibility.iter().find(|d| d.prime == p).unwrap().status.clone();
        assert_eq!(
            status(3),
            Divisibility::Observed {
                steps: vec![2],
                horizon: 2
            }
        );
        assert_eq!(status(2), Divisibility::NotCertified);
    }
}
