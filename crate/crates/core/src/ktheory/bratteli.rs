//! Bratteli diagrams of finite-stage crossed products `M_{n_1...n_m} ⊗ C*(H)`.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::{EmbeddingPattern, Eventual, GroupElement};
use crate::gset::PermutationAction;
use crate::ktheory::characters::{characters, fixed_point_vector, multiplicities, CharacterTable};
use crate::uhf::{supernatural_of, SupernaturalNumber};

/// Nonnegative integer matrix indexed `[χ'][χ]`: target block, source block.
pub type MultiplicityMatrix = Vec<Vec<BigUint>>;

fn to_nonneg(v: Vec<BigInt>) -> Vec<BigUint> {
    v.into_iter()
        .map(|x| x.to_biguint().expect("multiplicities are nonnegative"))
        .collect()
}

/// `M[χ'][χ] = m(χ'·χ⁻¹)` from the fixed-point counts of one level.
pub fn bratteli_step_from_fix(table: &CharacterTable, fix: &[BigInt]) -> Result<MultiplicityMatrix> {
    let m = to_nonneg(multiplicities(table, fix)?);
    Ok((0..table.len())
        .map(|target| {
            (0..table.len())
                .map(|source| m[table.multiply(target, table.inverse(source))].clone())
                .collect()
        })
        .collect())
}

pub fn bratteli_step(table: &CharacterTable, action: &PermutationAction) -> Result<MultiplicityMatrix> {
    bratteli_step_from_fix(table, &fixed_point_vector(table, action)?)
}

pub fn matrix_mul(a: &MultiplicityMatrix, b: &MultiplicityMatrix) -> MultiplicityMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigUint::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn all_equal(m: &MultiplicityMatrix) -> bool {
    let first = &m[0][0];
    m.iter().flatten().all(|x| x == first)
}

fn big_rows<S: Serializer>(rows: &[Vec<BigUint>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(BigUint::to_string).collect())
        .collect();
    text.serialize(s)
}

fn big_steps<S: Serializer>(steps: &[MultiplicityMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<Vec<String>>> = steps
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(BigUint::to_string).collect()).collect())
        .collect();
    text.serialize(s)
}

fn big_list<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<String> = v.iter().map(BigUint::to_string).collect();
    text.serialize(s)
}

/// Block sizes per stage and multiplicity matrices per step. Stage 0 is
/// `C*(H)`: one block of size 1 per character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BratteliDiagram {
    pub group: Vec<u64>,
    pub blocks: Vec<String>,
    #[serde(serialize_with = "big_list")]
    pub factors: Vec<BigUint>,
    #[serde(serialize_with = "big_rows")]
    pub sizes: Vec<Vec<BigUint>>,
    #[serde(serialize_with = "big_steps")]
    pub steps: Vec<MultiplicityMatrix>,
    /// Levels where `fix(h) = 0` for every `h ≠ 1`.
    pub vanishing_levels: Vec<usize>,
}

impl BratteliDiagram {
    pub fn from_steps(table: &CharacterTable, factors: Vec<BigUint>, steps: Vec<MultiplicityMatrix>) -> Self {
        let k = table.len();
        let mut sizes = vec![vec![BigUint::one(); k]];
        for m in &steps {
            let prev = sizes.last().expect("stage 0 present");
            let next = (0..k)
                .map(|i| (0..k).fold(BigUint::zero(), |acc, j| acc + &m[i][j] * &prev[j]))
                .collect();
            sizes.push(next);
        }
        let vanishing_levels = steps
            .iter()
            .enumerate()
            .filter(|(_, m)| all_equal(m))
            .map(|(i, _)| i + 1)
            .collect();
        BratteliDiagram {
            group: table.orders().to_vec(),
            blocks: (0..k).map(|c| table.label(c)).collect(),
            factors,
            sizes,
            steps,
            vanishing_levels,
        }
    }

    /// Telescoped matrix of steps `from..=to` (1-based).
    pub fn telescope(&self, from: usize, to: usize) -> Result<MultiplicityMatrix> {
        if from == 0 || from > to || to > self.steps.len() {
            return Err(Error::OutOfRange(format!(
                "telescope {from}..={to} of {} steps",
                self.steps.len()
            )));
        }
        Ok(self.steps[from..to]
            .iter()
            .fold(self.steps[from - 1].clone(), |acc, m| matrix_mul(m, &acc)))
    }

    /// Smallest `a` such that the telescope `a..=last` has all entries equal.
    pub fn constant_telescope_from(&self) -> Option<usize> {
        let last = self.steps.len();
        (1..=last)
            .rev()
            .take_while(|&a| self.telescope(a, last).is_ok_and(|t| all_equal(&t)))
            .last()
    }

    /// Line-based adjacency export.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "group {:?}", self.group);
        for (s, sizes) in self.sizes.iter().enumerate() {
            let _ = writeln!(out, "stage {s}");
            for (label, size) in self.blocks.iter().zip(sizes) {
                let _ = writeln!(out, "block {label} {size}");
            }
            if let Some(m) = self.steps.get(s) {
                let _ = writeln!(out, "step {} n={}", s + 1, self.factors[s]);
                for (label, row) in self.blocks.iter().zip(m) {
                    let row: Vec<String> = row.iter().map(BigUint::to_string).collect();
                    let _ = writeln!(out, "row {label} {}", row.join(" "));
                }
            }
        }
        out
    }
}

/// Diagram of explicitly given per-level actions of `H = Z/d_1 × ... × Z/d_k`.
pub fn diagram_from_actions(orders: &[u64], actions: &[PermutationAction]) -> Result<BratteliDiagram> {
    let table = characters(orders)?;
    let mut steps = Vec::with_capacity(actions.len());
    let mut factors = Vec::with_capacity(actions.len());
    for (l, a) in actions.iter().enumerate() {
        let fix = fixed_point_vector(&table, a)?;
        steps.push(step_checked(&table, &fix, l + 1)?);
        factors.push(BigUint::from(a.degree()));
    }
    Ok(BratteliDiagram::from_steps(&table, factors, steps))
}

/// A vanishing-trace level forces `|H|` to divide `n`.
fn step_checked(table: &CharacterTable, fix: &[BigInt], level: usize) -> Result<MultiplicityMatrix> {
    let vanishing = fix.iter().skip(1).all(Zero::is_zero);
    if vanishing && !(&fix[0] % BigInt::from(table.len())).is_zero() {
        return Err(Error::Inconsistency(format!(
            "level {level} has vanishing trace but |H| = {} does not divide n = {}",
            table.len(),
            fix[0]
        )));
    }
    bratteli_step_from_fix(table, fix)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum DiagramVerdict {
    /// Every nontrivial `h` survives at infinitely many levels, so every
    /// telescope eventually has constant entries.
    Uhf {
        supernatural: SupernaturalNumber,
        certificates: Vec<String>,
    },
    NotUhf {
        reason: String,
    },
    Undetermined {
        reason: String,
    },
}

impl DiagramVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            DiagramVerdict::Uhf { .. } => "UHF",
            DiagramVerdict::NotUhf { .. } => "NotUHF",
            DiagramVerdict::Undetermined { .. } => "Undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossedProductReport {
    pub diagram: BratteliDiagram,
    pub constant_telescope_from: Option<usize>,
    pub verdict: DiagramVerdict,
}

/// Diagram of `H ⊂ ⊕/Π Z/n_l` acting by translations at levels
/// `1..=stages`, with the long-run UHF verdict decided from the pattern.
pub fn crossed_product_diagram(
    pattern: &EmbeddingPattern,
    stages: usize,
    horizon: usize,
) -> Result<CrossedProductReport> {
    let group = pattern.group();
    if group.rank() > 0 || !pattern.local_primes().is_empty() {
        return Err(Error::InvalidInput(format!(
            "{} is not finite",
            pattern.describe_group()
        )));
    }
    let orders = group.torsion().to_vec();
    let table = characters(&orders)?;
    let elements: Vec<GroupElement> = (0..table.len())
        .map(|h| {
            let tors = table.tuple(h).into_iter().map(|x| x as i64).collect();
            pattern.element(vec![], tors, vec![])
        })
        .collect::<Result<_>>()?;

    let mut steps = Vec::with_capacity(stages);
    let mut factors = Vec::with_capacity(stages);
    for l in 1..=stages {
        let n = pattern.modulus(l)?;
        let fix = elements
            .iter()
            .map(|h| {
                Ok(if pattern.coordinate(h, l)?.is_zero() {
                    n.clone()
                } else {
                    BigInt::zero()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        steps.push(step_checked(&table, &fix, l)?);
        factors.push(n.to_biguint().expect("moduli are positive"));
    }
    let diagram = BratteliDiagram::from_steps(&table, factors, steps);

    let mut certificates = Vec::new();
    let mut undetermined = None;
    for h in elements.iter().skip(1) {
        match pattern.eventual(h, horizon)? {
            Eventual::NonzeroInfinitelyOften { witness, certificate } => certificates.push(format!(
                "{h}: nonzero from level {witness} infinitely often ({certificate})"
            )),
            Eventual::VanishesFrom { level } => {
                let verdict = DiagramVerdict::NotUhf {
                    reason: format!(
                        "{h} acts trivially at every level ≥ {level}; telescopes from there split along the characters trivial on it"
                    ),
                };
                return Ok(CrossedProductReport {
                    constant_telescope_from: diagram.constant_telescope_from(),
                    diagram,
                    verdict,
                });
            }
            Eventual::Unknown { checked_up_to, .. } => {
                undetermined.get_or_insert(format!("{h} undecided after {checked_up_to} levels"));
            }
        }
    }
    let verdict = match undetermined {
        Some(reason) => DiagramVerdict::Undetermined { reason },
        None => DiagramVerdict::Uhf {
            supernatural: supernatural_of(&pattern.sequence(), horizon)?,
            certificates,
        },
    };
    Ok(CrossedProductReport {
        constant_telescope_from: diagram.constant_telescope_from(),
        diagram,
        verdict,
    })
}

/// Entry of a matrix as `u64`, for tests and summaries.
pub fn entry(m: &MultiplicityMatrix, i: usize, j: usize) -> Option<u64> {
    m.get(i)?.get(j)?.to_u64()
}
