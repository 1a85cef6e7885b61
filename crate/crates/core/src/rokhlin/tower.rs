//! Exact Rokhlin towers from orbit positions of `α_g` on chosen levels.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factorize, format_rational, rational_to_f64};
use crate::error::{Error, Result};
use crate::groups::{EmbeddingPattern, GroupElement};
use crate::rokhlin::family::alpha_permutation;
use crate::uhf::{op_norm_bracket_matrix, NormBracket, RatMatrix, Stage, StageElement};

/// Bracket tolerance for commutator defects.
pub const TOWER_TOLERANCE: f64 = 1e-10;

/// Diagonal 0/1 projections `p_0, ..., p_{k-1}` at a concrete stage, stored
/// as index sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RokhlinTower {
    pub order: usize,
    /// Levels whose coordinates carry the orbit positions.
    pub levels: Vec<usize>,
    pub stage: Stage,
    pub projections: Vec<Vec<usize>>,
    pub achieved: TowerDefects,
}

/// Defects of a tower: `‖[p_i, a]‖` per test element, `‖α_g(p_i) − p_{i+1}‖`
/// per step, and `‖Σ p_i − 1‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerDefects {
    pub commutators: Vec<CommutatorDefect>,
    pub shift: Vec<u8>,
    pub sum: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorDefect {
    pub element: usize,
    pub exact_zero: bool,
    pub bound: NormBracket,
}

impl TowerDefects {
    pub fn max_commutator(&self) -> f64 {
        self.commutators.iter().map(|c| c.bound.upper).fold(0.0, f64::max)
    }
}

impl RokhlinTower {
    pub fn projection(&self, i: usize) -> Result<StageElement> {
        let set = self
            .projections
            .get(i)
            .ok_or_else(|| Error::OutOfRange(format!("tower has {} floors", self.order)))?;
        StageElement::diagonal_projection(&self.stage, set)
    }
}

/// The stage on which the test elements live, and a check that it sits on
/// the pattern's factors.
fn base_stage(pattern: &EmbeddingPattern, f: &[StageElement], cap: usize) -> Result<Stage> {
    let len = f.iter().map(|a| a.stage().len()).max().unwrap_or(0);
    let stage = pattern.sequence().stage(len, cap)?;
    if let Some(a) = f.iter().find(|a| !a.stage().is_prefix_of(&stage)) {
        return Err(Error::StageMismatch(format!(
            "test element at stage {:?} is not on the pattern's factors",
            a.stage().factors()
        )));
    }
    Ok(stage)
}

/// Builds the order-`k` tower for `g` above the stage of `f`, searching
/// levels up to `horizon`.
pub fn tower_synthesize(
    pattern: &EmbeddingPattern,
    g: &GroupElement,
    f: &[StageElement],
    horizon: usize,
    cap: usize,
) -> Result<RokhlinTower> {
    pattern.check_element(g)?;
    let k = pattern
        .element_order(g)
        .ok_or_else(|| Error::InvalidInput(format!("{g} has infinite order")))?;
    let base = base_stage(pattern, f, cap)?;
    let big_l = base.len();
    if k == 1 {
        let mut tower = RokhlinTower {
            order: 1,
            levels: vec![],
            projections: vec![(0..base.dim()).collect()],
            stage: base,
            achieved: TowerDefects {
                commutators: vec![],
                shift: vec![],
                sum: "0".into(),
            },
        };
        tower.achieved = tower_defects(&tower, g, pattern, f)?;
        return Ok(tower);
    }

    let top = match pattern.known_levels() {
        Some(known) => horizon.min(known),
        None => horizon,
    };
    let mut levels: Vec<usize> = Vec::new();
    let mut missing = Vec::new();
    for (prime, exp) in factorize(k) {
        let pp = BigInt::from(prime.pow(exp));
        let mut found = None;
        // Reuse an already chosen level when it covers this prime power.
        for &l in &levels {
            if (pattern.level_order(g, l)? % &pp).is_zero() {
                found = Some(l);
                break;
            }
        }
        if found.is_none() {
            for l in big_l + 1..=top {
                if (pattern.level_order(g, l)? % &pp).is_zero() {
                    found = Some(l);
                    break;
                }
            }
        }
        match found {
            Some(l) if !levels.contains(&l) => levels.push(l),
            Some(_) => {}
            None => missing.push(format!("{prime}^{exp}")),
        }
    }
    if !missing.is_empty() {
        return Err(Error::CertificateFailure(format!(
            "no level in {}..={top} has image order divisible by {}",
            big_l + 1,
            missing.join(", ")
        )));
    }
    levels.sort_unstable();

    let stage = pattern.sequence().stage(*levels.last().expect("k > 1"), cap)?;
    let moduli: Vec<usize> = levels.iter().map(|&l| stage.factors()[l - 1] as usize).collect();
    let shifts: Vec<usize> = levels
        .iter()
        .map(|&l| {
            pattern
                .coordinate(g, l)
                .map(|c| c.to_usize().expect("coordinate below the factor"))
        })
        .collect::<Result<_>>()?;

    // Orbit positions on the product of the chosen levels; scanning in
    // increasing mixed-radix order makes each orbit's base point minimal.
    let size: usize = moduli.iter().product();
    let mut position = vec![usize::MAX; size];
    for start in 0..size {
        if position[start] != usize::MAX {
            continue;
        }
        let mut x = start;
        let mut t = 0;
        while position[x] == usize::MAX {
            position[x] = t;
            t += 1;
            x = translate(x, &moduli, &shifts);
        }
    }

    let mut projections = vec![Vec::new(); k as usize];
    for x in 0..stage.dim() {
        let coords = stage.coordinates(x);
        let local = levels
            .iter()
            .zip(&moduli)
            .fold(0, |acc, (&l, &n)| acc * n + coords[l - 1]);
        projections[position[local] % k as usize].push(x);
    }

    let mut tower = RokhlinTower {
        order: k as usize,
        levels,
        stage,
        projections,
        achieved: TowerDefects {
            commutators: vec![],
            shift: vec![],
            sum: "0".into(),
        },
    };
    tower.achieved = tower_defects(&tower, g, pattern, f)?;
    Ok(tower)
}

fn translate(x: usize, moduli: &[usize], shifts: &[usize]) -> usize {
    let mut out = 0;
    let mut rest = x;
    let mut stride = 1;
    for (&n, &c) in moduli.iter().zip(shifts).rev() {
        let digit = rest % n;
        rest /= n;
        out += ((digit + c) % n) * stride;
        stride *= n;
    }
    out
}

/// `‖[p, a ⊗ 1]‖` for a diagonal 0/1 projection `p` given by membership.
/// The commutator is block diagonal over the tail index, so blocks are
/// bracketed one at a time.
fn diagonal_commutator(member: &[bool], a: &StageElement, stage: &Stage) -> Result<CommutatorDefect> {
    let d = a.dim();
    let tail = stage.dim() / d;
    let m = a.matrix();
    let mut blocks: Vec<RatMatrix> = Vec::new();
    for v in 0..tail {
        let idx = |u: usize| u * tail + v;
        let mut block: Option<RatMatrix> = None;
        for u in 0..d {
            for w in 0..d {
                let x = m.get(u, w);
                if x.is_zero() || member[idx(u)] == member[idx(w)] {
                    continue;
                }
                let sign = if member[idx(u)] { x.clone() } else { -x.clone() };
                block.get_or_insert_with(|| RatMatrix::zeros(d)).set(u, w, sign);
            }
        }
        if let Some(b) = block {
            if !blocks.contains(&b) {
                blocks.push(b);
            }
        }
    }
    if blocks.is_empty() {
        return Ok(CommutatorDefect {
            element: 0,
            exact_zero: true,
            bound: NormBracket {
                lower: 0.0,
                upper: 0.0,
                converged: true,
                squarings: 0,
            },
        });
    }
    let mut worst = NormBracket {
        lower: 0.0,
        upper: 0.0,
        converged: true,
        squarings: 0,
    };
    for b in &blocks {
        let nb = op_norm_bracket_matrix(b, TOWER_TOLERANCE)?;
        worst = NormBracket {
            lower: worst.lower.max(nb.lower),
            upper: worst.upper.max(nb.upper),
            converged: worst.converged && nb.converged,
            squarings: worst.squarings.max(nb.squarings),
        };
    }
    Ok(CommutatorDefect {
        element: 0,
        exact_zero: false,
        bound: worst,
    })
}

fn tower_defects(
    tower: &RokhlinTower,
    g: &GroupElement,
    pattern: &EmbeddingPattern,
    f: &[StageElement],
) -> Result<TowerDefects> {
    let dim = tower.stage.dim();
    if let Some(bad) = tower.projections.iter().flatten().find(|&&x| x >= dim) {
        return Err(Error::OutOfRange(format!("index {bad} outside dimension {dim}")));
    }
    let mut mult = vec![0i64; dim];
    for set in &tower.projections {
        for &x in set {
            mult[x] += 1;
        }
    }
    // Σ p_i − 1 is diagonal; a repeated index within one floor still counts.
    let sum = mult.iter().map(|&m| (m - 1).abs()).max().unwrap_or(0);

    let alpha = alpha_permutation(pattern, g, &tower.stage)?;
    let k = tower.projections.len();
    let sets: Vec<BTreeSet<usize>> = tower.projections.iter().map(|s| s.iter().copied().collect()).collect();
    let shift = (0..k)
        .map(|i| {
            let moved: BTreeSet<usize> = sets[i].iter().map(|&x| alpha.apply(x)).collect();
            u8::from(moved != sets[(i + 1) % k])
        })
        .collect();

    let mut commutators = Vec::new();
    for (e, a) in f.iter().enumerate() {
        if !a.stage().is_prefix_of(&tower.stage) {
            return Err(Error::StageMismatch(format!(
                "test element at stage {:?} does not embed into the tower stage",
                a.stage().factors()
            )));
        }
        let mut worst: Option<CommutatorDefect> = None;
        for set in &tower.projections {
            let mut member = vec![false; dim];
            for &x in set {
                member[x] = true;
            }
            let c = diagonal_commutator(&member, a, &tower.stage)?;
            if worst.as_ref().is_none_or(|w| c.bound.upper > w.bound.upper) {
                worst = Some(c);
            }
        }
        if let Some(mut w) = worst {
            w.element = e;
            commutators.push(w);
        }
    }
    Ok(TowerDefects {
        commutators,
        shift,
        sum: sum.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerReport {
    pub order: usize,
    pub levels: Vec<usize>,
    pub stage: Vec<u64>,
    pub epsilon: String,
    pub defects: TowerDefects,
    /// Normalised trace of each floor.
    pub traces: Vec<String>,
    pub passes: bool,
}

/// Recomputes every defect of `tower` and compares with `epsilon`.
pub fn tower_verify(
    tower: &RokhlinTower,
    g: &GroupElement,
    pattern: &EmbeddingPattern,
    f: &[StageElement],
    epsilon: &BigRational,
) -> Result<TowerReport> {
    let defects = tower_defects(tower, g, pattern, f)?;
    let eps = rational_to_f64(epsilon);
    let sum: i64 = defects.sum.parse().expect("integer defect");
    let passes = BigRational::from_integer(sum.into()) <= *epsilon
        && defects
            .shift
            .iter()
            .all(|&s| BigRational::from_integer(s.into()) <= *epsilon)
        && defects
            .commutators
            .iter()
            .all(|c| c.exact_zero || (c.bound.converged && c.bound.upper <= eps));
    let dim = tower.stage.dim();
    let traces = tower
        .projections
        .iter()
        .map(|s| format_rational(&BigRational::new(s.len().into(), dim.into())))
        .collect();
    Ok(TowerReport {
        order: tower.order,
        levels: tower.levels.clone(),
        stage: tower.stage.factors().to_vec(),
        epsilon: format_rational(epsilon),
        defects,
        traces,
        passes,
    })
}
