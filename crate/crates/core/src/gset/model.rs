//! Concrete groups with exact normal forms, and subgroups with membership
//! and factorisation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::FgAbelianGroup;
use crate::gset::word::{Letter, Presentation, Word};

/// Normal-form coordinates of a group element.
pub type ModelElement = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum GroupModel {
    /// Vector normal form `(free | torsion residues)`.
    Abelian { group: FgAbelianGroup, names: Vec<String> },
    /// `⟨a, b | b a b⁻¹ = a⁻¹⟩`, element `(m, n)` meaning `a^m b^n`.
    KleinBottle,
}

impl GroupModel {
    pub fn abelian(group: FgAbelianGroup, names: Vec<String>) -> Result<Self> {
        if names.len() != group.ngens() {
            return Err(Error::InvalidInput(format!(
                "{} needs {} generator names",
                group,
                group.ngens()
            )));
        }
        Ok(GroupModel::Abelian { group, names })
    }

    /// `Z^r` on generators `prefix1, ..., prefixr` (`prefix` alone when `r = 1`).
    pub fn free_abelian(rank: usize, prefix: &str) -> Self {
        let names = if rank == 1 {
            vec![prefix.to_string()]
        } else {
            (1..=rank).map(|i| format!("{prefix}{i}")).collect()
        };
        GroupModel::Abelian {
            group: FgAbelianGroup::free(rank),
            names,
        }
    }

    pub fn presentation(&self) -> Presentation {
        match self {
            GroupModel::KleinBottle => {
                Presentation::new(vec!["a".into(), "b".into()], &["b a b^-1 = a^-1"]).expect("static presentation")
            }
            GroupModel::Abelian { group, names } => {
                let mut rels = Vec::new();
                for i in 0..names.len() {
                    for j in i + 1..names.len() {
                        rels.push(format!("{} {} {}^-1 {}^-1", names[i], names[j], names[i], names[j]));
                    }
                }
                for (k, d) in group.torsion().iter().enumerate() {
                    rels.push(format!("{}^{d}", names[group.rank() + k]));
                }
                let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
                Presentation::new(names.clone(), &rels).expect("generated presentation")
            }
        }
    }

    pub fn ngens(&self) -> usize {
        match self {
            GroupModel::KleinBottle => 2,
            GroupModel::Abelian { group, .. } => group.ngens(),
        }
    }

    fn width(&self) -> usize {
        self.ngens()
    }

    pub fn identity(&self) -> ModelElement {
        vec![0; self.width()]
    }

    pub fn is_identity(&self, g: &[i64]) -> bool {
        g.iter().all(|&x| x == 0)
    }

    fn reduce(&self, mut g: ModelElement) -> ModelElement {
        if let GroupModel::Abelian { group, .. } = self {
            for (k, &d) in group.torsion().iter().enumerate() {
                let i = group.rank() + k;
                g[i] = g[i].rem_euclid(d as i64);
            }
        }
        g
    }

    pub fn generator_power(&self, generator: usize, exponent: i64) -> ModelElement {
        let mut g = self.identity();
        g[generator] = exponent;
        self.reduce(g)
    }

    pub fn multiply(&self, x: &[i64], y: &[i64]) -> ModelElement {
        match self {
            GroupModel::KleinBottle => {
                let sign = if x[1].rem_euclid(2) == 0 { 1 } else { -1 };
                vec![x[0] + sign * y[0], x[1] + y[1]]
            }
            GroupModel::Abelian { .. } => self.reduce(x.iter().zip(y).map(|(a, b)| a + b).collect()),
        }
    }

    pub fn inverse(&self, x: &[i64]) -> ModelElement {
        match self {
            GroupModel::KleinBottle => {
                let sign = if x[1].rem_euclid(2) == 0 { 1 } else { -1 };
                vec![-sign * x[0], -x[1]]
            }
            GroupModel::Abelian { .. } => self.reduce(x.iter().map(|a| -a).collect()),
        }
    }

    pub fn conjugate(&self, by: &[i64], x: &[i64]) -> ModelElement {
        // by⁻¹ · x · by
        self.multiply(&self.multiply(&self.inverse(by), x), by)
    }

    pub fn evaluate(&self, w: &Word) -> Result<ModelElement> {
        let mut acc = self.identity();
        for l in w.letters() {
            if l.generator >= self.ngens() {
                return Err(Error::UnmodeledWord(format!(
                    "generator index {} outside the model",
                    l.generator
                )));
            }
            acc = self.multiply(&acc, &self.generator_power(l.generator, l.exponent));
        }
        Ok(acc)
    }

    /// The normal-form word of an element.
    pub fn to_word(&self, x: &[i64]) -> Word {
        Word::from_letters(
            x.iter()
                .enumerate()
                .map(|(generator, &exponent)| Letter { generator, exponent }),
        )
    }

    pub fn format(&self, x: &[i64]) -> String {
        self.presentation().render(&self.to_word(x))
    }
}

/// A finite-index subgroup `H ≤ G` together with `H`'s own model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "subgroup", rename_all = "kebab-case")]
pub enum SubgroupModel {
    /// `H = G`.
    Whole { group: GroupModel },
    /// `N = ⟨a, b²⟩ ≅ Z²` in the Klein bottle group, generated by `x = a`,
    /// `y = b²`.
    KleinTranslations,
    /// `⊕ c_i Z` inside `Z^r`, generated by `y_i = c_i x_i`.
    DiagonalSublattice { multiples: Vec<i64> },
}

impl SubgroupModel {
    pub fn diagonal_sublattice(multiples: Vec<i64>) -> Result<Self> {
        if multiples.iter().any(|&c| c < 1) {
            return Err(Error::InvalidInput("sublattice multiples must be positive".into()));
        }
        Ok(SubgroupModel::DiagonalSublattice { multiples })
    }

    pub fn ambient(&self) -> GroupModel {
        match self {
            SubgroupModel::Whole { group } => group.clone(),
            SubgroupModel::KleinTranslations => GroupModel::KleinBottle,
            SubgroupModel::DiagonalSublattice { multiples } => GroupModel::free_abelian(multiples.len(), "x"),
        }
    }

    /// `H` as a group in its own right.
    pub fn sub_model(&self) -> GroupModel {
        match self {
            SubgroupModel::Whole { group } => group.clone(),
            SubgroupModel::KleinTranslations => GroupModel::Abelian {
                group: FgAbelianGroup::free(2),
                names: vec!["x".into(), "y".into()],
            },
            SubgroupModel::DiagonalSublattice { multiples } => GroupModel::free_abelian(multiples.len(), "y"),
        }
    }

    pub fn index(&self) -> usize {
        match self {
            SubgroupModel::Whole { .. } => 1,
            SubgroupModel::KleinTranslations => 2,
            SubgroupModel::DiagonalSublattice { multiples } => multiples.iter().map(|&c| c as usize).product(),
        }
    }

    /// Image in `G` of an element of `H`.
    pub fn include(&self, h: &[i64]) -> ModelElement {
        match self {
            SubgroupModel::Whole { .. } => h.to_vec(),
            SubgroupModel::KleinTranslations => vec![h[0], 2 * h[1]],
            SubgroupModel::DiagonalSublattice { multiples } => h.iter().zip(multiples).map(|(a, c)| a * c).collect(),
        }
    }

    /// `Some(h)` with `include(h) = g` when `g ∈ H`.
    pub fn factor(&self, g: &[i64]) -> Option<ModelElement> {
        match self {
            SubgroupModel::Whole { .. } => Some(g.to_vec()),
            SubgroupModel::KleinTranslations => (g[1].rem_euclid(2) == 0).then(|| vec![g[0], g[1] / 2]),
            SubgroupModel::DiagonalSublattice { multiples } => g
                .iter()
                .zip(multiples)
                .map(|(a, c)| (a.rem_euclid(*c) == 0).then(|| a / c))
                .collect(),
        }
    }

    /// A canonical transversal starting with the identity.
    pub fn standard_transversal(&self) -> Vec<ModelElement> {
        match self {
            SubgroupModel::Whole { group } => vec![group.identity()],
            SubgroupModel::KleinTranslations => vec![vec![0, 0], vec![0, 1]],
            SubgroupModel::DiagonalSublattice { multiples } => {
                let mut out = vec![Vec::new()];
                for &c in multiples {
                    out = out
                        .into_iter()
                        .flat_map(|prefix: Vec<i64>| {
                            (0..c).map(move |t| {
                                let mut v = prefix.clone();
                                v.push(t);
                                v
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }
}
