//! Finite G-sets given by one permutation per generator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gset::word::{Presentation, Word};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationAction {
    presentation: Presentation,
    degree: usize,
    perms: Vec<Permutation>,
}

/// Serialized form: generator images in 1-based cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionSummary {
    pub degree: usize,
    pub generators: Vec<(String, String)>,
}

impl PermutationAction {
    /// Validates degrees and every defining relation.
    pub fn new(presentation: Presentation, perms: Vec<Permutation>) -> Result<Self> {
        if perms.len() != presentation.ngens() {
            return Err(Error::InvalidInput(format!(
                "{} generators but {} permutations",
                presentation.ngens(),
                perms.len()
            )));
        }
        let degree = match perms.first() {
            Some(p) => p.degree(),
            None => 1,
        };
        if let Some(p) = perms.iter().find(|p| p.degree() != degree) {
            return Err(Error::InvalidInput(format!(
                "permutation degrees differ: {degree} and {}",
                p.degree()
            )));
        }
        Self::with_degree(presentation, degree, perms)
    }

    /// As [`PermutationAction::new`], with an explicit degree so that
    /// generator-free presentations can act on more than one point.
    pub fn with_degree(presentation: Presentation, degree: usize, perms: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidInput("a G-set needs at least one point".into()));
        }
        if perms.len() != presentation.ngens() || perms.iter().any(|p| p.degree() != degree) {
            return Err(Error::InvalidInput(format!(
                "expected {} permutations of degree {degree}",
                presentation.ngens()
            )));
        }
        let action = PermutationAction {
            presentation,
            degree,
            perms,
        };
        for rel in action.presentation.relations() {
            if !action.evaluate(&rel.word).is_identity() {
                return Err(Error::RelationViolation {
                    relation: rel.text.clone(),
                });
            }
        }
        Ok(action)
    }

    /// Parses one cycle-notation string per generator.
    pub fn from_cycles(presentation: Presentation, degree: usize, cycles: &[&str]) -> Result<Self> {
        let perms = cycles
            .iter()
            .map(|c| Permutation::parse_cycles(degree, c))
            .collect::<Result<Vec<_>>>()?;
        Self::with_degree(presentation, degree, perms)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// The permutation of a word; the rightmost letter acts first.
    pub fn evaluate(&self, w: &Word) -> Permutation {
        w.letters().iter().fold(Permutation::identity(self.degree), |acc, l| {
            acc.compose(&self.perms[l.generator].pow(l.exponent))
        })
    }

    pub fn evaluate_text(&self, text: &str) -> Result<Permutation> {
        Ok(self.evaluate(&self.presentation.parse_word(text)?))
    }

    pub fn fixed_points(&self, w: &Word) -> usize {
        self.evaluate(w).fixed_points()
    }

    /// Diagonal action on `X × Y`, `X` index slowest.
    pub fn product(&self, other: &PermutationAction) -> Result<PermutationAction> {
        if self.presentation.ngens() != other.presentation.ngens() {
            return Err(Error::InvalidInput("product of actions of different groups".into()));
        }
        let perms = self.perms.iter().zip(&other.perms).map(|(a, b)| a.product(b)).collect();
        Self::with_degree(self.presentation.clone(), self.degree * other.degree, perms)
    }

    pub fn summary(&self) -> ActionSummary {
        ActionSummary {
            degree: self.degree,
            generators: self
                .presentation
                .generators()
                .iter()
                .cloned()
                .zip(self.perms.iter().map(Permutation::to_cycle_string))
                .collect(),
        }
    }
}

/// Validates `perms` as an action of `presentation`.
pub fn action_from_generators(presentation: Presentation, perms: Vec<Permutation>) -> Result<PermutationAction> {
    PermutationAction::new(presentation, perms)
}

/// `|{x : g·x = x}|`.
pub fn fixed_points(action: &PermutationAction, w: &Word) -> usize {
    action.fixed_points(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> Presentation {
        Presentation::new(vec!["a".into(), "b".into()], &["bab^-1 = a^-1"]).unwrap()
    }

    #[test]
    fn relation_violation_is_named() {
        let err = PermutationAction::from_cycles(klein(), 3, &["(1 2 3)", "()"]).unwrap_err();
        assert_eq!(
            err,
            Error::RelationViolation {
                relation: "bab^-1 = a^-1".into()
            }
        );
        // b = (2 3) inverts the 3-cycle.
        assert!(PermutationAction::from_cycles(klein(), 3, &["(1 2 3)", "(2 3)"]).is_ok());
    }

    #[test]
    fn commuting_cycles_and_trivial_group() {
        let z2 = Presentation::new(vec!["x".into(), "y".into()], &["x y x^-1 y^-1"]).unwrap();
        let act = PermutationAction::from_cycles(z2, 5, &["(1 2)", "(3 4 5)"]).unwrap();
        assert_eq!(act.fixed_points(&Word::identity()), 5);
        let x = act.presentation().parse_word("x").unwrap();
        assert_eq!(act.fixed_points(&x), 3);
        let trivial = Presentation::new(vec![], &[]).unwrap();
        let act = PermutationAction::new(trivial, vec![]).unwrap();
        assert_eq!(act.degree(), 1);
    }

    #[test]
    fn left_action_order() {
        let p = Presentation::new(vec!["s".into(), "t".into()], &[]).unwrap();
        let act = PermutationAction::from_cycles(p, 3, &["(1 2)", "(2 3)"]).unwrap();
        // s t: apply t first, so 2 ↦ 3 ↦ 3.
        let st = act.evaluate_text("s t").unwrap();
        assert_eq!(st.apply(1), 2);
        assert_eq!(act.evaluate_text("s^-1").unwrap(), act.evaluate_text("s").unwrap());
    }
}
