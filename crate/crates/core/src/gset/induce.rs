//! Induced actions `G ×_H X` built from a transversal and its cocycle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gset::action::PermutationAction;
use crate::gset::model::{GroupModel, ModelElement, SubgroupModel};
use crate::gset::word::Word;
use crate::perm::Permutation;
use crate::uhf::sequence::cantor_source;

/// `s · g_i = g_target · h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleEntry {
    pub target: usize,
    pub h: ModelElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupTransversal {
    subgroup: SubgroupModel,
    representatives: Vec<ModelElement>,
    /// Indexed by generator, then coset.
    table: Vec<Vec<CocycleEntry>>,
}

impl SubgroupTransversal {
    /// Computes the cocycle table from the group model.
    pub fn new(subgroup: SubgroupModel, representatives: Vec<ModelElement>) -> Result<Self> {
        let g = subgroup.ambient();
        check_representatives(&subgroup, &g, &representatives)?;
        let mut table = Vec::with_capacity(g.ngens());
        for s in 0..g.ngens() {
            let gen = g.generator_power(s, 1);
            let mut row = Vec::with_capacity(representatives.len());
            for gi in &representatives {
                let x = g.multiply(&gen, gi);
                let entry = representatives
                    .iter()
                    .enumerate()
                    .find_map(|(j, gj)| {
                        subgroup
                            .factor(&g.multiply(&g.inverse(gj), &x))
                            .map(|h| CocycleEntry { target: j, h })
                    })
                    .ok_or_else(|| Error::InconsistentCocycle(format!("{} lies in no listed coset", g.format(&x))))?;
                row.push(entry);
            }
            table.push(row);
        }
        Self::with_cocycle(subgroup, representatives, table)
    }

    /// The standard transversal of a built-in subgroup.
    pub fn standard(subgroup: SubgroupModel) -> Result<Self> {
        let reps = subgroup.standard_transversal();
        Self::new(subgroup, reps)
    }

    /// Validates a supplied cocycle table: bijective coset maps, entries that
    /// agree with the model, and relations that close up.
    pub fn with_cocycle(
        subgroup: SubgroupModel,
        representatives: Vec<ModelElement>,
        table: Vec<Vec<CocycleEntry>>,
    ) -> Result<Self> {
        let g = subgroup.ambient();
        check_representatives(&subgroup, &g, &representatives)?;
        let k = representatives.len();
        if table.len() != g.ngens() || table.iter().any(|row| row.len() != k) {
            return Err(Error::InconsistentCocycle(format!(
                "table must have {} rows of {k} entries",
                g.ngens()
            )));
        }
        let hm = subgroup.sub_model();
        for (s, row) in table.iter().enumerate() {
            let mut seen = vec![false; k];
            for (i, e) in row.iter().enumerate() {
                if e.target >= k || seen[e.target] {
                    return Err(Error::InconsistentCocycle(format!(
                        "generator {} does not permute the cosets",
                        s + 1
                    )));
                }
                seen[e.target] = true;
                if e.h.len() != hm.ngens() {
                    return Err(Error::InconsistentCocycle(format!(
                        "entry ({}, {}) has the wrong shape",
                        s + 1,
                        i + 1
                    )));
                }
                let lhs = g.multiply(&g.generator_power(s, 1), &representatives[i]);
                let rhs = g.multiply(&representatives[e.target], &subgroup.include(&e.h));
                if lhs != rhs {
                    return Err(Error::InconsistentCocycle(format!(
                        "s_{} g_{} ≠ g_{} h",
                        s + 1,
                        i + 1,
                        e.target + 1
                    )));
                }
            }
        }
        let t = SubgroupTransversal {
            subgroup,
            representatives,
            table,
        };
        for rel in g.presentation().relations() {
            for i in 0..k {
                let (j, h) = t.apply_word(&rel.word, i);
                if j != i || !hm.is_identity(&h) {
                    return Err(Error::InconsistentCocycle(format!(
                        "relation `{}` does not close up at coset {}",
                        rel.text,
                        i + 1
                    )));
                }
            }
        }
        Ok(t)
    }

    pub fn subgroup(&self) -> &SubgroupModel {
        &self.subgroup
    }

    pub fn index(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[ModelElement] {
        &self.representatives
    }

    pub fn labels(&self) -> Vec<String> {
        let g = self.subgroup.ambient();
        self.representatives.iter().map(|r| g.format(r)).collect()
    }

    pub fn table(&self) -> &[Vec<CocycleEntry>] {
        &self.table
    }

    /// `w · g_i = g_j · h`; letters act right to left.
    pub fn apply_word(&self, w: &Word, i: usize) -> (usize, ModelElement) {
        let hm = self.subgroup.sub_model();
        let mut coset = i;
        let mut acc = hm.identity();
        for l in w.letters().iter().rev() {
            let row = &self.table[l.generator];
            for _ in 0..l.exponent.unsigned_abs() {
                if l.exponent > 0 {
                    let e = &row[coset];
                    coset = e.target;
                    acc = hm.multiply(&e.h, &acc);
                } else {
                    // s g_j = g_i h  ⇒  s⁻¹ g_i = g_j h⁻¹.
                    let j = row.iter().position(|e| e.target == coset).expect("bijective row");
                    acc = hm.multiply(&hm.inverse(&row[j].h), &acc);
                    coset = j;
                }
            }
        }
        (coset, acc)
    }

    /// Pairs `(i, g_i⁻¹ g g_i)` for the cosets whose conjugate lies in `H`.
    pub fn conjugates_in_subgroup(&self, g: &Word) -> Result<Vec<(usize, ModelElement)>> {
        let model = self.subgroup.ambient();
        let x = model.evaluate(g)?;
        Ok(self
            .representatives
            .iter()
            .enumerate()
            .filter_map(|(i, gi)| self.subgroup.factor(&model.conjugate(gi, &x)).map(|h| (i, h)))
            .collect())
    }
}

fn check_representatives(sub: &SubgroupModel, g: &GroupModel, reps: &[ModelElement]) -> Result<()> {
    if reps.is_empty() {
        return Err(Error::InconsistentCocycle("empty transversal".into()));
    }
    if reps.iter().any(|r| r.len() != g.ngens()) {
        return Err(Error::InconsistentCocycle("representative of the wrong shape".into()));
    }
    if reps.len() != sub.index() {
        return Err(Error::InconsistentCocycle(format!(
            "{} representatives for a subgroup of index {}",
            reps.len(),
            sub.index()
        )));
    }
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[..i] {
            if sub.factor(&g.multiply(&g.inverse(b), a)).is_some() {
                return Err(Error::InconsistentCocycle(format!(
                    "{} and {} represent the same coset",
                    g.format(b),
                    g.format(a)
                )));
            }
        }
    }
    Ok(())
}

/// `H_g = { g_i⁻¹ g g_i : g_i⁻¹ g g_i ∈ H }`, as elements of `H`, without
/// repetition and in coset order.
pub fn conjugate_trace_set(transversal: &SubgroupTransversal, g: &Word) -> Result<Vec<ModelElement>> {
    let mut out: Vec<ModelElement> = Vec::new();
    for (_, h) in transversal.conjugates_in_subgroup(g)? {
        if !out.contains(&h) {
            out.push(h);
        }
    }
    Ok(out)
}

/// The induced action on `{1..k} × X`; point `(i, x)` has index `i·|X| + x`.
pub fn induce(transversal: &SubgroupTransversal, h_action: &PermutationAction) -> Result<PermutationAction> {
    let hm = transversal.subgroup.sub_model();
    if h_action.presentation().ngens() != hm.ngens() {
        return Err(Error::InvalidInput(format!(
            "H-action has {} generators, the subgroup model has {}",
            h_action.presentation().ngens(),
            hm.ngens()
        )));
    }
    let n = h_action.degree();
    let k = transversal.index();
    let g = transversal.subgroup.ambient();
    let mut perms = Vec::with_capacity(g.ngens());
    for row in &transversal.table {
        let mut images = vec![0usize; k * n];
        for (i, e) in row.iter().enumerate() {
            let hp = h_action.evaluate(&hm.to_word(&e.h));
            for x in 0..n {
                images[i * n + x] = e.target * n + hp.apply(x);
            }
        }
        perms.push(Permutation::from_images(images)?);
    }
    PermutationAction::with_degree(g.presentation(), k * n, perms)
}

/// `fix_Y(g) = Σ_{i : g_i⁻¹ g g_i ∈ H} fix_X(g_i⁻¹ g g_i)`.
pub fn induced_fixed_points(
    transversal: &SubgroupTransversal,
    h_action: &PermutationAction,
    g: &Word,
) -> Result<usize> {
    let hm = transversal.subgroup.sub_model();
    Ok(transversal
        .conjugates_in_subgroup(g)?
        .iter()
        .map(|(_, h)| h_action.fixed_points(&hm.to_word(h)))
        .sum())
}

/// Action of a free abelian group on `∏ Z/m_i` by translations: generator `k`
/// adds `shifts[k]`. Points are ordered with the first coordinate slowest.
pub fn translation_action(model: &GroupModel, moduli: &[u64], shifts: &[Vec<i64>]) -> Result<PermutationAction> {
    if shifts.len() != model.ngens() || shifts.iter().any(|s| s.len() != moduli.len()) {
        return Err(Error::InvalidInput(
            "one shift vector per generator, one entry per modulus".into(),
        ));
    }
    if moduli.contains(&0) {
        return Err(Error::InvalidInput("moduli must be positive".into()));
    }
    let degree: usize = moduli.iter().map(|&m| m as usize).product();
    let perms = shifts
        .iter()
        .map(|shift| {
            let images = (0..degree)
                .map(|mut idx| {
                    let mut coords = vec![0u64; moduli.len()];
                    for c in (0..moduli.len()).rev() {
                        coords[c] = idx as u64 % moduli[c];
                        idx /= moduli[c] as usize;
                    }
                    coords
                        .iter()
                        .zip(moduli)
                        .zip(shift)
                        .fold(0usize, |acc, ((&x, &m), &s)| {
                            acc * m as usize + (x as i64 + s).rem_euclid(m as i64) as usize
                        })
                })
                .collect();
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    PermutationAction::with_degree(model.presentation(), degree, perms)
}

/// Level `l` of the Klein-bottle family: `N = ⟨x, y⟩ ≅ Z²` acting on
/// `Z/p^l × Z/p^l` through the quotient maps.
pub fn klein_base_action(p: u64, level: u32) -> Result<PermutationAction> {
    let m = p
        .checked_pow(level)
        .ok_or_else(|| Error::OutOfRange(format!("{p}^{level} overflows")))?;
    let n = SubgroupModel::KleinTranslations.sub_model();
    translation_action(&n, &[m, m], &[vec![1, 0], vec![0, 1]])
}

/// `Y = (Z ⋊ Z) ×_N X_l`, a set of size `2p^{2l}`.
pub fn klein_induced(p: u64, level: u32) -> Result<PermutationAction> {
    let t = SubgroupTransversal::standard(SubgroupModel::KleinTranslations)?;
    induce(&t, &klein_base_action(p, level)?)
}

/// Level chosen for one nontrivial word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSelection {
    pub word: String,
    /// First level at which every element of `H_g` acts without fixed points.
    pub level: Option<usize>,
    pub conjugates_in_h: usize,
}

/// For each word, the first level `≤ horizon` at which all of `H_g` acts
/// freely on the family member `X_l`.
pub fn select_free_levels<F>(
    transversal: &SubgroupTransversal,
    family: F,
    words: &[Word],
    horizon: usize,
) -> Result<Vec<LevelSelection>>
where
    F: Fn(usize) -> Result<PermutationAction>,
{
    let g = transversal.subgroup.ambient();
    let hm = transversal.subgroup.sub_model();
    let pres = g.presentation();
    let mut members: Vec<PermutationAction> = Vec::new();
    let mut out = Vec::with_capacity(words.len());
    for w in words {
        let hg = conjugate_trace_set(transversal, w)?;
        let mut level = None;
        for l in 1..=horizon {
            if members.len() < l {
                members.push(family(l)?);
            }
            let x = &members[l - 1];
            if hg.iter().all(|h| x.fixed_points(&hm.to_word(h)) == 0) {
                level = Some(l);
                break;
            }
        }
        out.push(LevelSelection {
            word: pres.render(w),
            level,
            conjugates_in_h: hg.len(),
        });
    }
    Ok(out)
}

/// Interleaves the selected levels along the Cantor schedule: output
/// position `m` uses selection `cantor_source(m, #selections)`.
pub fn regrouped_levels(selections: &[LevelSelection], length: usize) -> Result<Vec<usize>> {
    let chosen: Vec<usize> = selections
        .iter()
        .map(|s| {
            s.level
                .ok_or_else(|| Error::CertificateFailure(format!("no free level found for `{}`", s.word)))
        })
        .collect::<Result<_>>()?;
    if chosen.is_empty() {
        return Ok(Vec::new());
    }
    Ok((1..=length)
        .map(|m| chosen[cantor_source(m, Some(chosen.len())) - 1])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein_t() -> SubgroupTransversal {
        SubgroupTransversal::standard(SubgroupModel::KleinTranslations).unwrap()
    }

    #[test]
    fn klein_cocycle() {
        let t = klein_t();
        // a·1 = 1·x, a·b = b·x⁻¹, b·1 = b·1, b·b = 1·y.
        assert_eq!(
            t.table()[0][0],
            CocycleEntry {
                target: 0,
                h: vec![1, 0]
            }
        );
        assert_eq!(
            t.table()[0][1],
            CocycleEntry {
                target: 1,
                h: vec![-1, 0]
            }
        );
        assert_eq!(
            t.table()[1][0],
            CocycleEntry {
                target: 1,
                h: vec![0, 0]
            }
        );
        assert_eq!(
            t.table()[1][1],
            CocycleEntry {
                target: 0,
                h: vec![0, 1]
            }
        );
        assert_eq!(t.labels(), vec!["1".to_string(), "b".to_string()]);
    }

    #[test]
    fn trace_sets() {
        let t = klein_t();
        let p = GroupModel::KleinBottle.presentation();
        let a = p.parse_word("a").unwrap();
        assert_eq!(conjugate_trace_set(&t, &a).unwrap(), vec![vec![1, 0], vec![-1, 0]]);
        let b = p.parse_word("b").unwrap();
        assert!(conjugate_trace_set(&t, &b).unwrap().is_empty());
        assert_eq!(conjugate_trace_set(&t, &Word::identity()).unwrap(), vec![vec![0, 0]]);
    }

    #[test]
    fn klein_sizes_and_identity() {
        let y = klein_induced(3, 1).unwrap();
        assert_eq!(y.degree(), 18);
        let t = klein_t();
        let x = klein_base_action(3, 1).unwrap();
        for w in y.presentation().words_up_to(4) {
            assert_eq!(y.fixed_points(&w), induced_fixed_points(&t, &x, &w).unwrap());
        }
    }

    #[test]
    fn whole_group_induction_is_identity() {
        let g = GroupModel::free_abelian(2, "x");
        let x = translation_action(&g, &[3, 2], &[vec![1, 0], vec![0, 1]]).unwrap();
        let t = SubgroupTransversal::standard(SubgroupModel::Whole { group: g }).unwrap();
        let y = induce(&t, &x).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn bad_transversals() {
        let sub = SubgroupModel::KleinTranslations;
        assert!(SubgroupTransversal::new(sub.clone(), vec![vec![0, 0], vec![0, 2]]).is_err());
        assert!(SubgroupTransversal::new(sub.clone(), vec![vec![0, 0]]).is_err());
        let t = klein_t();
        let mut table = t.table().to_vec();
        table[0][1].h = vec![1, 0];
        assert!(matches!(
            SubgroupTransversal::with_cocycle(sub, t.representatives().to_vec(), table),
            Err(Error::InconsistentCocycle(_))
        ));
    }

    #[test]
    fn regrouping_picks_free_levels() {
        let t = klein_t();
        let p = GroupModel::KleinBottle.presentation();
        let words: Vec<Word> = ["a^3", "b", "b^2"].iter().map(|w| p.parse_word(w).unwrap()).collect();
        let sel = select_free_levels(&t, |l| klein_base_action(3, l as u32), &words, 4).unwrap();
        let levels: Vec<Option<usize>> = sel.iter().map(|s| s.level).collect();
        assert_eq!(levels, vec![Some(2), Some(1), Some(1)]);
        assert_eq!(regrouped_levels(&sel, 6).unwrap(), vec![2, 2, 1, 2, 1, 1]);
    }
}
