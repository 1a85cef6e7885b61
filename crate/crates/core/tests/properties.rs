mod common;

use common::{abelian_action, all_actions, is_unimodular};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use uhfbench::groups::{
    diagonal_resequence, smith_normal_form, trivial_intersection, CoordinateRule, EmbeddingPattern, FgAbelianGroup,
    IntMatrix, IntersectionVerdict,
};
use uhfbench::gset::{
    conjugate_trace_set, induce, klein_base_action, klein_induced, translation_action, GroupModel, SubgroupModel,
    SubgroupTransversal,
};
use uhfbench::ktheory::{bratteli_step, characters, k_invariants};
use uhfbench::rokhlin::{alpha_permutation, outerness_witness, tower_synthesize, tower_verify};
use uhfbench::uhf::{
    ad, embed_stage, normalized_trace, op_norm_bracket, perm_unitary, FactorRule, FactorSequence, RatMatrix, Stage,
    StageElement, DEFAULT_STAGE_CAP,
};
use uhfbench::Permutation;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn stage(factors: &[u64]) -> Stage {
    Stage::new(factors.to_vec(), DEFAULT_STAGE_CAP).unwrap()
}

fn element(s: &Stage, entries: &[(i64, i64)]) -> StageElement {
    let d = s.dim();
    let data = (0..d * d).map(|i| {
        let (n, q) = entries[i % entries.len()];
        rat(n + i as i64 % 3, q)
    });
    StageElement::new(s.clone(), RatMatrix::from_rows(d, data.collect())).unwrap()
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn entries() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), 1..8)
}

/// Patterns whose coordinates separate points of the generating box.
fn injective_patterns() -> Vec<EmbeddingPattern> {
    let factorial = || FactorSequence::new(FactorRule::Factorial).unwrap();
    vec![
        EmbeddingPattern::new(
            FgAbelianGroup::free(1),
            vec![],
            vec![CoordinateRule::FactorialMod],
            factorial(),
        )
        .unwrap(),
        EmbeddingPattern::diagonal(FgAbelianGroup::new(0, vec![6]).unwrap(), factorial()).unwrap(),
        EmbeddingPattern::diagonal(
            FgAbelianGroup::new(0, vec![2]).unwrap(),
            FactorSequence::constant(2).unwrap(),
        )
        .unwrap(),
        EmbeddingPattern::new(
            FgAbelianGroup::trivial(),
            vec![3],
            vec![CoordinateRule::PadicDigits { prime: 3 }],
            FactorSequence::new(FactorRule::PrimePower { prime: 3 }).unwrap(),
        )
        .unwrap(),
    ]
}

fn all_patterns() -> Vec<EmbeddingPattern> {
    let mut v = injective_patterns();
    v.push(
        EmbeddingPattern::new(
            FgAbelianGroup::new(2, vec![4]).unwrap(),
            vec![],
            vec![
                CoordinateRule::QuotientMod { scale: 1 },
                CoordinateRule::QuotientMod { scale: 3 },
                CoordinateRule::FiniteSupport { entries: vec![(3, 1)] },
            ],
            FactorSequence::new(FactorRule::Linear).unwrap(),
        )
        .unwrap(),
    );
    v.push(
        EmbeddingPattern::new(
            FgAbelianGroup::free(1),
            vec![],
            vec![CoordinateRule::CustomTable {
                values: vec![1, 2, 0, 5, 1, 7],
            }],
            FactorSequence::constant(12).unwrap(),
        )
        .unwrap(),
    );
    v
}

fn random_element(p: &EmbeddingPattern, seed: &[i64]) -> uhfbench::groups::GroupElement {
    let g = p.group();
    let mut it = seed.iter().cycle();
    let free = (0..g.rank()).map(|_| *it.next().unwrap()).collect();
    let tors = g
        .torsion()
        .iter()
        .map(|&d| it.next().unwrap().rem_euclid(d as i64))
        .collect();
    let local = p
        .local_primes()
        .iter()
        .map(|_| Rational64::new(*it.next().unwrap(), 2))
        .collect();
    p.element(free, tors, local).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_is_a_unimodular_diagonalisation(
        rows in 1usize..=6,
        cols in 1usize..=6,
        data in prop::collection::vec(-20i64..=20, 36),
    ) {
        let m = IntMatrix::from_rows(cols, &(0..rows).map(|i| data[i * cols..(i + 1) * cols].to_vec()).collect::<Vec<_>>());
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(cols));
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|x| *x >= BigInt::zero()));
        for w in f.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
    }

    #[test]
    fn coordinates_are_additive(which in 0usize..6, a in prop::collection::vec(-30i64..=30, 4), b in prop::collection::vec(-30i64..=30, 4)) {
        let p = &all_patterns()[which];
        let (g, h) = (random_element(p, &a), random_element(p, &b));
        let top = p.known_levels().unwrap_or(6).min(6);
        for l in 1..=top {
            let n = p.modulus(l).unwrap();
            let lhs = p.coordinate(&p.add(&g, &h), l).unwrap();
            let rhs = p.coordinate(&g, l).unwrap() + p.coordinate(&h, l).unwrap();
            prop_assert!((lhs - rhs).is_multiple_of(&n), "level {}", l);
        }
    }

    #[test]
    fn perm_unitary_trace_counts_fixed_points(sigma in (2usize..=6).prop_flat_map(perm_strategy), pos in 1usize..=3) {
        let n = sigma.degree() as u64;
        let factors: Vec<u64> = (1..=3).map(|i| if i == pos { n } else { 2 }).collect();
        let s = stage(&factors);
        let u = perm_unitary(&sigma, pos, &s).unwrap();
        prop_assert_eq!(normalized_trace(&u), rat(sigma.fixed_points() as i64, n as i64));
        prop_assert!(op_norm_bracket(&u, 1e-10).unwrap().contains(1.0));
    }

    #[test]
    fn embed_stage_is_a_unital_trace_preserving_map(x in entries(), y in entries()) {
        let (small, big) = (stage(&[2, 3]), stage(&[2, 3, 4]));
        let (a, b) = (element(&small, &x), element(&small, &y));
        let e = |z: &StageElement| embed_stage(z, &big).unwrap();
        prop_assert_eq!(e(&a.mul(&b).unwrap()), e(&a).mul(&e(&b)).unwrap());
        prop_assert_eq!(e(&a.adjoint()), e(&a).adjoint());
        prop_assert_eq!(normalized_trace(&e(&a)), normalized_trace(&a));
        prop_assert!(e(&StageElement::identity(&small)).is_identity());
    }

    #[test]
    fn ad_is_multiplicative_and_trace_preserving(sigma in perm_strategy(6), x in entries(), y in entries()) {
        let s = stage(&[6]);
        let u = StageElement::permutation(&s, &sigma).unwrap();
        let (a, b) = (element(&s, &x), element(&s, &y));
        prop_assert_eq!(ad(&u, &a.mul(&b).unwrap()).unwrap(), ad(&u, &a).unwrap().mul(&ad(&u, &b).unwrap()).unwrap());
        prop_assert_eq!(normalized_trace(&ad(&u, &a).unwrap()), normalized_trace(&a));
    }

    #[test]
    fn projections_have_norm_one(mask in prop::collection::vec(any::<bool>(), 12)) {
        let idx: Vec<usize> = (0..12).filter(|&i| mask[i]).collect();
        prop_assume!(!idx.is_empty());
        let p = StageElement::diagonal_projection(&stage(&[3, 4]), &idx).unwrap();
        prop_assert!(op_norm_bracket(&p, 1e-10).unwrap().contains(1.0));
    }

    #[test]
    fn induction_multiplies_degree_and_keeps_relations(c in 1i64..=4, m in 2u64..=5, shift in 1i64..=4) {
        let sub = SubgroupModel::diagonal_sublattice(vec![c]).unwrap();
        let t = SubgroupTransversal::standard(sub.clone()).unwrap();
        let x = translation_action(&sub.sub_model(), &[m], &[vec![shift]]).unwrap();
        let y = induce(&t, &x).unwrap();
        prop_assert_eq!(y.degree(), t.index() * x.degree());
        prop_assert_eq!(t.index() as i64, c);
        for rel in y.presentation().relations() {
            prop_assert!(y.evaluate(&rel.word).is_identity());
        }
        for w in y.presentation().words_up_to(3) {
            let u = StageElement::permutation(&stage(&[y.degree() as u64]), &y.evaluate(&w));
            if let Ok(u) = u {
                prop_assert_eq!(normalized_trace(&u), rat(y.fixed_points(&w) as i64, y.degree() as i64));
            }
        }
    }

    #[test]
    fn towers_satisfy_exact_identities(case in 0usize..4, base in 0usize..=1) {
        let (order, seq) = [
            (2u64, FactorSequence::constant(4).unwrap()),
            (3, FactorSequence::constant(6).unwrap()),
            (4, FactorSequence::constant(4).unwrap()),
            (6, FactorSequence::new(FactorRule::Periodic { values: vec![2, 3] }).unwrap()),
        ][case].clone();
        let p = EmbeddingPattern::diagonal(FgAbelianGroup::new(0, vec![order]).unwrap(), seq).unwrap();
        let g = p.generators()[0].clone();
        let f: Vec<StageElement> = if base == 0 {
            vec![]
        } else {
            let s = p.sequence().stage(1, DEFAULT_STAGE_CAP).unwrap();
            (1..s.dim()).map(|j| StageElement::matrix_unit(&s, 0, j).unwrap()).collect()
        };
        let t = tower_synthesize(&p, &g, &f, 8, DEFAULT_STAGE_CAP).unwrap();
        let k = t.order;
        prop_assert_eq!(k as u64, order);
        let alpha = alpha_permutation(&p, &g, &t.stage).unwrap();
        let floors: Vec<StageElement> = (0..k).map(|i| t.projection(i).unwrap()).collect();
        let sum = floors.iter().fold(StageElement::zero(&t.stage), |acc, q| acc.add(q).unwrap());
        prop_assert!(sum.is_identity());
        for i in 0..k {
            for j in 0..k {
                let prod = floors[i].mul(&floors[j]).unwrap();
                if i == j { prop_assert_eq!(&prod, &floors[i]); } else { prop_assert!(prod.is_zero()); }
            }
            prop_assert_eq!(floors[i].conjugate_by_permutation(&alpha).unwrap(), floors[(i + 1) % k].clone());
            for a in &f {
                prop_assert!(floors[i].commutator(&embed_stage(a, &t.stage).unwrap()).unwrap().is_zero());
            }
        }
        // The image of g is fixed-point-free at each chosen level iff its
        // permutation unitary has trace zero.
        for &l in &t.levels {
            let n = p.modulus(l).unwrap().to_usize().unwrap();
            let c = p.coordinate(&g, l).unwrap().to_usize().unwrap();
            let rot = Permutation::rotation(n, c);
            let u = StageElement::permutation(&stage(&[n as u64]), &rot).unwrap();
            prop_assert_eq!(rot.fixed_points() == 0, normalized_trace(&u).is_zero());
        }
        let report = tower_verify(&t, &g, &p, &f, &rat(1, 1000)).unwrap();
        prop_assert!(report.passes);
    }

    #[test]
    fn witness_pieces_sum_to_p(x in entries(), mask in prop::collection::vec(any::<bool>(), 2)) {
        let p = EmbeddingPattern::new(
            FgAbelianGroup::free(1),
            vec![],
            vec![CoordinateRule::FactorialMod],
            FactorSequence::new(FactorRule::Factorial).unwrap(),
        ).unwrap();
        let s1 = p.sequence().stage(1, DEFAULT_STAGE_CAP).unwrap();
        let idx: Vec<usize> = (0..2).filter(|&i| mask[i]).collect();
        prop_assume!(!idx.is_empty());
        let proj = StageElement::diagonal_projection(&s1, &idx).unwrap();
        let a = element(&s1, &x);
        let bound = a.matrix().entries().iter().fold(BigRational::zero(), |acc, e| acc + num_traits::Signed::abs(e));
        let a = if bound > BigRational::one() { a.scale(&(BigRational::one() / bound)) } else { a };
        let g = p.element(vec![1], vec![], vec![]).unwrap();
        let w = outerness_witness(&a, &proj, &g, &p, &rat(1, 100), 2, DEFAULT_STAGE_CAP).unwrap();
        prop_assert!(w.sums_to_p);
        let total = w.pieces.iter().fold(StageElement::zero(&w.pieces[0].stage().clone()), |acc, q| acc.add(q).unwrap());
        prop_assert_eq!(total, embed_stage(&proj, w.pieces[0].stage()).unwrap());
    }
}

#[test]
fn resequencing_never_creates_counterexamples() {
    for p in injective_patterns() {
        let mut q = p.clone();
        for _ in 0..2 {
            q = diagonal_resequence(&q);
            let v = trivial_intersection(&q, 64, 3).unwrap();
            assert!(!matches!(v, IntersectionVerdict::Counterexample { .. }), "{v:?}");
        }
    }
}

#[test]
fn powers_of_cycles_are_semiregular() {
    for n in 1..=30usize {
        let c = Permutation::rotation(n, 1);
        for s in 0..n as i64 {
            let orbits = c.pow(s).orbits();
            let len = n / n.gcd(&(s as usize));
            assert!(orbits.iter().all(|o| o.len() == len), "n = {n}, power {s}");
        }
    }
}

#[test]
fn klein_fixed_points_vanish_when_conjugates_act_freely() {
    let model = GroupModel::KleinBottle;
    let t = SubgroupTransversal::standard(SubgroupModel::KleinTranslations).unwrap();
    let hm = SubgroupModel::KleinTranslations.sub_model();
    for p in [2u64, 3, 5] {
        for l in 1..=2u32 {
            let x = klein_base_action(p, l).unwrap();
            let y = klein_induced(p, l).unwrap();
            assert_eq!(y.degree() as u64, 2 * p.pow(2 * l));
            for w in model.presentation().words_up_to(4) {
                if model.is_identity(&model.evaluate(&w).unwrap()) {
                    continue;
                }
                let hg = conjugate_trace_set(&t, &w).unwrap();
                if hg.iter().all(|h| x.fixed_points(&hm.to_word(h)) == 0) {
                    assert_eq!(y.fixed_points(&w), 0, "p = {p}, l = {l}");
                }
            }
        }
    }
}

#[test]
fn bratteli_steps_are_circulant_with_column_sums_n() {
    for &orders in common::SMALL_GROUPS {
        let table = characters(orders).unwrap();
        let k = table.len();
        for n in 1..=5 {
            for gens in all_actions(orders, n) {
                let step = bratteli_step(&table, &abelian_action(orders, n, gens)).unwrap();
                for source in 0..k {
                    let col: u64 = step.iter().map(|row| row[source].to_u64().unwrap()).sum();
                    assert_eq!(col, n as u64);
                }
                for psi in 0..k {
                    for a in 0..k {
                        for b in 0..k {
                            assert_eq!(step[table.multiply(a, psi)][table.multiply(b, psi)], step[a][b]);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn k_ranks_double_with_each_generator() {
    for r in 1..=12 {
        let inv = k_invariants(&FgAbelianGroup::free(r), true);
        let total = inv.k0.rank().unwrap() + inv.k1.rank().unwrap();
        assert_eq!(total, num_bigint::BigUint::one() << r);
    }
}
