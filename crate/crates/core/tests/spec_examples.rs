//! Frozen values for the documented worked examples, each checked against an
//! independent computation where one is cheap.

mod common;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uhfbench::cli::perturbed_element;
use uhfbench::groups::{
    canonical_decomposition, smith_normal_form, trivial_intersection, CoordinateRule, EmbeddingPattern, FgAbelianGroup,
    IntMatrix,
};
use uhfbench::gset::{
    conjugate_trace_set, induced_fixed_points, klein_base_action, klein_induced, GroupModel, PermutationAction,
    Presentation, SubgroupModel, SubgroupTransversal,
};
use uhfbench::ktheory::{
    bratteli_step, characters, crossed_product_diagram, direct_limit_invariants, entry, k_invariants,
    perm_character_multiplicity, DirectLimitSystem, MapSchedule,
};
use uhfbench::rokhlin::{
    outerness_witness, rokhlin_classify, tower_synthesize, tower_verify, vanishing_trace_profile, KleinFamily,
    RokhlinVerdict, DEFAULT_POWER_BOUND,
};
use uhfbench::uhf::{
    normalized_trace, perm_unitary, stage_dim, supernatural_of, FactorRule, FactorSequence, RatMatrix, Stage,
    StageElement, DEFAULT_STAGE_CAP,
};
use uhfbench::Permutation;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn factorial_z() -> EmbeddingPattern {
    EmbeddingPattern::new(
        FgAbelianGroup::free(1),
        vec![],
        vec![CoordinateRule::FactorialMod],
        FactorSequence::new(FactorRule::Factorial).unwrap(),
    )
    .unwrap()
}

fn cyclic_into(order: u64, seq: FactorSequence) -> EmbeddingPattern {
    EmbeddingPattern::diagonal(FgAbelianGroup::new(0, vec![order]).unwrap(), seq).unwrap()
}

#[test]
fn linear_sequence_is_universal() {
    let seq = FactorSequence::new(FactorRule::Linear).unwrap();
    assert!(supernatural_of(&seq, 10_000).unwrap().is_universal());
    for p in uhfbench::arith::primes_up_to(50) {
        let hits = (1..=10_000u64).filter(|l| (l + 1) % p == 0).count();
        assert!(hits >= (10_000 / p) as usize - 1, "p = {p}");
    }
}

#[test]
fn factorial_stage_dimension() {
    let seq = FactorSequence::new(FactorRule::Factorial).unwrap();
    assert_eq!(stage_dim(&seq, 3).unwrap(), BigUint::from(288u32));
    let direct: BigUint = (1..=3).map(|l| uhfbench::arith::factorial(l + 1)).product();
    assert_eq!(stage_dim(&seq, 3).unwrap(), direct);
}

#[test]
fn transposition_trace() {
    let s = Stage::new(vec![3], DEFAULT_STAGE_CAP).unwrap();
    let sigma = Permutation::parse_cycles(3, "(1 2)").unwrap();
    let u = perm_unitary(&sigma, 1, &s).unwrap();
    let brute = (0..3).filter(|&i| u.matrix().get(i, i) == &rat(1, 1)).count() as i64;
    assert_eq!(normalized_trace(&u), rat(1, 3));
    assert_eq!(normalized_trace(&u), rat(brute, 3));
}

#[test]
fn tensor_of_permutation_unitaries_multiplies_traces() {
    let s3 = Stage::new(vec![3], DEFAULT_STAGE_CAP).unwrap();
    let s4 = Stage::new(vec![4], DEFAULT_STAGE_CAP).unwrap();
    let a = perm_unitary(&Permutation::parse_cycles(3, "(1 2)").unwrap(), 1, &s3).unwrap();
    let b = perm_unitary(&Permutation::parse_cycles(4, "(1 2 3)").unwrap(), 1, &s4).unwrap();
    let t = a.tensor(&b, DEFAULT_STAGE_CAP).unwrap();
    assert_eq!(normalized_trace(&t), normalized_trace(&a) * normalized_trace(&b));
    assert_eq!(normalized_trace(&t), rat(1, 12));
}

#[test]
fn smith_example() {
    let m = IntMatrix::from_rows(2, &[vec![2, 4], vec![6, 8]]);
    let s = smith_normal_form(&m);
    assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
    assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    assert_eq!(common::bareiss_det(&m), BigInt::from(-8));
}

#[test]
fn relation_two_zero_gives_z_plus_z2() {
    let d = canonical_decomposition(&IntMatrix::from_rows(2, &[vec![2, 0]]), 2).unwrap();
    assert_eq!(d.group, FgAbelianGroup::new(1, vec![2]).unwrap());
}

#[test]
fn padic_half_mod_nine() {
    let p = EmbeddingPattern::new(
        FgAbelianGroup::trivial(),
        vec![3],
        vec![CoordinateRule::PadicDigits { prime: 3 }],
        FactorSequence::new(FactorRule::PrimePower { prime: 3 }).unwrap(),
    )
    .unwrap();
    assert_eq!(p.modulus(2).unwrap(), BigInt::from(9));
    let half = p.element(vec![], vec![], vec![Rational64::new(1, 2)]).unwrap();
    let c = p.coordinate(&half, 2).unwrap();
    assert_eq!(c, BigInt::from(5));
    assert_eq!((c * 2) % 9, BigInt::from(1));
}

#[test]
fn trivial_intersection_examples() {
    assert_eq!(
        trivial_intersection(&factorial_z(), 64, 10).unwrap().label(),
        "ProvenTrivial"
    );
    let z2 = cyclic_into(2, FactorSequence::constant(2).unwrap());
    assert_eq!(trivial_intersection(&z2, 64, 10).unwrap().label(), "ProvenTrivial");
}

#[test]
fn product_action_multiplies_fixed_points() {
    let pres = Presentation::new(vec!["g".into(), "h".into()], &[]).unwrap();
    let words = pres.words_up_to(2);
    let perms3 = common::all_perms(3);
    for a in &perms3 {
        for b in &perms3 {
            let x = PermutationAction::new(pres.clone(), vec![a.clone(), b.clone()]).unwrap();
            let y = PermutationAction::new(pres.clone(), vec![b.clone(), a.clone()]).unwrap();
            let xy = x.product(&y).unwrap();
            for w in &words {
                let brute = (0..3)
                    .flat_map(|i| (0..3).map(move |j| (i, j)))
                    .filter(|&(i, j)| x.evaluate(w).apply(i) == i && y.evaluate(w).apply(j) == j)
                    .count();
                assert_eq!(xy.fixed_points(w), brute);
                assert_eq!(xy.fixed_points(w), x.fixed_points(w) * y.fixed_points(w));
            }
        }
    }
}

#[test]
fn klein_conjugate_sets() {
    let t = SubgroupTransversal::standard(SubgroupModel::KleinTranslations).unwrap();
    let pres = GroupModel::KleinBottle.presentation();
    let mut ha = conjugate_trace_set(&t, &pres.parse_word("a").unwrap()).unwrap();
    ha.sort();
    assert_eq!(ha, vec![vec![-1, 0], vec![1, 0]]);
    let hb = conjugate_trace_set(&t, &pres.parse_word("b").unwrap()).unwrap();
    assert!(hb.is_empty());
}

#[test]
fn klein_induced_set_has_eighteen_points_and_formula_matches() {
    let y = klein_induced(3, 1).unwrap();
    assert_eq!(y.degree(), 18);
    let t = SubgroupTransversal::standard(SubgroupModel::KleinTranslations).unwrap();
    let x = klein_base_action(3, 1).unwrap();
    assert_eq!(x.degree(), 9);
    for w in GroupModel::KleinBottle.presentation().words_up_to(4) {
        let brute = (0..18).filter(|&i| y.evaluate(&w).apply(i) == i).count();
        assert_eq!(induced_fixed_points(&t, &x, &w).unwrap(), brute);
    }
}

#[test]
fn vanishing_profiles() {
    let p = factorial_z();
    let g = p.element(vec![1], vec![], vec![]).unwrap();
    let prof = vanishing_trace_profile(&p, &g, 8).unwrap();
    assert_eq!(prof.zero_levels, (1..=8).collect::<Vec<_>>());
    assert_eq!(prof.verdict.label(), "ProvenInfinite");

    let fam = KleinFamily::new(3).unwrap();
    let b = vec![0, 1];
    let prof = vanishing_trace_profile(&fam, &b, 5).unwrap();
    assert_eq!(prof.zero_levels, (1..=5).collect::<Vec<_>>());
    for l in 1..=2 {
        assert_eq!(fam.brute_force_fixed_points(&b, l).unwrap(), 0);
    }
}

#[test]
fn staged_witness_is_exactly_zero() {
    let p = factorial_z();
    let g = p.element(vec![1], vec![], vec![]).unwrap();
    let s1 = p.sequence().stage(1, DEFAULT_STAGE_CAP).unwrap();
    let a = StageElement::new(
        s1.clone(),
        RatMatrix::from_rows(2, vec![rat(1, 3), rat(1, 4), rat(-1, 5), rat(0, 1)]),
    )
    .unwrap();
    let w = outerness_witness(
        &a,
        &StageElement::identity(&s1),
        &g,
        &p,
        &rat(1, 100),
        2,
        DEFAULT_STAGE_CAP,
    )
    .unwrap();
    assert_eq!(w.order, 6);
    assert!(w.exact_zero.iter().all(|&z| z));
    assert_eq!(w.achieved, 0.0);
    assert!(w.sums_to_p);
}

#[test]
fn perturbed_witness_within_thirteen_epsilon() {
    let p = factorial_z();
    let g = p.element(vec![1], vec![], vec![]).unwrap();
    let eps = rat(1, 100);
    let s1 = p.sequence().stage(1, DEFAULT_STAGE_CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let (a, d) = perturbed_element(&mut rng, &p, &eps, 1, 2, DEFAULT_STAGE_CAP).unwrap();
        assert!(d <= eps);
        let w = outerness_witness(&a, &StageElement::identity(&s1), &g, &p, &eps, 2, DEFAULT_STAGE_CAP).unwrap();
        assert!(w.certified, "achieved {}", w.achieved);
        assert!(w.achieved <= 0.13);
    }
}

#[test]
fn z4_two_tower_and_six_tower() {
    let p = cyclic_into(4, FactorSequence::constant(4).unwrap());
    let g = p.element(vec![], vec![2], vec![]).unwrap();
    let t = tower_synthesize(&p, &g, &[], 8, DEFAULT_STAGE_CAP).unwrap();
    assert_eq!(t.order, 2);
    for i in 0..2 {
        assert_eq!(normalized_trace(&t.projection(i).unwrap()), rat(1, 2));
    }

    let p6 = cyclic_into(
        6,
        FactorSequence::new(FactorRule::Periodic { values: vec![2, 3] }).unwrap(),
    );
    let g6 = p6.generators()[0].clone();
    let t6 = tower_synthesize(&p6, &g6, &[], 8, DEFAULT_STAGE_CAP).unwrap();
    assert_eq!(t6.order, 6);
    assert!(t6.stage.dim() <= 36);
    assert!(t6.projections.iter().all(|s| s.len() * 6 == t6.stage.dim()));
    let report = tower_verify(&t6, &g6, &p6, &[], &rat(1, 1000)).unwrap();
    assert!(report.passes);
    assert_eq!(report.defects.sum, "0");
    assert!(report.defects.shift.iter().all(|&s| s == 0));
}

#[test]
fn perturbed_test_elements_have_small_commutators() {
    let p = cyclic_into(4, FactorSequence::constant(4).unwrap());
    let g = p.element(vec![], vec![2], vec![]).unwrap();
    let s1 = p.sequence().stage(1, DEFAULT_STAGE_CAP).unwrap();
    let f = StageElement::matrix_unit(&s1, 0, 1).unwrap();
    let t = tower_synthesize(&p, &g, &[f], 8, DEFAULT_STAGE_CAP).unwrap();
    let eps = rat(1, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..4 {
        // a = b + δ with b staged at the base and Σ|δ_ij| = ε, so ‖a − b‖ ≤ ε.
        let (a, d) = perturbed_element(&mut rng, &p, &eps, 1, t.stage.len(), DEFAULT_STAGE_CAP).unwrap();
        assert!(d <= eps);
        let report = tower_verify(&t, &g, &p, &[a], &eps).unwrap();
        assert!(
            report.defects.max_commutator() <= 0.02 + 1e-9,
            "{}",
            report.defects.max_commutator()
        );
    }
}

#[test]
fn rokhlin_examples() {
    let p = factorial_z();
    let g = p.generators()[0].clone();
    match rokhlin_classify(&p, &g, 64, DEFAULT_POWER_BOUND).unwrap() {
        RokhlinVerdict::InfiniteOrderUniformlyOuter { certificates } => {
            assert_eq!(
                certificates.iter().map(|c| c.multiple).collect::<Vec<_>>(),
                (1..=10).collect::<Vec<_>>()
            )
        }
        v => panic!("{v:?}"),
    }
    let z2 = cyclic_into(2, FactorSequence::constant(2).unwrap());
    let v = rokhlin_classify(&z2, &z2.generators()[0], 64, DEFAULT_POWER_BOUND).unwrap();
    assert!(
        matches!(v, RokhlinVerdict::FiniteOrderRokhlin { order: 2, .. }),
        "{v:?}"
    );
}

#[test]
fn character_and_step_examples() {
    let t = characters(&[2, 2]).unwrap();
    assert_eq!(t.len(), 4);
    assert!((0..4).all(|c| t.is_real(c)));

    let z2 = characters(&[2]).unwrap();
    let pres = || Presentation::new(vec!["g".into()], &["g^2"]).unwrap();
    let regular = PermutationAction::from_cycles(pres(), 2, &["(1 2)"]).unwrap();
    let three = PermutationAction::from_cycles(pres(), 3, &["(1 2)"]).unwrap();
    let trivial = PermutationAction::from_cycles(pres(), 5, &["()"]).unwrap();
    let m = |a: &PermutationAction, psi| perm_character_multiplicity(a, &z2, psi).unwrap();
    assert_eq!((m(&regular, 0), m(&regular, 1)), (BigInt::from(1), BigInt::from(1)));
    assert_eq!(
        (m(&three, 0), m(&three, 1)),
        (BigInt::from((3 + 1) / 2), BigInt::from((3 - 1) / 2))
    );

    let step = |a: &PermutationAction| {
        let s = bratteli_step(&z2, a).unwrap();
        [0, 1].map(|i| [0, 1].map(|j| entry(&s, i, j).unwrap()))
    };
    assert_eq!(step(&regular), [[1, 1], [1, 1]]);
    assert_eq!(step(&three), [[2, 1], [1, 2]]);
    assert_eq!(step(&trivial), [[5, 0], [0, 5]]);

    for (action, gen) in [(&regular, "(1 2)"), (&three, "(1 2)")] {
        let n = action.degree();
        let oracle = common::crossed_product_multiplicities(&[2], &[Permutation::parse_cycles(n, gen).unwrap()], n);
        let s = step(action);
        for i in 0..2 {
            for j in 0..2 {
                assert!((oracle[i][j] - s[i][j] as f64).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn successor_scaling_limit() {
    let sys = DirectLimitSystem::new(MapSchedule::ScaleBySuccessor).unwrap();
    let inv = direct_limit_invariants(&sys, 10, 97).unwrap();
    assert_eq!(inv.rank, 1);
    assert_eq!(inv.composite_divisors, vec![uhfbench::arith::factorial(11).to_string()]);
    assert!(uhfbench::arith::primes_up_to(97).iter().all(|&p| inv.divisible_by(p)));
}

#[test]
fn k_examples() {
    let describe = |g: &FgAbelianGroup| {
        let k = k_invariants(g, true);
        (k.k0.describe(), k.k1.describe())
    };
    assert_eq!(describe(&FgAbelianGroup::free(1)), ("Q".into(), "Q".into()));
    assert_eq!(describe(&FgAbelianGroup::free(3)), ("Q^4".into(), "Q^4".into()));
    assert_eq!(
        describe(&FgAbelianGroup::new(0, vec![2]).unwrap()),
        ("Q".into(), "0".into())
    );
    let pattern = cyclic_into(2, FactorSequence::new(FactorRule::Factorial).unwrap());
    let report = crossed_product_diagram(&pattern, 3, 64).unwrap();
    assert_eq!(report.verdict.label(), "UHF");
}
