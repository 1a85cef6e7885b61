//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use uhfbench::groups::{FgAbelianGroup, IntMatrix};
use uhfbench::gset::{GroupModel, PermutationAction};
use uhfbench::Permutation;

/// The abelian groups with `|H| ≤ 4`, as cyclic orders.
pub const SMALL_GROUPS: &[&[u64]] = &[&[], &[2], &[3], &[4], &[2, 2]];

/// Determinant by fraction-free Gaussian elimination.
pub fn bareiss_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = m.to_rows();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    bareiss_det(m).abs() == BigInt::from(1)
}

/// All permutations of `0..n`.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    (0..n)
        .permutations(n)
        .map(|images| Permutation::from_images(images).unwrap())
        .collect()
}

/// Every action of `Z/d_1 × ... × Z/d_k` on `n` points, as generator images.
pub fn all_actions(orders: &[u64], n: usize) -> Vec<Vec<Permutation>> {
    let perms = all_perms(n);
    let candidates: Vec<Vec<&Permutation>> = orders
        .iter()
        .map(|&d| perms.iter().filter(|p| p.pow(d as i64).is_identity()).collect())
        .collect();
    let mut out = vec![Vec::new()];
    for cands in &candidates {
        let mut next = Vec::new();
        for prefix in &out {
            for &p in cands {
                let commutes = prefix.iter().all(|q: &Permutation| p.compose(q) == q.compose(p));
                if commutes {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

pub fn abelian_action(orders: &[u64], n: usize, perms: Vec<Permutation>) -> PermutationAction {
    let group = FgAbelianGroup::from_cyclic_orders(orders).unwrap();
    let names = (1..=group.ngens()).map(|i| format!("h{i}")).collect();
    let model = GroupModel::abelian(group, names).unwrap();
    PermutationAction::with_degree(model.presentation(), n, perms).unwrap()
}

/// Tuples of `Z/d_1 × ... × Z/d_k`, first coordinate slowest.
pub fn tuples(orders: &[u64]) -> Vec<Vec<u64>> {
    if orders.is_empty() {
        return vec![vec![]];
    }
    orders.iter().map(|&d| 0..d).multi_cartesian_product().collect()
}

fn char_value(orders: &[u64], chi: &[u64], h: &[u64]) -> Complex64 {
    let phase: f64 = orders
        .iter()
        .zip(chi.iter().zip(h))
        .map(|(&d, (&a, &b))| (a * b) as f64 / d as f64)
        .sum();
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase)
}

type CMat = Vec<Vec<Complex64>>;

fn zeros(n: usize) -> CMat {
    vec![vec![Complex64::zero(); n]; n]
}

fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn trace(a: &CMat) -> Complex64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// `M[χ'][χ]` for the inclusion `C*(H) ⊂ M_n ⋊ H`, computed in the regular
/// covariant representation on `ℓ²(H) ⊗ C^n`.
///
/// `λ_h` shifts the `ℓ²(H)` factor; `z_h = (1 ⊗ u_h*) λ_h` is central in the
/// crossed product. With `p_χ`, `q_χ'` the spectral projections of `λ` and
/// `z`, the multiplicity is `n · tr(p_χ q_χ') / tr(q_χ')`. Characters are
/// indexed by `tuples(orders)`.
pub fn crossed_product_multiplicities(orders: &[u64], gens: &[Permutation], n: usize) -> Vec<Vec<f64>> {
    let hs = tuples(orders);
    let order = hs.len();
    let dim = order * n;
    let index_of = |t: &[u64]| hs.iter().position(|x| x == t).unwrap();
    let unitary = |h: &[u64]| -> Permutation {
        h.iter()
            .zip(gens)
            .fold(Permutation::identity(n), |acc, (&e, g)| acc.compose(&g.pow(e as i64)))
    };
    let add =
        |a: &[u64], b: &[u64]| -> Vec<u64> { a.iter().zip(b).zip(orders).map(|((&x, &y), &d)| (x + y) % d).collect() };
    // λ_h |g, i⟩ = |h + g, i⟩;  z_h |g, i⟩ = |h + g, u_h⁻¹ i⟩.
    let lambda = |h: &[u64]| -> CMat {
        let mut m = zeros(dim);
        for (gi, g) in hs.iter().enumerate() {
            let target = index_of(&add(h, g));
            for i in 0..n {
                m[target * n + i][gi * n + i] = Complex64::new(1.0, 0.0);
            }
        }
        m
    };
    let z = |h: &[u64]| -> CMat {
        let uinv = unitary(h).inverse();
        let mut m = zeros(dim);
        for (gi, g) in hs.iter().enumerate() {
            let target = index_of(&add(h, g));
            for i in 0..n {
                m[target * n + uinv.apply(i)][gi * n + i] = Complex64::new(1.0, 0.0);
            }
        }
        m
    };
    let spectral = |chi: &[u64], op: &dyn Fn(&[u64]) -> CMat| -> CMat {
        let mut p = zeros(dim);
        for h in &hs {
            let c = char_value(orders, chi, h).conj() / order as f64;
            let m = op(h);
            for i in 0..dim {
                for j in 0..dim {
                    p[i][j] += c * m[i][j];
                }
            }
        }
        p
    };
    let ps: Vec<CMat> = hs.iter().map(|chi| spectral(chi, &lambda)).collect();
    let qs: Vec<CMat> = hs.iter().map(|chi| spectral(chi, &z)).collect();
    (0..order)
        .map(|target| {
            let tq = trace(&qs[target]).re;
            (0..order)
                .map(|source| n as f64 * trace(&mat_mul(&ps[source], &qs[target])).re / tq)
                .collect()
        })
        .collect()
}

/// Library step matrix against the regular-representation oracle, for every
/// action of every abelian `|H| ≤ 4` on up to `max_n` points.
pub fn check_bratteli_steps(max_n: usize) -> Result<usize, String> {
    let mut checked = 0;
    for &orders in SMALL_GROUPS {
        let table = uhfbench::ktheory::characters(orders).unwrap();
        let order = table.len();
        let oracle_index: Vec<usize> = (0..order)
            .map(|c| tuples(orders).iter().position(|t| *t == table.tuple(c)).unwrap())
            .collect();
        for n in 1..=max_n {
            for gens in all_actions(orders, n) {
                let action = abelian_action(orders, n, gens.clone());
                let step = uhfbench::ktheory::bratteli_step(&table, &action).unwrap();
                let oracle = crossed_product_multiplicities(orders, &gens, n);
                for t in 0..order {
                    for s in 0..order {
                        let want = oracle[oracle_index[t]][oracle_index[s]];
                        let got = step[t][s].to_f64().unwrap();
                        if (want - got).abs() >= 1e-9 {
                            return Err(format!("H={orders:?} n={n} gens={gens:?}: {got} vs {want}"));
                        }
                    }
                }
                let fix = uhfbench::ktheory::fixed_point_vector(&table, &action).unwrap();
                let vanishing = fix.iter().skip(1).all(BigInt::is_zero);
                let constant = step.iter().flatten().all(|x| *x == step[0][0]);
                if vanishing != constant || (vanishing && step[0][0].to_usize().unwrap() * order != n) {
                    return Err(format!(
                        "H={orders:?} n={n} gens={gens:?}: vanishing trace without constant n/|H|"
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}
