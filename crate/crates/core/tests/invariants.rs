//! Invariants of the bundled fixtures against hand-derived lists.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use toric_core::arrangement::{verify_chain, Chain, ChainVerdict};
use toric_core::fixtures::{self, Fixture};
use toric_core::invariants::*;
use toric_core::linalg::{big_vec, hnf_rows};
use toric_core::tracer::{stage_monodromy, TraceOptions};
use toric_core::words::{pair_count, pair_index, FreeWord};

fn chain_of(fx: &Fixture) -> Chain {
    match verify_chain(&fx.arrangement, &fx.chain).unwrap() {
        ChainVerdict::Valid(c) => c,
        ChainVerdict::Invalid { level, .. } => panic!("{} fails at level {level}", fx.name),
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn comb(n: usize, terms: &[(i64, usize)]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &(c, i) in terms {
        v[i] += c;
    }
    v
}

/// Product of two linear forms in the lexicographic basis of `Λ^2`.
fn wedge(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len();
    let mut out = vec![0; pair_count(n)];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let c = a[i] * b[j];
            if i < j {
                out[pair_index(n, i + 1, j + 1)] += c;
            } else {
                out[pair_index(n, j + 1, i + 1)] -= c;
            }
        }
    }
    out
}

fn relation_set(rels: &[DegreeTwoRelation], gens: &[toric_core::roots::Generator]) -> BTreeSet<(usize, Vec<i64>)> {
    rels.iter().map(|r| (gens.iter().position(|&g| g == r.fiber).unwrap(), r.u.clone())).collect()
}

fn same_ideal(coh: &CohomologyPresentation, expected: &[Vec<i64>]) -> bool {
    let n = pair_count(coh.generators.len());
    let rows: Vec<Vec<BigInt>> = expected.iter().map(|v| big_vec(v)).collect();
    hnf_rows(&rows, n) == coh.ideal_basis
}

/// Generators `e_0..e_n, f_1, f_2, f_3` of `C(n, m)` in homology order.
fn circuit_expected(n: usize, m: usize) -> (Vec<(usize, Vec<i64>)>, Vec<Vec<i64>>) {
    let dim = n + 4;
    let (f1, f2, f3) = (n + 1, n + 2, n + 3);
    let k = n / m;
    let mut rels = vec![
        (f1, comb(dim, &[(1, 0), (m as i64, f2)])),
        (f2, comb(dim, &[(1, 0), (m as i64, f1)])),
        (f3, unit(dim, 0)),
    ];
    for j in 1..=n {
        let c = (j % k == 0) as i64;
        rels.push((f1, unit(dim, j)));
        rels.push((f2, comb(dim, &[(1, j), (c, f3)])));
        rels.push((f3, comb(dim, &[(1, j), (c, f2)])));
    }
    let mut ideal = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            ideal.push(wedge(&unit(dim, i), &unit(dim, j)));
        }
    }
    let m = m as i64;
    let mut x = wedge(&unit(dim, f1), &unit(dim, f2));
    for (a, b) in x.iter_mut().zip(wedge(&unit(dim, 0), &comb(dim, &[(m, f1), (-m, f2)]))) {
        *a += b;
    }
    ideal.push(x);
    ideal.push(wedge(&unit(dim, f1), &unit(dim, f3)));
    let mut y = wedge(&unit(dim, f2), &unit(dim, f3));
    for q in 1..=m as usize {
        for (a, b) in y.iter_mut().zip(wedge(&unit(dim, k * q), &comb(dim, &[(1, f2), (-1, f3)]))) {
            *a += b;
        }
    }
    ideal.push(y);
    (rels, ideal)
}

fn check_circuit(n: i64, m: i64) {
    let c = chain_of(&fixtures::circuit(n, m).unwrap());
    let gens = homology_generators(&c);
    let rels = lcs_ideal(&c).unwrap();
    let (expected_rels, expected_ideal) = circuit_expected(n as usize, m as usize);
    assert_eq!(relation_set(&rels, &gens), expected_rels.into_iter().collect());
    let coh = cohomology_ideal(&h2_image(&rels, &gens).unwrap(), &gens).unwrap();
    assert!(same_ideal(&coh, &expected_ideal), "C({n},{m}) ideal differs");
}

#[test]
fn circuit_6_3_relations_and_ideal() {
    check_circuit(6, 3);
}

#[test]
fn circuit_4_2_relations_and_ideal() {
    check_circuit(4, 2);
}

#[test]
fn circuit_6_3_h2_rows() {
    let c = chain_of(&fixtures::circuit(6, 3).unwrap());
    let gens = homology_generators(&c);
    let rels = lcs_ideal(&c).unwrap();
    let h2 = h2_image(&rels, &gens).unwrap().to_i64_rows().unwrap();
    let dim = 10;
    let (f1, f2, f3) = (7, 8, 9);
    let w = |i, j| wedge(&unit(dim, i), &unit(dim, j));
    let add = |a: Vec<i64>, c: i64, b: Vec<i64>| a.iter().zip(&b).map(|(x, y)| x + c * y).collect::<Vec<_>>();
    let mut expected = vec![add(w(0, f1), -3, w(f1, f2)), add(w(0, f2), 3, w(f1, f2)), w(0, f3)];
    for j in 1..=6 {
        let c = (j % 2 == 0) as i64;
        expected.push(w(j, f1));
        expected.push(add(w(j, f2), -c, w(f2, f3)));
        expected.push(add(w(j, f3), c, w(f2, f3)));
    }
    let got: BTreeSet<Vec<i64>> = h2.into_iter().collect();
    assert_eq!(got, expected.into_iter().collect());
}

// Type C_2 in the order z1, ρ1, η1, z2, ρ2, η2, α, β.
const Z1: usize = 0;
const R1: usize = 1;
const E1: usize = 2;
const Z2: usize = 3;
const R2: usize = 4;
const E2: usize = 5;
const AL: usize = 6;
const BE: usize = 7;

#[test]
fn type_c2_lcs_relations() {
    let c = chain_of(&fixtures::type_c(2).unwrap());
    let gens = homology_generators(&c);
    let rels = lcs_ideal(&c).unwrap();
    let v = |t: &[(i64, usize)]| comb(8, t);
    let zeroed = |fiber: usize, mut u: Vec<i64>| {
        u[fiber] = 0;
        (fiber, u)
    };
    let mut expected = vec![
        zeroed(BE, v(&[(1, Z1), (-1, Z2), (-1, R2), (-1, E2), (-1, AL), (-1, BE)])),
        zeroed(Z2, v(&[(1, Z1), (1, Z2), (1, AL), (-1, BE)])),
        zeroed(AL, v(&[(1, Z1), (1, Z2), (1, AL), (-1, BE)])),
        zeroed(R2, v(&[(1, Z1), (-1, BE)])),
        zeroed(E2, v(&[(1, Z1), (-1, BE)])),
        zeroed(Z2, v(&[(1, R1)])),
        zeroed(E2, v(&[(1, R1)])),
        zeroed(Z2, v(&[(1, E1)])),
        zeroed(R2, v(&[(1, E1)])),
    ];
    for x in [R2, AL, BE] {
        expected.push(zeroed(x, v(&[(1, R1), (1, R2), (1, AL), (1, BE)])));
    }
    for x in [E2, AL, BE] {
        expected.push(zeroed(x, v(&[(1, E1), (1, E2), (1, AL), (1, BE)])));
    }
    assert_eq!(relation_set(&rels, &gens), expected.into_iter().collect());
}

fn type_c2_ideal(beta_shift: i64) -> Vec<Vec<i64>> {
    let v = |t: &[(i64, usize)]| comb(8, t);
    // β in the hand-derived list, written in this crate's dual basis.
    let b = v(&[(1, BE), (beta_shift, Z1)]);
    let add = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(a, c)| a + c).collect::<Vec<_>>();
    let e = |i| unit(8, i);
    vec![
        wedge(&e(Z1), &e(R1)),
        wedge(&e(Z1), &e(E1)),
        wedge(&e(R1), &e(E1)),
        wedge(&e(Z2), &e(R2)),
        wedge(&e(Z2), &e(E2)),
        wedge(&e(R2), &e(E2)),
        wedge(&v(&[(1, Z2), (-1, Z1)]), &v(&[(1, AL), (-1, Z1)])),
        wedge(&v(&[(1, R2), (-1, R1)]), &v(&[(1, AL), (-1, R1)])),
        wedge(&v(&[(1, E2), (-1, E1)]), &v(&[(1, AL), (-1, E1)])),
        wedge(&v(&[(1, Z2), (1, Z1)]), &b),
        wedge(&v(&[(1, R2), (1, Z1), (-1, R1)]), &add(&b, &v(&[(-1, R1)]))),
        wedge(&v(&[(1, E2), (1, Z1), (-1, E1)]), &add(&b, &v(&[(-1, E1)]))),
        wedge(&v(&[(1, AL), (1, Z1), (-1, R1), (-1, E1)]), &add(&b, &v(&[(-1, R1), (-1, E1)]))),
    ]
}

#[test]
fn type_c2_cohomology_ideal() {
    let c = chain_of(&fixtures::type_c(2).unwrap());
    let gens = homology_generators(&c);
    let coh = cohomology_ideal(&h2_image(&lcs_ideal(&c).unwrap(), &gens).unwrap(), &gens).unwrap();
    assert_eq!(coh.rank(), 13);
    let matches: Vec<i64> = [-1, 0, 1].into_iter().filter(|&s| same_ideal(&coh, &type_c2_ideal(s))).collect();
    assert_eq!(matches, vec![1]);
}

#[test]
fn betti_numbers_of_fixtures() {
    let cases: [(Fixture, Vec<u64>); 4] = [
        (fixtures::circuit(6, 3).unwrap(), vec![1, 10, 21]),
        (fixtures::circuit(4, 2).unwrap(), vec![1, 8, 15]),
        (fixtures::type_c(2).unwrap(), vec![1, 8, 15]),
        (fixtures::type_c(3).unwrap(), vec![1, 15, 71, 105]),
    ];
    for (fx, expected) in cases {
        let c = chain_of(&fx);
        assert_eq!(betti_numbers(&c, fx.arrangement.dim).unwrap(), expected, "{}", fx.name);
        let gens = homology_generators(&c);
        let coh = cohomology_ideal(&h2_image(&lcs_ideal(&c).unwrap(), &gens).unwrap(), &gens).unwrap();
        let r = c.stages.len();
        assert_eq!(hilbert_series(&coh, r + 1).unwrap()[r + 1], 0, "{}", fx.name);
    }
}

#[test]
fn lcs_rank_matches_relation_rank() {
    for (fx, rank, phi2) in [(fixtures::circuit(6, 3).unwrap(), 21, 24), (fixtures::type_c(2).unwrap(), 15, 13)] {
        let c = chain_of(&fx);
        let gens = homology_generators(&c);
        let check = lcs_rank_crosscheck(&lcs_ideal(&c).unwrap(), &gens, &c.fiber_ranks()).unwrap();
        assert_eq!((check.relation_rank, check.phi2), (rank, phi2));
        assert!(check.holds);
    }
}

#[test]
fn lcs_ranks_of_circuit() {
    assert_eq!(lcs_ranks(&[7, 3], 3).unwrap(), vec![10, 24, 120]);
    assert!(lcs_ranks(&[1000], 40).is_err());
}

#[test]
fn topological_complexity_of_fixtures() {
    assert_eq!(topological_complexity(&fixtures::circuit(6, 3).unwrap().arrangement).unwrap(), 5);
    for n in 1..=3 {
        assert_eq!(topological_complexity(&fixtures::type_c(n).unwrap().arrangement).unwrap(), 2 * n + 1);
    }
}

fn presentation(fx: &Fixture) -> GroupPresentation {
    let c = chain_of(fx);
    let opts = TraceOptions::default();
    let mono: Vec<_> = (2..=c.stages.len()).map(|k| stage_monodromy(&c, k, &opts).unwrap()).collect();
    pi1_presentation(&c, &mono).unwrap()
}

fn abelian_trivial(p: &GroupPresentation) {
    for r in &p.relations {
        let diff = r.lhs.mul(&r.rhs.inverse()).abelianize();
        assert!(diff.iter().all(|&x| x == 0), "{}", p.relation_text(r));
    }
}

#[test]
fn example_a_presentation() {
    let p = presentation(&fixtures::example_a());
    assert_eq!(p.generators.len(), 6);
    assert_eq!(p.relations.len(), 9);
    abelian_trivial(&p);
}

#[test]
fn circuit_presentation_has_trivial_odd_relations() {
    let p = presentation(&fixtures::circuit(6, 3).unwrap());
    assert_eq!(p.relations.len(), 7 * 3);
    abelian_trivial(&p);
    let rank = p.generators.len();
    for r in &p.relations {
        if r.conjugator.stage == 1 && r.conjugator.index % 2 == 1 {
            let v = p.generators.iter().position(|&g| g == r.fiber).unwrap() + 1;
            assert_eq!(r.rhs, FreeWord::generator(rank, v), "{}", p.relation_text(r));
        }
    }
}

#[test]
fn type_c3_presentation_count() {
    let p = presentation(&fixtures::type_c(3).unwrap());
    // Σ_{i<j} n_i n_j for fiber ranks 3, 5, 7.
    assert_eq!(p.relations.len(), 3 * 5 + 3 * 7 + 5 * 7);
    abelian_trivial(&p);
}

#[test]
fn rank_two_always_has_a_chain() {
    use toric_core::arrangement::{find_chain, Arrangement, Classification};
    let a = Arrangement::from_characters(2, &[vec![2, 3], vec![5, -7]]).unwrap();
    let c = find_chain(&a).unwrap().expect("rank-2 arrangements have a chain");
    assert_eq!(c.classification(), Classification::Supersolvable);
    assert!(topological_complexity(&a).is_err());
}
