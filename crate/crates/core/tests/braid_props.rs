mod common;

use proptest::prelude::*;
use toric_core::words::*;

fn braid(n: usize, len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..n, prop_oneof![Just(1i32), Just(-1i32)]), 0..len)
        .prop_map(move |letters| BraidWord::new(n, letters).unwrap())
}

fn pure(n: usize, len: usize) -> impl Strategy<Value = PureBraidWord> {
    let pair = (1..n).prop_flat_map(move |j| (1..=j).prop_map(move |i| (i, j + 1)));
    prop::collection::vec((pair, prop_oneof![Just(1i32), Just(-1i32)]), 0..len)
        .prop_map(move |letters| PureBraidWord::new(n, letters).unwrap())
}

fn sized_braid() -> impl Strategy<Value = BraidWord> {
    (2usize..=6).prop_flat_map(|n| braid(n, 12))
}

fn sized_pure() -> impl Strategy<Value = PureBraidWord> {
    (2usize..=5).prop_flat_map(|n| pure(n, 8))
}

fn sigma(n: usize, letters: &[(usize, i32)]) -> BraidWord {
    BraidWord::new(n, letters.to_vec()).unwrap()
}

/// `y_1 y_2 ⋯ y_n`, fixed by every braid automorphism.
fn boundary(n: usize) -> FreeWord {
    FreeWord { rank: n, letters: (1..=n).map(|i| (i, 1)).collect() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn braid_relations_hold_in_context(w in sized_braid(), i in 1usize..5, j in 1usize..5) {
        let n = w.strands;
        prop_assume!(i + 1 < n && j < n);
        let ctx = |b: &BraidWord| w.mul(b).mul(&w.inverse());
        let lhs = sigma(n, &[(i, 1), (i + 1, 1), (i, 1)]);
        let rhs = sigma(n, &[(i + 1, 1), (i, 1), (i + 1, 1)]);
        prop_assert!(braids_equal(&ctx(&lhs), &ctx(&rhs)));
        if i.abs_diff(j) >= 2 {
            prop_assert!(braids_equal(&sigma(n, &[(i, 1), (j, 1)]), &sigma(n, &[(j, 1), (i, 1)])));
        } else if i != j {
            prop_assert!(!braids_equal(&sigma(n, &[(i, 1), (j, 1)]), &sigma(n, &[(j, 1), (i, 1)])));
        }
        prop_assert!(braids_equal(&w.mul(&w.inverse()), &BraidWord::identity(n)));
    }

    #[test]
    fn artin_action_fixes_the_boundary_word(w in sized_braid()) {
        let n = w.strands;
        prop_assert_eq!(artin_full(&w, &boundary(n)).unwrap().reduced(), boundary(n));
        // Images of generators are conjugates of generators, permuted.
        let mut hit = vec![false; n];
        for img in full_action(&w) {
            let ab = img.abelianize();
            let k = ab.iter().position(|&x| x == 1);
            prop_assert!(k.is_some() && ab.iter().sum::<i64>() == 1 && ab.iter().all(|&x| x == 0 || x == 1));
            hit[k.unwrap()] = true;
        }
        prop_assert!(hit.iter().all(|&h| h));
    }

    #[test]
    fn pure_braids_act_trivially_on_homology(p in sized_pure()) {
        let n = p.strands;
        for (i, img) in pure_action(&p).iter().enumerate() {
            let mut e = vec![0i64; n];
            e[i] = 1;
            prop_assert_eq!(img.abelianize(), e);
        }
    }

    #[test]
    fn pure_sigma_round_trip(p in sized_pure()) {
        let s = pure_to_sigma(&p);
        prop_assert!(s.is_pure());
        prop_assert_eq!(linking_numbers(&s).unwrap(), abelianize_pure(&p));
        let back = sigma_to_pure(&s).unwrap();
        prop_assert!(braids_equal(&pure_to_sigma(&back), &s));
        prop_assert_eq!(pure_action(&back), pure_action(&p));
    }

    #[test]
    fn p3_relation_in_context(w in braid(3, 10)) {
        let a = |i, j| PureBraidWord::new(3, vec![((i, j), 1)]).unwrap();
        let x = a(1, 2).mul(&a(1, 3)).mul(&a(2, 3));
        let y = a(1, 3).mul(&a(2, 3)).mul(&a(1, 2));
        let z = a(2, 3).mul(&a(1, 2)).mul(&a(1, 3));
        let ctx = |p: &PureBraidWord| w.mul(&pure_to_sigma(p)).mul(&w.inverse());
        prop_assert!(braids_equal(&ctx(&x), &ctx(&y)));
        prop_assert!(braids_equal(&ctx(&y), &ctx(&z)));
    }

    #[test]
    fn crossings_of_a_product_add(p in pure(5, 6), b in braid(5, 10)) {
        let a = pure_to_sigma(&p);
        let sum: Vec<i64> = crossing_numbers(&a).coords.iter().zip(&crossing_numbers(&b).coords).map(|(x, y)| x + y).collect();
        prop_assert_eq!(crossing_numbers(&a.mul(&b)).coords, sum);
    }
}
