mod common;

use proptest::prelude::*;
use toric_core::arrangement::*;

fn primitive(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, dim).prop_filter_map("zero character", |v| {
        let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        (g != 0).then(|| v.iter().map(|x| x / g).collect())
    })
}

fn hypersurface(dim: usize) -> impl Strategy<Value = Hypersurface> {
    (primitive(dim), 1i64..=4, 0i64..4).prop_map(|(chi, den, num)| Hypersurface::new(chi, Q::new(num % den, den)).unwrap())
}

fn layer_and_hypersurface() -> impl Strategy<Value = (Layer, Hypersurface)> {
    (2usize..=4)
        .prop_flat_map(|d| (prop::collection::vec(hypersurface(d), 0..3), hypersurface(d), any::<prop::sample::Index>()))
        .prop_filter_map("empty intersection", |(hs, h, pick)| {
            let mut x = Layer::ambient(h.dim());
            for g in &hs {
                let comps = intersect_layer(&x, g).unwrap();
                if comps.is_empty() {
                    return None;
                }
                x = comps[pick.index(comps.len())].clone();
            }
            Some((x, h))
        })
}

fn arrangement_and_cocharacter() -> impl Strategy<Value = (Arrangement, Vec<i64>)> {
    (2usize..=3).prop_flat_map(|d| (prop::collection::vec(hypersurface(d), 2..6), primitive(d))).prop_map(|(hs, y)| {
        let mut a = Arrangement::new(y.len());
        for h in hs {
            a.push(h).unwrap();
        }
        (a, y)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn component_count_is_saturation_index((x, h) in layer_and_hypersurface()) {
        let comps = intersect_layer(&x, &h).unwrap();
        let mut rows = x.lattice.clone();
        rows.push(h.chi.clone());
        if common::rational_rank(&rows) == rows.len() {
            prop_assert_eq!(comps.len() as i128, common::maximal_minor_gcd(&rows));
            for c in &comps {
                prop_assert_eq!(c.codim(), x.codim() + 1);
            }
        } else {
            prop_assert!(comps.len() <= 1);
            prop_assert_eq!(comps.len() == 1, x.contained_in_hypersurface(&h));
        }
        for c in &comps {
            prop_assert!(c.is_contained_in(&x));
            prop_assert!(c.contained_in_hypersurface(&h));
        }
    }

    #[test]
    fn tm_ideals_are_m_ideals((a, y) in arrangement_and_cocharacter()) {
        if is_tm_ideal(&a, &y).unwrap().is_none() {
            prop_assert!(is_m_ideal(&a, &y).unwrap().is_none());
            prop_assert!(compute_composition(&a, &y).unwrap().iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn poset_is_graded_and_closed((a, _) in arrangement_and_cocharacter()) {
        let p = build_poset(&a, a.dim, DEFAULT_POSET_CAP).unwrap();
        prop_assert_eq!(p.elements[0].codim(), 0);
        prop_assert_eq!(p.elements.iter().filter(|x| x.codim() == 0).count(), 1);
        for x in &p.elements {
            prop_assert!(x.codim() <= a.dim);
            for h in &a.hypersurfaces {
                for y in intersect_layer(x, h).unwrap() {
                    prop_assert!(p.index_of(&y).is_some());
                }
            }
        }
        for &(i, j) in &p.covers {
            prop_assert!(p.leq(i, j) && p.rank_of(i) + 1 == p.rank_of(j));
        }
    }
}
