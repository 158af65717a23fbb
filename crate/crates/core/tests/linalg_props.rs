mod common;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use toric_core::linalg::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

#[derive(Clone, Debug)]
enum RowOp {
    Swap(usize, usize),
    Add(usize, usize, i64),
    Negate(usize),
}

fn row_ops(rows: usize) -> impl Strategy<Value = Vec<RowOp>> {
    let op = prop_oneof![
        (0..rows, 0..rows).prop_map(|(i, j)| RowOp::Swap(i, j)),
        (0..rows, 0..rows, -3i64..=3).prop_map(|(i, j, c)| RowOp::Add(i, j, c)),
        (0..rows).prop_map(RowOp::Negate),
    ];
    prop::collection::vec(op, 0..12)
}

fn apply(rows: &mut [Vec<i64>], ops: &[RowOp]) {
    for op in ops {
        match *op {
            RowOp::Swap(i, j) => rows.swap(i, j),
            RowOp::Add(i, j, c) if i != j => {
                let src = rows[j].clone();
                for (a, b) in rows[i].iter_mut().zip(src) {
                    *a += c * b;
                }
            }
            RowOp::Add(..) => {}
            RowOp::Negate(i) => rows[i].iter_mut().for_each(|x| *x = -*x),
        }
    }
}

fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| big_vec(r)).collect()
}

fn with_ops() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<RowOp>)> {
    matrix(4, 5).prop_flat_map(|m| {
        let r = m.len();
        (Just(m), row_ops(r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn hnf_is_canonical_under_unimodular_row_ops((m, ops) in with_ops()) {
        let cols = m[0].len();
        let mut moved = m.clone();
        apply(&mut moved, &ops);
        let h = hnf_rows(&big(&m), cols);
        prop_assert_eq!(&h, &hnf_rows(&big(&moved), cols));
        prop_assert_eq!(h.len(), common::rational_rank(&m));
        prop_assert!(is_hermite(&IntMatrix::from_rows(&h, cols)));
        // Same lattice: stacking the HNF onto the input adds nothing.
        let mut both = big(&m);
        both.extend(h.iter().cloned());
        prop_assert_eq!(hnf_rows(&both, cols), h);
    }

    #[test]
    fn kernel_is_a_saturated_basis(m in matrix(4, 6)) {
        let cols = m[0].len();
        let mat = IntMatrix::from_i64_rows(&m, cols);
        let k = integer_kernel(&mat);
        prop_assert_eq!(k.len(), cols - common::rational_rank(&m));
        for v in &k {
            for row in &m {
                let dot: BigInt = row.iter().zip(v).map(|(a, b)| BigInt::from(*a) * b).sum();
                prop_assert!(dot.is_zero());
            }
        }
        if !k.is_empty() {
            let (_, index) = saturate(&k, cols);
            prop_assert!(index.is_one());
        }
    }

    #[test]
    fn saturation_is_idempotent_and_index_is_minor_gcd(m in matrix(3, 5)) {
        let cols = m[0].len();
        prop_assume!(common::rational_rank(&m) == m.len());
        let (s, index) = saturate(&big(&m), cols);
        prop_assert_eq!(index, BigInt::from(common::maximal_minor_gcd(&m)));
        let (again, one) = saturate(&s, cols);
        prop_assert_eq!(again, s);
        prop_assert!(one.is_one());
    }

    #[test]
    fn smith_form_reconstructs_and_divides(m in matrix(4, 4)) {
        let cols = m[0].len();
        let mat = IntMatrix::from_i64_rows(&m, cols);
        let s = smith_normal_form(&mat);
        prop_assert_eq!(s.u.mul(&mat).mul(&s.v), s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(cols));
        let inv = s.invariants();
        prop_assert_eq!(inv.len(), common::rational_rank(&m));
        for w in inv.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(inv.iter().all(common::is_nonnegative));
        if m.len() == cols {
            let d: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            let prod: BigInt = inv.iter().product();
            let expected = BigInt::from(common::det(&d).abs());
            prop_assert_eq!(if inv.len() == cols { prod } else { BigInt::zero() }, expected);
        }
    }

    #[test]
    fn sparse_rank_matches_rational_rank(m in matrix(6, 6)) {
        let rows = m.iter().map(|r| sparse_from_dense(&big_vec(r)));
        prop_assert_eq!(sparse_rank(rows, None), common::rational_rank(&m));
    }
}
