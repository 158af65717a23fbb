//! Independent oracles shared by the property suites.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Rank over ℚ by plain Gaussian elimination on rationals.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in 0..cols {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of the maximal minors of a full-row-rank integer matrix: the index of
/// its row lattice in the saturation.
pub fn maximal_minor_gcd(rows: &[Vec<i64>]) -> i128 {
    let r = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    subsets(cols, r).into_iter().fold(0, |g, cs| {
        let sub: Vec<Vec<i128>> = rows.iter().map(|row| cs.iter().map(|&c| row[c] as i128).collect()).collect();
        gcd(g, det(&sub))
    })
}

pub fn is_nonnegative(x: &num_bigint::BigInt) -> bool {
    !x.is_negative()
}
