//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Matrices are
//! small (a few hundred rows at most) so dense storage is used except for
//! the rank computation, which takes sparse rows.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have
    /// length `cols`.
    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows as `i64`, or `None` if some entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * prev
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// Inverse of a unimodular matrix, computed through its Hermite form.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        // h = u * self is the identity for a unimodular matrix.
        let (h, u) = hermite_normal_form(self);
        debug_assert_eq!(h, IntMatrix::identity(self.rows));
        Some(u)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `h = u * m`, `u`
/// unimodular, `h` in echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`. Zero rows sit at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            // Smallest nonzero entry in column c at or below row r.
            let best = (r..m.rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(p) = best else { break };
            h.swap_rows(p, r);
            u.swap_rows(p, r);
            let mut done = true;
            for i in r + 1..m.rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Result of a Smith normal form computation, `d = u * m * v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, tracked alongside it.
    pub v_inv: IntMatrix,
}

impl Smith {
    /// The nonzero diagonal entries, in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form with transforms: `d = u * m * v` diagonal, nonnegative,
/// with each diagonal entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut vi = IntMatrix::identity(cols);

    // Column operations on d are mirrored on v; the inverse operation is
    // applied to the rows of vi so that vi stays equal to v^{-1}.
    let col_swap = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, a, b| {
        d.swap_cols(a, b);
        v.swap_cols(a, b);
        vi.swap_rows(a, b);
    };
    let col_add = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst, src, k: &BigInt| {
        d.add_col_multiple(dst, src, k);
        v.add_col_multiple(dst, src, k);
        vi.add_row_multiple(src, dst, &-k);
    };

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(d, u, v, vi);
            };
            d.swap_rows(pi, t);
            u.swap_rows(pi, t);
            col_swap(&mut d, &mut v, &mut vi, pj, t);

            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(d.get(t, t));
                col_add(&mut d, &mut v, &mut vi, j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row t and retry.
            let piv = d.get(t, t).clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_smith(d, u, v, vi)
}

fn finish_smith(mut d: IntMatrix, mut u: IntMatrix, v: IntMatrix, vi: IntMatrix) -> Smith {
    for t in 0..d.rows.min(d.cols) {
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { d, u, v, v_inv: vi }
}

/// A ℤ-basis of `{v : m v = 0}`, returned as rows in Hermite normal form.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (h, u) = hermite_normal_form(&m.transpose());
    let basis: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.is_zero_row(i))
        .map(|i| u.row(i).to_vec())
        .collect();
    hnf_rows(&basis, m.cols)
}

/// Nonzero rows of the Hermite normal form of the given row vectors.
pub fn hnf_rows(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (h, _) = hermite_normal_form(&IntMatrix::from_rows(rows, cols));
    (0..h.rows).filter(|&i| !h.is_zero_row(i)).map(|i| h.row(i).to_vec()).collect()
}

/// Saturation of the lattice spanned by `basis` inside ℤ^`dim`, as HNF rows,
/// together with the index of the input lattice in its saturation.
pub fn saturate(basis: &[Vec<BigInt>], dim: usize) -> (Vec<Vec<BigInt>>, BigInt) {
    if basis.is_empty() {
        return (Vec::new(), BigInt::one());
    }
    let m = IntMatrix::from_rows(basis, dim);
    let snf = smith_normal_form(&m);
    let inv = snf.invariants();
    let index = inv.iter().fold(BigInt::one(), |acc, x| acc * x);
    let rows: Vec<Vec<BigInt>> = (0..inv.len()).map(|i| snf.v_inv.row(i).to_vec()).collect();
    (hnf_rows(&rows, dim), index)
}

/// Sparse integer vector: `(column, value)` pairs with strictly increasing
/// columns and no zero values.
pub type SparseVec = Vec<(usize, BigInt)>;

pub fn sparse_from_dense(v: &[BigInt]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn sparse_lin_comb(a: &BigInt, x: &SparseVec, b: &BigInt, y: &SparseVec) -> SparseVec {
    // a*x + b*y
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, b * &y[j].1));
            j += 1;
        } else {
            let v = a * &x[i].1 + b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn make_primitive(v: &mut SparseVec) {
    let g = v.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if g > BigInt::one() {
        for (_, x) in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Incremental row echelon form over ℚ, kept fraction-free: each stored row
/// is primitive and has a distinct leading column.
#[derive(Default)]
pub struct Echelon {
    pivots: HashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The stored rows, ordered by leading column.
    pub fn rows(&self) -> Vec<&SparseVec> {
        let mut leads: Vec<usize> = self.pivots.keys().copied().collect();
        leads.sort_unstable();
        leads.iter().map(|l| &self.pivots[l]).collect()
    }

    /// Reduces `v` against the stored rows and stores the remainder if it is
    /// nonzero. Returns whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        loop {
            let Some((lead, _)) = v.first() else { return false };
            let lead = *lead;
            match self.pivots.get(&lead) {
                None => {
                    make_primitive(&mut v);
                    if v[0].1.is_negative() {
                        for (_, x) in v.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    self.pivots.insert(lead, v);
                    return true;
                }
                Some(p) => {
                    let g = p[0].1.gcd(&v[0].1);
                    let a = &p[0].1 / &g;
                    let b = -(&v[0].1 / &g);
                    v = sparse_lin_comb(&a, &v, &b, p);
                    make_primitive(&mut v);
                }
            }
        }
    }
}

/// Rank over ℚ of a matrix given by sparse rows. Stops early once `cap`
/// independent rows are found, if a cap is given.
pub fn sparse_rank<I: IntoIterator<Item = SparseVec>>(rows: I, cap: Option<usize>) -> usize {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
        if cap.is_some_and(|c| ech.rank() >= c) {
            break;
        }
    }
    ech.rank()
}

/// Rank over ℚ of an integer matrix.
pub fn rank(m: &IntMatrix) -> usize {
    sparse_rank((0..m.rows).map(|i| sparse_from_dense(m.row(i))), Some(m.cols))
}

/// Dense rational matrix, used for small exact computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Rank by plain Gaussian elimination over ℚ.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let (n, m) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..m {
            let Some(p) = (r..n).find(|&i| !a[i * m + c].is_zero()) else { continue };
            for j in 0..m {
                a.swap(p * m + j, r * m + j);
            }
            let piv = a[r * m + c].clone();
            for i in r + 1..n {
                let f = &a[i * m + c] / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..m {
                    let v = &a[r * m + j] * &f;
                    a[i * m + j] -= v;
                }
            }
            r += 1;
            if r == n {
                break;
            }
        }
        r
    }
}

/// Convenience conversion for tests and callers holding machine integers.
pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Converts a vector of big integers to `i64`, if every entry fits.
pub fn small_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// Whether `h` is in the row-style Hermite normal form produced above.
pub fn is_hermite(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows {
        let lead = (0..h.cols).find(|&j| !h.get(i, j).is_zero());
        match lead {
            None => seen_zero = true,
            Some(c) => {
                if seen_zero || last_pivot.is_some_and(|p| c <= p) {
                    return false;
                }
                let piv = h.get(i, c);
                if !piv.is_positive() {
                    return false;
                }
                for k in 0..i {
                    let x = h.get(k, c);
                    if x.is_negative() || x >= piv {
                        return false;
                    }
                }
                last_pivot = Some(c);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols)
    }

    #[test]
    fn hnf_identity_and_zero() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(2));
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::identity(2));
        let z = IntMatrix::zeros(2, 2);
        let (h, u) = hermite_normal_form(&z);
        assert!(h.is_zero());
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_character_matrix() {
        let a = m(&[&[2, -2, 0], &[0, 1, 1]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(h, u.mul(&a));
        assert!(u.is_unimodular());
        assert!(is_hermite(&h));
        // The -2 above the second pivot is reduced into [0, 1).
        assert_eq!(h, m(&[&[2, 0, 2], &[0, 1, 1]]));
    }

    #[test]
    fn smith_small_cases() {
        let s = smith_normal_form(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.invariants(), big_vec(&[1, 6]));
        assert_eq!(s.u.mul(&m(&[&[2, 0], &[0, 3]])).mul(&s.v), s.d);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(2));
        let s = smith_normal_form(&m(&[&[2, 0], &[0, 0]]));
        assert_eq!(s.d, m(&[&[2, 0], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(integer_kernel(&m(&[&[1, 1]])), vec![big_vec(&[1, -1])]);
        assert!(integer_kernel(&IntMatrix::identity(3)).is_empty());
        assert_eq!(integer_kernel(&IntMatrix::zeros(1, 3)).len(), 3);
    }

    #[test]
    fn saturation_examples() {
        let (b, idx) = saturate(&[big_vec(&[2, 0])], 2);
        assert_eq!(b, vec![big_vec(&[1, 0])]);
        assert_eq!(idx, BigInt::from(2));
        let (b, idx) = saturate(&[big_vec(&[2, -2]), big_vec(&[0, 2])], 2);
        assert_eq!(b, vec![big_vec(&[1, 0]), big_vec(&[0, 1])]);
        assert_eq!(idx, BigInt::from(4));
    }

    #[test]
    fn rank_agrees_with_rational_elimination() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1], &[1, 3, 4]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(RatMatrix::from_int(&a).rank(), 2);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).determinant(), BigInt::from(1));
        assert_eq!(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).determinant(), BigInt::from(-5));
    }
}
