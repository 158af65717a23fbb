//! Free group words, braid words, pure braid words and the Artin actions.
//!
//! Braids act on the right: a word acts by applying its letters left to
//! right as substitutions on the free generators `y_1..y_n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of the free group `F_rank`, letters `(generator, ±1)`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    pub rank: usize,
    pub letters: Vec<(usize, i32)>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= rank, "generator y{i} out of range for rank {rank}");
        FreeWord { rank, letters: vec![(i, 1)] }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Free reduction.
    pub fn reduced(mut self) -> Self {
        let mut out: Vec<(usize, i32)> = Vec::with_capacity(self.letters.len());
        for l in self.letters.drain(..) {
            match out.last() {
                Some(&(g, e)) if g == l.0 && e == -l.1 => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        self.letters = out;
        self
    }

    pub fn inverse(&self) -> Self {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &FreeWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { rank: self.rank.max(other.rank), letters }.reduced()
    }

    /// `self * other * self^{-1}`
    pub fn conjugate(&self, other: &FreeWord) -> Self {
        self.mul(other).mul(&self.inverse())
    }

    /// Replaces each generator `y_i` by `images[i - 1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> Self {
        let mut letters = Vec::new();
        for &(g, e) in &self.letters {
            if e > 0 {
                letters.extend_from_slice(&images[g - 1].letters);
            } else {
                letters.extend(images[g - 1].inverse().letters);
            }
        }
        FreeWord { rank: self.rank, letters }.reduced()
    }

    /// Exponent sums.
    /// Text form with custom generator names.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        format_letters(&self.letters, name)
    }

    pub fn abelianize(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &(g, e) in &self.letters {
            v[g - 1] += e as i64;
        }
        v
    }

    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let letters = parse_letters(s, |base| {
            let i = parse_index(base.strip_prefix('y')?)?;
            (1..=rank).contains(&i).then_some(i)
        })?;
        Ok(FreeWord { rank, letters })
    }
}

pub fn abelianize_free(w: &FreeWord) -> Vec<i64> {
    w.abelianize()
}

/// Word in the Artin generators `σ_1..σ_{strands-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<(usize, i32)>,
}

impl BraidWord {
    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn new(strands: usize, letters: Vec<(usize, i32)>) -> Result<Self> {
        if let Some(&(i, _)) = letters.iter().find(|&&(i, e)| i == 0 || i >= strands || e.abs() != 1) {
            return Err(Error::Infeasible(format!("letter s{i} invalid for {strands} strands")));
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn inverse(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn mul(&self, other: &BraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord { strands: self.strands, letters }
    }

    /// Free reduction of adjacent inverse letters.
    pub fn reduced(&self) -> Self {
        let f = FreeWord { rank: self.strands, letters: self.letters.clone() }.reduced();
        BraidWord { strands: self.strands, letters: f.letters }
    }

    /// `perm[p]` is the end position of the strand starting at position `p`
    /// (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[pos] = start label
        for &(i, _) in &self.letters {
            at.swap(i - 1, i);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &label) in at.iter().enumerate() {
            perm[label] = pos;
        }
        perm
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn parse(s: &str, strands: usize) -> Result<Self> {
        let letters = parse_letters(s, |base| {
            let i = parse_index(base.strip_prefix('s')?)?;
            (1..strands).contains(&i).then_some(i)
        })?;
        Ok(BraidWord { strands, letters })
    }
}

/// Word in the pure braid generators `a_{i,j}`, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PureBraidWord {
    pub strands: usize,
    pub letters: Vec<((usize, usize), i32)>,
}

impl PureBraidWord {
    pub fn identity(strands: usize) -> Self {
        PureBraidWord { strands, letters: Vec::new() }
    }

    pub fn new(strands: usize, letters: Vec<((usize, usize), i32)>) -> Result<Self> {
        for &((i, j), e) in &letters {
            if !(1 <= i && i < j && j <= strands) || e.abs() != 1 {
                return Err(Error::Infeasible(format!("letter a({i},{j}) invalid for {strands} strands")));
            }
        }
        Ok(PureBraidWord { strands, letters })
    }

    pub fn inverse(&self) -> Self {
        PureBraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn mul(&self, other: &PureBraidWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        PureBraidWord { strands: self.strands, letters }
    }

    pub fn parse(s: &str, strands: usize) -> Result<Self> {
        let letters = parse_letters(s, |base| {
            let inner = base.strip_prefix("a(")?.strip_suffix(')')?;
            let (i, j) = inner.split_once(',')?;
            let (i, j) = (parse_index(i.trim())?, parse_index(j.trim())?);
            (1 <= i && i < j && j <= strands).then_some((i, j))
        })?;
        Ok(PureBraidWord { strands, letters })
    }
}

/// Coordinates in the basis `A_{i,j}` of `H_1` of the configuration space,
/// pairs in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianBraidVector {
    pub strands: usize,
    pub coords: Vec<i64>,
}

impl AbelianBraidVector {
    pub fn zero(strands: usize) -> Self {
        AbelianBraidVector { strands, coords: vec![0; pair_count(strands)] }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.coords[pair_index(self.strands, i, j)]
    }

    pub fn add(&mut self, i: usize, j: usize, v: i64) {
        let k = pair_index(self.strands, i, j);
        self.coords[k] += v;
    }
}

impl fmt::Display for AbelianBraidVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, (i, j)) in pairs(self.strands).into_iter().enumerate() {
            match self.coords[k] {
                0 => {}
                1 => terms.push(format!("A({i},{j})")),
                c => terms.push(format!("{c}*A({i},{j})")),
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `(i, j)` (1-based, unordered) in the lexicographic pair list.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    assert!(1 <= i && i < j && j <= n, "pair ({i},{j}) out of range for {n}");
    // Pairs starting below i, then the offset within row i.
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

fn check_rank(have: usize, want: usize) -> Result<()> {
    if have > want {
        return Err(Error::Infeasible(format!("word of rank {have} acted on by a braid on {want} strands")));
    }
    Ok(())
}

fn gen(n: usize, i: usize) -> FreeWord {
    FreeWord::generator(n, i)
}

fn word(n: usize, letters: &[(usize, i32)]) -> FreeWord {
    FreeWord { rank: n, letters: letters.to_vec() }.reduced()
}

/// Images of the generators under one Artin letter.
fn sigma_images(n: usize, i: usize, e: i32) -> Vec<FreeWord> {
    let mut images: Vec<FreeWord> = (1..=n).map(|q| gen(n, q)).collect();
    if e > 0 {
        images[i - 1] = word(n, &[(i, 1), (i + 1, 1), (i, -1)]);
        images[i] = gen(n, i);
    } else {
        images[i - 1] = gen(n, i + 1);
        images[i] = word(n, &[(i + 1, -1), (i, 1), (i + 1, 1)]);
    }
    images
}

fn pure_images(n: usize, i: usize, j: usize, e: i32) -> Vec<FreeWord> {
    let c = word(n, &[(i, 1), (j, 1)]);
    let d = word(n, &[(i, 1), (j, 1), (i, -1), (j, -1)]);
    (1..=n)
        .map(|q| {
            let y = gen(n, q);
            if q == i || q == j {
                if e > 0 {
                    c.conjugate(&y)
                } else {
                    c.inverse().conjugate(&y)
                }
            } else if i < q && q < j {
                if e > 0 {
                    d.conjugate(&y)
                } else {
                    c.inverse().mul(&d.inverse()).mul(&c).conjugate(&y)
                }
            } else {
                y
            }
        })
        .collect()
}

/// Artin action of a braid word on a free word.
pub fn artin_full(b: &BraidWord, w: &FreeWord) -> Result<FreeWord> {
    check_rank(w.rank, b.strands)?;
    let mut w = FreeWord { rank: b.strands, letters: w.letters.clone() }.reduced();
    for &(i, e) in &b.letters {
        w = w.substitute(&sigma_images(b.strands, i, e));
    }
    Ok(w)
}

/// Artin action of a pure braid word on a free word.
pub fn artin_pure(p: &PureBraidWord, w: &FreeWord) -> Result<FreeWord> {
    check_rank(w.rank, p.strands)?;
    let mut w = FreeWord { rank: p.strands, letters: w.letters.clone() }.reduced();
    for &((i, j), e) in &p.letters {
        w = w.substitute(&pure_images(p.strands, i, j, e));
    }
    Ok(w)
}

/// Images of all generators under a braid.
pub fn full_action(b: &BraidWord) -> Vec<FreeWord> {
    (1..=b.strands).map(|q| artin_full(b, &gen(b.strands, q)).expect("ranks agree")).collect()
}

pub fn pure_action(p: &PureBraidWord) -> Vec<FreeWord> {
    (1..=p.strands).map(|q| artin_pure(p, &gen(p.strands, q)).expect("ranks agree")).collect()
}

/// Equality in the braid group, decided by the faithful Artin action.
pub fn braids_equal(a: &BraidWord, b: &BraidWord) -> bool {
    a.strands == b.strands && full_action(a) == full_action(b)
}

fn sigma_run(from: usize, to: usize) -> Vec<(usize, i32)> {
    // σ_from σ_{from-1} … σ_to, descending; empty when from < to.
    if from < to {
        return Vec::new();
    }
    (to..=from).rev().map(|k| (k, 1)).collect()
}

/// Rewrites `a_{i,j} = (σ_{j-1}…σ_{i+1}) σ_i^2 (σ_{j-1}…σ_{i+1})^{-1}`.
pub fn pure_to_sigma(p: &PureBraidWord) -> BraidWord {
    let mut letters = Vec::new();
    for &((i, j), e) in &p.letters {
        let run = sigma_run(j - 1, i + 1);
        letters.extend_from_slice(&run);
        letters.push((i, e));
        letters.push((i, e));
        letters.extend(run.iter().rev().map(|&(k, _)| (k, -1)));
    }
    BraidWord { strands: p.strands, letters }
}

/// Drops the strand starting (and ending) at the last position.
fn forget_last_strand(b: &BraidWord) -> BraidWord {
    let mut pos = b.strands; // 1-based position of the last strand
    let mut letters = Vec::new();
    for &(i, e) in &b.letters {
        if i == pos {
            pos += 1;
        } else if i + 1 == pos {
            pos -= 1;
        } else if i + 1 < pos {
            letters.push((i, e));
        } else {
            letters.push((i - 1, e));
        }
    }
    BraidWord { strands: b.strands - 1, letters }
}

/// Rewrites a pure braid given in Artin generators as a word in the
/// `a_{i,j}`, by peeling off the last strand recursively.
pub fn sigma_to_pure(b: &BraidWord) -> Result<PureBraidWord> {
    if !b.is_pure() {
        return Err(Error::Infeasible("braid is not pure".into()));
    }
    Ok(comb(b))
}

fn comb(b: &BraidWord) -> PureBraidWord {
    let n = b.strands;
    if n <= 1 {
        return PureBraidWord::identity(n);
    }
    let lower = comb(&forget_last_strand(b));
    let lower = PureBraidWord { strands: n, letters: lower.letters };
    // f lies in the free subgroup generated by a_{1,n}..a_{n-1,n} and sends
    // y_n to W y_n W^{-1}; killing y_n in W reads off f with a_{i,n} ↦ y_i.
    let f = pure_to_sigma(&lower).inverse().mul(b).reduced();
    let image = artin_full(&f, &gen(n, n)).expect("ranks agree");
    debug_assert_eq!(image.len() % 2, 1);
    let half = (image.len() - 1) / 2;
    let w = FreeWord {
        rank: n,
        letters: image.letters[..half].iter().copied().filter(|&(g, _)| g != n).collect(),
    }
    .reduced();
    let mut out = lower;
    out.letters.extend(w.letters.iter().map(|&(i, e)| ((i, n), e)));
    out
}

/// Signed crossing counts per unordered pair of start positions.
pub fn crossing_numbers(b: &BraidWord) -> AbelianBraidVector {
    let mut at: Vec<usize> = (1..=b.strands).collect();
    let mut v = AbelianBraidVector::zero(b.strands);
    for &(i, e) in &b.letters {
        v.add(at[i - 1], at[i], e as i64);
        at.swap(i - 1, i);
    }
    v
}

/// Linking numbers: half the crossing counts. Every count must be even,
/// which holds for pure braids.
pub fn linking_numbers(b: &BraidWord) -> Result<AbelianBraidVector> {
    let mut v = crossing_numbers(b);
    if v.coords.iter().any(|c| c % 2 != 0) {
        return Err(Error::Infeasible("odd crossing count; braid is not pure".into()));
    }
    v.coords.iter_mut().for_each(|c| *c /= 2);
    Ok(v)
}

pub fn abelianize_pure(p: &PureBraidWord) -> AbelianBraidVector {
    let mut v = AbelianBraidVector::zero(p.strands);
    for &((i, j), e) in &p.letters {
        v.add(i, j, e as i64);
    }
    v
}

fn parse_index(s: &str) -> Option<usize> {
    s.parse().ok()
}

/// Parses whitespace-separated tokens `base` or `base^k`; `1` is the empty
/// word.
fn parse_letters<T: Copy>(s: &str, base: impl Fn(&str) -> Option<T>) -> Result<Vec<(T, i32)>> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let (b, k) = match tok.rsplit_once('^') {
            Some((b, k)) => {
                let k: i32 = k.parse().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                (b, k)
            }
            None => (tok, 1),
        };
        if k == 0 {
            return Err(Error::Parse(format!("zero exponent in {tok:?}")));
        }
        let g = base(b).ok_or_else(|| Error::Parse(format!("bad letter {tok:?}")))?;
        out.extend(std::iter::repeat((g, k.signum())).take(k.unsigned_abs() as usize));
    }
    Ok(out)
}

fn format_letters<T: PartialEq + Copy>(letters: &[(T, i32)], name: impl Fn(T) -> String) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    let mut toks = Vec::new();
    let mut k = 0;
    while k < letters.len() {
        let (g, e) = letters[k];
        let mut run = 1;
        while k + run < letters.len() && letters[k + run] == (g, e) {
            run += 1;
        }
        let p = run as i32 * e;
        toks.push(if p == 1 { name(g) } else { format!("{}^{p}", name(g)) });
        k += run;
    }
    toks.join(" ")
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters, |g| format!("y{g}")))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters, |g| format!("s{g}")))
    }
}

impl fmt::Display for PureBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters, |(i, j)| format!("a({i},{j})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(n: usize, s: &str) -> FreeWord {
        FreeWord::parse(s, n).unwrap()
    }

    #[test]
    fn sigma_one_on_y1() {
        let b = BraidWord::parse("s1", 2).unwrap();
        assert_eq!(artin_full(&b, &y(2, "y1")).unwrap(), y(2, "y1 y2 y1^-1"));
    }

    #[test]
    fn half_twist_on_y2() {
        let b = BraidWord::parse("s2 s3 s2", 5).unwrap();
        assert_eq!(artin_full(&b, &y(5, "y2")).unwrap(), y(5, "y2 y3 y4 y3^-1 y2^-1"));
    }

    #[test]
    fn pure_examples() {
        let a12 = PureBraidWord::parse("a(1,2)", 3).unwrap();
        assert_eq!(artin_pure(&a12, &y(3, "y3")).unwrap(), y(3, "y3"));
        let sq = PureBraidWord::parse("a(1,2)^2", 3).unwrap();
        assert_eq!(artin_pure(&sq, &y(3, "y2")).unwrap(), y(3, "y1 y2 y1 y2 y2 y2^-1 y1^-1 y2^-1 y1^-1").reduced());
        let p = PureBraidWord::parse("a(1,2) a(2,3) a(1,2)^-1", 3).unwrap();
        let w = y(3, "y2^-1 y1^-1 y2 y1 y2");
        assert_eq!(artin_pure(&p, &y(3, "y3")).unwrap(), w.conjugate(&y(3, "y3")));
    }

    #[test]
    fn embedding_examples() {
        let p = PureBraidWord::parse("a(1,3)", 3).unwrap();
        assert_eq!(pure_to_sigma(&p).to_string(), "s2 s1^2 s2^-1");
        assert_eq!(linking_numbers(&pure_to_sigma(&p)).unwrap().coords, vec![0, 1, 0]);
        assert_eq!(pure_to_sigma(&PureBraidWord::identity(3)).letters, vec![]);
    }

    #[test]
    fn combing_examples() {
        let b = BraidWord::parse("s1^2", 2).unwrap();
        assert_eq!(sigma_to_pure(&b).unwrap().to_string(), "a(1,2)");
        let b = BraidWord::parse("s2 s3 s2 s2 s3 s2", 5).unwrap();
        let p = sigma_to_pure(&b).unwrap();
        assert!(braids_equal(&pure_to_sigma(&p), &b));
        let v = abelianize_pure(&p);
        assert_eq!((v.get(2, 3), v.get(2, 4), v.get(3, 4), v.get(1, 2)), (1, 1, 1, 0));
        assert!(sigma_to_pure(&BraidWord::parse("s1", 2).unwrap()).is_err());
    }

    #[test]
    fn linking_of_conjugated_generator() {
        let p = PureBraidWord::parse("a(1,2) a(2,3) a(1,2)^-1", 3).unwrap();
        assert_eq!(abelianize_pure(&p).coords, vec![0, 0, 1]);
        assert_eq!(linking_numbers(&pure_to_sigma(&p)).unwrap().coords, vec![0, 0, 1]);
        let b = BraidWord::parse("s1^2 s4^2", 5).unwrap();
        let v = linking_numbers(&b).unwrap();
        assert_eq!(v.get(1, 2) + v.get(4, 5), 2);
        assert_eq!(v.coords.iter().sum::<i64>(), 2);
    }

    #[test]
    fn text_round_trip() {
        for s in ["1", "y1^2 y2^-1", "y3 y3^-1 y1"] {
            assert_eq!(FreeWord::parse(s, 3).unwrap().to_string(), s);
        }
        assert_eq!(PureBraidWord::parse("a(1,2)^2 a(2,3)^-1", 3).unwrap().to_string(), "a(1,2)^2 a(2,3)^-1");
        assert_eq!(BraidWord::parse("s1 s2^-1", 3).unwrap().to_string(), "s1 s2^-1");
        assert!(BraidWord::parse("s3", 3).is_err());
    }

    #[test]
    fn pair_indexing() {
        let ps = pairs(5);
        for (k, &(i, j)) in ps.iter().enumerate() {
            assert_eq!(pair_index(5, i, j), k);
        }
    }
}
