//! Toric arrangements, their layers, and supersolvable chains.
//!
//! A hypersurface is `{t : t^chi = exp(2πi r)}` for a primitive character
//! `chi` and a label `r ∈ ℚ/ℤ`. A layer is a connected component of an
//! intersection; it is stored as a saturated lattice of characters (HNF rows)
//! together with the value of each basis character on the layer.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermite_normal_form, smith_normal_form, IntMatrix};

/// Exact element of ℚ/ℤ, kept reduced into `[0, 1)`.
pub type Q = Ratio<i64>;

/// Reduces a rational into `[0, 1)`.
pub fn mod1(r: Q) -> Q {
    let f = r - r.floor();
    if f < Q::zero() {
        f + Q::one()
    } else {
        f
    }
}

/// `Σ c_i φ_i mod 1` for big integer coefficients.
fn combine(coeffs: &[BigInt], phi: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (c, p) in coeffs.iter().zip(phi) {
        if p.is_zero() || c.is_zero() {
            continue;
        }
        let den = BigInt::from(*p.denom());
        let c = c.mod_floor(&den).to_i64().expect("reduced below denominator");
        acc = mod1(acc + Q::new(c * p.numer(), *p.denom()));
    }
    acc
}

/// Parses `"p/q"` or `"p"` into a label reduced mod 1.
pub fn parse_value(s: &str) -> Result<Q> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad value {s:?}")))?;
            let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad value {s:?}")))?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Q::new(p, q)
        }
        None => Q::from_integer(s.parse().map_err(|_| Error::Parse(format!("bad value {s:?}")))?),
    };
    Ok(mod1(r))
}

pub fn format_value(r: &Q) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// One connected hypersurface `t^chi = exp(2πi value)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hypersurface {
    pub chi: Vec<i64>,
    pub value: Q,
}

impl Hypersurface {
    /// Builds a hypersurface, normalizing the sign so that the first nonzero
    /// entry of `chi` is positive.
    pub fn new(chi: Vec<i64>, value: Q) -> Result<Self> {
        let g = gcd_slice(&chi);
        if g == 0 {
            return Err(Error::Infeasible("zero character".into()));
        }
        if g != 1 {
            return Err(Error::Infeasible(format!("character {chi:?} is not primitive")));
        }
        let mut h = Hypersurface { chi, value: mod1(value) };
        if h.chi.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            h.chi.iter_mut().for_each(|x| *x = -*x);
            h.value = mod1(-h.value);
        }
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.chi.len()
    }

    pub fn to_layer(&self) -> Layer {
        intersect_layer(&Layer::ambient(self.dim()), self)
            .expect("dimensions agree")
            .pop()
            .expect("a hypersurface is nonempty")
    }
}

impl fmt::Display for Hypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chi: Vec<String> = self.chi.iter().map(|x| x.to_string()).collect();
        write!(f, "({}) = {}", chi.join(","), format_value(&self.value))
    }
}

/// All connected components of `{t^chi = 1}`: one per `m`-th root of unity,
/// where `m = gcd(chi)`.
pub fn expand_character(chi: &[i64]) -> Result<Vec<Hypersurface>> {
    let m = gcd_slice(chi);
    if m == 0 {
        return Err(Error::Infeasible("zero character".into()));
    }
    let prim: Vec<i64> = chi.iter().map(|x| x / m).collect();
    let mut out: Vec<Hypersurface> = (0..m)
        .map(|j| Hypersurface::new(prim.clone(), Q::new(j, m)))
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// Components of `{t^chi = exp(2πi value)}` for a possibly imprimitive `chi`.
pub fn expand_equation(chi: &[i64], value: Q) -> Result<Vec<Hypersurface>> {
    let m = gcd_slice(chi);
    if m == 0 {
        return Err(Error::Infeasible("zero character".into()));
    }
    let prim: Vec<i64> = chi.iter().map(|x| x / m).collect();
    let value = mod1(value);
    let mut out: Vec<Hypersurface> = (0..m)
        .map(|j| Hypersurface::new(prim.clone(), (value + Q::from_integer(j)) / m))
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// A finite, duplicate-free list of hypersurfaces in `(ℂ^×)^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub dim: usize,
    pub hypersurfaces: Vec<Hypersurface>,
}

impl Arrangement {
    pub fn new(dim: usize) -> Self {
        Arrangement { dim, hypersurfaces: Vec::new() }
    }

    /// Adds a hypersurface unless it is already present. Returns its index.
    pub fn push(&mut self, h: Hypersurface) -> Result<usize> {
        if h.dim() != self.dim {
            return Err(Error::Infeasible(format!(
                "hypersurface {h} does not live in dimension {}",
                self.dim
            )));
        }
        if let Some(i) = self.hypersurfaces.iter().position(|x| *x == h) {
            return Ok(i);
        }
        self.hypersurfaces.push(h);
        Ok(self.hypersurfaces.len() - 1)
    }

    /// All components of the given characters, in order.
    pub fn from_characters(dim: usize, chars: &[Vec<i64>]) -> Result<Self> {
        let mut a = Arrangement::new(dim);
        for chi in chars {
            if chi.len() != dim {
                return Err(Error::Infeasible(format!("character {chi:?} has wrong length")));
            }
            for h in expand_character(chi)? {
                a.push(h)?;
            }
        }
        Ok(a)
    }

    pub fn len(&self) -> usize {
        self.hypersurfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypersurfaces.is_empty()
    }

    /// Rank of the character lattice, i.e. the codimension of maximal layers.
    pub fn rank(&self) -> usize {
        if self.hypersurfaces.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<i64>> = self.hypersurfaces.iter().map(|h| h.chi.clone()).collect();
        linalg::rank(&IntMatrix::from_i64_rows(&rows, self.dim))
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.dim
    }

    fn require_essential(&self) -> Result<()> {
        if !self.is_essential() {
            return Err(Error::Infeasible(format!(
                "arrangement of rank {} in dimension {} is not essential; maximal layers are not points",
                self.rank(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// Rewrites the arrangement on the torus dual to the saturation of its
/// character lattice. The complement of the input is the complement of the
/// output times `(ℂ^×)^(dim - rank)`.
pub fn essentialize(a: &Arrangement) -> Result<Arrangement> {
    let rows: Vec<Vec<BigInt>> = a.hypersurfaces.iter().map(|h| linalg::big_vec(&h.chi)).collect();
    let (basis, _) = linalg::saturate(&rows, a.dim);
    let lattice = Layer { lattice: to_small_rows(&basis)?, phi: vec![Q::zero(); basis.len()] };
    let mut out = Arrangement::new(basis.len());
    for h in &a.hypersurfaces {
        let coeffs = lattice
            .coordinates(&h.chi)
            .ok_or_else(|| Error::Internal("character outside its own saturation".into()))?;
        out.push(Hypersurface::new(coeffs, h.value)?)?;
    }
    Ok(out)
}

fn to_small_rows(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| linalg::small_vec(r).ok_or_else(|| Error::Numeric("lattice entry exceeds i64".into())))
        .collect()
}

/// A connected component of an intersection of hypersurfaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Layer {
    /// HNF basis of the saturated character lattice vanishing on the layer.
    pub lattice: Vec<Vec<i64>>,
    /// Value of each basis character on the layer.
    pub phi: Vec<Q>,
}

impl Layer {
    /// The whole torus.
    pub fn ambient(_dim: usize) -> Self {
        Layer { lattice: Vec::new(), phi: Vec::new() }
    }

    pub fn codim(&self) -> usize {
        self.lattice.len()
    }

    /// Canonical form of the layer spanned by the given (saturated, full
    /// rank) rows with the given values.
    fn canonical(rows: &[Vec<BigInt>], phi: &[Q], dim: usize) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Layer::ambient(dim));
        }
        let (h, u) = hermite_normal_form(&IntMatrix::from_rows(rows, dim));
        let mut lattice = Vec::new();
        let mut values = Vec::new();
        for i in 0..h.rows() {
            if h.is_zero_row(i) {
                continue;
            }
            lattice.push(
                linalg::small_vec(h.row(i)).ok_or_else(|| Error::Numeric("lattice entry exceeds i64".into()))?,
            );
            values.push(combine(u.row(i), phi));
        }
        Ok(Layer { lattice, phi: values })
    }

    /// Integer coordinates of `v` in the lattice basis, if `v` lies in it.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut rest: Vec<i64> = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.lattice.len());
        for row in &self.lattice {
            let p = row.iter().position(|&x| x != 0)?;
            if rest[p] % row[p] != 0 {
                return None;
            }
            let c = rest[p] / row[p];
            for (r, x) in rest.iter_mut().zip(row) {
                *r -= c * x;
            }
            coeffs.push(c);
        }
        rest.iter().all(|&x| x == 0).then_some(coeffs)
    }

    /// Value of the character `v` on the layer, if `v` is constant there.
    pub fn evaluate(&self, v: &[i64]) -> Option<Q> {
        let c = self.coordinates(v)?;
        Some(combine(&linalg::big_vec(&c), &self.phi))
    }

    /// Whether `self ⊆ other` as subsets of the torus, i.e. `other ≤ self`
    /// in the poset of layers.
    pub fn is_contained_in(&self, other: &Layer) -> bool {
        other
            .lattice
            .iter()
            .zip(&other.phi)
            .all(|(row, val)| self.evaluate(row) == Some(*val))
    }

    pub fn contained_in_hypersurface(&self, h: &Hypersurface) -> bool {
        self.evaluate(&h.chi) == Some(h.value)
    }
}

/// Connected components of `x ∩ h`.
pub fn intersect_layer(x: &Layer, h: &Hypersurface) -> Result<Vec<Layer>> {
    let dim = h.dim();
    if x.lattice.iter().any(|r| r.len() != dim) {
        return Err(Error::Infeasible("layer and hypersurface dimensions differ".into()));
    }
    let mut gens: Vec<Vec<BigInt>> = x.lattice.iter().map(|r| linalg::big_vec(r)).collect();
    gens.push(linalg::big_vec(&h.chi));
    let mut phi = x.phi.clone();
    phi.push(h.value);

    // U G V = D. Rows of U G are D_i w_i with w_i the rows of V^{-1}; rows
    // past the rank are relations among the generators, whose values must
    // vanish for the intersection to be nonempty.
    let snf = smith_normal_form(&IntMatrix::from_rows(&gens, dim));
    let psi: Vec<Q> = (0..gens.len()).map(|i| combine(snf.u.row(i), &phi)).collect();
    let diag = snf.invariants();
    let s = diag.len();
    if psi[s..].iter().any(|v| !v.is_zero()) {
        return Ok(Vec::new());
    }
    let degs: Vec<i64> = diag
        .iter()
        .map(|d| d.to_i64().ok_or_else(|| Error::Numeric("component count exceeds i64".into())))
        .collect::<Result<_>>()?;
    let basis: Vec<Vec<BigInt>> = (0..s).map(|i| snf.v_inv.row(i).to_vec()).collect();

    let total: i64 = degs.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut ks = vec![0i64; s];
    loop {
        let vals: Vec<Q> = (0..s).map(|i| mod1((psi[i] + Q::from_integer(ks[i])) / degs[i])).collect();
        out.push(Layer::canonical(&basis, &vals, dim)?);
        // Odometer over all k_i in 0..d_i.
        let mut i = 0;
        while i < s {
            ks[i] += 1;
            if ks[i] < degs[i] {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
        if i == s {
            break;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Default bound on the number of layers built.
pub const DEFAULT_POSET_CAP: usize = 10_000;

/// The poset of layers ordered by reverse inclusion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LayerPoset {
    pub dim: usize,
    /// Sorted by codimension, then canonical form. Element 0 is the torus.
    pub elements: Vec<Layer>,
    /// Cover relations `(lower, upper)`.
    pub covers: Vec<(usize, usize)>,
}

impl LayerPoset {
    /// `elements[i] ≤ elements[j]`, i.e. layer j is contained in layer i.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.elements[j].is_contained_in(&self.elements[i])
    }

    pub fn index_of(&self, x: &Layer) -> Option<usize> {
        self.elements.iter().position(|y| y == x)
    }

    pub fn rank_of(&self, i: usize) -> usize {
        self.elements[i].codim()
    }
}

pub fn build_poset(a: &Arrangement, max_codim: usize, cap: usize) -> Result<LayerPoset> {
    if max_codim > a.dim {
        return Err(Error::Infeasible(format!("max codimension {max_codim} exceeds dimension {}", a.dim)));
    }
    let mut levels: Vec<BTreeSet<Layer>> = vec![BTreeSet::from([Layer::ambient(a.dim)])];
    let mut count = 1;
    for c in 1..=max_codim {
        let mut next = BTreeSet::new();
        for x in &levels[c - 1] {
            for h in &a.hypersurfaces {
                for y in intersect_layer(x, h)? {
                    if y.codim() == c && next.insert(y) {
                        count += 1;
                        if count > cap {
                            return Err(Error::CapExceeded(format!("poset has more than {cap} layers")));
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    let elements: Vec<Layer> = levels.into_iter().flatten().collect();
    let mut covers = Vec::new();
    for (j, y) in elements.iter().enumerate() {
        for (i, x) in elements.iter().enumerate() {
            if x.codim() + 1 == y.codim() && y.is_contained_in(x) {
                covers.push((i, j));
            }
        }
    }
    covers.sort();
    Ok(LayerPoset { dim: a.dim, elements, covers })
}

fn check_cocharacter(a: &Arrangement, y: &[i64]) -> Result<()> {
    if y.len() != a.dim {
        return Err(Error::Infeasible(format!("cocharacter {y:?} does not live in dimension {}", a.dim)));
    }
    if gcd_slice(y) != 1 {
        return Err(Error::Infeasible(format!("cocharacter {y:?} is not primitive")));
    }
    Ok(())
}

fn pairing(chi: &[i64], y: &[i64]) -> i64 {
    chi.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// A unimodular `u` with `u y = e_last`. Identity when `y` already is.
pub fn unimodular_to_last(y: &[i64]) -> IntMatrix {
    let d = y.len();
    if y.iter().enumerate().all(|(i, &x)| x == i64::from(i + 1 == d)) {
        return IntMatrix::identity(d);
    }
    let col: Vec<Vec<i64>> = y.iter().map(|&x| vec![x]).collect();
    let (_, p) = hermite_normal_form(&IntMatrix::from_i64_rows(&col, 1));
    // p y = e_1; rotate e_1 to e_d.
    let mut rot = IntMatrix::zeros(d, d);
    for i in 0..d {
        rot.set(i, (i + 1) % d, BigInt::one());
    }
    rot.mul(&p)
}

/// Index lists of `𝒜_Y` (characters vanishing on `y`) and its complement.
fn split_by(a: &Arrangement, y: &[i64]) -> (Vec<usize>, Vec<usize>) {
    (0..a.len()).partition(|&i| pairing(&a.hypersurfaces[i].chi, y) == 0)
}

/// `(𝒜_Y, 𝒜/Y, u)`: the hypersurfaces invariant under the subtorus `y`,
/// their images in the quotient torus, and the coordinate change used.
pub fn restrict_and_quotient(a: &Arrangement, y: &[i64]) -> Result<(Arrangement, Arrangement, IntMatrix)> {
    check_cocharacter(a, y)?;
    let u = unimodular_to_last(y);
    let u_inv = u.unimodular_inverse().ok_or_else(|| Error::Internal("transform not unimodular".into()))?;
    let (inside, _) = split_by(a, y);
    let mut a_y = Arrangement::new(a.dim);
    let mut quot = Arrangement::new(a.dim - 1);
    for i in inside {
        let h = &a.hypersurfaces[i];
        a_y.push(h.clone())?;
        let chi = transform_character(&h.chi, &u_inv)?;
        debug_assert_eq!(*chi.last().unwrap(), 0);
        quot.push(Hypersurface::new(chi[..a.dim - 1].to_vec(), h.value)?)?;
    }
    Ok((a_y, quot, u))
}

/// `chi * m` as a row vector.
fn transform_character(chi: &[i64], m: &IntMatrix) -> Result<Vec<i64>> {
    let row = IntMatrix::from_i64_rows(&[chi.to_vec()], chi.len()).mul(m);
    linalg::small_vec(row.row(0)).ok_or_else(|| Error::Numeric("character entry exceeds i64".into()))
}

pub fn covering_degree(h: &Hypersurface, y: &[i64]) -> Result<i64> {
    let k = pairing(&h.chi, y).abs();
    if k == 0 {
        return Err(Error::Infeasible(format!("hypersurface {h} is invariant under {y:?}")));
    }
    Ok(k)
}

/// Why a corank-one ideal test failed. Indices refer to the arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdealFailure {
    /// A component of `H_first ∩ H_second` lies in no invariant hypersurface.
    Pair { first: usize, second: usize, layer: Layer },
    /// The hypersurface meets the subtorus in more than one component.
    Degree { hypersurface: usize, degree: i64 },
}

pub fn is_m_ideal(a: &Arrangement, y: &[i64]) -> Result<Option<IdealFailure>> {
    check_cocharacter(a, y)?;
    let (inside, outside) = split_by(a, y);
    for (n, &i) in outside.iter().enumerate() {
        for &j in &outside[n + 1..] {
            let x = a.hypersurfaces[i].to_layer();
            for comp in intersect_layer(&x, &a.hypersurfaces[j])? {
                let covered = inside.iter().any(|&k| comp.contained_in_hypersurface(&a.hypersurfaces[k]));
                if !covered {
                    return Ok(Some(IdealFailure::Pair { first: i, second: j, layer: comp }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_tm_ideal(a: &Arrangement, y: &[i64]) -> Result<Option<IdealFailure>> {
    if let Some(f) = is_m_ideal(a, y)? {
        return Ok(Some(f));
    }
    let (_, outside) = split_by(a, y);
    for i in outside {
        let degree = covering_degree(&a.hypersurfaces[i], y)?;
        if degree != 1 {
            return Ok(Some(IdealFailure::Degree { hypersurface: i, degree }));
        }
    }
    Ok(None)
}

/// Covering degrees of the non-invariant hypersurfaces, in arrangement order.
pub fn compute_composition(a: &Arrangement, y: &[i64]) -> Result<Vec<i64>> {
    if let Some(f) = is_m_ideal(a, y)? {
        return Err(Error::Infeasible(format!("not an M-ideal: {f:?}")));
    }
    let (_, outside) = split_by(a, y);
    outside.iter().map(|&i| covering_degree(&a.hypersurfaces[i], y)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    StrictlySupersolvable,
    Supersolvable,
}

/// A hypersurface of stage `k` in solved coordinates:
/// `x_1^{a_1} ⋯ x_{k-1}^{a_{k-1}} x_k^{degree} = exp(2πi value)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageHypersurface {
    /// Index into the original arrangement.
    pub source: usize,
    pub exponents: Vec<i64>,
    pub degree: i64,
    pub value: Q,
}

impl StageHypersurface {
    /// Writes the hypersurface as `x_k^{|degree|} = exp(2πi mu) x^m`.
    pub fn solved(&self) -> (Q, Vec<i64>) {
        if self.degree > 0 {
            (self.value, self.exponents.iter().map(|x| -x).collect())
        } else {
            (mod1(-self.value), self.exponents.clone())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    /// 1-based; stage k has fiber coordinate x_k.
    pub index: usize,
    pub members: Vec<StageHypersurface>,
}

impl Stage {
    pub fn is_strict(&self) -> bool {
        self.members.iter().all(|h| h.degree.abs() == 1)
    }

    /// Number of punctures of the fiber plane, counting the origin.
    pub fn fiber_rank(&self) -> usize {
        1 + self.members.iter().map(|h| h.degree.unsigned_abs() as usize).sum::<usize>()
    }
}

/// A verified chain of corank-one ideals with the arrangement in the
/// coordinates it induces.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Chain {
    pub dim: usize,
    /// Cocharacters from the top level down, each in the coordinates of the
    /// quotient torus reached so far.
    pub cocharacters: Vec<Vec<i64>>,
    /// Solved characters are `chi * transform^{-1}`.
    pub transform: IntMatrix,
    /// `stages[k - 1]` is stage k.
    pub stages: Vec<Stage>,
}

impl Chain {
    pub fn classification(&self) -> Classification {
        if self.stages.iter().all(Stage::is_strict) {
            Classification::StrictlySupersolvable
        } else {
            Classification::Supersolvable
        }
    }

    pub fn fiber_ranks(&self) -> Vec<usize> {
        self.stages.iter().map(Stage::fiber_rank).collect()
    }

    pub fn stage(&self, k: usize) -> Result<&Stage> {
        if k == 0 || k > self.stages.len() {
            return Err(Error::Infeasible(format!("no stage {k}; stages run 1..={}", self.stages.len())));
        }
        Ok(&self.stages[k - 1])
    }
}

/// Outcome of checking a proposed chain.
#[derive(Clone, Debug)]
pub enum ChainVerdict {
    Valid(Chain),
    /// The test failed at the given level (torus dimension).
    Invalid { level: usize, failure: IdealFailure },
}

/// Working state while descending a chain: current characters of the
/// original hypersurfaces, restricted to the first `level` coordinates.
struct Descent<'a> {
    a: &'a Arrangement,
    transform: IntMatrix,
}

impl Descent<'_> {
    fn solved(&self) -> Result<Vec<Vec<i64>>> {
        let inv = self
            .transform
            .unimodular_inverse()
            .ok_or_else(|| Error::Internal("chain transform not unimodular".into()))?;
        self.a.hypersurfaces.iter().map(|h| transform_character(&h.chi, &inv)).collect()
    }

    /// The arrangement of hypersurfaces living on the first `level`
    /// coordinates, with their original indices.
    fn level(&self, level: usize) -> Result<(Arrangement, Vec<usize>)> {
        let solved = self.solved()?;
        let mut arr = Arrangement::new(level);
        let mut idx = Vec::new();
        for (i, chi) in solved.iter().enumerate() {
            if chi[level..].iter().all(|&x| x == 0) {
                arr.push(Hypersurface::new(chi[..level].to_vec(), self.a.hypersurfaces[i].value)?)?;
                idx.push(i);
            }
        }
        Ok((arr, idx))
    }

    fn apply(&mut self, u: &IntMatrix) {
        let d = self.transform.rows();
        let r = u.rows();
        let mut block = IntMatrix::identity(d);
        for i in 0..r {
            for j in 0..r {
                block.set(i, j, u.get(i, j).clone());
            }
        }
        self.transform = block.mul(&self.transform);
    }
}

fn remap(f: IdealFailure, idx: &[usize]) -> IdealFailure {
    match f {
        IdealFailure::Pair { first, second, layer } => {
            IdealFailure::Pair { first: idx[first], second: idx[second], layer }
        }
        IdealFailure::Degree { hypersurface, degree } => {
            IdealFailure::Degree { hypersurface: idx[hypersurface], degree }
        }
    }
}

/// Checks a chain given by cocharacters from the top level down.
pub fn verify_chain(a: &Arrangement, cocharacters: &[Vec<i64>]) -> Result<ChainVerdict> {
    a.require_essential()?;
    if cocharacters.len() + 1 != a.dim.max(1) {
        return Err(Error::Infeasible(format!(
            "a chain in dimension {} needs {} cocharacters, got {}",
            a.dim,
            a.dim.saturating_sub(1),
            cocharacters.len()
        )));
    }
    let mut descent = Descent { a, transform: IntMatrix::identity(a.dim) };
    for (n, y) in cocharacters.iter().enumerate() {
        let level = a.dim - n;
        let (arr, idx) = descent.level(level)?;
        check_cocharacter(&arr, y)?;
        if let Some(f) = is_m_ideal(&arr, y)? {
            return Ok(ChainVerdict::Invalid { level, failure: remap(f, &idx) });
        }
        descent.apply(&unimodular_to_last(y));
    }
    Ok(ChainVerdict::Valid(assemble_chain(&descent, cocharacters.to_vec())?))
}

fn assemble_chain(descent: &Descent, cocharacters: Vec<Vec<i64>>) -> Result<Chain> {
    let solved = descent.solved()?;
    let d = descent.a.dim;
    let mut stages: Vec<Stage> = (1..=d).map(|index| Stage { index, members: Vec::new() }).collect();
    for (i, chi) in solved.iter().enumerate() {
        let k = chi.iter().rposition(|&x| x != 0).expect("nonzero character");
        stages[k].members.push(StageHypersurface {
            source: i,
            exponents: chi[..k].to_vec(),
            degree: chi[k],
            value: descent.a.hypersurfaces[i].value,
        });
    }
    Ok(Chain { dim: d, cocharacters, transform: descent.transform.clone(), stages })
}

/// Candidate cocharacters at one level: the last coordinate vector, then
/// primitive generators of kernels of rank-deficient character subsets.
fn candidates(a: &Arrangement) -> Vec<Vec<i64>> {
    let r = a.dim;
    let mut e = vec![0i64; r];
    e[r - 1] = 1;
    let mut out = vec![e.clone()];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([e]);
    let chars: Vec<Vec<i64>> = a
        .hypersurfaces
        .iter()
        .map(|h| h.chi.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut subset: Vec<usize> = Vec::new();
    subsets(chars.len(), r - 1, &mut subset, &mut |s| {
        let rows: Vec<Vec<i64>> = s.iter().map(|&i| chars[i].clone()).collect();
        let m = IntMatrix::from_i64_rows(&rows, r);
        let ker = linalg::integer_kernel(&m);
        if ker.len() != 1 {
            return;
        }
        let Some(mut v) = linalg::small_vec(&ker[0]) else { return };
        if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        if !seen.contains(&neg) && seen.insert(v.clone()) {
            out.push(v);
        }
    });
    out
}

fn subsets(n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    let start = cur.last().map_or(0, |&x| x + 1);
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, cur, f);
        cur.pop();
    }
}

fn search(descent: &mut Descent, chosen: &mut Vec<Vec<i64>>, strict_only: bool) -> Result<bool> {
    let level = descent.a.dim - chosen.len();
    if level <= 1 {
        return Ok(true);
    }
    let (arr, _) = descent.level(level)?;
    for y in candidates(&arr) {
        let failure = if strict_only { is_tm_ideal(&arr, &y)? } else { is_m_ideal(&arr, &y)? };
        if failure.is_some() {
            continue;
        }
        let saved = descent.transform.clone();
        descent.apply(&unimodular_to_last(&y));
        chosen.push(y);
        if search(descent, chosen, strict_only)? {
            return Ok(true);
        }
        chosen.pop();
        descent.transform = saved;
    }
    Ok(false)
}

/// Depth-first search for a chain, trying strictly supersolvable chains
/// first. `None` does not certify that no chain exists.
pub fn find_chain(a: &Arrangement) -> Result<Option<Chain>> {
    a.require_essential()?;
    for strict_only in [true, false] {
        let mut descent = Descent { a, transform: IntMatrix::identity(a.dim) };
        let mut chosen = Vec::new();
        if search(&mut descent, &mut chosen, strict_only)? {
            return Ok(Some(assemble_chain(&descent, chosen)?));
        }
    }
    Ok(None)
}
