//! Group-theoretic and cohomological invariants assembled from a chain:
//! π1 presentations, LCS Lie relations, the image of `H_2`, the degree-2
//! cohomology ideal, Hilbert series, LCS ranks and topological complexity.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::{essentialize, find_chain, Arrangement, Chain, Classification};
use crate::error::{Error, Result};
use crate::linalg::{integer_kernel, sparse_from_dense, sparse_rank, Echelon, IntMatrix, SparseVec};
use crate::roots::{base_generators, homological_root_hom, Generator};
use crate::tracer::{base_loops, loop_class, TraceOptions, TraceResult};
use crate::words::{artin_full, pair_count, pair_index, pairs, FreeWord};

/// Generators of `π_1` of the complement, stage-major: every puncture of
/// every stage fiber, the axis first.
pub fn fiber_generators(chain: &Chain) -> Vec<Generator> {
    chain
        .stages
        .iter()
        .flat_map(|s| (0..s.fiber_rank()).map(move |index| Generator { stage: s.index, index }))
        .collect()
}

/// Basis of `H_1` of the complement of a strictly supersolvable chain.
pub fn homology_generators(chain: &Chain) -> Vec<Generator> {
    base_generators(chain, chain.stages.len() + 1)
}

fn position(gens: &[Generator], g: Generator) -> Result<usize> {
    gens.iter()
        .position(|&h| h == g)
        .ok_or_else(|| Error::Internal(format!("generator {g} missing from the generator list")))
}

fn require_strict(chain: &Chain, what: &str) -> Result<()> {
    if chain.classification() != Classification::StrictlySupersolvable {
        return Err(Error::Infeasible(format!("{what} needs a strictly supersolvable chain")));
    }
    Ok(())
}

/// One defining relation `u^{-1} v u = φ(u)(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRelation {
    pub conjugator: Generator,
    pub fiber: Generator,
    pub lhs: FreeWord,
    pub rhs: FreeWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<GroupRelation>,
}

impl GroupPresentation {
    pub fn name(g: Generator) -> String {
        format!("y({},{})", g.index, g.stage)
    }

    fn render(&self, w: &FreeWord) -> String {
        w.render(|i| Self::name(self.generators[i - 1]))
    }

    pub fn relation_text(&self, r: &GroupRelation) -> String {
        format!("{} = {}", self.render(&r.lhs), self.render(&r.rhs))
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.generators.iter().map(|&g| Self::name(g)).collect();
        writeln!(f, "generators: {}", names.join(" "))?;
        for r in &self.relations {
            writeln!(f, "{}", self.relation_text(r))?;
        }
        Ok(())
    }
}

/// Presentation of `π_1` from the monodromy of stages `2..=r`;
/// `monodromy[j - 2]` holds the traces of stage `j` along every loop of its
/// base. Fiber generators are the standard generators in strand order at
/// the basepoint, named by the puncture they encircle.
pub fn pi1_presentation(chain: &Chain, monodromy: &[Vec<(Generator, TraceResult)>]) -> Result<GroupPresentation> {
    let r = chain.stages.len();
    if monodromy.len() + 1 != r {
        return Err(Error::Infeasible(format!(
            "monodromy given for {} stages, the chain needs stages 2..={r}",
            monodromy.len()
        )));
    }
    let generators = fiber_generators(chain);
    let rank = generators.len();
    let mut relations = Vec::new();
    for (j, traces) in (2..=r).zip(monodromy) {
        let base: Vec<Generator> = generators.iter().copied().filter(|g| g.stage < j).collect();
        let n = chain.stage(j)?.fiber_rank();
        let labels = &traces
            .first()
            .ok_or_else(|| Error::Infeasible(format!("no traces for stage {j}")))?
            .1
            .labels;
        if labels.len() != n {
            return Err(Error::Infeasible(format!("stage {j} traces have {} strands, expected {n}", labels.len())));
        }
        // Global generator number (1-based) of the fiber generator at each
        // strand position.
        let at_position: Vec<usize> = labels
            .iter()
            .map(|&l| position(&generators, Generator { stage: j, index: l - 1 }).map(|i| i + 1))
            .collect::<Result<_>>()?;
        for &g in &base {
            let (_, trace) = traces
                .iter()
                .find(|(h, _)| *h == g)
                .ok_or_else(|| Error::Infeasible(format!("stage {j} has no trace along {g}")))?;
            if trace.labels != *labels {
                return Err(Error::Internal(format!("stage {j} traces disagree on the strand order")));
            }
            let u = position(&generators, g)? + 1;
            for (q, &v) in at_position.iter().enumerate() {
                let image = artin_full(&trace.sigma_word, &FreeWord::generator(n, q + 1))?;
                let rhs = FreeWord {
                    rank,
                    letters: image.letters.iter().map(|&(p, e)| (at_position[p - 1], e)).collect(),
                };
                let lhs = FreeWord { rank, letters: vec![(u, -1), (v, 1), (u, 1)] };
                relations.push(GroupRelation {
                    conjugator: g,
                    fiber: generators[v - 1],
                    lhs,
                    rhs: rhs.reduced(),
                });
            }
        }
    }
    Ok(GroupPresentation { generators, relations })
}

/// The Lie relation `[u, y] = 0` with `u = X + W` an integer combination of
/// homology generators and `y` a fiber generator of `stage`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTwoRelation {
    pub stage: usize,
    pub base: Generator,
    pub fiber: Generator,
    /// Coefficients over the homology generators; the `fiber` coefficient is
    /// always zero.
    pub u: Vec<i64>,
}

impl DegreeTwoRelation {
    pub fn render(&self, gens: &[Generator]) -> String {
        let mut terms = Vec::new();
        for (c, g) in self.u.iter().zip(gens) {
            let name = g.to_string();
            match *c {
                0 => {}
                1 => terms.push(format!("+ {name}")),
                -1 => terms.push(format!("- {name}")),
                c if c > 0 => terms.push(format!("+ {c}*{name}")),
                c => terms.push(format!("- {}*{name}", -c)),
            }
        }
        let mut u = terms.join(" ");
        if let Some(rest) = u.strip_prefix("+ ") {
            u = rest.to_string();
        }
        format!("[{u}, {}]", self.fiber)
    }
}

/// Defining relations of the LCS Lie algebra beyond the free ones: for each
/// stage `j`, each base generator `X` with induced row `Σ c_{a,b} A_{a,b}`
/// and each fiber generator `Y_q`, the relation
/// `[X + Σ_{(a,b) ∋ q} c_{a,b} (Y_a + Y_b), Y_q]`.
///
/// `X` is the generator of the presentation, i.e. the traced loop with the
/// later coordinates held at the basepoint, so its row is the closed form
/// applied to that loop's class rather than the closed-form row of `X`.
pub fn lcs_ideal(chain: &Chain) -> Result<Vec<DegreeTwoRelation>> {
    require_strict(chain, "the LCS presentation")?;
    let gens = homology_generators(chain);
    let opts = TraceOptions::default();
    let mut out = Vec::new();
    for k in 2..=chain.stages.len() {
        let hrm = homological_root_hom(chain, k)?;
        let n = hrm.strands;
        let y = |a: usize| Generator { stage: k, index: a - 1 };
        let fiber_pos: Vec<usize> = (1..=n).map(|a| position(&gens, y(a))).collect::<Result<_>>()?;
        let loops = base_loops(chain, k, &opts)?;
        for lp in &loops.loops {
            let g = lp.generator;
            let class = loop_class(chain, k, lp, opts.density)?
                .ok_or_else(|| Error::Internal(format!("no loop class at strict stage {k}")))?;
            let mut row = vec![0i64; pair_count(n)];
            for (c, entries) in class.iter().zip(&hrm.entries) {
                for (r, e) in row.iter_mut().zip(entries) {
                    *r += c * e;
                }
            }
            for q in 1..=n {
                let mut u = vec![0i64; gens.len()];
                u[position(&gens, g)?] += 1;
                for (col, (a, b)) in pairs(n).into_iter().enumerate() {
                    if row[col] != 0 && (a == q || b == q) {
                        u[fiber_pos[a - 1]] += row[col];
                        u[fiber_pos[b - 1]] += row[col];
                    }
                }
                u[fiber_pos[q - 1]] = 0;
                out.push(DegreeTwoRelation { stage: k, base: g, fiber: y(q), u });
            }
        }
    }
    Ok(out)
}

/// `u ∧ e_q` in the lexicographic basis of `Λ^2 ℤ^n`; `q` is 0-based.
pub fn wedge_with(u: &[i64], q: usize) -> Vec<i64> {
    let n = u.len();
    let mut out = vec![0i64; pair_count(n)];
    for (a, &c) in u.iter().enumerate() {
        if c == 0 || a == q {
            continue;
        }
        let idx = pair_index(n, a + 1, q + 1);
        out[idx] += if a < q { c } else { -c };
    }
    out
}

/// Image of `H_2` in `Λ^2 H_1`: one row `u ∧ y` per relation.
pub fn h2_image(relations: &[DegreeTwoRelation], gens: &[Generator]) -> Result<IntMatrix> {
    let rows = relations
        .iter()
        .map(|r| Ok(wedge_with(&r.u, position(gens, r.fiber)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_i64_rows(&rows, pair_count(gens.len())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyPresentation {
    pub generators: Vec<Generator>,
    /// HNF basis of the degree-2 part of the ideal, over the lexicographic
    /// pair basis of `Λ^2`.
    pub ideal_basis: Vec<Vec<BigInt>>,
}

impl CohomologyPresentation {
    pub fn rank(&self) -> usize {
        self.ideal_basis.len()
    }

    /// A basis element as a sum of wedges of named generators.
    pub fn render(&self, v: &[BigInt]) -> String {
        let n = self.generators.len();
        let name = |i: usize| {
            let g = self.generators[i - 1];
            format!("x({},{})", g.index, g.stage)
        };
        let mut terms = Vec::new();
        for ((i, j), c) in pairs(n).into_iter().zip(v) {
            if c.is_zero() {
                continue;
            }
            let mono = format!("{}{}", name(i), name(j));
            let abs = c.magnitude().to_string();
            let sign = if c.sign() == num_bigint::Sign::Minus { "-" } else { "+" };
            terms.push(if abs == "1" { format!("{sign} {mono}") } else { format!("{sign} {abs}*{mono}") });
        }
        let s = terms.join(" ");
        s.strip_prefix("+ ").map(str::to_string).unwrap_or(s)
    }
}

/// The degree-2 cohomology ideal: the integer kernel of the dual of the
/// `H_2` image, with `Λ^2` identified with its dual through the
/// lexicographic basis.
pub fn cohomology_ideal(h2: &IntMatrix, gens: &[Generator]) -> Result<CohomologyPresentation> {
    if h2.cols() != pair_count(gens.len()) {
        return Err(Error::Internal(format!(
            "H_2 image has {} columns, expected {} for {} generators",
            h2.cols(),
            pair_count(gens.len()),
            gens.len()
        )));
    }
    if crate::linalg::rank(h2) != h2.rows() {
        return Err(Error::Internal("H_2 image rows are dependent; the map from H_2 should be injective".into()));
    }
    Ok(CohomologyPresentation { generators: gens.to_vec(), ideal_basis: integer_kernel(h2) })
}

/// Column numbering of degree-k monomials, assigned on first use.
#[derive(Default)]
struct MonomialIndex {
    index: HashMap<u64, usize>,
    masks: Vec<u64>,
}

impl MonomialIndex {
    fn get(&mut self, mask: u64) -> usize {
        *self.index.entry(mask).or_insert_with(|| {
            self.masks.push(mask);
            self.masks.len() - 1
        })
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `dim_ℚ (E/I)_k` for `k = 0..=up_to`, where `I` is generated by the degree-2
/// ideal. `I_k` is spanned by `e_i ∧ b` over a basis `b` of `I_{k-1}`.
pub fn hilbert_series(coh: &CohomologyPresentation, up_to: usize) -> Result<Vec<u64>> {
    let n = coh.generators.len();
    if n > 63 {
        return Err(Error::CapExceeded(format!("{n} generators exceed the 63 supported by the Hilbert series")));
    }
    if up_to > n {
        return Err(Error::CapExceeded(format!("degree {up_to} exceeds the number of generators {n}")));
    }
    let mut out = vec![1u64];
    if up_to >= 1 {
        out.push(n as u64);
    }
    if up_to < 2 {
        return Ok(out);
    }
    let pair_masks: Vec<u64> = pairs(n).into_iter().map(|(i, j)| (1u64 << (i - 1)) | (1u64 << (j - 1))).collect();
    // Current degree: basis rows as (mask, coefficient) lists.
    let mut basis: Vec<Vec<(u64, BigInt)>> = coh
        .ideal_basis
        .iter()
        .map(|v| v.iter().zip(&pair_masks).filter(|(c, _)| !c.is_zero()).map(|(c, &m)| (m, c.clone())).collect())
        .collect();
    let mut index = MonomialIndex::default();
    let mut ech = Echelon::new();
    for row in &basis {
        ech.insert(to_sparse(row, &mut index));
    }
    out.push(binomial(n, 2) - ech.rank() as u64);
    basis = echelon_rows(&ech, &index);

    for k in 3..=up_to {
        let total = binomial(n, k);
        let mut index = MonomialIndex::default();
        let mut ech = Echelon::new();
        'fill: for row in &basis {
            for i in 0..n {
                let product = wedge_generator(i, row);
                if product.is_empty() {
                    continue;
                }
                ech.insert(to_sparse(&product, &mut index));
                if ech.rank() as u64 == total {
                    break 'fill;
                }
            }
        }
        out.push(total - ech.rank() as u64);
        basis = echelon_rows(&ech, &index);
    }
    Ok(out)
}

fn to_sparse(row: &[(u64, BigInt)], index: &mut MonomialIndex) -> SparseVec {
    let mut v: SparseVec = row.iter().map(|(m, c)| (index.get(*m), c.clone())).collect();
    v.sort_by_key(|e| e.0);
    v
}

fn echelon_rows(ech: &Echelon, index: &MonomialIndex) -> Vec<Vec<(u64, BigInt)>> {
    ech.rows().into_iter().map(|r| r.iter().map(|(c, x)| (index.masks[*c], x.clone())).collect()).collect()
}

/// `e_i ∧ row`, with the sign of moving `e_i` into sorted position.
fn wedge_generator(i: usize, row: &[(u64, BigInt)]) -> Vec<(u64, BigInt)> {
    let bit = 1u64 << i;
    row.iter()
        .filter(|(m, _)| m & bit == 0)
        .map(|(m, c)| {
            let below = (m & (bit - 1)).count_ones();
            (m | bit, if below % 2 == 0 { c.clone() } else { -c.clone() })
        })
        .collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Ranks `φ_1..φ_up_to` of the LCS quotients of an almost-direct product of
/// free groups of the given ranks: the sum of the Witt numbers of the
/// factors.
pub fn lcs_ranks(fiber_ranks: &[usize], up_to: usize) -> Result<Vec<i64>> {
    let overflow = || Error::CapExceeded(format!("LCS rank in degree up to {up_to} overflows"));
    let mut out = Vec::with_capacity(up_to);
    for k in 1..=up_to as u64 {
        let mut total: i128 = 0;
        for &n in fiber_ranks {
            let mut sum: i128 = 0;
            for d in (1..=k).filter(|d| k % d == 0) {
                let mu = mobius(d) as i128;
                if mu == 0 {
                    continue;
                }
                let power = (n as i128).checked_pow((k / d) as u32).ok_or_else(overflow)?;
                sum = sum.checked_add(mu * power).ok_or_else(overflow)?;
            }
            total = total.checked_add(sum / k as i128).ok_or_else(overflow)?;
        }
        out.push(i64::try_from(total).map_err(|_| overflow())?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcsRankCheck {
    pub relation_rank: usize,
    pub pairs: u64,
    pub phi2: i64,
    pub holds: bool,
}

/// Compares the rank of the degree-2 relations with `C(N,2) - φ_2`.
pub fn lcs_rank_crosscheck(
    relations: &[DegreeTwoRelation],
    gens: &[Generator],
    fiber_ranks: &[usize],
) -> Result<LcsRankCheck> {
    let h2 = h2_image(relations, gens)?;
    let relation_rank = sparse_rank((0..h2.rows()).map(|i| sparse_from_dense(h2.row(i))), None);
    let pairs = binomial(gens.len(), 2);
    let phi2 = lcs_ranks(fiber_ranks, 2)?[1];
    let holds = relation_rank as i64 == pairs as i64 - phi2;
    Ok(LcsRankCheck { relation_rank, pairs, phi2, holds })
}

/// Multiplies a coefficient list by `(1 + t)^m`.
fn times_circle_factors(coeffs: &[u64], m: usize) -> Vec<u64> {
    let mut out = coeffs.to_vec();
    for _ in 0..m {
        let mut next = vec![0u64; out.len() + 1];
        for (i, &c) in out.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
        }
        out = next;
    }
    out
}

/// A strictly supersolvable chain for the essentialization of `a`, with the
/// ambient dimension and rank.
pub fn strict_chain(a: &Arrangement) -> Result<(Chain, usize, usize)> {
    let d = a.dim;
    let ess = if a.is_essential() { a.clone() } else { essentialize(a)? };
    let r = ess.dim;
    let chain = find_chain(&ess)?
        .ok_or_else(|| Error::Infeasible("no supersolvable chain found for the arrangement".into()))?;
    require_strict(&chain, "this invariant")?;
    Ok((chain, d, r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareData {
    pub fiber_ranks: Vec<usize>,
    /// Betti numbers of the complement, degree 0 to the ambient dimension.
    pub hilbert: Vec<u64>,
    pub lcs: Vec<i64>,
    pub tc: usize,
}

/// Betti numbers from the cohomology ideal of a strict chain, times
/// `(1 + t)^{d - r}` for the torus factor split off by essentialization.
pub fn betti_numbers(chain: &Chain, ambient_dim: usize) -> Result<Vec<u64>> {
    require_strict(chain, "the cohomology presentation")?;
    let gens = homology_generators(chain);
    let rels = lcs_ideal(chain)?;
    let coh = cohomology_ideal(&h2_image(&rels, &gens)?, &gens)?;
    let r = chain.stages.len();
    let hil = hilbert_series(&coh, r.min(gens.len()))?;
    let extra = ambient_dim
        .checked_sub(chain.dim)
        .ok_or_else(|| Error::Infeasible(format!("ambient dimension {ambient_dim} is below the chain dimension {}", chain.dim)))?;
    Ok(times_circle_factors(&hil, extra))
}

/// `TC = d + r + 1` for a strictly supersolvable arrangement of rank `r` in
/// `(ℂ^×)^d`. Refuses arrangements without a certified strict chain.
pub fn topological_complexity(a: &Arrangement) -> Result<usize> {
    let (chain, d, _) = strict_chain(a)?;
    chain_complexity(&chain, d)
}

/// `TC` from a given chain of the essentialization, in ambient dimension `d`.
pub fn chain_complexity(chain: &Chain, ambient_dim: usize) -> Result<usize> {
    require_strict(chain, "the topological complexity formula")?;
    if ambient_dim < chain.dim {
        return Err(Error::Infeasible(format!(
            "ambient dimension {ambient_dim} is below the chain dimension {}",
            chain.dim
        )));
    }
    Ok(ambient_dim + chain.dim + 1)
}

pub fn poincare_data(a: &Arrangement, lcs_up_to: usize) -> Result<PoincareData> {
    let (chain, d, r) = strict_chain(a)?;
    let mut fiber_ranks = chain.fiber_ranks();
    fiber_ranks.extend(std::iter::repeat(1).take(d - r));
    Ok(PoincareData {
        hilbert: betti_numbers(&chain, d)?,
        lcs: lcs_ranks(&fiber_ranks, lcs_up_to)?,
        fiber_ranks,
        tc: d + r + 1,
    })
}

/// Converts a small integer vector for comparisons in tests and reports.
pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}
