//! Root and coefficient maps of a chain stage, and the closed form of the
//! induced map on first homology.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arrangement::{expand_equation, format_value, Chain, Hypersurface, Q};
use crate::error::{Error, Result};
use crate::words::{pair_count, pairs};

/// A generator of `H_1` (and of `π_1`) of a complement: the loop around the
/// coordinate axis (`index == 0`) or around the `index`-th hypersurface of a
/// stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub stage: usize,
    pub index: usize,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X({},{})", self.index, self.stage)
    }
}

/// Homology generators of all stages below `k`, stage-major: the axis loop
/// of each stage followed by one loop per stage hypersurface.
pub fn base_generators(chain: &Chain, k: usize) -> Vec<Generator> {
    chain.stages[..k - 1]
        .iter()
        .flat_map(|s| (0..=s.members.len()).map(move |index| Generator { stage: s.index, index }))
        .collect()
}

/// `x_k = exp(2πi mu) x^m` for each nonzero root; the zero root is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootMapData {
    pub base_dim: usize,
    pub roots: Vec<(Q, Vec<i64>)>,
}

impl RootMapData {
    /// Number of roots including the zero root.
    pub fn strands(&self) -> usize {
        self.roots.len() + 1
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero()];
        out.extend(self.roots.iter().map(|(mu, m)| unit(*mu) * monomial(x, m)));
        out
    }
}

/// Factors `x_k^degree = exp(2πi mu) x^m` of the fiber polynomial, besides
/// the factor `x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientMapData {
    pub base_dim: usize,
    pub factors: Vec<(u32, Q, Vec<i64>)>,
}

impl CoefficientMapData {
    pub fn degree(&self) -> usize {
        1 + self.factors.iter().map(|f| f.0 as usize).sum::<usize>()
    }

    /// All roots: zero, then the roots of each factor in turn.
    pub fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero()];
        for (deg, mu, m) in &self.factors {
            let target = unit(*mu) * monomial(x, m);
            let r = target.norm().powf(1.0 / *deg as f64);
            let th = target.arg() / *deg as f64;
            for j in 0..*deg {
                out.push(Complex64::from_polar(r, th + 2.0 * std::f64::consts::PI * j as f64 / *deg as f64));
            }
        }
        out
    }

    /// Fiber polynomial as text, `x` the fiber variable.
    pub fn describe(&self) -> String {
        let mut s = "x".to_string();
        for (deg, mu, m) in &self.factors {
            let pow = if *deg == 1 { "x".to_string() } else { format!("x^{deg}") };
            s.push_str(&format!("({pow} - {})", term(*mu, m)));
        }
        s
    }
}

fn term(mu: Q, m: &[i64]) -> String {
    let mut parts = Vec::new();
    if !mu.is_zero() {
        parts.push(format!("e(2πi·{})", format_value(&mu)));
    }
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("y{}", i + 1)),
            _ => parts.push(format!("y{}^{e}", i + 1)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

pub fn unit(r: Q) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * (*r.numer() as f64) / (*r.denom() as f64);
    Complex64::from_polar(1.0, t)
}

pub fn monomial(x: &[Complex64], m: &[i64]) -> Complex64 {
    x.iter().zip(m).fold(Complex64::new(1.0, 0.0), |acc, (xi, &e)| acc * xi.powi(e as i32))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StageMap {
    Roots(RootMapData),
    Coefficients(CoefficientMapData),
}

impl StageMap {
    pub fn strands(&self) -> usize {
        match self {
            StageMap::Roots(r) => r.strands(),
            StageMap::Coefficients(c) => c.degree(),
        }
    }

    pub fn base_dim(&self) -> usize {
        match self {
            StageMap::Roots(r) => r.base_dim,
            StageMap::Coefficients(c) => c.base_dim,
        }
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        match self {
            StageMap::Roots(r) => r.evaluate(x),
            StageMap::Coefficients(c) => c.evaluate(x),
        }
    }
}

/// Root map of a strictly supersolvable stage, coefficient map otherwise.
pub fn stage_root_map(chain: &Chain, k: usize) -> Result<StageMap> {
    let stage = chain.stage(k)?;
    if stage.is_strict() {
        Ok(StageMap::Roots(RootMapData {
            base_dim: k - 1,
            roots: stage.members.iter().map(|h| h.solved()).collect(),
        }))
    } else {
        Ok(StageMap::Coefficients(CoefficientMapData {
            base_dim: k - 1,
            factors: stage
                .members
                .iter()
                .map(|h| {
                    let (mu, m) = h.solved();
                    (h.degree.unsigned_abs() as u32, mu, m)
                })
                .collect(),
        }))
    }
}

/// The base hypersurface of generator `g` in the coordinates of the base of
/// stage `k`.
fn base_hypersurface(chain: &Chain, g: Generator, k: usize) -> Result<Hypersurface> {
    let h = &chain.stage(g.stage)?.members[g.index - 1];
    let mut chi = vec![0i64; k - 1];
    chi[..h.exponents.len()].copy_from_slice(&h.exponents);
    chi[g.stage - 1] = h.degree;
    Hypersurface::new(chi, h.value)
}

/// Whether the base hypersurface of `g` is a component of the projection of
/// `H_i ∩ H_j` for nonzero roots `i < j` (1-based among the nonzero roots).
pub fn projection_component_test(chain: &Chain, k: usize, g: Generator, i: usize, j: usize) -> Result<bool> {
    let StageMap::Roots(rm) = stage_root_map(chain, k)? else {
        return Err(Error::Infeasible(format!("stage {k} is not strictly supersolvable")));
    };
    let l = rm.roots.len();
    if !(1 <= i && i < j && j <= l) {
        return Err(Error::Infeasible(format!("root pair ({i},{j}) out of range 1..={l}")));
    }
    if g.index == 0 || g.stage >= k {
        return Err(Error::Infeasible(format!("{g} is not a base hypersurface of stage {k}")));
    }
    let target = base_hypersurface(chain, g, k)?;
    projected_contains(&rm, i, j, &target)
}

fn projected_contains(rm: &RootMapData, i: usize, j: usize, target: &Hypersurface) -> Result<bool> {
    let (mu_i, m_i) = &rm.roots[i - 1];
    let (mu_j, m_j) = &rm.roots[j - 1];
    let diff: Vec<i64> = m_i.iter().zip(m_j).map(|(a, b)| a - b).collect();
    if diff.iter().all(|&x| x == 0) {
        return Ok(false);
    }
    Ok(expand_equation(&diff, *mu_j - *mu_i)?.contains(target))
}

/// Integer matrix of the map induced on `H_1` by a root map: rows indexed by
/// base generators, columns by `A_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HrmMatrix {
    pub stage: usize,
    pub strands: usize,
    pub rows: Vec<Generator>,
    pub entries: Vec<Vec<i64>>,
}

impl HrmMatrix {
    pub fn row(&self, g: Generator) -> Option<&[i64]> {
        self.rows.iter().position(|&r| r == g).map(|i| self.entries[i].as_slice())
    }

    pub fn column_labels(&self) -> Vec<String> {
        pairs(self.strands).iter().map(|(i, j)| format!("A({i},{j})")).collect()
    }
}

pub fn homological_root_hom(chain: &Chain, k: usize) -> Result<HrmMatrix> {
    let StageMap::Roots(rm) = stage_root_map(chain, k)? else {
        return Err(Error::Infeasible(format!(
            "stage {k} is not strictly supersolvable; its monodromy is not pure"
        )));
    };
    let n = rm.strands();
    let l = rm.roots.len();
    let col = |i: usize, j: usize| crate::words::pair_index(n, i, j);
    let rows = base_generators(chain, k);
    let mut entries = Vec::with_capacity(rows.len());
    for &g in &rows {
        let mut e = vec![0i64; pair_count(n)];
        if g.index == 0 {
            let c = g.stage - 1;
            for j in 1..=l {
                let mj = rm.roots[j - 1].1[c];
                e[col(1, j + 1)] += mj;
                for i in 1..j {
                    let mi = rm.roots[i - 1].1[c];
                    e[col(i + 1, j + 1)] += mi.min(mj);
                }
            }
        } else {
            let target = base_hypersurface(chain, g, k)?;
            for j in 1..=l {
                for i in 1..j {
                    if projected_contains(&rm, i, j, &target)? {
                        e[col(i + 1, j + 1)] += 1;
                    }
                }
            }
        }
        entries.push(e);
    }
    Ok(HrmMatrix { stage: k, strands: n, rows, entries })
}
