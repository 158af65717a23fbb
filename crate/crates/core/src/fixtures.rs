//! Bundled example arrangements with their coordinate chains.

use num_traits::Zero;

use crate::arrangement::{Arrangement, Hypersurface, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub arrangement: Arrangement,
    /// Cocharacters from the top level down.
    pub chain: Vec<Vec<i64>>,
}

fn h(chi: Vec<i64>, value: Q) -> Hypersurface {
    Hypersurface::new(chi, value).expect("fixture characters are primitive")
}

fn coordinate_chain(d: usize) -> Vec<Vec<i64>> {
    (2..=d)
        .rev()
        .map(|r| {
            let mut e = vec![0; r];
            e[r - 1] = 1;
            e
        })
        .collect()
}

/// Characters `(2,0)`, `(-2,1)`, `(0,1)` in `(ℂ^×)^2`: the lines `x = ±1`,
/// the parabola `y = x^2` and the line `y = 1`.
pub fn example_a() -> Fixture {
    let arrangement = Arrangement::from_characters(2, &[vec![2, 0], vec![-2, 1], vec![0, 1]]).expect("valid characters");
    Fixture { name: "exA".into(), arrangement, chain: coordinate_chain(2) }
}

/// `x^n = 1`, `y = x^m`, `y = 1`. Base hypersurfaces are listed as
/// `x = e^{2πi j/n}` for `j = 1..n-1` and then `x = 1`.
pub fn circuit(n: i64, m: i64) -> Result<Fixture> {
    if n < 1 {
        return Err(Error::Infeasible(format!("circuit needs n >= 1, got {n}")));
    }
    let mut a = Arrangement::new(2);
    for j in (1..n).chain([0]) {
        a.push(h(vec![1, 0], Q::new(j, n)))?;
    }
    a.push(h(vec![-m, 1], Q::zero()))?;
    a.push(h(vec![0, 1], Q::zero()))?;
    Ok(Fixture { name: format!("circuit-{n}-{m}"), arrangement: a, chain: coordinate_chain(2) })
}

/// `x^n = 1`, `x^{m1} y = 1`, `x^{m2} y = 1`, i.e. fiber roots
/// `(0, x^{-m1}, x^{-m2})`.
pub fn circuit_general(n: i64, m1: i64, m2: i64) -> Result<Fixture> {
    if n < 1 || m1 == m2 {
        return Err(Error::Infeasible("general circuit needs n >= 1 and m1 != m2".into()));
    }
    let mut a = Arrangement::new(2);
    for j in (1..n).chain([0]) {
        a.push(h(vec![1, 0], Q::new(j, n)))?;
    }
    a.push(h(vec![m1, 1], Q::zero()))?;
    a.push(h(vec![m2, 1], Q::zero()))?;
    Ok(Fixture { name: format!("circuit-{n}-{m1}-{m2}"), arrangement: a, chain: coordinate_chain(2) })
}

/// Type C toric arrangement in `(ℂ^×)^n`. Stage k lists `x_k = 1`,
/// `x_k = -1`, then `x_k = x_i`, `x_k = x_i^{-1}` for `i < k`.
pub fn type_c(n: usize) -> Result<Fixture> {
    if n == 0 {
        return Err(Error::Infeasible("type C needs n >= 1".into()));
    }
    let mut a = Arrangement::new(n);
    for k in 0..n {
        let mut e = vec![0i64; n];
        e[k] = 1;
        a.push(h(e.clone(), Q::zero()))?;
        a.push(h(e.clone(), Q::new(1, 2)))?;
        for i in 0..k {
            let mut diff = e.clone();
            diff[i] = -1;
            a.push(h(diff, Q::zero()))?;
            let mut sum = e.clone();
            sum[i] = 1;
            a.push(h(sum, Q::zero()))?;
        }
    }
    Ok(Fixture { name: format!("typeC-{n}"), arrangement: a, chain: coordinate_chain(n) })
}

/// Looks a fixture up by CLI name and arguments.
pub fn by_name(name: &str, args: &[i64]) -> Result<Fixture> {
    match (name, args) {
        ("exA", []) => Ok(example_a()),
        ("circuit", [n, m]) => circuit(*n, *m),
        ("circuit", [n, m1, m2]) => circuit_general(*n, *m1, *m2),
        ("typeC", [n]) if *n >= 1 => type_c(*n as usize),
        _ => Err(Error::Parse(format!(
            "unknown example {name} with arguments {args:?}; expected exA, circuit N M, circuit N M1 M2 or typeC N"
        ))),
    }
}
