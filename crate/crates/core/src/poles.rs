//! Parameters of a product `Φ(z) = Π_l a_l^{m_l} φ_{m_l}(a_l z - w_l)`, its
//! poles in the strip `0 <= Re z < 1`, and the index combinatorics used to
//! expand it around each pole.
//!
//! Factor indices are zero-based throughout the Rust API.

use std::collections::BTreeSet;
use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exact_numbers::{parse_rational, Kind};
use crate::laurent::shift_test;

/// `(a, m, w, j)`: factor `l` belongs to the cot family for `l < j.0` and to
/// the csc family otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    a: Vec<u32>,
    m: Vec<u32>,
    w: Vec<Rational>,
    j: (usize, usize),
}

impl Params {
    pub fn new(a: Vec<u32>, m: Vec<u32>, w: Vec<Rational>, j: (usize, usize)) -> Result<Self> {
        let r = a.len();
        if r < 2 {
            return Err(Error::InvalidParams(format!("need r >= 2 factors, got {r}")));
        }
        if m.len() != r || w.len() != r {
            return Err(Error::InvalidParams(format!(
                "length mismatch: |a| = {r}, |m| = {}, |w| = {}",
                m.len(),
                w.len()
            )));
        }
        if a.iter().chain(&m).any(|&x| x == 0) {
            return Err(Error::InvalidParams("entries of a and m must be >= 1".into()));
        }
        if w.iter().any(|x| *x < 0 || *x >= 1) {
            return Err(Error::InvalidParams("shifts w must lie in [0, 1)".into()));
        }
        if j.0 + j.1 != r {
            return Err(Error::InvalidParams(format!(
                "j = ({}, {}) does not sum to r = {r}",
                j.0, j.1
            )));
        }
        Ok(Params { a, m, w, j })
    }

    /// Parameters with `m = 1` and `w = 0`.
    pub fn simple(a: &[u32], j: (usize, usize)) -> Result<Self> {
        let r = a.len();
        Params::new(a.to_vec(), vec![1; r], vec![Rational::new(); r], j)
    }

    /// Parse comma-separated lists, e.g. `("2,3", "1,1", "0,1/3", "2,0")`.
    pub fn parse(a: &str, m: Option<&str>, w: Option<&str>, j: Option<&str>) -> Result<Self> {
        let a = parse_list(a, "a")?;
        let r = a.len();
        let m = match m {
            Some(s) => parse_list(s, "m")?,
            None => vec![1; r],
        };
        let w = match w {
            Some(s) => s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?,
            None => vec![Rational::new(); r],
        };
        let j = match j {
            Some(s) => {
                let v: Vec<u32> = parse_list(s, "j")?;
                if v.len() != 2 {
                    return Err(Error::Parse {
                        what: "j",
                        input: s.to_string(),
                    });
                }
                (v[0] as usize, v[1] as usize)
            }
            None => (r, 0),
        };
        Params::new(a, m, w, j)
    }

    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn w(&self) -> &[Rational] {
        &self.w
    }

    pub fn j(&self) -> (usize, usize) {
        self.j
    }

    pub fn kind(&self, l: usize) -> Kind {
        if l < self.j.0 {
            Kind::Cot
        } else {
            Kind::Csc
        }
    }

    /// `|m| = Σ m_l`, the total pole order.
    pub fn total_order(&self) -> u32 {
        self.m.iter().sum()
    }

    pub fn all_m_one(&self) -> bool {
        self.m.iter().all(|&x| x == 1)
    }

    pub fn w_is_zero(&self) -> bool {
        self.w.iter().all(|x| *x == 0)
    }

    pub fn pairwise_coprime(&self) -> bool {
        pairwise_coprime(&self.a)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        write!(
            f,
            "a=({}) m=({}) w=({}) j=({},{})",
            join(self.a.iter().map(|x| x.to_string()).collect()),
            join(self.m.iter().map(|x| x.to_string()).collect()),
            join(self.w.iter().map(|x| x.to_string()).collect()),
            self.j.0,
            self.j.1
        )
    }
}

pub fn parse_list(s: &str, what: &'static str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<u32>().map_err(|_| Error::Parse {
                what,
                input: s.to_string(),
            })
        })
        .collect()
}

pub fn pairwise_coprime(a: &[u32]) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, &x)| a[i + 1..].iter().all(|&y| Integer::from(x).gcd(&Integer::from(y)) == 1))
}

/// Family of the right-hand side: `Csc` exactly when the csc-family `a_l`
/// have odd sum, which makes `Φ(z + 1) = -Φ(z)`.
pub fn classify_case(p: &Params) -> Kind {
    let csc_sum: u64 = p.a[p.j.0..].iter().map(|&x| x as u64).sum();
    if csc_sum % 2 == 1 {
        Kind::Csc
    } else {
        Kind::Cot
    }
}

/// A pole `ρ ∈ [0, 1)` of `Φ` with the factors singular there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleDatum {
    pub rho: Rational,
    /// Ascending factor indices `l` with `a_l ρ - w_l ∈ ℤ`.
    pub integral_set: Vec<usize>,
    /// `a_l ρ - w_l` for each entry of `integral_set`, same order.
    pub int_values: Vec<Integer>,
}

impl PoleDatum {
    /// Integral set and values at an arbitrary rational center (possibly empty).
    pub fn at(p: &Params, rho: &Rational) -> PoleDatum {
        let mut integral_set = Vec::new();
        let mut int_values = Vec::new();
        for l in 0..p.r() {
            if let Some(k) = shift_test(p.a[l], &p.w[l], rho).integer_value {
                integral_set.push(l);
                int_values.push(k);
            }
        }
        PoleDatum {
            rho: rho.clone(),
            integral_set,
            int_values,
        }
    }

    pub fn multiplicity(&self) -> usize {
        self.integral_set.len()
    }

    /// `(-1)^{a_l ρ - w_l}` for csc-family `l`, `+1` for cot-family, `None`
    /// when `l` is not singular here.
    pub fn sign_of(&self, p: &Params, l: usize) -> Option<i32> {
        let pos = self.integral_set.iter().position(|&x| x == l)?;
        Some(if p.kind(l).is_csc() && self.int_values[pos].is_odd() {
            -1
        } else {
            1
        })
    }
}

/// All poles of `Φ` in `[0, 1)`, deduplicated and sorted ascending.
pub fn enumerate_poles(p: &Params) -> Vec<PoleDatum> {
    let mut nodes = BTreeSet::new();
    for l in 0..p.r() {
        for mu in 0..p.a[l] {
            nodes.insert(Rational::from(&p.w[l] + mu) / p.a[l]);
        }
    }
    nodes.into_iter().map(|rho| PoleDatum::at(p, &rho)).collect()
}

/// Number of `(j, μ_j)` whose node `(w_j + μ_j)/a_j` coincides with
/// `(w_v + μ)/a_v`.
pub fn multiplicity_d(p: &Params, v: usize, mu: u32) -> Result<usize> {
    if v >= p.r() {
        return Err(Error::OutOfRange(format!("factor index {v} >= r = {}", p.r())));
    }
    if mu >= p.a[v] {
        return Err(Error::OutOfRange(format!("offset {mu} >= a_v = {}", p.a[v])));
    }
    let node = Rational::from(&p.w[v] + mu) / p.a[v];
    let mut count = 0;
    for j in 0..p.r() {
        for mu_j in 0..p.a[j] {
            if Rational::from(&p.w[j] + mu_j) / p.a[j] == node {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Every subset of the integral set (bitmask order, starting with `∅`).
pub fn residue_subsets(d: &PoleDatum) -> Vec<Vec<usize>> {
    let s = &d.integral_set;
    (0u32..(1 << s.len()))
        .map(|mask| {
            s.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &l)| l)
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// Principal part: `Σ ν = Σ_{λ∈Λ} m_λ - n`.
    Minus,
    /// Regular part: `Σ ν = μ + Σ_{λ∈Λ} m_λ`.
    Plus,
}

/// Complement of `lambda` in `0..r`, ascending.
pub fn complement(r: usize, lambda: &[usize]) -> Vec<usize> {
    (0..r).filter(|l| !lambda.contains(l)).collect()
}

/// Tuples `(ν_k)` over the complement of `lambda` (ascending index order)
/// with the prescribed sum, in lexicographic order.
pub fn compositions_k(target: u32, sign: Sign, lambda: &[usize], p: &Params) -> Vec<Vec<u32>> {
    let pole_order: i64 = lambda.iter().map(|&l| p.m[l] as i64).sum();
    let total = match sign {
        Sign::Minus => pole_order - target as i64,
        Sign::Plus => pole_order + target as i64,
    };
    if total < 0 {
        return Vec::new();
    }
    let parts = p.r() - lambda.len();
    compositions(total as u32, parts)
}

/// Weak compositions of `total` into `parts` nonnegative parts, lexicographic.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = Vec::with_capacity(parts);
    fn rec(remaining: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(remaining);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=remaining {
            cur.push(first);
            rec(remaining - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, &mut cur, &mut out);
    out
}

pub fn is_pole(p: &Params, z0: &Rational) -> bool {
    (0..p.r()).any(|l| shift_test(p.a[l], &p.w[l], z0).is_integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::binom;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn params(a: &[u32], m: &[u32], w: &[Rational], j: (usize, usize)) -> Params {
        Params::new(a.to_vec(), m.to_vec(), w.to_vec(), j).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Params::new(vec![1], vec![1], vec![q(0, 1)], (1, 0)).is_err());
        assert!(Params::new(vec![1, 2], vec![1], vec![q(0, 1); 2], (2, 0)).is_err());
        assert!(Params::new(vec![1, 2], vec![1, 1], vec![q(0, 1), q(1, 1)], (2, 0)).is_err());
        assert!(Params::new(vec![1, 2], vec![1, 1], vec![q(0, 1); 2], (1, 0)).is_err());
        assert!(Params::new(vec![0, 2], vec![1, 1], vec![q(0, 1); 2], (2, 0)).is_err());
        let p = Params::parse("2,3", Some("1,2"), Some("0,1/3"), Some("1,1")).unwrap();
        assert_eq!(p.w()[1], q(1, 3));
        assert_eq!(p.kind(0), Kind::Cot);
        assert_eq!(p.kind(1), Kind::Csc);
    }

    #[test]
    fn case_classification() {
        assert_eq!(classify_case(&Params::simple(&[2, 3], (2, 0)).unwrap()), Kind::Cot);
        assert_eq!(classify_case(&Params::simple(&[2, 3], (0, 2)).unwrap()), Kind::Csc);
        assert_eq!(classify_case(&Params::simple(&[2, 3, 5], (1, 2)).unwrap()), Kind::Cot);
    }

    #[test]
    fn poles_w_zero() {
        let p = Params::simple(&[2, 3], (2, 0)).unwrap();
        let poles = enumerate_poles(&p);
        let rhos: Vec<_> = poles.iter().map(|d| d.rho.clone()).collect();
        assert_eq!(rhos, vec![q(0, 1), q(1, 3), q(1, 2), q(2, 3)]);
        assert_eq!(poles[0].integral_set, vec![0, 1]);
        assert_eq!(poles[1].integral_set, vec![1]);
        assert_eq!(poles[2].integral_set, vec![0]);
        assert_eq!(poles[3].integral_set, vec![1]);
    }

    #[test]
    fn poles_shifted() {
        let p = params(&[2, 3], &[1, 1], &[q(1, 2), q(3, 4)], (2, 0));
        let poles = enumerate_poles(&p);
        let rhos: Vec<_> = poles.iter().map(|d| d.rho.clone()).collect();
        assert_eq!(rhos, vec![q(1, 4), q(7, 12), q(3, 4), q(11, 12)]);
        assert_eq!(poles[0].integral_set, vec![0, 1]);
        assert!(poles[1..].iter().all(|d| d.multiplicity() == 1));

        let p = params(&[1, 1], &[1, 1], &[q(0, 1), q(1, 2)], (2, 0));
        let poles = enumerate_poles(&p);
        assert_eq!(poles.len(), 2);
        assert!(poles.iter().all(|d| d.multiplicity() == 1));
    }

    #[test]
    fn multiplicities() {
        let p = Params::simple(&[2, 3], (2, 0)).unwrap();
        assert_eq!(multiplicity_d(&p, 0, 0).unwrap(), 2);
        assert_eq!(multiplicity_d(&p, 0, 1).unwrap(), 1);
        let p = Params::simple(&[1, 1, 1], (3, 0)).unwrap();
        assert_eq!(multiplicity_d(&p, 1, 0).unwrap(), 3);
        assert!(multiplicity_d(&p, 3, 0).is_err());
        assert!(multiplicity_d(&p, 0, 1).is_err());
    }

    #[test]
    fn subsets() {
        let d = |s: Vec<usize>| PoleDatum {
            rho: q(0, 1),
            int_values: vec![Integer::new(); s.len()],
            integral_set: s,
        };
        assert_eq!(residue_subsets(&d(vec![0])), vec![vec![], vec![0]]);
        assert_eq!(
            residue_subsets(&d(vec![0, 1])),
            vec![vec![], vec![0], vec![1], vec![0, 1]]
        );
        assert_eq!(residue_subsets(&d(vec![])), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn composition_examples() {
        let p = params(&[1, 1, 1], &[2, 1, 1], &vec![q(0, 1); 3], (3, 0));
        let k = compositions_k(1, Sign::Minus, &[0], &p);
        assert_eq!(k, vec![vec![0, 1], vec![1, 0]]);
        assert!(compositions_k(1, Sign::Minus, &[], &p).is_empty());
        let p2 = Params::simple(&[1, 1], (2, 0)).unwrap();
        assert_eq!(compositions_k(0, Sign::Plus, &[], &p2), vec![vec![0, 0]]);
        assert_eq!(compositions_k(2, Sign::Minus, &[0, 1], &p2), vec![Vec::<u32>::new()]);
        assert!(compositions_k(1, Sign::Minus, &[0, 1], &p2).is_empty());
    }

    #[test]
    fn stars_and_bars_counts() {
        // exhaustive over r <= 4, m_l <= 3
        for r in 2..=4usize {
            let total = 3usize.pow(r as u32);
            for code in 0..total {
                let m: Vec<u32> = (0..r).map(|i| (code / 3usize.pow(i as u32) % 3) as u32 + 1).collect();
                let p = Params::new(vec![1; r], m.clone(), vec![q(0, 1); r], (r, 0)).unwrap();
                for mask in 0u32..(1 << r) {
                    let lambda: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
                    let parts = r - lambda.len();
                    let pole: u32 = lambda.iter().map(|&l| m[l]).sum();
                    for n in 1..=pole.max(1) {
                        let got = compositions_k(n, Sign::Minus, &lambda, &p).len();
                        if parts >= 1 && pole >= n {
                            let s = pole - n;
                            let expect = binom(s + parts as u32 - 1, parts as u32 - 1);
                            assert_eq!(Integer::from(got), expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reciprocal_multiplicities_count_poles() {
        for (a, w) in [
            (vec![2u32, 3, 4], vec![q(0, 1), q(0, 1), q(1, 2)]),
            (vec![6, 4, 3], vec![q(1, 3), q(0, 1), q(0, 1)]),
            (vec![2, 3], vec![q(1, 2), q(3, 4)]),
        ] {
            let r = a.len();
            let p = Params::new(a.clone(), vec![1; r], w, (r, 0)).unwrap();
            let mut s = Rational::new();
            for (v, &av) in a.iter().enumerate() {
                for mu in 0..av {
                    s += Rational::from((1, multiplicity_d(&p, v, mu).unwrap() as u32));
                }
            }
            assert_eq!(s, Rational::from(enumerate_poles(&p).len() as u32));
        }
    }

    #[test]
    fn case_stable_under_block_permutation() {
        let a = [2u32, 3, 5, 4, 7];
        let p1 = Params::simple(&a, (2, 3)).unwrap();
        let p2 = Params::simple(&[3, 2, 7, 5, 4], (2, 3)).unwrap();
        assert_eq!(classify_case(&p1), classify_case(&p2));
    }
}
