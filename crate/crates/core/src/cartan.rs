//! Untwisted affine Cartan data and affine root systems.
//!
//! Node 0 is the affinizing node. Roots are stored as a finite part (coefficients of the
//! finite simple roots α_1 … α_N) together with the coefficient of the null root δ.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{rat, rint, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("unsupported affine type: {0}")]
    BadType(String),
    #[error("cannot parse root: {0}")]
    BadRoot(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineType {
    pub family: Family,
    pub rank: usize,
}

impl AffineType {
    pub fn new(family: Family, rank: usize) -> Result<Self, CartanError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 3,
            Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(AffineType { family, rank })
        } else {
            Err(CartanError::BadType(format!("{family:?}{rank}")))
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}^(1)", self.family, self.rank)
    }
}

impl FromStr for AffineType {
    type Err = CartanError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CartanError::BadType(s.to_string());
        let t = s.trim();
        let t = t.strip_suffix("^(1)").unwrap_or(t);
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest.parse().map_err(|_| bad())?;
        AffineType::new(family, rank)
    }
}

/// A root α + kδ of the affine system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    pub finite: Vec<i64>,
    pub delta: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootKind {
    Real,
    Imaginary,
}

impl Root {
    pub fn new(finite: Vec<i64>, delta: i64) -> Self {
        Root { finite, delta }
    }

    pub fn null(rank: usize, k: i64) -> Self {
        Root { finite: vec![0; rank], delta: k }
    }

    pub fn kind(&self) -> RootKind {
        if self.finite.iter().all(|&c| c == 0) {
            RootKind::Imaginary
        } else {
            RootKind::Real
        }
    }

    pub fn is_real(&self) -> bool {
        self.kind() == RootKind::Real
    }

    pub fn height(&self) -> i64 {
        self.finite.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.delta > 0 || (self.delta == 0 && self.finite.iter().all(|&c| c >= 0) && self.finite.iter().any(|&c| c > 0))
    }

    pub fn neg(&self) -> Root {
        Root { finite: self.finite.iter().map(|c| -c).collect(), delta: -self.delta }
    }

    pub fn add(&self, o: &Root) -> Root {
        Root { finite: self.finite.iter().zip(&o.finite).map(|(a, b)| a + b).collect(), delta: self.delta + o.delta }
    }

    pub fn scaled(&self, c: i64) -> Root {
        Root { finite: self.finite.iter().map(|a| a * c).collect(), delta: self.delta * c }
    }

    /// The fixed total order on roots: δ-coefficient, then imaginary before real, then
    /// finite height, then finite coefficients lexicographically.
    pub fn order_key(&self) -> (i64, u8, i64, Vec<i64>) {
        let kind = if self.is_real() { 1 } else { 0 };
        (self.delta, kind, self.height(), self.finite.clone())
    }

    pub fn cmp_order(&self, o: &Root) -> Ordering {
        self.order_key().cmp(&o.order_key())
    }

    /// Parses `a1+a2`, `d-a1`, `2d+a1-a2`, `a0` (needs the datum for `a0`).
    pub fn parse(s: &str, datum: &CartanDatum) -> Result<Root, CartanError> {
        let bad = || CartanError::BadRoot(s.to_string());
        let mut out = Root::null(datum.rank(), 0);
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for c in cleaned.chars() {
            if (c == '+' || c == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(c);
        }
        terms.push(cur);
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            let split = body.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
            let coeff: i64 = if split == 0 { 1 } else { body[..split].parse().map_err(|_| bad())? };
            let c = sign * coeff;
            let sym = &body[split..];
            if sym == "d" || sym == "delta" {
                out.delta += c;
            } else if let Some(idx) = sym.strip_prefix('a') {
                let i: usize = idx.parse().map_err(|_| bad())?;
                if i > datum.rank() {
                    return Err(bad());
                }
                out = out.add(&datum.simple_root(i).scaled(c));
            } else {
                return Err(bad());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut push = |c: i64, sym: String| {
            if c == 0 {
                return;
            }
            let sign = if c < 0 { "-" } else if parts.is_empty() { "" } else { "+" };
            let mag = c.abs();
            parts.push(if mag == 1 { format!("{sign}{sym}") } else { format!("{sign}{mag}{sym}") });
        };
        push(self.delta, "d".into());
        for (i, &c) in self.finite.iter().enumerate() {
            push(c, format!("a{}", i + 1));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.concat())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanDatum {
    pub affine_type: AffineType,
    /// a_ij = α_j(h_i), indices 0..=N.
    pub matrix: Vec<Vec<i64>>,
    #[serde(serialize_with = "ser_rationals")]
    pub symmetrizers: Vec<Rational>,
    pub kac_labels: Vec<i64>,
    /// Dual labels of nodes 1..=N.
    pub comarks: Vec<i64>,
    /// Finite highest root θ.
    pub highest_root: Vec<i64>,
    #[serde(skip)]
    gram: Vec<Vec<Rational>>,
    #[serde(skip)]
    finite_positive: Vec<Vec<i64>>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn finite_gram(ty: AffineType) -> Vec<Vec<Rational>> {
    let n = ty.rank;
    let mut g = vec![vec![Rational::zero(); n]; n];
    let link = |g: &mut Vec<Vec<Rational>>, i: usize, j: usize, v: Rational| {
        g[i - 1][j - 1] = v.clone();
        g[j - 1][i - 1] = v;
    };
    let mut diag = vec![rint(2); n];
    match ty.family {
        Family::A => (1..n).for_each(|i| link(&mut g, i, i + 1, rint(-1))),
        Family::B => {
            (1..n).for_each(|i| link(&mut g, i, i + 1, rint(-1)));
            diag[n - 1] = rint(1);
        }
        Family::C => {
            (1..n - 1).for_each(|i| link(&mut g, i, i + 1, rat(-1, 2)));
            link(&mut g, n - 1, n, rint(-1));
            (0..n - 1).for_each(|i| diag[i] = rint(1));
        }
        Family::D => {
            (1..n - 1).for_each(|i| link(&mut g, i, i + 1, rint(-1)));
            link(&mut g, n - 2, n, rint(-1));
        }
        Family::E => {
            link(&mut g, 1, 3, rint(-1));
            link(&mut g, 2, 4, rint(-1));
            (3..n).for_each(|i| link(&mut g, i, i + 1, rint(-1)));
        }
        Family::F => {
            link(&mut g, 1, 2, rint(-1));
            link(&mut g, 2, 3, rint(-1));
            link(&mut g, 3, 4, rat(-1, 2));
            diag[2] = rint(1);
            diag[3] = rint(1);
        }
        Family::G => {
            link(&mut g, 1, 2, rint(-1));
            diag[1] = rat(2, 3);
        }
    }
    for (i, d) in diag.into_iter().enumerate() {
        g[i][i] = d;
    }
    g
}

fn label_table(ty: AffineType) -> Vec<i64> {
    let n = ty.rank;
    let finite: Vec<i64> = match ty.family {
        Family::A => vec![1; n],
        Family::B => std::iter::once(1).chain(std::iter::repeat(2).take(n - 1)).collect(),
        Family::C => std::iter::repeat(2).take(n - 1).chain(std::iter::once(1)).collect(),
        Family::D => std::iter::once(1).chain(std::iter::repeat(2).take(n - 3)).chain([1, 1]).collect(),
        Family::E => match n {
            6 => vec![1, 2, 2, 3, 2, 1],
            7 => vec![2, 2, 3, 4, 3, 2, 1],
            _ => vec![2, 3, 4, 6, 5, 4, 3, 2],
        },
        Family::F => vec![2, 3, 4, 2],
        Family::G => vec![2, 3],
    };
    std::iter::once(1).chain(finite).collect()
}

impl CartanDatum {
    pub fn build(ty: AffineType) -> Result<Self, CartanError> {
        let ty = AffineType::new(ty.family, ty.rank)?;
        let n = ty.rank;
        let gram = finite_gram(ty);
        let finite_positive = enumerate_finite_positive(&gram);
        let highest_root = finite_positive.last().cloned().expect("nonempty root system");
        let mut d = vec![rint(1)];
        d.extend((0..n).map(|i| &gram[i][i] / rint(2)));
        // Node vectors with α_0 = −θ (its δ-part never enters the form).
        let node = |i: usize| -> Vec<i64> {
            if i == 0 {
                highest_root.iter().map(|c| -c).collect()
            } else {
                (0..n).map(|j| i64::from(j + 1 == i)).collect()
            }
        };
        let form = |u: &[i64], v: &[i64]| -> Rational {
            let mut acc = Rational::zero();
            for a in 0..n {
                for b in 0..n {
                    if u[a] != 0 && v[b] != 0 {
                        acc += &gram[a][b] * rint(u[a] * v[b]);
                    }
                }
            }
            acc
        };
        let mut matrix = vec![vec![0i64; n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                let v = rint(2) * form(&node(i), &node(j)) / form(&node(i), &node(i));
                matrix[i][j] = v.to_integer().to_i64().expect("small Cartan entry");
                debug_assert!(v.is_integer());
            }
        }
        let kac_labels = label_table(ty);
        if kac_labels[1..] != highest_root[..] {
            return Err(CartanError::BadType(format!("{ty}: label table disagrees with highest root")));
        }
        let comarks = (1..=n)
            .map(|i| (&d[i] * rint(kac_labels[i])).to_integer().to_i64().expect("integral comark"))
            .collect();
        let datum = CartanDatum { affine_type: ty, matrix, symmetrizers: d, kac_labels, comarks, highest_root, gram, finite_positive };
        for i in 0..=n {
            let s: Rational = (0..=n).map(|j| rint(datum.kac_labels[j]) * datum.root_form(i, j)).sum();
            if !s.is_zero() {
                return Err(CartanError::BadType(format!("{ty}: null root check failed at node {i}")));
            }
        }
        Ok(datum)
    }

    pub fn from_name(s: &str) -> Result<Self, CartanError> {
        Self::build(s.parse()?)
    }

    /// N, the rank of the finite part; nodes are 0..=N.
    pub fn rank(&self) -> usize {
        self.affine_type.rank
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.rank()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn d(&self, i: usize) -> &Rational {
        &self.symmetrizers[i]
    }

    /// (α_i, α_j) = d_i a_ij.
    pub fn root_form(&self, i: usize, j: usize) -> Rational {
        &self.symmetrizers[i] * rint(self.matrix[i][j])
    }

    /// (h_i, h_j) = a_ij / d_j.
    pub fn coroot_form(&self, i: usize, j: usize) -> Rational {
        rint(self.matrix[i][j]) / &self.symmetrizers[j]
    }

    pub fn finite_gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// Form on finite parts.
    pub fn form_finite(&self, u: &[i64], v: &[i64]) -> Rational {
        let n = self.rank();
        let mut acc = Rational::zero();
        for a in 0..n {
            if u[a] == 0 {
                continue;
            }
            for b in 0..n {
                if v[b] != 0 {
                    acc += &self.gram[a][b] * rint(u[a] * v[b]);
                }
            }
        }
        acc
    }

    /// Invariant form on affine roots; δ pairs to zero with everything.
    pub fn bilinear(&self, a: &Root, b: &Root) -> Rational {
        self.form_finite(&a.finite, &b.finite)
    }

    pub fn simple_root(&self, i: usize) -> Root {
        if i == 0 {
            Root::new(self.highest_root.iter().map(|c| -c).collect(), 1)
        } else {
            let mut f = vec![0; self.rank()];
            f[i - 1] = 1;
            Root::new(f, 0)
        }
    }

    pub fn simple_index(&self, r: &Root) -> Option<usize> {
        self.nodes().find(|&i| &self.simple_root(i) == r)
    }

    /// Positive roots of the finite system, ascending by (height, lexicographic).
    pub fn finite_positive_roots(&self) -> &[Vec<i64>] {
        &self.finite_positive
    }

    pub fn is_finite_root(&self, v: &[i64]) -> bool {
        let pos = v.iter().all(|&c| c >= 0);
        let w: Vec<i64> = if pos { v.to_vec() } else { v.iter().map(|c| -c).collect() };
        self.finite_positive.iter().any(|r| *r == w)
    }

    /// Whether `r` is a root of the affine system.
    pub fn is_root(&self, r: &Root) -> bool {
        if r.is_real() {
            self.is_finite_root(&r.finite)
        } else {
            r.delta != 0
        }
    }

    /// Positive roots with δ-coefficient at most `k_max`, ascending in the root order,
    /// paired with multiplicities.
    pub fn enumerate_positive_roots(&self, k_max: i64) -> Vec<(Root, usize)> {
        let mut out = Vec::new();
        for k in 0..=k_max.max(0) {
            if k >= 1 {
                out.push((Root::null(self.rank(), k), self.rank()));
            }
            for f in &self.finite_positive {
                out.push((Root::new(f.clone(), k), 1));
                if k >= 1 {
                    out.push((Root::new(f.iter().map(|c| -c).collect(), k), 1));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp_order(&b.0));
        out
    }

    /// Leading principal minors of the finite Cartan submatrix.
    pub fn finite_minors(&self) -> Vec<Rational> {
        let n = self.rank();
        (1..=n)
            .map(|m| {
                let mat: Vec<Vec<Rational>> = (1..=m).map(|i| (1..=m).map(|j| rint(self.matrix[i][j])).collect()).collect();
                determinant(mat)
            })
            .collect()
    }
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] -= v;
            }
        }
    }
    det
}

/// Positive roots of a finite root system given its Gram matrix, by root strings.
fn enumerate_finite_positive(gram: &[Vec<Rational>]) -> Vec<Vec<i64>> {
    let n = gram.len();
    let pair = |u: &[i64], i: usize| -> i64 {
        // ⟨u, α_i^∨⟩
        let s: Rational = (0..n).map(|b| &gram[i][b] * rint(u[b])).sum();
        let v = rint(2) * s / &gram[i][i];
        v.to_integer().to_i64().expect("integral pairing")
    };
    let mut all: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut layer = all.clone();
    while !layer.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for r in &layer {
            for i in 0..n {
                let mut p = 0;
                let mut probe = r.clone();
                loop {
                    probe[i] -= 1;
                    if all.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pair(r, i);
                if q > 0 {
                    let mut up = r.clone();
                    up[i] += 1;
                    if !all.contains(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by(|a, b| (a.iter().sum::<i64>(), a).cmp(&(b.iter().sum::<i64>(), b)));
    all
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom().abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small_types() -> Vec<CartanDatum> {
        ["A1", "A2", "A3", "B3", "B4", "C2", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2"]
            .iter()
            .map(|s| CartanDatum::from_name(s).unwrap())
            .collect()
    }

    #[test]
    fn g2_symmetrizers() {
        let g = CartanDatum::from_name("G2").unwrap();
        assert_eq!(g.symmetrizers, vec![rint(1), rint(1), rat(1, 3)]);
        assert_eq!(g.kac_labels, vec![1, 2, 3]);
    }

    #[test]
    fn a2_matrix() {
        let a = CartanDatum::from_name("A2").unwrap();
        assert_eq!(a.symmetrizers, vec![rint(1); 3]);
        assert_eq!(a.a(0, 1), -1);
        assert_eq!(a.a(1, 2), -1);
        assert_eq!(a.a(2, 0), -1);
        let a1 = CartanDatum::from_name("A1").unwrap();
        assert_eq!(a1.a(0, 1), -2);
    }

    #[test]
    fn tabulated_symmetrizers() {
        let b = CartanDatum::from_name("B3").unwrap();
        assert_eq!(b.symmetrizers, vec![rint(1), rint(1), rint(1), rat(1, 2)]);
        let c = CartanDatum::from_name("C3").unwrap();
        assert_eq!(c.symmetrizers, vec![rint(1), rat(1, 2), rat(1, 2), rint(1)]);
        let f = CartanDatum::from_name("F4").unwrap();
        assert_eq!(f.symmetrizers, vec![rint(1), rint(1), rint(1), rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn symmetrizable_and_null_root() {
        for dat in all_small_types() {
            for i in dat.nodes() {
                assert_eq!(dat.a(i, i), 2);
                let s: Rational = dat.nodes().map(|j| rint(dat.kac_labels[j]) * dat.root_form(i, j)).sum();
                assert!(s.is_zero(), "{}", dat.affine_type);
                for j in dat.nodes() {
                    assert_eq!(dat.root_form(i, j), dat.root_form(j, i));
                    assert_eq!(dat.coroot_form(i, j), dat.coroot_form(j, i));
                    if i != j {
                        assert!(dat.a(i, j) <= 0);
                        assert_eq!(dat.a(i, j) == 0, dat.a(j, i) == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn finite_part_positive_definite() {
        for dat in all_small_types() {
            assert!(dat.finite_minors().iter().all(|m| m.is_positive()), "{}", dat.affine_type);
        }
    }

    #[test]
    fn finite_root_counts() {
        let counts = [("A2", 3), ("B3", 9), ("C3", 9), ("D4", 12), ("E6", 36), ("E7", 63), ("E8", 120), ("F4", 24), ("G2", 6)];
        for (name, c) in counts {
            assert_eq!(CartanDatum::from_name(name).unwrap().finite_positive_roots().len(), c, "{name}");
        }
    }

    #[test]
    fn form_examples() {
        let a = CartanDatum::from_name("A2").unwrap();
        let a1 = a.simple_root(1);
        let a12 = Root::new(vec![1, 1], 0);
        assert_eq!(a.bilinear(&a12, &a1), rint(1));
        let d = Root::null(2, 1);
        assert_eq!(a.bilinear(&d, &d), rint(0));
        for i in a.nodes() {
            assert!(a.bilinear(&d, &a.simple_root(i)).is_zero());
            assert_eq!(a.bilinear(&a.simple_root(i), &a.simple_root(i)), rint(2) * a.d(i));
        }
        let c = CartanDatum::from_name("C2").unwrap();
        assert_eq!(c.a(1, 2), -2);
        assert_eq!(c.coroot_form(1, 2), rint(c.a(1, 2)) / c.d(2));
        assert_eq!(c.coroot_form(1, 2), rint(-2));
    }

    #[test]
    fn a1_roots_up_to_one() {
        let a = CartanDatum::from_name("A1").unwrap();
        let roots = a.enumerate_positive_roots(1);
        // Independent oracle: every (c, k) with c ∈ {-1, 0, 1} that is a positive root.
        let mut expect = Vec::new();
        for k in 0..=1i64 {
            for c in -1..=1i64 {
                let positive = k > 0 || c > 0;
                let root = c != 0 || k != 0;
                if positive && root {
                    expect.push((c, k));
                }
            }
        }
        let got: Vec<(i64, i64)> = roots.iter().map(|(r, _)| (r.finite[0], r.delta)).collect();
        assert_eq!(got.len(), expect.len());
        for e in expect {
            assert!(got.contains(&e));
        }
        assert_eq!(roots.iter().find(|(r, _)| !r.is_real()).unwrap().1, 1);
        assert_eq!(a.simple_root(0), Root::new(vec![-1], 1));
    }

    #[test]
    fn real_roots_per_level() {
        let c = CartanDatum::from_name("C3").unwrap();
        let roots = c.enumerate_positive_roots(2);
        for k in 1..=2 {
            let real = roots.iter().filter(|(r, _)| r.delta == k && r.is_real()).count();
            assert_eq!(real, 2 * c.finite_positive_roots().len());
        }
        let k0: Vec<_> = roots.iter().filter(|(r, _)| r.delta == 0).collect();
        assert_eq!(k0.len(), c.finite_positive_roots().len());
    }

    #[test]
    fn root_parse_and_print() {
        let a = CartanDatum::from_name("A2").unwrap();
        let r = Root::parse("a1+a2", &a).unwrap();
        assert_eq!(r, Root::new(vec![1, 1], 0));
        assert_eq!(Root::parse("a0", &a).unwrap(), Root::new(vec![-1, -1], 1));
        assert_eq!(Root::parse("d-a1", &a).unwrap().to_string(), "d-a1");
        assert_eq!(Root::parse("2d + a1 - a2", &a).unwrap(), Root::new(vec![1, -1], 2));
    }

    #[test]
    fn bad_types() {
        assert!("B2".parse::<AffineType>().is_err());
        assert!("E9".parse::<AffineType>().is_err());
        assert!("Z3".parse::<AffineType>().is_err());
        assert_eq!("G_2^(1)".parse::<AffineType>().unwrap(), AffineType { family: Family::G, rank: 2 });
    }
}
