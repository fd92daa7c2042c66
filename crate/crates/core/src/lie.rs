//! Chevalley basis of the finite simple Lie algebra underlying an affine datum.
//!
//! Structure constants follow the extraspecial-pair convention: for every non-simple
//! positive root ξ the extraspecial pair (α, β) has N_{α,β} = p + 1 > 0, and every other
//! constant is determined from these.

use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::scalar::{rint, Rational};

/// Basis element of the finite algebra: a root vector e_{±α} or a simple coroot h_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FinBasis {
    /// `idx` indexes the positive roots; `neg` selects e_{−α}.
    Root { idx: usize, neg: bool },
    /// h_i for a finite node i ∈ 1..=N.
    Cartan(usize),
}

#[derive(Debug, Clone)]
pub struct FiniteLie {
    rank: usize,
    symmetrizers: Vec<Rational>,
    matrix: Vec<Vec<i64>>,
    gram: Vec<Vec<Rational>>,
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// N_{α,β} for positive α, β with α before β in the root list.
    positive_pairs: HashMap<(usize, usize), i64>,
}

impl FiniteLie {
    pub fn new(datum: &CartanDatum) -> Self {
        let rank = datum.rank();
        let roots = datum.finite_positive_roots().to_vec();
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let mut lie = FiniteLie {
            rank,
            symmetrizers: datum.symmetrizers.clone(),
            matrix: datum.matrix.clone(),
            gram: datum.finite_gram().to_vec(),
            roots,
            index,
            positive_pairs: HashMap::new(),
        };
        lie.fill_structure_constants();
        lie
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn highest_root_index(&self) -> usize {
        self.roots.len() - 1
    }

    pub fn basis(&self) -> Vec<FinBasis> {
        let mut b: Vec<FinBasis> = (0..self.roots.len()).rev().map(|idx| FinBasis::Root { idx, neg: true }).collect();
        b.extend((1..=self.rank).map(FinBasis::Cartan));
        b.extend((0..self.roots.len()).map(|idx| FinBasis::Root { idx, neg: false }));
        b
    }

    /// Root vector for a signed root vector, if it is a root.
    pub fn root_vector(&self, v: &[i64]) -> Option<FinBasis> {
        if let Some(&idx) = self.index.get(v) {
            return Some(FinBasis::Root { idx, neg: false });
        }
        let w: Vec<i64> = v.iter().map(|c| -c).collect();
        self.index.get(&w).map(|&idx| FinBasis::Root { idx, neg: true })
    }

    /// Signed root of a root vector, or `None` for Cartan elements.
    pub fn weight(&self, x: FinBasis) -> Option<Vec<i64>> {
        match x {
            FinBasis::Root { idx, neg } => Some(if neg { self.roots[idx].iter().map(|c| -c).collect() } else { self.roots[idx].clone() }),
            FinBasis::Cartan(_) => None,
        }
    }

    fn norm(&self, v: &[i64]) -> Rational {
        let n = self.rank;
        let mut acc = Rational::zero();
        for a in 0..n {
            for b in 0..n {
                if v[a] != 0 && v[b] != 0 {
                    acc += &self.gram[a][b] * rint(v[a] * v[b]);
                }
            }
        }
        acc
    }

    fn is_root(&self, v: &[i64]) -> bool {
        self.root_vector(v).is_some()
    }

    fn fill_structure_constants(&mut self) {
        let n_roots = self.roots.len();
        for xi in 0..n_roots {
            let target = self.roots[xi].clone();
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for a in 0..xi {
                let rest: Vec<i64> = target.iter().zip(&self.roots[a]).map(|(t, r)| t - r).collect();
                if let Some(&b) = self.index.get(&rest) {
                    if a < b {
                        pairs.push((a, b));
                    }
                }
            }
            let Some(&(a, b)) = pairs.first() else { continue };
            let alpha = self.roots[a].clone();
            let beta = self.roots[b].clone();
            let mut p = 0;
            loop {
                let probe: Vec<i64> = beta.iter().zip(&alpha).map(|(x, y)| x - (p + 1) * y).collect();
                if self.is_root(&probe) {
                    p += 1;
                } else {
                    break;
                }
            }
            let n_ab = p + 1;
            self.positive_pairs.insert((a, b), n_ab);
            let xi_norm = self.norm(&target);
            for &(c, d) in &pairs[1..] {
                let gamma = self.roots[c].clone();
                let delta = self.roots[d].clone();
                let neg_g: Vec<i64> = gamma.iter().map(|x| -x).collect();
                let neg_d: Vec<i64> = delta.iter().map(|x| -x).collect();
                let b_minus_g: Vec<i64> = beta.iter().zip(&gamma).map(|(x, y)| x - y).collect();
                let a_minus_g: Vec<i64> = alpha.iter().zip(&gamma).map(|(x, y)| x - y).collect();
                let mut acc = Rational::zero();
                if self.is_root(&b_minus_g) {
                    let t = rint(self.n_signed(&beta, &neg_g) * self.n_signed(&alpha, &neg_d)) / self.norm(&b_minus_g);
                    acc += t;
                }
                if self.is_root(&a_minus_g) {
                    let t = rint(self.n_signed(&neg_g, &alpha) * self.n_signed(&beta, &neg_d)) / self.norm(&a_minus_g);
                    acc += t;
                }
                let v = &xi_norm / rint(n_ab) * acc;
                let v = v.to_integer().to_i64().expect("integral structure constant");
                self.positive_pairs.insert((c, d), v);
            }
        }
    }

    /// N_{x,y} for signed roots x, y (0 unless x + y is a root).
    pub fn n_signed(&self, x: &[i64], y: &[i64]) -> i64 {
        let sum: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        if !self.is_root(&sum) {
            return 0;
        }
        let pos = |v: &[i64]| v.iter().any(|&c| c > 0);
        match (pos(x), pos(y)) {
            (true, true) => {
                let i = self.index[x];
                let j = self.index[y];
                if i < j {
                    self.positive_pairs[&(i, j)]
                } else {
                    -self.positive_pairs[&(j, i)]
                }
            }
            (false, false) => {
                let nx: Vec<i64> = x.iter().map(|c| -c).collect();
                let ny: Vec<i64> = y.iter().map(|c| -c).collect();
                -self.n_signed(&nx, &ny)
            }
            _ => {
                let w: Vec<i64> = sum.iter().map(|c| -c).collect();
                // N_{x,y}/(w,w) = N_{y,w}/(x,x) = N_{w,x}/(y,y).
                let v = if pos(y) == pos(&w) {
                    self.norm(&w) / self.norm(x) * rint(self.n_signed(y, &w))
                } else {
                    self.norm(&w) / self.norm(y) * rint(self.n_signed(&w, x))
                };
                v.to_integer().to_i64().expect("integral structure constant")
            }
        }
    }

    /// ⟨α, α_i^∨⟩ for a signed root α and finite node i.
    pub fn root_on_coroot(&self, alpha: &[i64], i: usize) -> i64 {
        alpha.iter().enumerate().map(|(j, &m)| m * self.matrix[i][j + 1]).sum()
    }

    /// Coroot of a positive root in the basis h_1 … h_N.
    pub fn coroot(&self, idx: usize) -> Vec<(usize, Rational)> {
        let r = &self.roots[idx];
        let d_alpha = self.norm(r) / rint(2);
        r.iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(j, &m)| (j + 1, rint(m) * &self.symmetrizers[j + 1] / &d_alpha))
            .collect()
    }

    pub fn bracket(&self, x: FinBasis, y: FinBasis) -> Vec<(FinBasis, Rational)> {
        match (x, y) {
            (FinBasis::Cartan(_), FinBasis::Cartan(_)) => vec![],
            (FinBasis::Cartan(i), r @ FinBasis::Root { .. }) => {
                let c = self.root_on_coroot(&self.weight(r).unwrap(), i);
                if c == 0 {
                    vec![]
                } else {
                    vec![(r, rint(c))]
                }
            }
            (FinBasis::Root { .. }, FinBasis::Cartan(_)) => self.bracket(y, x).into_iter().map(|(b, c)| (b, -c)).collect(),
            (FinBasis::Root { idx: i, neg: s }, FinBasis::Root { idx: j, neg: t }) => {
                if i == j && s != t {
                    let sign = if s { rint(-1) } else { rint(1) };
                    return self.coroot(i).into_iter().map(|(k, c)| (FinBasis::Cartan(k), &c * &sign)).collect();
                }
                let wx = self.weight(x).unwrap();
                let wy = self.weight(y).unwrap();
                let n = self.n_signed(&wx, &wy);
                if n == 0 {
                    return vec![];
                }
                let sum: Vec<i64> = wx.iter().zip(&wy).map(|(a, b)| a + b).collect();
                vec![(self.root_vector(&sum).unwrap(), rint(n))]
            }
        }
    }

    /// Normalized invariant form: (e_α | e_{−α}) = 1/d_α, (h_i | h_j) = a_ij / d_j.
    pub fn form(&self, x: FinBasis, y: FinBasis) -> Rational {
        match (x, y) {
            (FinBasis::Cartan(i), FinBasis::Cartan(j)) => rint(self.matrix[i][j]) / &self.symmetrizers[j],
            (FinBasis::Root { idx: i, neg: s }, FinBasis::Root { idx: j, neg: t }) if i == j && s != t => {
                rint(2) / self.norm(&self.roots[i])
            }
            _ => Rational::zero(),
        }
    }

    /// Expands a linear combination bracket.
    pub fn bracket_lin(&self, a: &[(FinBasis, Rational)], b: &[(FinBasis, Rational)]) -> Vec<(FinBasis, Rational)> {
        let mut acc: HashMap<FinBasis, Rational> = HashMap::new();
        for (x, c) in a {
            for (y, d) in b {
                for (z, e) in self.bracket(*x, *y) {
                    *acc.entry(z).or_insert_with(Rational::zero) += c * d * e;
                }
            }
        }
        let mut out: Vec<(FinBasis, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by(|p, q| p.0.cmp(&q.0));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jacobi_all(name: &str, stride: usize) {
        let dat = CartanDatum::from_name(name).unwrap();
        let lie = FiniteLie::new(&dat);
        let basis = lie.basis();
        let mut count = 0usize;
        for (ia, &a) in basis.iter().enumerate() {
            for (ib, &b) in basis.iter().enumerate() {
                for (ic, &c) in basis.iter().enumerate() {
                    if (ia + 3 * ib + 7 * ic) % stride != 0 {
                        continue;
                    }
                    count += 1;
                    let one = |x: FinBasis| vec![(x, rint(1))];
                    let t1 = lie.bracket_lin(&one(a), &lie.bracket_lin(&one(b), &one(c)));
                    let t2 = lie.bracket_lin(&one(b), &lie.bracket_lin(&one(c), &one(a)));
                    let t3 = lie.bracket_lin(&one(c), &lie.bracket_lin(&one(a), &one(b)));
                    let mut acc: HashMap<FinBasis, Rational> = HashMap::new();
                    for (z, v) in t1.into_iter().chain(t2).chain(t3) {
                        *acc.entry(z).or_insert_with(Rational::zero) += v;
                    }
                    assert!(acc.values().all(Zero::is_zero), "{name}: Jacobi fails on {a:?} {b:?} {c:?}");
                }
            }
        }
        assert!(count > 0);
    }

    #[test]
    fn jacobi_rank_two() {
        jacobi_all("A2", 1);
        jacobi_all("C2", 1);
        jacobi_all("G2", 1);
    }

    #[test]
    fn jacobi_rank_three_four() {
        jacobi_all("A3", 1);
        jacobi_all("B3", 1);
        jacobi_all("C3", 1);
        jacobi_all("F4", 7);
        jacobi_all("D4", 5);
    }

    #[test]
    fn form_is_invariant() {
        for name in ["A2", "C2", "G2", "B3"] {
            let lie = FiniteLie::new(&CartanDatum::from_name(name).unwrap());
            let basis = lie.basis();
            for &a in &basis {
                for &b in &basis {
                    for &c in &basis {
                        // ([a,b] | c) = (a | [b,c])
                        let lhs: Rational = lie.bracket(a, b).iter().map(|(z, v)| v * lie.form(*z, c)).sum();
                        let rhs: Rational = lie.bracket(b, c).iter().map(|(z, v)| v * lie.form(a, *z)).sum();
                        assert_eq!(lhs, rhs, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn highest_root_pairing() {
        for name in ["A2", "C2", "G2", "F4"] {
            let lie = FiniteLie::new(&CartanDatum::from_name(name).unwrap());
            let t = lie.highest_root_index();
            assert_eq!(lie.form(FinBasis::Root { idx: t, neg: false }, FinBasis::Root { idx: t, neg: true }), rint(1));
        }
    }

    #[test]
    fn structure_constants_integral_and_bounded() {
        let lie = FiniteLie::new(&CartanDatum::from_name("G2").unwrap());
        for (_, &v) in lie.positive_pairs.iter() {
            assert!((1..=3).contains(&v.abs()));
        }
    }
}
