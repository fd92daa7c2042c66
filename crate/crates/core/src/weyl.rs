//! Simple reflections, minimal Weyl words for real roots, diagram automorphisms, and the
//! total orders on PBW generators.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanDatum, Root};
use crate::scalar::rint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("minimal-expression search exceeded its budget of {0} roots")]
    SearchBudget(usize),
    #[error("root {0} is not a real root")]
    NotReal(String),
    #[error("cannot compare generators of different algebras")]
    OrderDomainMismatch,
    #[error("not a diagram automorphism: {0:?}")]
    BadAutomorphism(Vec<usize>),
}

/// ⟨β, α_i^∨⟩ = 2(β, α_i)/(α_i, α_i).
pub fn coroot_pairing(i: usize, beta: &Root, datum: &CartanDatum) -> i64 {
    let ai = datum.simple_root(i);
    let v = rint(2) * datum.bilinear(beta, &ai) / datum.bilinear(&ai, &ai);
    v.to_integer().to_i64().expect("integral pairing")
}

/// r_i(β) = β − ⟨β, α_i^∨⟩ α_i.
pub fn reflect(i: usize, beta: &Root, datum: &CartanDatum) -> Root {
    let c = coroot_pairing(i, beta, datum);
    if c == 0 {
        return beta.clone();
    }
    beta.add(&datum.simple_root(i).scaled(-c))
}

/// Coordinates of a root on the affine simple roots α_0 … α_N.
pub fn node_coordinates(beta: &Root, datum: &CartanDatum) -> Vec<i64> {
    let mut c = vec![beta.delta];
    c.extend(beta.finite.iter().zip(&datum.highest_root).map(|(f, t)| f + beta.delta * t));
    c
}

pub fn from_node_coordinates(c: &[i64], datum: &CartanDatum) -> Root {
    let k = c[0];
    Root::new(c[1..].iter().zip(&datum.highest_root).map(|(x, t)| x - k * t).collect(), k)
}

/// Permutations of the nodes preserving the Cartan matrix.
pub fn diagram_automorphisms(datum: &CartanDatum) -> Vec<Vec<usize>> {
    let n = datum.rank() + 1;
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(datum: &CartanDatum, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        let p = perm.len();
        if p == n {
            out.push(perm.clone());
            return;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let fits = (0..p).all(|q| datum.a(p, q) == datum.a(cand, perm[q]) && datum.a(q, p) == datum.a(perm[q], cand))
                && datum.a(p, p) == datum.a(cand, cand);
            if fits {
                used[cand] = true;
                perm.push(cand);
                go(datum, perm, used, out);
                perm.pop();
                used[cand] = false;
            }
        }
    }
    go(datum, &mut perm, &mut used, &mut out);
    out
}

/// η r_{i_1} ⋯ r_{i_l}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylWord {
    pub eta: Vec<usize>,
    pub letters: Vec<usize>,
}

impl WeylWord {
    pub fn new(datum: &CartanDatum, letters: Vec<usize>) -> Self {
        WeylWord { eta: datum.nodes().collect(), letters }
    }

    pub fn with_automorphism(datum: &CartanDatum, eta: Vec<usize>, letters: Vec<usize>) -> Result<Self, WeylError> {
        if !diagram_automorphisms(datum).contains(&eta) {
            return Err(WeylError::BadAutomorphism(eta));
        }
        Ok(WeylWord { eta, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn eta_is_identity(&self) -> bool {
        self.eta.iter().enumerate().all(|(i, &e)| i == e)
    }

    pub fn apply(&self, beta: &Root, datum: &CartanDatum) -> Root {
        let mut r = beta.clone();
        for &i in self.letters.iter().rev() {
            r = reflect(i, &r, datum);
        }
        if self.eta_is_identity() {
            return r;
        }
        let c = node_coordinates(&r, datum);
        let mut p = vec![0; c.len()];
        for (i, &v) in c.iter().enumerate() {
            p[self.eta[i]] = v;
        }
        from_node_coordinates(&p, datum)
    }
}

pub const DEFAULT_SEARCH_BUDGET: usize = 200_000;

/// Shortest word with β = r_{i_1} ⋯ r_{i_l}(α_j); ties broken by the lexicographically
/// smallest letter sequence.
pub fn minimal_expression(beta: &Root, datum: &CartanDatum, budget: usize) -> Result<(WeylWord, usize), WeylError> {
    if !beta.is_real() || !datum.is_root(beta) {
        return Err(WeylError::NotReal(beta.to_string()));
    }
    let mut seen: HashSet<Root> = HashSet::new();
    let mut queue: VecDeque<(Root, Vec<usize>)> = VecDeque::new();
    seen.insert(beta.clone());
    queue.push_back((beta.clone(), Vec::new()));
    while let Some((r, word)) = queue.pop_front() {
        if let Some(j) = datum.simple_index(&r) {
            return Ok((WeylWord::new(datum, word), j));
        }
        for i in datum.nodes() {
            let next = reflect(i, &r, datum);
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= budget {
                return Err(WeylError::SearchBudget(budget));
            }
            seen.insert(next.clone());
            let mut w = word.clone();
            w.push(i);
            queue.push_back((next, w));
        }
    }
    Err(WeylError::SearchBudget(budget))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraFamily {
    QuantumToroidal,
    Toroidal,
    Yangian,
}

/// Block of a PBW generator: negative ≺ Cartan ≺ positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenKind {
    Minus,
    Cartan,
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenSlot {
    /// A positive root; imaginary roots carry the node tag i of kδ(i).
    Root { root: Root, tag: Option<usize> },
    Node(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorIndex {
    pub family: AlgebraFamily,
    pub kind: GenKind,
    pub slot: GenSlot,
    pub mode: i64,
}

fn root_key(root: &Root, tag: Option<usize>, negate: bool) -> (i64, u8, i64, Vec<i64>, Option<usize>) {
    let r = if negate { root.neg() } else { root.clone() };
    let (k, kind, h, f) = r.order_key();
    (k, kind, h, f, tag)
}

/// The PBW order: kind block first, then (β, k) for positive, (−β, k) for negative and
/// (i, k) for Cartan generators.
pub fn compare_generators(a: &GeneratorIndex, b: &GeneratorIndex) -> Result<Ordering, WeylError> {
    if a.family != b.family {
        return Err(WeylError::OrderDomainMismatch);
    }
    let block = a.kind.cmp(&b.kind);
    if block != Ordering::Equal {
        return Ok(block);
    }
    let ord = match (&a.slot, &b.slot) {
        (GenSlot::Node(i), GenSlot::Node(j)) => (i, a.mode).cmp(&(j, b.mode)),
        (GenSlot::Root { root: r, tag: t }, GenSlot::Root { root: s, tag: u }) => {
            let neg = a.kind == GenKind::Minus;
            (root_key(r, *t, neg), a.mode).cmp(&(root_key(s, *u, neg), b.mode))
        }
        (GenSlot::Node(_), GenSlot::Root { .. }) => Ordering::Less,
        (GenSlot::Root { .. }, GenSlot::Node(_)) => Ordering::Greater,
    };
    Ok(ord)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_examples() {
        let a = CartanDatum::from_name("A2").unwrap();
        for i in a.nodes() {
            assert_eq!(reflect(i, &a.simple_root(i), &a), a.simple_root(i).neg());
            let d = Root::null(2, 1);
            assert_eq!(reflect(i, &d, &a), d);
        }
        // α_2 − a_12 α_1 with a_12 = −1.
        assert_eq!(reflect(1, &a.simple_root(2), &a), Root::new(vec![1, 1], 0));
    }

    #[test]
    fn minimal_expression_examples() {
        let a = CartanDatum::from_name("A2").unwrap();
        let (w, j) = minimal_expression(&a.simple_root(2), &a, 100).unwrap();
        assert!(w.is_empty());
        assert_eq!(j, 2);
        let (w, j) = minimal_expression(&Root::new(vec![1, 1], 0), &a, 100).unwrap();
        assert_eq!((w.letters.clone(), j), (vec![1], 2));
        let a1 = CartanDatum::from_name("A1").unwrap();
        let (w, j) = minimal_expression(&Root::new(vec![-1], 1), &a1, 100).unwrap();
        assert!(w.is_empty());
        assert_eq!(j, 0);
    }

    #[test]
    fn minimal_expression_rejects_imaginary_and_budget() {
        let a = CartanDatum::from_name("A2").unwrap();
        assert!(matches!(minimal_expression(&Root::null(2, 1), &a, 100), Err(WeylError::NotReal(_))));
        let far = Root::new(vec![1, 1], 6);
        assert!(matches!(minimal_expression(&far, &a, 3), Err(WeylError::SearchBudget(3))));
    }

    #[test]
    fn round_trip_small_ranks() {
        for name in ["A1", "A2", "A3", "B3", "C2", "C3", "D4", "F4", "G2", "A4", "B4", "C4"] {
            let dat = CartanDatum::from_name(name).unwrap();
            for (r, _) in dat.enumerate_positive_roots(2) {
                if !r.is_real() {
                    continue;
                }
                let (w, j) = minimal_expression(&r, &dat, DEFAULT_SEARCH_BUDGET).unwrap();
                assert_eq!(w.apply(&dat.simple_root(j), &dat), r, "{name} {r}");
                // No shorter word exists: brute force over all words of length < l.
                if w.len() <= 3 {
                    let l = w.len();
                    let nodes: Vec<usize> = dat.nodes().collect();
                    let mut words: Vec<Vec<usize>> = vec![vec![]];
                    for _ in 0..l {
                        for word in &words {
                            for jj in dat.nodes() {
                                let cand = WeylWord::new(&dat, word.clone()).apply(&dat.simple_root(jj), &dat);
                                assert_ne!(cand, r, "{name}: shorter word {word:?} for {r}");
                            }
                        }
                        words = words.iter().flat_map(|w| nodes.iter().map(move |&i| [w.clone(), vec![i]].concat())).collect();
                    }
                }
            }
        }
    }

    #[test]
    fn finite_roots_closed_under_finite_weyl_group() {
        for name in ["A3", "B3", "C3", "D4", "F4", "G2", "E6"] {
            let dat = CartanDatum::from_name(name).unwrap();
            for f in dat.finite_positive_roots() {
                for i in 1..=dat.rank() {
                    let r = reflect(i, &Root::new(f.clone(), 0), &dat);
                    assert!(dat.is_finite_root(&r.finite), "{name}");
                }
            }
        }
    }

    #[test]
    fn automorphisms() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        assert_eq!(diagram_automorphisms(&a2).len(), 6);
        let g2 = CartanDatum::from_name("G2").unwrap();
        assert_eq!(diagram_automorphisms(&g2).len(), 1);
        let rot = WeylWord::with_automorphism(&a2, vec![1, 2, 0], vec![]).unwrap();
        assert_eq!(rot.apply(&a2.simple_root(0), &a2), a2.simple_root(1));
        assert!(WeylWord::with_automorphism(&g2, vec![1, 0, 2], vec![]).is_err());
    }

    fn gen(kind: GenKind, slot: GenSlot, mode: i64) -> GeneratorIndex {
        GeneratorIndex { family: AlgebraFamily::QuantumToroidal, kind, slot, mode }
    }

    #[test]
    fn generator_order_examples() {
        let a1 = Root::new(vec![1, 0], 0);
        let a12 = Root::new(vec![1, 1], 0);
        let xm = gen(GenKind::Minus, GenSlot::Root { root: a1.clone(), tag: None }, 9);
        let h = gen(GenKind::Cartan, GenSlot::Node(1), 0);
        let h2 = gen(GenKind::Cartan, GenSlot::Node(1), 2);
        let xp = gen(GenKind::Plus, GenSlot::Root { root: a1.clone(), tag: None }, 5);
        let xp2 = gen(GenKind::Plus, GenSlot::Root { root: a12, tag: None }, 0);
        assert_eq!(compare_generators(&xm, &h), Ok(Ordering::Less));
        assert_eq!(compare_generators(&h, &xp), Ok(Ordering::Less));
        assert_eq!(compare_generators(&h, &h2), Ok(Ordering::Less));
        assert_eq!(compare_generators(&xp, &xp2), Ok(Ordering::Less));
        let mut y = h.clone();
        y.family = AlgebraFamily::Yangian;
        assert_eq!(compare_generators(&h, &y), Err(WeylError::OrderDomainMismatch));
    }
}
