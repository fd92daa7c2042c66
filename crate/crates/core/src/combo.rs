//! Finite linear combinations with exact field coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::{FieldElem, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Combo<K: Ord> {
    terms: BTreeMap<K, FieldElem>,
}

impl<K: Ord> Default for Combo<K> {
    fn default() -> Self {
        Combo { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Combo<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: FieldElem) -> Self {
        let mut s = Self::zero();
        s.add_term(k, c);
        s
    }

    pub fn unit(k: K) -> Self {
        Self::single(k, FieldElem::one())
    }

    pub fn add_term(&mut self, k: K, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), -v);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.sub_assign(other);
        s
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut s = Self::zero();
        s.add_scaled(self, c);
        s
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&FieldElem::from_rational(r.clone()))
    }

    pub fn neg(&self) -> Self {
        self.scale(&FieldElem::from_int(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &K) -> FieldElem {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Applies a linear map given on basis keys.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Combo<L>) -> Combo<L> {
        let mut out = Combo::zero();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, FieldElem)> for Combo<K> {
    fn from_iter<I: IntoIterator<Item = (K, FieldElem)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (k, v) in iter {
            s.add_term(k, v);
        }
        s
    }
}
