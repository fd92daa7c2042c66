//! Exact scalars: the field Q(√2, √3) and ħ-adic series truncated at a fixed order.
//!
//! Every quantum scalar used by the rewrite engines (q = exp(ħ), q_i = exp(d_i ħ),
//! quantum integers and binomials) is an [`HSeries`]. Arithmetic is exact; two runs of
//! the same computation produce bit-identical coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("truncation orders differ ({0} vs {1})")]
    TruncMismatch(usize, usize),
    #[error("division by a series of higher ħ-valuation ({num} < {den})")]
    NonUnitDivision { num: usize, den: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponential of a series with nonzero constant term")]
    ExpOfUnit,
    #[error("binomial index out of range: ({n} choose {k})")]
    BadBinomial { n: i64, k: i64 },
    #[error("square root of {0} is not in Q(√2,√3)")]
    NoSquareRoot(String),
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Ordinary binomial coefficient, exact, for 0 ≤ k ≤ n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Generalized binomial coefficient `n (n-1) ⋯ (n-k+1) / k!` for any integer `n`.
pub fn gen_binomial(n: i64, k: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k as i64 {
        acc = acc * rint(n - j) / rint(j + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, j| a * BigInt::from(j))
}

/// Element a + b√2 + c√3 + e√6 of Q(√2,√3).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    c: [Rational; 4],
}

const SQRT_LABELS: [&str; 4] = ["", "√2", "√3", "√6"];

impl FieldElem {
    pub fn new(a: Rational, b: Rational, c: Rational, e: Rational) -> Self {
        FieldElem { c: [a, b, c, e] }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rint(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        FieldElem { c: [r, Rational::zero(), Rational::zero(), Rational::zero()] }
    }

    pub fn components(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the irrational components vanish.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Square root of a non-negative rational, when it lies in Q(√2,√3).
    pub fn sqrt_rational(r: &Rational) -> Result<Self, ScalarError> {
        if r.is_negative() {
            return Err(ScalarError::NoSquareRoot(r.to_string()));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // √(p/q) = √(pq)/q; pull squares out of pq.
        let p = r.numer().clone();
        let q = r.denom().clone();
        let mut n = &p * &q;
        let mut outside = BigInt::one();
        let mut f = BigInt::from(2);
        while &f * &f <= n {
            let sq = &f * &f;
            while (&n % &sq).is_zero() {
                n /= &sq;
                outside *= &f;
            }
            f += 1;
        }
        let coeff = BigRational::new(outside, q);
        let slot = match n.to_i64() {
            Some(1) => 0,
            Some(2) => 1,
            Some(3) => 2,
            Some(6) => 3,
            _ => return Err(ScalarError::NoSquareRoot(r.to_string())),
        };
        let mut out = Self::zero();
        out.c[slot] = coeff;
        Ok(out)
    }

    fn conj2(&self) -> Self {
        FieldElem { c: [self.c[0].clone(), -self.c[1].clone(), self.c[2].clone(), -self.c[3].clone()] }
    }

    fn conj3(&self) -> Self {
        FieldElem { c: [self.c[0].clone(), self.c[1].clone(), -self.c[2].clone(), -self.c[3].clone()] }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        // x·σ₂(x) lies in Q(√3); multiplying by its σ₃-conjugate lands in Q.
        let s2 = self.conj2();
        let y = self * &s2;
        let ys = y.conj3();
        let norm = &y * &ys;
        let n = norm.as_rational().expect("norm is rational").clone();
        Ok((&s2 * &ys).scale(&n.recip()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        FieldElem { c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r] }
    }

    /// Parses the `"p/q"` 4-tuple wire form.
    pub fn from_parts(parts: &[String]) -> Result<Self, ScalarError> {
        if parts.len() != 4 {
            return Err(ScalarError::Parse(format!("expected 4 components, got {}", parts.len())));
        }
        let mut c: [Rational; 4] = Default::default();
        for (slot, s) in c.iter_mut().zip(parts) {
            *slot = parse_rational(s)?;
        }
        Ok(FieldElem { c })
    }

    pub fn to_parts(&self) -> [String; 4] {
        [0, 1, 2, 3].map(|k| self.c[k].to_string())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let bad = || ScalarError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Default for FieldElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, r) in self.c.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            if !first {
                write!(f, "{}", if r.is_negative() { " - " } else { " + " })?;
            } else if r.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = r.abs();
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", SQRT_LABELS[k])?;
            } else {
                write!(f, "{a}{}", SQRT_LABELS[k])?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem { c: [0, 1, 2, 3].map(|k| &self.c[k] + &o.c[k]) }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem { c: [0, 1, 2, 3].map(|k| &self.c[k] - &o.c[k]) }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { c: [0, 1, 2, 3].map(|k| -self.c[k].clone()) }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return FieldElem::from_rational(a * b);
        }
        if let Some(a) = self.as_rational() {
            return o.scale(a);
        }
        if let Some(b) = o.as_rational() {
            return self.scale(b);
        }
        let [a0, a1, a2, a3] = &self.c;
        let [b0, b1, b2, b3] = &o.c;
        let two = rint(2);
        let three = rint(3);
        let six = rint(6);
        FieldElem {
            c: [
                a0 * b0 + &two * (a1 * b1) + &three * (a2 * b2) + &six * (a3 * b3),
                a0 * b1 + a1 * b0 + &three * (a2 * b3 + a3 * b2),
                a0 * b2 + a2 * b0 + &two * (a1 * b3 + a3 * b1),
                a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
            ],
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_parts().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        FieldElem::from_parts(&parts).map_err(D::Error::custom)
    }
}

/// Power series in ħ over [`FieldElem`], known modulo ħ^{order+1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HSeries {
    order: usize,
    coeffs: Vec<FieldElem>,
}

impl HSeries {
    pub fn zero(order: usize) -> Self {
        HSeries { order, coeffs: vec![FieldElem::zero(); order + 1] }
    }

    pub fn constant(c: FieldElem, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(FieldElem::one(), order)
    }

    pub fn from_int(n: i64, order: usize) -> Self {
        Self::constant(FieldElem::from_int(n), order)
    }

    pub fn from_rational(r: Rational, order: usize) -> Self {
        Self::constant(FieldElem::from_rational(r), order)
    }

    /// `c ħ^k` (zero when k exceeds the order).
    pub fn monomial(c: FieldElem, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn hbar(order: usize) -> Self {
        Self::monomial(FieldElem::one(), 1, order)
    }

    /// Builds a series from coefficients; missing tail entries are zero, extra ones dropped.
    pub fn from_coeffs(mut coeffs: Vec<FieldElem>, order: usize) -> Self {
        coeffs.resize(order + 1, FieldElem::zero());
        HSeries { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    /// Smallest k with nonzero ħ^k coefficient; `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order)].to_vec(), order)
    }

    fn check(&self, o: &Self) -> Result<(), ScalarError> {
        if self.order != o.order {
            Err(ScalarError::TruncMismatch(self.order, o.order))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(self.add_unchecked(o))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(self.add_unchecked(&o.neg()))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn add_unchecked(&self, o: &Self) -> Self {
        HSeries { order: self.order, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let mut out = vec![FieldElem::zero(); self.order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(self.order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        HSeries { order: self.order, coeffs: out }
    }

    pub fn neg(&self) -> Self {
        HSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        HSeries { order: self.order, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        HSeries { order: self.order, coeffs: self.coeffs.iter().map(|a| a.scale(r)).collect() }
    }

    /// Multiplies by ħ^k, dropping what falls beyond the order.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = Self::zero(self.order);
        for i in 0..=self.order {
            if i + k <= self.order {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }

    /// ħ ↦ λħ.
    pub fn rescale_hbar(&self, lambda: &Rational) -> Self {
        let mut p = Rational::one();
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = c.scale(&p);
            p = &p * lambda;
        }
        out
    }

    /// Inverse of a series with invertible constant term.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        let c0 = self.coeffs[0].inv().map_err(|_| ScalarError::NonUnitDivision { num: 0, den: self.valuation().unwrap_or(usize::MAX) })?;
        let mut out = vec![FieldElem::zero(); self.order + 1];
        out[0] = c0.clone();
        for n in 1..=self.order {
            let mut acc = FieldElem::zero();
            for k in 1..=n {
                acc = &acc + &(&self.coeffs[k] * &out[n - k]);
            }
            out[n] = -(&acc * &c0);
        }
        Ok(HSeries { order: self.order, coeffs: out })
    }

    /// Exact division.
    ///
    /// When the divisor has ħ-valuation v > 0 both operands are divided by ħ^v first, so
    /// only ħ^0 … ħ^{order−v} of the quotient are determined: the result carries order
    /// `self.order − v`. Callers wanting a quotient mod ħ^{D+1} pass operands at order D+v.
    pub fn try_div(&self, o: &Self) -> Result<Self, ScalarError> {
        self.check(o)?;
        let v = o.valuation().ok_or(ScalarError::DivisionByZero)?;
        if v == 0 {
            return Ok(self.mul_unchecked(&o.inv()?));
        }
        if v > self.order {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(w) = self.valuation() {
            if w < v {
                return Err(ScalarError::NonUnitDivision { num: w, den: v });
            }
        }
        let order = self.order - v;
        let a = HSeries::from_coeffs(self.coeffs[v..].to_vec(), order);
        let b = HSeries::from_coeffs(o.coeffs[v..].to_vec(), order);
        Ok(a.mul_unchecked(&b.inv()?))
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }
}

impl fmt::Debug for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let paren = c.components()[1..].iter().any(|r| !r.is_zero()) || c.components()[0].is_negative();
            let body = if paren { format!("({c})") } else { c.to_string() };
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{body}*hbar")?,
                _ => write!(f, "{body}*hbar^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(hbar^{})", self.order + 1)
    }
}

impl Serialize for HSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coeffs = Vec::<FieldElem>::deserialize(d)?;
        if coeffs.is_empty() {
            return Err(D::Error::custom("empty series"));
        }
        let order = coeffs.len() - 1;
        Ok(HSeries { order, coeffs })
    }
}

/// exp(a) for a series with zero constant term.
pub fn exp_series(a: &HSeries) -> Result<HSeries, ScalarError> {
    if !a.coeffs[0].is_zero() {
        return Err(ScalarError::ExpOfUnit);
    }
    let d = a.order;
    let mut out = HSeries::one(d);
    let mut term = HSeries::one(d);
    for k in 1..=d {
        term = term.mul_unchecked(a).scale_rat(&rat(1, k as i64));
        out = out.add_unchecked(&term);
    }
    Ok(out)
}

/// exp(x ħ) for a rational x, mod ħ^{order+1}.
pub fn q_power(x: &Rational, order: usize) -> HSeries {
    let a = HSeries::monomial(FieldElem::from_rational(x.clone()), 1, order);
    exp_series(&a).expect("zero constant term")
}

/// q − q⁻¹ = 2 sinh ħ.
pub fn q_minus_qinv(order: usize) -> HSeries {
    let one = rint(1);
    q_power(&one, order).add_unchecked(&q_power(&-one, order).neg())
}

/// Symmetric quantum integer [n] for q_i = exp(d ħ), mod ħ^{order+1}.
pub fn quantum_integer(n: i64, d: &Rational, order: usize) -> HSeries {
    if n == 0 {
        return HSeries::zero(order);
    }
    let hi = order + 1;
    let num = q_power(&(d * rint(n)), hi).add_unchecked(&q_power(&(d * rint(-n)), hi).neg());
    let den = q_power(d, hi).add_unchecked(&q_power(&-d.clone(), hi).neg());
    num.try_div(&den).expect("valuation one divisor")
}

pub fn quantum_factorial(n: i64, d: &Rational, order: usize) -> HSeries {
    (1..=n).fold(HSeries::one(order), |acc, k| acc.mul_unchecked(&quantum_integer(k, d, order)))
}

pub fn quantum_binomial(n: i64, k: i64, d: &Rational, order: usize) -> Result<HSeries, ScalarError> {
    if k < 0 || k > n {
        return Err(ScalarError::BadBinomial { n, k });
    }
    let num = quantum_factorial(n, d, order);
    let den = quantum_factorial(k, d, order).mul_unchecked(&quantum_factorial(n - k, d, order));
    num.try_div(&den)
}
