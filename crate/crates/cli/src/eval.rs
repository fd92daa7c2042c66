//! Evaluation of parsed expressions into the three algebras.

use thiserror::Error;

use toroyang_core::cartan::CartanDatum;
use toroyang_core::qtor::{phi, qi_power, QEngine, QGen, QPoly, QtorError, RewriteLimits, Sign};
use toroyang_core::scalar::{q_power, rint, FieldElem, HSeries};
use toroyang_core::toroidal::{ChevKind, Toroidal, ToroidalGen, UElem};
use toroyang_core::yangian::{YEngine, YGen, YLimits, YPoly, YangianError};

use crate::expr::{Expr, ExprKind, GenName, Pos};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("node {node} at {pos} is not a node of the diagram")]
    BadNode { node: usize, pos: Pos },
    #[error("`{0}` cannot be evaluated in this algebra")]
    Unsupported(String),
    #[error(transparent)]
    Quantum(#[from] QtorError),
    #[error(transparent)]
    Yangian(#[from] YangianError),
}

fn check_node(datum: &CartanDatum, node: usize, e: &Expr) -> Result<(), EvalError> {
    if datum.nodes().contains(&node) {
        Ok(())
    } else {
        Err(EvalError::BadNode { node, pos: e.pos })
    }
}

fn binary<T>(e: &Expr, f: &mut impl FnMut(&Expr) -> Result<T, EvalError>) -> Option<Result<(T, T), EvalError>> {
    match &e.kind {
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Commutator(a, b) | ExprKind::AntiCommutator(a, b) => Some(f(a).and_then(|x| f(b).map(|y| (x, y)))),
        _ => None,
    }
}

/// Quantum expressions as truncated polynomials (unnormalized).
pub fn eval_quantum(e: &Expr, datum: &CartanDatum, order: usize) -> Result<QPoly, EvalError> {
    let series = |s: HSeries| QPoly::series(&s, order);
    let rec = &mut |x: &Expr| eval_quantum(x, datum, order);
    Ok(match &e.kind {
        ExprKind::Scalar(n) => QPoly::one(order).scale(&FieldElem::from_int(*n as i64)),
        ExprKind::Hbar => QPoly::hbar(order),
        ExprKind::Q => series(q_power(&rint(1), order)),
        ExprKind::Qi(i) => {
            check_node(datum, *i, e)?;
            series(qi_power(datum, *i, &rint(1), order))
        }
        ExprKind::Gen { name, node, mode } => {
            check_node(datum, *node, e)?;
            match name {
                GenName::QuantumPlus => QPoly::gen(QGen::plus(*node, *mode), order),
                GenName::QuantumMinus => QPoly::gen(QGen::minus(*node, *mode), order),
                GenName::QuantumH => QPoly::gen(QGen::h(*node, *mode), order),
                GenName::PhiPlus => phi(Sign::Plus, *node, *mode, order),
                GenName::PhiMinus => phi(Sign::Minus, *node, *mode, order),
                other => return Err(EvalError::Unsupported(other.token().into())),
            }
        }
        ExprKind::Power(a, n) => {
            let base = rec(a)?;
            (0..*n).fold(QPoly::one(order), |acc, _| acc.concat(&base))
        }
        _ => {
            let (a, b) = binary(e, rec).expect("binary node")?;
            match &e.kind {
                ExprKind::Add(..) => a.plus(&b),
                ExprKind::Sub(..) => a.minus(&b),
                ExprKind::Mul(..) => a.concat(&b),
                ExprKind::Commutator(..) => a.commutator(&b),
                _ => a.anticommutator(&b),
            }
        }
    })
}

pub fn eval_yangian(e: &Expr, datum: &CartanDatum) -> Result<YPoly, EvalError> {
    let rec = &mut |x: &Expr| eval_yangian(x, datum);
    Ok(match &e.kind {
        ExprKind::Scalar(n) => YPoly::one().scale(&FieldElem::from_int(*n as i64)),
        ExprKind::Hbar => YPoly::hbar(),
        ExprKind::Gen { name, node, mode } => {
            check_node(datum, *node, e)?;
            let level = *mode as u32;
            YPoly::gen(match name {
                GenName::YangianPlus => YGen::plus(*node, level),
                GenName::YangianMinus => YGen::minus(*node, level),
                GenName::YangianH => YGen::h(*node, level),
                other => return Err(EvalError::Unsupported(other.token().into())),
            })
        }
        ExprKind::Power(a, n) => {
            let base = rec(a)?;
            (0..*n).fold(YPoly::one(), |acc, _| acc.concat(&base))
        }
        ExprKind::Q | ExprKind::Qi(_) => return Err(EvalError::Unsupported(e.to_string())),
        _ => {
            let (a, b) = binary(e, rec).expect("binary node")?;
            match &e.kind {
                ExprKind::Add(..) => a.plus(&b),
                ExprKind::Sub(..) => a.minus(&b),
                ExprKind::Mul(..) => a.concat(&b),
                ExprKind::Commutator(..) => a.commutator(&b),
                _ => a.anticommutator(&b),
            }
        }
    })
}

/// Classical expressions in U(𝔤^tor), straightened as they are built.
pub fn eval_classical(e: &Expr, tor: &Toroidal, datum: &CartanDatum) -> Result<UElem, EvalError> {
    let pbw = tor.pbw(None);
    eval_classical_with(e, tor, &pbw, datum)
}

fn eval_classical_with(e: &Expr, tor: &Toroidal, pbw: &toroyang_core::toroidal::Pbw, datum: &CartanDatum) -> Result<UElem, EvalError> {
    let rec = &mut |x: &Expr| eval_classical_with(x, tor, pbw, datum);
    Ok(match &e.kind {
        ExprKind::Scalar(n) => UElem::single(Vec::new(), FieldElem::from_int(*n as i64)),
        ExprKind::Gen { name, node, mode } => {
            check_node(datum, *node, e)?;
            let kind = match name {
                GenName::ClassicalE => ChevKind::E,
                GenName::ClassicalF => ChevKind::F,
                GenName::ClassicalH => ChevKind::H,
                other => return Err(EvalError::Unsupported(other.token().into())),
            };
            UElem::from_lie(&tor.generator_image(ToroidalGen { kind, node: *node, mode: *mode }))
        }
        ExprKind::Power(a, n) => {
            let base = rec(a)?;
            (0..*n).fold(UElem::unit(Vec::new()), |acc, _| pbw.mul(&acc, &base))
        }
        ExprKind::Hbar | ExprKind::Q | ExprKind::Qi(_) => return Err(EvalError::Unsupported(e.to_string())),
        _ => {
            let (a, b) = binary(e, rec).expect("binary node")?;
            match &e.kind {
                ExprKind::Add(..) => a.plus(&b),
                ExprKind::Sub(..) => a.minus(&b),
                ExprKind::Mul(..) => pbw.mul(&a, &b),
                ExprKind::Commutator(..) => pbw.mul(&a, &b).minus(&pbw.mul(&b, &a)),
                _ => pbw.mul(&a, &b).plus(&pbw.mul(&b, &a)),
            }
        }
    })
}

pub struct Normalized {
    pub text: String,
    pub complete: bool,
}

pub fn straighten_quantum(e: &Expr, datum: &CartanDatum, order: usize, limits: RewriteLimits) -> Result<Normalized, EvalError> {
    let p = eval_quantum(e, datum, order)?;
    let (nf, complete) = QEngine::new(datum, order, limits).straighten(&p)?;
    Ok(Normalized { text: nf.to_string(), complete })
}

pub fn straighten_yangian(e: &Expr, datum: &CartanDatum, limits: YLimits) -> Result<Normalized, EvalError> {
    let p = eval_yangian(e, datum)?;
    let (nf, complete) = YEngine::new(datum, limits).straighten(&p)?;
    Ok(Normalized { text: nf.to_string(), complete })
}

pub fn straighten_classical(e: &Expr, datum: &CartanDatum) -> Result<Normalized, EvalError> {
    let tor = Toroidal::new(datum);
    let u = eval_classical(e, &tor, datum)?;
    Ok(Normalized { text: tor.format_uelem(&tor.pbw(None).straighten(&u)), complete: true })
}
