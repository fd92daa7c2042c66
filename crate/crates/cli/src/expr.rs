//! Expression language shared by the three dialects.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' INT)*
//! atom   := INT | 'hbar' | 'q' | 'qi(' INT ')' | GEN
//!         | '[' expr ',' expr ']' | '{' expr ',' expr '}' | '(' expr ')'
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Classical,
    Quantum,
    Yangian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenName {
    /// `e`, `f`, `h`
    ClassicalE,
    ClassicalF,
    ClassicalH,
    /// `X+`, `X-`, `H`, `Phi+`, `Phi-`
    QuantumPlus,
    QuantumMinus,
    QuantumH,
    PhiPlus,
    PhiMinus,
    /// `x+`, `x-`, `h`
    YangianPlus,
    YangianMinus,
    YangianH,
}

impl GenName {
    pub fn token(self) -> &'static str {
        match self {
            GenName::ClassicalE => "e",
            GenName::ClassicalF => "f",
            GenName::ClassicalH | GenName::YangianH => "h",
            GenName::QuantumPlus => "X+",
            GenName::QuantumMinus => "X-",
            GenName::QuantumH => "H",
            GenName::PhiPlus => "Phi+",
            GenName::PhiMinus => "Phi-",
            GenName::YangianPlus => "x+",
            GenName::YangianMinus => "x-",
        }
    }

    pub fn dialect(self) -> Dialect {
        match self {
            GenName::ClassicalE | GenName::ClassicalF | GenName::ClassicalH => Dialect::Classical,
            GenName::QuantumPlus | GenName::QuantumMinus | GenName::QuantumH | GenName::PhiPlus | GenName::PhiMinus => Dialect::Quantum,
            GenName::YangianPlus | GenName::YangianMinus | GenName::YangianH => Dialect::Yangian,
        }
    }

    pub fn all(dialect: Dialect) -> &'static [GenName] {
        match dialect {
            Dialect::Classical => &[GenName::ClassicalE, GenName::ClassicalF, GenName::ClassicalH],
            Dialect::Quantum => &[GenName::QuantumPlus, GenName::QuantumMinus, GenName::QuantumH, GenName::PhiPlus, GenName::PhiMinus],
            Dialect::Yangian => &[GenName::YangianPlus, GenName::YangianMinus, GenName::YangianH],
        }
    }

    fn lookup(tok: &str, dialect: Dialect) -> Option<GenName> {
        if tok == "h" {
            return Some(if dialect == Dialect::Yangian { GenName::YangianH } else { GenName::ClassicalH });
        }
        [Dialect::Classical, Dialect::Quantum, Dialect::Yangian].iter().flat_map(|d| GenName::all(*d)).copied().find(|g| g.token() == tok)
    }
}

/// Line and column, both starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Scalar(u64),
    Hbar,
    Q,
    Qi(usize),
    Gen { name: GenName, node: usize, mode: i64 },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
    AntiCommutator(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, u32),
}

/// An AST node; equality ignores source positions.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    #[cfg(test)]
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, pos: Pos::default() }
    }

    fn prec(&self) -> u8 {
        match self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) => 2,
            ExprKind::Power(..) => 3,
            _ => 4,
        }
    }
}

fn paren(e: &Expr, min: u8) -> String {
    if e.prec() < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

/// Canonical printing: single spaces around `+`, `-`, `*`, and parentheses only where the
/// left-associative grammar needs them.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Scalar(n) => write!(f, "{n}"),
            ExprKind::Hbar => write!(f, "hbar"),
            ExprKind::Q => write!(f, "q"),
            ExprKind::Qi(i) => write!(f, "qi({i})"),
            ExprKind::Gen { name, node, mode } => write!(f, "{}({node},{mode})", name.token()),
            ExprKind::Add(a, b) => write!(f, "{} + {}", paren(a, 1), paren(b, 2)),
            ExprKind::Sub(a, b) => write!(f, "{} - {}", paren(a, 1), paren(b, 2)),
            ExprKind::Mul(a, b) => write!(f, "{} * {}", paren(a, 2), paren(b, 3)),
            ExprKind::Power(a, n) => write!(f, "{}^{n}", paren(a, 3)),
            ExprKind::Commutator(a, b) => write!(f, "[{a}, {b}]"),
            ExprKind::AntiCommutator(a, b) => write!(f, "{{{a}, {b}}}"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("dialect mismatch at {pos}: `{token}` is not part of the {dialect:?} dialect")]
    DialectMismatch { pos: Pos, token: String, dialect: Dialect },
}

struct Parser<'s> {
    src: &'s [u8],
    at: usize,
    dialect: Dialect,
}

impl<'s> Parser<'s> {
    fn pos_of(&self, at: usize) -> Pos {
        let before = &self.src[..at];
        let line = before.iter().filter(|&&c| c == b'\n').count() + 1;
        let col = at - before.iter().rposition(|&c| c == b'\n').map_or(0, |p| p + 1) + 1;
        Pos { line, col }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos_of(self.at), msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.at < self.src.len() && self.src[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.at).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.at;
        if self.src.get(self.at) == Some(&b'-') {
            self.at += 1;
        }
        while self.src.get(self.at).is_some_and(u8::is_ascii_digit) {
            self.at += 1;
        }
        std::str::from_utf8(&self.src[start..self.at]).unwrap().parse().or_else(|_| {
            self.at = start;
            self.err("expected an integer")
        })
    }

    fn unsigned(&mut self) -> Result<u64, ParseError> {
        let start = self.at;
        let n = self.int()?;
        u64::try_from(n).or_else(|_| {
            self.at = start;
            self.err("expected a non-negative integer")
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos_of(self.at);
            match self.peek() {
                Some(b'+') => {
                    self.at += 1;
                    let rhs = self.term()?;
                    lhs = Expr { kind: ExprKind::Add(Box::new(lhs), Box::new(rhs)), pos };
                }
                Some(b'-') => {
                    self.at += 1;
                    let rhs = self.term()?;
                    lhs = Expr { kind: ExprKind::Sub(Box::new(lhs), Box::new(rhs)), pos };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            let pos = self.pos_of(self.at);
            self.at += 1;
            let rhs = self.factor()?;
            lhs = Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            let pos = self.pos_of(self.at);
            self.at += 1;
            let start = self.at;
            let n = self.unsigned()?;
            let n = u32::try_from(n).or_else(|_| {
                self.at = start;
                self.err("exponent too large")
            })?;
            base = Expr { kind: ExprKind::Power(Box::new(base), n), pos };
        }
        Ok(base)
    }

    fn pair(&mut self, close: u8) -> Result<(Expr, Expr), ParseError> {
        let a = self.expr()?;
        self.expect(b',')?;
        let b = self.expr()?;
        self.expect(close)?;
        Ok((a, b))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let c = match self.peek() {
            Some(c) => c,
            None => return self.err("unexpected end of input"),
        };
        let start = self.at;
        let pos = self.pos_of(start);
        let kind = match c {
            b'0'..=b'9' => ExprKind::Scalar(self.unsigned()?),
            b'(' => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                return Ok(Expr { pos, ..e });
            }
            b'[' => {
                self.at += 1;
                let (a, b) = self.pair(b']')?;
                ExprKind::Commutator(Box::new(a), Box::new(b))
            }
            b'{' => {
                self.at += 1;
                let (a, b) = self.pair(b'}')?;
                ExprKind::AntiCommutator(Box::new(a), Box::new(b))
            }
            c if c.is_ascii_alphabetic() => {
                while self.src.get(self.at).is_some_and(u8::is_ascii_alphabetic) {
                    self.at += 1;
                }
                if matches!(&self.src[start..self.at], b"X" | b"x" | b"Phi") && matches!(self.src.get(self.at), Some(b'+' | b'-')) {
                    self.at += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.at]).unwrap().to_string();
                self.word(&word, pos)?
            }
            other => return self.err(format!("unexpected `{}`", other as char)),
        };
        Ok(Expr { kind, pos })
    }

    fn mismatch<T>(&self, token: &str, pos: Pos) -> Result<T, ParseError> {
        Err(ParseError::DialectMismatch { pos, token: token.to_string(), dialect: self.dialect })
    }

    fn word(&mut self, word: &str, pos: Pos) -> Result<ExprKind, ParseError> {
        match word {
            "hbar" if self.dialect == Dialect::Classical => self.mismatch(word, pos),
            "hbar" => Ok(ExprKind::Hbar),
            "q" | "qi" if self.dialect != Dialect::Quantum => self.mismatch(word, pos),
            "q" => Ok(ExprKind::Q),
            "qi" => {
                self.expect(b'(')?;
                let i = self.unsigned()? as usize;
                self.expect(b')')?;
                Ok(ExprKind::Qi(i))
            }
            _ => {
                let Some(name) = GenName::lookup(word, self.dialect) else {
                    self.at -= word.len();
                    return self.err(format!("unknown token `{word}`"));
                };
                if name.dialect() != self.dialect {
                    return self.mismatch(word, pos);
                }
                self.expect(b'(')?;
                let node = self.unsigned()? as usize;
                self.expect(b',')?;
                let mode = self.int()?;
                self.expect(b')')?;
                if self.dialect == Dialect::Yangian && mode < 0 {
                    return Err(ParseError::Syntax { pos, msg: "Yangian levels are non-negative".into() });
                }
                Ok(ExprKind::Gen { name, node, mode })
            }
        }
    }
}

pub fn parse_expression(text: &str, dialect: Dialect) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), at: 0, dialect };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn gen(name: GenName, node: usize, mode: i64) -> Expr {
        Expr::new(ExprKind::Gen { name, node, mode })
    }

    #[test]
    fn spec_examples() {
        let e = parse_expression("[X+(1,0), X-(1,0)]", Dialect::Quantum).unwrap();
        assert_eq!(e.kind, ExprKind::Commutator(Box::new(gen(GenName::QuantumPlus, 1, 0)), Box::new(gen(GenName::QuantumMinus, 1, 0))));
        let e = parse_expression("{h(1,0), x+(2,1)}", Dialect::Yangian).unwrap();
        assert!(matches!(e.kind, ExprKind::AntiCommutator(..)));
        let e = parse_expression("X+(1,0)^2 * H(0,-1)", Dialect::Quantum).unwrap();
        let want = ExprKind::Mul(Box::new(Expr::new(ExprKind::Power(Box::new(gen(GenName::QuantumPlus, 1, 0)), 2))), Box::new(gen(GenName::QuantumH, 0, -1)));
        assert_eq!(e.kind, want);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expression("X+(1,0) *\n  x-(1,0)", Dialect::Quantum).unwrap_err();
        assert_eq!(e, ParseError::DialectMismatch { pos: Pos { line: 2, col: 3 }, token: "x-".into(), dialect: Dialect::Quantum });
        let e = parse_expression("e(1,0) + q", Dialect::Classical).unwrap_err();
        assert!(matches!(e, ParseError::DialectMismatch { pos: Pos { line: 1, col: 10 }, .. }));
        let e = parse_expression("[e(1,0) f(1,0)]", Dialect::Classical).unwrap_err();
        assert!(matches!(e, ParseError::Syntax { pos: Pos { line: 1, col: 9 }, .. }));
        assert!(parse_expression("x+(1,-1)", Dialect::Yangian).is_err());
        assert!(parse_expression("X+(1,0))", Dialect::Quantum).is_err());
    }

    #[test]
    fn canonical_printing() {
        let e = parse_expression("(X+(1,0)+ H(0,1)) *2 - (hbar - q)^3", Dialect::Quantum).unwrap();
        assert_eq!(e.to_string(), "(X+(1,0) + H(0,1)) * 2 - (hbar - q)^3");
        let e = parse_expression("a", Dialect::Quantum);
        assert!(e.is_err());
    }

    fn arb_expr(dialect: Dialect) -> impl Strategy<Value = Expr> {
        let names = GenName::all(dialect);
        let min_mode = if dialect == Dialect::Yangian { 0 } else { -3 };
        let mut leaves = vec![
            (0u64..20).prop_map(|n| Expr::new(ExprKind::Scalar(n))).boxed(),
            (0..names.len(), 0usize..3, min_mode..4i64).prop_map(move |(g, node, mode)| gen(names[g], node, mode)).boxed(),
        ];
        if dialect != Dialect::Classical {
            leaves.push(Just(Expr::new(ExprKind::Hbar)).boxed());
        }
        if dialect == Dialect::Quantum {
            leaves.push(Just(Expr::new(ExprKind::Q)).boxed());
            leaves.push((0usize..3).prop_map(|i| Expr::new(ExprKind::Qi(i))).boxed());
        }
        proptest::strategy::Union::new(leaves).prop_recursive(4, 24, 2, |inner| {
            let pair = (inner.clone(), inner.clone());
            prop_oneof![
                pair.clone().prop_map(|(a, b)| Expr::new(ExprKind::Add(Box::new(a), Box::new(b)))),
                pair.clone().prop_map(|(a, b)| Expr::new(ExprKind::Sub(Box::new(a), Box::new(b)))),
                pair.clone().prop_map(|(a, b)| Expr::new(ExprKind::Mul(Box::new(a), Box::new(b)))),
                pair.clone().prop_map(|(a, b)| Expr::new(ExprKind::Commutator(Box::new(a), Box::new(b)))),
                pair.prop_map(|(a, b)| Expr::new(ExprKind::AntiCommutator(Box::new(a), Box::new(b)))),
                (inner, 1u32..4).prop_map(|(a, n)| Expr::new(ExprKind::Power(Box::new(a), n))),
            ]
        })
    }

    fn arb_dialect_expr() -> impl Strategy<Value = (Dialect, Expr)> {
        prop_oneof![
            arb_expr(Dialect::Classical).prop_map(|e| (Dialect::Classical, e)),
            arb_expr(Dialect::Quantum).prop_map(|e| (Dialect::Quantum, e)),
            arb_expr(Dialect::Yangian).prop_map(|e| (Dialect::Yangian, e)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn printing_round_trips((dialect, e) in arb_dialect_expr()) {
            let text = e.to_string();
            let back = parse_expression(&text, dialect).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
