//! Closed-form coefficient expressions in the index variable `n`.
//!
//! The grammar is deliberately small:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'n' | 'pi' | 'e' | 'i' | func '(' expr ')' | '(' expr ')'
//! func    := ln | log | exp | sin | cos | sqrt | abs
//! ```
//!
//! `^` is right associative and binds tighter than unary minus, so `-n^2`
//! is `-(n^2)` and `(-1)^n` alternates exactly.

use std::fmt;

use num_complex::Complex64;

use super::SequenceError;

const MAX_SOURCE_LEN: usize = 4096;
const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Ln,
    Exp,
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "ln" | "log" => Func::Ln,
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn apply(self, z: Complex64) -> Complex64 {
        if z.im == 0.0 {
            let x = z.re;
            let real = match self {
                Func::Ln if x > 0.0 => Some(x.ln()),
                Func::Sqrt if x >= 0.0 => Some(x.sqrt()),
                Func::Exp => Some(x.exp()),
                Func::Sin => Some(x.sin()),
                Func::Cos => Some(x.cos()),
                Func::Abs => Some(x.abs()),
                _ => None,
            };
            if let Some(v) = real {
                return Complex64::new(v, 0.0);
            }
        }
        match self {
            Func::Ln => z.ln(),
            Func::Exp => z.exp(),
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Sqrt => z.sqrt(),
            Func::Abs => Complex64::new(z.norm(), 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Complex64),
    Index,
    Neg(Box<Node>),
    Call(Func, Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
}

/// A closed-form expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

impl Expr {
    pub fn parse(source: &str) -> Result<Expr, SequenceError> {
        if source.len() > MAX_SOURCE_LEN {
            return Err(SequenceError::Parse {
                pos: MAX_SOURCE_LEN,
                msg: format!("expression longer than {MAX_SOURCE_LEN} bytes"),
            });
        }
        let tokens = tokenize(source)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
            depth: 0,
        };
        let root = parser.expr()?;
        if let Some(tok) = parser.peek() {
            return Err(SequenceError::Parse {
                pos: tok.pos,
                msg: format!("unexpected token {}", tok.kind),
            });
        }
        Ok(Expr {
            source: source.to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluates the expression at index `n`. May return non-finite values;
    /// the caller decides whether that is an error.
    pub fn eval(&self, n: u64) -> Complex64 {
        eval(&self.root, n as f64)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn eval(node: &Node, n: f64) -> Complex64 {
    match node {
        Node::Const(c) => *c,
        Node::Index => Complex64::new(n, 0.0),
        Node::Neg(inner) => -eval(inner, n),
        Node::Call(func, arg) => func.apply(eval(arg, n)),
        Node::Bin(op, lhs, rhs) => {
            let a = eval(lhs, n);
            let b = eval(rhs, n);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => pow(a, b),
            }
        }
    }
}

fn pow(base: Complex64, exponent: Complex64) -> Complex64 {
    if base.im == 0.0 && exponent.im == 0.0 {
        let (x, y) = (base.re, exponent.re);
        if y.fract() == 0.0 && y.abs() <= i32::MAX as f64 {
            return Complex64::new(x.powi(y as i32), 0.0);
        }
        if x >= 0.0 {
            return Complex64::new(x.powf(y), 0.0);
        }
    }
    base.powc(exponent)
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Number(v) => write!(f, "number {v}"),
            TokenKind::Ident(s) => write!(f, "identifier '{s}'"),
            TokenKind::Plus => f.write_str("'+'"),
            TokenKind::Minus => f.write_str("'-'"),
            TokenKind::Star => f.write_str("'*'"),
            TokenKind::Slash => f.write_str("'/'"),
            TokenKind::Caret => f.write_str("'^'"),
            TokenKind::LParen => f.write_str("'('"),
            TokenKind::RParen => f.write_str("')'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, SequenceError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => TokenKind::Plus,
            b'-' => TokenKind::Minus,
            b'*' => TokenKind::Star,
            b'/' => TokenKind::Slash,
            b'^' => TokenKind::Caret,
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent part: 1e-3, 2.5E+4
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| SequenceError::Parse {
                    pos: start,
                    msg: format!("malformed number '{text}'"),
                })?;
                out.push(Token {
                    kind: TokenKind::Number(value),
                    pos: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    kind: TokenKind::Ident(src[start..i].to_string()),
                    pos: start,
                });
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(SequenceError::Parse {
                    pos: start,
                    msg: format!("unexpected character '{ch}'"),
                });
            }
        };
        out.push(Token { kind, pos: start });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn end_pos(&self) -> usize {
        self.tokens.last().map_or(0, |t| t.pos + 1)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), SequenceError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let pos = self.peek().map_or(self.end_pos(), |t| t.pos);
            return Err(SequenceError::Parse {
                pos,
                msg: format!("nesting deeper than {MAX_DEPTH}"),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Node, SequenceError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(&TokenKind::Plus) {
                BinOp::Add
            } else if self.eat(&TokenKind::Minus) {
                BinOp::Sub
            } else {
                break;
            };
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, SequenceError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(&TokenKind::Star) {
                BinOp::Mul
            } else if self.eat(&TokenKind::Slash) {
                BinOp::Div
            } else {
                break;
            };
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, SequenceError> {
        self.enter()?;
        let node = if self.eat(&TokenKind::Minus) {
            Node::Neg(Box::new(self.unary()?))
        } else if self.eat(&TokenKind::Plus) {
            self.unary()?
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(node)
    }

    fn power(&mut self) -> Result<Node, SequenceError> {
        let base = self.primary()?;
        if self.eat(&TokenKind::Caret) {
            let exponent = self.unary()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, SequenceError> {
        let Some(tok) = self.peek() else {
            return Err(SequenceError::Parse {
                pos: self.end_pos(),
                msg: "unexpected end of expression".into(),
            });
        };
        self.pos += 1;
        match &tok.kind {
            TokenKind::Number(v) => Ok(Node::Const(Complex64::new(*v, 0.0))),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect_rparen(tok.pos)?;
                Ok(inner)
            }
            TokenKind::Ident(name) => match name.as_str() {
                "n" => Ok(Node::Index),
                "pi" => Ok(Node::Const(Complex64::new(std::f64::consts::PI, 0.0))),
                "e" => Ok(Node::Const(Complex64::new(std::f64::consts::E, 0.0))),
                "i" => Ok(Node::Const(Complex64::new(0.0, 1.0))),
                other => {
                    let func = Func::from_name(other).ok_or_else(|| SequenceError::Parse {
                        pos: tok.pos,
                        msg: format!("unknown identifier '{other}'"),
                    })?;
                    if !self.eat(&TokenKind::LParen) {
                        return Err(SequenceError::Parse {
                            pos: tok.pos,
                            msg: format!("expected '(' after {}", func.name()),
                        });
                    }
                    let arg = self.expr()?;
                    self.expect_rparen(tok.pos)?;
                    Ok(Node::Call(func, Box::new(arg)))
                }
            },
            other => Err(SequenceError::Parse {
                pos: tok.pos,
                msg: format!("unexpected token {other}"),
            }),
        }
    }

    fn expect_rparen(&mut self, open: usize) -> Result<(), SequenceError> {
        if self.eat(&TokenKind::RParen) {
            Ok(())
        } else {
            Err(SequenceError::Parse {
                pos: self.peek().map_or(self.end_pos(), |t| t.pos),
                msg: format!("unclosed '(' opened at {open}"),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(src: &str, n: u64) -> Complex64 {
        Expr::parse(src).unwrap().eval(n)
    }

    #[test]
    fn alternating_power_is_exact() {
        assert_eq!(at("(-1)^n/n", 4), Complex64::new(0.25, 0.0));
        assert_eq!(at("(-1)^n/n", 3), Complex64::new(-1.0 / 3.0, 0.0));
    }

    #[test]
    fn precedence() {
        assert_eq!(at("-n^2", 3).re, -9.0);
        assert_eq!(at("2^3^2", 1).re, 512.0);
        assert_eq!(at("1 + 2 * 3", 1).re, 7.0);
        assert_eq!(at("2^-1", 1).re, 0.5);
        assert!((at("1/(n*ln(n+1)^2)", 1).re - 1.0 / 2f64.ln().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn scientific_notation_and_constants() {
        assert_eq!(at("1.5e2", 1).re, 150.0);
        assert_eq!(at("2E-1", 1).re, 0.2);
        let z = at("exp(i*pi*n)", 1);
        assert!((z.re + 1.0).abs() < 1e-15 && z.im.abs() < 1e-15);
    }

    #[test]
    fn parse_errors_carry_positions() {
        for (src, pos) in [
            ("1 +", 3),
            ("foo(n)", 0),
            ("(n", 2),
            ("n $ 1", 2),
            ("sin n", 0),
            ("1..2", 0),
        ] {
            match Expr::parse(src) {
                Err(SequenceError::Parse { pos: p, .. }) => assert_eq!(p, pos, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn deep_nesting_is_rejected() {
        let src = format!("{}n{}", "(".repeat(200), ")".repeat(200));
        assert!(Expr::parse(&src).is_err());
        let src = "-".repeat(500) + "n";
        assert!(Expr::parse(&src).is_err());
    }
}
