//! A small expression language in one variable `s`, used for closed-form
//! curve coordinates and prescribed curvature functions.
//!
//! Grammar (precedence climbing, lowest first):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := NUMBER | 's' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'
//! FUNC    := sinh | cosh | sin | cos | exp | sqrt
//! ```
//!
//! Exponents must not depend on `s`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} at column {column}")]
pub struct ParseError {
    pub message: String,
    /// 1-based character column.
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sinh,
    Cosh,
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, Arc<Expr>),
    Call(Func, Arc<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0, len: src.chars().count() };
        let e = p.expr()?;
        match p.peek() {
            None => Ok(e),
            Some((tok, col)) => Err(ParseError {
                message: format!("unexpected {tok}"),
                column: col,
            }),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => s,
            Expr::Neg(a) => -a.eval(s),
            Expr::Add(a, b) => a.eval(s) + b.eval(s),
            Expr::Sub(a, b) => a.eval(s) - b.eval(s),
            Expr::Mul(a, b) => a.eval(s) * b.eval(s),
            Expr::Div(a, b) => a.eval(s) / b.eval(s),
            Expr::Pow(a, b) => pow(a.eval(s), b.eval(s)),
            Expr::Call(f, a) => f.apply(a.eval(s)),
        }
    }

    pub fn depends_on_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on_var() || b.depends_on_var()
            }
        }
    }

    /// Symbolic derivative with respect to `s`.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        match self {
            Const(_) => Const(0.0),
            Var => Const(1.0),
            Neg(a) => neg(a.derivative()),
            Add(a, b) => add(a.derivative(), b.derivative()),
            Sub(a, b) => sub(a.derivative(), b.derivative()),
            Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                mul((**b).clone(), (**b).clone()),
            ),
            // Exponent is constant (checked at parse time).
            Pow(a, n) => mul(
                mul((**n).clone(), pow_expr((**a).clone(), sub((**n).clone(), Const(1.0)))),
                a.derivative(),
            ),
            Call(f, a) => {
                let inner = (**a).clone();
                let outer = match f {
                    Func::Sinh => call(Func::Cosh, inner),
                    Func::Cosh => call(Func::Sinh, inner),
                    Func::Sin => call(Func::Cos, inner),
                    Func::Cos => neg(call(Func::Sin, inner)),
                    Func::Exp => call(Func::Exp, inner),
                    Func::Sqrt => div(Const(0.5), call(Func::Sqrt, inner)),
                };
                mul(outer, a.derivative())
            }
        }
    }

    /// Derivative of the given order (0 returns a clone).
    pub fn nth_derivative(&self, order: usize) -> Expr {
        (0..order).fold(self.clone(), |e, _| e.derivative())
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }
}

fn pow(x: f64, n: f64) -> f64 {
    if n.fract() == 0.0 && n.abs() < i32::MAX as f64 {
        x.powi(n as i32)
    } else {
        x.powf(n)
    }
}

// Constructors with light constant folding; keeps repeated derivatives small.
fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => (*inner).clone(),
        a => Expr::Neg(Arc::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::Add(Arc::new(a), Arc::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::Sub(Arc::new(a), Arc::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(0.0), _) | (_, Some(0.0)) => Expr::Const(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Expr::Mul(Arc::new(a), Arc::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(0.0), _) => Expr::Const(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::Div(Arc::new(a), Arc::new(b)),
    }
}

fn pow_expr(a: Expr, n: Expr) -> Expr {
    match n.as_const() {
        Some(0.0) => Expr::Const(1.0),
        Some(1.0) => a,
        _ => Expr::Pow(Arc::new(a), Arc::new(n)),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(f.apply(c)),
        a => Expr::Call(f, Arc::new(a)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("s"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(x) => write!(f, "number {x}"),
            Token::Ident(s) => write!(f, "identifier '{s}'"),
            Token::Op(c) => write!(f, "operator '{c}'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part: 1e-3, 2.5E+4
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<f64>().map_err(|_| ParseError {
                message: format!("malformed number '{text}'"),
                column: col,
            })?;
            out.push((Token::Num(value), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Token::Ident(chars[start..i].iter().collect()), col));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Token::Op(c),
                '·' => Token::Op('*'),
                '(' => Token::LParen,
                ')' => Token::RParen,
                _ => {
                    return Err(ParseError {
                        message: format!("unexpected character '{c}'"),
                        column: col,
                    })
                }
            };
            out.push((tok, col));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<(&Token, usize)> {
        self.tokens.get(self.pos).map(|(t, c)| (t, *c))
    }

    fn next(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn end_column(&self) -> usize {
        self.len + 1
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some((Token::Op(op @ ('+' | '-')), _)) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' { add(lhs, rhs) } else { sub(lhs, rhs) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some((Token::Op(op @ ('*' | '/')), _)) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' { mul(lhs, rhs) } else { Expr::Div(Arc::new(lhs), Arc::new(rhs)) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some((Token::Op('-'), _)) = self.peek() {
            self.pos += 1;
            return Ok(neg(self.unary()?));
        }
        if let Some((Token::Op('+'), _)) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if let Some((Token::Op('^'), col)) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            if exponent.depends_on_var() {
                return Err(ParseError {
                    message: "exponent must not depend on s".into(),
                    column: col + 1,
                });
            }
            return Ok(Expr::Pow(Arc::new(base), Arc::new(Expr::Const(exponent.eval(0.0)))));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let end = self.end_column();
        let Some((tok, col)) = self.next() else {
            return Err(ParseError {
                message: "unexpected end of expression".into(),
                column: end,
            });
        };
        match tok {
            Token::Num(x) => Ok(Expr::Const(x)),
            Token::LParen => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Token::Ident(name) => match name.as_str() {
                "s" => Ok(Expr::Var),
                "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                "e" => Ok(Expr::Const(std::f64::consts::E)),
                _ => {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(ParseError {
                            message: format!("unknown identifier '{name}'"),
                            column: col,
                        });
                    };
                    match self.next() {
                        Some((Token::LParen, _)) => {}
                        Some((t, c)) => {
                            return Err(ParseError {
                                message: format!("expected '(' after {name}, found {t}"),
                                column: c,
                            })
                        }
                        None => {
                            return Err(ParseError {
                                message: format!("expected '(' after {name}"),
                                column: end,
                            })
                        }
                    }
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(call(func, arg))
                }
            },
            t => Err(ParseError {
                message: format!("unexpected {t}"),
                column: col,
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        let end = self.end_column();
        match self.next() {
            Some((Token::RParen, _)) => Ok(()),
            Some((t, c)) => Err(ParseError {
                message: format!("expected ')', found {t}"),
                column: c,
            }),
            None => Err(ParseError {
                message: "expected ')'".into(),
                column: end,
            }),
        }
    }
}
