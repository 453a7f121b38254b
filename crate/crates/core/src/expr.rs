//! Expression trees over the constant 1.
//!
//! An `Expression` is a binary tree of sums and products whose leaves are all
//! the literal 1; its value is the integer it denotes and its leaf count is
//! the number of 1's spent. `reconstruct` recovers an optimal expression for
//! any table entry, so `ones(reconstruct(t, n)) == t.query(n)`.
//!
//! Text form: fully parenthesized, no whitespace, ASCII. Chains of the same
//! operator render without inner parentheses (`(1+1+1)`), and the parser
//! folds such chains back right-associatively, so `parse(render(e)) == e`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::table::ComplexityTable;

const MAX_PARSE_DEPTH: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression {
    One,
    Sum(Box<Expression>, Box<Expression>),
    Prod(Box<Expression>, Box<Expression>),
}

impl Expression {
    pub fn one() -> Expression {
        Expression::One
    }

    pub fn sum(a: Expression, b: Expression) -> Expression {
        Expression::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Expression, b: Expression) -> Expression {
        Expression::Prod(Box::new(a), Box::new(b))
    }

    /// Exact value; synthesized expressions routinely exceed 64 bits.
    pub fn value(&self) -> BigUint {
        match self {
            Expression::One => BigUint::one(),
            Expression::Sum(l, r) => l.value() + r.value(),
            Expression::Prod(l, r) => l.value() * r.value(),
        }
    }

    /// Number of 1 leaves.
    pub fn ones(&self) -> u64 {
        match self {
            Expression::One => 1,
            Expression::Sum(l, r) | Expression::Prod(l, r) => l.ones() + r.ones(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s);
        s
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Expression::One => out.push('1'),
            Expression::Sum(..) => {
                out.push('(');
                self.render_chain(out, b'+');
                out.push(')');
            }
            Expression::Prod(..) => {
                out.push('(');
                self.render_chain(out, b'*');
                out.push(')');
            }
        }
    }

    /// Flattens the right spine of a same-operator chain so that
    /// `1+(1+1)` prints as `1+1+1`.
    fn render_chain(&self, out: &mut String, op: u8) {
        match (self, op) {
            (Expression::Sum(l, r), b'+') => {
                l.render_into(out);
                out.push('+');
                r.render_chain(out, b'+');
            }
            (Expression::Prod(l, r), b'*') => {
                l.render_into(out);
                out.push('*');
                r.render_chain(out, b'*');
            }
            _ => self.render_into(out),
        }
    }

    /// Parse the textual form. Errors carry the byte offset of the first
    /// offending character.
    pub fn parse(text: &str) -> Result<Expression> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            depth: 0,
        };
        let e = p.expr()?;
        if p.pos != p.bytes.len() {
            return Err(Error::Syntax {
                offset: p.pos,
                message: "trailing input after expression",
            });
        }
        Ok(e)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expression> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(Expression::One)
            }
            Some(b'(') => {
                self.depth += 1;
                if self.depth > MAX_PARSE_DEPTH {
                    return Err(Error::Syntax {
                        offset: self.pos,
                        message: "nesting too deep",
                    });
                }
                self.pos += 1;
                let first = self.expr()?;
                let op = match self.peek() {
                    Some(c @ (b'+' | b'*')) => c,
                    _ => {
                        return Err(Error::Syntax {
                            offset: self.pos,
                            message: "expected '+' or '*'",
                        })
                    }
                };
                let mut parts = vec![first];
                loop {
                    self.pos += 1; // consume operator
                    parts.push(self.expr()?);
                    match self.peek() {
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) if c == op => continue,
                        Some(b'+') | Some(b'*') => {
                            return Err(Error::Syntax {
                                offset: self.pos,
                                message: "mixed operators in one group",
                            })
                        }
                        _ => {
                            return Err(Error::Syntax {
                                offset: self.pos,
                                message: "expected operator or ')'",
                            })
                        }
                    }
                }
                self.depth -= 1;
                // fold right-associatively: a+b+c => a+(b+c)
                let mut acc = parts.pop().unwrap();
                while let Some(p) = parts.pop() {
                    acc = if op == b'+' {
                        Expression::sum(p, acc)
                    } else {
                        Expression::prod(p, acc)
                    };
                }
                Ok(acc)
            }
            _ => Err(Error::Syntax {
                offset: self.pos,
                message: "expected '1' or '('",
            }),
        }
    }
}

/// Recover an optimal expression for n from an exact table.
///
/// Deterministic tie-breaking: a multiplicative split with the smallest
/// divisor `d >= 2` achieving the optimum is preferred; otherwise the
/// additive split with the smallest first summand.
pub fn reconstruct(table: &ComplexityTable, n: u64) -> Result<Expression> {
    if n == 0 || n > table.limit() {
        return Err(Error::OutOfRange {
            n,
            limit: table.limit(),
        });
    }
    rec(table, n)
}

fn rec(table: &ComplexityTable, n: u64) -> Result<Expression> {
    if n == 1 {
        return Ok(Expression::One);
    }
    let c = table.get(n) as u32;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) && table.get(d) as u32 + table.get(n / d) as u32 == c {
            return Ok(Expression::prod(rec(table, d)?, rec(table, n / d)?));
        }
        d += 1;
    }
    for a in 1..=n / 2 {
        if table.get(a) as u32 + table.get(n - a) as u32 == c {
            return Ok(Expression::sum(rec(table, a)?, rec(table, n - a)?));
        }
    }
    Err(Error::CorruptTable { n })
}

/// The plain binary-expansion expression for n (the classical
/// `cost(n) <= 3 log2 n` witness): most significant bit first, each further
/// bit costs a doubling plus possibly a 1.
pub fn binary_expansion(n: &BigUint) -> Result<Expression> {
    use num_traits::Zero;
    if n.is_zero() {
        return Err(Error::OutOfRange { n: 0, limit: 0 });
    }
    let bits = n.bits();
    let mut e = Expression::One;
    for i in (0..bits - 1).rev() {
        e = Expression::prod(e, Expression::sum(Expression::One, Expression::One));
        if n.bit(i) {
            e = Expression::sum(e, Expression::One);
        }
    }
    Ok(e)
}
