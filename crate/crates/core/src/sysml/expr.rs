//! Expression trees for constraints, derived attributes, guards and assigns.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! or     := and ("or" and)*
//! and    := not ("and" not)*
//! not    := "not" not | cmp
//! cmp    := add (("==" | "!=" | "<" | "<=" | ">" | ">=") add)*
//! add    := mul (("+" | "-") mul)*
//! mul    := unary (("*" | "/") unary)*
//! unary  := "-" unary | primary
//! primary:= literal | path | "(" or ")"
//! ```
//!
//! All binary operators associate to the left. Printing inserts the minimum
//! parentheses needed for the printed text to parse back to the same tree.

use std::fmt;

use super::ast::Name;

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Bool(bool),
    Int(u64),
    Real(f64),
    String(String),
    /// `Enum::Literal`
    Enum { ty: Name, literal: Name },
}

impl Literal {
    pub fn enum_value(ty: &str, literal: &str) -> Self {
        Literal::Enum {
            ty: Name::new(ty),
            literal: Name::new(literal),
        }
    }

    pub fn as_string(&self) -> Option<&str> {
        match self {
            Literal::String(s) => Some(s),
            _ => None,
        }
    }
}

pub fn write_string_literal(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Bool(b) => write!(f, "{b}"),
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Real(r) => write!(f, "{r:?}"),
            Literal::String(s) => write_string_literal(f, s),
            Literal::Enum { ty, literal } => write!(f, "{ty}::{literal}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 12] = [
        BinaryOp::Or,
        BinaryOp::And,
        BinaryOp::Eq,
        BinaryOp::Ne,
        BinaryOp::Lt,
        BinaryOp::Le,
        BinaryOp::Gt,
        BinaryOp::Ge,
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Or => "or",
            BinaryOp::And => "and",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq | BinaryOp::Ne | BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            BinaryOp::Mul | BinaryOp::Div => 6,
        }
    }
}

const NOT_PREC: u8 = 3;
const NEG_PREC: u8 = 7;
const ATOM_PREC: u8 = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(Literal),
    /// `a.b.c` feature chain
    Path(Vec<Name>),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn path(text: &str) -> Expr {
        Expr::Path(text.split('.').map(Name::from).collect())
    }

    pub fn int(v: u64) -> Expr {
        Expr::Literal(Literal::Int(v))
    }

    pub fn binary(op: BinaryOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Literal(_) | Expr::Path(_) => ATOM_PREC,
            Expr::Unary(UnaryOp::Neg, _) => NEG_PREC,
            Expr::Unary(UnaryOp::Not, _) => NOT_PREC,
            Expr::Binary(op, ..) => op.precedence(),
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, paren: bool) -> fmt::Result {
        if paren {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    /// Nesting depth, used to bound generated and parsed trees.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Literal(_) | Expr::Path(_) => 1,
            Expr::Unary(_, e) => 1 + e.depth(),
            Expr::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Every path referenced by the expression, in written order.
    pub fn paths(&self) -> Vec<&[Name]> {
        let mut out = Vec::new();
        fn go<'a>(e: &'a Expr, out: &mut Vec<&'a [Name]>) {
            match e {
                Expr::Literal(_) => {}
                Expr::Path(p) => out.push(p),
                Expr::Unary(_, e) => go(e, out),
                Expr::Binary(_, l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(l) => write!(f, "{l}"),
            Expr::Path(p) => {
                for (i, n) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str(".")?;
                    }
                    write!(f, "{n}")?;
                }
                Ok(())
            }
            Expr::Unary(UnaryOp::Neg, e) => {
                f.write_str("-")?;
                e.write_child(f, e.precedence() < NEG_PREC)
            }
            Expr::Unary(UnaryOp::Not, e) => {
                f.write_str("not ")?;
                e.write_child(f, e.precedence() < NOT_PREC)
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                l.write_child(f, l.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                r.write_child(f, r.precedence() <= p)
            }
        }
    }
}
