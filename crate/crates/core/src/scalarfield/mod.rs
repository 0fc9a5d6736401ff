//! Smooth scalar expressions of the chart parameters and their 2-jets.
//!
//! Every geometric quantity in the crate (frames, induced metrics, second
//! fundamental forms, Lie brackets) is assembled from the value, gradient and
//! Hessian of the coordinate functions of an immersion. Expressions are parsed
//! from text once and then evaluated with second-order forward propagation.

mod jet;
mod parser;

use std::fmt;

pub use jet::{eval_jet2, DomainError, DomainErrorKind, Jet2};
pub use parser::{parse, ParseError};

/// Elementary functions accepted by the expression grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Abstract syntax tree over the parameters `x1..xd`.
///
/// Variables are stored zero-based: `Var(0)` is `x1`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Func(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    /// The parameter `x{index + 1}`.
    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    /// Largest zero-based variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    /// True when the expression references `Var(index)`.
    pub fn depends_on(&self, index: usize) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(i) => *i == index,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.depends_on(index),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on(index) || b.depends_on(index)
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => 1 + a.depth(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

/// Fully parenthesised output that `parse` reads back into the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "(-{})", -c)
            }
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            // keep `-(2)` distinct from the literal `-2`
            Expr::Neg(a) if matches!(**a, Expr::Const(_)) => write!(f, "(-({a}))"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "pow({a}, {n})"),
            Expr::Func(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips_negative_constants() {
        let e = Expr::Mul(Box::new(Expr::Const(-1.25)), Box::new(Expr::Var(1)));
        let printed = e.to_string();
        assert_eq!(printed, "((-1.25) * x2)");
        assert_eq!(parse(&printed, 2).unwrap(), e);
        let neg = Expr::Neg(Box::new(Expr::Const(1.25)));
        assert_eq!(neg.to_string(), "(-(1.25))");
        assert_eq!(parse(&neg.to_string(), 1).unwrap(), neg);
    }

    #[test]
    fn max_var_and_dependence() {
        let e = parse("x1*cos(x3) + 2", 3).unwrap();
        assert_eq!(e.max_var(), Some(2));
        assert!(e.depends_on(0));
        assert!(!e.depends_on(1));
        assert_eq!(parse("4.5", 1).unwrap().max_var(), None);
    }
}
