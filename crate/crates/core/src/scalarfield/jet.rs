use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use super::{Expr, Func};

/// Value, gradient and Hessian of a scalar at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl Jet2 {
    pub fn constant(value: f64, dim: usize) -> Jet2 {
        Jet2 {
            value,
            grad: DVector::zeros(dim),
            hess: DMatrix::zeros(dim, dim),
        }
    }

    /// The coordinate function `x{index+1}` evaluated at `value`.
    pub fn variable(index: usize, value: f64, dim: usize) -> Jet2 {
        let mut j = Jet2::constant(value, dim);
        j.grad[index] = 1.0;
        j
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    /// Compose with a scalar function given its value and first two
    /// derivatives at `self.value`.
    pub fn chain(&self, f: f64, df: f64, d2f: f64) -> Jet2 {
        let g = &self.grad;
        Jet2 {
            value: f,
            grad: g * df,
            hess: &self.hess * df + (g * g.transpose()) * d2f,
        }
    }

    pub fn scale(&self, c: f64) -> Jet2 {
        Jet2 {
            value: self.value * c,
            grad: &self.grad * c,
            hess: &self.hess * c,
        }
    }

    pub fn recip(&self) -> Jet2 {
        let v = self.value;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn powi(&self, n: i32) -> Jet2 {
        match n {
            0 => Jet2::constant(1.0, self.dim()),
            1 => self.clone(),
            _ => {
                let v = self.value;
                let nf = n as f64;
                self.chain(v.powi(n), nf * v.powi(n - 1), nf * (nf - 1.0) * v.powi(n - 2))
            }
        }
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sinh(&self) -> Jet2 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(&self) -> Jet2 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Jet2 {
        let v = self.value;
        self.chain(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn sqrt(&self) -> Jet2 {
        let r = self.value.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.value))
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|x| x.is_finite())
            && self.hess.iter().all(|x| x.is_finite())
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value + rhs.value,
            grad: &self.grad + &rhs.grad,
            hess: &self.hess + &rhs.hess,
        }
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value - rhs.value,
            grad: &self.grad - &rhs.grad,
            hess: &self.hess - &rhs.hess,
        }
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        let cross = &self.grad * rhs.grad.transpose();
        Jet2 {
            value: self.value * rhs.value,
            grad: &self.grad * rhs.value + &rhs.grad * self.value,
            hess: &self.hess * rhs.value + &rhs.hess * self.value + &cross + cross.transpose(),
        }
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainErrorKind {
    DivisionByZero,
    LogOfNonPositive,
    SqrtOfNonPositive,
    NonFinite,
}

/// Evaluation left the domain of an elementary function.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind:?} in `{subexpr}`")]
pub struct DomainError {
    pub kind: DomainErrorKind,
    pub subexpr: String,
}

fn domain(kind: DomainErrorKind, e: &Expr) -> DomainError {
    DomainError {
        kind,
        subexpr: e.to_string(),
    }
}

/// Value, gradient and Hessian of `e` at `p`; `p.len()` fixes the dimension.
pub fn eval_jet2(e: &Expr, p: &[f64]) -> Result<Jet2, DomainError> {
    let dim = p.len();
    let out = match e {
        Expr::Const(c) => Jet2::constant(*c, dim),
        Expr::Var(i) => Jet2::variable(*i, p[*i], dim),
        Expr::Neg(a) => -&eval_jet2(a, p)?,
        Expr::Add(a, b) => &eval_jet2(a, p)? + &eval_jet2(b, p)?,
        Expr::Sub(a, b) => &eval_jet2(a, p)? - &eval_jet2(b, p)?,
        Expr::Mul(a, b) => &eval_jet2(a, p)? * &eval_jet2(b, p)?,
        Expr::Div(a, b) => {
            let num = eval_jet2(a, p)?;
            let den = eval_jet2(b, p)?;
            if den.value == 0.0 {
                return Err(domain(DomainErrorKind::DivisionByZero, e));
            }
            &num * &den.recip()
        }
        Expr::Pow(a, n) => {
            let base = eval_jet2(a, p)?;
            if *n < 0 && base.value == 0.0 {
                return Err(domain(DomainErrorKind::DivisionByZero, e));
            }
            base.powi(*n)
        }
        Expr::Func(func, a) => {
            let arg = eval_jet2(a, p)?;
            match func {
                Func::Sin => arg.sin(),
                Func::Cos => arg.cos(),
                Func::Sinh => arg.sinh(),
                Func::Cosh => arg.cosh(),
                Func::Exp => arg.exp(),
                Func::Ln => {
                    if arg.value <= 0.0 {
                        return Err(domain(DomainErrorKind::LogOfNonPositive, e));
                    }
                    arg.ln()
                }
                Func::Sqrt => {
                    if arg.value <= 0.0 {
                        return Err(domain(DomainErrorKind::SqrtOfNonPositive, e));
                    }
                    arg.sqrt()
                }
            }
        }
    };
    if !out.is_finite() {
        return Err(domain(DomainErrorKind::NonFinite, e));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarfield::parse;
    use std::f64::consts::FRAC_PI_2;

    /// Central differences on a plain evaluation of the tree.
    fn fd_value(e: &Expr, p: &[f64]) -> f64 {
        eval_jet2(e, p).unwrap().value
    }

    fn fd_grad(e: &Expr, p: &[f64], h: f64) -> Vec<f64> {
        (0..p.len())
            .map(|i| {
                let mut a = p.to_vec();
                let mut b = p.to_vec();
                a[i] += h;
                b[i] -= h;
                (fd_value(e, &a) - fd_value(e, &b)) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn product_with_cosine_at_origin_of_angle() {
        let e = parse("x1*cos(x2)", 3).unwrap();
        let p = [1.0, 0.0, 1.0];
        let j = eval_jet2(&e, &p).unwrap();
        assert_eq!(j.value, 1.0);
        assert_eq!(j.grad.as_slice(), &[1.0, 0.0, 0.0]);
        let mut expected = DMatrix::zeros(3, 3);
        expected[(1, 1)] = -1.0;
        assert_eq!(j.hess, expected);
        let fd = fd_grad(&e, &p, 1e-5);
        for i in 0..3 {
            assert!((fd[i] - j.grad[i]).abs() <= 1e-6 * j.grad[i].abs().max(1.0));
        }
    }

    #[test]
    fn linear_function_has_zero_hessian() {
        let e = parse("x3", 3).unwrap();
        let j = eval_jet2(&e, &[2.0, 3.0, 5.0]).unwrap();
        assert_eq!(j.value, 5.0);
        assert_eq!(j.grad.as_slice(), &[0.0, 0.0, 1.0]);
        assert!(j.hess.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn sine_at_quarter_turn() {
        let e = parse("sin(x2)", 3).unwrap();
        let j = eval_jet2(&e, &[1.0, FRAC_PI_2, 0.0]).unwrap();
        assert_eq!(j.value, 1.0);
        assert!(j.grad.iter().all(|g| g.abs() < 1e-15));
        assert!((j.hess[(1, 1)] + 1.0).abs() < 1e-15);
        let fd = fd_grad(&e, &[1.0, FRAC_PI_2, 0.0], 1e-5);
        assert!(fd.iter().all(|g| g.abs() < 1e-6));
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let e = parse("1 + ln(x1 - 1)", 1).unwrap();
        let err = eval_jet2(&e, &[1.0]).unwrap_err();
        assert_eq!(err.kind, DomainErrorKind::LogOfNonPositive);
        assert_eq!(err.subexpr, "ln((x1 - 1))");

        let e = parse("x2 / (x1 - x1)", 2).unwrap();
        assert_eq!(
            eval_jet2(&e, &[1.0, 1.0]).unwrap_err().kind,
            DomainErrorKind::DivisionByZero
        );
        let e = parse("sqrt(x1)", 1).unwrap();
        assert_eq!(
            eval_jet2(&e, &[0.0]).unwrap_err().kind,
            DomainErrorKind::SqrtOfNonPositive
        );
        let e = parse("x1^-2", 1).unwrap();
        assert_eq!(
            eval_jet2(&e, &[0.0]).unwrap_err().kind,
            DomainErrorKind::DivisionByZero
        );
        let e = parse("exp(exp(x1))", 1).unwrap();
        assert_eq!(
            eval_jet2(&e, &[10.0]).unwrap_err().kind,
            DomainErrorKind::NonFinite
        );
    }

    #[test]
    fn powers_at_zero_are_finite() {
        let e = parse("x1^2 + pow(x1, 1) + x1^0", 1).unwrap();
        let j = eval_jet2(&e, &[0.0]).unwrap();
        assert_eq!(j.value, 1.0);
        assert_eq!(j.grad[0], 1.0);
        assert_eq!(j.hess[(0, 0)], 2.0);
    }

    #[test]
    fn product_rule_structure() {
        let f = parse("sin(x1)*x2", 2).unwrap();
        let g = parse("exp(x2) + x1^3", 2).unwrap();
        let fg = Expr::Mul(Box::new(f.clone()), Box::new(g.clone()));
        let p = [0.3, -0.7];
        let jf = eval_jet2(&f, &p).unwrap();
        let jg = eval_jet2(&g, &p).unwrap();
        let jfg = eval_jet2(&fg, &p).unwrap();
        assert_eq!(jfg, &jf * &jg);
        let sum = Expr::Add(Box::new(f), Box::new(g));
        assert_eq!(eval_jet2(&sum, &p).unwrap(), &jf + &jg);
        // Hessian symmetric by construction
        assert_eq!(jfg.hess, jfg.hess.transpose());
    }
}
