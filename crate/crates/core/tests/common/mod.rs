//! Helpers shared by the integration tests: a random expression generator
//! and finite-difference oracles that evaluate trees with plain `f64`.

#![allow(dead_code)]

use parageo::scalarfield::Func;
use parageo::Expr;
use rand::Rng;

pub fn random_expr<R: Rng>(rng: &mut R, depth: usize, dim: usize) -> Expr {
    if depth <= 1 || rng.random_bool(0.2) {
        return if rng.random_bool(0.6) {
            Expr::Var(rng.random_range(0..dim))
        } else {
            // short decimals survive printing exactly
            Expr::Const(rng.random_range(-40..=40) as f64 / 8.0)
        };
    }
    let sub = |rng: &mut R| Box::new(random_expr(rng, depth - 1, dim));
    match rng.random_range(0..8) {
        0 => Expr::Neg(sub(rng)),
        1 => Expr::Add(sub(rng), sub(rng)),
        2 => Expr::Sub(sub(rng), sub(rng)),
        3 => Expr::Mul(sub(rng), sub(rng)),
        4 => Expr::Div(sub(rng), sub(rng)),
        5 => Expr::Pow(sub(rng), rng.random_range(-2..=3)),
        _ => {
            let f = Func::ALL[rng.random_range(0..Func::ALL.len())];
            Expr::Func(f, sub(rng))
        }
    }
}

/// Plain evaluation; `None` when the point is not comfortably inside the
/// domain of every subexpression or some intermediate exceeds `bound`.
pub fn eval_safe(e: &Expr, p: &[f64], bound: f64) -> Option<f64> {
    let v = match e {
        Expr::Const(c) => *c,
        Expr::Var(i) => p[*i],
        Expr::Neg(a) => -eval_safe(a, p, bound)?,
        Expr::Add(a, b) => eval_safe(a, p, bound)? + eval_safe(b, p, bound)?,
        Expr::Sub(a, b) => eval_safe(a, p, bound)? - eval_safe(b, p, bound)?,
        Expr::Mul(a, b) => eval_safe(a, p, bound)? * eval_safe(b, p, bound)?,
        Expr::Div(a, b) => {
            let d = eval_safe(b, p, bound)?;
            if d.abs() < 0.2 {
                return None;
            }
            eval_safe(a, p, bound)? / d
        }
        Expr::Pow(a, n) => {
            let b = eval_safe(a, p, bound)?;
            if *n < 0 && b.abs() < 0.2 {
                return None;
            }
            b.powi(*n)
        }
        Expr::Func(f, a) => {
            let x = eval_safe(a, p, bound)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Exp => x.exp(),
                Func::Ln if x > 0.2 => x.ln(),
                Func::Sqrt if x > 0.2 => x.sqrt(),
                _ => return None,
            }
        }
    };
    (v.is_finite() && v.abs() <= bound).then_some(v)
}

pub fn eval_plain(e: &Expr, p: &[f64]) -> f64 {
    eval_safe(e, p, f64::INFINITY).unwrap_or(f64::NAN)
}

// fourth-order central stencil: offsets and weights over 12h
const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

pub fn fd_grad(e: &Expr, p: &[f64], h: f64) -> Vec<f64> {
    (0..p.len())
        .map(|i| {
            let mut acc = 0.0;
            for (k, w) in STENCIL {
                let mut q = p.to_vec();
                q[i] += k * h;
                acc += w * eval_plain(e, &q);
            }
            acc / (12.0 * h)
        })
        .collect()
}

/// Tensor product of the first-derivative stencil, so diagonal entries are
/// central differences with step `h` as well.
pub fn fd_hess(e: &Expr, p: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = p.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = 0.0;
                    for (ki, wi) in STENCIL {
                        for (kj, wj) in STENCIL {
                            let mut q = p.to_vec();
                            q[i] += ki * h;
                            q[j] += kj * h;
                            acc += wi * wj * eval_plain(e, &q);
                        }
                    }
                    acc / (144.0 * h * h)
                })
                .collect()
        })
        .collect()
}

/// `|a - b| / max(1, |a|)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}
