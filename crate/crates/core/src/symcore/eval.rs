use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Coord, Expr, SymError};

const ZERO_TOLERANCE: f64 = 1e-300;

pub fn eval_numeric(e: &Expr, point: &BTreeMap<Coord, Complex64>) -> Result<Complex64, SymError> {
    match e {
        Expr::Const(c) => Ok(c.to_complex64()),
        Expr::Coord(c) => point.get(c).copied().ok_or(SymError::UnboundCoordinate(*c)),
        Expr::Sum(items) => items
            .iter()
            .try_fold(Complex64::new(0.0, 0.0), |acc, x| Ok(acc + eval_numeric(x, point)?)),
        Expr::Product(items) => items
            .iter()
            .try_fold(Complex64::new(1.0, 0.0), |acc, x| Ok(acc * eval_numeric(x, point)?)),
        Expr::Pow(b, n) => powi(eval_numeric(b, point)?, *n),
        Expr::Neg(x) => Ok(-eval_numeric(x, point)?),
        Expr::Quotient(a, b) => {
            let num = eval_numeric(a, point)?;
            let den = eval_numeric(b, point)?;
            divide(num, den)
        }
        Expr::Exp(a) => Ok(eval_numeric(a, point)?.exp()),
    }
}

fn divide(num: Complex64, den: Complex64) -> Result<Complex64, SymError> {
    if den.norm() <= ZERO_TOLERANCE {
        return Err(SymError::DivisionByZero);
    }
    Ok(num / den)
}

fn powi(base: Complex64, n: i64) -> Result<Complex64, SymError> {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut b = base;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= b;
        }
        b *= b;
        k >>= 1;
    }
    if n < 0 {
        divide(Complex64::new(1.0, 0.0), acc)
    } else {
        Ok(acc)
    }
}

/// An expression with coordinates resolved to slots of a state vector, for
/// repeated evaluation in integrators.
#[derive(Clone, Debug)]
pub struct CompiledExpr(Node);

#[derive(Clone, Debug)]
enum Node {
    Const(Complex64),
    Slot(usize),
    Sum(Vec<Node>),
    Product(Vec<Node>),
    Pow(Box<Node>, i64),
    Neg(Box<Node>),
    Quotient(Box<Node>, Box<Node>),
    Exp(Box<Node>),
}

impl CompiledExpr {
    pub fn compile<F>(e: &Expr, slot_of: &F) -> Result<CompiledExpr, SymError>
    where
        F: Fn(Coord) -> Option<usize>,
    {
        Ok(CompiledExpr(compile_node(e, slot_of)?))
    }

    pub fn eval(&self, state: &[Complex64]) -> Result<Complex64, SymError> {
        eval_node(&self.0, state)
    }
}

fn compile_node<F>(e: &Expr, slot_of: &F) -> Result<Node, SymError>
where
    F: Fn(Coord) -> Option<usize>,
{
    let boxed = |x: &Expr| compile_node(x, slot_of).map(Box::new);
    Ok(match e {
        Expr::Const(c) => Node::Const(c.to_complex64()),
        Expr::Coord(c) => Node::Slot(slot_of(*c).ok_or(SymError::UnboundCoordinate(*c))?),
        Expr::Sum(items) => Node::Sum(
            items
                .iter()
                .map(|x| compile_node(x, slot_of))
                .collect::<Result<_, _>>()?,
        ),
        Expr::Product(items) => Node::Product(
            items
                .iter()
                .map(|x| compile_node(x, slot_of))
                .collect::<Result<_, _>>()?,
        ),
        Expr::Pow(b, n) => Node::Pow(boxed(b)?, *n),
        Expr::Neg(x) => Node::Neg(boxed(x)?),
        Expr::Quotient(a, b) => Node::Quotient(boxed(a)?, boxed(b)?),
        Expr::Exp(a) => Node::Exp(boxed(a)?),
    })
}

fn eval_node(n: &Node, s: &[Complex64]) -> Result<Complex64, SymError> {
    match n {
        Node::Const(c) => Ok(*c),
        Node::Slot(i) => Ok(s[*i]),
        Node::Sum(items) => items
            .iter()
            .try_fold(Complex64::new(0.0, 0.0), |acc, x| Ok(acc + eval_node(x, s)?)),
        Node::Product(items) => items
            .iter()
            .try_fold(Complex64::new(1.0, 0.0), |acc, x| Ok(acc * eval_node(x, s)?)),
        Node::Pow(b, k) => powi(eval_node(b, s)?, *k),
        Node::Neg(x) => Ok(-eval_node(x, s)?),
        Node::Quotient(a, b) => divide(eval_node(a, s)?, eval_node(b, s)?),
        Node::Exp(a) => Ok(eval_node(a, s)?.exp()),
    }
}
