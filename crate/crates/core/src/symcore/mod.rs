//! Symbolic expressions over exact complex constants and chart coordinates.
//!
//! `z^{ri}` and `zbar^{ri}` are independent symbols; all differentiation is
//! formal (Wirtinger) differentiation. Every operation in this module returns
//! expressions in normal form: sums and products flattened and ordered,
//! constants folded, no zero summands and no unit factors.

mod canon;
mod constant;
mod coord;
mod display;
mod eval;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

use canon::Poly;
pub use constant::Constant;
pub use coord::Coord;
pub use eval::{eval_numeric, CompiledExpr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymError {
    #[error("coordinate {0} is not bound")]
    UnboundCoordinate(Coord),
    #[error("division by zero")]
    DivisionByZero,
}

/// Immutable expression tree.
///
/// Trees built directly from variants may be in any shape; the arithmetic
/// operators and the free functions of this module always return the
/// normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Constant),
    Coord(Coord),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Neg(Box<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(Constant::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(Constant::one())
    }

    /// The imaginary unit.
    pub fn i() -> Expr {
        Expr::Const(Constant::i())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(Constant::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::Const(Constant::from_ratio(num, den))
    }

    pub fn constant(c: Constant) -> Expr {
        Expr::Const(c)
    }

    pub fn coord(c: Coord) -> Expr {
        Expr::Coord(c)
    }

    pub fn t() -> Expr {
        Expr::Coord(Coord::Time)
    }

    pub fn z(level: u32, index: u32) -> Expr {
        Expr::Coord(Coord::z(level, index))
    }

    pub fn zbar(level: u32, index: u32) -> Expr {
        Expr::Coord(Coord::zbar(level, index))
    }

    pub fn normalize(&self) -> Expr {
        Poly::from_expr(self).to_expr()
    }

    pub fn pow(&self, n: i64) -> Expr {
        Poly::from_expr(self).pow(n).to_expr()
    }

    pub fn exp(&self) -> Expr {
        Poly::exp(Poly::from_expr(self)).to_expr()
    }

    pub fn scale(&self, c: &Constant) -> Expr {
        Poly::from_expr(self).scale(c).to_expr()
    }

    /// True when the normal form is the zero constant.
    pub fn is_zero(&self) -> bool {
        Poly::from_expr(self).is_zero()
    }

    pub fn as_constant(&self) -> Option<Constant> {
        Poly::from_expr(self).as_constant()
    }

    /// Coordinates referenced anywhere in the expression.
    pub fn coords(&self) -> BTreeSet<Coord> {
        let mut acc = BTreeSet::new();
        Poly::from_expr(self).coords(&mut acc);
        acc
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        Expr::Sum(items.into_iter().collect()).normalize()
    }

    pub fn product<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        Expr::Product(items.into_iter().collect()).normalize()
    }
}

/// Formal partial derivative with `z` and `zbar` treated as independent.
pub fn wirtinger_derivative(e: &Expr, c: Coord) -> Expr {
    Poly::from_expr(e).derivative(c).to_expr()
}

/// Simultaneous substitution; coordinates without a binding are kept.
pub fn substitute(e: &Expr, bindings: &BTreeMap<Coord, Expr>) -> Expr {
    let polys: BTreeMap<Coord, Poly> = bindings
        .iter()
        .map(|(c, v)| (*c, Poly::from_expr(v)))
        .collect();
    Poly::from_expr(e).substitute(&polys).to_expr()
}

/// `a - b` normalizes to zero.
pub fn structurally_equal(a: &Expr, b: &Expr) -> bool {
    Poly::from_expr(a).sub(&Poly::from_expr(b)).is_zero()
}

/// Swaps every `z^{ri}` with `zbar^{ri}` and conjugates constants.
pub fn conjugate_swap(e: &Expr) -> Expr {
    Poly::from_expr(e).conjugate_swap().to_expr()
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Poly, Poly) -> Poly = $body;
                f(Poly::from_expr(self), Poly::from_expr(rhs)).to_expr()
            }
        }
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                (&self).$method(rhs)
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add(&b));
binop!(Sub, sub, |a, b| a.sub(&b));
binop!(Mul, mul, |a, b| a.mul(&b));
binop!(Div, div, |a, b| a.mul(&b.inverse()));

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Poly::from_expr(self).neg().to_expr()
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<Coord> for Expr {
    fn from(c: Coord) -> Self {
        Expr::Coord(c)
    }
}

impl From<Constant> for Expr {
    fn from(c: Constant) -> Self {
        Expr::Const(c)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}
