//! Canonical sum-of-monomials representation backing normalization.
//!
//! A `Poly` is a map from monomials to nonzero exact coefficients. A monomial
//! is a sorted list of `(atom, exponent)` pairs with nonzero exponents, where
//! an atom is a coordinate, an exponential, or a non-monomial sum that only
//! ever appears with a negative exponent. Every monomial carries at most one
//! exponential atom, with exponent 1; products of exponentials are merged by
//! adding their arguments.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::constant::Constant;
use super::coord::Coord;
use super::Expr;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Atom {
    Coord(Coord),
    Exp(Poly),
    Sum(Poly),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct Monomial(Vec<(Atom, i64)>);

impl Monomial {
    fn one() -> Self {
        Monomial(Vec::new())
    }

    fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Polynomial degree: sum of coordinate exponents.
    fn degree(&self) -> i64 {
        self.0
            .iter()
            .filter(|(a, _)| matches!(a, Atom::Coord(_)))
            .map(|(_, e)| *e)
            .sum()
    }

    fn without(&self, pos: usize) -> Monomial {
        let mut v = self.0.clone();
        v.remove(pos);
        Monomial(v)
    }

    fn with_exponent(&self, pos: usize, exp: i64) -> Monomial {
        let mut v = self.0.clone();
        if exp == 0 {
            v.remove(pos);
        } else {
            v[pos].1 = exp;
        }
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub(crate) struct Poly(BTreeMap<Monomial, Constant>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: Constant) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Constant::one())
    }

    pub fn coord(c: Coord) -> Self {
        Poly::atom(Atom::Coord(c), 1)
    }

    fn atom(a: Atom, exp: i64) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial(vec![(a, exp)]), Constant::one());
        p
    }

    pub fn exp(arg: Poly) -> Self {
        if arg.is_zero() {
            Poly::one()
        } else {
            Poly::atom(Atom::Exp(arg), 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<Constant> {
        match self.0.len() {
            0 => Some(Constant::zero()),
            1 => {
                let (m, c) = self.0.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Constant) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.0.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.0.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Constant) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let prod = mul_monomials(ma, mb);
                let k = ca * cb;
                for (m, c) in prod.0 {
                    out.add_term(m, &c * &k);
                }
            }
        }
        out
    }

    pub fn pow(&self, exp: i64) -> Poly {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut acc = Poly::one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Multiplicative inverse. Monomials invert exactly; general sums become
    /// an opaque `Sum` atom with exponent -1 after dividing out the leading
    /// coefficient so that equal denominators share one atom.
    pub fn inverse(&self) -> Poly {
        if self.0.len() == 1 {
            let (m, c) = self.0.iter().next().unwrap();
            if let Some(ci) = c.recip() {
                return invert_monomial(m).scale(&ci);
            }
        }
        match self.0.iter().next() {
            None => Poly::atom(Atom::Sum(Poly::zero()), -1),
            Some((_, lead)) => {
                let lead_inv = lead.recip().expect("stored coefficients are nonzero");
                let monic = self.scale(&lead_inv);
                Poly::atom(Atom::Sum(monic), -1).scale(&lead_inv)
            }
        }
    }

    pub fn derivative(&self, wrt: Coord) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let d = derivative_monomial(m, wrt);
            out = out.add(&d.scale(c));
        }
        out
    }

    /// Simultaneous substitution of coordinates.
    pub fn substitute(&self, bindings: &BTreeMap<Coord, Poly>) -> Poly {
        self.map_atoms(&|x| bindings.get(&x).cloned())
    }

    pub fn conjugate_swap(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let mut term = Poly::constant(c.conj());
            for (a, e) in &m.0 {
                let factor = match a {
                    Atom::Coord(x) => Poly::coord(x.conjugate()).pow(*e),
                    Atom::Exp(g) => Poly::exp(g.conjugate_swap()),
                    Atom::Sum(p) => p.conjugate_swap().pow(*e),
                };
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    fn map_atoms(&self, f: &dyn Fn(Coord) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let mut term = Poly::constant(c.clone());
            for (a, e) in &m.0 {
                let factor = match a {
                    Atom::Coord(x) => f(*x).unwrap_or_else(|| Poly::coord(*x)).pow(*e),
                    Atom::Exp(g) => Poly::exp(g.map_atoms(f)),
                    Atom::Sum(p) => p.map_atoms(f).pow(*e),
                };
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    /// Every coordinate referenced anywhere, including inside atoms.
    pub fn coords(&self, acc: &mut std::collections::BTreeSet<Coord>) {
        for m in self.0.keys() {
            for (a, _) in &m.0 {
                match a {
                    Atom::Coord(c) => {
                        acc.insert(*c);
                    }
                    Atom::Exp(p) | Atom::Sum(p) => p.coords(acc),
                }
            }
        }
    }

    pub fn from_expr(e: &Expr) -> Poly {
        match e {
            Expr::Const(c) => Poly::constant(c.clone()),
            Expr::Coord(c) => Poly::coord(*c),
            Expr::Sum(items) => items
                .iter()
                .fold(Poly::zero(), |acc, x| acc.add(&Poly::from_expr(x))),
            Expr::Product(items) => items
                .iter()
                .fold(Poly::one(), |acc, x| acc.mul(&Poly::from_expr(x))),
            Expr::Pow(b, n) => Poly::from_expr(b).pow(*n),
            Expr::Neg(x) => Poly::from_expr(x).neg(),
            Expr::Quotient(a, b) => Poly::from_expr(a).mul(&Poly::from_expr(b).inverse()),
            Expr::Exp(a) => Poly::exp(Poly::from_expr(a)),
        }
    }

    pub fn to_expr(&self) -> Expr {
        let mut terms: Vec<Expr> = self
            .0
            .iter()
            .map(|(m, c)| {
                let mut factors: Vec<Expr> = m
                    .0
                    .iter()
                    .map(|(a, e)| {
                        let base = match a {
                            Atom::Coord(x) => Expr::Coord(*x),
                            Atom::Exp(g) => Expr::Exp(Box::new(g.to_expr())),
                            Atom::Sum(p) => p.to_expr(),
                        };
                        if *e == 1 {
                            base
                        } else {
                            Expr::Pow(Box::new(base), *e)
                        }
                    })
                    .collect();
                if factors.is_empty() {
                    return Expr::Const(c.clone());
                }
                if !c.is_one() {
                    factors.insert(0, Expr::Const(c.clone()));
                }
                if factors.len() == 1 {
                    factors.pop().unwrap()
                } else {
                    Expr::Product(factors)
                }
            })
            .collect();
        match terms.len() {
            0 => Expr::Const(Constant::zero()),
            1 => terms.pop().unwrap(),
            _ => Expr::Sum(terms),
        }
    }
}

fn invert_monomial(m: &Monomial) -> Poly {
    let mut out = Poly::one();
    for (a, e) in &m.0 {
        let factor = match a {
            Atom::Exp(g) => Poly::exp(g.neg()),
            other => Poly::atom(other.clone(), -*e),
        };
        out = out.mul(&factor);
    }
    out
}

/// Product of two monomials, returned as a polynomial because positive
/// powers of `Sum` atoms are expanded and exponentials merged.
fn mul_monomials(a: &Monomial, b: &Monomial) -> Poly {
    let mut merged: BTreeMap<Atom, i64> = BTreeMap::new();
    let mut exp_arg = Poly::zero();
    for (atom, e) in a.0.iter().chain(b.0.iter()) {
        match atom {
            Atom::Exp(g) => exp_arg = exp_arg.add(&g.scale(&Constant::from_integer(*e))),
            other => *merged.entry(other.clone()).or_insert(0) += *e,
        }
    }
    let mut expand = Poly::one();
    let mut factors: Vec<(Atom, i64)> = Vec::new();
    for (atom, e) in merged {
        if e == 0 {
            continue;
        }
        match atom {
            Atom::Sum(p) if e > 0 => expand = expand.mul(&p.pow(e)),
            other => factors.push((other, e)),
        }
    }
    if !exp_arg.is_zero() {
        factors.push((Atom::Exp(exp_arg), 1));
    }
    factors.sort();
    let mut out = Poly::zero();
    out.add_term(Monomial(factors), Constant::one());
    if expand.as_constant().map(|c| c.is_one()).unwrap_or(false) {
        out
    } else {
        out.mul(&expand)
    }
}

fn derivative_monomial(m: &Monomial, wrt: Coord) -> Poly {
    let mut out = Poly::zero();
    for (pos, (atom, e)) in m.0.iter().enumerate() {
        let contribution = match atom {
            Atom::Coord(c) if *c == wrt => {
                monomial_poly(&m.with_exponent(pos, e - 1)).scale(&Constant::from_integer(*e))
            }
            Atom::Coord(_) => continue,
            Atom::Exp(g) => {
                let dg = g.derivative(wrt);
                if dg.is_zero() {
                    continue;
                }
                monomial_poly(m).mul(&dg)
            }
            Atom::Sum(p) => {
                let dp = p.derivative(wrt);
                if dp.is_zero() {
                    continue;
                }
                let rest = monomial_poly(&m.without(pos));
                let lowered = p.pow(e - 1);
                rest.mul(&lowered)
                    .mul(&dp)
                    .scale(&Constant::from_integer(*e))
            }
        };
        out = out.add(&contribution);
    }
    out
}

fn monomial_poly(m: &Monomial) -> Poly {
    // Route through multiplication so that any positive `Sum` exponents
    // produced by lowering get expanded.
    mul_monomials(m, &Monomial::one())
}
