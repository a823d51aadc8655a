//! Canonical text form. The output always re-parses to a structurally equal
//! expression under the CLI grammar.

use std::fmt;

use super::Expr;

const TOP: u8 = 0;
const SUM: u8 = 1;
const SUM_REST: u8 = 2;
const PRODUCT: u8 = 3;
const OPERAND: u8 = 4;
const POW: u8 = 6;

/// Splits a leading negative real factor off, if present.
fn split_sign(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Const(c) if c.is_negative_real() => Some(Expr::Const(-c)),
        Expr::Neg(x) => Some((**x).clone()),
        Expr::Product(items) => match items.first() {
            Some(Expr::Const(c)) if c.is_negative_real() => {
                let abs = -c;
                let mut rest: Vec<Expr> = items[1..].to_vec();
                if !abs.is_one() {
                    rest.insert(0, Expr::Const(abs));
                }
                Some(match rest.len() {
                    0 => Expr::one(),
                    1 => rest.pop().unwrap(),
                    _ => Expr::Product(rest),
                })
            }
            _ => None,
        },
        _ => None,
    }
}

fn render(e: &Expr, prec: u8, out: &mut String) {
    if let Some(abs) = split_sign(e) {
        let wrap = prec > SUM_REST;
        if wrap {
            out.push('(');
        }
        out.push('-');
        render(&abs, PRODUCT, out);
        if wrap {
            out.push(')');
        }
        return;
    }
    match e {
        Expr::Const(c) => {
            let wrap = !c.is_atomic_literal() && prec >= SUM_REST;
            if wrap {
                out.push('(');
            }
            out.push_str(&c.to_string());
            if wrap {
                out.push(')');
            }
        }
        Expr::Coord(c) => out.push_str(&c.to_string()),
        Expr::Sum(items) => {
            let wrap = prec > SUM;
            if wrap {
                out.push('(');
            }
            for (n, item) in items.iter().enumerate() {
                if n == 0 {
                    render(item, SUM, out);
                } else if let Some(abs) = split_sign(item) {
                    out.push_str(" - ");
                    render(&abs, SUM_REST, out);
                } else {
                    out.push_str(" + ");
                    render(item, SUM_REST, out);
                }
            }
            if items.is_empty() {
                out.push('0');
            }
            if wrap {
                out.push(')');
            }
        }
        Expr::Product(items) => {
            let wrap = prec > PRODUCT;
            if wrap {
                out.push('(');
            }
            for (n, item) in items.iter().enumerate() {
                if n > 0 {
                    out.push('*');
                }
                render(item, OPERAND, out);
            }
            if items.is_empty() {
                out.push('1');
            }
            if wrap {
                out.push(')');
            }
        }
        Expr::Pow(base, n) => {
            let wrap = prec > POW;
            if wrap {
                out.push('(');
            }
            render(base, POW + 1, out);
            if *n >= 0 {
                out.push_str(&format!("^{n}"));
            } else {
                out.push_str(&format!("^({n})"));
            }
            if wrap {
                out.push(')');
            }
        }
        Expr::Neg(_) => unreachable!("handled by split_sign"),
        Expr::Quotient(a, b) => {
            let wrap = prec > PRODUCT;
            if wrap {
                out.push('(');
            }
            render(a, PRODUCT, out);
            out.push('/');
            render(b, OPERAND, out);
            if wrap {
                out.push(')');
            }
        }
        Expr::Exp(a) => {
            out.push_str("exp(");
            render(a, TOP, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        render(self, TOP, &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use crate::symcore::Expr;

    #[test]
    fn prints_canonical_forms() {
        let z = Expr::z(0, 1);
        let zb = Expr::zbar(0, 1);
        assert_eq!((-Expr::i() * z.clone()).to_string(), "(-i)*z0_1");
        assert_eq!((&z * &zb).to_string(), "z0_1*zb0_1");
        assert_eq!((&z - &zb).to_string(), "z0_1 - zb0_1");
        assert_eq!((Expr::ratio(1, 2) * z.pow(2)).to_string(), "(1/2)*z0_1^2");
        assert_eq!((&Expr::t() + &Expr::int(2)).to_string(), "t + 2");
        assert_eq!((-z.clone()).to_string(), "-z0_1");
        assert_eq!(z.pow(-2).to_string(), "z0_1^(-2)");
        assert_eq!(
            (&Expr::one() / &(&z + &Expr::one())).to_string(),
            "(z0_1 + 1)^(-1)"
        );
        assert_eq!(z.exp().to_string(), "exp(z0_1)");
    }
}
