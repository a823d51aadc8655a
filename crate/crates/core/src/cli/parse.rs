//! Text grammar for expressions and coordinate bindings.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' exponent)?
//! exponent:= ['-' | '+'] INT | '(' ['-' | '+'] INT ')'
//! atom    := NUMBER ['i'] | 'i' | 't' | z[r]_i | zb[r]_i | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Decimal literals (`1.25`, `3e-2`) are converted to exact rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::manifold::CoordSystem;
use crate::symcore::{Constant, Coord, Expr};

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: i64 = 256;
const MAX_DECIMAL_EXPONENT: i64 = 64;
const MAX_LITERAL_DIGITS: usize = 64;
const MAX_SIZE: f64 = 50_000.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at position {position}: expected {}", expected.join(" or "))]
    Syntax { position: usize, expected: Vec<String> },
    #[error("unknown variable `{name}` at position {position} for chart {chart}")]
    UnknownVariable { name: String, position: usize, chart: CoordSystem },
    #[error("division by zero at position {position}")]
    DivisionByZero { position: usize },
    #[error("expression too large at position {position}: {reason}")]
    TooComplex { position: usize, reason: String },
    #[error("duplicate binding for {coord} at position {position}")]
    DuplicateBinding { coord: Coord, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownVariable { position, .. }
            | ParseError::DivisionByZero { position }
            | ParseError::TooComplex { position, .. }
            | ParseError::DuplicateBinding { position, .. } => *position,
        }
    }
}

/// Parses `text` into a normalized expression over `chart`.
pub fn parse_expression(text: &str, chart: CoordSystem) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, depth: 0, chart };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.expected(&["operator", "end of input"]));
    }
    Ok(e)
}

/// Parses `name=expr, name=expr, ...`; names are `t`, `z<r>_<i>` or
/// `zb<r>_<i>`. Commas inside parentheses belong to the expression.
pub fn parse_bindings(text: &str, chart: CoordSystem) -> Result<BTreeMap<Coord, Expr>, ParseError> {
    let mut out = BTreeMap::new();
    let bytes = text.as_bytes();
    if text.trim().is_empty() {
        return Ok(out);
    }
    let mut start = 0;
    let mut depth = 0i64;
    let mut items = Vec::new();
    for (n, b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' if depth == 0 => {
                items.push((start, n));
                start = n + 1;
            }
            _ => {}
        }
    }
    items.push((start, bytes.len()));

    for (s, e) in items {
        let item = &text[s..e];
        let Some(eq) = item.find('=') else {
            return Err(ParseError::Syntax { position: e, expected: vec!["`=`".into()] });
        };
        let name_start = s + (item.len() - item.trim_start().len());
        let name = item[..eq].trim();
        let mut p = Parser { src: name.as_bytes(), pos: 0, depth: 0, chart };
        let coord = match p.identifier() {
            Some(id) if p.pos == name.len() => match classify(id) {
                Ident::Time => Coord::Time,
                Ident::Coord(c) if chart.contains(c) => c,
                Ident::Coord(_) | Ident::Unknown => {
                    return Err(ParseError::UnknownVariable {
                        name: name.to_string(),
                        position: name_start,
                        chart,
                    })
                }
                _ => {
                    return Err(ParseError::Syntax {
                        position: name_start,
                        expected: vec!["coordinate name".into()],
                    })
                }
            },
            _ => {
                return Err(ParseError::Syntax {
                    position: name_start,
                    expected: vec!["coordinate name".into()],
                })
            }
        };
        let value_start = s + eq + 1;
        let value = parse_expression(&text[value_start..e], chart).map_err(|err| shift(err, value_start))?;
        if out.insert(coord, value).is_some() {
            return Err(ParseError::DuplicateBinding { coord, position: name_start });
        }
    }
    Ok(out)
}

fn shift(err: ParseError, by: usize) -> ParseError {
    match err {
        ParseError::Syntax { position, expected } => ParseError::Syntax { position: position + by, expected },
        ParseError::UnknownVariable { name, position, chart } => {
            ParseError::UnknownVariable { name, position: position + by, chart }
        }
        ParseError::DivisionByZero { position } => ParseError::DivisionByZero { position: position + by },
        ParseError::TooComplex { position, reason } => ParseError::TooComplex { position: position + by, reason },
        ParseError::DuplicateBinding { coord, position } => {
            ParseError::DuplicateBinding { coord, position: position + by }
        }
    }
}

enum Ident {
    Time,
    Imaginary,
    Exp,
    Coord(Coord),
    Unknown,
}

fn classify(id: &str) -> Ident {
    match id {
        "t" => return Ident::Time,
        "i" => return Ident::Imaginary,
        "exp" => return Ident::Exp,
        _ => {}
    }
    let (rest, bar) = if let Some(r) = id.strip_prefix("zb") {
        (r, true)
    } else if let Some(r) = id.strip_prefix('z') {
        (r, false)
    } else {
        return Ident::Unknown;
    };
    let Some((level, index)) = rest.split_once('_') else {
        return Ident::Unknown;
    };
    let digits = |s: &str| !s.is_empty() && s.len() <= 9 && s.bytes().all(|b| b.is_ascii_digit());
    if !(level.is_empty() || digits(level)) || !digits(index) {
        return Ident::Unknown;
    }
    let level = if level.is_empty() { 0 } else { level.parse().unwrap() };
    let index = index.parse().unwrap();
    Ident::Coord(if bar { Coord::zbar(level, index) } else { Coord::z(level, index) })
}

/// Rough upper estimate of the normalized size of an expression.
fn size(e: &Expr) -> (f64, f64) {
    match e {
        Expr::Sum(items) => (items.len() as f64, items.iter().map(|x| size(x).1).sum()),
        Expr::Product(items) => (1.0, items.iter().map(|x| size(x).1).sum()),
        Expr::Pow(b, _) | Expr::Neg(b) => (1.0, size(b).1 + 1.0),
        Expr::Quotient(a, b) => (1.0, size(a).1 + size(b).1),
        Expr::Exp(a) => (1.0, size(a).1 + 1.0),
        Expr::Const(c) => (1.0, 1.0 + (c.re().numer().bits() + c.re().denom().bits() + c.im().numer().bits() + c.im().denom().bits()) as f64 / 64.0),
        Expr::Coord(_) => (1.0, 1.0),
    }
}

fn ln_binomial(n: f64, r: f64) -> f64 {
    (1..=r as u64).map(|j| ((n - r + j as f64) / j as f64).ln()).sum()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
    chart: CoordSystem,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expected(&self, what: &[&str]) -> ParseError {
        ParseError::Syntax { position: self.pos, expected: what.iter().map(|s| s.to_string()).collect() }
    }

    fn too_complex(&self, reason: impl Into<String>) -> ParseError {
        ParseError::TooComplex { position: self.pos, reason: reason.into() }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.too_complex(format!("nesting deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn guard(&self, e: &Expr) -> Result<(), ParseError> {
        if size(e).1 > MAX_SIZE {
            return Err(self.too_complex("term count limit exceeded"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc + rhs;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc - rhs;
                }
                _ => break,
            }
            self.guard(&acc)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    self.check_product(&acc, &rhs)?;
                    acc = acc * rhs;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return Err(ParseError::DivisionByZero { position: at });
                    }
                    self.check_product(&acc, &rhs)?;
                    acc = acc / rhs;
                }
                _ => break,
            }
            self.guard(&acc)?;
        }
        Ok(acc)
    }

    fn check_product(&self, a: &Expr, b: &Expr) -> Result<(), ParseError> {
        let (ta, sa) = size(a);
        let (tb, sb) = size(b);
        if ta * tb * (sa / ta + sb / tb) > MAX_SIZE {
            return Err(self.too_complex("product expands past the term limit"));
        }
        Ok(())
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.enter()?;
                let e = self.unary()?;
                self.depth -= 1;
                Ok(-e)
            }
            Some(b'+') => {
                self.pos += 1;
                self.enter()?;
                let e = self.unary()?;
                self.depth -= 1;
                Ok(e)
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let n = self.exponent()?;
        if n < 0 && base.is_zero() {
            return Err(ParseError::DivisionByZero { position: self.pos });
        }
        let (terms, s) = size(&base);
        let per_term = s / terms;
        let e = n.unsigned_abs() as f64;
        let estimate = if terms > 1.0 && n > 0 {
            (ln_binomial(terms + e - 1.0, e) + (per_term * e).ln()).exp()
        } else {
            s * e.max(1.0)
        };
        if estimate > MAX_SIZE {
            return Err(self.too_complex("power expands past the term limit"));
        }
        Ok(base.pow(n))
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.expected(&["integer exponent"]));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: i64 = match text.parse::<i64>() {
            Ok(n) if n <= MAX_EXPONENT => n,
            _ => {
                return Err(ParseError::TooComplex {
                    position: start,
                    reason: format!("exponent larger than {MAX_EXPONENT}"),
                })
            }
        };
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.expected(&["`)`"]));
            }
            self.pos += 1;
        }
        Ok(if negative { -n } else { n })
    }

    fn identifier(&mut self) -> Option<&'a str> {
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(|b| b.is_ascii_alphabetic()) {
            return None;
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const ATOM: &[&str] = &["number", "variable", "`i`", "`exp`", "`(`"];
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.expected(&["operator", "`)`"]));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => self.number(),
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                let id = self.identifier().unwrap_or_default().to_string();
                match classify(&id) {
                    Ident::Time => Ok(Expr::t()),
                    Ident::Imaginary => Ok(Expr::i()),
                    Ident::Coord(c) if self.chart.contains(c) => Ok(Expr::coord(c)),
                    Ident::Exp => {
                        if self.peek() != Some(b'(') {
                            return Err(self.expected(&["`(`"]));
                        }
                        self.pos += 1;
                        let arg = self.expr()?;
                        if self.peek() != Some(b')') {
                            return Err(self.expected(&["operator", "`)`"]));
                        }
                        self.pos += 1;
                        Ok(arg.exp())
                    }
                    Ident::Coord(_) | Ident::Unknown => Err(ParseError::UnknownVariable {
                        name: id,
                        position: start,
                        chart: self.chart,
                    }),
                }
            }
            _ => Err(self.expected(ATOM)),
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let int_part = self.digits().to_string();
        let mut frac = String::new();
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac = self.digits().to_string();
        }
        if int_part.is_empty() && frac.is_empty() {
            return Err(ParseError::Syntax { position: start, expected: vec!["digit".into()] });
        }
        if int_part.len() + frac.len() > MAX_LITERAL_DIGITS {
            return Err(ParseError::TooComplex {
                position: start,
                reason: format!("literal longer than {MAX_LITERAL_DIGITS} digits"),
            });
        }
        let mut exp10: i64 = 0;
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E'))
            && self.src.get(self.pos + 1).is_some_and(|b| b.is_ascii_digit() || *b == b'-' || *b == b'+')
        {
            let save = self.pos;
            self.pos += 1;
            let negative = match self.src.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let d = self.digits();
            if d.is_empty() {
                self.pos = save;
            } else {
                match d.parse::<i64>() {
                    Ok(v) if v <= MAX_DECIMAL_EXPONENT => exp10 = if negative { -v } else { v },
                    _ => {
                        return Err(ParseError::TooComplex {
                            position: save,
                            reason: format!("decimal exponent larger than {MAX_DECIMAL_EXPONENT}"),
                        })
                    }
                }
            }
        }
        let mantissa: BigInt = format!("0{int_part}{frac}").parse().unwrap();
        let exp10 = exp10 - frac.len() as i64;
        let ten = BigInt::from(10u32);
        let value = if exp10 >= 0 {
            BigRational::from_integer(mantissa * num_traits::pow(ten, exp10 as usize))
        } else {
            BigRational::new(mantissa, num_traits::pow(ten, (-exp10) as usize))
        };
        let imaginary = self.src.get(self.pos) == Some(&b'i')
            && !self
                .src
                .get(self.pos + 1)
                .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
        if imaginary {
            self.pos += 1;
            return Ok(Expr::constant(Constant::new(BigRational::zero(), value)));
        }
        if self.src.get(self.pos).is_some_and(|b| b.is_ascii_alphabetic() || *b == b'_') {
            return Err(self.expected(&["operator"]));
        }
        Ok(Expr::constant(Constant::new(value, BigRational::zero())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::structurally_equal;

    fn chart(m: u32, k: u32) -> CoordSystem {
        CoordSystem::new(m, k).unwrap()
    }

    fn parse(s: &str) -> Expr {
        parse_expression(s, chart(2, 2)).unwrap()
    }

    #[test]
    fn spec_examples() {
        let e = parse_expression("z_1*zb_1", chart(1, 0)).unwrap();
        assert_eq!(e, Expr::z(0, 1) * Expr::zbar(0, 1));
        let e = parse("(1/2)*i*(z_1^2 + zb_1^2)");
        let expected = Expr::ratio(1, 2) * Expr::i() * (Expr::z(0, 1).pow(2) + Expr::zbar(0, 1).pow(2));
        assert!(structurally_equal(&e, &expected));
        assert!(matches!(
            parse_expression("z1_1", chart(1, 0)),
            Err(ParseError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn literals() {
        assert_eq!(parse("2i"), Expr::int(2) * Expr::i());
        assert_eq!(parse("1.25"), Expr::ratio(5, 4));
        assert_eq!(parse("3e-2"), Expr::ratio(3, 100));
        assert_eq!(parse("1+2i"), Expr::one() + Expr::int(2) * Expr::i());
        assert_eq!(parse("3/4*i"), Expr::ratio(3, 4) * Expr::i());
        assert_eq!(parse(".5"), Expr::ratio(1, 2));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("-z0_1^2"), -Expr::z(0, 1).pow(2));
        assert_eq!(parse("z0_1^-2"), Expr::z(0, 1).pow(-2));
        assert_eq!(parse("z0_1^(-2)"), Expr::z(0, 1).pow(-2));
        assert_eq!(parse("1 - 2 - 3"), Expr::int(-4));
        assert_eq!(parse("8 / 2 / 2"), Expr::int(2));
        assert_eq!(parse("exp(z_1)"), Expr::z(0, 1).exp());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expression("z_1 +", chart(1, 0)), Err(ParseError::Syntax { position: 5, .. })));
        assert!(matches!(parse_expression("(z_1", chart(1, 0)), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expression("x", chart(1, 0)), Err(ParseError::UnknownVariable { .. })));
        assert!(matches!(parse_expression("z_3", chart(2, 0)), Err(ParseError::UnknownVariable { .. })));
        assert!(matches!(parse_expression("z_0", chart(2, 0)), Err(ParseError::UnknownVariable { .. })));
        assert!(matches!(parse_expression("1/0", chart(1, 0)), Err(ParseError::DivisionByZero { .. })));
        assert!(matches!(parse_expression("2z_1", chart(1, 0)), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            parse_expression("(z_1+zb_1+t+1)^200", chart(1, 0)),
            Err(ParseError::TooComplex { .. })
        ));
        let deep = "(".repeat(200) + "1" + &")".repeat(200);
        assert!(matches!(parse_expression(&deep, chart(1, 0)), Err(ParseError::TooComplex { .. })));
    }

    #[test]
    fn round_trip_of_printed_forms() {
        for s in ["(-i)*z0_1", "(1/2)*z0_1^2 - zb1_2", "(z0_1 + 1)^(-1)", "exp(2*t)*zb0_2", "1/2-3/4*i"] {
            let e = parse(s);
            assert!(structurally_equal(&parse(&e.to_string()), &e), "{s} -> {e}");
        }
    }

    #[test]
    fn bindings() {
        let b = parse_bindings("z0_1=1+0i, zb0_1=1-0i", chart(1, 0)).unwrap();
        assert_eq!(b[&Coord::z(0, 1)], Expr::one());
        assert_eq!(b[&Coord::zbar(0, 1)], Expr::one());
        let b = parse_bindings("t=1,z_1=exp(zb_1*(1+t))", chart(1, 0)).unwrap();
        assert_eq!(b.len(), 2);
        assert!(parse_bindings("", chart(1, 0)).unwrap().is_empty());
        assert!(matches!(parse_bindings("z_1=1,z_1=2", chart(1, 0)), Err(ParseError::DuplicateBinding { .. })));
        assert!(matches!(parse_bindings("q=1", chart(1, 0)), Err(ParseError::UnknownVariable { .. })));
        assert!(matches!(
            parse_bindings("z_1=1,zb_1=1+", chart(1, 0)),
            Err(ParseError::Syntax { position: 13, .. })
        ));
    }
}
