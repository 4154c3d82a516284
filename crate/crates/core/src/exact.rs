//! Exact scalars and truncated Laurent series in a formal variable `e`.
//!
//! A [`LaurentSeries`] stores finitely many coefficients together with a
//! truncation order: every coefficient above `trunc_order` is unknown, every
//! coefficient at or below it is known exactly. The negative-order part is
//! always fully known (`trunc_order >= -1`), so the pole part and the value at
//! `e = 0` are never approximations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, ParseError, Result};

/// Exact element of the ground field ℚ.
pub type Rational = BigRational;

/// Shorthand for the integer `n` as a [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den` as a [`Rational`]. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub const DEFAULT_MIN_ORDER: i32 = -16;
pub const DEFAULT_TRUNC_ORDER: i32 = 16;

/// Lowest truncation order a series may carry: the coefficient of every
/// negative order has to be known.
const LOWEST_TRUNC: i32 = -1;

/// Range of orders accepted when reading series from text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub min_order: i32,
    pub trunc_order: i32,
}

impl Default for Window {
    fn default() -> Self {
        Self {
            min_order: DEFAULT_MIN_ORDER,
            trunc_order: DEFAULT_TRUNC_ORDER,
        }
    }
}

/// A Laurent series `Σ c_k e^k` known exactly up to and including
/// `trunc_order`.
///
/// Equality compares coefficients on the common known window, i.e. on all
/// orders `<= min(self.trunc_order, other.trunc_order)`.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i32, Rational>,
    trunc_order: i32,
}

impl LaurentSeries {
    /// Builds a series from `(order, coefficient)` pairs, folding repeated
    /// orders by addition. Terms above `trunc_order` are discarded.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (i32, Rational)>,
        trunc_order: i32,
    ) -> Result<Self> {
        if trunc_order < LOWEST_TRUNC {
            return Err(Error::InsufficientPrecision {
                order: LOWEST_TRUNC,
                trunc_order,
            });
        }
        let mut coeffs = BTreeMap::new();
        for (order, c) in terms {
            if order > trunc_order {
                continue;
            }
            *coeffs.entry(order).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self {
            coeffs,
            trunc_order,
        })
    }

    pub fn zero(trunc_order: i32) -> Self {
        Self::from_terms([], trunc_order).expect("truncation order below -1")
    }

    pub fn constant(c: Rational, trunc_order: i32) -> Self {
        Self::monomial(c, 0, trunc_order)
    }

    pub fn one(trunc_order: i32) -> Self {
        Self::constant(Rational::one(), trunc_order)
    }

    /// `c · e^order`.
    pub fn monomial(c: Rational, order: i32, trunc_order: i32) -> Self {
        Self::from_terms([(order, c)], trunc_order).expect("truncation order below -1")
    }

    pub fn trunc_order(&self) -> i32 {
        self.trunc_order
    }

    /// Lowest order with a nonzero coefficient; `trunc_order` for zero.
    pub fn min_order(&self) -> i32 {
        self.coeffs
            .keys()
            .next()
            .copied()
            .unwrap_or(self.trunc_order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_pole(&self) -> bool {
        self.coeffs.keys().next().is_some_and(|&o| o < 0)
    }

    /// Coefficient of `e^order`.
    pub fn coeff(&self, order: i32) -> Result<Rational> {
        if order > self.trunc_order {
            return Err(Error::InsufficientPrecision {
                order,
                trunc_order: self.trunc_order,
            });
        }
        Ok(self
            .coeffs
            .get(&order)
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// Nonzero terms in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.coeffs.iter().map(|(&o, c)| (o, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc_order.min(other.trunc_order);
        Self::from_terms(
            self.terms()
                .chain(other.terms())
                .map(|(o, c)| (o, c.clone())),
            trunc,
        )
        .expect("both operands have trunc_order >= -1")
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc_order);
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&o, x)| (o, x * c)).collect(),
            trunc_order: self.trunc_order,
        }
    }

    /// Cauchy product. The result is known up to
    /// `min(a.min_order + b.trunc_order, b.min_order + a.trunc_order)`; fails
    /// if that would leave part of the pole unknown.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let trunc =
            (self.min_order() + other.trunc_order).min(other.min_order() + self.trunc_order);
        if trunc < LOWEST_TRUNC {
            return Err(Error::InsufficientPrecision {
                order: LOWEST_TRUNC,
                trunc_order: trunc,
            });
        }
        let mut out: BTreeMap<i32, Rational> = BTreeMap::new();
        for (oa, ca) in &self.coeffs {
            for (ob, cb) in &other.coeffs {
                let o = oa + ob;
                if o > trunc {
                    break;
                }
                *out.entry(o).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Self {
            coeffs: out,
            trunc_order: trunc,
        })
    }

    /// Restriction to strictly negative orders (minimal subtraction).
    pub fn pole_part(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .range(..0)
                .map(|(&o, c)| (o, c.clone()))
                .collect(),
            trunc_order: self.trunc_order,
        }
    }

    /// Restriction to nonnegative orders, `x - pole_part(x)`.
    pub fn regular_part(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .range(0..)
                .map(|(&o, c)| (o, c.clone()))
                .collect(),
            trunc_order: self.trunc_order,
        }
    }

    /// Order-0 coefficient of a pole-free series.
    pub fn eval_at_zero(&self) -> Result<Rational> {
        if self.has_pole() {
            return Err(Error::PolePresent);
        }
        self.coeff(0)
    }
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        let window = self.trunc_order.min(other.trunc_order);
        let lhs = self.coeffs.range(..=window);
        let rhs = other.coeffs.range(..=window);
        lhs.eq(rhs)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (&order, c)) in self.coeffs.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            match order {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    f.write_str("e")?;
                    if order != 1 {
                        write!(f, "^{order}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentSeries {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_laurent_in(s, Window::default())
    }
}

/// Parses a series with the default window.
pub fn parse_laurent(text: &str) -> Result<LaurentSeries, ParseError> {
    parse_laurent_in(text, Window::default())
}

/// Parses `series := term (('+'|'-') term)*` with
/// `term := coeff ['*' 'e' ['^' int]] | 'e' ['^' int]` and
/// `coeff := int ['/' posint]`. Whitespace is ignored and a leading sign is
/// accepted on the first term.
pub fn parse_laurent_in(text: &str, window: Window) -> Result<LaurentSeries, ParseError> {
    let mut p = Cursor::new(text);
    let mut terms = Vec::new();
    let mut sign = match p.peek() {
        Some('-') => {
            p.bump();
            -1
        }
        Some('+') => {
            p.bump();
            1
        }
        _ => 1,
    };
    loop {
        let at = p.pos();
        let (c, order) = p.term()?;
        if order < window.min_order || order > window.trunc_order {
            return Err(ParseError::new(
                at,
                format!(
                    "order {order} outside window [{}, {}]",
                    window.min_order, window.trunc_order
                ),
            ));
        }
        terms.push((order, if sign < 0 { -c } else { c }));
        sign = match p.peek() {
            None => break,
            Some('+') => 1,
            Some('-') => -1,
            Some(ch) => return Err(ParseError::new(p.pos(), format!("unexpected '{ch}'"))),
        };
        p.bump();
    }
    LaurentSeries::from_terms(terms, window.trunc_order)
        .map_err(|e| ParseError::new(0, e.to_string()))
}

/// Character cursor over the non-whitespace characters of the input, keeping
/// byte offsets for error reporting.
struct Cursor {
    chars: Vec<(usize, char)>,
    idx: usize,
    end: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Self {
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            idx: 0,
            end: text.len(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.end, |&(p, _)| p)
    }

    fn bump(&mut self) {
        self.idx += 1;
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return Err(ParseError::new(start, "expected digits"));
        }
        Ok(s.parse().expect("ascii digits"))
    }

    fn int(&mut self) -> Result<i32, ParseError> {
        let start = self.pos();
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let d = self.digits()?;
        let v = if neg { -d } else { d };
        i32::try_from(v).map_err(|_| ParseError::new(start, "exponent out of range"))
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        if self.eat('^') {
            self.int()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<(Rational, i32), ParseError> {
        match self.peek() {
            Some('e') => {
                self.bump();
                Ok((Rational::one(), self.exponent()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let den = if self.eat('/') {
                    let at = self.pos();
                    let d = self.digits()?;
                    if d.is_zero() {
                        return Err(ParseError::new(at, "zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                let c = Rational::new(num, den);
                if self.eat('*') {
                    if !self.eat('e') {
                        return Err(ParseError::new(self.pos(), "expected 'e' after '*'"));
                    }
                    Ok((c, self.exponent()?))
                } else {
                    Ok((c, 0))
                }
            }
            Some(c) => Err(ParseError::new(self.pos(), format!("unexpected '{c}'"))),
            None => Err(ParseError::new(self.pos(), "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> LaurentSeries {
        parse_laurent(text).unwrap()
    }

    #[test]
    fn addition() {
        assert!(s("e^-1").add(&s("-e^-1")).is_zero());
        assert_eq!(s("3*e^-2 + 5").add(&s("7*e")), s("3*e^-2 + 5 + 7*e"));
        let a = LaurentSeries::monomial(rat(1), 0, 16);
        let b = LaurentSeries::monomial(rat(1), 0, 8);
        assert_eq!(a.add(&b).trunc_order(), 8);
    }

    #[test]
    fn multiplication() {
        assert_eq!(s("e^-1").mul(&s("e")).unwrap(), s("1"));
        assert_eq!(s("1 + e").mul(&s("1 - e")).unwrap(), s("1 - e^2"));
        let x = s("e^-1 + 1");
        assert_eq!(x.mul(&x).unwrap(), s("e^-2 + 2*e^-1 + 1"));
    }

    #[test]
    fn product_truncation_bookkeeping() {
        let a = LaurentSeries::from_terms([(-2, rat(1))], 10).unwrap();
        let b = LaurentSeries::from_terms([(1, rat(1))], 4).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.trunc_order(), (-2 + 4));
        assert!(p.coeff(3).is_err());
    }

    #[test]
    fn product_losing_the_pole_fails() {
        let a = LaurentSeries::from_terms([(-12, rat(1))], 8).unwrap();
        let b = LaurentSeries::from_terms([(-12, rat(1))], 8).unwrap();
        assert!(matches!(
            a.mul(&b),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn pole_part_examples() {
        assert_eq!(s("3*e^-2 + 5 + 7*e").pole_part(), s("3*e^-2"));
        assert!(s("5 + 7*e").pole_part().is_zero());
        let x = s("e^-1 + 1");
        assert_eq!(x.pole_part().pole_part(), x.pole_part());
        assert_eq!(x.pole_part(), s("e^-1"));
    }

    #[test]
    fn eval_at_zero_examples() {
        assert_eq!(s("5 + 7*e").eval_at_zero().unwrap(), rat(5));
        assert_eq!(s("0").eval_at_zero().unwrap(), rat(0));
        assert_eq!(s("e^-1 + 1").eval_at_zero(), Err(Error::PolePresent));
    }

    #[test]
    fn parse_examples() {
        let x = s("3/2*e^-2 + 1 + e");
        let got: Vec<_> = x.terms().map(|(o, c)| (o, c.clone())).collect();
        assert_eq!(got, vec![(-2, ratio(3, 2)), (0, rat(1)), (1, rat(1))]);
        assert!(s("0").is_zero());
        assert_eq!(s("e^-1 + e^-1"), LaurentSeries::monomial(rat(2), -1, 16));
        assert_eq!(s("  3 / 2 * e ^ - 2"), s("3/2*e^-2"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_laurent("1 + * e").unwrap_err();
        assert_eq!(err.position, 4);
        assert!(parse_laurent("2*x").is_err());
        assert!(parse_laurent("1/0").is_err());
        assert!(parse_laurent("").is_err());
        assert!(parse_laurent("e^-17").is_err());
        assert!(parse_laurent("1 +").is_err());
    }

    #[test]
    fn printing() {
        assert_eq!(s("0").to_string(), "0");
        assert_eq!(s("e + 3/2*e^-2 + 1").to_string(), "3/2*e^-2 + 1 + e");
        assert_eq!(s("-e^-1 - 2").to_string(), "-e^-1 - 2");
    }

    #[test]
    fn coefficient_outside_window_is_an_error() {
        let x = LaurentSeries::one(3);
        assert!(x.coeff(3).is_ok());
        assert_eq!(
            x.coeff(4),
            Err(Error::InsufficientPrecision {
                order: 4,
                trunc_order: 3
            })
        );
    }
}
