//! Target algebras for linear maps out of a coalgebra.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::{LaurentSeries, Rational, DEFAULT_TRUNC_ORDER};

/// A unital ℚ-algebra handle. Multiplication may fail (truncated series
/// running out of precision), everything else is total.
pub trait Algebra: Send + Sync {
    type Elem: Clone + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &Rational, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn is_commutative(&self) -> bool {
        true
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(&-Rational::one(), b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.eq(a, &self.one())
    }

    /// `c · 1`.
    #[allow(clippy::wrong_self_convention)]
    fn from_rational(&self, c: &Rational) -> Self::Elem {
        self.scale(c, &self.one())
    }
}

/// The ground field ℚ.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Algebra for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn scale(&self, c: &Rational, a: &Rational) -> Rational {
        c * a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(a * b)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn eq(&self, a: &Rational, b: &Rational) -> bool {
        a == b
    }
}

/// Laurent series in `e`, truncated above `trunc_order`.
#[derive(Clone, Copy, Debug)]
pub struct LaurentRing {
    pub trunc_order: i32,
}

impl Default for LaurentRing {
    fn default() -> Self {
        Self {
            trunc_order: DEFAULT_TRUNC_ORDER,
        }
    }
}

impl Algebra for LaurentRing {
    type Elem = LaurentSeries;

    fn zero(&self) -> LaurentSeries {
        LaurentSeries::zero(self.trunc_order)
    }
    fn one(&self) -> LaurentSeries {
        LaurentSeries::one(self.trunc_order)
    }
    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.add(b)
    }
    fn scale(&self, c: &Rational, a: &LaurentSeries) -> LaurentSeries {
        a.scale(c)
    }
    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> Result<LaurentSeries> {
        a.mul(b)
    }
    fn is_zero(&self, a: &LaurentSeries) -> bool {
        a.is_zero()
    }
    fn eq(&self, a: &LaurentSeries, b: &LaurentSeries) -> bool {
        a == b
    }
}
