//! Bialgebras, multiplicative maps, and the antipode of a filtered
//! bialgebra whose degree-0 part is spanned by group-likes.

use std::fmt;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::coalg::{convolve, moebius_invert_recursive, Coalgebra, LinMap};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::lincomb::{LinComb, Tensor};

/// A coalgebra with a compatible associative product on basis keys:
/// `Δ(x·y) = Δ(x)·Δ(y)`.
pub trait Bialgebra: Coalgebra {
    fn mult(&self, a: &Self::Key, b: &Self::Key) -> LinComb<Self::Key>;
    fn unit_key(&self) -> Self::Key;

    /// Membership of a basis key in the chosen complement `B₊` of the
    /// degree-0 part. For graded instances this is "positive degree".
    fn in_plus_complement(&self, key: &Self::Key) -> bool {
        self.degree(key) > 0
    }
}

/// A bialgebra viewed as a target algebra for `Lin(B, B)`.
pub struct BialgebraTarget<B: Bialgebra> {
    bialg: Arc<B>,
    commutative: bool,
}

impl<B: Bialgebra> BialgebraTarget<B> {
    pub fn new(bialg: Arc<B>) -> Self {
        Self {
            bialg,
            commutative: true,
        }
    }

    /// Declares the product non-commutative.
    pub fn non_commutative(bialg: Arc<B>) -> Self {
        Self {
            bialg,
            commutative: false,
        }
    }

    pub fn bialgebra(&self) -> &Arc<B> {
        &self.bialg
    }
}

impl<B: Bialgebra> Algebra for BialgebraTarget<B> {
    type Elem = LinComb<B::Key>;

    fn zero(&self) -> Self::Elem {
        LinComb::zero()
    }
    fn one(&self) -> Self::Elem {
        LinComb::basis(self.bialg.unit_key())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b)
    }
    fn scale(&self, c: &Rational, a: &Self::Elem) -> Self::Elem {
        a.scale(c)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let mut out = LinComb::zero();
        for (x, c) in a.iter() {
            for (y, d) in b.iter() {
                for (z, m) in self.bialg.mult(x, y).iter() {
                    out.add_term(z.clone(), c * d * m);
                }
            }
        }
        Ok(out)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }
    fn is_commutative(&self) -> bool {
        self.commutative
    }
}

/// `φ(x·y) = φ(x)φ(y)` for all basis pairs with `deg x + deg y <= max_degree`,
/// and `φ(1) = 1`. `false` if the basis cannot be enumerated.
pub fn is_multiplicative<B, A>(f: &LinMap<B, A>, max_degree: usize) -> Result<bool>
where
    B: Bialgebra,
    A: Algebra + 'static,
{
    let bialg = f.coalgebra();
    let alg = f.algebra();
    let Some(keys) = bialg.basis_up_to(max_degree) else {
        return Ok(false);
    };
    if !alg.is_one(&f.eval(&bialg.unit_key())?) {
        return Ok(false);
    }
    for x in &keys {
        for y in &keys {
            if bialg.degree(x) + bialg.degree(y) > max_degree {
                continue;
            }
            let lhs = f.eval_lin(&bialg.mult(x, y))?;
            let rhs = alg.mul(&f.eval(x)?, &f.eval(y)?)?;
            if !alg.eq(&lhs, &rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A multiplicative map sending group-likes to 1.
pub struct Character<B: Bialgebra, A: Algebra> {
    map: LinMap<B, A>,
}

impl<B: Bialgebra, A: Algebra> Clone for Character<B, A> {
    fn clone(&self) -> Self {
        Self {
            map: self.map.clone(),
        }
    }
}

impl<B: Bialgebra, A: Algebra + 'static> Character<B, A> {
    /// Wraps a map known to be multiplicative by construction.
    pub fn new_unchecked(map: LinMap<B, A>) -> Self {
        Self { map }
    }

    /// Wraps `map` after checking multiplicativity up to `max_degree`.
    pub fn checked(map: LinMap<B, A>, max_degree: usize) -> Result<Self> {
        if !is_multiplicative(&map, max_degree)? {
            return Err(Error::PostconditionViolated {
                key: format!("degree <= {max_degree}"),
                what: "map is not multiplicative".into(),
            });
        }
        Ok(Self { map })
    }

    pub fn map(&self) -> &LinMap<B, A> {
        &self.map
    }

    pub fn into_map(self) -> LinMap<B, A> {
        self.map
    }

    pub fn eval(&self, key: &B::Key) -> Result<A::Elem> {
        self.map.eval(key)
    }
}

impl<B: Bialgebra, A: Algebra> fmt::Debug for Character<B, A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Character { .. }")
    }
}

/// Convolution of two characters; again a character when the target is
/// commutative.
pub fn convolve_characters<B, A>(
    alpha: &Character<B, A>,
    beta: &Character<B, A>,
) -> Result<Character<B, A>>
where
    B: Bialgebra,
    A: Algebra + 'static,
{
    if !alpha.map.algebra().is_commutative() {
        return Err(Error::NonCommutativeTarget);
    }
    let map = convolve(&alpha.map, &beta.map);
    #[cfg(debug_assertions)]
    if alpha.map.coalgebra().basis_up_to(4).is_some() {
        debug_assert!(
            is_multiplicative(&map, 4).unwrap_or(true),
            "convolution of characters is not multiplicative"
        );
    }
    Ok(Character { map })
}

/// `T(x) = 1` for group-like `x`, `T(x) = x` on `B₊`.
pub fn t_operator<B: Bialgebra>(bialg: Arc<B>) -> LinMap<B, BialgebraTarget<B>> {
    let target = Arc::new(BialgebraTarget::new(bialg.clone()));
    let b = bialg.clone();
    LinMap::from_fn(bialg, target, move |k| {
        if b.is_grouplike(k) {
            Ok(LinComb::basis(b.unit_key()))
        } else if b.in_plus_complement(k) {
            Ok(LinComb::basis(k.clone()))
        } else {
            Err(Error::PostconditionViolated {
                key: k.to_string(),
                what: "key is neither group-like nor in B+".into(),
            })
        }
    })
}

/// The antipode `S = e − S * (T − e)`, the convolution inverse of `T`.
pub fn antipode<B: Bialgebra>(bialg: Arc<B>) -> LinMap<B, BialgebraTarget<B>> {
    moebius_invert_recursive(&t_operator(bialg))
}

/// `φ ∘ S`, which equals the convolution inverse of a character `φ`.
pub fn invert_via_antipode<B, A>(
    phi: &Character<B, A>,
    antipode: &LinMap<B, BialgebraTarget<B>>,
) -> LinMap<B, A>
where
    B: Bialgebra,
    A: Algebra + 'static,
{
    let phi = phi.map.clone();
    let s = antipode.clone();
    LinMap::from_fn(phi.coalgebra().clone(), phi.algebra().clone(), move |k| {
        phi.eval_lin(&s.eval(k)?)
    })
}

/// `Δ(x·y) = Δ(x)·Δ(y)` for one pair of basis keys.
pub fn bialgebra_axiom<B: Bialgebra>(bialg: &B, x: &B::Key, y: &B::Key) -> bool {
    let mut lhs = LinComb::zero();
    for (z, c) in bialg.mult(x, y).iter() {
        for (t, d) in bialg.coproduct(z).iter() {
            lhs.add_term(t.clone(), c * d);
        }
    }
    let mut rhs = LinComb::zero();
    for (Tensor(a, b), c) in bialg.coproduct(x).iter() {
        for (Tensor(p, q), d) in bialg.coproduct(y).iter() {
            for (ap, e) in bialg.mult(a, p).iter() {
                for (bq, f) in bialg.mult(b, q).iter() {
                    rhs.add_term(Tensor(ap.clone(), bq.clone()), c * d * e * f);
                }
            }
        }
    }
    lhs == rhs
}
