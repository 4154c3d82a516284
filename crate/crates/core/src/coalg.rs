//! Filtered coalgebras, the convolution algebra `Lin(C, A)`, and Möbius
//! inversion of maps that send group-like elements to 1.
//!
//! Linear maps are represented by their values on basis keys, computed on
//! demand and memoised. A map's rule receives the map itself, which is how
//! the recursive inverse refers to its own lower-degree values.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex, RwLock};

use num_traits::{One, Zero};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::lincomb::{LinComb, Tensor};

/// A coalgebra with a chosen basis, filtered by `degree`.
///
/// Implementations must satisfy, on every key they can produce:
/// coassociativity, the counit laws, `deg(a) + deg(b) <= deg(x)` for every
/// `a ⊗ b` in `Δ(x)`, and every degree-0 key is group-like.
pub trait Coalgebra: Send + Sync + 'static {
    type Key: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn coproduct(&self, key: &Self::Key) -> LinComb<Tensor<Self::Key, Self::Key>>;
    fn counit(&self, key: &Self::Key) -> Rational;
    fn degree(&self, key: &Self::Key) -> usize;
    fn is_grouplike(&self, key: &Self::Key) -> bool;

    /// All basis keys of degree at most `max_degree`, in key order, when that
    /// set is finite and enumerable.
    fn basis_up_to(&self, _max_degree: usize) -> Option<Vec<Self::Key>> {
        None
    }
}

type Rule<C, A> =
    dyn Fn(&LinMap<C, A>, &<C as Coalgebra>::Key) -> Result<<A as Algebra>::Elem> + Send + Sync;

struct Inner<C: Coalgebra, A: Algebra> {
    coalg: Arc<C>,
    alg: Arc<A>,
    rule: Box<Rule<C, A>>,
    memo: RwLock<HashMap<C::Key, A::Elem>>,
}

/// An element of `Lin(C, A)`: a memoised rule on basis keys.
///
/// Cloning is cheap and shares the cache.
pub struct LinMap<C: Coalgebra, A: Algebra> {
    inner: Arc<Inner<C, A>>,
}

impl<C: Coalgebra, A: Algebra> Clone for LinMap<C, A> {
    fn clone(&self) -> Self {
        Self {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<C: Coalgebra, A: Algebra + 'static> LinMap<C, A> {
    /// A map whose rule may call back into the map being defined.
    pub fn recursive(
        coalg: Arc<C>,
        alg: Arc<A>,
        rule: impl Fn(&LinMap<C, A>, &C::Key) -> Result<A::Elem> + Send + Sync + 'static,
    ) -> Self {
        Self {
            inner: Arc::new(Inner {
                coalg,
                alg,
                rule: Box::new(rule),
                memo: RwLock::new(HashMap::new()),
            }),
        }
    }

    pub fn from_fn(
        coalg: Arc<C>,
        alg: Arc<A>,
        rule: impl Fn(&C::Key) -> Result<A::Elem> + Send + Sync + 'static,
    ) -> Self {
        Self::recursive(coalg, alg, move |_, k| rule(k))
    }

    pub fn coalgebra(&self) -> &Arc<C> {
        &self.inner.coalg
    }

    pub fn algebra(&self) -> &Arc<A> {
        &self.inner.alg
    }

    /// Value on a basis key.
    pub fn eval(&self, key: &C::Key) -> Result<A::Elem> {
        if let Some(v) = self.inner.memo.read().expect("memo lock").get(key) {
            return Ok(v.clone());
        }
        let v = (self.inner.rule)(self, key)?;
        self.inner
            .memo
            .write()
            .expect("memo lock")
            .entry(key.clone())
            .or_insert_with(|| v.clone());
        Ok(v)
    }

    /// Evaluates the rule without consulting or filling this map's cache.
    pub fn eval_uncached(&self, key: &C::Key) -> Result<A::Elem> {
        (self.inner.rule)(self, key)
    }

    /// Linear extension to a combination of keys.
    pub fn eval_lin(&self, x: &LinComb<C::Key>) -> Result<A::Elem> {
        let alg = self.algebra();
        let mut acc = alg.zero();
        for (k, c) in x.iter() {
            acc = alg.add(&acc, &alg.scale(c, &self.eval(k)?));
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::from_fn(self.coalgebra().clone(), self.algebra().clone(), move |k| {
            Ok(f.algebra().add(&f.eval(k)?, &g.eval(k)?))
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::from_fn(self.coalgebra().clone(), self.algebra().clone(), move |k| {
            Ok(f.algebra().sub(&f.eval(k)?, &g.eval(k)?))
        })
    }

    pub fn scale(&self, c: Rational) -> Self {
        let f = self.clone();
        Self::from_fn(self.coalgebra().clone(), self.algebra().clone(), move |k| {
            Ok(f.algebra().scale(&c, &f.eval(k)?))
        })
    }

    /// Whether both maps agree on every key in `keys`.
    pub fn agrees_with(&self, other: &Self, keys: &[C::Key]) -> Result<bool> {
        for k in keys {
            if !self.algebra().eq(&self.eval(k)?, &other.eval(k)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(f * g)(x) = Σ f(x₁)·g(x₂)` over the coproduct of a single key.
pub fn convolve_at<C: Coalgebra, A: Algebra + 'static>(
    f: &LinMap<C, A>,
    g: &LinMap<C, A>,
    key: &C::Key,
) -> Result<A::Elem> {
    let alg = f.algebra();
    let mut acc = alg.zero();
    for (Tensor(a, b), c) in f.coalgebra().coproduct(key).iter() {
        let term = alg.mul(&f.eval(a)?, &g.eval(b)?)?;
        acc = alg.add(&acc, &alg.scale(c, &term));
    }
    Ok(acc)
}

/// Convolution product in `Lin(C, A)`. Both maps must live on the same
/// coalgebra and target.
pub fn convolve<C: Coalgebra, A: Algebra + 'static>(
    f: &LinMap<C, A>,
    g: &LinMap<C, A>,
) -> LinMap<C, A> {
    let (f, g) = (f.clone(), g.clone());
    LinMap::from_fn(f.coalgebra().clone(), f.algebra().clone(), move |k| {
        convolve_at(&f, &g, k)
    })
}

/// The convolution unit `e = u ∘ ε`.
pub fn neutral_e<C: Coalgebra, A: Algebra + 'static>(coalg: Arc<C>, alg: Arc<A>) -> LinMap<C, A> {
    let c = coalg.clone();
    let a = alg.clone();
    LinMap::from_fn(coalg, alg, move |k| Ok(a.from_rational(&c.counit(k))))
}

/// The zeta map, constant `1` on every basis key.
pub fn zeta<C: Coalgebra, A: Algebra + 'static>(coalg: Arc<C>, alg: Arc<A>) -> LinMap<C, A> {
    let a = alg.clone();
    LinMap::from_fn(coalg, alg, move |_| Ok(a.one()))
}

/// `φ − e`, checking on the way that `φ` sends group-like keys to 1.
pub fn reduced<C: Coalgebra, A: Algebra + 'static>(phi: &LinMap<C, A>) -> LinMap<C, A> {
    let phi = phi.clone();
    LinMap::from_fn(phi.coalgebra().clone(), phi.algebra().clone(), move |k| {
        let coalg = phi.coalgebra();
        let alg = phi.algebra();
        let v = phi.eval(k)?;
        if coalg.is_grouplike(k) {
            if !alg.is_one(&v) {
                return Err(Error::NotUnitOnGrouplike(k.to_string()));
            }
            return Ok(alg.zero());
        }
        Ok(alg.sub(&v, &alg.from_rational(&coalg.counit(k))))
    })
}

/// Sum over `Δ(x)` of `c · ψ(x₁) · red(x₂)`, skipping the degree-0 right
/// factors on which `red = φ − e` vanishes. Every left factor that is
/// evaluated has strictly smaller degree than `x`.
pub(crate) fn lower_degree_convolution<C: Coalgebra, A: Algebra + 'static>(
    psi: &LinMap<C, A>,
    red: &LinMap<C, A>,
    key: &C::Key,
) -> Result<A::Elem> {
    let coalg = psi.coalgebra();
    let alg = psi.algebra();
    let deg = coalg.degree(key);
    let mut acc = alg.zero();
    for (Tensor(a, b), c) in coalg.coproduct(key).iter() {
        if coalg.degree(b) == 0 {
            if !coalg.is_grouplike(b) {
                return Err(Error::StandingAssumption(b.to_string()));
            }
            // Still evaluated so that the group-like precondition is checked.
            red.eval(b)?;
            continue;
        }
        if coalg.degree(a) >= deg {
            return Err(Error::FiltrationViolated(key.to_string()));
        }
        let term = alg.mul(&psi.eval(a)?, &red.eval(b)?)?;
        acc = alg.add(&acc, &alg.scale(c, &term));
    }
    Ok(acc)
}

/// Convolution inverse of `φ` by the recursion `ψ = e − ψ * (φ − e)`.
pub fn moebius_invert_recursive<C: Coalgebra, A: Algebra + 'static>(
    phi: &LinMap<C, A>,
) -> LinMap<C, A> {
    let red = reduced(phi);
    LinMap::recursive(
        phi.coalgebra().clone(),
        phi.algebra().clone(),
        move |psi, k| {
            let coalg = psi.coalgebra();
            let alg = psi.algebra();
            if coalg.degree(k) == 0 {
                if !coalg.is_grouplike(k) {
                    return Err(Error::StandingAssumption(k.to_string()));
                }
                red.eval(k)?;
                return Ok(alg.one());
            }
            let tail = lower_degree_convolution(psi, &red, k)?;
            Ok(alg.sub(&alg.from_rational(&coalg.counit(k)), &tail))
        },
    )
}

type Step<C, A> = dyn Fn(&LinMap<C, A>, &LinMap<C, A>) -> LinMap<C, A> + Send + Sync;

/// The maps `ψ₀ = e`, `ψ_{n+1} = step(ψ_n, φ − e)`, built on demand.
pub(crate) struct PowerTower<C: Coalgebra, A: Algebra> {
    red: LinMap<C, A>,
    step: Box<Step<C, A>>,
    powers: Mutex<Vec<LinMap<C, A>>>,
}

impl<C: Coalgebra, A: Algebra + 'static> PowerTower<C, A> {
    pub(crate) fn new(
        phi: &LinMap<C, A>,
        step: impl Fn(&LinMap<C, A>, &LinMap<C, A>) -> LinMap<C, A> + Send + Sync + 'static,
    ) -> Self {
        let e = neutral_e(phi.coalgebra().clone(), phi.algebra().clone());
        Self {
            red: reduced(phi),
            step: Box::new(step),
            powers: Mutex::new(vec![e]),
        }
    }

    pub(crate) fn power(&self, n: usize) -> LinMap<C, A> {
        let mut powers = self.powers.lock().expect("power lock");
        while powers.len() <= n {
            let next = (self.step)(powers.last().expect("psi_0 present"), &self.red);
            powers.push(next);
        }
        powers[n].clone()
    }

    /// `Σ_{n ≤ deg x} (−1)ⁿ ψ_n(x)`.
    pub(crate) fn alternating_sum(&self, key: &C::Key) -> Result<A::Elem> {
        let coalg = self.red.coalgebra();
        let alg = self.red.algebra();
        if coalg.degree(key) == 0 && !coalg.is_grouplike(key) {
            return Err(Error::StandingAssumption(key.to_string()));
        }
        if coalg.is_grouplike(key) {
            self.red.eval(key)?;
        }
        let mut acc = alg.zero();
        for n in 0..=coalg.degree(key) {
            let v = self.power(n).eval(key)?;
            acc = if n % 2 == 0 {
                alg.add(&acc, &v)
            } else {
                alg.sub(&acc, &v)
            };
        }
        Ok(acc)
    }
}

/// Convolution inverse of `φ` as `ψ_even − ψ_odd` with
/// `ψ_n = (φ − e)^{*n}`; the sum is finite on every key.
pub fn moebius_invert_evenodd<C: Coalgebra, A: Algebra + 'static>(
    phi: &LinMap<C, A>,
) -> LinMap<C, A> {
    let tower = PowerTower::new(phi, |prev, red| convolve(prev, red));
    LinMap::from_fn(phi.coalgebra().clone(), phi.algebra().clone(), move |k| {
        tower.alternating_sum(k)
    })
}

/// Whether every degree-0 key up to `max_degree` is group-like with counit 1,
/// and every key flagged group-like really satisfies `Δx = x ⊗ x`, `ε(x) = 1`.
/// Returns `false` if the coalgebra cannot enumerate its basis.
pub fn check_standing_assumption<C: Coalgebra>(coalg: &C, max_degree: usize) -> bool {
    let Some(keys) = coalg.basis_up_to(max_degree) else {
        return false;
    };
    keys.iter().all(|k| {
        if coalg.degree(k) > 0 && !coalg.is_grouplike(k) {
            return true;
        }
        coalg.is_grouplike(k)
            && coalg.counit(k).is_one()
            && coalg.coproduct(k) == LinComb::basis(Tensor(k.clone(), k.clone()))
    })
}

/// Executable coalgebra axioms.
pub mod laws {
    use super::*;

    fn violation<K: fmt::Display>(key: &K, what: &str) -> Error {
        Error::PostconditionViolated {
            key: key.to_string(),
            what: what.to_string(),
        }
    }

    /// `(Δ ⊗ id)Δ(x) = (id ⊗ Δ)Δ(x)`.
    pub fn coassociative<C: Coalgebra>(coalg: &C, key: &C::Key) -> bool {
        let delta = coalg.coproduct(key);
        let mut left = LinComb::zero();
        let mut right = LinComb::zero();
        for (Tensor(a, b), c) in delta.iter() {
            for (Tensor(a1, a2), d) in coalg.coproduct(a).iter() {
                left.add_term((a1.clone(), a2.clone(), b.clone()), c * d);
            }
            for (Tensor(b1, b2), d) in coalg.coproduct(b).iter() {
                right.add_term((a.clone(), b1.clone(), b2.clone()), c * d);
            }
        }
        left == right
    }

    /// `(ε ⊗ id)Δ(x) = x = (id ⊗ ε)Δ(x)`.
    pub fn counital<C: Coalgebra>(coalg: &C, key: &C::Key) -> bool {
        let delta = coalg.coproduct(key);
        let mut left = LinComb::zero();
        let mut right = LinComb::zero();
        for (Tensor(a, b), c) in delta.iter() {
            left.add_term(b.clone(), c * coalg.counit(a));
            right.add_term(a.clone(), c * coalg.counit(b));
        }
        let x = LinComb::basis(key.clone());
        left == x && right == x
    }

    /// Every `a ⊗ b` in `Δ(x)` has `deg a + deg b <= deg x`.
    pub fn respects_filtration<C: Coalgebra>(coalg: &C, key: &C::Key) -> bool {
        let d = coalg.degree(key);
        coalg
            .coproduct(key)
            .keys()
            .all(|Tensor(a, b)| coalg.degree(a) + coalg.degree(b) <= d)
    }

    /// Group-like flag agrees with the coproduct and counit, and degree-0
    /// keys are group-like.
    pub fn grouplike_consistent<C: Coalgebra>(coalg: &C, key: &C::Key) -> bool {
        let really = coalg.counit(key).is_one()
            && coalg.coproduct(key) == LinComb::basis(Tensor(key.clone(), key.clone()));
        really == coalg.is_grouplike(key) && (coalg.degree(key) > 0 || really)
    }

    /// Runs every coalgebra law on `keys`.
    pub fn check_all<C: Coalgebra>(coalg: &C, keys: &[C::Key]) -> Result<()> {
        for k in keys {
            if !coassociative(coalg, k) {
                return Err(violation(k, "coassociativity"));
            }
            if !counital(coalg, k) {
                return Err(violation(k, "counit law"));
            }
            if !respects_filtration(coalg, k) {
                return Err(violation(k, "filtration"));
            }
            if !grouplike_consistent(coalg, k) {
                return Err(violation(k, "group-like"));
            }
        }
        Ok(())
    }

    /// `e` is zero-valued except where the counit is nonzero.
    pub fn counit_is_zero_off_grouplikes<C: Coalgebra>(coalg: &C, keys: &[C::Key]) -> bool {
        keys.iter()
            .all(|k| coalg.is_grouplike(k) || coalg.counit(k).is_zero())
    }
}
