//! Rota–Baxter operators and the renormalisation of characters.
//!
//! With an idempotent weight-1 Rota–Baxter operator `R` on the target, the
//! counter-term `φ₋` solves `φ₋ = e − R[φ₋ * (φ − e)]` and the renormalised
//! map is the plain convolution `φ₊ = φ₋ * φ`. For `R = pole_part` on Laurent
//! series this is minimal-subtraction BPHZ; for `R = id` it is Möbius
//! inversion.

use std::sync::Arc;

use crate::algebra::{Algebra, LaurentRing};
use crate::bialg::{is_multiplicative, Bialgebra, Character};
use crate::coalg::{
    convolve, convolve_at, lower_degree_convolution, reduced, Coalgebra, LinMap, PowerTower,
};
use crate::error::{Error, Result};
use num_traits::Zero;

use crate::exact::{LaurentSeries, Rational};

/// A linear operator on a target algebra, meant to satisfy the weight-1
/// Rota–Baxter equation `R(xy) + R(x)R(y) = R(R(x)y + xR(y))`.
pub trait RotaBaxter<A: Algebra>: Send + Sync {
    fn apply(&self, alg: &A, x: &A::Elem) -> Result<A::Elem>;
}

/// Shared handle to an operator.
pub type Operator<A> = Arc<dyn RotaBaxter<A>>;

/// Minimal subtraction: keep strictly negative orders.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolePart;

impl RotaBaxter<LaurentRing> for PolePart {
    fn apply(&self, _: &LaurentRing, x: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(x.pole_part())
    }
}

/// The identity operator; renormalisation then reduces to Möbius inversion.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl<A: Algebra> RotaBaxter<A> for Identity {
    fn apply(&self, _: &A, x: &A::Elem) -> Result<A::Elem> {
        Ok(x.clone())
    }
}

/// `c · pole_part`. Not idempotent and not Rota–Baxter unless `c ∈ {0, 1}`.
#[derive(Clone, Debug)]
pub struct ScaledPolePart(pub Rational);

impl RotaBaxter<LaurentRing> for ScaledPolePart {
    fn apply(&self, _: &LaurentRing, x: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(x.pole_part().scale(&self.0))
    }
}

/// Whether `R(xy) + R(x)R(y) = R(R(x)y + xR(y))` holds exactly.
pub fn rb_check<A: Algebra>(
    alg: &A,
    r: &dyn RotaBaxter<A>,
    x: &A::Elem,
    y: &A::Elem,
) -> Result<bool> {
    let rx = r.apply(alg, x)?;
    let ry = r.apply(alg, y)?;
    let lhs = alg.add(&r.apply(alg, &alg.mul(x, y)?)?, &alg.mul(&rx, &ry)?);
    let rhs = r.apply(alg, &alg.add(&alg.mul(&rx, y)?, &alg.mul(x, &ry)?))?;
    Ok(alg.eq(&lhs, &rhs))
}

/// `α *_R β := R(α * β)`. Neither associative nor unital.
pub fn convolve_r<C: Coalgebra, A: Algebra + 'static>(
    f: &LinMap<C, A>,
    g: &LinMap<C, A>,
    r: &Operator<A>,
) -> LinMap<C, A> {
    let (f, g, r) = (f.clone(), g.clone(), r.clone());
    LinMap::from_fn(f.coalgebra().clone(), f.algebra().clone(), move |k| {
        r.apply(f.algebra(), &convolve_at(&f, &g, k)?)
    })
}

/// Counter-term by the Bogoliubov recursion `ψ = e − ψ *_R (φ − e)`.
pub fn bogoliubov_counterterm<C: Coalgebra, A: Algebra + 'static>(
    phi: &LinMap<C, A>,
    r: &Operator<A>,
) -> LinMap<C, A> {
    let red = reduced(phi);
    let r = r.clone();
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
            let inner = lower_degree_convolution(psi, &red, k)?;
            Ok(alg.sub(&alg.from_rational(&coalg.counit(k)), &r.apply(alg, &inner)?))
        },
    )
}

/// Counter-term as `ψ_even − ψ_odd` with the left-nested powers
/// `ψ₀ = e`, `ψ_{n+1} = ψ_n *_R (φ − e)`.
pub fn atkinson_counterterm<C: Coalgebra, A: Algebra + 'static>(
    phi: &LinMap<C, A>,
    r: &Operator<A>,
) -> LinMap<C, A> {
    let r = r.clone();
    let tower = PowerTower::new(phi, move |prev, red| convolve_r(prev, red, &r));
    LinMap::from_fn(phi.coalgebra().clone(), phi.algebra().clone(), move |k| {
        tower.alternating_sum(k)
    })
}

/// Which construction produces the counter-term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CountertermMethod {
    #[default]
    Bogoliubov,
    Atkinson,
}

pub fn counterterm<C: Coalgebra, A: Algebra + 'static>(
    phi: &LinMap<C, A>,
    r: &Operator<A>,
    method: CountertermMethod,
) -> LinMap<C, A> {
    match method {
        CountertermMethod::Bogoliubov => bogoliubov_counterterm(phi, r),
        CountertermMethod::Atkinson => atkinson_counterterm(phi, r),
    }
}

/// The counter-term `φ₋` and the renormalised map `φ₊ = φ₋ * φ`.
pub struct BirkhoffPair<C: Coalgebra, A: Algebra> {
    pub minus: LinMap<C, A>,
    pub plus: LinMap<C, A>,
}

/// Birkhoff decomposition of `φ`. Requires `R(1) = 0`; the returned maps
/// fail with `PostconditionViolated` wherever `φ₋(x) ∉ Im R` for
/// `ε(x) = 0`, or `φ₊(x) ∉ Ker R`.
pub fn birkhoff<C: Coalgebra, A: Algebra + 'static>(
    phi: &LinMap<C, A>,
    r: &Operator<A>,
    method: CountertermMethod,
) -> Result<BirkhoffPair<C, A>> {
    let alg = phi.algebra();
    if !alg.is_zero(&r.apply(alg, &alg.one())?) {
        return Err(Error::UnitNotInKerR);
    }
    Ok(decompose(phi, r, method, true))
}

/// Birkhoff decomposition without the `R(1) = 0` requirement: membership of
/// `φ₊(x)` in `Ker R` is only enforced on `Ker ε`.
pub fn birkhoff_relaxed<C: Coalgebra, A: Algebra + 'static>(
    phi: &LinMap<C, A>,
    r: &Operator<A>,
    method: CountertermMethod,
) -> BirkhoffPair<C, A> {
    decompose(phi, r, method, false)
}

fn decompose<C: Coalgebra, A: Algebra + 'static>(
    phi: &LinMap<C, A>,
    r: &Operator<A>,
    method: CountertermMethod,
    unit_in_kernel: bool,
) -> BirkhoffPair<C, A> {
    let raw_minus = counterterm(phi, r, method);
    let raw_plus = convolve(&raw_minus, phi);

    let (m, rm) = (raw_minus.clone(), r.clone());
    let minus = LinMap::from_fn(phi.coalgebra().clone(), phi.algebra().clone(), move |k| {
        let v = m.eval(k)?;
        let alg = m.algebra();
        if m.coalgebra().counit(k).is_zero() && !alg.eq(&rm.apply(alg, &v)?, &v) {
            return Err(Error::PostconditionViolated {
                key: k.to_string(),
                what: format!("counter-term value {v} is not in Im R"),
            });
        }
        Ok(v)
    });

    let (p, rp) = (raw_plus, r.clone());
    let plus = LinMap::from_fn(phi.coalgebra().clone(), phi.algebra().clone(), move |k| {
        let v = p.eval(k)?;
        let alg = p.algebra();
        let check = unit_in_kernel || !p.coalgebra().is_grouplike(k);
        if check && !alg.is_zero(&rp.apply(alg, &v)?) {
            return Err(Error::PostconditionViolated {
                key: k.to_string(),
                what: format!("renormalised value {v} is not in Ker R"),
            });
        }
        Ok(v)
    });
    BirkhoffPair { minus, plus }
}

impl<C: Coalgebra> BirkhoffPair<C, LaurentRing> {
    /// The finite amplitude `φ₊(x)|_{e=0}`.
    pub fn bphz_value(&self, key: &C::Key) -> Result<Rational> {
        self.plus.eval(key)?.eval_at_zero()
    }
}

/// Whether `φ₋` and `φ₊ = φ₋ * φ` are both multiplicative up to
/// `max_degree`. No Im/Ker checks are made, so any operator may be passed.
pub fn counterterm_multiplicativity_check<B, A>(
    phi: &Character<B, A>,
    r: &Operator<A>,
    max_degree: usize,
) -> Result<bool>
where
    B: Bialgebra,
    A: Algebra + 'static,
{
    let minus = bogoliubov_counterterm(phi.map(), r);
    let plus = convolve(&minus, phi.map());
    Ok(is_multiplicative(&minus, max_degree)? && is_multiplicative(&plus, max_degree)?)
}
