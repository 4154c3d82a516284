//! Incidence coalgebras of finite posets, the divisibility and additive
//! monoid coalgebras, and the classical arithmetic-function examples.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::Rationals;
use crate::coalg::{moebius_invert_recursive, zeta, Coalgebra, LinMap};
use crate::error::{Error, ParseError, Result};
use crate::exact::{rat, Rational};
use crate::lincomb::{LinComb, Tensor};

/// A finite poset on elements `0..n` with display labels.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<bool>,
    /// Longest-chain length of `[x, y]`, `None` when `x ≰ y`.
    height: Vec<Option<usize>>,
}

impl Poset {
    /// Reflexive-transitive closure of the given cover relations.
    pub fn from_cover_relations<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))
        };
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            pairs.push((lookup(a)?, lookup(b)?));
        }
        Self::from_relations(labels, &pairs)
    }

    /// Like [`Poset::from_cover_relations`] with elements given by index.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(a.max(b).to_string()));
            }
            if a == b {
                return Err(Error::CycleDetected(labels[a].clone()));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::CycleDetected(labels[i].clone()));
                }
            }
        }
        Ok(Self::with_order(labels, leq))
    }

    fn with_order(labels: Vec<String>, leq: Vec<bool>) -> Self {
        let n = labels.len();
        // A linear extension: sort by the number of elements below.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&y| (0..n).filter(|&x| leq[x * n + y]).count());
        let mut height = vec![None; n * n];
        for x in 0..n {
            height[x * n + x] = Some(0);
            for &y in &order {
                if y == x || !leq[x * n + y] {
                    continue;
                }
                let best = (0..n)
                    .filter(|&z| z != y && leq[x * n + z] && leq[z * n + y])
                    .filter_map(|z| height[x * n + z])
                    .max()
                    .expect("x itself lies strictly below y");
                height[x * n + y] = Some(best + 1);
            }
        }
        Self {
            labels,
            leq,
            height,
        }
    }

    pub fn chain(n: usize) -> Self {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations((0..n).map(|i| i.to_string()).collect(), &covers)
            .expect("chains are acyclic")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_relations((0..n).map(|i| i.to_string()).collect(), &[]).expect("no relations")
    }

    /// Subsets of an `n`-set ordered by inclusion; element `i` is the subset
    /// with bitmask `i`.
    pub fn boolean_lattice(n: usize) -> Self {
        let size = 1usize << n;
        let labels = (0..size)
            .map(|m| {
                let members: Vec<String> = (0..n)
                    .filter(|b| m >> b & 1 == 1)
                    .map(|b| b.to_string())
                    .collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let mut leq = vec![false; size * size];
        for a in 0..size {
            for b in 0..size {
                leq[a * size + b] = a & b == a;
            }
        }
        Self::with_order(labels, leq)
    }

    /// Componentwise order on pairs; element `(i, j)` has index `i * q.len() + j`.
    pub fn product(&self, other: &Poset) -> Self {
        let (p, q) = (self.len(), other.len());
        let n = p * q;
        let mut labels = Vec::with_capacity(n);
        for i in 0..p {
            for j in 0..q {
                labels.push(format!("({},{})", self.labels[i], other.labels[j]));
            }
        }
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(a / q, b / q) && other.leq(a % q, b % q);
            }
        }
        Self::with_order(labels, leq)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Length of the longest chain from `x` to `y`, if `x <= y`.
    pub fn height(&self, x: usize, y: usize) -> Option<usize> {
        self.height[x * self.len() + y]
    }

    pub fn interval(&self, lo: usize, hi: usize) -> Option<Interval> {
        (lo < self.len() && hi < self.len() && self.leq(lo, hi)).then_some(Interval { lo, hi })
    }

    /// Elements `z` with `lo <= z <= hi`, in index order.
    pub fn interval_members(&self, iv: Interval) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&z| self.leq(iv.lo, z) && self.leq(z, iv.hi))
    }

    /// All intervals, ordered by `(lo, hi)`.
    pub fn intervals(&self) -> Vec<Interval> {
        let n = self.len();
        (0..n)
            .flat_map(|lo| (0..n).map(move |hi| (lo, hi)))
            .filter(|&(lo, hi)| self.leq(lo, hi))
            .map(|(lo, hi)| Interval { lo, hi })
            .collect()
    }
}

/// Parses the poset text format: a line `elements: a b c …` followed by
/// cover relations `a < b`, one per line. `#` starts a comment.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut elements: Option<Vec<&str>> = None;
    let mut covers = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line_start = offset;
        offset += raw.len();
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match &elements {
            None => {
                let rest = line
                    .strip_prefix("elements:")
                    .ok_or_else(|| ParseError::new(line_start, "expected 'elements:' header"))?;
                elements = Some(rest.split_whitespace().collect());
            }
            Some(_) => {
                let (a, b) = line
                    .split_once('<')
                    .ok_or_else(|| ParseError::new(line_start, "expected 'a < b'"))?;
                let (a, b) = (a.trim(), b.trim());
                if a.is_empty() || b.is_empty() || b.contains('<') {
                    return Err(ParseError::new(line_start, "expected 'a < b'").into());
                }
                covers.push((a, b));
            }
        }
    }
    let elements =
        elements.ok_or_else(|| ParseError::new(text.len(), "missing 'elements:' header"))?;
    Poset::from_cover_relations(&elements, &covers)
}

/// An interval `[lo, hi]` of a poset, by element index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// The incidence coalgebra: `Δ[x,y] = Σ_{x<=z<=y} [x,z] ⊗ [z,y]`,
/// `ε[x,y] = [x = y]`, filtered by longest-chain length.
#[derive(Clone, Debug)]
pub struct IntervalCoalgebra {
    poset: Poset,
}

impl IntervalCoalgebra {
    pub fn new(poset: Poset) -> Self {
        Self { poset }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }
}

impl Coalgebra for IntervalCoalgebra {
    type Key = Interval;

    fn coproduct(&self, iv: &Interval) -> LinComb<Tensor<Interval, Interval>> {
        self.poset
            .interval_members(*iv)
            .map(|z| {
                (
                    Tensor(Interval { lo: iv.lo, hi: z }, Interval { lo: z, hi: iv.hi }),
                    Rational::one(),
                )
            })
            .collect()
    }

    fn counit(&self, iv: &Interval) -> Rational {
        if iv.lo == iv.hi {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    fn degree(&self, iv: &Interval) -> usize {
        self.poset
            .height(iv.lo, iv.hi)
            .expect("interval endpoints are comparable")
    }

    fn is_grouplike(&self, iv: &Interval) -> bool {
        iv.lo == iv.hi
    }

    fn basis_up_to(&self, max_degree: usize) -> Option<Vec<Interval>> {
        Some(
            self.poset
                .intervals()
                .into_iter()
                .filter(|iv| self.degree(iv) <= max_degree)
                .collect(),
        )
    }
}

pub fn interval_coalgebra(poset: Poset) -> Arc<IntervalCoalgebra> {
    Arc::new(IntervalCoalgebra::new(poset))
}

/// The Möbius function of a poset as a memoised map on its intervals.
pub fn poset_moebius(coalg: &Arc<IntervalCoalgebra>) -> LinMap<IntervalCoalgebra, Rationals> {
    moebius_invert_recursive(&zeta(coalg.clone(), Arc::new(Rationals)))
}

/// `μ(I)` computed by inverting ζ in the incidence coalgebra of `poset`.
pub fn moebius_poset(poset: &Poset, iv: Interval) -> Result<Rational> {
    poset_moebius(&interval_coalgebra(poset.clone())).eval(&iv)
}

/// Ω(n): number of prime factors counted with multiplicity.
pub fn big_omega(mut n: u64) -> usize {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The multiplicative monoid (ℕ^×) coalgebra restricted to `1..=bound`:
/// `Δ(n) = Σ_{ij=n} i ⊗ j`, filtered by Ω.
#[derive(Clone, Debug)]
pub struct DivisibilityCoalgebra {
    bound: u64,
    omega: Vec<u8>,
}

impl DivisibilityCoalgebra {
    pub fn new(bound: u64) -> Self {
        assert!(bound >= 1, "bound must be at least 1");
        let mut omega = vec![0u8; bound as usize + 1];
        let mut rest: Vec<u64> = (0..=bound).collect();
        for p in 2..=bound as usize {
            if rest[p] == p as u64 && omega[p] == 0 {
                // p is prime: strip every power of p from its multiples.
                let mut m = p;
                while m <= bound as usize {
                    while rest[m].is_multiple_of(p as u64) {
                        rest[m] /= p as u64;
                        omega[m] += 1;
                    }
                    m += p;
                }
            }
        }
        Self { bound, omega }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }
}

impl Coalgebra for DivisibilityCoalgebra {
    type Key = u64;

    fn coproduct(&self, &n: &u64) -> LinComb<Tensor<u64, u64>> {
        divisors(n)
            .into_iter()
            .map(|d| (Tensor(d, n / d), Rational::one()))
            .collect()
    }

    fn counit(&self, &n: &u64) -> Rational {
        if n == 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    fn degree(&self, &n: &u64) -> usize {
        match self.omega.get(n as usize) {
            Some(&w) => w as usize,
            None => big_omega(n),
        }
    }

    fn is_grouplike(&self, &n: &u64) -> bool {
        n == 1
    }

    fn basis_up_to(&self, max_degree: usize) -> Option<Vec<u64>> {
        Some(
            (1..=self.bound)
                .filter(|n| self.degree(n) <= max_degree)
                .collect(),
        )
    }
}

pub fn divisibility_coalgebra(bound: u64) -> Arc<DivisibilityCoalgebra> {
    Arc::new(DivisibilityCoalgebra::new(bound))
}

/// The additive monoid (ℕ, +): `Δ(n) = Σ_{i+j=n} i ⊗ j`, degree `n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct NatCoalgebra;

impl Coalgebra for NatCoalgebra {
    type Key = u64;

    fn coproduct(&self, &n: &u64) -> LinComb<Tensor<u64, u64>> {
        (0..=n)
            .map(|i| (Tensor(i, n - i), Rational::one()))
            .collect()
    }

    fn counit(&self, &n: &u64) -> Rational {
        if n == 0 {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    fn degree(&self, &n: &u64) -> usize {
        n as usize
    }

    fn is_grouplike(&self, &n: &u64) -> bool {
        n == 0
    }

    fn basis_up_to(&self, max_degree: usize) -> Option<Vec<u64>> {
        Some((0..=max_degree as u64).collect())
    }
}

/// Classical Möbius function: `(-1)^r` for a product of `r` distinct primes,
/// 0 if `n` has a square factor.
pub fn classical_mu(mut n: u64) -> i64 {
    assert!(n >= 1);
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// An arithmetic function tabulated on `1..=bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithFn {
    values: Vec<Rational>,
}

impl ArithFn {
    pub fn from_fn(bound: usize, mut f: impl FnMut(u64) -> Rational) -> Self {
        Self {
            values: (1..=bound as u64).map(&mut f).collect(),
        }
    }

    /// Tabulates a map on the divisibility coalgebra.
    pub fn from_map<A>(map: &LinMap<DivisibilityCoalgebra, A>, bound: usize) -> Result<Self>
    where
        A: crate::algebra::Algebra<Elem = Rational> + 'static,
    {
        let values = (1..=bound as u64)
            .map(|n| map.eval(&n))
            .collect::<Result<_>>()?;
        Ok(Self { values })
    }

    /// The Dirichlet unit `ε(n) = [n = 1]`.
    pub fn unit(bound: usize) -> Self {
        Self::from_fn(bound, |n| if n == 1 { rat(1) } else { rat(0) })
    }

    pub fn zeta(bound: usize) -> Self {
        Self::from_fn(bound, |_| rat(1))
    }

    /// The identity function `ι(n) = n`.
    pub fn identity(bound: usize) -> Self {
        Self::from_fn(bound, |n| rat(n as i64))
    }

    pub fn mu(bound: usize) -> Self {
        Self::from_fn(bound, |n| rat(classical_mu(n)))
    }

    pub fn bound(&self) -> usize {
        self.values.len()
    }

    /// Value at `n`, for `1 <= n <= bound`.
    pub fn get(&self, n: u64) -> Option<&Rational> {
        (n as usize).checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// `(f * g)(n) = Σ_{ij=n} f(i) g(j)` on `1..=N`.
pub fn dirichlet_convolve(f: &ArithFn, g: &ArithFn) -> Result<ArithFn> {
    if f.bound() != g.bound() {
        return Err(Error::BoundMismatch(f.bound(), g.bound()));
    }
    let n = f.bound();
    let mut out = vec![Rational::zero(); n];
    for i in 1..=n {
        if f.values[i - 1].is_zero() {
            continue;
        }
        for j in 1..=n / i {
            out[i * j - 1] += &f.values[i - 1] * &g.values[j - 1];
        }
    }
    Ok(ArithFn { values: out })
}

/// Euler's totient as `Σ_{d|n} d·μ(n/d)`.
pub fn totient_via_inversion(n: u64) -> u64 {
    assert!(n >= 1);
    let total: i64 = divisors(n)
        .into_iter()
        .map(|d| d as i64 * classical_mu(n / d))
        .sum();
    u64::try_from(total).expect("totient is positive")
}

/// Fixpoint-free permutations of an `n`-set by inclusion–exclusion over the
/// boolean lattice: `Σ_k (-1)^{n-k} C(n,k) k!`. Defined for `n <= 12`.
pub fn derangements_via_ie(n: u32) -> Result<u64> {
    if n > 12 {
        return Err(Error::OutOfRange(n.to_string()));
    }
    let mut total: i64 = 0;
    for k in 0..=n {
        let binom = binomial(n as u64, k as u64) as i64;
        let fact: i64 = (1..=k as i64).product();
        let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
        total += sign * binom * fact;
    }
    Ok(total as u64)
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Backward finite difference: `g(0) = f(0)`, `g(n) = f(n) - f(n-1)`.
pub fn finite_difference(f: &[Rational]) -> Vec<Rational> {
    f.iter()
        .enumerate()
        .map(|(i, x)| if i == 0 { x.clone() } else { x - &f[i - 1] })
        .collect()
}

/// Partial sums `g(n) = Σ_{k<=n} f(k)`; inverse of [`finite_difference`].
pub fn cumulative_sum(f: &[Rational]) -> Vec<Rational> {
    f.iter()
        .scan(Rational::zero(), |acc, x| {
            *acc += x;
            Some(acc.clone())
        })
        .collect()
}
