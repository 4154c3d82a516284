//! Independent oracles and seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use mobius_core::exact::{ratio, LaurentSeries, Rational};
use mobius_core::incidence::{Interval, Poset};
use mobius_core::trees::{CharacterAssignment, ForestBialgebra};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Totient by counting `k <= n` coprime to `n`.
pub fn totient_by_gcd_count(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

/// Fixpoint-free permutations of `0..n`, by enumerating all `n!` permutations.
pub fn derangements_brute_force(n: usize) -> u64 {
    fn go(perm: &mut Vec<usize>, used: &mut [bool], n: usize, count: &mut u64) {
        let i = perm.len();
        if i == n {
            *count += 1;
            return;
        }
        for v in 0..n {
            if !used[v] && v != i {
                used[v] = true;
                perm.push(v);
                go(perm, used, n, count);
                perm.pop();
                used[v] = false;
            }
        }
    }
    let mut count = 0;
    go(&mut Vec::new(), &mut vec![false; n], n, &mut count);
    count
}

/// `Σ_k (-1)^k · #{x = z₀ < z₁ < … < z_k = y}`, by depth-first enumeration of
/// strict chains.
pub fn chain_count_mu(p: &Poset, iv: Interval) -> i64 {
    fn walk(p: &Poset, at: usize, target: usize, len: usize, acc: &mut i64) {
        if at == target {
            *acc += if len.is_multiple_of(2) { 1 } else { -1 };
            return;
        }
        for z in 0..p.len() {
            if p.lt(at, z) && p.leq(z, target) {
                walk(p, z, target, len + 1, acc);
            }
        }
    }
    let mut acc = 0;
    walk(p, iv.lo, iv.hi, 0, &mut acc);
    acc
}

/// A poset on `0..n` from a random acyclic cover set: every pair is joined
/// upwards along a shuffled linear order with probability `p`.
pub fn random_poset(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Poset {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut covers = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen_bool(p) {
                covers.push((order[a], order[b]));
            }
        }
    }
    let labels = (0..n).map(|k| format!("p{k}")).collect();
    Poset::from_relations(labels, &covers).expect("edges follow a linear order")
}

/// Lexicographically least order matrix over all relabellings.
pub fn canonical_form(p: &Poset) -> Vec<bool> {
    let n = p.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    loop {
        let m: Vec<bool> = (0..n * n)
            .map(|i| p.leq(perm[i / n], perm[i % n]))
            .collect();
        if best.as_ref().is_none_or(|b| m < *b) {
            best = Some(m);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Isomorphism classes of `n`-element posets reached by `trials` random
/// cover sets, one representative each, in order of discovery.
pub fn poset_classes(seed: u64, n: usize, trials: usize) -> Vec<Poset> {
    let mut rng = rng(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for _ in 0..trials {
        let p = rng.gen_range(0.05..0.95);
        let poset = random_poset(&mut rng, n, p);
        if seen.insert(canonical_form(&poset)) {
            out.push(poset);
        }
    }
    out
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

/// A random series with support in `min..=max`, truncated at `trunc`.
pub fn random_series(rng: &mut ChaCha8Rng, min: i32, max: i32, trunc: i32) -> LaurentSeries {
    let mut terms = Vec::new();
    for o in min..=max {
        if rng.gen_bool(0.7) {
            terms.push((o, random_rational(rng)));
        }
    }
    LaurentSeries::from_terms(terms, trunc).expect("trunc >= -1")
}

/// Tree values with a nonzero simple pole and poles up to order `|t|`.
pub fn random_pole_assignment(
    b: &ForestBialgebra,
    max_degree: usize,
    seed: u64,
) -> CharacterAssignment {
    let mut rng = rng(seed);
    CharacterAssignment::from_fn(b, max_degree, |t| {
        let deg = t.nodes() as i32;
        let mut s = random_series(&mut rng, -deg, 2, 16);
        let lead = ratio(rng.gen_range(1..=5), rng.gen_range(1..=3));
        s = s.add(&LaurentSeries::monomial(lead, -1, 16));
        if !s.has_pole() {
            s = s.add(&LaurentSeries::monomial(ratio(1, 1), -1, 16));
        }
        s
    })
}

pub fn arc<T>(t: T) -> Arc<T> {
    Arc::new(t)
}
