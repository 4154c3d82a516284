//! Workloads shared by the criterion benchmarks.

use std::sync::Arc;

use mobius_core::algebra::Rationals;
use mobius_core::coalg::{moebius_invert_evenodd, moebius_invert_recursive, zeta, LinMap};
use mobius_core::exact::{rat, LaurentSeries};
use mobius_core::incidence::{divisibility_coalgebra, DivisibilityCoalgebra};
use mobius_core::renorm::{counterterm, CountertermMethod, Operator, PolePart};
use mobius_core::trees::{forest_bialgebra, toy_character, CharacterAssignment};
use mobius_core::{Coalgebra, LaurentRing};

/// Engine Möbius function on `1..=n`, summed so the work cannot be skipped.
pub fn divisor_mu_sum(n: u64, evenodd: bool) -> i64 {
    let z: LinMap<DivisibilityCoalgebra, Rationals> =
        zeta(divisibility_coalgebra(n), Arc::new(Rationals));
    let mu = if evenodd {
        moebius_invert_evenodd(&z)
    } else {
        moebius_invert_recursive(&z)
    };
    (1..=n)
        .map(|k| {
            let v = mu.eval(&k).expect("zeta is unital on 1");
            i64::try_from(v.to_integer()).expect("mu is -1, 0 or 1")
        })
        .sum()
}

/// Counter-terms of `t ↦ e^{-|t|}` on every forest up to `max_degree`;
/// returns the number of forests with a nonzero counter-term.
pub fn forest_counterterms(max_degree: usize, method: CountertermMethod) -> usize {
    let b = forest_bialgebra(max_degree);
    let assign = CharacterAssignment::from_fn(&b, max_degree, |t| {
        LaurentSeries::monomial(rat(1), -(t.nodes() as i32), 16)
    });
    let phi = toy_character(&b, assign, max_degree).expect("all trees assigned");
    let r: Operator<LaurentRing> = Arc::new(PolePart);
    let minus = counterterm(phi.map(), &r, method);
    b.basis_up_to(max_degree)
        .expect("finite basis")
        .iter()
        .filter(|f| !minus.eval(f).expect("within precision").is_zero())
        .count()
}
