mod common;

use std::sync::Arc;

use common::*;
use mobius_core::bialg::is_multiplicative;
use mobius_core::coalg::{convolve, moebius_invert_recursive, neutral_e};
use mobius_core::exact::{parse_laurent, rat, LaurentSeries};
use mobius_core::incidence::{divisibility_coalgebra, interval_coalgebra, NatCoalgebra, Poset};
use mobius_core::renorm::{
    atkinson_counterterm, birkhoff, bogoliubov_counterterm, convolve_r,
    counterterm_multiplicativity_check, CountertermMethod, Identity, Operator, PolePart,
    ScaledPolePart,
};
use mobius_core::trees::{forest_bialgebra, parse_forest, toy_character, CharacterAssignment};
use mobius_core::{Algebra, Coalgebra, Error, Forest, LaurentRing, LinMap};

fn s(text: &str) -> LaurentSeries {
    parse_laurent(text).unwrap()
}

fn forest(text: &str) -> Forest {
    parse_forest(text).unwrap()
}

fn pole() -> Operator<LaurentRing> {
    Arc::new(PolePart)
}

fn assignment(text: &str) -> CharacterAssignment {
    CharacterAssignment::parse(text).unwrap()
}

#[test]
fn one_step_counterterms() {
    let b = forest_bialgebra(2);
    let phi = toy_character(&b, assignment("[] : e^-1\n[[]] : e^-2\n"), 2).unwrap();
    let bog = bogoliubov_counterterm(phi.map(), &pole());
    let atk = atkinson_counterterm(phi.map(), &pole());
    for minus in [&bog, &atk] {
        assert_eq!(minus.eval(&Forest::empty()).unwrap(), s("1"));
        assert_eq!(minus.eval(&forest("[]")).unwrap(), s("-e^-1"));
        // −R(e^-2 + (−e^-1)(e^-1))
        assert!(minus.eval(&forest("[[]]")).unwrap().is_zero());
    }
    let pair = birkhoff(phi.map(), &pole(), CountertermMethod::Bogoliubov).unwrap();
    assert!(pair.plus.eval(&forest("[[]]")).unwrap().is_zero());
    assert_eq!(pair.bphz_value(&forest("[[]]")).unwrap(), rat(0));
    assert_eq!(pair.bphz_value(&forest("[]")).unwrap(), rat(0));
    assert_eq!(pair.bphz_value(&Forest::empty()).unwrap(), rat(1));
}

#[test]
fn shifted_generator() {
    let b = forest_bialgebra(2);
    let phi = toy_character(&b, assignment("[] : e^-1 + 1\n[[]] : e^-2\n"), 2).unwrap();
    let pair = birkhoff(phi.map(), &pole(), CountertermMethod::Bogoliubov).unwrap();
    assert_eq!(pair.minus.eval(&forest("[]")).unwrap(), s("-e^-1"));
    assert_eq!(pair.plus.eval(&forest("[]")).unwrap(), s("1"));
    assert_eq!(pair.bphz_value(&forest("[]")).unwrap(), rat(1));
    // φ₋(ℓ₂) = −R(e^-2 − e^-1(e^-1 + 1)) = e^-1
    assert_eq!(pair.minus.eval(&forest("[[]]")).unwrap(), s("e^-1"));
    // φ₊(ℓ₂) = e^-1 + e^-2 − e^-1(e^-1 + 1) = 0
    assert!(pair.plus.eval(&forest("[[]]")).unwrap().is_zero());
    assert_eq!(pair.plus.eval(&forest("[] []")).unwrap(), s("1"));
}

#[test]
fn homogeneous_characters_renormalise_to_zero() {
    // φ(x) = e^{-|x|} keeps every value homogeneous, so φ₊(x) ∈ Ker R forces
    // φ₊(x) = 0 for |x| > 0.
    let d = 6;
    let b = forest_bialgebra(d);
    let assign = CharacterAssignment::from_fn(&b, d, |t| {
        LaurentSeries::monomial(rat(1), -(t.nodes() as i32), 16)
    });
    let phi = toy_character(&b, assign, d).unwrap();
    let pair = birkhoff(phi.map(), &pole(), CountertermMethod::Atkinson).unwrap();
    for f in b.basis_up_to(d).unwrap() {
        let plus = pair.plus.eval(&f).unwrap();
        if f.is_empty() {
            assert_eq!(plus, s("1"));
        } else {
            assert!(plus.is_zero(), "{f}: {plus}");
        }
    }
    assert!(pair.minus.eval(&forest("[[][]]")).unwrap().is_zero());
    assert!(pair.minus.eval(&forest("[[[]]]")).unwrap().is_zero());
    assert_eq!(pair.minus.eval(&forest("[] []")).unwrap(), s("e^-2"));
}

#[test]
fn counterterm_constructions_agree_on_every_coalgebra() {
    let ring = Arc::new(LaurentRing::default());
    let mut rng = rng(77);
    let mut values = Vec::new();
    for _ in 0..16 {
        let v = random_series(&mut rng, -2, 2, 12).add(&s("e^-1"));
        values.push(v);
    }
    let values = Arc::new(values);

    let nat = Arc::new(NatCoalgebra);
    let v = values.clone();
    let phi = LinMap::from_fn(nat, ring.clone(), move |&n| {
        Ok(if n == 0 {
            s("1")
        } else {
            v[n as usize % v.len()].clone()
        })
    });
    let keys: Vec<u64> = (0..=6).collect();
    let bog = bogoliubov_counterterm(&phi, &pole());
    assert!(bog
        .agrees_with(&atkinson_counterterm(&phi, &pole()), &keys)
        .unwrap());

    let div = divisibility_coalgebra(720);
    let v = values.clone();
    let phi = LinMap::from_fn(div.clone(), ring.clone(), move |&n| {
        Ok(if n == 1 {
            s("1")
        } else {
            v[n as usize % v.len()].clone()
        })
    });
    let keys = div.basis_up_to(6).unwrap();
    let bog = bogoliubov_counterterm(&phi, &pole());
    assert!(bog
        .agrees_with(&atkinson_counterterm(&phi, &pole()), &keys)
        .unwrap());

    let lattice = interval_coalgebra(Poset::boolean_lattice(4));
    let v = values;
    let phi = LinMap::from_fn(lattice.clone(), ring, move |iv| {
        Ok(if iv.lo == iv.hi {
            s("1")
        } else {
            v[(iv.lo * 3 + iv.hi) % v.len()].clone()
        })
    });
    let keys = lattice.basis_up_to(6).unwrap();
    let bog = bogoliubov_counterterm(&phi, &pole());
    assert!(bog
        .agrees_with(&atkinson_counterterm(&phi, &pole()), &keys)
        .unwrap());
}

#[test]
fn rearranged_recursion() {
    let d = 4;
    let b = forest_bialgebra(d);
    let ring = LaurentRing::default();
    let r = pole();
    for seed in 0..3 {
        let phi = toy_character(&b, random_pole_assignment(&b, d, seed), d).unwrap();
        let psi = bogoliubov_counterterm(phi.map(), &r);
        let e = neutral_e(b.clone(), Arc::new(ring));
        let lhs = convolve_r(&psi, phi.map(), &r);
        for f in b.basis_up_to(d).unwrap() {
            let (p, u) = (psi.eval(&f).unwrap(), e.eval(&f).unwrap());
            let rp = r.apply(&ring, &p).unwrap();
            let got = lhs.eval(&f).unwrap();
            // ψ *_R φ = e − ψ + R(ψ) on every key.
            assert_eq!(got, ring.add(&ring.sub(&u, &p), &rp), "{f}");
            if b.counit(&f) == rat(0) {
                // ψ *_R φ = ψ + e − R(ψ) on the kernel of the counit.
                assert_eq!(got, ring.sub(&ring.add(&p, &u), &rp), "{f}");
            }
        }
    }
}

#[test]
fn counterterms_of_characters_are_characters() {
    let b = forest_bialgebra(4);
    let phi = toy_character(
        &b,
        CharacterAssignment::from_fn(&b, 4, |_| s("e^-1 + 1")),
        4,
    )
    .unwrap();
    assert!(counterterm_multiplicativity_check(&phi, &pole(), 4).unwrap());
    let id: Operator<LaurentRing> = Arc::new(Identity);
    assert!(counterterm_multiplicativity_check(&phi, &id, 4).unwrap());
    let doubled: Operator<LaurentRing> = Arc::new(ScaledPolePart(rat(2)));
    assert!(!counterterm_multiplicativity_check(&phi, &doubled, 4).unwrap());

    for seed in 10..13 {
        let phi = toy_character(&b, random_pole_assignment(&b, 4, seed), 4).unwrap();
        let pair = birkhoff(phi.map(), &pole(), CountertermMethod::Bogoliubov).unwrap();
        assert!(is_multiplicative(&pair.minus, 4).unwrap());
        assert!(is_multiplicative(&pair.plus, 4).unwrap());
    }
}

#[test]
fn contract_violations_are_reported() {
    let b = forest_bialgebra(2);
    let phi = toy_character(&b, assignment("[] : e^-1\n[[]] : e^-2\n"), 2).unwrap();
    let id: Operator<LaurentRing> = Arc::new(Identity);
    assert!(matches!(
        birkhoff(phi.map(), &id, CountertermMethod::Bogoliubov),
        Err(Error::UnitNotInKerR)
    ));
    let doubled: Operator<LaurentRing> = Arc::new(ScaledPolePart(rat(2)));
    let pair = birkhoff(phi.map(), &doubled, CountertermMethod::Bogoliubov).unwrap();
    assert!(matches!(
        pair.minus.eval(&forest("[]")),
        Err(Error::PostconditionViolated { .. })
    ));
    let raw = convolve(phi.map(), phi.map());
    assert!(matches!(
        raw.eval(&forest("[]")).unwrap().eval_at_zero(),
        Err(Error::PolePresent)
    ));
}

#[test]
fn missing_tree_values_are_rejected() {
    let b = forest_bialgebra(3);
    let err = toy_character(&b, assignment("[] : e^-1\n[[]] : e^-2\n"), 3).unwrap_err();
    assert!(matches!(err, Error::MissingAssignment(_)));
}

#[test]
fn identity_operator_gives_the_inverse() {
    let b = forest_bialgebra(4);
    let phi = toy_character(&b, random_pole_assignment(&b, 4, 5), 4).unwrap();
    let id: Operator<LaurentRing> = Arc::new(Identity);
    let keys = b.basis_up_to(4).unwrap();
    let psi = moebius_invert_recursive(phi.map());
    assert!(bogoliubov_counterterm(phi.map(), &id)
        .agrees_with(&psi, &keys)
        .unwrap());
    assert!(atkinson_counterterm(phi.map(), &id)
        .agrees_with(&psi, &keys)
        .unwrap());
}
