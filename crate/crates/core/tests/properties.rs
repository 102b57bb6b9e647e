mod common;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use common::{q, random_chain, symbolic_chain};
use sgmc::algebra::{Monomial, Point, Polynomial, RationalFunction, Q};
use sgmc::loopkleene::{concat, kleene_multiset, kleene_to_rf, letter, star, union, zimin_unionless, Kleene};
use sgmc::markov::{apply_matrix, stationary_oracle, transition_matrix, tv_distance};
use sgmc::mixing::{expected_tau, hitting_functions, tail_table};
use sgmc::pipeline::{random_interior_points, stationary, Options};
use sgmc::semigroup::{FiniteSemigroup, Transformation};
use sgmc::Error;

fn small_q() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((0usize..3, 0u32..3), 0..3).prop_map(Monomial::from_pairs)
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(), small_q()), 0..4).prop_map(Polynomial::from_terms)
}

/// Polynomials with constant term 1, invertible as power series.
fn unit_polynomial() -> impl Strategy<Value = Polynomial> {
    polynomial().prop_map(|p| {
        let c = p.constant_term();
        &(&p - &Polynomial::constant(c)) + &Polynomial::one()
    })
}

fn point() -> impl Strategy<Value = Point> {
    prop::collection::vec((1i64..=7, 2i64..=9), 3).prop_map(|v| v.into_iter().enumerate().map(|(i, (n, d))| (i, q(n, d * 3))).collect())
}

fn transformation(n: usize) -> impl Strategy<Value = Transformation> {
    prop::collection::vec(0..n, n).prop_map(|v| Transformation::new(v).unwrap())
}

/// Expressions over three letters whose starred bodies never contain the empty word.
fn kleene() -> impl Strategy<Value = Kleene> {
    let leaf = (0usize..3).prop_map(letter);
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(concat),
            prop::collection::vec((0usize..3).prop_map(letter), 1..3).prop_map(|ls| star(union(ls))),
            inner.prop_map(|e| star(concat(vec![letter(0), e]))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn rational_field_identities(a in polynomial(), u in unit_polynomial(), v in unit_polynomial()) {
        let f = RationalFunction::new(a.clone(), u.clone()).unwrap();
        let g = RationalFunction::new(Polynomial::one(), v.clone()).unwrap();
        prop_assert!((&(&f + &g) - &g).equals(&f));
        prop_assert!((&f * &g).div(&g).unwrap().equals(&f));
        prop_assert!((&f * &RationalFunction::from_polynomial(u)).equals(&RationalFunction::from_polynomial(a)));
    }

    #[test]
    fn rational_eval_is_a_homomorphism(a in polynomial(), u in unit_polynomial(), b in polynomial(), p in point()) {
        let f = RationalFunction::new(a, u).unwrap();
        let g = RationalFunction::from_polynomial(b);
        if let (Ok(fv), Ok(gv)) = (f.eval(&p), g.eval(&p)) {
            prop_assert_eq!((&f + &g).eval(&p).unwrap(), &fv + &gv);
            prop_assert_eq!((&f * &g).eval(&p).unwrap(), fv * gv);
        }
    }

    #[test]
    fn series_truncation_is_multiplicative(a in polynomial(), u in unit_polynomial(), bound in 1u32..6) {
        let f = RationalFunction::new(a.clone(), u.clone()).unwrap();
        let s = f.series(bound).unwrap();
        prop_assert!(s.coefficients().terms().all(|(m, _)| m.degree() < bound));
        // f · u = a below the bound
        prop_assert_eq!((s.coefficients() * &u).truncate(bound), a.truncate(bound));
    }

    #[test]
    fn composition_is_associative(s in transformation(4), t in transformation(4), u in transformation(4)) {
        prop_assert_eq!(s.compose(&t).compose(&u), s.compose(&t.compose(&u)));
        for w in 0..4 {
            prop_assert_eq!(s.compose(&t).apply(w), s.apply(t.apply(w)));
        }
    }

    #[test]
    fn generated_semigroup_is_closed(a in transformation(3), b in transformation(3)) {
        let s = FiniteSemigroup::generate(&[("a".into(), a), ("b".into(), b)], 1000).unwrap();
        for x in 0..s.len() {
            for y in 0..s.len() {
                for z in 0..s.len() {
                    prop_assert_eq!(s.mul(s.mul(x, y), z), s.mul(x, s.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn zimin_preserves_language(e in kleene()) {
        let z = zimin_unionless(&e);
        prop_assert!(!z.has_union());
        prop_assert_eq!(kleene_multiset(&e, 7).unwrap().into_keys().collect::<Vec<_>>(),
                        kleene_multiset(&z, 7).unwrap().into_keys().collect::<Vec<_>>());
    }

    #[test]
    fn kleene_series_counts_paths(e in kleene()) {
        let words = kleene_multiset(&e, 6).unwrap();
        let f = kleene_to_rf(&e, &[0, 1, 2]);
        // ambiguous expressions (repeated letters in a union) are rejected or counted with multiplicity
        if let Ok(f) = f {
            let expected = Polynomial::from_terms(words.iter().map(|(w, &c)| {
                let m = w.iter().fold(Monomial::one(), |m, &a| m.mul(&Monomial::var(a)));
                (m, Q::from_integer(c.into()))
            }));
            prop_assert_eq!(f.series(7).unwrap().coefficients().clone(), expected);
        }
    }

    #[test]
    fn tv_distance_is_a_metric(
        u in prop::collection::vec(0i64..10, 4),
        v in prop::collection::vec(0i64..10, 4),
        w in prop::collection::vec(0i64..10, 4),
    ) {
        let norm = |x: &[i64]| {
            let t: i64 = x.iter().sum::<i64>().max(1);
            x.iter().map(|&k| q(k, t)).collect::<Vec<Q>>()
        };
        let (u, v, w) = (norm(&u), norm(&v), norm(&w));
        prop_assert_eq!(tv_distance(&u, &v), tv_distance(&v, &u));
        prop_assert!(tv_distance(&u, &u) == Q::from_integer(0.into()));
        prop_assert!(tv_distance(&u, &w) <= tv_distance(&u, &v) + tv_distance(&v, &w));
        prop_assert!(tv_distance(&u, &v) <= Q::from_integer(1.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_is_fixed_by_the_chain(seed in 0u64..10_000) {
        let spec = random_chain(seed);
        let p = &random_interior_points(spec.generators.len(), 1, seed)[0];
        let t = transition_matrix(&spec).eval(p).unwrap();
        if let Ok(pi) = stationary_oracle(&t) {
            prop_assert_eq!(apply_matrix(&t, &pi), pi.clone());
            prop_assert_eq!(pi.iter().fold(Q::from_integer(0.into()), |a, b| a + b), Q::from_integer(1.into()));
        }
    }

    #[test]
    fn hitting_tail_is_monotone(seed in 0u64..10_000) {
        let spec = random_chain(seed);
        let opts = Options { max_kr: 2_000, max_mc: 5_000, ..Options::default() };
        let s = spec.semigroup(opts.max_elements).unwrap();
        let r = match stationary(&s, &opts) {
            Err(Error::CapExceeded { .. }) => return Err(TestCaseError::reject("expansion over cap")),
            other => other.unwrap(),
        };
        let p = &random_interior_points(r.generator_count(), 1, seed)[0];
        let h = hitting_functions(&r, &opts).unwrap();
        let tail = tail_table(&h.total, p, 20).unwrap();
        prop_assert_eq!(&tail[0], &Q::from_integer(1.into()));
        prop_assert!(tail.windows(2).all(|w| w[0] >= w[1]));
        // Σ_{t ≥ 1} Pr(τ ≥ t) = E[τ]; partial sums stay below it
        let e = expected_tau(&h.total).unwrap().eval(p).unwrap();
        let partial = tail[1..].iter().fold(Q::from_integer(0.into()), |a, b| a + b);
        prop_assert!(partial <= e);
    }
}

#[test]
fn constant_generator_is_its_own_ideal() {
    // a single constant map: K(S) is that map, hit after one step
    let spec = symbolic_chain(3, &[vec![1, 1, 1]]);
    let opts = Options::default();
    let s = spec.semigroup(opts.max_elements).unwrap();
    let r = stationary(&s, &opts).unwrap();
    assert_eq!(r.per_element.len(), 1);
    assert!(r.per_element[0].psi.equals(&RationalFunction::var(0)));
}
