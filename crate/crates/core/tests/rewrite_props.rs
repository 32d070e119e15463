use std::collections::BTreeMap;

use nonassoc::poly::{freepoly_add, freepoly_mul, Coefficient, FreePoly, Word};
use nonassoc::rewrite::{normalize, reduce_quartet};
use nonassoc::term::{match_quartet, parse, Generator, IndexPair, MuSymbol, ObservableSymbol, Term};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Reference representation: (word as symbol strings, sorted mu factors)
/// to an integer coefficient. Built from strings only, so it shares no
/// code with the library's polynomial type.
type Reference = BTreeMap<(Vec<String>, Vec<String>), i64>;

fn ref_mul(a: &Reference, b: &Reference) -> Reference {
    let mut out = Reference::new();
    for ((wa, ma), ca) in a {
        for ((wb, mb), cb) in b {
            let w: Vec<String> = wa.iter().chain(wb).cloned().collect();
            let mut m: Vec<String> = ma.iter().chain(mb).cloned().collect();
            m.sort();
            *out.entry((w, m)).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn binomial(m1: (u32, u32), p1: &str, m2: (u32, u32), p2: &str) -> Reference {
    let phi = |m: (u32, u32), p: &str| format!("Phi[{},{}]({p})", m.0, m.1);
    let mu = format!("mu2[({},{}),({},{})]", m1.0, m1.1, m2.0, m2.1);
    Reference::from([
        ((vec![phi(m1, p1), phi(m2, p2)], vec![]), 1),
        ((vec![], vec![mu]), -1),
    ])
}

fn to_reference(p: &FreePoly) -> Reference {
    let mut out = Reference::new();
    for (w, c) in p.terms() {
        let word: Vec<String> = w.symbols().iter().map(|s| s.to_string()).collect();
        for (mono, r) in c.terms() {
            assert!(r.is_integer(), "non-integer coefficient {r}");
            let mut m = Vec::new();
            for (mu, e) in mono.factors() {
                for _ in 0..*e {
                    m.push(mu.to_string());
                }
            }
            m.sort();
            out.insert((word.clone(), m), r.to_integer().to_i64().unwrap());
        }
    }
    out
}

fn quartet_text(m1: (u32, u32), c1: u32, p1: &str, m2: (u32, u32), c2: u32, p2: &str) -> String {
    format!(
        "(((f[{c1},{}]({p1}) b[{c1},{}]({p1})) f[{c2},{}]({p2})) b[{c2},{}]({p2}))",
        m1.0, m1.1, m2.0, m2.1
    )
}

fn pair() -> impl Strategy<Value = (u32, u32)> {
    (1u32..5, 1u32..5)
}

fn pt() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["x", "y", "x1", "x2"])
}

proptest! {
    #[test]
    fn product_of_quartets_factorizes(
        a in (pair(), 1u32..4, pt(), pair(), 1u32..4, pt()),
        b in (pair(), 1u32..4, pt(), pair(), 1u32..4, pt()),
    ) {
        let qa = quartet_text(a.0, a.1, a.2, a.3, a.4, a.5);
        let qb = quartet_text(b.0, b.1, b.2, b.3, b.4, b.5);
        let ta = parse(&qa).unwrap();
        let tb = parse(&qb).unwrap();
        let whole = normalize(&Term::product(ta.clone(), tb.clone())).unwrap();

        let expected = freepoly_mul(
            &reduce_quartet(&match_quartet(&ta).unwrap()),
            &reduce_quartet(&match_quartet(&tb).unwrap()),
        );
        prop_assert_eq!(&whole, &expected);

        let oracle = ref_mul(&binomial(a.0, a.2, a.3, a.5), &binomial(b.0, b.2, b.3, b.5));
        prop_assert_eq!(to_reference(&whole), oracle);
    }

    #[test]
    fn same_point_collapse_for_every_index(alpha in 1u32..9, beta in 1u32..9, color in 1u32..9) {
        let q = quartet_text((alpha, beta), color, "x", (alpha, beta), color, "x");
        let t = parse(&format!("({q} {q})")).unwrap();
        let got = to_reference(&normalize(&t).unwrap());
        let phi = format!("Phi[{alpha},{beta}](x)");
        let mu = format!("mu2[({alpha},{beta}),({alpha},{beta})]");
        let oracle = Reference::from([
            ((vec![phi.clone(); 4], vec![]), 1),
            ((vec![phi.clone(); 2], vec![mu.clone()]), -2),
            ((vec![], vec![mu.clone(), mu]), 1),
        ]);
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn associative_limit_is_the_bare_word(
        a in (pair(), 1u32..4, pt(), pair(), 1u32..4, pt()),
        b in (pair(), 1u32..4, pt(), pair(), 1u32..4, pt()),
    ) {
        let t = parse(&format!(
            "({} {})",
            quartet_text(a.0, a.1, a.2, a.3, a.4, a.5),
            quartet_text(b.0, b.1, b.2, b.3, b.4, b.5)
        ))
        .unwrap();
        let lim = normalize(&t).unwrap().associative_limit();
        let word = Word::new(vec![
            ObservableSymbol::from_parts(a.0.0, a.0.1, a.2).unwrap(),
            ObservableSymbol::from_parts(a.3.0, a.3.1, a.5).unwrap(),
            ObservableSymbol::from_parts(b.0.0, b.0.1, b.2).unwrap(),
            ObservableSymbol::from_parts(b.3.0, b.3.1, b.5).unwrap(),
        ]);
        prop_assert_eq!(lim, FreePoly::monomial(word, Coefficient::one()));
    }

    #[test]
    fn normalize_is_deterministic(a in (pair(), 1u32..4, pt(), pair(), 1u32..4, pt())) {
        let text = quartet_text(a.0, a.1, a.2, a.3, a.4, a.5);
        let t1 = parse(&text).unwrap();
        let t2 = parse(&text).unwrap();
        let (p1, p2) = (normalize(&t1).unwrap(), normalize(&t2).unwrap());
        prop_assert_eq!(p1.to_string(), p2.to_string());
        prop_assert_eq!(p1, p2);
    }
}

fn small_poly() -> impl Strategy<Value = FreePoly> {
    let term = (
        prop::collection::vec((1u32..3, prop::sample::select(vec!["x", "y"])), 0..3),
        prop::collection::vec((1u32..3, 1u32..3), 0..2),
        -3i64..4,
    )
        .prop_map(|(syms, mus, c)| {
            let word = Word::new(
                syms.into_iter()
                    .map(|(a, p)| ObservableSymbol::from_parts(a, a, p).unwrap())
                    .collect(),
            );
            let mut coeff = Coefficient::integer(c);
            for (l, r) in mus {
                let mu = MuSymbol::new(IndexPair::new(l, l).unwrap(), IndexPair::new(r, r).unwrap());
                coeff = &coeff * &Coefficient::mu(mu);
            }
            FreePoly::monomial(word, coeff)
        });
    prop::collection::vec(term, 0..4).prop_map(|ts| ts.iter().fold(FreePoly::zero(), |acc, t| freepoly_add(&acc, t)))
}

proptest! {
    #[test]
    fn multiplication_is_associative(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(
            freepoly_mul(&freepoly_mul(&p, &q), &r),
            freepoly_mul(&p, &freepoly_mul(&q, &r))
        );
    }

    #[test]
    fn multiplication_distributes(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(
            freepoly_mul(&p, &freepoly_add(&q, &r)),
            freepoly_add(&freepoly_mul(&p, &q), &freepoly_mul(&p, &r))
        );
        prop_assert_eq!(
            freepoly_mul(&freepoly_add(&q, &r), &p),
            freepoly_add(&freepoly_mul(&q, &p), &freepoly_mul(&r, &p))
        );
    }

    #[test]
    fn one_and_zero(p in small_poly()) {
        prop_assert_eq!(freepoly_mul(&p, &FreePoly::one()), p.clone());
        prop_assert_eq!(freepoly_mul(&FreePoly::one(), &p), p.clone());
        prop_assert!(freepoly_mul(&p, &FreePoly::zero()).is_zero());
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn word_concat_is_monoid_product(p in small_poly(), q in small_poly()) {
        for (wp, _) in p.terms() {
            for (wq, _) in q.terms() {
                let w = wp.concat(wq);
                prop_assert_eq!(w.len(), wp.len() + wq.len());
                prop_assert_eq!(&w.symbols()[..wp.len()], wp.symbols());
                prop_assert_eq!(w.concat(&Word::empty()), w.clone());
            }
        }
    }
}

#[test]
fn rational_coefficients_survive() {
    let half = Coefficient::constant(BigRational::new(1.into(), 2.into()));
    let x = FreePoly::symbol(ObservableSymbol::from_parts(1, 1, "x").unwrap());
    let p = freepoly_mul(&FreePoly::scalar(half), &x);
    assert_eq!(p.to_string(), "1/2 * Phi[1,1](x)");
}

#[test]
fn generator_quartet_constructor_matches_parser() {
    let t = Term::quartet(
        Generator::f(1, 1, "x1").unwrap(),
        Generator::b(1, 1, "x1").unwrap(),
        Generator::f(2, 2, "x2").unwrap(),
        Generator::b(2, 2, "x2").unwrap(),
    );
    assert_eq!(t, parse("(((f[1,1](x1) b[1,1](x1)) f[2,2](x2)) b[2,2](x2))").unwrap());
}
