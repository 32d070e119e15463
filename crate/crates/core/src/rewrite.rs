//! Associator rewriting to observable normal form.
//!
//! A quartet `(((f₁ b₁) f₂) b₂)` is rewritten as `Φ_{m₁}Φ_{m₂} − μ²_{m₁m₂}`:
//! re-bracketing into `(f₁b₁)(f₂b₂)` costs one associator, whose value is
//! the central scalar `−μ²_{m₁m₂}`. A product of quartets and bare `Φ`
//! leaves is then the ordered product of the reduced factors in the free
//! algebra.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{freepoly_mul, Coefficient, FreePoly, Word};
use crate::term::{match_quartet, IndexPair, Leaf, MuSymbol, ObservableSymbol, PointLabel, QuartetMatch, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    /// A constituent `f`/`b` leaf that is not part of a recognizable quartet.
    #[error("constituent `{leaf}` is not part of a quartet (((f b) f) b)")]
    NotReducible { leaf: String },
}

impl RewriteError {
    pub fn kind(&self) -> &'static str {
        match self {
            RewriteError::NotReducible { .. } => "NotReducible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value assigned to {symbol}")]
    MissingAssignment { symbol: String },
    #[error("value for {symbol} is not finite")]
    NonFinite { symbol: String },
}

impl EvalError {
    pub fn kind(&self) -> &'static str {
        match self {
            EvalError::MissingAssignment { .. } => "MissingAssignment",
            EvalError::NonFinite { .. } => "NonFinite",
        }
    }
}

/// `Φ_{m₁}(p₁)Φ_{m₂}(p₂) − μ²_{m₁m₂}`.
pub fn reduce_quartet(q: &QuartetMatch) -> FreePoly {
    let word = Word::new(vec![
        ObservableSymbol::new(q.m1, q.p1.clone()),
        ObservableSymbol::new(q.m2, q.p2.clone()),
    ]);
    let observable = FreePoly::monomial(word, Coefficient::one());
    let associator = FreePoly::scalar(-&Coefficient::mu(MuSymbol::new(q.m1, q.m2)));
    &observable + &associator
}

/// Rewrites `t` to observable normal form.
///
/// Quartets are matched top-down, so each one found is maximal. Bare `Φ`
/// leaves become single-letter words. The factors are multiplied in
/// left-to-right leaf order.
pub fn normalize(t: &Term) -> Result<FreePoly, RewriteError> {
    let mut factors = Vec::new();
    collect_factors(t, &mut factors)?;
    Ok(factors
        .iter()
        .fold(FreePoly::one(), |acc, f| freepoly_mul(&acc, f)))
}

fn collect_factors(t: &Term, out: &mut Vec<FreePoly>) -> Result<(), RewriteError> {
    if let Some(q) = match_quartet(t) {
        out.push(reduce_quartet(&q));
        return Ok(());
    }
    match t {
        Term::Leaf(Leaf::Observable(o)) => {
            out.push(FreePoly::symbol(o.clone()));
            Ok(())
        }
        Term::Leaf(leaf @ Leaf::Generator(_)) => Err(RewriteError::NotReducible {
            leaf: leaf.to_string(),
        }),
        Term::Node(l, r) => {
            collect_factors(l, out)?;
            collect_factors(r, out)
        }
    }
}

/// Numeric values for a classical evaluation of a [`FreePoly`].
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    pub phi: HashMap<(IndexPair, PointLabel), f64>,
    pub mu: HashMap<(IndexPair, IndexPair), f64>,
}

impl Assignment {
    pub fn with_phi(mut self, m: IndexPair, point: PointLabel, value: f64) -> Self {
        self.phi.insert((m, point), value);
        self
    }

    pub fn with_mu(mut self, left: IndexPair, right: IndexPair, value: f64) -> Self {
        self.mu.insert((left, right), value);
        self
    }
}

/// Substitutes commuting real values for every symbol and sums.
///
/// The sum is formed exactly over the rationals (every finite `f64` is a
/// dyadic rational) and rounded once at the end, so the result is the
/// nearest double to the true value of the polynomial at the given point.
pub fn evaluate_classical(p: &FreePoly, values: &Assignment) -> Result<f64, EvalError> {
    let mut total = BigRational::zero();
    for (word, coeff) in p.terms() {
        let mut word_value = BigRational::from_integer(1.into());
        for s in word.symbols() {
            let v = values
                .phi
                .get(&(s.m, s.point.clone()))
                .ok_or_else(|| EvalError::MissingAssignment { symbol: s.to_string() })?;
            word_value *= exact(*v, || s.to_string())?;
        }
        for (mono, c) in coeff.terms() {
            let mut term = c * &word_value;
            for (mu, e) in mono.factors() {
                let v = values
                    .mu
                    .get(&(mu.left, mu.right))
                    .ok_or_else(|| EvalError::MissingAssignment { symbol: mu.to_string() })?;
                let v = exact(*v, || mu.to_string())?;
                for _ in 0..*e {
                    term *= &v;
                }
            }
            total += term;
        }
    }
    Ok(total.to_f64().unwrap_or(f64::NAN))
}

fn exact(v: f64, name: impl FnOnce() -> String) -> Result<BigRational, EvalError> {
    BigRational::from_float(v).ok_or_else(|| EvalError::NonFinite { symbol: name() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn pair(a: u32, b: u32) -> IndexPair {
        IndexPair::new(a, b).unwrap()
    }

    fn label(s: &str) -> PointLabel {
        PointLabel::new(s).unwrap()
    }

    const EQ_3_10: &str = "((((f[1,1](x1) b[1,1](x1)) f[2,2](x2)) b[2,2](x2)) \
                           (((f[3,3](x3) b[3,3](x3)) f[4,4](x4)) b[4,4](x4)))";

    const SAME_POINT: &str = "((((f[1,1](x) b[1,1](x)) f[2,1](x)) b[2,1](x)) \
                              (((f[3,1](x) b[3,1](x)) f[4,1](x)) b[4,1](x)))";

    #[test]
    fn quartet_binomial() {
        let q = match_quartet(&parse("(((f[1,1](x1) b[1,1](x1)) f[2,2](x2)) b[2,2](x2))").unwrap())
            .unwrap();
        assert_eq!(
            reduce_quartet(&q).to_string(),
            "-mu2[(1,1),(2,2)] + Phi[1,1](x1) Phi[2,2](x2)"
        );
        assert_eq!(
            reduce_quartet(&q).associative_limit().to_string(),
            "Phi[1,1](x1) Phi[2,2](x2)"
        );
    }

    #[test]
    fn same_point_quartet_squares() {
        let q = QuartetMatch {
            m1: pair(2, 3),
            p1: label("x"),
            m2: pair(2, 3),
            p2: label("x"),
        };
        assert_eq!(
            reduce_quartet(&q).to_string(),
            "-mu2[(2,3),(2,3)] + Phi[2,3](x) Phi[2,3](x)"
        );
    }

    #[test]
    fn two_quartets_expand() {
        let p = normalize(&parse(EQ_3_10).unwrap()).unwrap();
        assert_eq!(
            p.to_string(),
            "mu2[(1,1),(2,2)]*mu2[(3,3),(4,4)] \
             - mu2[(3,3),(4,4)] * Phi[1,1](x1) Phi[2,2](x2) \
             - mu2[(1,1),(2,2)] * Phi[3,3](x3) Phi[4,4](x4) \
             + Phi[1,1](x1) Phi[2,2](x2) Phi[3,3](x3) Phi[4,4](x4)"
        );
    }

    #[test]
    fn same_point_collapse() {
        let p = normalize(&parse(SAME_POINT).unwrap()).unwrap();
        assert_eq!(
            p.to_string(),
            "mu2[(1,1),(1,1)]^2 \
             - 2*mu2[(1,1),(1,1)] * Phi[1,1](x) Phi[1,1](x) \
             + Phi[1,1](x) Phi[1,1](x) Phi[1,1](x) Phi[1,1](x)"
        );
    }

    #[test]
    fn single_quartet_is_reduce_quartet() {
        let t = parse("(((f[1,5](y) b[1,6](y)) f[1,7](z)) b[1,8](z))").unwrap();
        assert_eq!(
            normalize(&t).unwrap(),
            reduce_quartet(&match_quartet(&t).unwrap())
        );
    }

    #[test]
    fn bare_observables_mix_with_quartets() {
        let t = parse("(Phi[9,9](w) (((f[1,1](x) b[1,1](x)) f[1,2](y)) b[1,2](y)))").unwrap();
        assert_eq!(
            normalize(&t).unwrap().to_string(),
            "-mu2[(1,1),(2,2)] * Phi[9,9](w) + Phi[9,9](w) Phi[1,1](x) Phi[2,2](y)"
        );
    }

    #[test]
    fn stray_constituent_is_not_reducible() {
        let err = normalize(&parse("(f[1,1](x1) b[1,1](x1))").unwrap()).unwrap_err();
        assert_eq!(err, RewriteError::NotReducible { leaf: "f[1,1](x1)".into() });
        assert_eq!(err.kind(), "NotReducible");

        // quartet shape but mismatched color
        let err = normalize(&parse("(((f[1,1](x) b[2,1](x)) f[2,2](y)) b[2,2](y))").unwrap());
        assert!(err.is_err());
    }

    #[test]
    fn classical_values() {
        let p = normalize(&parse(SAME_POINT).unwrap()).unwrap();
        let m = pair(1, 1);
        let at = |phi: f64, mu2: f64| {
            Assignment::default()
                .with_phi(m, label("x"), phi)
                .with_mu(m, m, mu2)
        };
        // Φ = μ with μ² = 2.25
        assert_eq!(evaluate_classical(&p, &at(1.5, 2.25)).unwrap(), 0.0);
        assert_eq!(evaluate_classical(&p, &at(0.0, 1.0)).unwrap(), 1.0);

        let q = normalize(&parse(EQ_3_10).unwrap()).unwrap();
        let mut all_one = Assignment::default();
        for a in 1..=4 {
            all_one = all_one.with_phi(pair(a, a), label(&format!("x{a}")), 1.0);
        }
        all_one = all_one
            .with_mu(pair(1, 1), pair(2, 2), 1.0)
            .with_mu(pair(3, 3), pair(4, 4), 1.0);
        assert_eq!(evaluate_classical(&q, &all_one).unwrap(), 0.0);
    }

    #[test]
    fn missing_assignment_names_symbol() {
        let p = normalize(&parse(SAME_POINT).unwrap()).unwrap();
        let only_phi = Assignment::default().with_phi(pair(1, 1), label("x"), 1.0);
        let err = evaluate_classical(&p, &only_phi).unwrap_err();
        assert_eq!(
            err,
            EvalError::MissingAssignment { symbol: "mu2[(1,1),(1,1)]".into() }
        );
        let err = evaluate_classical(&p, &Assignment::default()).unwrap_err();
        assert_eq!(err.kind(), "MissingAssignment");
    }
}
