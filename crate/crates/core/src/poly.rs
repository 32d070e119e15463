//! Free associative polynomials over observable symbols.
//!
//! A [`FreePoly`] maps [`Word`]s (ordered products of `Φ` symbols) to
//! [`Coefficient`]s, which are commutative polynomials in the associator
//! scalars `μ²_{m_a m_b}` with exact rational coefficients. Both maps are
//! kept in canonical form: no zero entries, and iteration order equals the
//! canonical term order used by the text form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::term::{MuSymbol, ObservableSymbol};

/// Ordered product of observables. The empty word is the unit.
///
/// Words compare by length first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<ObservableSymbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<ObservableSymbol>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[ObservableSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            s.fmt(f)?;
        }
        Ok(())
    }
}

/// Commutative monomial in `μ²` symbols: sorted `(symbol, exponent)` pairs,
/// exponents positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(MuSymbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(mu: MuSymbol) -> Self {
        Monomial(vec![(mu, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(MuSymbol, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut acc: BTreeMap<MuSymbol, u32> = self.0.iter().copied().collect();
        for &(s, e) in &other.0 {
            *acc.entry(s).or_insert(0) += e;
        }
        Monomial(acc.into_iter().collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in commuting `μ²` symbols with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Coefficient(BTreeMap<Monomial, BigRational>);

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn mu(mu: MuSymbol) -> Self {
        Self::term(Monomial::var(mu), BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(m, c);
        }
        Coefficient(map)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.0.iter()
    }

    /// Constant part, i.e. the value with every `μ²` set to zero.
    pub fn constant_part(&self) -> BigRational {
        self.0.get(&Monomial::one()).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &rhs.0 {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }
}

/// Element of the free associative algebra over `Φ` symbols with
/// [`Coefficient`] scalars.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreePoly(BTreeMap<Word, Coefficient>);

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(Word::empty(), Coefficient::one())
    }

    pub fn monomial(word: Word, coeff: Coefficient) -> Self {
        let mut map = BTreeMap::new();
        if !coeff.is_zero() {
            map.insert(word, coeff);
        }
        FreePoly(map)
    }

    pub fn symbol(s: ObservableSymbol) -> Self {
        Self::monomial(Word::new(vec![s]), Coefficient::one())
    }

    pub fn scalar(c: Coefficient) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Coefficient {
        self.0.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.0.iter()
    }

    /// Number of `(word, μ-monomial)` terms in the text form.
    pub fn term_count(&self) -> usize {
        self.0.values().map(|c| c.0.len()).sum()
    }

    /// Sets every `μ²` symbol to zero.
    pub fn associative_limit(&self) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, c) in &self.0 {
            out.add_term(w.clone(), Coefficient::constant(c.constant_part()));
        }
        out
    }

    fn add_term(&mut self, w: Word, c: Coefficient) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.0.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

/// Coefficient-wise sum.
pub fn freepoly_add(p: &FreePoly, q: &FreePoly) -> FreePoly {
    let mut out = p.clone();
    for (w, c) in &q.0 {
        out.add_term(w.clone(), c.clone());
    }
    out
}

/// Bilinear extension of word concatenation.
pub fn freepoly_mul(p: &FreePoly, q: &FreePoly) -> FreePoly {
    let mut out = FreePoly::zero();
    for (wa, ca) in &p.0 {
        for (wb, cb) in &q.0 {
            out.add_term(wa.concat(wb), ca * cb);
        }
    }
    out
}

impl Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        freepoly_add(self, rhs)
    }
}

impl Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        freepoly_add(self, &-rhs)
    }
}

impl Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        freepoly_mul(self, rhs)
    }
}

impl Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        FreePoly(self.0.iter().map(|(w, c)| (w.clone(), -c)).collect())
    }
}

/// Canonical text form.
///
/// Terms are sorted by word length, then word, then `μ²` monomial, and
/// joined with ` + ` / ` - `. A term prints as `coeff * word`, where
/// `coeff` is the rational magnitude (omitted when it is 1 and something
/// else follows) and the `mu2[..]` factors joined by `*`, and `word` is the
/// `Phi` factors separated by single spaces. The zero polynomial prints as
/// `0`.
impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in &self.0 {
            for (m, r) in &c.0 {
                let negative = r.is_negative();
                match (first, negative) {
                    (true, true) => f.write_str("-")?,
                    (true, false) => {}
                    (false, true) => f.write_str(" - ")?,
                    (false, false) => f.write_str(" + ")?,
                }
                first = false;

                let mag = r.abs();
                let mut scalar = Vec::new();
                if !mag.is_one() || (m.is_one() && w.is_empty()) {
                    scalar.push(mag.to_string());
                }
                if !m.is_one() {
                    scalar.push(m.to_string());
                }
                let scalar = scalar.join("*");
                match (scalar.is_empty(), w.is_empty()) {
                    (false, false) => write!(f, "{scalar} * {w}")?,
                    (false, true) => f.write_str(&scalar)?,
                    (true, _) => write!(f, "{w}")?,
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
