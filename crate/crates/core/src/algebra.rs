//! Cayley–Dickson algebras and identity certification.
//!
//! Level `k` has dimension `2^k`: reals, complexes, quaternions, octonions,
//! sedenions, and so on. The doubling product is
//!
//! ```text
//! (a, b)(c, d) = (ac − d̄b, da + bc̄),   conj(a, b) = (ā, −b)
//! ```
//!
//! Multilinear identities are certified on basis tuples, which suffices by
//! multilinearity. Jordan is certified through its full polarization, which
//! is multilinear as well. Power-associativity is not multilinear in any
//! cheap form and is checked on random exact-rational elements from a
//! recorded seed.

use std::fmt;
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Exhaustive basis sweeps cost `O(8^k)`; beyond this level they are refused.
pub const MAX_EXHAUSTIVE_LEVEL: u32 = 5;
/// Largest level accepted by randomized checks.
pub const MAX_RANDOMIZED_LEVEL: u32 = 6;
/// Largest power accepted by the power-associativity check.
pub const MAX_POWER: u32 = 8;

pub const DEFAULT_TRIALS: u32 = 16;
pub const DEFAULT_SEED: u64 = 0x5eed_cd01;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands have levels {left} and {right}")]
    LevelMismatch { left: u32, right: u32 },
    #[error("coordinate vector of length {0} is not a power of two")]
    InvalidLength(usize),
    #[error("level {level} exceeds the maximum {max} for this check")]
    UnsupportedLevel { level: u32, max: u32 },
    #[error("power {0} outside 1..={MAX_POWER}")]
    UnsupportedPower(u32),
}

impl AlgebraError {
    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraError::LevelMismatch { .. } => "LevelMismatch",
            AlgebraError::InvalidLength(_) => "InvalidLength",
            AlgebraError::UnsupportedLevel { .. } => "UnsupportedLevel",
            AlgebraError::UnsupportedPower(_) => "UnsupportedPower",
        }
    }
}

/// Coefficient field for [`CDElement`].
pub trait Scalar:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = T> + Sub<Output = T> + Send + Sync
{
}

/// Element of the level-`k` Cayley–Dickson algebra in the standard basis
/// `e0 = 1, e1, …, e_{2^k − 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CDElement<T> {
    coords: Vec<T>,
}

impl<T: Scalar> CDElement<T> {
    pub fn new(coords: Vec<T>) -> Result<Self, AlgebraError> {
        if coords.is_empty() || !coords.len().is_power_of_two() {
            return Err(AlgebraError::InvalidLength(coords.len()));
        }
        Ok(CDElement { coords })
    }

    pub fn zero(level: u32) -> Self {
        CDElement {
            coords: vec![T::zero(); 1 << level],
        }
    }

    pub fn one(level: u32) -> Self {
        Self::basis(level, 0)
    }

    pub fn basis(level: u32, i: usize) -> Self {
        let mut e = Self::zero(level);
        e.coords[i] = T::one();
        e
    }

    pub fn level(&self) -> u32 {
        self.coords.len().trailing_zeros()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Negates every imaginary coordinate.
    pub fn conj(&self) -> Self {
        CDElement {
            coords: conj_slice(&self.coords),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        CDElement {
            coords: self.coords.iter().map(|c| s.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        same_level(self, other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        same_level(self, other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn neg(&self) -> Self {
        CDElement {
            coords: self.coords.iter().cloned().map(Neg::neg).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        CDElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CDElement<U> {
        CDElement {
            coords: self.coords.iter().map(f).collect(),
        }
    }
}

fn same_level<T: Scalar>(x: &CDElement<T>, y: &CDElement<T>) -> Result<(), AlgebraError> {
    if x.dim() != y.dim() {
        return Err(AlgebraError::LevelMismatch {
            left: x.level(),
            right: y.level(),
        });
    }
    Ok(())
}

fn conj_slice<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut out: Vec<T> = v.iter().cloned().map(Neg::neg).collect();
    out[0] = v[0].clone();
    out
}

fn add_slices<T: Scalar>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    a.into_iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_slices<T: Scalar>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mul_slices<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    if n == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let mut lo = sub_slices(mul_slices(a, c), mul_slices(&conj_slice(d), b));
    let hi = add_slices(mul_slices(d, a), mul_slices(b, &conj_slice(c)));
    lo.extend(hi);
    lo
}

/// Cayley–Dickson product.
pub fn cd_mul<T: Scalar>(x: &CDElement<T>, y: &CDElement<T>) -> Result<CDElement<T>, AlgebraError> {
    same_level(x, y)?;
    Ok(CDElement {
        coords: mul_slices(&x.coords, &y.coords),
    })
}

/// `(xy)z − x(yz)`.
pub fn associator<T: Scalar>(
    x: &CDElement<T>,
    y: &CDElement<T>,
    z: &CDElement<T>,
) -> Result<CDElement<T>, AlgebraError> {
    let left = cd_mul(&cd_mul(x, y)?, z)?;
    let right = cd_mul(x, &cd_mul(y, z)?)?;
    left.sub(&right)
}

/// `xy − yx`.
pub fn commutator<T: Scalar>(x: &CDElement<T>, y: &CDElement<T>) -> Result<CDElement<T>, AlgebraError> {
    cd_mul(x, y)?.sub(&cd_mul(y, x)?)
}

pub type Rational = BigRational;

impl fmt::Display for CDElement<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "e{i}")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn to_rational(e: &CDElement<i64>) -> CDElement<Rational> {
    e.map(|&c| BigRational::from_integer(BigInt::from(c)))
}

/// Multiplication table of the basis: `e_i e_j = sign · e_index`.
///
/// Built from [`cd_mul`] on basis pairs; Cayley–Dickson basis products are
/// always signed basis elements.
#[derive(Debug, Clone)]
pub struct StructureTable {
    dim: usize,
    index: Vec<usize>,
    sign: Vec<i64>,
}

impl StructureTable {
    pub fn new(level: u32) -> Self {
        let dim = 1usize << level;
        let mut index = Vec::with_capacity(dim * dim);
        let mut sign = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let p = cd_mul(&CDElement::<i64>::basis(level, i), &CDElement::basis(level, j))
                    .expect("same level");
                let nz: Vec<(usize, i64)> = p
                    .coords()
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|&(_, c)| c != 0)
                    .collect();
                assert!(
                    nz.len() == 1 && nz[0].1.abs() == 1,
                    "e{i}e{j} is not a signed basis element"
                );
                index.push(nz[0].0);
                sign.push(nz[0].1);
            }
        }
        StructureTable { dim, index, sign }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(sign, k)` with `e_i e_j = sign · e_k`.
    pub fn product(&self, i: usize, j: usize) -> (i64, usize) {
        let at = i * self.dim + j;
        (self.sign[at], self.index[at])
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.dim];
        for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, &y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                let (s, k) = self.product(i, j);
                out[k] += s * x * y;
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    fn assoc(&self, x: &[i64], y: &[i64], z: &[i64]) -> Vec<i64> {
        let l = self.mul(&self.mul(x, y), z);
        let r = self.mul(x, &self.mul(y, z));
        l.iter().zip(&r).map(|(a, b)| a - b).collect()
    }

    fn comm(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let l = self.mul(x, y);
        let r = self.mul(y, x);
        l.iter().zip(&r).map(|(a, b)| a - b).collect()
    }
}

fn vadd(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|&c| c == 0)
}

/// Parenthesization of a power `x^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bracketing {
    X,
    Mul(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    pub fn degree(&self) -> u32 {
        match self {
            Bracketing::X => 1,
            Bracketing::Mul(a, b) => a.degree() + b.degree(),
        }
    }

    pub fn evaluate<T: Scalar>(&self, x: &CDElement<T>) -> CDElement<T> {
        match self {
            Bracketing::X => x.clone(),
            Bracketing::Mul(a, b) => {
                cd_mul(&a.evaluate(x), &b.evaluate(x)).expect("operands share a level")
            }
        }
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracketing::X => f.write_str("x"),
            Bracketing::Mul(a, b) => write!(f, "({a}{b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `(x,y,z) = 0`.
    Associative,
    /// `(x,y,z) = −(z,y,x)`.
    Flexible,
    /// `(xx)y = x(xy)` and `y(xx) = (yx)x`.
    Alternative,
    /// Commutative and `(xy)(xx) = x(y(xx))`.
    Jordan,
    /// Every parenthesization of `x^k`, `k ≤ n`, agrees.
    PowerAssociative(u32),
    /// Jacobi identity for the commutator bracket.
    LieAdmissible,
    /// `e0` is a two-sided unit.
    Unitary,
}

impl Identity {
    pub fn name(&self) -> String {
        match self {
            Identity::Associative => "associative".into(),
            Identity::Flexible => "flexible".into(),
            Identity::Alternative => "alternative".into(),
            Identity::Jordan => "jordan".into(),
            Identity::PowerAssociative(n) => format!("power-associative-{n}"),
            Identity::LieAdmissible => "lie-admissible".into(),
            Identity::Unitary => "unitary".into(),
        }
    }

    /// Whether a basis sweep decides the identity for the whole algebra.
    pub fn has_exhaustive_check(&self) -> bool {
        !matches!(self, Identity::PowerAssociative(_))
    }

    pub fn all(power: u32) -> [Identity; 7] {
        [
            Identity::Associative,
            Identity::Flexible,
            Identity::Alternative,
            Identity::Jordan,
            Identity::PowerAssociative(power),
            Identity::LieAdmissible,
            Identity::Unitary,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckMode {
    ExhaustiveBasis,
    Randomized { trials: u32, seed: u64 },
}

/// Inputs of a failed identity, enough to recompute both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// lhs `(xy)z`, rhs `x(yz)`.
    Associator { x: CDElement<Rational>, y: CDElement<Rational>, z: CDElement<Rational> },
    /// lhs `(x,y,z)`, rhs `−(z,y,x)`.
    Flexible { x: CDElement<Rational>, y: CDElement<Rational>, z: CDElement<Rational> },
    /// lhs `(xx)y`, rhs `x(xy)`.
    LeftAlternative { x: CDElement<Rational>, y: CDElement<Rational> },
    /// lhs `y(xx)`, rhs `(yx)x`.
    RightAlternative { x: CDElement<Rational>, y: CDElement<Rational> },
    /// lhs `xy`, rhs `yx`.
    Commutative { x: CDElement<Rational>, y: CDElement<Rational> },
    /// lhs `(xy)(xx)`, rhs `x(y(xx))`.
    Jordan { x: CDElement<Rational>, y: CDElement<Rational> },
    /// lhs and rhs are two parenthesizations of `x^n`.
    Power { x: CDElement<Rational>, left: Bracketing, right: Bracketing },
    /// lhs `[[x,y],z] + [[z,x],y] + [[y,z],x]`, rhs `0`.
    Jacobi { x: CDElement<Rational>, y: CDElement<Rational>, z: CDElement<Rational> },
    /// lhs `e0·x` (or `x·e0`), rhs `x`.
    Unit { x: CDElement<Rational>, left: bool },
}

impl Witness {
    /// Recomputes both sides with [`cd_mul`].
    pub fn sides(&self) -> (CDElement<Rational>, CDElement<Rational>) {
        let m = |a: &CDElement<Rational>, b: &CDElement<Rational>| cd_mul(a, b).expect("same level");
        match self {
            Witness::Associator { x, y, z } => (m(&m(x, y), z), m(x, &m(y, z))),
            Witness::Flexible { x, y, z } => (
                associator(x, y, z).expect("same level"),
                associator(z, y, x).expect("same level").neg(),
            ),
            Witness::LeftAlternative { x, y } => (m(&m(x, x), y), m(x, &m(x, y))),
            Witness::RightAlternative { x, y } => (m(y, &m(x, x)), m(&m(y, x), x)),
            Witness::Commutative { x, y } => (m(x, y), m(y, x)),
            Witness::Jordan { x, y } => {
                let xx = m(x, x);
                (m(&m(x, y), &xx), m(x, &m(y, &xx)))
            }
            Witness::Power { x, left, right } => (left.evaluate(x), right.evaluate(x)),
            Witness::Jacobi { x, y, z } => {
                let c = |a: &CDElement<Rational>, b: &CDElement<Rational>| {
                    commutator(a, b).expect("same level")
                };
                let j = c(&c(x, y), z)
                    .add(&c(&c(z, x), y))
                    .and_then(|s| s.add(&c(&c(y, z), x)))
                    .expect("same level");
                (j, CDElement::zero(x.level()))
            }
            Witness::Unit { x, left } => {
                let e0 = CDElement::one(x.level());
                let p = if *left { m(&e0, x) } else { m(x, &e0) };
                (p, x.clone())
            }
        }
    }

    pub fn inputs(&self) -> Vec<&CDElement<Rational>> {
        match self {
            Witness::Associator { x, y, z }
            | Witness::Flexible { x, y, z }
            | Witness::Jacobi { x, y, z } => vec![x, y, z],
            Witness::LeftAlternative { x, y }
            | Witness::RightAlternative { x, y }
            | Witness::Commutative { x, y }
            | Witness::Jordan { x, y } => vec![x, y],
            Witness::Power { x, .. } | Witness::Unit { x, .. } => vec![x],
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inputs: Vec<String> = self.inputs().iter().map(|e| e.to_string()).collect();
        write!(f, "({})", inputs.join(","))?;
        match self {
            Witness::Power { left, right, .. } => write!(f, "[{left}!={right}]"),
            Witness::RightAlternative { .. } => f.write_str("[right]"),
            Witness::Unit { left: false, .. } => f.write_str("[right]"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub witness: Witness,
    pub lhs: CDElement<Rational>,
    pub rhs: CDElement<Rational>,
}

impl Counterexample {
    fn from_witness(witness: Witness) -> Self {
        let (lhs, rhs) = witness.sides();
        Counterexample { witness, lhs, rhs }
    }

    /// Recomputes both sides independently and confirms they differ and
    /// match the stored values.
    pub fn recheck(&self) -> bool {
        let (lhs, rhs) = self.witness.sides();
        lhs != rhs && lhs == self.lhs && rhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub level: u32,
    pub identity: Identity,
    /// How the verdict was reached; a nonlinear identity requested in
    /// exhaustive mode falls back to randomized elements.
    pub method: CheckMode,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level={} identity={} holds={}",
            self.level,
            self.identity.name(),
            self.holds
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, " counterexample={}", c.witness)?;
        }
        Ok(())
    }
}

/// Certifies one identity on the level-`k` algebra.
pub fn check_identity(level: u32, identity: Identity, mode: CheckMode) -> Result<IdentityReport, AlgebraError> {
    if let Identity::PowerAssociative(n) = identity {
        if !(1..=MAX_POWER).contains(&n) {
            return Err(AlgebraError::UnsupportedPower(n));
        }
    }
    let method = match mode {
        CheckMode::ExhaustiveBasis if identity.has_exhaustive_check() => {
            if level > MAX_EXHAUSTIVE_LEVEL {
                return Err(AlgebraError::UnsupportedLevel {
                    level,
                    max: MAX_EXHAUSTIVE_LEVEL,
                });
            }
            mode
        }
        CheckMode::ExhaustiveBasis => CheckMode::Randomized {
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
        },
        CheckMode::Randomized { .. } => mode,
    };
    if let CheckMode::Randomized { .. } = method {
        if level > MAX_RANDOMIZED_LEVEL {
            return Err(AlgebraError::UnsupportedLevel {
                level,
                max: MAX_RANDOMIZED_LEVEL,
            });
        }
    }

    let witness = match method {
        CheckMode::ExhaustiveBasis => exhaustive(level, identity),
        CheckMode::Randomized { trials, seed } => randomized(level, identity, trials, seed),
    };
    Ok(IdentityReport {
        level,
        identity,
        method,
        holds: witness.is_none(),
        counterexample: witness.map(Counterexample::from_witness),
    })
}

fn exhaustive(level: u32, identity: Identity) -> Option<Witness> {
    let t = StructureTable::new(level);
    let n = t.dim();
    let e = |i: usize| t.basis(i);
    let r = |i: usize| to_rational(&CDElement::basis(level, i));
    let lift = |v: &[i64]| to_rational(&CDElement { coords: v.to_vec() });

    // First triple (i, j, k) in lexicographic order for which `fails` holds.
    let first_triple = |fails: &(dyn Fn(usize, usize, usize) -> bool + Sync)| {
        (0..n).into_par_iter().find_map_first(|i| {
            (0..n).find_map(|j| (0..n).find(|&k| fails(i, j, k)).map(|k| (i, j, k)))
        })
    };
    let first_pair = |fails: &(dyn Fn(usize, usize) -> bool + Sync)| {
        (0..n).find_map(|i| (0..n).find(|&j| fails(i, j)).map(|j| (i, j)))
    };

    match identity {
        Identity::Associative => first_triple(&|i, j, k| !is_zero_vec(&t.assoc(&e(i), &e(j), &e(k))))
            .map(|(i, j, k)| Witness::Associator { x: r(i), y: r(j), z: r(k) }),
        Identity::Flexible => first_triple(&|i, j, k| {
            !is_zero_vec(&vadd(&t.assoc(&e(i), &e(j), &e(k)), &t.assoc(&e(k), &e(j), &e(i))))
        })
        .map(|(i, j, k)| Witness::Flexible { x: r(i), y: r(j), z: r(k) }),
        Identity::Alternative => {
            // Diagonal laws on basis pairs, then the linearized laws
            // (x,z,y) + (z,x,y) = 0 and (y,x,z) + (y,z,x) = 0. When the
            // diagonal holds on the basis, a linearized failure at (x, z)
            // is a genuine failure at x + z.
            if let Some((i, j)) = first_pair(&|i, j| !is_zero_vec(&t.assoc(&e(i), &e(i), &e(j)))) {
                return Some(Witness::LeftAlternative { x: r(i), y: r(j) });
            }
            if let Some((i, j)) = first_pair(&|i, j| !is_zero_vec(&t.assoc(&e(j), &e(i), &e(i)))) {
                return Some(Witness::RightAlternative { x: r(i), y: r(j) });
            }
            if let Some((i, k, j)) = first_triple(&|i, k, j| {
                !is_zero_vec(&vadd(&t.assoc(&e(i), &e(k), &e(j)), &t.assoc(&e(k), &e(i), &e(j))))
            }) {
                return Some(Witness::LeftAlternative {
                    x: lift(&vadd(&e(i), &e(k))),
                    y: r(j),
                });
            }
            first_triple(&|i, k, j| {
                !is_zero_vec(&vadd(&t.assoc(&e(j), &e(i), &e(k)), &t.assoc(&e(j), &e(k), &e(i))))
            })
            .map(|(i, k, j)| Witness::RightAlternative {
                x: lift(&vadd(&e(i), &e(k))),
                y: r(j),
            })
        }
        Identity::Jordan => {
            if let Some((i, j)) = first_pair(&|i, j| !is_zero_vec(&t.comm(&e(i), &e(j)))) {
                return Some(Witness::Commutative { x: r(i), y: r(j) });
            }
            jordan_polarized(&t, level)
        }
        Identity::LieAdmissible => first_triple(&|i, j, k| {
            let (x, y, z) = (e(i), e(j), e(k));
            let s = vadd(
                &vadd(&t.comm(&t.comm(&x, &y), &z), &t.comm(&t.comm(&z, &x), &y)),
                &t.comm(&t.comm(&y, &z), &x),
            );
            !is_zero_vec(&s)
        })
        .map(|(i, j, k)| Witness::Jacobi { x: r(i), y: r(j), z: r(k) }),
        Identity::Unitary => {
            let one = e(0);
            (0..n).find_map(|i| {
                if t.mul(&one, &e(i)) != e(i) {
                    Some(Witness::Unit { x: r(i), left: true })
                } else if t.mul(&e(i), &one) != e(i) {
                    Some(Witness::Unit { x: r(i), left: false })
                } else {
                    None
                }
            })
        }
        Identity::PowerAssociative(_) => unreachable!("no exhaustive check"),
    }
}

/// Full polarization of `J(x, y) = (xy)(xx) − x(y(xx))` in `x`, checked on
/// basis quadruples. On failure at `(a, b, c, y)`, inclusion–exclusion
/// guarantees some nonempty subset sum of `{a, b, c}` fails `J` itself.
fn jordan_polarized(t: &StructureTable, level: u32) -> Option<Witness> {
    let n = t.dim();
    let e = |i: usize| t.basis(i);
    let jordan = |x: &[i64], y: &[i64]| -> Vec<i64> {
        let xx = t.mul(x, x);
        let l = t.mul(&t.mul(x, y), &xx);
        let r = t.mul(x, &t.mul(y, &xx));
        l.iter().zip(&r).map(|(a, b)| a - b).collect()
    };
    let polarized = |xs: [usize; 3], y: &[i64]| -> Vec<i64> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut acc = vec![0; n];
        for p in PERMS {
            let (a, b, c) = (e(xs[p[0]]), e(xs[p[1]]), e(xs[p[2]]));
            let bc = t.mul(&b, &c);
            let l = t.mul(&t.mul(&a, y), &bc);
            let r = t.mul(&a, &t.mul(y, &bc));
            for k in 0..n {
                acc[k] += l[k] - r[k];
            }
        }
        acc
    };
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                for yi in 0..n {
                    if is_zero_vec(&polarized([a, b, c], &e(yi))) {
                        continue;
                    }
                    for mask in 1u32..8 {
                        let mut x = vec![0; n];
                        for (bit, idx) in [a, b, c].into_iter().enumerate() {
                            if mask & (1 << bit) != 0 {
                                x[idx] += 1;
                            }
                        }
                        if !is_zero_vec(&jordan(&x, &e(yi))) {
                            return Some(Witness::Jordan {
                                x: to_rational(&CDElement { coords: x }),
                                y: to_rational(&CDElement::basis(level, yi)),
                            });
                        }
                    }
                    unreachable!("polarization failure without a subset witness");
                }
            }
        }
    }
    None
}

/// Random element with coordinates `p/q`, `|p| ≤ 5`, `1 ≤ q ≤ 4`.
pub fn random_rational_element(level: u32, rng: &mut impl Rng) -> CDElement<Rational> {
    CDElement {
        coords: (0..1usize << level)
            .map(|_| {
                BigRational::new(
                    BigInt::from(rng.random_range(-5i64..=5)),
                    BigInt::from(rng.random_range(1i64..=4)),
                )
            })
            .collect(),
    }
}

fn randomized(level: u32, identity: Identity, trials: u32, seed: u64) -> Option<Witness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x = random_rational_element(level, &mut rng);
        let y = random_rational_element(level, &mut rng);
        let z = random_rational_element(level, &mut rng);
        let candidates = match identity {
            Identity::Associative => vec![Witness::Associator { x, y, z }],
            Identity::Flexible => vec![Witness::Flexible { x, y, z }],
            Identity::Alternative => vec![
                Witness::LeftAlternative { x: x.clone(), y: y.clone() },
                Witness::RightAlternative { x, y },
            ],
            Identity::Jordan => vec![
                Witness::Commutative { x: x.clone(), y: y.clone() },
                Witness::Jordan { x, y },
            ],
            Identity::LieAdmissible => vec![Witness::Jacobi { x, y, z }],
            Identity::Unitary => vec![
                Witness::Unit { x: x.clone(), left: true },
                Witness::Unit { x, left: false },
            ],
            Identity::PowerAssociative(n) => {
                if let Some(w) = power_witness(&x, n) {
                    return Some(w);
                }
                continue;
            }
        };
        for w in candidates {
            let (l, r) = w.sides();
            if l != r {
                return Some(w);
            }
        }
    }
    None
}

/// Compares every parenthesization of `x^k` for `k ≤ n`, keeping one
/// bracketing per distinct value.
fn power_witness(x: &CDElement<Rational>, n: u32) -> Option<Witness> {
    let mut table: Vec<Vec<(Bracketing, CDElement<Rational>)>> = vec![Vec::new()];
    table.push(vec![(Bracketing::X, x.clone())]);
    for k in 2..=n as usize {
        let mut values: Vec<(Bracketing, CDElement<Rational>)> = Vec::new();
        for i in 1..k {
            for (bl, vl) in &table[i] {
                for (br, vr) in &table[k - i] {
                    let v = cd_mul(vl, vr).expect("same level");
                    if !values.iter().any(|(_, w)| *w == v) {
                        values.push((Bracketing::Mul(Box::new(bl.clone()), Box::new(br.clone())), v));
                    }
                }
            }
        }
        if values.len() > 1 {
            return Some(Witness::Power {
                x: x.clone(),
                left: values[0].0.clone(),
                right: values[1].0.clone(),
            });
        }
        table.push(values);
    }
    None
}
