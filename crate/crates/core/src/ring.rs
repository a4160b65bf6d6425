//! Exact ordered commutative ring arithmetic.
//!
//! Scalars are arbitrary-precision rationals in lowest terms. The nonnegative
//! cone is a separate newtype so shape arithmetic can never silently produce a
//! negative length.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("negative value {0} is not in the nonnegative cone")]
    Negative(RingElem),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed scalar literal `{0}`")]
    Malformed(String),
    #[error("unknown ring instance `{0}` (expected rationals, integers or trivial)")]
    UnknownInstance(String),
}

/// An exact rational scalar, always kept in canonical lowest terms.
///
/// Values whose numerator and denominator fit in `i64` are stored inline;
/// `Big` never holds such a value, so the derived equality and hash are
/// structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Denominator positive, coprime to the numerator.
    Small(i64, i64),
    Big(BigRational),
}

impl RingElem {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self, RingError> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Ok(RingElem::from(BigRational::new(numerator.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        RingElem::from(BigRational::from_integer(n.into()))
    }

    /// `n / d` for small literals; panics on a zero denominator.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "nonzero denominator");
        RingElem::reduced(i128::from(n), i128::from(d))
    }

    /// Canonical form of `n / d`, `d != 0`.
    fn reduced(n: i128, d: i128) -> Self {
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = n.gcd(&d);
        let (n, d) = (n / g, d / g);
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => RingElem(Repr::Small(n, d)),
            _ => RingElem(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn zero() -> Self {
        RingElem(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        RingElem(Repr::Small(1, 1))
    }

    pub fn numerator(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denominator(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    /// The greatest integer not above `self`.
    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => BigInt::from(n.div_euclid(*d)),
            Repr::Big(r) => r.floor().to_integer(),
        }
    }

    pub fn leq(&self, other: &RingElem) -> bool {
        leq(self, other)
    }

    pub fn square(&self) -> RingElem {
        self * self
    }

    fn binop(
        &self,
        other: &RingElem,
        small: impl Fn(i128, i128, i128, i128) -> (i128, i128),
        big: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> RingElem {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (n, d) = small(i128::from(*a), i128::from(*b), i128::from(*c), i128::from(*d));
                RingElem::reduced(n, d)
            }
            _ => RingElem::from(big(&self.to_rational(), &other.to_rational())),
        }
    }
}

impl From<BigRational> for RingElem {
    fn from(value: BigRational) -> Self {
        match (value.numer().to_i64(), value.denom().to_i64()) {
            (Some(n), Some(d)) => RingElem(Repr::Small(n, d)),
            _ => RingElem(Repr::Big(value)),
        }
    }
}

impl From<i64> for RingElem {
    fn from(value: i64) -> Self {
        RingElem(Repr::Small(value, 1))
    }
}

impl Ord for RingElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (i128::from(*a) * i128::from(*d)).cmp(&(i128::from(*c) * i128::from(*b)))
            }
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialOrd for RingElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RingElem {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RingError::Malformed(s.to_owned());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                RingElem::new(n, d)
            }
            None => Ok(RingElem::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for RingElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn add(self, rhs: &'a RingElem) -> RingElem {
        self.binop(rhs, |a, b, c, d| (a * d + c * b, b * d), |x, y| x + y)
    }
}

impl<'a> Sub<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &'a RingElem) -> RingElem {
        self.binop(rhs, |a, b, c, d| (a * d - c * b, b * d), |x, y| x - y)
    }
}

impl<'a> Mul<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &'a RingElem) -> RingElem {
        self.binop(rhs, |a, b, c, d| (a * c, b * d), |x, y| x * y)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        match &self.0 {
            Repr::Small(n, d) => RingElem::reduced(-i128::from(*n), i128::from(*d)),
            Repr::Big(r) => RingElem::from(-r),
        }
    }
}

pub fn add(a: &RingElem, b: &RingElem) -> RingElem {
    a + b
}

pub fn mul(a: &RingElem, b: &RingElem) -> RingElem {
    a * b
}

/// The decidable total order.
pub fn leq(a: &RingElem, b: &RingElem) -> bool {
    a <= b
}

/// An element of the nonnegative cone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonnegElem(RingElem);

impl NonnegElem {
    pub fn new(value: RingElem) -> Result<Self, RingError> {
        if value.is_negative() {
            Err(RingError::Negative(value))
        } else {
            Ok(NonnegElem(value))
        }
    }

    /// `n / d` for small literals; panics if the result is negative.
    pub fn ratio(n: i64, d: i64) -> Self {
        NonnegElem::new(RingElem::ratio(n, d)).expect("nonnegative literal")
    }

    pub fn from_integer(n: u64) -> Self {
        NonnegElem(RingElem::from_integer(n))
    }

    pub fn zero() -> Self {
        NonnegElem(RingElem::zero())
    }

    pub fn one() -> Self {
        NonnegElem(RingElem::one())
    }

    pub fn value(&self) -> &RingElem {
        &self.0
    }

    pub fn into_value(self) -> RingElem {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &NonnegElem) -> NonnegElem {
        NonnegElem(&self.0 + &other.0)
    }

    /// Closed because positive elements are closed under multiplication.
    pub fn mul(&self, other: &NonnegElem) -> NonnegElem {
        NonnegElem(&self.0 * &other.0)
    }

    /// Exact difference, defined only when `other <= self`.
    pub fn checked_sub(&self, other: &NonnegElem) -> Option<NonnegElem> {
        let d = &self.0 - &other.0;
        (!d.is_negative()).then_some(NonnegElem(d))
    }

    pub fn min(&self, other: &NonnegElem) -> NonnegElem {
        min(self, other)
    }

    pub fn monus(&self, other: &NonnegElem) -> NonnegElem {
        truncated_sub(self, other)
    }
}

impl TryFrom<RingElem> for NonnegElem {
    type Error = RingError;
    fn try_from(value: RingElem) -> Result<Self, RingError> {
        NonnegElem::new(value)
    }
}

impl fmt::Display for NonnegElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for NonnegElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for NonnegElem {
    type Err = RingError;
    fn from_str(s: &str) -> Result<Self, RingError> {
        NonnegElem::new(s.parse()?)
    }
}

impl Serialize for NonnegElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NonnegElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = RingElem::deserialize(deserializer)?;
        NonnegElem::new(v).map_err(serde::de::Error::custom)
    }
}

/// Deliberate faults in the cone operations, used to confirm that the law
/// suite notices broken path arithmetic. Scoped to the current thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Mutation {
    #[default]
    None,
    /// `truncated_sub(i, j)` computes `j ∸ i` instead.
    SwappedTruncatedSub,
    /// `min` returns the larger argument.
    MinIsMax,
}

impl FromStr for Mutation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Mutation::None),
            "truncated-sub" => Ok(Mutation::SwappedTruncatedSub),
            "min" => Ok(Mutation::MinIsMax),
            other => Err(format!("unknown mutation `{other}` (expected none, truncated-sub or min)")),
        }
    }
}

thread_local! {
    static MUTATION: Cell<Mutation> = const { Cell::new(Mutation::None) };
}

/// Runs `f` with `mutation` active on this thread, restoring the previous
/// setting afterwards (also on unwind).
pub fn with_mutation<R>(mutation: Mutation, f: impl FnOnce() -> R) -> R {
    struct Restore(Mutation);
    impl Drop for Restore {
        fn drop(&mut self) {
            MUTATION.with(|m| m.set(self.0));
        }
    }
    let _restore = Restore(MUTATION.with(|m| m.replace(mutation)));
    f()
}

fn active_mutation() -> Mutation {
    MUTATION.with(Cell::get)
}

/// Minimum on the cone; both defining clauses agree when `i = j`.
pub fn min(i: &NonnegElem, j: &NonnegElem) -> NonnegElem {
    let pick_left = match active_mutation() {
        Mutation::MinIsMax => j <= i,
        _ => i <= j,
    };
    if pick_left {
        i.clone()
    } else {
        j.clone()
    }
}

/// Truncated subtraction: `0` when `i <= j`, otherwise `i - j`.
pub fn truncated_sub(i: &NonnegElem, j: &NonnegElem) -> NonnegElem {
    let (i, j) = match active_mutation() {
        Mutation::SwappedTruncatedSub => (j, i),
        _ => (i, j),
    };
    if i <= j {
        NonnegElem::zero()
    } else {
        NonnegElem(&i.0 - &j.0)
    }
}

impl PartialOrd<NonnegElem> for RingElem {
    fn partial_cmp(&self, other: &NonnegElem) -> Option<Ordering> {
        self.partial_cmp(&other.0)
    }
}

impl PartialEq<NonnegElem> for RingElem {
    fn eq(&self, other: &NonnegElem) -> bool {
        *self == other.0
    }
}

/// Which ordered ring the law suite draws its scalars from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingInstance {
    #[default]
    Rationals,
    Integers,
    /// The one-element ring in which `0 = 1`.
    Trivial,
}

impl RingInstance {
    pub const ALL: [RingInstance; 3] = [RingInstance::Rationals, RingInstance::Integers, RingInstance::Trivial];

    pub fn name(self) -> &'static str {
        match self {
            RingInstance::Rationals => "rationals",
            RingInstance::Integers => "integers",
            RingInstance::Trivial => "trivial",
        }
    }

    pub fn is_trivial(self) -> bool {
        self == RingInstance::Trivial
    }

    pub fn contains(self, x: &RingElem) -> bool {
        match self {
            RingInstance::Rationals => true,
            RingInstance::Integers => x.is_integer(),
            RingInstance::Trivial => x.is_zero(),
        }
    }

    /// Projects an exact rational into this instance's carrier. Integers are
    /// closed under the ring operations, so only the trivial ring collapses.
    pub fn embed(self, x: RingElem) -> RingElem {
        match self {
            RingInstance::Trivial => RingElem::zero(),
            _ => {
                debug_assert!(self.contains(&x), "{x} is not in the {} instance", self.name());
                x
            }
        }
    }

    pub fn zero(self) -> RingElem {
        RingElem::zero()
    }

    pub fn one(self) -> RingElem {
        self.embed(RingElem::one())
    }

    pub fn add(self, a: &RingElem, b: &RingElem) -> RingElem {
        self.embed(a + b)
    }

    pub fn mul(self, a: &RingElem, b: &RingElem) -> RingElem {
        self.embed(a * b)
    }

    pub fn neg(self, a: &RingElem) -> RingElem {
        self.embed(-a)
    }

    pub fn leq(self, a: &RingElem, b: &RingElem) -> bool {
        leq(a, b)
    }

    /// A random element, small enough to keep exact arithmetic cheap.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> RingElem {
        match self {
            RingInstance::Rationals => {
                let d: i64 = rng.gen_range(1..=12);
                let n: i64 = rng.gen_range(-4 * d..=4 * d);
                RingElem::ratio(n, d)
            }
            RingInstance::Integers => RingElem::from_integer(rng.gen_range(-6i64..=6)),
            RingInstance::Trivial => RingElem::zero(),
        }
    }

    pub fn sample_nonneg<R: Rng + ?Sized>(self, rng: &mut R) -> NonnegElem {
        let x = self.sample(rng);
        NonnegElem(if x.is_negative() { -x } else { x })
    }

    /// A random strictly positive element, or zero in the trivial ring.
    pub fn sample_positive<R: Rng + ?Sized>(self, rng: &mut R) -> NonnegElem {
        match self {
            RingInstance::Rationals => {
                let d: i64 = rng.gen_range(1..=8);
                NonnegElem::ratio(rng.gen_range(1..=3 * d), d)
            }
            RingInstance::Integers => NonnegElem::from_integer(rng.gen_range(1..=4)),
            RingInstance::Trivial => NonnegElem::zero(),
        }
    }

    /// A random element of `[0, 1]`.
    pub fn sample_unit_interval<R: Rng + ?Sized>(self, rng: &mut R) -> NonnegElem {
        match self {
            RingInstance::Rationals => {
                let d: i64 = rng.gen_range(1..=16);
                NonnegElem::ratio(rng.gen_range(0..=d), d)
            }
            RingInstance::Integers => NonnegElem::from_integer(rng.gen_range(0..=1)),
            RingInstance::Trivial => NonnegElem::zero(),
        }
    }

    /// Checks every ordered-ring axiom on the given elements using this
    /// instance's operations, returning the name of the first one that fails.
    pub fn check_axioms(self, i: &RingElem, j: &RingElem, k: &RingElem) -> Result<(), &'static str> {
        let (i, j, k) = (self.embed(i.clone()), self.embed(j.clone()), self.embed(k.clone()));
        let (zero, one) = (self.zero(), self.one());
        let le = |a: &RingElem, b: &RingElem| self.leq(a, b);
        let add = |a: &RingElem, b: &RingElem| self.add(a, b);
        let mul = |a: &RingElem, b: &RingElem| self.mul(a, b);
        let checks: [(&'static str, bool); 14] = [
            ("reflexivity", le(&i, &i)),
            ("transitivity", !(le(&i, &j) && le(&j, &k)) || le(&i, &k)),
            ("antisymmetry", !(le(&i, &j) && le(&j, &i)) || i == j),
            ("totality", le(&i, &j) || le(&j, &i)),
            ("additive associativity", add(&i, &add(&j, &k)) == add(&add(&i, &j), &k)),
            ("additive unit", add(&zero, &i) == i),
            ("additive commutativity", add(&i, &j) == add(&j, &i)),
            ("additive inverse", add(&i, &self.neg(&i)) == zero),
            ("addition preserves order", !le(&i, &j) || le(&add(&k, &i), &add(&k, &j))),
            ("multiplicative associativity", mul(&i, &mul(&j, &k)) == mul(&mul(&i, &j), &k)),
            ("multiplicative unit", mul(&one, &i) == i),
            ("multiplicative commutativity", mul(&i, &j) == mul(&j, &i)),
            ("distributivity", mul(&i, &add(&j, &k)) == add(&mul(&i, &j), &mul(&i, &k))),
            ("positivity closure", !(le(&zero, &i) && le(&zero, &j)) || le(&zero, &mul(&i, &j))),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            Some((name, _)) => Err(name),
            None => Ok(()),
        }
    }
}

impl fmt::Display for RingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RingInstance {
    type Err = RingError;
    fn from_str(s: &str) -> Result<Self, RingError> {
        RingInstance::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| RingError::UnknownInstance(s.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> RingElem {
        RingElem::ratio(n, d)
    }

    fn q(n: i64, d: i64) -> NonnegElem {
        NonnegElem::ratio(n, d)
    }

    fn arb_elem() -> impl Strategy<Value = RingElem> {
        (-200i64..200, 1i64..50).prop_map(|(n, d)| r(n, d))
    }

    fn arb_nonneg() -> impl Strategy<Value = NonnegElem> {
        (0i64..200, 1i64..50).prop_map(|(n, d)| q(n, d))
    }

    #[test]
    fn add_and_mul_examples() {
        assert_eq!(add(&r(1, 2), &r(1, 3)), r(5, 6));
        assert_eq!(mul(&r(2, 3), &r(3, 4)), r(1, 2));
    }

    #[test]
    fn canonical_form() {
        let x = r(6, -8);
        assert_eq!(x.numerator(), BigInt::from(-3));
        assert_eq!(x.denominator(), BigInt::from(4));
        assert_eq!(RingElem::zero().denominator(), BigInt::from(1));
        assert_eq!(x.to_string(), "-3/4");
        assert_eq!(r(4, 2).to_string(), "2");
        assert_eq!("10/4".parse::<RingElem>().unwrap(), r(5, 2));
        assert!("1/0".parse::<RingElem>().is_err());
        assert!("x".parse::<RingElem>().is_err());
    }

    #[test]
    fn min_examples() {
        assert_eq!(min(&q(2, 3), &q(1, 2)), q(1, 2));
        assert_eq!(min(&q(7, 3), &q(7, 3)), q(7, 3));
        assert_eq!(min(&NonnegElem::zero(), &q(9, 4)), NonnegElem::zero());
    }

    #[test]
    fn truncated_sub_examples() {
        assert_eq!(truncated_sub(&q(2, 1), &q(3, 1)), NonnegElem::zero());
        assert_eq!(truncated_sub(&q(3, 1), &q(2, 1)), q(1, 1));
        assert_eq!(truncated_sub(&q(5, 7), &NonnegElem::zero()), q(5, 7));
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&r(1, 3), &r(1, 2)));
        assert!(!leq(&r(1, 2), &r(1, 3)));
    }

    #[test]
    fn negative_cone_element_is_rejected() {
        assert_eq!(NonnegElem::new(r(-1, 2)), Err(RingError::Negative(r(-1, 2))));
        assert!("-3".parse::<NonnegElem>().is_err());
    }

    #[test]
    fn mutations_are_scoped() {
        with_mutation(Mutation::SwappedTruncatedSub, || {
            assert_eq!(truncated_sub(&q(3, 1), &q(2, 1)), NonnegElem::zero());
            with_mutation(Mutation::MinIsMax, || assert_eq!(min(&q(1, 1), &q(2, 1)), q(2, 1)));
            assert_eq!(min(&q(1, 1), &q(2, 1)), q(1, 1));
        });
        assert_eq!(truncated_sub(&q(3, 1), &q(2, 1)), q(1, 1));
    }

    #[test]
    fn instances() {
        assert_eq!(RingInstance::Trivial.one(), RingInstance::Trivial.zero());
        assert_ne!(RingInstance::Integers.one(), RingInstance::Integers.zero());
        assert_ne!(RingInstance::Rationals.one(), RingInstance::Rationals.zero());
        assert_eq!("integers".parse::<RingInstance>().unwrap(), RingInstance::Integers);
        assert!("reals".parse::<RingInstance>().is_err());
        let x = r(7, 3);
        assert_eq!(RingInstance::Trivial.add(&x, &x), RingElem::zero());
    }

    #[test]
    fn serde_as_string() {
        let json = serde_json::to_string(&vec![r(1, 2), r(3, 1)]).unwrap();
        assert_eq!(json, r#"["1/2","3"]"#);
        let back: Vec<RingElem> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![r(1, 2), r(3, 1)]);
        assert!(serde_json::from_str::<NonnegElem>(r#""-1""#).is_err());
    }

    proptest! {
        #[test]
        fn axioms_hold_for_every_instance(i in arb_elem(), j in arb_elem(), k in arb_elem()) {
            prop_assert_eq!(RingInstance::Rationals.check_axioms(&i, &j, &k), Ok(()));
            let int = |x: &RingElem| RingElem::from_integer(x.numerator().clone());
            prop_assert_eq!(RingInstance::Integers.check_axioms(&int(&i), &int(&j), &int(&k)), Ok(()));
            prop_assert_eq!(RingInstance::Trivial.check_axioms(&i, &j, &k), Ok(()));
        }

        #[test]
        fn identities_and_inverses(a in arb_elem()) {
            prop_assert_eq!(&a + &RingElem::zero(), a.clone());
            prop_assert_eq!(&a + &(-&a), RingElem::zero());
            prop_assert_eq!(&a * &RingElem::one(), a.clone());
            prop_assert!(leq(&a, &a));
        }

        #[test]
        fn squares_are_nonnegative(a in arb_elem(), b in arb_elem()) {
            let d = &a - &b;
            prop_assert!(leq(&RingElem::zero(), &d.square()));
        }

        #[test]
        fn antisymmetry(a in arb_elem(), b in arb_elem()) {
            if leq(&a, &b) && leq(&b, &a) {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn positivity_closure(a in arb_nonneg(), b in arb_nonneg()) {
            prop_assert!(leq(&RingElem::zero(), a.mul(&b).value()));
        }

        #[test]
        fn monus_plus_min_is_identity(i in arb_nonneg(), j in arb_nonneg()) {
            prop_assert_eq!(truncated_sub(&i, &j).add(&min(&i, &j)), i.clone());
            prop_assert_eq!(min(&i, &j), min(&j, &i));
            prop_assert_eq!(min(&i, &i), i);
        }

        #[test]
        fn inline_and_big_representations_agree(
            a in any::<i64>(), b in 1i64..=i64::MAX, c in any::<i64>(), d in 1i64..=i64::MAX,
        ) {
            let (x, y) = (RingElem::ratio(a, b), RingElem::ratio(c, d));
            let (bx, by) = (BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()));
            prop_assert_eq!(&x + &y, RingElem::from(&bx + &by));
            prop_assert_eq!(&x - &y, RingElem::from(&bx - &by));
            prop_assert_eq!(&x * &y, RingElem::from(&bx * &by));
            prop_assert_eq!(-&x, RingElem::from(-&bx));
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            prop_assert_eq!(x.floor(), bx.floor().to_integer());
            let sum = &(&x + &y) - &y;
            prop_assert_eq!(sum.to_rational(), bx);
        }
    }

    #[test]
    fn overflow_promotes_and_results_demote() {
        let big = &RingElem::from(i64::MAX) + &RingElem::one();
        assert_eq!(big.to_string(), "9223372036854775808");
        let back = &big - &RingElem::one();
        assert_eq!(back, RingElem::from(i64::MAX));
        assert_eq!(-&RingElem::from(i64::MIN), big);
        assert!(RingElem::from(i64::MIN) < big);
    }
}
