//! Dense univariate polynomials over the ring.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ring::RingElem;

/// Coefficients from the constant term upwards. Trailing zeros are trimmed,
/// so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<RingElem>", into = "Vec<RingElem>")]
pub struct Poly(Vec<RingElem>);

impl Poly {
    pub fn new(mut coeffs: Vec<RingElem>) -> Self {
        while coeffs.last().is_some_and(RingElem::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: RingElem) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn identity() -> Self {
        Poly::linear(RingElem::zero(), RingElem::one())
    }

    /// `a + b x`.
    pub fn linear(a: RingElem, b: RingElem) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.0
    }

    /// Degree, with the zero polynomial given degree 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn eval(&self, x: &RingElem) -> RingElem {
        self.0.iter().rev().fold(RingElem::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = RingElem::zero();
        Poly::new((0..n).map(|k| self.0.get(k).unwrap_or(&zero) + other.0.get(k).unwrap_or(&zero)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![RingElem::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &RingElem) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.0.iter().rev().fold(Poly::zero(), |acc, c| acc.mul(inner).add(&Poly::constant(c.clone())))
    }

    /// `x ↦ self(x + c)`.
    pub fn shift(&self, c: &RingElem) -> Poly {
        self.compose(&Poly::linear(c.clone(), RingElem::one()))
    }
}

impl From<Vec<RingElem>> for Poly {
    fn from(coeffs: Vec<RingElem>) -> Self {
        Poly::new(coeffs)
    }
}

impl From<Poly> for Vec<RingElem> {
    fn from(p: Poly) -> Self {
        p.0
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> RingElem {
        RingElem::ratio(n, d)
    }

    fn poly(cs: &[(i64, i64)]) -> Poly {
        Poly::new(cs.iter().map(|&(n, d)| r(n, d)).collect())
    }

    #[test]
    fn trimming_makes_equality_structural() {
        assert_eq!(poly(&[(1, 1), (0, 1), (0, 1)]), Poly::constant(r(1, 1)));
        assert_eq!(poly(&[(0, 1)]), Poly::zero());
    }

    #[test]
    fn evaluation_and_composition() {
        // (1 + x)^2 at 1/2
        let p = Poly::linear(r(1, 1), r(1, 1));
        let sq = p.mul(&p);
        assert_eq!(sq.eval(&r(1, 2)), r(9, 4));
        // x^2 ∘ (2 - x) at 1/2 = 9/4
        let x2 = Poly::identity().mul(&Poly::identity());
        assert_eq!(x2.compose(&Poly::linear(r(2, 1), r(-1, 1))).eval(&r(1, 2)), r(9, 4));
        assert_eq!(x2.shift(&r(1, 1)), sq);
    }

    #[test]
    fn serde_is_a_coefficient_list() {
        let p = poly(&[(1, 2), (0, 1), (3, 1)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["1/2","0","3"]"#);
        assert_eq!(serde_json::from_str::<Poly>(&json).unwrap(), p);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-9i64..=9, 1i64..=5), 0..4)
            .prop_map(|cs| Poly::new(cs.into_iter().map(|(n, d)| r(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(a in arb_poly(), b in arb_poly(), n in -9i64..=9, d in 1i64..=7) {
            let x = r(n, d);
            prop_assert_eq!(a.add(&b).eval(&x), &a.eval(&x) + &b.eval(&x));
            prop_assert_eq!(a.mul(&b).eval(&x), &a.eval(&x) * &b.eval(&x));
            prop_assert_eq!(a.compose(&b).eval(&x), a.eval(&b.eval(&x)));
        }
    }
}
