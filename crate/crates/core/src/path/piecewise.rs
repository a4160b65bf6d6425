//! Exact ring-valued paths: continuous piecewise polynomials.
//!
//! Every combinator that the closure representation offers has an exact
//! counterpart here, so laws over ring-valued paths can be checked both by
//! probing the closure view and by exact comparison.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{MoorePath, PathDisagreement, PathError, Poly};
use crate::ring::{self, NonnegElem, RingElem, RingInstance};

/// Invariants: `breakpoints` is strictly increasing, has one entry per piece
/// and ends at `shape`. Piece `k` covers `[breakpoints[k-1], breakpoints[k]]`
/// (with `breakpoints[-1] = 0`) in local coordinates starting at 0. A path of
/// shape 0 has exactly one constant piece and breakpoints `[0]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewise", into = "RawPiecewise")]
pub struct PiecewisePath {
    shape: NonnegElem,
    breakpoints: Vec<NonnegElem>,
    pieces: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
struct RawPiecewise {
    shape: NonnegElem,
    breakpoints: Vec<NonnegElem>,
    pieces: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiecewiseError {
    #[error("a path needs at least one piece")]
    NoPieces,
    #[error("{breakpoints} breakpoints for {pieces} pieces")]
    CountMismatch { breakpoints: usize, pieces: usize },
    #[error("breakpoints must be strictly increasing and positive")]
    NotIncreasing,
    #[error("last breakpoint {last} differs from shape {shape}")]
    ShapeMismatch { last: Box<NonnegElem>, shape: Box<NonnegElem> },
    #[error("pieces {left} and {right} do not meet")]
    Discontinuous { left: usize, right: usize },
    #[error("a path of shape 0 must be one constant piece")]
    DegenerateNotConstant,
}

impl TryFrom<RawPiecewise> for PiecewisePath {
    type Error = PiecewiseError;
    fn try_from(raw: RawPiecewise) -> Result<Self, Self::Error> {
        let p = PiecewisePath::from_pieces(raw.breakpoints, raw.pieces)?;
        if p.shape != raw.shape {
            return Err(PiecewiseError::ShapeMismatch { last: Box::new(p.shape), shape: Box::new(raw.shape) });
        }
        Ok(p)
    }
}

impl From<PiecewisePath> for RawPiecewise {
    fn from(p: PiecewisePath) -> Self {
        RawPiecewise { shape: p.shape, breakpoints: p.breakpoints, pieces: p.pieces }
    }
}

impl std::fmt::Debug for PiecewisePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.breakpoints.iter().zip(&self.pieces).map(|(b, p)| format!("..{b}: {p}"))).finish()
    }
}

impl PiecewisePath {
    /// The degenerate path at `x`.
    pub fn constant(x: RingElem) -> Self {
        PiecewisePath {
            shape: NonnegElem::zero(),
            breakpoints: vec![NonnegElem::zero()],
            pieces: vec![Poly::constant(x)],
        }
    }

    /// `⟨i ≤ shape⟩ poly(i)`.
    pub fn polynomial(shape: NonnegElem, poly: Poly) -> Self {
        if shape.is_zero() {
            return PiecewisePath::constant(poly.eval(&RingElem::zero()));
        }
        PiecewisePath { shape: shape.clone(), breakpoints: vec![shape], pieces: vec![poly] }
    }

    /// `⟨i ≤ shape⟩ i`.
    pub fn ramp(shape: NonnegElem) -> Self {
        PiecewisePath::polynomial(shape, Poly::identity())
    }

    pub fn from_pieces(breakpoints: Vec<NonnegElem>, pieces: Vec<Poly>) -> Result<Self, PiecewiseError> {
        if pieces.is_empty() {
            return Err(PiecewiseError::NoPieces);
        }
        if breakpoints.len() != pieces.len() {
            return Err(PiecewiseError::CountMismatch { breakpoints: breakpoints.len(), pieces: pieces.len() });
        }
        let shape = breakpoints.last().cloned().unwrap_or_else(NonnegElem::zero);
        if shape.is_zero() {
            if pieces.len() != 1 || !pieces[0].is_constant() {
                return Err(PiecewiseError::DegenerateNotConstant);
            }
            return Ok(PiecewisePath { shape, breakpoints, pieces });
        }
        let mut prev = NonnegElem::zero();
        for b in &breakpoints {
            if b <= &prev {
                return Err(PiecewiseError::NotIncreasing);
            }
            prev = b.clone();
        }
        let path = PiecewisePath { shape, breakpoints, pieces };
        for k in 1..path.pieces.len() {
            let end = path.pieces[k - 1].eval(path.piece_len(k - 1).value());
            if end != path.pieces[k].eval(&RingElem::zero()) {
                return Err(PiecewiseError::Discontinuous { left: k - 1, right: k });
            }
        }
        Ok(path)
    }

    pub fn shape(&self) -> &NonnegElem {
        &self.shape
    }

    pub fn breakpoints(&self) -> &[NonnegElem] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    fn piece_start(&self, k: usize) -> NonnegElem {
        if k == 0 {
            NonnegElem::zero()
        } else {
            self.breakpoints[k - 1].clone()
        }
    }

    fn piece_len(&self, k: usize) -> NonnegElem {
        self.breakpoints[k].checked_sub(&self.piece_start(k)).expect("breakpoints increase")
    }

    /// Index of the piece whose closed interval contains `t <= shape`,
    /// preferring the leftmost.
    fn piece_index(&self, t: &NonnegElem) -> usize {
        self.breakpoints.partition_point(|b| b < t).min(self.pieces.len() - 1)
    }

    /// Evaluation, clamped to the shape.
    pub fn eval(&self, t: &NonnegElem) -> RingElem {
        let t = if t > &self.shape { &self.shape } else { t };
        let k = self.piece_index(t);
        let local = t.checked_sub(&self.piece_start(k)).expect("t lies in piece k");
        self.pieces[k].eval(local.value())
    }

    pub fn source(&self) -> RingElem {
        self.eval(&NonnegElem::zero())
    }

    pub fn target(&self) -> RingElem {
        self.eval(&self.shape)
    }

    /// The closure view of this path.
    pub fn to_path(&self) -> MoorePath<RingElem> {
        let me = self.clone();
        let hints = if self.shape.is_zero() { Vec::new() } else { self.breakpoints.clone() };
        MoorePath::new(self.shape.clone(), move |t| me.eval(t)).with_hints(hints)
    }

    /// `q • p` with the endpoints compared exactly.
    pub fn compose(q: &PiecewisePath, p: &PiecewisePath) -> Result<PiecewisePath, PathError> {
        if p.target() != q.source() {
            return Err(PathError::EndpointMismatch);
        }
        if p.shape.is_zero() {
            return Ok(q.clone());
        }
        if q.shape.is_zero() {
            return Ok(p.clone());
        }
        let mut breakpoints = p.breakpoints.clone();
        breakpoints.extend(q.breakpoints.iter().map(|b| b.add(&p.shape)));
        let mut pieces = p.pieces.clone();
        pieces.extend(q.pieces.iter().cloned());
        Ok(PiecewisePath { shape: p.shape.add(&q.shape), breakpoints, pieces })
    }

    pub fn reverse(&self) -> PiecewisePath {
        if self.shape.is_zero() {
            return self.clone();
        }
        let mut breakpoints = Vec::with_capacity(self.pieces.len());
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut acc = NonnegElem::zero();
        for k in (0..self.pieces.len()).rev() {
            let len = self.piece_len(k);
            pieces.push(self.pieces[k].compose(&Poly::linear(len.value().clone(), -RingElem::one())));
            acc = acc.add(&len);
            breakpoints.push(acc.clone());
        }
        PiecewisePath { shape: self.shape.clone(), breakpoints, pieces }
    }

    /// Pointwise post-composition with a polynomial.
    pub fn map_poly(&self, g: &Poly) -> PiecewisePath {
        PiecewisePath {
            shape: self.shape.clone(),
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| g.compose(p)).collect(),
        }
    }

    /// `⟨i ≤ j⟩ p(i)`: truncates when `j` is below the shape and pads with the
    /// endpoint when above.
    pub fn babs(&self, j: &NonnegElem) -> PiecewisePath {
        if j.is_zero() {
            return PiecewisePath::constant(self.source());
        }
        if j == &self.shape {
            return self.clone();
        }
        if j > &self.shape {
            let pad = Poly::constant(self.target());
            if self.shape.is_zero() {
                return PiecewisePath::polynomial(j.clone(), pad);
            }
            let mut out = self.clone();
            out.breakpoints.push(j.clone());
            out.pieces.push(pad);
            out.shape = j.clone();
            return out;
        }
        let k = self.piece_index(j);
        let mut breakpoints = self.breakpoints[..k].to_vec();
        breakpoints.push(j.clone());
        PiecewisePath { shape: j.clone(), breakpoints, pieces: self.pieces[..=k].to_vec() }
    }

    /// `i ▷ p`.
    pub fn upto(&self, i: &NonnegElem) -> PiecewisePath {
        self.babs(&ring::min(&self.shape, i))
    }

    /// `from(i, p)`.
    pub fn from(&self, i: &NonnegElem) -> PiecewisePath {
        self.reverse().upto(&ring::truncated_sub(&self.shape, i)).reverse()
    }

    /// `⟨i ≤ new_shape⟩ p(c · i)`.
    pub fn reparam_linear(&self, c: &NonnegElem, new_shape: &NonnegElem) -> PiecewisePath {
        if c.is_zero() || self.shape.is_zero() {
            return PiecewisePath::polynomial(new_shape.clone(), Poly::constant(self.source()));
        }
        let inv =
            NonnegElem::new(RingElem::from(c.value().to_rational().recip())).expect("reciprocal of a positive element");
        let stretch = Poly::linear(RingElem::zero(), c.value().clone());
        let scaled = PiecewisePath {
            shape: self.shape.mul(&inv),
            breakpoints: self.breakpoints.iter().map(|b| b.mul(&inv)).collect(),
            pieces: self.pieces.iter().map(|p| p.compose(&stretch)).collect(),
        };
        scaled.babs(new_shape)
    }

    /// Exact equality, with a witness point on failure.
    pub fn exact_eq(&self, other: &PiecewisePath) -> Result<(), PathDisagreement> {
        if self.shape != other.shape {
            return Err(PathDisagreement::Shape {
                left: Box::new(self.shape.clone()),
                right: Box::new(other.shape.clone()),
            });
        }
        if self.shape.is_zero() {
            return if self.source() == other.source() {
                Ok(())
            } else {
                Err(PathDisagreement::Value { at: NonnegElem::zero() })
            };
        }
        let mut cuts: Vec<NonnegElem> = self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        cuts.sort();
        cuts.dedup();
        let mut a = NonnegElem::zero();
        for b in cuts {
            let left = self.local_poly(&a, &b);
            let right = other.local_poly(&a, &b);
            if left != right {
                return Err(PathDisagreement::Value { at: witness(&left, &right, &a, &b) });
            }
            a = b;
        }
        Ok(())
    }

    /// The polynomial describing `[a, b]` (which lies within one piece), in
    /// coordinates starting at `a`.
    fn local_poly(&self, a: &NonnegElem, b: &NonnegElem) -> Poly {
        let k = self.piece_index(b);
        let offset = a.checked_sub(&self.piece_start(k)).expect("interval lies in piece");
        self.pieces[k].shift(offset.value())
    }

    /// `n + 1` evenly spaced values, endpoints included.
    pub fn samples(&self, n: usize) -> Vec<RingElem> {
        let n = n.max(1) as i64;
        (0..=n).map(|k| self.eval(&self.shape.mul(&NonnegElem::ratio(k, n)))).collect()
    }

    /// A random continuous path with at most three pieces of degree at most
    /// two, starting at `source` when given.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, instance: RingInstance, source: Option<RingElem>) -> PiecewisePath {
        let start = source.unwrap_or_else(|| instance.sample(rng));
        if instance.is_trivial() || rng.gen_ratio(1, 8) {
            return PiecewisePath::constant(start);
        }
        let n = rng.gen_range(1..=3);
        let mut breakpoints = Vec::with_capacity(n);
        let mut pieces = Vec::with_capacity(n);
        let mut at = NonnegElem::zero();
        let mut value = start;
        for _ in 0..n {
            let len = instance.sample_positive(rng);
            let degree = rng.gen_range(0..=2);
            let mut coeffs = vec![value.clone()];
            coeffs.extend((0..degree).map(|_| instance.sample(rng)));
            let poly = Poly::new(coeffs);
            value = poly.eval(len.value());
            at = at.add(&len);
            breakpoints.push(at.clone());
            pieces.push(poly);
        }
        PiecewisePath { shape: at, breakpoints, pieces }
    }
}

/// A point of `[a, b]` where two distinct polynomials differ: of any
/// `deg + 2` distinct points, at least one works.
fn witness(left: &Poly, right: &Poly, a: &NonnegElem, b: &NonnegElem) -> NonnegElem {
    let len = b.checked_sub(a).expect("a <= b");
    let n = (left.degree().max(right.degree()) + 1) as i64;
    (0..=n)
        .map(|k| len.mul(&NonnegElem::ratio(k, n)))
        .find(|u| left.eval(u.value()) != right.eval(u.value()))
        .map(|u| a.add(&u))
        .unwrap_or_else(|| a.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{self, path_eq, SampleSpec};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> NonnegElem {
        NonnegElem::ratio(n, d)
    }

    fn r(n: i64, d: i64) -> RingElem {
        RingElem::ratio(n, d)
    }

    #[test]
    fn validation() {
        let x = Poly::identity();
        assert_eq!(PiecewisePath::from_pieces(vec![], vec![]), Err(PiecewiseError::NoPieces));
        assert_eq!(
            PiecewisePath::from_pieces(vec![q(1, 1), q(1, 1)], vec![x.clone(), Poly::constant(r(1, 1))]),
            Err(PiecewiseError::NotIncreasing)
        );
        assert_eq!(
            PiecewisePath::from_pieces(vec![q(1, 1), q(2, 1)], vec![x.clone(), x.clone()]),
            Err(PiecewiseError::Discontinuous { left: 0, right: 1 })
        );
        assert_eq!(
            PiecewisePath::from_pieces(vec![q(0, 1)], vec![x.clone()]),
            Err(PiecewiseError::DegenerateNotConstant)
        );
        assert!(PiecewisePath::from_pieces(vec![q(1, 1), q(2, 1)], vec![x.clone(), Poly::constant(r(1, 1))]).is_ok());
    }

    #[test]
    fn combinator_examples() {
        let p = PiecewisePath::ramp(q(2, 1));
        assert_eq!(p.reverse().eval(&q(1, 2)), r(3, 2));
        let u = p.upto(&q(1, 1));
        assert_eq!((u.shape().clone(), u.target()), (q(1, 1), r(1, 1)));
        assert_eq!(p.from(&q(1, 1)).eval(&q(1, 2)), r(3, 2));
        assert_eq!(p.from(&q(5, 2)).exact_eq(&PiecewisePath::constant(r(2, 1))), Ok(()));
        assert_eq!(p.babs(&q(3, 1)).eval(&q(5, 2)), r(2, 1));
        let back = PiecewisePath::polynomial(q(2, 1), Poly::linear(r(2, 1), r(-1, 1)));
        let loop_ = PiecewisePath::compose(&back, &p).unwrap();
        assert_eq!(loop_.shape(), &q(4, 1));
        assert_eq!(loop_.eval(&q(3, 1)), r(1, 1));
        assert_eq!(PiecewisePath::compose(&p, &p), Err(PathError::EndpointMismatch));
    }

    #[test]
    fn exact_eq_ignores_how_pieces_are_cut() {
        let one = PiecewisePath::ramp(q(2, 1));
        let two =
            PiecewisePath::from_pieces(vec![q(1, 2), q(2, 1)], vec![Poly::identity(), Poly::linear(r(1, 2), r(1, 1))])
                .unwrap();
        assert_eq!(one.exact_eq(&two), Ok(()));
        let bent =
            PiecewisePath::from_pieces(vec![q(1, 2), q(2, 1)], vec![Poly::identity(), Poly::linear(r(1, 2), r(2, 1))])
                .unwrap();
        match one.exact_eq(&bent) {
            Err(PathDisagreement::Value { at }) => assert_ne!(one.eval(&at), bent.eval(&at)),
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn reparam_linear_scales_the_argument() {
        let p = PiecewisePath::polynomial(q(2, 1), Poly::identity().mul(&Poly::identity()));
        let s = p.reparam_linear(&q(2, 1), &q(1, 1));
        assert_eq!(s.eval(&q(1, 2)), r(1, 1));
        assert_eq!(s.shape(), &q(1, 1));
        let long = p.reparam_linear(&q(1, 2), &q(5, 1));
        assert_eq!(long.eval(&q(5, 1)), r(4, 1));
        assert_eq!(long.eval(&q(2, 1)), r(1, 1));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let p =
            PiecewisePath::from_pieces(vec![q(1, 2), q(2, 1)], vec![Poly::identity(), Poly::linear(r(1, 2), r(3, 1))])
                .unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"shape":"2","breakpoints":["1/2","2"],"pieces":[["0","1"],["1/2","3"]]}"#);
        assert_eq!(serde_json::from_str::<PiecewisePath>(&json).unwrap(), p);
        let bad = r#"{"shape":"3","breakpoints":["1/2","2"],"pieces":[["0","1"],["1/2","3"]]}"#;
        assert!(serde_json::from_str::<PiecewisePath>(bad).is_err());
    }

    fn arb_path() -> impl Strategy<Value = PiecewisePath> {
        any::<u64>()
            .prop_map(|seed| PiecewisePath::random(&mut ChaCha8Rng::seed_from_u64(seed), RingInstance::Rationals, None))
    }

    fn arb_param() -> impl Strategy<Value = NonnegElem> {
        (0i64..=40, 1i64..=8).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn closure_view_agrees_with_exact_ops(p in arb_path(), i in arb_param(), seed in any::<u64>()) {
            let spec = SampleSpec::new(seed, 24);
            prop_assert_eq!(path_eq(&p.reverse().to_path(), &path::reverse(&p.to_path()), &spec), Ok(()));
            prop_assert_eq!(path_eq(&p.upto(&i).to_path(), &path::upto(&i, &p.to_path()), &spec), Ok(()));
            prop_assert_eq!(path_eq(&p.from(&i).to_path(), &path::from(&i, &p.to_path()), &spec), Ok(()));
            let pp = p.to_path();
            prop_assert_eq!(path_eq(&p.babs(&i).to_path(), &path::babs(i.clone(), move |t| pp.at(t)), &spec), Ok(()));
        }

        #[test]
        fn evaluation_is_clamped(p in arb_path(), extra in arb_param()) {
            prop_assert_eq!(p.eval(&p.shape().add(&extra)), p.target());
        }

        #[test]
        fn reverse_is_involutive(p in arb_path()) {
            prop_assert_eq!(p.reverse().reverse().exact_eq(&p), Ok(()));
            prop_assert_eq!(p.reverse().source(), p.target());
        }

        #[test]
        fn serde_round_trips(p in arb_path()) {
            let json = serde_json::to_string(&p).unwrap();
            prop_assert_eq!(serde_json::from_str::<PiecewisePath>(&json).unwrap(), p);
        }
    }
}
