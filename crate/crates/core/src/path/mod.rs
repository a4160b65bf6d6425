//! Moore paths and their combinator algebra.
//!
//! A [`MoorePath`] is a shape in the nonnegative cone together with an
//! evaluation function. Evaluation always clamps its argument to the shape, so
//! every path is constant from its shape onwards no matter which closure it was
//! built from.
//!
//! Equality of paths over opaque carriers is decided by probing at a
//! deterministic set of points ([`SampleSpec`]); this can refute equality but
//! never prove it. Ring-valued paths built by the [`piecewise`] backend compare
//! exactly.

pub mod piecewise;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ring::{self, NonnegElem, RingElem};

pub use piecewise::PiecewisePath;
pub use poly::Poly;

/// `"M00RE"` in ASCII.
pub const DEFAULT_SEED: u64 = 0x4D_3030_5245;
pub const DEFAULT_PROBES: usize = 64;

/// Seed and size of the pseudorandom part of a probe set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleSpec {
    pub seed: u64,
    pub count: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { seed: DEFAULT_SEED, count: DEFAULT_PROBES }
    }
}

impl SampleSpec {
    pub fn new(seed: u64, count: usize) -> Self {
        SampleSpec { seed, count }
    }

    /// A cheaper spec for comparisons nested inside another comparison.
    pub fn nested(&self) -> SampleSpec {
        SampleSpec { seed: self.seed.rotate_left(17) ^ 0x9E37_79B9, count: (self.count / 8).max(4) }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Probe points for a path of the given shape: both endpoints, every
    /// known breakpoint, one point past the shape, and `count` seeded
    /// pseudorandom rationals in `[0, shape]`.
    pub fn probe_points(&self, shape: &NonnegElem, hints: &[NonnegElem]) -> Vec<NonnegElem> {
        let mut points = Vec::with_capacity(self.count + hints.len() + 3);
        points.push(NonnegElem::zero());
        points.push(shape.clone());
        points.push(shape.add(&NonnegElem::one()));
        points.extend(hints.iter().filter(|h| *h <= shape).cloned());
        if !shape.is_zero() {
            let mut rng = self.rng();
            for _ in 0..self.count {
                let d: i64 = rng.gen_range(1..=97);
                let k: i64 = rng.gen_range(0..=d);
                points.push(shape.mul(&NonnegElem::ratio(k, d)));
            }
        }
        points.sort();
        points.dedup();
        points
    }
}

/// Equality that may be decided by probing.
pub trait Extensional {
    fn ext_eq(&self, other: &Self, spec: &SampleSpec) -> bool;
}

macro_rules! exact_extensional {
    ($($t:ty),*) => {$(
        impl Extensional for $t {
            fn ext_eq(&self, other: &Self, _: &SampleSpec) -> bool {
                self == other
            }
        }
    )*};
}

exact_extensional!(RingElem, NonnegElem, bool, u64, i64, (), String);

impl<A: Extensional, B: Extensional> Extensional for (A, B) {
    fn ext_eq(&self, other: &Self, spec: &SampleSpec) -> bool {
        self.0.ext_eq(&other.0, spec) && self.1.ext_eq(&other.1, spec)
    }
}

impl<T: Extensional, E> Extensional for Result<T, E> {
    fn ext_eq(&self, other: &Self, spec: &SampleSpec) -> bool {
        match (self, other) {
            (Ok(a), Ok(b)) => a.ext_eq(b, spec),
            _ => false,
        }
    }
}

impl<T: Extensional + ?Sized> Extensional for Arc<T> {
    fn ext_eq(&self, other: &Self, spec: &SampleSpec) -> bool {
        (**self).ext_eq(other, spec)
    }
}

impl<A: PathValue + Extensional> Extensional for MoorePath<A> {
    fn ext_eq(&self, other: &Self, spec: &SampleSpec) -> bool {
        path_eq(self, other, &spec.nested()).is_ok()
    }
}

/// Bound on values that can live in a path.
pub trait PathValue: Clone + Send + Sync + 'static {}
impl<T: Clone + Send + Sync + 'static> PathValue for T {}

type EvalFn<A> = Arc<dyn Fn(&NonnegElem) -> A + Send + Sync>;

/// A Moore path: a shape and a clamped evaluation function.
pub struct MoorePath<A> {
    shape: NonnegElem,
    eval: EvalFn<A>,
    hints: Arc<[NonnegElem]>,
}

impl<A> Clone for MoorePath<A> {
    fn clone(&self) -> Self {
        MoorePath { shape: self.shape.clone(), eval: self.eval.clone(), hints: self.hints.clone() }
    }
}

impl<A> fmt::Debug for MoorePath<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MoorePath").field("shape", &self.shape).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("cannot compose: target of the first path differs from source of the second")]
    EndpointMismatch,
}

/// Why two paths were found to differ.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathDisagreement {
    #[error("shapes differ: {left} vs {right}")]
    Shape { left: Box<NonnegElem>, right: Box<NonnegElem> },
    #[error("values differ at {at}")]
    Value { at: NonnegElem },
}

impl<A: PathValue> MoorePath<A> {
    /// Builds the path `(f, shape)`. `f` is only ever called with arguments in
    /// `[0, shape]`.
    pub fn new(shape: NonnegElem, f: impl Fn(&NonnegElem) -> A + Send + Sync + 'static) -> Self {
        MoorePath { shape, eval: Arc::new(f), hints: Arc::from(Vec::new()) }
    }

    /// Attaches known breakpoints, used only to sharpen probing.
    pub fn with_hints(mut self, hints: Vec<NonnegElem>) -> Self {
        self.hints = Arc::from(hints);
        self
    }

    pub fn shape(&self) -> &NonnegElem {
        &self.shape
    }

    pub fn hints(&self) -> &[NonnegElem] {
        &self.hints
    }

    pub fn at(&self, j: &NonnegElem) -> A {
        (self.eval)(&ring::min(j, &self.shape))
    }

    pub fn source(&self) -> A {
        self.at(&NonnegElem::zero())
    }

    pub fn target(&self) -> A {
        self.at(&self.shape)
    }

    pub fn map<B: PathValue>(&self, g: impl Fn(A) -> B + Send + Sync + 'static) -> MoorePath<B> {
        map(g, self)
    }
}

/// The degenerate path at `x`.
pub fn idp<A: PathValue>(x: A) -> MoorePath<A> {
    MoorePath::new(NonnegElem::zero(), move |_| x.clone())
}

/// `q • p`, checking that `p` ends where `q` starts.
pub fn compose<A: PathValue + Extensional>(q: &MoorePath<A>, p: &MoorePath<A>) -> Result<MoorePath<A>, PathError> {
    if p.target().ext_eq(&q.source(), &SampleSpec::default()) {
        Ok(compose_unchecked(q, p))
    } else {
        Err(PathError::EndpointMismatch)
    }
}

/// `q • p` for paths whose endpoints are known to match.
pub fn compose_unchecked<A: PathValue>(q: &MoorePath<A>, p: &MoorePath<A>) -> MoorePath<A> {
    let split = p.shape.clone();
    let shape = p.shape.add(&q.shape);
    let mut hints: Vec<NonnegElem> = p.hints.to_vec();
    hints.push(split.clone());
    hints.extend(q.hints.iter().map(|h| h.add(&split)));
    let (p, q) = (p.clone(), q.clone());
    MoorePath::new(shape, move |t| match t.checked_sub(&split) {
        Some(rest) if !rest.is_zero() => q.at(&rest),
        _ => p.at(t),
    })
    .with_hints(hints)
}

/// The reversed path: `(rev p) i = p (⌞p⌟ ∸ i)`.
pub fn reverse<A: PathValue>(p: &MoorePath<A>) -> MoorePath<A> {
    let shape = p.shape.clone();
    let hints = p.hints.iter().filter_map(|h| shape.checked_sub(h)).collect();
    let p = p.clone();
    MoorePath::new(shape.clone(), move |i| p.at(&ring::truncated_sub(&shape, i))).with_hints(hints)
}

/// Congruence: apply `g` pointwise, keeping the shape.
pub fn map<A: PathValue, B: PathValue>(g: impl Fn(A) -> B + Send + Sync + 'static, p: &MoorePath<A>) -> MoorePath<B> {
    let p2 = p.clone();
    MoorePath::new(p.shape.clone(), move |i| g(p2.at(i))).with_hints(p.hints.to_vec())
}

/// Bounded abstraction `⟨i ≤ j⟩ φ(i)`: shape `j`, evaluating `φ` at `min(i, j)`.
pub fn babs<A: PathValue>(j: NonnegElem, phi: impl Fn(&NonnegElem) -> A + Send + Sync + 'static) -> MoorePath<A> {
    let bound = j.clone();
    MoorePath::new(j, move |i| phi(&ring::min(i, &bound)))
}

/// Path contraction `i ▷ p`: the initial segment of `p` up to `i`.
pub fn upto<A: PathValue>(i: &NonnegElem, p: &MoorePath<A>) -> MoorePath<A> {
    let bound = ring::min(p.shape(), i);
    let hints = p.hints.iter().filter(|h| *h < &bound).cloned().collect();
    let p = p.clone();
    babs(bound, move |j| p.at(j)).with_hints(hints)
}

/// The final segment of `q` from `i`: `rev((⌞q⌟ ∸ i) ▷ rev q)`.
pub fn from<A: PathValue>(i: &NonnegElem, q: &MoorePath<A>) -> MoorePath<A> {
    reverse(&upto(&ring::truncated_sub(q.shape(), i), &reverse(q)))
}

/// Probe-based comparison. Shapes are compared exactly.
pub fn path_eq<A: PathValue + Extensional>(
    p: &MoorePath<A>,
    q: &MoorePath<A>,
    spec: &SampleSpec,
) -> Result<(), PathDisagreement> {
    path_eq_by(p, q, spec, |a, b| a.ext_eq(b, spec))
}

/// Like [`path_eq`] with a caller-supplied equality on the carrier.
pub fn path_eq_by<A: PathValue>(
    p: &MoorePath<A>,
    q: &MoorePath<A>,
    spec: &SampleSpec,
    eq: impl Fn(&A, &A) -> bool,
) -> Result<(), PathDisagreement> {
    if p.shape != q.shape {
        return Err(PathDisagreement::Shape { left: Box::new(p.shape.clone()), right: Box::new(q.shape.clone()) });
    }
    let mut hints = p.hints.to_vec();
    hints.extend(q.hints.iter().cloned());
    for t in spec.probe_points(&p.shape, &hints) {
        if !eq(&p.at(&t), &q.at(&t)) {
            return Err(PathDisagreement::Value { at: t });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> NonnegElem {
        NonnegElem::ratio(n, d)
    }

    /// `⟨i ≤ s⟩ i` as a ring-valued path.
    fn ramp(s: NonnegElem) -> MoorePath<NonnegElem> {
        babs(s, |i| i.clone())
    }

    fn spec() -> SampleSpec {
        SampleSpec::default()
    }

    #[test]
    fn idp_is_constant_with_shape_zero() {
        let p = idp(5u64);
        assert_eq!(p.at(&q(7, 1)), 5);
        assert!(p.shape().is_zero());
    }

    #[test]
    fn compose_adds_shapes_and_joins_at_the_split() {
        let p = ramp(q(1, 1));
        let r = map(|x: NonnegElem| x.add(&NonnegElem::one()), &ramp(q(2, 1)));
        let c = compose(&r, &p).unwrap();
        assert_eq!(c.shape(), &q(3, 1));
        assert_eq!(c.at(&q(1, 1)), p.target());
        assert_eq!(c.at(&q(1, 1)), r.source());
        assert_eq!(c.at(&q(5, 2)), q(5, 2));
        assert_eq!(c.at(&q(9, 1)), q(3, 1));
    }

    #[test]
    fn compose_rejects_mismatched_endpoints() {
        let p = ramp(q(1, 1));
        let r = ramp(q(1, 1));
        assert_eq!(compose(&r, &p).unwrap_err(), PathError::EndpointMismatch);
    }

    #[test]
    fn unit_laws() {
        let p = ramp(q(3, 2));
        assert_eq!(path_eq(&compose(&p, &idp(p.source())).unwrap(), &p, &spec()), Ok(()));
        assert_eq!(path_eq(&compose(&idp(p.target()), &p).unwrap(), &p, &spec()), Ok(()));
    }

    #[test]
    fn reverse_examples() {
        let x = idp(3u64);
        assert_eq!(path_eq(&reverse(&x), &x, &spec()), Ok(()));
        let p = ramp(q(2, 1));
        assert_eq!(reverse(&p).at(&q(1, 2)), q(3, 2));
        assert_eq!(reverse(&p).shape(), &q(2, 1));
        assert_eq!(path_eq(&reverse(&reverse(&p)), &p, &spec()), Ok(()));
    }

    #[test]
    fn map_examples() {
        let p = ramp(q(2, 1));
        assert_eq!(path_eq(&map(|x| x, &p), &p, &spec()), Ok(()));
        let g = |x: NonnegElem| x.mul(&x);
        assert_eq!(path_eq(&map(g, &idp(q(3, 1))), &idp(q(9, 1)), &spec()), Ok(()));
    }

    #[test]
    fn babs_examples() {
        let phi = |i: &NonnegElem| i.mul(&q(3, 1));
        assert_eq!(path_eq(&babs(NonnegElem::zero(), phi), &idp(NonnegElem::zero()), &spec()), Ok(()));
        let p = ramp(q(5, 3));
        let p2 = p.clone();
        assert_eq!(path_eq(&babs(p.shape().clone(), move |i| p2.at(i)), &p, &spec()), Ok(()));
    }

    #[test]
    fn upto_examples() {
        let p = ramp(q(2, 1));
        assert_eq!(path_eq(&upto(&NonnegElem::zero(), &p), &idp(NonnegElem::zero()), &spec()), Ok(()));
        assert_eq!(path_eq(&upto(&q(3, 1), &p), &p, &spec()), Ok(()));
        let u = upto(&q(1, 1), &p);
        assert_eq!(u.shape(), &q(1, 1));
        assert_eq!(u.target(), q(1, 1));
    }

    #[test]
    fn from_examples() {
        let p = ramp(q(2, 1));
        assert_eq!(path_eq(&from(&NonnegElem::zero(), &p), &p, &spec()), Ok(()));
        assert_eq!(path_eq(&from(&q(5, 2), &p), &idp(q(2, 1)), &spec()), Ok(()));
        let f = from(&q(1, 1), &p);
        assert_eq!(f.at(&q(1, 2)), q(3, 2));
        assert_eq!(f.source(), q(1, 1));
        assert_eq!(f.target(), q(2, 1));
    }

    #[test]
    fn path_eq_reports_witnesses() {
        let p = ramp(q(1, 1));
        assert_eq!(path_eq(&p, &p, &spec()), Ok(()));
        let zero = idp(NonnegElem::zero());
        let flat = babs(q(1, 1), |_| NonnegElem::zero());
        assert_eq!(
            path_eq(&zero, &flat, &spec()),
            Err(PathDisagreement::Shape { left: Box::new(NonnegElem::zero()), right: Box::new(q(1, 1)) })
        );
        match path_eq(&p, &flat, &spec()) {
            Err(PathDisagreement::Value { at }) => assert!(!at.is_zero()),
            other => panic!("expected a value witness, got {other:?}"),
        }
    }

    #[test]
    fn clamping_holds_for_arbitrary_closures() {
        let p = MoorePath::new(q(2, 1), |t: &NonnegElem| t.mul(t));
        for j in [q(2, 1), q(5, 2), q(100, 1)] {
            assert_eq!(p.at(&j), p.at(p.shape()));
        }
    }

    #[test]
    fn probe_points_are_deterministic_and_bounded() {
        let s = q(7, 3);
        let a = spec().probe_points(&s, &[q(1, 1)]);
        assert_eq!(a, spec().probe_points(&s, &[q(1, 1)]));
        assert!(a.contains(&NonnegElem::zero()) && a.contains(&s) && a.contains(&q(1, 1)));
        assert!(a.len() > 30);
        assert_eq!(spec().probe_points(&NonnegElem::zero(), &[]).len(), 2);
    }
}
