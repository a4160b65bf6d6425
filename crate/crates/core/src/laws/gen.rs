//! Random inputs for the law suite: exact paths, context paths, small
//! fibrations with decidable fibers, homotopies and universe codes.
//!
//! Contexts are the cone `R+`, whose points are `Value::Scalar`.

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fib::{
    const_fib, probe_values, reindex, vmap, EvalError, Family, Fibration, FunValue, SemType, VPath, Value,
};
use crate::funext::PointwiseHomotopy;
use crate::path::{babs, PiecewisePath, SampleSpec};
use crate::ring::{NonnegElem, RingElem, RingInstance};
use crate::universe::UCode;

/// The per-instance generator state handed to each law.
pub struct Case {
    pub rng: ChaCha8Rng,
    pub ring: RingInstance,
    pub spec: SampleSpec,
}

impl Case {
    pub fn path(&mut self) -> PiecewisePath {
        PiecewisePath::random(&mut self.rng, self.ring, None)
    }

    pub fn path_from(&mut self, source: RingElem) -> PiecewisePath {
        PiecewisePath::random(&mut self.rng, self.ring, Some(source))
    }

    pub fn scalar(&mut self) -> RingElem {
        self.ring.sample(&mut self.rng)
    }

    pub fn nonneg(&mut self) -> NonnegElem {
        self.ring.sample_nonneg(&mut self.rng)
    }

    pub fn unit(&mut self) -> NonnegElem {
        self.ring.sample_unit_interval(&mut self.rng)
    }

    pub fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs.choose(&mut self.rng).expect("nonempty choice").clone()
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    /// A random element among the probe values of `ty`.
    pub fn element(&mut self, ty: &SemType) -> Option<Value> {
        let vs = probe_values(ty, &self.spec);
        vs.choose(&mut self.rng).cloned()
    }
}

pub fn cone(x: &RingElem) -> NonnegElem {
    NonnegElem::new(if x.is_negative() { -x } else { x.clone() }).expect("absolute value is nonnegative")
}

pub fn floor(x: &NonnegElem) -> u64 {
    x.value().floor().to_u64().unwrap_or(u64::MAX)
}

/// `|p|` as a path in the context `R+`.
pub fn context_path(p: &PiecewisePath) -> VPath {
    p.to_path().map(|v| Ok(Value::Scalar(cone(&v))))
}

pub fn point(x: &RingElem) -> Value {
    Value::Scalar(cone(x))
}

/// A number summarizing a fiber element, used to make families depend on
/// earlier components of a context.
pub fn encode(v: &Value) -> u64 {
    match v {
        Value::Bool(b) => u64::from(*b),
        Value::Nat(n) => *n,
        Value::Scalar(s) => floor(s),
        Value::Pair(a, b) => encode(a).wrapping_add(encode(b)),
        Value::Path(p) => floor(p.shape()),
        _ => 0,
    }
}

/// Fibrations over `R+` with decidable fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    ConstBool,
    ConstNat,
    /// Bool fiber; transport negates when the endpoints have different
    /// integer parts.
    Flip,
    /// Nat fiber; transport adds the integer part of the shape.
    Shift,
}

impl BaseKind {
    pub const ALL: [BaseKind; 4] = [BaseKind::ConstBool, BaseKind::ConstNat, BaseKind::Flip, BaseKind::Shift];

    pub fn fiber(self) -> SemType {
        match self {
            BaseKind::ConstBool | BaseKind::Flip => SemType::Bool,
            BaseKind::ConstNat | BaseKind::Shift => SemType::Nat,
        }
    }
}

pub fn base(kind: BaseKind) -> Fibration {
    match kind {
        BaseKind::ConstBool | BaseKind::ConstNat => const_fib(kind.fiber()),
        BaseKind::Flip => Fibration::new(Family::constant(SemType::Bool), |p, a| {
            let (s, t) = (floor(p.source()?.as_scalar()?), floor(p.target()?.as_scalar()?));
            Ok(Value::Bool(a.as_bool()? != (s != t)))
        }),
        BaseKind::Shift => Fibration::new(Family::constant(SemType::Nat), |p, a| {
            Ok(Value::Nat(a.as_nat()?.saturating_add(floor(p.shape()))))
        }),
    }
}

/// The family `(γ, a) ↦ base(γ + encode a)` over `R+.A`.
pub fn dependent(kind: BaseKind) -> Fibration {
    reindex(
        &base(kind),
        FunValue::new(|pt| {
            let (g, a) = pt.as_pair()?;
            Ok(Value::Scalar(g.as_scalar()?.add(&NonnegElem::from_integer(encode(a)))))
        }),
    )
}

/// Over `R+.Bool`: `Bool` above `true` and `Empty` above `false`, so trees
/// have leaves.
pub fn branching() -> Fibration {
    let fiber = |pt: &Value| -> Result<SemType, EvalError> {
        Ok(if pt.snd()?.as_bool()? { SemType::Bool } else { SemType::Empty })
    };
    let flip = base(BaseKind::Flip);
    Fibration::new(Family::new(fiber), move |p, v| {
        let (start, end) = (p.source()?.snd()?.as_bool()?, p.target()?.snd()?.as_bool()?);
        if start != end {
            return Err(EvalError::Mismatch { expected: "constant branching", found: "changing branching" });
        }
        flip.transport(&vmap(p, Value::fst), v)
    })
}

/// A scalar substitution `δ ↦ c·δ + d` between cone contexts.
pub fn affine(c: NonnegElem, d: NonnegElem) -> FunValue {
    FunValue::new(move |x| Ok(Value::Scalar(x.as_scalar()?.mul(&c).add(&d))))
}

/// `σ.A : (δ, a) ↦ (σ δ, a)`.
pub fn weaken(sigma: &FunValue) -> FunValue {
    let sigma = sigma.clone();
    FunValue::new(move |pt| {
        let (d, a) = pt.as_pair()?;
        Ok(Value::pair(sigma.apply(d)?, a.clone()))
    })
}

/// The path `i ↦ (p i, transport (i ▷ p) a)` lifted twice, giving a path in
/// `R+.A.A` from `((x, a1), a2)`.
pub fn lift_twice(a: &Fibration, p: &VPath, a1: &Value, a2: &Value) -> VPath {
    let (a, p2, a1, a2) = (a.clone(), p.clone(), a1.clone(), a2.clone());
    babs(p.shape().clone(), move |i| {
        let seg = crate::path::upto(i, &p2);
        Ok(Value::pair(Value::pair(p2.at(i)?, a.transport(&seg, &a1)?), a.transport(&seg, &a2)?))
    })
}

/// A homotopy over `R+` whose component at `x` is the linear path of shape
/// `s0 + k·x` from `a·x` with slope `c`.
#[derive(Debug, Clone, Serialize)]
pub struct LinearHomotopy {
    pub s0: NonnegElem,
    pub k: NonnegElem,
    pub a: NonnegElem,
    pub c: NonnegElem,
}

impl LinearHomotopy {
    pub fn random(case: &mut Case) -> Self {
        LinearHomotopy { s0: case.nonneg(), k: case.nonneg(), a: case.nonneg(), c: case.nonneg() }
    }

    pub fn component(&self, x: &NonnegElem) -> VPath {
        let (start, c) = (self.a.mul(x), self.c.clone());
        babs(self.s0.add(&self.k.mul(x)), move |i| Ok(Value::Scalar(start.add(&c.mul(i)))))
    }

    pub fn homotopy(&self) -> PointwiseHomotopy {
        let me = self.clone();
        PointwiseHomotopy::new(SemType::Cone, move |x| Ok(me.component(x.as_scalar()?)))
    }
}

/// A homotopy over `Bool` between two step functions, with one shape per
/// argument.
#[derive(Debug, Clone, Serialize)]
pub struct BoolHomotopy {
    pub shapes: [NonnegElem; 2],
    pub flips: [bool; 2],
}

impl BoolHomotopy {
    pub fn random(case: &mut Case) -> Self {
        BoolHomotopy { shapes: [case.nonneg(), case.nonneg()], flips: [case.coin(), case.coin()] }
    }

    pub fn homotopy(&self) -> PointwiseHomotopy {
        let me = self.clone();
        PointwiseHomotopy::new(SemType::Bool, move |x| {
            let b = x.as_bool()?;
            let k = usize::from(b);
            let (shape, flip) = (me.shapes[k].clone(), me.flips[k]);
            let end = shape.clone();
            Ok(babs(shape, move |i| Ok(Value::Bool(if flip && i == &end && !end.is_zero() { !b } else { b }))))
        })
    }
}

/// Code families over `R+` used by the universe suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeFamily {
    Bool,
    /// `#pi #bool (b. #eq #bool b (even ⌊γ⌋))`.
    PiEq,
    /// `#pi (#pi #bool (_. #bool)) (_. #bool)`.
    PiPi,
    /// `#eq #bool (even ⌊γ⌋) true`.
    EqBool,
    /// `#eq (#pi #bool (_. #bool)) (b ↦ b xor odd ⌊γ⌋) (b ↦ b)`.
    EqFun,
}

impl CodeFamily {
    pub const PI: [CodeFamily; 2] = [CodeFamily::PiEq, CodeFamily::PiPi];
    pub const EQ: [CodeFamily; 2] = [CodeFamily::EqBool, CodeFamily::EqFun];

    pub fn at(self, g: &Value) -> Result<UCode, EvalError> {
        let even = floor(g.as_scalar()?).is_multiple_of(2);
        let bool_to_bool = || UCode::arrow(UCode::Bool, UCode::Bool);
        Ok(match self {
            CodeFamily::Bool => UCode::Bool,
            CodeFamily::PiEq => UCode::pi(
                UCode::Bool,
                FunValue::new(move |b| Ok(Value::Code(UCode::eq(UCode::Bool, b.clone(), Value::Bool(even))))),
            ),
            CodeFamily::PiPi => UCode::arrow(bool_to_bool(), UCode::Bool),
            CodeFamily::EqBool => UCode::eq(UCode::Bool, Value::Bool(even), Value::Bool(true)),
            CodeFamily::EqFun => UCode::eq(
                bool_to_bool(),
                Value::fun(move |b| Ok(Value::Bool(b.as_bool()? != !even))),
                Value::fun(|b| Ok(b.clone())),
            ),
        })
    }

    pub fn codes(self) -> FunValue {
        FunValue::new(move |g| Ok(Value::Code(self.at(g)?)))
    }

    /// For a `pi` family, the domain and codomain codes as families over
    /// `R+` and `R+.El(domain)`.
    pub fn pi_parts(self) -> Option<(FunValue, FunValue)> {
        let parts = move |g: &Value| -> Result<(UCode, FunValue), EvalError> {
            match self.at(g)? {
                UCode::Pi(u, f) => Ok(((*u).clone(), f)),
                other => Err(EvalError::Mismatch { expected: "pi", found: other.constructor() }),
            }
        };
        matches!(self, CodeFamily::PiEq | CodeFamily::PiPi).then(|| {
            let dom = FunValue::new(move |g| Ok(Value::Code(parts(g)?.0)));
            let cod = FunValue::new(move |pt| {
                let (g, a) = pt.as_pair()?;
                parts(g)?.1.apply(a)
            });
            (dom, cod)
        })
    }

    /// For an `eq` family, the carrier code and the two endpoints.
    pub fn eq_parts(self) -> Option<(FunValue, FunValue, FunValue)> {
        let parts = move |g: &Value| -> Result<(UCode, Value, Value), EvalError> {
            match self.at(g)? {
                UCode::Eq(u, x, y) => Ok(((*u).clone(), (*x).clone(), (*y).clone())),
                other => Err(EvalError::Mismatch { expected: "eq", found: other.constructor() }),
            }
        };
        matches!(self, CodeFamily::EqBool | CodeFamily::EqFun).then(|| {
            (
                FunValue::new(move |g| Ok(Value::Code(parts(g)?.0))),
                FunValue::new(move |g| Ok(parts(g)?.1)),
                FunValue::new(move |g| Ok(parts(g)?.2)),
            )
        })
    }
}
