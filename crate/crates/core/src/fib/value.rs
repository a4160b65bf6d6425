//! Semantic values and types of the model.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::path::{self, babs, idp, path_eq_by, MoorePath, SampleSpec};
use crate::ring::NonnegElem;
use crate::universe::{self, UCode};

/// A path whose points are computed lazily and may fail.
pub type VPath = MoorePath<Result<Value, EvalError>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("constructor changes along a path in the universe at {at}: expected {expected}, found {found}")]
    ConstructorChange { at: NonnegElem, expected: &'static str, found: &'static str },
    #[error("recursion depth limit {limit} exceeded")]
    DepthExceeded { limit: usize },
    #[error("expected {expected}, found {found}")]
    Mismatch { expected: &'static str, found: &'static str },
    #[error("eliminated an element of the empty type")]
    Absurd,
}

type FunImpl = dyn Fn(&Value) -> Result<Value, EvalError> + Send + Sync;

/// A semantic function.
#[derive(Clone)]
pub struct FunValue(Arc<FunImpl>);

impl FunValue {
    pub fn new(f: impl Fn(&Value) -> Result<Value, EvalError> + Send + Sync + 'static) -> Self {
        FunValue(Arc::new(f))
    }

    pub fn constant(v: Value) -> Self {
        FunValue::new(move |_| Ok(v.clone()))
    }

    pub fn identity() -> Self {
        FunValue::new(|x| Ok(x.clone()))
    }

    pub fn apply(&self, x: &Value) -> Result<Value, EvalError> {
        (self.0)(x)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &FunValue) -> FunValue {
        let (f, g) = (self.clone(), inner.clone());
        FunValue::new(move |x| f.apply(&g.apply(x)?))
    }
}

impl fmt::Debug for FunValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<fun>")
    }
}

#[derive(Clone)]
pub enum Value {
    Unit,
    Bool(bool),
    Nat(u64),
    Scalar(NonnegElem),
    Pair(Arc<Value>, Arc<Value>),
    Inl(Arc<Value>),
    Inr(Arc<Value>),
    Fun(FunValue),
    Path(VPath),
    Sup(Arc<Value>, FunValue),
    Code(UCode),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn inl(a: Value) -> Value {
        Value::Inl(Arc::new(a))
    }

    pub fn inr(a: Value) -> Value {
        Value::Inr(Arc::new(a))
    }

    pub fn fun(f: impl Fn(&Value) -> Result<Value, EvalError> + Send + Sync + 'static) -> Value {
        Value::Fun(FunValue::new(f))
    }

    pub fn sup(a: Value, f: FunValue) -> Value {
        Value::Sup(Arc::new(a), f)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Unit => "unit",
            Value::Bool(_) => "boolean",
            Value::Nat(_) => "natural number",
            Value::Scalar(_) => "scalar",
            Value::Pair(..) => "pair",
            Value::Inl(_) | Value::Inr(_) => "injection",
            Value::Fun(_) => "function",
            Value::Path(_) => "path",
            Value::Sup(..) => "tree",
            Value::Code(_) => "code",
        }
    }

    fn mismatch<T>(&self, expected: &'static str) -> Result<T, EvalError> {
        Err(EvalError::Mismatch { expected, found: self.kind() })
    }

    pub fn as_bool(&self) -> Result<bool, EvalError> {
        match self {
            Value::Bool(b) => Ok(*b),
            v => v.mismatch("boolean"),
        }
    }

    pub fn as_nat(&self) -> Result<u64, EvalError> {
        match self {
            Value::Nat(n) => Ok(*n),
            v => v.mismatch("natural number"),
        }
    }

    pub fn as_scalar(&self) -> Result<&NonnegElem, EvalError> {
        match self {
            Value::Scalar(s) => Ok(s),
            v => v.mismatch("scalar"),
        }
    }

    pub fn as_pair(&self) -> Result<(&Value, &Value), EvalError> {
        match self {
            Value::Pair(a, b) => Ok((a, b)),
            v => v.mismatch("pair"),
        }
    }

    pub fn fst(&self) -> Result<Value, EvalError> {
        self.as_pair().map(|(a, _)| a.clone())
    }

    pub fn snd(&self) -> Result<Value, EvalError> {
        self.as_pair().map(|(_, b)| b.clone())
    }

    pub fn as_fun(&self) -> Result<&FunValue, EvalError> {
        match self {
            Value::Fun(f) => Ok(f),
            v => v.mismatch("function"),
        }
    }

    pub fn apply(&self, x: &Value) -> Result<Value, EvalError> {
        self.as_fun()?.apply(x)
    }

    pub fn as_path(&self) -> Result<&VPath, EvalError> {
        match self {
            Value::Path(p) => Ok(p),
            v => v.mismatch("path"),
        }
    }

    pub fn as_code(&self) -> Result<&UCode, EvalError> {
        match self {
            Value::Code(c) => Ok(c),
            v => v.mismatch("code"),
        }
    }

    /// A small integer used to vary probe functions across their domain.
    fn spread(&self) -> usize {
        match self {
            Value::Bool(b) => *b as usize,
            Value::Nat(n) => *n as usize,
            Value::Scalar(s) => s.value().numerator().iter_u64_digits().next().unwrap_or(0) as usize,
            Value::Inr(_) => 1,
            Value::Pair(a, b) => a.spread() + 3 * b.spread(),
            _ => 0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "tt"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Scalar(s) => write!(f, "{s}"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Inl(a) => write!(f, "inl {}", Atom(a)),
            Value::Inr(a) => write!(f, "inr {}", Atom(a)),
            Value::Fun(_) => write!(f, "<fun>"),
            Value::Path(p) => {
                write!(f, "{{shape = {}; samples = [", p.shape())?;
                for k in 0..5 {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    match p.at(&p.shape().mul(&NonnegElem::ratio(k, 4))) {
                        Ok(v) => write!(f, "{v}")?,
                        Err(e) => write!(f, "<error: {e}>")?,
                    }
                }
                write!(f, "]}}")
            }
            Value::Sup(a, _) => write!(f, "sup {} <fun>", Atom(a)),
            Value::Code(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Atom<'a>(&'a Value);

impl fmt::Display for Atom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Value::Inl(_) | Value::Inr(_) | Value::Sup(..) | Value::Code(UCode::Pi(..) | UCode::Eq(..)) => {
                write!(f, "({})", self.0)
            }
            v => write!(f, "{v}"),
        }
    }
}

type FamilyImpl = dyn Fn(&Value) -> Result<SemType, EvalError> + Send + Sync;

/// A type depending on a value.
#[derive(Clone)]
pub struct Family(Arc<FamilyImpl>);

impl Family {
    pub fn new(f: impl Fn(&Value) -> Result<SemType, EvalError> + Send + Sync + 'static) -> Self {
        Family(Arc::new(f))
    }

    pub fn constant(ty: SemType) -> Self {
        Family::new(move |_| Ok(ty.clone()))
    }

    pub fn at(&self, x: &Value) -> Result<SemType, EvalError> {
        (self.0)(x)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<family>")
    }
}

/// Semantic types. `Path` carries its carrier and both endpoints.
#[derive(Clone, Debug)]
pub enum SemType {
    Empty,
    Unit,
    Bool,
    Nat,
    /// The nonnegative cone of the ring.
    Cone,
    Pi(Arc<SemType>, Family),
    Sigma(Arc<SemType>, Family),
    W(Arc<SemType>, Family),
    Sum(Arc<SemType>, Arc<SemType>),
    Path(Arc<SemType>, Arc<Value>, Arc<Value>),
    Universe,
}

impl SemType {
    pub fn pi(a: SemType, b: Family) -> SemType {
        SemType::Pi(Arc::new(a), b)
    }

    pub fn arrow(a: SemType, b: SemType) -> SemType {
        SemType::Pi(Arc::new(a), Family::constant(b))
    }

    pub fn sigma(a: SemType, b: Family) -> SemType {
        SemType::Sigma(Arc::new(a), b)
    }

    pub fn product(a: SemType, b: SemType) -> SemType {
        SemType::Sigma(Arc::new(a), Family::constant(b))
    }

    pub fn w(a: SemType, b: Family) -> SemType {
        SemType::W(Arc::new(a), b)
    }

    pub fn sum(a: SemType, b: SemType) -> SemType {
        SemType::Sum(Arc::new(a), Arc::new(b))
    }

    pub fn path(a: SemType, x: Value, y: Value) -> SemType {
        SemType::Path(Arc::new(a), Arc::new(x), Arc::new(y))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            SemType::Empty => "empty",
            SemType::Unit => "unit",
            SemType::Bool => "bool",
            SemType::Nat => "nat",
            SemType::Cone => "cone",
            SemType::Pi(..) => "pi",
            SemType::Sigma(..) => "sigma",
            SemType::W(..) => "w",
            SemType::Sum(..) => "sum",
            SemType::Path(..) => "path",
            SemType::Universe => "universe",
        }
    }

    /// Every element, when the type is finite and small.
    pub fn enumerate(&self) -> Option<Vec<Value>> {
        const LIMIT: usize = 64;
        let out = match self {
            SemType::Empty => Vec::new(),
            SemType::Unit => vec![Value::Unit],
            SemType::Bool => vec![Value::Bool(false), Value::Bool(true)],
            SemType::Sum(a, b) => {
                let mut out: Vec<Value> = a.enumerate()?.into_iter().map(Value::inl).collect();
                out.extend(b.enumerate()?.into_iter().map(Value::inr));
                out
            }
            SemType::Sigma(a, b) => {
                let mut out = Vec::new();
                for x in a.enumerate()? {
                    for y in b.at(&x).ok()?.enumerate()? {
                        out.push(Value::pair(x.clone(), y));
                    }
                }
                out
            }
            _ => return None,
        };
        (out.len() <= LIMIT).then_some(out)
    }
}

/// Values at which two elements of `ty` are compared: all of them when
/// `ty` is small and finite, a deterministic sample otherwise.
pub fn probe_values(ty: &SemType, spec: &SampleSpec) -> Vec<Value> {
    probes_at(ty, spec, 2)
}

const MAX_PROBES: usize = 8;

fn probes_at(ty: &SemType, spec: &SampleSpec, depth: usize) -> Vec<Value> {
    if let Some(all) = ty.enumerate() {
        return all;
    }
    let mut rng = spec.rng();
    let mut out = match ty {
        SemType::Nat => {
            let mut v: Vec<Value> = [0, 1, 2, 5].into_iter().map(Value::Nat).collect();
            v.push(Value::Nat(rng.gen_range(3..40)));
            v
        }
        SemType::Cone => {
            let mut v: Vec<Value> = [(0, 1), (1, 2), (1, 1), (4, 1)]
                .into_iter()
                .map(|(n, d)| Value::Scalar(NonnegElem::ratio(n, d)))
                .collect();
            let d = rng.gen_range(2..12);
            v.push(Value::Scalar(NonnegElem::ratio(rng.gen_range(1..5 * d), d)));
            v
        }
        SemType::Sum(a, b) => {
            let mut v: Vec<Value> = probes_at(a, spec, depth).into_iter().take(3).map(Value::inl).collect();
            v.extend(probes_at(b, spec, depth).into_iter().take(3).map(Value::inr));
            v
        }
        SemType::Sigma(a, b) => {
            let mut v = Vec::new();
            for x in probes_at(a, spec, depth).into_iter().take(4) {
                if let Ok(bx) = b.at(&x) {
                    for y in probes_at(&bx, spec, depth).into_iter().take(2) {
                        v.push(Value::pair(x.clone(), y));
                    }
                }
            }
            v
        }
        SemType::Pi(a, b) => pi_probes(a, b, spec, depth),
        SemType::Path(a, x, y) => path_probes(a, x, y, spec, depth),
        SemType::W(a, b) => w_probes(a, b, spec, depth),
        SemType::Universe => universe::sample_codes().into_iter().map(Value::Code).collect(),
        SemType::Empty | SemType::Unit | SemType::Bool => unreachable!("finite types are enumerated"),
    };
    out.truncate(MAX_PROBES);
    out
}

fn pi_probes(a: &SemType, b: &Family, spec: &SampleSpec, depth: usize) -> Vec<Value> {
    if depth == 0 {
        return Vec::new();
    }
    // Small finite domains: every function into the probes of the codomain.
    if let Some(dom) = a.enumerate() {
        let cods: Option<Vec<Vec<Value>>> =
            dom.iter().map(|x| b.at(x).ok().map(|t| probes_at(&t, spec, depth - 1))).collect();
        if let Some(cods) = cods {
            let total: usize = cods.iter().map(Vec::len).product();
            if total <= 16 {
                let dom = Arc::new(dom);
                let a = Arc::new(a.clone());
                return (0..total)
                    .map(|mut code| {
                        let table: Vec<Value> = cods
                            .iter()
                            .map(|c| {
                                let v = c[code % c.len()].clone();
                                code /= c.len();
                                v
                            })
                            .collect();
                        let (dom, a) = (dom.clone(), a.clone());
                        let nested = spec.nested();
                        Value::fun(move |x| {
                            dom.iter()
                                .position(|d| sem_eq(&a, d, x, &nested))
                                .map(|k| table[k].clone())
                                .ok_or(EvalError::Mismatch { expected: "element of the domain", found: x.kind() })
                        })
                    })
                    .collect();
            }
        }
    }
    let b = b.clone();
    let spec = *spec;
    (0..4)
        .map(|k| {
            let b = b.clone();
            Value::fun(move |x| {
                let cod = probes_at(&b.at(x)?, &spec, depth - 1);
                if cod.is_empty() {
                    return Err(EvalError::Absurd);
                }
                Ok(cod[(k + x.spread()) % cod.len()].clone())
            })
        })
        .collect()
}

fn path_probes(a: &SemType, x: &Value, y: &Value, spec: &SampleSpec, depth: usize) -> Vec<Value> {
    let mut out = Vec::new();
    let (xv, yv) = (x.clone(), y.clone());
    if sem_eq(a, x, y, spec) {
        out.push(Value::Path(idp(Ok(xv.clone()))));
        let c = xv.clone();
        out.push(Value::Path(babs(NonnegElem::one(), move |_| Ok(c.clone()))));
        if let Some(other) = probes_at(a, spec, depth.saturating_sub(1)).into_iter().find(|o| !sem_eq(a, o, x, spec)) {
            let c = xv.clone();
            out.push(Value::Path(babs(NonnegElem::from_integer(2), move |i| {
                Ok(if i.is_zero() || i == &NonnegElem::from_integer(2) { c.clone() } else { other.clone() })
            })));
        }
    } else {
        let (c, d) = (xv.clone(), yv.clone());
        out.push(Value::Path(babs(NonnegElem::one(), move |i| Ok(if i.is_zero() { c.clone() } else { d.clone() }))));
        let (c, d) = (xv.clone(), yv.clone());
        let two = NonnegElem::from_integer(2);
        out.push(Value::Path(babs(two.clone(), move |i| Ok(if i < &two { c.clone() } else { d.clone() }))));
        if let (Value::Scalar(s), Value::Scalar(t)) = (x, y) {
            let (s, t) = (s.clone(), t.clone());
            out.push(Value::Path(babs(NonnegElem::one(), move |i| {
                let rest = NonnegElem::one().checked_sub(i).unwrap_or_else(NonnegElem::zero);
                Ok(Value::Scalar(rest.mul(&s).add(&i.mul(&t))))
            })));
        }
    }
    out
}

fn w_probes(a: &SemType, b: &Family, spec: &SampleSpec, depth: usize) -> Vec<Value> {
    let mut levels: Vec<Value> = Vec::new();
    for height in 0..=depth.min(2) {
        let mut next = Vec::new();
        for x in probes_at(a, spec, depth).into_iter().take(3) {
            let Some(children) = b.at(&x).ok().and_then(|t| t.enumerate()) else { continue };
            if children.is_empty() {
                if height == 0 {
                    next.push(Value::sup(x, FunValue::new(|_| Err(EvalError::Absurd))));
                }
            } else if height > 0 && !levels.is_empty() {
                let subtrees = levels.clone();
                next.push(Value::sup(x, FunValue::new(move |c| Ok(subtrees[c.spread() % subtrees.len()].clone()))));
            }
        }
        levels.extend(next);
    }
    levels
}

/// Type-directed equality: exact on first-order data, by probing on
/// functions and paths. Evaluation errors count as disagreement.
pub fn sem_eq(ty: &SemType, a: &Value, b: &Value, spec: &SampleSpec) -> bool {
    sem_eq_at(ty, a, b, spec, 0)
}

const MAX_EQ_DEPTH: usize = 64;

fn sem_eq_at(ty: &SemType, a: &Value, b: &Value, spec: &SampleSpec, depth: usize) -> bool {
    if depth > MAX_EQ_DEPTH {
        return false;
    }
    let d = depth + 1;
    match (ty, a, b) {
        (SemType::Empty | SemType::Unit, _, _) => true,
        (SemType::Bool, Value::Bool(x), Value::Bool(y)) => x == y,
        (SemType::Nat, Value::Nat(x), Value::Nat(y)) => x == y,
        (SemType::Cone, Value::Scalar(x), Value::Scalar(y)) => x == y,
        (SemType::Sigma(ta, tb), Value::Pair(a1, b1), Value::Pair(a2, b2)) => {
            sem_eq_at(ta, a1, a2, spec, d) && tb.at(a1).is_ok_and(|t| sem_eq_at(&t, b1, b2, spec, d))
        }
        (SemType::Sum(ta, _), Value::Inl(x), Value::Inl(y)) => sem_eq_at(ta, x, y, spec, d),
        (SemType::Sum(_, tb), Value::Inr(x), Value::Inr(y)) => sem_eq_at(tb, x, y, spec, d),
        (SemType::Pi(ta, tb), Value::Fun(f), Value::Fun(g)) => {
            probe_values(ta, &spec.nested()).iter().all(|x| match (tb.at(x), f.apply(x), g.apply(x)) {
                (Ok(t), Ok(fx), Ok(gx)) => sem_eq_at(&t, &fx, &gx, spec, d),
                _ => false,
            })
        }
        (SemType::Path(ta, _, _), Value::Path(p), Value::Path(q)) => path_eq_by(p, q, spec, |x, y| match (x, y) {
            (Ok(x), Ok(y)) => sem_eq_at(ta, x, y, &spec.nested(), d),
            _ => false,
        })
        .is_ok(),
        (SemType::W(ta, tb), Value::Sup(a1, f1), Value::Sup(a2, f2)) => {
            sem_eq_at(ta, a1, a2, spec, d)
                && tb.at(a1).is_ok_and(|t| {
                    let children = t.enumerate().unwrap_or_else(|| probe_values(&t, spec));
                    let w = ty.clone();
                    children.iter().all(|c| match (f1.apply(c), f2.apply(c)) {
                        (Ok(x), Ok(y)) => sem_eq_at(&w, &x, &y, spec, d),
                        _ => false,
                    })
                })
        }
        (SemType::Universe, Value::Code(u), Value::Code(v)) => universe::code_eq(u, v, spec),
        _ => false,
    }
}

/// `map` on value paths, propagating errors.
pub fn vmap(p: &VPath, f: impl Fn(&Value) -> Result<Value, EvalError> + Send + Sync + 'static) -> VPath {
    path::map(move |r: Result<Value, EvalError>| r.and_then(|v| f(&v)), p)
}

/// The degenerate value path.
pub fn vidp(x: Value) -> VPath {
    idp(Ok(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SampleSpec {
        SampleSpec::default()
    }

    #[test]
    fn bool_to_bool_has_four_probe_inhabitants() {
        let ty = SemType::arrow(SemType::Bool, SemType::Bool);
        let fs = probe_values(&ty, &spec());
        assert_eq!(fs.len(), 4);
        for (i, f) in fs.iter().enumerate() {
            for (j, g) in fs.iter().enumerate() {
                assert_eq!(sem_eq(&ty, f, g, &spec()), i == j);
            }
        }
    }

    #[test]
    fn identity_and_if_agree_on_bool() {
        let ty = SemType::arrow(SemType::Bool, SemType::Bool);
        let id = Value::fun(|x| Ok(x.clone()));
        let via_if = Value::fun(|x| Ok(Value::Bool(x.as_bool()?)));
        let not = Value::fun(|x| Ok(Value::Bool(!x.as_bool()?)));
        assert!(sem_eq(&ty, &id, &via_if, &spec()));
        assert!(!sem_eq(&ty, &id, &not, &spec()));
    }

    #[test]
    fn path_equality_compares_shapes_exactly() {
        let ty = SemType::path(SemType::Bool, Value::Bool(true), Value::Bool(true));
        let a = Value::Path(vidp(Value::Bool(true)));
        let b = Value::Path(babs(NonnegElem::one(), |_| Ok(Value::Bool(true))));
        assert!(sem_eq(&ty, &a, &a, &spec()));
        assert!(!sem_eq(&ty, &a, &b, &spec()));
    }

    #[test]
    fn path_probes_inhabit_their_type() {
        let spec = spec();
        for (x, y) in [(true, true), (true, false)] {
            for p in probe_values(&SemType::path(SemType::Bool, Value::Bool(x), Value::Bool(y)), &spec) {
                let p = p.as_path().unwrap();
                assert_eq!(p.source().unwrap().as_bool().unwrap(), x);
                assert_eq!(p.target().unwrap().as_bool().unwrap(), y);
            }
        }
    }

    #[test]
    fn w_probes_are_finite_trees() {
        // Natural-number trees: `false` is a leaf, `true` has one child.
        let ty =
            SemType::w(SemType::Bool, Family::new(|b| Ok(if b.as_bool()? { SemType::Unit } else { SemType::Empty })));
        let trees = probe_values(&ty, &spec());
        assert!(trees.len() >= 2);
        fn height(t: &Value) -> usize {
            match t {
                Value::Sup(a, f) if a.as_bool().unwrap() => 1 + height(&f.apply(&Value::Unit).unwrap()),
                _ => 0,
            }
        }
        let heights: Vec<usize> = trees.iter().map(height).collect();
        assert!(heights.contains(&0) && heights.contains(&1));
        assert!(sem_eq(&ty, &trees[0], &trees[0], &spec()));
    }

    #[test]
    fn display_of_paths_samples_five_points() {
        let p = babs(NonnegElem::from_integer(2), |i| Ok(Value::Scalar(i.clone())));
        assert_eq!(Value::Path(p).to_string(), "{shape = 2; samples = [0, 1/2, 1, 3/2, 2]}");
        assert_eq!(Value::pair(Value::inl(Value::Nat(3)), Value::Unit).to_string(), "(inl 3, tt)");
    }
}
