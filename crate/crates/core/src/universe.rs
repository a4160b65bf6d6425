//! A Tarski universe of codes closed under booleans, dependent functions and
//! identity types, with transport along paths of codes.
//!
//! Transport proceeds by cases on the constructor of the path's source. That
//! is only well defined when the constructor stays the same along the path;
//! the exact rings used here are not connected, so this is checked at probe
//! points and reported as [`EvalError::ConstructorChange`] when it fails.

use std::fmt;
use std::sync::Arc;

use crate::fib::{id_transport, sem_eq, EvalError, Family, Fibration, FunValue, SemType, VPath, Value};
use crate::path::{babs, MoorePath, SampleSpec, DEFAULT_SEED};
use crate::ring::{self, NonnegElem};

pub const DEFAULT_DEPTH_LIMIT: usize = 512;

/// Probes used by transport to confirm that a path of codes keeps its
/// constructor.
const STABILITY_PROBES: SampleSpec = SampleSpec { seed: DEFAULT_SEED, count: 8 };

/// Probes for paths derived inside another transport (domains, codomains,
/// carriers). Endpoints and breakpoints are always probed as well; a change
/// that is missed here still surfaces as `ConstructorChange` wherever a
/// `pi` or `eq` component is read.
const NESTED_STABILITY_PROBES: SampleSpec = SampleSpec { seed: DEFAULT_SEED, count: 1 };

#[derive(Clone)]
pub enum UCode {
    Bool,
    /// `pi u f` with `f` mapping elements of `T u` to codes.
    Pi(Arc<UCode>, FunValue),
    Eq(Arc<UCode>, Arc<Value>, Arc<Value>),
}

impl UCode {
    pub fn pi(u: UCode, f: FunValue) -> UCode {
        UCode::Pi(Arc::new(u), f)
    }

    pub fn eq(u: UCode, x: Value, y: Value) -> UCode {
        UCode::Eq(Arc::new(u), Arc::new(x), Arc::new(y))
    }

    /// `pi u (λ_. v)`.
    pub fn arrow(u: UCode, v: UCode) -> UCode {
        UCode::pi(u, FunValue::constant(Value::Code(v)))
    }

    pub fn constructor(&self) -> &'static str {
        match self {
            UCode::Bool => "bool",
            UCode::Pi(..) => "pi",
            UCode::Eq(..) => "eq",
        }
    }
}

impl fmt::Display for UCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UCode::Bool => write!(f, "#bool"),
            UCode::Pi(u, _) => write!(f, "#pi {} <fun>", Value::Code((**u).clone())),
            UCode::Eq(u, x, y) => write!(f, "#eq {} {x} {y}", Value::Code((**u).clone())),
        }
    }
}

impl fmt::Debug for UCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The decoding `T`.
pub fn decode(u: &UCode) -> SemType {
    match u {
        UCode::Bool => SemType::Bool,
        UCode::Pi(a, f) => {
            let f = f.clone();
            SemType::pi(decode(a), Family::new(move |x| Ok(decode(f.apply(x)?.as_code()?))))
        }
        UCode::Eq(a, x, y) => SemType::path(decode(a), (**x).clone(), (**y).clone()),
    }
}

/// Structural equality of codes, probing the families of `pi` codes.
pub fn code_eq(u: &UCode, v: &UCode, spec: &SampleSpec) -> bool {
    match (u, v) {
        (UCode::Bool, UCode::Bool) => true,
        (UCode::Pi(a, f), UCode::Pi(b, g)) => {
            code_eq(a, b, spec)
                && crate::fib::probe_values(&decode(a), &spec.nested()).iter().all(|x| match (f.apply(x), g.apply(x)) {
                    (Ok(Value::Code(c)), Ok(Value::Code(d))) => code_eq(&c, &d, spec),
                    _ => false,
                })
        }
        (UCode::Eq(a, x, y), UCode::Eq(b, x2, y2)) => {
            code_eq(a, b, spec) && {
                let t = decode(a);
                sem_eq(&t, x, x2, spec) && sem_eq(&t, y, y2, spec)
            }
        }
        _ => false,
    }
}

/// A fixed handful of codes used as probes for the universe.
pub fn sample_codes() -> Vec<UCode> {
    let t = Value::Bool(true);
    vec![
        UCode::Bool,
        UCode::arrow(UCode::Bool, UCode::Bool),
        UCode::eq(UCode::Bool, t.clone(), t.clone()),
        UCode::eq(UCode::Bool, t, Value::Bool(false)),
        UCode::pi(
            UCode::Bool,
            FunValue::new(|b| {
                Ok(Value::Code(if b.as_bool()? { UCode::Bool } else { UCode::eq(UCode::Bool, b.clone(), b.clone()) }))
            }),
        ),
    ]
}

/// The universe as a fibration over itself: fiber `T u`, transport by cases.
pub fn universe_fib() -> Fibration {
    universe_fib_at(0)
}

fn universe_fib_at(depth: usize) -> Fibration {
    Fibration::new(Family::new(|u| Ok(decode(u.as_code()?))), move |p, a| transport_at(p, a, depth))
}

/// Transport in `T` along a path of codes.
pub fn u_transport(p: &MoorePath<UCode>, a: &Value) -> Result<Value, EvalError> {
    transport_at(&code_path(p), a, 0)
}

fn code_path(p: &MoorePath<UCode>) -> VPath {
    p.map(|c| Ok(Value::Code(c)))
}

/// Checks that every probe of `p` has the constructor of its source.
pub fn check_constructor_stable(p: &MoorePath<UCode>, spec: &SampleSpec) -> Result<(), EvalError> {
    stable(&code_path(p), spec).map(|_| ())
}

pub fn constructor_stable(p: &MoorePath<UCode>, spec: &SampleSpec) -> bool {
    check_constructor_stable(p, spec).is_ok()
}

fn stable(p: &VPath, spec: &SampleSpec) -> Result<&'static str, EvalError> {
    let expected = p.source()?.as_code()?.constructor();
    for t in spec.probe_points(p.shape(), p.hints()) {
        let found = p.at(&t)?.as_code()?.constructor();
        if found != expected {
            return Err(EvalError::ConstructorChange { at: t, expected, found });
        }
    }
    Ok(expected)
}

fn change(at: &NonnegElem, expected: &'static str, found: &UCode) -> EvalError {
    EvalError::ConstructorChange { at: at.clone(), expected, found: found.constructor() }
}

fn pi_parts(p: &VPath, i: &NonnegElem) -> Result<(UCode, FunValue), EvalError> {
    match p.at(i)?.as_code()? {
        UCode::Pi(u, g) => Ok(((**u).clone(), g.clone())),
        other => Err(change(i, "pi", other)),
    }
}

fn eq_parts(p: &VPath, i: &NonnegElem) -> Result<(UCode, Value, Value), EvalError> {
    match p.at(i)?.as_code()? {
        UCode::Eq(u, x, y) => Ok(((**u).clone(), (**x).clone(), (**y).clone())),
        other => Err(change(i, "eq", other)),
    }
}

fn transport_at(p: &VPath, a: &Value, depth: usize) -> Result<Value, EvalError> {
    if depth > DEFAULT_DEPTH_LIMIT {
        return Err(EvalError::DepthExceeded { limit: DEFAULT_DEPTH_LIMIT });
    }
    let probes = if depth == 0 { &STABILITY_PROBES } else { &NESTED_STABILITY_PROBES };
    match stable(p, probes)? {
        "bool" => Ok(a.clone()),
        "pi" => {
            let f = a.as_fun()?.clone();
            let p = p.clone();
            Ok(Value::fun(move |x| pi_transport(&p, &f, x, depth)))
        }
        _ => {
            let triples = {
                let p = p.clone();
                babs(p.shape().clone(), move |i| {
                    let (u, x, y) = eq_parts(&p, i)?;
                    Ok(Value::pair(Value::pair(Value::Code(u), x), y))
                })
            };
            Ok(Value::Path(id_transport(&universe_fib_at(depth + 1), &triples, a.as_path()?)))
        }
    }
}

/// The domain component `v` of a path of `pi` codes.
fn domain_path(p: &VPath) -> VPath {
    let p = p.clone();
    babs(p.shape().clone(), move |i| Ok(Value::Code(pi_parts(&p, i)?.0)))
}

/// `x̄ k`: the argument `x`, given over the target, transported back to `k`.
pub(crate) fn pullback_arg(p: &VPath, x: &Value, k: &NonnegElem, depth: usize) -> Result<Value, EvalError> {
    let v = domain_path(p);
    let s = p.shape().clone();
    let back = babs(ring::truncated_sub(&s, k), move |j| v.at(&ring::truncated_sub(&s, j)));
    transport_at(&back, x, depth + 1)
}

fn pi_transport(p: &VPath, f: &FunValue, x: &Value, depth: usize) -> Result<Value, EvalError> {
    let codomains = {
        let (p, x) = (p.clone(), x.clone());
        babs(p.shape().clone(), move |k| {
            let (_, g) = pi_parts(&p, k)?;
            g.apply(&pullback_arg(&p, &x, k, depth)?)
        })
    };
    let x0 = pullback_arg(p, x, &NonnegElem::zero(), depth)?;
    transport_at(&codomains, &f.apply(&x0)?, depth + 1)
}

/// `x̄ k` along a path of `pi` codes, exposed for the law suite.
pub fn pi_pullback(p: &MoorePath<UCode>, x: &Value, k: &NonnegElem) -> Result<Value, EvalError> {
    pullback_arg(&code_path(p), x, k, 0)
}
