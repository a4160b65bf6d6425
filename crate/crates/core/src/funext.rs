//! Function extensionality for Moore paths: `funext`, `happly`, and the two
//! witnesses `epsilon` and `eta` that they are inverse up to paths.

use std::fmt;

use crate::fib::{vmap, EvalError, FunValue, SemType, VPath, Value};
use crate::path::{babs, MoorePath};
use crate::ring::{NonnegElem, RingElem};

/// A family of paths `e x : f x ∼ g x` indexed by the domain.
#[derive(Clone)]
pub struct PointwiseHomotopy {
    domain: SemType,
    e: FunValue,
}

impl fmt::Debug for PointwiseHomotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointwiseHomotopy").field("domain", &self.domain.tag()).finish_non_exhaustive()
    }
}

impl PointwiseHomotopy {
    pub fn new(domain: SemType, e: impl Fn(&Value) -> Result<VPath, EvalError> + Send + Sync + 'static) -> Self {
        PointwiseHomotopy { domain, e: FunValue::new(move |x| e(x).map(Value::Path)) }
    }

    /// Wraps a function already returning path values.
    pub fn from_fun(domain: SemType, e: FunValue) -> Self {
        PointwiseHomotopy { domain, e }
    }

    pub fn domain(&self) -> &SemType {
        &self.domain
    }

    pub fn at(&self, x: &Value) -> Result<VPath, EvalError> {
        Ok(self.e.apply(x)?.as_path()?.clone())
    }

    pub fn as_fun(&self) -> &FunValue {
        &self.e
    }
}

/// `1 ∸ j` without consulting any injected mutation; `j` is in `[0, 1]` at
/// every call site.
fn complement(j: &NonnegElem) -> NonnegElem {
    NonnegElem::one().checked_sub(j).unwrap_or_else(NonnegElem::zero)
}

/// `(u, v)` with `u = (1 − j) + j·s` and `v = (1 − j)·s + j`.
pub fn interpolants(j: &NonnegElem, s: &NonnegElem) -> (NonnegElem, NonnegElem) {
    let c = complement(j);
    (c.add(&j.mul(s)), c.mul(s).add(j))
}

/// `s + j·(1 − j)·(s − 1)²`, which equals `u·v`.
pub fn interpolant_product(j: &NonnegElem, s: &NonnegElem) -> RingElem {
    let (j, s) = (j.value(), s.value());
    let one = RingElem::one();
    let d = s - &one;
    s + &(&(j * &(&one - j)) * &d.square())
}

/// `⟨i ≤ 1⟩ λx. e x (i·⌞e x⌟)`.
pub fn funext(e: &PointwiseHomotopy) -> VPath {
    let e = e.clone();
    babs(NonnegElem::one(), move |i| {
        let (e, i) = (e.clone(), i.clone());
        Ok(Value::fun(move |x| {
            let p = e.at(x)?;
            p.at(&i.mul(p.shape()))
        }))
    })
}

/// `(λf. f x)' p`.
pub fn happly(p: &VPath, x: &Value) -> VPath {
    let x = x.clone();
    vmap(p, move |f| f.apply(&x))
}

/// `happly` for every argument at once.
pub fn happly_homotopy(p: &VPath, domain: SemType) -> PointwiseHomotopy {
    let p = p.clone();
    PointwiseHomotopy::new(domain, move |x| Ok(happly(&p, x)))
}

/// `⟨j ≤ 1⟩ λx. ⟨i ≤ u⟩ e x (i·v)`, a path from `happly (funext e)` to `e`.
pub fn epsilon(e: &PointwiseHomotopy) -> MoorePath<PointwiseHomotopy> {
    let e = e.clone();
    babs(NonnegElem::one(), move |j| {
        let (e2, j) = (e.clone(), j.clone());
        PointwiseHomotopy::new(e.domain.clone(), move |x| {
            let p = e2.at(x)?;
            let (u, v) = interpolants(&j, p.shape());
            Ok(babs(u, move |i| p.at(&i.mul(&v))))
        })
    })
}

/// `⟨j ≤ 1⟩ ⟨i ≤ (1 − j)·⌞p⌟ + j⟩ p (i·(1 − j + j·⌞p⌟))`, a path from `p` to
/// `funext (happly p)`.
pub fn eta(p: &VPath) -> MoorePath<VPath> {
    let p = p.clone();
    babs(NonnegElem::one(), move |j| {
        let s = p.shape();
        let (speed, shape) = interpolants(j, s);
        let p = p.clone();
        babs(shape, move |i| p.at(&i.mul(&speed)))
    })
}
