//! Interpretation of checked programs in the fibration model. A context of
//! length `n` is the nested pair `((((), v1), v2) … vn)`; types become
//! fibrations over such points and terms become functions out of them.

use std::sync::Arc;

use super::check::{CheckedExpr, CheckedModule};
use super::syntax::*;
use crate::fib::{
    const_fib, id_fib, j_elim, pi_fib, reindex, sigma_fib, sum_fib, vidp, w_fib, EvalError, Family, Fibration,
    FunValue, SemType, Value,
};
use crate::funext::{self, PointwiseHomotopy};
use crate::path::{babs, SampleSpec};
use crate::ring::{self, NonnegElem};
use crate::universe::{universe_fib, UCode};

/// A definition's value in the model at the module's context point.
#[derive(Debug, Clone)]
pub struct ModelValue {
    pub name: Name,
    pub ty: SemType,
    pub value: Value,
}

fn fun(f: impl Fn(&Value) -> Result<Value, EvalError> + Send + Sync + 'static) -> FunValue {
    FunValue::new(f)
}

fn extend(gamma: &Value, v: Value) -> Value {
    Value::pair(gamma.clone(), v)
}

fn project(i: usize) -> FunValue {
    fun(move |gamma| {
        let mut g = gamma.clone();
        for _ in 0..i {
            g = g.fst()?;
        }
        g.snd()
    })
}

/// `γ ↦ body (γ, x)` as a model function of `x`.
fn under(body: &FunValue, gamma: &Value) -> FunValue {
    let (body, gamma) = (body.clone(), gamma.clone());
    fun(move |x| body.apply(&extend(&gamma, x.clone())))
}

fn arith(op: ArithOp, sort: Sort, a: &Value, b: &Value) -> Result<Value, EvalError> {
    Ok(match sort {
        Sort::Nat => {
            let (x, y) = (a.as_nat()?, b.as_nat()?);
            Value::Nat(match op {
                ArithOp::Add => x.saturating_add(y),
                ArithOp::Mul => x.saturating_mul(y),
                ArithOp::Min => x.min(y),
                ArithOp::Monus => x.saturating_sub(y),
            })
        }
        Sort::Cone => {
            let (x, y) = (a.as_scalar()?, b.as_scalar()?);
            Value::Scalar(match op {
                ArithOp::Add => x.add(y),
                ArithOp::Mul => x.mul(y),
                ArithOp::Min => ring::min(x, y),
                ArithOp::Monus => ring::truncated_sub(x, y),
            })
        }
    })
}

fn wrec(step: &FunValue, gamma: &Value, w: &Value) -> Result<Value, EvalError> {
    let Value::Sup(a, f) = w else {
        return Err(EvalError::Mismatch { expected: "tree", found: w.kind() });
    };
    let ih = {
        let (step, gamma, f) = (step.clone(), gamma.clone(), f.clone());
        Value::Fun(fun(move |b| wrec(&step, &gamma, &f.apply(b)?)))
    };
    step.apply(&extend(&extend(&extend(gamma, (**a).clone()), Value::Fun(f.clone())), ih))
}

/// The meaning of an elaborated term.
pub fn interp_term(t: &Term) -> FunValue {
    use TermKind as K;
    let it = |t: &Arc<Term>| interp_term(t);
    match &t.kind {
        K::Var(i, _) => project(*i),
        K::Lam(_, body) => {
            let body = it(body);
            fun(move |g| Ok(Value::Fun(under(&body, g))))
        }
        K::App(f, a) => {
            let (f, a) = (it(f), it(a));
            fun(move |g| f.apply(g)?.apply(&a.apply(g)?))
        }
        K::Ann(a, _) => it(a),
        K::Let(_, _, v, body) => {
            let (v, body) = (it(v), it(body));
            fun(move |g| body.apply(&extend(g, v.apply(g)?)))
        }
        K::Pair(a, b) => {
            let (a, b) = (it(a), it(b));
            fun(move |g| Ok(Value::pair(a.apply(g)?, b.apply(g)?)))
        }
        K::Fst(p) => {
            let p = it(p);
            fun(move |g| p.apply(g)?.fst())
        }
        K::Snd(p) => {
            let p = it(p);
            fun(move |g| p.apply(g)?.snd())
        }
        K::Inl(a) => {
            let a = it(a);
            fun(move |g| Ok(Value::inl(a.apply(g)?)))
        }
        K::Inr(a) => {
            let a = it(a);
            fun(move |g| Ok(Value::inr(a.apply(g)?)))
        }
        K::Case(_, s, _, l, _, r) => {
            let (s, l, r) = (it(s), it(l), it(r));
            fun(move |g| match s.apply(g)? {
                Value::Inl(x) => l.apply(&extend(g, (*x).clone())),
                Value::Inr(y) => r.apply(&extend(g, (*y).clone())),
                v => Err(EvalError::Mismatch { expected: "injection", found: v.kind() }),
            })
        }
        K::Tt => FunValue::constant(Value::Unit),
        K::True => FunValue::constant(Value::Bool(true)),
        K::False => FunValue::constant(Value::Bool(false)),
        K::If(_, c, a, b) => {
            let (c, a, b) = (it(c), it(a), it(b));
            fun(move |g| if c.apply(g)?.as_bool()? { a.apply(g) } else { b.apply(g) })
        }
        K::Absurd(_) => fun(|_| Err(EvalError::Absurd)),
        K::Zero => FunValue::constant(Value::Nat(0)),
        K::Succ(n) => {
            let n = it(n);
            fun(move |g| Ok(Value::Nat(n.apply(g)?.as_nat()? + 1)))
        }
        K::Num(n, Some(Sort::Cone)) => FunValue::constant(Value::Scalar(NonnegElem::from_integer(*n))),
        K::Num(n, _) => FunValue::constant(Value::Nat(*n)),
        K::Rat(q) => FunValue::constant(Value::Scalar(q.clone())),
        K::Arith(op, sort, a, b) => {
            let (op, sort, a, b) = (*op, sort.unwrap_or(Sort::Nat), it(a), it(b));
            fun(move |g| arith(op, sort, &a.apply(g)?, &b.apply(g)?))
        }
        K::NatRec(_, n, z, _, _, s) => {
            let (n, z, s) = (it(n), it(z), it(s));
            fun(move |g| {
                let mut acc = z.apply(g)?;
                for k in 0..n.apply(g)?.as_nat()? {
                    acc = s.apply(&extend(&extend(g, Value::Nat(k)), acc))?;
                }
                Ok(acc)
            })
        }
        K::Sup(a, f) => {
            let (a, f) = (it(a), it(f));
            fun(move |g| Ok(Value::sup(a.apply(g)?, f.apply(g)?.as_fun()?.clone())))
        }
        K::WRec(_, w, _, body) => {
            let (w, body) = (it(w), it(body));
            fun(move |g| wrec(&body, g, &w.apply(g)?))
        }
        K::Refl(a) => {
            let a = it(a);
            fun(move |g| Ok(Value::Path(vidp(a.apply(g)?))))
        }
        K::J(m, _, d, e) => {
            let (motive, d, e) = (interp_ty(&m.body), it(d), it(e));
            fun(move |g| {
                let p = e.apply(g)?.as_path()?.clone();
                j_elim(&motive, &d, g, &p.source()?, &p)
            })
        }
        K::Funext(h, dom) => {
            let h = it(h);
            let dom = dom.as_ref().map(|d| interp_ty(d));
            fun(move |g| {
                let domain = match &dom {
                    Some(d) => d.fiber(g)?,
                    None => return Err(EvalError::Mismatch { expected: "elaborated funext", found: "funext" }),
                };
                let hv = h.apply(g)?.as_fun()?.clone();
                let e = PointwiseHomotopy::new(domain, move |x| Ok(hv.apply(x)?.as_path()?.clone()));
                Ok(Value::Path(funext::funext(&e)))
            })
        }
        K::Happly(p, x) => {
            let (p, x) = (it(p), it(x));
            fun(move |g| Ok(Value::Path(funext::happly(p.apply(g)?.as_path()?, &x.apply(g)?))))
        }
        K::Seg(i) => {
            let i = it(i);
            fun(move |g| {
                let shape = i.apply(g)?.as_scalar()?.clone();
                Ok(Value::Path(babs(shape, |j| Ok(Value::Scalar(j.clone())))))
            })
        }
        K::CodeBool => FunValue::constant(Value::Code(UCode::Bool)),
        K::CodePi(u, _, body) => {
            let (u, body) = (it(u), it(body));
            fun(move |g| Ok(Value::Code(UCode::pi(u.apply(g)?.as_code()?.clone(), under(&body, g)))))
        }
        K::CodeEq(u, a, b) => {
            let (u, a, b) = (it(u), it(a), it(b));
            fun(move |g| Ok(Value::Code(UCode::eq(u.apply(g)?.as_code()?.clone(), a.apply(g)?, b.apply(g)?))))
        }
    }
}

fn reindex_by(a: &Fibration, f: impl Fn(&Value) -> Result<Value, EvalError> + Send + Sync + 'static) -> Fibration {
    reindex(a, fun(f))
}

/// The meaning of an elaborated type.
pub fn interp_ty(t: &TypeExpr) -> Fibration {
    use TypeKind as K;
    match &t.kind {
        K::Bool => const_fib(SemType::Bool),
        K::Nat => const_fib(SemType::Nat),
        K::Empty => const_fib(SemType::Empty),
        K::Unit => const_fib(SemType::Unit),
        K::Cone => const_fib(SemType::Cone),
        K::U => const_fib(SemType::Universe),
        K::Pi(_, a, b) => pi_fib(&interp_ty(a), &interp_ty(b)),
        K::Sigma(_, a, b) => sigma_fib(&interp_ty(a), &interp_ty(b)),
        K::W(_, a, b) => w_fib(&interp_ty(a), &interp_ty(b)),
        K::Sum(a, b) => sum_fib(&interp_ty(a), &interp_ty(b)),
        K::Id(a, x, y) => {
            let (x, y) = (interp_term(x), interp_term(y));
            reindex_by(&id_fib(&interp_ty(a)), move |g| Ok(extend(&extend(g, x.apply(g)?), y.apply(g)?)))
        }
        K::El(c) => reindex(&universe_fib(), interp_term(c)),
        K::If(c, a, b) => if_fib(interp_term(c), interp_ty(a), interp_ty(b)),
    }
}

/// Probes used to confirm that a type-level `If` keeps its branch along a
/// path.
const BRANCH_PROBES: SampleSpec = SampleSpec { seed: crate::path::DEFAULT_SEED, count: 8 };

fn if_fib(c: FunValue, a: Fibration, b: Fibration) -> Fibration {
    let fam = {
        let (c, a, b) = (c.clone(), a.clone(), b.clone());
        Family::new(move |g| if c.apply(g)?.as_bool()? { a.fiber(g) } else { b.fiber(g) })
    };
    Fibration::new(fam, move |p, v| {
        let name = |b: bool| if b { "true" } else { "false" };
        let start = c.apply(&p.source()?)?.as_bool()?;
        for t in BRANCH_PROBES.probe_points(p.shape(), p.hints()) {
            let here = c.apply(&p.at(&t)?)?.as_bool()?;
            if here != start {
                return Err(EvalError::ConstructorChange { at: t, expected: name(start), found: name(here) });
            }
        }
        if start {
            a.transport(p, v)
        } else {
            b.transport(p, v)
        }
    })
}

/// Evaluates every definition of a module in the model, returning the
/// final context point together with the values.
pub fn evaluate_module(m: &CheckedModule) -> Result<(Value, Vec<ModelValue>), EvalError> {
    let mut gamma = Value::Unit;
    let mut out = Vec::with_capacity(m.defs.len());
    for d in &m.defs {
        let ty = interp_ty(&d.ty).fiber(&gamma)?;
        let value = interp_term(&d.body).apply(&gamma)?;
        gamma = extend(&gamma, value.clone());
        out.push(ModelValue { name: d.name.clone(), ty, value });
    }
    Ok((gamma, out))
}

/// Evaluates an expression checked against `m` at the module's context
/// point `gamma`.
pub fn evaluate_expr(gamma: &Value, e: &CheckedExpr) -> Result<(SemType, Value), EvalError> {
    Ok((interp_ty(&e.ty).fiber(gamma)?, interp_term(&e.term).apply(gamma)?))
}

#[cfg(test)]
mod tests {
    use super::super::load;
    use super::*;
    use crate::fib::sem_eq;

    fn values(src: &str) -> Vec<ModelValue> {
        evaluate_module(&load(src).unwrap()).unwrap().1
    }

    #[test]
    fn booleans_and_numbers() {
        let vs = values("def a : Bool = if true then false else true\ndef b : R+ = 2/3 + 1/3\ndef c : Nat = natrec 3 1 (k ih. ih * 2)");
        assert_eq!(vs[0].value.to_string(), "false");
        assert_eq!(vs[1].value.to_string(), "1");
        assert_eq!(vs[2].value.to_string(), "8");
    }

    #[test]
    fn j_on_refl_is_the_base_case() {
        let vs = values("def j : Bool = J [x y p. Bool] (x. if x then false else true) (refl true)");
        assert_eq!(vs[0].value.to_string(), "false");
    }

    #[test]
    fn funext_of_the_ramp_homotopy() {
        let vs = values("def p : Id (R+ -> R+) (\\x. 0) (\\x. x) = funext (\\x. seg x)");
        let p = vs[0].value.as_path().unwrap().clone();
        assert_eq!(p.shape(), &NonnegElem::one());
        let mid = p.at(&NonnegElem::ratio(1, 2)).unwrap();
        let out = mid.apply(&Value::Scalar(NonnegElem::from_integer(4u64))).unwrap();
        assert_eq!(out.to_string(), "2");
    }

    #[test]
    fn refl_inhabits_its_identity_type() {
        let vs = values("def r : Id Bool true true = refl true");
        let spec = SampleSpec::default();
        assert!(sem_eq(&vs[0].ty, &vs[0].value, &Value::Path(vidp(Value::Bool(true))), &spec));
    }

    #[test]
    fn trees_recurse() {
        let src = "def leaf : W (b : Bool) (If b Unit Empty) = sup false (\\e. absurd e)\n\
                   def two : W (b : Bool) (If b Unit Empty) = sup true (\\u. sup true (\\v. leaf))\n\
                   def size : Nat = wrec two (a f ih. (if [b. (If b Unit Empty -> Nat) -> Nat] a then \\k. succ (k tt) else \\k. zero) ih)";
        let vs = values(src);
        assert_eq!(vs[2].value.to_string(), "2");
    }
}
