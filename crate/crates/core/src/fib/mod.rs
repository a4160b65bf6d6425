//! Fibrations: families of semantic types with transport along Moore paths,
//! and the type formers built from them.
//!
//! Context points are [`Value`]s; the comprehension `Γ.A` has points
//! `Value::Pair(x, a)`, so the identity family lives over points
//! `((x, a1), a2)` and its elements are `Value::Path`.

pub mod value;

use std::fmt;
use std::sync::Arc;

use crate::path::{babs, compose_unchecked, from, reverse, upto};

pub use value::{probe_values, sem_eq, vidp, vmap, EvalError, Family, FunValue, SemType, VPath, Value};

type TransportImpl = dyn Fn(&VPath, &Value) -> Result<Value, EvalError> + Send + Sync;

/// A family over some context together with its transport action.
/// Transport along a degenerate path is expected to be the identity; that is
/// checked by the law suite rather than enforced here.
#[derive(Clone)]
pub struct Fibration {
    fam: Family,
    transp: Arc<TransportImpl>,
}

impl fmt::Debug for Fibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<fibration>")
    }
}

impl Fibration {
    pub fn new(
        fam: Family,
        transp: impl Fn(&VPath, &Value) -> Result<Value, EvalError> + Send + Sync + 'static,
    ) -> Self {
        Fibration { fam, transp: Arc::new(transp) }
    }

    pub fn family(&self) -> &Family {
        &self.fam
    }

    pub fn fiber(&self, x: &Value) -> Result<SemType, EvalError> {
        self.fam.at(x)
    }

    /// Transports `a`, an element of the fiber over the source of `p`, to the
    /// fiber over its target.
    pub fn transport(&self, p: &VPath, a: &Value) -> Result<Value, EvalError> {
        (self.transp)(p, a)
    }
}

/// Substitution along `gamma : Δ → Γ`.
pub fn reindex(a: &Fibration, gamma: FunValue) -> Fibration {
    let fam = {
        let (fam, gamma) = (a.fam.clone(), gamma.clone());
        Family::new(move |x| fam.at(&gamma.apply(x)?))
    };
    let a = a.clone();
    Fibration::new(fam, move |p, v| {
        let g = gamma.clone();
        a.transport(&vmap(p, move |x| g.apply(x)), v)
    })
}

/// The path `(x, a) ∼ (y, transport p a)` in `Γ.A` lying over `p`.
pub fn lift(a: &Fibration, p: &VPath, x: &Value) -> VPath {
    let (a, p2, x) = (a.clone(), p.clone(), x.clone());
    babs(p.shape().clone(), move |i| Ok(Value::pair(p2.at(i)?, a.transport(&upto(i, &p2), &x)?)))
}

/// For `p` a path in `Γ.A`, the path in the fiber over the target of `fst' p`
/// from the transported source component to the target component.
pub fn snd_path(a: &Fibration, p: &VPath) -> VPath {
    let base = vmap(p, Value::fst);
    let (a, p2) = (a.clone(), p.clone());
    babs(p.shape().clone(), move |i| a.transport(&from(i, &base), &p2.at(i)?.snd()?))
}

/// The family constantly `ty`, with identity transport.
pub fn const_fib(ty: SemType) -> Fibration {
    Fibration::new(Family::constant(ty), |_, a| Ok(a.clone()))
}

/// Pairs the context point with an element of its fiber.
fn extend(x: &Value, a: &Value) -> Value {
    Value::pair(x.clone(), a.clone())
}

/// `Σ A B` for `B` over `Γ.A`.
pub fn sigma_fib(a: &Fibration, b: &Fibration) -> Fibration {
    let fam = {
        let (a, b) = (a.clone(), b.clone());
        Family::new(move |x| {
            let (x, b) = (x.clone(), b.clone());
            Ok(SemType::sigma(a.fiber(&x)?, Family::new(move |v| b.fiber(&extend(&x, v)))))
        })
    };
    let (a, b) = (a.clone(), b.clone());
    Fibration::new(fam, move |p, v| {
        let (x, y) = v.as_pair()?;
        Ok(Value::pair(a.transport(p, x)?, b.transport(&lift(&a, p, x), y)?))
    })
}

/// `Π A B` for `B` over `Γ.A`.
pub fn pi_fib(a: &Fibration, b: &Fibration) -> Fibration {
    let fam = {
        let (a, b) = (a.clone(), b.clone());
        Family::new(move |x| {
            let (x, b) = (x.clone(), b.clone());
            Ok(SemType::pi(a.fiber(&x)?, Family::new(move |v| b.fiber(&extend(&x, v)))))
        })
    };
    let (a, b) = (a.clone(), b.clone());
    Fibration::new(fam, move |p, f| {
        let f = f.as_fun()?.clone();
        let back = reverse(p);
        let (a, b) = (a.clone(), b.clone());
        Ok(Value::fun(move |x| {
            let x0 = a.transport(&back, x)?;
            b.transport(&reverse(&lift(&a, &back, x)), &f.apply(&x0)?)
        }))
    })
}

/// `A + B`, transporting each summand separately.
pub fn sum_fib(a: &Fibration, b: &Fibration) -> Fibration {
    let fam = {
        let (a, b) = (a.clone(), b.clone());
        Family::new(move |x| Ok(SemType::sum(a.fiber(x)?, b.fiber(x)?)))
    };
    let (a, b) = (a.clone(), b.clone());
    Fibration::new(fam, move |p, v| match v {
        Value::Inl(x) => Ok(Value::inl(a.transport(p, x)?)),
        Value::Inr(y) => Ok(Value::inr(b.transport(p, y)?)),
        v => Err(EvalError::Mismatch { expected: "injection", found: v.kind() }),
    })
}

/// `W A B` for `B` over `Γ.A`. Transport recurses lazily through the tree.
pub fn w_fib(a: &Fibration, b: &Fibration) -> Fibration {
    let fam = {
        let (a, b) = (a.clone(), b.clone());
        Family::new(move |x| {
            let (x, b) = (x.clone(), b.clone());
            Ok(SemType::w(a.fiber(&x)?, Family::new(move |v| b.fiber(&extend(&x, v)))))
        })
    };
    let (a, b) = (a.clone(), b.clone());
    Fibration::new(fam, move |p, v| w_transport(&a, &b, p, v))
}

fn w_transport(a: &Fibration, b: &Fibration, p: &VPath, v: &Value) -> Result<Value, EvalError> {
    let Value::Sup(label, children) = v else {
        return Err(EvalError::Mismatch { expected: "tree", found: v.kind() });
    };
    let back = reverse(&lift(a, p, label));
    let (a2, b2, p2, children) = (a.clone(), b.clone(), p.clone(), children.clone());
    let moved = FunValue::new(move |c| {
        let child = children.apply(&b2.transport(&back, c)?)?;
        w_transport(&a2, &b2, &p2, &child)
    });
    Ok(Value::sup(a.transport(p, label)?, moved))
}

/// The identity family `a1 ∼ a2` over `Γ.A.A`.
pub fn id_fib(a: &Fibration) -> Fibration {
    let fam = {
        let a = a.clone();
        Family::new(move |pt| {
            let (xa1, a2) = pt.as_pair()?;
            let (x, a1) = xa1.as_pair()?;
            Ok(SemType::path(a.fiber(x)?, a1.clone(), a2.clone()))
        })
    };
    let a = a.clone();
    Fibration::new(fam, move |p, q| Ok(Value::Path(id_transport(&a, p, q.as_path()?))))
}

/// `p2 • (transport p')' q • rev p1`, where `p'` is the base of `p` and
/// `p1`, `p2` are the fiber paths of its two endpoint components.
pub fn id_transport(a: &Fibration, p: &VPath, q: &VPath) -> VPath {
    let base = vmap(p, |pt| pt.fst()?.fst());
    let first = snd_path(a, &vmap(p, Value::fst));
    let second = snd_path(a, &vmap(p, |pt| Ok(Value::pair(pt.fst()?.fst()?, pt.snd()?))));
    let moved = {
        let a = a.clone();
        vmap(q, move |v| a.transport(&base, v))
    };
    compose_unchecked(&second, &compose_unchecked(&moved, &reverse(&first)))
}

/// `(((x, a), a), idp a)`.
pub fn refl(x: &Value, a: &Value) -> Value {
    Value::pair(Value::pair(extend(x, a), a.clone()), Value::Path(vidp(a.clone())))
}

/// The singleton contraction `⟨i ≤ ⌞p⌟⟩ (p i, i ▷ p)`, from `(x, idp x)` to
/// `(y, p)`.
pub fn singleton_contraction(p: &VPath) -> VPath {
    let p2 = p.clone();
    babs(p.shape().clone(), move |i| Ok(Value::pair(p2.at(i)?, Value::Path(upto(i, &p2)))))
}

/// The eliminator for `B` over `Γ.A.A.Id`: transports `beta (x, a1)` along
/// the contraction of `p`.
pub fn j_elim(b: &Fibration, beta: &FunValue, x: &Value, a1: &Value, p: &VPath) -> Result<Value, EvalError> {
    let (xa1, p2) = (extend(x, a1), p.clone());
    let contraction = {
        let xa1 = xa1.clone();
        babs(p.shape().clone(), move |i| {
            Ok(Value::pair(Value::pair(xa1.clone(), p2.at(i)?), Value::Path(upto(i, &p2))))
        })
    };
    b.transport(&contraction, &beta.apply(&xa1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::SampleSpec;
    use crate::ring::NonnegElem;

    fn spec() -> SampleSpec {
        SampleSpec::default()
    }

    fn t() -> Value {
        Value::Bool(true)
    }

    fn f() -> Value {
        Value::Bool(false)
    }

    /// Over a Bool context: fiber Bool, transport negates whenever the
    /// endpoints of the base path differ.
    fn twist() -> Fibration {
        Fibration::new(Family::constant(SemType::Bool), |p, a| {
            let moved = p.source()?.as_bool()? != p.target()?.as_bool()?;
            Ok(Value::Bool(a.as_bool()? ^ moved))
        })
    }

    fn step(x: Value, y: Value) -> VPath {
        babs(NonnegElem::one(), move |i| Ok(if i.is_zero() { x.clone() } else { y.clone() }))
    }

    #[test]
    fn constant_transport_is_identity() {
        let c = const_fib(SemType::Nat);
        let p = babs(NonnegElem::from_integer(5), |i| Ok(Value::Scalar(i.clone())));
        assert_eq!(c.transport(&p, &Value::Nat(7)).unwrap().as_nat().unwrap(), 7);
        let c = reindex(&const_fib(SemType::Bool), FunValue::new(|x| Ok(Value::Bool(!x.as_bool()?))));
        assert!(c.transport(&step(f(), t()), &t()).unwrap().as_bool().unwrap());
    }

    #[test]
    fn reindex_transports_along_the_mapped_path() {
        let not = FunValue::new(|x| Ok(Value::Bool(!x.as_bool()?)));
        let r = reindex(&twist(), not.clone());
        assert!(!r.transport(&step(f(), t()), &t()).unwrap().as_bool().unwrap());
        let rr = reindex(&r, not.clone());
        let direct = reindex(&twist(), not.after(&not));
        for p in [step(f(), t()), vidp(t())] {
            for a in [f(), t()] {
                assert_eq!(rr.transport(&p, &a).unwrap().as_bool(), direct.transport(&p, &a).unwrap().as_bool());
            }
        }
    }

    #[test]
    fn lift_of_idp_is_idp() {
        let l = lift(&twist(), &vidp(t()), &f());
        assert!(l.shape().is_zero());
        let ty = SemType::product(SemType::Bool, SemType::Bool);
        assert!(sem_eq(&ty, &l.at(&NonnegElem::one()).unwrap(), &Value::pair(t(), f()), &spec()));
    }

    #[test]
    fn lift_lies_over_p_and_ends_at_the_transport() {
        let p = step(f(), t());
        let l = lift(&twist(), &p, &f());
        let end = l.target().unwrap();
        assert!(end.fst().unwrap().as_bool().unwrap());
        assert!(end.snd().unwrap().as_bool().unwrap());
        assert!(!l.source().unwrap().snd().unwrap().as_bool().unwrap());
    }

    #[test]
    fn snd_path_of_lift_ends_at_the_transport() {
        // Shape-1 step path; at i = 0 the contraction `from(0, p)` is all of p,
        // so the source is transport p a; at i = 1 it is idp, giving the
        // target component.
        let p = step(f(), t());
        let s = snd_path(&twist(), &lift(&twist(), &p, &f()));
        assert_eq!(s.shape(), &NonnegElem::one());
        assert!(s.source().unwrap().as_bool().unwrap());
        assert!(s.target().unwrap().as_bool().unwrap());
        let idp_snd = snd_path(&twist(), &vidp(Value::pair(t(), f())));
        assert!(idp_snd.shape().is_zero() && !idp_snd.target().unwrap().as_bool().unwrap());
    }

    #[test]
    fn sigma_and_pi_of_constants_transport_trivially() {
        let sig = sigma_fib(&const_fib(SemType::Bool), &const_fib(SemType::Nat));
        let v = Value::pair(t(), Value::Nat(4));
        let out = sig.transport(&step(f(), t()), &v).unwrap();
        assert!(sem_eq(&SemType::product(SemType::Bool, SemType::Nat), &out, &v, &spec()));
        let pi = pi_fib(&const_fib(SemType::Bool), &const_fib(SemType::Bool));
        let not = Value::fun(|x| Ok(Value::Bool(!x.as_bool()?)));
        let moved = pi.transport(&step(f(), t()), &not).unwrap();
        assert!(sem_eq(&SemType::arrow(SemType::Bool, SemType::Bool), &moved, &not, &spec()));
    }

    #[test]
    fn pi_transport_matches_a_hand_unfolded_oracle() {
        // Context Bool, A = twist, B = twist reindexed along fst: a function
        // f : A(false) → B(false, -) moved along false ⇝ true.
        let b = reindex(&twist(), FunValue::new(Value::fst));
        let pi = pi_fib(&twist(), &b);
        let f_val = Value::fun(|x| Ok(Value::Bool(x.as_bool()?)));
        let moved = pi.transport(&step(f(), t()), &f_val).unwrap();
        for x in [f(), t()] {
            // Unfolded by hand: the argument is flipped going back, the
            // identity applied, and the result flipped going forward.
            let back = !x.as_bool().unwrap();
            let expected = !back;
            assert_eq!(moved.apply(&x).unwrap().as_bool().unwrap(), expected);
        }
    }

    #[test]
    fn sum_transport_preserves_injections() {
        let s = sum_fib(&twist(), &const_fib(SemType::Nat));
        let p = step(f(), t());
        assert!(matches!(s.transport(&p, &Value::inl(f())).unwrap(), Value::Inl(x) if x.as_bool().unwrap()));
        assert!(
            matches!(s.transport(&p, &Value::inr(Value::Nat(2))).unwrap(), Value::Inr(x) if x.as_nat().unwrap() == 2)
        );
    }

    #[test]
    fn w_transport_of_constant_trees_is_identity() {
        let leaves = Family::new(|v| Ok(if v.snd()?.as_bool()? { SemType::Unit } else { SemType::Empty }));
        let w = w_fib(&const_fib(SemType::Bool), &Fibration::new(leaves, |_, a| Ok(a.clone())));
        let leaf = Value::sup(f(), FunValue::new(|_| Err(EvalError::Absurd)));
        let l2 = leaf.clone();
        let one = Value::sup(t(), FunValue::new(move |_| Ok(l2.clone())));
        let o2 = one.clone();
        let two = Value::sup(t(), FunValue::new(move |_| Ok(o2.clone())));
        let ty = w.fiber(&t()).unwrap();
        for tree in [leaf, one, two] {
            let moved = w.transport(&step(f(), t()), &tree).unwrap();
            assert!(sem_eq(&ty, &moved, &tree, &spec()));
        }
    }

    #[test]
    fn id_transport_along_idp_is_identity_and_adds_shapes() {
        let a = twist();
        let idf = id_fib(&a);
        let pt = Value::pair(Value::pair(t(), f()), t());
        let q = step(f(), t());
        let out = idf.transport(&vidp(pt.clone()), &Value::Path(q.clone())).unwrap();
        assert!(sem_eq(&idf.fiber(&pt).unwrap(), &out, &Value::Path(q.clone()), &spec()));

        // Base fixed, endpoints moving: the result is p2 • q • rev p1.
        let start = Value::pair(Value::pair(t(), f()), t());
        let end = Value::pair(Value::pair(t(), t()), f());
        let p = step(start, end);
        let out = idf.transport(&p, &Value::Path(q)).unwrap();
        let out = out.as_path().unwrap();
        assert_eq!(out.shape(), &NonnegElem::from_integer(3));
        assert!(out.source().unwrap().as_bool().unwrap());
        assert!(!out.target().unwrap().as_bool().unwrap());
        // rev p1 occupies [0,1] and ends at the old a1 = false.
        assert!(!out.at(&NonnegElem::one()).unwrap().as_bool().unwrap());
    }

    #[test]
    fn j_computes_on_refl() {
        let motive = reindex(&const_fib(SemType::Nat), FunValue::new(|_| Ok(Value::Unit)));
        let beta = FunValue::new(|xa| Ok(Value::Nat(if xa.snd()?.as_bool()? { 1 } else { 0 })));
        let out = j_elim(&motive, &beta, &Value::Unit, &t(), &vidp(t())).unwrap();
        assert_eq!(out.as_nat().unwrap(), 1);
    }

    #[test]
    fn refl_sits_over_the_diagonal() {
        let r = refl(&Value::Unit, &t());
        let (xaa, p) = r.as_pair().unwrap();
        assert!(xaa.snd().unwrap().as_bool().unwrap());
        assert!(xaa.fst().unwrap().snd().unwrap().as_bool().unwrap());
        assert!(p.as_path().unwrap().shape().is_zero());
    }

    #[test]
    fn singleton_contraction_endpoints() {
        let p = step(f(), t());
        let c = singleton_contraction(&p);
        let ty = SemType::path(SemType::Bool, f(), t());
        let (x, px) = (c.source().unwrap().fst().unwrap(), c.source().unwrap().snd().unwrap());
        assert!(!x.as_bool().unwrap() && px.as_path().unwrap().shape().is_zero());
        let end = c.target().unwrap();
        assert!(sem_eq(&ty, &end.snd().unwrap(), &Value::Path(p), &spec()));
    }
}
