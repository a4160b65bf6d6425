//! Bidirectional elaborating type checker.
//!
//! Checking produces core terms in which every numeral and arithmetic
//! operator carries its sort, every omitted motive is filled in, and every
//! `funext` records its domain. Definitional equality is decided by
//! evaluation into `nbe` values.

use std::fmt;
use std::sync::Arc;

use super::nbe::{self, conv, conv_ty, differing_input, eval, eval_ty, quote, quote_ty, var, Env, Ty, TyClosure, Val};
use super::parser::parse_term_in;
use super::print::{term_to_string, type_to_string};
use super::syntax::*;
use super::{SourceError, TypeError};

/// Names, types and values of the variables in scope, by level. Bound
/// variables have neutral values; definitions have their own.
#[derive(Clone, Default)]
pub struct Ctx {
    names: Vec<Name>,
    types: Vec<Ty>,
    env: Env,
}

impl Ctx {
    pub fn depth(&self) -> usize {
        self.env.len()
    }

    pub fn names(&self) -> &[Name] {
        &self.names
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    fn bind(&self, x: &Name, ty: Ty) -> Ctx {
        self.define(x, ty, var(self.depth()))
    }

    fn define(&self, x: &Name, ty: Ty, value: Val) -> Ctx {
        let mut out = self.clone();
        out.names.push(x.clone());
        out.types.push(ty);
        out.env.push(value);
        out
    }

    pub fn show(&self, v: &Val) -> String {
        term_to_string(&quote(&self.names, v), &self.names)
    }

    pub fn show_ty(&self, ty: &Ty) -> String {
        type_to_string(&quote_ty(&self.names, ty), &self.names)
    }

    fn eval(&self, t: &Term) -> Val {
        eval(&self.env, t)
    }

    fn motive(&self, m: &Motive) -> TyClosure {
        TyClosure::new(&self.env, m.names.clone(), &m.body)
    }

    /// A motive ignoring its bound variables.
    fn constant_motive(&self, arity: usize, ty: &Ty) -> Motive {
        let names = vec![name(ANON); arity];
        let mut scope = self.names.clone();
        scope.extend(names.iter().cloned());
        Motive { names, body: quote_ty(&scope, ty) }
    }
}

fn mk(span: Span, kind: TermKind) -> Arc<Term> {
    Arc::new(Term::new(span, kind))
}

fn mk_ty(span: Span, kind: TypeKind) -> Arc<TypeExpr> {
    Arc::new(TypeExpr::new(span, kind))
}

fn err<T>(span: Span, msg: impl Into<String>) -> Result<T, TypeError> {
    Err(TypeError::new(span, msg))
}

fn mismatch<T>(ctx: &Ctx, span: Span, expected: &Ty, found: &Ty) -> Result<T, TypeError> {
    err(span, format!("type mismatch: expected `{}`, found `{}`", ctx.show_ty(expected), ctx.show_ty(found)))
}

fn sort_ty(sort: Sort) -> Ty {
    match sort {
        Sort::Nat => Ty::Nat,
        Sort::Cone => Ty::Cone,
    }
}

fn sort_of(ctx: &Ctx, span: Span, ty: &Ty) -> Result<Sort, TypeError> {
    match ty {
        Ty::Nat => Ok(Sort::Nat),
        Ty::Cone => Ok(Sort::Cone),
        other => err(span, format!("arithmetic needs `Nat` or `R+`, found `{}`", ctx.show_ty(other))),
    }
}

pub fn check_ty(ctx: &Ctx, t: &TypeExpr) -> Result<Arc<TypeExpr>, TypeError> {
    use TypeKind as K;
    let kind = match &t.kind {
        K::Bool | K::Nat | K::Empty | K::Unit | K::Cone | K::U => t.kind.clone(),
        K::Pi(x, a, b) | K::Sigma(x, a, b) | K::W(x, a, b) => {
            let a2 = check_ty(ctx, a)?;
            let inner = ctx.bind(x, ctx.eval_ty(&a2));
            let b2 = check_ty(&inner, b)?;
            match &t.kind {
                K::Pi(..) => K::Pi(x.clone(), a2, b2),
                K::Sigma(..) => K::Sigma(x.clone(), a2, b2),
                _ => {
                    let branching = eval_ty(&inner.env, &b2);
                    if !nbe::is_finite(&branching) {
                        return err(
                            b.span,
                            format!("W branching type must be finite, found `{}`", inner.show_ty(&branching)),
                        );
                    }
                    K::W(x.clone(), a2, b2)
                }
            }
        }
        K::Sum(a, b) => K::Sum(check_ty(ctx, a)?, check_ty(ctx, b)?),
        K::Id(a, x, y) => {
            let a2 = check_ty(ctx, a)?;
            let av = ctx.eval_ty(&a2);
            K::Id(a2, check(ctx, x, &av)?, check(ctx, y, &av)?)
        }
        K::El(c) => K::El(check(ctx, c, &Ty::U)?),
        K::If(c, a, b) => K::If(check(ctx, c, &Ty::Bool)?, check_ty(ctx, a)?, check_ty(ctx, b)?),
    };
    Ok(mk_ty(t.span, kind))
}

impl Ctx {
    fn eval_ty(&self, t: &TypeExpr) -> Ty {
        eval_ty(&self.env, t)
    }
}

fn check_motive(ctx: &Ctx, m: &Motive, binders: &[Ty]) -> Result<Motive, TypeError> {
    let mut inner = ctx.clone();
    for (x, ty) in m.names.iter().zip(binders) {
        inner = inner.bind(x, ty.clone());
    }
    Ok(Motive { names: m.names.clone(), body: check_ty(&inner, &m.body)? })
}

pub fn infer(ctx: &Ctx, t: &Term) -> Result<(Arc<Term>, Ty), TypeError> {
    use TermKind as K;
    let span = t.span;
    Ok(match &t.kind {
        K::Var(i, _) => (mk(span, t.kind.clone()), ctx.types[ctx.depth() - 1 - i].clone()),
        K::App(f, a) => {
            let (f2, fty) = infer(ctx, f)?;
            let Ty::Pi(dom, cod) = &fty else {
                return err(f.span, format!("expected a function, found type `{}`", ctx.show_ty(&fty)));
            };
            let a2 = check(ctx, a, dom)?;
            let ty = cod.apply(&[ctx.eval(&a2)]);
            (mk(span, K::App(f2, a2)), ty)
        }
        K::Ann(a, ty) => {
            let ty2 = check_ty(ctx, ty)?;
            let tv = ctx.eval_ty(&ty2);
            (mk(span, K::Ann(check(ctx, a, &tv)?, ty2)), tv)
        }
        K::Let(x, ty, v, body) => {
            let ty2 = check_ty(ctx, ty)?;
            let tv = ctx.eval_ty(&ty2);
            let v2 = check(ctx, v, &tv)?;
            let inner = ctx.define(x, tv, ctx.eval(&v2));
            let (body2, bty) = infer(&inner, body)?;
            (mk(span, K::Let(x.clone(), ty2, v2, body2)), bty)
        }
        K::Fst(p) | K::Snd(p) => {
            let (p2, pty) = infer(ctx, p)?;
            let Ty::Sigma(a, b) = &pty else {
                return err(p.span, format!("expected a pair, found type `{}`", ctx.show_ty(&pty)));
            };
            if matches!(t.kind, K::Fst(_)) {
                ((mk(span, K::Fst(p2))), (**a).clone())
            } else {
                let first = nbe::fst(&ctx.eval(&p2));
                (mk(span, K::Snd(p2)), b.apply(&[first]))
            }
        }
        K::Tt => (mk(span, K::Tt), Ty::Unit),
        K::True | K::False => (mk(span, t.kind.clone()), Ty::Bool),
        K::Zero => (mk(span, K::Zero), Ty::Nat),
        K::Succ(n) => (mk(span, K::Succ(check(ctx, n, &Ty::Nat)?)), Ty::Nat),
        K::Num(n, _) => (mk(span, K::Num(*n, Some(Sort::Nat))), Ty::Nat),
        K::Rat(_) => (mk(span, t.kind.clone()), Ty::Cone),
        K::Arith(op, _, a, b) => {
            let numeral = |x: &Term| matches!(x.kind, K::Num(..));
            let (sort, a2, b2) = if numeral(a) && !numeral(b) {
                let (b2, bty) = infer(ctx, b)?;
                let sort = sort_of(ctx, b.span, &bty)?;
                (sort, check(ctx, a, &sort_ty(sort))?, b2)
            } else {
                let (a2, aty) = infer(ctx, a)?;
                let sort = sort_of(ctx, a.span, &aty)?;
                (sort, a2, check(ctx, b, &sort_ty(sort))?)
            };
            (mk(span, K::Arith(*op, Some(sort), a2, b2)), sort_ty(sort))
        }
        K::If(m, c, a, b) => {
            let c2 = check(ctx, c, &Ty::Bool)?;
            match m {
                Some(m) => {
                    let m2 = check_motive(ctx, m, &[Ty::Bool])?;
                    let mc = ctx.motive(&m2);
                    let a2 = check(ctx, a, &mc.apply(&[Val::True]))?;
                    let b2 = check(ctx, b, &mc.apply(&[Val::False]))?;
                    let ty = mc.apply(&[ctx.eval(&c2)]);
                    (mk(span, K::If(Some(m2), c2, a2, b2)), ty)
                }
                None => {
                    let (a2, aty) = infer(ctx, a)?;
                    let b2 = check(ctx, b, &aty)?;
                    let m2 = ctx.constant_motive(1, &aty);
                    (mk(span, K::If(Some(m2), c2, a2, b2)), aty)
                }
            }
        }
        K::Case(m, s, x, l, y, r) => {
            let (s2, sty) = infer(ctx, s)?;
            let Ty::Sum(ta, tb) = &sty else {
                return err(s.span, format!("expected a sum, found type `{}`", ctx.show_ty(&sty)));
            };
            let sv = ctx.eval(&s2);
            match m {
                Some(m) => {
                    let m2 = check_motive(ctx, m, std::slice::from_ref(&sty))?;
                    let mc = ctx.motive(&m2);
                    let d = ctx.depth();
                    let l2 = check(&ctx.bind(x, (**ta).clone()), l, &mc.apply(&[Val::Inl(Arc::new(var(d)))]))?;
                    let r2 = check(&ctx.bind(y, (**tb).clone()), r, &mc.apply(&[Val::Inr(Arc::new(var(d)))]))?;
                    (mk(span, K::Case(Some(m2), s2, x.clone(), l2, y.clone(), r2)), mc.apply(&[sv]))
                }
                None => {
                    let inner = ctx.bind(x, (**ta).clone());
                    let (l2, lty) = infer(&inner, l)?;
                    let lty = independent_of_last(&inner, &lty).ok_or_else(|| {
                        TypeError::new(l.span, "cannot infer a motive for `case`; annotate the result")
                    })?;
                    let r2 = check(&ctx.bind(y, (**tb).clone()), r, &lty)?;
                    let m2 = ctx.constant_motive(1, &lty);
                    (mk(span, K::Case(Some(m2), s2, x.clone(), l2, y.clone(), r2)), lty)
                }
            }
        }
        K::NatRec(m, n, z, x, ih, s) => {
            let n2 = check(ctx, n, &Ty::Nat)?;
            let (m2, z2) = match m {
                Some(m) => {
                    let m2 = check_motive(ctx, m, &[Ty::Nat])?;
                    let z2 = check(ctx, z, &ctx.motive(&m2).apply(&[Val::Nat(0)]))?;
                    (m2, z2)
                }
                None => {
                    let (z2, zty) = infer(ctx, z)?;
                    (ctx.constant_motive(1, &zty), z2)
                }
            };
            let mc = ctx.motive(&m2);
            let s2 = check_natrec_step(ctx, &mc, x, ih, s)?;
            let ty = mc.apply(&[ctx.eval(&n2)]);
            (mk(span, K::NatRec(Some(m2), n2, z2, x.clone(), ih.clone(), s2)), ty)
        }
        K::WRec(Some(m), w, names, body) => {
            let (w2, wty) = infer(ctx, w)?;
            let m2 = check_motive(ctx, m, std::slice::from_ref(&wty))?;
            let mc = ctx.motive(&m2);
            let body2 = check_wrec_step(ctx, &wty, &mc, names, body, w.span)?;
            let ty = mc.apply(&[ctx.eval(&w2)]);
            (mk(span, K::WRec(Some(m2), w2, names.clone(), body2)), ty)
        }
        K::Refl(a) => {
            let (a2, aty) = infer(ctx, a)?;
            let av = Arc::new(ctx.eval(&a2));
            (mk(span, K::Refl(a2)), Ty::Id(Arc::new(aty), av.clone(), av))
        }
        K::J(m, x, d, e) => {
            let (e2, ety) = infer(ctx, e)?;
            let Ty::Id(ta, a, b) = &ety else {
                return err(e.span, format!("expected an identification, found type `{}`", ctx.show_ty(&ety)));
            };
            let depth = ctx.depth();
            let id_xy = Ty::Id(ta.clone(), Arc::new(var(depth)), Arc::new(var(depth + 1)));
            let m2 = check_motive(ctx, m, &[(**ta).clone(), (**ta).clone(), id_xy])?;
            let mc = ctx.motive(&m2);
            let base = mc.apply(&[var(depth), var(depth), Val::Refl(Arc::new(var(depth)))]);
            let d2 = check(&ctx.bind(x, (**ta).clone()), d, &base)?;
            let ty = mc.apply(&[(**a).clone(), (**b).clone(), ctx.eval(&e2)]);
            (mk(span, K::J(m2, x.clone(), d2, e2)), ty)
        }
        K::Happly(p, x) => {
            let (p2, pty) = infer(ctx, p)?;
            let Ty::Id(fty, f, g) = &pty else {
                return err(p.span, format!("expected an identification of functions, found `{}`", ctx.show_ty(&pty)));
            };
            let Ty::Pi(dom, cod) = &**fty else {
                return err(p.span, format!("expected an identification of functions, found `{}`", ctx.show_ty(&pty)));
            };
            let x2 = check(ctx, x, dom)?;
            let xv = ctx.eval(&x2);
            let ty = Ty::Id(
                Arc::new(cod.apply(std::slice::from_ref(&xv))),
                Arc::new(nbe::apply(f, &xv)),
                Arc::new(nbe::apply(g, &xv)),
            );
            (mk(span, K::Happly(p2, x2)), ty)
        }
        K::Seg(i) => {
            let i2 = check(ctx, i, &Ty::Cone)?;
            let zero = Arc::new(Val::Scalar(crate::ring::NonnegElem::zero()));
            let iv = Arc::new(ctx.eval(&i2));
            (mk(span, K::Seg(i2)), Ty::Id(Arc::new(Ty::Cone), zero, iv))
        }
        K::CodeBool => (mk(span, K::CodeBool), Ty::U),
        K::CodePi(u, x, body) => {
            let u2 = check(ctx, u, &Ty::U)?;
            let dom = nbe::el(&ctx.eval(&u2));
            let body2 = check(&ctx.bind(x, dom), body, &Ty::U)?;
            (mk(span, K::CodePi(u2, x.clone(), body2)), Ty::U)
        }
        K::CodeEq(u, a, b) => {
            let u2 = check(ctx, u, &Ty::U)?;
            let ty = nbe::el(&ctx.eval(&u2));
            (mk(span, K::CodeEq(u2, check(ctx, a, &ty)?, check(ctx, b, &ty)?)), Ty::U)
        }
        K::Lam(..)
        | K::Pair(..)
        | K::Inl(_)
        | K::Inr(_)
        | K::Absurd(_)
        | K::Funext(..)
        | K::Sup(..)
        | K::WRec(None, ..) => {
            return err(span, format!("cannot infer the type of {}; add an annotation", describe(&t.kind)));
        }
    })
}

fn describe(k: &TermKind) -> &'static str {
    use TermKind as K;
    match k {
        K::Lam(..) => "a function",
        K::Pair(..) => "a pair",
        K::Inl(_) | K::Inr(_) => "an injection",
        K::Absurd(_) => "`absurd`",
        K::Funext(..) => "`funext`",
        K::Sup(..) => "`sup`",
        K::WRec(..) => "`wrec` without a motive",
        _ => "this term",
    }
}

/// `ty`, if it does not mention the innermost variable of `ctx`.
fn independent_of_last(ctx: &Ctx, ty: &Ty) -> Option<Ty> {
    let d = ctx.depth();
    let quoted = quote_ty(&ctx.names, ty);
    let mut env = ctx.env.clone();
    *env.last_mut()? = var(d);
    let renamed = eval_ty(&env, &quoted);
    conv_ty(d + 1, &renamed, ty).then(|| ty.clone())
}

fn check_natrec_step(ctx: &Ctx, mc: &TyClosure, x: &Name, ih: &Name, s: &Term) -> Result<Arc<Term>, TypeError> {
    let d = ctx.depth();
    let inner = ctx.bind(x, Ty::Nat).bind(ih, mc.apply(&[var(d)]));
    check(&inner, s, &mc.apply(&[nbe::succ(&var(d))]))
}

fn check_wrec_step(
    ctx: &Ctx,
    wty: &Ty,
    mc: &TyClosure,
    names: &[Name; 3],
    body: &Term,
    span: Span,
) -> Result<Arc<Term>, TypeError> {
    let Ty::W(ta, tb) = wty else {
        return err(span, format!("expected a tree, found type `{}`", ctx.show_ty(wty)));
    };
    let d = ctx.depth();
    let (a, f) = (var(d), var(d + 1));
    let branch = Arc::new(tb.apply(std::slice::from_ref(&a)));
    let children = Ty::Pi(branch.clone(), TyClosure::Const(Arc::new(wty.clone())));
    let ih = Ty::Pi(branch, TyClosure::Precomposed(Arc::new(mc.clone()), Arc::new(f.clone())));
    let inner = ctx.bind(&names[0], (**ta).clone()).bind(&names[1], children).bind(&names[2], ih);
    check(&inner, body, &mc.apply(&[Val::Sup(Arc::new(a), Arc::new(f))]))
}

pub fn check(ctx: &Ctx, t: &Term, ty: &Ty) -> Result<Arc<Term>, TypeError> {
    use TermKind as K;
    let span = t.span;
    match (&t.kind, ty) {
        (K::Lam(x, body), Ty::Pi(dom, cod)) => {
            let d = ctx.depth();
            let body2 = check(&ctx.bind(x, (**dom).clone()), body, &cod.apply(&[var(d)]))?;
            Ok(mk(span, K::Lam(x.clone(), body2)))
        }
        (K::Lam(..), _) => err(span, format!("a function cannot have type `{}`", ctx.show_ty(ty))),
        (K::Pair(a, b), Ty::Sigma(ta, tb)) => {
            let a2 = check(ctx, a, ta)?;
            let b2 = check(ctx, b, &tb.apply(&[ctx.eval(&a2)]))?;
            Ok(mk(span, K::Pair(a2, b2)))
        }
        (K::Pair(..), _) => err(span, format!("a pair cannot have type `{}`", ctx.show_ty(ty))),
        (K::Inl(a), Ty::Sum(ta, _)) => Ok(mk(span, K::Inl(check(ctx, a, ta)?))),
        (K::Inr(b), Ty::Sum(_, tb)) => Ok(mk(span, K::Inr(check(ctx, b, tb)?))),
        (K::Inl(_) | K::Inr(_), _) => err(span, format!("an injection cannot have type `{}`", ctx.show_ty(ty))),
        (K::Absurd(a), _) => {
            let a2 = check(ctx, a, &Ty::Empty)?;
            Ok(mk(span, K::Absurd(a2)))
        }
        (K::Num(n, _), Ty::Nat | Ty::Cone) => {
            let sort = if matches!(ty, Ty::Nat) { Sort::Nat } else { Sort::Cone };
            Ok(mk(span, K::Num(*n, Some(sort))))
        }
        (K::Arith(op, _, a, b), Ty::Nat | Ty::Cone) => {
            let sort = if matches!(ty, Ty::Nat) { Sort::Nat } else { Sort::Cone };
            Ok(mk(span, K::Arith(*op, Some(sort), check(ctx, a, ty)?, check(ctx, b, ty)?)))
        }
        (K::Let(x, lty, v, body), _) => {
            let lty2 = check_ty(ctx, lty)?;
            let tv = ctx.eval_ty(&lty2);
            let v2 = check(ctx, v, &tv)?;
            let inner = ctx.define(x, tv, ctx.eval(&v2));
            Ok(mk(span, K::Let(x.clone(), lty2, v2, check(&inner, body, ty)?)))
        }
        (K::If(None, c, a, b), _) => {
            let c2 = check(ctx, c, &Ty::Bool)?;
            let (a2, b2) = (check(ctx, a, ty)?, check(ctx, b, ty)?);
            Ok(mk(span, K::If(Some(ctx.constant_motive(1, ty)), c2, a2, b2)))
        }
        (K::Case(None, s, x, l, y, r), _) => {
            let (s2, sty) = infer(ctx, s)?;
            let Ty::Sum(ta, tb) = &sty else {
                return err(s.span, format!("expected a sum, found type `{}`", ctx.show_ty(&sty)));
            };
            let l2 = check(&ctx.bind(x, (**ta).clone()), l, ty)?;
            let r2 = check(&ctx.bind(y, (**tb).clone()), r, ty)?;
            let m = ctx.constant_motive(1, ty);
            Ok(mk(span, K::Case(Some(m), s2, x.clone(), l2, y.clone(), r2)))
        }
        (K::NatRec(None, n, z, x, ih, s), _) => {
            let n2 = check(ctx, n, &Ty::Nat)?;
            let z2 = check(ctx, z, ty)?;
            let mc = TyClosure::Const(Arc::new(ty.clone()));
            let s2 = check_natrec_step(ctx, &mc, x, ih, s)?;
            let m = ctx.constant_motive(1, ty);
            Ok(mk(span, K::NatRec(Some(m), n2, z2, x.clone(), ih.clone(), s2)))
        }
        (K::WRec(None, w, names, body), _) => {
            let (w2, wty) = infer(ctx, w)?;
            let mc = TyClosure::Const(Arc::new(ty.clone()));
            let body2 = check_wrec_step(ctx, &wty, &mc, names, body, w.span)?;
            let m = ctx.constant_motive(1, ty);
            Ok(mk(span, K::WRec(Some(m), w2, names.clone(), body2)))
        }
        (K::Sup(a, f), Ty::W(ta, tb)) => {
            let a2 = check(ctx, a, ta)?;
            let branch = tb.apply(&[ctx.eval(&a2)]);
            let children = Ty::Pi(Arc::new(branch), TyClosure::Const(Arc::new(ty.clone())));
            Ok(mk(span, K::Sup(a2, check(ctx, f, &children)?)))
        }
        (K::Sup(..), _) => err(span, format!("a tree cannot have type `{}`", ctx.show_ty(ty))),
        (K::Refl(a), Ty::Id(ta, x, y)) => {
            let a2 = check(ctx, a, ta)?;
            let av = ctx.eval(&a2);
            for endpoint in [x, y] {
                if !conv(ctx.depth(), ta, &av, endpoint) {
                    return err(span, endpoint_message(ctx, ta, &av, endpoint));
                }
            }
            Ok(mk(span, K::Refl(a2)))
        }
        (K::Funext(h, _), Ty::Id(fty, f, g)) => {
            let Ty::Pi(dom, cod) = &**fty else {
                return err(span, format!("`funext` needs an identification of functions, not `{}`", ctx.show_ty(ty)));
            };
            let pointwise = TyClosure::Pointwise { cod: Arc::new(cod.clone()), f: f.clone(), g: g.clone() };
            let h2 = check(ctx, h, &Ty::Pi(dom.clone(), pointwise))?;
            Ok(mk(span, K::Funext(h2, Some(quote_ty(&ctx.names, dom)))))
        }
        (K::Funext(..), _) => err(span, format!("`funext` cannot have type `{}`", ctx.show_ty(ty))),
        _ => {
            let (t2, found) = infer(ctx, t)?;
            if conv_ty(ctx.depth(), &found, ty) {
                Ok(t2)
            } else {
                mismatch(ctx, span, ty, &found)
            }
        }
    }
}

fn endpoint_message(ctx: &Ctx, ty: &Ty, a: &Val, endpoint: &Val) -> String {
    let mut msg =
        format!("cannot identify `{}` with `{}` at type `{}`", ctx.show(a), ctx.show(endpoint), ctx.show_ty(ty));
    if let Some(x) = differing_input(ctx.depth(), ty, a, endpoint) {
        msg.push_str(&format!("; they differ at argument `{}`", ctx.show(&x)));
    }
    msg
}

/// A definition after elaboration.
#[derive(Debug, Clone)]
pub struct CheckedDef {
    pub span: Span,
    pub name: Name,
    pub ty: Arc<TypeExpr>,
    pub body: Arc<Term>,
}

/// A checked module, with the definitions in scope as a context.
#[derive(Clone)]
pub struct CheckedModule {
    pub defs: Vec<CheckedDef>,
    ctx: Ctx,
}

impl fmt::Debug for CheckedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.defs.iter().map(|d| &d.name)).finish()
    }
}

/// An elaborated expression checked in the scope of a module.
#[derive(Debug, Clone)]
pub struct CheckedExpr {
    pub term: Arc<Term>,
    pub ty: Arc<TypeExpr>,
}

impl CheckedModule {
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    /// Index of the last definition called `x`.
    pub fn find(&self, x: &str) -> Option<usize> {
        self.defs.iter().rposition(|d| &*d.name == x)
    }

    /// The normal form of definition `index`, printed.
    pub fn normal_form(&self, index: usize) -> String {
        let scope = &self.ctx.names[..index];
        term_to_string(&quote(&scope.to_vec(), &self.ctx.env[index]), scope)
    }

    /// The elaborated type of definition `index`, printed.
    pub fn type_of(&self, index: usize) -> String {
        type_to_string(&self.defs[index].ty, &self.ctx.names[..index])
    }

    /// Parses and infers `src` with every definition in scope.
    pub fn check_expr(&self, src: &str) -> Result<CheckedExpr, SourceError> {
        let t = parse_term_in(src, &self.ctx.names)?;
        let (term, ty) = infer(&self.ctx, &t)?;
        Ok(CheckedExpr { term, ty: quote_ty(&self.ctx.names, &ty) })
    }

    /// The normal form of an expression from `check_expr`, printed.
    pub fn normalize(&self, e: &CheckedExpr) -> String {
        self.ctx.show(&self.ctx.eval(&e.term))
    }

    pub fn show_type(&self, e: &CheckedExpr) -> String {
        type_to_string(&e.ty, &self.ctx.names)
    }
}

pub fn check_module(m: &Module) -> Result<CheckedModule, TypeError> {
    let mut ctx = Ctx::default();
    let mut defs = Vec::with_capacity(m.defs.len());
    for d in &m.defs {
        let ty = check_ty(&ctx, &d.ty)?;
        let tv = ctx.eval_ty(&ty);
        let body = check(&ctx, &d.body, &tv)?;
        let value = ctx.eval(&body);
        ctx = ctx.define(&d.name, tv, value);
        defs.push(CheckedDef { span: d.span, name: d.name.clone(), ty, body });
    }
    Ok(CheckedModule { defs, ctx })
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_module;
    use super::*;

    fn ok(src: &str) -> CheckedModule {
        match check_module(&parse_module(src).unwrap()) {
            Ok(m) => m,
            Err(e) => panic!("{e}\nsource: {src}"),
        }
    }

    fn fails(src: &str) -> TypeError {
        check_module(&parse_module(src).unwrap()).expect_err(src)
    }

    #[test]
    fn identity_and_application() {
        let m = ok("def id : Bool -> Bool = \\x. x\ndef t : Bool = id true");
        assert_eq!(m.normal_form(1), "true");
    }

    #[test]
    fn numerals_take_the_expected_sort() {
        let m = ok("def a : Nat = 2 + 3\ndef b : R+ = 1/2 + 1\ndef c : R+ = monus 1 (1/2)");
        assert_eq!(m.normal_form(0), "5");
        assert_eq!(m.normal_form(1), "3/2");
        assert_eq!(m.normal_form(2), "1/2");
    }

    #[test]
    fn pointwise_conversion_on_finite_domains() {
        ok("def p : Id (Bool -> Bool) (\\x. x) (\\x. if x then true else false) = refl (\\x. x)");
        let e = fails("def p : Id (Bool -> Bool) (\\x. x) (\\x. if x then false else true) = refl (\\x. x)");
        assert!(e.message.contains("differ at argument `true`"), "{}", e.message);
    }

    #[test]
    fn j_computes_definitionally() {
        ok("def sym : (x : Bool) -> (y : Bool) -> Id Bool x y -> Id Bool y x\n  = \\x y p. J [a b q. Id Bool b a] (a. refl a) p\n\
            def t : Id (Id Bool true true) (sym true true (refl true)) (refl true) = refl (refl true)");
    }

    #[test]
    fn funext_checks_against_pointwise_paths() {
        ok("def h : Id (Bool -> Bool) (\\x. x) (\\x. x) = funext (\\x. refl x)");
        fails("def h : Bool = funext (\\x. refl x)");
    }

    #[test]
    fn error_positions() {
        let e = fails("def a : Bool = true\ndef b : Nat = a");
        assert_eq!((e.span.line, e.span.col), (2, 15));
        assert!(e.message.contains("expected `Nat`, found `Bool`"));
    }

    #[test]
    fn w_requires_finite_branching() {
        ok("def N : U = #bool\ndef t : W (b : Bool) (If b Unit Empty) = sup false (\\e. absurd e)");
        let e = fails("def t : W (n : Nat) Nat -> Bool = \\w. true");
        assert!(e.message.contains("finite"));
    }

    #[test]
    fn motives_are_inferred_for_simple_recursors() {
        let m = ok("def double : Nat -> Nat = \\n. natrec n zero (k ih. succ (succ ih))\ndef six : Nat = double 3");
        assert_eq!(m.normal_form(1), "6");
        let printed = term_to_string(&m.defs[0].body, &[]);
        assert!(printed.contains("natrec ["), "{printed}");
    }

    #[test]
    fn expressions_in_module_scope() {
        let m = ok("def not : Bool -> Bool = \\b. if b then false else true");
        let e = m.check_expr("not (not true)").unwrap();
        assert_eq!(m.normalize(&e), "true");
        assert_eq!(m.show_type(&e), "Bool");
    }
}
