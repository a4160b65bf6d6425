//! Normalization by evaluation for the checker: values with neutral terms,
//! readback into syntax, and definitional equality.
//!
//! Only checked (elaborated) terms are evaluated, so ill-sorted redexes are
//! impossible and treated as internal errors.

use std::sync::Arc;

use super::syntax::*;
use crate::ring::{self, NonnegElem};

pub type Env = Vec<Val>;

#[derive(Clone)]
pub struct Closure {
    pub env: Env,
    pub names: Vec<Name>,
    pub body: Arc<Term>,
}

impl Closure {
    pub fn new(env: &Env, names: Vec<Name>, body: &Arc<Term>) -> Self {
        Closure { env: env.clone(), names, body: body.clone() }
    }

    pub fn apply(&self, args: &[Val]) -> Val {
        let mut env = self.env.clone();
        env.extend(args.iter().cloned());
        eval(&env, &self.body)
    }
}

/// A type depending on values.
#[derive(Clone)]
pub enum TyClosure {
    Syntax {
        env: Env,
        names: Vec<Name>,
        body: Arc<TypeExpr>,
    },
    /// `x ↦ El (c x)`, from decoding a `#pi` code.
    ElOf(Closure),
    Const(Arc<Ty>),
    /// `b ↦ inner (f b)`.
    Precomposed(Arc<TyClosure>, Arc<Val>),
    /// `x ↦ Id (cod x) (f x) (g x)`.
    Pointwise {
        cod: Arc<TyClosure>,
        f: Arc<Val>,
        g: Arc<Val>,
    },
}

impl TyClosure {
    pub fn new(env: &Env, names: Vec<Name>, body: &Arc<TypeExpr>) -> Self {
        TyClosure::Syntax { env: env.clone(), names, body: body.clone() }
    }

    pub fn names(&self) -> Vec<Name> {
        match self {
            TyClosure::Syntax { names, .. } => names.clone(),
            TyClosure::ElOf(c) => c.names.clone(),
            TyClosure::Const(_) => vec![name(ANON)],
            TyClosure::Precomposed(..) => vec![name("b")],
            TyClosure::Pointwise { cod, .. } => cod.names(),
        }
    }

    pub fn apply(&self, args: &[Val]) -> Ty {
        match self {
            TyClosure::Syntax { env, body, .. } => {
                let mut env = env.clone();
                env.extend(args.iter().cloned());
                eval_ty(&env, body)
            }
            TyClosure::ElOf(c) => el(&c.apply(args)),
            TyClosure::Const(ty) => (**ty).clone(),
            TyClosure::Precomposed(inner, f) => inner.apply(&[apply(f, &args[0])]),
            TyClosure::Pointwise { cod, f, g } => {
                Ty::Id(Arc::new(cod.apply(args)), Arc::new(apply(f, &args[0])), Arc::new(apply(g, &args[0])))
            }
        }
    }
}

#[derive(Clone)]
pub enum Val {
    Neutral(Arc<Neutral>),
    Lam(Closure),
    Pair(Arc<Val>, Arc<Val>),
    Inl(Arc<Val>),
    Inr(Arc<Val>),
    Tt,
    True,
    False,
    Nat(u64),
    /// Successor of a non-literal.
    Succ(Arc<Val>),
    Scalar(NonnegElem),
    Sup(Arc<Val>, Arc<Val>),
    Refl(Arc<Val>),
    /// A path built by `funext`; eliminators do not compute on it.
    Funext(Arc<Val>),
    /// `seg i` for `i` not known to be zero.
    Seg(Arc<Val>),
    CodeBool,
    CodePi(Arc<Val>, Closure),
    CodeEq(Arc<Val>, Arc<Val>, Arc<Val>),
    /// The induction hypothesis of `wrec`: `b ↦ wrec (f b)`.
    WRecIh {
        motive: Option<TyClosure>,
        children: Arc<Val>,
        step: Closure,
    },
}

#[derive(Clone)]
pub enum Neutral {
    Var(usize),
    App(Arc<Neutral>, Val),
    Fst(Arc<Neutral>),
    Snd(Arc<Neutral>),
    If(Option<TyClosure>, Arc<Neutral>, Val, Val),
    Case(Option<TyClosure>, Arc<Neutral>, Closure, Closure),
    Absurd(Arc<Neutral>),
    NatRec(Option<TyClosure>, Arc<Neutral>, Val, Closure),
    WRec(Option<TyClosure>, Arc<Neutral>, Closure),
    /// Stuck on a path that is neutral, a `funext` or a `seg`.
    J(TyClosure, Closure, Val),
    Happly(Val, Val),
    Arith(ArithOp, Sort, Val, Val),
}

#[derive(Clone)]
pub enum Ty {
    Bool,
    Nat,
    Empty,
    Unit,
    Cone,
    U,
    Pi(Arc<Ty>, TyClosure),
    Sigma(Arc<Ty>, TyClosure),
    W(Arc<Ty>, TyClosure),
    Sum(Arc<Ty>, Arc<Ty>),
    Id(Arc<Ty>, Arc<Val>, Arc<Val>),
    El(Arc<Neutral>),
    If(Arc<Neutral>, Arc<Ty>, Arc<Ty>),
}

pub fn var(level: usize) -> Val {
    Val::Neutral(Arc::new(Neutral::Var(level)))
}

fn ne(n: Neutral) -> Val {
    Val::Neutral(Arc::new(n))
}

fn lookup(env: &Env, i: usize) -> Val {
    env[env.len() - 1 - i].clone()
}

pub fn eval(env: &Env, t: &Term) -> Val {
    use TermKind as K;
    let ev = |t: &Arc<Term>| eval(env, t);
    let motive = |m: &Option<Motive>| m.as_ref().map(|m| TyClosure::new(env, m.names.clone(), &m.body));
    match &t.kind {
        K::Var(i, _) => lookup(env, *i),
        K::Lam(x, body) => Val::Lam(Closure::new(env, vec![x.clone()], body)),
        K::App(f, a) => apply(&ev(f), &ev(a)),
        K::Ann(a, _) => ev(a),
        K::Let(_, _, v, body) => {
            let mut env = env.clone();
            env.push(ev(v));
            eval(&env, body)
        }
        K::Pair(a, b) => Val::Pair(Arc::new(ev(a)), Arc::new(ev(b))),
        K::Fst(p) => fst(&ev(p)),
        K::Snd(p) => snd(&ev(p)),
        K::Inl(a) => Val::Inl(Arc::new(ev(a))),
        K::Inr(a) => Val::Inr(Arc::new(ev(a))),
        K::Case(m, s, x, l, y, r) => {
            do_case(motive(m), &ev(s), &Closure::new(env, vec![x.clone()], l), &Closure::new(env, vec![y.clone()], r))
        }
        K::Tt => Val::Tt,
        K::True => Val::True,
        K::False => Val::False,
        K::If(m, c, a, b) => do_if(motive(m), &ev(c), ev(a), ev(b)),
        K::Absurd(a) => match ev(a) {
            Val::Neutral(n) => ne(Neutral::Absurd(n)),
            _ => unreachable!("closed element of the empty type"),
        },
        K::Zero => Val::Nat(0),
        K::Succ(n) => succ(&ev(n)),
        K::Num(n, Some(Sort::Nat)) => Val::Nat(*n),
        K::Num(n, Some(Sort::Cone)) => Val::Scalar(NonnegElem::from_integer(*n)),
        K::Num(_, None) => unreachable!("numeral evaluated before elaboration"),
        K::Rat(q) => Val::Scalar(q.clone()),
        K::Arith(op, Some(sort), a, b) => arith(*op, *sort, &ev(a), &ev(b)),
        K::Arith(_, None, _, _) => unreachable!("arithmetic evaluated before elaboration"),
        K::NatRec(m, n, z, x, ih, s) => {
            do_natrec(motive(m), &ev(n), ev(z), &Closure::new(env, vec![x.clone(), ih.clone()], s))
        }
        K::Sup(a, f) => Val::Sup(Arc::new(ev(a)), Arc::new(ev(f))),
        K::WRec(m, w, names, body) => do_wrec(motive(m), &ev(w), &Closure::new(env, names.to_vec(), body)),
        K::Refl(a) => Val::Refl(Arc::new(ev(a))),
        K::J(m, x, d, e) => {
            do_j(TyClosure::new(env, m.names.clone(), &m.body), &Closure::new(env, vec![x.clone()], d), &ev(e))
        }
        K::Funext(h, _) => Val::Funext(Arc::new(ev(h))),
        K::Happly(p, x) => happly(&ev(p), &ev(x)),
        K::Seg(i) => seg(ev(i)),
        K::CodeBool => Val::CodeBool,
        K::CodePi(u, x, body) => Val::CodePi(Arc::new(ev(u)), Closure::new(env, vec![x.clone()], body)),
        K::CodeEq(u, a, b) => Val::CodeEq(Arc::new(ev(u)), Arc::new(ev(a)), Arc::new(ev(b))),
    }
}

pub fn eval_ty(env: &Env, t: &TypeExpr) -> Ty {
    use TypeKind as K;
    match &t.kind {
        K::Bool => Ty::Bool,
        K::Nat => Ty::Nat,
        K::Empty => Ty::Empty,
        K::Unit => Ty::Unit,
        K::Cone => Ty::Cone,
        K::U => Ty::U,
        K::Pi(x, a, b) => Ty::Pi(Arc::new(eval_ty(env, a)), TyClosure::new(env, vec![x.clone()], b)),
        K::Sigma(x, a, b) => Ty::Sigma(Arc::new(eval_ty(env, a)), TyClosure::new(env, vec![x.clone()], b)),
        K::W(x, a, b) => Ty::W(Arc::new(eval_ty(env, a)), TyClosure::new(env, vec![x.clone()], b)),
        K::Sum(a, b) => Ty::Sum(Arc::new(eval_ty(env, a)), Arc::new(eval_ty(env, b))),
        K::Id(a, x, y) => Ty::Id(Arc::new(eval_ty(env, a)), Arc::new(eval(env, x)), Arc::new(eval(env, y))),
        K::El(c) => el(&eval(env, c)),
        K::If(c, a, b) => match eval(env, c) {
            Val::True => eval_ty(env, a),
            Val::False => eval_ty(env, b),
            Val::Neutral(n) => Ty::If(n, Arc::new(eval_ty(env, a)), Arc::new(eval_ty(env, b))),
            _ => unreachable!("If on a non-boolean"),
        },
    }
}

/// Decoding of universe codes.
pub fn el(code: &Val) -> Ty {
    match code {
        Val::CodeBool => Ty::Bool,
        Val::CodePi(u, c) => Ty::Pi(Arc::new(el(u)), TyClosure::ElOf(c.clone())),
        Val::CodeEq(u, a, b) => Ty::Id(Arc::new(el(u)), a.clone(), b.clone()),
        Val::Neutral(n) => Ty::El(n.clone()),
        _ => unreachable!("El of a non-code"),
    }
}

pub fn apply(f: &Val, a: &Val) -> Val {
    match f {
        Val::Lam(c) => c.apply(std::slice::from_ref(a)),
        Val::WRecIh { motive, children, step } => do_wrec(motive.clone(), &apply(children, a), step),
        Val::Neutral(n) => ne(Neutral::App(n.clone(), a.clone())),
        _ => unreachable!("application of a non-function"),
    }
}

pub fn fst(p: &Val) -> Val {
    match p {
        Val::Pair(a, _) => (**a).clone(),
        Val::Neutral(n) => ne(Neutral::Fst(n.clone())),
        _ => unreachable!("fst of a non-pair"),
    }
}

pub fn snd(p: &Val) -> Val {
    match p {
        Val::Pair(_, b) => (**b).clone(),
        Val::Neutral(n) => ne(Neutral::Snd(n.clone())),
        _ => unreachable!("snd of a non-pair"),
    }
}

fn do_if(m: Option<TyClosure>, c: &Val, a: Val, b: Val) -> Val {
    match c {
        Val::True => a,
        Val::False => b,
        Val::Neutral(n) => ne(Neutral::If(m, n.clone(), a, b)),
        _ => unreachable!("if on a non-boolean"),
    }
}

fn do_case(m: Option<TyClosure>, s: &Val, l: &Closure, r: &Closure) -> Val {
    match s {
        Val::Inl(a) => l.apply(&[(**a).clone()]),
        Val::Inr(b) => r.apply(&[(**b).clone()]),
        Val::Neutral(n) => ne(Neutral::Case(m, n.clone(), l.clone(), r.clone())),
        _ => unreachable!("case on a non-sum"),
    }
}

pub fn succ(n: &Val) -> Val {
    match n {
        Val::Nat(k) => Val::Nat(k + 1),
        v => Val::Succ(Arc::new(v.clone())),
    }
}

fn do_natrec(m: Option<TyClosure>, n: &Val, z: Val, s: &Closure) -> Val {
    match n {
        Val::Nat(k) => (0..*k).fold(z, |acc, i| s.apply(&[Val::Nat(i), acc])),
        Val::Succ(pred) => {
            let ih = do_natrec(m, pred, z, s);
            s.apply(&[(**pred).clone(), ih])
        }
        Val::Neutral(ne_) => ne(Neutral::NatRec(m, ne_.clone(), z, s.clone())),
        _ => unreachable!("natrec on a non-number"),
    }
}

fn do_wrec(m: Option<TyClosure>, w: &Val, step: &Closure) -> Val {
    match w {
        Val::Sup(a, f) => {
            let ih = Val::WRecIh { motive: m, children: f.clone(), step: step.clone() };
            step.apply(&[(**a).clone(), (**f).clone(), ih])
        }
        Val::Neutral(n) => ne(Neutral::WRec(m, n.clone(), step.clone())),
        _ => unreachable!("wrec on a non-tree"),
    }
}

fn do_j(m: TyClosure, d: &Closure, e: &Val) -> Val {
    match e {
        Val::Refl(a) => d.apply(&[(**a).clone()]),
        v => ne(Neutral::J(m, d.clone(), v.clone())),
    }
}

fn happly(p: &Val, x: &Val) -> Val {
    match p {
        Val::Refl(f) => Val::Refl(Arc::new(apply(f, x))),
        v => ne(Neutral::Happly(v.clone(), x.clone())),
    }
}

fn seg(i: Val) -> Val {
    match &i {
        Val::Scalar(s) if s.is_zero() => Val::Refl(Arc::new(i)),
        _ => Val::Seg(Arc::new(i)),
    }
}

fn arith(op: ArithOp, sort: Sort, a: &Val, b: &Val) -> Val {
    match (sort, a, b) {
        (Sort::Nat, Val::Nat(x), Val::Nat(y)) => Val::Nat(match op {
            ArithOp::Add => x.saturating_add(*y),
            ArithOp::Mul => x.saturating_mul(*y),
            ArithOp::Min => *x.min(y),
            ArithOp::Monus => x.saturating_sub(*y),
        }),
        (Sort::Cone, Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(match op {
            ArithOp::Add => x.add(y),
            ArithOp::Mul => x.mul(y),
            ArithOp::Min => ring::min(x, y),
            ArithOp::Monus => ring::truncated_sub(x, y),
        }),
        _ => ne(Neutral::Arith(op, sort, a.clone(), b.clone())),
    }
}

// Readback

/// Names of the variables in scope, by level.
pub type Names = Vec<Name>;

fn t(kind: TermKind) -> Arc<Term> {
    Arc::new(Term::new(Span::default(), kind))
}

fn ty_node(kind: TypeKind) -> Arc<TypeExpr> {
    Arc::new(TypeExpr::new(Span::default(), kind))
}

fn fresh_vars(names: &Names, count: usize) -> Vec<Val> {
    (0..count).map(|k| var(names.len() + k)).collect()
}

fn quote_closure(names: &Names, c: &Closure) -> Arc<Term> {
    let args = fresh_vars(names, c.names.len());
    let mut inner = names.clone();
    inner.extend(c.names.iter().cloned());
    quote(&inner, &c.apply(&args))
}

fn quote_ty_closure(names: &Names, c: &TyClosure) -> Arc<TypeExpr> {
    let binders = c.names();
    let args = fresh_vars(names, binders.len());
    let mut inner = names.clone();
    inner.extend(binders);
    quote_ty(&inner, &c.apply(&args))
}

fn quote_motive(names: &Names, m: &Option<TyClosure>) -> Option<Motive> {
    m.as_ref().map(|c| Motive { names: c.names(), body: quote_ty_closure(names, c) })
}

pub fn quote(names: &Names, v: &Val) -> Arc<Term> {
    use TermKind as K;
    match v {
        Val::Neutral(n) => quote_ne(names, n),
        Val::Lam(c) => t(K::Lam(c.names[0].clone(), quote_closure(names, c))),
        Val::Pair(a, b) => t(K::Pair(quote(names, a), quote(names, b))),
        Val::Inl(a) => t(K::Inl(quote(names, a))),
        Val::Inr(a) => t(K::Inr(quote(names, a))),
        Val::Tt => t(K::Tt),
        Val::True => t(K::True),
        Val::False => t(K::False),
        Val::Nat(n) => t(K::Num(*n, Some(Sort::Nat))),
        Val::Succ(n) => t(K::Succ(quote(names, n))),
        Val::Scalar(s) => t(K::Rat(s.clone())),
        Val::Sup(a, f) => t(K::Sup(quote(names, a), quote(names, f))),
        Val::Refl(a) => t(K::Refl(quote(names, a))),
        Val::Funext(h) => t(K::Funext(quote(names, h), None)),
        Val::Seg(i) => t(K::Seg(quote(names, i))),
        Val::CodeBool => t(K::CodeBool),
        Val::CodePi(u, c) => t(K::CodePi(quote(names, u), c.names[0].clone(), quote_closure(names, c))),
        Val::CodeEq(u, a, b) => t(K::CodeEq(quote(names, u), quote(names, a), quote(names, b))),
        Val::WRecIh { motive, children, step } => {
            let b = name("b");
            let mut inner = names.clone();
            inner.push(b.clone());
            let child = apply(children, &var(names.len()));
            let body = quote_wrec(&inner, motive, &child, step);
            t(K::Lam(b, body))
        }
    }
}

fn quote_wrec(names: &Names, m: &Option<TyClosure>, w: &Val, step: &Closure) -> Arc<Term> {
    let names3 = [step.names[0].clone(), step.names[1].clone(), step.names[2].clone()];
    t(TermKind::WRec(quote_motive(names, m), quote(names, w), names3, quote_closure(names, step)))
}

fn quote_ne(names: &Names, n: &Neutral) -> Arc<Term> {
    use TermKind as K;
    match n {
        Neutral::Var(level) => t(K::Var(names.len() - 1 - level, names[*level].clone())),
        Neutral::App(f, a) => t(K::App(quote_ne(names, f), quote(names, a))),
        Neutral::Fst(p) => t(K::Fst(quote_ne(names, p))),
        Neutral::Snd(p) => t(K::Snd(quote_ne(names, p))),
        Neutral::If(m, c, a, b) => {
            t(K::If(quote_motive(names, m), quote_ne(names, c), quote(names, a), quote(names, b)))
        }
        Neutral::Case(m, s, l, r) => t(K::Case(
            quote_motive(names, m),
            quote_ne(names, s),
            l.names[0].clone(),
            quote_closure(names, l),
            r.names[0].clone(),
            quote_closure(names, r),
        )),
        Neutral::Absurd(a) => t(K::Absurd(quote_ne(names, a))),
        Neutral::NatRec(m, n, z, s) => t(K::NatRec(
            quote_motive(names, m),
            quote_ne(names, n),
            quote(names, z),
            s.names[0].clone(),
            s.names[1].clone(),
            quote_closure(names, s),
        )),
        Neutral::WRec(m, w, step) => quote_wrec(names, m, &Val::Neutral(w.clone()), step),
        Neutral::J(m, d, e) => t(K::J(
            Motive { names: m.names(), body: quote_ty_closure(names, m) },
            d.names[0].clone(),
            quote_closure(names, d),
            quote(names, e),
        )),
        Neutral::Happly(p, x) => t(K::Happly(quote(names, p), quote(names, x))),
        Neutral::Arith(op, sort, a, b) => t(K::Arith(*op, Some(*sort), quote(names, a), quote(names, b))),
    }
}

pub fn quote_ty(names: &Names, ty: &Ty) -> Arc<TypeExpr> {
    use TypeKind as K;
    let binder = |c: &TyClosure| c.names().first().cloned().unwrap_or_else(|| name(ANON));
    match ty {
        Ty::Bool => ty_node(K::Bool),
        Ty::Nat => ty_node(K::Nat),
        Ty::Empty => ty_node(K::Empty),
        Ty::Unit => ty_node(K::Unit),
        Ty::Cone => ty_node(K::Cone),
        Ty::U => ty_node(K::U),
        Ty::Pi(a, b) => ty_node(K::Pi(binder(b), quote_ty(names, a), quote_ty_closure(names, b))),
        Ty::Sigma(a, b) => ty_node(K::Sigma(binder(b), quote_ty(names, a), quote_ty_closure(names, b))),
        Ty::W(a, b) => ty_node(K::W(binder(b), quote_ty(names, a), quote_ty_closure(names, b))),
        Ty::Sum(a, b) => ty_node(K::Sum(quote_ty(names, a), quote_ty(names, b))),
        Ty::Id(a, x, y) => ty_node(K::Id(quote_ty(names, a), quote(names, x), quote(names, y))),
        Ty::El(n) => ty_node(K::El(quote_ne(names, n))),
        Ty::If(c, a, b) => ty_node(K::If(quote_ne(names, c), quote_ty(names, a), quote_ty(names, b))),
    }
}

// Conversion

/// All elements of a small finite type.
pub fn enumerate(ty: &Ty) -> Option<Vec<Val>> {
    let out = match ty {
        Ty::Empty => Vec::new(),
        Ty::Unit => vec![Val::Tt],
        Ty::Bool => vec![Val::True, Val::False],
        Ty::Sum(a, b) => {
            let mut out: Vec<Val> = enumerate(a)?.into_iter().map(|v| Val::Inl(Arc::new(v))).collect();
            out.extend(enumerate(b)?.into_iter().map(|v| Val::Inr(Arc::new(v))));
            out
        }
        Ty::Sigma(a, b) => {
            let mut out = Vec::new();
            for x in enumerate(a)? {
                for y in enumerate(&b.apply(std::slice::from_ref(&x)))? {
                    out.push(Val::Pair(Arc::new(x.clone()), Arc::new(y)));
                }
            }
            out
        }
        _ => return None,
    };
    (out.len() <= 32).then_some(out)
}

/// Whether every element of `ty` is one of finitely many canonical forms,
/// possibly after a case split on a neutral boolean.
pub fn is_finite(ty: &Ty) -> bool {
    match ty {
        Ty::Empty | Ty::Unit | Ty::Bool => true,
        Ty::Sum(a, b) | Ty::If(_, a, b) => is_finite(a) && is_finite(b),
        _ => false,
    }
}

/// Typed definitional equality at depth `d`. Functions out of small finite
/// types are compared pointwise on every argument.
pub fn conv(d: usize, ty: &Ty, a: &Val, b: &Val) -> bool {
    match ty {
        Ty::Unit | Ty::Empty => true,
        Ty::Pi(dom, cod) => match enumerate(dom) {
            Some(args) => args.iter().all(|x| conv(d, &cod.apply(std::slice::from_ref(x)), &apply(a, x), &apply(b, x))),
            None => {
                let x = var(d);
                conv(d + 1, &cod.apply(std::slice::from_ref(&x)), &apply(a, &x), &apply(b, &x))
            }
        },
        Ty::Sigma(ta, tb) => {
            let (a1, b1) = (fst(a), fst(b));
            conv(d, ta, &a1, &b1) && conv(d, &tb.apply(&[a1]), &snd(a), &snd(b))
        }
        _ => conv_untyped(d, a, b),
    }
}

/// The first argument of a finite domain at which two functions differ.
pub fn differing_input(d: usize, ty: &Ty, a: &Val, b: &Val) -> Option<Val> {
    let Ty::Pi(dom, cod) = ty else { return None };
    enumerate(dom)?.into_iter().find(|x| !conv(d, &cod.apply(std::slice::from_ref(x)), &apply(a, x), &apply(b, x)))
}

pub fn conv_untyped(d: usize, a: &Val, b: &Val) -> bool {
    use Val as V;
    match (a, b) {
        (V::Lam(_) | V::WRecIh { .. }, _) | (_, V::Lam(_) | V::WRecIh { .. }) => {
            let x = var(d);
            conv_untyped(d + 1, &apply(a, &x), &apply(b, &x))
        }
        (V::Pair(..), _) | (_, V::Pair(..)) => conv_untyped(d, &fst(a), &fst(b)) && conv_untyped(d, &snd(a), &snd(b)),
        (V::Neutral(x), V::Neutral(y)) => conv_ne(d, x, y),
        (V::Inl(x), V::Inl(y))
        | (V::Inr(x), V::Inr(y))
        | (V::Succ(x), V::Succ(y))
        | (V::Refl(x), V::Refl(y))
        | (V::Funext(x), V::Funext(y))
        | (V::Seg(x), V::Seg(y)) => conv_untyped(d, x, y),
        (V::Tt, V::Tt) | (V::True, V::True) | (V::False, V::False) | (V::CodeBool, V::CodeBool) => true,
        (V::Nat(x), V::Nat(y)) => x == y,
        (V::Scalar(x), V::Scalar(y)) => x == y,
        (V::Sup(a1, f1), V::Sup(a2, f2)) => conv_untyped(d, a1, a2) && conv_untyped(d, f1, f2),
        (V::CodePi(u1, c1), V::CodePi(u2, c2)) => {
            conv_untyped(d, u1, u2) && {
                let x = var(d);
                conv_untyped(d + 1, &c1.apply(std::slice::from_ref(&x)), &c2.apply(&[x]))
            }
        }
        (V::CodeEq(u1, x1, y1), V::CodeEq(u2, x2, y2)) => {
            conv_untyped(d, u1, u2) && conv_untyped(d, x1, x2) && conv_untyped(d, y1, y2)
        }
        _ => false,
    }
}

fn conv_closure(d: usize, a: &Closure, b: &Closure) -> bool {
    let args = (0..a.names.len()).map(|k| var(d + k)).collect::<Vec<_>>();
    conv_untyped(d + args.len(), &a.apply(&args), &b.apply(&args))
}

fn conv_ne(d: usize, a: &Neutral, b: &Neutral) -> bool {
    use Neutral as N;
    match (a, b) {
        (N::Var(x), N::Var(y)) => x == y,
        (N::App(f, x), N::App(g, y)) => conv_ne(d, f, g) && conv_untyped(d, x, y),
        (N::Fst(x), N::Fst(y)) | (N::Snd(x), N::Snd(y)) | (N::Absurd(x), N::Absurd(y)) => conv_ne(d, x, y),
        (N::If(_, c1, a1, b1), N::If(_, c2, a2, b2)) => {
            conv_ne(d, c1, c2) && conv_untyped(d, a1, a2) && conv_untyped(d, b1, b2)
        }
        (N::Case(_, s1, l1, r1), N::Case(_, s2, l2, r2)) => {
            conv_ne(d, s1, s2) && conv_closure(d, l1, l2) && conv_closure(d, r1, r2)
        }
        (N::NatRec(_, n1, z1, s1), N::NatRec(_, n2, z2, s2)) => {
            conv_ne(d, n1, n2) && conv_untyped(d, z1, z2) && conv_closure(d, s1, s2)
        }
        (N::WRec(_, w1, s1), N::WRec(_, w2, s2)) => conv_ne(d, w1, w2) && conv_closure(d, s1, s2),
        (N::J(m1, d1, e1), N::J(m2, d2, e2)) => {
            conv_ty_closure(d, m1, m2) && conv_closure(d, d1, d2) && conv_untyped(d, e1, e2)
        }
        (N::Happly(p1, x1), N::Happly(p2, x2)) => conv_untyped(d, p1, p2) && conv_untyped(d, x1, x2),
        (N::Arith(o1, s1, a1, b1), N::Arith(o2, s2, a2, b2)) => {
            o1 == o2 && s1 == s2 && conv_untyped(d, a1, a2) && conv_untyped(d, b1, b2)
        }
        _ => false,
    }
}

fn conv_ty_closure(d: usize, a: &TyClosure, b: &TyClosure) -> bool {
    let args = (0..a.names().len()).map(|k| var(d + k)).collect::<Vec<_>>();
    conv_ty(d + args.len(), &a.apply(&args), &b.apply(&args))
}

pub fn conv_ty(d: usize, a: &Ty, b: &Ty) -> bool {
    match (a, b) {
        (Ty::Bool, Ty::Bool)
        | (Ty::Nat, Ty::Nat)
        | (Ty::Empty, Ty::Empty)
        | (Ty::Unit, Ty::Unit)
        | (Ty::Cone, Ty::Cone)
        | (Ty::U, Ty::U) => true,
        (Ty::Pi(a1, b1), Ty::Pi(a2, b2)) | (Ty::Sigma(a1, b1), Ty::Sigma(a2, b2)) | (Ty::W(a1, b1), Ty::W(a2, b2)) => {
            conv_ty(d, a1, a2) && {
                let x = var(d);
                conv_ty(d + 1, &b1.apply(std::slice::from_ref(&x)), &b2.apply(&[x]))
            }
        }
        (Ty::Sum(a1, b1), Ty::Sum(a2, b2)) => conv_ty(d, a1, a2) && conv_ty(d, b1, b2),
        (Ty::Id(a1, x1, y1), Ty::Id(a2, x2, y2)) => conv_ty(d, a1, a2) && conv(d, a1, x1, x2) && conv(d, a1, y1, y2),
        (Ty::El(x), Ty::El(y)) => conv_ne(d, x, y),
        (Ty::If(c1, a1, b1), Ty::If(c2, a2, b2)) => conv_ne(d, c1, c2) && conv_ty(d, a1, a2) && conv_ty(d, b1, b2),
        _ => false,
    }
}
