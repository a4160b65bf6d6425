//! Abstract syntax. Variables are de Bruijn indices, counted outwards from the
//! innermost binder; terms and types share one binder space. Every node
//! carries the source position of its first token.

use std::fmt;
use std::sync::Arc;

use crate::ring::NonnegElem;

pub type Name = Arc<str>;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Which carrier an overloaded numeral or operator was elaborated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Nat,
    Cone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Mul,
    Min,
    Monus,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Mul => "*",
            ArithOp::Min => "min",
            ArithOp::Monus => "monus",
        }
    }
}

/// A motive binding one variable: `[x. P]`.
#[derive(Debug, Clone)]
pub struct Motive {
    pub names: Vec<Name>,
    pub body: Arc<TypeExpr>,
}

#[derive(Debug, Clone)]
pub struct Term {
    pub span: Span,
    pub kind: TermKind,
}

#[derive(Debug, Clone)]
pub enum TermKind {
    Var(usize, Name),
    Lam(Name, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Ann(Arc<Term>, Arc<TypeExpr>),
    Let(Name, Arc<TypeExpr>, Arc<Term>, Arc<Term>),
    Pair(Arc<Term>, Arc<Term>),
    Fst(Arc<Term>),
    Snd(Arc<Term>),
    Inl(Arc<Term>),
    Inr(Arc<Term>),
    /// `case [z. P] t (x. l) (y. r)`
    Case(Option<Motive>, Arc<Term>, Name, Arc<Term>, Name, Arc<Term>),
    Tt,
    True,
    False,
    /// `if [x. P] c then a else b`
    If(Option<Motive>, Arc<Term>, Arc<Term>, Arc<Term>),
    Absurd(Arc<Term>),
    Zero,
    Succ(Arc<Term>),
    /// A numeral; the sort is fixed during checking.
    Num(u64, Option<Sort>),
    /// A non-integral literal `p/q` of the cone.
    Rat(NonnegElem),
    Arith(ArithOp, Option<Sort>, Arc<Term>, Arc<Term>),
    /// `natrec [n. P] t z (n ih. s)`
    NatRec(Option<Motive>, Arc<Term>, Arc<Term>, Name, Name, Arc<Term>),
    Sup(Arc<Term>, Arc<Term>),
    /// `wrec [w. P] t (a f ih. b)`
    WRec(Option<Motive>, Arc<Term>, [Name; 3], Arc<Term>),
    Refl(Arc<Term>),
    /// `J [x y p. P] (x. d) e`
    J(Motive, Name, Arc<Term>, Arc<Term>),
    /// The domain is recorded during checking.
    Funext(Arc<Term>, Option<Arc<TypeExpr>>),
    Happly(Arc<Term>, Arc<Term>),
    /// `seg i : Id R+ 0 i`, the ramp of shape `i`.
    Seg(Arc<Term>),
    CodeBool,
    CodePi(Arc<Term>, Name, Arc<Term>),
    CodeEq(Arc<Term>, Arc<Term>, Arc<Term>),
}

#[derive(Debug, Clone)]
pub struct TypeExpr {
    pub span: Span,
    pub kind: TypeKind,
}

#[derive(Debug, Clone)]
pub enum TypeKind {
    Bool,
    Nat,
    Empty,
    Unit,
    Cone,
    U,
    /// Binder name `_` marks a non-dependent arrow.
    Pi(Name, Arc<TypeExpr>, Arc<TypeExpr>),
    Sigma(Name, Arc<TypeExpr>, Arc<TypeExpr>),
    W(Name, Arc<TypeExpr>, Arc<TypeExpr>),
    Sum(Arc<TypeExpr>, Arc<TypeExpr>),
    Id(Arc<TypeExpr>, Arc<Term>, Arc<Term>),
    El(Arc<Term>),
    If(Arc<Term>, Arc<TypeExpr>, Arc<TypeExpr>),
}

impl Term {
    pub fn new(span: Span, kind: TermKind) -> Self {
        Term { span, kind }
    }
}

impl TypeExpr {
    pub fn new(span: Span, kind: TypeKind) -> Self {
        TypeExpr { span, kind }
    }
}

/// A top-level `def name : T = t`.
#[derive(Debug, Clone)]
pub struct Def {
    pub span: Span,
    pub name: Name,
    pub ty: Arc<TypeExpr>,
    pub body: Arc<Term>,
}

#[derive(Debug, Clone, Default)]
pub struct Module {
    pub defs: Vec<Def>,
}

pub const ANON: &str = "_";

pub fn name(s: &str) -> Name {
    Arc::from(s)
}
