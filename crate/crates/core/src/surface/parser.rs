//! Recursive-descent parser. Names are resolved to de Bruijn indices while
//! parsing.
//!
//! ```text
//! module  ::= ("def" x ":" type "=" term)*
//! term    ::= "\" x+ "." term | "let" x ":" type "=" term "in" term
//!           | "if" motive? term "then" term "else" term | sum
//! sum     ::= prod ("+" prod)*
//! prod    ::= app ("*" app)*
//! app     ::= (form | atom) atom*
//! form    ::= fst a | snd a | inl a | inr a | succ a | refl a | funext a | seg a
//!           | absurd a | happly a a | sup a a | min a a | monus a a
//!           | "#pi" a (x. t) | "#eq" a a a | case motive? a (x. t) (y. t)
//!           | natrec motive? a a (n ih. t) | wrec motive? a (x f ih. t)
//!           | J [x y p. T] (x. t) a
//! atom    ::= x | n | p/q | true | false | tt | zero | "#bool"
//!           | "(" term ")" | "(" term "," term ")" | "(" term ":" type ")"
//! motive  ::= "[" x+ "." type "]"
//! type    ::= "(" x ":" type ")" ("->" | "*") type | sumty ("->" type)?
//! sumty   ::= prodty ("+" sumty)?
//! prodty  ::= tapp ("*" prodty)?
//! tapp    ::= Id tatom atom atom | El atom | If atom tatom tatom
//!           | W "(" x ":" type ")" tatom | tatom
//! tatom   ::= Bool | Nat | Empty | Unit | R+ | U | "(" type ")"
//! ```

use std::sync::Arc;

use super::lexer::{lex, Tok, Token};
use super::syntax::*;
use super::ParseError;
use crate::ring::NonnegElem;

pub fn parse_module(src: &str) -> Result<Module, ParseError> {
    let mut p = Parser::new(src)?;
    let mut defs = Vec::new();
    while p.peek() != &Tok::Eof {
        let span = p.expect_key("def")?;
        let name = p.ident()?;
        p.expect_sym(":")?;
        let ty = Arc::new(p.ty()?);
        p.expect_sym("=")?;
        let body = Arc::new(p.term()?);
        p.scope.push(name.clone());
        defs.push(Def { span, name, ty, body });
    }
    Ok(Module { defs })
}

/// Parses a closed term, or one whose free variables are `scope`
/// (outermost first).
pub fn parse_term_in(src: &str, scope: &[Name]) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    p.scope = scope.to_vec();
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse_term_in(src, &[])
}

pub fn parse_type(src: &str) -> Result<TypeExpr, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<Name>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, scope: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::expected(self.span(), expected, &self.peek().to_string())
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_key(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Key(t) if *t == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<Span, ParseError> {
        if self.is_sym(s) {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[s]))
        }
    }

    /// Expects a closing delimiter; at end of input the error points at the
    /// unclosed opener instead.
    fn close(&mut self, s: &'static str, opener: Span) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            let open = match s {
                ")" => "(",
                "]" => "[",
                _ => s,
            };
            return Err(ParseError::new(opener, format!("unclosed `{open}`")).with_expected(&[s]));
        }
        self.expect_sym(s).map(|_| ())
    }

    fn expect_key(&mut self, k: &'static str) -> Result<Span, ParseError> {
        if self.is_key(k) {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[k]))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(name(&s))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn with_names<T>(
        &mut self,
        names: &[Name],
        f: impl FnOnce(&mut Self) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        let depth = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let out = f(self);
        self.scope.truncate(depth);
        out
    }

    fn lookup(&self, x: &str, span: Span) -> Result<TermKind, ParseError> {
        match self.scope.iter().rev().position(|n| &**n == x) {
            Some(i) => Ok(TermKind::Var(i, name(x))),
            None => Err(ParseError::new(span, format!("unbound variable `{x}`"))),
        }
    }

    // Terms

    fn term(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        if self.eat_sym("\\") {
            let mut names = vec![self.ident()?];
            while let Tok::Ident(_) = self.peek() {
                names.push(self.ident()?);
            }
            self.expect_sym(".")?;
            let body = self.with_names(&names, |p| p.term())?;
            return Ok(names.into_iter().rev().fold(body, |b, n| Term::new(span, TermKind::Lam(n, Arc::new(b)))));
        }
        if self.is_key("let") {
            self.bump();
            let x = self.ident()?;
            self.expect_sym(":")?;
            let ty = self.ty()?;
            self.expect_sym("=")?;
            let val = self.term()?;
            self.expect_key("in")?;
            let body = self.with_names(std::slice::from_ref(&x), |p| p.term())?;
            return Ok(Term::new(span, TermKind::Let(x, Arc::new(ty), Arc::new(val), Arc::new(body))));
        }
        if self.is_key("if") {
            self.bump();
            let motive = self.opt_motive(1)?;
            let c = self.term()?;
            self.expect_key("then")?;
            let a = self.term()?;
            self.expect_key("else")?;
            let b = self.term()?;
            return Ok(Term::new(span, TermKind::If(motive, Arc::new(c), Arc::new(a), Arc::new(b))));
        }
        self.sum()
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.prod()?;
        while self.is_sym("+") {
            self.bump();
            let rhs = self.prod()?;
            lhs = Term::new(lhs.span, TermKind::Arith(ArithOp::Add, None, Arc::new(lhs), Arc::new(rhs)));
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.app()?;
        while self.is_sym("*") {
            self.bump();
            let rhs = self.app()?;
            lhs = Term::new(lhs.span, TermKind::Arith(ArithOp::Mul, None, Arc::new(lhs), Arc::new(rhs)));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(_) | Tok::Num(_) | Tok::Rat(..) => true,
            Tok::Key(k) => matches!(*k, "true" | "false" | "tt" | "zero" | "#bool"),
            Tok::Sym(s) => *s == "(",
            Tok::Eof => false,
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut head = match self.form()? {
            Some(t) => t,
            None => self.atom()?,
        };
        while self.starts_atom() {
            let arg = self.atom()?;
            head = Term::new(head.span, TermKind::App(Arc::new(head), Arc::new(arg)));
        }
        Ok(head)
    }

    fn arg(&mut self) -> Result<Arc<Term>, ParseError> {
        self.atom().map(Arc::new)
    }

    fn form(&mut self) -> Result<Option<Term>, ParseError> {
        let Tok::Key(k) = *self.peek() else { return Ok(None) };
        let span = self.span();
        let unary: Option<fn(Arc<Term>) -> TermKind> = match k {
            "fst" => Some(TermKind::Fst),
            "snd" => Some(TermKind::Snd),
            "inl" => Some(TermKind::Inl),
            "inr" => Some(TermKind::Inr),
            "succ" => Some(TermKind::Succ),
            "refl" => Some(TermKind::Refl),
            "seg" => Some(TermKind::Seg),
            "absurd" => Some(TermKind::Absurd),
            _ => None,
        };
        if let Some(build) = unary {
            self.bump();
            return Ok(Some(Term::new(span, build(self.arg()?))));
        }
        let kind = match k {
            "funext" => {
                self.bump();
                TermKind::Funext(self.arg()?, None)
            }
            "happly" | "sup" | "min" | "monus" => {
                self.bump();
                let (a, b) = (self.arg()?, self.arg()?);
                match k {
                    "happly" => TermKind::Happly(a, b),
                    "sup" => TermKind::Sup(a, b),
                    "min" => TermKind::Arith(ArithOp::Min, None, a, b),
                    _ => TermKind::Arith(ArithOp::Monus, None, a, b),
                }
            }
            "#pi" => {
                self.bump();
                let u = self.arg()?;
                let (names, body) = self.binder(1)?;
                TermKind::CodePi(u, names[0].clone(), body)
            }
            "#eq" => {
                self.bump();
                TermKind::CodeEq(self.arg()?, self.arg()?, self.arg()?)
            }
            "case" => {
                self.bump();
                let motive = self.opt_motive(1)?;
                let scrut = self.arg()?;
                let (l, lb) = self.binder(1)?;
                let (r, rb) = self.binder(1)?;
                TermKind::Case(motive, scrut, l[0].clone(), lb, r[0].clone(), rb)
            }
            "natrec" => {
                self.bump();
                let motive = self.opt_motive(1)?;
                let (n, z) = (self.arg()?, self.arg()?);
                let (names, s) = self.binder(2)?;
                TermKind::NatRec(motive, n, z, names[0].clone(), names[1].clone(), s)
            }
            "wrec" => {
                self.bump();
                let motive = self.opt_motive(1)?;
                let t = self.arg()?;
                let (names, body) = self.binder(3)?;
                TermKind::WRec(motive, t, [names[0].clone(), names[1].clone(), names[2].clone()], body)
            }
            "J" => {
                self.bump();
                let motive = self.motive(3)?;
                let (names, d) = self.binder(1)?;
                let e = self.arg()?;
                TermKind::J(motive, names[0].clone(), d, e)
            }
            _ => return Ok(None),
        };
        Ok(Some(Term::new(span, kind)))
    }

    fn binder(&mut self, n: usize) -> Result<(Vec<Name>, Arc<Term>), ParseError> {
        let open = self.expect_sym("(")?;
        let names = self.names(n)?;
        self.expect_sym(".")?;
        let body = self.with_names(&names, |p| p.term())?;
        self.close(")", open)?;
        Ok((names, Arc::new(body)))
    }

    fn names(&mut self, n: usize) -> Result<Vec<Name>, ParseError> {
        (0..n).map(|_| self.ident()).collect()
    }

    fn motive(&mut self, n: usize) -> Result<Motive, ParseError> {
        let open = self.expect_sym("[")?;
        let names = self.names(n)?;
        self.expect_sym(".")?;
        let body = self.with_names(&names, |p| p.ty())?;
        self.close("]", open)?;
        Ok(Motive { names, body: Arc::new(body) })
    }

    fn opt_motive(&mut self, n: usize) -> Result<Option<Motive>, ParseError> {
        if self.is_sym("[") {
            self.motive(n).map(Some)
        } else {
            Ok(None)
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                self.lookup(&x, span)?
            }
            Tok::Num(n) => {
                self.bump();
                TermKind::Num(n, None)
            }
            Tok::Rat(p, q) => {
                self.bump();
                let (p, q) = (i64::try_from(p), i64::try_from(q));
                match (p, q) {
                    (Ok(p), Ok(q)) => TermKind::Rat(NonnegElem::ratio(p, q)),
                    _ => return Err(ParseError::new(span, "literal too large")),
                }
            }
            Tok::Key("true") => {
                self.bump();
                TermKind::True
            }
            Tok::Key("false") => {
                self.bump();
                TermKind::False
            }
            Tok::Key("tt") => {
                self.bump();
                TermKind::Tt
            }
            Tok::Key("zero") => {
                self.bump();
                TermKind::Zero
            }
            Tok::Key("#bool") => {
                self.bump();
                TermKind::CodeBool
            }
            Tok::Sym("(") => {
                self.bump();
                let inner = self.term()?;
                if self.eat_sym(",") {
                    let second = self.term()?;
                    self.close(")", span)?;
                    TermKind::Pair(Arc::new(inner), Arc::new(second))
                } else if self.eat_sym(":") {
                    let ty = self.ty()?;
                    self.close(")", span)?;
                    TermKind::Ann(Arc::new(inner), Arc::new(ty))
                } else {
                    self.close(")", span)?;
                    return Ok(Term { span, ..inner });
                }
            }
            _ => return Err(self.error(&["term"])),
        };
        Ok(Term::new(span, kind))
    }

    // Types

    fn ty(&mut self) -> Result<TypeExpr, ParseError> {
        let span = self.span();
        if self.is_sym("(") && matches!(self.peek_at(1), Tok::Ident(_)) && self.peek_at(2) == &Tok::Sym(":") {
            self.bump();
            let x = self.ident()?;
            self.expect_sym(":")?;
            let dom = self.ty()?;
            self.close(")", span)?;
            let pi = if self.eat_sym("->") {
                true
            } else if self.eat_sym("*") {
                false
            } else {
                return Err(self.error(&["->", "*"]));
            };
            let body = self.with_names(std::slice::from_ref(&x), |p| p.ty())?;
            let (dom, body) = (Arc::new(dom), Arc::new(body));
            let kind = if pi { TypeKind::Pi(x, dom, body) } else { TypeKind::Sigma(x, dom, body) };
            return Ok(TypeExpr::new(span, kind));
        }
        let lhs = self.sum_ty()?;
        if self.eat_sym("->") {
            let body = self.with_names(&[name(ANON)], |p| p.ty())?;
            return Ok(TypeExpr::new(span, TypeKind::Pi(name(ANON), Arc::new(lhs), Arc::new(body))));
        }
        Ok(lhs)
    }

    fn sum_ty(&mut self) -> Result<TypeExpr, ParseError> {
        let lhs = self.prod_ty()?;
        if self.eat_sym("+") {
            let rhs = self.sum_ty()?;
            return Ok(TypeExpr::new(lhs.span, TypeKind::Sum(Arc::new(lhs), Arc::new(rhs))));
        }
        Ok(lhs)
    }

    fn prod_ty(&mut self) -> Result<TypeExpr, ParseError> {
        let lhs = self.tapp()?;
        if self.eat_sym("*") {
            let rhs = self.with_names(&[name(ANON)], |p| p.prod_ty())?;
            return Ok(TypeExpr::new(lhs.span, TypeKind::Sigma(name(ANON), Arc::new(lhs), Arc::new(rhs))));
        }
        Ok(lhs)
    }

    fn tapp(&mut self) -> Result<TypeExpr, ParseError> {
        let span = self.span();
        let kind = match self.peek() {
            Tok::Key("Id") => {
                self.bump();
                let a = self.tatom()?;
                TypeKind::Id(Arc::new(a), self.arg()?, self.arg()?)
            }
            Tok::Key("El") => {
                self.bump();
                TypeKind::El(self.arg()?)
            }
            Tok::Key("If") => {
                self.bump();
                let c = self.arg()?;
                let (a, b) = (self.tatom()?, self.tatom()?);
                TypeKind::If(c, Arc::new(a), Arc::new(b))
            }
            Tok::Key("W") => {
                self.bump();
                let open = self.expect_sym("(")?;
                let x = self.ident()?;
                self.expect_sym(":")?;
                let a = self.ty()?;
                self.close(")", open)?;
                let b = self.with_names(std::slice::from_ref(&x), |p| p.tatom())?;
                TypeKind::W(x, Arc::new(a), Arc::new(b))
            }
            _ => return self.tatom(),
        };
        Ok(TypeExpr::new(span, kind))
    }

    fn tatom(&mut self) -> Result<TypeExpr, ParseError> {
        let span = self.span();
        let kind = match self.peek() {
            Tok::Key("Bool") => TypeKind::Bool,
            Tok::Key("Nat") => TypeKind::Nat,
            Tok::Key("Empty") => TypeKind::Empty,
            Tok::Key("Unit") => TypeKind::Unit,
            Tok::Key("R+") => TypeKind::Cone,
            Tok::Key("U") => TypeKind::U,
            Tok::Sym("(") => {
                self.bump();
                let inner = self.ty()?;
                self.close(")", span)?;
                return Ok(TypeExpr { span, ..inner });
            }
            _ => return Err(self.error(&["type"])),
        };
        self.bump();
        Ok(TypeExpr::new(span, kind))
    }
}
