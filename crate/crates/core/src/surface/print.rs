//! Pretty printer producing text that parses back to the same tree. Binders
//! that would shadow a name in scope are renamed.

use super::syntax::*;

/// Prints a closed term, or one whose free variables are `scope`.
pub fn term_to_string(t: &Term, scope: &[Name]) -> String {
    let mut p = Printer { scope: scope.iter().map(|n| n.to_string()).collect() };
    p.term(t, 0)
}

pub fn type_to_string(t: &TypeExpr, scope: &[Name]) -> String {
    let mut p = Printer { scope: scope.iter().map(|n| n.to_string()).collect() };
    p.ty(t, 0)
}

pub fn module_to_string(m: &Module) -> String {
    let mut p = Printer { scope: Vec::new() };
    let mut out = String::new();
    for d in &m.defs {
        let name = p.fresh(&d.name);
        out.push_str(&format!("def {name} : {}\n  = {}\n\n", p.ty(&d.ty, 0), p.term(&d.body, 0)));
        p.scope.push(name);
    }
    out
}

struct Printer {
    scope: Vec<String>,
}

fn paren(s: String, wrap: bool) -> String {
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

impl Printer {
    fn fresh(&self, base: &str) -> String {
        if base == ANON {
            return base.to_string();
        }
        let mut candidate = base.to_string();
        let mut k = 1;
        while self.scope.contains(&candidate) {
            candidate = format!("{base}{k}");
            k += 1;
        }
        candidate
    }

    fn bind<T>(&mut self, names: &[Name], f: impl FnOnce(&mut Self, &[String]) -> T) -> T {
        let depth = self.scope.len();
        let mut fresh = Vec::new();
        for n in names {
            let x = self.fresh(n);
            self.scope.push(x.clone());
            fresh.push(x);
        }
        let out = f(self, &fresh);
        self.scope.truncate(depth);
        out
    }

    fn var(&self, i: usize, fallback: &str) -> String {
        self.scope.len().checked_sub(i + 1).map(|k| self.scope[k].clone()).unwrap_or_else(|| fallback.to_string())
    }

    fn motive(&mut self, m: &Motive) -> String {
        self.bind(&m.names, |p, xs| format!("[{}. {}]", xs.join(" "), p.ty(&m.body, 0)))
    }

    fn opt_motive(&mut self, m: &Option<Motive>) -> String {
        m.as_ref().map(|m| format!("{} ", self.motive(m))).unwrap_or_default()
    }

    fn binder(&mut self, names: &[Name], body: &Term) -> String {
        self.bind(names, |p, xs| format!("({}. {})", xs.join(" "), p.term(body, 0)))
    }

    fn atom(&mut self, t: &Term) -> String {
        self.term(t, 4)
    }

    /// Levels: 0 binders, 1 sums, 2 products, 3 applications, 4 atoms.
    fn term(&mut self, t: &Term, level: u8) -> String {
        use TermKind::*;
        match &t.kind {
            Var(i, n) => self.var(*i, n),
            Lam(..) => {
                let mut names = Vec::new();
                let mut body = t;
                while let Lam(n, b) = &body.kind {
                    names.push(n.clone());
                    body = b;
                }
                let s = self.bind(&names, |p, xs| format!("\\{}. {}", xs.join(" "), p.term(body, 0)));
                paren(s, level > 0)
            }
            Let(x, ty, v, body) => {
                let (ty, v) = (self.ty(ty, 0), self.term(v, 0));
                let s = self.bind(std::slice::from_ref(x), |p, xs| {
                    format!("let {} : {ty} = {v} in {}", xs[0], p.term(body, 0))
                });
                paren(s, level > 0)
            }
            If(m, c, a, b) => {
                let s = format!(
                    "if {}{} then {} else {}",
                    self.opt_motive(m),
                    self.term(c, 0),
                    self.term(a, 0),
                    self.term(b, 0)
                );
                paren(s, level > 0)
            }
            Arith(op @ (ArithOp::Add | ArithOp::Mul), _, a, b) => {
                let my = if *op == ArithOp::Add { 1 } else { 2 };
                let s = format!("{} {} {}", self.term(a, my), op.symbol(), self.term(b, my + 1));
                paren(s, level > my)
            }
            Arith(op, _, a, b) => paren(format!("{} {} {}", op.symbol(), self.atom(a), self.atom(b)), level > 3),
            App(f, a) => paren(format!("{} {}", self.term(f, 3), self.atom(a)), level > 3),
            Fst(a) => self.unary("fst", a, level),
            Snd(a) => self.unary("snd", a, level),
            Inl(a) => self.unary("inl", a, level),
            Inr(a) => self.unary("inr", a, level),
            Succ(a) => self.unary("succ", a, level),
            Refl(a) => self.unary("refl", a, level),
            Seg(a) => self.unary("seg", a, level),
            Absurd(a) => self.unary("absurd", a, level),
            Funext(a, _) => self.unary("funext", a, level),
            Happly(a, b) => paren(format!("happly {} {}", self.atom(a), self.atom(b)), level > 3),
            Sup(a, b) => paren(format!("sup {} {}", self.atom(a), self.atom(b)), level > 3),
            Case(m, s, x, l, y, r) => {
                let s = format!(
                    "case {}{} {} {}",
                    self.opt_motive(m),
                    self.atom(s),
                    self.binder(std::slice::from_ref(x), l),
                    self.binder(std::slice::from_ref(y), r)
                );
                paren(s, level > 3)
            }
            NatRec(m, n, z, x, ih, s) => {
                let s = format!(
                    "natrec {}{} {} {}",
                    self.opt_motive(m),
                    self.atom(n),
                    self.atom(z),
                    self.binder(&[x.clone(), ih.clone()], s)
                );
                paren(s, level > 3)
            }
            WRec(m, w, names, body) => {
                let s = format!("wrec {}{} {}", self.opt_motive(m), self.atom(w), self.binder(names, body));
                paren(s, level > 3)
            }
            J(m, x, d, e) => {
                let s = format!("J {} {} {}", self.motive(m), self.binder(std::slice::from_ref(x), d), self.atom(e));
                paren(s, level > 3)
            }
            CodePi(u, x, body) => {
                paren(format!("#pi {} {}", self.atom(u), self.binder(std::slice::from_ref(x), body)), level > 3)
            }
            CodeEq(u, a, b) => paren(format!("#eq {} {} {}", self.atom(u), self.atom(a), self.atom(b)), level > 3),
            Pair(a, b) => format!("({}, {})", self.term(a, 0), self.term(b, 0)),
            Ann(a, ty) => format!("({} : {})", self.term(a, 0), self.ty(ty, 0)),
            Tt => "tt".into(),
            True => "true".into(),
            False => "false".into(),
            Zero => "zero".into(),
            CodeBool => "#bool".into(),
            Num(n, _) => n.to_string(),
            Rat(q) => q.to_string(),
        }
    }

    fn unary(&mut self, k: &str, a: &Term, level: u8) -> String {
        paren(format!("{k} {}", self.atom(a)), level > 3)
    }

    /// Levels: 0 arrows and binders, 1 sums, 2 products, 3 applications,
    /// 4 atoms.
    fn ty(&mut self, t: &TypeExpr, level: u8) -> String {
        use TypeKind::*;
        match &t.kind {
            Bool => "Bool".into(),
            Nat => "Nat".into(),
            Empty => "Empty".into(),
            Unit => "Unit".into(),
            Cone => "R+".into(),
            U => "U".into(),
            Pi(x, a, b) | Sigma(x, a, b) => {
                let arrow = if matches!(t.kind, Pi(..)) { "->" } else { "*" };
                let s = if &**x == ANON {
                    let dom = self.ty(a, if arrow == "->" { 1 } else { 3 });
                    let body_level = if arrow == "->" { 0 } else { 2 };
                    self.bind(std::slice::from_ref(x), |p, _| format!("{dom} {arrow} {}", p.ty(b, body_level)))
                } else {
                    let dom = self.ty(a, 0);
                    self.bind(std::slice::from_ref(x), |p, xs| format!("({} : {dom}) {arrow} {}", xs[0], p.ty(b, 0)))
                };
                let my = if &**x == ANON && arrow == "*" { 2 } else { 0 };
                paren(s, level > my)
            }
            Sum(a, b) => paren(format!("{} + {}", self.ty(a, 2), self.ty(b, 1)), level > 1),
            W(x, a, b) => {
                let dom = self.ty(a, 0);
                let s = self.bind(std::slice::from_ref(x), |p, xs| format!("W ({} : {dom}) {}", xs[0], p.ty(b, 4)));
                paren(s, level > 3)
            }
            Id(a, x, y) => paren(format!("Id {} {} {}", self.ty(a, 4), self.atom(x), self.atom(y)), level > 3),
            El(c) => paren(format!("El {}", self.atom(c)), level > 3),
            If(c, a, b) => paren(format!("If {} {} {}", self.atom(c), self.ty(a, 4), self.ty(b, 4)), level > 3),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_module, parse_term, parse_type};
    use super::*;

    fn round_trip_term(src: &str) {
        let once = term_to_string(&parse_term(src).unwrap(), &[]);
        let twice = term_to_string(&parse_term(&once).unwrap(), &[]);
        assert_eq!(once, twice, "source: {src}");
    }

    #[test]
    fn terms_round_trip() {
        for src in [
            "\\x. x",
            "\\f x. f (f x)",
            "(refl true : Id Bool true true)",
            "(\\x. if x then false else true : Bool -> Bool)",
            "(1/2 + 3 * 2, min 1 2)",
            "\\p. J [x y q. Id Bool y x] (x. refl x) p",
            "\\n. natrec n zero (m ih. succ ih)",
            "\\s. case [z. Bool] s (a. true) (b. false)",
            "#pi #bool (x. #eq #bool x x)",
            "let x : Nat = 3 in x + x",
            "\\x. \\x. x",
        ] {
            round_trip_term(src);
        }
    }

    #[test]
    fn shadowed_binders_are_renamed() {
        let t = parse_term("\\x. \\x. x").unwrap();
        assert_eq!(term_to_string(&t, &[]), "\\x x1. x1");
        let t = parse_term("\\x. \\y. x").unwrap();
        assert_eq!(term_to_string(&t, &[]), "\\x y. x");
    }

    #[test]
    fn types_round_trip() {
        for src in [
            "(x : Bool) -> Id Bool x x",
            "Bool -> Bool -> Bool",
            "(Bool -> Bool) -> Bool",
            "Nat * Bool + Unit",
            "(x : Nat) * If true Bool Nat",
            "W (b : Bool) (If b Unit Empty)",
            "El (#pi #bool (x. #bool))",
        ] {
            let once = type_to_string(&parse_type(src).unwrap(), &[]);
            assert_eq!(once, type_to_string(&parse_type(&once).unwrap(), &[]), "source: {src}");
        }
        assert_eq!(type_to_string(&parse_type("(Bool -> Bool) -> Bool").unwrap(), &[]), "(Bool -> Bool) -> Bool");
    }

    #[test]
    fn modules_round_trip() {
        let src = "def id : Bool -> Bool = \\x. x\ndef t : Bool = id true";
        let once = module_to_string(&parse_module(src).unwrap());
        assert_eq!(once, module_to_string(&parse_module(&once).unwrap()));
    }
}
