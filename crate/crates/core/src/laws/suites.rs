use rand::Rng;
use serde_json::{json, Value as Json};

use super::gen::*;
use super::{Failure, Law, LawResult, ALL_RINGS};
use crate::fib::{
    const_fib, id_fib, j_elim, lift, pi_fib, reindex, sem_eq, sigma_fib, singleton_contraction, snd_path, sum_fib,
    vidp, w_fib, EvalError, Fibration, FunValue, SemType, VPath, Value,
};
use crate::funext::{epsilon, eta, funext, happly, happly_homotopy, interpolants, PointwiseHomotopy};
use crate::path::{
    babs, compose, compose_unchecked, from, idp, path_eq_by, reverse, upto, MoorePath, PiecewisePath, Poly,
};
use crate::ring::{self, NonnegElem, RingElem, RingInstance};
use crate::universe::{decode, pi_pullback, sample_codes, u_transport, universe_fib, UCode};

const INTEGERS_ONLY: &[RingInstance] = &[RingInstance::Integers];

macro_rules! laws {
    ($($id:literal => $check:ident),* $(,)?) => {
        pub(super) static LAWS: &[Law] = &[$(Law { id: $id, rings: ALL_RINGS, check: $check }),*,
            Law { id: "degeneracy.step-path", rings: INTEGERS_ONLY, check: step_path }];
    };
}

laws! {
    "ring.axioms" => ring_axioms,
    "ring.positivity" => ring_positivity,
    "ring.monus-min" => ring_monus_min,
    "groupoid.unit" => groupoid_unit,
    "groupoid.assoc" => groupoid_assoc,
    "groupoid.reverse-involution" => reverse_involution,
    "groupoid.reverse-antihom" => reverse_antihom,
    "groupoid.map" => groupoid_map,
    "path.clamping" => clamping,
    "path.piecewise-agreement" => piecewise_agreement,
    "bounded.zero" => babs_zero,
    "bounded.eta" => babs_eta,
    "bounded.map" => babs_map,
    "bounded.upto-zero" => upto_zero,
    "bounded.upto-beyond" => upto_beyond,
    "bounded.from-degenerate" => from_degenerate,
    "tap.idp.const" => idp_const,
    "tap.idp.sigma" => idp_sigma,
    "tap.idp.pi" => idp_pi,
    "tap.idp.sum" => idp_sum,
    "tap.idp.w" => idp_w,
    "tap.idp.id" => idp_id,
    "tap.lift-idp" => lift_idp,
    "tap.snd-idp" => snd_idp,
    "tap.stability" => stability,
    "tap.homotopy-assoc" => homotopy_assoc,
    "tap.singleton" => singleton,
    "j.computation" => j_computation,
    "funext.shape" => funext_shape,
    "funext.endpoints" => funext_endpoints,
    "funext.interpolant" => funext_interpolant,
    "funext.epsilon" => funext_epsilon,
    "funext.eta" => funext_eta,
    "universe.idp" => universe_idp,
    "universe.coherence.bool" => coherence_bool,
    "universe.coherence.pi" => coherence_pi,
    "universe.coherence.eq" => coherence_eq,
    "universe.pullback" => universe_pullback,
}

fn pw(p: &PiecewisePath) -> Json {
    serde_json::to_value(p).expect("piecewise paths serialize")
}

fn ensure(ok: bool, inputs: impl FnOnce() -> Json, witness: impl FnOnce() -> String) -> LawResult {
    if ok {
        Ok(())
    } else {
        Err(Failure::new(inputs(), witness()))
    }
}

fn check<T>(r: Result<T, String>, inputs: impl FnOnce() -> Json) -> Result<T, Failure> {
    r.map_err(|w| Failure::new(inputs(), w))
}

fn eval<T>(r: Result<T, EvalError>, inputs: impl FnOnce() -> Json) -> Result<T, Failure> {
    r.map_err(|e| Failure::new(inputs(), format!("evaluation failed: {e}")))
}

/// Compares a closure-backed path with an exact one at the probes, using the
/// exact evaluator as the oracle.
fn agree(what: &str, closure: &MoorePath<RingElem>, exact: &PiecewisePath, case: &Case) -> Result<(), String> {
    if closure.shape() != exact.shape() {
        return Err(format!("{what}: shapes differ: {} vs {}", closure.shape(), exact.shape()));
    }
    let mut hints = closure.hints().to_vec();
    hints.extend(exact.breakpoints().iter().cloned());
    for t in case.spec.probe_points(exact.shape(), &hints) {
        let (got, want) = (closure.at(&t), exact.eval(&t));
        if got != want {
            return Err(format!("{what}: at {t} the closure gives {got}, the exact path {want}"));
        }
    }
    Ok(())
}

fn exact(what: &str, a: &PiecewisePath, b: &PiecewisePath) -> Result<(), String> {
    a.exact_eq(b).map_err(|d| format!("{what}: {d}"))
}

fn composite(q: &PiecewisePath, p: &PiecewisePath) -> Result<PiecewisePath, String> {
    PiecewisePath::compose(q, p).map_err(|e| e.to_string())
}

fn closure_compose(q: &MoorePath<RingElem>, p: &MoorePath<RingElem>) -> Result<MoorePath<RingElem>, String> {
    compose(q, p).map_err(|e| e.to_string())
}

fn random_poly(case: &mut Case) -> Poly {
    let degree = case.rng.gen_range(0..=2);
    Poly::new((0..=degree).map(|_| case.scalar()).collect())
}

// Ring

fn ring_axioms(case: &mut Case) -> LawResult {
    let (i, j, k) = (case.scalar(), case.scalar(), case.scalar());
    case.ring.check_axioms(&i, &j, &k).map_err(|name| Failure::new(json!({"i": i, "j": j, "k": k}), name))
}

fn ring_positivity(case: &mut Case) -> LawResult {
    let (a, b) = (case.nonneg().into_value(), case.nonneg().into_value());
    let product = case.ring.mul(&a, &b);
    ensure(case.ring.leq(&case.ring.zero(), &product), || json!({"a": a, "b": b}), || format!("a·b = {product} < 0"))
}

fn ring_monus_min(case: &mut Case) -> LawResult {
    let (i, j) = (case.nonneg(), case.nonneg());
    let lhs = ring::truncated_sub(&i, &j).add(&ring::min(&i, &j));
    ensure(lhs == i, || json!({"i": i, "j": j}), || format!("(i ∸ j) + min(i, j) = {lhs}"))
}

// Groupoid laws

fn groupoid_unit(case: &mut Case) -> LawResult {
    let p = case.path();
    let inputs = || json!({"p": pw(&p)});
    let (src, tgt) = (PiecewisePath::constant(p.source()), PiecewisePath::constant(p.target()));
    check(composite(&p, &src).and_then(|r| exact("p • idp", &r, &p)), inputs)?;
    check(composite(&tgt, &p).and_then(|l| exact("idp • p", &l, &p)), inputs)?;
    let c = p.to_path();
    check(closure_compose(&c, &idp(p.source())).and_then(|r| agree("p • idp", &r, &p, case)), inputs)?;
    check(closure_compose(&idp(p.target()), &c).and_then(|l| agree("idp • p", &l, &p, case)), inputs)
}

fn groupoid_assoc(case: &mut Case) -> LawResult {
    let p = case.path();
    let q = case.path_from(p.target());
    let r = case.path_from(q.target());
    let inputs = || json!({"p": pw(&p), "q": pw(&q), "r": pw(&r)});
    let left = check(composite(&r, &q).and_then(|rq| composite(&rq, &p)), inputs)?;
    let right = check(composite(&q, &p).and_then(|qp| composite(&r, &qp)), inputs)?;
    check(exact("(r • q) • p vs r • (q • p)", &left, &right), inputs)?;
    let (pc, qc, rc) = (p.to_path(), q.to_path(), r.to_path());
    let lc = check(closure_compose(&rc, &qc).and_then(|rq| closure_compose(&rq, &pc)), inputs)?;
    let rcomp = check(closure_compose(&qc, &pc).and_then(|qp| closure_compose(&rc, &qp)), inputs)?;
    check(agree("(r • q) • p", &lc, &left, case), inputs)?;
    check(agree("r • (q • p)", &rcomp, &left, case), inputs)
}

fn reverse_involution(case: &mut Case) -> LawResult {
    let p = case.path();
    let inputs = || json!({"p": pw(&p)});
    let rev = p.reverse();
    ensure(rev.shape() == p.shape(), inputs, || format!("shape {} became {}", p.shape(), rev.shape()))?;
    check(exact("rev (rev p)", &rev.reverse(), &p), inputs)?;
    let c = p.to_path();
    check(agree("rev p", &reverse(&c), &rev, case), inputs)?;
    check(agree("rev (rev p)", &reverse(&reverse(&c)), &p, case), inputs)
}

fn reverse_antihom(case: &mut Case) -> LawResult {
    let p = case.path();
    let q = case.path_from(p.target());
    let inputs = || json!({"p": pw(&p), "q": pw(&q)});
    let qp = check(composite(&q, &p), inputs)?;
    let expected = check(composite(&p.reverse(), &q.reverse()), inputs)?;
    check(exact("rev (q • p) vs rev p • rev q", &qp.reverse(), &expected), inputs)?;
    let closure = reverse(&compose_unchecked(&q.to_path(), &p.to_path()));
    check(agree("rev (q • p)", &closure, &expected, case), inputs)?;
    let closure = compose_unchecked(&reverse(&p.to_path()), &reverse(&q.to_path()));
    check(agree("rev p • rev q", &closure, &expected, case), inputs)
}

fn groupoid_map(case: &mut Case) -> LawResult {
    let p = case.path();
    let q = case.path_from(p.target());
    let g = random_poly(case);
    let inputs = || json!({"p": pw(&p), "q": pw(&q), "g": g});
    let x = case.scalar();
    let mapped_idp = PiecewisePath::constant(x.clone()).map_poly(&g);
    check(exact("g' (idp x)", &mapped_idp, &PiecewisePath::constant(g.eval(&x))), inputs)?;
    let qp = check(composite(&q, &p), inputs)?;
    let split = check(composite(&q.map_poly(&g), &p.map_poly(&g)), inputs)?;
    check(exact("g' (q • p) vs g' q • g' p", &qp.map_poly(&g), &split), inputs)?;
    let g2 = g.clone();
    let closure = crate::path::map(move |v: RingElem| g2.eval(&v), &compose_unchecked(&q.to_path(), &p.to_path()));
    check(agree("g' (q • p)", &closure, &split, case), inputs)
}

fn clamping(case: &mut Case) -> LawResult {
    let p = case.path();
    let q = case.path_from(p.target());
    let i = case.nonneg();
    let inputs = || json!({"p": pw(&p), "q": pw(&q), "i": i});
    let views = [
        ("p", p.to_path()),
        ("rev p", reverse(&p.to_path())),
        ("q • p", compose_unchecked(&q.to_path(), &p.to_path())),
        ("i ▷ p", upto(&i, &p.to_path())),
        ("from i p", from(&i, &p.to_path())),
    ];
    for (what, v) in views {
        let beyond = v.shape().add(&case.nonneg());
        let (at, end) = (v.at(&beyond), v.at(v.shape()));
        ensure(at == end, inputs, || format!("{what}: at {beyond} gives {at}, at the shape {end}"))?;
    }
    Ok(())
}

fn piecewise_agreement(case: &mut Case) -> LawResult {
    let p = case.path();
    let q = case.path_from(p.target());
    let (i, j) = (case.nonneg(), case.nonneg());
    let inputs = || json!({"p": pw(&p), "q": pw(&q), "i": i, "j": j});
    let (pc, qc) = (p.to_path(), q.to_path());
    let qp = check(composite(&q, &p), inputs)?;
    let phi = p.clone();
    let checks = [
        ("p", pc.clone(), p.clone()),
        ("rev p", reverse(&pc), p.reverse()),
        ("q • p", compose_unchecked(&qc, &pc), qp),
        ("i ▷ p", upto(&i, &pc), p.upto(&i)),
        ("from i p", from(&i, &pc), p.from(&i)),
        ("⟨k ≤ j⟩ p k", babs(j.clone(), move |k| phi.eval(k)), p.babs(&j)),
    ];
    for (what, closure, exact_path) in checks {
        check(agree(what, &closure, &exact_path, case), inputs)?;
    }
    Ok(())
}

// Bounded abstraction and contraction

fn babs_zero(case: &mut Case) -> LawResult {
    let p = case.path();
    let inputs = || json!({"p": pw(&p)});
    let src = PiecewisePath::constant(p.source());
    check(exact("p.babs(0)", &p.babs(&NonnegElem::zero()), &src), inputs)?;
    let phi = p.clone();
    check(agree("⟨i ≤ 0⟩ φ i", &babs(NonnegElem::zero(), move |i| phi.eval(i)), &src, case), inputs)
}

fn babs_eta(case: &mut Case) -> LawResult {
    let p = case.path();
    let inputs = || json!({"p": pw(&p)});
    check(exact("p.babs(shape)", &p.babs(p.shape()), &p), inputs)?;
    let c = p.to_path();
    check(agree("⟨i ≤ ⌞p⌟⟩ p i", &babs(p.shape().clone(), move |i| c.at(i)), &p, case), inputs)
}

fn babs_map(case: &mut Case) -> LawResult {
    let p = case.path();
    let j = case.nonneg();
    let g = random_poly(case);
    let inputs = || json!({"p": pw(&p), "j": j, "g": g});
    let expected = p.babs(&j).map_poly(&g);
    let (phi, g1) = (p.clone(), g.clone());
    let mapped = crate::path::map(move |v: RingElem| g1.eval(&v), &babs(j.clone(), move |i| phi.eval(i)));
    check(agree("g' ⟨i ≤ j⟩ φ i", &mapped, &expected, case), inputs)?;
    let (phi, g2) = (p.clone(), g.clone());
    let inside = babs(j.clone(), move |i| g2.eval(&phi.eval(i)));
    check(agree("⟨i ≤ j⟩ g (φ i)", &inside, &expected, case), inputs)
}

fn upto_zero(case: &mut Case) -> LawResult {
    let p = case.path();
    let inputs = || json!({"p": pw(&p)});
    let src = PiecewisePath::constant(p.source());
    check(exact("0 ▷ p", &p.upto(&NonnegElem::zero()), &src), inputs)?;
    check(agree("0 ▷ p", &upto(&NonnegElem::zero(), &p.to_path()), &src, case), inputs)
}

fn upto_beyond(case: &mut Case) -> LawResult {
    let p = case.path();
    let i = p.shape().add(&case.nonneg());
    let inputs = || json!({"p": pw(&p), "i": i});
    check(exact("i ▷ p", &p.upto(&i), &p), inputs)?;
    check(agree("i ▷ p", &upto(&i, &p.to_path()), &p, case), inputs)
}

fn from_degenerate(case: &mut Case) -> LawResult {
    let q = case.path();
    let i = q.shape().add(&case.nonneg());
    let inputs = || json!({"q": pw(&q), "i": i});
    let zero = NonnegElem::zero();
    let end = PiecewisePath::constant(q.target());
    check(exact("from 0 q", &q.from(&zero), &q), inputs)?;
    check(exact("from i q", &q.from(&i), &end), inputs)?;
    check(agree("from 0 q", &from(&zero, &q.to_path()), &q, case), inputs)?;
    check(agree("from i q", &from(&i, &q.to_path()), &end, case), inputs)
}

// Tap fibrations

fn transport_along_idp(case: &mut Case, fib: &Fibration, x: Value, inputs: Json) -> LawResult {
    let ty = eval(fib.fiber(&x), || inputs.clone())?;
    let Some(a) = case.element(&ty) else { return Ok(()) };
    let out = eval(fib.transport(&vidp(x.clone()), &a), || inputs.clone())?;
    ensure(
        sem_eq(&ty, &out, &a, &case.spec),
        || json!({"fibration": inputs, "point": x.to_string(), "element": a.to_string()}),
        || format!("transport along idp moved {a} to {out}"),
    )
}

fn base_point(case: &mut Case) -> Value {
    point(&case.scalar())
}

fn idp_const(case: &mut Case) -> LawResult {
    let k = case.pick(&BaseKind::ALL);
    let x = base_point(case);
    transport_along_idp(case, &base(k), x, json!({"former": "const", "base": k}))
}

fn idp_sigma(case: &mut Case) -> LawResult {
    let (ka, kb) = (case.pick(&BaseKind::ALL), case.pick(&BaseKind::ALL));
    let x = base_point(case);
    transport_along_idp(case, &sigma_fib(&base(ka), &dependent(kb)), x, json!({"former": "sigma", "a": ka, "b": kb}))
}

fn idp_pi(case: &mut Case) -> LawResult {
    let (ka, kb) = (case.pick(&BaseKind::ALL), case.pick(&BaseKind::ALL));
    let x = base_point(case);
    transport_along_idp(case, &pi_fib(&base(ka), &dependent(kb)), x, json!({"former": "pi", "a": ka, "b": kb}))
}

fn idp_sum(case: &mut Case) -> LawResult {
    let (ka, kb) = (case.pick(&BaseKind::ALL), case.pick(&BaseKind::ALL));
    let x = base_point(case);
    transport_along_idp(case, &sum_fib(&base(ka), &base(kb)), x, json!({"former": "sum", "a": ka, "b": kb}))
}

fn idp_w(case: &mut Case) -> LawResult {
    let ka = case.pick(&[BaseKind::ConstBool, BaseKind::Flip]);
    let x = base_point(case);
    transport_along_idp(case, &w_fib(&base(ka), &branching()), x, json!({"former": "w", "a": ka}))
}

fn idp_id(case: &mut Case) -> LawResult {
    let ka = case.pick(&BaseKind::ALL);
    let x = base_point(case);
    let ty = ka.fiber();
    let (Some(a1), Some(a2)) = (case.element(&ty), case.element(&ty)) else { return Ok(()) };
    let pt = Value::pair(Value::pair(x, a1), a2);
    transport_along_idp(case, &id_fib(&base(ka)), pt, json!({"former": "id", "a": ka}))
}

fn lift_idp(case: &mut Case) -> LawResult {
    let k = case.pick(&BaseKind::ALL);
    let x = base_point(case);
    let Some(a) = case.element(&k.fiber()) else { return Ok(()) };
    let inputs = || json!({"base": k, "x": x.to_string(), "a": a.to_string()});
    let l = lift(&base(k), &vidp(x.clone()), &a);
    ensure(l.shape().is_zero(), inputs, || format!("shape {}", l.shape()))?;
    let src = eval(l.source(), inputs)?;
    let ty = SemType::product(SemType::Cone, k.fiber());
    ensure(sem_eq(&ty, &src, &Value::pair(x.clone(), a.clone()), &case.spec), inputs, || {
        format!("lift starts at {src}")
    })
}

fn snd_idp(case: &mut Case) -> LawResult {
    let k = case.pick(&BaseKind::ALL);
    let x = base_point(case);
    let Some(a) = case.element(&k.fiber()) else { return Ok(()) };
    let inputs = || json!({"base": k, "x": x.to_string(), "a": a.to_string()});
    let s = snd_path(&base(k), &vidp(Value::pair(x.clone(), a.clone())));
    ensure(s.shape().is_zero(), inputs, || format!("shape {}", s.shape()))?;
    let src = eval(s.source(), inputs)?;
    ensure(sem_eq(&k.fiber(), &src, &a, &case.spec), inputs, || format!("snd path sits at {src}"))
}

#[derive(Clone, Copy, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum Former {
    Sigma,
    Pi,
    Sum,
    W,
    Id,
}

fn stability(case: &mut Case) -> LawResult {
    let former = case.pick(&[Former::Sigma, Former::Pi, Former::Sum, Former::W, Former::Id]);
    let ka = case.pick(&BaseKind::ALL);
    let kb = case.pick(&BaseKind::ALL);
    let (c, d) = (case.nonneg(), case.nonneg());
    let path = case.path();
    let inputs = || json!({"former": former, "a": ka, "b": kb, "scale": c, "offset": d, "path": pw(&path)});
    let sigma = affine(c.clone(), d.clone());
    let mut p = context_path(&path);
    let (a, b) = (base(ka), dependent(kb));
    let (lhs, rhs) = match former {
        Former::Sigma => (
            reindex(&sigma_fib(&a, &b), sigma.clone()),
            sigma_fib(&reindex(&a, sigma.clone()), &reindex(&b, weaken(&sigma))),
        ),
        Former::Pi => {
            (reindex(&pi_fib(&a, &b), sigma.clone()), pi_fib(&reindex(&a, sigma.clone()), &reindex(&b, weaken(&sigma))))
        }
        Former::Sum => {
            let b = base(kb);
            (
                reindex(&sum_fib(&a, &b), sigma.clone()),
                sum_fib(&reindex(&a, sigma.clone()), &reindex(&b, sigma.clone())),
            )
        }
        Former::W => {
            let (a, b) = (const_fib(SemType::Bool), branching());
            (reindex(&w_fib(&a, &b), sigma.clone()), w_fib(&reindex(&a, sigma.clone()), &reindex(&b, weaken(&sigma))))
        }
        Former::Id => {
            let ty = ka.fiber();
            let (Some(a1), Some(a2)) = (case.element(&ty), case.element(&ty)) else { return Ok(()) };
            let moved = reindex(&a, sigma.clone());
            p = lift_twice(&moved, &p, &a1, &a2);
            let s = sigma.clone();
            let sigma_aa = FunValue::new(move |pt| {
                let (da1, a2) = pt.as_pair()?;
                let (d, a1) = da1.as_pair()?;
                Ok(Value::pair(Value::pair(s.apply(d)?, a1.clone()), a2.clone()))
            });
            (reindex(&id_fib(&a), sigma_aa), id_fib(&moved))
        }
    };
    let start = eval(p.source(), inputs)?;
    let ty = eval(lhs.fiber(&start), inputs)?;
    let Some(v) = case.element(&ty) else { return Ok(()) };
    let l = eval(lhs.transport(&p, &v), inputs)?;
    let r = eval(rhs.transport(&p, &v), inputs)?;
    let end_ty = eval(lhs.fiber(&eval(p.target(), inputs)?), inputs)?;
    ensure(sem_eq(&end_ty, &l, &r, &case.spec), inputs, || {
        format!("transport of {v}: {l} after re-indexing, {r} before")
    })
}

fn homotopy_assoc(case: &mut Case) -> LawResult {
    let k = case.pick(&BaseKind::ALL);
    let (pp, qp) = {
        let p = case.path();
        let q = case.path_from(p.target());
        (p, q)
    };
    let inputs = || json!({"base": k, "p": pw(&pp), "q": pw(&qp)});
    let (p, q) = (context_path(&pp), context_path(&qp));
    let a_fib = base(k);
    let Some(a) = case.element(&k.fiber()) else { return Ok(()) };
    let tp_a = eval(a_fib.transport(&p, &a), inputs)?;
    let motive = {
        let (a_fib, p, a, tp_a) = (a_fib.clone(), p.clone(), a.clone(), tp_a.clone());
        reindex(
            &id_fib(&a_fib.clone()),
            FunValue::new(move |pt| {
                let (yz, q) = pt.as_pair()?;
                let z = yz.snd()?;
                let q = q.as_path()?;
                let whole = a_fib.transport(&compose_unchecked(q, &p), &a)?;
                let stepwise = a_fib.transport(q, &tp_a)?;
                Ok(Value::pair(Value::pair(z, whole), stepwise))
            }),
        )
    };
    let beta = FunValue::constant(Value::Path(vidp(tp_a.clone())));
    let y = eval(q.source(), inputs)?;
    let witness = eval(j_elim(&motive, &beta, &Value::Unit, &y, &q), inputs)?;
    let witness = eval(witness.as_path().cloned(), inputs)?;
    let whole = eval(a_fib.transport(&compose_unchecked(&q, &p), &a), inputs)?;
    let stepwise = eval(a_fib.transport(&q, &tp_a), inputs)?;
    let ty = k.fiber();
    let (src, tgt) = (eval(witness.source(), inputs)?, eval(witness.target(), inputs)?);
    ensure(sem_eq(&ty, &src, &whole, &case.spec), inputs, || format!("path starts at {src}, not at {whole}"))?;
    ensure(sem_eq(&ty, &tgt, &stepwise, &case.spec), inputs, || format!("path ends at {tgt}, not at {stepwise}"))
}

fn scalar_path_eq(p: &VPath, q: &VPath, case: &Case) -> Result<(), String> {
    path_eq_by(p, q, &case.spec, |a, b| match (a, b) {
        (Ok(a), Ok(b)) => sem_eq(&SemType::Cone, a, b, &case.spec),
        _ => false,
    })
    .map_err(|d| d.to_string())
}

fn singleton(case: &mut Case) -> LawResult {
    let path = case.path();
    let inputs = || json!({"p": pw(&path)});
    let p = context_path(&path);
    let c = singleton_contraction(&p);
    let (src, tgt) = (eval(c.source(), inputs)?, eval(c.target(), inputs)?);
    let (x, y) = (eval(p.source(), inputs)?, eval(p.target(), inputs)?);
    let parts = |v: &Value| -> Result<(Value, VPath), EvalError> { Ok((v.fst()?, v.snd()?.as_path()?.clone())) };
    let (sx, sp) = eval(parts(&src), inputs)?;
    let (ty, tp) = eval(parts(&tgt), inputs)?;
    ensure(sem_eq(&SemType::Cone, &sx, &x, &case.spec), inputs, || format!("source point {sx}"))?;
    check(scalar_path_eq(&sp, &idp(Ok(x.clone())), case).map_err(|w| format!("source path: {w}")), inputs)?;
    ensure(sem_eq(&SemType::Cone, &ty, &y, &case.spec), inputs, || format!("target point {ty}"))?;
    check(scalar_path_eq(&tp, &p, case).map_err(|w| format!("target path: {w}")), inputs)
}

// J

fn j_computation(case: &mut Case) -> LawResult {
    let (ka, kb) = (case.pick(&BaseKind::ALL), case.pick(&BaseKind::ALL));
    let offset: u64 = case.rng.gen_range(0..=4);
    let inputs = || json!({"a": ka, "b": kb, "offset": offset});
    let motive = reindex(
        &base(kb),
        FunValue::new(|pt| {
            let (xaa, p) = pt.as_pair()?;
            let (xa, a2) = xaa.as_pair()?;
            let (x, a1) = xa.as_pair()?;
            let n = encode(a1) + encode(a2) + floor(p.as_path()?.shape());
            Ok(Value::Scalar(x.as_scalar()?.add(&NonnegElem::from_integer(n))))
        }),
    );
    let beta = FunValue::new(move |xa| {
        let (x, a) = xa.as_pair()?;
        let n = floor(x.as_scalar()?) + encode(a) + offset;
        Ok(match kb.fiber() {
            SemType::Bool => Value::Bool(n.is_multiple_of(2)),
            _ => Value::Nat(n),
        })
    });
    let x = base_point(case);
    let Some(a) = case.element(&ka.fiber()) else { return Ok(()) };
    let inputs2 = || json!({"motive": inputs(), "x": x.to_string(), "a": a.to_string()});
    let lhs = eval(j_elim(&motive, &beta, &x, &a, &vidp(a.clone())), inputs2)?;
    let rhs = eval(beta.apply(&Value::pair(x.clone(), a.clone())), inputs2)?;
    ensure(sem_eq(&kb.fiber(), &lhs, &rhs, &case.spec), inputs2, || {
        format!("J on refl gave {lhs}, the base case is {rhs}")
    })
}

// Function extensionality

enum Homotopy {
    Linear(LinearHomotopy),
    Bool(BoolHomotopy),
}

impl Homotopy {
    fn random(case: &mut Case) -> Self {
        if case.coin() {
            Homotopy::Linear(LinearHomotopy::random(case))
        } else {
            Homotopy::Bool(BoolHomotopy::random(case))
        }
    }

    fn build(&self) -> PointwiseHomotopy {
        match self {
            Homotopy::Linear(h) => h.homotopy(),
            Homotopy::Bool(h) => h.homotopy(),
        }
    }

    fn codomain(&self) -> SemType {
        match self {
            Homotopy::Linear(_) => SemType::Cone,
            Homotopy::Bool(_) => SemType::Bool,
        }
    }

    fn json(&self) -> Json {
        match self {
            Homotopy::Linear(h) => json!({"linear": h}),
            Homotopy::Bool(h) => json!({"bool": h}),
        }
    }
}

fn value_path_eq(ty: &SemType, p: &VPath, q: &VPath, case: &Case) -> Result<(), String> {
    path_eq_by(p, q, &case.spec, |a, b| match (a, b) {
        (Ok(a), Ok(b)) => sem_eq(ty, a, b, &case.spec),
        _ => false,
    })
    .map_err(|d| d.to_string())
}

fn funext_shape(case: &mut Case) -> LawResult {
    let h = Homotopy::random(case);
    let p = funext(&h.build());
    ensure(p.shape() == &NonnegElem::one(), || h.json(), || format!("shape {}", p.shape()))
}

fn funext_endpoints(case: &mut Case) -> LawResult {
    let h = Homotopy::random(case);
    let e = h.build();
    let p = funext(&e);
    let (f, g) = (eval(p.source(), || h.json())?, eval(p.target(), || h.json())?);
    for x in crate::fib::probe_values(e.domain(), &case.spec) {
        let ex = eval(e.at(&x), || h.json())?;
        let (fx, gx) = (eval(f.apply(&x), || h.json())?, eval(g.apply(&x), || h.json())?);
        let (sx, tx) = (eval(ex.source(), || h.json())?, eval(ex.target(), || h.json())?);
        ensure(
            sem_eq(&h.codomain(), &fx, &sx, &case.spec),
            || h.json(),
            || format!("at {x}: start {fx}, expected {sx}"),
        )?;
        ensure(
            sem_eq(&h.codomain(), &gx, &tx, &case.spec),
            || h.json(),
            || format!("at {x}: end {gx}, expected {tx}"),
        )?;
    }
    Ok(())
}

fn funext_interpolant(case: &mut Case) -> LawResult {
    let (j, s) = (case.unit(), case.nonneg());
    let inputs = || json!({"j": j, "s": s});
    let one = RingElem::one();
    let identity = |j: &NonnegElem| -> Result<(), String> {
        let (u, v) = interpolants(j, &s);
        let product = u.value() * v.value();
        let (jv, sv) = (j.value(), s.value());
        let expected = sv + &(&(jv * &(&one - jv)) * &(&(sv - &one) * &(sv - &one)));
        if product != expected {
            return Err(format!("at j = {j}: u·v = {product}, expected {expected}"));
        }
        if !sv.leq(&product) {
            return Err(format!("at j = {j}: u·v = {product} is below the shape {s}"));
        }
        Ok(())
    };
    check(identity(&j), inputs)?;
    for k in 0..16 {
        check(identity(&NonnegElem::ratio(k, 15)), inputs)?;
    }
    Ok(())
}

fn funext_epsilon(case: &mut Case) -> LawResult {
    let h = Homotopy::random(case);
    let e = h.build();
    let eps = epsilon(&e);
    ensure(eps.shape() == &NonnegElem::one(), || h.json(), || format!("shape {}", eps.shape()))?;
    let (start, end) = (eps.source(), eps.target());
    let f = funext(&e);
    for x in crate::fib::probe_values(e.domain(), &case.spec) {
        let s = eval(start.at(&x), || h.json())?;
        let t = eval(end.at(&x), || h.json())?;
        let ex = eval(e.at(&x), || h.json())?;
        check(
            value_path_eq(&h.codomain(), &s, &happly(&f, &x), case).map_err(|w| format!("ε 0 at {x}: {w}")),
            || h.json(),
        )?;
        check(value_path_eq(&h.codomain(), &t, &ex, case).map_err(|w| format!("ε 1 at {x}: {w}")), || h.json())?;
    }
    Ok(())
}

fn funext_eta(case: &mut Case) -> LawResult {
    let h = Homotopy::random(case);
    let e = h.build();
    let shape = case.nonneg();
    let inputs = || json!({"homotopy": h.json(), "shape": shape});
    let p = {
        let e = e.clone();
        babs(shape.clone(), move |i| {
            let (e, i) = (e.clone(), i.clone());
            Ok(Value::fun(move |x| e.at(x)?.at(&i)))
        })
    };
    let fun_ty = SemType::arrow(e.domain().clone(), h.codomain());
    let n = eta(&p);
    check(value_path_eq(&fun_ty, &n.source(), &p, case).map_err(|w| format!("η 0: {w}")), inputs)?;
    let back = funext(&happly_homotopy(&p, e.domain().clone()));
    check(value_path_eq(&fun_ty, &n.target(), &back, case).map_err(|w| format!("η 1: {w}")), inputs)
}

// Universe

fn code_path(family: CodeFamily, p: &PiecewisePath) -> MoorePath<UCode> {
    p.to_path().map(move |v| family.at(&point(&v)).expect("scalar points decode"))
}

fn universe_idp(case: &mut Case) -> LawResult {
    let u = if case.coin() {
        case.pick(&sample_codes())
    } else {
        let family =
            case.pick(&[CodeFamily::Bool, CodeFamily::PiEq, CodeFamily::PiPi, CodeFamily::EqBool, CodeFamily::EqFun]);
        let x = base_point(case);
        family.at(&x).expect("scalar points decode")
    };
    let ty = decode(&u);
    let Some(a) = case.element(&ty) else { return Ok(()) };
    let inputs = || json!({"code": u.to_string(), "a": a.to_string()});
    let out = eval(u_transport(&idp(u.clone()), &a), inputs)?;
    ensure(sem_eq(&ty, &out, &a, &case.spec), inputs, || format!("transport along idp gave {out}"))
}

fn coherence_bool(case: &mut Case) -> LawResult {
    coherence(case, CodeFamily::Bool)
}

fn coherence_pi(case: &mut Case) -> LawResult {
    let family = case.pick(&CodeFamily::PI);
    coherence(case, family)
}

fn coherence_eq(case: &mut Case) -> LawResult {
    let family = case.pick(&CodeFamily::EQ);
    coherence(case, family)
}

/// Transport by cases on the code agrees with transport in the fibration
/// the code decodes to.
fn coherence(case: &mut Case, family: CodeFamily) -> LawResult {
    let path = case.path();
    let inputs = || json!({"family": family, "path": pw(&path)});
    let codes = code_path(family, &path);
    let context = context_path(&path);
    let Some(a) = case.element(&decode(&codes.source())) else { return Ok(()) };
    let lhs = eval(u_transport(&codes, &a), inputs)?;
    let oracle = if let Some((dom, cod)) = family.pi_parts() {
        pi_fib(&reindex(&universe_fib(), dom), &reindex(&universe_fib(), cod))
    } else if let Some((u, x, y)) = family.eq_parts() {
        let carrier = reindex(&universe_fib(), u);
        reindex(
            &id_fib(&carrier),
            FunValue::new(move |g| Ok(Value::pair(Value::pair(g.clone(), x.apply(g)?), y.apply(g)?))),
        )
    } else {
        const_fib(SemType::Bool)
    };
    let rhs = eval(oracle.transport(&context, &a), inputs)?;
    let ty = decode(&codes.target());
    ensure(sem_eq(&ty, &lhs, &rhs, &case.spec), inputs, || {
        format!("transport of {a}: {lhs} by cases, {rhs} by the former")
    })
}

fn universe_pullback(case: &mut Case) -> LawResult {
    let family = case.pick(&CodeFamily::PI);
    let path = case.path();
    let codes = code_path(family, &path);
    let UCode::Pi(dom, _) = codes.target() else { unreachable!("pi families") };
    let ty = decode(&dom);
    let Some(x) = case.element(&ty) else { return Ok(()) };
    let k = codes.shape().add(&case.nonneg());
    let inputs = || json!({"family": family, "path": pw(&path), "x": x.to_string(), "k": k});
    let out = eval(pi_pullback(&codes, &x, &k), inputs)?;
    ensure(sem_eq(&ty, &out, &x, &case.spec), inputs, || format!("x̄ {k} = {out}"))
}

// Degeneracy

/// Over the integers the unit interval has no interior points, so the step
/// from `true` to `false` is a lawful path of shape 1.
fn step_path(case: &mut Case) -> LawResult {
    let one = NonnegElem::new(case.ring.one()).expect("one is nonnegative");
    let end = one.clone();
    let p: VPath = babs(one.clone(), move |i| Ok(Value::Bool(i < &end)));
    let ring = case.ring;
    let inputs = || json!({"ring": ring.name()});
    ensure(p.shape() == &NonnegElem::one(), inputs, || format!("shape {}", p.shape()))?;
    let (s, t) = (eval(p.source(), inputs)?, eval(p.target(), inputs)?);
    ensure(matches!((s.as_bool(), t.as_bool()), (Ok(true), Ok(false))), inputs, || format!("endpoints {s} and {t}"))?;
    let probe = case.unit();
    ensure(
        probe.is_zero() || probe == one,
        || json!({"ring": ring.name(), "probe": probe}),
        || format!("{probe} lies strictly inside the unit interval"),
    )
}
