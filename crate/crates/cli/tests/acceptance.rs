//! The acceptance criteria, one numbered check each. Every check prints a
//! single `PASS`/`FAIL` line; the target exits nonzero if any criterion fails.
//! It runs without the libtest harness so the lines are never captured.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mtt_core::fib::{EvalError, Value};
use mtt_core::funext::{funext, PointwiseHomotopy};
use mtt_core::laws::{registry, run, Case, LawConfig, LawReport};
use mtt_core::path::{babs, SampleSpec, DEFAULT_SEED};
use mtt_core::ring::{Mutation, NonnegElem, RingInstance};
use mtt_core::surface::load;
use mtt_core::universe::{check_constructor_stable, u_transport, UCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn laws(filter: &str, count: usize) -> Vec<LawReport> {
    run(&LawConfig { count, filter: Some(filter.into()), ..LawConfig::default() })
}

fn all_pass(reports: &[LawReport], detail: &mut String) -> bool {
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
    for r in &failed {
        let _ = write!(detail, " {} failed: {:?};", r.law, r.counterexample);
    }
    !reports.is_empty() && failed.is_empty()
}

fn has_laws(reports: &[LawReport], ids: &[&str], detail: &mut String) -> bool {
    let missing: Vec<_> = ids.iter().filter(|id| !reports.iter().any(|r| r.law == **id)).collect();
    if !missing.is_empty() {
        let _ = write!(detail, " missing laws {missing:?};");
    }
    missing.is_empty()
}

fn corpus(kind: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(kind);
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mtt"))
        .collect();
    files.sort();
    files
}

fn mtt(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mtt")).args(args).output().expect("mtt runs")
}

fn groupoid() -> Outcome {
    let reports = laws("groupoid", 1000);
    let mut detail = format!("{} laws x 1000 piecewise paths", reports.len());
    let ids = ["groupoid.unit", "groupoid.assoc", "groupoid.reverse-involution", "groupoid.reverse-antihom"];
    let ok = has_laws(&reports, &ids, &mut detail) & all_pass(&reports, &mut detail);
    Outcome { ok, detail }
}

fn bounded() -> Outcome {
    let reports = laws("bounded", 1000);
    let mut detail = format!("{} laws x 1000", reports.len());
    let ids = [
        "bounded.zero",
        "bounded.eta",
        "bounded.map",
        "bounded.upto-zero",
        "bounded.upto-beyond",
        "bounded.from-degenerate",
    ];
    let ok = has_laws(&reports, &ids, &mut detail) & all_pass(&reports, &mut detail);
    Outcome { ok, detail }
}

fn tap() -> Outcome {
    let reports = laws("tap.idp,tap.lift-idp,tap.snd-idp", 500);
    let mut detail = format!("{} laws x 500", reports.len());
    let ids = [
        "tap.idp.const",
        "tap.idp.sigma",
        "tap.idp.pi",
        "tap.idp.sum",
        "tap.idp.w",
        "tap.idp.id",
        "tap.lift-idp",
        "tap.snd-idp",
    ];
    let ok = has_laws(&reports, &ids, &mut detail) & all_pass(&reports, &mut detail);
    Outcome { ok, detail }
}

/// A random motive over `Bool` or `Nat` and a base case for it, as a program
/// whose last definition states `J B β refl ≡ β a` by `refl`.
fn j_program(rng: &mut ChaCha8Rng, correct: bool) -> String {
    let over_bool = rng.gen_bool(0.5);
    let (carrier, a) = if over_bool {
        ("Bool", if rng.gen_bool(0.5) { "true".to_string() } else { "false".to_string() })
    } else {
        ("Nat", rng.gen_range(0..6u32).to_string())
    };
    let k = rng.gen_range(0..5u32);
    let (motive, beta, fiber) = match (over_bool, rng.gen_range(0..3)) {
        (true, 0) => (
            "Bool".to_string(),
            format!("if x then {} else true", ["false", "true"][k as usize % 2]),
            "Bool".to_string(),
        ),
        (true, 1) => ("Nat".to_string(), format!("if x then {k} else {}", k + 1), "Nat".to_string()),
        (true, _) => (
            "If x Nat Bool".to_string(),
            format!("if [c. If c Nat Bool] x then {k} else false"),
            format!("If {a} Nat Bool"),
        ),
        (false, 0) => ("Nat".to_string(), format!("x * {k} + 1"), "Nat".to_string()),
        (false, 1) => ("Nat".to_string(), format!("natrec x {k} (n ih. succ ih)"), "Nat".to_string()),
        (false, _) => {
            ("Bool".to_string(), "natrec x true (n ih. if ih then false else true)".to_string(), "Bool".to_string())
        }
    };
    let expected = if correct { format!("beta {a}") } else { format!("beta {a} + 1") };
    format!(
        "def beta : (x : {carrier}) -> {fiber_x} = \\x. {beta}\n\
         def j : {fiber} = J [x y p. {motive}] (x. beta x) (refl {a})\n\
         def computes : Id ({fiber}) j ({expected}) = refl j\n",
        fiber_x = motive.replace("y", "x"),
    )
}

fn j_rule() -> Outcome {
    let reports = laws("j.computation", 200);
    let mut detail = format!("library: {} instances;", reports.first().map_or(0, |r| r.instances));
    let mut ok = all_pass(&reports, &mut detail);
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut checked = 0;
    for k in 0..200 {
        let src = j_program(&mut rng, true);
        let file = dir.path().join(format!("j{k}.mtt"));
        fs::write(&file, &src).unwrap();
        let out = mtt(&["check", file.to_str().unwrap()]);
        if out.status.code() == Some(0) {
            checked += 1;
        } else {
            ok = false;
            let _ = write!(detail, " rejected:\n{src}{}", String::from_utf8_lossy(&out.stderr));
            break;
        }
    }
    let _ = write!(detail, " surface: {checked}/200 programs checked by `mtt check`;");
    let bad = dir.path().join("bad.mtt");
    // Control: over a `Nat` fiber, `beta a + 1` is well typed but not the computed value.
    let wrong = std::iter::repeat_with(|| j_program(&mut rng, false)).find(|src| src.contains("Id (Nat)")).unwrap();
    fs::write(&bad, wrong).unwrap();
    let rejected = mtt(&["check", bad.to_str().unwrap()]).status.code() == Some(1);
    let _ = write!(detail, " wrong rule rejected: {rejected}");
    ok &= rejected;
    Outcome { ok, detail }
}

fn funext_suite() -> Outcome {
    let reports = laws("funext", 500);
    let mut detail = format!("{} laws x 500;", reports.len());
    let ids = ["funext.shape", "funext.endpoints", "funext.interpolant", "funext.epsilon", "funext.eta"];
    let mut ok = has_laws(&reports, &ids, &mut detail) & all_pass(&reports, &mut detail);

    // The homotopy x ↦ ⟨i ≤ x⟩ i from the zero function to the identity;
    // funext of it at i = 1/2 sends 4 to (1/2)·4.
    let e = PointwiseHomotopy::new(mtt_core::fib::SemType::Cone, |x| {
        let x = x.as_scalar()?.clone();
        Ok(babs(x, |i| Ok(Value::Scalar(i.clone()))))
    });
    let half = NonnegElem::ratio(1, 2);
    let four = NonnegElem::from_integer(4);
    let expected = half.mul(&four);
    let p = funext(&e);
    let library = p.at(&half).and_then(|f| f.apply(&Value::Scalar(four.clone())));
    let library_ok = p.shape() == &NonnegElem::one() && matches!(&library, Ok(Value::Scalar(v)) if *v == expected);
    let _ = write!(detail, " K0/id at (1/2, 4): library {library:?}, expected {expected};");
    let out = mtt(&["eval", "happly (funext (\\x. seg x) : Id (R+ -> R+) (\\x. 0) (\\x. x)) 4"]);
    let printed = String::from_utf8_lossy(&out.stdout).trim().to_string();
    let _ = write!(detail, " surface {printed}");
    ok &= library_ok && printed == "{shape = 1; samples = [0, 1, 2, 3, 4]}";
    Outcome { ok, detail }
}

fn universe() -> Outcome {
    let reports = laws("universe", 200);
    let mut detail = format!("{} laws x 200;", reports.len());
    let ids = [
        "universe.idp",
        "universe.coherence.bool",
        "universe.coherence.pi",
        "universe.coherence.eq",
        "universe.pullback",
    ];
    let mut ok = has_laws(&reports, &ids, &mut detail) & all_pass(&reports, &mut detail);
    let changing = babs(NonnegElem::one(), |i| {
        if i < &NonnegElem::ratio(1, 2) {
            UCode::Bool
        } else {
            UCode::arrow(UCode::Bool, UCode::Bool)
        }
    });
    let raise = || match u_transport(&changing, &Value::Bool(true)) {
        Err(e @ EvalError::ConstructorChange { .. }) => Some(e),
        _ => None,
    };
    let (first, second) = (raise(), raise());
    let stable = check_constructor_stable(&changing, &SampleSpec::default());
    let _ = write!(detail, " constructor change: {first:?}");
    ok &= first.is_some() && first == second && matches!(stable, Err(EvalError::ConstructorChange { .. }));
    Outcome { ok, detail }
}

fn degeneracy() -> Outcome {
    let integers = run(&LawConfig {
        count: 200,
        filter: Some("degeneracy".into()),
        ring: RingInstance::Integers,
        ..LawConfig::default()
    });
    let mut detail = format!("integers: {} instances;", integers.first().map_or(0, |r| r.instances));
    let mut ok = has_laws(&integers, &["degeneracy.step-path"], &mut detail) & all_pass(&integers, &mut detail);

    // Over the rationals the same construction is refuted by an interior point.
    let law = registry().iter().find(|l| l.id == "degeneracy.step-path").unwrap();
    let refuted = (0..200u64).any(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        rng.set_stream(k);
        let mut case = Case { rng, ring: RingInstance::Rationals, spec: SampleSpec::default() };
        (law.check)(&mut case).is_err()
    });
    let _ = write!(detail, " step path refuted over rationals: {refuted};");
    ok &= refuted;

    let mut closed_proofs = Vec::new();
    for file in corpus("pos") {
        let m = load(&fs::read_to_string(&file).unwrap()).unwrap();
        closed_proofs
            .extend((0..m.defs.len()).filter(|&i| m.type_of(i) == "Id Bool true false").map(|i| (file.clone(), i)));
    }
    let attempts: Vec<_> =
        corpus("neg").into_iter().filter(|f| fs::read_to_string(f).unwrap().contains("Id Bool true false")).collect();
    let rejected = attempts.iter().filter(|f| load(&fs::read_to_string(f).unwrap()).is_err()).count();
    let _ = write!(
        detail,
        " corpus: {} closed proofs of true ~ false, {rejected}/{} attempts rejected",
        closed_proofs.len(),
        attempts.len()
    );
    ok &= closed_proofs.is_empty() && !attempts.is_empty() && rejected == attempts.len();
    Outcome { ok, detail }
}

fn mutation() -> Outcome {
    let mut ok = true;
    let mut detail = String::new();
    for mutation in [Mutation::SwappedTruncatedSub, Mutation::MinIsMax] {
        let reports = run(&LawConfig { filter: Some("groupoid,bounded".into()), mutation, ..LawConfig::default() });
        let failing: Vec<_> =
            reports.iter().filter(|r| !r.passed && r.counterexample.is_some()).map(|r| r.law.as_str()).collect();
        let _ = write!(detail, " {mutation:?}: {} laws fail {failing:?};", failing.len());
        ok &= !failing.is_empty();
    }
    Outcome { ok, detail }
}

fn corpus_checks() -> Outcome {
    let (pos, neg) = (corpus("pos"), corpus("neg"));
    let mut ok = pos.len() >= 30 && neg.len() >= 10;
    let mut detail = String::new();
    let mut passed = 0;
    for file in &pos {
        let path = file.to_str().unwrap();
        let out = mtt(&["check", path]);
        let src = fs::read_to_string(file).unwrap();
        let printed = mtt_core::surface::print::module_to_string(&mtt_core::surface::parse_module(&src).unwrap());
        let round = load(&printed).is_ok()
            && mtt_core::surface::print::module_to_string(&mtt_core::surface::parse_module(&printed).unwrap())
                == printed;
        if out.status.success() && round {
            passed += 1;
        } else {
            ok = false;
            let _ = write!(detail, " {path} failed;");
        }
    }
    let mut spanned = 0;
    for file in &neg {
        let path = file.to_str().unwrap();
        let out = mtt(&["check", path]);
        let stderr = String::from_utf8_lossy(&out.stderr);
        let located = stderr.strip_prefix(path).and_then(|r| r.strip_prefix(':')).is_some_and(|r| {
            let mut parts = r.splitn(3, ':');
            parts.next().is_some_and(|l| l.parse::<u32>().is_ok())
                && parts.next().is_some_and(|c| c.parse::<u32>().is_ok())
        });
        if out.status.code() == Some(1) && located {
            spanned += 1;
        } else {
            ok = false;
            let _ = write!(detail, " {path}: exit {:?} `{stderr}`;", out.status.code());
        }
    }
    let _ = write!(
        detail,
        " {passed}/{} positive check and round-trip, {spanned}/{} negative fail with spans",
        pos.len(),
        neg.len()
    );
    Outcome { ok, detail }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("groupoid laws", Duration::from_secs(10), groupoid),
        ("bounded abstraction and contraction", Duration::from_secs(5), bounded),
        ("transport along constant paths", Duration::from_secs(15), tap),
        ("J computation rule", Duration::from_secs(5), j_rule),
        ("function extensionality", Duration::from_secs(5), funext_suite),
        ("universe coherence", Duration::from_secs(10), universe),
        ("degeneracy over the integers", Duration::from_secs(60), degeneracy),
        ("mutation smoke test", Duration::from_secs(60), mutation),
        ("corpus", Duration::from_secs(60), corpus_checks),
    ];
    let mut total = Duration::ZERO;
    let mut failures = Vec::new();
    for (n, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        total += elapsed;
        let ok = outcome.ok && elapsed <= budget;
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {verdict} {name} ({:.2} s, budget {} s):{}",
            n + 1,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            outcome.detail
        );
        if !ok {
            failures.push(n + 1);
        }
    }
    let within = total <= Duration::from_secs(60);
    println!("full suite: {} ({:.2} s, budget 60 s)", if within { "PASS" } else { "FAIL" }, total.as_secs_f64());
    if failures.is_empty() && within {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failures:?}");
        ExitCode::FAILURE
    }
}
