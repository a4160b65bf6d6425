use mtt_core::laws::{registry, run, Execution, LawConfig};
use mtt_core::ring::{Mutation, RingInstance};

fn config(filter: &str, count: usize) -> LawConfig {
    LawConfig { count, filter: Some(filter.into()), ..LawConfig::default() }
}

fn json(config: &LawConfig) -> String {
    serde_json::to_string_pretty(&run(config)).unwrap()
}

#[test]
fn identical_inputs_give_byte_identical_reports() {
    let c = config("groupoid,tap.idp,funext.shape", 40);
    assert_eq!(json(&c), json(&c));
    let sequential = LawConfig { execution: Execution::Sequential, ..c.clone() };
    assert_eq!(json(&c), json(&sequential));
}

#[test]
fn reports_have_the_documented_fields() {
    let reports: serde_json::Value = serde_json::from_str(&json(&config("groupoid.unit", 5))).unwrap();
    let first = &reports.as_array().unwrap()[0];
    let mut keys: Vec<_> = first.as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(keys, ["counterexample", "instances", "law", "passed"]);
    assert_eq!(first["instances"], 5);
    let timed = LawConfig { timing: true, ..config("groupoid.unit", 5) };
    assert!(run(&timed)[0].elapsed_ms.is_some());
}

#[test]
fn failures_carry_a_replayable_counterexample() {
    let c = LawConfig { mutation: Mutation::SwappedTruncatedSub, ..config("groupoid.reverse-involution", 100) };
    let report = &run(&c)[0];
    assert!(!report.passed);
    let cx = report.counterexample.as_ref().unwrap();
    assert!(cx.inputs.get("p").is_some(), "{cx:?}");
    assert!(!cx.witness.is_empty());
    // The same instance fails again when it is the only one that can.
    let again = &run(&LawConfig { count: cx.instance + 1, ..c })[0];
    assert_eq!(again.counterexample.as_ref().unwrap(), cx);
}

#[test]
fn every_law_holds_on_every_ring_it_claims() {
    for ring in RingInstance::ALL {
        let c = LawConfig { count: 25, ring, ..LawConfig::default() };
        for report in run(&c) {
            assert!(report.passed, "{ring}: {report:?}");
        }
    }
}

#[test]
fn seeds_change_the_instances() {
    let a = LawConfig { mutation: Mutation::MinIsMax, ..config("bounded.eta", 200) };
    let b = LawConfig { seed: a.seed + 1, ..a.clone() };
    let (ra, rb) = (run(&a), run(&b));
    assert!(!ra[0].passed && !rb[0].passed);
    assert_ne!(ra[0].counterexample, rb[0].counterexample);
}

#[test]
fn registry_covers_every_module() {
    for prefix in ["ring.", "groupoid.", "path.", "bounded.", "tap.", "j.", "funext.", "universe.", "degeneracy."] {
        assert!(registry().iter().any(|l| l.id.starts_with(prefix)), "no law under `{prefix}`");
    }
}
