//! Small reproducible cases behind verdicts reported by the acceptance run.

mod common;

use std::collections::BTreeSet;

use decomp::composition::{hide, parallel};
use decomp::conformance::{ioco_check, ioco_check_sa};
use decomp::interface::InterfaceSpec;
use decomp::onthefly::check_internal_choice;
use decomp::quotient::{check_decomposable, Decomposability};
use decomp::{parse_iolts, Action, Label};

const SPEC: &str = "\
name s
inputs a
outputs x
init s0
trans s0 tau s1
trans s0 x s1
trans s0 a s0
trans s1 a s1
";

const ENV: &str = "\
name e
inputs a u
outputs v
init e0
trans e0 a e0
trans e0 u e0
";

/// Emits `x` first, but also accepts `v` before doing so.
const EAGER: &str = "\
name k
inputs v
outputs u x
init k0
trans k0 v k0
trans k0 x k1
trans k1 v k0
";

/// Only accepts `v` once quiescent, and may fall silent instead of
/// emitting `x`.
const PATIENT: &str = "\
name k
inputs v
outputs u x
init k0
trans k0 x k1
trans k0 tau k2
trans k1 v k1
trans k2 v k2
";

#[test]
fn quotient_rejects_a_component_whose_composition_conforms() {
    let (s, e) = (parse_iolts(SPEC).unwrap(), parse_iolts(ENV).unwrap());
    assert!(check_internal_choice(&e).internal_choice);
    let iface = InterfaceSpec::from_models(&s, &e).unwrap();
    let Decomposability::Decomposable(q) = check_decomposable(&s, &e, &iface).unwrap() else {
        panic!("pair should be decomposable");
    };
    let hidden = BTreeSet::from([Action::new("u"), Action::new("v")]);

    let eager = parse_iolts(EAGER).unwrap();
    assert!(!check_internal_choice(&eager).internal_choice);
    let verdict = ioco_check_sa(&eager, &q.automaton).unwrap();
    let cx = verdict.counterexample.unwrap();
    assert!(cx.word.is_empty());
    assert_eq!(cx.output, Label::act("x"));
    // The quotient's output condition also follows `delta a` to the silent
    // branch of the spec, but the system is never quiescent before `x`.
    let system = hide(&parallel(&eager, &e).unwrap(), &hidden).unwrap();
    assert!(ioco_check(&system, &s).unwrap().holds);
    assert_eq!(common::ioco_bounded(&system, &s, 6), None);

    let patient = parse_iolts(PATIENT).unwrap();
    assert!(check_internal_choice(&patient).internal_choice);
    assert!(decomp::semantics::check_input_enabled(&patient).enabled);
    assert!(!ioco_check_sa(&patient, &q.automaton).unwrap().holds);
    // Here the system can fall silent, but only in the branch that never
    // emits `x`, so again no observer sees `delta a x`.
    let system = hide(&parallel(&patient, &e).unwrap(), &hidden).unwrap();
    assert!(ioco_check(&system, &s).unwrap().holds);
    assert_eq!(common::ioco_bounded(&system, &s, 6), None);
}
