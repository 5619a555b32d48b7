//! ioco between finite models and behaviour inclusion of a platform in a
//! system spec.
//!
//! Both relations quantify over infinitely many words; since suspension
//! automata are deterministic each word reaches one product state, so the
//! checks run as breadth-first searches over reachable product states. The
//! first failing state found yields a shortest counterexample, ties broken
//! by label order.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::composition::hide;
use crate::error::{Error, Result};
use crate::interface::InterfaceSpec;
use crate::model::{format_word, Action, Iolts, Label, Limits, Lts, StateId, SuspensionAutomaton};
use crate::semantics::{
    check_divergence, check_input_enabled, delta_transform_with, is_quiescent, out_set, step,
    tau_closure, InputEnabledReport, StateSet,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub word: Vec<Label>,
    pub output: Label,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "after `{}` output `{}` is not allowed",
            format_word(&self.word),
            self.output
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformanceVerdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl ConformanceVerdict {
    fn holds() -> Self {
        ConformanceVerdict {
            holds: true,
            counterexample: None,
        }
    }

    fn fails(word: Vec<Label>, output: Label) -> Self {
        ConformanceVerdict {
            holds: false,
            counterexample: Some(Counterexample { word, output }),
        }
    }
}

fn not_enabled(report: &InputEnabledReport) -> Error {
    let (state, missing) = &report.offending[0];
    Error::NotInputEnabled(format!("state `{state}` (missing {})", missing.join(",")))
}

/// `impl ioco spec`.
pub fn ioco_check(imp: &Iolts, spec: &Iolts) -> Result<ConformanceVerdict> {
    ioco_check_with(imp, spec, &Limits::default())
}

pub fn ioco_check_with(imp: &Iolts, spec: &Iolts, limits: &Limits) -> Result<ConformanceVerdict> {
    let spec_sa = delta_transform_with(spec, limits)?;
    ioco_check_sa_with(imp, &spec_sa, limits)
}

/// `impl ioco spec` for a spec given as a suspension automaton.
pub fn ioco_check_sa(imp: &Iolts, spec: &SuspensionAutomaton) -> Result<ConformanceVerdict> {
    ioco_check_sa_with(imp, spec, &Limits::default())
}

pub fn ioco_check_sa_with(
    imp: &Iolts,
    spec: &SuspensionAutomaton,
    limits: &Limits,
) -> Result<ConformanceVerdict> {
    let missing: Vec<String> = spec
        .inputs()
        .iter()
        .filter(|a| !imp.is_input(a))
        .map(|a| a.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Alphabet(format!(
            "spec inputs {} are not inputs of `{}`",
            missing.join(","),
            imp.name()
        )));
    }
    let report = check_input_enabled(imp);
    if !report.enabled {
        return Err(not_enabled(&report));
    }
    let imp_sa = delta_transform_with(imp, limits)?;
    ioco_sa(&imp_sa, spec, limits)
}

/// The product search on two suspension automata.
pub fn ioco_sa(
    imp: &SuspensionAutomaton,
    spec: &SuspensionAutomaton,
    limits: &Limits,
) -> Result<ConformanceVerdict> {
    let start = (imp.initial(), spec.initial());
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([(start, Vec::new())]);
    while let Some(((i, s), word)) = queue.pop_front() {
        let allowed = spec.out(s);
        if let Some(x) = imp.out(i).into_iter().find(|x| !allowed.contains(x)) {
            return Ok(ConformanceVerdict::fails(word, x));
        }
        for (label, s2) in spec.successors(s) {
            let Some(i2) = imp.step(i, label) else {
                continue;
            };
            if seen.insert((i2, *s2)) {
                limits.check(seen.len())?;
                let mut w = word.clone();
                w.push(label.clone());
                queue.push_back(((i2, *s2), w));
            }
        }
    }
    Ok(ConformanceVerdict::holds())
}

/// `out(q) ∩ L_e = ∅`.
pub fn relative_quiescent(m: &Lts, q: &StateSet, env_labels: &BTreeSet<Action>) -> bool {
    out_set(m, q)
        .iter()
        .all(|l| l.action().is_none_or(|a| !env_labels.contains(a)))
}

/// Keeps symbols of `env_labels`, maps both quiescence symbols to `delta`,
/// drops the rest.
pub fn project(word: &[Label], env_labels: &BTreeSet<Action>) -> Vec<Label> {
    word.iter()
        .filter_map(|l| match l {
            Label::Delta | Label::DeltaE => Some(Label::Delta),
            Label::Act(a) if env_labels.contains(a) => Some(l.clone()),
            _ => None,
        })
        .collect()
}

/// The platform as seen through the hidden interface: its hidden outputs
/// are internal steps, and its hidden inputs may arrive at any time.
pub(crate) struct HiddenEnv {
    pub model: Iolts,
    hidden_inputs: Vec<Label>,
}

impl HiddenEnv {
    pub fn new(env: &Iolts, iface: &InterfaceSpec) -> Result<Self> {
        let model = hide(env, &iface.hidden_inputs())?;
        let report = check_divergence(&model);
        if report.divergent {
            return Err(Error::Divergent(report.witness.join(" -> ")));
        }
        let hidden_inputs = iface.hidden_outputs().into_iter().map(Label::Act).collect();
        Ok(HiddenEnv {
            model,
            hidden_inputs,
        })
    }

    pub fn close(&self, q: StateSet) -> StateSet {
        let mut current = q;
        loop {
            let closed = tau_closure(&self.model, &current);
            let mut next = closed.clone();
            for &s in &closed {
                for l in &self.hidden_inputs {
                    next.extend(self.model.post(s, l));
                }
            }
            if next == current {
                return current;
            }
            current = next;
        }
    }

    pub fn initial(&self) -> StateSet {
        self.close(StateSet::from([self.model.initial()]))
    }

    /// The platform's move for one symbol of a spec word.
    pub fn advance(&self, q: &StateSet, sym: &Label) -> StateSet {
        match sym {
            Label::Delta | Label::DeltaE => self.close(
                q.iter()
                    .copied()
                    .filter(|&s| is_quiescent(&self.model, s))
                    .collect(),
            ),
            Label::Act(a) if self.model.alphabet().contains(a) => {
                self.close(step(&self.model, q, sym).expect("symbol is in the alphabet"))
            }
            _ => q.clone(),
        }
    }
}

/// `env ⊑ spec`.
pub fn inclusion_check(
    env: &Iolts,
    spec: &Iolts,
    iface: &InterfaceSpec,
) -> Result<ConformanceVerdict> {
    inclusion_check_with(env, spec, iface, &Limits::default())
}

pub fn inclusion_check_with(
    env: &Iolts,
    spec: &Iolts,
    iface: &InterfaceSpec,
    limits: &Limits,
) -> Result<ConformanceVerdict> {
    let report = check_input_enabled(env);
    if !report.enabled {
        return Err(not_enabled(&report));
    }
    let spec_sa = delta_transform_with(spec, limits)?;
    inclusion_unchecked(env, &spec_sa, iface, limits)
}

/// The inclusion search without the input-enabledness precondition.
pub(crate) fn inclusion_unchecked(
    env: &Iolts,
    spec: &SuspensionAutomaton,
    iface: &InterfaceSpec,
    limits: &Limits,
) -> Result<ConformanceVerdict> {
    let henv = HiddenEnv::new(env, iface)?;
    let env_labels = iface.env_labels();
    let relatively_quiescent = |q: StateId| {
        spec.out(q)
            .iter()
            .all(|l| l.action().is_none_or(|a| !env_labels.contains(a)))
    };

    let start = (spec.initial(), henv.initial());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, Vec::new())]);
    while let Some(((q, e), word)) = queue.pop_front() {
        // Platform quiescence may be masked by the component, so it is
        // matched against relative quiescence of the spec.
        let allowed = spec.out(q);
        let rq = relatively_quiescent(q);
        let permitted = |x: &Label| allowed.contains(x) || (*x == Label::Delta && rq);
        if let Some(x) = out_set(&henv.model, &e).into_iter().find(|x| !permitted(x)) {
            return Ok(ConformanceVerdict::fails(word, x));
        }
        let mut moves: Vec<(Label, StateId)> = spec.successors(q).to_vec();
        if rq {
            moves.push((Label::DeltaE, q));
            moves.sort();
        }
        for (label, q2) in moves {
            let e2 = henv.advance(&e, &label);
            if e2.is_empty() {
                continue;
            }
            if seen.insert((q2, e2.clone())) {
                limits.check(seen.len())?;
                let mut w = word.clone();
                w.push(label);
                queue.push_back(((q2, e2), w));
            }
        }
    }
    Ok(ConformanceVerdict::holds())
}
