//! Seeded generators of small models for property suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Action, Alphabet, Iolts, Label, LtsBuilder, ModelKind};

#[derive(Clone, Debug)]
pub struct ModelShape {
    pub max_states: usize,
    pub max_transitions: usize,
    pub inputs: Vec<&'static str>,
    pub outputs: Vec<&'static str>,
    /// Probability that a generated edge is internal.
    pub tau_probability: f64,
}

impl Default for ModelShape {
    fn default() -> Self {
        ModelShape {
            max_states: 6,
            max_transitions: 12,
            inputs: vec!["a", "b"],
            outputs: vec!["x", "y"],
            tau_probability: 0.2,
        }
    }
}

fn build(name: &str, alphabet: Alphabet, states: usize, edges: &[(usize, Label, usize)]) -> Iolts {
    let mut b = LtsBuilder::new(name, ModelKind::Iolts, alphabet);
    for i in 0..states {
        b.add_state(&format!("s{i}"));
    }
    b.set_initial(0);
    for (s, l, t) in edges {
        b.add_transition(*s, l.clone(), *t);
    }
    Iolts::from_lts(b.build().expect("generated models are well-formed").0)
        .expect("generated models are plain IOLTSs")
}

/// A random IOLTS. Internal edges only go from lower to higher state
/// indices, so the result is never divergent.
pub fn random_iolts(rng: &mut impl Rng, shape: &ModelShape, name: &str) -> Iolts {
    let states = rng.gen_range(1..=shape.max_states);
    let count = rng.gen_range(0..=shape.max_transitions);
    let labels: Vec<&str> = shape
        .inputs
        .iter()
        .chain(shape.outputs.iter())
        .copied()
        .collect();
    let mut edges = Vec::new();
    for _ in 0..count {
        let s = rng.gen_range(0..states);
        if rng.gen_bool(shape.tau_probability) {
            if s + 1 < states {
                edges.push((s, Label::Tau, rng.gen_range(s + 1..states)));
            }
            continue;
        }
        if let Some(l) = labels.choose(rng) {
            edges.push((s, Label::act(l), rng.gen_range(0..states)));
        }
    }
    build(
        name,
        Alphabet::new(shape.inputs.clone(), shape.outputs.clone()),
        states,
        &edges,
    )
}

/// Adds an input self-loop wherever an input is not weakly enabled.
pub fn input_complete(m: &Iolts) -> Iolts {
    let mut b = LtsBuilder::new(m.name(), ModelKind::Iolts, m.alphabet().clone());
    for s in m.states() {
        b.add_state(m.state_name(s));
    }
    b.set_initial(m.initial());
    for (s, l, t) in m.transitions() {
        b.add_transition(*s, l.clone(), *t);
    }
    for s in m.states() {
        let closure = crate::semantics::tau_closure(m, &[s].into_iter().collect());
        for a in m.inputs() {
            let l = Label::Act(a.clone());
            if !closure.iter().any(|&c| m.post(c, &l).next().is_some()) {
                b.add_transition(s, l, s);
            }
        }
    }
    Iolts::from_lts(b.build().expect("completion keeps the model well-formed").0)
        .expect("completion keeps the kind")
}

/// An input-enabled IOLTS.
pub fn random_iots(rng: &mut impl Rng, shape: &ModelShape, name: &str) -> Iolts {
    input_complete(&random_iolts(rng, shape, name))
}

/// A random input-enabled platform that accepts inputs only in quiescent
/// states. Active states have outputs and an internal step to a quiescent
/// state, so inputs stay weakly enabled and no internal cycle exists.
pub fn random_internal_choice_iots(rng: &mut impl Rng, shape: &ModelShape, name: &str) -> Iolts {
    let states = rng.gen_range(1..=shape.max_states);
    let quiescent: Vec<bool> = (0..states).map(|i| i == 0 || rng.gen_bool(0.5)).collect();
    let rest: Vec<usize> = (0..states).filter(|&i| quiescent[i]).collect();
    let mut edges = Vec::new();
    for (s, &quiet) in quiescent.iter().enumerate() {
        if quiet {
            for a in &shape.inputs {
                edges.push((s, Label::act(a), rng.gen_range(0..states)));
            }
        } else {
            edges.push((
                s,
                Label::Tau,
                *rest.choose(rng).expect("state 0 is quiescent"),
            ));
            for _ in 0..rng.gen_range(1..=2) {
                if let Some(x) = shape.outputs.choose(rng) {
                    edges.push((s, Label::act(x), rng.gen_range(0..states)));
                }
            }
        }
    }
    build(
        name,
        Alphabet::new(shape.inputs.clone(), shape.outputs.clone()),
        states,
        &edges,
    )
}

/// Every deterministic component over `inputs`/`outputs` with exactly
/// `states` states in which each state has one edge per input and at most
/// one output edge.
pub fn enumerate_components(states: usize, inputs: &[&str], outputs: &[&str]) -> Vec<Iolts> {
    // Per state: a target for each input, then either no output or a
    // (label, target) pair.
    let per_state_inputs = states.pow(inputs.len() as u32);
    let per_state_outputs = 1 + outputs.len() * states;
    let per_state = per_state_inputs * per_state_outputs;
    let total = per_state.pow(states as u32);
    let alphabet = Alphabet::new(inputs.to_vec(), outputs.to_vec());
    let mut result = Vec::with_capacity(total);
    for code in 0..total {
        let mut rest = code;
        let mut edges = Vec::new();
        for s in 0..states {
            let mut digit = rest % per_state;
            rest /= per_state;
            for a in inputs {
                edges.push((s, Label::act(a), digit % states));
                digit /= states;
            }
            if digit > 0 {
                let k = digit - 1;
                edges.push((s, Label::act(outputs[k / states]), k % states));
            }
        }
        result.push(build(&format!("k{code}"), alphabet.clone(), states, &edges));
    }
    result
}

/// Picks a non-empty random subset of `xs`.
pub fn non_empty_subset<T: Clone>(rng: &mut impl Rng, xs: &[T]) -> Vec<T> {
    loop {
        let picked: Vec<T> = xs.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !picked.is_empty() {
            return picked;
        }
    }
}

/// Names as actions, for alphabet construction.
pub fn actions(names: &[&str]) -> Vec<Action> {
    names.iter().map(|n| Action::new(n)).collect()
}
