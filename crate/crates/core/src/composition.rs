//! Parallel composition, hiding and shared-output boundedness.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::model::{Action, Alphabet, Iolts, Label, Lts, LtsBuilder, ModelKind, StateId};
use crate::semantics::find_cycle;

fn names(set: impl IntoIterator<Item = Action>) -> String {
    set.into_iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Synchronous product on shared labels, interleaving on the rest.
pub fn parallel(a: &Iolts, b: &Iolts) -> Result<Iolts> {
    let shared_in: BTreeSet<Action> = a.inputs().intersection(b.inputs()).cloned().collect();
    if !shared_in.is_empty() {
        return Err(Error::Alphabet(format!(
            "`{}` and `{}` share inputs {}",
            a.name(),
            b.name(),
            names(shared_in)
        )));
    }
    let shared_out: BTreeSet<Action> = a.outputs().intersection(b.outputs()).cloned().collect();
    if !shared_out.is_empty() {
        return Err(Error::Alphabet(format!(
            "`{}` and `{}` share outputs {}",
            a.name(),
            b.name(),
            names(shared_out)
        )));
    }
    let outputs: BTreeSet<Action> = a.outputs().union(b.outputs()).cloned().collect();
    let inputs: BTreeSet<Action> = a
        .inputs()
        .union(b.inputs())
        .filter(|x| !outputs.contains(*x))
        .cloned()
        .collect();
    let alphabet = Alphabet { inputs, outputs };

    let in_a = |l: &Label| l.action().is_some_and(|x| a.alphabet().contains(x));
    let in_b = |l: &Label| l.action().is_some_and(|x| b.alphabet().contains(x));

    let name = format!("{}‖{}", a.name(), b.name());
    let mut builder = LtsBuilder::new(&name, ModelKind::Iolts, alphabet);
    let pair_name = |p: (StateId, StateId)| format!("{}‖{}", a.state_name(p.0), b.state_name(p.1));
    let start = (a.initial(), b.initial());
    let mut ids: HashMap<(StateId, StateId), usize> = HashMap::new();
    let init = builder.add_state(&pair_name(start));
    builder.set_initial(init);
    ids.insert(start, init);
    let mut queue = VecDeque::from([start]);
    while let Some((sa, sb)) = queue.pop_front() {
        let mut moves: Vec<(Label, (StateId, StateId))> = Vec::new();
        for (l, ta) in a.successors(sa) {
            if !in_b(l) {
                moves.push((l.clone(), (*ta, sb)));
            } else {
                for tb in b.post(sb, l) {
                    moves.push((l.clone(), (*ta, tb)));
                }
            }
        }
        for (l, tb) in b.successors(sb) {
            if !in_a(l) {
                moves.push((l.clone(), (sa, *tb)));
            }
        }
        let src = ids[&(sa, sb)];
        for (l, target) in moves {
            let dst = *ids.entry(target).or_insert_with(|| {
                queue.push_back(target);
                builder.add_state(&pair_name(target))
            });
            builder.add_transition(src, l, dst);
        }
    }
    Iolts::from_lts(builder.build()?.0)
}

/// Relabels the outputs in `hidden` to `tau`.
pub fn hide(m: &Iolts, hidden: &BTreeSet<Action>) -> Result<Iolts> {
    let stray: Vec<Action> = hidden.iter().filter(|x| !m.is_output(x)).cloned().collect();
    if !stray.is_empty() {
        return Err(Error::Alphabet(format!(
            "cannot hide {}: not outputs of `{}`",
            names(stray),
            m.name()
        )));
    }
    let alphabet = Alphabet {
        inputs: m.inputs().clone(),
        outputs: m.outputs().difference(hidden).cloned().collect(),
    };
    let mut b = LtsBuilder::new(m.name(), ModelKind::Iolts, alphabet);
    for s in m.states() {
        b.add_state(m.state_name(s));
    }
    b.set_initial(m.initial());
    for (s, l, t) in m.transitions() {
        let l = match l.action() {
            Some(x) if hidden.contains(x) => Label::Tau,
            _ => l.clone(),
        };
        b.add_transition(*s, l, *t);
    }
    Iolts::from_lts(b.build()?.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedOutputReport {
    pub bounded: bool,
    /// Longest uninterrupted run of shared outputs when bounded.
    pub longest_run: usize,
    /// A reachable cycle of shared outputs and internal steps, first state
    /// repeated at the end, when unbounded.
    pub witness: Vec<String>,
}

/// Whether no reachable cycle uses only shared outputs and `tau` steps.
pub fn check_shared_output_bounded(m: &Lts, shared: &BTreeSet<Action>) -> SharedOutputReport {
    let weight = |l: &Label| match l {
        Label::Tau => Some(0),
        Label::Act(x) if shared.contains(x) && m.is_output(x) => Some(1),
        _ => None,
    };
    if let Some(witness) = find_cycle(m, |l| weight(l).is_some()) {
        return SharedOutputReport {
            bounded: false,
            longest_run: 0,
            witness,
        };
    }
    // Acyclic: longest weighted path, relaxing in reverse topological order.
    let reach = m.reachable();
    let mut indegree = vec![0usize; m.state_count()];
    for (s, l, t) in m.transitions() {
        if reach[*s] && weight(l).is_some() {
            indegree[*t] += 1;
        }
    }
    let mut order: Vec<StateId> = m
        .states()
        .filter(|&s| reach[s] && indegree[s] == 0)
        .collect();
    let mut i = 0;
    while i < order.len() {
        for (l, t) in m.successors(order[i]) {
            if weight(l).is_some() {
                indegree[*t] -= 1;
                if indegree[*t] == 0 {
                    order.push(*t);
                }
            }
        }
        i += 1;
    }
    let mut run = vec![0usize; m.state_count()];
    for &s in order.iter().rev() {
        run[s] = m
            .successors(s)
            .iter()
            .filter_map(|(l, t)| weight(l).map(|w| w + run[*t]))
            .max()
            .unwrap_or(0);
    }
    SharedOutputReport {
        bounded: true,
        longest_run: order.iter().map(|&s| run[s]).max().unwrap_or(0),
        witness: Vec::new(),
    }
}
