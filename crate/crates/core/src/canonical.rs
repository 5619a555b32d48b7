//! Isomorphism up to state renaming, via canonical forms.
//!
//! Only reachable states count. Deterministic automata are numbered by a
//! label-ordered breadth-first walk from the initial state, which is already
//! canonical. Nondeterministic ones go through colour refinement followed by
//! individualization, keeping the smallest certificate over all branches.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::model::{format_word, Alphabet, Label, Lts, ModelKind, StateId};

/// A state's colour with its sorted outgoing (label, colour) pairs.
type Signature = (usize, Vec<(String, usize)>);

/// A renaming-invariant description of the reachable part of a model.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub kind_is_sa: bool,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub states: usize,
    pub initial: usize,
    pub edges: Vec<(usize, String, usize)>,
}

pub fn canonical_form(m: &Lts) -> CanonicalForm {
    let reach = m.reachable_states();
    let deterministic = reach.iter().all(|&s| {
        let succ = m.successors(s);
        succ.windows(2).all(|w| w[0].0 != w[1].0) && succ.iter().all(|(l, _)| *l != Label::Tau)
    });
    let numbering = if deterministic {
        bfs_numbering(m)
    } else {
        refined_numbering(m, &reach)
    };
    certificate(m, &numbering)
}

pub fn isomorphic(a: &Lts, b: &Lts) -> bool {
    canonical_form(a) == canonical_form(b)
}

fn alphabet_names(a: &Alphabet) -> (Vec<String>, Vec<String>) {
    (
        a.inputs.iter().map(|x| x.to_string()).collect(),
        a.outputs.iter().map(|x| x.to_string()).collect(),
    )
}

/// `numbering[s]` is `Some(rank)` for reachable states.
fn certificate(m: &Lts, numbering: &[Option<usize>]) -> CanonicalForm {
    let (inputs, outputs) = alphabet_names(m.alphabet());
    let mut edges: Vec<(usize, String, usize)> = m
        .transitions()
        .iter()
        .filter_map(|(s, l, t)| Some((numbering[*s]?, l.to_string(), numbering[*t]?)))
        .collect();
    edges.sort();
    CanonicalForm {
        kind_is_sa: m.kind() == ModelKind::SuspensionAutomaton,
        inputs,
        outputs,
        states: numbering.iter().flatten().count(),
        initial: numbering[m.initial()].expect("initial state is reachable"),
        edges,
    }
}

fn bfs_numbering(m: &Lts) -> Vec<Option<usize>> {
    let mut numbering = vec![None; m.state_count()];
    let mut next = 0;
    numbering[m.initial()] = Some(next);
    next += 1;
    let mut queue = VecDeque::from([m.initial()]);
    while let Some(s) = queue.pop_front() {
        // Successors are sorted by label already.
        for (_, t) in m.successors(s) {
            if numbering[*t].is_none() {
                numbering[*t] = Some(next);
                next += 1;
                queue.push_back(*t);
            }
        }
    }
    numbering
}

/// Refines `colour` (indexed by position in `states`) until stable. New
/// colours are assigned in signature order, so the result only depends on
/// the structure.
fn refine(m: &Lts, states: &[StateId], index: &BTreeMap<StateId, usize>, colour: &mut Vec<usize>) {
    loop {
        let cells_before = colour.iter().collect::<BTreeSet<_>>().len();
        let signatures: Vec<(usize, Vec<(String, usize)>)> = states
            .iter()
            .map(|&s| {
                let mut out: Vec<(String, usize)> = m
                    .successors(s)
                    .iter()
                    .map(|(l, t)| (l.to_string(), colour[index[t]]))
                    .collect();
                out.sort();
                (colour[index[&s]], out)
            })
            .collect();
        let distinct: BTreeSet<&Signature> = signatures.iter().collect();
        let rank: BTreeMap<&Signature, usize> = distinct
            .into_iter()
            .enumerate()
            .map(|(i, sig)| (sig, i))
            .collect();
        *colour = signatures.iter().map(|sig| rank[sig]).collect();
        if rank.len() == cells_before {
            return;
        }
    }
}

fn refined_numbering(m: &Lts, reach: &[StateId]) -> Vec<Option<usize>> {
    let index: BTreeMap<StateId, usize> = reach.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut colour: Vec<usize> = reach
        .iter()
        .map(|&s| usize::from(s != m.initial()))
        .collect();
    refine(m, reach, &index, &mut colour);
    let mut best: Option<(CanonicalForm, Vec<usize>)> = None;
    search(m, reach, &index, colour, &mut best);
    let (_, colour) = best.expect("search visits at least one leaf");
    let mut numbering = vec![None; m.state_count()];
    for (i, &s) in reach.iter().enumerate() {
        numbering[s] = Some(colour[i]);
    }
    numbering
}

fn search(
    m: &Lts,
    reach: &[StateId],
    index: &BTreeMap<StateId, usize>,
    colour: Vec<usize>,
    best: &mut Option<(CanonicalForm, Vec<usize>)>,
) {
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colour.iter().enumerate() {
        cells.entry(c).or_default().push(i);
    }
    let Some((&target, members)) = cells.iter().find(|(_, v)| v.len() > 1) else {
        let mut numbering = vec![None; m.state_count()];
        for (i, &s) in reach.iter().enumerate() {
            numbering[s] = Some(colour[i]);
        }
        let cert = certificate(m, &numbering);
        if best.as_ref().is_none_or(|(b, _)| cert < *b) {
            *best = Some((cert, colour));
        }
        return;
    };
    for &v in members {
        // Split the cell: `v` keeps the lower half of the doubled colour.
        let mut split: Vec<usize> = colour
            .iter()
            .enumerate()
            .map(|(i, &c)| 2 * c + usize::from(c == target && i != v))
            .collect();
        refine(m, reach, index, &mut split);
        search(m, reach, index, split, best);
    }
}

/// A human-readable explanation of why two suspension automata differ: the
/// first word (breadth-first) after which they enable different labels, or
/// a size mismatch when their behaviour agrees.
pub fn describe_difference(left: &Lts, right: &Lts) -> Option<String> {
    if isomorphic(left, right) {
        return None;
    }
    let enabled = |m: &Lts, s: StateId| -> BTreeSet<String> {
        m.successors(s).iter().map(|(l, _)| l.to_string()).collect()
    };
    let mut seen = BTreeSet::from([(left.initial(), right.initial())]);
    let mut queue = VecDeque::from([((left.initial(), right.initial()), Vec::<Label>::new())]);
    while let Some(((l, r), word)) = queue.pop_front() {
        let (el, er) = (enabled(left, l), enabled(right, r));
        if el != er {
            return Some(format!(
                "after `{}`: left enables {{{}}}, right enables {{{}}}",
                format_word(&word),
                el.into_iter().collect::<Vec<_>>().join(","),
                er.into_iter().collect::<Vec<_>>().join(",")
            ));
        }
        for (label, l2) in left.successors(l) {
            let Some((_, r2)) = right.successors(r).iter().find(|(x, _)| x == label) else {
                continue;
            };
            if seen.insert((*l2, *r2)) {
                let mut w = word.clone();
                w.push(label.clone());
                queue.push_back(((*l2, *r2), w));
            }
        }
    }
    let (a, b) = (canonical_form(left), canonical_form(right));
    Some(format!(
        "same enabled labels along every joint path; left has {} states and {} transitions, right has {} and {}",
        a.states,
        a.edges.len(),
        b.states,
        b.edges.len()
    ))
}
