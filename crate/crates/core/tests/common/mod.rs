//! Reference oracles written directly against the raw transition relation,
//! sharing no code with the library's semantics.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use decomp::{Label, Lts, StateId};

pub type Set = BTreeSet<StateId>;

fn closure(m: &Lts, q: &Set) -> Set {
    let mut seen = q.clone();
    let mut todo: Vec<StateId> = q.iter().copied().collect();
    while let Some(s) = todo.pop() {
        for (s2, l, t) in m.transitions() {
            if *s2 == s && *l == Label::Tau && seen.insert(*t) {
                todo.push(*t);
            }
        }
    }
    seen
}

/// No output and no internal step leaves the state.
fn quiet(m: &Lts, s: StateId) -> bool {
    !m.transitions().iter().any(|(src, l, _)| {
        *src == s
            && match l {
                Label::Tau => true,
                Label::Act(a) => m.is_output(a),
                _ => false,
            }
    })
}

fn strong(m: &Lts, q: &Set, sym: &Label) -> Set {
    m.transitions()
        .iter()
        .filter(|(s, l, _)| q.contains(s) && l == sym)
        .map(|(_, _, t)| *t)
        .collect()
}

/// One suspension step from a closed set, result closed.
pub fn next(m: &Lts, q: &Set, sym: &Label) -> Set {
    let moved = match sym {
        Label::Delta if !m.is_sa() => q.iter().copied().filter(|&s| quiet(m, s)).collect(),
        _ => strong(m, q, sym),
    };
    closure(m, &moved)
}

pub fn start(m: &Lts) -> Set {
    closure(m, &Set::from([m.initial()]))
}

pub fn start_from(m: &Lts, s: StateId) -> Set {
    closure(m, &Set::from([s]))
}

pub fn after(m: &Lts, word: &[Label]) -> Set {
    word.iter().fold(start(m), |q, sym| next(m, &q, sym))
}

/// Outputs and quiescence observable from a closed set.
pub fn outs(m: &Lts, q: &Set) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    for (s, l, _) in m.transitions() {
        if q.contains(s) {
            match l {
                Label::Act(a) if m.is_output(a) => {
                    out.insert(l.clone());
                }
                Label::Delta => {
                    out.insert(Label::Delta);
                }
                _ => {}
            }
        }
    }
    if !m.is_sa() && q.iter().any(|&s| quiet(m, s)) {
        out.insert(Label::Delta);
    }
    out
}

fn symbols(m: &Lts) -> Vec<Label> {
    let mut v: Vec<Label> = m
        .inputs()
        .iter()
        .chain(m.outputs())
        .map(|a| Label::Act(a.clone()))
        .collect();
    v.push(Label::Delta);
    v
}

/// Suspension traces of length at most `k`.
pub fn straces(m: &Lts, k: usize) -> BTreeSet<Vec<Label>> {
    let mut words = BTreeSet::new();
    let mut frontier = vec![(Vec::new(), start(m))];
    words.insert(Vec::new());
    for _ in 0..k {
        let mut grown = Vec::new();
        for (w, q) in &frontier {
            for sym in symbols(m) {
                let q2 = next(m, q, &sym);
                if !q2.is_empty() {
                    let mut w2 = w.clone();
                    w2.push(sym);
                    words.insert(w2.clone());
                    grown.push((w2, q2));
                }
            }
        }
        frontier = grown;
    }
    words
}

/// Checks ioco over specification traces of length at most `k`. Returns
/// the shortlex-first violation.
pub fn ioco_bounded(imp: &Lts, spec: &Lts, k: usize) -> Option<(Vec<Label>, Label)> {
    let mut traces: Vec<Vec<Label>> = straces(spec, k).into_iter().collect();
    traces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for sigma in traces {
        let qi = after(imp, &sigma);
        if qi.is_empty() {
            continue;
        }
        let allowed = outs(spec, &after(spec, &sigma));
        if let Some(x) = outs(imp, &qi).into_iter().find(|x| !allowed.contains(x)) {
            return Some((sigma, x));
        }
    }
    None
}

fn reachable(m: &Lts) -> Vec<StateId> {
    let mut seen = BTreeSet::from([m.initial()]);
    let mut order = vec![m.initial()];
    let mut queue = VecDeque::from([m.initial()]);
    while let Some(s) = queue.pop_front() {
        for (src, _, t) in m.transitions() {
            if *src == s && seen.insert(*t) {
                order.push(*t);
                queue.push_back(*t);
            }
        }
    }
    order
}

type Edges = BTreeSet<(usize, String, usize)>;

fn edges(m: &Lts, index: &BTreeMap<StateId, usize>) -> Edges {
    m.transitions()
        .iter()
        .filter(|(s, _, _)| index.contains_key(s))
        .map(|(s, l, t)| (index[s], l.to_string(), index[t]))
        .collect()
}

/// Isomorphism of the reachable parts by trying every bijection.
pub fn isomorphic_by_permutation(a: &Lts, b: &Lts) -> bool {
    if a.is_sa() != b.is_sa() || a.inputs() != b.inputs() || a.outputs() != b.outputs() {
        return false;
    }
    let (ra, rb) = (reachable(a), reachable(b));
    if ra.len() != rb.len() || ra.len() > 8 {
        assert!(ra.len() <= 8, "permutation oracle is limited to 8 states");
        return false;
    }
    let ia: BTreeMap<StateId, usize> = ra.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let ib: BTreeMap<StateId, usize> = rb.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let ea = edges(a, &ia);
    let eb = edges(b, &ib);
    if ea.len() != eb.len() {
        return false;
    }
    let n = ra.len();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        // Initial states are index 0 in both numberings.
        if perm[0] == 0 {
            let mapped: Edges = ea
                .iter()
                .map(|(s, l, t)| (perm[*s], l.clone(), perm[*t]))
                .collect();
            if mapped == eb {
                return true;
            }
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
