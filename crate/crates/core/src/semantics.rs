//! Trace semantics: weak transitions, quiescence, suspension traces,
//! determinization into suspension automata, divergence and SA validity.
//!
//! Functions taking an [`Lts`] dispatch on its kind. On a plain IOLTS,
//! `delta` is derived from quiescence and `tau` steps are absorbed; on a
//! suspension automaton every symbol, `delta` included, is an explicit edge.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::model::{
    Action, Iolts, Label, Limits, Lts, LtsBuilder, ModelKind, StateId, SuspensionAutomaton,
};

pub type StateSet = BTreeSet<StateId>;

/// `init(s) ⊆ I`: no outputs and no internal steps. Only meaningful for a
/// plain IOLTS; on a suspension automaton quiescence is the `delta` edge.
pub fn is_quiescent(m: &Lts, s: StateId) -> bool {
    if m.is_sa() {
        return m.successors(s).iter().any(|(l, _)| *l == Label::Delta);
    }
    m.successors(s).iter().all(|(l, _)| match l {
        Label::Act(a) => m.is_input(a),
        _ => false,
    })
}

/// `q after ε`.
pub fn tau_closure(m: &Lts, q: &StateSet) -> StateSet {
    let mut closed = q.clone();
    if m.is_sa() {
        return closed;
    }
    let mut stack: Vec<StateId> = q.iter().copied().collect();
    while let Some(s) = stack.pop() {
        for t in m.post(s, &Label::Tau) {
            if closed.insert(t) {
                stack.push(t);
            }
        }
    }
    closed
}

fn check_symbol(m: &Lts, sym: &Label) -> Result<()> {
    match sym {
        Label::Act(a) if m.alphabet().contains(a) => Ok(()),
        Label::Delta => Ok(()),
        other => Err(Error::UnknownSymbol(other.to_string())),
    }
}

/// One observable step `q after x` for a single symbol.
pub fn step(m: &Lts, q: &StateSet, sym: &Label) -> Result<StateSet> {
    check_symbol(m, sym)?;
    if m.is_sa() {
        return Ok(q.iter().flat_map(|&s| m.post(s, sym)).collect());
    }
    let closed = tau_closure(m, q);
    Ok(match sym {
        Label::Delta => closed.into_iter().filter(|&s| is_quiescent(m, s)).collect(),
        _ => {
            let next: StateSet = closed.iter().flat_map(|&s| m.post(s, sym)).collect();
            tau_closure(m, &next)
        }
    })
}

/// `q after w` under the suspension-transition rules. An empty result means
/// `w` is not a suspension trace of `q`.
pub fn weak_after(m: &Lts, q: &StateSet, word: &[Label]) -> Result<StateSet> {
    let mut current = tau_closure(m, q);
    for sym in word {
        if current.is_empty() {
            check_symbol(m, sym)?;
            continue;
        }
        current = step(m, &current, sym)?;
    }
    Ok(current)
}

/// `initial after w`.
pub fn after(m: &Lts, word: &[Label]) -> Result<StateSet> {
    weak_after(m, &StateSet::from([m.initial()]), word)
}

/// Weakly enabled outputs of `q`, plus `delta` when some member can be
/// quiescent.
pub fn out_set(m: &Lts, q: &StateSet) -> BTreeSet<Label> {
    let closed = tau_closure(m, q);
    let mut out = BTreeSet::new();
    for &s in &closed {
        for (l, _) in m.successors(s) {
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
        if !m.is_sa() && is_quiescent(m, s) {
            out.insert(Label::Delta);
        }
    }
    out
}

/// Renders a set of states as `{a,b,c}`.
pub fn state_set_name(m: &Lts, q: &StateSet) -> String {
    let names: Vec<&str> = q.iter().map(|&s| m.state_name(s)).collect();
    format!("{{{}}}", names.join(","))
}

/// Determinization with explicit quiescence.
pub fn delta_transform(m: &Iolts) -> Result<SuspensionAutomaton> {
    delta_transform_with(m, &Limits::default())
}

pub fn delta_transform_with(m: &Iolts, limits: &Limits) -> Result<SuspensionAutomaton> {
    let report = check_divergence(m);
    if report.divergent {
        return Err(Error::Divergent(report.witness.join(" -> ")));
    }
    let mut symbols: Vec<Label> = m.alphabet().all().into_iter().map(Label::Act).collect();
    symbols.push(Label::Delta);

    let initial = tau_closure(m, &StateSet::from([m.initial()]));
    let mut ids: HashMap<StateSet, usize> = HashMap::new();
    let mut b = LtsBuilder::new(
        m.name(),
        ModelKind::SuspensionAutomaton,
        m.alphabet().clone(),
    );
    let init = b.add_state(&state_set_name(m, &initial));
    b.set_initial(init);
    ids.insert(initial.clone(), init);
    let mut queue = VecDeque::from([initial]);
    while let Some(q) = queue.pop_front() {
        let src = ids[&q];
        for sym in &symbols {
            let next = step(m, &q, sym)?;
            if next.is_empty() {
                continue;
            }
            let dst = match ids.get(&next) {
                Some(&d) => d,
                None => {
                    limits.check(ids.len() + 1)?;
                    let d = b.add_state(&state_set_name(m, &next));
                    ids.insert(next.clone(), d);
                    queue.push_back(next);
                    d
                }
            };
            b.add_transition(src, sym.clone(), dst);
        }
    }
    SuspensionAutomaton::from_lts(b.build()?.0)
}

/// All suspension traces of length at most `k`.
pub fn bounded_straces(m: &Lts, k: usize) -> Result<BTreeSet<Vec<Label>>> {
    bounded_straces_with(m, k, &Limits::default())
}

pub fn bounded_straces_with(m: &Lts, k: usize, limits: &Limits) -> Result<BTreeSet<Vec<Label>>> {
    let mut symbols: Vec<Label> = m.alphabet().all().into_iter().map(Label::Act).collect();
    symbols.push(Label::Delta);
    let start = after(m, &[])?;
    let mut words = BTreeSet::from([Vec::new()]);
    let mut frontier = vec![(Vec::new(), start)];
    for _ in 0..k {
        let mut next_frontier = Vec::new();
        for (word, q) in &frontier {
            for sym in &symbols {
                let next = step(m, q, sym)?;
                if next.is_empty() {
                    continue;
                }
                let mut w = word.clone();
                w.push(sym.clone());
                limits.check(words.len() + 1)?;
                words.insert(w.clone());
                next_frontier.push((w, next));
            }
        }
        frontier = next_frontier;
    }
    Ok(words)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceReport {
    pub divergent: bool,
    /// Names of the states on one reachable tau-cycle, first state repeated
    /// at the end.
    pub witness: Vec<String>,
}

/// Looks for a reachable cycle of `tau` transitions.
pub fn check_divergence(m: &Lts) -> DivergenceReport {
    match find_cycle(m, |l| *l == Label::Tau) {
        Some(witness) => DivergenceReport {
            divergent: true,
            witness,
        },
        None => DivergenceReport {
            divergent: false,
            witness: Vec::new(),
        },
    }
}

/// A reachable cycle using only edges whose label passes `keep`, as state
/// names with the first repeated at the end.
pub(crate) fn find_cycle(m: &Lts, keep: impl Fn(&Label) -> bool) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let reach = m.reachable();
    let mut mark = vec![Mark::New; m.state_count()];
    for root in m.states().filter(|&s| reach[s]) {
        if mark[root] != Mark::New {
            continue;
        }
        // Iterative DFS; `path` mirrors the active stack.
        let mut path: Vec<StateId> = vec![root];
        let mut cursor: Vec<usize> = vec![0];
        mark[root] = Mark::Active;
        while let Some(&s) = path.last() {
            let next: Vec<StateId> = m
                .successors(s)
                .iter()
                .filter(|(l, _)| keep(l))
                .map(|(_, t)| *t)
                .collect();
            let i = cursor.last_mut().unwrap();
            if *i < next.len() {
                let t = next[*i];
                *i += 1;
                match mark[t] {
                    Mark::New => {
                        mark[t] = Mark::Active;
                        path.push(t);
                        cursor.push(0);
                    }
                    Mark::Active => {
                        let from = path.iter().position(|&p| p == t).unwrap();
                        let mut witness: Vec<String> = path[from..]
                            .iter()
                            .map(|&p| m.state_name(p).to_string())
                            .collect();
                        witness.push(m.state_name(t).to_string());
                        return Some(witness);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[s] = Mark::Done;
                path.pop();
                cursor.pop();
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValidityRule {
    /// Every reachable state enables an output or `delta`.
    NonBlocking,
    /// A `delta`-successor enables no proper output.
    AnomalyFree,
    /// The `delta`-successor of a `delta`-successor is the same state.
    DeltaIdempotent,
    /// Observing quiescence enables no new behaviour: the traces of a
    /// `delta`-successor are traces of its predecessor.
    QuiescentReducible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: ValidityRule,
    pub state: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SaValidity {
    pub violations: Vec<Violation>,
}

impl SaValidity {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, rule: ValidityRule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// Checks the four validity conditions over reachable states.
pub fn check_sa_valid(a: &SuspensionAutomaton) -> SaValidity {
    let mut violations = Vec::new();
    for s in a.reachable_states() {
        let name = a.state_name(s).to_string();
        if a.out(s).is_empty() {
            violations.push(Violation {
                rule: ValidityRule::NonBlocking,
                state: name.clone(),
                detail: "no output and no delta".into(),
            });
        }
        let Some(q) = a.step(s, &Label::Delta) else {
            continue;
        };
        let proper: Vec<String> = a
            .out(q)
            .into_iter()
            .filter(|l| *l != Label::Delta)
            .map(|l| l.to_string())
            .collect();
        if !proper.is_empty() {
            violations.push(Violation {
                rule: ValidityRule::AnomalyFree,
                state: name.clone(),
                detail: format!(
                    "delta-successor {} enables {}",
                    a.state_name(q),
                    proper.join(",")
                ),
            });
        }
        if a.step(q, &Label::Delta) != Some(q) {
            violations.push(Violation {
                rule: ValidityRule::DeltaIdempotent,
                state: name.clone(),
                detail: format!("delta-successor {} has no delta self-loop", a.state_name(q)),
            });
        }
        if let Some(word) = trace_inclusion_witness(a, q, s) {
            violations.push(Violation {
                rule: ValidityRule::QuiescentReducible,
                state: name,
                detail: format!(
                    "after delta the trace `{}` is possible but not before",
                    crate::model::format_word(&word)
                ),
            });
        }
    }
    SaValidity { violations }
}

/// Shortest word traceable from `left` but not from `right`, if any.
fn trace_inclusion_witness(
    a: &SuspensionAutomaton,
    left: StateId,
    right: StateId,
) -> Option<Vec<Label>> {
    let mut seen = BTreeSet::from([(left, right)]);
    let mut queue = VecDeque::from([((left, right), Vec::new())]);
    while let Some(((l, r), word)) = queue.pop_front() {
        for (label, l2) in a.successors(l) {
            let mut w: Vec<Label> = word.clone();
            w.push(label.clone());
            match a.step(r, label) {
                None => return Some(w),
                Some(r2) => {
                    if seen.insert((*l2, r2)) {
                        queue.push_back(((*l2, r2), w));
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputEnabledReport {
    pub enabled: bool,
    /// Reachable states missing a weakly enabled input, with the inputs.
    pub offending: Vec<(String, Vec<String>)>,
}

/// Whether every reachable state weakly enables every input.
pub fn check_input_enabled(m: &Lts) -> InputEnabledReport {
    check_input_enabled_over(m, m.inputs())
}

/// Same check restricted to a subset of the inputs.
pub fn check_input_enabled_over(m: &Lts, inputs: &BTreeSet<Action>) -> InputEnabledReport {
    let mut offending = Vec::new();
    for s in m.reachable_states() {
        let closed = tau_closure(m, &StateSet::from([s]));
        let missing: Vec<String> = inputs
            .iter()
            .filter(|a| {
                let l = Label::Act((*a).clone());
                !closed.iter().any(|&c| m.post(c, &l).next().is_some())
            })
            .map(|a| a.to_string())
            .collect();
        if !missing.is_empty() {
            offending.push((m.state_name(s).to_string(), missing));
        }
    }
    InputEnabledReport {
        enabled: offending.is_empty(),
        offending,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{parse_word, Alphabet};

    fn set(m: &Lts, names: &[&str]) -> StateSet {
        names.iter().map(|n| m.state_id(n).unwrap()).collect()
    }

    #[test]
    fn weak_after_on_vending() {
        let s = fixtures::vending_s();
        // c then t: s0 -c-> s2 -tau-> s1 -t-> s4
        let q = after(&s, &parse_word("c t").unwrap()).unwrap();
        assert_eq!(q, set(&s, &["s4"]));
        assert_eq!(after(&s, &[]).unwrap(), set(&s, &["s0"]));
        let q = after(&s, &parse_word("c").unwrap()).unwrap();
        assert_eq!(q, set(&s, &["s0", "s1", "s2"]));
        assert!(after(&s, &parse_word("t").unwrap()).unwrap().is_empty());
        assert_eq!(
            after(&s, &parse_word("bogus").unwrap()),
            Err(Error::UnknownSymbol("bogus".into()))
        );
    }

    #[test]
    fn closure_of_tau_free_model_is_identity() {
        let m = fixtures::drink_m();
        let q = StateSet::from([m.initial()]);
        assert_eq!(weak_after(&m, &q, &[]).unwrap(), q);
    }

    #[test]
    fn out_sets() {
        let s = fixtures::vending_s();
        assert_eq!(
            out_set(&s, &set(&s, &["s0"])),
            BTreeSet::from([Label::Delta])
        );
        assert_eq!(
            out_set(&s, &set(&s, &["s3"])),
            BTreeSet::from([Label::Delta])
        );
        let q1 = after(&s, &parse_word("c").unwrap()).unwrap();
        assert_eq!(
            out_set(&s, &q1),
            BTreeSet::from([Label::Delta, Label::act("r"), Label::act("t")])
        );
    }

    #[test]
    fn delta_on_single_quiescent_state() {
        let m = Iolts::from_parts("m", Alphabet::new(["a"], ["x"]), "s", &[]).unwrap();
        let sa = delta_transform(&m).unwrap();
        assert_eq!(sa.state_count(), 1);
        assert_eq!(sa.transitions(), &[(0, Label::Delta, 0)]);
    }

    #[test]
    fn sa_after_follows_delta_edges() {
        let sa = delta_transform(&fixtures::vending_s()).unwrap();
        let q = after(&sa, &parse_word("delta c r").unwrap()).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(sa.state_name(*q.first().unwrap()), "{s3}");
    }

    #[test]
    fn divergence() {
        let s = fixtures::vending_s();
        assert!(!check_divergence(&s).divergent);
        let loopy = Iolts::from_parts("l", Alphabet::default(), "s", &[("s", "tau", "s")]).unwrap();
        let r = check_divergence(&loopy);
        assert!(r.divergent);
        assert_eq!(r.witness, vec!["s", "s"]);
        assert!(matches!(delta_transform(&loopy), Err(Error::Divergent(_))));
    }

    #[test]
    fn unreachable_tau_cycles_are_ignored() {
        let m = Iolts::from_parts(
            "m",
            Alphabet::default(),
            "s",
            &[("u", "tau", "v"), ("v", "tau", "u")],
        )
        .unwrap();
        assert!(!check_divergence(&m).divergent);
    }

    #[test]
    fn bounded_traces_basics() {
        let s = fixtures::vending_s();
        assert_eq!(bounded_straces(&s, 0).unwrap(), BTreeSet::from([vec![]]));
        let two = bounded_straces(&s, 2).unwrap();
        for w in ["delta c", "c t", "c r", "c delta"] {
            assert!(two.contains(&parse_word(w).unwrap()), "{w}");
        }
        assert!(!two.contains(&parse_word("t").unwrap()));
        let three = bounded_straces(&s, 3).unwrap();
        assert!(two.is_subset(&three));
    }

    #[test]
    fn anomalous_sa_is_invalid() {
        let sa = SuspensionAutomaton::from_parts(
            "bad",
            Alphabet::new(Vec::<&str>::new(), ["t"]),
            "q",
            &[
                ("q", "delta", "q1"),
                ("q1", "t", "q2"),
                ("q2", "delta", "q2"),
            ],
        )
        .unwrap();
        let v = check_sa_valid(&sa);
        assert!(v.violates(ValidityRule::AnomalyFree));
        assert!(v.violates(ValidityRule::DeltaIdempotent));
        assert!(!v.is_valid());
    }

    #[test]
    fn blocking_state_is_invalid() {
        let sa = SuspensionAutomaton::from_parts(
            "blk",
            Alphabet::new(["a"], Vec::<&str>::new()),
            "q",
            &[("q", "a", "q")],
        )
        .unwrap();
        assert!(check_sa_valid(&sa).violates(ValidityRule::NonBlocking));
    }

    #[test]
    fn input_enabledness() {
        assert!(check_input_enabled(&fixtures::vending_e()).enabled);
        assert!(check_input_enabled(&fixtures::drink_c()).enabled);
        let r = check_input_enabled(&fixtures::drink_m());
        assert!(!r.enabled);
        let names: Vec<&str> = r.offending.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(names, vec!["m1", "m2", "m3"]);
        let loops = Iolts::from_parts(
            "l",
            Alphabet::new(["a", "b"], ["x"]),
            "s",
            &[("s", "a", "s"), ("s", "b", "s")],
        )
        .unwrap();
        assert!(check_input_enabled(&loops).enabled);
    }

    #[test]
    fn delta_images_of_fixtures_are_valid() {
        for m in [
            fixtures::vending_s(),
            fixtures::vending_e(),
            fixtures::money_r(),
            fixtures::drink_c(),
            fixtures::eft_s(),
        ] {
            let v = check_sa_valid(&delta_transform(&m).unwrap());
            assert!(v.is_valid(), "{}: {:?}", m.name(), v);
        }
    }
}
