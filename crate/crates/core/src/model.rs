//! Input-output labelled transition systems and suspension automata.
//!
//! Both model kinds share one graph representation, [`Lts`]. The newtypes
//! [`Iolts`] and [`SuspensionAutomaton`] carry the extra invariants: a plain
//! IOLTS never uses `delta`, a suspension automaton never uses `tau` and is
//! deterministic. States are kept sorted by name so that every derived
//! artefact (serialization, DOT, canonical forms) is deterministic.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

pub type StateId = usize;

/// Reserved token for internal steps.
pub const TAU: &str = "tau";
/// Reserved token for observed quiescence.
pub const DELTA: &str = "delta";
/// Reserved token for relative quiescence in enriched words.
pub const DELTA_E: &str = "delta_e";

/// An observable action name (an input or an output).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(Arc<str>);

impl Action {
    pub fn new(name: &str) -> Self {
        Action(Arc::from(name))
    }

    /// Validates the token syntax and rejects the reserved names.
    pub fn parse(name: &str) -> Result<Self> {
        if name == TAU || name == DELTA || name == DELTA_E {
            return Err(Error::ReservedName(name.to_string()));
        }
        if !is_label_token(name) {
            return Err(Error::InvalidToken(name.to_string()));
        }
        Ok(Action::new(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Action {
    fn from(s: &str) -> Self {
        Action::new(s)
    }
}

pub(crate) fn is_label_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_state_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '#')
}

/// A transition label or a symbol of a suspension word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Delta,
    DeltaE,
    Tau,
    Act(Action),
}

impl Label {
    pub fn act(name: &str) -> Self {
        Label::Act(Action::new(name))
    }

    /// Reads a word symbol: `tau`, `delta`, `delta_e` or an action token.
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            TAU => Ok(Label::Tau),
            DELTA => Ok(Label::Delta),
            DELTA_E => Ok(Label::DeltaE),
            other => Action::parse(other).map(Label::Act),
        }
    }

    pub fn action(&self) -> Option<&Action> {
        match self {
            Label::Act(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_quiescence(&self) -> bool {
        matches!(self, Label::Delta | Label::DeltaE)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Delta => f.write_str(DELTA),
            Label::DeltaE => f.write_str(DELTA_E),
            Label::Tau => f.write_str(TAU),
            Label::Act(a) => f.write_str(a.as_str()),
        }
    }
}

/// Renders a word as space-separated symbols, `ε` for the empty word.
pub fn format_word(word: &[Label]) -> String {
    if word.is_empty() {
        return "ε".to_string();
    }
    word.iter()
        .map(Label::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses a space-separated word; `ε` or an empty string is the empty word.
pub fn parse_word(text: &str) -> Result<Vec<Label>> {
    text.split_whitespace()
        .filter(|t| *t != "ε")
        .map(Label::parse)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionKind {
    Input,
    Output,
    Internal,
    Quiescence,
}

/// Input and output label sets of a model or interface.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    pub inputs: BTreeSet<Action>,
    pub outputs: BTreeSet<Action>,
}

impl Alphabet {
    pub fn new<I, O, A, B>(inputs: I, outputs: O) -> Self
    where
        I: IntoIterator<Item = A>,
        O: IntoIterator<Item = B>,
        A: Into<Action>,
        B: Into<Action>,
    {
        Alphabet {
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
        }
    }

    /// `I ∪ U`.
    pub fn all(&self) -> BTreeSet<Action> {
        self.inputs.union(&self.outputs).cloned().collect()
    }

    pub fn contains(&self, a: &Action) -> bool {
        self.inputs.contains(a) || self.outputs.contains(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Iolts,
    SuspensionAutomaton,
}

/// Resource guard for the exponential constructions (determinization,
/// quotienting, product fixpoints).
#[derive(Clone, Debug)]
pub struct Limits {
    pub max_states: usize,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 1_000_000,
            cancel: None,
        }
    }
}

impl Limits {
    pub fn with_max_states(max_states: usize) -> Self {
        Limits {
            max_states,
            cancel: None,
        }
    }

    /// Called once per materialized state.
    pub(crate) fn check(&self, explored: usize) -> Result<()> {
        if explored > self.max_states {
            return Err(Error::ResourceLimit(self.max_states));
        }
        if let Some(flag) = &self.cancel {
            if flag.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
        }
        Ok(())
    }
}

/// The shared graph representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    name: String,
    kind: ModelKind,
    states: Vec<String>,
    alphabet: Alphabet,
    initial: StateId,
    transitions: Vec<(StateId, Label, StateId)>,
    adjacency: Vec<Vec<(Label, StateId)>>,
}

impl Lts {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn is_sa(&self) -> bool {
        self.kind == ModelKind::SuspensionAutomaton
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        0..self.states.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states
            .binary_search_by(|probe| probe.as_str().cmp(name))
            .ok()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn inputs(&self) -> &BTreeSet<Action> {
        &self.alphabet.inputs
    }

    pub fn outputs(&self) -> &BTreeSet<Action> {
        &self.alphabet.outputs
    }

    pub fn is_input(&self, a: &Action) -> bool {
        self.alphabet.inputs.contains(a)
    }

    pub fn is_output(&self, a: &Action) -> bool {
        self.alphabet.outputs.contains(a)
    }

    pub fn kind_of(&self, label: &Label) -> Option<ActionKind> {
        match label {
            Label::Tau => Some(ActionKind::Internal),
            Label::Delta | Label::DeltaE => Some(ActionKind::Quiescence),
            Label::Act(a) if self.is_input(a) => Some(ActionKind::Input),
            Label::Act(a) if self.is_output(a) => Some(ActionKind::Output),
            Label::Act(_) => None,
        }
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// All transitions, sorted by (source, label, target).
    pub fn transitions(&self) -> &[(StateId, Label, StateId)] {
        &self.transitions
    }

    /// Outgoing transitions of `s`, sorted by label then target.
    pub fn successors(&self, s: StateId) -> &[(Label, StateId)] {
        &self.adjacency[s]
    }

    /// Targets of `s` under `label`.
    pub fn post<'a>(&'a self, s: StateId, label: &'a Label) -> impl Iterator<Item = StateId> + 'a {
        self.adjacency[s]
            .iter()
            .filter(move |(l, _)| l == label)
            .map(|(_, t)| *t)
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for (_, t) in &self.adjacency[s] {
                if !seen[*t] {
                    seen[*t] = true;
                    stack.push(*t);
                }
            }
        }
        seen
    }

    pub fn reachable_states(&self) -> Vec<StateId> {
        self.reachable()
            .into_iter()
            .enumerate()
            .filter_map(|(s, r)| r.then_some(s))
            .collect()
    }

    /// Copy of the graph with a different name.
    pub fn renamed(&self, name: &str) -> Lts {
        let mut copy = self.clone();
        copy.name = name.to_string();
        copy
    }

    /// Rebuilds the graph keeping only reachable states.
    pub fn restrict_to_reachable(&self) -> Lts {
        let reach = self.reachable();
        let mut b = LtsBuilder::new(&self.name, self.kind, self.alphabet.clone());
        let mut ids = vec![usize::MAX; self.states.len()];
        for s in self.states() {
            if reach[s] {
                ids[s] = b.add_state(&self.states[s]);
            }
        }
        b.set_initial(ids[self.initial]);
        for (s, l, t) in &self.transitions {
            if reach[*s] {
                b.add_transition(ids[*s], l.clone(), ids[*t]);
            }
        }
        b.build().expect("restriction of a valid model is valid").0
    }
}

/// Incremental construction of an [`Lts`], validated on `build`.
#[derive(Clone, Debug)]
pub struct LtsBuilder {
    name: String,
    kind: ModelKind,
    alphabet: Alphabet,
    names: Vec<String>,
    index: HashMap<String, usize>,
    initial: Option<usize>,
    transitions: Vec<(usize, Label, usize)>,
}

impl LtsBuilder {
    pub fn new(name: &str, kind: ModelKind, alphabet: Alphabet) -> Self {
        LtsBuilder {
            name: name.to_string(),
            kind,
            alphabet,
            names: Vec::new(),
            index: HashMap::new(),
            initial: None,
            transitions: Vec::new(),
        }
    }

    /// Returns the builder index of `name`, adding it if new.
    pub fn add_state(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn set_initial(&mut self, s: usize) {
        self.initial = Some(s);
    }

    pub fn add_transition(&mut self, src: usize, label: Label, dst: usize) {
        self.transitions.push((src, label, dst));
    }

    /// Validates every invariant of the requested kind. The second component
    /// maps builder indices to final state ids (states are sorted by name).
    pub fn build(self) -> Result<(Lts, Vec<StateId>)> {
        let alphabet = self.alphabet;
        if let Some(a) = alphabet.inputs.intersection(&alphabet.outputs).next() {
            return Err(Error::AlphabetOverlap(a.to_string()));
        }
        for a in alphabet.all() {
            Action::parse(a.as_str())?;
        }
        for n in &self.names {
            if !is_state_token(n) {
                return Err(Error::InvalidToken(n.clone()));
            }
        }
        let initial = self.initial.ok_or(Error::MissingInit)?;

        let mut order: Vec<usize> = (0..self.names.len()).collect();
        order.sort_by(|a, b| self.names[*a].cmp(&self.names[*b]));
        let mut remap = vec![0; self.names.len()];
        for (new, old) in order.iter().enumerate() {
            remap[*old] = new;
        }
        let states: Vec<String> = order.iter().map(|i| self.names[*i].clone()).collect();

        let mut transitions = Vec::with_capacity(self.transitions.len());
        for (s, l, t) in self.transitions {
            match (&l, self.kind) {
                (Label::Act(a), _) if !alphabet.contains(a) => {
                    return Err(Error::UndeclaredLabel(a.to_string()))
                }
                (Label::Tau, ModelKind::SuspensionAutomaton) => {
                    return Err(Error::ReservedName(TAU.to_string()))
                }
                (Label::Delta, ModelKind::Iolts) | (Label::DeltaE, _) => {
                    return Err(Error::ReservedName(l.to_string()))
                }
                _ => {}
            }
            transitions.push((remap[s], l, remap[t]));
        }
        transitions.sort();
        transitions.dedup();

        let mut adjacency = vec![Vec::new(); states.len()];
        for (s, l, t) in &transitions {
            adjacency[*s].push((l.clone(), *t));
        }
        if self.kind == ModelKind::SuspensionAutomaton {
            for (s, succ) in adjacency.iter().enumerate() {
                for w in succ.windows(2) {
                    if w[0].0 == w[1].0 {
                        return Err(Error::Nondeterministic {
                            state: states[s].clone(),
                            label: w[0].0.to_string(),
                        });
                    }
                }
            }
        }

        let lts = Lts {
            name: self.name,
            kind: self.kind,
            states,
            alphabet,
            initial: remap[initial],
            transitions,
            adjacency,
        };
        Ok((lts, remap))
    }
}

/// An input-output labelled transition system: `tau` allowed, `delta` not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iolts(Lts);

impl Iolts {
    pub fn from_lts(lts: Lts) -> Result<Self> {
        if lts.kind != ModelKind::Iolts {
            return Err(Error::Precondition(format!(
                "`{}` is a suspension automaton, expected a plain IOLTS",
                lts.name
            )));
        }
        Ok(Iolts(lts))
    }

    /// Convenience constructor from name-based transitions.
    pub fn from_parts(
        name: &str,
        alphabet: Alphabet,
        initial: &str,
        transitions: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let mut b = LtsBuilder::new(name, ModelKind::Iolts, alphabet);
        let init = b.add_state(initial);
        b.set_initial(init);
        for (s, l, t) in transitions {
            let s = b.add_state(s);
            let t = b.add_state(t);
            b.add_transition(s, Label::parse(l)?, t);
        }
        Iolts::from_lts(b.build()?.0)
    }

    pub fn lts(&self) -> &Lts {
        &self.0
    }

    pub fn into_lts(self) -> Lts {
        self.0
    }

    pub fn renamed(&self, name: &str) -> Iolts {
        Iolts(self.0.renamed(name))
    }
}

impl Deref for Iolts {
    type Target = Lts;
    fn deref(&self) -> &Lts {
        &self.0
    }
}

/// A deterministic, `tau`-free model whose outputs include `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuspensionAutomaton(Lts);

impl SuspensionAutomaton {
    pub fn from_lts(lts: Lts) -> Result<Self> {
        if lts.kind != ModelKind::SuspensionAutomaton {
            return Err(Error::Precondition(format!(
                "`{}` is a plain IOLTS, expected a suspension automaton",
                lts.name
            )));
        }
        Ok(SuspensionAutomaton(lts))
    }

    pub fn from_parts(
        name: &str,
        alphabet: Alphabet,
        initial: &str,
        transitions: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let mut b = LtsBuilder::new(name, ModelKind::SuspensionAutomaton, alphabet);
        let init = b.add_state(initial);
        b.set_initial(init);
        for (s, l, t) in transitions {
            let s = b.add_state(s);
            let t = b.add_state(t);
            b.add_transition(s, Label::parse(l)?, t);
        }
        SuspensionAutomaton::from_lts(b.build()?.0)
    }

    pub fn lts(&self) -> &Lts {
        &self.0
    }

    pub fn into_lts(self) -> Lts {
        self.0
    }

    /// The unique successor of `s` under `label`.
    pub fn step(&self, s: StateId, label: &Label) -> Option<StateId> {
        self.0.adjacency[s]
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, t)| *t)
    }

    /// Enabled outputs of `s`, including `delta`.
    pub fn out(&self, s: StateId) -> BTreeSet<Label> {
        self.0.adjacency[s]
            .iter()
            .filter(|(l, _)| match l {
                Label::Act(a) => self.0.is_output(a),
                Label::Delta => true,
                _ => false,
            })
            .map(|(l, _)| l.clone())
            .collect()
    }

    pub fn enables(&self, s: StateId, label: &Label) -> bool {
        self.step(s, label).is_some()
    }
}

impl Deref for SuspensionAutomaton {
    type Target = Lts;
    fn deref(&self) -> &Lts {
        &self.0
    }
}

/// A parsed model document of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Iolts(Iolts),
    Sa(SuspensionAutomaton),
}

impl Model {
    pub fn lts(&self) -> &Lts {
        match self {
            Model::Iolts(m) => m,
            Model::Sa(m) => m,
        }
    }

    pub fn into_iolts(self) -> Result<Iolts> {
        match self {
            Model::Iolts(m) => Ok(m),
            Model::Sa(m) => Err(Error::Precondition(format!(
                "`{}` is a suspension automaton, expected a plain IOLTS",
                m.name()
            ))),
        }
    }

    pub fn into_sa(self) -> Result<SuspensionAutomaton> {
        match self {
            Model::Sa(m) => Ok(m),
            Model::Iolts(m) => Err(Error::Precondition(format!(
                "`{}` is a plain IOLTS, expected a suspension automaton",
                m.name()
            ))),
        }
    }
}
