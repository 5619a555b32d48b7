//! Quotient automata: a spec for the missing component, obtained by
//! factoring the platform out of the system spec.
//!
//! States are sets of (spec SA state, platform SA state) pairs, optionally
//! flagged as reached by quiescence. Unions over the words both automata
//! can take are computed as reachability fixpoints over the pair product.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::conformance::{inclusion_unchecked, ConformanceVerdict};
use crate::error::{Error, Result};
use crate::interface::InterfaceSpec;
use crate::model::{
    Action, Iolts, Label, Limits, LtsBuilder, ModelKind, StateId, SuspensionAutomaton,
};
use crate::semantics::{check_input_enabled, check_sa_valid, delta_transform_with, SaValidity};

pub type Pair = (StateId, StateId);
pub type PairSet = BTreeSet<Pair>;

/// The two suspension automata and the alphabet split they are combined
/// under.
#[derive(Clone, Debug)]
pub struct JointContext {
    pub spec: SuspensionAutomaton,
    pub env: SuspensionAutomaton,
    pub iface: InterfaceSpec,
    joint: Vec<Label>,
    hidden: BTreeSet<Action>,
}

/// What the universally quantified trace conditions allow at a pair set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceConditions {
    /// Proper outputs enabled by the spec after every joint trace not ending
    /// in `delta`.
    pub outputs: BTreeSet<Label>,
    /// `delta` is enabled by the spec after every joint trace.
    pub quiescence: bool,
}

impl JointContext {
    pub fn new(spec: &Iolts, env: &Iolts, iface: &InterfaceSpec, limits: &Limits) -> Result<Self> {
        let q = iface.quotient_alphabet();
        let hidden = iface.hidden();
        let env_labels = iface.env_labels();
        let bad: Vec<String> = q
            .all()
            .into_iter()
            .filter(|a| !hidden.contains(a) && env_labels.contains(a))
            .map(|a| a.to_string())
            .collect();
        if !bad.is_empty() {
            return Err(Error::Alphabet(format!(
                "labels {} are observed by the platform and the spec but flow in opposite directions",
                bad.join(",")
            )));
        }
        Ok(JointContext {
            spec: delta_transform_with(spec, limits)?,
            env: delta_transform_with(env, limits)?,
            joint: iface.joint().into_iter().map(Label::Act).collect(),
            hidden,
            iface: iface.clone(),
        })
    }

    pub fn initial(&self) -> PairSet {
        PairSet::from([(self.spec.initial(), self.env.initial())])
    }

    /// Pairs reachable from `q` by words both automata take, `delta` excluded.
    fn joint_closure(&self, q: &PairSet) -> PairSet {
        let mut closed = q.clone();
        let mut stack: Vec<Pair> = q.iter().copied().collect();
        while let Some((s, e)) = stack.pop() {
            for l in &self.joint {
                if let (Some(s2), Some(e2)) = (self.spec.step(s, l), self.env.step(e, l)) {
                    if closed.insert((s2, e2)) {
                        stack.push((s2, e2));
                    }
                }
            }
        }
        closed
    }

    /// `q ⊳ x`.
    pub fn execute(&self, q: &PairSet, x: &Label) -> Result<PairSet> {
        let closed = self.joint_closure(q);
        let moved = match x {
            Label::Delta => closed
                .iter()
                .filter_map(|&(s, e)| Some((self.spec.step(s, x)?, self.env.step(e, x)?)))
                .collect(),
            Label::Act(a) if self.hidden.contains(a) => closed
                .iter()
                .filter_map(|&(s, e)| Some((s, self.env.step(e, x)?)))
                .collect(),
            Label::Act(a)
                if self.spec.alphabet().contains(a) && !self.env.alphabet().contains(a) =>
            {
                closed
                    .iter()
                    .filter_map(|&(s, e)| Some((self.spec.step(s, x)?, e)))
                    .collect()
            }
            other => return Err(Error::UnknownSymbol(other.to_string())),
        };
        Ok(moved)
    }

    /// Saturates joint traces, `delta` included, from every pair of `q`.
    pub fn conditions(&self, q: &PairSet) -> TraceConditions {
        let mut outputs: Option<BTreeSet<Label>> = None;
        let mut quiescence = true;
        let mut seen: BTreeSet<(Pair, bool)> = q.iter().map(|&p| (p, false)).collect();
        let mut stack: Vec<(Pair, bool)> = seen.iter().copied().collect();
        let mut labels = self.joint.clone();
        labels.push(Label::Delta);
        while let Some(((s, e), after_delta)) = stack.pop() {
            let out = self.spec.out(s);
            quiescence &= out.contains(&Label::Delta);
            if !after_delta {
                let proper: BTreeSet<Label> =
                    out.into_iter().filter(|l| *l != Label::Delta).collect();
                outputs = Some(match outputs {
                    None => proper,
                    Some(acc) => acc.intersection(&proper).cloned().collect(),
                });
            }
            for l in &labels {
                if let (Some(s2), Some(e2)) = (self.spec.step(s, l), self.env.step(e, l)) {
                    let next = ((s2, e2), *l == Label::Delta);
                    if seen.insert(next) {
                        stack.push(next);
                    }
                }
            }
        }
        TraceConditions {
            outputs: outputs.unwrap_or_default(),
            quiescence,
        }
    }

    pub fn pair_set_name(&self, q: &PairSet) -> String {
        let parts: Vec<String> = q
            .iter()
            .map(|&(s, e)| format!("({},{})", self.spec.state_name(s), self.env.state_name(e)))
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientState {
    pub pairs: PairSet,
    pub flagged: bool,
}

/// The construction rule that produced a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    I1,
    U1,
    U2,
    Delta1,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::I1 => "I1",
            Rule::U1 => "U1",
            Rule::U2 => "U2",
            Rule::Delta1 => "delta1",
        })
    }
}

#[derive(Clone, Debug)]
pub struct QuotientAutomaton {
    pub automaton: SuspensionAutomaton,
    /// Indexed by state id of `automaton`.
    pub states: Vec<QuotientState>,
    pub rules: BTreeMap<(StateId, Label), Rule>,
    pub context: JointContext,
}

pub fn build_quotient(
    spec: &Iolts,
    env: &Iolts,
    iface: &InterfaceSpec,
) -> Result<QuotientAutomaton> {
    build_quotient_with(spec, env, iface, &Limits::default())
}

pub fn build_quotient_with(
    spec: &Iolts,
    env: &Iolts,
    iface: &InterfaceSpec,
    limits: &Limits,
) -> Result<QuotientAutomaton> {
    let ctx = JointContext::new(spec, env, iface, limits)?;
    let alphabet = iface.quotient_alphabet();
    let shared_outputs: BTreeSet<Action> = iface.hidden_outputs();
    let inputs: Vec<Label> = alphabet.inputs.iter().cloned().map(Label::Act).collect();
    let outputs: Vec<Label> = alphabet.outputs.iter().cloned().map(Label::Act).collect();

    let name = format!("{}/{}", spec.name(), env.name());
    let mut b = LtsBuilder::new(&name, ModelKind::SuspensionAutomaton, alphabet.clone());
    let mut ids: HashMap<QuotientState, usize> = HashMap::new();
    let mut states: Vec<QuotientState> = Vec::new();
    let mut edge_rules: Vec<(usize, Label, Rule)> = Vec::new();
    let state_name = |q: &QuotientState| {
        let base = ctx.pair_set_name(&q.pairs);
        if q.flagged {
            format!("{base}@d")
        } else {
            base
        }
    };

    let start = QuotientState {
        pairs: ctx.initial(),
        flagged: false,
    };
    let init = b.add_state(&state_name(&start));
    b.set_initial(init);
    ids.insert(start.clone(), init);
    states.push(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        let src = ids[&q];
        let cond = ctx.conditions(&q.pairs);
        let mut moves: Vec<(Label, QuotientState, Rule)> = Vec::new();
        for a in &inputs {
            let next = ctx.execute(&q.pairs, a)?;
            if !next.is_empty() {
                moves.push((
                    a.clone(),
                    QuotientState {
                        pairs: next,
                        flagged: false,
                    },
                    Rule::I1,
                ));
            }
        }
        for x in &outputs {
            let shared = x.action().is_some_and(|a| shared_outputs.contains(a));
            let rule = match (shared, q.flagged) {
                (true, true) => continue,
                (true, false) => Rule::U1,
                (false, _) if cond.outputs.contains(x) => Rule::U2,
                (false, _) => continue,
            };
            let next = ctx.execute(&q.pairs, x)?;
            if !next.is_empty() {
                moves.push((
                    x.clone(),
                    QuotientState {
                        pairs: next,
                        flagged: false,
                    },
                    rule,
                ));
            }
        }
        if cond.quiescence {
            let next = ctx.execute(&q.pairs, &Label::Delta)?;
            if !next.is_empty() {
                moves.push((
                    Label::Delta,
                    QuotientState {
                        pairs: next,
                        flagged: true,
                    },
                    Rule::Delta1,
                ));
            }
        }
        for (label, target, rule) in moves {
            let dst = match ids.get(&target) {
                Some(&d) => d,
                None => {
                    limits.check(ids.len() + 1)?;
                    let d = b.add_state(&state_name(&target));
                    ids.insert(target.clone(), d);
                    states.push(target.clone());
                    queue.push_back(target);
                    d
                }
            };
            b.add_transition(src, label.clone(), dst);
            edge_rules.push((src, label, rule));
        }
    }
    let (lts, remap) = b.build()?;
    let mut ordered = vec![None; states.len()];
    for (i, st) in states.into_iter().enumerate() {
        ordered[remap[i]] = Some(st);
    }
    Ok(QuotientAutomaton {
        automaton: SuspensionAutomaton::from_lts(lts)?,
        states: ordered
            .into_iter()
            .map(|s| s.expect("every state is remapped"))
            .collect(),
        rules: edge_rules
            .into_iter()
            .map(|(s, l, r)| ((remap[s], l), r))
            .collect(),
        context: ctx,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientValidity {
    pub sa: SaValidity,
    /// States whose out-set has neither a non-shared output nor `delta`.
    pub blocking: Vec<String>,
}

impl QuotientValidity {
    pub fn strongly_non_blocking(&self) -> bool {
        self.blocking.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.sa.is_valid() && self.strongly_non_blocking()
    }
}

pub fn check_quotient_valid(q: &QuotientAutomaton) -> QuotientValidity {
    let a = &q.automaton;
    let shared = q.context.iface.hidden_outputs();
    let blocking = a
        .reachable_states()
        .into_iter()
        .filter(|&s| {
            !a.out(s)
                .iter()
                .any(|l| l.action().is_none_or(|x| !shared.contains(x)))
        })
        .map(|s| a.state_name(s).to_string())
        .collect();
    QuotientValidity {
        sa: check_sa_valid(a),
        blocking,
    }
}

#[derive(Clone, Debug)]
pub enum Decomposability {
    Decomposable(Box<QuotientAutomaton>),
    /// The sufficient conditions do not hold; this is not a proof that no
    /// component exists.
    NotEstablished {
        reasons: Vec<String>,
        quotient: Option<Box<QuotientAutomaton>>,
    },
}

impl Decomposability {
    pub fn is_decomposable(&self) -> bool {
        matches!(self, Decomposability::Decomposable(_))
    }
}

pub fn check_decomposable(
    spec: &Iolts,
    env: &Iolts,
    iface: &InterfaceSpec,
) -> Result<Decomposability> {
    check_decomposable_with(spec, env, iface, &Limits::default())
}

pub fn check_decomposable_with(
    spec: &Iolts,
    env: &Iolts,
    iface: &InterfaceSpec,
    limits: &Limits,
) -> Result<Decomposability> {
    let mut reasons = Vec::new();
    let enabled = check_input_enabled(env);
    for (state, missing) in &enabled.offending {
        reasons.push(format!(
            "platform is not input-enabled: state `{state}` refuses {}",
            missing.join(",")
        ));
    }
    let quotient = build_quotient_with(spec, env, iface, limits)?;
    if let ConformanceVerdict {
            holds: false,
            counterexample: Some(cx),
        } = inclusion_unchecked(env, &quotient.context.spec, iface, limits)? { reasons.push(format!(
        "platform behaviour is not included in the spec: {cx}"
    )) }
    let validity = check_quotient_valid(&quotient);
    for v in &validity.sa.violations {
        reasons.push(format!(
            "quotient is not a valid suspension automaton: {:?} at `{}`: {}",
            v.rule, v.state, v.detail
        ));
    }
    for s in &validity.blocking {
        reasons.push(format!("quotient is not strongly non-blocking at `{s}`"));
    }
    if reasons.is_empty() {
        Ok(Decomposability::Decomposable(Box::new(quotient)))
    } else {
        Ok(Decomposability::NotEstablished {
            reasons,
            quotient: Some(Box::new(quotient)),
        })
    }
}
