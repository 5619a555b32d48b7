//! On-the-fly testing of a component against a system spec and its
//! platform, exploring the quotient lazily while the test runs.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformance::inclusion_unchecked;
use crate::error::{Error, Result};
use crate::interface::InterfaceSpec;
use crate::model::{Action, Iolts, Label, Limits, Lts, StateId, SuspensionAutomaton};
use crate::quotient::{JointContext, PairSet};
use crate::semantics::{check_input_enabled, delta_transform, is_quiescent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalChoiceReport {
    pub internal_choice: bool,
    /// Reachable states with an input edge that are not quiescent.
    pub offending: Vec<String>,
}

/// Whether inputs are only accepted in quiescent states. Judged on direct
/// input edges.
pub fn check_internal_choice(m: &Lts) -> InternalChoiceReport {
    let offending: Vec<String> = m
        .reachable_states()
        .into_iter()
        .filter(|&s| {
            let has_input = m
                .successors(s)
                .iter()
                .any(|(l, _)| l.action().is_some_and(|a| m.is_input(a)));
            has_input && !is_quiescent(m, s)
        })
        .map(|s| m.state_name(s).to_string())
        .collect();
    InternalChoiceReport {
        internal_choice: offending.is_empty(),
        offending,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observation {
    Output(Action),
    Quiescence,
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Output(a) => write!(f, "{a}"),
            Observation::Quiescence => f.write_str("delta"),
        }
    }
}

/// The interaction capability of a system under test.
pub trait SutAdapter {
    fn supply(&mut self, input: &Action) -> Result<()>;
    /// Blocks until an output or quiescence is observed.
    fn observe(&mut self) -> Result<Observation>;
}

/// A simulated implementation. Nondeterminism is resolved by a seeded
/// generator over the determinized model: each observation is drawn
/// uniformly from the outputs (and quiescence) possible after the history.
#[derive(Clone, Debug)]
pub struct ModelSut {
    automaton: SuspensionAutomaton,
    current: StateId,
    rng: ChaCha8Rng,
}

pub fn sut_from_model(m: &Iolts, seed: u64) -> Result<ModelSut> {
    let report = check_input_enabled(m);
    if let Some((state, missing)) = report.offending.first() {
        return Err(Error::NotInputEnabled(format!(
            "state `{state}` (missing {})",
            missing.join(",")
        )));
    }
    let automaton = delta_transform(m)?;
    Ok(ModelSut {
        current: automaton.initial(),
        automaton,
        rng: ChaCha8Rng::seed_from_u64(seed),
    })
}

impl SutAdapter for ModelSut {
    fn supply(&mut self, input: &Action) -> Result<()> {
        let label = Label::Act(input.clone());
        match self.automaton.step(self.current, &label) {
            Some(next) if self.automaton.is_input(input) => {
                self.current = next;
                Ok(())
            }
            _ => Err(Error::Adapter(format!("input `{input}` is not accepted"))),
        }
    }

    fn observe(&mut self) -> Result<Observation> {
        let out: Vec<Label> = self.automaton.out(self.current).into_iter().collect();
        let Some(choice) = out.choose(&mut self.rng).cloned() else {
            return Err(Error::Adapter(
                "state enables neither outputs nor quiescence".into(),
            ));
        };
        self.current = self
            .automaton
            .step(self.current, &choice)
            .expect("chosen label is enabled");
        Ok(match choice {
            Label::Act(a) => Observation::Output(a),
            _ => Observation::Quiescence,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestConfig {
    pub seed: u64,
    pub max_steps: usize,
    /// Per-step probability of stopping with a pass.
    pub stop_probability: f64,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            seed: 0,
            max_steps: 200,
            stop_probability: 0.0,
        }
    }
}

impl TestConfig {
    fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::Precondition("max-steps must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.stop_probability) {
            return Err(Error::Precondition(
                "stop probability must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    None,
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::None => "None",
            Verdict::Pass => "Pass",
            Verdict::Fail => "Fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestRun {
    pub verdict: Verdict,
    pub seed: u64,
    /// Rule (3, 5 or 7) and observation behind a failure.
    pub failure: Option<(u8, Observation)>,
    pub log: Vec<String>,
}

impl TestRun {
    /// The run log followed by the verdict summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.log {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("verdict {} seed {}\n", self.verdict, self.seed));
        out
    }
}

/// A tester for one (spec, platform) pair, reusable across runs.
#[derive(Clone, Debug)]
pub struct OnTheFlyTester {
    ctx: JointContext,
    inputs: Vec<Action>,
    shared_outputs: Vec<Action>,
}

impl OnTheFlyTester {
    /// Checks that the platform is included in the spec and accepts inputs
    /// only when quiescent.
    pub fn new(spec: &Iolts, env: &Iolts, iface: &InterfaceSpec) -> Result<Self> {
        let limits = Limits::default();
        let ctx = JointContext::new(spec, env, iface, &limits)?;
        let choice = check_internal_choice(env);
        if !choice.internal_choice {
            return Err(Error::Precondition(format!(
                "platform accepts inputs in non-quiescent states {}",
                choice.offending.join(",")
            )));
        }
        let inclusion = inclusion_unchecked(env, &ctx.spec, iface, &limits)?;
        if let Some(cx) = inclusion.counterexample {
            return Err(Error::Precondition(format!(
                "platform behaviour is not included in the spec: {cx}"
            )));
        }
        let alphabet = iface.quotient_alphabet();
        Ok(OnTheFlyTester {
            ctx,
            inputs: alphabet.inputs.into_iter().collect(),
            shared_outputs: iface.hidden_outputs().into_iter().collect(),
        })
    }

    pub fn run(&self, sut: &mut dyn SutAdapter, cfg: &TestConfig) -> Result<TestRun> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut current: PairSet = self.ctx.initial();
        let mut log = Vec::new();
        let finish = |verdict, failure, log| TestRun {
            verdict,
            seed: cfg.seed,
            failure,
            log,
        };
        for n in 1..=cfg.max_steps {
            if n == cfg.max_steps || rng.gen_bool(cfg.stop_probability) {
                log.push(format!("step {n} 8 - Pass"));
                return Ok(finish(Verdict::Pass, None, log));
            }
            let mut applicable = Vec::new();
            for a in &self.inputs {
                let next = self.ctx.execute(&current, &Label::Act(a.clone()))?;
                if !next.is_empty() {
                    applicable.push((a, next));
                }
            }
            if !applicable.is_empty() && rng.gen_bool(0.5) {
                let (a, next) = applicable.swap_remove(rng.gen_range(0..applicable.len()));
                sut.supply(a)?;
                current = next;
                log.push(format!("step {n} 1 {a} None"));
                continue;
            }
            let obs = sut.observe()?;
            let cond = self.ctx.conditions(&current);
            let (rule, next) = match &obs {
                Observation::Quiescence if cond.quiescence => {
                    (2, self.ctx.execute(&current, &Label::Delta)?)
                }
                Observation::Quiescence => (3, PairSet::new()),
                Observation::Output(x) if self.shared_outputs.contains(x) => {
                    let next = self.ctx.execute(&current, &Label::Act(x.clone()))?;
                    (if next.is_empty() { 5 } else { 4 }, next)
                }
                Observation::Output(x) if cond.outputs.contains(&Label::Act(x.clone())) => {
                    (6, self.ctx.execute(&current, &Label::Act(x.clone()))?)
                }
                Observation::Output(_) => (7, PairSet::new()),
            };
            if matches!(rule, 3 | 5 | 7) {
                log.push(format!("step {n} {rule} {obs} Fail"));
                return Ok(finish(Verdict::Fail, Some((rule, obs)), log));
            }
            if next.is_empty() {
                // Accepted quiescence with no joint quiescent continuation:
                // nothing further can be judged.
                log.push(format!("step {n} {rule} {obs} Pass"));
                return Ok(finish(Verdict::Pass, None, log));
            }
            log.push(format!("step {n} {rule} {obs} None"));
            current = next;
        }
        unreachable!("the last step always terminates the run")
    }
}

/// Single-run convenience wrapper around [`OnTheFlyTester`].
pub fn run_onthefly_test(
    spec: &Iolts,
    env: &Iolts,
    sut: &mut dyn SutAdapter,
    iface: &InterfaceSpec,
    cfg: &TestConfig,
) -> Result<TestRun> {
    OnTheFlyTester::new(spec, env, iface)?.run(sut, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Alphabet;

    fn vending() -> (Iolts, Iolts, InterfaceSpec) {
        let s = fixtures::vending_s();
        let e = fixtures::vending_e();
        let iface = InterfaceSpec::from_models(&s, &e).unwrap();
        (s, e, iface)
    }

    #[test]
    fn internal_choice() {
        assert!(check_internal_choice(&fixtures::vending_e()).internal_choice);
        let r = check_internal_choice(&fixtures::drink_c());
        assert!(!r.internal_choice);
        assert_eq!(r.offending, vec!["c1", "c2"]);
        let loops =
            Iolts::from_parts("l", Alphabet::new(["a"], ["x"]), "s", &[("s", "a", "s")]).unwrap();
        assert!(check_internal_choice(&loops).internal_choice);
    }

    #[test]
    fn model_sut_behaviour() {
        let mut sut = sut_from_model(&fixtures::drink_c(), 7).unwrap();
        sut.supply(&Action::new("order")).unwrap();
        let obs = sut.observe().unwrap();
        assert!(
            obs == Observation::Output(Action::new("t"))
                || obs == Observation::Output(Action::new("error")),
            "{obs}"
        );
        let silent =
            Iolts::from_parts("q", Alphabet::new(["a"], ["x"]), "s", &[("s", "a", "s")]).unwrap();
        let mut sut = sut_from_model(&silent, 1).unwrap();
        for _ in 0..5 {
            assert_eq!(sut.observe().unwrap(), Observation::Quiescence);
        }
        assert!(sut_from_model(&fixtures::drink_m(), 0).is_err());
    }

    #[test]
    fn model_sut_replays() {
        let run = |seed| {
            let mut sut = sut_from_model(&fixtures::drink_c(), seed).unwrap();
            let mut seen = Vec::new();
            for _ in 0..20 {
                sut.supply(&Action::new("order")).unwrap();
                seen.push(sut.observe().unwrap());
            }
            seen
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn conforming_component_never_fails() {
        let (s, e, iface) = vending();
        let tester = OnTheFlyTester::new(&s, &e, &iface).unwrap();
        for seed in 0..30 {
            let mut sut = sut_from_model(&fixtures::drink_c(), seed).unwrap();
            let cfg = TestConfig {
                seed,
                max_steps: 100,
                stop_probability: 0.0,
            };
            let run = tester.run(&mut sut, &cfg).unwrap();
            assert_ne!(run.verdict, Verdict::Fail, "{}", run.render());
        }
    }

    #[test]
    fn eager_tea_fails_by_rule_seven() {
        let (s, e, iface) = vending();
        let eager = Iolts::from_parts(
            "eager",
            Alphabet::new(["order"], ["error", "t"]),
            "x0",
            &[
                ("x0", "t", "x1"),
                ("x0", "order", "x0"),
                ("x1", "order", "x1"),
            ],
        )
        .unwrap();
        let tester = OnTheFlyTester::new(&s, &e, &iface).unwrap();
        let mut fails = 0;
        for seed in 0..20 {
            let mut sut = sut_from_model(&eager, seed).unwrap();
            let run = tester
                .run(
                    &mut sut,
                    &TestConfig {
                        seed,
                        ..TestConfig::default()
                    },
                )
                .unwrap();
            if run.verdict == Verdict::Fail {
                fails += 1;
                assert_eq!(
                    run.failure,
                    Some((7, Observation::Output(Action::new("t"))))
                );
            }
        }
        assert!(fails > 0);
    }

    #[test]
    fn preconditions_are_enforced() {
        let s = fixtures::vending_s();
        let r = fixtures::money_r();
        let iface = InterfaceSpec::from_models(&s, &r).unwrap();
        assert!(matches!(
            OnTheFlyTester::new(&s, &r, &iface),
            Err(Error::Precondition(_))
        ));
        let cfg = TestConfig {
            max_steps: 0,
            ..TestConfig::default()
        };
        let (s, e, iface) = vending();
        let mut sut = sut_from_model(&fixtures::drink_c(), 0).unwrap();
        assert!(run_onthefly_test(&s, &e, &mut sut, &iface, &cfg).is_err());
    }

    #[test]
    fn log_format() {
        let (s, e, iface) = vending();
        let mut sut = sut_from_model(&fixtures::drink_c(), 5).unwrap();
        let cfg = TestConfig {
            seed: 5,
            max_steps: 10,
            stop_probability: 0.0,
        };
        let run = run_onthefly_test(&s, &e, &mut sut, &iface, &cfg).unwrap();
        let text = run.render();
        assert!(text.ends_with("verdict Pass seed 5\n"), "{text}");
        assert_eq!(run.log.len(), 10);
        assert!(run.log[9].starts_with("step 10 8 "));
    }
}
