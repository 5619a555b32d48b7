//! Alphabet bookkeeping between a system spec, its platform and the
//! missing component.
//!
//! The hidden interface `L_v = L_e \ L_s` is split by direction as seen from
//! the component: `I_v` are platform outputs the component consumes, `U_v`
//! are component outputs the platform consumes.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Action, Alphabet, Lts};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterfaceSpec {
    pub spec: Alphabet,
    pub env: Alphabet,
}

fn joined(set: &BTreeSet<Action>) -> String {
    set.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl InterfaceSpec {
    pub fn new(spec: Alphabet, env: Alphabet) -> Result<Self> {
        let iface = InterfaceSpec { spec, env };
        let q = iface.quotient_alphabet();
        let clash: BTreeSet<Action> = q.inputs.intersection(&q.outputs).cloned().collect();
        if !clash.is_empty() {
            return Err(Error::Alphabet(format!(
                "component would both receive and send {}",
                joined(&clash)
            )));
        }
        Ok(iface)
    }

    pub fn from_models(spec: &Lts, env: &Lts) -> Result<Self> {
        InterfaceSpec::new(spec.alphabet().clone(), env.alphabet().clone())
    }

    /// `L_s`.
    pub fn spec_labels(&self) -> BTreeSet<Action> {
        self.spec.all()
    }

    /// `L_e`.
    pub fn env_labels(&self) -> BTreeSet<Action> {
        self.env.all()
    }

    /// `L_s ∩ L_e`: labels both spec and platform observe.
    pub fn joint(&self) -> BTreeSet<Action> {
        let ls = self.spec_labels();
        self.env_labels()
            .into_iter()
            .filter(|a| ls.contains(a))
            .collect()
    }

    /// `L_v = L_e \ L_s`.
    pub fn hidden(&self) -> BTreeSet<Action> {
        let ls = self.spec_labels();
        self.env_labels()
            .into_iter()
            .filter(|a| !ls.contains(a))
            .collect()
    }

    /// `I_v = U_e \ L_s`.
    pub fn hidden_inputs(&self) -> BTreeSet<Action> {
        let ls = self.spec_labels();
        self.env
            .outputs
            .iter()
            .filter(|a| !ls.contains(*a))
            .cloned()
            .collect()
    }

    /// `U_v = I_e \ L_s`.
    pub fn hidden_outputs(&self) -> BTreeSet<Action> {
        let ls = self.spec_labels();
        self.env
            .inputs
            .iter()
            .filter(|a| !ls.contains(*a))
            .cloned()
            .collect()
    }

    /// `I = (I_s \ I_e) ∪ (U_e \ U_s)`, `U = (U_s \ U_e) ∪ (I_e \ I_s)`.
    pub fn quotient_alphabet(&self) -> Alphabet {
        let minus = |a: &BTreeSet<Action>, b: &BTreeSet<Action>| -> BTreeSet<Action> {
            a.difference(b).cloned().collect()
        };
        let inputs = minus(&self.spec.inputs, &self.env.inputs)
            .union(&minus(&self.env.outputs, &self.spec.outputs))
            .cloned()
            .collect();
        let outputs = minus(&self.spec.outputs, &self.env.outputs)
            .union(&minus(&self.env.inputs, &self.spec.inputs))
            .cloned()
            .collect();
        Alphabet { inputs, outputs }
    }

    /// Rejects a user-supplied hidden set that differs from `L_v`.
    pub fn check_hidden(&self, claimed: &BTreeSet<Action>) -> Result<()> {
        let derived = self.hidden();
        if *claimed != derived {
            return Err(Error::Alphabet(format!(
                "hidden interface given as {{{}}} but the alphabets imply {{{}}}",
                joined(claimed),
                joined(&derived)
            )));
        }
        Ok(())
    }
}
