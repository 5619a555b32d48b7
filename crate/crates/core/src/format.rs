//! The line-oriented model document format.
//!
//! ```text
//! name vending
//! kind sa                 # optional; default is a plain IOLTS
//! inputs c
//! outputs r t
//! states s0 s1 s2         # optional; when present every state must be listed
//! init s0
//! trans s0 c s1
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{
    is_state_token, Action, Alphabet, Iolts, Label, Lts, LtsBuilder, Model, ModelKind,
    SuspensionAutomaton, DELTA, TAU,
};

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a model document of either kind.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut name: Option<String> = None;
    let mut kind = ModelKind::Iolts;
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut declared: Option<BTreeSet<String>> = None;
    let mut init: Option<String> = None;
    let mut trans: Vec<(String, String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut words = line.split_whitespace();
        let Some(keyword) = words.next() else {
            continue;
        };
        let args: Vec<String> = words.map(str::to_string).collect();
        match keyword {
            "name" => {
                if name.is_some() {
                    return Err(syntax(lineno, "duplicate `name` line"));
                }
                let [n] = args.as_slice() else {
                    return Err(syntax(lineno, "`name` takes exactly one token"));
                };
                name = Some(n.clone());
            }
            "kind" => match args.as_slice() {
                [k] if k == "sa" => kind = ModelKind::SuspensionAutomaton,
                [k] if k == "iolts" => kind = ModelKind::Iolts,
                _ => return Err(syntax(lineno, "`kind` must be `sa` or `iolts`")),
            },
            "inputs" | "outputs" => {
                let slot = if keyword == "inputs" {
                    &mut inputs
                } else {
                    &mut outputs
                };
                if slot.is_some() {
                    return Err(syntax(lineno, format!("duplicate `{keyword}` line")));
                }
                *slot = Some(args);
            }
            "states" => {
                if declared.is_some() {
                    return Err(syntax(lineno, "duplicate `states` line"));
                }
                declared = Some(args.into_iter().collect());
            }
            "init" => {
                if init.is_some() {
                    return Err(syntax(lineno, "duplicate `init` line"));
                }
                let [s] = args.as_slice() else {
                    return Err(syntax(lineno, "`init` takes exactly one state"));
                };
                init = Some(s.clone());
            }
            "trans" => {
                let [s, l, t] = args.as_slice() else {
                    return Err(syntax(lineno, "`trans` takes <src> <label> <dst>"));
                };
                trans.push((s.clone(), l.clone(), t.clone()));
            }
            other => return Err(syntax(lineno, format!("unknown keyword `{other}`"))),
        }
    }

    let mut alphabet = Alphabet::default();
    for a in inputs.unwrap_or_default() {
        alphabet.inputs.insert(Action::parse(&a)?);
    }
    for a in outputs.unwrap_or_default() {
        alphabet.outputs.insert(Action::parse(&a)?);
    }
    if let Some(a) = alphabet.inputs.intersection(&alphabet.outputs).next() {
        return Err(Error::AlphabetOverlap(a.to_string()));
    }

    let init = init.ok_or(Error::MissingInit)?;
    let check_state = |s: &str| -> Result<()> {
        if !is_state_token(s) {
            return Err(Error::InvalidToken(s.to_string()));
        }
        match &declared {
            Some(d) if !d.contains(s) => Err(Error::UndeclaredState(s.to_string())),
            _ => Ok(()),
        }
    };

    let name = name.unwrap_or_else(|| "model".to_string());
    let mut b = LtsBuilder::new(&name, kind, alphabet.clone());
    if let Some(d) = &declared {
        for s in d {
            check_state(s)?;
            b.add_state(s);
        }
    }
    check_state(&init)?;
    let i = b.add_state(&init);
    b.set_initial(i);
    for (s, l, t) in trans {
        check_state(&s)?;
        check_state(&t)?;
        let label = match l.as_str() {
            TAU if kind == ModelKind::Iolts => Label::Tau,
            DELTA if kind == ModelKind::SuspensionAutomaton => Label::Delta,
            TAU | DELTA => return Err(Error::ReservedName(l)),
            other => {
                let a = Action::parse(other)?;
                if !alphabet.contains(&a) {
                    return Err(Error::UndeclaredLabel(a.to_string()));
                }
                Label::Act(a)
            }
        };
        let src = b.add_state(&s);
        let dst = b.add_state(&t);
        b.add_transition(src, label, dst);
    }
    let (lts, _) = b.build()?;
    Ok(match kind {
        ModelKind::Iolts => Model::Iolts(Iolts::from_lts(lts)?),
        ModelKind::SuspensionAutomaton => Model::Sa(SuspensionAutomaton::from_lts(lts)?),
    })
}

/// Parses a document that must describe a plain IOLTS.
pub fn parse_iolts(text: &str) -> Result<Iolts> {
    parse_model(text)?.into_iolts()
}

/// Parses a document that must describe a suspension automaton.
pub fn parse_sa(text: &str) -> Result<SuspensionAutomaton> {
    parse_model(text)?.into_sa()
}

/// Canonically ordered rendering; byte-identical for equal models.
pub fn serialize(m: &Lts) -> String {
    let mut out = String::new();
    let join = |set: &BTreeSet<Action>| set.iter().map(|a| format!(" {a}")).collect::<String>();
    let _ = writeln!(out, "name {}", m.name());
    if m.is_sa() {
        out.push_str("kind sa\n");
    }
    let _ = writeln!(out, "inputs{}", join(m.inputs()));
    let _ = writeln!(out, "outputs{}", join(m.outputs()));
    out.push_str("states");
    for s in m.states() {
        out.push(' ');
        out.push_str(m.state_name(s));
    }
    out.push('\n');
    let _ = writeln!(out, "init {}", m.state_name(m.initial()));
    for (s, l, t) in m.transitions() {
        let _ = writeln!(out, "trans {} {} {}", m.state_name(*s), l, m.state_name(*t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let m = parse_iolts("init s\n").unwrap();
        assert_eq!(m.state_count(), 1);
        assert!(m.transitions().is_empty());
        assert!(m.inputs().is_empty() && m.outputs().is_empty());
    }

    #[test]
    fn overlap_error() {
        let err = parse_model("inputs c\noutputs c\ninit s\n").unwrap_err();
        assert_eq!(err, Error::AlphabetOverlap("c".into()));
    }

    #[test]
    fn error_cases() {
        assert_eq!(parse_model("inputs a\n").unwrap_err(), Error::MissingInit);
        assert!(matches!(
            parse_model("init s\nbogus\n").unwrap_err(),
            Error::Syntax { line: 2, .. }
        ));
        assert!(matches!(
            parse_model("# header\ninit s\ntrans s a\n").unwrap_err(),
            Error::Syntax { line: 3, .. }
        ));
        assert_eq!(
            parse_model("inputs a\ninit s\ntrans s b s\n").unwrap_err(),
            Error::UndeclaredLabel("b".into())
        );
        assert_eq!(
            parse_model("inputs a\nstates s\ninit s\ntrans s a t\n").unwrap_err(),
            Error::UndeclaredState("t".into())
        );
        assert_eq!(
            parse_model("inputs tau\ninit s\n").unwrap_err(),
            Error::ReservedName("tau".into())
        );
        assert_eq!(
            parse_model("init s\ntrans s delta s\n").unwrap_err(),
            Error::ReservedName("delta".into())
        );
        assert_eq!(
            parse_model("kind sa\ninit s\ntrans s tau s\n").unwrap_err(),
            Error::ReservedName("tau".into())
        );
    }

    #[test]
    fn sa_documents_accept_delta() {
        let m = parse_sa("kind sa\noutputs x\ninit q\ntrans q delta q\ntrans q x r\n").unwrap();
        assert_eq!(m.transitions().len(), 2);
        assert!(m.out(m.initial()).contains(&Label::Delta));
    }

    #[test]
    fn declaration_order_is_irrelevant() {
        let a = parse_iolts("name m\ninputs a b\noutputs x\ninit s\ntrans s a t\ntrans t x s\n")
            .unwrap();
        let b = parse_iolts("outputs x\ninputs b a\ninit s\ntrans t x s\ntrans s a t\nname m\n")
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(serialize(&a), serialize(&b));
    }

    #[test]
    fn serialization_is_canonical_and_idempotent() {
        let text =
            "name m\ninputs a\noutputs x\ninit s1\ntrans s1 a s0\ntrans s0 x s1\ntrans s0 tau s0\n";
        let m = parse_iolts(text).unwrap();
        let once = serialize(&m);
        assert_eq!(
            once,
            "name m\ninputs a\noutputs x\nstates s0 s1\ninit s1\ntrans s0 tau s0\ntrans s0 x s1\ntrans s1 a s0\n"
        );
        let twice = serialize(&parse_iolts(&once).unwrap());
        assert_eq!(once, twice);
    }
}
