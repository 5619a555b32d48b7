//! The vending-machine and EFT models, hand-transcribed.
//!
//! Unnamed nodes get sequential names. Suspension-automaton drawings are
//! transcribed literally, including their omissions, so that comparisons
//! against computed automata show real differences.

use crate::format::{parse_iolts, parse_sa};
use crate::model::{Iolts, SuspensionAutomaton};

pub const VENDING_S: &str = "\
# vending machine: after a coin, tea or a refund
name vending_s
inputs c
outputs r t
init s0
trans s0 c s2
trans s2 r s3
trans s2 tau s1
trans s1 t s4
trans s1 tau s0
";

/// The spec with the internal step from `s1` back to `s0` removed.
pub const VENDING_L: &str = "\
name vending_l
inputs c
outputs r t
init s0
trans s0 c s2
trans s2 r s3
trans s2 tau s1
trans s1 t s4
";

/// The determinized spec as drawn; the `c` loop at `q1` is not in the drawing.
pub const VENDING_DELTA: &str = "\
name vending_delta
kind sa
inputs c
outputs r t
init q0
trans q0 delta q0
trans q0 c q1
trans q1 r q2
trans q1 t q3
trans q1 delta q0
trans q2 delta q2
trans q3 delta q3
";

/// Money component: forwards an order per coin, swallows errors.
pub const VENDING_E: &str = "\
name vending_e
inputs c error
outputs order r
init e0
trans e0 error e0
trans e0 c e1
trans e1 order e2
trans e1 tau e0
trans e2 tau e0
";

/// Money component that may refund after an error.
pub const MONEY_R: &str = "\
name money_r
inputs c error
outputs order r
init r0
trans r0 error r0
trans r0 c r1
trans r1 order r2
trans r1 tau r0
trans r2 tau r0
trans r2 error r3
trans r3 r r0
trans r3 tau r2
";

pub const DRINK_M: &str = "\
name drink_m
inputs order
outputs error t
init m0
trans m0 order m1
trans m1 error m2
trans m1 t m3
";

pub const DRINK_P: &str = "\
name drink_p
inputs order
outputs error t
init p0
trans p0 order p1
trans p1 error p2
trans p1 t p3
trans p2 error p2
trans p2 tau p0
";

/// Drink implementation that may report an error twice in a row.
pub const DRINK_C: &str = "\
name drink_c
inputs order
outputs error t
init c0
trans c0 order c1
trans c1 error c2
trans c1 t c3
trans c1 order c1
trans c2 order c2
trans c2 error c0
trans c3 order c3
";

/// Quotient of the vending spec by the money component, as drawn.
pub const QUOTIENT_R: &str = "\
name quotient_r
kind sa
inputs order
outputs error t
init 0
trans 0 order 1
trans 0 error 7
trans 0 delta 2
trans 1 t 3
trans 1 error 5
trans 2 order 1
trans 2 delta 2
trans 3 delta 4
trans 3 error 6
trans 4 delta 4
trans 5 delta 2
trans 5 order 1
trans 5 error 5
trans 6 error 6
trans 6 delta 4
trans 7 delta 2
trans 7 order 1
trans 7 error 7
";

/// Quotient of the restricted spec by the money component, as drawn.
pub const QUOTIENT_I: &str = "\
name quotient_i
kind sa
inputs order
outputs error t
init 0
trans 0 order 1
trans 0 error 7
trans 1 t 8
trans 1 error 5
trans 3 delta 4
trans 3 error 6
trans 4 delta 4
trans 5 error 7
trans 6 error 6
trans 6 delta 4
trans 7 error 7
trans 7 order 1
trans 8 error 3
trans 8 delta 9
trans 9 delta 9
";

/// EFT switch spec. The drawing labels it an SA but it has an internal
/// step, so the quiescence edge into `s7` is read as `tau` and Δ is left to
/// the tool.
pub const EFT_S: &str = "\
name eft_s
inputs p_rs
outputs p_rq rev_rq
init s0
trans s0 p_rq s1
trans s0 rev_rq s5
trans s1 rev_rq s3
trans s1 p_rs s3
trans s3 tau s4
trans s3 rev_rq s3
trans s5 p_rq s5
trans s5 rev_rq s5
trans s5 tau s7
";

/// EFT platform; the drawn quiescence loops are left to Δ.
pub const EFT_E: &str = "\
name eft_e
inputs p_rs
outputs p_rq t
init e0
trans e0 p_rq e1
trans e0 p_rs e0
trans e1 p_rs e3
trans e1 t e2
trans e2 p_rs e2
trans e3 p_rs e3
";

pub const EFT_QUOTIENT: &str = "\
name eft_quotient
kind sa
inputs t
outputs rev_rq
init 0
trans 0 t 1
trans 0 rev_rq 2
trans 1 rev_rq 3
trans 2 t 6
trans 2 rev_rq 4
trans 3 delta 5
trans 3 rev_rq 3
trans 4 t 6
trans 4 rev_rq 4
trans 5 delta 5
trans 6 delta 7
trans 6 rev_rq 6
trans 7 delta 7
";

/// Every fixture as `(file stem, document)`, in a stable order.
pub const CORPUS: &[(&str, &str)] = &[
    ("vending_s", VENDING_S),
    ("vending_l", VENDING_L),
    ("vending_delta", VENDING_DELTA),
    ("vending_e", VENDING_E),
    ("money_r", MONEY_R),
    ("drink_m", DRINK_M),
    ("drink_p", DRINK_P),
    ("drink_c", DRINK_C),
    ("quotient_r", QUOTIENT_R),
    ("quotient_i", QUOTIENT_I),
    ("eft_s", EFT_S),
    ("eft_e", EFT_E),
    ("eft_quotient", EFT_QUOTIENT),
];

fn iolts(doc: &str) -> Iolts {
    parse_iolts(doc).expect("fixture documents are well-formed")
}

fn sa(doc: &str) -> SuspensionAutomaton {
    parse_sa(doc).expect("fixture documents are well-formed")
}

pub fn vending_s() -> Iolts {
    iolts(VENDING_S)
}
pub fn vending_l() -> Iolts {
    iolts(VENDING_L)
}
pub fn vending_delta() -> SuspensionAutomaton {
    sa(VENDING_DELTA)
}
pub fn vending_e() -> Iolts {
    iolts(VENDING_E)
}
pub fn money_r() -> Iolts {
    iolts(MONEY_R)
}
pub fn drink_m() -> Iolts {
    iolts(DRINK_M)
}
pub fn drink_p() -> Iolts {
    iolts(DRINK_P)
}
pub fn drink_c() -> Iolts {
    iolts(DRINK_C)
}
pub fn quotient_r() -> SuspensionAutomaton {
    sa(QUOTIENT_R)
}
pub fn quotient_i() -> SuspensionAutomaton {
    sa(QUOTIENT_I)
}
pub fn eft_s() -> Iolts {
    iolts(EFT_S)
}
pub fn eft_e() -> Iolts {
    iolts(EFT_E)
}
pub fn eft_quotient() -> SuspensionAutomaton {
    sa(EFT_QUOTIENT)
}
