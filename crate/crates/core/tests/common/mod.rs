//! Hand-transcribed low-order fixtures and small constructors.

#![allow(dead_code)]

use ahs_core::rational::{frac, int};
use ahs_core::{Action, Beta, Expansion, Provenance, Rational, Term};

pub fn x(i: usize) -> Beta {
    Beta::Arg(i)
}

pub fn tau() -> Beta {
    Beta::Tau
}

/// `((∇)^r Γ)(X_d..)·X_a` with the applied argument last.
pub fn g(args: &[usize]) -> Beta {
    Beta::Gamma { args: args.to_vec() }
}

pub fn br(a: Beta, b: Beta) -> Beta {
    Beta::bracket(a, b)
}

/// `[τ, [τ, b]]`
pub fn ad2(b: Beta) -> Beta {
    br(tau(), br(tau(), b))
}

pub fn act(t: usize, beta: Beta) -> Action {
    Action { t, beta }
}

pub fn term(c: Rational, actions: Vec<Action>, slots: &[usize]) -> Term {
    Term::new(c, actions, slots.to_vec())
}

fn full(order: usize, terms: Vec<Term>) -> Expansion {
    Expansion { order, provenance: Provenance::FullDifference, terms }
}

/// The five terms of the second order difference.
pub fn second_order() -> Expansion {
    let one = || int(1);
    full(
        2,
        vec![
            term(one(), vec![act(0, br(x(1), g(&[2])))], &[]),
            term(one(), vec![act(1, br(x(2), tau())), act(0, br(x(1), tau()))], &[]),
            term(frac(-1, 2), vec![act(0, br(x(1), ad2(x(2))))], &[]),
            term(one(), vec![act(0, br(x(1), tau()))], &[2]),
            term(one(), vec![act(1, br(x(2), tau()))], &[1]),
        ],
    )
}

/// The 24 terms of the third order difference, grouped by the second order
/// term they descend from.
pub fn third_order() -> Expansion {
    let one = || int(1);
    let h = || frac(-1, 2);
    let q = || frac(1, 4);
    let l3 = || act(2, br(x(3), tau()));
    full(
        3,
        vec![
            term(one(), vec![l3(), act(0, br(x(1), g(&[2])))], &[]),
            term(one(), vec![act(0, br(x(1), g(&[3, 2])))], &[]),
            term(one(), vec![act(0, br(x(1), g(&[2])))], &[3]),
            //
            term(one(), vec![l3(), act(1, br(x(2), tau())), act(0, br(x(1), tau()))], &[]),
            term(h(), vec![act(1, br(x(2), tau())), act(0, br(x(1), ad2(x(3))))], &[]),
            term(h(), vec![act(1, br(x(2), ad2(x(3)))), act(0, br(x(1), tau()))], &[]),
            term(one(), vec![act(1, br(x(2), tau())), act(0, br(x(1), tau()))], &[3]),
            term(one(), vec![act(1, br(x(2), g(&[3]))), act(0, br(x(1), tau()))], &[]),
            term(one(), vec![act(1, br(x(2), tau())), act(0, br(x(1), g(&[3])))], &[]),
            //
            term(h(), vec![l3(), act(0, br(x(1), ad2(x(2))))], &[]),
            term(q(), vec![act(0, br(x(1), br(ad2(x(3)), br(tau(), x(2)))))], &[]),
            term(q(), vec![act(0, br(x(1), br(tau(), br(ad2(x(3)), x(2)))))], &[]),
            term(h(), vec![act(0, br(x(1), ad2(x(2))))], &[3]),
            term(h(), vec![act(0, br(x(1), br(g(&[3]), br(tau(), x(2)))))], &[]),
            term(h(), vec![act(0, br(x(1), br(tau(), br(g(&[3]), x(2)))))], &[]),
            //
            term(one(), vec![l3(), act(0, br(x(1), tau()))], &[2]),
            term(h(), vec![act(0, br(x(1), ad2(x(3))))], &[2]),
            term(one(), vec![act(0, br(x(1), tau()))], &[2, 3]),
            term(one(), vec![act(0, br(x(1), g(&[3])))], &[2]),
            //
            term(one(), vec![l3(), act(1, br(x(2), tau()))], &[1]),
            term(h(), vec![act(1, br(x(2), ad2(x(3))))], &[1]),
            term(one(), vec![act(1, br(x(2), tau()))], &[1, 3]),
            term(one(), vec![act(1, br(x(2), g(&[3])))], &[1]),
            //
            term(one(), vec![l3()], &[1, 2]),
        ],
    )
}

/// The four third order correction terms (no `τ`).
pub fn third_order_correction() -> Expansion {
    let one = || int(1);
    Expansion {
        order: 3,
        provenance: Provenance::Filtered { tau_count: Some(0), deriv_order: None },
        terms: vec![
            term(one(), vec![act(0, br(x(1), g(&[3, 2])))], &[]),
            term(one(), vec![act(0, br(x(1), g(&[2])))], &[3]),
            term(one(), vec![act(0, br(x(1), g(&[3])))], &[2]),
            term(one(), vec![act(1, br(x(2), g(&[3])))], &[1]),
        ],
    }
}
