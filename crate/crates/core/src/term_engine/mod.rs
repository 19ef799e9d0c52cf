//! Formal expansion of iterated invariant differentials.
//!
//! `expand(k)` builds the difference `F^k s` between the `k`-th invariant
//! derivative of the pulled-back section and the pull-back of the `k`-th
//! covariant derivative, as a sum of [`Term`]s. Each term is a chain of
//! actions `λ^(t)(β)` applied to a covariant jet `(∇^γ)^j s`.
//!
//! A term's actions are stored outermost first. For an action `(t, β)` the
//! arguments `X1..Xt` are evaluated after the action; every other argument
//! occurring further right is evaluated before it. The jet slots list the
//! arguments of `(∇^γ)^j s` in derivative order, the last slot being the
//! outermost derivative.

mod eval;
mod render;

use std::collections::HashMap;
use std::hash::Hash;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{half, Rational};

pub use eval::{evaluate, Bindings};
pub use render::{parse_json, render, Format};

/// A bracket expression in the arguments, `τ` and covariant derivatives of `Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Beta {
    /// The argument `X_i` (1-based), grade −1.
    Arg(usize),
    /// The symbol `τ`, grade +1.
    Tau,
    /// `((∇^γ)^r Γ)(X_d1, ..., X_dr)·X_a` with `args = [d1, ..., dr, a]`, grade +1.
    Gamma { args: Vec<usize> },
    Bracket(Box<Beta>, Box<Beta>),
}

impl Beta {
    pub fn bracket(a: Beta, b: Beta) -> Beta {
        Beta::Bracket(Box::new(a), Box::new(b))
    }

    pub fn grade(&self) -> i32 {
        match self {
            Beta::Arg(_) => -1,
            Beta::Tau | Beta::Gamma { .. } => 1,
            Beta::Bracket(a, b) => a.grade() + b.grade(),
        }
    }

    /// Grades of every subexpression stay inside `[-1, 1]`.
    pub fn well_graded(&self) -> bool {
        match self {
            Beta::Bracket(a, b) => a.well_graded() && b.well_graded() && self.grade().abs() <= 1,
            Beta::Gamma { args } => !args.is_empty(),
            _ => true,
        }
    }

    pub fn tau_count(&self) -> usize {
        match self {
            Beta::Tau => 1,
            Beta::Bracket(a, b) => a.tau_count() + b.tau_count(),
            _ => 0,
        }
    }

    pub fn gamma_count(&self) -> usize {
        match self {
            Beta::Gamma { .. } => 1,
            Beta::Bracket(a, b) => a.gamma_count() + b.gamma_count(),
            _ => 0,
        }
    }

    /// Argument indices in left-to-right order.
    pub fn args(&self, out: &mut Vec<usize>) {
        match self {
            Beta::Arg(i) => out.push(*i),
            Beta::Tau => {}
            Beta::Gamma { args } => out.extend(args),
            Beta::Bracket(a, b) => {
                a.args(out);
                b.args(out);
            }
        }
    }

    /// Every way of rewriting exactly one leaf matched by `pick`.
    fn rewrite_each(&self, pick: &impl Fn(&Beta) -> Option<Beta>, out: &mut Vec<Beta>) {
        if let Some(r) = pick(self) {
            out.push(r);
            return;
        }
        if let Beta::Bracket(a, b) = self {
            let mut left = Vec::new();
            a.rewrite_each(pick, &mut left);
            out.extend(left.into_iter().map(|l| Beta::Bracket(Box::new(l), b.clone())));
            let mut right = Vec::new();
            b.rewrite_each(pick, &mut right);
            out.extend(right.into_iter().map(|r| Beta::Bracket(a.clone(), Box::new(r))));
        }
    }

    fn has_equal_bracket(&self) -> bool {
        match self {
            Beta::Bracket(a, b) => a == b || a.has_equal_bracket() || b.has_equal_bracket(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Action {
    pub t: usize,
    pub beta: Beta,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "crate::rational::as_str")]
    pub coeff: Rational,
    pub actions: Vec<Action>,
    pub deriv_order: usize,
    pub slots: Vec<usize>,
}

/// The identity of a term, i.e. everything but its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub actions: Vec<Action>,
    pub slots: Vec<usize>,
}

impl Term {
    pub fn new(coeff: Rational, actions: Vec<Action>, slots: Vec<usize>) -> Self {
        Term { coeff, deriv_order: slots.len(), actions, slots }
    }

    pub fn key(&self) -> TermKey {
        TermKey { actions: self.actions.clone(), slots: self.slots.clone() }
    }

    pub fn tau_count(&self) -> usize {
        self.actions.iter().map(|a| a.beta.tau_count()).sum()
    }

    /// All argument indices used, in order of appearance.
    pub fn args(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for a in &self.actions {
            a.beta.args(&mut out);
        }
        out.extend(&self.slots);
        out
    }

    /// Checks the grade and argument-slot invariants for an order-`k` term.
    pub fn validate(&self, k: usize) -> Result<()> {
        for a in &self.actions {
            if a.beta.grade() != 0 || !a.beta.well_graded() {
                return Err(Error::Grade(format!("action argument {:?} is not of grade 0", a.beta)));
            }
            if a.t > k {
                return Err(Error::Inconsistent(format!("λ^({}) exceeds order {k}", a.t)));
            }
        }
        if self.deriv_order != self.slots.len() {
            return Err(Error::Inconsistent("deriv_order does not match slot count".into()));
        }
        let mut args = self.args();
        args.sort_unstable();
        if args != (1..=k).collect::<Vec<_>>() {
            return Err(Error::Inconsistent(format!("term does not use X1..X{k} exactly once")));
        }
        Ok(())
    }
}

/// Structural normal form: actions and slots are kept exactly as generated and
/// β atoms are opaque, so two terms are identified iff they are equal trees.
/// A bracket of two equal subexpressions vanishes, which sets the coefficient to 0.
pub fn canonical_form(t: &Term) -> Term {
    let mut c = t.clone();
    if c.actions.iter().any(|a| a.beta.has_equal_bracket()) {
        c.coeff = Rational::zero();
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    FullDifference,
    Filtered { tau_count: Option<usize>, deriv_order: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub order: usize,
    pub provenance: Provenance,
    pub terms: Vec<Term>,
}

impl Expansion {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_gamma_order(&self) -> Option<usize> {
        fn walk(b: &Beta, acc: &mut Option<usize>) {
            match b {
                Beta::Gamma { args } => *acc = Some(acc.map_or(args.len() - 1, |m| m.max(args.len() - 1))),
                Beta::Bracket(x, y) => {
                    walk(x, acc);
                    walk(y, acc);
                }
                _ => {}
            }
        }
        let mut acc = None;
        for t in &self.terms {
            for a in &t.actions {
                walk(&a.beta, &mut acc);
            }
        }
        acc
    }

    /// Multiset-free comparison that ignores term order.
    pub fn same_terms(&self, other: &Expansion) -> bool {
        let mut a: Vec<(TermKey, Rational)> = self.terms.iter().map(|t| (t.key(), t.coeff.clone())).collect();
        let mut b: Vec<(TermKey, Rational)> = other.terms.iter().map(|t| (t.key(), t.coeff.clone())).collect();
        a.sort();
        b.sort();
        a == b
    }
}

/// Sums coefficients of structurally equal terms, keeping first-seen order
/// and dropping zeros.
pub fn merge(terms: impl IntoIterator<Item = Term>) -> Vec<Term> {
    let mut index: HashMap<TermKey, usize> = HashMap::new();
    let mut out: Vec<Term> = Vec::new();
    for t in terms {
        let t = canonical_form(&t);
        match index.get(&t.key()) {
            Some(&i) => out[i].coeff += t.coeff,
            None => {
                index.insert(t.key(), out.len());
                out.push(t);
            }
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

fn rewrite_actions(term: &Term, coeff: &Rational, pick: &impl Fn(&Beta) -> Option<Beta>, out: &mut Vec<Term>) {
    for (i, a) in term.actions.iter().enumerate() {
        let mut variants = Vec::new();
        a.beta.rewrite_each(pick, &mut variants);
        for v in variants {
            let mut actions = term.actions.clone();
            actions[i].beta = v;
            out.push(Term { coeff: coeff.clone(), actions, deriv_order: term.deriv_order, slots: term.slots.clone() });
        }
    }
}

/// The terms produced from one term of `F^(k-1)` at step `k`.
fn step_term(term: &Term, k: usize) -> Vec<Term> {
    let mut out = Vec::new();
    let mut actions = vec![Action { t: k - 1, beta: Beta::bracket(Beta::Arg(k), Beta::Tau) }];
    actions.extend(term.actions.iter().cloned());
    out.push(Term { coeff: term.coeff.clone(), actions, deriv_order: term.deriv_order, slots: term.slots.clone() });

    let s_tau = |b: &Beta| match b {
        Beta::Tau => Some(Beta::bracket(Beta::Tau, Beta::bracket(Beta::Tau, Beta::Arg(k)))),
        _ => None,
    };
    rewrite_actions(term, &(-half() * &term.coeff), &s_tau, &mut out);

    let s_nabla = |b: &Beta| match b {
        Beta::Gamma { args } => {
            let mut a = args.clone();
            a.insert(a.len() - 1, k);
            Some(Beta::Gamma { args: a })
        }
        _ => None,
    };
    rewrite_actions(term, &term.coeff, &s_nabla, &mut out);
    let mut slots = term.slots.clone();
    slots.push(k);
    out.push(Term::new(term.coeff.clone(), term.actions.clone(), slots));

    let s_gamma = |b: &Beta| match b {
        Beta::Tau => Some(Beta::Gamma { args: vec![k] }),
        _ => None,
    };
    rewrite_actions(term, &term.coeff, &s_gamma, &mut out);
    out
}

/// `F^k s` as a merged term sum. With `truncate_tau_above = Some(l)` every
/// term with more than `l` occurrences of `τ` is dropped, pruning early any
/// term that can no longer come back under the bound.
pub fn expand(k: usize, truncate_tau_above: Option<usize>) -> Expansion {
    let mut terms: Vec<Term> = Vec::new();
    for step in 1..=k {
        let next: Vec<Vec<Term>> = terms.par_iter().map(|t| step_term(t, step)).collect();
        let last = Term::new(
            Rational::from_integer(1.into()),
            vec![Action { t: step - 1, beta: Beta::bracket(Beta::Arg(step), Beta::Tau) }],
            (1..step).collect(),
        );
        terms = merge(next.into_iter().flatten().chain(std::iter::once(last)));
        if let Some(l) = truncate_tau_above {
            let bound = l + (k - step);
            terms.retain(|t| t.tau_count() <= bound);
        }
    }
    Expansion { order: k, provenance: Provenance::FullDifference, terms }
}

/// `D_j`: the terms with exactly `j` occurrences of `τ`.
pub fn filter_by_tau(e: &Expansion, j: usize) -> Expansion {
    Expansion {
        order: e.order,
        provenance: Provenance::Filtered { tau_count: Some(j), deriv_order: None },
        terms: e.terms.iter().filter(|t| t.tau_count() == j).cloned().collect(),
    }
}

/// Terms of `D_1` of order `k − 1` in `s`.
pub fn algebraic_obstruction(k: usize) -> Expansion {
    let e = expand(k, Some(1));
    Expansion {
        order: k,
        provenance: Provenance::Filtered { tau_count: Some(1), deriv_order: Some(k.saturating_sub(1)) },
        terms: e.terms.into_iter().filter(|t| t.tau_count() == 1 && t.deriv_order + 1 == k).collect(),
    }
}

/// Number of terms of `F^k` with each `τ`-count.
pub fn tau_histogram(e: &Expansion) -> Vec<usize> {
    let mut h = Vec::new();
    for t in &e.terms {
        let c = t.tau_count();
        if h.len() <= c {
            h.resize(c + 1, 0);
        }
        h[c] += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn x(i: usize) -> Beta {
        Beta::Arg(i)
    }
    fn br(a: Beta, b: Beta) -> Beta {
        Beta::bracket(a, b)
    }
    fn g(args: &[usize]) -> Beta {
        Beta::Gamma { args: args.to_vec() }
    }
    fn act(t: usize, beta: Beta) -> Action {
        Action { t, beta }
    }

    #[test]
    fn order_zero_and_one() {
        assert!(expand(0, None).is_empty());
        let e = expand(1, None);
        assert_eq!(e.terms, vec![Term::new(int(1), vec![act(0, br(x(1), Beta::Tau))], vec![])]);
    }

    #[test]
    fn order_two_matches_display() {
        let expected = vec![
            Term::new(int(1), vec![act(1, br(x(2), Beta::Tau)), act(0, br(x(1), Beta::Tau))], vec![]),
            Term::new(-half(), vec![act(0, br(x(1), br(Beta::Tau, br(Beta::Tau, x(2)))))], vec![]),
            Term::new(int(1), vec![act(0, br(x(1), Beta::Tau))], vec![2]),
            Term::new(int(1), vec![act(0, br(x(1), g(&[2])))], vec![]),
            Term::new(int(1), vec![act(1, br(x(2), Beta::Tau))], vec![1]),
        ];
        assert_eq!(expand(2, None).terms, expected);
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=5).map(|k| expand(k, None).len()).collect();
        assert_eq!(counts, vec![1, 5, 24, 134, 900]);
        let e = expand(4, None);
        assert_eq!(filter_by_tau(&e, 0).len(), 16);
        assert_eq!(filter_by_tau(&e, 1).len(), 30);
    }

    #[test]
    fn invariants_hold_at_order_four() {
        for t in &expand(4, None).terms {
            t.validate(4).unwrap();
        }
    }

    #[test]
    fn truncation_is_sound() {
        let full = expand(5, None);
        let cut = expand(5, Some(1));
        for j in 0..=1 {
            assert_eq!(filter_by_tau(&full, j).terms, filter_by_tau(&cut, j).terms);
        }
        assert!(cut.terms.iter().all(|t| t.tau_count() <= 1));
    }

    #[test]
    fn obstruction_shapes() {
        assert_eq!(algebraic_obstruction(1).terms, expand(1, None).terms);
        let o2 = algebraic_obstruction(2);
        assert_eq!(o2.len(), 2);
        let o3 = algebraic_obstruction(3);
        assert_eq!(o3.len(), 3);
        // one λ^(i-1)([X_i, τ]) insertion per position
        let mut ts: Vec<usize> = o3.terms.iter().map(|t| t.actions[0].t).collect();
        ts.sort_unstable();
        assert_eq!(ts, vec![0, 1, 2]);
        for t in &o3.terms {
            assert_eq!(t.actions.len(), 1);
            let i = t.actions[0].t + 1;
            assert_eq!(t.actions[0].beta, br(x(i), Beta::Tau));
        }
    }

    #[test]
    fn merge_collapses_duplicates() {
        let t = Term::new(frac(1, 3), vec![act(0, br(x(1), Beta::Tau))], vec![2]);
        let u = Term::new(frac(2, 3), vec![act(0, br(x(1), Beta::Tau))], vec![2]);
        let v = Term::new(int(-1), vec![act(0, br(x(1), g(&[2])))], vec![]);
        let w = Term::new(int(1), vec![act(0, br(x(1), g(&[2])))], vec![]);
        let m = merge(vec![t, v, u, w]);
        assert_eq!(m, vec![Term::new(int(1), vec![act(0, br(x(1), Beta::Tau))], vec![2])]);
    }

    #[test]
    fn canonical_form_is_idempotent() {
        for t in &expand(3, None).terms {
            let c = canonical_form(t);
            assert_eq!(&c, t);
            assert_eq!(canonical_form(&c), c);
        }
        let dup = Term::new(int(1), vec![act(0, br(br(Beta::Tau, x(1)), br(Beta::Tau, x(1))))], vec![]);
        assert!(canonical_form(&dup).coeff.is_zero());
    }
}
