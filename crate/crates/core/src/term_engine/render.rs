//! Text, LaTeX and JSON output for term sums.

use std::fmt::Write;
use std::str::FromStr;

use num_traits::{One, Signed};

use super::{Action, Beta, Expansion, Term};
use crate::error::{Error, Result};
use crate::rational::{to_display_string, to_latex, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

fn sub(i: usize) -> String {
    if i < 10 {
        format!("X_{i}")
    } else {
        format!("X_{{{i}}}")
    }
}

fn beta_text(b: &Beta) -> String {
    match b {
        Beta::Arg(i) => format!("X{i}"),
        Beta::Tau => "τ".into(),
        Beta::Gamma { args } => {
            let (applied, dirs) = args.split_last().expect("nonempty gamma args");
            if dirs.is_empty() {
                format!("Γ·X{applied}")
            } else {
                let d: String = dirs.iter().rev().map(|d| format!("∇_X{d} ")).collect();
                format!("({d}Γ)·X{applied}")
            }
        }
        Beta::Bracket(l, r) => format!("[{},{}]", beta_text(l), beta_text(r)),
    }
}

fn beta_latex(b: &Beta) -> String {
    match b {
        Beta::Arg(i) => sub(*i),
        Beta::Tau => r"\tau".into(),
        Beta::Gamma { args } => {
            let (applied, dirs) = args.split_last().expect("nonempty gamma args");
            if dirs.is_empty() {
                format!(r"\Gamma\cdot {}", sub(*applied))
            } else {
                let d: String = dirs.iter().rev().map(|d| format!(r"\nabla_{{{}}}", sub(*d))).collect();
                format!(r"({d}\Gamma)\cdot {}", sub(*applied))
            }
        }
        Beta::Bracket(l, r) => match (l.as_ref(), r.as_ref()) {
            (Beta::Tau, Beta::Bracket(a, x)) if matches!(a.as_ref(), Beta::Tau) => {
                format!(r"\operatorname{{ad}}^2_\tau {}", beta_latex(x))
            }
            (Beta::Tau, x) => format!(r"\operatorname{{ad}}_\tau {}", beta_latex(x)),
            _ => format!("[{},{}]", beta_latex(l), beta_latex(r)),
        },
    }
}

fn action_text(a: &Action) -> String {
    if a.t == 0 {
        format!("λ({})", beta_text(&a.beta))
    } else {
        format!("λ^({})({})", a.t, beta_text(&a.beta))
    }
}

fn action_latex(a: &Action) -> String {
    if a.t == 0 {
        format!(r"\lambda({})", beta_latex(&a.beta))
    } else {
        format!(r"\lambda^{{({})}}({})", a.t, beta_latex(&a.beta))
    }
}

fn jet_text(slots: &[usize]) -> String {
    let d: String = slots.iter().rev().map(|s| format!("∇_X{s} ")).collect();
    format!("{d}s")
}

fn jet_latex(slots: &[usize]) -> String {
    let d: String = slots.iter().rev().map(|s| format!(r"\nabla_{{{}}}", sub(*s))).collect();
    format!("{d}s")
}

/// One term without its coefficient.
pub fn term_body(t: &Term, latex: bool) -> String {
    if latex {
        let acts: String = t.actions.iter().map(action_latex).collect();
        if acts.is_empty() {
            jet_latex(&t.slots)
        } else {
            format!(r"{acts}\,{}", jet_latex(&t.slots))
        }
    } else {
        let mut parts: Vec<String> = t.actions.iter().map(action_text).collect();
        parts.push(jet_text(&t.slots));
        parts.join(" ∘ ")
    }
}

fn coeff_prefix(c: &Rational, latex: bool, first: bool) -> String {
    let mag = c.abs();
    let sign = if c.is_negative() {
        if first { "-" } else { " - " }
    } else if first {
        ""
    } else {
        " + "
    };
    let body = if mag.is_one() {
        String::new()
    } else if latex {
        to_latex(&mag)
    } else {
        format!("{} ", to_display_string(&mag))
    };
    format!("{sign}{body}")
}

/// Renders a single-line sum of `(coefficient, body)` pairs.
pub fn render_sum(items: &[(Rational, String)], latex: bool) -> String {
    if items.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, body)) in items.iter().enumerate() {
        let _ = write!(out, "{}{}", coeff_prefix(c, latex, i == 0), body);
    }
    out
}

pub fn render(e: &Expansion, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(e).expect("expansion serializes"),
        Format::Text => {
            if e.terms.is_empty() {
                return "0".into();
            }
            e.terms
                .iter()
                .map(|t| render_sum(&[(t.coeff.clone(), term_body(t, false))], false))
                .collect::<Vec<_>>()
                .join("\n")
        }
        Format::Latex => {
            let items: Vec<(Rational, String)> = e.terms.iter().map(|t| (t.coeff.clone(), term_body(t, true))).collect();
            render_sum(&items, true)
        }
    }
}

/// Inverse of `render(_, Format::Json)`; validates every term.
pub fn parse_json(s: &str) -> Result<Expansion> {
    let e: Expansion = serde_json::from_str(s).map_err(|err| Error::Parse(err.to_string()))?;
    for t in &e.terms {
        t.validate(e.order)?;
    }
    Ok(e)
}
