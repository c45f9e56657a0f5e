//! Hennessy-Milner logic: syntax, satisfaction and immediate effects.

mod parser;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::LtsError;
use crate::lts::{Label, Lts, StateId};

pub use parser::parse_formula;

/// An HML formula. There is no falsity constructor; `ff` is `Not(Top)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Diamond(Label, Box<Formula>),
    Box(Label, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn diamond(label: Label, body: Formula) -> Self {
        Formula::Diamond(label, Box::new(body))
    }

    pub fn boxed(label: Label, body: Formula) -> Self {
        Formula::Box(label, Box::new(body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Self {
        Formula::Not(Box::new(body))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top => 0,
            Formula::Diamond(_, f) | Formula::Box(_, f) | Formula::Not(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::Top => f.write_str("tt"),
            Formula::Not(body) if **body == Formula::Top => f.write_str("ff"),
            Formula::Not(body) => {
                f.write_str("!")?;
                body.write_at(f, 3)
            }
            Formula::Diamond(a, body) => {
                write!(f, "<{a}>")?;
                body.write_at(f, 3)
            }
            Formula::Box(a, body) => {
                write!(f, "[{a}]")?;
                body.write_at(f, 3)
            }
            Formula::And(l, r) => {
                l.write_at(f, 2)?;
                f.write_str(" & ")?;
                r.write_at(f, 3)
            }
            Formula::Or(l, r) => {
                l.write_at(f, 1)?;
                f.write_str(" | ")?;
                r.write_at(f, 2)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The labels occurring in modalities of `f`.
pub fn formula_alphabet(f: &Formula) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    collect_labels(f, &mut out);
    out
}

fn collect_labels(f: &Formula, out: &mut BTreeSet<Label>) {
    match f {
        Formula::Top => {}
        Formula::Diamond(a, body) | Formula::Box(a, body) => {
            out.insert(a.clone());
            collect_labels(body, out);
        }
        Formula::Not(body) => collect_labels(body, out),
        Formula::And(l, r) | Formula::Or(l, r) => {
            collect_labels(l, out);
            collect_labels(r, out);
        }
    }
}

/// `s ⊨ f`, evaluated by recursion on the formula.
pub fn satisfies(lts: &Lts, s: &StateId, f: &Formula) -> Result<bool, LtsError> {
    let i = lts.require(s)?;
    Ok(holds_at(lts, i, f))
}

fn holds_at(lts: &Lts, s: usize, f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::Not(body) => !holds_at(lts, s, body),
        Formula::And(l, r) => holds_at(lts, s, l) && holds_at(lts, s, r),
        Formula::Or(l, r) => holds_at(lts, s, l) || holds_at(lts, s, r),
        Formula::Diamond(a, body) => lts
            .successors_ix(s)
            .iter()
            .any(|(l, t)| l == a && holds_at(lts, *t, body)),
        Formula::Box(a, body) => lts
            .successors_ix(s)
            .iter()
            .all(|(l, t)| l != a || holds_at(lts, *t, body)),
    }
}

/// Truth value of `f` at every state, indexed like the system's states.
/// Computed bottom-up over subformulas.
pub(crate) fn truth_table(lts: &Lts, f: &Formula) -> Vec<bool> {
    let n = lts.state_count();
    match f {
        Formula::Top => vec![true; n],
        Formula::Not(body) => truth_table(lts, body).into_iter().map(|b| !b).collect(),
        Formula::And(l, r) => zip_with(truth_table(lts, l), truth_table(lts, r), |x, y| x && y),
        Formula::Or(l, r) => zip_with(truth_table(lts, l), truth_table(lts, r), |x, y| x || y),
        Formula::Diamond(a, body) => {
            let inner = truth_table(lts, body);
            (0..n)
                .map(|s| {
                    lts.successors_ix(s)
                        .iter()
                        .any(|(l, t)| l == a && inner[*t])
                })
                .collect()
        }
        Formula::Box(a, body) => {
            let inner = truth_table(lts, body);
            (0..n)
                .map(|s| {
                    lts.successors_ix(s)
                        .iter()
                        .all(|(l, t)| l != a || inner[*t])
                })
                .collect()
        }
    }
}

fn zip_with(x: Vec<bool>, y: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    x.into_iter().zip(y).map(|(a, b)| op(a, b)).collect()
}

/// An effect formula bound to the transition system it is evaluated on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectContext {
    lts: Lts,
    formula: Formula,
}

impl EffectContext {
    /// Fails when the formula mentions a label outside the system's alphabet.
    pub fn new(lts: Lts, formula: Formula) -> Result<Self, LtsError> {
        if let Some(missing) = formula_alphabet(&formula)
            .iter()
            .find(|l| !lts.alphabet().contains(*l))
        {
            return Err(LtsError::FormulaOutsideAlphabet(missing.to_string()));
        }
        Ok(EffectContext { lts, formula })
    }

    pub fn lts(&self) -> &Lts {
        &self.lts
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }
}

/// Whether the effect already holds at the initial state.
pub fn is_immediate_effect(ctx: &EffectContext) -> bool {
    holds_at(&ctx.lts, ctx.lts.initial_ix(), &ctx.formula)
}
