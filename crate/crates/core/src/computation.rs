//! Computations: an executable core path decorated with size-compatible
//! lists of extension words (D-lists).
//!
//! For a computation `(s0, l0, D0) … (sn, ln, Dn), s(n+1)` the j-th entries of
//! all D-lists are spliced after the matching core labels to form the j-th
//! trace `l0 D0[j] … ln Dn[j]`. With empty D-lists the only trace is the
//! bare core word.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::ComputationError;
use crate::lts::{subwords, Label, Lts, StateId, Word};

/// A finite list of words. Position `j` lines up across all D-lists of one
/// computation.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DList(Vec<Word>);

impl DList {
    pub fn new(words: Vec<Word>) -> Self {
        DList(words)
    }

    pub fn empty() -> Self {
        DList(Vec::new())
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Word> for DList {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        DList(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub state: StateId,
    pub label: Label,
    pub dlist: DList,
}

/// The undecorated path of a computation: `states[i] --labels[i]--> states[i+1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Core {
    states: Vec<StateId>,
    labels: Word,
}

impl Core {
    pub fn new(states: Vec<StateId>, labels: Word) -> Result<Self, ComputationError> {
        if states.len() != labels.len() + 1 {
            return Err(ComputationError::ShapeMismatch {
                states: states.len(),
                labels: labels.len(),
            });
        }
        Ok(Core { states, labels })
    }

    /// The single-state core.
    pub fn trivial(state: StateId) -> Self {
        Core {
            states: vec![state],
            labels: Word::empty(),
        }
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn labels(&self) -> &Word {
        &self.labels
    }

    pub fn first(&self) -> &StateId {
        &self.states[0]
    }

    pub fn last(&self) -> &StateId {
        self.states.last().expect("cores are nonempty")
    }

    pub fn is_trivial(&self) -> bool {
        self.labels.is_empty()
    }

    /// Whether every step of the path is a transition of `lts`.
    pub fn is_path_of(&self, lts: &Lts) -> bool {
        self.states.iter().all(|s| lts.contains_state(s))
            && self
                .labels
                .iter()
                .enumerate()
                .all(|(i, l)| lts.has_transition(&self.states[i], l, &self.states[i + 1]))
    }
}

/// A sequence `(s0, l0, D0) … (sn, ln, Dn), s(n+1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Computation {
    steps: Vec<Step>,
    final_state: StateId,
    truncated: bool,
}

impl Computation {
    pub fn new(steps: Vec<Step>, final_state: StateId) -> Self {
        Computation {
            steps,
            final_state,
            truncated: false,
        }
    }

    /// The computation consisting of the single state `s`.
    pub fn trivial(s: StateId) -> Self {
        Computation::new(Vec::new(), s)
    }

    /// Decorates `core` with one D-list per step.
    pub fn from_core(core: &Core, dlists: Vec<DList>) -> Result<Self, ComputationError> {
        if dlists.len() != core.labels.len() {
            return Err(ComputationError::ShapeMismatch {
                states: core.states.len(),
                labels: dlists.len(),
            });
        }
        let steps = core
            .labels
            .iter()
            .zip(dlists)
            .enumerate()
            .map(|(i, (label, dlist))| Step {
                state: core.states[i].clone(),
                label: label.clone(),
                dlist,
            })
            .collect();
        Ok(Computation::new(steps, core.last().clone()))
    }

    /// Marks that the D-lists stand for longer (possibly infinite) lists cut
    /// at an exploration bound.
    pub fn with_truncation(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn final_state(&self) -> &StateId {
        &self.final_state
    }

    pub fn first_state(&self) -> &StateId {
        self.steps
            .first()
            .map(|s| &s.state)
            .unwrap_or(&self.final_state)
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn label_word(&self) -> Word {
        self.steps.iter().map(|s| s.label.clone()).collect()
    }

    pub fn core(&self) -> Core {
        let mut states: Vec<StateId> = self.steps.iter().map(|s| s.state.clone()).collect();
        states.push(self.final_state.clone());
        Core {
            states,
            labels: self.label_word(),
        }
    }

    pub fn pairs(&self) -> Vec<(Label, DList)> {
        self.steps
            .iter()
            .map(|s| (s.label.clone(), s.dlist.clone()))
            .collect()
    }

    pub fn traces(&self) -> Result<BTreeSet<Word>, ComputationError> {
        traces(&self.pairs())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let core = self.core();
        serde_json::json!({
            "states": core.states,
            "labels": core.labels,
            "dlists": self.steps.iter().map(|s| &s.dlist).collect::<Vec<_>>(),
            "truncated": self.truncated,
        })
    }
}

/// The pairwise extensions of `l0 … ln` by the D-lists: for every position
/// `j` the word `l0 D0[j] … ln Dn[j]`, or just the core word when the lists
/// are empty.
pub fn traces(pairs: &[(Label, DList)]) -> Result<BTreeSet<Word>, ComputationError> {
    let lengths: Vec<usize> = pairs.iter().map(|(_, d)| d.len()).collect();
    if lengths.windows(2).any(|w| w[0] != w[1]) {
        return Err(ComputationError::SizeIncompatible(lengths));
    }
    let core: Word = pairs.iter().map(|(l, _)| l.clone()).collect();
    let width = lengths.first().copied().unwrap_or(0);
    if width == 0 {
        return Ok(BTreeSet::from([core]));
    }
    let mut out = BTreeSet::new();
    for j in 0..width {
        let mut w = Word::empty();
        for (label, dlist) in pairs {
            w.push(label.clone());
            for x in dlist.words()[j].iter() {
                w.push(x.clone());
            }
        }
        out.insert(w);
    }
    Ok(out)
}

/// Why a sequence fails to be a computation of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComputationFailure {
    /// Step `step` is not a transition (or names an unknown state).
    BrokenPath { step: usize },
    SizeIncompatible(Vec<usize>),
    TraceNotExecutable(Word),
}

/// Outcome of [`validate_computation`]: the first violated requirement, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validity {
    pub failure: Option<ComputationFailure>,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks, in order, that the core path follows the transition relation, that
/// the D-lists are size-compatible, and that every trace is executable from
/// the first state.
pub fn validate_computation(lts: &Lts, c: &Computation) -> Validity {
    let fail = |f| Validity { failure: Some(f) };
    let core = c.core();
    if !lts.contains_state(core.first()) {
        return fail(ComputationFailure::BrokenPath { step: 0 });
    }
    for (i, label) in core.labels.iter().enumerate() {
        if !lts.has_transition(&core.states[i], label, &core.states[i + 1]) {
            return fail(ComputationFailure::BrokenPath { step: i });
        }
    }
    let traces = match c.traces() {
        Ok(t) => t,
        Err(ComputationError::SizeIncompatible(lengths)) => {
            return fail(ComputationFailure::SizeIncompatible(lengths))
        }
        Err(e) => unreachable!("traces only reports size errors: {e}"),
    };
    for w in traces {
        let reached = lts.reach(core.first(), &w).expect("state checked above");
        if reached.is_empty() {
            return fail(ComputationFailure::TraceNotExecutable(w));
        }
    }
    Validity { failure: None }
}

/// All paths of `lts` from `from` spelling `w`, as state sequences.
pub fn paths_for_word(lts: &Lts, from: &StateId, w: &Word) -> Vec<Vec<StateId>> {
    let Ok(start) = lts.require(from) else {
        return Vec::new();
    };
    let mut partial: Vec<Vec<usize>> = vec![vec![start]];
    for a in w {
        partial = partial
            .into_iter()
            .flat_map(|p| {
                let last = *p.last().expect("nonempty");
                lts.successors_ix(last)
                    .iter()
                    .filter(|(l, _)| l == a)
                    .map(move |(_, t)| {
                        let mut q = p.clone();
                        q.push(*t);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    partial
        .into_iter()
        .map(|p| p.into_iter().map(|i| lts.state_at(i).clone()).collect())
        .collect()
}

/// Every executable core anchored at `core.first()` whose labels form a
/// sub-word of `core.labels()`, one per distinct state path.
pub fn sub_cores(lts: &Lts, core: &Core) -> BTreeSet<Core> {
    subwords(core.labels())
        .into_iter()
        .flat_map(|w| {
            paths_for_word(lts, core.first(), &w)
                .into_iter()
                .map(move |states| Core {
                    states,
                    labels: w.clone(),
                })
        })
        .collect()
}
