//! Finite labeled transition systems.
//!
//! An [`Lts`] is immutable once built. States are addressed externally by
//! [`StateId`] and internally by dense indices; every query that takes a
//! `StateId` reports [`LtsError::UnknownState`] for ids it does not own.

mod aut;
mod compose;
mod dot;
mod iso;
mod word;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::LtsError;

pub use aut::{parse_aut, to_aut};
pub use compose::{choice, interleave};
pub use dot::emit_dot;
pub use iso::isomorphic;
pub use word::{project_word, subwords, Label, Word};

/// Identifier of a state, unique within its owning [`Lts`].
///
/// Parsed and hand-built systems use [`StateId::Name`]. Composition keeps the
/// structure of the ids it creates: interleaving produces [`StateId::Pair`],
/// choice tags operand states with [`StateId::Left`]/[`StateId::Right`] and
/// adds a fresh [`StateId::ChoiceRoot`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateId {
    Name(String),
    Pair(Box<StateId>, Box<StateId>),
    Left(Box<StateId>),
    Right(Box<StateId>),
    ChoiceRoot,
}

impl StateId {
    pub fn named(name: impl Into<String>) -> Self {
        StateId::Name(name.into())
    }

    pub fn pair(left: StateId, right: StateId) -> Self {
        StateId::Pair(Box::new(left), Box::new(right))
    }

    /// The components of an interleaving state, if this is one.
    pub fn as_pair(&self) -> Option<(&StateId, &StateId)> {
        match self {
            StateId::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateId::Name(n) => f.write_str(n),
            StateId::Pair(l, r) => write!(f, "({l},{r})"),
            StateId::Left(s) => write!(f, "L:{s}"),
            StateId::Right(s) => write!(f, "R:{s}"),
            StateId::ChoiceRoot => f.write_str("+"),
        }
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for StateId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<&str> for StateId {
    fn from(name: &str) -> Self {
        StateId::named(name)
    }
}

/// A transition `(source, label, target)` expressed with state ids.
pub type Transition = (StateId, Label, StateId);

/// A finite labeled transition system `(S, s0, A, →)`.
#[derive(Clone)]
pub struct Lts {
    states: Vec<StateId>,
    index: HashMap<StateId, usize>,
    initial: usize,
    alphabet: BTreeSet<Label>,
    // Sorted and deduplicated.
    transitions: Vec<(usize, Label, usize)>,
    successors: Vec<Vec<(Label, usize)>>,
}

impl Lts {
    /// Builds a transition system, checking that the initial state and every
    /// transition endpoint are states and that every transition label is in
    /// the alphabet.
    pub fn new(
        states: impl IntoIterator<Item = StateId>,
        initial: StateId,
        alphabet: impl IntoIterator<Item = Label>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, LtsError> {
        let states: Vec<StateId> = states.into_iter().collect();
        let mut index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(LtsError::DuplicateState(s.clone()));
            }
        }
        let initial = *index
            .get(&initial)
            .ok_or_else(|| LtsError::UnknownState(initial.clone()))?;
        let alphabet: BTreeSet<Label> = alphabet.into_iter().collect();
        let mut edges = Vec::new();
        for (src, label, dst) in transitions {
            let s = *index.get(&src).ok_or(LtsError::UnknownState(src))?;
            let d = *index.get(&dst).ok_or(LtsError::UnknownState(dst))?;
            if !alphabet.contains(&label) {
                return Err(LtsError::LabelOutsideAlphabet(label.name().to_string()));
            }
            edges.push((s, label, d));
        }
        Ok(Self::from_indexed(states, index, initial, alphabet, edges))
    }

    fn from_indexed(
        states: Vec<StateId>,
        index: HashMap<StateId, usize>,
        initial: usize,
        alphabet: BTreeSet<Label>,
        mut transitions: Vec<(usize, Label, usize)>,
    ) -> Self {
        transitions.sort();
        transitions.dedup();
        let mut successors = vec![Vec::new(); states.len()];
        for (s, l, d) in &transitions {
            successors[*s].push((l.clone(), *d));
        }
        Lts {
            states,
            index,
            initial,
            alphabet,
            transitions,
            successors,
        }
    }

    pub fn initial(&self) -> &StateId {
        &self.states[self.initial]
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn alphabet(&self) -> &BTreeSet<Label> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn contains_state(&self, s: &StateId) -> bool {
        self.index.contains_key(s)
    }

    /// Transitions in a deterministic order.
    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.transitions
            .iter()
            .map(|(s, l, d)| (self.states[*s].clone(), l.clone(), self.states[*d].clone()))
    }

    pub fn has_transition(&self, src: &StateId, label: &Label, dst: &StateId) -> bool {
        match (self.index.get(src), self.index.get(dst)) {
            (Some(&s), Some(&d)) => self.successors[s]
                .iter()
                .any(|(l, t)| *t == d && l == label),
            _ => false,
        }
    }

    /// The outgoing transitions of `s` as `(label, target)` pairs.
    pub fn successors(&self, s: &StateId) -> Result<Vec<(Label, StateId)>, LtsError> {
        let i = self.require(s)?;
        Ok(self.successors[i]
            .iter()
            .map(|(l, d)| (l.clone(), self.states[*d].clone()))
            .collect())
    }

    /// `{ s' | from ⇒w s' }`; empty iff `w` is not executable from `from`.
    pub fn reach(&self, from: &StateId, w: &Word) -> Result<BTreeSet<StateId>, LtsError> {
        let start = self.require(from)?;
        Ok(self
            .reach_ix(&[start], w.labels())
            .into_iter()
            .map(|i| self.states[i].clone())
            .collect())
    }

    /// Actions enabled as a first step from `s`.
    pub fn init_actions(&self, s: &StateId) -> Result<BTreeSet<Label>, LtsError> {
        let i = self.require(s)?;
        Ok(self.successors[i].iter().map(|(l, _)| l.clone()).collect())
    }

    /// All states reachable from the initial state, in breadth-first order.
    pub fn reachable_states(&self) -> Vec<StateId> {
        self.reachable_ix()
            .into_iter()
            .map(|i| self.states[i].clone())
            .collect()
    }

    /// The reachable part of this system, with the same alphabet.
    pub fn reachable_part(&self) -> Lts {
        let keep = self.reachable_ix();
        if keep.len() == self.states.len() {
            return self.clone();
        }
        let alive: BTreeSet<usize> = keep.iter().copied().collect();
        let states: Vec<StateId> = keep.iter().map(|&i| self.states[i].clone()).collect();
        let transitions: Vec<Transition> = self
            .transitions
            .iter()
            .filter(|(s, _, _)| alive.contains(s))
            .map(|(s, l, d)| (self.states[*s].clone(), l.clone(), self.states[*d].clone()))
            .collect();
        Lts::new(states, self.initial().clone(), self.alphabet.clone(), transitions)
            .expect("restriction of a valid system is valid")
    }

    /// Whether the reachable part contains no cycle.
    pub fn is_acyclic(&self) -> bool {
        self.longest_path().is_some()
    }

    /// Length of the longest path from the initial state, or `None` when a
    /// cycle is reachable.
    pub fn longest_path(&self) -> Option<usize> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.states.len()];
        let mut depth = vec![0usize; self.states.len()];
        let mut stack = vec![(self.initial, 0usize)];
        mark[self.initial] = 1;
        while let Some(top) = stack.last_mut() {
            let (s, next) = *top;
            if next < self.successors[s].len() {
                top.1 += 1;
                let t = self.successors[s][next].1;
                match mark[t] {
                    0 => {
                        mark[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return None,
                    _ => {}
                }
            } else {
                depth[s] = self.successors[s]
                    .iter()
                    .map(|(_, t)| depth[*t] + 1)
                    .max()
                    .unwrap_or(0);
                mark[s] = 2;
                stack.pop();
            }
        }
        Some(depth[self.initial])
    }

    /// Copy of this system with a different alphabet. The new alphabet must
    /// still cover every transition label.
    pub fn with_alphabet(&self, alphabet: BTreeSet<Label>) -> Result<Lts, LtsError> {
        Lts::new(
            self.states.clone(),
            self.initial().clone(),
            alphabet,
            self.transitions(),
        )
    }

    /// Copy of this system with every state renamed through `rename`.
    pub fn rename_states(&self, mut rename: impl FnMut(&StateId) -> StateId) -> Result<Lts, LtsError> {
        let map: BTreeMap<StateId, StateId> =
            self.states.iter().map(|s| (s.clone(), rename(s))).collect();
        Lts::new(
            self.states.iter().map(|s| map[s].clone()),
            map[self.initial()].clone(),
            self.alphabet.clone(),
            self.transitions()
                .map(|(s, l, d)| (map[&s].clone(), l, map[&d].clone())),
        )
    }

    pub(crate) fn require(&self, s: &StateId) -> Result<usize, LtsError> {
        self.index
            .get(s)
            .copied()
            .ok_or_else(|| LtsError::UnknownState(s.clone()))
    }

    pub(crate) fn initial_ix(&self) -> usize {
        self.initial
    }

    pub(crate) fn state_at(&self, i: usize) -> &StateId {
        &self.states[i]
    }

    pub(crate) fn successors_ix(&self, i: usize) -> &[(Label, usize)] {
        &self.successors[i]
    }

    pub(crate) fn transitions_ix(&self) -> &[(usize, Label, usize)] {
        &self.transitions
    }

    pub(crate) fn reach_ix(&self, from: &[usize], w: &[Label]) -> BTreeSet<usize> {
        let mut current: BTreeSet<usize> = from.iter().copied().collect();
        for a in w {
            current = current
                .iter()
                .flat_map(|&s| {
                    self.successors[s]
                        .iter()
                        .filter(move |(l, _)| l == a)
                        .map(|(_, t)| *t)
                })
                .collect();
            if current.is_empty() {
                break;
            }
        }
        current
    }

    pub(crate) fn reachable_ix(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for (_, t) in &self.successors[s] {
                if !seen[*t] {
                    seen[*t] = true;
                    queue.push_back(*t);
                }
            }
        }
        order
    }
}

impl PartialEq for Lts {
    /// Literal equality: same state ids, initial state, alphabet and
    /// transition set.
    fn eq(&self, other: &Self) -> bool {
        let mine: BTreeSet<&StateId> = self.states.iter().collect();
        let theirs: BTreeSet<&StateId> = other.states.iter().collect();
        mine == theirs
            && self.initial() == other.initial()
            && self.alphabet == other.alphabet
            && self.transitions().collect::<BTreeSet<_>>()
                == other.transitions().collect::<BTreeSet<_>>()
    }
}

impl Eq for Lts {}

impl fmt::Debug for Lts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Lts(initial {}, {} states)", self.initial(), self.states.len())?;
        for (s, l, d) in self.transitions() {
            writeln!(f, "  {s} -{l}-> {d}")?;
        }
        Ok(())
    }
}

/// Incremental construction of an [`Lts`] from named states. States are
/// created on first mention; the alphabet is the set of transition labels plus
/// anything added with [`LtsBuilder::label`].
#[derive(Debug, Clone)]
pub struct LtsBuilder {
    initial: StateId,
    states: Vec<StateId>,
    alphabet: BTreeSet<Label>,
    transitions: Vec<Transition>,
}

impl LtsBuilder {
    pub fn new(initial: impl Into<StateId>) -> Self {
        let initial = initial.into();
        LtsBuilder {
            states: vec![initial.clone()],
            initial,
            alphabet: BTreeSet::new(),
            transitions: Vec::new(),
        }
    }

    pub fn state(mut self, s: impl Into<StateId>) -> Self {
        let s = s.into();
        if !self.states.contains(&s) {
            self.states.push(s);
        }
        self
    }

    /// Adds `src --label--> dst`.
    ///
    /// # Panics
    /// Panics if `label` is not a valid label name.
    pub fn edge(mut self, src: impl Into<StateId>, label: &str, dst: impl Into<StateId>) -> Self {
        let label = Label::new(label).expect("valid label");
        let (src, dst) = (src.into(), dst.into());
        self = self.state(src.clone()).state(dst.clone());
        self.alphabet.insert(label.clone());
        self.transitions.push((src, label, dst));
        self
    }

    /// Declares a label that need not occur on any transition.
    pub fn label(mut self, label: &str) -> Self {
        self.alphabet.insert(Label::new(label).expect("valid label"));
        self
    }

    pub fn build(self) -> Lts {
        Lts::new(self.states, self.initial, self.alphabet, self.transitions)
            .expect("builder output is well-formed")
    }
}
