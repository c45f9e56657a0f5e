//! Bounded computation of actual causes and causal projections.
//!
//! A computation `π` with core `l0 … ln` is a cause of the effect `φ` when
//!
//! * **AC1** its path ends in a `φ`-state,
//! * **AC2(a)** some reachable state violates `φ`,
//! * **AC2(b)** every word `l0 χ0 … ln χn` outside `traces(π)`, and the core
//!   word itself, only reaches `φ`-states,
//! * **AC2(c)** every trace other than the core word only reaches `¬φ`-states,
//! * **AC3** no sub-computation satisfies the four conditions above.
//!
//! Quantifiers over extension words range over executable words whose gaps
//! `χi` have length at most the exploration bound `k`. Non-executable words
//! satisfy the implications vacuously, so the bound is the only source of
//! approximation; it is exact on acyclic systems once `k` reaches the longest
//! path.
//!
//! Since the D-lists are free, a core admits D-lists satisfying AC2(b) and
//! AC2(c) exactly when no extension word is [`Classification::Mixed`]; the
//! canonical choice puts every always-violating extension into the D-lists.

mod engine;
mod oracle;

use std::collections::BTreeSet;
use std::fmt;

use serde_json::json;

use crate::computation::{paths_for_word, Computation, Core};
use crate::hml::{is_immediate_effect, EffectContext};
use crate::lts::{Lts, LtsBuilder, StateId, Word};

use engine::{Engine, WordVerdict};

pub use oracle::{oracle_check_cause, oracle_core_is_cause};

/// How the states reached by a word relate to the effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    AllSatisfy,
    AllViolate,
    Mixed,
    NotExecutable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exactness {
    /// Acyclic system and a bound covering its longest path.
    Exact,
    BoundedApprox,
}

impl Exactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exactness::Exact => "exact",
            Exactness::BoundedApprox => "bounded",
        }
    }
}

/// Exact iff the reachable part of `lts` is acyclic and `bound` covers its
/// longest path. [`causes`] may also report exactness for smaller bounds when
/// its search provably ran out of candidates.
pub fn exactness_of(lts: &Lts, bound: usize) -> Exactness {
    match lts.longest_path() {
        Some(longest) if bound >= longest => Exactness::Exact,
        _ => Exactness::BoundedApprox,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    Ac1,
    Ac2a,
    Ac2b,
    Ac2c,
    Ac3,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Ac1 => "AC1",
            Condition::Ac2a => "AC2(a)",
            Condition::Ac2b => "AC2(b)",
            Condition::Ac2c => "AC2(c)",
            Condition::Ac3 => "AC3",
        })
    }
}

/// Per-condition verdicts. `ac3` is `None` when minimality was not judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Conditions {
    pub ac1: bool,
    pub ac2a: bool,
    pub ac2b: bool,
    pub ac2c: bool,
    pub ac3: Option<bool>,
}

impl Conditions {
    fn all_true() -> Self {
        Conditions {
            ac1: true,
            ac2a: true,
            ac2b: true,
            ac2c: true,
            ac3: Some(true),
        }
    }

    pub fn first_failure(&self) -> Option<Condition> {
        [
            (self.ac1, Condition::Ac1),
            (self.ac2a, Condition::Ac2a),
            (self.ac2b, Condition::Ac2b),
            (self.ac2c, Condition::Ac2c),
            (self.ac3 != Some(false), Condition::Ac3),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, c)| c)
    }

    /// AC1 through AC2(c) hold.
    pub fn satisfiable(&self) -> bool {
        self.ac1 && self.ac2a && self.ac2b && self.ac2c
    }

    pub fn holds(&self) -> bool {
        self.satisfiable() && self.ac3 == Some(true)
    }
}

/// A computation accepted as a cause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CauseReport {
    pub computation: Computation,
    /// `traces(computation)` without the core word.
    pub kill_traces: BTreeSet<Word>,
    pub bound: usize,
    pub conditions: Conditions,
}

impl CauseReport {
    pub fn core(&self) -> Core {
        self.computation.core()
    }

    pub fn core_word(&self) -> Word {
        self.computation.label_word()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let core = self.core();
        json!({
            "core": { "states": core.states(), "labels": core.labels() },
            "kill_traces": self.kill_traces,
            "dlists": self.computation.steps().iter().map(|s| &s.dlist).collect::<Vec<_>>(),
        })
    }
}

/// The outcome of [`causes`].
#[derive(Debug, Clone)]
pub struct CauseSet {
    /// Sorted by core word, then by state path.
    pub causes: Vec<CauseReport>,
    pub effect: EffectContext,
    pub bound: usize,
    pub exactness: Exactness,
    /// The effect holds at the initial state, so the set is either the
    /// trivial computation or empty.
    pub immediate: bool,
}

impl CauseSet {
    pub fn is_empty(&self) -> bool {
        self.causes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.causes.len()
    }

    pub fn core_words(&self) -> BTreeSet<Word> {
        self.causes.iter().map(CauseReport::core_word).collect()
    }

    /// The sub-system made of the states and steps of every causal core. The
    /// initial state is always kept and the alphabet is the full one.
    pub fn projection(&self) -> Lts {
        let lts = self.effect.lts();
        let mut builder = LtsBuilder::new(lts.initial().clone());
        for cause in &self.causes {
            let core = cause.core();
            for s in core.states() {
                builder = builder.state(s.clone());
            }
            for (i, l) in core.labels().iter().enumerate() {
                builder = builder.edge(core.states()[i].clone(), l.name(), core.states()[i + 1].clone());
            }
        }
        builder
            .build()
            .with_alphabet(lts.alphabet().clone())
            .expect("projection labels come from the system")
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "effect": self.effect.formula().to_string(),
            "bound": self.bound,
            "exactness": self.exactness.as_str(),
            "policy": if self.immediate { "immediate" } else { "standard" },
            "causes": self.causes.iter().map(CauseReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Classifies the states reached from the initial state by `w`.
pub fn classify_word(ctx: &EffectContext, w: &Word) -> Classification {
    Engine::new(ctx).classify_word(w)
}

/// Every executable word `l0 χ0 … ln χn` with `|χi| <= bound`, the bare core
/// word included.
pub fn extension_universe(lts: &Lts, core: &Core, bound: usize) -> BTreeSet<Word> {
    let ctx = EffectContext::new(lts.clone(), crate::hml::Formula::Top)
        .expect("tt mentions no labels");
    let engine = Engine::new(&ctx);
    engine
        .universe(&engine.intern(core.labels()), bound)
        .into_iter()
        .map(|(w, _)| engine.word(&w))
        .collect()
}

/// Result of testing one core against AC1 through AC2(c).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateOutcome {
    pub conditions: Conditions,
    /// The canonical computation when AC1 through AC2(c) hold.
    pub computation: Option<Computation>,
    pub kill_traces: BTreeSet<Word>,
    /// An extension word whose outcome is mixed, when that is what failed.
    pub mixed_witness: Option<Word>,
}

/// Tests `core` against AC1 through AC2(c) and, when they hold, builds the
/// canonical computation. Minimality is not judged here (`ac3` is `None`).
pub fn cause_candidate(ctx: &EffectContext, core: &Core, bound: usize) -> CandidateOutcome {
    let engine = Engine::new(ctx);
    engine.candidate(core, bound)
}

/// Full verdict for one core, minimality included.
pub fn judge_core(ctx: &EffectContext, core: &Core, bound: usize) -> Conditions {
    let engine = Engine::new(ctx);
    let mut conditions = engine.candidate(core, bound).conditions;
    if core.is_trivial() {
        conditions.ac3 = Some(true);
        return conditions;
    }
    let minimal = crate::computation::sub_cores(ctx.lts(), core)
        .iter()
        .all(|sub| !engine.candidate(sub, bound).conditions.satisfiable());
    conditions.ac3 = Some(minimal);
    conditions
}

/// Judges a given computation, D-lists included, against every condition.
pub fn check_computation(ctx: &EffectContext, c: &Computation, bound: usize) -> Conditions {
    let lts = ctx.lts();
    let engine = Engine::new(ctx);
    let core = c.core();
    let core_word = c.label_word();
    let valid = c.first_state() == lts.initial()
        && crate::computation::validate_computation(lts, c).is_valid();
    let traces = c.traces().unwrap_or_default();
    let universe = engine.universe(&engine.intern(&core_word), bound);
    let ac1 = valid && engine.classify_word(&core_word) != Classification::NotExecutable
        && crate::hml::satisfies(lts, c.final_state(), ctx.formula()).unwrap_or(false);
    let ac2b = valid
        && universe.iter().all(|(w, class)| {
            let w = engine.word(w);
            (w != core_word && traces.contains(&w)) || *class != Classification::AllViolate && *class != Classification::Mixed
        });
    let ac2c = valid
        && traces
            .iter()
            .filter(|t| **t != core_word)
            .all(|t| matches!(engine.classify_word(t), Classification::AllViolate | Classification::NotExecutable));
    let minimal = core.is_trivial()
        || crate::computation::sub_cores(lts, &core)
            .iter()
            .all(|sub| !engine.candidate(sub, bound).conditions.satisfiable());
    Conditions {
        ac1,
        ac2a: engine.violation_reachable(),
        ac2b,
        ac2c,
        ac3: Some(minimal),
    }
}

/// All causes of the effect whose cores have length at most `bound`.
///
/// When the effect already holds initially the answer is the trivial
/// computation if some reachable state violates the effect, and empty
/// otherwise.
pub fn causes(ctx: &EffectContext, bound: usize) -> CauseSet {
    let lts = ctx.lts();
    let engine = Engine::new(ctx);
    let mut set = CauseSet {
        causes: Vec::new(),
        effect: ctx.clone(),
        bound,
        exactness: exactness_of(lts, bound),
        immediate: is_immediate_effect(ctx),
    };

    if set.immediate {
        if engine.violation_reachable() {
            set.causes.push(CauseReport {
                computation: Computation::trivial(lts.initial().clone()),
                kill_traces: BTreeSet::new(),
                bound,
                conditions: Conditions::all_true(),
            });
        }
        return set;
    }

    let (passing, exhausted) = engine.minimal_passing_words(bound);
    // Gaps in an acyclic system are shorter than its longest path, so the
    // universes are complete; an exhausted search leaves no longer core.
    if exhausted && lts.longest_path().is_some_and(|longest| bound + 1 >= longest) {
        set.exactness = Exactness::Exact;
    }
    let exactness = set.exactness;
    for WordVerdict { word, kills } in passing {
        let word = engine.word(&word);
        for states in paths_for_word(lts, lts.initial(), &word) {
            let core = Core::new(states, word.clone()).expect("path matches word");
            let computation = engine
                .computation_for(&core, &kills)
                .with_truncation(exactness == Exactness::BoundedApprox);
            set.causes.push(CauseReport {
                computation,
                kill_traces: kills.iter().map(|k| engine.word(k)).collect(),
                bound,
                conditions: Conditions::all_true(),
            });
        }
    }
    set.causes.sort_by_key(|c| (c.core_word(), c.core()));
    set
}

/// The causal projection `T ↓ φ` at the given bound.
pub fn causal_projection(ctx: &EffectContext, bound: usize) -> Lts {
    causes(ctx, bound).projection()
}

/// Default exploration bound: the number of states.
pub fn default_bound(lts: &Lts) -> usize {
    lts.state_count()
}

impl fmt::Display for CauseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut kills: Vec<&Word> = self.kill_traces.iter().collect();
        kills.sort_by_key(|w| w.len());
        let kills: Vec<String> = kills.into_iter().map(Word::to_string).collect();
        let path: Vec<String> = self.core().states().iter().map(StateId::to_string).collect();
        write!(
            f,
            "core: {} | kills: {} | path: {}",
            self.core_word(),
            if kills.is_empty() { "-".to_string() } else { kills.join(", ") },
            path.join(" -> ")
        )
    }
}

#[cfg(test)]
mod tests;
