//! A deliberately naive checker for single causes, used to cross-examine the
//! search in [`super::causes`]. It enumerates executable words one label at a
//! time, re-evaluates the effect with the recursive satisfaction relation and
//! checks the D-lists it is given literally.

use std::collections::BTreeSet;

use crate::computation::{paths_for_word, validate_computation, Computation, Core};
use crate::hml::{satisfies, EffectContext};
use crate::lts::{subwords, Label, Word};

struct Outcome {
    some_good: bool,
    some_bad: bool,
}

struct Naive<'a> {
    ctx: &'a EffectContext,
    bound: usize,
    /// Executable words from the initial state, with what they reach.
    words: Vec<(Word, Outcome)>,
}

impl<'a> Naive<'a> {
    fn new(ctx: &'a EffectContext, bound: usize, max_len: usize) -> Self {
        let lts = ctx.lts();
        let mut words = Vec::new();
        let mut layer = vec![Word::empty()];
        for _ in 0..=max_len {
            let mut next = Vec::new();
            for w in layer {
                let Some(outcome) = Self::outcome(ctx, &w) else { continue };
                words.push((w.clone(), outcome));
                for l in lts.alphabet() {
                    let mut longer = w.clone();
                    longer.push(l.clone());
                    next.push(longer);
                }
            }
            layer = next;
        }
        Naive { ctx, bound, words }
    }

    fn outcome(ctx: &EffectContext, w: &Word) -> Option<Outcome> {
        let lts = ctx.lts();
        let reached = lts.reach(lts.initial(), w).expect("initial state exists");
        if reached.is_empty() {
            return None;
        }
        let verdicts: Vec<bool> = reached
            .iter()
            .map(|s| satisfies(lts, s, ctx.formula()).expect("reached state exists"))
            .collect();
        Some(Outcome {
            some_good: verdicts.iter().any(|v| *v),
            some_bad: verdicts.iter().any(|v| !*v),
        })
    }

    fn holds(&self, s: &crate::lts::StateId) -> bool {
        satisfies(self.ctx.lts(), s, self.ctx.formula()).expect("state exists")
    }

    fn violation_reachable(&self) -> bool {
        self.ctx.lts().reachable_states().iter().any(|s| !self.holds(s))
    }

    fn shaped<'w>(&'w self, core: &'w Word) -> impl Iterator<Item = &'w (Word, Outcome)> + 'w {
        self.words
            .iter()
            .filter(move |(w, _)| has_shape(w.labels(), core.labels(), self.bound))
    }

    /// Some choice of D-lists over this path satisfies AC1 through AC2(c).
    fn satisfiable(&self, path: &[crate::lts::StateId], word: &Word) -> bool {
        let lts = self.ctx.lts();
        if path.first() != Some(lts.initial()) || !self.holds(path.last().expect("nonempty")) {
            return false;
        }
        if !self.violation_reachable() {
            return false;
        }
        let core_ok = Self::outcome(self.ctx, word).is_some_and(|o| !o.some_bad);
        core_ok && self.shaped(word).all(|(_, o)| !(o.some_good && o.some_bad))
    }

    fn minimal(&self, core: &Core) -> bool {
        let lts = self.ctx.lts();
        subwords(core.labels()).iter().all(|u| {
            paths_for_word(lts, lts.initial(), u)
                .iter()
                .all(|p| !self.satisfiable(p, u))
        })
    }
}

/// Whether `w = l0 χ0 … ln χn` with `core = l0 … ln` and `|χi| <= bound`.
fn has_shape(w: &[Label], core: &[Label], bound: usize) -> bool {
    fn rest(w: &[Label], core: &[Label], bound: usize) -> bool {
        // `w` follows a matched core letter: a gap, then the remaining core.
        (0..=bound.min(w.len())).any(|gap| {
            let tail = &w[gap..];
            match core.split_first() {
                None => tail.is_empty(),
                Some((c, more)) => tail.first() == Some(c) && rest(&tail[1..], more, bound),
            }
        })
    }
    match core.split_first() {
        None => w.is_empty(),
        Some((c, more)) => w.first() == Some(c) && rest(&w[1..], more, bound),
    }
}

fn longest_shape(core_len: usize, bound: usize) -> usize {
    core_len.saturating_mul(bound.saturating_add(1))
}

/// Checks a given computation, D-lists included, against every condition.
pub fn oracle_check_cause(ctx: &EffectContext, c: &Computation, bound: usize) -> bool {
    let lts = ctx.lts();
    if c.first_state() != lts.initial() || !validate_computation(lts, c).is_valid() {
        return false;
    }
    let core = c.label_word();
    let naive = Naive::new(ctx, bound, longest_shape(core.len(), bound));
    if !naive.holds(c.final_state()) || !naive.violation_reachable() {
        return false;
    }
    let traces: BTreeSet<Word> = c.traces().expect("validated");
    let outside_ok = naive
        .shaped(&core)
        .filter(|(w, _)| *w == core || !traces.contains(w))
        .all(|(_, o)| !o.some_bad);
    let kills_ok = traces
        .iter()
        .filter(|t| **t != core)
        .all(|t| Naive::outcome(ctx, t).is_none_or(|o| !o.some_good));
    outside_ok && kills_ok && naive.minimal(&c.core())
}

/// Whether some choice of D-lists turns `core` into a cause.
pub fn oracle_core_is_cause(ctx: &EffectContext, core: &Core, bound: usize) -> bool {
    if !core.is_path_of(ctx.lts()) {
        return false;
    }
    let naive = Naive::new(ctx, bound, longest_shape(core.labels().len(), bound));
    naive.satisfiable(core.states(), core.labels()) && naive.minimal(core)
}
