//! Word-level search behind [`super::causes`].
//!
//! Labels are interned as indices into the sorted alphabet, so comparing
//! interned words agrees with comparing [`Word`]s.

use std::collections::BTreeSet;

use super::{CandidateOutcome, Classification, Conditions};
use crate::computation::{Computation, Core, DList};
use crate::hml::{truth_table, EffectContext};
use crate::lts::{Label, Lts, Word};

pub(super) type Letters = Vec<u32>;

pub(super) struct WordVerdict {
    pub word: Letters,
    /// Always-violating extension words, sorted.
    pub kills: Vec<Letters>,
}

pub(super) struct Engine<'a> {
    lts: &'a Lts,
    labels: Vec<Label>,
    succ: Vec<Vec<(u32, usize)>>,
    sat: Vec<bool>,
    violation_reachable: bool,
}

impl<'a> Engine<'a> {
    pub fn new(ctx: &'a EffectContext) -> Self {
        let lts = ctx.lts();
        let labels: Vec<Label> = lts.alphabet().iter().cloned().collect();
        let index = |l: &Label| labels.binary_search(l).expect("label in alphabet") as u32;
        let succ = (0..lts.state_count())
            .map(|s| {
                let mut out: Vec<(u32, usize)> =
                    lts.successors_ix(s).iter().map(|(l, t)| (index(l), *t)).collect();
                out.sort_unstable();
                out
            })
            .collect();
        let sat = truth_table(lts, ctx.formula());
        let violation_reachable = lts.reachable_ix().into_iter().any(|s| !sat[s]);
        Engine {
            lts,
            labels,
            succ,
            sat,
            violation_reachable,
        }
    }

    pub fn violation_reachable(&self) -> bool {
        self.violation_reachable
    }

    pub fn intern(&self, w: &Word) -> Option<Letters> {
        w.iter()
            .map(|l| self.labels.binary_search(l).ok().map(|i| i as u32))
            .collect()
    }

    pub fn word(&self, letters: &[u32]) -> Word {
        letters.iter().map(|&i| self.labels[i as usize].clone()).collect()
    }

    fn step(&self, set: &[usize], a: u32) -> Vec<usize> {
        let mut out: Vec<usize> = set
            .iter()
            .flat_map(|&s| {
                let row = &self.succ[s];
                let from = row.partition_point(|(l, _)| *l < a);
                row[from..].iter().take_while(move |(l, _)| *l == a).map(|(_, t)| *t)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn enabled(&self, set: &[usize]) -> BTreeSet<u32> {
        set.iter().flat_map(|&s| self.succ[s].iter().map(|(l, _)| *l)).collect()
    }

    fn classify(&self, set: &[usize]) -> Classification {
        if set.is_empty() {
            return Classification::NotExecutable;
        }
        let good = set.iter().filter(|&&s| self.sat[s]).count();
        if good == set.len() {
            Classification::AllSatisfy
        } else if good == 0 {
            Classification::AllViolate
        } else {
            Classification::Mixed
        }
    }

    fn reach(&self, letters: &[u32]) -> Vec<usize> {
        let mut set = vec![self.lts.initial_ix()];
        for &a in letters {
            set = self.step(&set, a);
            if set.is_empty() {
                break;
            }
        }
        set
    }

    pub fn classify_word(&self, w: &Word) -> Classification {
        match self.intern(w) {
            Some(letters) => self.classify(&self.reach(&letters)),
            None => Classification::NotExecutable,
        }
    }

    /// Visits every executable word `l0 χ0 … ln χn` with `|χi| <= bound`
    /// exactly once, stopping early when `visit` returns false.
    fn scan_universe(
        &self,
        core: &[u32],
        bound: usize,
        visit: &mut dyn FnMut(&[u32], Classification) -> bool,
    ) {
        let start = vec![self.lts.initial_ix()];
        if core.is_empty() {
            visit(&[], self.classify(&start));
            return;
        }
        let first = self.step(&start, core[0]);
        if first.is_empty() {
            return;
        }
        let mut word = vec![core[0]];
        self.extend(core, bound, &mut word, &first, &[(1, 0)], visit);
    }

    /// `progress` holds every (matched core letters, current gap) pair
    /// consistent with `word`. Returns false once the scan was stopped.
    fn extend(
        &self,
        core: &[u32],
        bound: usize,
        word: &mut Letters,
        set: &[usize],
        progress: &[(usize, usize)],
        visit: &mut dyn FnMut(&[u32], Classification) -> bool,
    ) -> bool {
        if progress.iter().any(|&(i, _)| i == core.len()) && !visit(word, self.classify(set)) {
            return false;
        }
        for a in self.enabled(set) {
            let mut next: Vec<(usize, usize)> = Vec::new();
            for &(i, g) in progress {
                if i < core.len() && core[i] == a {
                    next.push((i + 1, 0));
                }
                if g < bound {
                    next.push((i, g + 1));
                }
            }
            if next.is_empty() {
                continue;
            }
            next.sort_unstable();
            next.dedup();
            let after = self.step(set, a);
            word.push(a);
            let go_on = self.extend(core, bound, word, &after, &next, visit);
            word.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    pub fn universe(&self, core: &Option<Letters>, bound: usize) -> Vec<(Letters, Classification)> {
        let mut out = Vec::new();
        if let Some(core) = core {
            self.scan_universe(core, bound, &mut |w, c| {
                out.push((w.to_vec(), c));
                true
            });
        }
        out.sort();
        out
    }

    /// Some extension word of `core` reaches states on both sides of the
    /// effect; collects the always-violating ones otherwise.
    fn judge_extensions(&self, core: &[u32], bound: usize) -> Result<Vec<Letters>, Letters> {
        let mut kills = Vec::new();
        let mut mixed = None;
        self.scan_universe(core, bound, &mut |w, c| match c {
            Classification::Mixed => {
                mixed = Some(w.to_vec());
                false
            }
            Classification::AllViolate => {
                kills.push(w.to_vec());
                true
            }
            _ => true,
        });
        match mixed {
            Some(w) => Err(w),
            None => {
                kills.sort();
                Ok(kills)
            }
        }
    }

    pub fn candidate(&self, core: &Core, bound: usize) -> CandidateOutcome {
        let mut outcome = CandidateOutcome {
            conditions: Conditions {
                ac1: false,
                ac2a: self.violation_reachable,
                ac2b: false,
                ac2c: false,
                ac3: None,
            },
            computation: None,
            kill_traces: BTreeSet::new(),
            mixed_witness: None,
        };
        let anchored = core.first() == self.lts.initial();
        if !anchored || !core.is_path_of(self.lts) {
            return outcome;
        }
        let letters = self.intern(core.labels()).expect("path labels are in the alphabet");
        let last = self.lts.require(core.last()).expect("path state");
        outcome.conditions.ac1 = self.sat[last];

        let core_class = self.classify(&self.reach(&letters));
        match self.judge_extensions(&letters, bound) {
            Err(mixed) => {
                outcome.conditions.ac2c = true;
                outcome.mixed_witness = Some(self.word(&mixed));
            }
            Ok(kills) => {
                outcome.conditions.ac2b = core_class == Classification::AllSatisfy;
                outcome.conditions.ac2c = true;
                if outcome.conditions.satisfiable() {
                    outcome.computation = Some(self.computation_for(core, &kills));
                    outcome.kill_traces = kills.iter().map(|k| self.word(k)).collect();
                }
            }
        }
        if core_class == Classification::Mixed {
            outcome.mixed_witness = Some(core.labels().clone());
        }
        outcome
    }

    /// Minimal words (under the sub-word order) of length at most `bound`
    /// that admit D-lists satisfying AC1 through AC2(c). The flag tells
    /// whether the search ran out of words before reaching the bound, so
    /// that no longer core could have been found.
    pub fn minimal_passing_words(&self, bound: usize) -> (Vec<WordVerdict>, bool) {
        let mut passing: Vec<WordVerdict> = Vec::new();
        if !self.violation_reachable {
            return (passing, true);
        }
        let mut level: Vec<(Letters, Vec<usize>)> = vec![(Vec::new(), vec![self.lts.initial_ix()])];
        for _ in 0..bound {
            let mut next = Vec::new();
            for (word, set) in &level {
                for a in self.enabled(set) {
                    let mut w = word.clone();
                    w.push(a);
                    next.push((w, self.step(set, a)));
                }
            }
            let known = passing.len();
            let mut frontier = Vec::new();
            for (word, set) in next {
                if passing[..known].iter().any(|p| is_subsequence(&p.word, &word)) {
                    continue;
                }
                if self.classify(&set) == Classification::AllSatisfy {
                    if let Ok(kills) = self.judge_extensions(&word, bound) {
                        passing.push(WordVerdict { word, kills });
                        continue;
                    }
                }
                frontier.push((word, set));
            }
            level = frontier;
            if level.is_empty() {
                break;
            }
        }
        let exhausted = level.iter().all(|(_, set)| self.enabled(set).is_empty());
        (passing, exhausted)
    }

    /// The canonical computation over `core`: the j-th trace is the j-th
    /// kill word, split at the lexicographically least core positions.
    pub fn computation_for(&self, core: &Core, kills: &[Letters]) -> Computation {
        let letters = self.intern(core.labels()).expect("core labels are in the alphabet");
        let n = letters.len();
        let mut dlists = vec![Vec::with_capacity(kills.len()); n];
        for kill in kills {
            let cuts = leftmost_split(&letters, kill, usize::MAX)
                .expect("kill words have the core's shape");
            for (i, dl) in dlists.iter_mut().enumerate() {
                let from = cuts[i] + 1;
                let to = if i + 1 < n { cuts[i + 1] } else { kill.len() };
                dl.push(self.word(&kill[from..to]));
            }
        }
        Computation::from_core(core, dlists.into_iter().map(DList::new).collect())
            .expect("one D-list per step")
    }
}

fn is_subsequence(short: &[u32], long: &[u32]) -> bool {
    let mut it = long.iter();
    short.iter().all(|a| it.any(|b| b == a))
}

/// Positions at which the core letters occur in `w`, with `w` starting with
/// the first core letter and every gap (trailing one included) at most
/// `gap` long. Returns the lexicographically least choice.
fn leftmost_split(core: &[u32], w: &[u32], gap: usize) -> Option<Vec<usize>> {
    fn go(core: &[u32], w: &[u32], gap: usize, from: usize, cuts: &mut Vec<usize>) -> bool {
        let i = cuts.len();
        if i == core.len() {
            return w.len() - from <= gap;
        }
        let last = if i == 0 { 0 } else { from.saturating_add(gap).min(w.len().saturating_sub(1)) };
        for p in from..=last {
            if w.get(p) == Some(&core[i]) {
                cuts.push(p);
                if go(core, w, gap, p + 1, cuts) {
                    return true;
                }
                cuts.pop();
            }
        }
        false
    }
    if core.is_empty() || w.is_empty() {
        return None;
    }
    let mut cuts = Vec::new();
    go(core, w, gap, 0, &mut cuts).then_some(cuts)
}
