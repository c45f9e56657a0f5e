//! Empirical checks of how causal projections behave under interleaving.
//!
//! For systems `T`, `T'` over disjoint alphabets `A`, `B` and non-immediate
//! effects `φ` (over `A`) and `ψ` (over `B`):
//!
//! * disjunction: `(T || T') ↓ (φ ∨ ψ) ≃ (T ↓ φ) + (T' ↓ ψ)`
//! * conjunction: `(T || T') ↓ (φ ∧ ψ) = (T ↓ φ) || (T' ↓ ψ)`
//!
//! Both statements are checked on concrete instances at an exploration bound.
//! They are only guaranteed for deterministic components: with
//! nondeterminism an interleaved word can reach a mixed set of states that no
//! component word reaches, and a component cause may fail to lift.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use serde_json::json;

use crate::causality::{causes, CauseSet, Exactness};
use crate::hml::{formula_alphabet, is_immediate_effect, EffectContext, Formula};
use crate::lts::{choice, interleave, isomorphic, project_word, to_aut, Label, Lts, StateId, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    Disjunction,
    Conjunction,
}

impl Theorem {
    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::Disjunction => "disjunction",
            Theorem::Conjunction => "conjunction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    /// Holds at the bound used, which does not make the search exhaustive.
    HoldsAtBound,
    Fails,
    PreconditionViolated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsAtBound => "holds-at-bound",
            Verdict::Fails => "fails",
            Verdict::PreconditionViolated => "precondition",
        }
    }

    pub fn holds(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsAtBound)
    }
}

/// Which side of the theorem's equation a counterexample comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub side: Side,
    /// The side's projection.
    pub lts: Lts,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub verdict: Verdict,
    pub witness: Option<BTreeMap<StateId, StateId>>,
    pub counterexample: Option<Counterexample>,
    pub bound: usize,
    /// Violated hypotheses, when the verdict is `PreconditionViolated`.
    pub preconditions: Vec<PreconditionViolation>,
}

impl TheoremReport {
    pub fn to_json(&self) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|w| {
            w.iter()
                .map(|(k, v)| (k.to_string(), json!(v.to_string())))
                .collect::<serde_json::Map<_, _>>()
        });
        let counterexample = self.counterexample.as_ref().map(|c| {
            json!({
                "side": match c.side { Side::Left => "left", Side::Right => "right" },
                "lts": to_aut(&c.lts),
                "detail": c.detail,
            })
        });
        let mut out = json!({
            "theorem": self.theorem.as_str(),
            "verdict": self.verdict.as_str(),
            "witness": witness,
            "counterexample": counterexample,
            "bound": self.bound,
        });
        if !self.preconditions.is_empty() {
            out["preconditions"] =
                json!(self.preconditions.iter().map(ToString::to_string).collect::<Vec<_>>());
        }
        out
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} theorem: {} (bound {})", self.theorem.as_str(), self.verdict.as_str(), self.bound)?;
        for p in &self.preconditions {
            write!(f, "\n  violated: {p}")?;
        }
        if let Some(w) = &self.witness {
            f.write_str("\n  witness:")?;
            for (k, v) in w {
                write!(f, "\n    {k} -> {v}")?;
            }
        }
        if let Some(c) = &self.counterexample {
            let side = match c.side {
                Side::Left => "left",
                Side::Right => "right",
            };
            write!(f, "\n  counterexample ({side}): {}", c.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreconditionViolation {
    SharedLabels(BTreeSet<Label>),
    LeftFormulaOutside(Label),
    RightFormulaOutside(Label),
    LeftImmediate,
    RightImmediate,
}

impl fmt::Display for PreconditionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreconditionViolation::SharedLabels(ls) => {
                let names: Vec<&str> = ls.iter().map(Label::name).collect();
                write!(f, "alphabets share {}", names.join(", "))
            }
            PreconditionViolation::LeftFormulaOutside(l) => {
                write!(f, "left formula mentions {l}, outside the left alphabet")
            }
            PreconditionViolation::RightFormulaOutside(l) => {
                write!(f, "right formula mentions {l}, outside the right alphabet")
            }
            PreconditionViolation::LeftImmediate => f.write_str("left effect holds initially"),
            PreconditionViolation::RightImmediate => f.write_str("right effect holds initially"),
        }
    }
}

/// Two components with one effect each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub left: Lts,
    pub right: Lts,
    pub phi: Formula,
    pub psi: Formula,
}

impl Instance {
    pub fn new(left: Lts, right: Lts, phi: Formula, psi: Formula) -> Self {
        Instance { left, right, phi, psi }
    }

    pub fn composite(&self) -> Lts {
        interleave(&self.left, &self.right)
    }

    /// Longest path of the composite, or `None` when it has a cycle.
    pub fn exact_bound(&self) -> Option<usize> {
        self.composite().longest_path()
    }

    pub fn verify(&self, theorem: Theorem, bound: usize) -> TheoremReport {
        match theorem {
            Theorem::Disjunction => verify_disjunction_theorem(self, bound),
            Theorem::Conjunction => verify_conjunction_theorem(self, bound),
        }
    }
}

/// Lists every violated hypothesis of the composition theorems.
pub fn check_preconditions(inst: &Instance) -> Vec<PreconditionViolation> {
    let mut out = Vec::new();
    let (a, b) = (inst.left.alphabet(), inst.right.alphabet());
    let shared: BTreeSet<Label> = a.intersection(b).cloned().collect();
    if !shared.is_empty() {
        out.push(PreconditionViolation::SharedLabels(shared));
    }
    let mut formulas_ok = true;
    if let Some(l) = formula_alphabet(&inst.phi).into_iter().find(|l| !a.contains(l)) {
        out.push(PreconditionViolation::LeftFormulaOutside(l));
        formulas_ok = false;
    }
    if let Some(l) = formula_alphabet(&inst.psi).into_iter().find(|l| !b.contains(l)) {
        out.push(PreconditionViolation::RightFormulaOutside(l));
        formulas_ok = false;
    }
    if formulas_ok {
        if is_immediate_effect(&left_ctx(inst)) {
            out.push(PreconditionViolation::LeftImmediate);
        }
        if is_immediate_effect(&right_ctx(inst)) {
            out.push(PreconditionViolation::RightImmediate);
        }
    }
    out
}

fn left_ctx(inst: &Instance) -> EffectContext {
    EffectContext::new(inst.left.clone(), inst.phi.clone()).expect("checked alphabet")
}

fn right_ctx(inst: &Instance) -> EffectContext {
    EffectContext::new(inst.right.clone(), inst.psi.clone()).expect("checked alphabet")
}

fn composite_ctx(inst: &Instance, effect: Formula) -> EffectContext {
    EffectContext::new(inst.composite(), effect).expect("component alphabets cover the formulas")
}

fn unchecked(inst: &Instance, theorem: Theorem, bound: usize) -> Option<TheoremReport> {
    let preconditions = check_preconditions(inst);
    (!preconditions.is_empty()).then_some(TheoremReport {
        theorem,
        verdict: Verdict::PreconditionViolated,
        witness: None,
        counterexample: None,
        bound,
        preconditions,
    })
}

fn holding(sets: &[&CauseSet]) -> Verdict {
    if sets.iter().all(|s| s.exactness == Exactness::Exact) {
        Verdict::Holds
    } else {
        Verdict::HoldsAtBound
    }
}

/// Checks `(T || T') ↓ (φ ∨ ψ) ≃ (T ↓ φ) + (T' ↓ ψ)`, trying first the map
/// that sends `(s, p0)` to `L:s`, `(s0, p)` to `R:p` and `(s0, p0)` to `+`.
pub fn verify_disjunction_theorem(inst: &Instance, bound: usize) -> TheoremReport {
    if let Some(report) = unchecked(inst, Theorem::Disjunction, bound) {
        return report;
    }
    let composite = disjunction_causes(inst, bound);
    let (left_causes, right_causes) = (causes(&left_ctx(inst), bound), causes(&right_ctx(inst), bound));
    let lhs = composite.projection();
    let rhs = choice(&left_causes.projection(), &right_causes.projection());

    let witness = explicit_witness(inst, &lhs, &rhs).or_else(|| isomorphic(&lhs, &rhs));
    match witness {
        Some(w) => TheoremReport {
            theorem: Theorem::Disjunction,
            verdict: holding(&[&composite, &left_causes, &right_causes]),
            witness: Some(w),
            counterexample: None,
            bound,
            preconditions: Vec::new(),
        },
        None => {
            let (side, lts) = if lhs.transition_count() >= rhs.transition_count() {
                (Side::Left, lhs.clone())
            } else {
                (Side::Right, rhs.clone())
            };
            TheoremReport {
                theorem: Theorem::Disjunction,
                verdict: Verdict::Fails,
                witness: None,
                counterexample: Some(Counterexample {
                    side,
                    lts,
                    detail: format!(
                        "no isomorphism: left has {} states and {} transitions, right has {} and {}",
                        lhs.state_count(),
                        lhs.transition_count(),
                        rhs.state_count(),
                        rhs.transition_count()
                    ),
                }),
                bound,
                preconditions: Vec::new(),
            }
        }
    }
}

fn explicit_witness(inst: &Instance, lhs: &Lts, rhs: &Lts) -> Option<BTreeMap<StateId, StateId>> {
    let (s0, p0) = (inst.left.initial(), inst.right.initial());
    let mut map = BTreeMap::new();
    for s in lhs.states() {
        let (l, r) = s.as_pair()?;
        let image = match (l == s0, r == p0) {
            (true, true) => StateId::ChoiceRoot,
            (false, true) => StateId::Left(Box::new(l.clone())),
            (true, false) => StateId::Right(Box::new(r.clone())),
            (false, false) => return None,
        };
        if !rhs.contains_state(&image) {
            return None;
        }
        map.insert(s.clone(), image);
    }
    let images: BTreeSet<&StateId> = map.values().collect();
    if images.len() != map.len() || images.len() != rhs.state_count() {
        return None;
    }
    let mapped: BTreeSet<_> = lhs
        .transitions()
        .map(|(s, l, d)| (map[&s].clone(), l, map[&d].clone()))
        .collect();
    (mapped == rhs.transitions().collect()).then_some(map)
}

/// Checks `(T || T') ↓ (φ ∧ ψ) = (T ↓ φ) || (T' ↓ ψ)` as literal equality of
/// pair states and transitions. When either component has no cause, its
/// projection contributes no state, so the right side is the bare initial
/// pair.
pub fn verify_conjunction_theorem(inst: &Instance, bound: usize) -> TheoremReport {
    if let Some(report) = unchecked(inst, Theorem::Conjunction, bound) {
        return report;
    }
    let composite = causes(&composite_ctx(inst, Formula::and(inst.phi.clone(), inst.psi.clone())), bound);
    let lhs = composite.projection();
    let (left_causes, right_causes) = (causes(&left_ctx(inst), bound), causes(&right_ctx(inst), bound));
    let rhs = if left_causes.is_empty() || right_causes.is_empty() {
        let composite = inst.composite();
        Lts::new(
            [composite.initial().clone()],
            composite.initial().clone(),
            composite.alphabet().clone(),
            [],
        )
        .expect("single state")
    } else {
        interleave(&left_causes.projection(), &right_causes.projection())
    };

    if lhs == rhs {
        return TheoremReport {
            theorem: Theorem::Conjunction,
            verdict: holding(&[&composite, &left_causes, &right_causes]),
            witness: None,
            counterexample: None,
            bound,
            preconditions: Vec::new(),
        };
    }
    let only_left: Vec<String> = lhs
        .transitions()
        .filter(|(s, l, d)| !rhs.has_transition(s, l, d))
        .map(|(s, l, d)| format!("{s} -{l}-> {d}"))
        .collect();
    let only_right: Vec<String> = rhs
        .transitions()
        .filter(|(s, l, d)| !lhs.has_transition(s, l, d))
        .map(|(s, l, d)| format!("{s} -{l}-> {d}"))
        .collect();
    let (side, lts, extra) = if only_left.is_empty() {
        (Side::Right, rhs, only_right)
    } else {
        (Side::Left, lhs, only_left)
    };
    TheoremReport {
        theorem: Theorem::Conjunction,
        verdict: Verdict::Fails,
        witness: None,
        counterexample: Some(Counterexample {
            side,
            lts,
            detail: if extra.is_empty() {
                "state sets differ".to_string()
            } else {
                format!("transitions only on this side: {}", extra.join(", "))
            },
        }),
        bound,
        preconditions: Vec::new(),
    }
}

/// Outcome of a lemma-level cross-check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaReport {
    /// Number of causes examined.
    pub checked: usize,
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn disjunction_causes(inst: &Instance, bound: usize) -> CauseSet {
    causes(&composite_ctx(inst, Formula::or(inst.phi.clone(), inst.psi.clone())), bound)
}

/// Every component cause reappears in the composite for `φ ∨ ψ` with the
/// same labels and the other component frozen at its initial state.
pub fn cross_check_disjunction_lifting(inst: &Instance, bound: usize) -> LemmaReport {
    let mut report = LemmaReport::default();
    if !check_preconditions(inst).is_empty() {
        report.violations.push("preconditions do not hold".to_string());
        return report;
    }
    let composite = disjunction_causes(inst, bound);
    let lifted: BTreeSet<Vec<StateId>> =
        composite.causes.iter().map(|c| c.core().states().to_vec()).collect();
    let (s0, p0) = (inst.left.initial(), inst.right.initial());

    for (set, side) in [(causes(&left_ctx(inst), bound), Side::Left), (causes(&right_ctx(inst), bound), Side::Right)] {
        for cause in &set.causes {
            report.checked += 1;
            let path: Vec<StateId> = cause
                .core()
                .states()
                .iter()
                .map(|s| match side {
                    Side::Left => StateId::pair(s.clone(), p0.clone()),
                    Side::Right => StateId::pair(s0.clone(), s.clone()),
                })
                .collect();
            if !lifted.contains(&path) {
                report.violations.push(format!("cause {} has no lifted counterpart", cause.core_word()));
            }
        }
    }
    report
}

/// Every composite cause for `φ ∨ ψ` moves a single component, its
/// projection is a cause of that component, and its kill traces projected on
/// that component's alphabet always violate the component's effect.
pub fn cross_check_single_component(inst: &Instance, bound: usize) -> LemmaReport {
    let mut report = LemmaReport::default();
    if !check_preconditions(inst).is_empty() {
        report.violations.push("preconditions do not hold".to_string());
        return report;
    }
    let (lctx, rctx) = (left_ctx(inst), right_ctx(inst));
    let (left_causes, right_causes) = (causes(&lctx, bound), causes(&rctx, bound));
    let component_cores = |set: &CauseSet| -> BTreeSet<Vec<StateId>> {
        set.causes.iter().map(|c| c.core().states().to_vec()).collect()
    };
    let (left_cores, right_cores) = (component_cores(&left_causes), component_cores(&right_causes));

    for cause in disjunction_causes(inst, bound).causes {
        report.checked += 1;
        let word = cause.core_word();
        let Some(first) = word.labels().first() else {
            report.violations.push("trivial composite cause".to_string());
            continue;
        };
        let (alphabet, ctx, cores, side) = if inst.left.alphabet().contains(first) {
            (inst.left.alphabet(), &lctx, &left_cores, Side::Left)
        } else {
            (inst.right.alphabet(), &rctx, &right_cores, Side::Right)
        };
        if word.iter().any(|l| !alphabet.contains(l)) {
            report.violations.push(format!("cause {word} mixes both alphabets"));
            continue;
        }
        let projected: Vec<StateId> = cause
            .core()
            .states()
            .iter()
            .map(|s| {
                let (l, r) = s.as_pair().expect("composite states are pairs");
                match side {
                    Side::Left => l.clone(),
                    Side::Right => r.clone(),
                }
            })
            .collect();
        if !cores.contains(&projected) {
            report.violations.push(format!("cause {word} does not project to a component cause"));
        }
        for kill in &cause.kill_traces {
            let w: Word = project_word(kill, alphabet);
            if crate::causality::classify_word(ctx, &w) != crate::causality::Classification::AllViolate {
                report.violations.push(format!("kill trace {kill} of {word} projects to {w}, which does not always violate"));
            }
        }
    }
    report
}

/// Writes `left.aut`, `right.aut`, `left.hml`, `right.hml` and
/// `manifest.json` into `dir`, creating it if needed.
pub fn write_bundle(dir: &Path, inst: &Instance, report: &TheoremReport) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("left.aut"), to_aut(&inst.left))?;
    fs::write(dir.join("right.aut"), to_aut(&inst.right))?;
    fs::write(dir.join("left.hml"), format!("{}\n", inst.phi))?;
    fs::write(dir.join("right.hml"), format!("{}\n", inst.psi))?;
    let manifest = json!({
        "theorem": report.theorem.as_str(),
        "verdict": report.verdict.as_str(),
        "bound": report.bound,
        "left": "left.aut",
        "right": "right.aut",
        "left_formula": "left.hml",
        "right_formula": "right.hml",
        "report": report.to_json(),
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?;
    fs::write(dir.join("manifest.json"), text + "\n")
}

/// Greedily removes transitions, then unreachable or removable states, from
/// both components while `fails` keeps returning true.
pub fn shrink(inst: &Instance, fails: impl Fn(&Instance) -> bool) -> Instance {
    let mut best = inst.clone();
    'transitions: loop {
        for side in [Side::Left, Side::Right] {
            let lts = &pick(&best, side).clone();
            for t in lts.transitions() {
                let smaller = rebuild(lts, |s| s == lts.initial() || lts.contains_state(s), |e| *e != t);
                let candidate = replace(&best, side, smaller);
                if fails(&candidate) {
                    best = candidate;
                    continue 'transitions;
                }
            }
        }
        break;
    }
    'states: loop {
        for side in [Side::Left, Side::Right] {
            let lts = &pick(&best, side).clone();
            for victim in lts.states() {
                if victim == lts.initial() {
                    continue;
                }
                let smaller = rebuild(lts, |s| s != victim, |(s, _, d)| s != victim && d != victim);
                let candidate = replace(&best, side, smaller);
                if fails(&candidate) {
                    best = candidate;
                    continue 'states;
                }
            }
        }
        break;
    }
    best
}

fn pick(inst: &Instance, side: Side) -> &Lts {
    match side {
        Side::Left => &inst.left,
        Side::Right => &inst.right,
    }
}

fn replace(inst: &Instance, side: Side, lts: Lts) -> Instance {
    let mut out = inst.clone();
    match side {
        Side::Left => out.left = lts,
        Side::Right => out.right = lts,
    }
    out
}

fn rebuild(
    lts: &Lts,
    keep_state: impl Fn(&StateId) -> bool,
    keep_edge: impl Fn(&(StateId, Label, StateId)) -> bool,
) -> Lts {
    Lts::new(
        lts.states().iter().filter(|s| keep_state(s)).cloned(),
        lts.initial().clone(),
        lts.alphabet().clone(),
        lts.transitions().filter(|e| keep_edge(e)),
    )
    .expect("subsystem of a valid system")
}
