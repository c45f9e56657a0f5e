//! Seeded random instances and the canonical fixture systems.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::composition::Instance;
use crate::hml::{parse_formula, satisfies, Formula};
use crate::lts::{Label, Lts, LtsBuilder, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenParams {
    pub seed: u64,
    pub max_states: usize,
    pub max_out_degree: usize,
    pub alphabet_size: usize,
    pub acyclic: bool,
    pub formula_depth: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_states: 6,
            max_out_degree: 2,
            alphabet_size: 3,
            acyclic: true,
            formula_depth: 3,
        }
    }
}

impl GenParams {
    pub fn with_seed(seed: u64) -> Self {
        GenParams { seed, ..Self::default() }
    }
}

fn rng_for(p: &GenParams, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(stream);
    rng
}

/// The labels `{namespace}a`, `{namespace}b`, … of a generated system.
pub fn namespaced_alphabet(namespace: &str, size: usize) -> Vec<Label> {
    (0..size)
        .map(|i| {
            let name = match char::from_u32('a' as u32 + i as u32) {
                Some(c) if i < 26 => format!("{namespace}{c}"),
                _ => format!("{namespace}x{i}"),
            };
            Label::new(&name).expect("generated labels are valid")
        })
        .collect()
}

/// A random deterministic system: the out-going labels of every state are
/// distinct. States are `{namespace}0`, `{namespace}1`, …, all reachable from
/// `{namespace}0`. With `acyclic`, edges only go from lower to higher index.
pub fn gen_lts(p: &GenParams, namespace: &str) -> Lts {
    let mut rng = rng_for(p, 0);
    let alphabet = namespaced_alphabet(namespace, p.alphabet_size.max(1));
    let degree = p.max_out_degree.clamp(1, alphabet.len());
    let n = rng.gen_range(1..=p.max_states.max(1));
    let state = |i: usize| StateId::named(format!("{namespace}{i}"));

    let mut used: Vec<Vec<Label>> = vec![Vec::new()];
    let mut edges: Vec<(usize, Label, usize)> = Vec::new();
    // A spanning tree first, so every state is reachable.
    for i in 1..n {
        let open: Vec<usize> = (0..i).filter(|&j| used[j].len() < degree).collect();
        let Some(&parent) = open.choose(&mut rng) else { break };
        let label = fresh_label(&mut rng, &alphabet, &used[parent]);
        used[parent].push(label.clone());
        used.push(Vec::new());
        edges.push((parent, label, i));
    }
    let n = used.len();
    for (src, out) in used.iter_mut().enumerate() {
        while out.len() < degree && rng.gen_bool(0.4) {
            let targets: Vec<usize> = if p.acyclic { (src + 1..n).collect() } else { (0..n).collect() };
            let Some(&dst) = targets.choose(&mut rng) else { break };
            let label = fresh_label(&mut rng, &alphabet, out);
            out.push(label.clone());
            edges.push((src, label, dst));
        }
    }

    Lts::new(
        (0..n).map(state),
        state(0),
        alphabet,
        edges.into_iter().map(|(s, l, d)| (state(s), l, state(d))),
    )
    .expect("generated system is well-formed")
}

fn fresh_label(rng: &mut ChaCha8Rng, alphabet: &[Label], used: &[Label]) -> Label {
    let free: Vec<&Label> = alphabet.iter().filter(|l| !used.contains(l)).collect();
    (*free.choose(rng).expect("degree is at most the alphabet size")).clone()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no suitable effect after {attempts} attempts")]
pub struct GenError {
    pub attempts: usize,
}

const EFFECT_ATTEMPTS: usize = 500;

/// A random formula of depth at most `p.formula_depth` over the system's
/// alphabet that fails at the initial state and holds at some reachable state.
pub fn gen_effect(p: &GenParams, lts: &Lts) -> Result<Formula, GenError> {
    let mut rng = rng_for(p, 1);
    let labels: Vec<Label> = lts.alphabet().iter().cloned().collect();
    let reachable = lts.reachable_states();
    for _ in 0..EFFECT_ATTEMPTS {
        let f = random_formula(&mut rng, &labels, p.formula_depth);
        let holds = |s: &StateId| satisfies(lts, s, &f).expect("reachable state");
        if !holds(lts.initial()) && reachable.iter().any(holds) {
            return Ok(f);
        }
    }
    Err(GenError { attempts: EFFECT_ATTEMPTS })
}

/// A random formula of depth at most `depth`, favoring modalities.
pub fn random_formula(rng: &mut impl Rng, labels: &[Label], depth: usize) -> Formula {
    if depth == 0 || labels.is_empty() {
        return Formula::Top;
    }
    match rng.gen_range(0..8) {
        0 => Formula::Top,
        1 | 2 => Formula::diamond(pick(rng, labels), random_formula(rng, labels, depth - 1)),
        3 | 4 => Formula::boxed(pick(rng, labels), random_formula(rng, labels, depth - 1)),
        5 => Formula::not(random_formula(rng, labels, depth - 1)),
        6 => Formula::and(random_formula(rng, labels, depth - 1), random_formula(rng, labels, depth - 1)),
        _ => Formula::or(random_formula(rng, labels, depth - 1), random_formula(rng, labels, depth - 1)),
    }
}

fn pick(rng: &mut impl Rng, labels: &[Label]) -> Label {
    labels[rng.gen_range(0..labels.len())].clone()
}

/// The `index`-th instance of the corpus seeded with `seed`: two generated
/// systems over the alphabets `L*` and `R*` with non-immediate effects.
pub fn random_instance(base: &GenParams, index: usize) -> Instance {
    let mut derive = ChaCha8Rng::seed_from_u64(base.seed);
    derive.set_stream(2 + index as u64);
    let mut side = |namespace: &str| loop {
        let p = GenParams { seed: derive.gen(), ..base.clone() };
        let lts = gen_lts(&p, namespace);
        if let Ok(f) = gen_effect(&p, &lts) {
            return (lts, f);
        }
    };
    let (left, phi) = side("L");
    let (right, psi) = side("R");
    Instance::new(left, right, phi, psi)
}

/// One of the canonical systems with the effect it is studied under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub lts: Lts,
    pub effect: Formula,
    pub role: &'static str,
}

/// The canonical systems, keyed by file stem.
pub fn fixtures() -> BTreeMap<&'static str, Fixture> {
    let h = parse_formula("<h>tt").expect("valid");
    let entry = |lts: Lts, effect: &Formula, role| Fixture { lts, effect: effect.clone(), role };
    BTreeMap::from([
        (
            "t1",
            entry(
                LtsBuilder::new("s10").edge("s10", "a", "s11").edge("s11", "h", "s12").build(),
                &h,
                "single step enables the hazard; cause a with kill trace ah",
            ),
        ),
        (
            "t2",
            entry(
                LtsBuilder::new("s20")
                    .edge("s20", "h", "s20")
                    .edge("s20", "a", "s21")
                    .edge("s21", "h", "s21")
                    .build(),
                &h,
                "hazard enabled everywhere; immediate effect",
            ),
        ),
        (
            "t3",
            entry(
                LtsBuilder::new("s30")
                    .edge("s30", "a", "s31")
                    .edge("s31", "h", "s33")
                    .edge("s30", "a", "s32")
                    .build(),
                &h,
                "nondeterministic a; no cause",
            ),
        ),
        (
            "t4",
            entry(
                LtsBuilder::new("s40")
                    .edge("s40", "a", "s42")
                    .edge("s42", "h", "s45")
                    .edge("s42", "b", "s43")
                    .edge("s43", "h", "s46")
                    .edge("s43", "b", "s44")
                    .build(),
                &h,
                "cause a with kill traces ah, abb, abh; ab is not minimal",
            ),
        ),
        (
            "t5",
            entry(
                LtsBuilder::new("s50")
                    .edge("s50", "a", "s51")
                    .edge("s51", "i", "s51")
                    .edge("s51", "h", "s52")
                    .build(),
                &h,
                "idle loop; kill traces grow with the bound",
            ),
        ),
        (
            "t6",
            entry(
                LtsBuilder::new("s60")
                    .edge("s60", "a", "s61")
                    .edge("s61", "h", "s64")
                    .edge("s61", "b", "s62")
                    .edge("s62", "h", "s67")
                    .edge("s60", "a", "s63")
                    .edge("s63", "b", "s65")
                    .edge("s65", "h", "s66")
                    .build(),
                &h,
                "ab is a cause because a is not",
            ),
        ),
        (
            "pair_left",
            entry(
                LtsBuilder::new("s0")
                    .edge("s0", "a", "s1")
                    .edge("s1", "h", "s2")
                    .edge("s0", "b", "s3")
                    .build(),
                &h,
                "left component of the composition example",
            ),
        ),
        (
            "pair_right",
            entry(
                LtsBuilder::new("p0")
                    .edge("p0", "d", "p1")
                    .edge("p1", "e", "p2")
                    .edge("p2", "h'", "p3")
                    .edge("p0", "f", "p4")
                    .build(),
                &parse_formula("<h'>tt").expect("valid"),
                "right component of the composition example",
            ),
        ),
    ])
}

/// The two components of the composition example as one instance.
pub fn pair_instance() -> Instance {
    let fx = fixtures();
    let (l, r) = (&fx["pair_left"], &fx["pair_right"]);
    Instance::new(l.lts.clone(), r.lts.clone(), l.effect.clone(), r.effect.clone())
}
