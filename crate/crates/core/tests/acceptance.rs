//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hmlcause::causality::{
    cause_candidate, causes, check_computation, judge_core, oracle_check_cause, oracle_core_is_cause,
    Condition, Exactness,
};
use hmlcause::composition::{
    cross_check_disjunction_lifting, cross_check_single_component, shrink, verify_conjunction_theorem,
    verify_disjunction_theorem, write_bundle, Instance, Theorem, Verdict,
};
use hmlcause::computation::{paths_for_word, traces, Computation, Core, DList};
use hmlcause::hml::{is_immediate_effect, satisfies, EffectContext, Formula};
use hmlcause::lts::{Label, Lts, StateId, Word};
use hmlcause::testkit::{fixtures, gen_lts, pair_instance, random_formula, random_instance, GenParams};

type Outcome = Result<String, String>;

fn w(text: &str) -> Word {
    Word::from_chars(text)
}

fn words(items: &[&str]) -> BTreeSet<Word> {
    items.iter().map(|s| w(s)).collect()
}

fn fixture(name: &str) -> EffectContext {
    let fx = &fixtures()[name];
    EffectContext::new(fx.lts.clone(), fx.effect.clone()).unwrap()
}

fn core(states: &[&str], labels: &str) -> Core {
    Core::new(states.iter().map(|s| StateId::from(*s)).collect(), w(labels)).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, format!("took {spent:?}, limit {limit:?}"))
}

fn single_cause_fixture() -> Outcome {
    let start = Instant::now();
    let set = causes(&fixture("t1"), 3);
    ensure(set.len() == 1, format!("{} causes", set.len()))?;
    let c = &set.causes[0];
    ensure(c.core_word() == w("a"), format!("core {}", c.core_word()))?;
    ensure(c.kill_traces == words(&["ah"]), format!("kills {:?}", c.kill_traces))?;
    ensure(set.exactness == Exactness::Exact, "not exact")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("core a, kills {{ah}} in {:?}", start.elapsed()))
}

fn branching_kills_and_rejections() -> Outcome {
    let start = Instant::now();
    let ctx = fixture("t4");
    let set = causes(&ctx, 3);
    ensure(set.len() == 1, format!("{} causes", set.len()))?;
    let c = &set.causes[0];
    ensure(c.core_word() == w("a"), format!("core {}", c.core_word()))?;
    ensure(c.kill_traces == words(&["ah", "abb", "abh"]), format!("kills {:?}", c.kill_traces))?;
    ensure(set.exactness == Exactness::Exact, "not exact")?;

    let bare = Computation::from_core(&core(&["s40", "s42"], "a"), vec![DList::empty()]).unwrap();
    let verdict = check_computation(&ctx, &bare, 3);
    ensure(
        verdict.ac1 && verdict.ac2a && !(verdict.ac2b && verdict.ac2c),
        format!("bare core verdict {verdict:?}"),
    )?;
    let ab = judge_core(&ctx, &core(&["s40", "s42", "s43"], "ab"), 3);
    ensure(ab.first_failure() == Some(Condition::Ac3), format!("ab verdict {ab:?}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "core a, kills {{ah, abb, abh}}; bare a fails {}; ab fails {} in {:?}",
        verdict.first_failure().unwrap(),
        Condition::Ac3,
        start.elapsed()
    ))
}

fn nondeterministic_no_cause() -> Outcome {
    let start = Instant::now();
    let ctx = fixture("t3");
    let set = causes(&ctx, 3);
    ensure(set.is_empty(), format!("{} causes", set.len()))?;
    ensure(set.exactness == Exactness::Exact, "not exact")?;
    let out = cause_candidate(&ctx, &core(&["s30", "s31"], "a"), 2);
    ensure(out.conditions.first_failure() == Some(Condition::Ac2b), format!("{:?}", out.conditions))?;

    let lts = ctx.lts();
    let mut checked = 0;
    let mut frontier = vec![Word::empty()];
    for _ in 0..=3 {
        let mut next = Vec::new();
        for word in frontier {
            for states in paths_for_word(lts, lts.initial(), &word) {
                checked += 1;
                let c = Core::new(states, word.clone()).unwrap();
                ensure(!oracle_core_is_cause(&ctx, &c, 3), format!("oracle accepts {word}"))?;
            }
            for l in lts.alphabet() {
                let mut longer = word.clone();
                longer.push(l.clone());
                next.push(longer);
            }
        }
        frontier = next;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("empty; oracle rejects all {checked} cores up to length 3 in {:?}", start.elapsed()))
}

fn idle_loop_bounded() -> Outcome {
    let start = Instant::now();
    let ctx = fixture("t5");
    for k in 1..=4 {
        let set = causes(&ctx, k);
        ensure(set.len() == 1, format!("k={k}: {} causes", set.len()))?;
        let c = &set.causes[0];
        ensure(c.core_word() == w("a"), format!("k={k}: core {}", c.core_word()))?;
        let expected: BTreeSet<Word> = (0..k).map(|i| w(&format!("a{}h", "i".repeat(i)))).collect();
        ensure(c.kill_traces == expected, format!("k={k}: kills {:?}", c.kill_traces))?;
        ensure(set.exactness == Exactness::BoundedApprox, format!("k={k}: flagged exact"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("k=4 kills {{ah, aih, aiih, aiiih}}, bounded, in {:?}", start.elapsed()))
}

fn longer_cause_when_prefix_fails() -> Outcome {
    let start = Instant::now();
    let set = causes(&fixture("t6"), 3);
    let cores = set.core_words();
    ensure(cores.contains(&w("ab")), format!("cores {cores:?}"))?;
    ensure(!cores.contains(&w("a")), format!("cores {cores:?}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("cores {cores:?} in {:?}", start.elapsed()))
}

fn immediate_effect() -> Outcome {
    let start = Instant::now();
    let ctx = fixture("t2");
    ensure(is_immediate_effect(&ctx), "not immediate")?;
    let set = causes(&ctx, 3);
    ensure(set.immediate, "policy not recorded")?;
    ensure(set.causes.iter().all(|c| c.computation.is_trivial()), "non-trivial cause")?;
    ensure(set.len() <= 1, "more than one cause")?;
    ensure(set.is_empty(), "hazard holds everywhere yet a cause was emitted")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("immediate, {} causes, in {:?}", set.len(), start.elapsed()))
}

fn traces_worked_example() -> Outcome {
    let l = |s: &str| Label::new(s).unwrap();
    let dl = |items: &[&str]| {
        items
            .iter()
            .map(|s| if s.is_empty() { Word::empty() } else { Word::from_labels(vec![l(s)]) })
            .collect::<DList>()
    };
    let got = traces(&[
        (l("a"), dl(&["wa0", "wa1", "wa2"])),
        (l("b"), dl(&["", "", ""])),
        (l("c"), dl(&["", "wc1", ""])),
    ])
    .map_err(|e| e.to_string())?;
    let expected: BTreeSet<Word> =
        ["a wa0 b c", "a wa1 b c wc1", "a wa2 b c"].iter().map(|s| Word::parse(s).unwrap()).collect();
    ensure(got == expected, format!("got {got:?}"))?;
    Ok(format!("{} words as stated", got.len()))
}

fn pair_disjunction() -> Outcome {
    let start = Instant::now();
    let report = verify_disjunction_theorem(&pair_instance(), 4);
    ensure(report.verdict == Verdict::Holds, format!("{report}"))?;
    let witness = report.witness.as_ref().ok_or("no witness")?;
    let pair = |l: &str, r: &str| StateId::pair(l.into(), r.into());
    for (from, to) in [
        (pair("s0", "p0"), StateId::ChoiceRoot),
        (pair("s1", "p0"), StateId::Left(Box::new("s1".into()))),
        (pair("s0", "p1"), StateId::Right(Box::new("p1".into()))),
        (pair("s0", "p2"), StateId::Right(Box::new("p2".into()))),
    ] {
        ensure(witness.get(&from) == Some(&to), format!("{from} maps to {:?}", witness.get(&from)))?;
    }
    within(start, Duration::from_secs(2))?;
    Ok(format!("{} with a {}-state witness in {:?}", report.verdict.as_str(), witness.len(), start.elapsed()))
}

fn pair_conjunction() -> Outcome {
    let start = Instant::now();
    let report = verify_conjunction_theorem(&pair_instance(), 4);
    ensure(report.verdict == Verdict::Holds, format!("{report}"))?;
    within(start, Duration::from_secs(2))?;
    Ok(format!("{} by literal equality in {:?}", report.verdict.as_str(), start.elapsed()))
}

fn bundle_dir(seed: u64, index: usize, what: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("counterexamples")
        .join(format!("seed{seed}-{index}-{what}"))
}

fn file_failure(inst: &Instance, theorem: Theorem, bound: usize, seed: u64, index: usize) -> String {
    let fails = |i: &Instance| i.verify(theorem, bound).verdict == Verdict::Fails;
    let small = shrink(inst, fails);
    let report = small.verify(theorem, bound);
    let dir = bundle_dir(seed, index, theorem.as_str());
    match write_bundle(&dir, &small, &report) {
        Ok(()) => format!("instance {index}: {} fails, bundle at {}", theorem.as_str(), dir.display()),
        Err(e) => format!("instance {index}: {} fails, bundle not written: {e}", theorem.as_str()),
    }
}

fn random_corpus() -> Outcome {
    let start = Instant::now();
    let seed = 7;
    let base = GenParams {
        seed,
        max_states: 6,
        alphabet_size: 3,
        formula_depth: 3,
        acyclic: true,
        ..GenParams::default()
    };
    let mut failures = Vec::new();
    let mut oracle_checks = 0;
    for index in 0..200 {
        let inst = random_instance(&base, index);
        let bound = inst.exact_bound().expect("acyclic corpus");
        for theorem in [Theorem::Disjunction, Theorem::Conjunction] {
            let verdict = inst.verify(theorem, bound).verdict;
            if verdict != Verdict::Holds {
                failures.push(if verdict == Verdict::Fails {
                    file_failure(&inst, theorem, bound, seed, index)
                } else {
                    format!("instance {index}: {} verdict {}", theorem.as_str(), verdict.as_str())
                });
            }
        }
        for report in [cross_check_disjunction_lifting(&inst, bound), cross_check_single_component(&inst, bound)] {
            failures.extend(report.violations.iter().map(|v| format!("instance {index}: {v}")));
        }
        let composite = inst.composite();
        let contexts = [
            EffectContext::new(inst.left.clone(), inst.phi.clone()).unwrap(),
            EffectContext::new(inst.right.clone(), inst.psi.clone()).unwrap(),
            EffectContext::new(composite.clone(), Formula::or(inst.phi.clone(), inst.psi.clone())).unwrap(),
            EffectContext::new(composite, Formula::and(inst.phi.clone(), inst.psi.clone())).unwrap(),
        ];
        for ctx in &contexts {
            for cause in causes(ctx, bound).causes {
                oracle_checks += 1;
                if !oracle_check_cause(ctx, &cause.computation, bound) {
                    failures.push(format!("instance {index}: oracle rejects {cause}"));
                }
            }
        }
    }
    within(start, Duration::from_secs(600))?;
    if failures.is_empty() {
        Ok(format!(
            "200/200 hold for both theorems, lemma checks clean, {oracle_checks} causes confirmed by the oracle, in {:?}",
            start.elapsed()
        ))
    } else {
        Err(format!("{} failures; first: {}", failures.len(), failures[0]))
    }
}

fn hml_properties() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut samples = 0;
    while samples < 500 {
        let p = GenParams {
            seed: rng.gen(),
            acyclic: rng.gen_bool(0.5),
            ..GenParams::default()
        };
        let lts: Lts = gen_lts(&p, "");
        let labels: Vec<Label> = lts.alphabet().iter().cloned().collect();
        for _ in 0..5 {
            let f = random_formula(&mut rng, &labels, 3);
            let g = random_formula(&mut rng, &labels, 2);
            let a = labels[rng.gen_range(0..labels.len())].clone();
            let s = &lts.states()[rng.gen_range(0..lts.state_count())];
            let sat = |x: &Formula| satisfies(&lts, s, x).unwrap();

            let boxed = Formula::boxed(a.clone(), f.clone());
            let dual = Formula::not(Formula::diamond(a.clone(), Formula::not(f.clone())));
            ensure(sat(&boxed) == sat(&dual), format!("duality fails for {f} at {s}"))?;
            ensure(
                sat(&Formula::and(f.clone(), g.clone())) == (sat(&f) && sat(&g))
                    && sat(&Formula::or(f.clone(), g.clone())) == (sat(&f) || sat(&g))
                    && sat(&Formula::not(f.clone())) == !sat(&f),
                format!("truth table fails for {f}, {g} at {s}"),
            )?;
            let blocked = !lts.init_actions(s).unwrap().contains(&a);
            ensure(!blocked || sat(&boxed), format!("box not vacuous for {boxed} at {s}"))?;
            ensure(!blocked || !sat(&Formula::diamond(a, f)), format!("diamond without step at {s}"))?;
            samples += 1;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{samples} samples in {:?}", start.elapsed()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("single-step cause", single_cause_fixture),
        ("kill traces and rejected candidates", branching_kills_and_rejections),
        ("nondeterministic step has no cause", nondeterministic_no_cause),
        ("idle loop at increasing bounds", idle_loop_bounded),
        ("longer cause when its prefix is not one", longer_cause_when_prefix_fails),
        ("immediate effect policy", immediate_effect),
        ("traces expansion", traces_worked_example),
        ("disjunction theorem on the composition example", pair_disjunction),
        ("conjunction theorem on the composition example", pair_conjunction),
        ("random corpus: theorems, lemmas, oracle", random_corpus),
        ("HML duality, truth tables, vacuous boxes", hml_properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
