use super::*;
use crate::computation::DList;
use crate::hml::parse_formula;

fn w(text: &str) -> Word {
    Word::from_chars(text)
}

fn words(items: &[&str]) -> BTreeSet<Word> {
    items.iter().map(|s| w(s)).collect()
}

fn ctx(lts: Lts, phi: &str) -> EffectContext {
    EffectContext::new(lts, parse_formula(phi).unwrap()).unwrap()
}

fn core(states: &[&str], labels: &str) -> Core {
    Core::new(states.iter().map(|s| StateId::from(*s)).collect(), w(labels)).unwrap()
}

fn t1() -> Lts {
    LtsBuilder::new("s10").edge("s10", "a", "s11").edge("s11", "h", "s12").build()
}

fn t2() -> Lts {
    LtsBuilder::new("s20")
        .edge("s20", "h", "s20")
        .edge("s20", "a", "s21")
        .edge("s21", "h", "s21")
        .build()
}

fn t3() -> Lts {
    LtsBuilder::new("s30")
        .edge("s30", "a", "s31")
        .edge("s31", "h", "s33")
        .edge("s30", "a", "s32")
        .build()
}

fn t4() -> Lts {
    LtsBuilder::new("s40")
        .edge("s40", "a", "s42")
        .edge("s42", "h", "s45")
        .edge("s42", "b", "s43")
        .edge("s43", "h", "s46")
        .edge("s43", "b", "s44")
        .build()
}

fn t5() -> Lts {
    LtsBuilder::new("s50")
        .edge("s50", "a", "s51")
        .edge("s51", "i", "s51")
        .edge("s51", "h", "s52")
        .build()
}

fn t6() -> Lts {
    LtsBuilder::new("s60")
        .edge("s60", "a", "s61")
        .edge("s61", "h", "s64")
        .edge("s61", "b", "s62")
        .edge("s62", "h", "s67")
        .edge("s60", "a", "s63")
        .edge("s63", "b", "s65")
        .edge("s65", "h", "s66")
        .build()
}

#[test]
fn word_classes() {
    let c = ctx(t3(), "<h>tt");
    assert_eq!(classify_word(&c, &w("a")), Classification::Mixed);
    assert_eq!(classify_word(&c, &w("ah")), Classification::AllViolate);
    assert_eq!(classify_word(&c, &w("b")), Classification::NotExecutable);
    assert_eq!(classify_word(&c, &w("z")), Classification::NotExecutable);
    assert_eq!(classify_word(&c, &w("")), Classification::AllViolate);
}

#[test]
fn universe_of_t4() {
    let u = extension_universe(&t4(), &core(&["s40", "s42"], "a"), 2);
    assert_eq!(u, words(&["a", "ab", "ah", "abb", "abh"]));
    let u1 = extension_universe(&t4(), &core(&["s40", "s42"], "a"), 1);
    assert_eq!(u1, words(&["a", "ab", "ah"]));
}

#[test]
fn universe_of_trivial_core() {
    assert_eq!(extension_universe(&t4(), &Core::trivial("s40".into()), 3), words(&[""]));
}

#[test]
fn t1_single_cause() {
    let set = causes(&ctx(t1(), "<h>tt"), 2);
    assert_eq!(set.len(), 1);
    assert_eq!(set.causes[0].core_word(), w("a"));
    assert_eq!(set.causes[0].kill_traces, words(&["ah"]));
    assert_eq!(set.exactness, Exactness::Exact);
}

#[test]
fn t3_has_no_cause() {
    let c = ctx(t3(), "<h>tt");
    assert!(causes(&c, 3).is_empty());
    let out = cause_candidate(&c, &core(&["s30", "s31"], "a"), 2);
    assert_eq!(out.conditions.first_failure(), Some(Condition::Ac2b));
    assert!(out.computation.is_none());
}

#[test]
fn t4_cause_and_rejections() {
    let c = ctx(t4(), "<h>tt");
    let set = causes(&c, 3);
    assert_eq!(set.len(), 1);
    let cause = &set.causes[0];
    assert_eq!(cause.core_word(), w("a"));
    assert_eq!(cause.kill_traces, words(&["ah", "abb", "abh"]));
    assert_eq!(set.exactness, Exactness::Exact);
    let dl = &cause.computation.steps()[0].dlist;
    assert_eq!(dl.words(), [w("bb"), w("bh"), w("h")]);

    let bare = Computation::from_core(&core(&["s40", "s42"], "a"), vec![DList::empty()]).unwrap();
    let verdict = check_computation(&c, &bare, 3);
    assert!(verdict.ac1 && verdict.ac2a);
    assert!(!verdict.ac2b);

    let ab = judge_core(&c, &core(&["s40", "s42", "s43"], "ab"), 3);
    assert!(ab.satisfiable());
    assert_eq!(ab.first_failure(), Some(Condition::Ac3));
}

#[test]
fn t4_given_computation_is_a_cause() {
    let c = ctx(t4(), "<h>tt");
    let pi = Computation::from_core(
        &core(&["s40", "s42"], "a"),
        vec![DList::new(vec![w("h"), w("bb"), w("bh")])],
    )
    .unwrap();
    assert!(check_computation(&c, &pi, 2).holds());
    assert!(oracle_check_cause(&c, &pi, 2));
}

#[test]
fn t5_is_bounded() {
    let set = causes(&ctx(t5(), "<h>tt"), 4);
    assert_eq!(set.len(), 1);
    assert_eq!(set.causes[0].kill_traces, words(&["ah", "aih", "aiih", "aiiih"]));
    assert_eq!(set.exactness, Exactness::BoundedApprox);
    assert!(set.causes[0].computation.truncated());
}

#[test]
fn t6_cause_needs_two_letters() {
    let set = causes(&ctx(t6(), "<h>tt"), 3);
    let cores = set.core_words();
    assert!(cores.contains(&w("ab")));
    assert!(!cores.contains(&w("a")));
    assert_eq!(set.len(), 2);
}

#[test]
fn immediate_effect_policy() {
    let set = causes(&ctx(t2(), "<h>tt"), 3);
    assert!(set.immediate);
    assert!(set.is_empty());

    let set = causes(&ctx(t1(), "[h]ff"), 3);
    assert!(set.immediate);
    assert_eq!(set.len(), 1);
    assert!(set.causes[0].computation.is_trivial());
}

#[test]
fn unreachable_violation_means_no_cause() {
    let set = causes(&ctx(t1(), "tt"), 3);
    assert!(set.is_empty());
}

#[test]
fn projection_of_t4() {
    let p = causal_projection(&ctx(t4(), "<h>tt"), 3);
    assert_eq!(p.transition_count(), 1);
    assert_eq!(p.state_count(), 2);
    assert_eq!(p.alphabet(), t4().alphabet());
}

#[test]
fn projection_without_causes_keeps_initial() {
    let p = causal_projection(&ctx(t3(), "<h>tt"), 3);
    assert_eq!(p.state_count(), 1);
    assert_eq!(p.transition_count(), 0);
    assert_eq!(p.initial(), &StateId::from("s30"));
}

#[test]
fn engine_causes_pass_the_oracle() {
    let cases = [(t1(), 2), (t4(), 3), (t5(), 3), (t6(), 3)];
    for (lts, k) in cases {
        let c = ctx(lts, "<h>tt");
        for cause in causes(&c, k).causes {
            assert!(oracle_check_cause(&c, &cause.computation, k), "{cause}");
            assert!(oracle_core_is_cause(&c, &cause.core(), k));
        }
    }
}

#[test]
fn oracle_rejects_t3_cores() {
    let c = ctx(t3(), "<h>tt");
    assert!(!oracle_core_is_cause(&c, &core(&["s30", "s31"], "a"), 3));
    assert!(!oracle_core_is_cause(&c, &core(&["s30", "s31", "s33"], "ah"), 3));
}

#[test]
fn json_shape() {
    let v = causes(&ctx(t4(), "<h>tt"), 3).to_json();
    assert_eq!(v["exactness"], "exact");
    assert_eq!(v["policy"], "standard");
    assert_eq!(v["causes"][0]["core"]["labels"], serde_json::json!(["a"]));
    assert_eq!(v["causes"][0]["kill_traces"].as_array().unwrap().len(), 3);
}
