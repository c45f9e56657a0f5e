#![allow(dead_code)]

use proptest::prelude::*;

use hmlcause::hml::Formula;
use hmlcause::lts::{Label, Lts, StateId};

pub const LABELS: [&str; 3] = ["a", "b", "h"];

pub fn label(name: &str) -> Label {
    Label::new(name).unwrap()
}

/// Small systems over `a`, `b`, `h`; possibly cyclic and nondeterministic.
pub fn any_lts(max_states: usize, max_edges: usize) -> impl Strategy<Value = Lts> {
    (1..=max_states).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..LABELS.len(), 0..n), 0..=max_edges).prop_map(move |edges| {
            let state = |i: usize| StateId::named(format!("q{i}"));
            Lts::new(
                (0..n).map(state),
                state(0),
                LABELS.iter().map(|l| label(l)),
                edges.into_iter().map(|(s, l, d)| (state(s), label(LABELS[l]), state(d))),
            )
            .unwrap()
        })
    })
}

/// Same, but edges only go forward, so the system is acyclic.
pub fn acyclic_lts(max_states: usize, max_edges: usize) -> impl Strategy<Value = Lts> {
    any_lts(max_states, max_edges).prop_map(|t| {
        let index = |s: &StateId| s.to_string()[1..].parse::<usize>().unwrap();
        let edges: Vec<_> = t.transitions().filter(|(s, _, d)| index(s) < index(d)).collect();
        Lts::new(t.states().to_vec(), t.initial().clone(), t.alphabet().clone(), edges).unwrap()
    })
}

pub fn any_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::Top), Just(Formula::not(Formula::Top))];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        let l = prop::sample::select(LABELS.to_vec());
        prop_oneof![
            (l.clone(), inner.clone()).prop_map(|(a, f)| Formula::diamond(label(a), f)),
            (l, inner.clone()).prop_map(|(a, f)| Formula::boxed(label(a), f)),
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| Formula::and(f, g)),
            (inner.clone(), inner).prop_map(|(f, g)| Formula::or(f, g)),
        ]
    })
}
