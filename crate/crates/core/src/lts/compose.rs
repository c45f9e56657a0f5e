//! Interleaving (`||`) and nondeterministic choice (`+`) without
//! synchronization.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Label, Lts, StateId, Transition};

/// `left || right`: a pair state moves when either component moves, the other
/// component staying put. Only pairs reachable from the pair of initial
/// states are kept; the alphabet is the union of both alphabets.
pub fn interleave(left: &Lts, right: &Lts) -> Lts {
    let start = (left.initial_ix(), right.initial_ix());
    let pair_id = |(l, r): (usize, usize)| {
        StateId::pair(left.state_at(l).clone(), right.state_at(r).clone())
    };

    let mut seen: HashMap<(usize, usize), ()> = HashMap::from([(start, ())]);
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    let mut transitions: Vec<Transition> = Vec::new();
    while let Some((l, r)) = queue.pop_front() {
        let moves = left
            .successors_ix(l)
            .iter()
            .map(|(a, l2)| (a, (*l2, r)))
            .chain(right.successors_ix(r).iter().map(|(a, r2)| (a, (l, *r2))));
        for (a, next) in moves {
            transitions.push((pair_id((l, r)), a.clone(), pair_id(next)));
            if seen.insert(next, ()).is_none() {
                order.push(next);
                queue.push_back(next);
            }
        }
    }

    let alphabet: BTreeSet<Label> = left.alphabet().union(right.alphabet()).cloned().collect();
    Lts::new(order.into_iter().map(pair_id), pair_id(start), alphabet, transitions)
        .expect("interleaving of valid systems is valid")
}

/// `left + right`: a fresh initial state (`+`) offers every first step of
/// either operand and then behaves as the operand it chose. Operand states are
/// tagged `L:`/`R:` so ids never collide; unreachable states are pruned.
pub fn choice(left: &Lts, right: &Lts) -> Lts {
    let tag_left = |s: &StateId| StateId::Left(Box::new(s.clone()));
    let tag_right = |s: &StateId| StateId::Right(Box::new(s.clone()));

    let mut states = vec![StateId::ChoiceRoot];
    let mut transitions: Vec<Transition> = Vec::new();
    for (operand, tag) in [
        (left, &tag_left as &dyn Fn(&StateId) -> StateId),
        (right, &tag_right),
    ] {
        states.extend(operand.states().iter().map(tag));
        for (s, a, d) in operand.transitions() {
            if &s == operand.initial() {
                transitions.push((StateId::ChoiceRoot, a.clone(), tag(&d)));
            }
            transitions.push((tag(&s), a, tag(&d)));
        }
    }

    let alphabet: BTreeSet<Label> = left.alphabet().union(right.alphabet()).cloned().collect();
    Lts::new(states, StateId::ChoiceRoot, alphabet, transitions)
        .expect("choice of valid systems is valid")
        .reachable_part()
}
