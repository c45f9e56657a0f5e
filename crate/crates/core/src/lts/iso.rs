//! Rooted isomorphism of labeled transition systems by backtracking.
//!
//! States of the first system are visited in breadth-first order, so every
//! non-initial state has an already-mapped predecessor and its candidate
//! images are the matching successors of that predecessor's image. Candidates
//! must also agree on in/out label signatures.

use std::collections::{BTreeMap, HashMap};

use super::{Label, Lts, StateId};

type EdgeLabels = HashMap<(usize, usize), Vec<Label>>;

struct Side {
    lts: Lts,
    edges: EdgeLabels,
    signature: Vec<(Vec<Label>, Vec<Label>)>,
}

impl Side {
    fn new(lts: &Lts) -> Self {
        let lts = lts.reachable_part();
        let n = lts.state_count();
        let mut edges: EdgeLabels = HashMap::new();
        let mut signature = vec![(Vec::new(), Vec::new()); n];
        for (s, l, d) in lts.transitions_ix() {
            edges.entry((*s, *d)).or_default().push(l.clone());
            signature[*s].0.push(l.clone());
            signature[*d].1.push(l.clone());
        }
        for v in edges.values_mut() {
            v.sort();
        }
        for (out, inc) in &mut signature {
            out.sort();
            inc.sort();
        }
        Side {
            lts,
            edges,
            signature,
        }
    }

    fn labels(&self, s: usize, d: usize) -> &[Label] {
        self.edges.get(&(s, d)).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Returns a bijection between the reachable states of `a` and `b` that maps
/// initial to initial and preserves transitions in both directions, or `None`
/// when none exists.
pub fn isomorphic(a: &Lts, b: &Lts) -> Option<BTreeMap<StateId, StateId>> {
    let a = Side::new(a);
    let b = Side::new(b);
    if a.lts.state_count() != b.lts.state_count()
        || a.lts.transition_count() != b.lts.transition_count()
    {
        return None;
    }
    let mut a_sigs: Vec<_> = a.signature.clone();
    let mut b_sigs: Vec<_> = b.signature.clone();
    a_sigs.sort();
    b_sigs.sort();
    if a_sigs != b_sigs {
        return None;
    }

    let order = a.lts.reachable_ix();
    let position: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    // For each state after the first: a predecessor earlier in the order.
    let parent: Vec<Option<(usize, Label)>> = order
        .iter()
        .map(|&v| {
            a.lts
                .transitions_ix()
                .iter()
                .filter(|(s, _, d)| *d == v && position[s] < position[&v])
                .map(|(s, l, _)| (*s, l.clone()))
                .next()
        })
        .collect();

    let n = order.len();
    let mut image: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    if !search(&a, &b, &order, &parent, 0, &mut image, &mut used) {
        return None;
    }
    Some(
        order
            .iter()
            .map(|&v| {
                let w = image[v].expect("complete mapping");
                (a.lts.state_at(v).clone(), b.lts.state_at(w).clone())
            })
            .collect(),
    )
}

fn search(
    a: &Side,
    b: &Side,
    order: &[usize],
    parent: &[Option<(usize, Label)>],
    depth: usize,
    image: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    let candidates: Vec<usize> = match &parent[depth] {
        None => vec![b.lts.initial_ix()],
        Some((p, label)) => {
            let fp = image[*p].expect("parent mapped first");
            let mut c: Vec<usize> = b
                .lts
                .successors_ix(fp)
                .iter()
                .filter(|(l, _)| l == label)
                .map(|(_, t)| *t)
                .collect();
            c.dedup();
            c
        }
    };
    for w in candidates {
        if used[w] || a.signature[v] != b.signature[w] {
            continue;
        }
        let consistent = order[..depth].iter().chain(std::iter::once(&v)).all(|&u| {
            let fu = if u == v { w } else { image[u].expect("mapped") };
            a.labels(v, u) == b.labels(w, fu) && a.labels(u, v) == b.labels(fu, w)
        });
        if !consistent {
            continue;
        }
        image[v] = Some(w);
        used[w] = true;
        if search(a, b, order, parent, depth + 1, image, used) {
            return true;
        }
        image[v] = None;
        used[w] = false;
    }
    false
}
