//! Aldebaran (`.aut`) reading and writing.
//!
//! ```text
//! des (I,T,N)
//! (src,"label",dst)      -- exactly T lines, 0 <= src,dst < N
//! #alphabet: x y         -- optional, declares labels without transitions
//! # anything else        -- comment
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{Label, Lts, StateId};
use crate::error::LtsError;

const ALPHABET_DIRECTIVE: &str = "#alphabet:";

/// Parses an AUT document. State `i` becomes [`StateId::Name`]`("i")`.
pub fn parse_aut(text: &str) -> Result<Lts, LtsError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (header_line, header) = lines
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| LtsError::aut(1, "missing `des` header"))?;
    let (initial, declared, count) = parse_header(header_line, header)?;
    if initial >= count {
        return Err(LtsError::aut(
            header_line,
            format!("initial state {initial} out of range (state count {count})"),
        ));
    }

    let mut alphabet = BTreeSet::new();
    let mut transitions = Vec::with_capacity(declared);
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(ALPHABET_DIRECTIVE) {
            for name in rest.split_whitespace() {
                alphabet.insert(Label::new(name).map_err(|e| LtsError::aut(line_no, e.to_string()))?);
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let (src, label, dst) = parse_transition(line_no, line)?;
        for s in [src, dst] {
            if s >= count {
                return Err(LtsError::aut(
                    line_no,
                    format!("state index {s} out of range (state count {count})"),
                ));
            }
        }
        alphabet.insert(label.clone());
        transitions.push((src, label, dst));
    }
    if transitions.len() != declared {
        return Err(LtsError::aut(
            header_line,
            format!(
                "header declares {declared} transitions but {} were found",
                transitions.len()
            ),
        ));
    }

    let id = |i: usize| StateId::named(i.to_string());
    Lts::new(
        (0..count).map(id),
        id(initial),
        alphabet,
        transitions.into_iter().map(|(s, l, d)| (id(s), l, id(d))),
    )
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize, usize), LtsError> {
    let bad = || LtsError::aut(line_no, format!("malformed header {line:?}, expected `des (I,T,N)`"));
    let rest = line.strip_prefix("des").ok_or_else(bad)?.trim();
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let fields: Vec<usize> = inner
        .split(',')
        .map(|f| f.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match fields.as_slice() {
        &[i, t, n] => Ok((i, t, n)),
        _ => Err(bad()),
    }
}

fn parse_transition(line_no: usize, line: &str) -> Result<(usize, Label, usize), LtsError> {
    let bad = |what: &str| LtsError::aut(line_no, format!("{what} in transition {line:?}"));
    let inner = line
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| bad("missing parentheses"))?;
    let (src, rest) = inner.split_once(',').ok_or_else(|| bad("missing source"))?;
    let rest = rest.trim_start();
    let (name, rest) = if let Some(quoted) = rest.strip_prefix('"') {
        let end = quoted.find('"').ok_or_else(|| bad("unterminated quoted label"))?;
        (&quoted[..end], &quoted[end + 1..])
    } else {
        let end = rest.find(',').ok_or_else(|| bad("missing target"))?;
        (rest[..end].trim(), &rest[end..])
    };
    let dst = rest
        .trim_start()
        .strip_prefix(',')
        .ok_or_else(|| bad("missing target"))?;
    let parse_ix = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("bad state index"));
    let label = Label::new(name).map_err(|e| LtsError::aut(line_no, e.to_string()))?;
    Ok((parse_ix(src)?, label, parse_ix(dst)?))
}

/// Writes `lts` in AUT form. The initial state is numbered 0, remaining
/// reachable states follow in breadth-first order, unreachable states last.
/// Alphabet labels without transitions go into an `#alphabet:` directive.
pub fn to_aut(lts: &Lts) -> String {
    let mut order = lts.reachable_ix();
    let mut seen: BTreeSet<usize> = order.iter().copied().collect();
    for i in 0..lts.state_count() {
        if seen.insert(i) {
            order.push(i);
        }
    }
    let number: BTreeMap<usize, usize> = order.iter().enumerate().map(|(n, &i)| (i, n)).collect();
    let mut edges: Vec<(usize, &Label, usize)> = lts
        .transitions_ix()
        .iter()
        .map(|(s, l, d)| (number[s], l, number[d]))
        .collect();
    edges.sort();

    let mut out = String::new();
    let _ = writeln!(out, "des ({},{},{})", 0, edges.len(), lts.state_count());
    for (s, l, d) in &edges {
        let _ = writeln!(out, "({s},\"{l}\",{d})");
    }
    let used: BTreeSet<&Label> = edges.iter().map(|(_, l, _)| *l).collect();
    let extra: Vec<&str> = lts
        .alphabet()
        .iter()
        .filter(|l| !used.contains(l))
        .map(Label::name)
        .collect();
    if !extra.is_empty() {
        let _ = writeln!(out, "{ALPHABET_DIRECTIVE} {}", extra.join(" "));
    }
    out
}
