//! Action labels and finite words over them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LtsError;

/// An action label. Two labels are equal iff their names are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    /// Builds a label, rejecting empty names and names containing whitespace
    /// or quote characters.
    pub fn new(name: &str) -> Result<Self, LtsError> {
        if name.is_empty() {
            return Err(LtsError::InvalidLabel(name.to_string()));
        }
        if name.chars().any(|c| c.is_whitespace() || c == '"') {
            return Err(LtsError::InvalidLabel(name.to_string()));
        }
        Ok(Label(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Label::new(&name).map_err(serde::de::Error::custom)
    }
}

/// A finite sequence of labels; the empty word is written `ε`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Label>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_labels(labels: Vec<Label>) -> Self {
        Word(labels)
    }

    /// Splits `text` into one label per character. Convenient for the
    /// single-letter alphabets used throughout the tests and fixtures.
    pub fn from_chars(text: &str) -> Self {
        Word(
            text.chars()
                .map(|c| Label::new(&c.to_string()).expect("character labels are valid"))
                .collect(),
        )
    }

    /// Parses a word written either as space separated labels (`"a h'"`) or,
    /// when it contains no whitespace, one label per character (`"ah"`).
    /// `ε` and the empty string denote the empty word.
    pub fn parse(text: &str) -> Result<Self, LtsError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        if text.contains(char::is_whitespace) {
            text.split_whitespace()
                .map(Label::new)
                .collect::<Result<Vec<_>, _>>()
                .map(Word)
        } else {
            Ok(Word::from_chars(text))
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, label: Label) {
        self.0.push(label);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        Word(letters)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Label> {
        self.0.iter()
    }

    /// `true` iff `self` can be obtained from `other` by deleting zero or more
    /// letters.
    pub fn is_subsequence_of(&self, other: &Word) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|l| it.any(|m| m == l))
    }
}

impl FromIterator<Label> for Word {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Label;
    type IntoIter = std::slice::Iter<'a, Label>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Word {
    /// Single-character labels are concatenated (`abh`); otherwise labels are
    /// separated by spaces so the rendering stays unambiguous.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let compact = self.0.iter().all(|l| l.name().chars().count() == 1);
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(" ")?;
            }
            f.write_str(l.name())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// All words obtained from `w` by deleting at least one letter. Contains ε
/// whenever `w` is nonempty and never contains `w` itself; the empty word has
/// no sub-words.
pub fn subwords(w: &Word) -> BTreeSet<Word> {
    let n = w.len();
    let mut out = BTreeSet::new();
    if n == 0 {
        return out;
    }
    // Every mask except the full one selects a proper subsequence.
    for mask in 0u64..(1u64 << n) - 1 {
        let kept = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| w.0[i].clone())
            .collect();
        out.insert(Word(kept));
    }
    out
}

/// The subsequence of `w` made of the letters in `alphabet`, order preserved.
pub fn project_word(w: &Word, alphabet: &BTreeSet<Label>) -> Word {
    w.iter().filter(|l| alphabet.contains(*l)).cloned().collect()
}
