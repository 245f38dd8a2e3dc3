use std::collections::HashMap;

use super::CategoryTable;
use crate::error::{Error, Result};

/// Grapheme inventory used for counting. Units may be multigraphs such as "ch".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    graphemes: Vec<String>,
    fold_case: bool,
    /// Folded unit (as chars) → index into `graphemes`.
    lookup: HashMap<Vec<char>, usize>,
    longest: usize,
}

fn fold(s: &str, fold_case: bool) -> Vec<char> {
    if fold_case {
        s.chars().flat_map(char::to_lowercase).collect()
    } else {
        s.chars().collect()
    }
}

impl Alphabet {
    pub fn new<I, S>(graphemes: I, fold_case: bool) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let graphemes: Vec<String> = graphemes.into_iter().map(Into::into).collect();
        if graphemes.is_empty() {
            return Err(Error::EmptyInput("alphabet has no graphemes".into()));
        }
        let mut lookup = HashMap::with_capacity(graphemes.len());
        let mut longest = 0;
        for (i, g) in graphemes.iter().enumerate() {
            let key = fold(g, fold_case);
            if key.is_empty() {
                return Err(Error::Value("empty grapheme in alphabet".into()));
            }
            longest = longest.max(key.len());
            if lookup.insert(key, i).is_some() {
                return Err(Error::Duplicate {
                    language: "<alphabet>".into(),
                    label: g.clone(),
                });
            }
        }
        Ok(Alphabet {
            graphemes,
            fold_case,
            lookup,
            longest,
        })
    }

    pub fn graphemes(&self) -> &[String] {
        &self.graphemes
    }

    pub fn fold_case(&self) -> bool {
        self.fold_case
    }

    pub fn len(&self) -> usize {
        self.graphemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphemes.is_empty()
    }

    /// Greedy longest-match scan; yields the alphabet index of every matched
    /// unit and silently skips characters that start no unit.
    pub fn tokenize(&self, text: &str) -> Vec<usize> {
        let chars = fold(text, self.fold_case);
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < chars.len() {
            let max = self.longest.min(chars.len() - pos);
            let hit = (1..=max)
                .rev()
                .find_map(|len| self.lookup.get(&chars[pos..pos + len]).map(|&i| (i, len)));
            match hit {
                Some((idx, len)) => {
                    out.push(idx);
                    pos += len;
                }
                None => pos += 1,
            }
        }
        out
    }
}

/// Parses an alphabet file: one grapheme per line, `#` lines and blank lines ignored.
pub fn load_alphabet(text: &str, fold_case: bool) -> Result<Alphabet> {
    let units = text
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(str::trim);
    Alphabet::new(units, fold_case)
}

/// Counts alphabet units in `text`. Every grapheme of the alphabet becomes a
/// category, so `K` equals the alphabet size even when some counts are zero.
pub fn count_graphemes(text: &str, alphabet: &Alphabet) -> Result<CategoryTable> {
    if text.is_empty() {
        return Err(Error::EmptyInput("text is empty".into()));
    }
    let mut counts = vec![0u64; alphabet.len()];
    for idx in alphabet.tokenize(text) {
        counts[idx] += 1;
    }
    if counts.iter().all(|&c| c == 0) {
        log::warn!("no alphabet unit matched anywhere in the text");
        return Err(Error::EmptyInput(
            "no alphabet unit matched in the text".into(),
        ));
    }
    CategoryTable::new(alphabet.graphemes.clone(), counts)
}
