use indexmap::IndexMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use super::CategoryTable;
use crate::error::{Error, Result};

/// Language code → table, in order of first appearance in the input.
pub type Tables = IndexMap<String, CategoryTable>;

const LONG_HEADER: &str = "language\tgrapheme\tcount";

/// On-disk TSV layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// `language<TAB>grapheme<TAB>count`, one row per pair.
    Long,
    /// `rank<TAB>lang1<TAB>lang2 ...`, one column of ranked counts per language.
    Matrix,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "long" => Ok(Format::Long),
            "matrix" => Ok(Format::Matrix),
            other => Err(Error::Value(format!(
                "unknown format {other:?} (expected long or matrix)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Format::Long => "long",
            Format::Matrix => "matrix",
        })
    }
}

/// Reads every language table from `stream`.
pub fn load_tables<R: Read>(mut stream: R, format: Format) -> Result<Tables> {
    let text = read_utf8(&mut stream)?;
    match format {
        Format::Long => parse_long(&text),
        Format::Matrix => parse_matrix(&text),
    }
}

/// Like [`load_tables`], picking the format from the header line.
pub fn load_tables_auto<R: Read>(mut stream: R) -> Result<(Tables, Format)> {
    let text = read_utf8(&mut stream)?;
    let header = text.lines().next().unwrap_or_default();
    if header.trim_end_matches('\r') == LONG_HEADER {
        Ok((parse_long(&text)?, Format::Long))
    } else if header.split('\t').next() == Some("rank") {
        Ok((parse_matrix(&text)?, Format::Matrix))
    } else if text.trim().is_empty() {
        Err(Error::EmptyInput("no header line".into()))
    } else {
        Err(Error::Parse {
            line: 1,
            message: "header matches neither long nor matrix format".into(),
        })
    }
}

fn read_utf8<R: Read>(stream: &mut R) -> Result<String> {
    let mut bytes = Vec::new();
    stream
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io("<input>", e))?;
    String::from_utf8(bytes).map_err(|e| {
        let line = 1 + e.as_bytes()[..e.utf8_error().valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        Error::Parse {
            line,
            message: "invalid UTF-8".into(),
        }
    })
}

fn parse_count(cell: &str, line: usize) -> Result<u64> {
    let cell = cell.trim();
    if let Some(rest) = cell.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Value(format!("line {line}: negative count {cell}")));
        }
    }
    if cell.is_empty() || !cell.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            line,
            message: format!("count {cell:?} is not a non-negative integer"),
        });
    }
    cell.parse().map_err(|_| Error::Parse {
        line,
        message: format!("count {cell:?} out of range"),
    })
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

fn parse_long(text: &str) -> Result<Tables> {
    let mut rows = lines(text);
    match rows.next() {
        Some((_, LONG_HEADER)) => {}
        Some((line, _)) => {
            return Err(Error::Parse {
                line,
                message: format!("expected header {LONG_HEADER:?}"),
            })
        }
        None => return Err(Error::EmptyInput("no header line".into())),
    }

    let mut raw: IndexMap<String, (Vec<String>, Vec<u64>)> = IndexMap::new();
    for (line, row) in rows {
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split('\t').collect();
        let [language, label, count] = fields[..] else {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        };
        if language.is_empty() || label.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty language or grapheme".into(),
            });
        }
        let count = parse_count(count, line)?;
        let entry = raw.entry(language.to_string()).or_default();
        if entry.0.iter().any(|l| l == label) {
            return Err(Error::Duplicate {
                language: language.into(),
                label: label.into(),
            });
        }
        entry.0.push(label.to_string());
        entry.1.push(count);
    }
    finish(raw)
}

fn parse_matrix(text: &str) -> Result<Tables> {
    let mut rows = lines(text);
    let (hline, header) = rows
        .next()
        .ok_or_else(|| Error::EmptyInput("no header line".into()))?;
    let mut cols = header.split('\t');
    if cols.next() != Some("rank") {
        return Err(Error::Parse {
            line: hline,
            message: "matrix header must start with \"rank\"".into(),
        });
    }
    let languages: Vec<&str> = cols.collect();
    if languages.is_empty() {
        return Err(Error::EmptyInput("matrix header names no languages".into()));
    }
    let mut raw: IndexMap<String, (Vec<String>, Vec<u64>)> = IndexMap::new();
    for lang in &languages {
        if lang.is_empty() {
            return Err(Error::Parse {
                line: hline,
                message: "empty language name".into(),
            });
        }
        if raw.insert(lang.to_string(), Default::default()).is_some() {
            return Err(Error::Duplicate {
                language: lang.to_string(),
                label: "<column>".into(),
            });
        }
    }
    let mut ended = vec![false; languages.len()];
    let mut expected_rank = 1usize;
    for (line, row) in rows {
        if row.trim().is_empty() {
            continue;
        }
        let mut cells = row.split('\t');
        let rank = cells.next().unwrap_or_default().trim();
        if rank.parse::<usize>().ok() != Some(expected_rank) {
            return Err(Error::Parse {
                line,
                message: format!("expected rank {expected_rank}, found {rank:?}"),
            });
        }
        let cells: Vec<&str> = cells.collect();
        if cells.len() > languages.len() {
            return Err(Error::Parse {
                line,
                message: format!("{} cells for {} languages", cells.len(), languages.len()),
            });
        }
        for (j, lang) in languages.iter().enumerate() {
            let cell = cells.get(j).map(|c| c.trim()).unwrap_or("");
            if cell.is_empty() {
                ended[j] = true;
                continue;
            }
            if ended[j] {
                return Err(Error::Parse {
                    line,
                    message: format!("{lang}: count after a blank cell"),
                });
            }
            let count = parse_count(cell, line)?;
            let entry = &mut raw[*lang];
            entry.0.push(rank.to_string());
            entry.1.push(count);
        }
        expected_rank += 1;
    }
    finish(raw)
}

fn finish(raw: IndexMap<String, (Vec<String>, Vec<u64>)>) -> Result<Tables> {
    if raw.is_empty() {
        return Err(Error::EmptyInput("no data rows".into()));
    }
    raw.into_iter()
        .map(|(lang, (labels, counts))| {
            let table = CategoryTable::new(labels, counts).map_err(|e| match e {
                Error::Duplicate { label, .. } => Error::Duplicate {
                    language: lang.clone(),
                    label,
                },
                other => other.context(format!("language {lang}")),
            })?;
            Ok((lang, table))
        })
        .collect()
}

/// Writes tables in either layout. The matrix layout stores ranks only, so every
/// table must be labeled `"1"..="K"`.
pub fn save_tables<W: Write>(tables: &Tables, format: Format, mut out: W) -> Result<()> {
    let mut buf = String::new();
    match format {
        Format::Long => {
            buf.push_str(LONG_HEADER);
            buf.push('\n');
            for (lang, table) in tables {
                for (label, count) in table.iter() {
                    buf.push_str(&format!("{lang}\t{label}\t{count}\n"));
                }
            }
        }
        Format::Matrix => {
            for (lang, table) in tables {
                let rank_labeled = table
                    .labels()
                    .iter()
                    .enumerate()
                    .all(|(i, l)| *l == (i + 1).to_string());
                if !rank_labeled {
                    return Err(Error::Value(format!(
                        "language {lang}: matrix format needs labels 1..K"
                    )));
                }
            }
            buf.push_str("rank");
            for lang in tables.keys() {
                buf.push('\t');
                buf.push_str(lang);
            }
            buf.push('\n');
            let rows = tables
                .values()
                .map(|t| t.num_categories())
                .max()
                .unwrap_or(0);
            for r in 0..rows {
                buf.push_str(&(r + 1).to_string());
                for table in tables.values() {
                    buf.push('\t');
                    if let Some(c) = table.counts().get(r) {
                        buf.push_str(&c.to_string());
                    }
                }
                buf.push('\n');
            }
        }
    }
    out.write_all(buf.as_bytes())
        .map_err(|e| Error::io("<output>", e))
}
