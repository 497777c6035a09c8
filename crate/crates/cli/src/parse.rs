//! The line-oriented presentation file format.
//!
//! ```text
//! # lpres v1
//! generators: a b
//! fixed:
//! endo sigma: a -> b^2, b -> a
//! iterated: [a, a^b]
//! subgroup U1: a, b*a*b^-1, b^3
//! ```
//!
//! Words are products of generators written by juxtaposition or with `*`;
//! `u^n` is a power, `u^v` the conjugate `v^-1 u v`, `[u, v]` the commutator
//! `u^-1 v^-1 u v` and `1` the identity. A run of letters is split into
//! generator names by repeatedly taking the longest declared prefix.

use lpres_core::{Alphabet, FreeEndomorphism, Invariance, LPresentation, Substitution, Word};

use crate::error::CliError;

pub const HEADER: &str = "# lpres v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedSubgroup {
    pub name: String,
    pub generators: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: LPresentation,
    pub subgroups: Vec<NamedSubgroup>,
}

impl PresentationFile {
    pub fn subgroup(&self, name: &str) -> Result<&NamedSubgroup, CliError> {
        self.subgroups
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| CliError::UnknownSubgroup(name.to_string()))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Recursive-descent parser for a single word.
struct WordParser<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
    offset: usize,
    alphabet: &'a Alphabet,
}

impl<'a> WordParser<'a> {
    fn error(&self, message: impl Into<String>) -> CliError {
        CliError::parse(self.line, self.offset + self.pos + 1, message)
    }

    fn skip_spaces(&mut self) {
        while self.text.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_spaces();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), CliError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn starts_atom(c: u8) -> bool {
        c.is_ascii_alphabetic() || c == b'_' || c == b'1' || c == b'(' || c == b'['
    }

    fn product(&mut self) -> Result<Word, CliError> {
        let mut w = self.term()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    w = w.mul(&self.term()?);
                }
                Some(c) if Self::starts_atom(c) => w = w.mul(&self.term()?),
                _ => return Ok(w),
            }
        }
    }

    fn term(&mut self) -> Result<Word, CliError> {
        let mut w = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c == b'-' || c.is_ascii_digit() => w = w.pow(self.integer()?),
                Some(c) if Self::starts_atom(c) => w = w.conjugate_by(&self.atom()?),
                _ => return Err(self.error("expected an exponent or a conjugating word after '^'")),
            }
        }
        Ok(w)
    }

    fn integer(&mut self) -> Result<i64, CliError> {
        let start = self.pos;
        if self.text[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.text.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                self.pos = start;
                self.error("malformed exponent")
            })
    }

    fn atom(&mut self) -> Result<Word, CliError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.product()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut w = self.product()?;
                let mut parts = 1;
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    w = Word::commutator(&w, &self.product()?);
                    parts += 1;
                }
                if parts < 2 {
                    return Err(self.error("a commutator needs at least two entries"));
                }
                self.expect(b']')?;
                Ok(w)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.generator(),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of word")),
        }
    }

    /// The longest declared generator name at the current position.
    fn generator(&mut self) -> Result<Word, CliError> {
        let rest = &self.text[self.pos..];
        let best = self
            .alphabet
            .names()
            .iter()
            .enumerate()
            .filter(|(_, name)| rest.starts_with(name.as_bytes()))
            .max_by_key(|(_, name)| name.len());
        match best {
            Some((g, name)) => {
                self.pos += name.len();
                Ok(Word::generator(g))
            }
            None => {
                let run: String = rest
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == b'_')
                    .map(|&c| c as char)
                    .collect();
                Err(self.error(format!("undeclared generator in {run:?}")))
            }
        }
    }
}

/// Parses one word; `offset` is the 0-based column of `text` within line `line`.
pub fn parse_word(
    text: &str,
    alphabet: &Alphabet,
    line: usize,
    offset: usize,
) -> Result<Word, CliError> {
    let mut p = WordParser {
        text: text.as_bytes(),
        pos: 0,
        line,
        offset,
        alphabet,
    };
    let w = p.product()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(w)
}

/// Splits at commas outside brackets, returning each piece with its offset.
fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

fn trimmed(offset: usize, s: &str) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (offset + lead, s.trim())
}

#[derive(Default)]
struct Builder {
    alphabet: Option<Alphabet>,
    fixed: Vec<Word>,
    iterated: Vec<Word>,
    substitutions: Vec<Substitution>,
    subgroups: Vec<NamedSubgroup>,
    invariant: Option<bool>,
}

impl Builder {
    fn alphabet(&self, line: usize) -> Result<&Alphabet, CliError> {
        self.alphabet
            .as_ref()
            .ok_or_else(|| CliError::parse(line, 1, "words used before the generators line"))
    }

    fn word_list(&self, body: &str, line: usize, offset: usize) -> Result<Vec<Word>, CliError> {
        let alphabet = self.alphabet(line)?;
        if body.trim().is_empty() {
            return Ok(Vec::new());
        }
        split_top_level(body)
            .into_iter()
            .map(|(o, item)| {
                let (o, item) = trimmed(offset + o, item);
                if item.is_empty() {
                    return Err(CliError::parse(line, o + 1, "empty list entry"));
                }
                parse_word(item, alphabet, line, o)
            })
            .collect()
    }

    fn endomorphism(&self, body: &str, line: usize, offset: usize) -> Result<FreeEndomorphism, CliError> {
        let alphabet = self.alphabet(line)?;
        let mut images: Vec<Option<Word>> = vec![None; alphabet.len()];
        if !body.trim().is_empty() {
            for (o, item) in split_top_level(body) {
                let (o, item) = trimmed(offset + o, item);
                let (lhs, rhs) = item
                    .split_once("->")
                    .ok_or_else(|| CliError::parse(line, o + 1, "expected 'generator -> word'"))?;
                let g = alphabet
                    .index_of(lhs.trim())
                    .ok_or_else(|| CliError::parse(line, o + 1, format!("undeclared generator {:?}", lhs.trim())))?;
                if images[g].is_some() {
                    return Err(CliError::parse(line, o + 1, format!("image of {} given twice", lhs.trim())));
                }
                let (ro, rhs) = trimmed(o + lhs.len() + 2, rhs);
                images[g] = Some(parse_word(rhs, alphabet, line, ro)?);
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(g, w)| w.unwrap_or_else(|| Word::generator(g)))
            .collect();
        Ok(FreeEndomorphism::new(images)?)
    }

    fn line(&mut self, number: usize, text: &str) -> Result<(), CliError> {
        let (head, body) = text
            .split_once(':')
            .ok_or_else(|| CliError::parse(number, 1, "expected 'keyword: ...'"))?;
        let offset = head.len() + 1;
        let mut words = head.split_whitespace();
        let keyword = words.next().unwrap_or("");
        let name = words.next();
        if words.next().is_some() {
            return Err(CliError::parse(number, 1, format!("malformed line head {head:?}")));
        }
        let named = |kind: &str| {
            name.filter(|n| is_identifier(n))
                .map(str::to_string)
                .ok_or_else(|| CliError::parse(number, 1, format!("{kind} needs an identifier name")))
        };
        match (keyword, name) {
            ("generators", None) => {
                if self.alphabet.is_some() {
                    return Err(CliError::parse(number, 1, "generators declared twice"));
                }
                let names: Vec<&str> = body.split_whitespace().collect();
                if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
                    return Err(CliError::parse(number, offset + 1, format!("invalid generator name {bad:?}")));
                }
                self.alphabet = Some(
                    Alphabet::new(names.iter().copied())
                        .map_err(|e| CliError::parse(number, offset + 1, e.to_string()))?,
                );
            }
            ("fixed", None) => {
                let ws = self.word_list(body, number, offset)?;
                self.fixed.extend(ws);
            }
            ("iterated", None) => {
                let ws = self.word_list(body, number, offset)?;
                self.iterated.extend(ws);
            }
            ("invariant", None) => {
                self.invariant = Some(match body.trim() {
                    "true" | "yes" => true,
                    "false" | "no" => false,
                    other => {
                        return Err(CliError::parse(number, offset + 1, format!("expected true or false, got {other:?}")))
                    }
                });
            }
            ("endo", Some(_)) => {
                let name = named("endo")?;
                if self.substitutions.iter().any(|s| s.name == name) {
                    return Err(CliError::parse(number, 1, format!("duplicate endo name {name:?}")));
                }
                let endo = self.endomorphism(body, number, offset)?;
                self.substitutions.push(Substitution { name, endo });
            }
            ("subgroup", Some(_)) => {
                let name = named("subgroup")?;
                if self.subgroups.iter().any(|s| s.name == name) {
                    return Err(CliError::parse(number, 1, format!("duplicate subgroup name {name:?}")));
                }
                let generators = self.word_list(body, number, offset)?;
                self.subgroups.push(NamedSubgroup { name, generators });
            }
            _ => return Err(CliError::parse(number, 1, format!("unknown line kind {head:?}"))),
        }
        Ok(())
    }
}

/// Parses a presentation file. The `# lpres v1` header is optional, but any
/// other version header is rejected.
pub fn parse_presentation(text: &str) -> Result<PresentationFile, CliError> {
    let mut b = Builder::default();
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        if !seen_content {
            let t = raw.trim();
            if let Some(version) = t.strip_prefix("# lpres ") {
                if t != HEADER {
                    return Err(CliError::parse(number, 1, format!("unsupported format version {version:?}")));
                }
            }
        }
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        seen_content = true;
        b.line(number, line)?;
    }
    let alphabet = b
        .alphabet
        .ok_or_else(|| CliError::parse(1, 1, "missing generators line"))?;
    let invariant = b.invariant.unwrap_or(b.fixed.is_empty());
    let invariance = if invariant {
        Invariance::AssertedInvariant
    } else {
        Invariance::NotAsserted
    };
    let presentation = LPresentation::new(alphabet, b.fixed, b.substitutions, b.iterated, invariance)?;
    Ok(PresentationFile {
        presentation,
        subgroups: b.subgroups,
    })
}
