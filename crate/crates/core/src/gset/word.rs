//! Group words and finite presentations.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i64,
}

/// A freely reduced word; the leftmost letter is applied last.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(generator: usize, exponent: i64) -> Self {
        Word::from_letters([Letter { generator, exponent }])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.exponent == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.generator == l.generator => {
                    last.exponent += l.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total number of generator symbols, `Σ |exponent|`.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|l| l.exponent.unsigned_abs() as usize).sum()
    }

    pub fn inverse(&self) -> Word {
        Word::from_letters(self.letters.iter().rev().map(|l| Letter {
            generator: l.generator,
            exponent: -l.exponent,
        }))
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::identity(), |acc, _| acc.concat(&base))
    }

    /// Renders with generator names, e.g. `b a b^-1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                let name = &names[l.generator];
                if l.exponent == 1 {
                    name.clone()
                } else {
                    format!("{name}^{}", l.exponent)
                }
            })
            .collect();
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.letters.iter().map(|l| l.generator + 1).max().unwrap_or(0))
            .map(|i| format!("g{}", i + 1))
            .collect();
        f.write_str(&self.render(&names))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    /// Source text, used to name the relation in errors.
    pub text: String,
    #[serde(skip)]
    pub word: Word,
}

/// Generators plus defining relations `w = 1` (or `u = v`, read as `u v⁻¹`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: &[&str]) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || !g.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidInput(format!("bad generator name `{g}`")));
            }
            if g.chars().all(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidInput(format!("generator name `{g}` is numeric")));
            }
            if generators[..i].contains(g) {
                return Err(Error::InvalidInput(format!("duplicate generator `{g}`")));
            }
        }
        let mut p = Presentation {
            generators,
            relations: Vec::new(),
        };
        for text in relations {
            let word = p.parse_relation(text)?;
            p.relations.push(Relation {
                text: text.trim().to_string(),
                word,
            });
        }
        Ok(p)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    fn parse_relation(&self, text: &str) -> Result<Word> {
        match text.split_once('=') {
            Some((lhs, rhs)) => Ok(self.parse_word(lhs)?.concat(&self.parse_word(rhs)?.inverse())),
            None => self.parse_word(text),
        }
    }

    /// Parses words such as `b a b^-1`, `bab^{-1}`, `a^3*b` or `1`.
    /// Generator names are matched greedily, longest first.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let bad = |why: &str| Error::InvalidInput(format!("cannot parse word `{text}`: {why}"));
        let chars: Vec<char> = text.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        let mut saw_one = false;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '·' || c == '.' {
                i += 1;
                continue;
            }
            if c == '1' || c == 'e' && !self.generators.iter().any(|g| g.starts_with('e')) {
                saw_one = true;
                i += 1;
                continue;
            }
            let rest: String = chars[i..].iter().collect();
            let generator = self
                .generators
                .iter()
                .enumerate()
                .filter(|(_, g)| rest.starts_with(g.as_str()))
                .max_by_key(|(_, g)| g.len())
                .map(|(k, _)| k)
                .ok_or_else(|| bad(&format!("unknown symbol at `{rest}`")))?;
            i += self.generators[generator].chars().count();
            let mut exponent = 1i64;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let braced = i < chars.len() && chars[i] == '{';
                if braced {
                    i += 1;
                }
                let start = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: String = chars[start..i].iter().collect();
                exponent = num.parse().map_err(|_| bad("missing exponent"))?;
                if braced {
                    if i < chars.len() && chars[i] == '}' {
                        i += 1;
                    } else {
                        return Err(bad("unclosed brace"));
                    }
                }
            }
            letters.push(Letter { generator, exponent });
        }
        if letters.is_empty() && !saw_one && !text.trim().is_empty() {
            return Err(bad("no letters"));
        }
        Ok(Word::from_letters(letters))
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.generators)
    }

    /// All freely reduced words of length `≤ max_len`, shortest first, then
    /// in generator order with positive letters before inverses.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut frontier = vec![Vec::<(usize, i64)>::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for g in 0..self.ngens() {
                    for s in [1i64, -1] {
                        if let Some(&(lg, ls)) = w.last() {
                            if lg == g && ls == -s {
                                continue;
                            }
                        }
                        let mut v = w.clone();
                        v.push((g, s));
                        next.push(v);
                    }
                }
            }
            out.extend(
                next.iter()
                    .map(|v| Word::from_letters(v.iter().map(|&(generator, exponent)| Letter { generator, exponent }))),
            );
            frontier = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> Presentation {
        Presentation::new(vec!["a".into(), "b".into()], &["bab^{-1} = a^-1"]).unwrap()
    }

    #[test]
    fn parse_forms() {
        let p = klein();
        let w = p.parse_word("b a b^-1").unwrap();
        assert_eq!(p.parse_word("bab^{-1}").unwrap(), w);
        assert_eq!(p.render(&w), "b a b^-1");
        assert_eq!(p.parse_word("a a a").unwrap(), p.parse_word("a^3").unwrap());
        assert!(p.parse_word("1").unwrap().is_empty());
        assert!(p.parse_word("a a^-1").unwrap().is_empty());
        assert!(p.parse_word("c").is_err());
        assert!(p.parse_word("a^").is_err());
        assert_eq!(p.render(&p.relations()[0].word), "b a b^-1 a");
    }

    #[test]
    fn word_counts() {
        // Reduced words on 2 generators: 1, 4, 12, 36, 108.
        let p = klein();
        assert_eq!(p.words_up_to(4).len(), 1 + 4 + 12 + 36 + 108);
        assert!(p.words_up_to(3).iter().all(|w| w.len() <= 3));
    }

    #[test]
    fn inverse_and_pow() {
        let p = klein();
        let w = p.parse_word("a b").unwrap();
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(w.pow(2).len(), 4);
        assert_eq!(w.pow(-1), w.inverse());
    }

    #[test]
    fn rejects_bad_names() {
        assert!(Presentation::new(vec!["a".into(), "a".into()], &[]).is_err());
        assert!(Presentation::new(vec!["1".into()], &[]).is_err());
    }
}
