use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// Order-preserving on spaces, endomorphism on algebras.
    Plus,
    /// Order-reversing on spaces, dual endomorphism on algebras.
    Minus,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
        }
    }

    /// Sign of a composite: minus iff exactly one side is minus.
    pub fn compose(self, other: Polarity) -> Self {
        if self == other {
            Polarity::Plus
        } else {
            Polarity::Minus
        }
    }

    pub fn sign(self) -> char {
        match self {
            Polarity::Plus => '+',
            Polarity::Minus => '-',
        }
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// An ordered list of unary symbols, each with a polarity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Signature {
    names: Vec<String>,
    polarity: Vec<Polarity>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, Polarity)>) -> Result<Self> {
        let mut sig = Signature::default();
        for (name, pol) in symbols {
            let name = name.into();
            if !valid_name(&name) {
                return Err(Error::InvalidArgument(format!("invalid symbol name `{name}`")));
            }
            if sig.names.contains(&name) {
                return Err(Error::InvalidArgument(format!("duplicate symbol `{name}`")));
            }
            sig.names.push(name);
            sig.polarity.push(pol);
        }
        Ok(sig)
    }

    /// Parses `f+ g-` (whitespace separated, sign suffix on every symbol).
    pub fn parse(text: &str) -> Result<Self> {
        let symbols = text
            .split_whitespace()
            .map(|tok| {
                let (name, pol) = match tok.as_bytes().last() {
                    Some(b'+') => (&tok[..tok.len() - 1], Polarity::Plus),
                    Some(b'-') => (&tok[..tok.len() - 1], Polarity::Minus),
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "symbol `{tok}` needs a `+` or `-` suffix"
                        )))
                    }
                };
                Ok((name.to_string(), pol))
            })
            .collect::<Result<Vec<_>>>()?;
        Signature::new(symbols)
    }

    /// `{g}` with `g` order-reversing.
    pub fn ockham() -> Self {
        Signature::new([("g", Polarity::Minus)]).expect("valid signature")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, sym: usize) -> &str {
        &self.names[sym]
    }

    pub fn polarity(&self, sym: usize) -> Polarity {
        self.polarity[sym]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (usize, &str, Polarity)> {
        self.names
            .iter()
            .zip(&self.polarity)
            .enumerate()
            .map(|(i, (n, &p))| (i, n.as_str(), p))
    }

    pub fn minus_symbols(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.polarity[i] == Polarity::Minus)
            .collect()
    }

    pub fn has_minus(&self) -> bool {
        self.polarity.contains(&Polarity::Minus)
    }

    pub fn require_same(&self, other: &Signature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!("`{self}` versus `{other}`")))
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, name, pol) in self.symbols() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}{}", pol.sign())?;
        }
        Ok(())
    }
}

/// A word over a signature. The word `f g` acts as `f ∘ g`: the rightmost
/// letter is applied first, matching term notation `f(g(v))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(sig: &Signature, letters: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l >= sig.len()) {
            return Err(Error::UnknownSymbol(format!("#{bad}")));
        }
        Ok(Word { letters })
    }

    pub fn letter(sym: usize) -> Self {
        Word {
            letters: vec![sym],
        }
    }

    /// Accepts `eps`, `ε` or an empty string for the empty word; otherwise
    /// symbol names with optional `^k` powers, separated by spaces or `.`,
    /// or juxtaposed when the names are unambiguous (`f^2g`, `f f g`,
    /// `f.f.g`).
    pub fn parse(sig: &Signature, text: &str) -> Result<Self> {
        let text = text.trim();
        if (text.is_empty() || text == "eps" || text == "ε") && sig.index_of(text).is_none() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let trimmed = rest.trim_start_matches(|c: char| c.is_whitespace() || c == '.');
            if trimmed.is_empty() {
                break;
            }
            rest = trimmed;
            let ident_len = rest
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                .unwrap_or(rest.len());
            if ident_len == 0 {
                return Err(Error::InvalidArgument(format!("unexpected input `{rest}` in word")));
            }
            // Longest symbol name that prefixes the identifier.
            let ident = &rest[..ident_len];
            let (sym, len) = (1..=ident_len)
                .rev()
                .find_map(|l| sig.index_of(&ident[..l]).map(|s| (s, l)))
                .ok_or_else(|| Error::UnknownSymbol(ident.to_string()))?;
            rest = &rest[len..];
            let mut power = 1usize;
            if let Some(after) = rest.strip_prefix('^') {
                let digits = after
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(after.len());
                power = after[..digits].parse().map_err(|_| {
                    Error::InvalidArgument(format!("bad exponent in word `{text}`"))
                })?;
                rest = &after[digits..];
            }
            letters.extend(std::iter::repeat_n(sym, power));
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Minus iff the word has an odd number of minus letters.
    pub fn polarity(&self, sig: &Signature) -> Polarity {
        self.letters
            .iter()
            .fold(Polarity::Plus, |acc, &l| acc.compose(sig.polarity(l)))
    }

    /// `self · other`, acting as `self ∘ other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Applies the word to a self-map family given as tables, rightmost
    /// letter first.
    pub fn act(&self, maps: &[Vec<usize>], x: usize) -> usize {
        self.letters.iter().rev().fold(x, |acc, &l| maps[l][acc])
    }

    /// The whole action as a table over `0..n`.
    pub fn action_table(&self, maps: &[Vec<usize>], n: usize) -> Vec<usize> {
        (0..n).map(|x| self.act(maps, x)).collect()
    }

    /// Every word of length at most `depth`, shortest first and then in
    /// lexicographic order of symbol indices.
    pub fn all_up_to(sig: &Signature, depth: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &layer {
                for s in 0..sig.len() {
                    let mut letters = w.letters.clone();
                    letters.push(s);
                    next.push(Word { letters });
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> WordDisplay<'a> {
        WordDisplay { word: self, sig }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    sig: &'a Signature,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("eps");
        }
        let mut i = 0;
        let letters = &self.word.letters;
        let mut first = true;
        while i < letters.len() {
            let run = letters[i..].iter().take_while(|&&l| l == letters[i]).count();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(self.sig.name(letters[i]))?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fg() -> Signature {
        Signature::parse("f+ g-").unwrap()
    }

    #[test]
    fn signature_parsing() {
        let sig = fg();
        assert_eq!(sig.len(), 2);
        assert_eq!(sig.polarity(1), Polarity::Minus);
        assert_eq!(sig.to_string(), "f+ g-");
        assert!(Signature::parse("f").is_err());
        assert!(Signature::parse("f+ f-").is_err());
        assert!(Signature::parse("").unwrap().is_empty());
    }

    #[test]
    fn word_syntax() {
        let sig = fg();
        let w = Word::parse(&sig, "f^2g").unwrap();
        assert_eq!(w.letters(), &[0, 0, 1]);
        assert_eq!(Word::parse(&sig, "f f g").unwrap(), w);
        assert_eq!(Word::parse(&sig, "f.f.g").unwrap(), w);
        assert_eq!(Word::parse(&sig, "ffg").unwrap(), w);
        assert!(Word::parse(&sig, "eps").unwrap().is_empty());
        assert!(Word::parse(&sig, "ε").unwrap().is_empty());
        assert!(matches!(Word::parse(&sig, "h"), Err(Error::UnknownSymbol(_))));
        assert_eq!(w.display(&sig).to_string(), "f^2 g");
    }

    #[test]
    fn polarity_counts_minus_letters() {
        let sig = fg();
        assert_eq!(Word::parse(&sig, "f^2 g").unwrap().polarity(&sig), Polarity::Minus);
        assert_eq!(Word::parse(&sig, "g g").unwrap().polarity(&sig), Polarity::Plus);
        assert_eq!(Word::empty().polarity(&sig), Polarity::Plus);
    }

    #[test]
    fn action_is_rightmost_first() {
        let sig = fg();
        // f: 0->1, 1->1 ; g: 0<->1
        let maps = vec![vec![1, 1], vec![1, 0]];
        let fg_word = Word::parse(&sig, "f g").unwrap();
        // f(g(1)) = f(0) = 1 ; g(f(1)) = g(1) = 0
        assert_eq!(fg_word.act(&maps, 1), 1);
        assert_eq!(Word::parse(&sig, "g f").unwrap().act(&maps, 1), 0);
        assert_eq!(Word::empty().action_table(&maps, 2), vec![0, 1]);
    }

    #[test]
    fn enumeration_order() {
        let sig = fg();
        let words = Word::all_up_to(&sig, 2);
        assert_eq!(words.len(), 1 + 2 + 4);
        assert!(words[0].is_empty());
        assert_eq!(words[3].letters(), &[0, 0]);
        assert_eq!(words[4].letters(), &[0, 1]);
    }
}
