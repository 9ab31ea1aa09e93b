//! Letters and the interning table that owns them.
//!
//! Every letter the pipeline ever creates is recorded here together with the
//! way it was built: an original input letter, one of the two end markers, a
//! pair letter standing for two adjacent letters, or a block letter standing
//! for a run of one letter. Identical construction arguments always map to the
//! same [`Letter`].

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Interned alphabet symbol. Ids are dense and ordered by creation time.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(pub(crate) u32);

impl Letter {
    pub const DOLLAR: Letter = Letter(0);
    pub const HASH: Letter = Letter(1);

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn is_marker(self) -> bool {
        self == Letter::DOLLAR || self == Letter::HASH
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LetterKind {
    Original(String),
    Dollar,
    Hash,
    Pair(Letter, Letter),
    Block(Letter, BigUint),
}

#[derive(Clone, Debug)]
pub struct Alphabet {
    kinds: Vec<LetterKind>,
    index: HashMap<LetterKind, Letter>,
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::new()
    }
}

impl Alphabet {
    pub fn new() -> Self {
        let mut alphabet = Alphabet {
            kinds: Vec::new(),
            index: HashMap::new(),
        };
        alphabet.intern(LetterKind::Dollar);
        alphabet.intern(LetterKind::Hash);
        alphabet
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.kinds.len() as u32).map(Letter)
    }

    pub fn kind(&self, letter: Letter) -> &LetterKind {
        &self.kinds[letter.0 as usize]
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (letter.0 as usize) < self.kinds.len()
    }

    pub fn lookup(&self, kind: &LetterKind) -> Option<Letter> {
        self.index.get(kind).copied()
    }

    fn intern(&mut self, kind: LetterKind) -> Letter {
        if let Some(&letter) = self.index.get(&kind) {
            return letter;
        }
        let letter = Letter(self.kinds.len() as u32);
        self.kinds.push(kind.clone());
        self.index.insert(kind, letter);
        letter
    }

    pub fn original(&mut self, name: &str) -> Result<Letter> {
        validate_name(name)?;
        Ok(self.intern(LetterKind::Original(name.to_string())))
    }

    /// Interns the pair letter standing for `left` followed by `right`.
    pub fn pair(&mut self, left: Letter, right: Letter) -> Result<Letter> {
        if left.is_marker() || right.is_marker() {
            return Err(Error::precondition("markers cannot be part of a pair letter"));
        }
        if left == right {
            return Err(Error::precondition("pair letters need two different letters"));
        }
        self.check_known(left)?;
        self.check_known(right)?;
        Ok(self.intern(LetterKind::Pair(left, right)))
    }

    /// Interns the block letter standing for `base` repeated `exponent` times.
    pub fn block(&mut self, base: Letter, exponent: BigUint) -> Result<Letter> {
        if base.is_marker() {
            return Err(Error::precondition("markers cannot be the base of a block letter"));
        }
        if exponent < BigUint::one() {
            return Err(Error::precondition("block exponent must be positive"));
        }
        self.check_known(base)?;
        Ok(self.intern(LetterKind::Block(base, exponent)))
    }

    /// Like [`Alphabet::pair`], but refuses to hand out a letter that already exists.
    pub fn fresh_pair(&mut self, left: Letter, right: Letter) -> Result<Letter> {
        if self.index.contains_key(&LetterKind::Pair(left, right)) {
            return Err(Error::FreshLetterCollision(format!(
                "<{},{}>",
                self.name(left),
                self.name(right)
            )));
        }
        self.pair(left, right)
    }

    /// Like [`Alphabet::block`], but refuses to hand out a letter that already exists.
    pub fn fresh_block(&mut self, base: Letter, exponent: BigUint) -> Result<Letter> {
        if self
            .index
            .contains_key(&LetterKind::Block(base, exponent.clone()))
        {
            return Err(Error::FreshLetterCollision(format!(
                "<{}:{}>",
                self.name(base),
                exponent
            )));
        }
        self.block(base, exponent)
    }

    fn check_known(&self, letter: Letter) -> Result<()> {
        if self.contains(letter) {
            Ok(())
        } else {
            Err(Error::precondition(format!("unknown letter id {}", letter.0)))
        }
    }

    /// Textual name used by the file formats: `a`, `$`, `#`, `<l,r>`, `<a:12>`.
    pub fn name(&self, letter: Letter) -> String {
        let mut out = String::new();
        self.write_name(letter, &mut out);
        out
    }

    fn write_name(&self, letter: Letter, out: &mut String) {
        match self.kind(letter) {
            LetterKind::Original(name) => out.push_str(name),
            LetterKind::Dollar => out.push('$'),
            LetterKind::Hash => out.push('#'),
            LetterKind::Pair(l, r) => {
                out.push('<');
                self.write_name(*l, out);
                out.push(',');
                self.write_name(*r, out);
                out.push('>');
            }
            LetterKind::Block(base, exp) => {
                out.push('<');
                self.write_name(*base, out);
                out.push(':');
                out.push_str(&exp.to_string());
                out.push('>');
            }
        }
    }

    /// Expansion of a letter into original letters and markers.
    pub fn expansion_len(&self, letter: Letter) -> BigUint {
        match self.kind(letter) {
            LetterKind::Original(_) | LetterKind::Dollar | LetterKind::Hash => BigUint::one(),
            LetterKind::Pair(l, r) => self.expansion_len(*l) + self.expansion_len(*r),
            LetterKind::Block(base, exp) => self.expansion_len(*base) * exp,
        }
    }

    pub fn display(&self, letter: Letter) -> LetterDisplay<'_> {
        LetterDisplay {
            alphabet: self,
            letter,
        }
    }
}

pub struct LetterDisplay<'a> {
    alphabet: &'a Alphabet,
    letter: Letter,
}

impl fmt::Display for LetterDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.name(self.letter))
    }
}

/// Original letter names: ASCII alphanumerics and `_`, not shaped like a nonterminal.
pub fn validate_name(name: &str) -> Result<()> {
    let ok_chars = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_');
    let looks_like_nt = name.len() > 1
        && name.starts_with('X')
        && name[1..].chars().all(|c| c.is_ascii_digit());
    if ok_chars && !looks_like_nt {
        Ok(())
    } else {
        Err(Error::precondition(format!("invalid letter name {name:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markers_are_preinterned() {
        let alphabet = Alphabet::new();
        assert_eq!(alphabet.kind(Letter::DOLLAR), &LetterKind::Dollar);
        assert_eq!(alphabet.kind(Letter::HASH), &LetterKind::Hash);
        assert_eq!(alphabet.name(Letter::HASH), "#");
    }

    #[test]
    fn pair_interning_is_canonical_and_ordered() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.original("a").unwrap();
        let b = alphabet.original("b").unwrap();
        let ab = alphabet.pair(a, b).unwrap();
        assert_eq!(alphabet.pair(a, b).unwrap(), ab);
        assert_ne!(alphabet.pair(b, a).unwrap(), ab);
        assert!(alphabet.fresh_pair(a, b).is_err());
        assert_eq!(alphabet.name(ab), "<a,b>");
    }

    #[test]
    fn markers_never_compressed() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.original("a").unwrap();
        assert!(alphabet.pair(Letter::DOLLAR, a).is_err());
        assert!(alphabet.pair(a, Letter::HASH).is_err());
        assert!(alphabet.block(Letter::HASH, 3u32.into()).is_err());
    }

    #[test]
    fn nested_names_and_lengths() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.original("a").unwrap();
        let b = alphabet.original("b").unwrap();
        let a3 = alphabet.block(a, 3u32.into()).unwrap();
        let p = alphabet.pair(a3, b).unwrap();
        assert_eq!(alphabet.name(p), "<<a:3>,b>");
        assert_eq!(alphabet.expansion_len(p), BigUint::from(4u32));
    }

    #[test]
    fn rejects_nonterminal_like_names() {
        let mut alphabet = Alphabet::new();
        assert!(alphabet.original("X12").is_err());
        assert!(alphabet.original("a^2").is_err());
        assert!(alphabet.original("X").is_ok());
        assert!(alphabet.original("Xa").is_ok());
    }
}
