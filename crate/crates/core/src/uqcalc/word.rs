use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qlaurent::LaurentQ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    E,
    F,
}

impl Kind {
    pub fn dual(self) -> Kind {
        match self {
            Kind::E => Kind::F,
            Kind::F => Kind::E,
        }
    }
}

/// A divided power `e_i^{(k)}` or `f_i^{(k)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub kind: Kind,
    pub index: u8,
    pub power: u32,
}

impl Letter {
    pub fn e(index: usize, power: u32) -> Self {
        Self {
            kind: Kind::E,
            index: index as u8,
            power,
        }
    }

    pub fn f(index: usize, power: u32) -> Self {
        Self {
            kind: Kind::F,
            index: index as u8,
            power,
        }
    }

    pub fn idx(self) -> usize {
        self.index as usize
    }

    pub fn with_power(self, power: u32) -> Self {
        Self { power, ..self }
    }

    pub fn same_generator(self, other: Letter) -> bool {
        self.kind == other.kind && self.index == other.index
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::E => 'E',
            Kind::F => 'F',
        };
        if self.power == 1 {
            write!(f, "{k}{}", self.index)
        } else {
            write!(f, "{k}{}^{}", self.index, self.power)
        }
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad letter `{s}`"));
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('E') | Some('e') => Kind::E,
            Some('F') | Some('f') => Kind::F,
            _ => return Err(bad()),
        };
        let rest: &str = chars.as_str();
        let (idx, pow) = match rest.split_once('^') {
            Some((i, p)) => (i, p.parse::<u32>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let index: u8 = idx.parse().map_err(|_| bad())?;
        if pow == 0 {
            return Err(bad());
        }
        Ok(Letter {
            kind,
            index,
            power: pow,
        })
    }
}

/// A word of divided powers; the leftmost letter is applied last.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word, dropping zero powers and merging nothing.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word(letters.into_iter().filter(|l| l.power > 0).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total divided-power degree.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|l| l.power as u64).sum()
    }

    pub fn head(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn tail(&self) -> Word {
        Word(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    pub fn prepend(&self, l: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(l);
        v.extend_from_slice(&self.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "u");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{} u", parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "u" {
                continue;
            }
            letters.push(tok.parse::<Letter>()?);
        }
        Ok(Word(letters))
    }
}

/// A formal linear combination of words applied to the extremal vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorExpr {
    terms: BTreeMap<Word, LaurentQ>,
}

impl VectorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        Self::monomial(w, LaurentQ::one())
    }

    pub fn monomial(w: Word, c: LaurentQ) -> Self {
        let mut out = Self::zero();
        out.add_term(w, &c);
        out
    }

    pub fn add_term(&mut self, w: Word, c: &LaurentQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &VectorExpr, c: &LaurentQ) {
        for (w, d) in &other.terms {
            self.add_term(w.clone(), &(d * c));
        }
    }

    pub fn scale(&self, c: &LaurentQ) -> VectorExpr {
        let mut out = VectorExpr::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &LaurentQ)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> LaurentQ {
        self.terms.get(w).cloned().unwrap_or_default()
    }
}

impl fmt::Display for VectorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| if c.is_one() { format!("{w}") } else { format!("({c}) {w}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
