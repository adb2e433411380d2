use std::fmt;

use serde_json::{json, Value};

use super::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CertificateKind {
    /// `e_i u = 0` for classical `i`, `f_i u = 0` for `i != r`.
    Annihilation,
    /// The weight does not occur in the classical decomposition.
    Weight,
    /// A divided power overshoots an `sl_2` string: `x_i v = 0` and the power
    /// exceeds the string length determined by `<h_i, wt v>`.
    String,
    /// Higher-order Serre relation: `x_i^{(a)} x_j^{(b)} v = 0` when
    /// `x_i v = 0` and `a > -A_ij b`.
    Serre,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Annihilation => "annihilation",
            CertificateKind::Weight => "weight",
            CertificateKind::String => "string",
            CertificateKind::Serre => "serre",
        }
    }
}

/// Evidence that `word . u = 0`; `word` is the (sub)word where the local rule fired.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub word: Word,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({"kind": self.kind.name(), "word": self.word.to_string()})
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.name(), self.word)
    }
}
