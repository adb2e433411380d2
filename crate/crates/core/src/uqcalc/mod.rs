//! Divided-power word calculus on the extremal vector `u` of `W^{r,s}`.
//!
//! Vectors are linear combinations of words in `e_i^{(k)}`, `f_i^{(k)}` applied
//! to `u`. Words are rewritten with the commutation relations, the `[e_i, f_i]`
//! expansion and the annihilation rules at `u`; words that are provably zero
//! are dropped with a [`Certificate`]. The bilinear form is evaluated by moving
//! letters across with the divided-power adjunction, starting from `(u, u) = 1`.

mod certificate;
mod engine;
mod word;

pub use certificate::{Certificate, CertificateKind};
pub use engine::{CaseContext, Engine, Peel};
pub use word::{Kind, Letter, VectorExpr, Word};
