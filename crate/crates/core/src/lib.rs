//! Exact verifier for prepolarization computations on Kirillov-Reshetikhin
//! modules attached to multiplicity-free nodes of exceptional affine types.
//!
//! The crate is layered bottom-up:
//! [`qlaurent`] (exact Laurent polynomials), [`rootdata`] (affine Cartan data),
//! [`classrep`] (finite-type weight multiplicities), [`kleber`] (classical
//! decompositions), [`uqcalc`] (the divided-power word calculus and pairing) and
//! [`verify`] (case specifications and the two sufficiency conditions).

pub mod classrep;
pub mod error;
pub mod kleber;
pub mod qlaurent;
pub mod rootdata;
pub mod selftest;
pub mod uqcalc;
pub mod verify;

pub use classrep::{weight_multiplicity, ClassicalRootSystem};
pub use error::{Error, Result};
pub use kleber::{closed_form_decompose, kleber_decompose, Decomposition};
pub use qlaurent::{is_positive, membership, qbinom, qint, LaurentQ, Region};
pub use rootdata::{AffineDiagram, Family, WeightVec};
pub use uqcalc::{CaseContext, Certificate, CertificateKind, Engine, Kind, Letter, Peel, VectorExpr, Word};
pub use verify::{CaseId, CaseReport, CaseSpec, ConditionRecord, CrossCheck};
