//! Benchmark fixtures shared by the criterion targets.

use prepol_core::{CaseId, Engine, Word};

/// Case levels exercised by the end-to-end benchmark.
pub const CASE_LEVELS: [(CaseId, i64); 4] = [
    (CaseId::E6R3, 3),
    (CaseId::E7R2, 2),
    (CaseId::E6TwistedR4, 3),
    (CaseId::F4R4, 3),
];

/// Template words `u_{k',k}` of a case at level `s`, in increasing `k`.
pub fn templates(id: CaseId, s: i64) -> Vec<Word> {
    let kmax = id.k_max(s) as u32;
    (0..=kmax)
        .flat_map(|k| {
            let kps = if id.is_two_parameter() { 0..=k } else { 0..=0 };
            kps.map(move |kp| id.template(k, kp))
        })
        .collect()
}

/// An engine with empty caches, so each iteration pays the full cost.
pub fn fresh_engine(id: CaseId, s: i64) -> Engine {
    Engine::for_case(id, s).expect("valid case level")
}
