//! Case specifications for the multiplicity-free nodes and the checker for
//! the two sufficiency conditions:
//!
//! * (i) `(u_k, u_l) in delta_{kl} + qA`,
//! * (ii) `||e_i u_k||^2 in q_i^{-2<h_i, lambda_k> - 2} qA` for classical `i`,
//!
//! together with a comparison of every engine norm against the closed forms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kleber::{closed_form_decompose, Decomposition};
use crate::qlaurent::{is_positive, membership, qbinom, qint, LaurentQ, Region};
use crate::rootdata::{AffineDiagram, Family};
use crate::uqcalc::{Certificate, Engine, Letter, VectorExpr, Word};

/// The seven verified (family, node) cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    E6R3,
    E6R5,
    E7R2,
    E6TwistedR4,
    E7R6,
    E8R1,
    F4R4,
}

impl CaseId {
    pub const ALL: [CaseId; 7] = [
        CaseId::E6R3,
        CaseId::E6R5,
        CaseId::E7R2,
        CaseId::E6TwistedR4,
        CaseId::E7R6,
        CaseId::E8R1,
        CaseId::F4R4,
    ];

    pub fn family(self) -> Family {
        match self {
            CaseId::E6R3 | CaseId::E6R5 => Family::E6_1,
            CaseId::E7R2 | CaseId::E7R6 => Family::E7_1,
            CaseId::E6TwistedR4 => Family::E6_2,
            CaseId::E8R1 => Family::E8_1,
            CaseId::F4R4 => Family::F4_1,
        }
    }

    /// Node carrying the extremal weight `s varpi_r`.
    pub fn node(self) -> usize {
        match self {
            CaseId::E6R3 => 3,
            CaseId::E6R5 => 5,
            CaseId::E7R2 => 2,
            CaseId::E6TwistedR4 => 4,
            CaseId::E7R6 => 6,
            CaseId::E8R1 => 1,
            CaseId::F4R4 => 4,
        }
    }

    /// Node under which the case is listed in the table of verified nodes.
    /// Differs from [`CaseId::node`] only for E8, where the table lists 7.
    pub fn table_node(self) -> usize {
        match self {
            CaseId::E8R1 => 7,
            c => c.node(),
        }
    }

    /// Looks a case up by family and node; E8 accepts either label.
    pub fn lookup(family: Family, node: usize) -> Result<CaseId> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.family() == family && (c.node() == node || c.table_node() == node))
            .ok_or_else(|| Error::InvalidArgument(format!("no verified case for {family} node {node}")))
    }

    pub fn cases_for(family: Family) -> Vec<CaseId> {
        CaseId::ALL.into_iter().filter(|c| c.family() == family).collect()
    }

    pub fn is_two_parameter(self) -> bool {
        !matches!(self, CaseId::E6R3 | CaseId::E6R5 | CaseId::E7R2)
    }

    /// The classical node `x` whose weight grows with `k` (the other
    /// summand in `(s - k) varpi_r + k varpi_x`).
    pub fn end_node(self) -> usize {
        match self {
            CaseId::E6R3 => 6,
            CaseId::E7R2 => 7,
            CaseId::E8R1 => 8,
            _ => 1,
        }
    }

    /// Nodes `i` with `f_i u_k = 0` for `k >= 1`.
    pub fn vanishing_nodes(self) -> &'static [usize] {
        match self {
            CaseId::E6R3 => &[1, 2, 4, 5],
            CaseId::E6R5 => &[2, 3, 4, 6],
            CaseId::E7R2 => &[1, 3, 4, 5, 6],
            CaseId::E6TwistedR4 => &[2, 3],
            CaseId::E7R6 => &[2, 3, 4, 5, 7],
            CaseId::E8R1 => &[2, 3, 4, 5, 6, 7],
            CaseId::F4R4 => &[2, 3],
        }
    }

    /// `e`-indices of the inner word, leftmost first, with their multiplier of `k`.
    fn inner_letters(self) -> &'static [(usize, u32)] {
        match self {
            CaseId::E6R3 => &[(6, 1), (5, 1), (4, 1), (2, 1), (0, 1)],
            CaseId::E6R5 => &[(1, 1), (3, 1), (4, 1), (2, 1), (0, 1)],
            CaseId::E7R2 => &[(7, 1), (6, 1), (5, 1), (4, 1), (3, 1), (1, 1), (0, 1)],
            CaseId::E6TwistedR4 => &[(1, 1), (2, 1), (3, 1), (2, 1), (1, 1), (0, 1)],
            CaseId::E7R6 => &[
                (1, 1),
                (3, 1),
                (4, 1),
                (5, 1),
                (2, 1),
                (4, 1),
                (3, 1),
                (1, 1),
                (0, 1),
            ],
            CaseId::E8R1 => &[
                (8, 1),
                (7, 1),
                (6, 1),
                (5, 1),
                (4, 1),
                (3, 1),
                (2, 1),
                (4, 1),
                (5, 1),
                (6, 1),
                (7, 1),
                (8, 1),
                (0, 1),
            ],
            CaseId::F4R4 => &[(1, 1), (2, 1), (3, 2), (2, 1), (1, 1), (0, 1)],
        }
    }

    /// The test word `u_k` (or `u_{k',k}`); `kp` is ignored for one-parameter cases.
    pub fn template(self, k: u32, kp: u32) -> Word {
        let mut letters = Vec::new();
        if self.is_two_parameter() {
            letters.push(Letter::e(0, kp));
        }
        letters.extend(self.inner_letters().iter().map(|&(i, m)| Letter::e(i, m * k)));
        Word::from_letters(letters)
    }

    /// Largest admissible `k` at level `s`.
    pub fn k_max(self, s: i64) -> i64 {
        match self {
            CaseId::F4R4 => s / 2,
            _ => s,
        }
    }

    /// Expected `Lambda`-coefficients of `wt(u_{k',k})`.
    pub fn expected_lambda(self, s: i64, k: i64, kp: i64) -> Vec<i64> {
        let n = self.family().node_count();
        let mut lam = vec![0; n];
        let (r, x) = (self.node(), self.end_node());
        match self {
            CaseId::E6R3 | CaseId::E6R5 | CaseId::E7R2 => {
                lam[r] = s - k;
                lam[x] = k;
                lam[0] = -(2 * s - k);
            }
            CaseId::F4R4 => {
                lam[r] = s - 2 * k;
                lam[x] = k - kp;
                lam[0] = -(s - 2 * kp);
            }
            _ => {
                lam[r] = s - k;
                lam[x] = k - kp;
                lam[0] = -(2 * s - 2 * kp);
            }
        }
        lam
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseId::E6R3 => "E6_1 r=3",
            CaseId::E6R5 => "E6_1 r=5",
            CaseId::E7R2 => "E7_1 r=2",
            CaseId::E6TwistedR4 => "E6_2 r=4",
            CaseId::E7R6 => "E7_1 r=6",
            CaseId::E8R1 => "E8_1 r=1",
            CaseId::F4R4 => "F4_1 r=4",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseId {
    type Err = Error;
    /// Accepts `FAMILY:NODE`, e.g. `e6_1:3`.
    fn from_str(s: &str) -> Result<Self> {
        let (fam, node) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected FAMILY:NODE, got `{s}`")))?;
        let node: usize = node
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad node in `{s}`")))?;
        CaseId::lookup(fam.trim().parse()?, node)
    }
}

/// One test vector of a case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseVector {
    pub k: i64,
    /// `None` for one-parameter cases.
    pub kp: Option<i64>,
    pub word: Word,
    pub expected_lambda: Vec<i64>,
}

/// A case instantiated at a level `s`.
#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub id: CaseId,
    pub s: i64,
    pub vectors: Vec<CaseVector>,
    pub decomposition: Decomposition,
}

impl CaseSpec {
    pub fn new(id: CaseId, s: i64) -> Result<Self> {
        if s <= 0 {
            return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
        }
        let mut vectors = Vec::new();
        for k in 0..=id.k_max(s) {
            let kps: Vec<Option<i64>> = if id.is_two_parameter() {
                (0..=k).map(Some).collect()
            } else {
                vec![None]
            };
            for kp in kps {
                let kpv = kp.unwrap_or(0);
                vectors.push(CaseVector {
                    k,
                    kp,
                    word: id.template(k as u32, kpv as u32),
                    expected_lambda: id.expected_lambda(s, k, kpv),
                });
            }
        }
        Ok(Self {
            id,
            s,
            vectors,
            decomposition: closed_form_decompose(id, s)?,
        })
    }

    pub fn family(&self) -> Family {
        self.id.family()
    }
}

/// One checked condition cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionRecord {
    /// `"i"` or `"ii"`.
    pub kind: &'static str,
    pub k: i64,
    pub kp: Option<i64>,
    pub i: Option<usize>,
    /// Canonical text of the checked value (or the failure reason).
    pub value: String,
    /// `||f_i u||^2` for condition (ii).
    pub f_norm: Option<String>,
    pub required: String,
    pub pass: bool,
    pub certificates: Vec<Certificate>,
}

impl ConditionRecord {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "kind": self.kind,
            "k": self.k,
            "kp": self.kp,
            "i": self.i,
            "value": self.value,
            "required": self.required,
            "pass": self.pass,
            "certificates": self.certificates.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        });
        if let Some(f) = &self.f_norm {
            v["f_norm"] = json!(f);
        }
        v
    }
}

/// Engine value versus a transcribed closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub label: String,
    /// Which displayed formula the item instantiates: `norm`, `f_end`,
    /// `f_zero`, `f_r`, `f_r_explicit`, `f_module_gen` or `swap`.
    pub formula: &'static str,
    pub engine: String,
    pub paper: String,
    pub matches: bool,
    /// Whether a mismatch here is expected and reported rather than failed.
    pub advisory: bool,
}

impl CrossCheck {
    fn new(label: String, formula: &'static str, engine: &LaurentQ, paper: &LaurentQ, advisory: bool) -> Self {
        Self {
            label,
            formula,
            engine: engine.to_string(),
            paper: paper.to_string(),
            matches: engine == paper,
            advisory,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "formula": self.formula,
            "engine": self.engine,
            "paper": self.paper,
            "match": self.matches,
            "advisory": self.advisory,
        })
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: CaseId,
    pub s: i64,
    pub conditions: Vec<ConditionRecord>,
    pub crosscheck: Vec<CrossCheck>,
    pub decomposition: Decomposition,
    pub notes: Vec<String>,
}

impl CaseReport {
    pub fn conditions_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    /// Cross-check mismatches outside the advisory items.
    pub fn hard_mismatches(&self) -> Vec<&CrossCheck> {
        self.crosscheck.iter().filter(|c| !c.matches && !c.advisory).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "family": self.case.family().name(),
            "node": self.case.node(),
            "s": self.s,
            "conditions": self.conditions.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "crosscheck": self.crosscheck.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "decomposition": self.decomposition.to_json(),
            "notes": self.notes,
        });
        if self.case.table_node() != self.case.node() {
            v["table_node"] = json!(self.case.table_node());
        }
        v
    }
}

// ---------- worker pool ----------

const STACK_BYTES: usize = 64 << 20;

static POOL: OnceLock<ThreadPool> = OnceLock::new();

/// Configures the shared worker pool; only the first call has an effect.
/// Returns whether this call built the pool.
pub fn init_pool(workers: Option<usize>) -> Result<bool> {
    let mut built = false;
    let mut err = None;
    POOL.get_or_init(|| {
        built = true;
        match build_pool(workers) {
            Ok(p) => p,
            Err(e) => {
                err = Some(e);
                build_pool(Some(1)).expect("single-thread pool")
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(built),
    }
}

fn build_pool(workers: Option<usize>) -> Result<ThreadPool> {
    let mut b = ThreadPoolBuilder::new()
        .stack_size(STACK_BYTES)
        .thread_name(|i| format!("prepol-{i}"));
    if let Some(n) = workers {
        if n == 0 {
            return Err(Error::InvalidArgument("worker count must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

/// The worker pool used for verification; its threads have large stacks
/// because word rewriting recurses deeply.
pub fn pool() -> &'static ThreadPool {
    let _ = init_pool(None);
    POOL.get().expect("pool initialized")
}

// ---------- checks ----------

fn undecided(e: Error) -> Result<String> {
    match e {
        Error::UndecidedVanishing { word } => Ok(format!("undecided vanishing: {word}")),
        other => Err(other),
    }
}

fn engine_for(spec: &CaseSpec, serre_bound: Option<usize>) -> Result<Engine> {
    let ctx = crate::uqcalc::CaseContext::new(spec.family(), spec.id.node(), spec.s, spec.decomposition.clone())?;
    let e = Engine::new(ctx);
    Ok(match serre_bound {
        Some(b) => e.with_serre_bound(b),
        None => e,
    })
}

/// Condition (i) for every vector; off-diagonal pairings vanish because the
/// weights are pairwise distinct, which is checked here as well.
pub fn check_condition_i(spec: &CaseSpec, engine: &Engine) -> Result<Vec<ConditionRecord>> {
    let lambdas: Vec<Vec<i64>> = spec.vectors.iter().map(|v| engine.lambda_of(&v.word)).collect();
    let distinct = lambdas.iter().collect::<BTreeSet<_>>().len() == lambdas.len();
    pool().install(|| {
        spec.vectors
            .par_iter()
            .zip(lambdas.par_iter())
            .map(|(v, lam)| {
                let weight_ok = *lam == v.expected_lambda;
                let (value, pass) = match engine.word_norm(&v.word) {
                    Ok(n) => {
                        let ok = membership(&n, Region::InOnePlusQA) && weight_ok && distinct;
                        (n.to_string(), ok)
                    }
                    Err(e) => (undecided(e)?, false),
                };
                Ok(ConditionRecord {
                    kind: "i",
                    k: v.k,
                    kp: v.kp,
                    i: None,
                    value,
                    f_norm: None,
                    required: Region::InOnePlusQA.to_string(),
                    pass,
                    certificates: Vec::new(),
                })
            })
            .collect()
    })
}

/// Region required of `||e_i u||^2` when `<h_i, wt u> = n`.
pub fn condition_ii_region(d: &AffineDiagram, i: usize, n: i64) -> Region {
    Region::InQPowNA(d.symmetrizers[i] * (-2 * n - 2) + 1)
}

/// Condition (ii) for every vector and classical node.
pub fn check_condition_ii(spec: &CaseSpec, engine: &Engine) -> Result<Vec<ConditionRecord>> {
    let d = engine.diagram();
    let cells: Vec<(&CaseVector, usize)> = spec
        .vectors
        .iter()
        .flat_map(|v| d.classical_nodes().map(move |i| (v, i)))
        .collect();
    pool().install(|| {
        cells
            .par_iter()
            .map(|&(v, i)| {
                let n = engine.lambda_of(&v.word)[i];
                let region = condition_ii_region(d, i, n);
                let vec = VectorExpr::from_word(v.word.clone());
                let fword = v.word.prepend(Letter::f(i, 1));
                let (_, certificates) = engine.normalize(&VectorExpr::from_word(fword))?;
                let fv = engine.apply(Letter::f(i, 1), &vec)?;
                let f_norm = match engine.norm(&fv) {
                    Ok(x) => Some(x),
                    Err(e) => {
                        undecided(e)?;
                        None
                    }
                };
                let (value, pass) = match engine.e_norm_via_f(&vec, i) {
                    Ok(x) => {
                        let ok = membership(&x, region);
                        (x.to_string(), ok)
                    }
                    Err(e) => (undecided(e)?, false),
                };
                Ok(ConditionRecord {
                    kind: "ii",
                    k: v.k,
                    kp: v.kp,
                    i: Some(i),
                    value,
                    f_norm: f_norm.map(|x| x.to_string()),
                    required: region.to_string(),
                    pass,
                    certificates,
                })
            })
            .collect()
    })
}

/// `q0^{k(2s' - k)} [2s' choose k]_{q0}`.
fn e0_factor(q0: i64, two_s: i64, k: i64) -> Result<LaurentQ> {
    Ok(qbinom(two_s, k as u32, q0)?.shift(q0 * k * (two_s - k)))
}

/// Compares engine norms with the displayed closed forms. Relative forms
/// (written in terms of `||f_r u||^2` or `||u_{0,k}||^2`) use the engine
/// value of the referenced norm.
pub fn crosscheck_closed_forms(spec: &CaseSpec, engine: &Engine) -> Result<Vec<CrossCheck>> {
    let id = spec.id;
    let d = engine.diagram();
    let s = spec.s;
    let q0 = d.symmetrizers[0];
    let (r, x) = (id.node(), id.end_node());
    // F4 displays use 2s where <h_0, s varpi_4> = s; those items are advisory,
    // as are all items of the E8 case with its relabelled node.
    let advisory = matches!(id, CaseId::F4R4 | CaseId::E8R1);
    let f_r_u = engine.word_norm(&Word(vec![Letter::f(r, 1)]))?;
    let mut out = Vec::new();
    let tag = |v: &CaseVector| match v.kp {
        Some(kp) => format!("k={},kp={}", v.k, kp),
        None => format!("k={}", v.k),
    };
    for v in &spec.vectors {
        let (k, kp) = (v.k, v.kp.unwrap_or(0));
        let base = e0_factor(q0, 2 * s, k)?;
        let u_norm = &e0_factor(q0, 2 * s, kp)? * &base;
        let got = engine.word_norm(&v.word)?;
        out.push(CrossCheck::new(format!("|u|^2 {}", tag(v)), "norm", &got, &u_norm, advisory));
        let vec = VectorExpr::from_word(v.word.clone());
        for i in d.classical_nodes() {
            let si = d.symmetrizers[i];
            let fv = engine.apply(Letter::f(i, 1), &vec)?;
            let got = engine.norm(&fv)?;
            let label = format!("|f{i} u|^2 {}", tag(v));
            if k == 0 {
                // ||f_i u||^2 = q_i^{1 + delta_{ir} s} [delta_{ir} s]_{q_i}
                let m = if i == r { s } else { 0 };
                let paper = qint(m, si)?.shift(si * (1 + m));
                out.push(CrossCheck::new(label, "f_module_gen", &got, &paper, advisory));
                continue;
            }
            let formula = if i == x {
                "f_end"
            } else if i == r {
                "f_r"
            } else {
                "f_zero"
            };
            let base_u0k = if i == x {
                &qbinom(k, (k - 1) as u32, si)?.shift(si * (k - 1)) * &base
            } else if id.vanishing_nodes().contains(&i) {
                LaurentQ::zero()
            } else if i == r {
                &e0_factor(q0, 2 * s - 1, k)? * &f_r_u
            } else {
                return Err(Error::Internal(format!("node {i} has no closed form in {id}")));
            };
            let paper = if id.is_two_parameter() {
                let shift = if i == x { 1 } else { 0 };
                &e0_factor(q0, 2 * s - shift, kp)? * &base_u0k
            } else {
                base_u0k
            };
            out.push(CrossCheck::new(label.clone(), formula, &got, &paper, advisory));
            if id == CaseId::E6R3 && i == r {
                // explicit form with ||f_3 u||^2 = q_3^{1+s} [s]_{q_3} substituted
                let explicit = &e0_factor(q0, 2 * s - 1, k)? * &qint(s, si)?.shift(si * (1 + s));
                out.push(CrossCheck::new(format!("{label} explicit"), "f_r_explicit", &got, &explicit, advisory));
            }
        }
    }
    if id == CaseId::E6R5 {
        out.extend(diagram_swap_check(engine, s)?);
    }
    Ok(out)
}

/// The order-2 automorphism of E6(1) fixing 0 exchanges 1<->6 and 3<->5.
const E6_SWAP: [usize; 7] = [0, 6, 2, 5, 4, 3, 1];

/// Compares the r = 5 norms with the r = 3 norms under the diagram swap.
fn diagram_swap_check(engine5: &Engine, s: i64) -> Result<Vec<CrossCheck>> {
    let e3 = Engine::for_case(CaseId::E6R3, s)?;
    let mut out = Vec::new();
    for k in 0..=s {
        let w5 = CaseId::E6R5.template(k as u32, 0);
        let w3 = CaseId::E6R3.template(k as u32, 0);
        out.push(CrossCheck::new(
            format!("swap |u|^2 k={k}"),
            "swap",
            &engine5.word_norm(&w5)?,
            &e3.word_norm(&w3)?,
            false,
        ));
        for i in 1..=6 {
            let a = engine5.norm(&engine5.apply(Letter::f(i, 1), &VectorExpr::from_word(w5.clone()))?)?;
            let b = e3.norm(&e3.apply(Letter::f(E6_SWAP[i], 1), &VectorExpr::from_word(w3.clone()))?)?;
            out.push(CrossCheck::new(format!("swap |f{i} u|^2 k={k}"), "swap", &a, &b, false));
        }
    }
    Ok(out)
}

fn case_notes(id: CaseId) -> Vec<String> {
    let mut notes = Vec::new();
    if matches!(id, CaseId::E6R5 | CaseId::E7R2) {
        notes.push("template applied to u_0, read as the extremal vector u".to_string());
    }
    if id == CaseId::E8R1 {
        notes.push("word built on s*varpi_1 and varpi_8; listed in the node table as 7".to_string());
    }
    if id == CaseId::F4R4 {
        notes.push("k ranges over 0..=floor(s/2)".to_string());
        notes.push("closed forms use 2s with <h_0, s varpi_4> = s; mismatches are advisory".to_string());
    }
    notes
}

/// Checks the condition-(i) and (ii) norms for positivity and integrality.
pub fn polarization_consistent(report: &CaseReport) -> bool {
    report.conditions.iter().all(|c| {
        let vals = std::iter::once(&c.value).chain(c.f_norm.iter());
        vals.filter_map(|t| t.parse::<LaurentQ>().ok())
            .all(|p| p.has_integer_coefficients() && (p.is_zero() && c.kind == "ii" || is_positive(&p)))
    })
}

/// Runs every check for one case at level `s`.
pub fn run_case(id: CaseId, s: i64) -> Result<CaseReport> {
    run_case_with(id, s, None)
}

pub fn run_case_with(id: CaseId, s: i64, serre_bound: Option<usize>) -> Result<CaseReport> {
    let spec = CaseSpec::new(id, s)?;
    pool().install(|| {
        let engine = engine_for(&spec, serre_bound)?;
        let mut conditions = check_condition_i(&spec, &engine)?;
        conditions.extend(check_condition_ii(&spec, &engine)?);
        conditions.sort_by(|a, b| {
            (a.kind, a.k, a.kp, a.i).cmp(&(b.kind, b.k, b.kp, b.i))
        });
        let crosscheck = crosscheck_closed_forms(&spec, &engine)?;
        Ok(CaseReport {
            case: id,
            s,
            conditions,
            crosscheck,
            decomposition: spec.decomposition.clone(),
            notes: case_notes(id),
        })
    })
}
