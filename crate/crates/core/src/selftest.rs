//! Deterministic invariant suites for the arithmetic, root-data and
//! representation layers, runnable from a release binary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::classrep::ClassicalRootSystem;
use crate::qlaurent::{membership, qbinom, qint, LaurentQ, Region};
use crate::rootdata::{AffineDiagram, Family};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(what());
        }
    }

    fn done(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

fn binomial(m: i64, k: i64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(m - j) / BigInt::from(j + 1))
}

pub fn qlaurent_suite() -> SuiteResult {
    let mut t = Tally::new("qlaurent");
    for d in 1..=3i64 {
        for m in 0..=16i64 {
            let qm = qint(m, d).unwrap_or_else(|_| LaurentQ::zero());
            t.check(qm.bar() == qm, || format!("[{m}]_{d} not bar invariant"));
            for k in 0..=m {
                let b = match qbinom(m, k as u32, d) {
                    Ok(b) => b,
                    Err(e) => {
                        t.check(false, || format!("qbinom({m},{k},{d}): {e}"));
                        continue;
                    }
                };
                t.check(qbinom(m, (m - k) as u32, d).ok().as_ref() == Some(&b), || {
                    format!("symmetry ({m},{k},{d})")
                });
                t.check(b.bar() == b, || format!("bar ({m},{k},{d})"));
                t.check(b.eval_at_one() == BigRational::from_integer(binomial(m, k)), || {
                    format!("q=1 ({m},{k},{d})")
                });
                t.check(membership(&b, Region::InQPowNA(-k * (m - k) * d)), || {
                    format!("valuation ({m},{k},{d})")
                });
                if d == 1 && k >= 1 && m >= 1 {
                    let pascal = qbinom(m - 1, k as u32, 1).and_then(|a| {
                        qbinom(m - 1, k as u32 - 1, 1).map(|c| &a.shift(k) + &c.shift(k - m))
                    });
                    t.check(pascal.ok().as_ref() == Some(&b), || format!("pascal ({m},{k})"));
                }
                if !qm.is_zero() {
                    let prod = &b * &qm;
                    t.check(prod.div_exact(&qm).as_ref() == Some(&b), || format!("div_exact ({m},{k},{d})"));
                }
                t.check(b.to_string().parse::<LaurentQ>().ok().as_ref() == Some(&b), || {
                    format!("text round trip ({m},{k},{d})")
                });
            }
        }
    }
    t.done()
}

pub fn rootdata_suite() -> SuiteResult {
    let mut t = Tally::new("rootdata");
    for f in Family::ALL {
        let d = AffineDiagram::get(f);
        let n = d.len();
        for i in 0..n {
            let row: i64 = (0..n).map(|j| d.a(i, j) * d.marks[j]).sum();
            let col: i64 = (0..n).map(|j| d.comarks[j] * d.a(j, i)).sum();
            t.check(row == 0 && col == 0, || format!("{f}: null vectors at node {i}"));
            t.check(d.a(i, i) == 2, || format!("{f}: diagonal at {i}"));
            for j in 0..n {
                let sym = d.symmetrizers[i] * d.a(i, j) == d.symmetrizers[j] * d.a(j, i);
                t.check(sym, || format!("{f}: DA not symmetric at ({i},{j})"));
            }
        }
        for r in d.classical_nodes() {
            let ok = d.varpi(r).map(|v| d.level(&v) == 0).unwrap_or(false);
            t.check(ok, || format!("{f}: varpi_{r} has non-zero level"));
        }
    }
    t.done()
}

pub fn classrep_suite() -> SuiteResult {
    let mut t = Tally::new("classrep");
    let roots = [36, 63, 120, 24, 24];
    for (f, count) in Family::ALL.into_iter().zip(roots) {
        let sys = ClassicalRootSystem::for_family(f);
        t.check(sys.positive_roots.len() == count, || format!("{f}: root count"));
        let rank = sys.rank();
        for i in 0..=rank {
            let mut lam = vec![0; rank];
            if i > 0 {
                lam[i - 1] = 1;
            }
            let mass = sys.freudenthal(&lam).map(|table| {
                table
                    .iter()
                    .map(|(mu, m)| sys.orbit_size(mu) * BigInt::from(*m))
                    .sum::<BigInt>()
            });
            let dim = sys.weyl_dim(&lam);
            t.check(matches!((&mass, &dim), (Ok(a), Ok(b)) if a == b), || {
                format!("{f}: Weyl dimension of {lam:?} disagrees with Freudenthal")
            });
        }
    }
    t.done()
}

/// All suites in a fixed order.
pub fn run_all() -> Vec<SuiteResult> {
    vec![qlaurent_suite(), rootdata_suite(), classrep_suite()]
}
