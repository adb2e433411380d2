//! Finite-type representation theory used as an oracle: positive roots,
//! Weyl dimensions and Freudenthal weight multiplicities.
//!
//! Classical weights are integer vectors in fundamental-weight coordinates,
//! indexed by the classical nodes `1..=rank` of the affine diagram (entry
//! `j - 1` holds the coefficient of the `j`-th fundamental weight).

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kleber::Decomposition;
use crate::rootdata::{AffineDiagram, Family};

type Q128 = Ratio<i128>;

pub type MultTable = BTreeMap<Vec<i64>, u64>;

const CONJUGATION_STEP_BOUND: usize = 1_000_000;

#[derive(Debug)]
pub struct ClassicalRootSystem {
    pub family: Family,
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
    /// Positive roots in simple-root coordinates.
    pub positive_roots: Vec<Vec<i64>>,
    /// The same roots in fundamental-weight coordinates.
    root_weights: Vec<Vec<i64>>,
    inv_cartan: Vec<Vec<Q128>>,
    freudenthal_cache: DashMap<Vec<i64>, Arc<MultTable>>,
}

impl ClassicalRootSystem {
    pub fn new(family: Family, cartan: Vec<Vec<i64>>, symmetrizers: Vec<i64>) -> Result<Self> {
        let n = cartan.len();
        let positive_roots = reflection_closure(&cartan);
        let root_weights = positive_roots
            .iter()
            .map(|b| (0..n).map(|i| (0..n).map(|j| cartan[i][j] * b[j]).sum()).collect())
            .collect();
        let inv_cartan = invert(&cartan)?;
        Ok(Self {
            family,
            cartan,
            symmetrizers,
            positive_roots,
            root_weights,
            inv_cartan,
            freudenthal_cache: DashMap::new(),
        })
    }

    /// The classical subsystem of an affine family (shared, memoized).
    pub fn for_family(family: Family) -> &'static ClassicalRootSystem {
        static TABLE: OnceLock<Vec<ClassicalRootSystem>> = OnceLock::new();
        let table = TABLE.get_or_init(|| {
            Family::ALL
                .iter()
                .map(|&f| {
                    let d = AffineDiagram::get(f);
                    ClassicalRootSystem::new(f, d.classical_cartan(), d.classical_symmetrizers())
                        .expect("classical Cartan matrix is invertible")
                })
                .collect()
        });
        &table[Family::ALL.iter().position(|&f| f == family).unwrap()]
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn is_dominant(&self, lam: &[i64]) -> bool {
        lam.iter().all(|x| *x >= 0)
    }

    /// Coordinates of a weight in the basis of simple roots.
    pub fn root_coords(&self, lam: &[i64]) -> Vec<Q128> {
        self.inv_cartan
            .iter()
            .map(|row| row.iter().zip(lam).fold(Q128::zero(), |acc, (a, l)| acc + a * Q128::from(*l as i128)))
            .collect()
    }

    /// `(lam, mu)` with `(alpha_i, alpha_j) = s_i A_ij`.
    pub fn inner(&self, lam: &[i64], mu: &[i64]) -> Q128 {
        self.root_coords(lam)
            .iter()
            .enumerate()
            .fold(Q128::zero(), |acc, (j, c)| acc + c * Q128::from((self.symmetrizers[j] * mu[j]) as i128))
    }

    /// True iff `hi - lo` is a non-negative integer combination of simple roots.
    pub fn dominates(&self, hi: &[i64], lo: &[i64]) -> bool {
        let diff: Vec<i64> = hi.iter().zip(lo).map(|(a, b)| a - b).collect();
        self.root_coords(&diff)
            .iter()
            .all(|c| c.is_integer() && *c >= Q128::zero())
    }

    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.rank()]
    }

    pub fn weyl_dim(&self, lam: &[i64]) -> Result<BigInt> {
        if lam.len() != self.rank() {
            return Err(Error::InvalidArgument("weight has wrong length".into()));
        }
        if !self.is_dominant(lam) {
            return Err(Error::InvalidArgument(format!("weight {lam:?} is not dominant")));
        }
        let mut prod = BigRational::one();
        for beta in &self.positive_roots {
            let mut num = 0i64;
            let mut den = 0i64;
            for j in 0..self.rank() {
                num += beta[j] * self.symmetrizers[j] * (lam[j] + 1);
                den += beta[j] * self.symmetrizers[j];
            }
            prod *= BigRational::new(num.into(), den.into());
        }
        if !prod.is_integer() {
            return Err(Error::Internal("Weyl dimension is not an integer".into()));
        }
        Ok(prod.to_integer())
    }

    pub fn dominant_conjugate(&self, mu: &[i64]) -> Result<Vec<i64>> {
        let mut v = mu.to_vec();
        for _ in 0..CONJUGATION_STEP_BOUND {
            let Some(i) = v.iter().position(|x| *x < 0) else {
                return Ok(v);
            };
            let c = v[i];
            for (j, x) in v.iter_mut().enumerate() {
                *x -= c * self.cartan[j][i];
            }
        }
        Err(Error::Internal(format!("dominant conjugation of {mu:?} did not terminate")))
    }

    /// All dominant weights `mu <= lam`.
    pub fn dominant_weights_below(&self, lam: &[i64]) -> Vec<Vec<i64>> {
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lam.to_vec());
        queue.push_back(lam.to_vec());
        while let Some(mu) = queue.pop_front() {
            for rw in &self.root_weights {
                let nu: Vec<i64> = mu.iter().zip(rw).map(|(a, b)| a - b).collect();
                if self.is_dominant(&nu) && seen.insert(nu.clone()) {
                    queue.push_back(nu);
                }
            }
        }
        let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Dominant-weight multiplicity table of `V(lam)` by Freudenthal's formula.
    pub fn freudenthal(&self, lam: &[i64]) -> Result<Arc<MultTable>> {
        if !self.is_dominant(lam) {
            return Err(Error::InvalidArgument(format!("weight {lam:?} is not dominant")));
        }
        if let Some(t) = self.freudenthal_cache.get(lam) {
            return Ok(t.clone());
        }
        let table = Arc::new(self.freudenthal_uncached(lam)?);
        self.freudenthal_cache.insert(lam.to_vec(), table.clone());
        Ok(table)
    }

    fn freudenthal_uncached(&self, lam: &[i64]) -> Result<MultTable> {
        let mut dominant = self.dominant_weights_below(lam);
        // Process in order of increasing depth below lam.
        let depth = |mu: &Vec<i64>| -> Q128 {
            let diff: Vec<i64> = lam.iter().zip(mu).map(|(a, b)| a - b).collect();
            self.root_coords(&diff).into_iter().fold(Q128::zero(), |a, b| a + b)
        };
        dominant.sort_by_key(|mu| depth(mu));
        let rho = self.rho();
        let shift = |v: &[i64]| -> Vec<i64> { v.iter().zip(&rho).map(|(a, b)| a + b).collect() };
        let lr = shift(lam);
        let top = self.inner(&lr, &lr);
        let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
        mult.insert(lam.to_vec(), 1);
        for mu in dominant.iter().skip(1) {
            let mr = shift(mu);
            let denom = top - self.inner(&mr, &mr);
            if denom <= Q128::zero() {
                return Err(Error::Internal("non-positive Freudenthal denominator".into()));
            }
            let mut acc = Q128::zero();
            for rw in &self.root_weights {
                let mut j = 1i64;
                loop {
                    let nu: Vec<i64> = mu.iter().zip(rw).map(|(a, b)| a + j * b).collect();
                    let dom = self.dominant_conjugate(&nu)?;
                    let m = mult.get(&dom).copied().unwrap_or(0);
                    if m == 0 {
                        break;
                    }
                    acc += self.inner(&nu, rw) * Q128::from(m as i128);
                    j += 1;
                }
            }
            let value = acc * Q128::from(2) / denom;
            if !value.is_integer() || value < Q128::zero() {
                return Err(Error::Internal(format!("non-integral multiplicity at {mu:?}")));
            }
            let value = value
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::Internal("multiplicity overflow".into()))?;
            mult.insert(mu.clone(), value);
        }
        Ok(mult.into_iter().filter(|(_, m)| *m > 0).collect())
    }

    /// Multiplicity of an arbitrary weight `mu` in `V(lam)`.
    pub fn multiplicity(&self, lam: &[i64], mu: &[i64]) -> Result<u64> {
        let dom = self.dominant_conjugate(mu)?;
        if !self.dominates(lam, &dom) {
            return Ok(0);
        }
        Ok(self.freudenthal(lam)?.get(&dom).copied().unwrap_or(0))
    }

    /// Order of the parabolic subgroup generated by reflections in `subset`.
    pub fn weyl_order_of(&self, subset: &[usize]) -> BigInt {
        let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
        for b in &self.positive_roots {
            if b.iter().enumerate().all(|(j, c)| *c == 0 || subset.contains(&j)) {
                *counts.entry(b.iter().sum()).or_insert(0) += 1;
            }
        }
        // The exponents form the partition dual to the height distribution.
        let mut order = BigInt::one();
        for (&h, &n) in &counts {
            let next = counts.get(&(h + 1)).copied().unwrap_or(0);
            for _ in 0..(n - next) {
                order *= BigInt::from(h + 1);
            }
        }
        order
    }

    pub fn weyl_order(&self) -> BigInt {
        self.weyl_order_of(&(0..self.rank()).collect::<Vec<_>>())
    }

    /// Size of the Weyl orbit of a dominant weight.
    pub fn orbit_size(&self, mu: &[i64]) -> BigInt {
        let stab: Vec<usize> = (0..self.rank()).filter(|&j| mu[j] == 0).collect();
        self.weyl_order() / self.weyl_order_of(&stab)
    }
}

fn reflection_closure(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(b) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| cartan[i][j] * b[j]).sum();
            if pairing == 0 {
                continue;
            }
            let mut c = b.clone();
            c[i] -= pairing;
            if c.iter().all(|x| *x >= 0) && seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by_key(|b| (b.iter().sum::<i64>(), b.clone()));
    roots
}

fn invert(m: &[Vec<i64>]) -> Result<Vec<Vec<Q128>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q128>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q128> = row.iter().map(|&x| Q128::from(x as i128)).collect();
            r.extend((0..n).map(|j| if i == j { Q128::one() } else { Q128::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal("singular Cartan matrix".into()))?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = f * a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `sum_{(lam, m)} m * mult_{V(lam)}(mu)`.
pub fn weight_multiplicity(family: Family, decomp: &Decomposition, mu: &[i64]) -> Result<u64> {
    let sys = ClassicalRootSystem::for_family(family);
    let mut total = 0u64;
    for (lam, m) in decomp.entries() {
        total += m * sys.multiplicity(lam, mu)?;
    }
    Ok(total)
}

/// Cheap equivalent of `weight_multiplicity(..) > 0`: a dominant weight
/// occurs in `V(lam)` exactly when it lies below `lam`.
pub fn weight_occurs(family: Family, decomp: &Decomposition, mu: &[i64]) -> Result<bool> {
    let sys = ClassicalRootSystem::for_family(family);
    let dom = sys.dominant_conjugate(mu)?;
    Ok(decomp.entries().iter().any(|(lam, _)| sys.dominates(lam, &dom)))
}
