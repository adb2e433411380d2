//! Affine Cartan data for the exceptional families handled by the verifier.
//!
//! Cartan matrices are transcribed from the Dynkin diagrams in Bourbaki
//! labelling; symmetrizers, marks and comarks are derived from them.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    E6_1,
    E7_1,
    E8_1,
    F4_1,
    E6_2,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::E6_1,
        Family::E7_1,
        Family::E8_1,
        Family::F4_1,
        Family::E6_2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::E6_1 => "E6_1",
            Family::E7_1 => "E7_1",
            Family::E8_1 => "E8_1",
            Family::F4_1 => "F4_1",
            Family::E6_2 => "E6_2",
        }
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, Family::E6_1 | Family::E7_1 | Family::E8_1)
    }

    /// Number of nodes of the affine diagram, node 0 included.
    pub fn node_count(self) -> usize {
        match self {
            Family::E6_1 => 7,
            Family::E7_1 => 8,
            Family::E8_1 => 9,
            Family::F4_1 | Family::E6_2 => 5,
        }
    }

    /// Edges `(i, j, A_ij, A_ji)`.
    fn edges(self) -> &'static [(usize, usize, i64, i64)] {
        match self {
            Family::E6_1 => &[
                (1, 3, -1, -1),
                (3, 4, -1, -1),
                (4, 5, -1, -1),
                (5, 6, -1, -1),
                (2, 4, -1, -1),
                (0, 2, -1, -1),
            ],
            Family::E7_1 => &[
                (0, 1, -1, -1),
                (1, 3, -1, -1),
                (3, 4, -1, -1),
                (4, 5, -1, -1),
                (5, 6, -1, -1),
                (6, 7, -1, -1),
                (2, 4, -1, -1),
            ],
            Family::E8_1 => &[
                (1, 3, -1, -1),
                (3, 4, -1, -1),
                (4, 5, -1, -1),
                (5, 6, -1, -1),
                (6, 7, -1, -1),
                (7, 8, -1, -1),
                (8, 0, -1, -1),
                (2, 4, -1, -1),
            ],
            // Double bond 2 => 3: nodes 3, 4 short.
            Family::F4_1 => &[(0, 1, -1, -1), (1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)],
            // Double bond 2 <= 3: nodes 3, 4 long.
            Family::E6_2 => &[(0, 1, -1, -1), (1, 2, -1, -1), (2, 3, -2, -1), (3, 4, -1, -1)],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "e61" => Ok(Family::E6_1),
            "e71" => Ok(Family::E7_1),
            "e81" => Ok(Family::E8_1),
            "f41" => Ok(Family::F4_1),
            "e62" => Ok(Family::E6_2),
            _ => Err(Error::InvalidArgument(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineDiagram {
    pub family: Family,
    /// `cartan[i][j] = A_ij = <h_i, alpha_j>`.
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
}

impl AffineDiagram {
    /// Builds the diagram from the transcribed adjacency and derives the rest.
    pub fn build(family: Family) -> Result<Self> {
        let n = family.node_count();
        let mut cartan = vec![vec![0i64; n]; n];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j, aij, aji) in family.edges() {
            cartan[i][j] = aij;
            cartan[j][i] = aji;
        }
        let symmetrizers = derive_symmetrizers(&cartan)?;
        let marks = null_vector(&cartan)?;
        let transposed: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| cartan[j][i]).collect()).collect();
        let comarks = null_vector(&transposed)?;
        Ok(Self {
            family,
            cartan,
            symmetrizers,
            marks,
            comarks,
        })
    }

    /// Shared immutable instance.
    pub fn get(family: Family) -> &'static AffineDiagram {
        static TABLE: OnceLock<Vec<AffineDiagram>> = OnceLock::new();
        let table = TABLE.get_or_init(|| {
            Family::ALL
                .iter()
                .map(|&f| AffineDiagram::build(f).expect("transcribed Cartan data is consistent"))
                .collect()
        });
        &table[Family::ALL.iter().position(|&f| f == family).unwrap()]
    }

    pub fn len(&self) -> usize {
        self.cartan.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cartan.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.len() - 1
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// Classical nodes `I_0 = I \ {0}`.
    pub fn classical_nodes(&self) -> std::ops::Range<usize> {
        1..self.len()
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("node {i} not in {}", self.family)))
        }
    }

    /// `<h_i, lam>`.
    pub fn pairing(&self, i: usize, lam: &WeightVec) -> Result<i64> {
        self.check_node(i)?;
        if lam.lambda.len() != self.len() {
            return Err(Error::InvalidArgument("weight has wrong length".into()));
        }
        Ok(lam.lambda[i])
    }

    /// `alpha_j = sum_i A_ij Lambda_i + delta_{j0} delta`.
    pub fn simple_root(&self, j: usize) -> Result<WeightVec> {
        self.check_node(j)?;
        Ok(WeightVec {
            lambda: (0..self.len()).map(|i| self.cartan[i][j]).collect(),
            delta: if j == 0 { Rational64::one() } else { Rational64::zero() },
        })
    }

    pub fn fundamental(&self, i: usize) -> Result<WeightVec> {
        self.check_node(i)?;
        let mut w = WeightVec::zero(self.len());
        w.lambda[i] = 1;
        Ok(w)
    }

    /// Level-zero fundamental weight `Lambda_r - a_r^vee Lambda_0`.
    pub fn varpi(&self, r: usize) -> Result<WeightVec> {
        if r == 0 {
            return Err(Error::InvalidArgument("varpi is defined for classical nodes only".into()));
        }
        self.check_node(r)?;
        let mut w = self.fundamental(r)?;
        w.lambda[0] = -self.comarks[r];
        Ok(w)
    }

    /// `<c, lam> = sum_i a_i^vee lam_i`.
    pub fn level(&self, lam: &WeightVec) -> i64 {
        lam.lambda.iter().zip(&self.comarks).map(|(l, a)| l * a).sum()
    }

    /// Cartan matrix of the classical subdiagram on `I_0`.
    pub fn classical_cartan(&self) -> Vec<Vec<i64>> {
        self.classical_nodes()
            .map(|i| self.classical_nodes().map(|j| self.cartan[i][j]).collect())
            .collect()
    }

    pub fn classical_symmetrizers(&self) -> Vec<i64> {
        self.symmetrizers[1..].to_vec()
    }

    /// Text table of the diagram data for auditing.
    pub fn dump_table(&self) -> String {
        let row = |v: &[i64]| v.iter().map(|x| format!("{x:>3}")).collect::<Vec<_>>().join("");
        let mut out = format!("family {}\ncartan\n", self.family);
        for r in &self.cartan {
            out.push_str(&row(r));
            out.push('\n');
        }
        out.push_str(&format!("marks        {}\n", row(&self.marks)));
        out.push_str(&format!("comarks      {}\n", row(&self.comarks)));
        out.push_str(&format!("symmetrizers {}\n", row(&self.symmetrizers)));
        out
    }
}

fn derive_symmetrizers(cartan: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = cartan.len();
    let mut s: Vec<Option<Rational64>> = vec![None; n];
    s[0] = Some(Rational64::one());
    let mut queue = vec![0usize];
    while let Some(i) = queue.pop() {
        let si = s[i].unwrap();
        for j in 0..n {
            if i == j || cartan[i][j] == 0 {
                continue;
            }
            if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                return Err(Error::Internal("Cartan matrix is not symmetrizable".into()));
            }
            let sj = si * Rational64::new(cartan[i][j], cartan[j][i]);
            match s[j] {
                None => {
                    s[j] = Some(sj);
                    queue.push(j);
                }
                Some(existing) if existing != sj => {
                    return Err(Error::Internal("inconsistent symmetrization".into()));
                }
                Some(_) => {}
            }
        }
    }
    let s: Vec<Rational64> = s
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Internal("diagram is disconnected".into()))?;
    Ok(primitive_integer_vector(&s))
}

/// Scales a positive rational vector to the primitive positive integer vector.
fn primitive_integer_vector(v: &[Rational64]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    let sign = if ints.iter().any(|x| *x < 0) { -1 } else { 1 };
    ints.iter().map(|x| sign * x / g).collect()
}

/// Primitive positive generator of the one-dimensional kernel of `m`.
fn null_vector(m: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = m.len();
    let mut rows: Vec<Vec<Rational64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for x in rows[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col];
                for c in 0..n {
                    let sub = f * rows[row][c];
                    rows[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() != n - 1 {
        return Err(Error::Internal("affine Cartan matrix must have corank one".into()));
    }
    let free = (0..n).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![Rational64::zero(); n];
    v[free] = Rational64::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[r][free];
    }
    if v.iter().any(|x| x.is_zero()) || (v.iter().any(|x| x.is_positive()) && v.iter().any(|x| x.is_negative())) {
        return Err(Error::Internal("null vector is not sign-definite".into()));
    }
    Ok(primitive_integer_vector(&v))
}

/// An affine weight `sum_i lambda_i Lambda_i + delta_coeff delta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVec {
    pub lambda: Vec<i64>,
    pub delta: Rational64,
}

impl WeightVec {
    pub fn zero(n: usize) -> Self {
        Self {
            lambda: vec![0; n],
            delta: Rational64::zero(),
        }
    }

    pub fn from_lambda(lambda: Vec<i64>) -> Self {
        Self {
            lambda,
            delta: Rational64::zero(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        Self {
            lambda: self.lambda.iter().map(|x| x * c).collect(),
            delta: self.delta * c,
        }
    }

    /// Equality in `P / Z delta`: only the `Lambda` coefficients matter.
    pub fn eq_mod_delta(&self, other: &WeightVec) -> bool {
        self.lambda == other.lambda
    }

    /// Projection to the classical weight lattice (drops `Lambda_0` and `delta`).
    pub fn classical(&self) -> Vec<i64> {
        self.lambda[1..].to_vec()
    }
}

impl Add for &WeightVec {
    type Output = WeightVec;
    fn add(self, rhs: &WeightVec) -> WeightVec {
        WeightVec {
            lambda: self.lambda.iter().zip(&rhs.lambda).map(|(a, b)| a + b).collect(),
            delta: self.delta + rhs.delta,
        }
    }
}

impl Sub for &WeightVec {
    type Output = WeightVec;
    fn sub(self, rhs: &WeightVec) -> WeightVec {
        self + &(-rhs)
    }
}

impl Neg for &WeightVec {
    type Output = WeightVec;
    fn neg(self) -> WeightVec {
        self.scale(-1)
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.lambda.iter().enumerate() {
            if *c != 0 {
                parts.push(format!("{c}*L{i}"));
            }
        }
        if !self.delta.is_zero() {
            parts.push(format!("{}*delta", self.delta));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_data_matches_known_tables() {
        let e6 = AffineDiagram::get(Family::E6_1);
        assert_eq!(e6.marks, vec![1, 1, 2, 2, 3, 2, 1]);
        assert_eq!(e6.comarks, e6.marks);
        assert_eq!(e6.symmetrizers, vec![1; 7]);
        let e8 = AffineDiagram::get(Family::E8_1);
        assert_eq!(e8.marks, vec![1, 2, 3, 4, 6, 5, 4, 3, 2]);
        let f4 = AffineDiagram::get(Family::F4_1);
        assert_eq!(f4.symmetrizers, vec![2, 2, 2, 1, 1]);
        assert_eq!(f4.marks, vec![1, 2, 3, 4, 2]);
        assert_eq!(f4.comarks, vec![1, 2, 3, 2, 1]);
        let e62 = AffineDiagram::get(Family::E6_2);
        assert_eq!(e62.symmetrizers, vec![1, 1, 1, 2, 2]);
        assert_eq!(e62.marks, vec![1, 2, 3, 2, 1]);
        assert_eq!(e62.comarks, vec![1, 2, 3, 4, 2]);
    }

    #[test]
    fn pairing_and_roots() {
        let d = AffineDiagram::get(Family::E6_1);
        assert_eq!(d.pairing(3, &d.fundamental(3).unwrap()).unwrap(), 1);
        assert_eq!(d.pairing(0, &d.varpi(3).unwrap()).unwrap(), -2);
        for i in d.nodes() {
            for j in d.nodes() {
                assert_eq!(d.pairing(i, &d.simple_root(j).unwrap()).unwrap(), d.a(i, j));
            }
        }
        assert!(d.pairing(7, &d.varpi(3).unwrap()).is_err());
        assert!(d.varpi(0).is_err());
    }

    #[test]
    fn marks_combination_is_delta() {
        for f in Family::ALL {
            let d = AffineDiagram::get(f);
            let mut sum = WeightVec::zero(d.len());
            for j in d.nodes() {
                sum = &sum + &d.simple_root(j).unwrap().scale(d.marks[j]);
            }
            assert!(sum.lambda.iter().all(|x| *x == 0), "{f}");
            assert_eq!(sum.delta, Rational64::one());
            for r in d.classical_nodes() {
                assert_eq!(d.level(&d.varpi(r).unwrap()), 0);
            }
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!("e6_1".parse::<Family>().unwrap(), Family::E6_1);
        assert_eq!("F4(1)".parse::<Family>().unwrap(), Family::F4_1);
        assert!("g2_1".parse::<Family>().is_err());
    }
}
