//! Exact Laurent polynomials in `q` over the rationals.
//!
//! Every quantity the verifier produces (q-integers, q-binomials, norms of
//! test vectors) is a Laurent polynomial, so `LaurentQ` is the only carrier
//! of elements of `Q(q)` in this crate. Division is only ever performed
//! exactly; a non-zero remainder is reported as an internal error.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A Laurent polynomial `sum c_e q^e` with `c_e` exact rationals.
///
/// Zero coefficients are never stored, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentQ {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    pub fn monomial(c: BigRational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(BigRational::from_integer(c.into()), 0)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// Convenience constructor for integer coefficients.
    pub fn from_int_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (e, BigRational::from_integer(c.into()))),
        )
    }

    fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Lowest exponent with a non-zero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// The bar involution `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    /// Substitutes `q -> q^d`.
    pub fn substitute_power(&self, d: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k * d, c.clone())).collect(),
        }
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &LaurentQ) -> Option<LaurentQ> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dhigh = divisor.degree()?;
        let lead = &divisor.terms[&dhigh];
        if lead.is_integer()
            && lead.numer().magnitude().is_one()
            && self.has_integer_coefficients()
            && divisor.has_integer_coefficients()
        {
            return self.div_exact_monic_integer(divisor);
        }
        let dlow = divisor.valuation()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let low = rem.valuation()?;
        // Long division from the top; terms below `low - dlow` cannot appear in an
        // exact quotient.
        while let Some(top) = rem.degree() {
            let shift = top - dhigh;
            if shift < low - dlow {
                return None;
            }
            let c = &rem.terms[&top] / lead;
            quot.add_term(shift, c.clone());
            for (e, dc) in &divisor.terms {
                rem.add_term(e + shift, -(dc * &c));
            }
        }
        Some(quot)
    }

    /// Long division over `Z` by a divisor with leading coefficient `+-1`.
    fn div_exact_monic_integer(&self, divisor: &LaurentQ) -> Option<LaurentQ> {
        let to_int = |f: &LaurentQ| -> BTreeMap<i64, BigInt> {
            f.terms.iter().map(|(e, c)| (*e, c.numer().clone())).collect()
        };
        let div = to_int(divisor);
        let (&dhigh, lead) = div.iter().next_back()?;
        let (&dlow, _) = div.iter().next()?;
        let negate = lead.is_negative();
        let mut rem = to_int(self);
        let low = *rem.keys().next()?;
        let mut quot: BTreeMap<i64, BigInt> = BTreeMap::new();
        while let Some((&top, c)) = rem.iter().next_back() {
            let shift = top - dhigh;
            if shift < low - dlow {
                return None;
            }
            let c = if negate { -c.clone() } else { c.clone() };
            for (e, dc) in &div {
                let slot = rem.entry(e + shift).or_insert_with(BigInt::zero);
                *slot -= dc * &c;
                if slot.is_zero() {
                    rem.remove(&(e + shift));
                }
            }
            quot.insert(shift, c);
        }
        Some(LaurentQ {
            terms: quot.into_iter().map(|(e, c)| (e, BigRational::from_integer(c))).collect(),
        })
    }

    /// `f > 0` in the total order on `Q(q)`: the lowest coefficient is positive.
    pub fn is_positive(&self) -> bool {
        self.terms
            .values()
            .next()
            .is_some_and(|c| c.is_positive())
    }

    /// Compares `self` and `other` in the total order `f > g iff f - g > 0`.
    pub fn total_cmp(&self, other: &LaurentQ) -> std::cmp::Ordering {
        let diff = self - other;
        if diff.is_zero() {
            std::cmp::Ordering::Equal
        } else if diff.is_positive() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        }
    }

    pub fn contains_in(&self, region: Region) -> bool {
        membership(self, region)
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let body = match *e {
                0 => None,
                1 => Some("q".to_string()),
                e => Some(format!("q^{e}")),
            };
            match body {
                None => write!(f, "{abs}")?,
                Some(b) if abs.is_one() => write!(f, "{b}")?,
                Some(b) => write!(f, "{abs}*{b}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentQ({self})")
    }
}

impl std::str::FromStr for LaurentQ {
    type Err = Error;

    /// Parses the canonical text form produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad Laurent polynomial `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Self::zero());
        }
        // Split on +/- that are not the sign of an exponent.
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if !cur.is_empty() {
            pieces.push((neg, cur));
        }
        if pieces.is_empty() {
            return Err(bad());
        }
        let mut out = Self::zero();
        for (neg, piece) in pieces {
            let (coef_str, mono) = match piece.find('q') {
                None => (piece.as_str(), None),
                Some(pos) => {
                    let coef = piece[..pos].trim_end_matches('*');
                    (coef, Some(&piece[pos + 1..]))
                }
            };
            let mut c = if coef_str.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coef_str).ok_or_else(bad)?
            };
            let e = match mono {
                None => 0,
                Some("") => 1,
                Some(rest) => rest
                    .strip_prefix('^')
                    .and_then(|x| x.parse::<i64>().ok())
                    .ok_or_else(bad)?,
            };
            if neg {
                c = -c;
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl<'a> Add<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &'a LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentQ {
    type Output = LaurentQ;
    fn add(mut self, rhs: LaurentQ) -> LaurentQ {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentQ> for LaurentQ {
    fn add_assign(&mut self, rhs: &LaurentQ) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> Sub<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &'a LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Sub for LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: LaurentQ) -> LaurentQ {
        &self - &rhs
    }
}

impl Neg for &LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        LaurentQ {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        -&self
    }
}

impl<'a> Mul<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &'a LaurentQ) -> LaurentQ {
        if self.is_zero() || rhs.is_zero() {
            return LaurentQ::zero();
        }
        // Integer fast path: accumulate in BigInt and build rationals once.
        if self.has_integer_coefficients() && rhs.has_integer_coefficients() {
            let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
            for (ea, ca) in &self.terms {
                for (eb, cb) in &rhs.terms {
                    *acc.entry(ea + eb).or_insert_with(BigInt::zero) += ca.numer() * cb.numer();
                }
            }
            return LaurentQ {
                terms: acc
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, c)| (e, BigRational::from_integer(c)))
                    .collect(),
            };
        }
        let mut out = LaurentQ::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: LaurentQ) -> LaurentQ {
        &self * &rhs
    }
}

impl Zero for LaurentQ {
    fn zero() -> Self {
        LaurentQ::zero()
    }
    fn is_zero(&self) -> bool {
        LaurentQ::is_zero(self)
    }
}

impl One for LaurentQ {
    fn one() -> Self {
        LaurentQ::one()
    }
}

/// The q-integer `[m]_{q^d} = (q^{dm} - q^{-dm}) / (q^d - q^{-d})`.
pub fn qint(m: i64, d: i64) -> Result<LaurentQ> {
    if d <= 0 {
        return Err(Error::InvalidArgument(format!(
            "q-integer base exponent must be positive, got {d}"
        )));
    }
    Ok(qint_unchecked(m, d))
}

fn qint_unchecked(m: i64, d: i64) -> LaurentQ {
    if m == 0 {
        return LaurentQ::zero();
    }
    if m < 0 {
        return -qint_unchecked(-m, d);
    }
    LaurentQ::from_terms((0..m).map(|j| (d * (m - 1 - 2 * j), BigRational::one())))
}

/// `[k]_{q^d}!`.
pub fn qfactorial(k: u32, d: i64) -> Result<LaurentQ> {
    if d <= 0 {
        return Err(Error::InvalidArgument(format!(
            "q-factorial base exponent must be positive, got {d}"
        )));
    }
    Ok((1..=k as i64).fold(LaurentQ::one(), |acc, j| &acc * &qint_unchecked(j, d)))
}

fn qbinom_cache() -> &'static DashMap<(i64, u32, i64), LaurentQ> {
    static CACHE: OnceLock<DashMap<(i64, u32, i64), LaurentQ>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// The q-binomial `[m choose k]_{q^d}` for any integer `m` and `k >= 0`.
///
/// Computed as `prod_{j<k} [m-j] / [k]!` by exact division; results are
/// memoized process-wide.
pub fn qbinom(m: i64, k: u32, d: i64) -> Result<LaurentQ> {
    if d <= 0 {
        return Err(Error::InvalidArgument(format!(
            "q-binomial base exponent must be positive, got {d}"
        )));
    }
    if let Some(v) = qbinom_cache().get(&(m, k, d)) {
        return Ok(v.clone());
    }
    if d > 1 {
        let value = qbinom(m, k, 1)?.substitute_power(d);
        qbinom_cache().insert((m, k, d), value.clone());
        return Ok(value);
    }
    // Dividing one factor at a time keeps every partial quotient a
    // q-binomial, so each step is exact.
    let mut value = LaurentQ::one();
    for t in 0..k {
        value = (&value * &qint_unchecked(m - t as i64, 1))
            .div_exact(&qint_unchecked(t as i64 + 1, 1))
            .ok_or_else(|| Error::Internal(format!("inexact q-binomial division for ({m} choose {})", t + 1)))?;
        qbinom_cache().insert((m, t + 1, 1), value.clone());
    }
    qbinom_cache().insert((m, k, 1), value.clone());
    Ok(value)
}

/// Sub-regions of `Q(q)` used by the sufficiency conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// `A`: no pole at `q = 0`.
    InA,
    /// `qA`.
    InQA,
    /// `1 + qA`.
    InOnePlusQA,
    /// `q^N A`.
    InQPowNA(i64),
    /// Integer coefficients (the Laurent-polynomial part of `K_Z`).
    InKZ,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::InA => write!(f, "A"),
            Region::InQA => write!(f, "qA"),
            Region::InOnePlusQA => write!(f, "1 + qA"),
            Region::InQPowNA(n) => write!(f, "q^{n} A"),
            Region::InKZ => write!(f, "K_Z"),
        }
    }
}

pub fn membership(f: &LaurentQ, region: Region) -> bool {
    let at_least = |n: i64| f.valuation().is_none_or(|v| v >= n);
    match region {
        Region::InA => at_least(0),
        Region::InQA => at_least(1),
        Region::InOnePlusQA => (f - &LaurentQ::one()).valuation().is_none_or(|v| v >= 1),
        Region::InQPowNA(n) => at_least(n),
        Region::InKZ => f.has_integer_coefficients(),
    }
}

pub fn is_positive(f: &LaurentQ) -> bool {
    f.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lq(s: &str) -> LaurentQ {
        s.parse().unwrap()
    }

    #[test]
    fn qint_examples() {
        assert_eq!(qint(2, 1).unwrap(), lq("q^-1 + q"));
        assert!(qint(0, 1).unwrap().is_zero());
        assert_eq!(qint(-1, 1).unwrap(), LaurentQ::constant(-1));
        assert_eq!(qint(3, 2).unwrap(), lq("q^-4 + 1 + q^4"));
        assert!(matches!(qint(3, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(2, 1, 1).unwrap(), lq("q^-1 + q"));
        assert!(qbinom(2, 3, 1).unwrap().is_zero());
        assert!(qbinom(0, 2, 1).unwrap().is_zero());
        assert!(qbinom(5, 0, 1).unwrap().is_one());
        // [-1 choose 2] = [-1][-2]/[2]! = [2]/[2] = 1
        assert!(qbinom(-1, 2, 1).unwrap().is_one());
    }

    #[test]
    fn qbinom_four_two_matches_product_and_specializes_to_six() {
        // Brute force: ([4][3]) / ([2][1]) expanded by hand-free multiplication.
        let num = &qint(4, 1).unwrap() * &qint(3, 1).unwrap();
        let den = &qint(2, 1).unwrap() * &qint(1, 1).unwrap();
        let expect = num.div_exact(&den).unwrap();
        let got = qbinom(4, 2, 1).unwrap();
        assert_eq!(got, expect);
        assert_eq!(got, lq("q^-4 + q^-2 + 2 + q^2 + q^4"));
        assert_eq!(got.eval_at_one(), BigRational::from_integer(6.into()));
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(lq("1 + q^2").to_string(), "1 + q^2");
        let f = LaurentQ::from_terms([
            (-3, BigRational::new((-1).into(), 2.into())),
            (1, BigRational::one()),
        ]);
        assert_eq!(f.to_string(), "-1/2*q^-3 + q");
        assert_eq!(lq("-1/2*q^-3 + q"), f);
        assert_eq!(LaurentQ::zero().to_string(), "0");
        assert_eq!(lq("3*q - q^2 - 2").to_string(), "-2 + 3*q - q^2");
    }

    #[test]
    fn membership_examples() {
        assert!(membership(&lq("1 + q^2"), Region::InOnePlusQA));
        assert!(!membership(&lq("q^-1 + 1"), Region::InA));
        assert!(membership(&qint(5, 1).unwrap(), Region::InQPowNA(-4)));
        assert!(!membership(&qint(5, 1).unwrap(), Region::InQPowNA(-3)));
        let zero = LaurentQ::zero();
        assert!(membership(&zero, Region::InA));
        assert!(membership(&zero, Region::InQA));
        assert!(membership(&zero, Region::InQPowNA(40)));
        assert!(!membership(&zero, Region::InOnePlusQA));
        assert!(membership(&lq("2*q^-3 - 5"), Region::InKZ));
        assert!(!membership(&lq("1/2*q"), Region::InKZ));
    }

    #[test]
    fn positivity_examples() {
        assert!(is_positive(&lq("q^-1 + 1")));
        assert!(!is_positive(&lq("-q")));
        assert!(!is_positive(&lq("q - q^-1")));
        assert!(!is_positive(&LaurentQ::zero()));
    }

    #[test]
    fn exact_division_rejects_non_divisors() {
        let f = lq("1 + q");
        let g = lq("1 + q^2");
        assert!(f.div_exact(&g).is_none());
        let prod = &f * &g;
        assert_eq!(prod.div_exact(&g).unwrap(), f);
    }
}
