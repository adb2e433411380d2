use std::collections::HashSet;

use dashmap::DashMap;

use super::certificate::{Certificate, CertificateKind};
use super::word::{Kind, Letter, VectorExpr, Word};
use crate::classrep::weight_occurs;
use crate::error::{Error, Result};
use crate::kleber::{closed_form_decompose, Decomposition};
use crate::qlaurent::{qbinom, qint, LaurentQ};
use crate::rootdata::{AffineDiagram, Family, WeightVec};
use crate::verify::CaseId;

/// The module `W^{r,s}` seen through its extremal vector `u` of weight `s varpi_r`.
#[derive(Clone, Debug)]
pub struct CaseContext {
    pub family: Family,
    pub r: usize,
    pub s: i64,
    /// Classical decomposition used by the weight certificate.
    pub decomposition: Decomposition,
}

impl CaseContext {
    pub fn new(family: Family, r: usize, s: i64, decomposition: Decomposition) -> Result<Self> {
        let d = AffineDiagram::get(family);
        if r == 0 || r >= d.len() {
            return Err(Error::InvalidArgument(format!("node {r} is not classical in {family}")));
        }
        if s <= 0 {
            return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
        }
        Ok(Self {
            family,
            r,
            s,
            decomposition,
        })
    }

    pub fn for_case(case: CaseId, s: i64) -> Result<Self> {
        Self::new(case.family(), case.node(), s, closed_form_decompose(case, s)?)
    }
}

/// Which argument of the pairing is peeled first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Peel {
    Left,
    Right,
    /// The argument of larger total degree (left on ties).
    Longer,
}

/// Per-call bookkeeping: in-progress sets for cycle cuts and the probe depth.
struct State {
    cert_stack: HashSet<Word>,
    pair_stack: HashSet<(Word, Word)>,
    probe_depth: usize,
    depth_limit: usize,
    /// Number of times a cycle or the probe bound cut a search short.
    cuts: u64,
    trace: Option<Vec<Certificate>>,
    strategy: Peel,
}

impl State {
    fn new(depth_limit: usize, strategy: Peel) -> Self {
        Self {
            cert_stack: HashSet::new(),
            pair_stack: HashSet::new(),
            probe_depth: 0,
            depth_limit,
            cuts: 0,
            trace: None,
            strategy,
        }
    }
}

pub struct Engine {
    ctx: CaseContext,
    d: &'static AffineDiagram,
    base: Vec<i64>,
    serre_bound: Option<usize>,
    certs: DashMap<Word, Option<Certificate>>,
    pushes: DashMap<(Letter, Word), VectorExpr>,
    pairs: DashMap<(Word, Word), LaurentQ>,
}

impl Engine {
    pub fn new(ctx: CaseContext) -> Self {
        let d = AffineDiagram::get(ctx.family);
        let base = d
            .varpi(ctx.r)
            .expect("context node is classical")
            .scale(ctx.s)
            .lambda;
        Self {
            ctx,
            d,
            base,
            serre_bound: None,
            certs: DashMap::new(),
            pushes: DashMap::new(),
            pairs: DashMap::new(),
        }
    }

    pub fn for_case(case: CaseId, s: i64) -> Result<Self> {
        Ok(Self::new(CaseContext::for_case(case, s)?))
    }

    /// Overrides the probe nesting bound (default: input degree + 4).
    pub fn with_serre_bound(mut self, bound: usize) -> Self {
        self.serre_bound = Some(bound);
        self
    }

    pub fn ctx(&self) -> &CaseContext {
        &self.ctx
    }

    pub fn diagram(&self) -> &'static AffineDiagram {
        self.d
    }

    fn sym(&self, i: usize) -> i64 {
        self.d.symmetrizers[i]
    }

    fn limit_for(&self, degree: u64) -> usize {
        self.serre_bound.unwrap_or(degree as usize + 4)
    }

    /// `Lambda`-coefficients of `wt(word . u)`.
    pub fn lambda_of(&self, word: &Word) -> Vec<i64> {
        self.lambda_of_letters(word.letters())
    }

    fn lambda_of_letters(&self, letters: &[Letter]) -> Vec<i64> {
        let mut w = self.base.clone();
        for l in letters {
            let sign = match l.kind {
                Kind::E => 1,
                Kind::F => -1,
            };
            let p = sign * l.power as i64;
            for (i, x) in w.iter_mut().enumerate() {
                *x += p * self.d.a(i, l.idx());
            }
        }
        w
    }

    /// `<h_i, wt(letters . u)>`.
    fn h(&self, i: usize, letters: &[Letter]) -> i64 {
        let mut n = self.base[i];
        for l in letters {
            let sign = match l.kind {
                Kind::E => 1,
                Kind::F => -1,
            };
            n += sign * l.power as i64 * self.d.a(i, l.idx());
        }
        n
    }

    /// Full affine weight, tracking the `delta` coefficient of `alpha_0`.
    pub fn weight_of(&self, word: &Word) -> WeightVec {
        let mut w = self.d.varpi(self.ctx.r).expect("classical node").scale(self.ctx.s);
        for l in word.letters() {
            let sign = match l.kind {
                Kind::E => 1,
                Kind::F => -1,
            };
            let root = self.d.simple_root(l.idx()).expect("letter index in diagram");
            w = &w + &root.scale(sign * l.power as i64);
        }
        w
    }

    fn annihilates_u(&self, z: Letter) -> bool {
        match z.kind {
            Kind::E => z.idx() != 0,
            Kind::F => z.idx() != self.ctx.r,
        }
    }

    fn check_letter(&self, l: Letter) -> Result<()> {
        if l.idx() >= self.d.len() || l.power == 0 {
            return Err(Error::InvalidArgument(format!("letter {l} not valid for {}", self.ctx.family)));
        }
        Ok(())
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        w.letters().iter().try_for_each(|l| self.check_letter(*l))
    }

    // ---------- certificates ----------

    /// Sound zero test for `word . u`; `None` means undecided.
    pub fn is_zero(&self, word: &Word) -> Result<Option<Certificate>> {
        self.check_word(word)?;
        let mut st = State::new(self.limit_for(word.degree()), Peel::Longer);
        self.certify(word, &mut st)
    }

    fn certify(&self, word: &Word, st: &mut State) -> Result<Option<Certificate>> {
        if word.is_empty() {
            return Ok(None);
        }
        if let Some(c) = self.certs.get(word) {
            return Ok(c.clone());
        }
        if st.cert_stack.contains(word) {
            st.cuts += 1;
            return Ok(None);
        }
        st.cert_stack.insert(word.clone());
        let cuts0 = st.cuts;
        let res = self.certify_inner(word, st);
        st.cert_stack.remove(word);
        if let Ok(c) = &res {
            if st.cuts == cuts0 {
                self.certs.insert(word.clone(), c.clone());
            }
        }
        res
    }

    fn certify_inner(&self, word: &Word, st: &mut State) -> Result<Option<Certificate>> {
        let tail = word.tail();
        if let Some(c) = self.certify(&tail, st)? {
            return Ok(Some(c));
        }
        let z = word.head().expect("non-empty word");
        let cert = |kind| Ok(Some(Certificate { kind, word: word.clone() }));
        if tail.is_empty() && self.annihilates_u(z) {
            return cert(CertificateKind::Annihilation);
        }
        let lam = self.lambda_of(word);
        if !weight_occurs(self.ctx.family, &self.ctx.decomposition, &lam[1..])? {
            return cert(CertificateKind::Weight);
        }
        let i = z.idx();
        let n = self.h(i, tail.letters());
        let a = z.power as i64;
        let overshoots = match z.kind {
            Kind::E => a > -n,
            Kind::F => a > n,
        };
        if overshoots {
            let probe = Letter {
                kind: z.kind.dual(),
                index: z.index,
                power: 1,
            };
            if self.probe_zero(probe, &tail, st)? {
                return cert(CertificateKind::String);
            }
        }
        if let Some(y) = tail.head() {
            if y.kind == z.kind && y.index != z.index {
                let aij = self.d.a(i, y.idx());
                if a > -aij * y.power as i64 && self.probe_zero(z.with_power(1), &tail.tail(), st)? {
                    return cert(CertificateKind::Serre);
                }
            }
        }
        Ok(None)
    }

    fn probe_zero(&self, x: Letter, v: &Word, st: &mut State) -> Result<bool> {
        if st.probe_depth >= st.depth_limit {
            st.cuts += 1;
            return Ok(false);
        }
        st.probe_depth += 1;
        let saved = st.trace.take();
        let res = self.push(x, v.letters(), st);
        st.trace = saved;
        st.probe_depth -= 1;
        Ok(res?.is_zero())
    }

    // ---------- rewriting ----------

    /// `coeff * word` unless the word is certified zero.
    fn single(&self, word: Word, coeff: LaurentQ, st: &mut State) -> Result<VectorExpr> {
        if coeff.is_zero() {
            return Ok(VectorExpr::zero());
        }
        if let Some(c) = self.certify(&word, st)? {
            if let Some(t) = st.trace.as_mut() {
                t.push(c);
            }
            return Ok(VectorExpr::zero());
        }
        Ok(VectorExpr::monomial(word, coeff))
    }

    /// `y . expr`, merging `y` into an equal leading generator.
    fn prepend(&self, y: Letter, expr: &VectorExpr, st: &mut State) -> Result<VectorExpr> {
        let mut out = VectorExpr::zero();
        for (w, c) in expr.terms() {
            let term = match w.head() {
                Some(h) if h.same_generator(y) => {
                    let total = h.power + y.power;
                    let coeff = qbinom(total as i64, y.power, self.sym(y.idx()))?;
                    self.single(w.tail().prepend(y.with_power(total)), c * &coeff, st)?
                }
                _ => self.single(w.prepend(y), c.clone(), st)?,
            };
            out.add_scaled(&term, &LaurentQ::one());
        }
        Ok(out)
    }

    /// `z . (y . u)` with `z` moved as far right as the relations allow.
    fn push(&self, z: Letter, y: &[Letter], st: &mut State) -> Result<VectorExpr> {
        let use_cache = st.trace.is_none();
        if use_cache {
            if let Some(r) = self.pushes.get(&(z, Word(y.to_vec()))) {
                return Ok(r.clone());
            }
        }
        let cuts0 = st.cuts;
        let res = self.push_inner(z, y, st)?;
        if use_cache && st.cuts == cuts0 {
            self.pushes.insert((z, Word(y.to_vec())), res.clone());
        }
        Ok(res)
    }

    fn push_inner(&self, z: Letter, y: &[Letter], st: &mut State) -> Result<VectorExpr> {
        let Some((&y1, rest)) = y.split_first() else {
            return self.single(Word(vec![z]), LaurentQ::one(), st);
        };
        let i = z.idx();
        if z.kind == y1.kind {
            if z.index == y1.index {
                let total = z.power + y1.power;
                let coeff = qbinom(total as i64, z.power, self.sym(i))?;
                let mut w = Vec::with_capacity(y.len());
                w.push(y1.with_power(total));
                w.extend_from_slice(rest);
                return self.single(Word(w), coeff, st);
            }
            if self.d.a(i, y1.idx()) == 0 {
                let inner = self.push(z, rest, st)?;
                return self.prepend(y1, &inner, st);
            }
            let mut w = Vec::with_capacity(y.len() + 1);
            w.push(z);
            w.extend_from_slice(y);
            return self.single(Word(w), LaurentQ::one(), st);
        }
        if z.index != y1.index {
            let inner = self.push(z, rest, st)?;
            return self.prepend(y1, &inner, st);
        }
        // x^{(a)} y^{(b)} v = sum_t [a - b -+ n choose t] y^{(b-t)} x^{(a-t)} v
        let (a, b) = (z.power, y1.power);
        let n = self.h(i, rest);
        let top = match z.kind {
            Kind::F => a as i64 - b as i64 - n,
            Kind::E => a as i64 - b as i64 + n,
        };
        let mut out = VectorExpr::zero();
        for t in 0..=a.min(b) {
            let c = qbinom(top, t, self.sym(i))?;
            if c.is_zero() {
                continue;
            }
            let inner = if a > t {
                self.push(z.with_power(a - t), rest, st)?
            } else {
                self.single(Word(rest.to_vec()), LaurentQ::one(), st)?
            };
            let term = if b > t {
                self.prepend(y1.with_power(b - t), &inner, st)?
            } else {
                inner
            };
            out.add_scaled(&term, &c);
        }
        Ok(out)
    }

    /// `x . v` with `x` pushed through every word of `v`.
    pub fn apply(&self, x: Letter, v: &VectorExpr) -> Result<VectorExpr> {
        self.check_letter(x)?;
        let deg = v.terms().map(|(w, _)| w.degree()).max().unwrap_or(0) + x.power as u64;
        let mut st = State::new(self.limit_for(deg), Peel::Longer);
        self.apply_in(x, v, &mut st)
    }

    fn apply_in(&self, x: Letter, v: &VectorExpr, st: &mut State) -> Result<VectorExpr> {
        let mut out = VectorExpr::zero();
        for (w, c) in v.terms() {
            let r = self.push(x, w.letters(), st)?;
            out.add_scaled(&r, c);
        }
        Ok(out)
    }

    /// Rebuilds every word from `u` outward: `f`-letters are pushed right,
    /// `e`-letters are prepended (merging equal neighbours). Returns the
    /// result with the certificates of every dropped word.
    pub fn normalize(&self, v: &VectorExpr) -> Result<(VectorExpr, Vec<Certificate>)> {
        let deg = v.terms().map(|(w, _)| w.degree()).max().unwrap_or(0);
        let mut st = State::new(self.limit_for(deg), Peel::Longer);
        st.trace = Some(Vec::new());
        let mut out = VectorExpr::zero();
        for (w, c) in v.terms() {
            self.check_word(w)?;
            let mut cur = VectorExpr::from_word(Word::empty());
            for &l in w.letters().iter().rev() {
                cur = match l.kind {
                    Kind::F => self.apply_in(l, &cur, &mut st)?,
                    Kind::E => self.prepend(l, &cur, &mut st)?,
                };
            }
            out.add_scaled(&cur, c);
        }
        let mut trace = st.trace.take().unwrap_or_default();
        trace.sort();
        trace.dedup();
        Ok((out, trace))
    }

    // ---------- pairing ----------

    /// `(x . u, y . u)`.
    pub fn pair(&self, x: &Word, y: &Word) -> Result<LaurentQ> {
        self.pair_with(x, y, Peel::Longer)
    }

    pub fn pair_with(&self, x: &Word, y: &Word, strategy: Peel) -> Result<LaurentQ> {
        self.check_word(x)?;
        self.check_word(y)?;
        let mut st = State::new(self.limit_for(x.degree().max(y.degree())), strategy);
        self.pair_words(x, y, &mut st)?
            .ok_or_else(|| Error::UndecidedVanishing {
                word: format!("({x}, {y})"),
            })
    }

    /// Bilinear extension of [`Engine::pair`].
    pub fn prepolar(&self, v: &VectorExpr, w: &VectorExpr) -> Result<LaurentQ> {
        self.prepolar_with(v, w, Peel::Longer)
    }

    pub fn prepolar_with(&self, v: &VectorExpr, w: &VectorExpr, strategy: Peel) -> Result<LaurentQ> {
        let mut acc = LaurentQ::zero();
        for (a, ca) in v.terms() {
            for (b, cb) in w.terms() {
                let p = self.pair_with(a, b, strategy)?;
                if !p.is_zero() {
                    acc += &(&(ca * cb) * &p);
                }
            }
        }
        Ok(acc)
    }

    pub fn norm(&self, v: &VectorExpr) -> Result<LaurentQ> {
        self.prepolar(v, v)
    }

    pub fn word_norm(&self, w: &Word) -> Result<LaurentQ> {
        self.pair(w, w)
    }

    fn pair_words(&self, x: &Word, y: &Word, st: &mut State) -> Result<Option<LaurentQ>> {
        if self.lambda_of(x) != self.lambda_of(y) {
            return Ok(Some(LaurentQ::zero()));
        }
        if x.is_empty() && y.is_empty() {
            return Ok(Some(LaurentQ::one()));
        }
        if self.certify(x, st)?.is_some() || self.certify(y, st)?.is_some() {
            return Ok(Some(LaurentQ::zero()));
        }
        let key = if x <= y {
            (x.clone(), y.clone())
        } else {
            (y.clone(), x.clone())
        };
        if let Some(v) = self.pairs.get(&key) {
            return Ok(Some(v.clone()));
        }
        if st.pair_stack.contains(&key) {
            return Ok(None);
        }
        st.pair_stack.insert(key.clone());
        let order: [(&Word, &Word); 2] = match st.strategy {
            Peel::Left => [(x, y), (y, x)],
            Peel::Right => [(y, x), (x, y)],
            Peel::Longer if y.degree() > x.degree() => [(y, x), (x, y)],
            Peel::Longer => [(x, y), (y, x)],
        };
        let mut result = None;
        for (p, o) in order {
            if p.is_empty() {
                continue;
            }
            match self.peel(p, o, st) {
                Ok(Some(v)) => {
                    result = Some(v);
                    break;
                }
                Ok(None) => continue,
                Err(e) => {
                    st.pair_stack.remove(&key);
                    return Err(e);
                }
            }
        }
        st.pair_stack.remove(&key);
        if let Some(v) = &result {
            self.pairs.insert(key, v.clone());
        }
        Ok(result)
    }

    /// `(l . p', o) = q_i^{k(k -+ n)} (p', l^* . o)` with `n = <h_i, wt o>`.
    fn peel(&self, p: &Word, o: &Word, st: &mut State) -> Result<Option<LaurentQ>> {
        let l = p.head().expect("non-empty word");
        let rest = p.tail();
        let i = l.idx();
        let k = l.power as i64;
        let n = self.h(i, o.letters());
        let exp = match l.kind {
            Kind::E => k * (k - n),
            Kind::F => k * (k + n),
        };
        let dual = Letter {
            kind: l.kind.dual(),
            ..l
        };
        let pushed = self.push(dual, o.letters(), st)?;
        let mut acc = LaurentQ::zero();
        for (w, c) in pushed.terms() {
            match self.pair_words(&rest, w, st)? {
                Some(v) => {
                    if !v.is_zero() {
                        acc += &(c * &v);
                    }
                }
                None => return Ok(None),
            }
        }
        Ok(Some(acc.shift(self.sym(i) * exp)))
    }

    // ---------- norms of e_i v ----------

    fn homogeneous_h(&self, v: &VectorExpr, i: usize) -> Result<Option<i64>> {
        let mut n = None;
        for (w, _) in v.terms() {
            let lam = self.lambda_of(w);
            match n {
                None => n = Some(lam),
                Some(ref m) if *m != lam => {
                    return Err(Error::InvalidArgument("vector is not homogeneous".into()));
                }
                _ => {}
            }
        }
        Ok(n.map(|lam| lam[i]))
    }

    /// `||e_i v||^2 = q_i^{-2n} ||f_i v||^2 + q_i^{-1-n} [-n]_{q_i} ||v||^2`,
    /// `n = <h_i, wt v>`, as forced by the adjunction relations.
    pub fn e_norm_via_f(&self, v: &VectorExpr, i: usize) -> Result<LaurentQ> {
        self.e_norm_combination(v, i, -1)
    }

    /// The same combination with `q_i^{1-n}` in the second term.
    pub fn e_norm_via_f_literal(&self, v: &VectorExpr, i: usize) -> Result<LaurentQ> {
        self.e_norm_combination(v, i, 1)
    }

    fn e_norm_combination(&self, v: &VectorExpr, i: usize, offset: i64) -> Result<LaurentQ> {
        if i >= self.d.len() {
            return Err(Error::InvalidArgument(format!("node {i} not in {}", self.ctx.family)));
        }
        let Some(n) = self.homogeneous_h(v, i)? else {
            return Ok(LaurentQ::zero());
        };
        let si = self.sym(i);
        let fv = self.apply(Letter::f(i, 1), v)?;
        let first = self.norm(&fv)?.shift(-2 * n * si);
        let second = &qint(-n, si)?.shift((offset - n) * si) * &self.norm(v)?;
        Ok(&first + &second)
    }

    /// `||e_i v||^2` by pushing `e_i` into `v` and pairing directly.
    pub fn e_norm_direct(&self, v: &VectorExpr, i: usize) -> Result<LaurentQ> {
        let ev = self.apply(Letter::e(i, 1), v)?;
        self.norm(&ev)
    }
}
