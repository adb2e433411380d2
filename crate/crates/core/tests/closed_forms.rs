//! Engine values against the hand computations, including the corrected
//! forms of the three displays that do not hold as printed.

use prepol_core::verify::{run_case, CaseSpec};
use prepol_core::{
    membership, qbinom, qint, CaseId, CertificateKind, Engine, LaurentQ, Letter, Region, VectorExpr, Word,
};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn e0_factor(q0: i64, m: i64, k: i64) -> LaurentQ {
    qbinom(m, k as u32, q0).unwrap().shift(q0 * k * (m - k))
}

fn f_norm(e: &Engine, word: &Word, i: usize) -> LaurentQ {
    let fv = e.apply(Letter::f(i, 1), &VectorExpr::from_word(word.clone())).unwrap();
    e.norm(&fv).unwrap()
}

#[test]
fn norm_of_u_k_in_e6_r3() {
    for s in 1..=3 {
        let e = Engine::for_case(CaseId::E6R3, s).unwrap();
        for k in 0..=s {
            let got = e.word_norm(&CaseId::E6R3.template(k as u32, 0)).unwrap();
            assert_eq!(got, e0_factor(1, 2 * s, k));
            assert!(membership(&got, Region::InOnePlusQA));
            if k > 0 {
                // ||u_k||^2 = ||e_0^{(k)} u||^2
                assert_eq!(got, e.word_norm(&Word(vec![Letter::e(0, k as u32)])).unwrap());
            }
        }
    }
}

#[test]
fn f_r_on_the_extremal_vector() {
    // First principles give q_r^{s-1}[s]_{q_r}; the printed value is q_r^2 times this.
    for id in CaseId::ALL {
        for s in 1..=3 {
            let e = Engine::for_case(id, s).unwrap();
            let r = id.node();
            let sr = e.diagram().symmetrizers[r];
            let got = e.word_norm(&Word(vec![Letter::f(r, 1)])).unwrap();
            assert_eq!(got, qint(s, sr).unwrap().shift(sr * (s - 1)), "{id} s={s}");
            for i in e.diagram().classical_nodes().filter(|&i| i != r) {
                assert!(e.is_zero(&Word(vec![Letter::f(i, 1)])).unwrap().is_some());
            }
        }
    }
}

#[test]
fn one_parameter_lists() {
    for id in [CaseId::E6R3, CaseId::E6R5, CaseId::E7R2] {
        for s in 1..=2 {
            let e = Engine::for_case(id, s).unwrap();
            let r = id.node();
            let x = id.end_node();
            let fru = e.word_norm(&Word(vec![Letter::f(r, 1)])).unwrap();
            for k in 1..=s {
                let word = id.template(k as u32, 0);
                let uk = e.word_norm(&word).unwrap();
                let want_x = &qbinom(k, (k - 1) as u32, 1).unwrap().shift(k - 1) * &uk;
                assert_eq!(f_norm(&e, &word, x), want_x, "{id} s={s} k={k} f{x}");
                for &i in id.vanishing_nodes() {
                    assert!(f_norm(&e, &word, i).is_zero(), "{id} s={s} k={k} f{i}");
                }
                assert_eq!(f_norm(&e, &word, r), &e0_factor(1, 2 * s - 1, k) * &fru);
            }
        }
    }
}

#[test]
fn two_parameter_norms() {
    for id in [CaseId::E6TwistedR4, CaseId::E7R6, CaseId::E8R1] {
        let s = 2;
        let e = Engine::for_case(id, s).unwrap();
        let q0 = e.diagram().symmetrizers[0];
        for k in 0..=s {
            for kp in 0..=k {
                let got = e.word_norm(&id.template(k as u32, kp as u32)).unwrap();
                assert_eq!(got, &e0_factor(q0, 2 * s, kp) * &e0_factor(q0, 2 * s, k), "{id} k={k} kp={kp}");
            }
        }
    }
}

#[test]
fn twisted_f4_uses_two_s_minus_two() {
    let id = CaseId::E6TwistedR4;
    for s in 1..=3 {
        let e = Engine::for_case(id, s).unwrap();
        let f4u = e.word_norm(&Word(vec![Letter::f(4, 1)])).unwrap();
        for k in 1..=s {
            for kp in 0..=k {
                let got = f_norm(&e, &id.template(k as u32, kp as u32), 4);
                let want = &(&e0_factor(1, 2 * s, kp) * &e0_factor(1, 2 * s - 2, k)) * &f4u;
                assert_eq!(got, want, "s={s} k={k} kp={kp}");
            }
        }
    }
    // At s = 1 the vector f_4 u_{0,1} vanishes for weight reasons.
    let e = Engine::for_case(id, 1).unwrap();
    let c = e.is_zero(&w("E1 E2 E3 E2 E1 E0 F4")).unwrap().unwrap();
    assert_eq!(c.kind, CertificateKind::Weight);
}

#[test]
fn f4_norms_use_s_for_the_zero_node() {
    // <h_0, s varpi_4> = s, so the e_0-strings have length s.
    let id = CaseId::F4R4;
    for s in 2..=4 {
        let e = Engine::for_case(id, s).unwrap();
        let q0 = e.diagram().symmetrizers[0];
        let f4u = e.word_norm(&Word(vec![Letter::f(4, 1)])).unwrap();
        for k in 1..=s / 2 {
            for kp in 0..=k {
                let word = id.template(k as u32, kp as u32);
                let u0k = e0_factor(q0, s, k);
                assert_eq!(e.word_norm(&word).unwrap(), &e0_factor(q0, s, kp) * &u0k);
                let f1 = &(&e0_factor(q0, s - 1, kp) * &qbinom(k, (k - 1) as u32, q0).unwrap().shift(q0 * (k - 1))) * &u0k;
                assert_eq!(f_norm(&e, &word, 1), f1, "s={s} k={k} kp={kp}");
                let f4 = &(&e0_factor(q0, s, kp) * &e0_factor(q0, s - 1, k)) * &f4u;
                assert_eq!(f_norm(&e, &word, 4), f4, "s={s} k={k} kp={kp}");
                assert!(f_norm(&e, &word, 2).is_zero() && f_norm(&e, &word, 3).is_zero());
            }
        }
    }
}

#[test]
fn rewriting_examples() {
    let e = Engine::for_case(CaseId::E6R3, 3).unwrap();
    for k in 1..=3u32 {
        let uk = CaseId::E6R3.template(k, 0);
        let tail = Word(uk.letters()[1..].to_vec());
        let (n, _) = e.normalize(&VectorExpr::from_word(uk.prepend(Letter::f(6, k)))).unwrap();
        assert_eq!(n, VectorExpr::from_word(tail.clone()));
        let (n, _) = e.normalize(&VectorExpr::from_word(uk.prepend(Letter::f(6, 1)))).unwrap();
        let mut first = tail.letters().to_vec();
        if k > 1 {
            first.insert(0, Letter::e(6, k - 1));
        }
        assert_eq!(n, VectorExpr::from_word(Word(first)));
        let (n, trace) = e.normalize(&VectorExpr::from_word(uk.prepend(Letter::f(1, 1)))).unwrap();
        assert!(n.is_zero() && !trace.is_empty());
    }
    // The single surviving term of f_0^{(k')} u_{k',k}.
    let t = Engine::for_case(CaseId::E6TwistedR4, 3).unwrap();
    for k in 1..=3u32 {
        for kp in 1..=k {
            let word = CaseId::E6TwistedR4.template(k, kp);
            let (n, _) = t.normalize(&VectorExpr::from_word(word.prepend(Letter::f(0, kp)))).unwrap();
            let inner = CaseId::E6TwistedR4.template(k, 0);
            assert_eq!(n, VectorExpr::monomial(inner, qbinom(6, kp, 1).unwrap()), "k={k} kp={kp}");
        }
    }
}

#[test]
fn vanishing_examples() {
    let t = Engine::for_case(CaseId::E6TwistedR4, 3).unwrap();
    for k in 1..=3u32 {
        for m in 0..k {
            let word = Word::from_letters([Letter::e(2, k), Letter::e(1, m), Letter::e(0, k)]);
            assert!(t.is_zero(&word).unwrap().is_some(), "{word}");
        }
    }
    let e = Engine::for_case(CaseId::E6R3, 1).unwrap();
    assert_eq!(e.is_zero(&w("F0 F2 F4 F3")).unwrap().unwrap().kind, CertificateKind::Weight);
    for k in 1..=3u32 {
        let e = Engine::for_case(CaseId::E6R3, k as i64).unwrap();
        let word = Word::from_letters([Letter::e(4, k), Letter::e(2, k - 1), Letter::e(0, k)]);
        assert!(e.is_zero(&word).unwrap().is_some(), "{word}");
    }
    assert!(e.is_zero(&Word::empty()).unwrap().is_none());
}

#[test]
fn e_norm_examples() {
    let e = Engine::for_case(CaseId::E6R3, 1).unwrap();
    let u = VectorExpr::from_word(Word::empty());
    for i in 1..=6 {
        assert!(e.e_norm_via_f(&u, i).unwrap().is_zero(), "i={i}");
    }
    let u1 = VectorExpr::from_word(CaseId::E6R3.template(1, 0));
    let x = e.e_norm_via_f(&u1, 6).unwrap();
    assert!(x.valuation().is_none_or(|v| v >= -3));
    assert_eq!(x, e.e_norm_direct(&u1, 6).unwrap());
    // The printed identity has q_i^{1-n} in its second term. With it, e_1 f_3 u
    // (which is zero) would get a non-zero norm at s = 2.
    let e = Engine::for_case(CaseId::E6R3, 2).unwrap();
    let v = VectorExpr::from_word(w("F3"));
    assert!(e.e_norm_direct(&v, 1).unwrap().is_zero());
    assert!(e.e_norm_via_f(&v, 1).unwrap().is_zero());
    assert_eq!(e.e_norm_via_f_literal(&v, 1).unwrap(), "q^-2 - q^2".parse().unwrap());
}

#[test]
fn report_ordering_and_records() {
    let r = run_case(CaseId::E6R3, 2).unwrap();
    let spec = CaseSpec::new(CaseId::E6R3, 2).unwrap();
    assert_eq!(r.conditions.len(), spec.vectors.len() * 7);
    let keys: Vec<_> = r.conditions.iter().map(|c| (c.kind, c.k, c.kp, c.i)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let one = r.conditions.iter().find(|c| c.kind == "i" && c.k == 1).unwrap();
    assert_eq!(one.value, "1 + q^2 + q^4 + q^6");
}
