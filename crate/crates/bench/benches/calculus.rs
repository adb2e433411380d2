use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use prepol_bench::{fresh_engine, templates, CASE_LEVELS};
use prepol_core::verify::run_case;
use prepol_core::{qbinom, CaseId, LaurentQ, Letter, VectorExpr};
use std::hint::black_box;

fn arithmetic(c: &mut Criterion) {
    let mut g = c.benchmark_group("qlaurent");
    for m in [10i64, 20, 30] {
        g.bench_with_input(BenchmarkId::new("qbinom_half_cached", m), &m, |b, &m| {
            b.iter(|| qbinom(black_box(m), (m / 2) as u32, 1).unwrap())
        });
    }
    let x = qbinom(30, 15, 1).unwrap();
    let y = qbinom(24, 7, 2).unwrap();
    g.bench_function("mul_30_24", |b| b.iter(|| black_box(&x) * black_box(&y)));
    let p: LaurentQ = &x * &y;
    g.bench_function("div_exact_30_24", |b| b.iter(|| black_box(&p).div_exact(black_box(&y)).unwrap()));
    g.finish();
}

fn words(c: &mut Criterion) {
    let mut g = c.benchmark_group("words");
    for (id, s) in CASE_LEVELS {
        let ws = templates(id, s);
        g.bench_function(BenchmarkId::new("template_norms", format!("{id} s={s}")), |b| {
            b.iter(|| {
                let e = fresh_engine(id, s);
                ws.iter().map(|w| e.word_norm(w).unwrap()).collect::<Vec<_>>()
            })
        });
        let top = ws.last().unwrap().clone();
        g.bench_function(BenchmarkId::new("f_r_normalize", format!("{id} s={s}")), |b| {
            b.iter(|| {
                let e = fresh_engine(id, s);
                let v = e.apply(Letter::f(id.node(), 1), &VectorExpr::from_word(top.clone())).unwrap();
                e.normalize(&v).unwrap()
            })
        });
    }
    g.finish();
}

fn cases(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_case");
    g.sample_size(10);
    for (id, s) in CASE_LEVELS.into_iter().chain([(CaseId::E8R1, 2)]) {
        g.bench_function(format!("{id} s={s}"), |b| b.iter(|| run_case(id, s).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, arithmetic, words, cases);
criterion_main!(benches);
