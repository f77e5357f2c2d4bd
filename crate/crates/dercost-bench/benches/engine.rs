//! Benchmarks for the hot paths: surface evaluation, grid statistics,
//! exact combinatorics, the payment table, and ranking.

use criterion::{criterion_group, criterion_main, Criterion};

use dercost_bench::{financial, grids, scenario};
use dercost_core::verification::DEFAULT_HORIZONS;
use dercost_core::{distributions, risk, verification, Approach, RiskReport};

fn bench_surface(c: &mut Criterion) {
    let s = scenario();
    let fp = financial();
    let (lifetime, usage) = grids();
    c.bench_function("sensitivity_surface_6x5", |b| {
        b.iter(|| {
            risk::sensitivity_surface(Approach::IIIB, &lifetime, &usage, &s, &fp, 0)
                .expect("surface builds")
        })
    });

    let surface = risk::sensitivity_surface(Approach::IIIB, &lifetime, &usage, &s, &fp, 0)
        .expect("surface builds");
    c.bench_function("surface_statistics_6x5", |b| {
        b.iter(|| {
            let ev = risk::expected_cost(&surface, &lifetime, &usage).expect("expected cost");
            let sd = risk::risk_std(&surface, &lifetime, &usage).expect("risk");
            (ev, sd)
        })
    });
}

fn bench_exact_pmf(c: &mut Criterion) {
    c.bench_function("hypergeometric_pmf_population_1000", |b| {
        b.iter(|| distributions::hypergeometric_pmf(1000, 200, 100, 20).expect("in support"))
    });
}

fn bench_verification(c: &mut Criterion) {
    let s = scenario();
    let fp = financial();
    c.bench_function("verification_table_default_horizons", |b| {
        b.iter(|| {
            verification::verification_table(&s, &fp, &DEFAULT_HORIZONS).expect("table builds")
        })
    });
}

fn bench_ranking(c: &mut Criterion) {
    let s = scenario();
    let fp = financial();
    let (lifetime, usage) = grids();
    let reports: Vec<RiskReport> = [Approach::I, Approach::IIIA, Approach::IIIB]
        .into_iter()
        .map(|approach| {
            let surface = risk::sensitivity_surface(approach, &lifetime, &usage, &s, &fp, 0)
                .expect("surface builds");
            let expected_cost =
                risk::expected_cost(&surface, &lifetime, &usage).expect("expected cost");
            let risk_value = risk::risk_std(&surface, &lifetime, &usage).expect("risk");
            let gate_error = verification::gate_error(
                approach,
                &s,
                &fp,
                verification::AccumulationMode::Nominal,
            )
            .expect("gate error");
            RiskReport {
                approach,
                expected_cost,
                risk: risk_value,
                gate_error,
                gate_passed: gate_error.abs() <= 0.13,
                sensitivity: surface,
            }
        })
        .collect();
    c.bench_function("rank_three_candidates", |b| {
        b.iter(|| risk::rank_approaches(&reports, 0.13).expect("ranking builds"))
    });
}

criterion_group!(
    benches,
    bench_surface,
    bench_exact_pmf,
    bench_verification,
    bench_ranking
);
criterion_main!(benches);
