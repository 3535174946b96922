use std::hint::black_box;

use coapprox::cotree::{sample_many, uniform, wlp_chain, wp_chain, BitSource, DistSpec, Event, Expectation, Outcome};
use coapprox::erat::ERat;
use coapprox::lang::{compile_str, equiv_upto, in_lang_str, ka_axiom_suite, Alphabet};
use coapprox::lazy::StepBudget;
use coapprox::sieve::{sieve, verify_sieve};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    for n in [50usize, 100, 200] {
        g.bench_with_input(BenchmarkId::new("first_n", n), &n, |b, &n| {
            b.iter(|| sieve().idl(n, &StepBudget::unlimited()).unwrap())
        });
    }
    g.bench_function("verify_1000", |b| {
        b.iter(|| verify_sieve(black_box(1000), &StepBudget::unlimited()))
    });
    g.finish();
}

fn bench_regex(c: &mut Criterion) {
    let sigma = Alphabet::default();
    let mut g = c.benchmark_group("regex");
    for len in [100usize, 1000, 10_000] {
        let word = "ab".repeat(len / 2);
        g.bench_with_input(BenchmarkId::new("match_(a+b)*b", len), &word, |b, w| {
            b.iter(|| {
                let l = compile_str("(a+b)*b", &sigma).unwrap();
                in_lang_str(&l, &sigma, w, &StepBudget::unlimited()).unwrap()
            })
        });
    }
    for depth in [6usize, 10] {
        g.bench_with_input(BenchmarkId::new("equiv_star_nesting", depth), &depth, |b, &d| {
            b.iter(|| {
                let x = compile_str("(a+b)*", &sigma).unwrap();
                let y = compile_str("(a*b*)*", &sigma).unwrap();
                equiv_upto(&x, &y, d, &StepBudget::unlimited()).unwrap()
            })
        });
    }
    g.sample_size(10);
    g.bench_function("laws_depth4_trials20", |b| {
        b.iter(|| ka_axiom_suite(&sigma, 4, 20, black_box(1), StepBudget::DEFAULT_STEPS).unwrap())
    });
    g.finish();
}

fn bench_wp(c: &mut Criterion) {
    let mut g = c.benchmark_group("wp");
    let coin = "bernoulli:2/3".parse::<DistSpec>().unwrap().build().unwrap();
    let heads = Expectation::indicator(|o: &Outcome| Event::Is(true).matches(o));
    for fuel in [16usize, 64, 256] {
        g.bench_with_input(BenchmarkId::new("bernoulli_2_3", fuel), &fuel, |b, &fuel| {
            b.iter(|| {
                let budget = StepBudget::unlimited();
                let lo = wp_chain(&heads, &coin, fuel, &budget).unwrap();
                let hi = wlp_chain(&heads, &coin, fuel, &budget).unwrap();
                (lo, hi)
            })
        });
    }
    let die = uniform(1000).unwrap();
    let low = Expectation::new(|k: &u64| if *k < 10 { ERat::one() } else { ERat::zero() });
    g.bench_function("uniform_1000_fuel_64", |b| {
        b.iter(|| wp_chain(&low, &die, 64, &StepBudget::unlimited()).unwrap())
    });
    g.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample");
    for (name, spec) in [
        ("bernoulli_2_3", "bernoulli:2/3"),
        ("uniform_3", "uniform:3"),
        ("geometric_1_3", "geometric:1/3"),
    ] {
        let t = spec.parse::<DistSpec>().unwrap().build().unwrap();
        g.bench_with_input(BenchmarkId::new("10k", name), &t, |b, t| {
            b.iter(|| sample_many(t, &mut BitSource::seeded(7), 10_000, StepBudget::DEFAULT_STEPS))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_sieve, bench_regex, bench_wp, bench_sampling);
criterion_main!(benches);
