use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dlk_core::builder::{build, BuildParams, Fragment, Functional};
use dlk_core::logics::LogicProfile;
use dlk_core::proofs::{derive_forward_with, ForwardParams};
use dlk_core::semantics::audit_with;
use dlk_core::specifications::{search_jl_model, ConstantSpec};
use dlk_core::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn forward(c: &mut Criterion) {
    let raw = [LogicProfile::Dl.parse_formula("e1:R").unwrap()];
    let spec = ConstantSpec::close(&raw, LogicProfile::Dl).unwrap();
    let mut group = c.benchmark_group("derive_forward");
    group.sample_size(10);
    for (name, exec) in MODES {
        let params = ForwardParams { exec, ..ForwardParams::new(3, 4) };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| derive_forward_with(black_box(&spec), LogicProfile::Dl, None, &params).len())
        });
    }
    group.finish();
}

fn maximal_audit(c: &mut Criterion) {
    let params =
        BuildParams::new(LogicProfile::Dl, &["P", "Q"], 5, 3).with_functional(Functional::ConstOne);
    let (model, _) = build(&params).unwrap();
    let universe = Fragment::new(&params).terms.items().to_vec();
    let mut group = c.benchmark_group("audit_maximal_model");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| audit_with(black_box(&model), &universe, exec).is_clean())
        });
    }
    group.finish();
}

fn valuation_search(c: &mut Criterion) {
    // the conjunction is unsatisfiable, so every valuation is visited
    let mut targets: Vec<_> = ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J"]
        .iter()
        .map(|v| LogicProfile::Jl.parse_formula(v).unwrap())
        .collect();
    targets.push(LogicProfile::Jl.parse_formula("~(A /\\ J)").unwrap());
    targets.push(LogicProfile::Jl.parse_formula("a:B /\\ b:C").unwrap());
    let mut group = c.benchmark_group("valuation_search");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| search_jl_model(black_box(&targets), 2, exec).is_ok())
        });
    }
    group.finish();
}

criterion_group!(benches, forward, maximal_audit, valuation_search);
criterion_main!(benches);
