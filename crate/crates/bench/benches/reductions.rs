use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hcolor::{
    build_target, exists_homomorphism_with, extend_assignment, extract_assignment, reduce,
    Assignment, BuiltinTarget, Clause, ColorLists, Formula, Literal, OracleConfig,
};
use hcolor_bench::formula_workload;

/// m disjoint all-positive clauses; true-false-false per triple satisfies
/// both clause semantics, so every target's instance is colorable.
fn disjoint_positive(m: usize) -> (Formula, Assignment) {
    let clauses = (0..m)
        .map(|i| {
            Clause([
                Literal::pos(3 * i + 1),
                Literal::pos(3 * i + 2),
                Literal::pos(3 * i + 3),
            ])
        })
        .collect();
    let assignment = Assignment((0..3 * m).map(|i| i % 3 == 0).collect());
    (Formula::new(3 * m, clauses), assignment)
}

fn bench_reduce(c: &mut Criterion) {
    let formula = formula_workload(20, 40, 17);
    let mut group = c.benchmark_group("reduce_20v_40c");
    for target in BuiltinTarget::ALL {
        for (variant, bounded) in [("unbounded", false), ("bounded", true)] {
            group.bench_function(format!("{}_{variant}", target.name()), |b| {
                b.iter(|| reduce(&formula, target, bounded))
            });
        }
    }
    group.finish();
}

fn bench_decide_instance(c: &mut Criterion) {
    let (formula, _) = disjoint_positive(25);
    let mut group = c.benchmark_group("decide_reduced_instance");
    for target in BuiltinTarget::ALL {
        let inst = reduce(&formula, target, true);
        let h = build_target(target);
        let lists = ColorLists::full(inst.graph.n(), h.n());
        let cfg = OracleConfig { vertex_cap: inst.graph.n(), ..OracleConfig::default() };
        let id = format!("{}_bounded_{}v", target.name(), inst.graph.n());
        group.bench_with_input(BenchmarkId::from_parameter(id), &inst, |b, inst| {
            b.iter(|| exists_homomorphism_with(&inst.graph, &h, &lists, &cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_lift_and_extract(c: &mut Criterion) {
    let (formula, assignment) = disjoint_positive(25);
    let mut group = c.benchmark_group("assignment_coloring");
    for target in BuiltinTarget::ALL {
        let inst = reduce(&formula, target, false);
        let coloring = extend_assignment(&inst, &assignment).unwrap();
        group.bench_function(format!("extend_{}", target.name()), |b| {
            b.iter(|| extend_assignment(&inst, &assignment).unwrap())
        });
        group.bench_function(format!("extract_{}", target.name()), |b| {
            b.iter(|| extract_assignment(&inst, &coloring).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_reduce, bench_decide_instance, bench_lift_and_extract);
criterion_main!(benches);
