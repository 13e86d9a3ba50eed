use std::hint::black_box;

use cavity_bell::optimize::FIG2_ETA1;
use cavity_bell::{
    optimize_case, scan_curve_fig2, EtaRange, Execution, InitialCase, OptimizeOptions, RabiSubcase, SchemeKind,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fig2_curve(c: &mut Criterion) {
    let range = EtaRange::new(0.0, 18.8).unwrap();
    let mut group = c.benchmark_group("fig2_curve");
    group.throughput(Throughput::Elements(range.grid(1e-3).unwrap().len() as u64));
    for (name, exec) in MODES {
        group
            .bench_function(name, |b| b.iter(|| scan_curve_fig2(black_box(FIG2_ETA1), 1, &range, 1e-3, exec).unwrap()));
    }
    group.finish();
}

fn optimize(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimize_case");
    group.sample_size(10);
    let cells = [
        ("phase_equal", SchemeKind::Phase, RabiSubcase::Equal, 25.0),
        ("bloch_equal", SchemeKind::Bloch, RabiSubcase::Equal, 25.0),
        ("bloch_unequal", SchemeKind::Bloch, RabiSubcase::Unequal, 10.0),
    ];
    for (cell, scheme, subcase, eta_max) in cells {
        for (name, execution) in MODES {
            let opts = OptimizeOptions { range: EtaRange::new(0.0, eta_max).unwrap(), execution, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(cell, name), &opts, |b, opts| {
                b.iter(|| optimize_case(InitialCase::II, scheme, subcase, black_box(4), opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, fig2_curve, optimize);
criterion_main!(benches);
