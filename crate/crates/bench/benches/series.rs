use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ttlab_core::combinatorics::{count_class, ClassId, ClassSpec};
use ttlab_core::painleve::{tau_log_derivative, Target};
use ttlab_core::tau::{group_series, tau, Deformation, Group, GroupLocus, WeightSpec};
use ttlab_core::{VariableTable, WeightedSeries};

fn series(c: &mut Criterion) {
    let tab = VariableTable::two_times(3);
    let d = 8;
    let mut f = WeightedSeries::one(&tab, d);
    for i in 0..tab.len() {
        f = &f + &WeightedSeries::var(&tab, i, d);
    }
    let g = &f * &f;
    c.bench_function("series/mul two-times d8", |b| b.iter(|| black_box(&f * &g)));
    let h = &f - &WeightedSeries::one(&tab, d);
    c.bench_function("series/exp two-times d8", |b| b.iter(|| black_box(h.exp().unwrap())));
}

fn determinants(c: &mut Criterion) {
    let tab = VariableTable::two_times(2);
    let def = Deformation::standard(&tab, 6);
    c.bench_function("tau/circle k1 n4 d6", |b| {
        b.iter(|| black_box(tau(&WeightSpec::Circle { k: 1 }, 4, &def).unwrap()))
    });
    c.bench_function("tau/unitary sqrt-trace ell3 d12", |b| {
        b.iter(|| black_box(group_series(Group::U(3), GroupLocus::SqrtTrace, 12).unwrap()))
    });
    c.bench_function("painleve/orth ell4 d12", |b| {
        b.iter(|| black_box(tau_log_derivative(&Target::FOrth { ell: 4, plus: true }, 12).unwrap()))
    });
}

fn counting(c: &mut Criterion) {
    let spec = ClassSpec { class: ClassId::Perm, n: 8, ell: 3 };
    c.bench_function("count/perm n8 ell3", |b| b.iter(|| black_box(count_class(&spec).unwrap())));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = series, determinants, counting
}
criterion_main!(benches);
