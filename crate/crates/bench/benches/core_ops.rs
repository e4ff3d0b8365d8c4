use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use fdq_core::dq::partial_dq;
use fdq_core::duality::{pairing_check, Functional};
use fdq_core::fm::FMFunc;
use fdq_core::fmdq::dq_block;
use fdq_core::linalg::{cr, CMat, ZERO};
use fdq_core::ncalg::Context;
use fdq_core::positivity::{cp_check, transpose_map};
use fdq_core::series::{corep_defect, corep_resolvent};
use fdq_core::{Sampler, Site};

fn bench_poly(c: &mut Criterion) {
    let ctx = Context::new(2, 3);
    let mut s = Sampler::new(1);
    let p = s.poly(ctx, 5, 6, true);
    let r = s.poly(ctx, 5, 6, true);
    c.bench_function("ncalg::mul degree-5", |b| {
        b.iter(|| p.mul(&r).unwrap());
    });
    let pr = p.mul(&r).unwrap();
    c.bench_function("dq::partial_dq degree-10", |b| {
        b.iter(|| partial_dq(0, &pr).unwrap());
    });
}

fn bench_series(c: &mut Criterion) {
    let ctx = Context::new(2, 1);
    let mut s = Sampler::new(2);
    let n_big = s.cmat(6, 6, 0.4)
        + fdq_core::linalg::identity(6).map(|v| v * fdq_core::linalg::c(0.0, 3.0));
    c.bench_function("series::resolvent p=3 q=2 D=6", |b| {
        b.iter_batched(
            || n_big.clone(),
            |n| corep_resolvent(ctx, 3, 6, &n, 0).unwrap(),
            BatchSize::SmallInput,
        );
    });
    let alpha = corep_resolvent(ctx, 3, 6, &n_big, 0).unwrap();
    c.bench_function("series::corep_defect p=3 q=2 D=6", |b| {
        b.iter(|| corep_defect(&alpha, 0).unwrap());
    });
}

fn bench_fmdq(c: &mut Criterion) {
    let y = CMat::from_row_slice(2, 2, &[ZERO, cr(1.0), cr(1.0), ZERO]);
    let site = Site::diagonal_site(y).unwrap();
    let phi = Functional::normalized_trace(2);
    let f = fdq_core::duality::u_transform(&site, &phi).unwrap();
    let mut s = Sampler::new(3);
    let b1 = site.random_member(&mut s, 2);
    let b2 = site.random_member(&mut s, 2);
    c.bench_function("fmdq::dq_block u-transform m=n=2", |b| {
        b.iter(|| dq_block(&f, &b1, &b2).unwrap());
    });
    c.bench_function("duality::pairing_check m=n=2", |b| {
        b.iter(|| pairing_check(&site, &phi, &b1, &b2).unwrap());
    });
    let sq = FMFunc::func_poly(
        vec![ZERO, ZERO, cr(1.0)],
        fdq_core::fm::ScalarRegion::Disk {
            center: ZERO,
            radius: 10.0,
        },
    );
    let g1 = sq.sample_domain_point(3, &mut s).unwrap();
    let g2 = sq.sample_domain_point(3, &mut s).unwrap();
    c.bench_function("fmdq::dq_block square m=n=3", |b| {
        b.iter(|| dq_block(&sq, &g1, &g2).unwrap());
    });
}

fn bench_positivity(c: &mut Criterion) {
    let t = transpose_map(4);
    c.bench_function("positivity::cp_check transpose n=4", |b| {
        b.iter(|| cp_check(&t).unwrap());
    });
}

criterion_group!(
    benches,
    bench_poly,
    bench_series,
    bench_fmdq,
    bench_positivity
);
criterion_main!(benches);
