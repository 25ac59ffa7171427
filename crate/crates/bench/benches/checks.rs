use criterion::{criterion_group, criterion_main, Criterion};
use gerbe_core::caloron::{ms_identity_check, ConnectionPreset, Grid};
use gerbe_core::detline::{delta_triviality, CechTriple};
use gerbe_core::fock::{car_check, commutator_check, FockWindow};
use gerbe_core::spectral::{dirac_spectrum, reference_holonomies, spectral_flow, winding_path, SpectralCut};
use gerbe_core::Rational64;

fn spectral(c: &mut Criterion) {
    let suite = reference_holonomies(7).unwrap();
    c.bench_function("dirac_spectrum/suite N=4", |b| {
        b.iter(|| suite.iter().map(|(_, h)| dirac_spectrum(h, 4).unwrap().modes().len()).sum::<usize>())
    });
    let path = winding_path(&[1, -1, 2], 64).unwrap();
    c.bench_function("spectral_flow/u3 64 steps", |b| {
        b.iter(|| spectral_flow(&path, &SpectralCut::new(1, 3), 4).unwrap())
    });
    let s = dirac_spectrum(&suite.last().unwrap().1, 4).unwrap();
    let cuts = [SpectralCut::new(-7, 3), SpectralCut::new(1, 3), SpectralCut::new(8, 3)];
    c.bench_function("delta_triviality/one triple", |b| {
        b.iter(|| delta_triviality(&CechTriple::new(&s, cuts).unwrap()).unwrap())
    });
}

fn fock(c: &mut Criterion) {
    let w = FockWindow::new(2, 6, Rational64::new(1, 2)).unwrap();
    c.bench_function("car_check/2 colors N=6", |b| b.iter(|| car_check(&w, 1).unwrap()));
    c.bench_function("commutator_check/m=1 n=-1", |b| {
        b.iter(|| commutator_check(1, 2, 2, 1, 1, -1, &w).unwrap())
    });
}

fn caloron(c: &mut Criterion) {
    let conn = ConnectionPreset::su2_family().sample(Grid::new(8, 8, 3).unwrap()).unwrap();
    let mut g = c.benchmark_group("caloron");
    g.sample_size(10);
    g.bench_function("ms_identity/P=8 M=8", |b| b.iter(|| ms_identity_check(&conn).unwrap()));
    g.finish();
}

criterion_group!(benches, spectral, fock, caloron);
criterion_main!(benches);
