use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dgrp::diagram::Diagram;
use dgrp::folding;
use dgrp::group_algorithms as ga;
use dgrp::sampling::{random_cells, random_spherical};
use dgrp::squier;
use dgrp::{parse_presentation, Budget, Presentation, Word, WordOracle};

fn thompson() -> (Arc<Presentation>, Word) {
    let p = Arc::new(parse_presentation("letters x\nrule x = x x\n").unwrap().presentation);
    let x = p.parse_word("x").unwrap();
    (p, x)
}

fn samples(o: &WordOracle, top: &Word, len: usize, n: usize) -> Vec<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..n).filter_map(|_| random_spherical(o, top, len, top.len() + 4, &mut rng)).collect()
}

fn reduction(c: &mut Criterion) {
    let (p, x) = thompson();
    let mut group = c.benchmark_group("reduce");
    for len in [8, 32, 128] {
        let mut rng = ChaCha8Rng::seed_from_u64(len as u64);
        let cells = random_cells(&p, &x, len, 10, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(len), &cells, |b, cells| {
            b.iter(|| Diagram::from_cells(p.clone(), x.clone(), black_box(cells)).unwrap())
        });
    }
    group.finish();
}

fn conjugacy(c: &mut Criterion) {
    let (p, x) = thompson();
    let o = WordOracle::new(p, &Budget::default());
    let gs = samples(&o, &x, 8, 16);
    let pairs: Vec<(Diagram, Diagram)> =
        gs.windows(2).map(|w| (ga::conjugate_by(&w[1], &w[0]).unwrap(), w[0].clone())).collect();
    c.bench_function("conjugate", |b| {
        b.iter(|| {
            for (a, g) in &pairs {
                black_box(ga::conjugate(a, g, &o).unwrap());
            }
        })
    });
}

fn folding_closure(c: &mut Criterion) {
    let (p, x) = thompson();
    let o = WordOracle::new(p.clone(), &Budget::default());
    let gens = samples(&o, &x, 10, 4);
    c.bench_function("closure_complex", |b| b.iter(|| folding::closure_complex(&p, &x, black_box(&gens)).unwrap()));
}

fn conspiciality(c: &mut Criterion) {
    let braid = dgrp::constructions::planar_braid(3).unwrap();
    let o = WordOracle::new(Arc::new(braid.presentation.clone()), &Budget::default());
    c.bench_function("conspicial_planar_braid_3", |b| b.iter(|| squier::check_conspicial(&braid.baseword, &o)));
}

criterion_group!(benches, reduction, conjugacy, folding_closure, conspiciality);
criterion_main!(benches);
