use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use rankforge_bench::{
    balanced_tree, dense_game, dihedral_marked, extension_instance, mid_ordinal_pair,
    probe_structure, synthesis_instance, tower_stage,
};
use rankforge_core::gamerank::{cb_rank, le_game};
use rankforge_core::grouprank::{eval_rank, tower};
use rankforge_core::oracle::{aut_group, rk_table, RelationCache};
use rankforge_core::zline::{compare_backlex, qf_type, synth_automorphism};
use rankforge_core::Ordinal;

fn ordinal_arithmetic(c: &mut Criterion) {
    let (a, b) = mid_ordinal_pair();
    let mut g = c.benchmark_group("ordinal");
    g.bench_function("parse", |bch| {
        bch.iter(|| Ordinal::parse(black_box("w^(w^2*2+3)*4+w^(w+1)*2+w*5+7")).unwrap())
    });
    g.bench_function("add", |bch| bch.iter(|| black_box(&a).add(black_box(&b))));
    g.bench_function("mul", |bch| bch.iter(|| black_box(&a).mul(black_box(&b))));
    g.bench_function("nat_add", |bch| bch.iter(|| black_box(&a).nat_add(black_box(&b))));
    g.bench_function("omega_pow", |bch| bch.iter(|| Ordinal::omega_pow(black_box(&b))));
    g.finish();
}

fn group_rank(c: &mut Criterion) {
    let alpha = tower_stage();
    c.bench_function("grouprank/tower_eval", |bch| {
        bch.iter(|| eval_rank(&tower(black_box(&alpha)).unwrap()).unwrap())
    });
}

fn game_rank(c: &mut Criterion) {
    let game = dense_game();
    let mut g = c.benchmark_group("gamerank");
    g.bench_function("grk", |bch| bch.iter(|| black_box(&game).grk(&[]).unwrap()));
    g.bench_function("le_game_winner", |bch| {
        bch.iter(|| le_game(black_box(&game), black_box(&game)).winner())
    });
    let tree = balanced_tree(3, 3);
    g.bench_function("cb_rank", |bch| bch.iter(|| cb_rank(black_box(&tree))));
    g.finish();
}

fn zline(c: &mut Criterion) {
    let (ambient, context, a, b) = synthesis_instance();
    let mut tuple = context.clone();
    tuple.push(a.clone());
    tuple.push(b.clone());
    let mut g = c.benchmark_group("zline");
    g.bench_function("compare_backlex", |bch| {
        bch.iter(|| compare_backlex(black_box(&ambient), black_box(&a), black_box(&b)).unwrap())
    });
    g.bench_function("qf_type", |bch| {
        bch.iter(|| qf_type(black_box(&ambient), black_box(&tuple)).unwrap())
    });
    g.bench_function("synth_automorphism", |bch| {
        bch.iter(|| {
            synth_automorphism(black_box(&ambient), black_box(&context), &a, &b).unwrap()
        })
    });
    g.finish();
}

fn fusion_step(c: &mut Criterion) {
    let (mu, pair, s, r, i, beta, cset) = extension_instance();
    let mut g = c.benchmark_group("fusion");
    g.bench_function("in_f", |bch| {
        bch.iter(|| rankforge_core::fusion::in_f(black_box(&mu), black_box(&pair)).unwrap())
    });
    g.bench_function("extend_requirement", |bch| {
        bch.iter(|| {
            rankforge_core::fusion::extend_requirement(&mu, &pair, &s, &r, i, &beta, &cset)
                .unwrap()
        })
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let (group, v) = dihedral_marked();
    let m = probe_structure();
    let mut g = c.benchmark_group("oracle");
    g.bench_function("rk_table", |bch| {
        bch.iter(|| rk_table(black_box(&group), black_box(v)).unwrap())
    });
    g.bench_function("aut_group", |bch| bch.iter(|| aut_group(black_box(&m)).unwrap()));
    let act = aut_group(&m).unwrap();
    let full = act.group().full_mask();
    g.bench_function("squiggle_sweep", |bch| {
        bch.iter(|| {
            let mut cache = RelationCache::new(&act);
            for x in 0..act.space() {
                for y in 0..act.space() {
                    black_box(cache.squiggle(full, 2, x, y).unwrap());
                }
            }
        })
    });
    g.finish();
}

criterion_group!(
    benches,
    ordinal_arithmetic,
    group_rank,
    game_rank,
    zline,
    fusion_step,
    oracle
);
criterion_main!(benches);
