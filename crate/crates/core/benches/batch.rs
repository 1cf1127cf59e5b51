use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use so5_coupling::batch::{compute_record, keys_up_to, BracketCache, Execution};
use so5_coupling::store::ChainTag;
use so5_coupling::HalfInt;

fn run(chain: ChainTag, max_r: HalfInt, exec: Execution) -> usize {
    let keys = keys_up_to(max_r, chain).unwrap();
    let cache = BracketCache::default();
    exec.map(keys, |k| compute_record(k, &cache).unwrap()).len()
}

fn tabulation(c: &mut Criterion) {
    let jobs = std::thread::available_parallelism().map_or(4, |n| n.get());
    let mut group = c.benchmark_group("tabulate");
    group.sample_size(10);
    for (chain, max_r) in [(ChainTag::So4, 2), (ChainTag::Isospin, 2)] {
        let max_r = HalfInt::from_twice(max_r);
        for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel { jobs })] {
            group.bench_with_input(BenchmarkId::new(format!("{chain}/{name}"), max_r), &exec, |b, &exec| {
                b.iter(|| run(chain, max_r, exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, tabulation);
criterion_main!(benches);
