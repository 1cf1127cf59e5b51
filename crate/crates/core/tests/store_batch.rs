use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use so5_coupling::batch::{tabulate, verify_store, Execution};
use so5_coupling::store::{ChainTag, Payload, Store, StoreRecord};
use so5_coupling::HalfInt;

fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().display().to_string(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn build(chain: ChainTag, max_r: i32, exec: Execution) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let mut store = Store::open(dir.path()).unwrap();
    let s = tabulate(&mut store, HalfInt::from_twice(max_r), chain, exec).unwrap();
    assert!(s.computed > 0 && s.skipped == 0);
    dir
}

#[test]
fn worker_count_does_not_change_the_store() {
    for chain in [ChainTag::So4, ChainTag::Isospin] {
        let a = build(chain, 2, Execution::Sequential);
        let b = build(chain, 2, Execution::Parallel { jobs: 8 });
        assert_eq!(snapshot(a.path()), snapshot(b.path()), "{chain}");
    }
}

#[test]
fn rerun_is_a_hash_hit() {
    let dir = build(ChainTag::So4, 1, Execution::Sequential);
    let before = snapshot(dir.path());
    let mut store = Store::open(dir.path()).unwrap();
    let n = store.len();
    let s = tabulate(&mut store, HalfInt::from_twice(1), ChainTag::So4, Execution::Parallel { jobs: 4 }).unwrap();
    assert_eq!((s.computed, s.skipped), (0, n));
    assert_eq!(snapshot(dir.path()), before);
}

#[test]
fn half_spin_store_holds_the_small_block() {
    let dir = build(ChainTag::So4, 1, Execution::Sequential);
    let store = Store::open_existing(dir.path()).unwrap();
    let key = "so4 (1/2,1/2) x (1/2,0) -> (1/2,0)".parse().unwrap();
    let rec = store.load(&key).unwrap().unwrap();
    let values: Vec<String> = rec.payload.block().values[0].iter().map(|v| v.to_string()).collect();
    assert_eq!(values, ["-sqrt(1/5)", "-sqrt(4/5)", "+sqrt(1/5)", "+sqrt(4/5)"]);
}

#[test]
fn pristine_store_verifies() {
    for chain in [ChainTag::So4, ChainTag::Isospin, ChainTag::Angmom] {
        let dir = build(chain, 1, Execution::Parallel { jobs: 4 });
        let report = verify_store(&Store::open_existing(dir.path()).unwrap(), Execution::Parallel { jobs: 4 });
        assert!(report.ok(), "{chain}: {:?}", report.failures);
        assert!(report.checked > 0);
    }
}

fn first_record(store: &Store) -> (String, std::path::PathBuf) {
    let (k, h) = store.entries().find(|(k, _)| k.ends_with("(1/2,1/2) x (1/2,1/2) -> (1,0)")).unwrap();
    (k.to_string(), store.record_path(h))
}

#[test]
fn bit_flip_reports_hash_mismatch() {
    let dir = build(ChainTag::So4, 1, Execution::Sequential);
    let store = Store::open_existing(dir.path()).unwrap();
    let (key, path) = first_record(&store);
    let text = fs::read_to_string(&path).unwrap();
    // change one digit inside a value
    let pos = text.find("sqrt(").unwrap() + 5;
    let mut bytes = text.into_bytes();
    bytes[pos] = if bytes[pos] == b'1' { b'3' } else { b'1' };
    fs::write(&path, bytes).unwrap();
    let report = verify_store(&store, Execution::Sequential);
    let f = &report.failures[&key];
    assert!(f.iter().any(|m| m.contains("hash mismatch")), "{f:?}");
}

#[test]
fn sign_flip_reports_orthonormality_failure() {
    let dir = build(ChainTag::So4, 1, Execution::Sequential);
    let store = Store::open_existing(dir.path()).unwrap();
    let (key, path) = first_record(&store);
    let mut rec = StoreRecord::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    let Payload::So4 { block } = &mut rec.payload else { panic!() };
    let i = block.values[0].iter().position(|v| !v.is_zero()).unwrap();
    block.values[0][i] = -&block.values[0][i];
    fs::write(&path, rec.to_json()).unwrap();
    let report = verify_store(&store, Execution::Sequential);
    let f = &report.failures[&key];
    assert!(f.iter().any(|m| m.contains("hash mismatch")), "{f:?}");
    assert!(f.iter().any(|m| m.contains("bra-sum") || m.contains("violates row")), "{f:?}");
}
