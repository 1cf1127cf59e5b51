use so5_coupling::chain::angmom::{chain3_brackets, chain3_transform};
use so5_coupling::chain::isospin::{chain2_brackets, chain2_transform, Chain2Row};
use so5_coupling::racah::solve_isoscalars;
use so5_coupling::{HalfInt, RadicalSum, So5Irrep};

fn g(r: i32, s: i32) -> So5Irrep {
    So5Irrep::from_twice(r, s)
}

fn reference() -> Vec<(Vec<HalfInt>, Vec<RadicalSum>)> {
    let text = include_str!("fixtures/table_isospin_10_1h_1h.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let labels = f[..6].iter().map(|x| x.parse().unwrap()).collect();
            let values = f[6..].iter().map(|x| x.parse().unwrap()).collect();
            (labels, values)
        })
        .collect()
}

fn table(g1: So5Irrep, g2: So5Irrep, g: So5Irrep) -> Vec<Chain2Row> {
    let block = solve_isoscalars(g1, g2, g).unwrap();
    chain2_transform(&block, &chain2_brackets(g1).unwrap(), &chain2_brackets(g2).unwrap(), &chain2_brackets(g).unwrap())
        .unwrap()
}

#[test]
fn isospin_table_matches_reference_up_to_rho_sign() {
    let rows = table(g(2, 0), g(2, 1), g(2, 1));
    let want = reference();
    assert_eq!(rows.len(), want.len());
    let mut sign = [0i32; 2];
    for (row, (labels, values)) in rows.iter().zip(&want) {
        let got = vec![row.k1.ms, row.k2.ms, row.k.ms, row.k1.t, row.k2.t, row.k.t];
        assert_eq!(&got, labels);
        for rho in 0..2 {
            let (a, b) = (&row.values[rho], &values[rho]);
            if b.is_zero() {
                assert!(a.is_zero(), "{labels:?} rho={rho}");
                continue;
            }
            let s = if a == b {
                1
            } else if *a == -b {
                -1
            } else {
                panic!("{labels:?} rho={rho}: {a} vs {b}")
            };
            if sign[rho] == 0 {
                sign[rho] = s;
            }
            assert_eq!(sign[rho], s, "{labels:?} rho={rho}");
        }
    }
    assert_eq!(sign, [1, -1]);
}

#[test]
fn isospin_table_conjugation_symmetry() {
    let rows = table(g(2, 0), g(2, 1), g(2, 1));
    for r in &rows {
        let mirror = rows
            .iter()
            .find(|m| {
                (m.k1.ms, m.k2.ms, m.k.ms) == (-r.k1.ms, -r.k2.ms, -r.k.ms)
                    && (m.k1.t, m.k2.t, m.k.t) == (r.k1.t, r.k2.t, r.k.t)
            })
            .expect("mirror row");
        for (a, b) in r.values.iter().zip(&mirror.values) {
            assert_eq!(a.abs(), b.abs());
        }
    }
}

#[test]
fn scalar_target_reduces_to_orthonormality() {
    let (gs, gv) = (g(0, 0), g(1, 1));
    let block = solve_isoscalars(gv, gv, gs).unwrap();
    let b1 = chain3_brackets(gv).unwrap();
    let rows = chain3_transform(&block, &b1, &b1, &chain3_brackets(gs).unwrap()).unwrap();
    assert!(!rows.is_empty());
    for r in &rows {
        assert_eq!(r.k1, r.k2);
        let l = r.k1.l.twice() as i64;
        // |value|^2 = (2L+1)/dim g1
        assert_eq!(r.values[0].square(), RadicalSum::from_ratio(l + 1, 5));
    }
}

#[test]
fn angmom_table_rows_are_ml_independent() {
    for (g1, g2, gg) in [(g(2, 0), g(1, 1), g(1, 1)), (g(2, 0), g(2, 1), g(2, 1)), (g(1, 1), g(1, 1), g(2, 0))] {
        let block = solve_isoscalars(g1, g2, gg).unwrap();
        let rows = chain3_transform(
            &block,
            &chain3_brackets(g1).unwrap(),
            &chain3_brackets(g2).unwrap(),
            &chain3_brackets(gg).unwrap(),
        )
        .unwrap();
        assert!(!rows.is_empty());
    }
}
