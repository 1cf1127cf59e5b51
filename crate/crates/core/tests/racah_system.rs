use so5_coupling::racah::{build_system, solve_detailed, solve_series, verify_block, verify_series};
use so5_coupling::so4;
use so5_coupling::so5::{So5Irrep, WeightBasis};
use so5_coupling::{ExactMatrix, HalfInt, RadicalSum};

fn g(r: i32, s: i32) -> So5Irrep {
    So5Irrep::from_twice(r, s)
}

fn rs(s: &str) -> RadicalSum {
    s.parse().unwrap()
}

#[test]
fn four_by_four_system() {
    let sys = build_system(g(1, 1), g(1, 0), g(1, 0)).unwrap();
    let a = sys.matrix();
    assert_eq!((a.rows(), a.cols()), (4, 4));
    assert_eq!(a.rank().unwrap(), 3);
    let ns = a.nullspace().unwrap();
    assert_eq!(ns.len(), 1);
    // proportional to [-1/2, -1, 1/2, 1]
    let want = ["-1/2", "-1", "1/2", "1"].map(rs);
    let scale = ns[0][3].clone();
    for (x, w) in ns[0].iter().zip(&want) {
        assert_eq!(*x, w * &scale);
    }
}

#[test]
fn doubled_multiplicity_system() {
    let sol = solve_detailed(g(2, 0), g(2, 1), g(2, 1)).unwrap();
    let a = sol.system.matrix();
    assert_eq!((a.rows(), a.cols()), (36, 18));
    assert_eq!(a.rank().unwrap(), 16);
    assert_eq!(sol.system.augmented_rows, 0);
    let m = [["15/8", "+sqrt(45/32)"], ["+sqrt(45/32)", "31/4"]].map(|r| r.map(rs).to_vec()).to_vec();
    assert_eq!(sol.form, m);
    for v in &sol.block.values {
        assert!(a.mul_vec(v).iter().all(RadicalSum::is_zero));
    }
    assert!(verify_block(&sol.block).ok());
}

#[test]
fn sweep_up_to_three_halves() {
    let irreps = So5Irrep::all_up_to(HalfInt::from_twice(3));
    let t0 = std::time::Instant::now();
    let mut n = 0;
    for &g1 in &irreps {
        for &g2 in &irreps {
            if g2 < g1 {
                continue;
            }
            let blocks = solve_series(g1, g2).unwrap();
            for b in &blocks {
                let sol = solve_detailed(g1, g2, b.key.g).unwrap();
                let a = sol.system.matrix();
                assert_eq!(a.rank().unwrap(), a.cols() - b.multiplicity(), "{}", b.key);
                let r = verify_block(b);
                assert!(r.ok(), "{:?}", r.failures);
                n += 1;
            }
            assert!(verify_series(&blocks).ok());
        }
    }
    assert!(n > 100, "{n} blocks in {:?}", t0.elapsed());
}

/// Full coefficients rebuilt from the reduced ones form an orthogonal matrix.
#[test]
fn reconstructed_coefficients_are_unitary() {
    let small = [g(0, 0), g(1, 0), g(1, 1), g(2, 0)];
    for &g1 in &small {
        for &g2 in &small {
            let s1 = WeightBasis::new(g1).states().to_vec();
            let s2 = WeightBasis::new(g2).states().to_vec();
            let mut columns = Vec::new();
            for b in solve_series(g1, g2).unwrap() {
                for rho in 1..=b.multiplicity() {
                    for s in WeightBasis::new(b.key.g).states() {
                        columns.push((b.clone(), rho, *s));
                    }
                }
            }
            let n = s1.len() * s2.len();
            assert_eq!(columns.len(), n);
            let mut c = ExactMatrix::zeros(n, n);
            for (i, (a, b)) in s1.iter().flat_map(|a| s2.iter().map(move |b| (a, b))).enumerate() {
                for (j, (blk, rho, s)) in columns.iter().enumerate() {
                    let col = so5_coupling::racah::Column { x1y1: a.xy, x2y2: b.xy, xy: s.xy };
                    let iso = blk.get(*rho, &col);
                    if iso.is_zero() {
                        continue;
                    }
                    let cg = so4::cg(a.xy, a.w, b.xy, b.w, s.xy, s.w).unwrap();
                    c.set(i, j, &iso * &RadicalSum::from(cg));
                }
            }
            let ctc = c.transpose().mul(&c);
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { RadicalSum::one() } else { RadicalSum::zero() };
                    assert_eq!(*ctc.get(i, j), want, "{g1} x {g2} at {i},{j}");
                }
            }
        }
    }
}
