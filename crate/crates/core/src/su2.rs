//! Closed-form SU(2) Clebsch-Gordan coefficients, 6j and unitary 6j symbols
//! in the Condon-Shortley convention.

use std::sync::{OnceLock, RwLock};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Radical;
use crate::halfint::{triangle, HalfInt};

fn factorial(n: i32) -> BigInt {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    assert!(n >= 0, "factorial of negative number");
    let n = n as usize;
    let table = TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]));
    if let Some(v) = table.read().expect("factorial table poisoned").get(n) {
        return v.clone();
    }
    let mut t = table.write().expect("factorial table poisoned");
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 1] * BigInt::from(k);
        t.push(next);
    }
    t[n].clone()
}

/// Factorial of a half-integer known to be integral.
fn fact(h: i32) -> BigInt {
    debug_assert!(h % 2 == 0);
    factorial(h / 2)
}

fn check_spin(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 || (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::MalformedSpin { j: j.to_string(), m: m.to_string() });
    }
    Ok(())
}

fn cg_cache() -> &'static DashMap<[i32; 6], Radical> {
    static CACHE: OnceLock<DashMap<[i32; 6], Radical>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

fn sixj_cache() -> &'static DashMap<[i32; 6], Radical> {
    static CACHE: OnceLock<DashMap<[i32; 6], Radical>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// `<j1 m1; j2 m2 | j m>`.
pub fn cg(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Result<Radical> {
    check_spin(j1, m1)?;
    check_spin(j2, m2)?;
    check_spin(j, m)?;
    if m1 + m2 != m || !triangle(j1, j2, j) || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return Ok(Radical::zero());
    }
    let key = [j1, m1, j2, m2, j, m].map(HalfInt::twice);
    if let Some(v) = cg_cache().get(&key) {
        return Ok(v.clone());
    }
    let v = cg_uncached(key);
    cg_cache().insert(key, v.clone());
    Ok(v)
}

fn cg_uncached([j1, m1, j2, m2, j, m]: [i32; 6]) -> Radical {
    // all arguments twice their value
    let pre = BigInt::from(j + 1)
        * fact(j + j1 - j2)
        * fact(j - j1 + j2)
        * fact(j1 + j2 - j)
        * fact(j + m)
        * fact(j - m)
        * fact(j1 - m1)
        * fact(j1 + m1)
        * fact(j2 - m2)
        * fact(j2 + m2);
    let radicand = BigRational::new(pre, fact(j1 + j2 + j + 2));
    let mut sum = BigRational::zero();
    let kmax = [j1 + j2 - j, j1 - m1, j2 + m2].into_iter().min().unwrap();
    let kmin = [0, j2 - j - m1, j1 - j + m2].into_iter().max().unwrap();
    let mut k = kmin;
    while k <= kmax {
        let den = fact(k)
            * fact(j1 + j2 - j - k)
            * fact(j1 - m1 - k)
            * fact(j2 + m2 - k)
            * fact(j - j2 + m1 + k)
            * fact(j - j1 - m2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if (k / 2) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        k += 2;
    }
    Radical::canonicalize(sum, &radicand).expect("nonnegative radicand")
}

fn delta(a: i32, b: i32, c: i32) -> BigRational {
    BigRational::new(fact(a + b - c) * fact(a - b + c) * fact(-a + b + c), fact(a + b + c + 2))
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}`.
pub fn sixj(j1: HalfInt, j2: HalfInt, j3: HalfInt, j4: HalfInt, j5: HalfInt, j6: HalfInt) -> Radical {
    if !(triangle(j1, j2, j3) && triangle(j1, j5, j6) && triangle(j4, j2, j6) && triangle(j4, j5, j3)) {
        return Radical::zero();
    }
    let key = [j1, j2, j3, j4, j5, j6].map(HalfInt::twice);
    if let Some(v) = sixj_cache().get(&key) {
        return v.clone();
    }
    let v = sixj_uncached(key);
    sixj_cache().insert(key, v.clone());
    v
}

fn sixj_uncached([j1, j2, j3, j4, j5, j6]: [i32; 6]) -> Radical {
    let radicand = delta(j1, j2, j3) * delta(j1, j5, j6) * delta(j4, j2, j6) * delta(j4, j5, j3);
    let a = [j1 + j2 + j3, j1 + j5 + j6, j4 + j2 + j6, j4 + j5 + j3];
    let b = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4];
    let tmin = *a.iter().max().unwrap();
    let tmax = *b.iter().min().unwrap();
    let mut sum = BigRational::zero();
    let mut t = tmin;
    while t <= tmax {
        let mut den = BigInt::one();
        for ai in a {
            den *= fact(t - ai);
        }
        for bi in b {
            den *= fact(bi - t);
        }
        let term = BigRational::new(fact(t + 2), den);
        if (t / 2) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        t += 2;
    }
    Radical::canonicalize(sum, &radicand).expect("nonnegative radicand")
}

/// Unitary recoupling coefficient `U(j1 j2 j12; j3 j j23)`.
pub fn usixj(j1: HalfInt, j2: HalfInt, j12: HalfInt, j3: HalfInt, j: HalfInt, j23: HalfInt) -> Radical {
    if !(triangle(j1, j2, j12) && triangle(j12, j3, j) && triangle(j2, j3, j23) && triangle(j1, j23, j)) {
        return Radical::zero();
    }
    let w = sixj(j1, j2, j12, j3, j, j23);
    let scale = Radical::sqrt(&BigRational::from_integer(BigInt::from(j12.dim() * j23.dim()))).expect("positive");
    let v = w.mul(&scale);
    if phase(j1 + j2 + j3 + j) < 0 {
        -v
    } else {
        v
    }
}

/// `(-1)^(j1+j2-j)`, the phase from interchanging the coupled pair.
pub fn phi(j1: HalfInt, j2: HalfInt, j: HalfInt) -> i32 {
    phase(j1 + j2 - j)
}

fn phase(h: HalfInt) -> i32 {
    debug_assert!(h.is_integer(), "phase of non-integer {h}");
    if (h.twice() / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn rad(s: &str) -> Radical {
        s.parse().unwrap()
    }

    #[test]
    fn known_cg() {
        assert_eq!(cg(h(0), h(0), h(3), h(1), h(3), h(1)).unwrap(), Radical::one());
        assert_eq!(cg(h(1), h(1), h(1), h(-1), h(0), h(0)).unwrap(), rad("+sqrt(1/2)"));
        assert_eq!(cg(h(2), h(2), h(2), h(-2), h(0), h(0)).unwrap(), rad("+sqrt(1/3)"));
        assert_eq!(cg(h(1), h(-1), h(1), h(1), h(0), h(0)).unwrap(), rad("-sqrt(1/2)"));
        assert_eq!(cg(h(2), h(0), h(2), h(0), h(2), h(0)).unwrap(), Radical::zero());
        assert!(matches!(cg(h(1), h(0), h(1), h(1), h(2), h(1)), Err(Error::MalformedSpin { .. })));
    }

    #[test]
    fn known_sixj() {
        assert_eq!(sixj(h(1), h(1), h(2), h(1), h(1), h(2)), rad("+sqrt(1/36)"));
        assert_eq!(sixj(h(2), h(2), h(6), h(2), h(2), h(2)), Radical::zero());
        // zero-argument closed form
        for (a, b, c) in [(2, 2, 2), (1, 2, 3), (4, 2, 2), (3, 3, 4)] {
            let expect = Radical::sqrt(&BigRational::new(1.into(), ((b + 1) * (c + 1)).into())).unwrap();
            let expect = if ((a + b + c) / 2) % 2 == 0 { expect } else { -expect };
            assert_eq!(sixj(h(a), h(b), h(c), h(0), h(c), h(b)), expect);
        }
    }

    #[test]
    fn known_usixj_and_phi() {
        assert_eq!(
            usixj(h(1), h(1), h(2), h(1), h(1), h(2)),
            Radical::from_rational(BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(usixj(h(3), h(0), h(3), h(2), h(1), h(2)), Radical::one());
        assert_eq!(phi(h(1), h(1), h(2)), 1);
        assert_eq!(phi(h(1), h(1), h(0)), -1);
        assert_eq!(phi(h(2), h(2), h(2)), -1);
    }
}
