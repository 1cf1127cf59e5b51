use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

/// Splits `n` into `(s, f)` with `n = s^2 * f` and `f` squarefree.
pub fn square_free_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    if let Some(small) = n.to_u64() {
        let (s, f) = split_u64(small);
        return (BigUint::from(s), BigUint::from(f));
    }
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p = 2u64;
    // Once p^3 exceeds the cofactor, what remains is 1, a prime, a product
    // of two distinct primes, or a prime squared.
    loop {
        let pb = BigUint::from(p);
        if &pb * &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            square *= pb.pow(e / 2);
            if e % 2 == 1 {
                free *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest && !rest.is_one() {
        square *= root;
    } else {
        free *= rest;
    }
    (square, free)
}

fn split_u64(mut n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p).saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= p;
        }
        if e % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = n.sqrt();
    if root * root == n && n > 1 {
        square *= root;
    } else {
        free *= n;
    }
    (square, free)
}

/// Smallest prime factor of `n > 1`.
pub fn smallest_prime_factor(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut p = BigUint::from(3u32);
    while &p * &p <= *n {
        if (n % &p).is_zero() {
            return p;
        }
        p += 2u32;
    }
    n.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits() {
        for (n, s, f) in [(0u64, 0u64, 1u64), (1, 1, 1), (8, 2, 2), (45, 3, 5), (360, 6, 10), (49, 7, 1)] {
            let (a, b) = square_free_split(&BigUint::from(n));
            assert_eq!((a, b), (BigUint::from(s), BigUint::from(f)), "n={n}");
        }
        // beyond u64
        let big = BigUint::from(u64::MAX) * BigUint::from(12u32);
        let (s, f) = square_free_split(&big);
        assert_eq!(&s * &s * &f, big);
    }

    #[test]
    fn smallest_factor() {
        assert_eq!(smallest_prime_factor(&BigUint::from(15u32)), BigUint::from(3u32));
        assert_eq!(smallest_prime_factor(&BigUint::from(13u32)), BigUint::from(13u32));
    }
}
