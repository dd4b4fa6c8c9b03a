//! Exact integer and rational arithmetic: primality, prime sieving, binomial
//! coefficients (plain and digit-wise mod p), modular helpers and integer
//! roots. Everything is arbitrary precision and nothing here ever rounds.
//!
//! All functions are pure; they can be called concurrently without any
//! shared state.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{One, Pow, ToPrimitive, Zero};
use num::Integer;
use thiserror::Error;

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator, so structural equality is value equality.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// The rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The rational `n/1`.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Checked rational division: exact quotient, or an error when `b` is zero.
pub fn rat_div(a: &Rational, b: &Rational) -> Result<Rational, ArithError> {
    if b.is_zero() {
        Err(ArithError::DivisionByZero)
    } else {
        Ok(a / b)
    }
}

/// `base^exp` for big integers, routed through one place so the exponent
/// type is fixed crate-wide.
pub fn bigint_pow(base: &BigInt, exp: u32) -> BigInt {
    Pow::pow(base, exp)
}

/// `base^exp` for big naturals.
pub fn biguint_pow(base: &BigUint, exp: u32) -> BigUint {
    Pow::pow(base, exp)
}

/// Binomial coefficient C(n, r), with C(n, r) = 0 whenever r < 0 or r > n.
pub fn binomial(n: u64, r: i64) -> BigInt {
    if r < 0 || r as u64 > n {
        return BigInt::zero();
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = BigInt::one();
    // Each partial product is itself a binomial coefficient, so the
    // division below is always exact.
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `a * b mod m` without overflow.
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by binary exponentiation.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if a == 0 {
        return (b, 0, 1);
    }
    let (g, x, y) = extended_gcd(b % a, a);
    (g, y - (b / a) * x, x)
}

/// Inverse of `a` mod `m`, or `None` when gcd(a, m) != 1.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = extended_gcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some((x.rem_euclid(m as i128)) as u64)
}

/// Image of a rational in Z/m, if its denominator is invertible mod m.
pub fn rational_mod(x: &Rational, m: u64) -> Option<u64> {
    let m_big = BigInt::from(m);
    let num = x.numer().mod_floor(&m_big).to_u64()?;
    let den = x.denom().mod_floor(&m_big).to_u64()?;
    let inv = mod_inv(den, m)?;
    Some(mod_mul(num, inv, m))
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes <= n, ascending, via the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Euler's totient by trial factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut phi = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// C(u, v) mod p computed digit-by-digit in base p (Lucas' theorem).
///
/// Equals the plain binomial coefficient reduced mod p; computing it from
/// the base-p digits keeps the cost logarithmic in u.
pub fn binom_mod_p_lucas(u: u64, v: u64, p: u64) -> Result<u64, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let (mut u, mut v) = (u, v);
    let mut acc = 1u64;
    while u > 0 || v > 0 {
        acc = mod_mul(acc, small_binom_mod(u % p, v % p, p), p);
        if acc == 0 {
            return Ok(0);
        }
        u /= p;
        v /= p;
    }
    Ok(acc)
}

// C(a, b) mod p for 0 <= a, b < p: no factor below is divisible by p,
// so the denominator is invertible.
fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = mod_mul(num, (a - i) % p, p);
        den = mod_mul(den, (i + 1) % p, p);
    }
    mod_mul(num, mod_inv(den, p).expect("denominator coprime to p"), p)
}

/// Floor of the n-th root of `n`, plus whether the root is exact.
///
/// Pure integer Newton iteration seeded from the bit length; no floating
/// point is involved at any step. Requires `root_exp >= 2`.
pub fn integer_nth_root(n: &BigUint, root_exp: u32) -> (BigUint, bool) {
    assert!(root_exp >= 2, "root exponent must be at least 2");
    if n.is_zero() || n.is_one() {
        return (n.clone(), true);
    }
    let bits = n.bits();
    // 2^ceil(bits / root_exp) >= n^(1/root_exp), so this starts above the root.
    let mut x = BigUint::one() << bits.div_ceil(root_exp as u64);
    let k = BigUint::from(root_exp);
    loop {
        let t = biguint_pow(&x, root_exp - 1);
        let next = (&x * (root_exp as u64 - 1) + n / t) / &k;
        if next >= x {
            break;
        }
        x = next;
    }
    while biguint_pow(&x, root_exp) > *n {
        x -= 1u32;
    }
    while biguint_pow(&(&x + 1u32), root_exp) <= *n {
        x += 1u32;
    }
    let exact = biguint_pow(&x, root_exp) == *n;
    (x, exact)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_examples() {
        assert_eq!(rat(1, 6) + rat(-1, 2), rat(-1, 3));
        assert_eq!(rat(1, 42) * rat_int(42), rat_int(1));
        assert_eq!(rat_div(&rat(-1, 30), &rat(1, 6)).unwrap(), rat(-1, 5));
        assert_eq!(rat_div(&rat_int(1), &rat_int(0)), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn rationals_stored_reduced_with_positive_denominator() {
        let x = Rational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(6, 0), BigInt::one());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(10, 4), BigInt::from(210));
    }

    #[test]
    fn lucas_examples() {
        // k = 2^s * t with s = 2, t = 3: C(12, 4) = 495 is odd.
        assert_eq!(binom_mod_p_lucas(12, 4, 2).unwrap(), 1);
        // 0 < v < 2^s forces evenness: C(12, 3) = 220.
        assert_eq!(binom_mod_p_lucas(12, 3, 2).unwrap(), 0);
        // C(10, 4) = 210 = 30 * 7.
        assert_eq!(binom_mod_p_lucas(10, 4, 7).unwrap(), 0);
        assert_eq!(binom_mod_p_lucas(10, 4, 6), Err(ArithError::NotPrime(6)));
    }

    #[test]
    fn primes_examples() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn primality_small_and_large() {
        assert!(is_prime(2) && is_prime(3) && is_prime(9973));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(9991)); // 9991 = 97*103
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
    }

    #[test]
    fn nth_root_examples() {
        let (r, exact) = integer_nth_root(&BigUint::from(4900u32), 2);
        assert_eq!((r, exact), (BigUint::from(70u32), true));
        let (r, exact) = integer_nth_root(&BigUint::from(216u32), 3);
        assert_eq!((r, exact), (BigUint::from(6u32), true));
        let (r, exact) = integer_nth_root(&BigUint::from(217u32), 3);
        assert_eq!((r, exact), (BigUint::from(6u32), false));
    }

    #[test]
    fn rational_mod_basics() {
        // 1/6 mod 13: inverse of 6 is 11.
        assert_eq!(rational_mod(&rat(1, 6), 13), Some(11));
        assert_eq!(rational_mod(&rat(1, 6), 5), Some(1));
        assert_eq!(rational_mod(&rat(1, 6), 3), None);
        assert_eq!(rational_mod(&rat(-1, 1), 7), Some(6));
        assert_eq!(rational_mod(&rat(7, 6), 49), Some(42));
    }

    #[test]
    fn euler_phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(16), 8);
    }
}
