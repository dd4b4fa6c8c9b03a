//! Reduction of Bernoulli polynomials modulo primes q > k+1, root counting
//! over F_q, and detection of "inert" primes: primes q >= k+3 with q not
//! dividing r such that B_k has no root mod q. Those are exactly the primes
//! the sieve may use to exclude term counts d with ord_q(d) = 1.

use crate::arith::{is_prime, mod_inv, mod_mul, primes_up_to, rational_mod, Rational};
use crate::bernoulli::{bernoulli_poly, RatPoly};
use num::bigint::BigInt;
use num::traits::Zero;
use rayon::prelude::*;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModularError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator prime: reducing B_{k} mod {q} needs q > k+1")]
    DenominatorPrime { k: u32, q: u64 },
    #[error("inert-prime scan needs q_max >= k+3, got q_max={q_max}, k={k}")]
    QMaxTooSmall { k: u32, q_max: u64 },
    #[error("inert-prime machinery applies to even k >= 2, got k={0}")]
    OddExponent(u32),
}

/// Dense polynomial over F_q with residue coefficients in [0, q).
/// Canonical: the coefficient vector is empty for zero, trailing entry
/// nonzero otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    q: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(q: u64, coeffs: Vec<u64>) -> Self {
        assert!(q >= 2, "modulus must be at least 2");
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % q).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { q, coeffs }
    }

    pub fn zero(q: u64) -> Self {
        ModPoly::new(q, Vec::new())
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.q;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mod_mul(acc, x, self.q) + c) % self.q;
        }
        acc
    }

    pub fn derivative(&self) -> ModPoly {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.q);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mod_mul(c, i as u64 % self.q, self.q))
            .collect();
        ModPoly::new(self.q, coeffs)
    }

    fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.q);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + mod_mul(a, b, self.q)) % self.q;
            }
        }
        ModPoly::new(self.q, coeffs)
    }

    fn rem(&self, divisor: &ModPoly) -> ModPoly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let q = self.q;
        let lc_inv = mod_inv(*divisor.coeffs.last().unwrap(), q).expect("leading coeff invertible");
        let mut rem = self.coeffs.clone();
        let mut top = rem.len();
        while top > dd {
            let c = rem[top - 1];
            if c != 0 {
                let factor = mod_mul(c, lc_inv, q);
                for j in 0..=dd {
                    let sub = mod_mul(factor, divisor.coeffs[j], q);
                    let idx = top - 1 - dd + j;
                    rem[idx] = (rem[idx] + q - sub) % q;
                }
            }
            top -= 1;
        }
        rem.truncate(top);
        ModPoly::new(q, rem)
    }

    fn monic(&self) -> ModPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = mod_inv(lc, self.q).expect("leading coeff invertible");
                ModPoly::new(
                    self.q,
                    self.coeffs.iter().map(|&c| mod_mul(c, inv, self.q)).collect(),
                )
            }
        }
    }

    /// Monic gcd over F_q.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        assert_eq!(self.q, other.q);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    // x^q mod self, by binary exponentiation of polynomials mod self.
    fn x_pow_q(&self) -> ModPoly {
        let q = self.q;
        let x = ModPoly::new(q, vec![0, 1]);
        let mut base = x.rem(self);
        let mut acc = ModPoly::new(q, vec![1]).rem(self);
        let mut e = q;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(self);
            }
            base = base.mul(&base).rem(self);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.q);
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                _ => {
                    if c != 1 {
                        write!(f, "{}*", c)?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{}", i)?;
                    }
                }
            }
        }
        write!(f, " (mod {})", self.q)
    }
}

/// Coefficient-wise image of B_k in F_q, denominators mapped through the
/// modular inverse. Needs q prime and q > k+1 so no denominator vanishes.
pub fn reduce_bernoulli_mod_q(k: u32, q: u64) -> Result<ModPoly, ModularError> {
    if !is_prime(q) {
        return Err(ModularError::NotPrime(q));
    }
    if q <= k as u64 + 1 {
        return Err(ModularError::DenominatorPrime { k, q });
    }
    let b = bernoulli_poly(k);
    let mut coeffs = Vec::with_capacity(b.coeffs().len());
    for c in b.coeffs() {
        match rational_mod(c, q) {
            Some(r) => coeffs.push(r),
            None => return Err(ModularError::DenominatorPrime { k, q }),
        }
    }
    Ok(ModPoly::new(q, coeffs))
}

/// Picks between the exhaustive scan and the gcd(x^q - x, f) count.
/// The scan is exact and cache-friendly below the threshold; the gcd
/// route scales to large q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCountStrategy {
    pub scan_threshold: u64,
}

impl Default for RootCountStrategy {
    fn default() -> Self {
        RootCountStrategy {
            scan_threshold: 100_000,
        }
    }
}

/// Number of distinct roots of `f` in F_q by trying every residue.
pub fn count_roots_scan(f: &ModPoly) -> u64 {
    (0..f.modulus()).filter(|&x| f.eval(x) == 0).count() as u64
}

/// Number of distinct roots of `f` in F_q as deg gcd(x^q - x, f).
pub fn count_roots_gcd(f: &ModPoly) -> u64 {
    match f.degree() {
        None => f.modulus(), // zero polynomial vanishes everywhere
        Some(0) => 0,
        Some(_) => {
            let xq = f.x_pow_q();
            let minus_x = ModPoly::new(f.modulus(), vec![0, f.modulus() - 1]);
            let diff = ModPoly::new(
                f.modulus(),
                sum_coeffs(&xq, &minus_x),
            )
            .rem(f);
            f.gcd(&diff).degree().map_or(0, |d| d as u64)
        }
    }
}

fn sum_coeffs(a: &ModPoly, b: &ModPoly) -> Vec<u64> {
    let q = a.modulus();
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n)
        .map(|i| {
            (a.coeffs().get(i).copied().unwrap_or(0) + b.coeffs().get(i).copied().unwrap_or(0)) % q
        })
        .collect()
}

/// Distinct-root count with the default strategy.
pub fn count_roots_mod_q(f: &ModPoly) -> u64 {
    count_roots_with(f, &RootCountStrategy::default())
}

pub fn count_roots_with(f: &ModPoly, strategy: &RootCountStrategy) -> u64 {
    if f.modulus() <= strategy.scan_threshold {
        count_roots_scan(f)
    } else {
        count_roots_gcd(f)
    }
}

/// Evidence that q satisfies all three exclusion-criterion hypotheses for
/// (k, r): q >= k+3, q does not divide r, and B_k has no root mod q.
/// Only `is_inert_prime` can build one, so holding a certificate means the
/// checks passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[non_exhaustive]
pub struct InertPrimeCert {
    pub k: u32,
    pub r: i64,
    pub q: u64,
    pub root_count: u64,
}

impl InertPrimeCert {
    /// Re-run all three hypothesis checks from scratch.
    pub fn verify(&self) -> bool {
        is_inert_prime(self.k, self.r, self.q) == Ok(*self)
    }
}

/// Why a prime fails the inert test; naming the first failed hypothesis.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum InertRefusal {
    #[error("{q} is not prime")]
    NotPrime { q: u64 },
    #[error("q={q} is below the bound k+3={min}")]
    BelowBound { q: u64, min: u64 },
    #[error("q={q} divides r={r}")]
    DividesR { q: u64, r: i64 },
    #[error("B_k has {count} roots mod q={q}")]
    HasRoot { q: u64, count: u64 },
}

/// Certificate iff q >= k+3, q does not divide r, and B_k mod q has no
/// roots; otherwise a refusal naming the failed hypothesis.
pub fn is_inert_prime(k: u32, r: i64, q: u64) -> Result<InertPrimeCert, InertRefusal> {
    is_inert_prime_with(k, r, q, &RootCountStrategy::default())
}

pub fn is_inert_prime_with(
    k: u32,
    r: i64,
    q: u64,
    strategy: &RootCountStrategy,
) -> Result<InertPrimeCert, InertRefusal> {
    assert!(k >= 2 && k % 2 == 0, "inert test is for even k >= 2");
    assert!(r != 0, "r must be nonzero");
    if !is_prime(q) {
        return Err(InertRefusal::NotPrime { q });
    }
    if q < k as u64 + 3 {
        return Err(InertRefusal::BelowBound { q, min: k as u64 + 3 });
    }
    if r.unsigned_abs() % q == 0 {
        return Err(InertRefusal::DividesR { q, r });
    }
    let f = reduce_bernoulli_mod_q(k, q).expect("q >= k+3 > k+1");
    let count = count_roots_with(&f, strategy);
    if count == 0 {
        Ok(InertPrimeCert {
            k,
            r,
            q,
            root_count: 0,
        })
    } else {
        Err(InertRefusal::HasRoot { q, count })
    }
}

/// All inert primes <= q_max for (k, r), ascending. The per-prime checks
/// run in parallel; the result order is by q regardless of schedule.
pub fn inert_primes(k: u32, r: i64, q_max: u64) -> Result<Vec<InertPrimeCert>, ModularError> {
    inert_primes_with(k, r, q_max, &RootCountStrategy::default())
}

pub fn inert_primes_with(
    k: u32,
    r: i64,
    q_max: u64,
    strategy: &RootCountStrategy,
) -> Result<Vec<InertPrimeCert>, ModularError> {
    if k < 2 || k % 2 != 0 {
        return Err(ModularError::OddExponent(k));
    }
    if q_max < k as u64 + 3 {
        return Err(ModularError::QMaxTooSmall { k, q_max });
    }
    let primes: Vec<u64> = primes_up_to(q_max)
        .into_iter()
        .filter(|&q| q >= k as u64 + 3)
        .collect();
    Ok(primes
        .par_iter()
        .filter_map(|&q| is_inert_prime_with(k, r, q, strategy).ok())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InertDensityReport {
    pub k: u32,
    pub r: i64,
    pub q_max: u64,
    pub inert_count: u64,
    pub prime_count: u64,
    /// inert primes / all primes in (k+2, q_max], as an exact fraction;
    /// zero when the window holds no primes at all.
    pub fraction: Rational,
}

/// Measured fraction of inert primes among all primes in (k+2, q_max].
pub fn inert_density(k: u32, r: i64, q_max: u64) -> Result<InertDensityReport, ModularError> {
    inert_density_with(k, r, q_max, &RootCountStrategy::default())
}

pub fn inert_density_with(
    k: u32,
    r: i64,
    q_max: u64,
    strategy: &RootCountStrategy,
) -> Result<InertDensityReport, ModularError> {
    let certs = inert_primes_with(k, r, q_max, strategy)?;
    let prime_count = primes_up_to(q_max)
        .into_iter()
        .filter(|&q| q >= k as u64 + 3)
        .count() as u64;
    let inert_count = certs.len() as u64;
    let fraction = if prime_count == 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::from(inert_count), BigInt::from(prime_count))
    };
    Ok(InertDensityReport {
        k,
        r,
        q_max,
        inert_count,
        prime_count,
        fraction,
    })
}

/// Discriminant of B_k, computed exactly as
/// (-1)^(k(k-1)/2) * resultant(B_k, B_k') (B_k is monic). Only the prime
/// support of its numerator matters to callers, but the value is exact.
pub fn bernoulli_discriminant(k: u32) -> Rational {
    assert!(k >= 1);
    let b: RatPoly = bernoulli_poly(k);
    let res = b.resultant(&b.derivative());
    if (k as u64 * (k as u64 - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_b2_examples() {
        assert_eq!(
            reduce_bernoulli_mod_q(2, 13).unwrap(),
            ModPoly::new(13, vec![11, 12, 1])
        );
        assert_eq!(
            reduce_bernoulli_mod_q(2, 5).unwrap(),
            ModPoly::new(5, vec![1, 4, 1])
        );
        assert_eq!(
            reduce_bernoulli_mod_q(2, 3),
            Err(ModularError::DenominatorPrime { k: 2, q: 3 })
        );
        assert_eq!(reduce_bernoulli_mod_q(2, 10), Err(ModularError::NotPrime(10)));
    }

    #[test]
    fn root_counts_for_b2() {
        assert_eq!(count_roots_mod_q(&reduce_bernoulli_mod_q(2, 5).unwrap()), 0);
        assert_eq!(count_roots_mod_q(&reduce_bernoulli_mod_q(2, 13).unwrap()), 2);
        assert_eq!(count_roots_mod_q(&reduce_bernoulli_mod_q(2, 11).unwrap()), 2);
    }

    #[test]
    fn scan_and_gcd_agree_on_b2() {
        for q in [5u64, 7, 11, 13, 17, 19, 23, 101, 997] {
            let f = reduce_bernoulli_mod_q(2, q).unwrap();
            assert_eq!(count_roots_scan(&f), count_roots_gcd(&f), "q={}", q);
        }
    }

    #[test]
    fn inert_examples() {
        assert!(is_inert_prime(2, 1, 5).is_ok());
        assert_eq!(
            is_inert_prime(2, 1, 13),
            Err(InertRefusal::HasRoot { q: 13, count: 2 })
        );
        assert_eq!(
            is_inert_prime(2, 5, 5),
            Err(InertRefusal::DividesR { q: 5, r: 5 })
        );
        assert_eq!(
            is_inert_prime(2, 1, 3),
            Err(InertRefusal::BelowBound { q: 3, min: 5 })
        );
    }

    #[test]
    fn inert_scan_k2_up_to_30() {
        let certs = inert_primes(2, 1, 30).unwrap();
        let qs: Vec<u64> = certs.iter().map(|c| c.q).collect();
        assert_eq!(qs, vec![5, 7, 17, 19, 29]);
        assert!(certs.iter().all(|c| c.verify()));
    }

    #[test]
    fn inert_scan_bounds() {
        assert_eq!(
            inert_primes(2, 1, 4),
            Err(ModularError::QMaxTooSmall { k: 2, q_max: 4 })
        );
        assert!(!inert_primes(4, 1, 100).unwrap().is_empty());
        assert_eq!(inert_primes(3, 1, 100), Err(ModularError::OddExponent(3)));
    }

    #[test]
    fn single_prime_density_window() {
        let report = inert_density(2, 1, 5).unwrap();
        assert_eq!(report.prime_count, 1);
        assert_eq!(report.inert_count, 1);
        assert_eq!(report.fraction, crate::arith::rat_int(1));
    }

    #[test]
    fn density_positive_for_k6() {
        let report = inert_density(6, 1, 1000).unwrap();
        assert!(report.inert_count > 0);
    }

    #[test]
    fn discriminant_of_b2() {
        // disc(x^2 - x + 1/6) = 1 - 4/6 = 1/3.
        assert_eq!(bernoulli_discriminant(2), crate::arith::rat(1, 3));
    }
}
