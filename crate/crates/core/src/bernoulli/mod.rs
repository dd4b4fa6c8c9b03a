//! Bernoulli numbers and polynomials, their classical identities, and the
//! exact Bernoulli-polynomial form of the power sum
//! x^k + (x+r)^k + ... + (x+(d-1)r)^k.

mod poly;

pub use poly::RatPoly;

use crate::arith::{binomial, bigint_pow, primes_up_to, rat_int, Rational};
use num::bigint::BigInt;
use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BernoulliError {
    #[error("von Staudt-Clausen defect is defined for even k >= 2, got k={0}")]
    VscBadIndex(u32),
    #[error(
        "power-sum identity violated: Bernoulli route gave non-integer {value} \
         for k={k}, r={r}, d={d}, x={x}"
    )]
    IntegralityViolation {
        k: u32,
        r: i64,
        d: u64,
        x: i64,
        value: Rational,
    },
    #[error("{identity} identity violated at k={k}, x={x}")]
    IdentityViolation {
        identity: &'static str,
        k: u32,
        x: Rational,
    },
    #[error("derivative identity B_k' = k*B_(k-1) violated at k={k}")]
    DerivativeViolation { k: u32 },
}

// Memoized Bernoulli numbers: any number of concurrent readers, writers
// serialized by the lock.
static CACHE: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// The Bernoulli numbers b_0..b_m (second kind, b_1 = -1/2).
///
/// Computed by the recurrence sum_{j=0}^{m} C(m+1, j) * b_j = 0, which
/// pins each b_m exactly; odd indices >= 3 come out as zero.
pub fn bernoulli_numbers_up_to(m: u32) -> Vec<Rational> {
    let want = m as usize + 1;
    {
        let cache = CACHE.read().unwrap();
        if cache.len() >= want {
            return cache[..want].to_vec();
        }
    }
    let mut cache = CACHE.write().unwrap();
    while cache.len() < want {
        let i = cache.len();
        let b = if i == 0 {
            Rational::one()
        } else {
            let mut sum = Rational::zero();
            for (j, bj) in cache.iter().enumerate() {
                sum += Rational::from_integer(binomial(i as u64 + 1, j as i64)) * bj;
            }
            -sum / rat_int(i as i64 + 1)
        };
        cache.push(b);
    }
    cache[..want].to_vec()
}

/// The Bernoulli number b_m.
pub fn bernoulli_number(m: u32) -> Rational {
    bernoulli_numbers_up_to(m).pop().unwrap()
}

/// The Bernoulli polynomial B_k(x) = sum_{m=0}^{k} C(k, m) b_m x^(k-m):
/// monic of degree k, with every denominator prime bounded by k+1.
pub fn bernoulli_poly(k: u32) -> RatPoly {
    let numbers = bernoulli_numbers_up_to(k);
    let mut coeffs = vec![Rational::zero(); k as usize + 1];
    for (m, b) in numbers.iter().enumerate() {
        coeffs[k as usize - m] = Rational::from_integer(binomial(k as u64, m as i64)) * b;
    }
    RatPoly::from_coeffs(coeffs)
}

/// The power sum x^k + (x+r)^k + ... + (x+(d-1)r)^k by literal summation.
///
/// Requires k >= 1, r != 0, d >= 1.
pub fn power_sum_direct(k: u32, r: i64, d: u64, x: i64) -> BigInt {
    assert!(k >= 1, "exponent k must be at least 1");
    assert!(r != 0, "step r must be nonzero");
    assert!(d >= 1, "term count d must be at least 1");
    let x = BigInt::from(x);
    let r = BigInt::from(r);
    (0..d)
        .map(|j| bigint_pow(&(&x + &r * BigInt::from(j)), k))
        .sum()
}

/// The same power sum through (r^k / (k+1)) * (B_(k+1)(x/r + d) - B_(k+1)(x/r)).
///
/// The value is provably an integer; integrality is asserted, not assumed,
/// and a violation is reported as an error rather than silently truncated.
pub fn power_sum_bernoulli(k: u32, r: i64, d: u64, x: i64) -> Result<BigInt, BernoulliError> {
    assert!(k >= 1, "exponent k must be at least 1");
    assert!(r != 0, "step r must be nonzero");
    assert!(d >= 1, "term count d must be at least 1");
    let b = bernoulli_poly(k + 1);
    let xr = Rational::new(BigInt::from(x), BigInt::from(r));
    let shifted = &xr + Rational::from_integer(BigInt::from(d));
    let diff = b.eval(&shifted) - b.eval(&xr);
    let value =
        Rational::from_integer(bigint_pow(&BigInt::from(r), k)) * diff / rat_int(k as i64 + 1);
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(BernoulliError::IntegralityViolation { k, r, d, x, value })
    }
}

/// b_k + sum over primes p with (p-1) | k of 1/p.
///
/// The von Staudt-Clausen theorem says this is an integer for even k >= 2;
/// callers check `is_integer` on the result.
pub fn von_staudt_clausen_defect(k: u32) -> Result<Rational, BernoulliError> {
    if k < 2 || k % 2 != 0 {
        return Err(BernoulliError::VscBadIndex(k));
    }
    let mut sum = bernoulli_number(k);
    for p in primes_up_to(k as u64 + 1) {
        if (k as u64) % (p - 1) == 0 {
            sum += Rational::new(BigInt::one(), BigInt::from(p));
        }
    }
    Ok(sum)
}

/// gcd(B_k, B_k') over the rationals. Squarefreeness of the Bernoulli
/// polynomials means this comes out constant; returning the gcd itself
/// lets callers verify that instead of trusting it.
pub fn squarefree_witness(k: u32) -> RatPoly {
    assert!(k >= 1, "k must be at least 1");
    let b = bernoulli_poly(k);
    b.gcd(&b.derivative())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySweepReport {
    pub k_max: u32,
    pub points_per_k: u32,
    pub checks: u64,
}

/// Check the classical identities
/// B_k(1-x) = (-1)^k B_k(x), B_k(x+1) - B_k(x) = k x^(k-1), and
/// B_k' = k B_(k-1) for every k <= k_max, the pointwise ones at
/// `points_per_k` seeded-random rational points each.
pub fn identity_sweep(
    k_max: u32,
    points_per_k: u32,
    seed: u64,
) -> Result<IdentitySweepReport, BernoulliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0u64;
    for k in 1..=k_max {
        let bk = bernoulli_poly(k);
        let bk_prev = bernoulli_poly(k - 1);
        if bk.derivative() != bk_prev.scale(&rat_int(k as i64)) {
            return Err(BernoulliError::DerivativeViolation { k });
        }
        checks += 1;
        for _ in 0..points_per_k {
            let x = Rational::new(
                BigInt::from(rng.gen_range(-50i64..=50)),
                BigInt::from(rng.gen_range(1i64..=20)),
            );
            let at_x = bk.eval(&x);
            let mirrored = bk.eval(&(rat_int(1) - &x));
            let expected = if k % 2 == 0 { at_x.clone() } else { -at_x.clone() };
            if mirrored != expected {
                return Err(BernoulliError::IdentityViolation {
                    identity: "symmetry B_k(1-x) = (-1)^k B_k(x)",
                    k,
                    x,
                });
            }
            let stepped = bk.eval(&(&x + rat_int(1)));
            let mut power = Rational::one();
            for _ in 0..k - 1 {
                power = power * &x;
            }
            if &stepped - &at_x != power * rat_int(k as i64) {
                return Err(BernoulliError::IdentityViolation {
                    identity: "difference B_k(x+1) - B_k(x) = k*x^(k-1)",
                    k,
                    x,
                });
            }
            checks += 2;
        }
    }
    Ok(IdentitySweepReport {
        k_max,
        points_per_k,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn first_bernoulli_numbers() {
        let b = bernoulli_numbers_up_to(7);
        assert_eq!(b[0], rat_int(1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat_int(0));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[5], rat_int(0));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[7], rat_int(0));
    }

    #[test]
    fn bernoulli_polynomials_small() {
        assert_eq!(bernoulli_poly(0), RatPoly::one());
        assert_eq!(
            bernoulli_poly(1),
            RatPoly::from_coeffs(vec![rat(-1, 2), rat_int(1)])
        );
        assert_eq!(
            bernoulli_poly(2),
            RatPoly::from_coeffs(vec![rat(1, 6), rat_int(-1), rat_int(1)])
        );
    }

    #[test]
    fn bernoulli_poly_is_monic_of_degree_k() {
        for k in 0..30u32 {
            let b = bernoulli_poly(k);
            assert_eq!(b.degree(), Some(k as usize));
            assert_eq!(b.leading_coeff().unwrap(), &rat_int(1));
        }
    }

    #[test]
    fn power_sum_euler_relation() {
        // 3^3 + 4^3 + 5^3 = 216 = 6^3
        assert_eq!(power_sum_direct(3, 1, 3, 3), BigInt::from(216));
        assert_eq!(power_sum_bernoulli(3, 1, 3, 3).unwrap(), BigInt::from(216));
    }

    #[test]
    fn power_sum_single_term_and_square_pyramid() {
        assert_eq!(power_sum_direct(5, 7, 1, 3), BigInt::from(243));
        assert_eq!(power_sum_direct(2, 1, 24, 1), BigInt::from(4900));
        assert_eq!(power_sum_bernoulli(2, 1, 24, 1).unwrap(), BigInt::from(4900));
    }

    #[test]
    fn power_sum_negative_step_agrees() {
        assert_eq!(
            power_sum_bernoulli(4, -3, 5, 6).unwrap(),
            power_sum_direct(4, -3, 5, 6)
        );
    }

    #[test]
    fn vsc_defect_examples() {
        assert_eq!(von_staudt_clausen_defect(2).unwrap(), rat_int(1));
        assert_eq!(von_staudt_clausen_defect(4).unwrap(), rat_int(1));
        assert!(von_staudt_clausen_defect(12).unwrap().is_integer());
        assert!(von_staudt_clausen_defect(3).is_err());
        assert!(von_staudt_clausen_defect(0).is_err());
    }

    #[test]
    fn squarefree_witness_small() {
        for k in [2u32, 6, 12] {
            assert_eq!(squarefree_witness(k).degree(), Some(0));
        }
    }

    #[test]
    fn identity_sweep_small() {
        let report = identity_sweep(12, 5, 0x5eed).unwrap();
        assert_eq!(report.k_max, 12);
        assert!(report.checks > 0);
    }
}
