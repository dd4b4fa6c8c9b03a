//! The exclusion sieve: given inert-prime certificates for (k, r), a term
//! count d >= 2 is excluded as soon as ord_q(d) = 1 for a certified q, and
//! the fraction of survivors bounds the density of possible solutions from
//! above. Reports serialize to JSON and CSV bit-identically across runs.

use crate::arith::Rational;
use crate::modular::{inert_primes_with, InertPrimeCert, ModularError, RootCountStrategy};
use num::bigint::BigInt;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SieveError {
    #[error("sieve verdicts are defined for d >= 2, got d={0}")]
    DTooSmall(u64),
    #[error("sieve range needs X >= 2, got X={0}")]
    RangeTooSmall(u64),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Excluded { by: u64 },
    Survivor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveVerdict {
    pub d: u64,
    pub status: VerdictStatus,
}

impl Serialize for SieveVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.status {
            VerdictStatus::Survivor => {
                let mut st = serializer.serialize_struct("SieveVerdict", 2)?;
                st.serialize_field("d", &self.d)?;
                st.serialize_field("status", "survivor")?;
                st.end()
            }
            VerdictStatus::Excluded { by } => {
                let mut st = serializer.serialize_struct("SieveVerdict", 3)?;
                st.serialize_field("d", &self.d)?;
                st.serialize_field("status", "excluded")?;
                st.serialize_field("by", &by)?;
                st.end()
            }
        }
    }
}

/// ord_q(d): exponent of q in d, by repeated division.
pub fn ord_of(mut d: u64, q: u64) -> u32 {
    debug_assert!(q >= 2 && d >= 1);
    let mut v = 0;
    while d % q == 0 {
        d /= q;
        v += 1;
    }
    v
}

/// Verdict for a single d against a certificate list. The excluding prime
/// is the smallest certified q with ord_q(d) = 1, making verdicts canonical.
///
/// d is only ever divided by certificate primes; it is never factored.
pub fn exclude_d(
    k: u32,
    r: i64,
    d: u64,
    certs: &[InertPrimeCert],
) -> Result<SieveVerdict, SieveError> {
    if d < 2 {
        return Err(SieveError::DTooSmall(d));
    }
    let mut qs: Vec<u64> = certs
        .iter()
        .filter(|c| c.k == k && c.r == r)
        .map(|c| c.q)
        .collect();
    qs.sort_unstable();
    for q in qs {
        if ord_of(d, q) == 1 {
            return Ok(SieveVerdict {
                d,
                status: VerdictStatus::Excluded { by: q },
            });
        }
    }
    Ok(SieveVerdict {
        d,
        status: VerdictStatus::Survivor,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveReport {
    pub k: u32,
    pub r: i64,
    pub x_max: u64,
    pub q_max: u64,
    /// One verdict per d in 2..=x_max, ascending.
    pub verdicts: Vec<SieveVerdict>,
    pub survivor_count: u64,
    /// survivor_count / x_max as an exact fraction.
    pub density_bound: Rational,
}

impl Serialize for SieveReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SieveReport", 7)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("X", &self.x_max)?;
        st.serialize_field("q_max", &self.q_max)?;
        st.serialize_field("verdicts", &self.verdicts)?;
        st.serialize_field("survivor_count", &self.survivor_count)?;
        st.serialize_field("density_bound", &RationalJson(&self.density_bound))?;
        st.end()
    }
}

pub(crate) struct RationalJson<'a>(pub &'a Rational);

impl Serialize for RationalJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl SieveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    /// CSV rows `d,status,excluding_q` (empty last field for survivors),
    /// followed by one `#` summary line with the exact density bound.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,status,excluding_q\n");
        for v in &self.verdicts {
            match v.status {
                VerdictStatus::Survivor => {
                    out.push_str(&format!("{},survivor,\n", v.d));
                }
                VerdictStatus::Excluded { by } => {
                    out.push_str(&format!("{},excluded,{}\n", v.d, by));
                }
            }
        }
        out.push_str(&format!(
            "# survivor_count={} density_bound={}/{}\n",
            self.survivor_count,
            self.density_bound.numer(),
            self.density_bound.denom()
        ));
        out
    }

    /// Indicator of survivors over d = 1..=x_max (index i holds d = i+1);
    /// d = 1 is outside the sieve and reported as not surviving.
    pub fn survivor_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.x_max as usize];
        for v in &self.verdicts {
            if matches!(v.status, VerdictStatus::Survivor) {
                flags[v.d as usize - 1] = true;
            }
        }
        flags
    }
}

const CHUNK: u64 = 1 << 16;

// Verdict slots for one chunk of d values: None = survivor so far.
// Primes are visited in ascending order and only unmarked slots are
// written, so a slot ends up holding the smallest excluding prime.
fn mark_chunk(lo: u64, hi: u64, qs: &[u64]) -> Vec<Option<u64>> {
    let mut slots: Vec<Option<u64>> = vec![None; (hi - lo + 1) as usize];
    for &q in qs {
        let mut m = lo.div_ceil(q) * q;
        while m <= hi {
            let slot = &mut slots[(m - lo) as usize];
            if slot.is_none() && (m / q) % q != 0 {
                *slot = Some(q);
            }
            m += q;
        }
    }
    slots
}

/// Sieve every d in 2..=x_max against the inert primes up to q_max.
///
/// A q_max below k+3 yields an empty certificate set (everything survives)
/// rather than an error, so weak parameters degrade gracefully. The d-range
/// is processed in parallel chunks; the merge is positional, so the report
/// is identical regardless of thread schedule.
pub fn sieve_range(k: u32, r: i64, x_max: u64, q_max: u64) -> Result<SieveReport, SieveError> {
    sieve_range_with(k, r, x_max, q_max, &RootCountStrategy::default())
}

pub fn sieve_range_with(
    k: u32,
    r: i64,
    x_max: u64,
    q_max: u64,
    strategy: &RootCountStrategy,
) -> Result<SieveReport, SieveError> {
    if x_max < 2 {
        return Err(SieveError::RangeTooSmall(x_max));
    }
    if k < 2 || k % 2 != 0 {
        return Err(SieveError::Modular(ModularError::OddExponent(k)));
    }
    let qs: Vec<u64> = if q_max < k as u64 + 3 {
        Vec::new()
    } else {
        inert_primes_with(k, r, q_max, strategy)?
            .into_iter()
            .map(|c| c.q)
            .collect()
    };

    let chunk_count = (x_max - 1).div_ceil(CHUNK);
    let verdicts: Vec<SieveVerdict> = (0..chunk_count)
        .into_par_iter()
        .flat_map_iter(|ci| {
            let lo = 2 + ci * CHUNK;
            let hi = (lo + CHUNK - 1).min(x_max);
            mark_chunk(lo, hi, &qs)
                .into_iter()
                .enumerate()
                .map(move |(i, slot)| SieveVerdict {
                    d: lo + i as u64,
                    status: match slot {
                        Some(q) => VerdictStatus::Excluded { by: q },
                        None => VerdictStatus::Survivor,
                    },
                })
        })
        .collect();

    let survivor_count = verdicts
        .iter()
        .filter(|v| matches!(v.status, VerdictStatus::Survivor))
        .count() as u64;
    Ok(SieveReport {
        k,
        r,
        x_max,
        q_max,
        verdicts,
        survivor_count,
        density_bound: Rational::new(BigInt::from(survivor_count), BigInt::from(x_max)),
    })
}

// Survivor count only, without materializing verdicts.
fn survivor_count_only(x_max: u64, qs: &[u64]) -> u64 {
    let chunk_count = (x_max - 1).div_ceil(CHUNK);
    (0..chunk_count)
        .into_par_iter()
        .map(|ci| {
            let lo = 2 + ci * CHUNK;
            let hi = (lo + CHUNK - 1).min(x_max);
            mark_chunk(lo, hi, qs)
                .into_iter()
                .filter(|s| s.is_none())
                .count() as u64
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityPoint {
    pub x_max: u64,
    pub q_max: u64,
    pub survivor_count: u64,
    pub density_bound: Rational,
}

impl Serialize for DensityPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DensityPoint", 4)?;
        st.serialize_field("X", &self.x_max)?;
        st.serialize_field("q_max", &self.q_max)?;
        st.serialize_field("survivor_count", &self.survivor_count)?;
        st.serialize_field("density_bound", &RationalJson(&self.density_bound))?;
        st.end()
    }
}

/// Density bounds over the grid x_list x q_max_list, in order: for each X,
/// every q_max. For fixed X the bound is non-increasing in q_max, since a
/// larger q_max can only add certificates.
pub fn density_series(
    k: u32,
    r: i64,
    x_list: &[u64],
    q_max_list: &[u64],
) -> Result<Vec<DensityPoint>, SieveError> {
    density_series_with(k, r, x_list, q_max_list, &RootCountStrategy::default())
}

pub fn density_series_with(
    k: u32,
    r: i64,
    x_list: &[u64],
    q_max_list: &[u64],
    strategy: &RootCountStrategy,
) -> Result<Vec<DensityPoint>, SieveError> {
    if k < 2 || k % 2 != 0 {
        return Err(SieveError::Modular(ModularError::OddExponent(k)));
    }
    let mut points = Vec::with_capacity(x_list.len() * q_max_list.len());
    for &x_max in x_list {
        if x_max < 2 {
            return Err(SieveError::RangeTooSmall(x_max));
        }
        for &q_max in q_max_list {
            let qs: Vec<u64> = if q_max < k as u64 + 3 {
                Vec::new()
            } else {
                inert_primes_with(k, r, q_max, strategy)?
                    .into_iter()
                    .map(|c| c.q)
                    .collect()
            };
            let survivor_count = survivor_count_only(x_max, &qs);
            points.push(DensityPoint {
                x_max,
                q_max,
                survivor_count,
                density_bound: Rational::new(
                    BigInt::from(survivor_count),
                    BigInt::from(x_max),
                ),
            });
        }
    }
    Ok(points)
}

/// Restrict an indicator over d = 1..=N (index i holds d = i+1) to the d
/// with ord_q(d) = 1.
pub fn aq_slice(flags: &[bool], q: u64) -> Vec<bool> {
    flags
        .iter()
        .enumerate()
        .map(|(i, &set)| set && ord_of(i as u64 + 1, q) == 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::inert_primes;

    fn certs_k2(q_max: u64) -> Vec<InertPrimeCert> {
        inert_primes(2, 1, q_max).unwrap()
    }

    #[test]
    fn exclude_examples() {
        let certs = certs_k2(30);
        let v = exclude_d(2, 1, 5, &certs).unwrap();
        assert_eq!(v.status, VerdictStatus::Excluded { by: 5 });
        let v = exclude_d(2, 1, 25, &certs_k2(5)).unwrap();
        assert_eq!(v.status, VerdictStatus::Survivor);
        let v = exclude_d(2, 1, 24, &certs).unwrap();
        assert_eq!(v.status, VerdictStatus::Survivor);
        assert_eq!(exclude_d(2, 1, 1, &certs), Err(SieveError::DTooSmall(1)));
    }

    #[test]
    fn smallest_q_wins() {
        // 35 = 5 * 7 with both 5 and 7 certified: the verdict names 5.
        let certs = certs_k2(30);
        let v = exclude_d(2, 1, 35, &certs).unwrap();
        assert_eq!(v.status, VerdictStatus::Excluded { by: 5 });
    }

    #[test]
    fn sieve_range_k2_small() {
        let report = sieve_range(2, 1, 100, 100).unwrap();
        assert_eq!(report.verdicts.len(), 99);
        let status_of = |d: u64| report.verdicts[(d - 2) as usize].status;
        assert_eq!(status_of(5), VerdictStatus::Excluded { by: 5 });
        assert_eq!(status_of(7), VerdictStatus::Excluded { by: 7 });
        assert_eq!(status_of(10), VerdictStatus::Excluded { by: 5 });
        assert_eq!(status_of(14), VerdictStatus::Excluded { by: 7 });
        assert_eq!(status_of(24), VerdictStatus::Survivor);
        assert_eq!(status_of(25), VerdictStatus::Survivor);
        assert!(report.survivor_count < 99);
    }

    #[test]
    fn sieve_range_without_certificates() {
        // q_max below k+3 leaves the certificate set empty: all survive.
        let report = sieve_range(2, 1, 50, 4).unwrap();
        assert_eq!(report.survivor_count, 49);
        assert!(report
            .verdicts
            .iter()
            .all(|v| v.status == VerdictStatus::Survivor));
    }

    #[test]
    fn sieve_agrees_with_exclude_d() {
        let certs = certs_k2(200);
        let report = sieve_range(2, 1, 500, 200).unwrap();
        for v in &report.verdicts {
            assert_eq!(*v, exclude_d(2, 1, v.d, &certs).unwrap());
        }
    }

    #[test]
    fn monotone_in_certificates() {
        let small = certs_k2(30);
        let large = certs_k2(300);
        for d in 2..=400u64 {
            let before = exclude_d(2, 1, d, &small).unwrap().status;
            let after = exclude_d(2, 1, d, &large).unwrap().status;
            if matches!(before, VerdictStatus::Excluded { .. }) {
                assert!(matches!(after, VerdictStatus::Excluded { .. }), "d={}", d);
            }
        }
    }

    #[test]
    fn inert_slice_of_survivors_is_empty() {
        let report = sieve_range(2, 1, 1000, 100).unwrap();
        let flags = report.survivor_flags();
        for cert in certs_k2(100) {
            let slice = aq_slice(&flags, cert.q);
            assert!(slice.iter().all(|&b| !b), "q={}", cert.q);
        }
    }

    #[test]
    fn aq_slice_examples() {
        let all = vec![true; 30];
        let slice = aq_slice(&all, 5);
        let kept: Vec<u64> = slice
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64 + 1)
            .collect();
        assert_eq!(kept, vec![5, 10, 15, 20, 30]);
        assert!(aq_slice(&[], 5).is_empty());
    }

    #[test]
    fn density_series_monotone_in_qmax() {
        let points = density_series(2, 1, &[100_000], &[10, 100, 1000]).unwrap();
        assert_eq!(points.len(), 3);
        assert!(points[0].density_bound >= points[1].density_bound);
        assert!(points[1].density_bound >= points[2].density_bound);
    }

    #[test]
    fn density_series_smallest_instance() {
        let points = density_series(2, 1, &[2], &[5]).unwrap();
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].x_max, 2);
    }

    #[test]
    fn deterministic_across_thread_schedules() {
        let narrow = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let wide = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap();
        let a = narrow.install(|| sieve_range(2, 1, 200_000, 500).unwrap());
        let b = wide.install(|| sieve_range(2, 1, 200_000, 500).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn json_shape_is_stable() {
        let report = sieve_range(2, 1, 5, 5).unwrap();
        assert_eq!(
            report.to_json(),
            "{\"k\":2,\"r\":1,\"X\":5,\"q_max\":5,\"verdicts\":[\
             {\"d\":2,\"status\":\"survivor\"},\
             {\"d\":3,\"status\":\"survivor\"},\
             {\"d\":4,\"status\":\"survivor\"},\
             {\"d\":5,\"status\":\"excluded\",\"by\":5}],\
             \"survivor_count\":3,\
             \"density_bound\":{\"num\":\"3\",\"den\":\"5\"}}"
        );
    }
}
