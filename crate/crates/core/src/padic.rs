//! p-adic valuations, Newton polygons of rational polynomials, the
//! two-segment shape of the 2-adic polygon of even Bernoulli polynomials,
//! and certificates that even Bernoulli polynomials have no 2-adic
//! rational roots.

use crate::arith::{rational_mod, Rational};
use crate::bernoulli::{bernoulli_poly, RatPoly};
use num::bigint::BigInt;
use num::traits::{Signed, Zero};
use num::Integer;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("Newton polygon of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("two-adic shape check needs even k >= 2, got k={0}")]
    BadExponent(u32),
    #[error(
        "Newton polygon shape check failed for k={k}: vertex {index} is {found:?}, \
         expected {expected:?}"
    )]
    PolygonMismatch {
        k: u32,
        index: usize,
        expected: Option<(usize, i64)>,
        found: Option<(usize, i64)>,
    },
    #[error("coefficient of x^{index} in 2*B_k has negative 2-adic valuation for k={k}")]
    NonIntegralCoefficient { k: u32, index: usize },
    #[error("two-adic root exclusion failed for k={k}: slope {slope} admits a nonzero integral root valuation")]
    IntegralSlope { k: u32, slope: Rational },
    #[error("two-adic root exclusion failed for k={k}: residue of 2*B_k at {at} is {value}, expected 1")]
    ResidueCheckFailed { k: u32, at: u64, value: u64 },
}

/// p-adic valuation: finite for nonzero rationals, +infinity for zero.
/// The `Infinite` marker is explicit; no sentinel integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

fn bigint_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// v_p(x) = v_p(numerator) - v_p(denominator).
pub fn valuation(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(bigint_valuation(x.numer(), p) - bigint_valuation(x.denom(), p))
}

/// One segment of a Newton polygon. A segment of slope m accounts for the
/// roots of valuation -m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: (usize, i64),
    pub end: (usize, i64),
    pub slope: Rational,
}

/// Lower convex hull of the points (i, v_p(a_i)) over the nonzero
/// coefficients a_i of a polynomial. Vertices have strictly increasing
/// x-coordinates and strictly increasing slopes between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(usize, i64)>,
}

impl NewtonPolygon {
    pub fn vertices(&self) -> &[(usize, i64)] {
        &self.vertices
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| Segment {
                start: w[0],
                end: w[1],
                slope: Rational::new(
                    BigInt::from(w[1].1 - w[0].1),
                    BigInt::from((w[1].0 - w[0].0) as i64),
                ),
            })
            .collect()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.segments().into_iter().map(|s| s.slope).collect()
    }
}

/// Newton polygon of `f` at the prime `p`. Zero coefficients contribute no
/// point (their valuation is +infinity), so the zero polynomial is an error.
pub fn newton_polygon(f: &RatPoly, p: u64) -> Result<NewtonPolygon, PadicError> {
    let points: Vec<(usize, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match valuation(c, p) {
            Valuation::Finite(v) => (i, v),
            Valuation::Infinite => unreachable!("nonzero coefficient"),
        })
        .collect();
    if points.is_empty() {
        return Err(PadicError::ZeroPolynomial);
    }
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for pt in points {
        // Pop while the middle vertex is not strictly below the chord, i.e.
        // slope(a, b) >= slope(b, pt).
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let lhs = (b.1 - a.1) as i128 * (pt.0 - b.0) as i128;
            let rhs = (pt.1 - b.1) as i128 * (b.0 - a.0) as i128;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    Ok(NewtonPolygon { vertices: hull })
}

/// Expected 2-adic polygon of B_k for even k = 2^s * t with t odd:
/// a horizontal segment from (0, -1) to (k - 2^s, -1), then a segment of
/// slope 1/2^s up to (k, 0). When k = 2^s the horizontal segment has
/// length zero and the middle vertex is omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoAdicShape {
    pub k: u32,
    pub s: u32,
    pub vertices: Vec<(usize, i64)>,
}

impl TwoAdicShape {
    pub fn new(k: u32) -> Result<Self, PadicError> {
        if k < 2 || k % 2 != 0 {
            return Err(PadicError::BadExponent(k));
        }
        let s = k.trailing_zeros();
        let two_s = 1usize << s;
        let k_us = k as usize;
        let vertices = if k_us == two_s {
            vec![(0, -1), (k_us, 0)]
        } else {
            vec![(0, -1), (k_us - two_s, -1), (k_us, 0)]
        };
        Ok(TwoAdicShape { k, s, vertices })
    }

    /// True when k is a power of two and segment (i) degenerates to a point.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() == 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpLemmaReport {
    pub k: u32,
    pub s: u32,
    pub degenerate: bool,
    pub polygon: NewtonPolygon,
}

/// Compute the 2-adic Newton polygon of B_k and check it against the
/// expected two-segment shape, vertex by vertex.
pub fn verify_np_lemma(k: u32) -> Result<NpLemmaReport, PadicError> {
    let shape = TwoAdicShape::new(k)?;
    let polygon = newton_polygon(&bernoulli_poly(k), 2)?;
    let found = polygon.vertices();
    let n = shape.vertices.len().max(found.len());
    for i in 0..n {
        let expected = shape.vertices.get(i).copied();
        let actual = found.get(i).copied();
        if expected != actual {
            return Err(PadicError::PolygonMismatch {
                k,
                index: i,
                expected,
                found: actual,
            });
        }
    }
    Ok(NpLemmaReport {
        k,
        s: shape.s,
        degenerate: shape.is_degenerate(),
        polygon,
    })
}

/// Certificate that B_k has no root in the 2-adic rationals, for even k.
///
/// Two facts are verified computationally: every polygon slope other than
/// zero is non-integral as a root valuation (so any 2-adic root would be a
/// 2-adic integer), and the reduction of 2*B_k mod 2 evaluates to 1 at both
/// residues, ruling the integral case out as well.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q2RootCertificate {
    pub k: u32,
    pub s: u32,
    pub slopes: Vec<Rational>,
    pub residue_at_zero: u64,
    pub residue_at_one: u64,
}

pub fn no_q2_root_certificate(k: u32) -> Result<Q2RootCertificate, PadicError> {
    let shape = TwoAdicShape::new(k)?;
    let bk = bernoulli_poly(k);
    let polygon = newton_polygon(&bk, 2)?;
    let slopes = polygon.slopes();
    for slope in &slopes {
        // Candidate root valuation is -slope; a root in the 2-adics must
        // have an integer valuation, and only valuation 0 survives to the
        // residue check below.
        if slope.is_integer() && !slope.is_zero() {
            return Err(PadicError::IntegralSlope {
                k,
                slope: slope.clone(),
            });
        }
    }
    // Reduce f = 2*B_k mod 2. Well-definedness needs every coefficient of f
    // to have nonnegative 2-adic valuation, which the polygon bound y >= -1
    // guarantees; a failed reduction is reported, not assumed away.
    let two = crate::arith::rat_int(2);
    let mut residues = Vec::with_capacity(bk.coeffs().len());
    for (i, c) in bk.coeffs().iter().enumerate() {
        let doubled = c * &two;
        match rational_mod(&doubled, 2) {
            Some(r) => residues.push(r),
            None => return Err(PadicError::NonIntegralCoefficient { k, index: i }),
        }
    }
    let at_zero = residues[0];
    let at_one = residues.iter().sum::<u64>() % 2;
    if at_zero != 1 {
        return Err(PadicError::ResidueCheckFailed {
            k,
            at: 0,
            value: at_zero,
        });
    }
    if at_one != 1 {
        return Err(PadicError::ResidueCheckFailed {
            k,
            at: 1,
            value: at_one,
        });
    }
    Ok(Q2RootCertificate {
        k,
        s: shape.s,
        slopes,
        residue_at_zero: at_zero,
        residue_at_one: at_one,
    })
}
