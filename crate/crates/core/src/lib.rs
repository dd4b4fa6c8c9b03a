//! Exact-arithmetic toolkit for the question of when a sum of consecutive
//! like powers x^k + (x+r)^k + ... + (x+(d-1)r)^k can be a perfect power y^n.
//!
//! Everything is exact: arbitrary-precision integers and rationals, no
//! floating point anywhere. The pieces:
//!
//! - [`arith`]: rationals, primality, binomials (plain and via base-p
//!   digits), integer roots.
//! - [`bernoulli`]: Bernoulli numbers and polynomials, their classical
//!   identities, and the closed form of the power sum.
//! - [`padic`]: p-adic valuations, Newton polygons, the two-segment
//!   2-adic shape for even k, and certificates that even Bernoulli
//!   polynomials have no 2-adic roots.
//! - [`modular`]: Bernoulli polynomials over F_q, root counting by scan or
//!   by gcd with x^q - x, and detection of inert primes (q >= k+3, q not
//!   dividing r, no root mod q).
//! - [`sieve`]: exclusion of term counts d with ord_q(d) = 1 for an inert
//!   q, with exact survivor-density bookkeeping.
//! - [`search`]: exhaustive solution search over finite windows and the
//!   sieve/search soundness cross-check.
//! - [`groups`]: permutation groups, surjections onto cyclic groups, and
//!   the free-action lemma verifier with a catalog of all groups of order
//!   at most 16.

pub mod arith;
pub mod bernoulli;
pub mod groups;
pub mod modular;
pub mod padic;
pub mod search;
pub mod sieve;

pub use arith::Rational;
pub use bernoulli::RatPoly;
