//! Integer and exact-rational groundwork: primes, divisor counts, totients,
//! reduced fractions, and big-integer products sized far beyond what the
//! pure-Rust multiplication in `num-bigint` handles comfortably.

pub mod primes;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use primes::{sieve_primes, PrimeTable};

/// Exact rational with reduced numerator/denominator and positive denominator,
/// maintained by construction.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumError {
    #[error("no primes at or below {limit}")]
    EmptyRange { limit: u64 },
    #[error("{op} is undefined for n = 0")]
    ZeroArgument { op: &'static str },
}

/// Rational n/d from machine integers; panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Rational n/d from unsigned machine integers; panics on d = 0.
pub fn rat_u(n: u64, d: u64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Nearest-enough double for a rational of any size. The built-in conversion
/// divides numerator and denominator as doubles and overflows to NaN once
/// either exceeds f64 range, so the quotient is rescaled by a power of two
/// first and carries roughly 96 significant bits into the final division.
pub fn rat_to_f64(r: &Rat) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

/// Same as [`rat_to_f64`] for a fraction held as two integers; the fraction
/// need not be reduced.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let sign = if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
        -1.0
    } else {
        1.0
    };
    let num = num.magnitude();
    let den = den.magnitude();
    let shift = 96 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    match q.to_u128() {
        Some(q) => sign * (q as f64) * (-shift as f64).exp2(),
        // Quotient outside u128 happens only when the true value overflows
        // f64 anyway.
        None => sign * f64::INFINITY,
    }
}

/// gcd with the convention gcd(0, 0) = 0.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Number of positive divisors. Errors on n = 0.
pub fn tau(n: u64) -> Result<u64, NumError> {
    let mut count = 1u64;
    for (_, e) in factorize(n, "tau")? {
        count *= e as u64 + 1;
    }
    Ok(count)
}

/// Euler totient. Errors on n = 0.
pub fn phi(n: u64) -> Result<u64, NumError> {
    let mut out = n;
    for (p, _) in factorize(n, "phi")? {
        out = out / p * (p - 1);
    }
    Ok(out)
}

pub fn is_squarefree(n: u64) -> Result<bool, NumError> {
    Ok(factorize(n, "is_squarefree")?.iter().all(|&(_, e)| e == 1))
}

fn factorize(mut n: u64, op: &'static str) -> Result<Vec<(u64, u32)>, NumError> {
    if n == 0 {
        return Err(NumError::ZeroArgument { op });
    }
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Bit size above which products are routed through GMP. Below it the
/// conversion overhead costs more than it saves.
const GMP_MUL_BITS: u64 = 1 << 16;

/// Product of two non-negative big integers.
///
/// `num-bigint` tops out at Toom-3, which is hopeless for the multi-megabit
/// operands produced by the doubling recursions in this crate (the operands
/// reach 2^30 bits). Large products are therefore handed to GMP and converted
/// back; small ones stay in `num-bigint`. Both paths compute the same value
/// and the crossover is a pure speed threshold.
pub fn mul_big(a: &BigUint, b: &BigUint) -> BigUint {
    if a.bits().min(b.bits()) < GMP_MUL_BITS {
        return a * b;
    }
    let ga = rug::Integer::from_digits(&a.to_u64_digits(), rug::integer::Order::Lsf);
    let gb = rug::Integer::from_digits(&b.to_u64_digits(), rug::integer::Order::Lsf);
    let prod = ga * gb;
    BigUint::from_slice(&prod.to_digits::<u32>(rug::integer::Order::Lsf))
}

/// Floor of the d-th root of n, exact.
pub fn nth_root_floor(n: u64, d: u32) -> u64 {
    BigUint::from(n).nth_root(d).to_u64().unwrap()
}

/// True if `num/den <= bound` holds exactly, for a non-negative fraction and
/// a non-negative rational bound given as `(bn, bd)`.
pub fn fraction_le(num: &BigUint, den: &BigUint, bn: u64, bd: u64) -> bool {
    num * BigUint::from(bd) <= den * BigUint::from(bn)
}

pub fn big_is_one(x: &BigInt) -> bool {
    x.is_one()
}

pub fn big_abs(x: &BigInt) -> BigUint {
    x.abs().to_biguint().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn tau_and_phi_match_enumeration() {
        for n in 1..=2000u64 {
            let divisors = (1..=n).filter(|d| n % d == 0).count() as u64;
            let coprime = (1..=n).filter(|k| gcd_u64(*k, n) == 1).count() as u64;
            assert_eq!(tau(n).unwrap(), divisors, "tau({n})");
            assert_eq!(phi(n).unwrap(), coprime, "phi({n})");
        }
        assert!(tau(0).is_err());
        assert!(phi(0).is_err());
    }

    #[test]
    fn gcd_conventions() {
        assert_eq!(gcd_u64(0, 0), 0);
        assert_eq!(gcd_u64(0, 12), 12);
        assert_eq!(gcd_u64(12, 0), 12);
        assert_eq!(gcd_u64(12, 18), 6);
    }

    #[test]
    fn squarefree_detection() {
        let free: Vec<u64> = (1..=30).filter(|&n| is_squarefree(n).unwrap()).collect();
        assert_eq!(
            free,
            vec![1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30]
        );
    }

    #[test]
    fn rationals_reduce() {
        assert_eq!(rat(6, 8), rat(3, 4));
        assert_eq!(rat(-6, 8), rat(3, -4));
        assert_eq!(rat_u(13, 7).to_string(), "13/7");
    }

    #[test]
    fn rational_addition_is_exact() {
        // (a/b + c/d) - c/d recovers a/b across a spread of small fractions.
        for a in -9i64..=9 {
            for b in 1i64..=9 {
                for c in -9i64..=9 {
                    for d in 1i64..=9 {
                        let x = rat(a, b);
                        let y = rat(c, d);
                        assert_eq!(&(&x + &y) - &y, x);
                    }
                }
            }
        }
    }

    #[test]
    fn rat_to_f64_handles_ordinary_and_huge_values() {
        assert_eq!(rat_to_f64(&rat(1, 2)), 0.5);
        assert_eq!(rat_to_f64(&rat(-3, 8)), -0.375);
        assert!((rat_to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        // Numerator and denominator both far beyond f64 range.
        let n = BigInt::from(10u32).pow(400) * 3;
        let d = BigInt::from(10u32).pow(400) * 8;
        let r = Rat::new(n, d);
        assert_eq!(rat_to_f64(&r), 0.375);
        // Vanishingly small and huge magnitudes saturate cleanly.
        let tiny = Rat::new(BigInt::one(), BigInt::from(10u32).pow(400));
        assert_eq!(rat_to_f64(&tiny), 0.0);
        let huge = Rat::new(BigInt::from(10u32).pow(400), BigInt::one());
        assert_eq!(rat_to_f64(&huge), f64::INFINITY);
    }

    #[test]
    fn unreduced_ratio_conversion() {
        let num = BigInt::from_u64(26).unwrap();
        let den = BigInt::from_u64(8).unwrap();
        assert_eq!(ratio_to_f64(&num, &den), 3.25);
        assert_eq!(ratio_to_f64(&(-num), &den), -3.25);
    }

    #[test]
    fn mul_big_agrees_with_num_bigint() {
        use rand::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for bits in [64u64, 1000, 65_535, 65_537, 200_000, 1 << 18] {
            let words = bits.div_ceil(64) as usize;
            let mut aw = vec![0u64; words];
            let mut bw = vec![0u64; words];
            aw.iter_mut().for_each(|w| *w = rng.next_u64());
            bw.iter_mut().for_each(|w| *w = rng.next_u64());
            let a = BigUint::new(aw.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect());
            let b = BigUint::new(bw.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect());
            assert_eq!(mul_big(&a, &b), &a * &b, "bits = {bits}");
        }
        assert_eq!(mul_big(&BigUint::zero(), &BigUint::from(5u32)), BigUint::zero());
    }

    #[test]
    fn integer_roots() {
        assert_eq!(nth_root_floor(1_000_000, 2), 1000);
        assert_eq!(nth_root_floor(999_999, 2), 999);
        assert_eq!(nth_root_floor(1_000_000, 3), 100);
        assert_eq!(nth_root_floor(63, 3), 3);
    }

    #[test]
    fn fraction_comparison_is_exact() {
        // 39/128 <= 2/3 but not <= 3/10.
        let n = BigUint::from(39u32);
        let d = BigUint::from(128u32);
        assert!(fraction_le(&n, &d, 2, 3));
        assert!(!fraction_le(&n, &d, 3, 10));
        assert!(fraction_le(&n, &d, 39, 128));
    }
}
