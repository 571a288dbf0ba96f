//! The iterated squaring family: f_1 = x^2 and f_{n+1} = (f_n + 1)^2, its
//! exact fixed-point densities a_n = alpha(G_n) for the associated wreath
//! tower, branch points, and the threshold past which a prime sees the
//! generic tower behavior.
//!
//! The density recursion a_{n+1} = a_n - a_n^2 / 2 is carried in dyadic form
//! k_n / 2^(e_n) with k_n odd, because e_n doubles each level and a plain
//! reduced rational would spend its time discovering that nothing cancels.

use super::GroupError;
use crate::numcore::{mul_big, Rat};
use crate::polystats::IntPoly;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

/// Largest level for which the family polynomial itself is materialized;
/// deg f_n = 2^n and the coefficients square each level, so 12 keeps the
/// polynomial under a few megabytes.
pub const FAMILY_POLY_CAP: u32 = 12;

/// Rational with a power-of-two denominator: `num / 2^exp` with `num` odd,
/// so the representation is canonical without any gcd work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicRat {
    pub num: BigUint,
    pub exp: u64,
}

impl DyadicRat {
    /// Materialize as an ordinary rational. The denominator holds `exp`
    /// bits, so this is for moderate exponents.
    pub fn to_rat(&self) -> Rat {
        Rat::new_raw(BigInt::from(self.num.clone()), BigInt::one() << self.exp)
    }

    /// Exact comparison `self <= bn / bd` without materializing `2^exp`:
    /// compare bit lengths of `num * bd` and `bn * 2^exp`, then settle ties
    /// by shifting.
    pub fn le_ratio(&self, bn: u64, bd: u64) -> bool {
        assert!(bn > 0 && bd > 0);
        let lhs = &self.num * bd;
        let lhs_bits = lhs.bits();
        let rhs_bits = u64::from(64 - bn.leading_zeros()) + self.exp;
        if lhs_bits != rhs_bits {
            return lhs_bits < rhs_bits;
        }
        let quotient = (&lhs >> self.exp).to_u64().expect("tie quotient fits u64");
        quotient < bn || (quotient == bn && lhs.trailing_zeros().unwrap_or(0) >= self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.num.bits();
        let shift = bits.saturating_sub(54);
        let mantissa = (&self.num >> shift).to_u64().expect("54-bit mantissa") as f64;
        let exponent = shift as i64 - self.exp as i64;
        mantissa * 2f64.powi(exponent as i32)
    }
}

/// Exact densities a_1, .., a_n of the wreath tower, from a_1 = 1/2 and
/// a_{n+1} = a_n - a_n^2 / 2. In dyadic form the step is
/// e' = 2e + 1, k' = k * (2^(e+1) - k), which keeps k odd.
pub fn alpha_recursion(n: u32) -> Result<Vec<DyadicRat>, GroupError> {
    if n == 0 {
        return Err(GroupError::ZeroIndex);
    }
    let mut out = Vec::with_capacity(n as usize);
    let mut k = BigUint::one();
    let mut e: u64 = 1;
    for level in 1..=n {
        out.push(DyadicRat { num: k.clone(), exp: e });
        if level < n {
            let complement = (BigUint::one() << (e + 1)) - &k;
            k = mul_big(&k, &complement);
            e = 2 * e + 1;
        }
    }
    Ok(out)
}

/// One level of the iterated squaring family.
#[derive(Debug, Clone)]
pub struct FnFamily {
    pub n: u32,
    /// The polynomial f_n itself, absent past [`FAMILY_POLY_CAP`].
    pub poly: Option<IntPoly>,
    /// Exact fixed-point density a_n of the level-n tower.
    pub alpha: Rat,
    /// Branch points f_1(0), .., f_n(0).
    pub branch_points: Vec<BigInt>,
    /// Primes above this bound see the generic level-n behavior:
    /// 2 * f_{n-1}(0) + 2 for n > 1, and 2 at the base level.
    pub prime_threshold: BigInt,
}

pub fn fn_family(n: u32) -> Result<FnFamily, GroupError> {
    if n == 0 {
        return Err(GroupError::ZeroIndex);
    }
    let mut branch_points = Vec::with_capacity(n as usize);
    let mut b = BigUint::zero();
    for level in 1..=n {
        branch_points.push(BigInt::from(b.clone()));
        if level < n {
            let shifted = &b + 1u32;
            b = mul_big(&shifted, &shifted);
        }
    }
    let prime_threshold = if n == 1 {
        BigInt::from(2)
    } else {
        2 * &branch_points[n as usize - 2] + 2
    };
    let poly = (n <= FAMILY_POLY_CAP).then(|| {
        let mut f = IntPoly::x_pow(2);
        for _ in 1..n {
            let shifted = &f + &IntPoly::one();
            f = &shifted * &shifted;
        }
        f
    });
    let alpha = alpha_recursion(n)?.pop().expect("n >= 1").to_rat();
    Ok(FnFamily { n, poly, alpha, branch_points, prime_threshold })
}

/// Proportion of permutations in S_d with a fixed point:
/// sum over k of (-1)^(k-1) / k!, exactly.
pub fn symmetric_alpha(d: u32) -> Rat {
    assert!(d >= 1, "degree must be at least 1");
    let mut factorial = BigInt::one();
    let mut sum = Rat::zero();
    for k in 1..=d {
        factorial *= k;
        let term = Rat::new(BigInt::one(), factorial.clone());
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}
