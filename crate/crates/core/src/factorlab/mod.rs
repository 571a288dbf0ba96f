//! Exact factorization of univariate integer polynomials, and the derived
//! count s(f) of irreducible factors of f(x) - f(y) over the rationals.
//!
//! The factoring engine is classical: content extraction, Yun squarefree
//! decomposition, Berlekamp factorization modulo a small auxiliary prime,
//! quadratic Hensel lifting past a Mignotte-style coefficient bound, and
//! subset recombination with trial division. Budgets turn oversized inputs
//! into errors; the engine never returns an unverified factorization.
//!
//! s(f) is computed by specialization: for integer points c where
//! f(x) - f(c) is squarefree, its factor count can only overcount s(f)
//! (squarefree specialization never merges distinct factors), so the
//! minimum over several points is taken, and independent routes (prime
//! averages, group rank) are cross-checked against it.

mod hensel;
mod modp;

use crate::averages::RatSum;
use crate::numcore::{rat, tau, Rat};
use crate::permgroup::{group_rank, GroupError, PermGroup};
use crate::polystats::{stats_sweep, IntPoly, StatsError};
use hensel::{lift_factorization, symmetric, ZCtx};
use modp::{gcd_zp, PolyZp};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Engine budget: largest degree factor_z accepts.
pub const MAX_FACTOR_DEGREE: usize = 64;
/// Engine budget: largest coefficient size factor_z accepts, in bits.
pub const MAX_COEFF_BITS: u64 = 512;
/// Ceiling on candidate subsets examined during recombination.
const RECOMBINATION_CAP: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum FactorError {
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("a polynomial of positive degree is required")]
    ConstantInput,
    #[error("degree {degree} exceeds the engine budget of {max}")]
    DegreeBudget { degree: usize, max: usize },
    #[error("coefficients need {bits} bits, over the engine budget of {max}")]
    CoefficientBudget { bits: u64, max: u64 },
    #[error("recombination abandoned after {tried} candidate subsets")]
    RecombinationBudget { tried: u64 },
    #[error("could not find enough {what} within the search bound")]
    SearchExhausted { what: String },
    #[error("no non-degenerate primes up to {qmax}")]
    NoUsablePrimes { qmax: u64 },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Complete factorization over the integers: the input equals
/// content times the product of the factors with their multiplicities.
/// Factors are primitive with positive leading coefficient, sorted by
/// degree and then by coefficient sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorList {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl FactorList {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (factor, mult) in &self.factors {
            for _ in 0..*mult {
                acc = &acc * factor;
            }
        }
        acc
    }
}

/// How an s(f) value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SMethod {
    Specialization,
    Curated,
    CrossCheck,
}

/// The number of irreducible factors of f(x) - f(y) over the rationals,
/// together with the specialization points that witnessed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SCount {
    pub value: u64,
    pub method: SMethod,
    pub witnesses: Vec<i64>,
}

// ---------------------------------------------------------------------------
// Integer polynomial gcd and squarefree decomposition.
// ---------------------------------------------------------------------------

/// Pseudo-remainder of a by b: the remainder of lc(b)^k * a under division
/// by b, staying in integer coefficients throughout.
fn prem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.degree().expect("nonzero divisor");
    let lb = IntPoly::constant(b.leading_coeff().expect("nonzero divisor").clone());
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lead = r.leading_coeff().expect("nonzero remainder").clone();
        let mono = &IntPoly::constant(lead) * &IntPoly::x_pow(dr - db);
        r = &(&r * &lb) - &(&mono * b);
    }
    r
}

/// Primitive gcd with positive leading coefficient, via a primitive
/// pseudo-remainder sequence. gcd with zero is the primitive part of the
/// other argument.
pub fn gcd_z(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut a = a.primitive().1;
    let mut b = b.primitive().1;
    while !b.is_zero() {
        if b.degree() == Some(0) {
            return IntPoly::one();
        }
        let r = prem(&a, &b);
        a = b;
        b = r.primitive().1;
    }
    a
}

/// Yun decomposition of the primitive part into pairwise-coprime squarefree
/// parts with their multiplicities; the product of part^multiplicity
/// reconstructs the input up to content.
pub fn squarefree_decompose(f: &IntPoly) -> Result<Vec<(IntPoly, u32)>, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let prim = f.primitive().1;
    let Some(degree) = prim.degree().filter(|&d| d >= 1) else {
        return Ok(Vec::new());
    };
    let df = prim.derivative();
    let g = gcd_z(&prim, &df);
    if g.degree() == Some(0) {
        return Ok(vec![(prim, 1)]);
    }
    let mut w = prim.exact_div(&g).expect("gcd divides f");
    let mut y = df.exact_div(&g).expect("gcd divides f'");
    let mut out = Vec::new();
    let mut mult = 1u32;
    loop {
        let z = &y - &w.derivative();
        if z.is_zero() {
            out.push((w, mult));
            break;
        }
        let h = gcd_z(&w, &z);
        if h.degree().is_some_and(|d| d >= 1) {
            w = w.exact_div(&h).expect("part divides");
            y = z.exact_div(&h).expect("part divides");
            out.push((h, mult));
        } else {
            y = z;
        }
        mult += 1;
        assert!(
            (mult as usize) <= degree + 1,
            "squarefree decomposition must terminate"
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Factorization over Z.
// ---------------------------------------------------------------------------

fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest odd prime keeping the degree and squarefreeness of the image.
fn choose_prime(g: &IntPoly) -> Result<(u64, PolyZp), FactorError> {
    let mut p = 3u64;
    while p < 1_000_000 {
        if is_small_prime(p) {
            let coeffs = g.reduce_mod_p(p);
            if coeffs.len() == g.coeffs().len() {
                let image = PolyZp::new(p, coeffs).make_monic();
                if gcd_zp(&image, &image.derivative()).degree() == Some(0) {
                    return Ok((p, image));
                }
            }
        }
        p += 2;
    }
    Err(FactorError::SearchExhausted { what: "usable factorization primes".into() })
}

/// Twice the coefficient bound 2^d * ||g||_2 * |lc(g)| that any candidate
/// factor product can reach; the lifting modulus must exceed this.
fn coefficient_limit(g: &IntPoly) -> BigInt {
    let d = g.degree().expect("nonconstant input");
    let norm_sq = g.l2_norm_sq();
    let mut root = norm_sq.sqrt();
    if &root * &root < norm_sq {
        root += 1;
    }
    (BigInt::one() << d) * root * g.leading_coeff().expect("nonconstant input").abs() * 2
}

/// Lexicographic k-subsets of {0, .., n-1}.
struct Combos {
    n: usize,
    k: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combos {
    fn new(n: usize, k: usize) -> Self {
        Combos { n, k, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combos {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.idx.clone();
        let mut i = self.k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] != i + self.n - self.k {
                self.idx[i] += 1;
                for j in i + 1..self.k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(current)
    }
}

/// Match lifted modular factors to true integer factors: try subsets in
/// ascending cardinality, forming the candidate lc(g) * product scaled back
/// to symmetric representatives, and split off every candidate that divides.
/// Whatever remains after all subsets up to half the list is irreducible.
fn recombine(
    g: &IntPoly,
    leaves: &[Vec<BigInt>],
    modulus: &BigInt,
) -> Result<Vec<IntPoly>, FactorError> {
    let ctx = ZCtx { m: modulus.clone() };
    let mut remaining: Vec<usize> = (0..leaves.len()).collect();
    let mut out = Vec::new();
    let mut cur = g.clone();
    let mut tried = 0u64;
    let mut size = 1;
    'sizes: while 2 * size <= remaining.len() {
        let mut combos = Combos::new(remaining.len(), size);
        while let Some(combo) = combos.next() {
            tried += 1;
            if tried > RECOMBINATION_CAP {
                return Err(FactorError::RecombinationBudget { tried });
            }
            let subset: Vec<usize> = combo.iter().map(|&i| remaining[i]).collect();
            let lc = cur.leading_coeff().expect("nonzero current factor");
            let mut prod = vec![lc.mod_floor(modulus)];
            for &i in &subset {
                prod = ctx.mul(&prod, &leaves[i]);
            }
            let lifted: Vec<BigInt> = prod.iter().map(|c| symmetric(c, modulus)).collect();
            let candidate = IntPoly::from_coeffs(lifted).primitive().1;
            if let Some(quotient) = cur.exact_div(&candidate) {
                out.push(candidate);
                cur = quotient;
                remaining.retain(|i| !subset.contains(i));
                continue 'sizes;
            }
        }
        size += 1;
    }
    assert!(cur.degree().is_some_and(|d| d >= 1), "a final factor must remain");
    out.push(cur);
    Ok(out)
}

/// Factor a primitive squarefree polynomial with positive leading
/// coefficient into irreducibles over Z.
fn factor_squarefree(g: &IntPoly) -> Result<Vec<IntPoly>, FactorError> {
    if g.degree() == Some(1) {
        return Ok(vec![g.clone()]);
    }
    let (p, image) = choose_prime(g)?;
    let parts = modp::berlekamp(&image);
    if parts.len() == 1 {
        return Ok(vec![g.clone()]);
    }
    let limit = coefficient_limit(g);
    let g_mod_p = PolyZp::new(p, g.reduce_mod_p(p));
    let (leaves, modulus) = lift_factorization(g.coeffs(), &g_mod_p, &parts, p, &limit);
    recombine(g, &leaves, &modulus)
}

/// Complete irreducible factorization over Z.
pub fn factor_z(f: &IntPoly) -> Result<FactorList, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let degree = f.degree().unwrap();
    if degree > MAX_FACTOR_DEGREE {
        return Err(FactorError::DegreeBudget { degree, max: MAX_FACTOR_DEGREE });
    }
    let bits = f.max_coeff_abs().bits();
    if bits > MAX_COEFF_BITS {
        return Err(FactorError::CoefficientBudget { bits, max: MAX_COEFF_BITS });
    }
    let (content, _) = f.primitive();
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decompose(f)? {
        for irr in factor_squarefree(&part)? {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs()))
    });
    Ok(FactorList { content, factors })
}

/// Number of irreducible factors of the image of f modulo p, or None when p
/// is unusable (even, composite, degree drop, or non-squarefree image). A
/// return of Some(1) certifies irreducibility of f over Z.
pub fn factor_count_mod_p(f: &IntPoly, p: u64) -> Option<u64> {
    if p < 3 || !is_small_prime(p) {
        return None;
    }
    let coeffs = f.reduce_mod_p(p);
    if coeffs.len() != f.coeffs().len() || coeffs.len() < 2 {
        return None;
    }
    let image = PolyZp::new(p, coeffs).make_monic();
    if gcd_zp(&image, &image.derivative()).degree() != Some(0) {
        return None;
    }
    Some(modp::factor_count(&image) as u64)
}

// ---------------------------------------------------------------------------
// Counting factors of f(x) - f(y).
// ---------------------------------------------------------------------------

/// s(f) by specialization: factor f(x) - f(c) at integer points c where the
/// specialization is squarefree, and take the minimum count over at least
/// `trials` such points. Squarefree specializations can split bivariate
/// factors but never merge distinct ones, so the minimum can only overcount;
/// witnesses are recorded so a doubtful value can be re-examined.
pub fn count_bivariate_factors(
    f: &IntPoly,
    trials: u32,
    seed: u64,
) -> Result<SCount, FactorError> {
    let degree = f.degree().filter(|&d| d >= 1).ok_or(FactorError::ConstantInput)? as u64;
    assert!(trials >= 3, "at least three specialization points are required");
    let fprime = f.derivative();
    let mut counts: Vec<u64> = Vec::new();
    let mut witnesses: Vec<i64> = Vec::new();

    let try_point = |c: i64,
                         counts: &mut Vec<u64>,
                         witnesses: &mut Vec<i64>|
     -> Result<(), FactorError> {
        let spec = f - &IntPoly::constant(f.eval_big(&BigInt::from(c)));
        if gcd_z(&spec, &fprime).degree() != Some(0) {
            return Ok(());
        }
        let list = factor_z(&spec)?;
        debug_assert!(list.factors.iter().all(|&(_, m)| m == 1));
        counts.push(list.factors.len() as u64);
        witnesses.push(c);
        Ok(())
    };

    let mut magnitude = 1i64;
    while witnesses.len() < trials as usize && magnitude < 300 {
        for c in [magnitude, -magnitude] {
            if witnesses.len() >= trials as usize {
                break;
            }
            try_point(c, &mut counts, &mut witnesses)?;
        }
        magnitude += 2;
    }
    if witnesses.len() < trials as usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2_000 {
            if witnesses.len() >= trials as usize {
                break;
            }
            let c = rng.random_range(150..=524_287i64) * 2 + 1;
            let c = if rng.random_range(0..2u8) == 1 { -c } else { c };
            try_point(c, &mut counts, &mut witnesses)?;
        }
    }
    if witnesses.len() < trials as usize {
        return Err(FactorError::SearchExhausted {
            what: "squarefree specialization points".into(),
        });
    }
    let value = *counts.iter().min().expect("at least one count");
    let bound = tau(degree).expect("positive degree");
    assert!(
        value >= 1 && value <= bound,
        "factor count {value} outside [1, {bound}] for degree {degree}"
    );
    Ok(SCount { value, method: SMethod::Specialization, witnesses })
}

/// Exact s for the power map x^d: the divisor count of d.
pub fn cyclotomic_count(d: u64) -> SCount {
    assert!(d >= 1, "exponent must be positive");
    SCount {
        value: tau(d).expect("positive exponent"),
        method: SMethod::Curated,
        witnesses: Vec::new(),
    }
}

/// Agreement report between three routes to s(f): the rounded average of
/// the pair statistic over primes, the specialization count, and (when a
/// group is supplied) the rank of the associated permutation group.
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub poly: String,
    pub mean_m: Rat,
    /// Rounded mean; absent when the mean sits too close to a half-integer
    /// to round with confidence.
    pub rounded: Option<u64>,
    pub specialization: SCount,
    pub rank: Option<u64>,
    pub inconclusive: bool,
    pub passed: bool,
    /// The agreed value with method CrossCheck, present only when passed.
    pub consensus: Option<SCount>,
}

/// Cross-check s(f) along independent routes up to qmax. The rounding is
/// declared inconclusive when the prime average lies within 1/4 of a
/// half-integer.
pub fn s_cross_check(
    f: &IntPoly,
    qmax: u64,
    group: Option<&PermGroup>,
) -> Result<CrossCheckReport, FactorError> {
    let records = stats_sweep(f, qmax)?;
    let mut sum = RatSum::zero();
    let mut count = 0u64;
    for record in &records {
        if !record.degenerate {
            sum.add_rat(&record.m_p);
            count += 1;
        }
    }
    if count == 0 {
        return Err(FactorError::NoUsablePrimes { qmax });
    }
    let mean = sum.mean(count);
    let frac = &mean - &mean.floor();
    let half = rat(1, 2);
    let distance = if frac >= half { &frac - &half } else { &half - &frac };
    let inconclusive = distance <= rat(1, 4);
    let rounded = (!inconclusive).then(|| {
        (&mean + &half)
            .floor()
            .to_integer()
            .to_u64()
            .expect("prime averages are small")
    });
    let specialization = count_bivariate_factors(f, 5, 0)?;
    let rank = group.map(group_rank).transpose()?;
    let passed = rounded == Some(specialization.value)
        && rank.is_none_or(|r| r == specialization.value);
    let consensus = passed.then(|| SCount {
        value: specialization.value,
        method: SMethod::CrossCheck,
        witnesses: specialization.witnesses.clone(),
    });
    Ok(CrossCheckReport {
        poly: f.to_string(),
        mean_m: mean,
        rounded,
        specialization,
        rank,
        inconclusive,
        passed,
        consensus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{close_generators, Perm, DEFAULT_CLOSURE_CAP};
    use num_traits::Zero;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    fn factors_of(f: &IntPoly) -> FactorList {
        let list = factor_z(f).unwrap();
        assert_eq!(&list.expand(), f, "round trip for {f}");
        for (factor, _) in &list.factors {
            assert!(factor.leading_coeff().unwrap() > &BigInt::zero());
            assert!(factor.primitive().0.is_one(), "{factor} must be primitive");
        }
        list
    }

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd_z(&p(&[-1, 0, 1]), &p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(gcd_z(&p(&[0, 0, 0, 3]), &p(&[0, 0, 2])), p(&[0, 0, 1]));
        assert_eq!(gcd_z(&p(&[1, 1]), &p(&[1, 0, 1])), IntPoly::one());
        assert_eq!(gcd_z(&p(&[2, 2]), &IntPoly::zero()), p(&[1, 1]));
        assert_eq!(gcd_z(&p(&[4]), &p(&[6, 2])), IntPoly::one());
    }

    #[test]
    fn squarefree_examples() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2.
        assert_eq!(
            squarefree_decompose(&p(&[2, -3, 0, 1])).unwrap(),
            vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]
        );
        assert_eq!(squarefree_decompose(&p(&[1, 0, 1])).unwrap(), vec![(p(&[1, 0, 1]), 1)]);
        assert_eq!(squarefree_decompose(&p(&[0, 0, 0, 1])).unwrap(), vec![(p(&[0, 1]), 3)]);
        // Content is dropped: 4(x-1)^2.
        assert_eq!(squarefree_decompose(&p(&[4, -8, 4])).unwrap(), vec![(p(&[-1, 1]), 2)]);
        assert!(matches!(
            squarefree_decompose(&IntPoly::zero()),
            Err(FactorError::ZeroPolynomial)
        ));
        assert_eq!(squarefree_decompose(&p(&[7])).unwrap(), vec![]);
    }

    #[test]
    fn squarefree_reconstructs() {
        for f in [
            p(&[2, -3, 0, 1]),
            p(&[0, 0, 4, 8, 4]), // 4x^2 (x+1)^2
            p(&[1, 3, 3, 1]),    // (x+1)^3
            p(&[0, 1, 0, 1]),    // x (x^2+1)
        ] {
            let parts = squarefree_decompose(&f).unwrap();
            let mut acc = IntPoly::one();
            for (part, mult) in &parts {
                for _ in 0..*mult {
                    acc = &acc * part;
                }
            }
            assert_eq!(acc, f.primitive().1, "reconstruction of {f}");
        }
    }

    #[test]
    fn factors_simple_cases() {
        let list = factors_of(&p(&[-1, 0, 1]));
        assert!(list.content.is_one());
        assert_eq!(list.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);

        let list = factors_of(&p(&[-16, 0, 0, 0, 1]));
        assert_eq!(
            list.factors,
            vec![(p(&[-2, 1]), 1), (p(&[2, 1]), 1), (p(&[4, 0, 1]), 1)]
        );

        let list = factors_of(&p(&[1, 0, 1]));
        assert_eq!(list.factors, vec![(p(&[1, 0, 1]), 1)]);

        let list = factors_of(&p(&[2, -3, 0, 1]));
        assert_eq!(list.factors, vec![(p(&[-1, 1]), 2), (p(&[2, 1]), 1)]);
    }

    #[test]
    fn factors_with_content_and_leading_coefficients() {
        let list = factors_of(&p(&[1, 5, 6]));
        assert!(list.content.is_one());
        assert_eq!(list.factors, vec![(p(&[1, 2]), 1), (p(&[1, 3]), 1)]);

        let list = factors_of(&p(&[-1, 0, 4]));
        assert_eq!(list.factors, vec![(p(&[-1, 2]), 1), (p(&[1, 2]), 1)]);

        let list = factors_of(&p(&[0, 0, 0, -2]));
        assert_eq!(list.content, BigInt::from(-2));
        assert_eq!(list.factors, vec![(p(&[0, 1]), 3)]);

        let list = factors_of(&p(&[12]));
        assert_eq!(list.content, BigInt::from(12));
        assert!(list.factors.is_empty());
    }

    #[test]
    fn factors_needing_recombination() {
        // x^4 + 1 splits modulo every prime but is irreducible over Z.
        let list = factors_of(&p(&[1, 0, 0, 0, 1]));
        assert_eq!(list.factors, vec![(p(&[1, 0, 0, 0, 1]), 1)]);

        // (x^2-2)(x^2-3): four roots modulo suitable primes, no rational ones.
        let list = factors_of(&p(&[6, 0, -5, 0, 1]));
        assert_eq!(list.factors, vec![(p(&[-3, 0, 1]), 1), (p(&[-2, 0, 1]), 1)]);

        // x^12 - 1: six cyclotomic factors.
        let mut twelve = vec![0i64; 13];
        twelve[0] = -1;
        twelve[12] = 1;
        let list = factors_of(&p(&twelve));
        assert_eq!(list.factors.len(), 6);
        assert_eq!(
            list.factors.iter().map(|(f, _)| f.degree().unwrap()).sum::<usize>(),
            12
        );

        // x^7 + x = x (x^2+1)(x^4-x^2+1).
        let list = factors_of(&p(&[0, 1, 0, 0, 0, 0, 0, 1]));
        assert_eq!(
            list.factors,
            vec![(p(&[0, 1]), 1), (p(&[1, 0, 1]), 1), (p(&[1, 0, -1, 0, 1]), 1)]
        );
    }

    #[test]
    fn refactoring_factors_is_stable() {
        for f in [p(&[-1, 1]), p(&[1, 2]), p(&[4, 0, 1]), p(&[1, 0, 0, 0, 1]), p(&[1, 0, -1, 0, 1])] {
            let again = factor_z(&f).unwrap();
            assert!(again.content.is_one());
            assert_eq!(again.factors, vec![(f.clone(), 1)], "{f}");
        }
    }

    #[test]
    fn budget_errors() {
        assert!(matches!(factor_z(&IntPoly::x_pow(65)), Err(FactorError::DegreeBudget { .. })));
        let huge = IntPoly::from_coeffs(vec![BigInt::zero(), BigInt::one() << 600]);
        assert!(matches!(factor_z(&huge), Err(FactorError::CoefficientBudget { .. })));
        assert!(matches!(factor_z(&IntPoly::zero()), Err(FactorError::ZeroPolynomial)));
    }

    #[test]
    fn irreducibility_certificates() {
        let certified = |f: &IntPoly| {
            (3..=100u64).any(|q| factor_count_mod_p(f, q) == Some(1))
        };
        assert_eq!(factor_count_mod_p(&p(&[1, 0, 1]), 3), Some(1));
        assert_eq!(factor_count_mod_p(&p(&[4, 0, 1]), 3), Some(1));
        assert!(certified(&p(&[1, -1, 0, 0, 1])), "x^4 - x + 1");
        // Polynomials with abelian splitting behavior factor modulo every
        // prime and are never certified this way.
        assert!(!certified(&p(&[1, 0, 0, 0, 1])), "x^4 + 1");
        assert!(!certified(&p(&[1, 0, -1, 0, 1])), "x^4 - x^2 + 1");
        assert_eq!(factor_count_mod_p(&p(&[1, 0, 1]), 4), None);
        assert_eq!(factor_count_mod_p(&p(&[1, 0, 1]), 2), None);
        // Degree drop mod 3.
        assert_eq!(factor_count_mod_p(&p(&[1, 1, 3]), 3), None);
    }

    #[test]
    fn bivariate_counts() {
        let x4 = count_bivariate_factors(&IntPoly::x_pow(4), 5, 0).unwrap();
        assert_eq!(x4.value, 3);
        assert_eq!(x4.method, SMethod::Specialization);
        assert_eq!(x4.witnesses.len(), 5);
        assert!(x4.witnesses.iter().all(|c| c % 2 != 0));

        assert_eq!(count_bivariate_factors(&p(&[0, 1, 0, 1]), 5, 0).unwrap().value, 2);
        assert_eq!(count_bivariate_factors(&p(&[1, 0, 2, 0, 1]), 5, 0).unwrap().value, 3);
        assert_eq!(count_bivariate_factors(&p(&[0, 1, 0, 0, 0, 1]), 5, 0).unwrap().value, 2);
        assert!(matches!(
            count_bivariate_factors(&p(&[5]), 5, 0),
            Err(FactorError::ConstantInput)
        ));
    }

    #[test]
    fn bivariate_counts_match_divisor_counts_for_power_maps() {
        for d in 1..=8u64 {
            let s = count_bivariate_factors(&IntPoly::x_pow(d as usize), 3, 0).unwrap();
            assert_eq!(s.value, tau(d).unwrap(), "x^{d}");
            assert_eq!(s.value, cyclotomic_count(d).value);
        }
    }

    #[test]
    fn specialization_counts_dominate_the_minimum() {
        let f = p(&[1, 0, 2, 0, 1]);
        let s = count_bivariate_factors(&f, 5, 0).unwrap();
        for &c in &s.witnesses {
            let spec = &f - &IntPoly::constant(f.eval_big(&BigInt::from(c)));
            let count = factor_z(&spec).unwrap().factors.len() as u64;
            assert!(count >= s.value);
        }
    }

    #[test]
    fn curated_counts() {
        assert_eq!(cyclotomic_count(1).value, 1);
        assert_eq!(cyclotomic_count(4).value, 3);
        assert_eq!(cyclotomic_count(12).value, 6);
        assert_eq!(cyclotomic_count(9).method, SMethod::Curated);
    }

    #[test]
    fn cross_check_agreement() {
        let report = s_cross_check(&p(&[0, 1]), 1000, None).unwrap();
        assert!(report.passed);
        assert_eq!(report.rounded, Some(1));
        assert_eq!(report.consensus.as_ref().unwrap().method, SMethod::CrossCheck);

        let d4 = close_generators(
            &[
                Perm::from_cycles("(1 2 3 4)", None).unwrap(),
                Perm::from_cycles("(2 4)", Some(4)).unwrap(),
            ],
            DEFAULT_CLOSURE_CAP,
        )
        .unwrap();
        let report = s_cross_check(&IntPoly::x_pow(4), 20_000, Some(&d4)).unwrap();
        assert!(report.passed, "mean {} rounded {:?}", report.mean_m, report.rounded);
        assert_eq!(report.rank, Some(3));
        assert_eq!(report.specialization.value, 3);
    }

    #[test]
    fn cross_check_flags_ambiguous_rounding() {
        // Mean of m over p <= 10 for x^2 is 166/105, within 1/4 of 3/2.
        let report = s_cross_check(&p(&[0, 0, 1]), 10, None).unwrap();
        assert!(report.inconclusive);
        assert!(!report.passed);
        assert_eq!(report.rounded, None);
        assert_eq!(report.mean_m, rat(166, 105));
    }

    #[test]
    #[should_panic(expected = "at least three")]
    fn too_few_trials_panics() {
        let _ = count_bivariate_factors(&IntPoly::x_pow(2), 2, 0);
    }
}
