//! Per-prime statistics of polynomial maps: the preimage histogram of
//! f on F_p, the value-set density alpha_p = |f(F_p)|/p, the pair count
//! m_p = #{(x,x') : f(x) = f(x')}/p, and their multivariate zero-density
//! analogue, swept over all primes up to a bound.

pub mod eval;

use crate::numcore::{rat_u, sieve_primes, Rat};
use eval::{histogram_into, horner, qr_table, quadratic_root_count, Barrett};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Hard ceiling for single-prime statistics; histograms allocate p counters.
pub const MAX_STAT_PRIME: u64 = 1 << 31;

/// Default point budget for multivariate zero counting.
pub const DEFAULT_MULTI_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("the zero polynomial has no statistics")]
    ZeroPolynomial,
    #[error("polynomial must have degree >= 1, got a constant")]
    ConstantPolynomial,
    #[error("{n} is not prime")]
    NotPrime { n: u64 },
    #[error("prime {p} exceeds the supported bound 2^31")]
    PrimeTooLarge { p: u64 },
    #[error("reduction of f mod {p} is constant, the prime is degenerate")]
    DegeneratePrime { p: u64 },
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("sweep range must contain a prime, qmax = {qmax}")]
    EmptySweep { qmax: u64 },
    #[error("polynomial uses {got} variables, supported range is 1..=3")]
    VarCount { got: usize },
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over Z.
// ---------------------------------------------------------------------------

/// Integer polynomial, coefficients ascending by degree, no trailing zeros.
/// The empty coefficient vector is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::from(1))
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial x^d.
    pub fn x_pow(d: usize) -> Self {
        let mut coeffs = vec![BigInt::ZERO; d + 1];
        coeffs[d] = BigInt::from(1);
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or(BigInt::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval_big(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    /// gcd of all coefficients with the sign of the leading coefficient;
    /// zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::ZERO;
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.leading_coeff().is_some_and(|lc| lc.is_negative()) {
            -g
        } else {
            g
        }
    }

    /// (content, primitive part): self = content * pp, pp has positive
    /// leading coefficient and coprime coefficients.
    pub fn primitive(&self) -> (BigInt, IntPoly) {
        if self.is_zero() {
            return (BigInt::ZERO, IntPoly::zero());
        }
        let c = self.content();
        let pp = IntPoly::from_coeffs(self.coeffs.iter().map(|a| a / &c).collect());
        (c, pp)
    }

    /// Exact quotient self / g over Z, or None when g does not divide self.
    pub fn exact_div(&self, g: &IntPoly) -> Option<IntPoly> {
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let (dn, dd) = (self.degree()?, g.degree()?);
        if dn < dd {
            return None;
        }
        let glc = g.leading_coeff().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::ZERO; dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let lead = std::mem::take(&mut rem[k + dd]);
            if lead.is_zero() {
                continue;
            }
            let (q, r) = lead.div_rem(glc);
            if !r.is_zero() {
                return None;
            }
            for (i, gc) in g.coeffs[..dd].iter().enumerate() {
                rem[k + i] -= &q * gc;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(quot))
    }

    pub fn max_coeff_abs(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or(BigInt::ZERO)
    }

    pub fn l2_norm_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Coefficients reduced into [0, p), trailing zeros trimmed. The result
    /// can have lower degree than self or be empty.
    pub fn reduce_mod_p(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }
}

impl std::ops::Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigInt::ZERO; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::from_coeffs(out)
    }
}

impl std::ops::Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigInt::ZERO; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        IntPoly::from_coeffs(out)
    }
}

impl std::ops::Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

impl std::ops::Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_one = mag == BigInt::from(1);
            match (i, is_one) {
                (0, _) => write!(f, "{mag}")?,
                (_, false) => write!(f, "{mag}*")?,
                (_, true) => {}
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials over Z in up to three variables.
// ---------------------------------------------------------------------------

pub const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

/// Sparse polynomial in the variables x, y, z (indices 0, 1, 2). Exponent
/// vectors are fixed-width; a zero exponent means the variable is absent
/// from that term. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<[u16; 3], BigInt>,
}

impl MultiPoly {
    pub fn new(nvars: usize) -> Result<Self, StatsError> {
        if nvars == 0 || nvars > 3 {
            return Err(StatsError::VarCount { got: nvars });
        }
        Ok(MultiPoly { nvars, terms: BTreeMap::new() })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16; 3], &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: [u16; 3], coeff: BigInt) {
        for (v, &e) in exps.iter().enumerate() {
            assert!(e == 0 || v < self.nvars, "exponent on unused variable");
        }
        let entry = self.terms.entry(exps).or_insert_with(|| BigInt::ZERO);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Embed a univariate polynomial as a polynomial in the given variable.
    pub fn from_univariate(f: &IntPoly, var: usize, nvars: usize) -> Result<Self, StatsError> {
        let mut out = MultiPoly::new(nvars)?;
        assert!(var < nvars);
        for (i, c) in f.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut exps = [0u16; 3];
                exps[var] = u16::try_from(i).expect("degree fits u16");
                out.add_term(exps, c.clone());
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, -c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| (e[0] + e[1] + e[2]) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn max_degree_in(&self, var: usize) -> usize {
        self.terms.keys().map(|e| e[var] as usize).max().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..3).filter(|&v| self.terms.keys().any(|e| e[v] > 0)).collect()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending by total degree, then by exponent vector, so the head
        // term prints first.
        let mut keys: Vec<&[u16; 3]> = self.terms.keys().collect();
        keys.sort_by_key(|e| (std::cmp::Reverse(e[0] + e[1] + e[2]), std::cmp::Reverse(**e)));
        let mut first = true;
        for e in keys {
            let c = &self.terms[e];
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars_present = e.iter().any(|&x| x > 0);
            let is_one = mag == BigInt::from(1);
            if !vars_present || !is_one {
                write!(f, "{mag}")?;
                if vars_present {
                    write!(f, "*")?;
                }
            }
            let mut star = false;
            for (v, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if star {
                    write!(f, "*")?;
                }
                star = true;
                if exp == 1 {
                    write!(f, "{}", VAR_NAMES[v])?;
                } else {
                    write!(f, "{}^{}", VAR_NAMES[v], exp)?;
                }
            }
            Ok::<(), fmt::Error>(())?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Per-prime records.
// ---------------------------------------------------------------------------

/// Statistics of a univariate polynomial at one prime. A prime is degenerate
/// when the reduction of f mod p is constant; degenerate records carry zeroed
/// statistics and are excluded from averages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeStatRecord {
    pub p: u64,
    pub degree_mod_p: u32,
    pub value_set_size: u64,
    pub alpha_p: Rat,
    pub m_p: Rat,
    pub degenerate: bool,
}

/// Zero-density statistics of a multivariate polynomial at one prime:
/// m_p = #{points with g = 0 over F_p^n} / p^(n-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiStatRecord {
    pub p: u64,
    pub total_degree_mod_p: u32,
    pub zero_count: u64,
    pub m_p: Rat,
    pub degenerate: bool,
}

fn check_prime(p: u64) -> Result<(), StatsError> {
    if p >= MAX_STAT_PRIME {
        return Err(StatsError::PrimeTooLarge { p });
    }
    if p < 2 || (p > 2 && p % 2 == 0) {
        return Err(StatsError::NotPrime { n: p });
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return Err(StatsError::NotPrime { n: p });
        }
        d += 2;
    }
    Ok(())
}

fn require_nonconstant(f: &IntPoly) -> Result<(), StatsError> {
    match f.degree() {
        None => Err(StatsError::ZeroPolynomial),
        Some(0) => Err(StatsError::ConstantPolynomial),
        Some(_) => Ok(()),
    }
}

/// Reduction of f modulo p together with its degeneracy flag. The prime is
/// degenerate for f when the degree drops under reduction (p divides the
/// leading coefficient) or the image is constant; degenerate primes carry no
/// statistics and are excluded from averages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedPoly {
    pub coeffs: Vec<u64>,
    pub degenerate: bool,
}

pub fn reduce_mod_p(f: &IntPoly, p: u64) -> Result<ReducedPoly, StatsError> {
    if f.is_zero() {
        return Err(StatsError::ZeroPolynomial);
    }
    check_prime(p)?;
    let coeffs = f.reduce_mod_p(p);
    let degenerate = coeffs.len() < f.coeffs().len() || coeffs.len() < 2;
    Ok(ReducedPoly { coeffs, degenerate })
}

/// Preimage histogram of f over F_p: entry r counts the x in 0..p with
/// f(x) = r. The histogram sums to p and no entry exceeds deg(f mod p).
pub fn preimage_histogram(f: &IntPoly, p: u64) -> Result<Vec<u32>, StatsError> {
    require_nonconstant(f)?;
    let red = reduce_mod_p(f, p)?;
    if red.degenerate {
        return Err(StatsError::DegeneratePrime { p });
    }
    let mut counts = vec![0u16; p as usize];
    histogram_into(&red.coeffs, p, &mut counts);
    Ok(counts.into_iter().map(u32::from).collect())
}

/// Value-set density alpha_p = |f(F_p)| / p, exact.
pub fn alpha_p(f: &IntPoly, p: u64) -> Result<Rat, StatsError> {
    let rec = checked_record(f, p)?;
    Ok(rec.alpha_p)
}

/// Pair count m_p = #{(x, x') : f(x) = f(x')} / p, exact. Equals the second
/// moment of the preimage histogram divided by p.
pub fn m_p(f: &IntPoly, p: u64) -> Result<Rat, StatsError> {
    let rec = checked_record(f, p)?;
    Ok(rec.m_p)
}

fn checked_record(f: &IntPoly, p: u64) -> Result<PrimeStatRecord, StatsError> {
    require_nonconstant(f)?;
    check_prime(p)?;
    let rec = stat_record_unchecked(f, p, &mut Vec::new());
    if rec.degenerate {
        return Err(StatsError::DegeneratePrime { p });
    }
    Ok(rec)
}

/// Record for one prime; `scratch` is a reusable histogram buffer.
fn stat_record_unchecked(f: &IntPoly, p: u64, scratch: &mut Vec<u16>) -> PrimeStatRecord {
    let coeffs = f.reduce_mod_p(p);
    if coeffs.len() < f.coeffs().len() || coeffs.len() < 2 {
        return PrimeStatRecord {
            p,
            degree_mod_p: coeffs.len().saturating_sub(1) as u32,
            value_set_size: 0,
            alpha_p: Rat::zero(),
            m_p: Rat::zero(),
            degenerate: true,
        };
    }
    scratch.clear();
    scratch.resize(p as usize, 0);
    histogram_into(&coeffs, p, scratch);
    let mut value_set_size = 0u64;
    let mut pair_sum = 0u64;
    for &c in scratch.iter() {
        if c > 0 {
            value_set_size += 1;
            pair_sum += c as u64 * c as u64;
        }
    }
    PrimeStatRecord {
        p,
        degree_mod_p: (coeffs.len() - 1) as u32,
        value_set_size,
        alpha_p: rat_u(value_set_size, p),
        m_p: rat_u(pair_sum, p),
        degenerate: false,
    }
}

/// Statistics of f at every prime p <= qmax, ascending. Degenerate primes
/// appear as flagged records. The per-prime work runs in parallel; the
/// result order and content do not depend on the worker count.
pub fn stats_sweep(f: &IntPoly, qmax: u64) -> Result<Vec<PrimeStatRecord>, StatsError> {
    require_nonconstant(f)?;
    let table = sieve_primes(qmax).map_err(|_| StatsError::EmptySweep { qmax })?;
    Ok(table
        .primes()
        .par_iter()
        .map_init(Vec::new, |scratch, &p| stat_record_unchecked(f, p, scratch))
        .collect())
}

// ---------------------------------------------------------------------------
// Multivariate zero counting.
// ---------------------------------------------------------------------------

struct ReducedMulti {
    /// (exponents, coefficient mod p), constants included.
    terms: Vec<([u16; 3], u64)>,
    total_degree: usize,
}

fn reduce_multi(g: &MultiPoly, p: u64) -> ReducedMulti {
    let pb = BigInt::from(p);
    let mut terms = Vec::new();
    for (e, c) in g.terms() {
        let cm = c.mod_floor(&pb).to_u64().unwrap();
        if cm != 0 {
            terms.push((*e, cm));
        }
    }
    let total_degree = terms
        .iter()
        .map(|(e, _)| (e[0] + e[1] + e[2]) as usize)
        .max()
        .unwrap_or(0);
    ReducedMulti { terms, total_degree }
}

/// Zero-density pair statistic for a multivariate polynomial at one prime,
/// by enumeration of the affine space. The two outermost variables are
/// enumerated directly; in the innermost variable the specialized univariate
/// has its roots counted by discriminant when its degree is at most two and
/// by evaluation otherwise. `budget` caps the number of enumerated points.
pub fn m_p_multi(g: &MultiPoly, p: u64, budget: u64) -> Result<MultiStatRecord, StatsError> {
    check_prime(p)?;
    let red = reduce_multi(g, p);
    if red.total_degree == 0 {
        return Ok(MultiStatRecord {
            p,
            total_degree_mod_p: 0,
            zero_count: 0,
            m_p: Rat::zero(),
            degenerate: true,
        });
    }

    let used: Vec<usize> = (0..3)
        .filter(|&v| red.terms.iter().any(|(e, _)| e[v] > 0))
        .collect();
    let nu = used.len();
    // Variables absent mod p contribute a factor p to both the zero count
    // and the normalization, so enumeration runs over the used ones only.
    let inner = *used.last().unwrap();
    let inner_deg = red.terms.iter().map(|(e, _)| e[inner]).max().unwrap() as usize;
    let analytic = inner_deg <= 2;
    // The analytic path enumerates the outer variables plus one pass of p
    // points to build the square table.
    let enumerated: u128 = if analytic {
        (p as u128).pow(nu as u32 - 1) + p as u128
    } else {
        (p as u128).pow(nu as u32)
    };
    if enumerated > budget as u128 {
        return Err(StatsError::BudgetExceeded { needed: enumerated, budget });
    }

    let bar = Barrett::new(p);
    let qr = if analytic && nu >= 1 { qr_table(p) } else { Vec::new() };
    let zeros: u64 = match nu {
        1 => count_zeros_1d(&red, inner, p, &bar, &qr, analytic),
        2 => count_zeros_2d(&red, used[0], inner, p, &bar, &qr, analytic),
        3 => count_zeros_3d(&red, p, &bar, &qr, analytic),
        _ => unreachable!("constant handled above"),
    };

    let declared = g.nvars() as u32;
    let scaled_zeros = BigInt::from(zeros) * BigInt::from(p).pow(declared - nu as u32);
    let zero_count = scaled_zeros.to_u64().unwrap_or(u64::MAX);
    Ok(MultiStatRecord {
        p,
        total_degree_mod_p: red.total_degree as u32,
        zero_count,
        m_p: Rat::new(scaled_zeros, BigInt::from(p).pow(declared - 1)),
        degenerate: false,
    })
}

fn specialize_out<const KEEP: usize>(
    terms: &[([u16; 3], u64)],
    var: usize,
    pows: &[u64],
    bar: &Barrett,
    keep_vars: [usize; KEEP],
) -> Vec<([u16; 3], u64)> {
    let mut out: Vec<([u16; 3], u64)> = Vec::with_capacity(terms.len());
    'term: for (e, c) in terms {
        let cv = bar.mul(*c, pows[e[var] as usize]);
        let mut key = [0u16; 3];
        for v in keep_vars {
            key[v] = e[v];
        }
        if cv == 0 {
            continue;
        }
        for slot in out.iter_mut() {
            if slot.0 == key {
                slot.1 = bar.add(slot.1, cv);
                continue 'term;
            }
        }
        out.push((key, cv));
    }
    out.retain(|(_, c)| *c != 0);
    out
}

fn power_table(x: u64, max_e: usize, bar: &Barrett) -> Vec<u64> {
    let mut pows = vec![1u64; max_e + 1];
    for i in 1..=max_e {
        pows[i] = bar.mul(pows[i - 1], x);
    }
    pows
}

fn count_univariate_roots(
    coeffs: &[u64],
    p: u64,
    bar: &Barrett,
    qr: &[u8],
    analytic: bool,
) -> u64 {
    if analytic {
        let a = coeffs.get(2).copied().unwrap_or(0);
        let b = coeffs.get(1).copied().unwrap_or(0);
        let c = coeffs.first().copied().unwrap_or(0);
        quadratic_root_count(a, b, c, bar, qr)
    } else {
        (0..p).filter(|&z| horner(coeffs, bar, z) == 0).count() as u64
    }
}

fn count_zeros_1d(
    red: &ReducedMulti,
    var: usize,
    p: u64,
    bar: &Barrett,
    qr: &[u8],
    analytic: bool,
) -> u64 {
    let deg = red.terms.iter().map(|(e, _)| e[var]).max().unwrap() as usize;
    let mut coeffs = vec![0u64; deg + 1];
    for (e, c) in &red.terms {
        coeffs[e[var] as usize] = bar.add(coeffs[e[var] as usize], *c);
    }
    count_univariate_roots(&coeffs, p, bar, qr, analytic)
}

fn count_zeros_2d(
    red: &ReducedMulti,
    outer: usize,
    inner: usize,
    p: u64,
    bar: &Barrett,
    qr: &[u8],
    analytic: bool,
) -> u64 {
    let max_outer = red.terms.iter().map(|(e, _)| e[outer]).max().unwrap() as usize;
    let inner_deg = red.terms.iter().map(|(e, _)| e[inner]).max().unwrap() as usize;
    let mut zeros = 0u64;
    for x in 0..p {
        let pows = power_table(x, max_outer, bar);
        let spec = specialize_out(&red.terms, outer, &pows, bar, [inner]);
        let mut coeffs = vec![0u64; inner_deg + 1];
        for (e, c) in &spec {
            coeffs[e[inner] as usize] = bar.add(coeffs[e[inner] as usize], *c);
        }
        zeros += count_univariate_roots(&coeffs, p, bar, qr, analytic);
    }
    zeros
}

fn count_zeros_3d(red: &ReducedMulti, p: u64, bar: &Barrett, qr: &[u8], analytic: bool) -> u64 {
    let max_x = red.terms.iter().map(|(e, _)| e[0]).max().unwrap() as usize;
    let max_y = red.terms.iter().map(|(e, _)| e[1]).max().unwrap() as usize;
    let inner_deg = red.terms.iter().map(|(e, _)| e[2]).max().unwrap() as usize;
    let mut zeros = 0u64;
    for x in 0..p {
        let xpows = power_table(x, max_x, bar);
        let spec_x = specialize_out(&red.terms, 0, &xpows, bar, [1, 2]);
        for y in 0..p {
            let ypows = power_table(y, max_y, bar);
            let spec_xy = specialize_out(&spec_x, 1, &ypows, bar, [2]);
            let mut coeffs = vec![0u64; inner_deg + 1];
            for (e, c) in &spec_xy {
                coeffs[e[2] as usize] = bar.add(coeffs[e[2] as usize], *c);
            }
            zeros += count_univariate_roots(&coeffs, p, bar, qr, analytic);
        }
    }
    zeros
}

/// Multivariate statistics at every prime p <= qmax, ascending, parallel
/// over primes with deterministic output.
pub fn multi_sweep(
    g: &MultiPoly,
    qmax: u64,
    budget: u64,
) -> Result<Vec<MultiStatRecord>, StatsError> {
    let table = sieve_primes(qmax).map_err(|_| StatsError::EmptySweep { qmax })?;
    table
        .primes()
        .par_iter()
        .map(|&p| m_p_multi(g, p, budget))
        .collect()
}
