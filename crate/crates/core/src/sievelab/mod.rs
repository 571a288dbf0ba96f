//! Gallagher's larger sieve evaluated exactly on explicit integer sets.
//!
//! For a set X contained in [1, N] and a finite set of primes P, the sieve
//! inequality reads
//!
//! ```text
//! |X|  <=  ( sum_{p in P} ln p ) / ( sum_{p in P} ln p / |X mod p|  -  ln N )
//! ```
//!
//! whenever the denominator is positive. Everything here is measured on
//! concrete sets: generators build the d-th powers and the integer values of
//! a polynomial, [`residue_counts`] tallies |X mod p| exactly, and
//! [`gallagher_bound`] assembles both sides into a [`SieveReport`]. A
//! non-positive denominator is not an error; it is the honest verdict that
//! this prime set certifies nothing, and the report simply carries no bound.
//! [`optimize_q`] scans a grid of cutoffs Q, sieving with all primes up to
//! each, and keeps the cutoff whose bound is smallest.
//!
//! Two diagnostics round out the module. [`smoothness_stats`] samples pairs
//! x != x' and measures the Q-smooth log content of the difference,
//! S(n) = sum of ln p over primes p <= Q dividing n, each prime counted
//! once. Squarelike sets have differences that factor through cyclotomic
//! polynomials, so for sets of exact d-th powers the sampler also splits
//! S across the factors of a^d - b^d. [`intersect_count`] reports the exact
//! size of [1, N] intersected with the full integer value set of f, the
//! quantity a sharp sieve bound on polynomial values has to beat.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::numcore::{nth_root_floor, sieve_primes};
use crate::polystats::IntPoly;

/// Default cap on the number of sampled pairs in [`smoothness_stats`].
pub const DEFAULT_SAMPLE_CAP: u64 = 100_000;

/// Largest set any generator will materialize.
const MAX_SET_LEN: u64 = 100_000_000;

/// Largest monotone-range radius [`gen_poly_values`] will scan pointwise.
const MAX_MONOTONE_START: u64 = 20_000_000;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("element {value} lies outside [1, {n}]")]
    ElementOutOfRange { value: u64, n: u64 },
    #[error("set elements must be strictly increasing")]
    NotAscending,
    #[error("the Q grid is empty")]
    EmptyGrid,
    #[error("{what} exceeds the generation budget of {limit}")]
    Budget { what: String, limit: u64 },
    #[error("malformed set file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A finite set of integers inside a window [1, N], kept sorted and
/// duplicate-free so residue counts and size comparisons are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSet {
    n: u64,
    elements: Vec<u64>,
    label: String,
}

impl ExplicitSet {
    pub fn new(n: u64, elements: Vec<u64>, label: impl Into<String>) -> Result<Self, SieveError> {
        for pair in elements.windows(2) {
            if pair[0] >= pair[1] {
                return Err(SieveError::NotAscending);
            }
        }
        if let Some(&v) = elements.iter().find(|&&v| v < 1 || v > n) {
            return Err(SieveError::ElementOutOfRange { value: v, n });
        }
        Ok(ExplicitSet { n, elements, label: label.into() })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Both sides of the sieve inequality for one set and one prime list.
/// `bound` is present exactly when the denominator is positive.
#[derive(Debug, Clone)]
pub struct SieveReport {
    pub n: u64,
    pub primes: Vec<u64>,
    pub residue_counts: Vec<u64>,
    pub numerator: f64,
    pub denominator: f64,
    pub bound: Option<f64>,
    pub actual_size: u64,
}

/// Outcome of a grid search over prime cutoffs. `trace` records the bound
/// at every grid point in ascending Q order; `report` belongs to `best_q`
/// when some cutoff produced a bound and to the largest cutoff otherwise.
#[derive(Debug, Clone)]
pub struct QSearch {
    pub trace: Vec<(u64, Option<f64>)>,
    pub best_q: Option<u64>,
    pub report: SieveReport,
}

/// Smooth log content of sampled pairwise differences, with the mean set
/// against ln Q and the Mertens sum that a full interval would match.
#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub q: u64,
    pub pairs_sampled: u64,
    pub mean_s: f64,
    pub median_s: f64,
    pub log_q: f64,
    pub mertens_sum: f64,
    pub cyclotomic: Option<Vec<CycloPart>>,
}

/// Mean smooth content of one cyclotomic factor of a^d - b^d.
#[derive(Debug, Clone)]
pub struct CycloPart {
    pub ell: u64,
    pub mean_s: f64,
}

/// Exact size of [1, N] intersected with the integer value set of f,
/// reported next to N^(1/deg f) for scale.
#[derive(Debug, Clone)]
pub struct IntersectReport {
    pub n: u64,
    pub degree: u32,
    pub count: u64,
    pub root_scale: f64,
}

/// The set of d-th powers in [1, N].
pub fn gen_powers(d: u32, n: u64) -> Result<ExplicitSet, SieveError> {
    assert!(d >= 1, "power sets need an exponent of at least one");
    assert!(n >= 1, "the window [1, N] must be nonempty");
    let count = nth_root_floor(n, d);
    if count > MAX_SET_LEN {
        return Err(SieveError::Budget {
            what: format!("the set of {d}-th powers up to {n} ({count} elements)"),
            limit: MAX_SET_LEN,
        });
    }
    let mut elements = Vec::with_capacity(count as usize);
    for k in 1..=count {
        elements.push((k as u128).pow(d) as u64);
    }
    Ok(ExplicitSet::new(n, elements, format!("powers:{d}"))
        .expect("power sets are sorted and in range"))
}

/// The set of values f(k) landing in [1, N] as k runs over all integers.
///
/// Beyond a radius that dominates every root of f' the polynomial is
/// strictly monotone, so the two unbounded branches are searched by
/// doubling and bisection and only the k-window that actually maps into
/// [1, N] is evaluated. Inside the radius every integer is checked.
pub fn gen_poly_values(f: &IntPoly, n: u64) -> Result<ExplicitSet, SieveError> {
    let d = f.degree().expect("value-set generation needs a nonzero polynomial");
    assert!(d >= 1, "value-set generation needs degree at least one");
    assert!(n >= 1, "the window [1, N] must be nonempty");
    let radius = monotone_radius(f);
    if radius > MAX_MONOTONE_START {
        return Err(SieveError::Budget {
            what: format!("the derivative root radius {radius} of {f}"),
            limit: MAX_MONOTONE_START,
        });
    }
    let mut elements = Vec::new();
    inner_scan(f, radius, n, &mut elements);
    branch_values(f, radius, n, 1, &mut elements)?;
    branch_values(f, radius, n, -1, &mut elements)?;
    elements.sort_unstable();
    elements.dedup();
    Ok(ExplicitSet::new(n, elements, format!("poly:{f}"))
        .expect("generated value sets are sorted and in range"))
}

/// Radius R such that f is strictly monotone on both of |x| >= R, from the
/// Fujiwara bound 2 max_i |c_i / c_m|^(1/(m-i)) on the roots of f'.
fn monotone_radius(f: &IntPoly) -> u64 {
    let fp = f.derivative();
    let m = fp.degree().expect("degree >= 1 gives a nonzero derivative");
    if m == 0 {
        return 1;
    }
    let lc = fp.leading_coeff().expect("nonzero derivative").abs();
    let mut radius = 1u64;
    for i in 0..m {
        let c = fp.coeff(i).abs();
        if c.is_zero() {
            continue;
        }
        let ratio = (&c + &lc - BigInt::one()) / &lc;
        let root = match ratio.to_u64() {
            Some(r) => nth_root_floor(r, (m - i) as u32) + 1,
            None => {
                let shift = ratio.bits().div_ceil((m - i) as u64);
                assert!(shift < 62, "derivative coefficients too skewed for set generation");
                1u64 << shift
            }
        };
        radius = radius.max(2 * root);
    }
    radius
}

/// Check every integer in [-radius, radius], in native arithmetic while the
/// Horner accumulator provably fits and in big integers otherwise.
fn inner_scan(f: &IntPoly, radius: u64, n: u64, out: &mut Vec<u64>) {
    let narrow: Option<Vec<i128>> =
        f.coeffs().iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>();
    let limit = n as i128;
    if let Some(coeffs) = narrow {
        let r = radius as i128;
        let mut k = -r;
        while k <= r {
            let mut acc = Some(0i128);
            for &c in coeffs.iter().rev() {
                acc = acc.and_then(|a| a.checked_mul(k)).and_then(|a| a.checked_add(c));
            }
            match acc {
                Some(v) if v >= 1 && v <= limit => out.push(v as u64),
                Some(_) => {}
                None => {
                    let v = f.eval_big(&BigInt::from(k));
                    push_in_window(&v, n, out);
                }
            }
            k += 1;
        }
    } else {
        let r = radius as i64;
        for k in -r..=r {
            let v = f.eval_big(&BigInt::from(k));
            push_in_window(&v, n, out);
        }
    }
}

fn push_in_window(v: &BigInt, n: u64, out: &mut Vec<u64>) {
    if v.is_positive() && *v <= BigInt::from(n) {
        out.push(v.to_u64().expect("value within [1, N] fits in u64"));
    }
}

/// Collect the values of one strictly monotone branch, k = dir * (radius + 1 + t)
/// for t >= 0, by locating the window that maps into [1, N].
fn branch_values(
    f: &IntPoly,
    radius: u64,
    n: u64,
    dir: i64,
    out: &mut Vec<u64>,
) -> Result<(), SieveError> {
    let base = BigInt::from(radius) + 1;
    let eval = |t: &BigInt| -> BigInt { f.eval_big(&(BigInt::from(dir) * (&base + t))) };
    let one = BigInt::one();
    let lim = BigInt::from(n);
    let g0 = eval(&BigInt::zero());
    let g1 = eval(&one);
    assert!(g0 != g1, "the branch beyond the derivative roots is strictly monotone");
    let (t_lo, t_hi) = if g1 > g0 {
        if g0 > lim {
            return Ok(());
        }
        let hi = last_true(&|t| eval(t) <= lim);
        let lo = if g0 >= one { BigInt::zero() } else { first_true(&|t| eval(t) >= one) };
        (lo, hi)
    } else {
        if g0 < one {
            return Ok(());
        }
        let hi = last_true(&|t| eval(t) >= one);
        let lo = if g0 <= lim { BigInt::zero() } else { first_true(&|t| eval(t) <= lim) };
        (lo, hi)
    };
    if t_lo > t_hi {
        return Ok(());
    }
    let window = (&t_hi - &t_lo).to_u64().filter(|&w| w < MAX_SET_LEN).ok_or_else(|| {
        SieveError::Budget {
            what: format!("one monotone branch of {f} over [1, {n}]"),
            limit: MAX_SET_LEN,
        }
    })?;
    let mut t = t_lo;
    for _ in 0..=window {
        push_in_window(&eval(&t), n, out);
        t += 1;
    }
    Ok(())
}

/// Largest t with pred(t) true, for a predicate that is true at 0 and
/// switches to false exactly once.
fn last_true(pred: &dyn Fn(&BigInt) -> bool) -> BigInt {
    let mut hi = BigInt::one();
    while pred(&hi) {
        hi *= 2;
        assert!(hi.bits() < 4096, "monotone escape search diverged");
    }
    let mut lo: BigInt = &hi / 2;
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) / 2;
        if pred(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Smallest t with pred(t) true, for a predicate that is false at 0 and
/// switches to true exactly once.
fn first_true(pred: &dyn Fn(&BigInt) -> bool) -> BigInt {
    let mut hi = BigInt::one();
    while !pred(&hi) {
        hi *= 2;
        assert!(hi.bits() < 4096, "monotone entry search diverged");
    }
    let mut lo: BigInt = &hi / 2;
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) / 2;
        if pred(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Number of distinct residues of X modulo each prime, one count per prime
/// in input order. Counting stops early once a prime is fully covered.
pub fn residue_counts(x: &ExplicitSet, primes: &[u64]) -> Vec<u64> {
    assert!(!x.is_empty(), "residue counting needs a nonempty set");
    primes
        .par_iter()
        .map(|&p| {
            assert!(p >= 2, "residue counting needs primes");
            let mut seen = vec![false; p as usize];
            let mut count = 0u64;
            for &v in &x.elements {
                let r = (v % p) as usize;
                if !seen[r] {
                    seen[r] = true;
                    count += 1;
                    if count == p {
                        break;
                    }
                }
            }
            count
        })
        .collect()
}

/// Evaluate the sieve inequality for one prime list. The bound is reported
/// exactly when the denominator is positive.
pub fn gallagher_bound(x: &ExplicitSet, primes: &[u64]) -> SieveReport {
    let counts = residue_counts(x, primes);
    let mut numerator = 0.0f64;
    let mut denominator = -(x.n as f64).ln();
    for (&p, &c) in primes.iter().zip(&counts) {
        let lp = (p as f64).ln();
        numerator += lp;
        denominator += lp / c as f64;
    }
    let bound = (denominator > 0.0).then(|| numerator / denominator);
    SieveReport {
        n: x.n,
        primes: primes.to_vec(),
        residue_counts: counts,
        numerator,
        denominator,
        bound,
        actual_size: x.len() as u64,
    }
}

/// Sieve with all primes up to each grid cutoff and keep the cutoff whose
/// bound is smallest, ties going to the smaller Q. When no cutoff yields a
/// positive denominator the search reports the largest cutoff, boundless.
pub fn optimize_q(x: &ExplicitSet, qgrid: &[u64]) -> Result<QSearch, SieveError> {
    if qgrid.is_empty() {
        return Err(SieveError::EmptyGrid);
    }
    let mut grid = qgrid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let top = (*grid.last().unwrap()).max(2);
    let table = sieve_primes(top).expect("a cutoff of at least 2 sieves");
    let mut trace = Vec::with_capacity(grid.len());
    let mut best: Option<(u64, SieveReport)> = None;
    let mut last: Option<SieveReport> = None;
    for &q in &grid {
        let report = gallagher_bound(x, table.range(0, q));
        trace.push((q, report.bound));
        if let Some(b) = report.bound {
            let improves = best
                .as_ref()
                .is_none_or(|(_, held)| b < held.bound.expect("best reports carry a bound"));
            if improves {
                best = Some((q, report));
                continue;
            }
        }
        last = Some(report);
    }
    Ok(match best {
        Some((q, report)) => QSearch { trace, best_q: Some(q), report },
        None => QSearch {
            trace,
            best_q: None,
            report: last.expect("a nonempty grid evaluates at least once"),
        },
    })
}

/// Smooth log content S(n) = sum of ln p over primes p <= q dividing n,
/// each prime counted once.
fn s_value(n: u64, primes: &[u64], q: u64) -> f64 {
    debug_assert!(n >= 1);
    let mut rem = n;
    let mut s = 0.0f64;
    for &p in primes {
        if (p as u128) * (p as u128) > rem as u128 {
            break;
        }
        if rem % p == 0 {
            s += (p as f64).ln();
            while rem % p == 0 {
                rem /= p;
            }
        }
    }
    if rem > 1 && rem <= q {
        s += (rem as f64).ln();
    }
    s
}

/// Sample pairs x != x' from the set and measure S(|x - x'|) against ln Q
/// and the Mertens sum over p <= Q. All pairs are used when there are at
/// most `sample_cap` of them; otherwise `sample_cap` pairs are drawn with a
/// seeded generator. For sets of exact d-th powers, pass the exponent as
/// `power_degree` to also split S across the cyclotomic factors of
/// a^d - b^d.
pub fn smoothness_stats(
    x: &ExplicitSet,
    q: u64,
    sample_cap: u64,
    seed: u64,
    power_degree: Option<u32>,
) -> SmoothnessReport {
    assert!(x.len() >= 2, "smoothness statistics need at least two elements");
    assert!(q >= 2, "smoothness statistics need a cutoff of at least 2");
    assert!(sample_cap >= 1, "the sample cap must be positive");
    let table = sieve_primes(q).expect("a cutoff of at least 2 sieves");
    let primes = table.primes();
    let m = x.elements.len();
    let total_pairs = (m as u128) * (m as u128 - 1) / 2;
    let pairs: Vec<(u64, u64)> = if total_pairs <= sample_cap as u128 {
        let mut all = Vec::with_capacity(total_pairs as usize);
        for i in 0..m {
            for j in i + 1..m {
                all.push((x.elements[j], x.elements[i]));
            }
        }
        all
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..sample_cap)
            .map(|_| {
                let i = rng.random_range(0..m);
                let mut j = rng.random_range(0..m - 1);
                if j >= i {
                    j += 1;
                }
                let (a, b) = (x.elements[i], x.elements[j]);
                (a.max(b), a.min(b))
            })
            .collect()
    };
    let s_vals: Vec<f64> = pairs.par_iter().map(|&(hi, lo)| s_value(hi - lo, primes, q)).collect();
    let mean_s = s_vals.iter().sum::<f64>() / s_vals.len() as f64;
    let mut sorted = s_vals.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("smooth contents are finite"));
    let mid = sorted.len() / 2;
    let median_s = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    let mertens_sum = primes.iter().map(|&p| (p as f64).ln() / p as f64).sum();
    let cyclotomic = power_degree.map(|d| cyclo_parts(x, &pairs, primes, q, d));
    SmoothnessReport {
        q,
        pairs_sampled: pairs.len() as u64,
        mean_s,
        median_s,
        log_q: (q as f64).ln(),
        mertens_sum,
        cyclotomic,
    }
}

/// Mean smooth content of each cyclotomic factor of a^d - b^d over the
/// sampled pairs, one entry per divisor of d in ascending order.
fn cyclo_parts(
    x: &ExplicitSet,
    pairs: &[(u64, u64)],
    primes: &[u64],
    q: u64,
    d: u32,
) -> Vec<CycloPart> {
    assert!(d >= 1, "power sets need an exponent of at least one");
    let mut roots: BTreeMap<u64, u64> = BTreeMap::new();
    for &v in &x.elements {
        let a = nth_root_floor(v, d);
        assert!(
            (a as u128).pow(d) == v as u128,
            "cyclotomic decomposition needs exact {d}-th powers, got {v}"
        );
        roots.insert(v, a);
    }
    cyclotomics_dividing(d as u64)
        .iter()
        .map(|(&ell, phi)| {
            let vals: Vec<f64> = pairs
                .par_iter()
                .map(|&(hi, lo)| s_value(eval_homogeneous(phi, roots[&hi], roots[&lo]), primes, q))
                .collect();
            CycloPart { ell, mean_s: vals.iter().sum::<f64>() / vals.len() as f64 }
        })
        .collect()
}

/// The cyclotomic polynomials indexed by the divisors of d, computed by
/// dividing x^ell - 1 by the factors already known.
fn cyclotomics_dividing(d: u64) -> BTreeMap<u64, IntPoly> {
    let mut map: BTreeMap<u64, IntPoly> = BTreeMap::new();
    for ell in 1..=d {
        if d % ell != 0 {
            continue;
        }
        let mut num = &IntPoly::x_pow(ell as usize) - &IntPoly::one();
        for (m, phi) in &map {
            if ell % m == 0 {
                num = num.exact_div(phi).expect("cyclotomic factors divide x^ell - 1");
            }
        }
        map.insert(ell, num);
    }
    map
}

/// phi(a, b) homogenized to degree deg phi; positive for a > b >= 1.
fn eval_homogeneous(phi: &IntPoly, a: u64, b: u64) -> u64 {
    let e = phi.degree().expect("cyclotomic polynomials are nonzero");
    let (big_a, big_b) = (BigInt::from(a), BigInt::from(b));
    let mut apow = vec![BigInt::one()];
    let mut bpow = vec![BigInt::one()];
    for i in 1..=e {
        apow.push(&apow[i - 1] * &big_a);
        bpow.push(&bpow[i - 1] * &big_b);
    }
    let mut acc = BigInt::zero();
    for i in 0..=e {
        acc += phi.coeff(i) * &apow[i] * &bpow[e - i];
    }
    acc.to_u64().expect("cyclotomic factors of in-window differences fit in u64")
}

/// Exact size of [1, N] intersected with the integer value set of f.
pub fn intersect_count(f: &IntPoly, n: u64) -> Result<IntersectReport, SieveError> {
    let d = f.degree().expect("intersection counting needs a nonzero polynomial");
    assert!(d >= 2, "intersection counting needs degree at least two");
    let set = gen_poly_values(f, n)?;
    Ok(IntersectReport {
        n,
        degree: d as u32,
        count: set.len() as u64,
        root_scale: (n as f64).powf(1.0 / d as f64),
    })
}

/// Write a set as a `N <value>` header line followed by one element per line.
pub fn write_set(set: &ExplicitSet, path: &Path) -> Result<(), SieveError> {
    let mut text = String::with_capacity(set.len() * 8 + 16);
    writeln!(text, "N {}", set.n).expect("writing to a string cannot fail");
    for &v in &set.elements {
        writeln!(text, "{v}").expect("writing to a string cannot fail");
    }
    fs::write(path, text)?;
    Ok(())
}

/// Read a set written by [`write_set`]. Elements are sorted and deduplicated;
/// the label is taken from the file stem.
pub fn read_set(path: &Path) -> Result<ExplicitSet, SieveError> {
    let text = fs::read_to_string(path)?;
    let mut n: Option<u64> = None;
    let mut elements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match n {
            None => {
                let value = line.strip_prefix("N ").ok_or_else(|| {
                    SieveError::Malformed(format!("line {}: expected `N <value>` header", idx + 1))
                })?;
                n = Some(value.trim().parse().map_err(|_| {
                    SieveError::Malformed(format!("line {}: bad window size `{value}`", idx + 1))
                })?);
            }
            Some(_) => {
                elements.push(line.parse::<u64>().map_err(|_| {
                    SieveError::Malformed(format!("line {}: bad element `{line}`", idx + 1))
                })?);
            }
        }
    }
    let n = n.ok_or_else(|| SieveError::Malformed("missing `N <value>` header".into()))?;
    elements.sort_unstable();
    elements.dedup();
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "set".into());
    ExplicitSet::new(n, elements, label)
}
