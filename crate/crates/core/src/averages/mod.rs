//! Prime-averaged statistics: exact running averages of alpha_p, 1/alpha_p,
//! and m_p with convergence checkpoints, the closed-form identities for power
//! maps, and the pass/fail checks the CLI and acceptance suite drive.
//!
//! Sums over primes accumulate as one unreduced fraction so every mean is an
//! exact rational; floating point appears only in reports, as roundings of
//! exact values.

use crate::numcore::{gcd_u64, phi, rat_int, rat_to_f64, rat_u, ratio_to_f64, sieve_primes, tau, Rat};
use crate::polystats::{m_p_multi, stats_sweep, IntPoly, MultiPoly, PrimeStatRecord, StatsError};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

/// Default tolerance for prime means against integer targets at qmax = 2e5.
pub const DEFAULT_MEAN_TOLERANCE: (i64, i64) = (1, 20);
/// Default tolerance for multivariate means at desk-scale qmax.
pub const DEFAULT_MULTI_TOLERANCE: (i64, i64) = (1, 10);
/// Default tolerance for comparing mean alpha_p against a group density.
pub const DEFAULT_ALPHA_TOLERANCE: (i64, i64) = (1, 50);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AveragesError {
    #[error("no non-degenerate records at or below checkpoint {q}")]
    EmptySeries { q: u64 },
    #[error("checkpoints must be non-empty and strictly ascending")]
    BadCheckpoints,
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Exact sum of fractions kept unreduced: adding n/d costs two long-by-short
/// multiplications instead of a gcd, and the denominator stays the plain
/// product of the inputs. Reduction happens once, at readout.
#[derive(Debug, Clone)]
pub struct RatSum {
    num: BigInt,
    den: BigInt,
}

impl RatSum {
    pub fn zero() -> Self {
        RatSum { num: BigInt::ZERO, den: BigInt::one() }
    }

    pub fn add_ratio(&mut self, num: u64, den: u64) {
        assert!(den > 0);
        self.num = &self.num * den + BigInt::from(num) * &self.den;
        self.den *= den;
    }

    pub fn add_rat(&mut self, r: &Rat) {
        self.num = &self.num * r.denom() + r.numer() * &self.den;
        self.den *= r.denom();
    }

    /// Exact reduced value of (sum / divisor).
    pub fn mean(&self, divisor: u64) -> Rat {
        assert!(divisor > 0);
        Rat::new(self.num.clone(), &self.den * BigInt::from(divisor))
    }

    pub fn value(&self) -> Rat {
        Rat::new(self.num.clone(), self.den.clone())
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.num, &self.den)
    }
}

/// Which per-prime statistic a running average aggregates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatKind {
    Alpha,
    AlphaInv,
    M,
}

impl StatKind {
    pub fn label(self) -> &'static str {
        match self {
            StatKind::Alpha => "alpha",
            StatKind::AlphaInv => "alpha_inv",
            StatKind::M => "m",
        }
    }
}

/// One row of a convergence table: the exact mean over all usable primes
/// p <= q, and its exact distance to the target when one is set.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub q: u64,
    pub count: u64,
    pub mean: Rat,
    pub abs_error: Option<Rat>,
}

impl Checkpoint {
    pub fn mean_f64(&self) -> f64 {
        rat_to_f64(&self.mean)
    }

    pub fn abs_error_f64(&self) -> Option<f64> {
        self.abs_error.as_ref().map(rat_to_f64)
    }
}

/// A running average sampled at ascending checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSeries {
    pub stat: StatKind,
    pub target: Option<Rat>,
    pub checkpoints: Vec<Checkpoint>,
}

impl ConvergenceSeries {
    /// The mean over the full range (the last checkpoint's mean).
    pub fn final_mean(&self) -> &Rat {
        &self.checkpoints.last().expect("series is never empty").mean
    }

    pub fn final_count(&self) -> u64 {
        self.checkpoints.last().expect("series is never empty").count
    }
}

/// Geometric half-decade checkpoint grid 10^3, 10^3.5, 10^4, ... capped at
/// and always ending with qmax.
pub fn default_checkpoints(qmax: u64) -> Vec<u64> {
    let mut cps = Vec::new();
    let mut q = 1000u64;
    let mut half = false;
    while q < qmax {
        cps.push(q);
        q = if half { (q * 10) / 3162 * 1000 } else { q * 3162 / 1000 };
        half = !half;
    }
    cps.retain(|&c| c < qmax);
    cps.push(qmax);
    cps
}

/// Exact running average of one statistic over the non-degenerate records,
/// sampled at each checkpoint q (all primes p <= q contribute). Degenerate
/// records are excluded from numerator and denominator alike.
pub fn running_average(
    records: &[PrimeStatRecord],
    stat: StatKind,
    checkpoints: &[u64],
    target: Option<Rat>,
) -> Result<ConvergenceSeries, AveragesError> {
    if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AveragesError::BadCheckpoints);
    }
    let mut sum = RatSum::zero();
    let mut count = 0u64;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut cp_iter = checkpoints.iter().copied().peekable();
    let emit = |q: u64, count: u64, sum: &RatSum| -> Result<Checkpoint, AveragesError> {
        if count == 0 {
            return Err(AveragesError::EmptySeries { q });
        }
        let mean = sum.mean(count);
        let abs_error = target.as_ref().map(|t| (&mean - t).abs());
        Ok(Checkpoint { q, count, mean, abs_error })
    };
    for rec in records {
        while let Some(&q) = cp_iter.peek() {
            if rec.p <= q {
                break;
            }
            cp_iter.next();
            out.push(emit(q, count, &sum)?);
        }
        if rec.degenerate {
            continue;
        }
        count += 1;
        match stat {
            StatKind::Alpha => sum.add_ratio(rec.value_set_size, rec.p),
            StatKind::AlphaInv => sum.add_ratio(rec.p, rec.value_set_size),
            StatKind::M => sum.add_rat(&rec.m_p),
        }
    }
    for q in cp_iter {
        out.push(emit(q, count, &sum)?);
    }
    Ok(ConvergenceSeries { stat, target, checkpoints: out })
}

// ---------------------------------------------------------------------------
// Closed forms for power maps.
// ---------------------------------------------------------------------------

/// The exact values of the two unit-group averages that govern x^d:
///
///   mean_alpha_inv = (1/phi(d)) * sum over units a of gcd(a-1, d)
///   mean_alpha     = (1/phi(d)) * sum over units a of 1/gcd(a-1, d)
///
/// The first equals tau(d); the second equals phi(d)/d for squarefree d and
/// is at least (phi(d)/d)^2 for every d.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMapIdentities {
    pub d: u64,
    pub mean_alpha_inv: Rat,
    pub mean_alpha: Rat,
}

pub fn power_map_identities(d: u64) -> Result<PowerMapIdentities, crate::numcore::NumError> {
    let phi_d = phi(d)?;
    if d == 1 {
        return Ok(PowerMapIdentities {
            d,
            mean_alpha_inv: rat_int(1),
            mean_alpha: rat_int(1),
        });
    }
    let mut gcd_sum = 0u64;
    let mut inv_sum = RatSum::zero();
    for a in 1..=d {
        if gcd_u64(a, d) != 1 {
            continue;
        }
        let g = if a == 1 { d } else { gcd_u64(a - 1, d) };
        gcd_sum += g;
        inv_sum.add_ratio(1, g);
    }
    Ok(PowerMapIdentities {
        d,
        mean_alpha_inv: rat_u(gcd_sum, phi_d),
        mean_alpha: inv_sum.mean(phi_d),
    })
}

// ---------------------------------------------------------------------------
// Report-producing checks.
// ---------------------------------------------------------------------------

/// Outcome of one empirical check. The pass decision is made on exact
/// rationals; the floating-point fields are display roundings.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub observed: f64,
    pub target: f64,
    pub tolerance: f64,
    pub count: u64,
    pub passed: bool,
    pub detail: String,
}

fn report(
    name: String,
    observed: &Rat,
    target: &Rat,
    tolerance: &Rat,
    count: u64,
    passed: bool,
    detail: String,
) -> CheckReport {
    CheckReport {
        name,
        observed: rat_to_f64(observed),
        target: rat_to_f64(target),
        tolerance: rat_to_f64(tolerance),
        count,
        passed,
        detail,
    }
}

fn within(observed: &Rat, target: &Rat, tolerance: &Rat) -> bool {
    (observed - target).abs() <= *tolerance
}

/// Mean of 1/alpha_p over p <= qmax compared against its divisor-count
/// ceiling tau(deg f); passes when the mean does not exceed the ceiling by
/// more than the tolerance.
pub fn check_alpha_inv_mean(
    f: &IntPoly,
    qmax: u64,
    tolerance: &Rat,
) -> Result<CheckReport, AveragesError> {
    let records = stats_sweep(f, qmax)?;
    let d = f.degree().expect("validated by the sweep") as u64;
    let series = running_average(&records, StatKind::AlphaInv, &[qmax], None)?;
    let mean = series.final_mean();
    let target = rat_u(tau(d).expect("d >= 1"), 1);
    let passed = mean <= &(&target + tolerance);
    Ok(report(
        format!("alpha-inv-mean({f})"),
        mean,
        &target,
        tolerance,
        series.final_count(),
        passed,
        format!("mean of 1/alpha_p <= tau({d}) + tolerance over primes <= {qmax}"),
    ))
}

/// Mean of m_p over p <= qmax against a supplied irreducible-factor count s;
/// passes when |mean - s| <= tolerance. s comes from the caller (factorlab
/// or a curated family) so this check stays independent of the factorizer.
pub fn check_pair_mean(
    f: &IntPoly,
    s: u64,
    qmax: u64,
    tolerance: &Rat,
) -> Result<CheckReport, AveragesError> {
    let records = stats_sweep(f, qmax)?;
    let target = rat_u(s, 1);
    let series = running_average(&records, StatKind::M, &[qmax], Some(target.clone()))?;
    let mean = series.final_mean();
    let passed = within(mean, &target, tolerance);
    Ok(report(
        format!("pair-mean({f})"),
        mean,
        &target,
        tolerance,
        series.final_count(),
        passed,
        format!("|mean of m_p - {s}| <= tolerance over primes <= {qmax}"),
    ))
}

/// Multivariate analogue of `check_pair_mean`: mean of the zero-density
/// statistic of g against a supplied factor count s.
pub fn check_multi_pair_mean(
    g: &MultiPoly,
    s: u64,
    qmax: u64,
    budget: u64,
    tolerance: &Rat,
) -> Result<CheckReport, AveragesError> {
    let table = sieve_primes(qmax).map_err(|_| StatsError::EmptySweep { qmax })?;
    let mut sum = RatSum::zero();
    let mut count = 0u64;
    for p in table.iter() {
        let rec = m_p_multi(g, p, budget)?;
        if rec.degenerate {
            continue;
        }
        sum.add_rat(&rec.m_p);
        count += 1;
    }
    if count == 0 {
        return Err(AveragesError::EmptySeries { q: qmax });
    }
    let mean = sum.mean(count);
    let target = rat_u(s, 1);
    let passed = within(&mean, &target, tolerance);
    Ok(report(
        format!("multi-pair-mean({g})"),
        &mean,
        &target,
        tolerance,
        count,
        passed,
        format!("|mean of m_p(g) - {s}| <= tolerance over primes <= {qmax}"),
    ))
}

/// For f believed indecomposable (prime degree suffices), the mean of m_p
/// must stay at or below 2 up to tolerance. The report also carries the mean
/// of 1/alpha_p from the same sweep.
pub fn check_indecomposable(
    f: &IntPoly,
    qmax: u64,
    tolerance: &Rat,
) -> Result<CheckReport, AveragesError> {
    let records = stats_sweep(f, qmax)?;
    let m_series = running_average(&records, StatKind::M, &[qmax], None)?;
    let inv_series = running_average(&records, StatKind::AlphaInv, &[qmax], None)?;
    let mean = m_series.final_mean();
    let target = rat_int(2);
    let passed = mean <= &(&target + tolerance);
    Ok(report(
        format!("indecomposable({f})"),
        mean,
        &target,
        tolerance,
        m_series.final_count(),
        passed,
        format!(
            "mean of m_p <= 2 + tolerance over primes <= {qmax}; mean of 1/alpha_p = {:.6}",
            rat_to_f64(inv_series.final_mean())
        ),
    ))
}

/// Mean of alpha_p against the fixed-point density alpha_G of the
/// polynomial's group, supplied by the caller.
pub fn check_alpha_vs_group(
    f: &IntPoly,
    alpha_g: &Rat,
    qmax: u64,
    tolerance: &Rat,
) -> Result<CheckReport, AveragesError> {
    let records = stats_sweep(f, qmax)?;
    let series = running_average(&records, StatKind::Alpha, &[qmax], Some(alpha_g.clone()))?;
    let mean = series.final_mean();
    let passed = within(mean, alpha_g, tolerance);
    Ok(report(
        format!("alpha-vs-group({f})"),
        mean,
        alpha_g,
        tolerance,
        series.final_count(),
        passed,
        format!("|mean of alpha_p - alpha(G)| <= tolerance over primes <= {qmax}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{is_squarefree, rat};

    #[test]
    fn identity_map_averages_are_one() {
        let f = IntPoly::from_i64(&[0, 1]);
        let records = stats_sweep(&f, 100).unwrap();
        for stat in [StatKind::Alpha, StatKind::AlphaInv, StatKind::M] {
            let series =
                running_average(&records, stat, &[10, 50, 100], Some(rat_int(1))).unwrap();
            for cp in &series.checkpoints {
                assert_eq!(cp.mean, rat_int(1));
                assert_eq!(cp.abs_error.as_ref().unwrap(), &rat_int(0));
            }
            assert_eq!(series.checkpoints.last().unwrap().count, 25);
        }
    }

    #[test]
    fn counts_are_nondecreasing_and_exact() {
        let f = IntPoly::from_i64(&[0, 0, 1]);
        let records = stats_sweep(&f, 1000).unwrap();
        let series =
            running_average(&records, StatKind::M, &[10, 100, 500, 1000], None).unwrap();
        let counts: Vec<u64> = series.checkpoints.iter().map(|c| c.count).collect();
        assert_eq!(counts, vec![4, 25, 95, 168]);
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn square_pair_mean_matches_independent_sum() {
        // m_p(x^2) = 2 - 1/p for odd p and exactly 1 at p = 2, so the mean
        // over p <= Q is (1 + sum over odd p of (2 - 1/p)) / pi(Q). The
        // oracle accumulates that form with reduced rational arithmetic.
        let f = IntPoly::from_i64(&[0, 0, 1]);
        let q = 10_000;
        let records = stats_sweep(&f, q).unwrap();
        let series = running_average(&records, StatKind::M, &[q], Some(rat_int(2))).unwrap();
        let mut oracle = rat_int(1);
        let mut n = 1u64;
        for p in sieve_primes(q).unwrap().iter().skip(1) {
            oracle += rat_int(2) - rat_u(1, p);
            n += 1;
        }
        oracle /= rat_u(n, 1);
        assert_eq!(series.final_mean(), &oracle);
        assert!(series.checkpoints[0].abs_error.as_ref().unwrap() < &rat(1, 100));
    }

    #[test]
    fn square_alpha_mean_near_half() {
        let f = IntPoly::from_i64(&[0, 0, 1]);
        let records = stats_sweep(&f, 10_000).unwrap();
        let series =
            running_average(&records, StatKind::Alpha, &[10_000], Some(rat(1, 2))).unwrap();
        assert!(series.checkpoints[0].abs_error.as_ref().unwrap() < &rat(1, 100));
    }

    #[test]
    fn degenerate_records_are_excluded() {
        let f = IntPoly::from_i64(&[1, 0, 7]);
        let records = stats_sweep(&f, 100).unwrap();
        let series = running_average(&records, StatKind::Alpha, &[100], None).unwrap();
        assert_eq!(series.final_count(), 24); // p = 7 dropped
    }

    #[test]
    fn empty_and_malformed_checkpoints_error() {
        let f = IntPoly::from_i64(&[0, 0, 1]);
        let records = stats_sweep(&f, 100).unwrap();
        assert!(matches!(
            running_average(&records, StatKind::M, &[], None),
            Err(AveragesError::BadCheckpoints)
        ));
        assert!(matches!(
            running_average(&records, StatKind::M, &[50, 50], None),
            Err(AveragesError::BadCheckpoints)
        ));
        // A checkpoint below the first prime has no usable records.
        assert!(matches!(
            running_average(&records, StatKind::M, &[1, 100], None),
            Err(AveragesError::EmptySeries { q: 1 })
        ));
    }

    #[test]
    fn power_map_identity_values() {
        let cases = [(1u64, 1u64), (2, 2), (3, 2), (4, 3), (6, 4), (8, 4), (12, 6)];
        for (d, t) in cases {
            let ids = power_map_identities(d).unwrap();
            assert_eq!(ids.mean_alpha_inv, rat_u(t, 1), "d={d}");
            assert_eq!(ids.mean_alpha_inv, rat_u(tau(d).unwrap(), 1));
        }
    }

    #[test]
    fn power_map_alpha_mean_squarefree_and_bound() {
        for d in 1..=30u64 {
            let ids = power_map_identities(d).unwrap();
            let phi_over_d = rat_u(phi(d).unwrap(), d);
            if is_squarefree(d).unwrap() {
                assert_eq!(ids.mean_alpha, phi_over_d, "d={d}");
            }
            assert!(ids.mean_alpha >= &phi_over_d * &phi_over_d, "d={d}");
        }
        assert_eq!(power_map_identities(6).unwrap().mean_alpha, rat(1, 3));
    }

    #[test]
    fn power_map_mean_matches_sweep_envelope() {
        // Empirical mean of 1/alpha_p at Q and the closed form differ by at
        // most 10 * Q^(-1/3) for Q >= 10^4; tested at the smallest such Q
        // where the envelope is 10/21.54 ~ 0.46.
        let q = 10_000u64;
        let envelope = 10.0 / (q as f64).powf(1.0 / 3.0);
        for d in [2usize, 3, 4, 6] {
            let f = IntPoly::x_pow(d);
            let records = stats_sweep(&f, q).unwrap();
            let series = running_average(&records, StatKind::AlphaInv, &[q], None).unwrap();
            let closed = power_map_identities(d as u64).unwrap().mean_alpha_inv;
            let gap = rat_to_f64(&(series.final_mean() - &closed).abs());
            assert!(gap <= envelope, "d={d} gap={gap} envelope={envelope}");
        }
    }

    #[test]
    fn alpha_inv_never_exceeds_pair_mean() {
        // Cauchy-Schwarz per prime: 1/alpha_p <= m_p, hence also on averages.
        for coeffs in [&[0i64, 0, 1][..], &[0, 1, 0, 1], &[1, -2, 0, 0, 1]] {
            let f = IntPoly::from_i64(coeffs);
            let records = stats_sweep(&f, 500).unwrap();
            for rec in records.iter().filter(|r| !r.degenerate) {
                let inv = rat_u(rec.p, rec.value_set_size);
                assert!(inv <= rec.m_p, "p={} f={f}", rec.p);
            }
            let inv = running_average(&records, StatKind::AlphaInv, &[500], None).unwrap();
            let m = running_average(&records, StatKind::M, &[500], None).unwrap();
            assert!(inv.final_mean() <= m.final_mean());
        }
    }

    #[test]
    fn checks_report_sane_results() {
        let tol = rat(1, 20);
        let r = check_alpha_inv_mean(&IntPoly::x_pow(4), 2000, &rat(1, 2)).unwrap();
        assert!(r.passed);
        assert_eq!(r.target, 3.0);

        let r = check_pair_mean(&IntPoly::from_i64(&[0, 1]), 1, 1000, &tol).unwrap();
        assert!(r.passed);
        assert_eq!(r.observed, 1.0);

        let r = check_indecomposable(&IntPoly::from_i64(&[0, 1, 0, 1]), 2000, &tol).unwrap();
        assert!(r.passed, "x^3 + x pair mean {}", r.observed);

        let r = check_alpha_vs_group(&IntPoly::from_i64(&[0, 1]), &rat_int(1), 1000, &tol)
            .unwrap();
        assert!(r.passed);

        // x^2 has mean alpha near 1/2, far from 1: the check must fail.
        let r =
            check_alpha_vs_group(&IntPoly::x_pow(2), &rat_int(1), 1000, &rat(1, 50)).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn multi_check_on_difference_of_squares() {
        let f = IntPoly::x_pow(2);
        let gx = MultiPoly::from_univariate(&f, 0, 2).unwrap();
        let gy = MultiPoly::from_univariate(&f, 1, 2).unwrap();
        let g = gx.sub(&gy);
        let r = check_multi_pair_mean(&g, 2, 1000, 10_000_000, &rat(1, 10)).unwrap();
        assert!(r.passed, "observed {}", r.observed);
    }

    #[test]
    fn default_checkpoint_grid() {
        assert_eq!(default_checkpoints(200_000), vec![1000, 3162, 10_000, 31_620, 100_000, 200_000]);
        assert_eq!(default_checkpoints(500), vec![500]);
        assert_eq!(default_checkpoints(1000), vec![1000]);
    }

    #[test]
    fn ratsum_matches_reduced_arithmetic() {
        let mut sum = RatSum::zero();
        let mut reference = rat_int(0);
        for (n, d) in [(1u64, 2u64), (3, 8), (5, 7), (2, 9), (11, 13)] {
            sum.add_ratio(n, d);
            reference += rat_u(n, d);
        }
        assert_eq!(sum.value(), reference);
        sum.add_rat(&rat(-7, 3));
        reference += rat(-7, 3);
        assert_eq!(sum.value(), reference);
        assert!((sum.to_f64() - rat_to_f64(&reference)).abs() < 1e-12);
    }
}
