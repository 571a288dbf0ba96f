//! Command dispatch: resolve flags against the config file, run the
//! requested computation inside a scoped thread pool, and write the
//! artifacts. Every command ends in [`finish`], which emits `summary.json`
//! and reduces the check reports to the process exit code.

use std::path::PathBuf;

use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use valset::averages::{
    DEFAULT_ALPHA_TOLERANCE, DEFAULT_MEAN_TOLERANCE, DEFAULT_MULTI_TOLERANCE,
};
use valset::numcore::nth_root_floor;
use valset::{
    alpha_of_set, alpha_recursion, burnside_orbits, check_alpha_inv_mean, check_alpha_vs_group,
    check_indecomposable, check_multi_pair_mean, check_pair_mean, close_generators,
    count_bivariate_factors, default_checkpoints, factor_z, fn_family, gallagher_bound,
    gen_poly_values, gen_powers, group_rank, intersect_count, multi_sweep, optimize_q, rat,
    rat_to_f64, rat_u, read_set, running_average, s_cross_check, sample_wreath_tower,
    sieve_primes, smoothness_stats, stats_sweep, symmetric_alpha, wreath_square, write_set,
    AveragesError, CheckReport, Checkpoint, ConvergenceSeries, CrossCheckReport, ExplicitSet,
    FactorError, GroupError, IntPoly, MultiStatRecord, Perm, PermGroup, Rat, RatSum, SCount,
    SMethod, SieveError, SieveReport, StatKind, StatsError, DEFAULT_CLOSURE_CAP,
    DEFAULT_MULTI_BUDGET, DEFAULT_SAMPLE_CAP,
};

use crate::config::FileConfig;
use crate::output::{
    check_json, convergence_csv, multi_prime_csv, per_prime_csv, rat_json, residues_csv,
    sieve_json, Artifacts,
};
use crate::parse::{parse_poly, ParsedPoly};
use crate::{Cli, CliError, Command};

/// Exact recursion levels past this need more big-integer bits than the
/// process can afford (the denominator exponent doubles per level).
const MAX_FAMILY_LEVEL: u32 = 32;

/// Largest wreath tower level the sampler will accept (degree 2^n).
const MAX_WREATH_LEVEL: u32 = 16;

const DEFAULT_WREATH_SAMPLES: u64 = 100_000;
const DEFAULT_BIVARIATE_TRIALS: u32 = 5;
const DEFAULT_CROSS_CHECK_QMAX: u64 = 10_000;
const DEFAULT_SAMPLED_ALPHA_TOLERANCE: (i64, i64) = (1, 200);

pub fn dispatch(cli: Cli) -> Result<bool, CliError> {
    let cfg = FileConfig::load(cli.config.as_deref())?;
    let seed = cfg.u64(cli.seed, "seed")?.unwrap_or(0);
    let tolerance = match cfg.string(cli.tolerance, "tolerance")? {
        Some(text) => Some(parse_rat_arg(&text)?),
        None => None,
    };
    let threads = cfg.usize(cli.threads, "threads")?;
    let out = cfg.path(cli.out, "out")?.unwrap_or_else(|| PathBuf::from("."));
    let ctx = Ctx {
        seed,
        tolerance,
        command_name: command_name(&cli.command),
        artifacts: Artifacts::new(out)?,
        params: Map::new(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Resource(format!("thread pool: {e}")))?;
    pool.install(|| run_command(cli.command, &cfg, ctx))
}

struct Ctx {
    seed: u64,
    tolerance: Option<Rat>,
    command_name: &'static str,
    artifacts: Artifacts,
    params: Map<String, Value>,
}

impl Ctx {
    fn tolerance_or(&self, default: (i64, i64)) -> Rat {
        self.tolerance.clone().unwrap_or_else(|| rat(default.0, default.1))
    }

    fn param(&mut self, key: &str, value: Value) {
        self.params.insert(key.to_string(), value);
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Stats { .. } => "stats",
        Command::Avg { .. } => "avg",
        Command::Family { .. } => "family",
        Command::Group { .. } => "group",
        Command::Factor { .. } => "factor",
        Command::Sieve { .. } => "sieve",
        Command::Smooth { .. } => "smooth",
        Command::Intersect { .. } => "intersect",
    }
}

/// Write `summary.json` and fold the checks into the exit verdict.
fn finish(mut ctx: Ctx, report: Value, checks: &[CheckReport]) -> Result<bool, CliError> {
    let passed = checks.iter().all(|c| c.passed);
    let summary = json!({
        "command": ctx.command_name,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": ctx.seed,
        "tolerance": ctx.tolerance.as_ref().map(rat_json),
        "params": Value::Object(ctx.params.clone()),
        "report": report,
        "checks": checks.iter().map(check_json).collect::<Vec<_>>(),
        "passed": passed,
        "artifacts": ctx.artifacts.written(),
    });
    ctx.artifacts.write("summary.json", &format!("{summary:#}\n"))?;
    Ok(passed)
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

/// Accept tolerances written as a decimal (`0.05`) or a fraction (`1/20`).
fn parse_rat_arg(text: &str) -> Result<Rat, CliError> {
    let err = || {
        CliError::Usage(format!(
            "tolerance `{text}` must be a decimal like 0.05 or a fraction like 1/20"
        ))
    };
    let t = text.trim();
    if t.starts_with('-') {
        return Err(CliError::Usage(format!("tolerance must be nonnegative, got `{text}`")));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| err())?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        if d <= 0 {
            return Err(err());
        }
        return Ok(rat(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| err())? };
        let digits: i64 = frac.parse().map_err(|_| err())?;
        let scale = 10i64.pow(frac.len() as u32);
        return Ok(rat(int, 1) + rat(digits, scale));
    }
    let n: i64 = t.parse().map_err(|_| err())?;
    Ok(rat(n, 1))
}

fn stats_err(e: StatsError) -> CliError {
    match e {
        StatsError::BudgetExceeded { .. } | StatsError::PrimeTooLarge { .. } => {
            CliError::Resource(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    }
}

fn averages_err(e: AveragesError) -> CliError {
    match e {
        AveragesError::Stats(inner) => stats_err(inner),
        _ => CliError::Usage(e.to_string()),
    }
}

fn factor_err(e: FactorError) -> CliError {
    match e {
        FactorError::DegreeBudget { .. }
        | FactorError::CoefficientBudget { .. }
        | FactorError::RecombinationBudget { .. }
        | FactorError::SearchExhausted { .. }
        | FactorError::NoUsablePrimes { .. } => CliError::Resource(e.to_string()),
        FactorError::Stats(inner) => stats_err(inner),
        _ => CliError::Usage(e.to_string()),
    }
}

fn group_err(e: GroupError) -> CliError {
    match e {
        GroupError::NotEnumerated => CliError::Resource(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

fn sieve_err(e: SieveError) -> CliError {
    match e {
        SieveError::Budget { .. } => CliError::Resource(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

fn parse_poly_arg(text: &str) -> Result<ParsedPoly, CliError> {
    parse_poly(text).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_uni_arg(text: &str) -> Result<IntPoly, CliError> {
    match parse_poly_arg(text)? {
        ParsedPoly::Uni(f) => Ok(f),
        ParsedPoly::Multi(_) => {
            Err(CliError::Usage(format!("`{text}` must be univariate in x")))
        }
    }
}

fn exact_check(name: &str, observed: &Rat, target: &Rat, count: u64, detail: String) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        observed: rat_to_f64(observed),
        target: rat_to_f64(target),
        tolerance: 0.0,
        count,
        passed: observed == target,
        detail,
    }
}

fn within_check(
    name: &str,
    observed: &Rat,
    target: &Rat,
    tolerance: &Rat,
    count: u64,
    detail: String,
) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        observed: rat_to_f64(observed),
        target: rat_to_f64(target),
        tolerance: rat_to_f64(tolerance),
        count,
        passed: (observed - target).abs() <= *tolerance,
        detail,
    }
}

fn run_command(command: Command, cfg: &FileConfig, mut ctx: Ctx) -> Result<bool, CliError> {
    match command {
        Command::Stats { poly, qmax, budget } => {
            let poly_text = require(cfg.string(poly, "poly")?, "poly")?;
            let qmax = require(cfg.u64(qmax, "qmax")?, "qmax")?;
            let parsed = parse_poly_arg(&poly_text)?;
            ctx.param("poly", json!(parsed.to_string()));
            ctx.param("qmax", json!(qmax));
            match parsed {
                ParsedPoly::Uni(f) => {
                    let records = stats_sweep(&f, qmax).map_err(stats_err)?;
                    ctx.artifacts.write("per_prime.csv", &per_prime_csv(&records))?;
                    let degenerate = records.iter().filter(|r| r.degenerate).count();
                    let payload = json!({
                        "kind": "univariate",
                        "primes": records.len(),
                        "degenerate": degenerate,
                    });
                    finish(ctx, payload, &[])
                }
                ParsedPoly::Multi(g) => {
                    let budget =
                        cfg.u64(budget, "budget")?.unwrap_or(DEFAULT_MULTI_BUDGET);
                    ctx.param("budget", json!(budget));
                    let records = multi_sweep(&g, qmax, budget).map_err(stats_err)?;
                    ctx.artifacts.write("per_prime.csv", &multi_prime_csv(&records))?;
                    let degenerate = records.iter().filter(|r| r.degenerate).count();
                    let payload = json!({
                        "kind": "multivariate",
                        "variables": g.nvars(),
                        "primes": records.len(),
                        "degenerate": degenerate,
                    });
                    finish(ctx, payload, &[])
                }
            }
        }

        Command::Avg { poly, qmax, check, factors, group, budget } => {
            let poly_text = require(cfg.string(poly, "poly")?, "poly")?;
            let qmax = require(cfg.u64(qmax, "qmax")?, "qmax")?;
            let check_name = require(cfg.string(check, "check")?, "check")?;
            let factors = cfg.u64(factors, "factors")?;
            let group_spec = cfg.string(group, "group")?;
            let parsed = parse_poly_arg(&poly_text)?;
            ctx.param("poly", json!(parsed.to_string()));
            ctx.param("qmax", json!(qmax));
            ctx.param("check", json!(check_name));
            run_avg(ctx, cfg, &check_name, parsed, qmax, factors, group_spec, budget)
        }

        Command::Family { n, qmax } => {
            let n = require(cfg.u32(n, "n")?, "n")?;
            let qmax = cfg.u64(qmax, "qmax")?;
            run_family(ctx, n, qmax)
        }

        Command::Group { wreath_n, named, gens, symmetric, samples } => {
            let wreath_n = cfg.u32(wreath_n, "wreath-n")?;
            let named = cfg.string(named, "named")?;
            let gens = cfg.string(gens, "gens")?;
            let symmetric = cfg.u32(symmetric, "symmetric")?;
            let samples = cfg.u64(samples, "samples")?;
            let given = [
                wreath_n.is_some(),
                named.is_some(),
                gens.is_some(),
                symmetric.is_some(),
            ]
            .iter()
            .filter(|&&b| b)
            .count();
            if given != 1 {
                return Err(CliError::Usage(
                    "give exactly one of --wreath-n, --named, --gens, --symmetric".into(),
                ));
            }
            if let Some(n) = wreath_n {
                run_group_wreath(ctx, n, samples)
            } else if let Some(name) = named {
                run_group_named(ctx, &name)
            } else if let Some(text) = gens {
                run_group_gens(ctx, &text)
            } else {
                run_group_symmetric(ctx, symmetric.expect("one selector is set"))
            }
        }

        Command::Factor { poly, bivariate, trials, cross_check, qmax, group } => {
            let poly_text = require(cfg.string(poly, "poly")?, "poly")?;
            let bivariate = cfg.flag(bivariate, "bivariate")?;
            let trials = cfg.u64(trials, "trials")?;
            let cross_check = cfg.flag(cross_check, "cross-check")?;
            let qmax = cfg.u64(qmax, "qmax")?;
            let group_spec = cfg.string(group, "group")?;
            let f = parse_uni_arg(&poly_text)?;
            ctx.param("poly", json!(f.to_string()));
            run_factor(ctx, &f, bivariate, trials, cross_check, qmax, group_spec)
        }

        Command::Sieve { set, n, q, q_grid, export } => {
            let set_spec = require(cfg.string(set, "set")?, "set")?;
            let n = cfg.u64(n, "n")?;
            let q = cfg.u64(q, "q")?;
            let q_grid = cfg.string(q_grid, "q-grid")?;
            let export = cfg.path(export, "export")?;
            run_sieve(ctx, &set_spec, n, q, q_grid, export)
        }

        Command::Smooth { set, n, q, sample_cap, power_degree } => {
            let set_spec = require(cfg.string(set, "set")?, "set")?;
            let n = cfg.u64(n, "n")?;
            let q = require(cfg.u64(q, "q")?, "q")?;
            let sample_cap = cfg.u64(sample_cap, "sample-cap")?.unwrap_or(DEFAULT_SAMPLE_CAP);
            let power_degree = cfg.u32(power_degree, "power-degree")?;
            run_smooth(ctx, &set_spec, n, q, sample_cap, power_degree)
        }

        Command::Intersect { poly, n } => {
            let poly_text = require(cfg.string(poly, "poly")?, "poly")?;
            let n = require(cfg.u64(n, "n")?, "n")?;
            let f = parse_uni_arg(&poly_text)?;
            if f.degree().is_none_or(|d| d < 2) {
                return Err(CliError::Usage(
                    "intersection counting needs a polynomial of degree at least two".into(),
                ));
            }
            ctx.param("poly", json!(f.to_string()));
            ctx.param("n", json!(n));
            let report = intersect_count(&f, n).map_err(sieve_err)?;
            let payload = json!({
                "degree": report.degree,
                "count": report.count,
                "root_scale_approx": report.root_scale,
            });
            finish(ctx, payload, &[])
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_avg(
    mut ctx: Ctx,
    cfg: &FileConfig,
    check_name: &str,
    parsed: ParsedPoly,
    qmax: u64,
    factors: Option<u64>,
    group_spec: Option<String>,
    budget: Option<u64>,
) -> Result<bool, CliError> {
    match check_name {
        "alpha-inv" => {
            let f = uni_for_check(parsed, check_name)?;
            let tol = ctx.tolerance_or(DEFAULT_MEAN_TOLERANCE);
            let report = check_alpha_inv_mean(&f, qmax, &tol).map_err(averages_err)?;
            let d = f.degree().expect("checked polynomials are nonconstant") as u64;
            let target = rat_u(valset::numcore::tau(d).expect("degree is at least one"), 1);
            let series = uni_series(&f, qmax, StatKind::AlphaInv, target)?;
            ctx.artifacts.write("convergence.csv", &convergence_csv(&series))?;
            finish(ctx, series_payload(&series), &[report])
        }
        "pair-mean" => {
            let f = uni_for_check(parsed, check_name)?;
            let s = match factors {
                Some(s) => s,
                None => {
                    count_bivariate_factors(&f, DEFAULT_BIVARIATE_TRIALS, ctx.seed)
                        .map_err(factor_err)?
                        .value
                }
            };
            ctx.param("factors", json!(s));
            let tol = ctx.tolerance_or(DEFAULT_MEAN_TOLERANCE);
            let report = check_pair_mean(&f, s, qmax, &tol).map_err(averages_err)?;
            let series = uni_series(&f, qmax, StatKind::M, rat_u(s, 1))?;
            ctx.artifacts.write("convergence.csv", &convergence_csv(&series))?;
            finish(ctx, series_payload(&series), &[report])
        }
        "indecomposable" => {
            let f = uni_for_check(parsed, check_name)?;
            let tol = ctx.tolerance_or(DEFAULT_MEAN_TOLERANCE);
            let report = check_indecomposable(&f, qmax, &tol).map_err(averages_err)?;
            let series = uni_series(&f, qmax, StatKind::M, rat(2, 1))?;
            ctx.artifacts.write("convergence.csv", &convergence_csv(&series))?;
            finish(ctx, series_payload(&series), &[report])
        }
        "alpha-group" => {
            let f = uni_for_check(parsed, check_name)?;
            let spec = require(group_spec, "group")?;
            let resolved = resolve_group(&spec)?;
            let alpha_g = resolved.known_alpha()?;
            ctx.param("group", json!(resolved.label));
            let tol = ctx.tolerance_or(DEFAULT_ALPHA_TOLERANCE);
            let report =
                check_alpha_vs_group(&f, &alpha_g, qmax, &tol).map_err(averages_err)?;
            let series = uni_series(&f, qmax, StatKind::Alpha, alpha_g)?;
            ctx.artifacts.write("convergence.csv", &convergence_csv(&series))?;
            finish(ctx, series_payload(&series), &[report])
        }
        "multi" => {
            let ParsedPoly::Multi(g) = parsed else {
                return Err(CliError::Usage(
                    "check `multi` needs a polynomial in at least two variables".into(),
                ));
            };
            let s = require(factors, "factors")?;
            ctx.param("factors", json!(s));
            let budget = cfg.u64(budget, "budget")?.unwrap_or(DEFAULT_MULTI_BUDGET);
            ctx.param("budget", json!(budget));
            let tol = ctx.tolerance_or(DEFAULT_MULTI_TOLERANCE);
            let report =
                check_multi_pair_mean(&g, s, qmax, budget, &tol).map_err(averages_err)?;
            let records = multi_sweep(&g, qmax, budget).map_err(stats_err)?;
            let series = multi_series(&records, qmax, rat_u(s, 1));
            ctx.artifacts.write("convergence.csv", &convergence_csv(&series))?;
            finish(ctx, series_payload(&series), &[report])
        }
        other => Err(CliError::Usage(format!(
            "unknown check `{other}`; expected one of alpha-inv, pair-mean, multi, \
             indecomposable, alpha-group"
        ))),
    }
}

fn uni_for_check(parsed: ParsedPoly, check_name: &str) -> Result<IntPoly, CliError> {
    match parsed {
        ParsedPoly::Uni(f) => Ok(f),
        ParsedPoly::Multi(_) => Err(CliError::Usage(format!(
            "check `{check_name}` needs a univariate polynomial in x"
        ))),
    }
}

fn uni_series(
    f: &IntPoly,
    qmax: u64,
    stat: StatKind,
    target: Rat,
) -> Result<ConvergenceSeries, CliError> {
    let records = stats_sweep(f, qmax).map_err(stats_err)?;
    running_average(&records, stat, &default_checkpoints(qmax), Some(target))
        .map_err(averages_err)
}

/// Running mean of m_p for multivariate records on the default checkpoint
/// grid; checkpoints before the first usable prime are dropped.
fn multi_series(records: &[MultiStatRecord], qmax: u64, target: Rat) -> ConvergenceSeries {
    let mut checkpoints = Vec::new();
    let mut sum = RatSum::zero();
    let mut count = 0u64;
    let mut idx = 0usize;
    for q in default_checkpoints(qmax) {
        while idx < records.len() && records[idx].p <= q {
            let r = &records[idx];
            if !r.degenerate {
                sum.add_rat(&r.m_p);
                count += 1;
            }
            idx += 1;
        }
        if count == 0 {
            continue;
        }
        let mean = sum.mean(count);
        let abs_error = Some((&mean - &target).abs());
        checkpoints.push(Checkpoint { q, count, mean, abs_error });
    }
    ConvergenceSeries { stat: StatKind::M, target: Some(target), checkpoints }
}

fn series_payload(series: &ConvergenceSeries) -> Value {
    json!({
        "stat": series.stat.label(),
        "target": series.target.as_ref().map(rat_json),
        "final_mean": rat_json(series.final_mean()),
        "primes": series.final_count(),
    })
}

fn run_family(mut ctx: Ctx, n: u32, qmax: Option<u64>) -> Result<bool, CliError> {
    if n > MAX_FAMILY_LEVEL {
        return Err(CliError::Resource(format!(
            "family level {n}: the exact recursion needs 2^{n} - 1 denominator bits"
        )));
    }
    let family = fn_family(n).map_err(group_err)?;
    ctx.param("n", json!(n));
    let mut checks = vec![{
        let target = rat(2, n as i64);
        CheckReport {
            name: "family-bound".into(),
            observed: rat_to_f64(&family.alpha),
            target: rat_to_f64(&target),
            tolerance: 0.0,
            count: n as u64,
            passed: family.alpha <= target,
            detail: format!("a_{n} <= 2/{n} exactly"),
        }
    }];
    let mut payload = json!({
        "alpha": rat_json(&family.alpha),
        "branch_points": family.branch_points.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "prime_threshold": family.prime_threshold.to_string(),
        "poly": family.poly.as_ref().map(|f| f.to_string()),
    });
    if let Some(qmax) = qmax {
        ctx.param("qmax", json!(qmax));
        let f = family.poly.clone().ok_or_else(|| {
            CliError::Usage(format!(
                "the level-{n} polynomial is too large to sweep; sweeps stop at level 12"
            ))
        })?;
        let threshold = family
            .prime_threshold
            .to_u64()
            .filter(|&t| t < qmax)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "qmax must exceed the degeneracy threshold {}",
                    family.prime_threshold
                ))
            })?;
        let records = stats_sweep(&f, qmax).map_err(stats_err)?;
        let tail: Vec<_> =
            records.into_iter().filter(|r| r.p > threshold).collect();
        let mut checkpoints = default_checkpoints(qmax);
        checkpoints.retain(|&q| q > threshold);
        let series =
            running_average(&tail, StatKind::Alpha, &checkpoints, Some(family.alpha.clone()))
                .map_err(averages_err)?;
        ctx.artifacts.write("convergence.csv", &convergence_csv(&series))?;
        let tol = ctx.tolerance_or(DEFAULT_ALPHA_TOLERANCE);
        checks.push(within_check(
            "family-alpha",
            series.final_mean(),
            &family.alpha,
            &tol,
            series.final_count(),
            format!("|mean of alpha_p - a_{n}| <= tolerance over primes in ({threshold}, {qmax}]"),
        ));
        payload["sweep"] = series_payload(&series);
    }
    finish(ctx, payload, &checks)
}

fn run_group_wreath(mut ctx: Ctx, n: u32, samples: Option<u64>) -> Result<bool, CliError> {
    if n == 0 || n > MAX_WREATH_LEVEL {
        return Err(CliError::Usage(format!(
            "wreath tower levels run from 1 to {MAX_WREATH_LEVEL}, got {n}"
        )));
    }
    ctx.param("wreath-n", json!(n));
    let levels = alpha_recursion(n).map_err(group_err)?;
    let target = levels.last().expect("levels start at 1").to_rat();
    let group = build_wreath(n)?;
    let order = group.order().expect("the tower order is tracked exactly").to_string();
    if let Some(elements) = group.elements() {
        let alpha = alpha_of_set(elements).map_err(group_err)?;
        let rank = group_rank(&group).map_err(group_err)?;
        let orbits = burnside_orbits(&group).map_err(group_err)?;
        let payload = json!({
            "kind": "wreath",
            "degree": group.degree(),
            "order": order,
            "enumerated": true,
            "alpha": rat_json(&alpha),
            "rank": rank,
            "orbits": orbits,
            "transitive": group.is_transitive(),
        });
        let check = exact_check(
            "wreath-alpha",
            &alpha,
            &target,
            elements.len() as u64,
            format!("enumerated fixed-point density of the level-{n} tower equals a_{n}"),
        );
        finish(ctx, payload, &[check])
    } else {
        let samples = samples.unwrap_or(DEFAULT_WREATH_SAMPLES);
        if samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        ctx.param("samples", json!(samples));
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut hits = 0u64;
        for _ in 0..samples {
            if sample_wreath_tower(n, &mut rng).has_fixed_point() {
                hits += 1;
            }
        }
        let observed = rat_u(hits, samples);
        let tol = ctx.tolerance_or(DEFAULT_SAMPLED_ALPHA_TOLERANCE);
        let payload = json!({
            "kind": "wreath",
            "degree": group.degree(),
            "order": order,
            "enumerated": false,
            "alpha_sampled": rat_json(&observed),
            "target_alpha": rat_json(&target),
            "samples": samples,
        });
        let check = within_check(
            "wreath-alpha-sampled",
            &observed,
            &target,
            &tol,
            samples,
            format!("sampled fixed-point density of the level-{n} tower tracks a_{n}"),
        );
        finish(ctx, payload, &[check])
    }
}

fn run_group_named(mut ctx: Ctx, name: &str) -> Result<bool, CliError> {
    let (gens, target) = named_group(name)?;
    ctx.param("named", json!(name));
    let group = close_group(&gens)?;
    let (payload, alpha) = enumerated_group_payload(&group, json!("named"))?;
    let check = exact_check(
        "named-alpha",
        &alpha,
        &target,
        group.elements().expect("named groups are small").len() as u64,
        format!("enumerated fixed-point density of {name} matches its known value"),
    );
    finish(ctx, payload, &[check])
}

fn run_group_gens(mut ctx: Ctx, text: &str) -> Result<bool, CliError> {
    let gens = parse_gens(text)?;
    ctx.param("gens", json!(text));
    let group = close_group(&gens)?;
    if group.elements().is_some() {
        let (payload, _) = enumerated_group_payload(&group, json!("generated"))?;
        finish(ctx, payload, &[])
    } else {
        let payload = json!({
            "kind": "generated",
            "degree": group.degree(),
            "enumerated": false,
            "orbits": group.orbit_count(),
            "transitive": group.is_transitive(),
        });
        finish(ctx, payload, &[])
    }
}

fn run_group_symmetric(mut ctx: Ctx, d: u32) -> Result<bool, CliError> {
    if d == 0 {
        return Err(CliError::Usage("--symmetric needs a degree of at least 1".into()));
    }
    ctx.param("symmetric", json!(d));
    let alpha = symmetric_alpha(d);
    let limit_gap = rat_to_f64(&alpha) - (1.0 - (-1.0f64).exp());
    let mut checks = Vec::new();
    if d >= 2 && d <= 8 {
        let gens = symmetric_gens(d as usize)?;
        let group = close_group(&gens)?;
        let enumerated =
            alpha_of_set(group.elements().expect("S_d fits under the cap for d <= 8"))
                .map_err(group_err)?;
        checks.push(exact_check(
            "symmetric-alpha",
            &enumerated,
            &alpha,
            group.elements().expect("just enumerated").len() as u64,
            format!("inclusion-exclusion density of S_{d} matches its enumeration"),
        ));
    }
    let payload = json!({
        "kind": "symmetric",
        "degree": d,
        "alpha": rat_json(&alpha),
        "limit_gap_approx": limit_gap,
    });
    finish(ctx, payload, &checks)
}

fn enumerated_group_payload(
    group: &PermGroup,
    kind: Value,
) -> Result<(Value, Rat), CliError> {
    let elements = group
        .elements()
        .ok_or_else(|| CliError::Resource("group too large to enumerate".into()))?;
    let alpha = alpha_of_set(elements).map_err(group_err)?;
    let rank = group_rank(group).map_err(group_err)?;
    let orbits = burnside_orbits(group).map_err(group_err)?;
    let payload = json!({
        "kind": kind,
        "degree": group.degree(),
        "order": group.order().expect("enumerated groups know their order").to_string(),
        "enumerated": true,
        "alpha": rat_json(&alpha),
        "rank": rank,
        "orbits": orbits,
        "transitive": group.is_transitive(),
    });
    Ok((payload, alpha))
}

fn build_wreath(n: u32) -> Result<PermGroup, CliError> {
    let swap = Perm::from_cycles("(1 2)", Some(2)).map_err(group_err)?;
    let mut group = close_generators(&[swap], DEFAULT_CLOSURE_CAP).map_err(group_err)?;
    for _ in 1..n {
        group = wreath_square(&group, DEFAULT_CLOSURE_CAP);
    }
    Ok(group)
}

fn close_group(gens: &[Perm]) -> Result<PermGroup, CliError> {
    close_generators(gens, DEFAULT_CLOSURE_CAP).map_err(group_err)
}

fn symmetric_gens(d: usize) -> Result<Vec<Perm>, CliError> {
    let mut texts = vec!["(1 2)".to_string()];
    if d > 2 {
        let long: Vec<String> = (1..=d).map(|i| i.to_string()).collect();
        texts.push(format!("({})", long.join(" ")));
    }
    texts
        .iter()
        .map(|t| Perm::from_cycles(t, Some(d)).map_err(group_err))
        .collect()
}

fn named_group(name: &str) -> Result<(Vec<Perm>, Rat), CliError> {
    let (gens, degree, alpha): (Vec<&str>, usize, Rat) = match name {
        "s2" | "s3" | "s4" | "s5" | "s6" => {
            let d = name[1..].parse::<usize>().expect("digit follows s");
            return Ok((symmetric_gens(d)?, symmetric_alpha(d as u32)));
        }
        "a4" => (vec!["(1 2 3)", "(2 3 4)"], 4, rat(3, 4)),
        "d4" => (vec!["(1 2 3 4)", "(1 3)"], 4, rat(3, 8)),
        "c4" => (vec!["(1 2 3 4)"], 4, rat(1, 4)),
        other => {
            return Err(CliError::Usage(format!(
                "unknown group `{other}`; expected s2..s6, a4, d4, or c4"
            )))
        }
    };
    let gens = gens
        .iter()
        .map(|t| Perm::from_cycles(t, Some(degree)).map_err(group_err))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((gens, alpha))
}

/// Comma-separated cycle expressions; the degree is the largest point named
/// anywhere in the list.
fn parse_gens(text: &str) -> Result<Vec<Perm>, CliError> {
    let pieces: Vec<&str> =
        text.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if pieces.is_empty() {
        return Err(CliError::Usage("--gens needs at least one cycle expression".into()));
    }
    let mut degree = 0usize;
    for piece in &pieces {
        let p = Perm::from_cycles(piece, None).map_err(group_err)?;
        degree = degree.max(p.degree());
    }
    pieces
        .iter()
        .map(|piece| Perm::from_cycles(piece, Some(degree)).map_err(group_err))
        .collect()
}

struct ResolvedGroup {
    label: String,
    group: PermGroup,
    alpha: Option<Rat>,
}

impl ResolvedGroup {
    fn known_alpha(&self) -> Result<Rat, CliError> {
        if let Some(alpha) = &self.alpha {
            return Ok(alpha.clone());
        }
        let elements = self.group.elements().ok_or_else(|| {
            CliError::Resource(format!("group {} is too large to enumerate", self.label))
        })?;
        alpha_of_set(elements).map_err(group_err)
    }
}

/// Group specs accepted by `--group`: `wreath:N`, a named group, or a
/// comma-separated generator list in cycle notation.
fn resolve_group(spec: &str) -> Result<ResolvedGroup, CliError> {
    if let Some(level) = spec.strip_prefix("wreath:") {
        let n: u32 = level
            .parse()
            .map_err(|_| CliError::Usage(format!("bad wreath level `{level}`")))?;
        if n == 0 || n > MAX_WREATH_LEVEL {
            return Err(CliError::Usage(format!(
                "wreath tower levels run from 1 to {MAX_WREATH_LEVEL}, got {n}"
            )));
        }
        let levels = alpha_recursion(n).map_err(group_err)?;
        let alpha = levels.last().expect("levels start at 1").to_rat();
        return Ok(ResolvedGroup {
            label: format!("wreath:{n}"),
            group: build_wreath(n)?,
            alpha: Some(alpha),
        });
    }
    if spec.starts_with('(') {
        let gens = parse_gens(spec)?;
        return Ok(ResolvedGroup {
            label: spec.to_string(),
            group: close_group(&gens)?,
            alpha: None,
        });
    }
    let (gens, alpha) = named_group(spec)?;
    Ok(ResolvedGroup {
        label: spec.to_string(),
        group: close_group(&gens)?,
        alpha: Some(alpha),
    })
}

fn run_factor(
    mut ctx: Ctx,
    f: &IntPoly,
    bivariate: bool,
    trials: Option<u64>,
    cross_check: bool,
    qmax: Option<u64>,
    group_spec: Option<String>,
) -> Result<bool, CliError> {
    let list = factor_z(f).map_err(factor_err)?;
    let mut payload = json!({
        "content": list.content.to_string(),
        "factors": list
            .factors
            .iter()
            .map(|(g, mult)| json!({"poly": g.to_string(), "multiplicity": mult}))
            .collect::<Vec<_>>(),
    });
    let mut checks = Vec::new();
    if bivariate {
        let trials = match trials {
            None => DEFAULT_BIVARIATE_TRIALS,
            Some(t) if (3..=1000).contains(&t) => t as u32,
            Some(t) => {
                return Err(CliError::Usage(format!(
                    "--trials must lie in [3, 1000], got {t}"
                )))
            }
        };
        ctx.param("trials", json!(trials));
        let count = count_bivariate_factors(f, trials, ctx.seed).map_err(factor_err)?;
        payload["bivariate"] = scount_json(&count);
    }
    if cross_check {
        let qmax = qmax.unwrap_or(DEFAULT_CROSS_CHECK_QMAX);
        ctx.param("qmax", json!(qmax));
        let group = match &group_spec {
            Some(spec) => {
                let resolved = resolve_group(spec)?;
                ctx.param("group", json!(resolved.label));
                Some(resolved)
            }
            None => None,
        };
        let report =
            s_cross_check(f, qmax, group.as_ref().map(|r| &r.group)).map_err(factor_err)?;
        payload["cross_check"] = cross_json(&report);
        checks.push(cross_check_report(&report, qmax));
    }
    finish(ctx, payload, &checks)
}

fn scount_json(count: &SCount) -> Value {
    let method = match count.method {
        SMethod::Specialization => "specialization",
        SMethod::Curated => "curated",
        SMethod::CrossCheck => "cross-check",
    };
    json!({
        "value": count.value,
        "method": method,
        "witnesses": count.witnesses,
    })
}

fn cross_json(report: &CrossCheckReport) -> Value {
    json!({
        "poly": report.poly,
        "mean_m": rat_json(&report.mean_m),
        "rounded": report.rounded,
        "specialization": scount_json(&report.specialization),
        "rank": report.rank,
        "inconclusive": report.inconclusive,
        "passed": report.passed,
        "consensus": report.consensus.as_ref().map(scount_json),
    })
}

fn cross_check_report(report: &CrossCheckReport, qmax: u64) -> CheckReport {
    let target = report
        .consensus
        .as_ref()
        .map(|c| c.value as f64)
        .unwrap_or(f64::NAN);
    let verdict = if report.inconclusive {
        "the mean sits too close to a half-integer to round"
    } else {
        "specialization, rounded mean, and any group rank must agree"
    };
    CheckReport {
        name: "cross-check".into(),
        observed: rat_to_f64(&report.mean_m),
        target,
        tolerance: 0.25,
        count: 0,
        passed: report.passed,
        detail: format!("{verdict} (mean of m_p over primes <= {qmax})"),
    }
}

fn run_sieve(
    mut ctx: Ctx,
    set_spec: &str,
    n: Option<u64>,
    q: Option<u64>,
    q_grid: Option<String>,
    export: Option<PathBuf>,
) -> Result<bool, CliError> {
    let set = resolve_set(set_spec, n)?;
    ctx.param("set", json!(set.label()));
    ctx.param("n", json!(set.n()));
    if let Some(path) = export {
        write_set(&set, &path).map_err(sieve_err)?;
    }
    match (q, q_grid) {
        (Some(q), None) => {
            if q < 2 {
                return Err(CliError::Usage("--q must be at least 2".into()));
            }
            ctx.param("q", json!(q));
            let table = sieve_primes(q).map_err(|e| CliError::Usage(e.to_string()))?;
            let report = gallagher_bound(&set, table.primes());
            ctx.artifacts.write("residues.csv", &residues_csv(&report))?;
            let checks = sieve_validity_check(&report);
            finish(ctx, json!({"sieve": sieve_json(&report)}), &checks)
        }
        (None, Some(grid_text)) => {
            let grid = parse_grid(&grid_text)?;
            ctx.param("q-grid", json!(grid));
            let search = optimize_q(&set, &grid).map_err(sieve_err)?;
            let mut trace = String::from("q,bound_approx\n");
            for (q, bound) in &search.trace {
                let cell = bound.map(|b| b.to_string()).unwrap_or_default();
                trace.push_str(&format!("{q},{cell}\n"));
            }
            ctx.artifacts.write("trace.csv", &trace)?;
            ctx.artifacts.write("residues.csv", &residues_csv(&search.report))?;
            let checks = sieve_validity_check(&search.report);
            let payload = json!({
                "best_q": search.best_q,
                "sieve": sieve_json(&search.report),
            });
            finish(ctx, payload, &checks)
        }
        (Some(_), Some(_)) => {
            Err(CliError::Usage("give --q or --q-grid, not both".into()))
        }
        (None, None) => Err(CliError::Usage("give --q or --q-grid".into())),
    }
}

fn sieve_validity_check(report: &SieveReport) -> Vec<CheckReport> {
    let Some(bound) = report.bound else {
        return Vec::new();
    };
    vec![CheckReport {
        name: "sieve-validity".into(),
        observed: report.actual_size as f64,
        target: bound,
        tolerance: 0.0,
        count: report.primes.len() as u64,
        passed: (report.actual_size as f64) <= bound,
        detail: "the true set size never exceeds a positive-denominator bound".into(),
    }]
}

fn parse_grid(text: &str) -> Result<Vec<u64>, CliError> {
    let mut grid = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let q: u64 = piece
            .parse()
            .map_err(|_| CliError::Usage(format!("bad grid entry `{piece}`")))?;
        if q < 2 {
            return Err(CliError::Usage("grid cutoffs must be at least 2".into()));
        }
        grid.push(q);
    }
    if grid.is_empty() {
        return Err(CliError::Usage("the Q grid is empty".into()));
    }
    Ok(grid)
}

fn run_smooth(
    mut ctx: Ctx,
    set_spec: &str,
    n: Option<u64>,
    q: u64,
    sample_cap: u64,
    power_degree: Option<u32>,
) -> Result<bool, CliError> {
    let set = resolve_set(set_spec, n)?;
    if set.len() < 2 {
        return Err(CliError::Usage(
            "smoothness needs a set with at least two elements".into(),
        ));
    }
    if q < 2 {
        return Err(CliError::Usage("--q must be at least 2".into()));
    }
    if sample_cap == 0 {
        return Err(CliError::Usage("--sample-cap must be at least 1".into()));
    }
    let power_degree = match power_degree {
        Some(d) => {
            validate_powers(&set, d)?;
            Some(d)
        }
        None => spec_power_degree(set_spec),
    };
    ctx.param("set", json!(set.label()));
    ctx.param("n", json!(set.n()));
    ctx.param("q", json!(q));
    ctx.param("sample-cap", json!(sample_cap));
    if let Some(d) = power_degree {
        ctx.param("power-degree", json!(d));
    }
    let report = smoothness_stats(&set, q, sample_cap, ctx.seed, power_degree);
    let payload = json!({
        "pairs_sampled": report.pairs_sampled,
        "mean_s_approx": report.mean_s,
        "median_s_approx": report.median_s,
        "log_q_approx": report.log_q,
        "mertens_sum_approx": report.mertens_sum,
        "cyclotomic": report.cyclotomic.as_ref().map(|parts| {
            parts
                .iter()
                .map(|part| json!({"ell": part.ell, "mean_s_approx": part.mean_s}))
                .collect::<Vec<_>>()
        }),
    });
    finish(ctx, payload, &[])
}

fn spec_power_degree(spec: &str) -> Option<u32> {
    spec.strip_prefix("powers:").and_then(|d| d.parse().ok()).filter(|&d| d >= 1)
}

fn validate_powers(set: &ExplicitSet, d: u32) -> Result<(), CliError> {
    if d == 0 {
        return Err(CliError::Usage("--power-degree must be at least 1".into()));
    }
    for &v in set.elements() {
        let root = nth_root_floor(v, d);
        if (root as u128).pow(d) != v as u128 {
            return Err(CliError::Usage(format!(
                "element {v} is not a {d}-th power, so the cyclotomic split does not apply"
            )));
        }
    }
    Ok(())
}

/// Set specs accepted by `--set`: `powers:d`, `poly:<expr>`, or the path of
/// a file written by `--export`.
fn resolve_set(spec: &str, n: Option<u64>) -> Result<ExplicitSet, CliError> {
    if let Some(d_text) = spec.strip_prefix("powers:") {
        let d: u32 = d_text
            .parse()
            .map_err(|_| CliError::Usage(format!("bad power exponent `{d_text}`")))?;
        if d < 1 {
            return Err(CliError::Usage("power exponents start at 1".into()));
        }
        let n = require(n, "N")?;
        if n < 1 {
            return Err(CliError::Usage("the window [1, N] must be nonempty".into()));
        }
        return gen_powers(d, n).map_err(sieve_err);
    }
    if let Some(expr) = spec.strip_prefix("poly:") {
        let f = parse_uni_arg(expr)?;
        if f.degree().is_none_or(|d| d < 1) {
            return Err(CliError::Usage(
                "set generation needs a polynomial of degree at least one".into(),
            ));
        }
        let n = require(n, "N")?;
        if n < 1 {
            return Err(CliError::Usage("the window [1, N] must be nonempty".into()));
        }
        return gen_poly_values(&f, n).map_err(sieve_err);
    }
    let set = read_set(std::path::Path::new(spec)).map_err(sieve_err)?;
    if let Some(n) = n {
        if n != set.n() {
            return Err(CliError::Usage(format!(
                "--N {n} disagrees with the file window {}",
                set.n()
            )));
        }
    }
    Ok(set)
}
