//! Statistics of polynomial value sets modulo primes, on average over the
//! primes, together with the permutation-group densities and larger-sieve
//! bounds they feed.
//!
//! The crate is organized as:
//!
//! * [`numcore`]: prime sieving, exact rationals, big-integer helpers.
//! * [`polystats`]: per-prime value-set and pair statistics of integer
//!   polynomials, univariate and multivariate, with parallel sweeps.
//! * [`averages`]: exact running means of those statistics against their
//!   closed-form targets, packaged as pass/fail checks.
//! * [`permgroup`]: permutation groups, fixed-point densities, ranks, and
//!   the iterated wreath tower behind the squaring family.
//! * [`factorlab`]: integer polynomial factorization and the bivariate
//!   factor counts that the pair statistics converge to.
//! * [`sievelab`]: the larger sieve evaluated on explicit sets, with
//!   smoothness and intersection diagnostics.
//!
//! All randomized entry points take explicit seeds and all parallel sweeps
//! produce output independent of the worker count.

pub mod averages;
pub mod factorlab;
pub mod numcore;
pub mod permgroup;
pub mod polystats;
pub mod sievelab;

pub use averages::{
    check_alpha_inv_mean, check_alpha_vs_group, check_indecomposable, check_multi_pair_mean,
    check_pair_mean, default_checkpoints, power_map_identities, running_average, AveragesError,
    CheckReport, Checkpoint, ConvergenceSeries, PowerMapIdentities, RatSum, StatKind,
};
pub use factorlab::{
    count_bivariate_factors, cyclotomic_count, factor_count_mod_p, factor_z, gcd_z,
    s_cross_check, squarefree_decompose, CrossCheckReport, FactorError, FactorList, SCount,
    SMethod, MAX_COEFF_BITS, MAX_FACTOR_DEGREE,
};
pub use numcore::{rat, rat_int, rat_to_f64, rat_u, sieve_primes, NumError, PrimeTable, Rat};
pub use permgroup::family::{
    alpha_recursion, fn_family, symmetric_alpha, DyadicRat, FnFamily, FAMILY_POLY_CAP,
};
pub use permgroup::{
    alpha_of_coset, alpha_of_set, burnside_orbits, close_generators, group_rank,
    sample_wreath_tower, wreath_embed, wreath_square, GroupError, Perm, PermGroup,
    DEFAULT_CLOSURE_CAP,
};
pub use polystats::{
    alpha_p, m_p, m_p_multi, multi_sweep, preimage_histogram, reduce_mod_p, stats_sweep, IntPoly,
    MultiPoly, MultiStatRecord, PrimeStatRecord, ReducedPoly, StatsError, DEFAULT_MULTI_BUDGET,
};
pub use sievelab::{
    gallagher_bound, gen_poly_values, gen_powers, intersect_count, optimize_q, read_set,
    residue_counts, smoothness_stats, write_set, CycloPart, ExplicitSet, IntersectReport, QSearch,
    SieveError, SieveReport, SmoothnessReport, DEFAULT_SAMPLE_CAP,
};
