//! Artifact writers: CSV tables and the JSON summary.
//!
//! Exact statistics are serialized as numerator and denominator pairs;
//! floating-point convenience values appear only under names suffixed
//! `_approx`. Everything written here is a pure function of the resolved
//! configuration and the seed, so identical runs produce identical bytes.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Value};
use valset::averages::ConvergenceSeries;
use valset::numcore::rat_to_f64;
use valset::{CheckReport, MultiStatRecord, PrimeStatRecord, Rat, SieveReport};

use crate::CliError;

pub struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: PathBuf) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::Usage(format!("output directory {}: {e}", dir.display())))?;
        Ok(Artifacts { dir, written: Vec::new() })
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn write(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, body)
            .map_err(|e| CliError::Usage(format!("writing {}: {e}", path.display())))?;
        self.written.push(name.to_string());
        Ok(())
    }
}

pub fn rat_json(r: &Rat) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "approx": rat_to_f64(r),
    })
}

pub fn check_json(c: &CheckReport) -> Value {
    json!({
        "name": c.name,
        "observed_approx": c.observed,
        "target_approx": c.target,
        "tolerance_approx": c.tolerance,
        "count": c.count,
        "passed": c.passed,
        "detail": c.detail,
    })
}

pub fn per_prime_csv(records: &[PrimeStatRecord]) -> String {
    let mut out = String::from("p,degenerate,value_set_size,alpha_num,alpha_den,m_num,m_den\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.p,
            r.degenerate as u8,
            r.value_set_size,
            r.alpha_p.numer(),
            r.alpha_p.denom(),
            r.m_p.numer(),
            r.m_p.denom()
        )
        .expect("writing to a string cannot fail");
    }
    out
}

pub fn multi_prime_csv(records: &[MultiStatRecord]) -> String {
    let mut out = String::from("p,degenerate,zero_count,m_num,m_den\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.p,
            r.degenerate as u8,
            r.zero_count,
            r.m_p.numer(),
            r.m_p.denom()
        )
        .expect("writing to a string cannot fail");
    }
    out
}

pub fn convergence_csv(series: &ConvergenceSeries) -> String {
    let mut out = String::from(
        "q,count,mean_num,mean_den,mean_approx,target_num,target_den,abs_error_approx\n",
    );
    let (target_num, target_den) = match &series.target {
        Some(t) => (t.numer().to_string(), t.denom().to_string()),
        None => (String::new(), String::new()),
    };
    for cp in &series.checkpoints {
        let abs_error = cp.abs_error_f64().map(|e| e.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            cp.q,
            cp.count,
            cp.mean.numer(),
            cp.mean.denom(),
            cp.mean_f64(),
            target_num,
            target_den,
            abs_error
        )
        .expect("writing to a string cannot fail");
    }
    out
}

pub fn residues_csv(report: &SieveReport) -> String {
    let mut out = String::from("p,residue_count\n");
    for (&p, &c) in report.primes.iter().zip(&report.residue_counts) {
        writeln!(out, "{p},{c}").expect("writing to a string cannot fail");
    }
    out
}

pub fn sieve_json(report: &SieveReport) -> Value {
    json!({
        "n": report.n,
        "primes_used": report.primes.len(),
        "numerator_approx": report.numerator,
        "denominator_approx": report.denominator,
        "bound_approx": report.bound,
        "actual_size": report.actual_size,
    })
}
