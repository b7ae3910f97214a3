//! Identity suite for one discriminant or a range of them, aggregated into
//! per-discriminant [`VerificationReport`]s.

use std::f64::consts::PI;
use std::time::Instant;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, is_fundamental, primes_up_to, Discriminant};
use crate::genus::character_pairs;
use crate::hecke::{self, HeckeCheckResult, PrimeType};
use crate::qseries::{format_rational, rational, QSeries};
use crate::series::{l0, SeriesBook};

/// Minimum number of terms accepted by the analytic class number check.
pub const MIN_DIRICHLET_TERMS: u64 = 10_000;

/// Absolute tolerance on the recovered class number.
pub const DIRICHLET_TOLERANCE: f64 = 1e-2;

pub const DEFAULT_DIRICHLET_TERMS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckRecord {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self { name: name.to_string(), pass, detail, skipped: None, elapsed_ms: 0 }
    }

    fn skipped(name: &str, reason: &str) -> Self {
        Self {
            name: name.to_string(),
            pass: true,
            detail: String::new(),
            skipped: Some(reason.to_string()),
            elapsed_ms: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub delta: i64,
    pub precision: usize,
    pub h: usize,
    pub t: usize,
    pub genus_count: usize,
    pub checks: Vec<CheckRecord>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Zeroes every timing field so that reports compare byte for byte.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = 0;
        for c in &mut self.checks {
            c.elapsed_ms = 0;
        }
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// A discriminant in a requested range that was not verified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub delta: i64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    pub skipped: Vec<Skipped>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub precision: usize,
    pub primes_up_to: u64,
    /// Terms for the analytic class number check; `None` skips it.
    pub dirichlet_terms: Option<u64>,
    pub dirichlet_tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            precision: 100,
            primes_up_to: 50,
            dirichlet_terms: Some(DEFAULT_DIRICHLET_TERMS),
            dirichlet_tolerance: DIRICHLET_TOLERANCE,
        }
    }
}

fn timed(f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let start = Instant::now();
    let mut record = f();
    record.elapsed_ms = start.elapsed().as_millis() as u64;
    record
}

/// `Σ_h r(Q_h, n) = w Σ_{t|n} (Δ/t)` for `1 ≤ n ≤ N`.
pub fn verify_gauss(book: &SeriesBook) -> CheckRecord {
    let delta = book.group().delta();
    let w = delta.unit_count() as i64;
    let a = book.class_sum();
    let rhs = QSeries::from_coeffs(
        delta.value(),
        (0..=book.precision())
            .map(|n| match n {
                0 => a.coeff(0).clone(),
                _ => {
                    let s: i64 =
                        divisors(n as u64).expect("n ≥ 1").into_iter().map(|t| delta.character(t as i64) as i64).sum();
                    rational(w * s)
                }
            })
            .collect(),
    );
    match a.first_mismatch(&rhs, 1..book.precision() + 1) {
        None => CheckRecord::new("gauss_average", true, format!("n = 1..{}", book.precision())),
        Some(m) => CheckRecord::new("gauss_average", false, format!("n = {}: {} != {}", m.n, m.lhs, m.rhs)),
    }
}

/// Result of the analytic class number computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletEstimate {
    pub l1: f64,
    pub class_number: f64,
}

/// `(w√|Δ|/2π)·L̃(1)` where `L̃(1)` averages the last partial sums of
/// `Σ (Δ/n)/n` twice.
pub fn dirichlet_estimate(delta: &Discriminant, terms: u64) -> DirichletEstimate {
    let period = delta.abs() as usize;
    // (Δ/·) is periodic mod |Δ| for fundamental Δ.
    let table: Vec<f64> = (0..period).map(|r| delta.character(r as i64) as f64).collect();
    let mut partial = [0.0f64; 3];
    let mut sum = 0.0f64;
    for n in 1..=terms {
        sum += table[(n % period as u64) as usize] / n as f64;
        partial = [partial[1], partial[2], sum];
    }
    let first = [(partial[0] + partial[1]) / 2.0, (partial[1] + partial[2]) / 2.0];
    let l1 = (first[0] + first[1]) / 2.0;
    let w = delta.unit_count() as f64;
    DirichletEstimate { l1, class_number: w * (delta.abs() as f64).sqrt() / (2.0 * PI) * l1 }
}

pub fn verify_dirichlet(delta: &Discriminant, h: usize, terms: u64, tol: f64) -> CheckRecord {
    if terms < MIN_DIRICHLET_TERMS {
        return CheckRecord::new(
            "dirichlet_class_number",
            false,
            format!("{terms} terms is below the minimum of {MIN_DIRICHLET_TERMS}"),
        );
    }
    let est = dirichlet_estimate(delta, terms);
    let err = (est.class_number - h as f64).abs();
    CheckRecord::new(
        "dirichlet_class_number",
        err < tol,
        format!("h = {h}, recovered {:.6} (error {err:.2e}, tolerance {tol:.0e}, {terms} terms)", est.class_number),
    )
}

/// `E_χ = E_{d,D}` on `0..=N` for every character pair.
pub fn verify_twisted_sums(book: &SeriesBook) -> CheckRecord {
    const NAME: &str = "twisted_sum_identity";
    for chi in book.characters() {
        let lhs = match book.twisted_sum(chi) {
            Ok(s) => s,
            Err(e) => return CheckRecord::new(NAME, false, e.to_string()),
        };
        let rhs = match book.eisenstein(chi.pair) {
            Ok(s) => s,
            Err(e) => return CheckRecord::new(NAME, false, e.to_string()),
        };
        if let Some(m) = lhs.first_mismatch(&rhs, 0..book.precision() + 1) {
            return CheckRecord::new(
                NAME,
                false,
                format!("(d, D) = ({}, {}), n = {}: {} != {}", chi.pair.d, chi.pair.neg, m.n, m.lhs, m.rhs),
            );
        }
    }
    CheckRecord::new(NAME, true, format!("{} character pairs, n = 0..{}", book.characters().len(), book.precision()))
}

/// `E_g = (w/|H|) Σ_χ χ(g) E_{d,D}` on `0..=N` for every genus, both constant terms 1.
pub fn verify_genus_mass_formula(book: &SeriesBook) -> CheckRecord {
    const NAME: &str = "genus_mass_formula";
    let group = book.group();
    for g in group.genus_ids() {
        let lhs = book.genus_average(g);
        let rhs = match book.siegel_rhs(g) {
            Ok(s) => s,
            Err(e) => return CheckRecord::new(NAME, false, e.to_string()),
        };
        if let Some(m) = lhs.first_mismatch(&rhs, 0..book.precision() + 1) {
            return CheckRecord::new(NAME, false, format!("genus {g}, n = {}: {} != {}", m.n, m.lhs, m.rhs));
        }
        if !lhs.coeff(0).is_one() {
            return CheckRecord::new(
                NAME,
                false,
                format!("genus {g}: constant term {}", format_rational(lhs.coeff(0))),
            );
        }
    }
    CheckRecord::new(NAME, true, format!("{} genera, n = 0..{}", group.genus_count(), book.precision()))
}

/// `|G*| = |G| = 2^{t-1}`, `d·D = Δ` for every pair, all genera of size `|H²|`.
pub fn verify_genus_count(book: &SeriesBook) -> CheckRecord {
    let group = book.group();
    let delta = group.delta();
    let expected = 1usize << (delta.prime_count() - 1);
    let pairs = character_pairs(delta);
    let sizes_equal = group.genera().iter().all(|g| g.len() == group.squares().len());
    let products_ok = pairs.iter().all(|p| p.d > 0 && p.d * p.neg == delta.value());
    let pass = pairs.len() == expected && group.genus_count() == expected && sizes_equal && products_ok;
    CheckRecord::new(
        "genus_count",
        pass,
        format!(
            "t = {}, |G*| = {}, |G| = {}, 2^(t-1) = {expected}, |H²| = {}, equal genus sizes: {sizes_equal}",
            delta.prime_count(),
            pairs.len(),
            group.genus_count(),
            group.squares().len()
        ),
    )
}

/// Constant terms: `(1/w)Σ Θ_h` has `h/w = ½L(0,Δ)`, which is the constant of `E_{1,Δ}`.
pub fn verify_constant_terms(book: &SeriesBook) -> CheckRecord {
    let delta = book.group().delta();
    let avg = book.class_average();
    let half_l0 = l0(delta) / rational(2);
    let expected = crate::qseries::ratio(book.group().class_number() as i64, delta.unit_count() as i64);
    let eis = book.eisenstein(book.characters()[0].pair).map(|e| e.coeff(0).clone());
    let pass = *avg.coeff(0) == expected && half_l0 == expected && eis.as_ref() == Ok(&expected);
    CheckRecord::new(
        "constant_term_chain",
        pass,
        format!("h/w = {}, ½L(0,Δ) = {}", format_rational(&expected), format_rational(&half_l0)),
    )
}

fn summarize_hecke(name: &str, results: Vec<HeckeCheckResult>) -> CheckRecord {
    let total = results.len();
    match results.into_iter().find(|r| !r.pass) {
        None => CheckRecord::new(name, true, format!("{total} (p, identity) cases")),
        Some(r) => {
            let m = r.first_mismatch.as_ref().expect("failing checks carry a mismatch");
            CheckRecord::new(
                name,
                false,
                format!(
                    "p = {} ({}), {}: n = {}: {} != {}",
                    r.p,
                    r.prime_type,
                    r.subject.as_deref().unwrap_or("-"),
                    m.n,
                    m.lhs,
                    m.rhs
                ),
            )
        }
    }
}

/// Eigenvalue identity for every prime `p ≤ bound`.
pub fn verify_hecke_eigenvalue(book: &SeriesBook, bound: u64) -> CheckRecord {
    let results: Result<Vec<_>, _> =
        primes_up_to(bound).into_iter().map(|p| hecke::check_eigenvalue(book, p)).collect();
    match results {
        Ok(r) => summarize_hecke("hecke_eigenvalue", r),
        Err(e) => CheckRecord::new("hecke_eigenvalue", false, e.to_string()),
    }
}

/// Per-class split/ramified/inert identities for every prime `p ≤ bound`.
pub fn verify_hecke_classes(book: &SeriesBook, bound: u64) -> CheckRecord {
    let results: Result<Vec<_>, _> =
        primes_up_to(bound).into_iter().map(|p| hecke::check_local_theta(book, p)).collect();
    match results {
        Ok(r) => summarize_hecke("hecke_class_identities", r),
        Err(e) => CheckRecord::new("hecke_class_identities", false, e.to_string()),
    }
}

/// Genus permutation by `T_p` for every split or ramified `p ≤ bound`.
pub fn verify_genus_permutation(book: &SeriesBook, bound: u64) -> CheckRecord {
    let delta = book.group().delta().value();
    let results: Result<Vec<_>, _> = primes_up_to(bound)
        .into_iter()
        .filter(|&p| PrimeType::of(delta, p) != PrimeType::Inert)
        .map(|p| hecke::check_genus_permutation(book, p))
        .collect();
    match results {
        Ok(r) => summarize_hecke("genus_permutation", r),
        Err(e) => CheckRecord::new("genus_permutation", false, e.to_string()),
    }
}

/// Every check for one fundamental discriminant.
pub fn verify_discriminant(delta: &Discriminant, config: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let book = match SeriesBook::new(delta, config.precision) {
        Ok(b) => b,
        Err(e) => {
            return VerificationReport {
                delta: delta.value(),
                precision: config.precision,
                h: 0,
                t: delta.prime_count(),
                genus_count: 0,
                checks: vec![CheckRecord::new("build", false, e.to_string())],
                elapsed_ms: start.elapsed().as_millis() as u64,
            }
        }
    };
    let group = book.group();
    let h = group.class_number();
    let mut checks = vec![
        timed(|| verify_gauss(&book)),
        timed(|| verify_twisted_sums(&book)),
        timed(|| verify_genus_mass_formula(&book)),
        timed(|| verify_genus_count(&book)),
        timed(|| verify_constant_terms(&book)),
        timed(|| verify_hecke_eigenvalue(&book, config.primes_up_to)),
        timed(|| verify_hecke_classes(&book, config.primes_up_to)),
        timed(|| verify_genus_permutation(&book, config.primes_up_to)),
    ];
    checks.push(match config.dirichlet_terms {
        Some(terms) => timed(|| verify_dirichlet(delta, h, terms, config.dirichlet_tolerance)),
        None => CheckRecord::skipped("dirichlet_class_number", "disabled"),
    });
    VerificationReport {
        delta: delta.value(),
        precision: config.precision,
        h,
        t: delta.prime_count(),
        genus_count: group.genus_count(),
        checks,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Runs [`verify_discriminant`] over every Δ between `from` and `to`
/// (inclusive, either order), in parallel; reports are ordered by
/// decreasing Δ (from -3 downwards).
pub fn run_suite(from: i64, to: i64, config: &SuiteConfig) -> SuiteOutcome {
    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
    let hi = hi.min(-1);
    let mut skipped = Vec::new();
    let mut deltas = Vec::new();
    for d in (lo..=hi).rev() {
        match is_fundamental(d) {
            Ok(true) => deltas.push(Discriminant::new(d).expect("fundamental")),
            _ => skipped.push(Skipped { delta: d, reason: "non-fundamental".to_string() }),
        }
    }
    let reports = deltas.par_iter().map(|d| verify_discriminant(d, config)).collect();
    SuiteOutcome { reports, skipped }
}
