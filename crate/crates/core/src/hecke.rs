//! Checks of the Hecke-operator identities satisfied by class theta series.
//!
//! For a prime `p` the class theta series behave as follows, compared on
//! indices `1..=⌊N/p⌋`:
//!
//! * split: `Θ_h|T_p = Θ_{h𝔭} + Θ_{h𝔭'}`
//! * ramified: `Θ_h|U_p = Θ_{h𝔭}`
//! * inert: `Θ_h|T_p = 0`
//!
//! Summing over `H` gives the eigenvalue `1 + (Δ/p)` for `Σ_h Θ_h`, and
//! averaging over a genus shows that `T_p` permutes the genus averages.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, kronecker};
use crate::class_group::ClassGroupError;
use crate::qseries::{rational, Mismatch, QSeries};
use crate::series::SeriesBook;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("{p} is {actual} for discriminant {delta}, expected {expected}")]
    WrongPrimeType { delta: i64, p: u64, expected: &'static str, actual: PrimeType },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    ClassGroup(#[from] ClassGroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeType {
    Split,
    Ramified,
    Inert,
}

impl PrimeType {
    pub fn of(delta: i64, p: u64) -> Self {
        match kronecker(delta, p as i64) {
            1 => PrimeType::Split,
            0 => PrimeType::Ramified,
            _ => PrimeType::Inert,
        }
    }

    /// `1 + (Δ/p)`.
    pub fn eigenvalue(self) -> i64 {
        match self {
            PrimeType::Split => 2,
            PrimeType::Ramified => 1,
            PrimeType::Inert => 0,
        }
    }
}

impl fmt::Display for PrimeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeType::Split => "split",
            PrimeType::Ramified => "ramified",
            PrimeType::Inert => "inert",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeckeIdentity {
    /// `a(pn) + (Δ/p)a(n/p) = (1 + (Δ/p))a(n)` for `a(n) = Σ_h r(Q_h, n)`.
    Eigenvalue,
    SplitTheta,
    RamifiedTheta,
    InertTheta,
    GenusPermutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeCheckResult {
    pub delta: i64,
    pub p: u64,
    pub prime_type: PrimeType,
    pub identity: HeckeIdentity,
    /// Inclusive index range compared.
    pub checked_indices: (usize, usize),
    pub pass: bool,
    pub first_mismatch: Option<Mismatch>,
    /// Class or genus the mismatch was found on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
}

impl HeckeCheckResult {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("check results serialize")
    }
}

struct Comparison<'a> {
    book: &'a SeriesBook,
    p: u64,
    prime_type: PrimeType,
    identity: HeckeIdentity,
}

impl Comparison<'_> {
    fn upper(&self) -> usize {
        self.book.precision() / self.p as usize
    }

    /// Compares each `(subject, lhs, rhs)` on `1..=⌊N/p⌋`, stopping at the first mismatch.
    fn run(self, cases: impl IntoIterator<Item = (String, QSeries, QSeries)>) -> HeckeCheckResult {
        let upper = self.upper();
        let mut first = None;
        for (subject, lhs, rhs) in cases {
            if let Some(m) = lhs.first_mismatch(&rhs, 1..upper + 1) {
                first = Some((subject, m));
                break;
            }
        }
        HeckeCheckResult {
            delta: self.book.group().delta().value(),
            p: self.p,
            prime_type: self.prime_type,
            identity: self.identity,
            checked_indices: (1, upper),
            pass: first.is_none(),
            subject: first.as_ref().map(|(s, _)| s.clone()),
            first_mismatch: first.map(|(_, m)| m),
        }
    }
}

fn prime_type_of(book: &SeriesBook, p: u64) -> Result<PrimeType, HeckeError> {
    if !is_prime(p) {
        return Err(HeckeError::NotPrime(p));
    }
    Ok(PrimeType::of(book.group().delta().value(), p))
}

fn require(book: &SeriesBook, p: u64, expected: PrimeType) -> Result<(), HeckeError> {
    let actual = prime_type_of(book, p)?;
    if actual != expected {
        let expected = match expected {
            PrimeType::Split => "split",
            PrimeType::Ramified => "ramified",
            PrimeType::Inert => "inert",
        };
        return Err(HeckeError::WrongPrimeType { delta: book.group().delta().value(), p, expected, actual });
    }
    Ok(())
}

/// Eigenvalue identity for `a(n) = Σ_h r(Q_h, n)`: `a(pn) + (Δ/p)a(n/p) = (1 + (Δ/p))a(n)`.
pub fn check_eigenvalue(book: &SeriesBook, p: u64) -> Result<HeckeCheckResult, HeckeError> {
    let prime_type = prime_type_of(book, p)?;
    let a = book.class_sum();
    let eps = kronecker(book.group().delta().value(), p as i64) as i64;
    let upper = book.precision() / p as usize;
    let pu = p as usize;
    // Built coefficient by coefficient from a(n), independent of the operator code.
    let lhs = QSeries::from_coeffs(
        a.disc(),
        (0..=upper)
            .map(|n| {
                let tail = if n % pu == 0 { a.coeff(n / pu) * rational(eps) } else { rational(0) };
                a.coeff(pu * n) + tail
            })
            .collect(),
    );
    let rhs = a.truncate(upper).scale(&rational(prime_type.eigenvalue()));
    let cmp = Comparison { book, p, prime_type, identity: HeckeIdentity::Eigenvalue };
    Ok(cmp.run([("sum over H".to_string(), lhs, rhs)]))
}

/// `Θ_h|T_p = Θ_{h𝔭} + Θ_{h𝔭'}` for every class `h`.
pub fn check_split_theta(book: &SeriesBook, p: u64) -> Result<HeckeCheckResult, HeckeError> {
    require(book, p, PrimeType::Split)?;
    let g = book.group();
    let prime = g.prime_ideal_class(p)?;
    let conj = g.inverse(prime);
    let cases = g.indices().map(|h| {
        let lhs = book.theta(h).apply_t(p);
        let rhs = book.theta(g.compose(h, prime)).add(book.theta(g.compose(h, conj))).expect("same discriminant");
        (format!("class {h} {}", g.form(h)), lhs, rhs)
    });
    let cmp = Comparison { book, p, prime_type: PrimeType::Split, identity: HeckeIdentity::SplitTheta };
    Ok(cmp.run(cases.collect::<Vec<_>>()))
}

/// `Θ_h|U_p = Θ_{h𝔭}` for every class `h`.
pub fn check_ramified_theta(book: &SeriesBook, p: u64) -> Result<HeckeCheckResult, HeckeError> {
    require(book, p, PrimeType::Ramified)?;
    let g = book.group();
    let prime = g.prime_ideal_class(p)?;
    let cases = g.indices().map(|h| {
        let lhs = book.theta(h).apply_u(p);
        let rhs = book.theta(g.compose(h, prime)).clone();
        (format!("class {h} {}", g.form(h)), lhs, rhs)
    });
    let cmp = Comparison { book, p, prime_type: PrimeType::Ramified, identity: HeckeIdentity::RamifiedTheta };
    Ok(cmp.run(cases.collect::<Vec<_>>()))
}

/// `Θ_h|T_p = 0` for every class `h`.
pub fn check_inert_theta(book: &SeriesBook, p: u64) -> Result<HeckeCheckResult, HeckeError> {
    require(book, p, PrimeType::Inert)?;
    let g = book.group();
    let zero = QSeries::zero(g.delta().value(), book.precision());
    let cases = g.indices().map(|h| (format!("class {h} {}", g.form(h)), book.theta(h).apply_t(p), zero.clone()));
    let cmp = Comparison { book, p, prime_type: PrimeType::Inert, identity: HeckeIdentity::InertTheta };
    Ok(cmp.run(cases.collect::<Vec<_>>()))
}

/// Whichever of the split, ramified or inert class identities applies to `p`.
pub fn check_local_theta(book: &SeriesBook, p: u64) -> Result<HeckeCheckResult, HeckeError> {
    match prime_type_of(book, p)? {
        PrimeType::Split => check_split_theta(book, p),
        PrimeType::Ramified => check_ramified_theta(book, p),
        PrimeType::Inert => check_inert_theta(book, p),
    }
}

/// `E_g|T_p = 2E_{g𝔭}` (split) or `E_g|T_p = E_{g𝔭}` (ramified) for every genus `g`.
pub fn check_genus_permutation(book: &SeriesBook, p: u64) -> Result<HeckeCheckResult, HeckeError> {
    let prime_type = prime_type_of(book, p)?;
    if prime_type == PrimeType::Inert {
        return Err(HeckeError::WrongPrimeType {
            delta: book.group().delta().value(),
            p,
            expected: "split or ramified",
            actual: prime_type,
        });
    }
    let g = book.group();
    let prime_genus = g.genus_of(g.prime_ideal_class(p)?);
    let factor = rational(prime_type.eigenvalue());
    let cases = g.genus_ids().map(|genus| {
        let lhs = book.genus_average(genus).apply_t(p);
        let rhs = book.genus_average(g.compose_genera(genus, prime_genus)).scale(&factor);
        (format!("genus {genus}"), lhs, rhs)
    });
    let cmp = Comparison { book, p, prime_type, identity: HeckeIdentity::GenusPermutation };
    Ok(cmp.run(cases.collect::<Vec<_>>()))
}
