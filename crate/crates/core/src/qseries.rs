//! Exact truncated q-expansions `Σ_{n=0}^{N} c(n) qⁿ` with rational
//! coefficients, and the operators `U_p`, `V_p`, `T_p`.
//!
//! `U_p` and `V_p` carry the constant term through unchanged; identities
//! between series are only ever compared on indices `n ≥ 1`.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::kronecker;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series belong to different discriminants ({0} and {1})")]
    DiscMismatch(i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    disc: i64,
    coeffs: Vec<BigRational>,
}

/// First index where two series differ, with both values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `num/den`, or just `num` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl QSeries {
    pub fn zero(disc: i64, precision: usize) -> Self {
        Self { disc, coeffs: vec![BigRational::zero(); precision + 1] }
    }

    pub fn from_coeffs(disc: i64, coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series holds at least the constant term");
        Self { disc, coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(disc: i64, coeffs: I) -> Self {
        Self::from_coeffs(disc, coeffs.into_iter().map(rational).collect())
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Highest stored index `N`.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let keep = precision.min(self.precision()) + 1;
        Self { disc: self.disc, coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_disc(&self, other: &Self) -> Result<(), SeriesError> {
        if self.disc != other.disc {
            return Err(SeriesError::DiscMismatch(self.disc, other.disc));
        }
        Ok(())
    }

    /// Coefficientwise sum, truncated to the smaller precision.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_disc(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { disc: self.disc, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { disc: self.disc, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// `Σ c(pn) qⁿ`, precision `⌊N/p⌋`.
    pub fn apply_u(&self, p: u64) -> Self {
        let p = p as usize;
        let precision = self.precision() / p;
        let coeffs = (0..=precision).map(|n| self.coeffs[p * n].clone()).collect();
        Self { disc: self.disc, coeffs }
    }

    /// `Σ c(n) q^{pn}`, precision `N`.
    pub fn apply_v(&self, p: u64) -> Self {
        let p = p as usize;
        let mut out = Self::zero(self.disc, self.precision());
        for n in 0..=self.precision() / p {
            out.coeffs[p * n] = self.coeffs[n].clone();
        }
        out
    }

    /// `f|U_p + (Δ/p)·f|V_p`, precision `⌊N/p⌋`.
    pub fn apply_t(&self, p: u64) -> Self {
        let eps = kronecker(self.disc, p as i64);
        let u = self.apply_u(p);
        let v = self.apply_v(p).truncate(u.precision()).scale(&rational(eps as i64));
        u.add(&v).expect("same discriminant")
    }

    /// First `n` in `range` (clipped to both precisions) with differing coefficients.
    pub fn first_mismatch(&self, other: &Self, range: Range<usize>) -> Option<Mismatch> {
        let end = range.end.min(self.precision() + 1).min(other.precision() + 1);
        (range.start..end).find(|&n| self.coeffs[n] != other.coeffs[n]).map(|n| Mismatch {
            n,
            lhs: format_rational(&self.coeffs[n]),
            rhs: format_rational(&other.coeffs[n]),
        })
    }

    /// CSV table with header `n,numerator,denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,numerator,denominator\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{n},{},{}\n", c.numer(), c.denom()));
        }
        out
    }

    /// Comma-separated coefficients, `num/den` for non-integers.
    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(format_rational).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            match n {
                0 => write!(f, "{}", format_rational(&abs))?,
                _ if abs.is_one() => write!(f, "q^{n}")?,
                _ => write!(f, "{}q^{n}", format_rational(&abs))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    disc: i64,
    precision: usize,
    coeffs: Vec<[i64; 2]>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match (c.numer().to_i64(), c.denom().to_i64()) {
                (Some(n), Some(d)) => Ok([n, d]),
                _ => Err(S::Error::custom(format!("coefficient {c} does not fit in 64 bits"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        SeriesJson { disc: self.disc, precision: self.precision(), coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.coeffs.len() != raw.precision + 1 {
            return Err(D::Error::custom("precision does not match coefficient count"));
        }
        if raw.coeffs.iter().any(|&[_, d]| d == 0) {
            return Err(D::Error::custom("zero denominator"));
        }
        let coeffs = raw.coeffs.iter().map(|&[n, d]| ratio(n, d)).collect();
        Ok(Self { disc: raw.disc, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(disc: i64, c: &[i64]) -> QSeries {
        QSeries::from_integers(disc, c.iter().copied())
    }

    #[test]
    fn linear_examples() {
        let f = series(-4, &[1, 4, 4, 0, 4]);
        let zero = QSeries::zero(-4, 4);
        assert_eq!(f.add(&zero).unwrap(), f);
        assert_eq!(f.scale(&rational(1)), f);
        assert!(f.add(&f.scale(&rational(-1))).unwrap().is_zero());
        assert_eq!(f.add(&series(-3, &[1])), Err(SeriesError::DiscMismatch(-4, -3)));
        assert_eq!(f.add(&series(-4, &[1, 1])).unwrap().precision(), 1);
    }

    #[test]
    fn u_examples() {
        let f = series(-4, &[0, 1, 3, 0, 5]);
        let u = f.apply_u(2);
        assert_eq!(u, series(-4, &[0, 3, 5]));
        assert_eq!(u.precision(), 2);
        assert!(QSeries::zero(-4, 10).apply_u(3).is_zero());

        let theta: Vec<i64> = (0..=9)
            .map(|n| crate::forms::representation_count(&crate::forms::QuadForm::new(1, 0, 1).unwrap(), n) as i64)
            .collect();
        let u3 = series(-4, &theta).apply_u(3);
        assert_eq!(u3.coeff(3), &rational(4));
    }

    #[test]
    fn v_examples() {
        assert_eq!(series(-4, &[1, 1, 0, 0, 0]).apply_v(2), series(-4, &[1, 0, 1, 0, 0]));
        assert!(series(-4, &[0, 0, 1, 0, 0, 0]).apply_v(3).is_zero());
    }

    #[test]
    fn t_examples() {
        // (-4/3) = -1 and the V-term falls outside precision ⌊3/3⌋ = 1.
        let t = series(-4, &[0, 1, 0, 0]).apply_t(3);
        assert_eq!(t.precision(), 1);
        assert!(t.first_mismatch(&QSeries::zero(-4, 1), 1..2).is_none());

        // Ramified: T_p = U_p.
        let f = series(-20, &[1, 2, 0, 0, 2, 2, 4, 0, 0, 2, 0, 0]);
        assert_eq!(f.apply_t(5), f.apply_u(5));
        assert_eq!(f.apply_t(2), f.apply_u(2));
    }

    #[test]
    fn json_shape() {
        let f = QSeries::from_coeffs(-4, vec![ratio(1, 4), rational(1), rational(-2)]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"disc":-4,"precision":2,"coeffs":[[1,4],[1,1],[-2,1]]}"#);
        let back: QSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<QSeries>(r#"{"disc":-4,"precision":3,"coeffs":[[1,1]]}"#).is_err());
    }

    #[test]
    fn csv_and_text() {
        let f = QSeries::from_coeffs(-4, vec![ratio(1, 4), rational(1)]);
        assert_eq!(f.to_csv(), "n,numerator,denominator\n0,1,4\n1,1,1\n");
        assert_eq!(f.to_text(), "1/4, 1");
        assert_eq!(f.to_string(), "1/4 + q^1 + O(q^2)");
    }

    fn arb_series(disc: i64) -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-50i64..50, 1i64..6), 1..40)
            .prop_map(move |c| QSeries::from_coeffs(disc, c.into_iter().map(|(n, d)| ratio(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn u_undoes_v(f in arb_series(-23), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let back = f.apply_v(p).apply_u(p);
            prop_assert_eq!(back.precision(), f.precision() / p as usize);
            prop_assert_eq!(back, f.truncate(f.precision() / p as usize));
        }

        #[test]
        fn operators_are_linear(f in arb_series(-20), g in arb_series(-20), num in -5i64..5, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let r = rational(num);
            let combo = f.add(&g.scale(&r)).unwrap();
            prop_assert_eq!(combo.apply_u(p), f.apply_u(p).add(&g.apply_u(p).scale(&r)).unwrap());
            prop_assert_eq!(combo.apply_v(p), f.apply_v(p).add(&g.apply_v(p).scale(&r)).unwrap());
            prop_assert_eq!(combo.apply_t(p), f.apply_t(p).add(&g.apply_t(p).scale(&r)).unwrap());
        }

        #[test]
        fn json_round_trip(f in arb_series(-84)) {
            let json = serde_json::to_string(&f).unwrap();
            prop_assert_eq!(serde_json::from_str::<QSeries>(&json).unwrap(), f);
        }
    }
}
