//! Construction of the concrete q-series attached to a discriminant: class
//! theta series, genus averages, character-twisted sums and the Eisenstein
//! series `E_{d,D}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{divisors, kronecker, ArithError, Discriminant};
use crate::class_group::{ClassGroup, ClassGroupError, ClassIndex, GenusId};
use crate::forms::{reduced_forms, representation_counts};
use crate::genus::{character_pairs, character_table, CharacterPair, GenusCharacter, GenusError};
use crate::qseries::{format_rational, ratio, rational, QSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    ClassGroup(#[from] ClassGroupError),
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error("twisted sum for d = {d}: class and genus formulas differ at q^{n} ({lhs} vs {rhs})")]
    TwistedFormulaMismatch { d: i64, n: usize, lhs: String, rhs: String },
    #[error("unknown series label {0:?}; expected theta:h, genus:g, eisenstein:d, twisted:d, cusp:h or classavg")]
    UnknownLabel(String),
    #[error("{0} is out of range")]
    OutOfRange(String),
}

/// Names a series by what it is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesLabel {
    Theta(ClassIndex),
    GenusAvg(GenusId),
    Twisted(i64),
    Eisenstein(i64),
    ClassAvg,
    /// `Θ_h - E_{genus(h)}`.
    Cusp(ClassIndex),
}

impl fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesLabel::Theta(h) => write!(f, "theta:{h}"),
            SeriesLabel::GenusAvg(g) => write!(f, "genus:{g}"),
            SeriesLabel::Twisted(d) => write!(f, "twisted:{d}"),
            SeriesLabel::Eisenstein(d) => write!(f, "eisenstein:{d}"),
            SeriesLabel::ClassAvg => write!(f, "classavg"),
            SeriesLabel::Cusp(h) => write!(f, "cusp:{h}"),
        }
    }
}

impl FromStr for SeriesLabel {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || BuildError::UnknownLabel(s.to_string());
        if s == "classavg" {
            return Ok(SeriesLabel::ClassAvg);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(unknown)?;
        let index = || arg.parse::<usize>().map_err(|_| unknown());
        let int = || arg.parse::<i64>().map_err(|_| unknown());
        Ok(match kind {
            "theta" => SeriesLabel::Theta(ClassIndex(index()?)),
            "genus" => SeriesLabel::GenusAvg(GenusId(index()?)),
            "twisted" => SeriesLabel::Twisted(int()?),
            "eisenstein" => SeriesLabel::Eisenstein(int()?),
            "cusp" => SeriesLabel::Cusp(ClassIndex(index()?)),
            _ => return Err(unknown()),
        })
    }
}

/// `L(0, (Δ/·)) = 2h/w`.
pub fn l0(delta: &Discriminant) -> BigRational {
    let h = reduced_forms(delta).len() as i64;
    ratio(2 * h, delta.unit_count() as i64)
}

/// `Θ_h = Σ r(Q_h, n) qⁿ`.
pub fn theta(group: &ClassGroup, h: ClassIndex, precision: usize) -> QSeries {
    let counts = representation_counts(group.form(h), precision as u64);
    QSeries::from_integers(group.delta().value(), counts.into_iter().map(|c| c as i64))
}

/// Theta series of every class, in class order.
pub fn thetas(group: &ClassGroup, precision: usize) -> Vec<QSeries> {
    let classes: Vec<_> = group.indices().collect();
    classes.into_par_iter().map(|h| theta(group, h, precision)).collect()
}

/// `E_{d,D} = ½δ_{d=1}L(0,Δ) + Σ_n Σ_{t|n} (d/(n/t))(D/t) qⁿ`.
pub fn eisenstein_dd(pair: CharacterPair, precision: usize) -> Result<QSeries, BuildError> {
    let delta = Discriminant::new(pair.d * pair.neg)?;
    if !character_pairs(&delta).contains(&pair) {
        return Err(GenusError::NotACharacterPair { d: pair.d, neg: pair.neg, delta: delta.value() }.into());
    }
    let constant = if pair.d == 1 { l0(&delta) / rational(2) } else { BigRational::zero() };
    let mut coeffs = vec![constant];
    for n in 1..=precision as u64 {
        let sum: i64 = divisors(n)?
            .into_iter()
            .map(|t| (kronecker(pair.d, (n / t) as i64) * kronecker(pair.neg, t as i64)) as i64)
            .sum();
        coeffs.push(rational(sum));
    }
    Ok(QSeries::from_coeffs(delta.value(), coeffs))
}

/// Every series attached to one discriminant, sharing the class theta series.
#[derive(Debug, Clone)]
pub struct SeriesBook {
    group: ClassGroup,
    characters: Vec<GenusCharacter>,
    thetas: Vec<QSeries>,
    precision: usize,
}

impl SeriesBook {
    pub fn new(delta: &Discriminant, precision: usize) -> Result<Self, BuildError> {
        let group = ClassGroup::new(delta)?;
        Self::from_group(group, precision)
    }

    pub fn from_group(group: ClassGroup, precision: usize) -> Result<Self, BuildError> {
        let characters = character_table(&group)?;
        let thetas = thetas(&group, precision);
        Ok(Self { group, characters, thetas, precision })
    }

    pub fn group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn characters(&self) -> &[GenusCharacter] {
        &self.characters
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    fn disc(&self) -> i64 {
        self.group.delta().value()
    }

    fn w(&self) -> i64 {
        self.group.delta().unit_count() as i64
    }

    pub fn character(&self, d: i64) -> Option<&GenusCharacter> {
        self.characters.iter().find(|c| c.pair.d == d)
    }

    fn check_class(&self, h: ClassIndex) -> Result<(), BuildError> {
        if h.0 >= self.group.class_number() {
            return Err(BuildError::OutOfRange(format!("class index {h}")));
        }
        Ok(())
    }

    fn check_genus(&self, g: GenusId) -> Result<(), BuildError> {
        if !self.group.genus_ids().any(|id| id == g) {
            return Err(BuildError::OutOfRange(format!("genus id {g}")));
        }
        Ok(())
    }

    pub fn theta(&self, h: ClassIndex) -> &QSeries {
        &self.thetas[h.0]
    }

    pub fn thetas(&self) -> &[QSeries] {
        &self.thetas
    }

    fn sum(&self, terms: impl IntoIterator<Item = QSeries>) -> QSeries {
        terms
            .into_iter()
            .fold(QSeries::zero(self.disc(), self.precision), |acc, s| acc.add(&s).expect("same discriminant"))
    }

    /// `Σ_{h ∈ H} Θ_h`.
    pub fn class_sum(&self) -> QSeries {
        self.sum(self.thetas.iter().cloned())
    }

    /// `(1/w) Σ_{h ∈ H} Θ_h`.
    pub fn class_average(&self) -> QSeries {
        self.class_sum().scale(&ratio(1, self.w()))
    }

    /// `E_g = (1/|H²|) Σ_{h ∈ g} Θ_h`.
    pub fn genus_average(&self, g: GenusId) -> QSeries {
        let members = self.group.genus_members(g);
        let total = self.sum(members.iter().map(|&h| self.thetas[h.0].clone()));
        total.scale(&ratio(1, self.group.squares().len() as i64))
    }

    /// `E_χ = (1/w) Σ_h χ(h)Θ_h`, cross-checked against `(|H²|/w) Σ_g χ(g)E_g`.
    pub fn twisted_sum(&self, chi: &GenusCharacter) -> Result<QSeries, BuildError> {
        let by_class = self
            .sum(self.group.indices().map(|h| self.thetas[h.0].scale(&rational(chi.on_class(&self.group, h) as i64))))
            .scale(&ratio(1, self.w()));
        let by_genus = self
            .sum(self.group.genus_ids().map(|g| self.genus_average(g).scale(&rational(chi.value(g) as i64))))
            .scale(&ratio(self.group.squares().len() as i64, self.w()));
        if let Some(m) = by_class.first_mismatch(&by_genus, 0..self.precision + 1) {
            return Err(BuildError::TwistedFormulaMismatch { d: chi.pair.d, n: m.n, lhs: m.lhs, rhs: m.rhs });
        }
        Ok(by_class)
    }

    pub fn eisenstein(&self, pair: CharacterPair) -> Result<QSeries, BuildError> {
        eisenstein_dd(pair, self.precision)
    }

    /// `(w/|H|) Σ_χ χ(g) E_{d,D}`.
    pub fn siegel_rhs(&self, g: GenusId) -> Result<QSeries, BuildError> {
        self.check_genus(g)?;
        let mut terms = Vec::with_capacity(self.characters.len());
        for chi in &self.characters {
            terms.push(self.eisenstein(chi.pair)?.scale(&rational(chi.value(g) as i64)));
        }
        Ok(self.sum(terms).scale(&ratio(self.w(), self.group.class_number() as i64)))
    }

    pub fn build(&self, label: SeriesLabel) -> Result<QSeries, BuildError> {
        match label {
            SeriesLabel::Theta(h) => {
                self.check_class(h)?;
                Ok(self.theta(h).clone())
            }
            SeriesLabel::GenusAvg(g) => {
                self.check_genus(g)?;
                Ok(self.genus_average(g))
            }
            SeriesLabel::Twisted(d) => {
                let chi = self.character(d).ok_or_else(|| BuildError::OutOfRange(format!("character d = {d}")))?;
                self.twisted_sum(chi)
            }
            SeriesLabel::Eisenstein(d) => {
                let chi = self.character(d).ok_or_else(|| BuildError::OutOfRange(format!("character d = {d}")))?;
                self.eisenstein(chi.pair)
            }
            SeriesLabel::ClassAvg => Ok(self.class_average()),
            SeriesLabel::Cusp(h) => {
                self.check_class(h)?;
                let e = self.genus_average(self.group.genus_of(h));
                Ok(self.theta(h).sub(&e).expect("same discriminant"))
            }
        }
    }
}

/// `½ L(0, Δ)`, the constant term of `E_{1,Δ}`, as text.
pub fn half_l0_text(delta: &Discriminant) -> String {
    format_rational(&(l0(delta) / BigRational::from_integer(BigInt::from(2))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::representation_count;
    use num_traits::One;

    fn book(d: i64, n: usize) -> SeriesBook {
        SeriesBook::new(&Discriminant::new(d).unwrap(), n).unwrap()
    }

    fn ints(s: &QSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                c.numer().try_into().unwrap()
            })
            .collect()
    }

    fn pair(d: i64, neg: i64) -> CharacterPair {
        CharacterPair { d, neg }
    }

    #[test]
    fn theta_examples() {
        let b = book(-4, 5);
        assert_eq!(ints(b.theta(ClassIndex(0))), vec![1, 4, 4, 0, 4, 8]);
        let b = book(-20, 10);
        let h = b.group().class_of(&crate::forms::QuadForm::new(2, 2, 3).unwrap()).unwrap();
        assert_eq!(b.theta(h).coeff(3), &rational(4));
        for d in [-3, -23, -84] {
            let b = book(d, 30);
            for h in b.group().indices() {
                assert!(b.theta(h).coeff(0).is_one());
                for n in 0..=30 {
                    assert_eq!(
                        b.theta(h).coeff(n),
                        &rational(representation_count(b.group().form(h), n as u64) as i64)
                    );
                }
            }
        }
    }

    #[test]
    fn genus_average_examples() {
        let b = book(-20, 10);
        assert_eq!(b.genus_average(GenusId(0)).coeff(5), &rational(2));
        for d in [-20, -47, -84, -231] {
            let b = book(d, 10);
            for g in b.group().genus_ids() {
                assert!(b.genus_average(g).coeff(0).is_one());
            }
        }
        let b = book(-47, 20);
        let avg = b.class_sum().scale(&ratio(1, 5));
        assert_eq!(b.genus_average(GenusId(0)), avg);
    }

    #[test]
    fn twisted_examples() {
        let b = book(-20, 10);
        let trivial = b.twisted_sum(b.character(1).unwrap()).unwrap();
        assert!(trivial.coeff(0).is_one());
        let t5 = b.twisted_sum(b.character(5).unwrap()).unwrap();
        assert_eq!(t5.coeff(0), &rational(0));
        assert_eq!(t5.coeff(1), &rational(1));
        for d in [-84, -420] {
            let b = book(d, 5);
            for chi in b.characters().iter().skip(1) {
                assert!(b.twisted_sum(chi).unwrap().coeff(0).is_zero());
            }
        }
    }

    #[test]
    fn eisenstein_examples() {
        let e = eisenstein_dd(pair(1, -4), 5).unwrap();
        assert_eq!(e.coeff(5), &rational(2));
        assert_eq!(e.coeff(0), &ratio(1, 4));
        let e = eisenstein_dd(pair(5, -4), 5).unwrap();
        assert_eq!(e.coeff(1), &rational(1));
        assert!(e.coeff(0).is_zero());
        assert!(eisenstein_dd(pair(2, -10), 5).is_err());
        assert!(eisenstein_dd(pair(4, -3), 5).is_err());
    }

    #[test]
    fn l0_examples() {
        let l = |d| l0(&Discriminant::new(d).unwrap());
        assert_eq!(l(-4), ratio(1, 2));
        assert_eq!(l(-3), ratio(1, 3));
        assert_eq!(l(-20), rational(2));
        assert_eq!(half_l0_text(&Discriminant::new(-4).unwrap()), "1/4");
    }

    #[test]
    fn siegel_rhs_examples() {
        let b = book(-4, 10);
        let rhs = b.siegel_rhs(GenusId(0)).unwrap();
        assert_eq!(rhs.coeff(1), &rational(4));
        assert_eq!(rhs, eisenstein_dd(pair(1, -4), 10).unwrap().scale(&rational(4)));
        for d in [-3, -20, -84, -420] {
            let b = book(d, 3);
            for g in b.group().genus_ids() {
                assert!(b.siegel_rhs(g).unwrap().coeff(0).is_one());
            }
        }
        let b = book(-20, 3);
        let other = b.group().genus_ids().find(|&g| g != GenusId(0)).unwrap();
        assert!(b.siegel_rhs(other).unwrap().coeff(1).is_zero());
    }

    #[test]
    fn eisenstein_is_hecke_eigenform() {
        for d in [-3i64, -4, -20, -23, -84] {
            let e = eisenstein_dd(pair(1, d), 120).unwrap();
            for p in crate::arith::primes_up_to(23) {
                if d % p as i64 == 0 {
                    continue;
                }
                let eig = rational(1 + kronecker(d, p as i64) as i64);
                let image = e.apply_t(p);
                let expected = e.truncate(image.precision()).scale(&eig);
                assert!(image.first_mismatch(&expected, 1..image.precision() + 1).is_none(), "Δ={d} p={p}");
            }
        }
    }

    #[test]
    fn labels_parse() {
        for s in ["theta:0", "genus:2", "eisenstein:5", "twisted:21", "classavg", "cusp:1"] {
            assert_eq!(s.parse::<SeriesLabel>().unwrap().to_string(), s);
        }
        assert!("theta".parse::<SeriesLabel>().is_err());
        assert!("bogus:1".parse::<SeriesLabel>().is_err());
        assert!("theta:-1".parse::<SeriesLabel>().is_err());
    }

    #[test]
    fn cusp_part_vanishes_for_singleton_genera() {
        let b = book(-84, 40);
        for h in b.group().indices() {
            assert!(b.build(SeriesLabel::Cusp(h)).unwrap().is_zero());
        }
        let b = book(-47, 40);
        assert!(!b.build(SeriesLabel::Cusp(ClassIndex(0))).unwrap().is_zero());
    }
}
