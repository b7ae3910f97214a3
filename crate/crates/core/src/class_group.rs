//! The form class group `H(Δ)` built from ideal multiplication, its subgroup
//! of squares `H²`, and the genus partition `G = H/H²`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{kronecker, Discriminant};
use crate::forms::{reduced_forms, QuadForm, ReducedForm};
use crate::ideal::{form_to_ideal, ideal_to_form, IdealBasis, IdealError, Order};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassGroupError {
    #[error("{p} is inert for discriminant {delta}: no prime ideal of norm {p}")]
    InertPrime { delta: i64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("form {0} does not have discriminant {1}")]
    WrongDiscriminant(QuadForm, i64),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// Position of a reduced form within the sorted class list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ClassIndex(pub usize);

/// A genus, named by the smallest class index it contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GenusId(pub usize);

impl fmt::Display for ClassIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for GenusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `H(Δ)` with a complete composition table.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    delta: Discriminant,
    order: Order,
    classes: Vec<ReducedForm>,
    lookup: HashMap<ReducedForm, ClassIndex>,
    table: Vec<Vec<ClassIndex>>,
    identity: ClassIndex,
    squares: BTreeSet<ClassIndex>,
    genera: Vec<Vec<ClassIndex>>,
    genus_of: Vec<GenusId>,
}

impl ClassGroup {
    pub fn new(delta: &Discriminant) -> Result<Self, ClassGroupError> {
        let order = Order::new(delta);
        let classes = reduced_forms(delta);
        let lookup: HashMap<_, _> = classes.iter().enumerate().map(|(i, &r)| (r, ClassIndex(i))).collect();
        let ideals: Vec<IdealBasis> = classes.iter().map(|r| form_to_ideal(&order, r)).collect();

        let h = classes.len();
        let mut table = vec![vec![ClassIndex(0); h]; h];
        for i in 0..h {
            for j in i..h {
                let product = ideals[i].multiply(&order, &ideals[j])?;
                let k = lookup[&ideal_to_form(&order, &product)?];
                table[i][j] = k;
                table[j][i] = k;
            }
        }

        // The principal form [1, b, c] sorts first.
        let identity = ClassIndex(0);
        debug_assert_eq!(classes[0].a(), 1);

        let squares: BTreeSet<_> = (0..h).map(|i| table[i][i]).collect();
        let mut genus_of = vec![GenusId(usize::MAX); h];
        let mut genera = Vec::new();
        for i in 0..h {
            if genus_of[i].0 != usize::MAX {
                continue;
            }
            let mut coset: Vec<_> = squares.iter().map(|s| table[i][s.0]).collect();
            coset.sort();
            for c in &coset {
                genus_of[c.0] = GenusId(i);
            }
            genera.push(coset);
        }

        Ok(Self { delta: delta.clone(), order, classes, lookup, table, identity, squares, genera, genus_of })
    }

    pub fn delta(&self) -> &Discriminant {
        &self.delta
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    /// `|H|`.
    pub fn class_number(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ReducedForm] {
        &self.classes
    }

    pub fn indices(&self) -> impl Iterator<Item = ClassIndex> {
        (0..self.classes.len()).map(ClassIndex)
    }

    pub fn form(&self, h: ClassIndex) -> &ReducedForm {
        &self.classes[h.0]
    }

    pub fn ideal(&self, h: ClassIndex) -> IdealBasis {
        form_to_ideal(&self.order, &self.classes[h.0])
    }

    /// Class of an arbitrary form of this discriminant.
    pub fn class_of(&self, q: &QuadForm) -> Result<ClassIndex, ClassGroupError> {
        if q.discriminant() != self.delta.value() {
            return Err(ClassGroupError::WrongDiscriminant(*q, self.delta.value()));
        }
        Ok(self.lookup[&q.reduce()])
    }

    /// Class of the ideal `I` under `I ↦ Q_I`.
    pub fn class_of_ideal(&self, ideal: &IdealBasis) -> Result<ClassIndex, ClassGroupError> {
        Ok(self.lookup[&ideal_to_form(&self.order, ideal)?])
    }

    pub fn identity(&self) -> ClassIndex {
        self.identity
    }

    pub fn compose(&self, h1: ClassIndex, h2: ClassIndex) -> ClassIndex {
        self.table[h1.0][h2.0]
    }

    pub fn composition_table(&self) -> &[Vec<ClassIndex>] {
        &self.table
    }

    /// Class of `[a, -b, c]`.
    pub fn inverse(&self, h: ClassIndex) -> ClassIndex {
        self.lookup[&self.classes[h.0].opposite().reduce()]
    }

    pub fn pow(&self, h: ClassIndex, k: u64) -> ClassIndex {
        (0..k).fold(self.identity, |acc, _| self.compose(acc, h))
    }

    pub fn order_of(&self, h: ClassIndex) -> usize {
        let mut acc = h;
        let mut n = 1;
        while acc != self.identity {
            acc = self.compose(acc, h);
            n += 1;
        }
        n
    }

    /// `H²`.
    pub fn squares(&self) -> &BTreeSet<ClassIndex> {
        &self.squares
    }

    /// Cosets of `H²`, each sorted, ordered by their smallest member.
    pub fn genera(&self) -> &[Vec<ClassIndex>] {
        &self.genera
    }

    pub fn genus_ids(&self) -> impl Iterator<Item = GenusId> + '_ {
        self.genera.iter().map(|g| GenusId(g[0].0))
    }

    pub fn genus_count(&self) -> usize {
        self.genera.len()
    }

    pub fn genus_of(&self, h: ClassIndex) -> GenusId {
        self.genus_of[h.0]
    }

    pub fn principal_genus(&self) -> GenusId {
        self.genus_of(self.identity)
    }

    /// Classes in the genus `g`; panics on an id that names no genus.
    pub fn genus_members(&self, g: GenusId) -> &[ClassIndex] {
        self.genera.iter().find(|members| members[0].0 == g.0).unwrap_or_else(|| panic!("no genus with id {}", g.0))
    }

    /// Product of genera in `G`.
    pub fn compose_genera(&self, g1: GenusId, g2: GenusId) -> GenusId {
        self.genus_of(self.compose(ClassIndex(g1.0), ClassIndex(g2.0)))
    }

    /// Class of a prime ideal `𝔭` above `p`, from `[p, b, (b² - Δ)/4p]` with the
    /// smallest `b ∈ [0, 2p)` satisfying `b² ≡ Δ (mod 4p)`. The conjugate `𝔭'`
    /// is its inverse.
    pub fn prime_ideal_class(&self, p: u64) -> Result<ClassIndex, ClassGroupError> {
        self.class_of(&prime_form(&self.delta, p)?)
    }
}

/// The form `[p, b, c]` attached to a split or ramified prime `p`.
pub fn prime_form(delta: &Discriminant, p: u64) -> Result<QuadForm, ClassGroupError> {
    if !crate::arith::is_prime(p) {
        return Err(ClassGroupError::NotPrime(p));
    }
    let d = delta.value();
    if kronecker(d, p as i64) == -1 {
        return Err(ClassGroupError::InertPrime { delta: d, p });
    }
    let p = p as i64;
    (0..2 * p)
        .filter(|b| (b - d).rem_euclid(2) == 0)
        .find_map(|b| QuadForm::from_a_b(p, b, d))
        .ok_or(ClassGroupError::InertPrime { delta: d, p: p as u64 })
}
