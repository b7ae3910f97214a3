//! Genus characters `χ_{d,D}` for the factorizations `Δ = d·D`, `d > 0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{kronecker, prime_discriminant_factorization, Discriminant};
use crate::class_group::{ClassGroup, GenusId};
use crate::forms::QuadForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("no value of {form} coprime to {d} with |x|, |y| <= {cap}")]
    SearchExhausted { form: QuadForm, d: i64, cap: i64 },
    #[error("({d}, {neg}) is not a genus character pair for {delta}")]
    NotACharacterPair { d: i64, neg: i64, delta: i64 },
}

/// A factorization `Δ = d·D` with `d > 0` a fundamental discriminant or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharacterPair {
    pub d: i64,
    #[serde(rename = "D")]
    pub neg: i64,
}

/// All `2^{t-1}` pairs, ordered by `d`; the first is `(1, Δ)`.
pub fn character_pairs(delta: &Discriminant) -> Vec<CharacterPair> {
    let factors = prime_discriminant_factorization(delta);
    let factors = factors.factors();
    let mut pairs: Vec<_> = (0u32..1 << factors.len())
        .map(|mask| factors.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &f)| f).product::<i64>())
        .filter(|&d| d > 0)
        .map(|d| CharacterPair { d, neg: delta.value() / d })
        .collect();
    pairs.sort();
    pairs
}

/// Smallest `r = Q(x, y) > 0` with `gcd(r, d) = 1`, searching square shells
/// `max(|x|, |y|) = k` for `k = 1, 2, …, 4d`.
pub fn represented_coprime_value(q: &QuadForm, d: i64) -> Result<u64, GenusError> {
    let cap = 4 * d.max(1);
    for k in 1..=cap {
        let best = shell(k)
            .map(|(x, y)| q.eval_wide(x as i128, y as i128))
            .filter(|&r| r > 0 && (r as i64).gcd(&d) == 1)
            .min();
        if let Some(r) = best {
            return Ok(r as u64);
        }
    }
    Err(GenusError::SearchExhausted { form: *q, d, cap })
}

/// Distinct admissible values `r` with `gcd(r, d) = 1` among `|x|, |y| ≤ k`, ascending.
pub fn admissible_values(q: &QuadForm, d: i64, k: i64) -> Vec<u64> {
    let mut values: Vec<u64> = (1..=k)
        .flat_map(shell)
        .map(|(x, y)| q.eval_wide(x as i128, y as i128) as u64)
        .filter(|&r| r > 0 && (r as i64).gcd(&d) == 1)
        .collect();
    values.sort_unstable();
    values.dedup();
    values
}

/// Points with `max(|x|, |y|) = k`.
fn shell(k: i64) -> impl Iterator<Item = (i64, i64)> {
    (-k..=k).flat_map(move |x| {
        let ys: Vec<i64> = if x.abs() == k { (-k..=k).collect() } else { vec![-k, k] };
        ys.into_iter().map(move |y| (x, y))
    })
}

/// `χ_{d,D}(g) = (d/r)` for a value `r` of the genus' smallest form coprime to `d`.
pub fn character_value(pair: CharacterPair, group: &ClassGroup, genus: GenusId) -> Result<i32, GenusError> {
    let q = group.form(crate::class_group::ClassIndex(genus.0));
    let r = represented_coprime_value(q, pair.d)?;
    let value = kronecker(pair.d, r as i64);
    assert!(value == 1 || value == -1, "(d/r) must be ±1 for gcd(d, r) = 1");
    Ok(value)
}

/// A genus character with its value on every genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusCharacter {
    pub pair: CharacterPair,
    pub values: BTreeMap<GenusId, i32>,
}

impl GenusCharacter {
    pub fn new(pair: CharacterPair, group: &ClassGroup) -> Result<Self, GenusError> {
        let delta = group.delta().value();
        if pair.d <= 0 || pair.d.checked_mul(pair.neg) != Some(delta) || !character_pairs(group.delta()).contains(&pair)
        {
            return Err(GenusError::NotACharacterPair { d: pair.d, neg: pair.neg, delta });
        }
        let values =
            group.genus_ids().map(|g| character_value(pair, group, g).map(|v| (g, v))).collect::<Result<_, _>>()?;
        Ok(Self { pair, values })
    }

    pub fn value(&self, g: GenusId) -> i32 {
        self.values[&g]
    }

    /// Value on the genus of a class.
    pub fn on_class(&self, group: &ClassGroup, h: crate::class_group::ClassIndex) -> i32 {
        self.value(group.genus_of(h))
    }
}

/// The dual group `G*` as the list of all genus characters.
pub fn character_table(group: &ClassGroup) -> Result<Vec<GenusCharacter>, GenusError> {
    character_pairs(group.delta()).into_iter().map(|p| GenusCharacter::new(p, group)).collect()
}

/// `(1/|G|)·Σ_χ χ(g)`: 1 on the principal genus and 0 elsewhere.
pub fn orthogonality_sum(table: &[GenusCharacter], g: GenusId) -> BigRational {
    let sum: i64 = table.iter().map(|chi| chi.value(g) as i64).sum();
    BigRational::new(BigInt::from(sum), BigInt::from(table.len()))
}
