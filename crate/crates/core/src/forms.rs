//! Positive definite binary quadratic forms `[a, b, c] = ax² + bxy + cy²`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{isqrt, Discriminant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("form [{0}, {1}, {2}] is not positive definite")]
    NotPositiveDefinite(i64, i64, i64),
    #[error("form [{0}, {1}, {2}] is not primitive")]
    NotPrimitive(i64, i64, i64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// An integral, primitive, positive definite binary quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    a: i64,
    b: i64,
    c: i64,
}

/// A 2×2 integer matrix acting on column vectors `(x, y)`.
pub type Matrix2 = [[i64; 2]; 2];

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, FormError> {
        let ac4 = (4 * a as i128).checked_mul(c as i128).ok_or(FormError::Overflow("discriminant"))?;
        let disc = (b as i128) * (b as i128) - ac4;
        if a <= 0 || disc >= 0 {
            return Err(FormError::NotPositiveDefinite(a, b, c));
        }
        if i64::try_from(disc).is_err() {
            return Err(FormError::Overflow("discriminant"));
        }
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(FormError::NotPrimitive(a, b, c));
        }
        Ok(Self { a, b, c })
    }

    /// The form `[a, b, (b² - Δ)/4a]`; `None` if `c` would not be integral.
    pub fn from_a_b(a: i64, b: i64, delta: i64) -> Option<Self> {
        let num = (b as i128) * (b as i128) - delta as i128;
        let den = 4 * a as i128;
        if a <= 0 || num % den != 0 {
            return None;
        }
        let c = i64::try_from(num / den).ok()?;
        Self::new(a, b, c).ok()
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn coefficients(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    /// `b² - 4ac`; validated to fit in `i64` at construction.
    pub fn discriminant(&self) -> i64 {
        (self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128) as i64
    }

    pub fn evaluate(&self, x: i64, y: i64) -> Result<i64, FormError> {
        let overflow = || FormError::Overflow("evaluate");
        let ax2 = self.a.checked_mul(x).and_then(|v| v.checked_mul(x)).ok_or_else(overflow)?;
        let bxy = self.b.checked_mul(x).and_then(|v| v.checked_mul(y)).ok_or_else(overflow)?;
        let cy2 = self.c.checked_mul(y).and_then(|v| v.checked_mul(y)).ok_or_else(overflow)?;
        ax2.checked_add(bxy).and_then(|v| v.checked_add(cy2)).ok_or_else(overflow)
    }

    /// Evaluation in `i128`; cannot overflow for `i64` arguments of the sizes
    /// used by the enumeration kernels.
    pub(crate) fn eval_wide(&self, x: i128, y: i128) -> i128 {
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// The form `(x, y) ↦ Q(M·(x, y))`.
    pub fn transform(&self, m: &Matrix2) -> Result<Self, FormError> {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let [[p, q], [r, s]] = m.map(|row| row.map(|v| v as i128));
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        let fit = |v: i128| i64::try_from(v).map_err(|_| FormError::Overflow("transform"));
        Self::new(fit(na)?, fit(nb)?, fit(nc)?)
    }

    /// The form `[a, -b, c]`, representing the inverse class.
    pub fn opposite(&self) -> Self {
        Self { a: self.a, b: -self.b, c: self.c }
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Gauss reduction.
    pub fn reduce(&self) -> ReducedForm {
        self.reduce_with_transform().0
    }

    /// Gauss reduction, also returning `M ∈ SL₂(ℤ)` with `reduced = Q∘M`.
    pub fn reduce_with_transform(&self) -> (ReducedForm, Matrix2) {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        let mut m: [[i128; 2]; 2] = [[1, 0], [0, 1]];
        loop {
            // Translate b into (-a, a] by x ↦ x + ky.
            if b <= -a || b > a {
                let k = Integer::div_floor(&(a - b), &(2 * a));
                let nb = b + 2 * a * k;
                c += k * (b + a * k);
                b = nb;
                m = [[m[0][0], m[0][0] * k + m[0][1]], [m[1][0], m[1][0] * k + m[1][1]]];
            }
            if a > c || (a == c && b < 0) {
                // (x, y) ↦ (-y, x)
                std::mem::swap(&mut a, &mut c);
                b = -b;
                m = [[m[0][1], -m[0][0]], [m[1][1], -m[1][0]]];
                continue;
            }
            break;
        }
        let form = QuadForm { a: a as i64, b: b as i64, c: c as i64 };
        let m = m.map(|row| row.map(|v| v as i64));
        (ReducedForm(form), m)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// A Gauss-reduced form: `|b| ≤ a ≤ c`, with `b ≥ 0` whenever `|b| = a` or `a = c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReducedForm(QuadForm);

impl ReducedForm {
    pub fn form(&self) -> &QuadForm {
        &self.0
    }
}

impl std::ops::Deref for ReducedForm {
    type Target = QuadForm;

    fn deref(&self) -> &QuadForm {
        &self.0
    }
}

impl From<ReducedForm> for QuadForm {
    fn from(r: ReducedForm) -> Self {
        r.0
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One reduced form per class, sorted lexicographically by `(a, b, c)`.
pub fn reduced_forms(delta: &Discriminant) -> Vec<ReducedForm> {
    let d = delta.value();
    let a_max = isqrt(delta.abs() as u128 / 3) as i64;
    let mut out = Vec::new();
    for a in 1..=a_max {
        for b in -a..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            if let Some(q) = QuadForm::from_a_b(a, b, d) {
                if q.is_reduced() {
                    out.push(ReducedForm(q));
                }
            }
        }
    }
    out.sort();
    out
}

/// `floor(sqrt(4·k·n/|Δ|))`: the largest `|x|` with `Q(x, y) ≤ n` for some `y`,
/// when `k` is the coefficient of `y²`.
fn coordinate_bound(k: i64, n: u64, abs_disc: u64) -> i128 {
    isqrt(4 * k as u128 * n as u128 / abs_disc as u128) as i128
}

/// `#{(x, y) ∈ ℤ² : Q(x, y) = n}`.
///
/// Scans `x` over the ellipse's projection and solves the quadratic in `y`.
pub fn representation_count(q: &QuadForm, n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let (a, b, c) = (q.a as i128, q.b as i128, q.c as i128);
    let delta = q.discriminant() as i128;
    let n = n as i128;
    let bound = coordinate_bound(q.c, n as u64, q.discriminant().unsigned_abs());
    let mut count = 0;
    for x in -bound..=bound {
        // c·y² + b·x·y + (a·x² - n) = 0
        let disc_y = delta * x * x + 4 * c * n;
        if disc_y < 0 {
            continue;
        }
        let s = isqrt(disc_y as u128) as i128;
        if s * s != disc_y {
            continue;
        }
        for root in [-b * x + s, -b * x - s] {
            if root % (2 * c) == 0 {
                let y = root / (2 * c);
                debug_assert_eq!(a * x * x + b * x * y + c * y * y, n);
                count += 1;
            }
            if s == 0 {
                break;
            }
        }
    }
    count
}

/// `r(Q, n)` for every `0 ≤ n ≤ max_n`, by a single pass over the lattice
/// points inside the ellipse `Q(x, y) ≤ max_n`.
pub fn representation_counts(q: &QuadForm, max_n: u64) -> Vec<u64> {
    let mut counts = vec![0u64; max_n as usize + 1];
    let (b, c) = (q.b as i128, q.c as i128);
    let delta = q.discriminant() as i128;
    let limit = max_n as i128;
    let bound = coordinate_bound(q.c, max_n, q.discriminant().unsigned_abs());
    for x in -bound..=bound {
        // Q(x, y) ≤ limit  ⟺  y between the roots of c·y² + b·x·y + (a·x² - limit).
        let disc_y = delta * x * x + 4 * c * limit;
        if disc_y < 0 {
            continue;
        }
        let s = isqrt(disc_y as u128) as i128 + 1;
        let lo = Integer::div_floor(&(-b * x - s), &(2 * c));
        let hi = Integer::div_ceil(&(-b * x + s), &(2 * c));
        for y in lo..=hi {
            let v = q.eval_wide(x, y);
            if v <= limit {
                counts[v as usize] += 1;
            }
        }
    }
    counts
}

/// Automorph count `w_Δ`: 4 for Δ = -4, 6 for Δ = -3, otherwise 2.
pub fn automorph_count(delta: &Discriminant) -> u32 {
    delta.unit_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::new(a, b, c).unwrap()
    }

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    /// Box scan; independent of the ellipse bounds used by the library.
    fn brute_count(q: &QuadForm, n: u64) -> u64 {
        let r = (n as i64 + 1) * 2;
        let mut count = 0;
        for x in -r..=r {
            for y in -r..=r {
                if q.evaluate(x, y).unwrap() == n as i64 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(form(1, 0, 1).evaluate(1, 2), Ok(5));
        assert_eq!(form(2, 2, 3).evaluate(0, 1), Ok(3));
        assert_eq!(form(1, 1, 1).evaluate(-1, 1), Ok(1));
        assert_eq!(form(1, 0, 1).evaluate(0, 0), Ok(0));
        assert_eq!(form(1, 0, 1).evaluate(i64::MAX, 1), Err(FormError::Overflow("evaluate")));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(form(1, 0, 1).discriminant(), -4);
        assert_eq!(form(1, 1, 1).discriminant(), -3);
        assert_eq!(form(2, 2, 3).discriminant(), -20);
    }

    #[test]
    fn constructor_rejects_bad_forms() {
        assert!(matches!(QuadForm::new(2, 0, 2), Err(FormError::NotPrimitive(..))));
        assert!(matches!(QuadForm::new(-1, 0, -1), Err(FormError::NotPositiveDefinite(..))));
        assert!(matches!(QuadForm::new(1, 3, 1), Err(FormError::NotPositiveDefinite(..))));
        assert!(matches!(QuadForm::new(i64::MAX, 0, i64::MAX), Err(FormError::Overflow(_))));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(*form(1, 0, 1).reduce(), form(1, 0, 1));
        assert_eq!(*form(2, 2, 1).reduce(), form(1, 0, 1));
        assert_eq!(*form(3, 2, 2).reduce(), form(2, 2, 3));
        assert_eq!(*form(2, -2, 3).reduce(), form(2, 2, 3));
        assert_eq!(*form(3, 1, 2).reduce(), form(2, -1, 3));
        assert_eq!(*form(5, 0, 1).reduce(), form(1, 0, 5));
    }

    #[test]
    fn reduced_forms_examples() {
        let list = |d| reduced_forms(&disc(d)).into_iter().map(|r| r.coefficients()).collect::<Vec<_>>();
        assert_eq!(list(-4), vec![(1, 0, 1)]);
        assert_eq!(list(-3), vec![(1, 1, 1)]);
        assert_eq!(list(-20), vec![(1, 0, 5), (2, 2, 3)]);
        assert_eq!(list(-23), vec![(1, 1, 6), (2, -1, 3), (2, 1, 3)]);
        assert_eq!(list(-84).len(), 4);
        assert_eq!(list(-47).len(), 5);
    }

    #[test]
    fn reduced_forms_bounds() {
        for d in (-600i64..0).filter(|&d| crate::arith::is_fundamental(d).unwrap()) {
            let bound = ((-d) as f64 / 3.0).sqrt();
            for r in reduced_forms(&disc(d)) {
                assert!(r.is_reduced());
                assert_eq!(r.discriminant(), d);
                assert!(r.a() >= 1 && (r.a() as f64) <= bound);
            }
        }
    }

    #[test]
    fn representation_count_examples() {
        assert_eq!(representation_count(&form(1, 0, 1), 0), 1);
        assert_eq!(representation_count(&form(1, 0, 1), 1), 4);
        assert_eq!(representation_count(&form(1, 0, 1), 3), 0);
        assert_eq!(representation_count(&form(1, 0, 5), 5), 2);
        assert_eq!(representation_count(&form(1, 0, 1), 25), 12);
        assert_eq!(representation_count(&form(1, 1, 1), 1), 6);
    }

    #[test]
    fn representation_counts_agree_with_brute_force() {
        for q in [form(1, 0, 1), form(1, 1, 1), form(2, 2, 3), form(2, 1, 3), form(3, 2, 7), form(7, 3, 11)] {
            let table = representation_counts(&q, 60);
            for n in 0..=60u64 {
                let brute = brute_count(&q, n);
                assert_eq!(table[n as usize], brute, "{q} n={n}");
                assert_eq!(representation_count(&q, n), brute, "{q} n={n}");
            }
        }
    }

    #[test]
    fn automorph_counts() {
        assert_eq!(automorph_count(&disc(-4)), 4);
        assert_eq!(automorph_count(&disc(-3)), 6);
        assert_eq!(automorph_count(&disc(-20)), 2);
    }

    #[test]
    fn class_set_represents_one_w_times() {
        for d in (-300i64..0).filter(|&d| crate::arith::is_fundamental(d).unwrap()) {
            let delta = disc(d);
            let total: u64 = reduced_forms(&delta).iter().map(|r| representation_count(r, 1)).sum();
            assert_eq!(total, automorph_count(&delta) as u64, "Δ={d}");
        }
    }

    proptest::proptest! {
        #[test]
        fn reduction_is_an_sl2_equivalence(a in 1i64..60, b in -60i64..60, c in 1i64..60) {
            proptest::prop_assume!(b * b - 4 * a * c < 0);
            let Ok(q) = QuadForm::new(a, b, c) else { return Ok(()); };
            let (r, m) = q.reduce_with_transform();
            proptest::prop_assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
            proptest::prop_assert_eq!(q.transform(&m).unwrap(), *r.form());
            proptest::prop_assert!(r.is_reduced());
            proptest::prop_assert_eq!(r.discriminant(), q.discriminant());
            proptest::prop_assert_eq!(r.reduce(), r);
            for n in 0..=40u64 {
                proptest::prop_assert_eq!(representation_count(&q, n), representation_count(&r, n));
            }
        }

        #[test]
        fn values_are_positive_off_origin(x in -1000i64..1000, y in -1000i64..1000) {
            let q = form(7, 3, 11);
            let v = q.evaluate(x, y).unwrap();
            proptest::prop_assert_eq!(v == 0, x == 0 && y == 0);
            proptest::prop_assert!(v >= 0);
        }
    }
}
