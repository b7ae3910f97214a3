//! Ideals of the maximal order `O = ℤ + ℤω`, `ω = (Δ + √Δ)/2`, and the
//! correspondence between ideals and binary quadratic forms.
//!
//! Elements are kept as integer coordinates over `{1, ω}`. Using
//! `ω² = Δω - (Δ² - Δ)/4` all arithmetic stays in `ℤ`.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::arith::{ext_gcd, isqrt, Discriminant};
use crate::forms::{QuadForm, ReducedForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("basis is rank deficient")]
    RankDeficient,
    #[error("lattice is not closed under multiplication by ω")]
    NotAnIdeal,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("norm form is not integral: {0}")]
    NonIntegralForm(String),
}

/// `x + y·ω` in the maximal order of discriminant `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub x: i128,
    pub y: i128,
}

/// Arithmetic context: the discriminant and the norm of ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Order {
    delta: i128,
    omega_norm: i128,
}

impl Order {
    pub fn new(delta: &Discriminant) -> Self {
        let d = delta.value() as i128;
        Self { delta: d, omega_norm: (d * d - d) / 4 }
    }

    pub fn delta(&self) -> i64 {
        self.delta as i64
    }

    pub fn one(&self) -> QuadInt {
        QuadInt { x: 1, y: 0 }
    }

    pub fn omega(&self) -> QuadInt {
        QuadInt { x: 0, y: 1 }
    }

    pub fn int(&self, n: i128) -> QuadInt {
        QuadInt { x: n, y: 0 }
    }

    /// `(k + √Δ)/2` for `k ≡ Δ (mod 2)`.
    pub fn half_sqrt_plus(&self, k: i128) -> QuadInt {
        debug_assert_eq!((k - self.delta).rem_euclid(2), 0);
        // √Δ = 2ω - Δ
        QuadInt { x: (k - self.delta) / 2, y: 1 }
    }

    pub fn mul(&self, u: QuadInt, v: QuadInt) -> QuadInt {
        QuadInt { x: u.x * v.x - self.omega_norm * u.y * v.y, y: u.x * v.y + u.y * v.x + self.delta * u.y * v.y }
    }

    pub fn add(&self, u: QuadInt, v: QuadInt) -> QuadInt {
        QuadInt { x: u.x + v.x, y: u.y + v.y }
    }

    pub fn scale(&self, k: i128, u: QuadInt) -> QuadInt {
        QuadInt { x: k * u.x, y: k * u.y }
    }

    pub fn norm(&self, u: QuadInt) -> i128 {
        u.x * u.x + self.delta * u.x * u.y + self.omega_norm * u.y * u.y
    }

    /// `Tr(u·v̄)`.
    pub fn trace_pairing(&self, u: QuadInt, v: QuadInt) -> i128 {
        self.norm(self.add(u, v)) - self.norm(u) - self.norm(v)
    }

    /// All `u ∈ O` with `0 < N(u) ≤ bound`.
    pub fn elements_up_to_norm(&self, bound: u64) -> Vec<QuadInt> {
        // N(x + yω) = (x + Δy/2)² + |Δ|y²/4
        let bound = bound as i128;
        let abs = -self.delta;
        let y_max = isqrt((4 * bound / abs) as u128) as i128;
        let mut out = Vec::new();
        for y in -y_max..=y_max {
            let center = -self.delta * y;
            let spread = isqrt((4 * bound) as u128) as i128 + 1;
            // 2x ranges over center ± spread
            let lo = Integer::div_floor(&(center - spread), &2);
            let hi = Integer::div_ceil(&(center + spread), &2);
            for x in lo..=hi {
                let u = QuadInt { x, y };
                let n = self.norm(u);
                if n > 0 && n <= bound {
                    out.push(u);
                }
            }
        }
        out
    }
}

/// A `ℤ`-basis `⟨α, β⟩` of an ideal, with its norm `[O : I]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealBasis {
    alpha: QuadInt,
    beta: QuadInt,
    norm: u64,
}

fn det(u: QuadInt, v: QuadInt) -> i128 {
    u.x * v.y - u.y * v.x
}

impl IdealBasis {
    /// Validates that `⟨α, β⟩` is a full-rank lattice closed under `ω`.
    pub fn new(order: &Order, alpha: QuadInt, beta: QuadInt) -> Result<Self, IdealError> {
        let d = det(alpha, beta);
        if d == 0 {
            return Err(IdealError::RankDeficient);
        }
        let candidate = Self { alpha, beta, norm: d.unsigned_abs() as u64 };
        let w = order.omega();
        if !candidate.contains(order.mul(w, alpha)) || !candidate.contains(order.mul(w, beta)) {
            return Err(IdealError::NotAnIdeal);
        }
        Ok(candidate)
    }

    pub fn alpha(&self) -> QuadInt {
        self.alpha
    }

    pub fn beta(&self) -> QuadInt {
        self.beta
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    /// Whether `u ∈ ℤα + ℤβ`.
    pub fn contains(&self, u: QuadInt) -> bool {
        let d = det(self.alpha, self.beta);
        // u = sα + tβ by Cramer's rule
        let s = det(u, self.beta);
        let t = det(self.alpha, u);
        s % d == 0 && t % d == 0
    }

    /// Ideal generated as a module by the four pairwise products.
    pub fn multiply(&self, order: &Order, other: &IdealBasis) -> Result<IdealBasis, IdealError> {
        let gens = [
            order.mul(self.alpha, other.alpha),
            order.mul(self.alpha, other.beta),
            order.mul(self.beta, other.alpha),
            order.mul(self.beta, other.beta),
        ];
        let (alpha, beta) = hermite_basis(&gens)?;
        IdealBasis::new(order, alpha, beta)
    }

    /// `k·I`.
    pub fn scale(&self, order: &Order, k: i128) -> Result<IdealBasis, IdealError> {
        IdealBasis::new(order, order.scale(k, self.alpha), order.scale(k, self.beta))
    }

    /// Same lattice, basis swapped in sign so that `Im(β/α) > 0`.
    pub fn oriented(&self) -> IdealBasis {
        if det(self.alpha, self.beta) > 0 {
            *self
        } else {
            IdealBasis { alpha: self.alpha, beta: QuadInt { x: -self.beta.x, y: -self.beta.y }, norm: self.norm }
        }
    }

    /// The norm form `N(xα - yβ)/N(I)` on the oriented basis.
    pub fn norm_form(&self, order: &Order) -> Result<QuadForm, IdealError> {
        let b = self.oriented();
        let n = self.norm as i128;
        let coeffs = [order.norm(b.alpha), -order.trace_pairing(b.alpha, b.beta), order.norm(b.beta)];
        if coeffs.iter().any(|c| c % n != 0) {
            return Err(IdealError::NonIntegralForm(format!("{coeffs:?} / {n}")));
        }
        let fit = |v: i128| i64::try_from(v / n).map_err(|_| IdealError::Overflow("norm form"));
        QuadForm::new(fit(coeffs[0])?, fit(coeffs[1])?, fit(coeffs[2])?)
            .map_err(|e| IdealError::NonIntegralForm(e.to_string()))
    }
}

impl fmt::Display for IdealBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}+{}ω, {}+{}ω> (norm {})", self.alpha.x, self.alpha.y, self.beta.x, self.beta.y, self.norm)
    }
}

/// Row-reduces generators `(x, y)` to the Hermite basis `{(A, 0), (B, C)}`
/// with `A, C > 0` and `0 ≤ B < A`.
fn hermite_basis(gens: &[QuadInt]) -> Result<(QuadInt, QuadInt), IdealError> {
    // Combine all rows into one with y = gcd of the y-column, collecting the
    // resulting x-only rows along the way.
    let mut pivot = QuadInt { x: 0, y: 0 };
    let mut x_only: i128 = 0;
    for &g in gens {
        if g.y == 0 {
            x_only = x_only.gcd(&g.x);
            continue;
        }
        if pivot.y == 0 {
            pivot = g;
            continue;
        }
        let (d, u, v) = ext_gcd(pivot.y, g.y);
        let new_pivot = QuadInt { x: u * pivot.x + v * g.x, y: d };
        // The complementary combination kills y.
        let kx = (g.y / d) * pivot.x - (pivot.y / d) * g.x;
        x_only = x_only.gcd(&kx);
        pivot = new_pivot;
    }
    if pivot.y == 0 || x_only == 0 {
        return Err(IdealError::RankDeficient);
    }
    if pivot.y < 0 {
        pivot = QuadInt { x: -pivot.x, y: -pivot.y };
    }
    let a = x_only.abs();
    pivot.x = pivot.x.rem_euclid(a);
    Ok((QuadInt { x: a, y: 0 }, pivot))
}

/// `I = ⟨a, (-b + √Δ)/2⟩` for the form `[a, b, c]`.
pub fn form_to_ideal(order: &Order, q: &QuadForm) -> IdealBasis {
    let alpha = order.int(q.a() as i128);
    let beta = order.half_sqrt_plus(-(q.b() as i128));
    IdealBasis::new(order, alpha, beta).expect("[a, (-b+√Δ)/2] is an ideal for a form of discriminant Δ")
}

/// Reduced representative of the class of `N(xα - yβ)/N(I)`.
pub fn ideal_to_form(order: &Order, ideal: &IdealBasis) -> Result<ReducedForm, IdealError> {
    let q = ideal.norm_form(order)?;
    debug_assert_eq!(q.discriminant() as i128, order.delta);
    Ok(q.reduce())
}
