//! Exact integer utilities: the Kronecker symbol, trial-division factorization,
//! divisor enumeration and the fundamental-discriminant predicate.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("expected a positive integer, got 0")]
    Zero,
    #[error("discriminant must be negative, got {0}")]
    NonNegative(i64),
    #[error("not a discriminant: {0} is not congruent to 0 or 1 mod 4")]
    NotADiscriminant(i64),
    #[error("not fundamental: {0}")]
    NotFundamental(String),
}

pub type Result<T> = std::result::Result<T, ArithError>;

/// Kronecker symbol `(m/n)`, extended to all `n` (zero, negative and even).
pub fn kronecker(m: i64, n: i64) -> i32 {
    let mut m = m as i128;
    let mut n = n as i128;
    if n == 0 {
        return if m == 1 || m == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if m < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if m % 2 == 0 {
            return 0;
        }
        n >>= twos;
        let r8 = m.rem_euclid(8);
        if twos % 2 == 1 && (r8 == 3 || r8 == 5) {
            result = -result;
        }
    }
    // n is odd and positive: Jacobi symbol of m mod n.
    m = m.rem_euclid(n);
    while m != 0 {
        let t = m.trailing_zeros();
        m >>= t;
        let r8 = n % 8;
        if t % 2 == 1 && (r8 == 3 || r8 == 5) {
            result = -result;
        }
        if m % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut m, &mut n);
        m %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Prime factorization by trial division, primes strictly increasing.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(ArithError::Zero);
    }
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n)? {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    matches!(factorize(n).as_deref(), Ok([(_, 1)]))
}

/// Primes `p <= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).map(|f| f.iter().all(|&(_, e)| e == 1)).unwrap_or(false)
}

/// Explains why `delta` fails to be a negative fundamental discriminant, or
/// returns `None` when it is one.
fn fundamental_defect(delta: i64) -> Option<ArithError> {
    if delta >= 0 {
        return Some(ArithError::NonNegative(delta));
    }
    match delta.rem_euclid(4) {
        1 => {
            let abs = delta.unsigned_abs();
            square_divisor(abs).map(|p| ArithError::NotFundamental(format!("{delta} is divisible by {p}^2")))
        }
        0 => {
            let m = delta / 4;
            match m.rem_euclid(4) {
                2 | 3 => square_divisor(m.unsigned_abs())
                    .map(|p| ArithError::NotFundamental(format!("{delta} = 4·({m}) and {m} is divisible by {p}^2"))),
                _ => Some(ArithError::NotFundamental(format!("{delta} = 4·({m})"))),
            }
        }
        _ => Some(ArithError::NotADiscriminant(delta)),
    }
}

fn square_divisor(n: u64) -> Option<u64> {
    factorize(n).ok()?.into_iter().find(|&(_, e)| e >= 2).map(|(p, _)| p)
}

/// Whether a negative `delta` is a fundamental discriminant. Rejects `delta >= 0`.
pub fn is_fundamental(delta: i64) -> Result<bool> {
    match fundamental_defect(delta) {
        None => Ok(true),
        Some(ArithError::NonNegative(d)) => Err(ArithError::NonNegative(d)),
        Some(_) => Ok(false),
    }
}

/// A negative fundamental discriminant together with the factorization of `|Δ|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Discriminant {
    value: i64,
    prime_support: Vec<(u64, u32)>,
}

impl Discriminant {
    /// Validates `value` as a negative fundamental discriminant.
    pub fn new(value: i64) -> Result<Self> {
        if let Some(err) = fundamental_defect(value) {
            return Err(err);
        }
        let prime_support = factorize(value.unsigned_abs())?;
        Ok(Self { value, prime_support })
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    pub fn prime_support(&self) -> &[(u64, u32)] {
        &self.prime_support
    }

    /// Number of distinct primes dividing Δ.
    pub fn prime_count(&self) -> usize {
        self.prime_support.len()
    }

    /// Number of units of the maximal order, equal to the automorph count of
    /// every form of this discriminant.
    pub fn unit_count(&self) -> u32 {
        match self.value {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// `(Δ/n)`.
    pub fn character(&self, n: i64) -> i32 {
        kronecker(self.value, n)
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Δ written as a product of prime discriminants: `-4`, `±8`, `p` for
/// `p ≡ 1 (mod 4)` and `-p` for `p ≡ 3 (mod 4)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDiscriminantFactorization {
    factors: Vec<i64>,
}

impl PrimeDiscriminantFactorization {
    /// Factors ordered by the prime they are supported on.
    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn product(&self) -> i64 {
        self.factors.iter().product()
    }
}

pub fn prime_discriminant_factorization(delta: &Discriminant) -> PrimeDiscriminantFactorization {
    let mut factors = Vec::with_capacity(delta.prime_count());
    let mut odd_part = 1i64;
    for &(p, _) in delta.prime_support() {
        if p == 2 {
            continue;
        }
        let p = p as i64;
        let factor = if p % 4 == 1 { p } else { -p };
        odd_part *= factor;
        factors.push(factor);
    }
    let even = delta.value() / odd_part;
    if even != 1 {
        debug_assert!(matches!(even, -4 | 8 | -8));
        factors.insert(0, even);
    }
    PrimeDiscriminantFactorization { factors }
}

/// Integer square root, `floor(sqrt(n))`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Solves `u*a + v*b = g` with `g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
