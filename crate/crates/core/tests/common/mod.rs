//! Brute-force oracles written without the library's arithmetic.
#![allow(dead_code)]

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Kronecker symbol from Jacobi reciprocity, the 2-rule and the sign rule.
pub fn kron(a: i64, mut n: i64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    // Jacobi (a/n), n odd positive
    let mut a = a.rem_euclid(n);
    let mut n = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn fundamental(d: i64) -> bool {
    let sqfree = |m: i64| (2..).take_while(|p| p * p <= m.abs()).all(|p| m % (p * p) != 0);
    match d.rem_euclid(4) {
        1 => sqfree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && sqfree(m)
        }
        _ => false,
    }
}

pub fn fundamentals(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).rev().filter(|&d| d < 0 && fundamental(d)).collect()
}

pub fn units(d: i64) -> i64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Reduced primitive forms by direct search.
pub fn reduced(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a || (a == c && b < 0) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out.sort();
    out
}

/// `r(Q, n)` for `0 ≤ n ≤ max` by scanning a box that contains the ellipse.
pub fn rep_counts(q: (i64, i64, i64), max: usize) -> Vec<i64> {
    let (a, b, c) = q;
    let d = b * b - 4 * a * c;
    let m = max as i64;
    // |x| ≤ 2√(cm/|Δ|)·…, bounded crudely by √(4cm/|Δ|)+1
    let xb = ((4 * c * m) as f64 / (-d) as f64).sqrt() as i64 + 1;
    let yb = ((4 * a * m) as f64 / (-d) as f64).sqrt() as i64 + 1;
    let mut r = vec![0i64; max + 1];
    for x in -xb..=xb {
        for y in -yb..=yb {
            let v = a * x * x + b * x * y + c * y * y;
            if v <= m {
                r[v as usize] += 1;
            }
        }
    }
    r
}

/// Positive divisors `d > 1` with `d` and `Δ/d` both fundamental, plus `d = 1`.
pub fn pairs(delta: i64) -> Vec<(i64, i64)> {
    let n = -delta;
    let mut out: Vec<(i64, i64)> = (1..=n)
        .filter(|&d| n % d == 0)
        .filter(|&d| d == 1 || (fundamental(d) && fundamental(delta / d)))
        .map(|d| (d, delta / d))
        .collect();
    out.sort();
    out
}

/// `χ_{d,D}` on a form via its smallest value coprime to `d`.
pub fn character_on(q: (i64, i64, i64), d: i64) -> i64 {
    let (a, b, c) = q;
    let mut best: Option<i64> = None;
    for x in -30i64..=30 {
        for y in -30i64..=30 {
            let v = a * x * x + b * x * y + c * y * y;
            if v > 0 && gcd(v, d) == 1 && best.is_none_or(|bv| v < bv) {
                best = Some(v);
            }
        }
    }
    kron(d, best.expect("some coprime value in the box"))
}

/// `Σ_{t|n} (d/(n/t))(D/t)` for `n ≥ 1`.
pub fn sigma(d: i64, neg: i64, n: i64) -> i64 {
    (1..=n).filter(|t| n % t == 0).map(|t| kron(d, n / t) * kron(neg, t)).sum()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

/// Gaussian reduction of a positive definite form.
pub fn reduce(q: (i64, i64, i64)) -> (i64, i64, i64) {
    let (mut a, mut b, mut c) = q;
    loop {
        if b > a || b <= -a {
            // b ← b mod 2a into (-a, a]
            let k = (a - b).div_euclid(2 * a);
            let nb = b + 2 * k * a;
            c = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
            b = nb;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        if b > a || b <= -a {
            continue;
        }
        return (a, b, c);
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Dirichlet composition of two primitive forms of the same discriminant.
pub fn dirichlet_compose(f1: (i64, i64, i64), f2: (i64, i64, i64)) -> (i64, i64, i64) {
    let (a1, b1, c1) = f1;
    let (a2, b2, _) = f2;
    let delta = b1 * b1 - 4 * a1 * c1;
    let beta = (b1 + b2) / 2;
    let (g1, u1, v1) = ext_gcd(a1, a2);
    let (e, s, t) = ext_gcd(g1, beta);
    let (u, v, w) = (s * u1, s * v1, t);
    assert_eq!(u * a1 + v * a2 + w * beta, e);
    let big_a = a1 * a2 / (e * e);
    let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + delta) / 2;
    assert_eq!(num % e, 0);
    let big_b = (num / e).rem_euclid(2 * big_a);
    let c = (big_b * big_b - delta) / (4 * big_a);
    assert_eq!(big_b * big_b - 4 * big_a * c, delta);
    reduce((big_a, big_b, c))
}
