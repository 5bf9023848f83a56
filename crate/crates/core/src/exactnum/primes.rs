//! Primality testing and integer factorization.
//!
//! Deterministic Miller–Rabin for machine words, Brent's variant of Pollard
//! rho for factoring. Big inputs fall back to `BigUint` arithmetic; factoring
//! stays practical for the desk-scale numbers this crate produces
//! (denominators, p^m - 1).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for u64 (the 12-base certificate covers all
/// 64-bit integers).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn isqrt_u64(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s.saturating_mul(s) > n {
        s -= 1;
    }
    while (s + 1).saturating_mul(s + 1) <= n {
        s += 1;
    }
    s
}

/// Brent's variant with backtracking. Returns a nontrivial factor, or n on
/// failure for this c (caller retries with another increment).
fn pollard_rho_u64(n: u64, c: u64) -> u64 {
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let lim = 128.min(r - k);
            for _ in 0..lim {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += lim;
        }
        r *= 2;
        if r > 1 << 26 {
            return n;
        }
    }
    if g == n {
        // batched gcd overshot: replay one step at a time
        loop {
            ys = f(ys);
            let diff = x.abs_diff(ys);
            if diff == 0 {
                return n;
            }
            g = diff.gcd(&n);
            if g > 1 {
                return g;
            }
        }
    }
    g
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let s = isqrt_u64(n);
    if s * s == n {
        factor_u64_into(s, out);
        factor_u64_into(s, out);
        return;
    }
    for c in 1..=40u64 {
        let d = pollard_rho_u64(n, c);
        if d > 1 && d < n {
            factor_u64_into(d, out);
            factor_u64_into(n / d, out);
            return;
        }
    }
    // stubborn composite: exact trial division
    let mut m = n;
    let mut p = 3u64;
    while p <= m / p {
        if m.is_multiple_of(p) {
            out.push(p);
            m /= p;
            if is_prime_u64(m) {
                break;
            }
        } else {
            p += 2;
        }
    }
    if m > 1 {
        out.push(m);
    }
}

/// Prime factorization of a u64, as sorted (prime, exponent) pairs.
/// Panics on zero, which has no factorization.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut primes = Vec::new();
    for &p in &[2u64, 3, 5, 7, 11, 13] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    if n > 1 {
        factor_u64_into(n, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Miller–Rabin on BigUint. Deterministic below 2^64, otherwise strong
/// probable-prime to the fixed 12-base set.
pub fn is_prime_biguint(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant with backtracking, returning n on failure for this c.
fn pollard_rho_biguint(n: &BigUint, c: u64) -> BigUint {
    let c = BigUint::from(c) % n;
    let f = |x: &BigUint| (x * x + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = one.clone();
    let mut g = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = 128.min(r - k);
            for _ in 0..lim {
                y = f(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += lim;
        }
        r *= 2;
        if r > 1 << 24 {
            return n.clone();
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = abs_diff(&x, &ys);
            if diff.is_zero() {
                return n.clone();
            }
            g = diff.gcd(n);
            if !g.is_one() {
                return g;
            }
        }
    }
    g
}

fn factor_biguint_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        let mut primes = Vec::new();
        factor_u64_into(small, &mut primes);
        out.extend(primes.into_iter().map(BigUint::from));
        return;
    }
    if is_prime_biguint(&n) {
        out.push(n);
        return;
    }
    let s = n.sqrt();
    if &s * &s == n {
        factor_biguint_into(s.clone(), out);
        factor_biguint_into(s, out);
        return;
    }
    for c in 1..=60u64 {
        let d = pollard_rho_biguint(&n, c);
        if !d.is_one() && d < n {
            factor_biguint_into(d.clone(), out);
            factor_biguint_into(&n / &d, out);
            return;
        }
    }
    panic!("failed to factor {n} (beyond desk scale)");
}

/// Prime factorization of a BigUint, as sorted (prime, exponent) pairs.
/// Panics on zero, which has no factorization.
pub fn factor_biguint(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut m = n.clone();
    let mut primes = Vec::new();
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        let bp = BigUint::from(p);
        while (&m % &bp).is_zero() && !m.is_zero() {
            primes.push(bp.clone());
            m /= &bp;
        }
    }
    if !m.is_one() && !m.is_zero() {
        factor_biguint_into(m, &mut primes);
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}
