//! Dense univariate polynomials over a prime field F_p.
//!
//! Coefficients are stored in ascending degree order; the vector is empty for
//! the zero polynomial and never has a trailing zero. The modulus p travels
//! with the polynomial. Mixing moduli in one operation is a programming error
//! and panics.
//!
//! Besides ring arithmetic this module carries the finite-field toolbox the
//! rest of the crate leans on: gcd, modular powering, squarefree-aware full
//! factorization (distinct-degree plus Cantor–Zassenhaus splitting), and two
//! irreducibility tests.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

pub(crate) fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn fp_sub(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

pub(crate) fn fp_neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn fp_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_mul(acc, base, p);
        }
        base = fp_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue, via Fermat.
pub(crate) fn fp_inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    fp_pow(a, p - 2, p)
}

/// Dense polynomial over F_p, ascending coefficients, canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        let c = c % p;
        FpPoly {
            p,
            coeffs: if c == 0 { vec![] } else { vec![c] },
        }
    }

    /// The monomial t.
    pub fn t(p: u64) -> Self {
        FpPoly {
            p,
            coeffs: vec![0, 1],
        }
    }

    /// c * t^k.
    pub fn monomial(p: u64, c: u64, k: usize) -> Self {
        let c = c % p;
        if c == 0 {
            return FpPoly::zero(p);
        }
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        FpPoly { p, coeffs }
    }

    pub fn from_coeffs(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = FpPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.normalize();
        poly
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn check_same_field(&self, other: &FpPoly) {
        assert_eq!(self.p, other.p, "FpPoly moduli differ");
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        self.check_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| fp_add(self.coeff(i), other.coeff(i), self.p))
            .collect();
        let mut out = FpPoly { p: self.p, coeffs };
        out.normalize();
        out
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        self.check_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| fp_sub(self.coeff(i), other.coeff(i), self.p))
            .collect();
        let mut out = FpPoly { p: self.p, coeffs };
        out.normalize();
        out
    }

    pub fn neg(&self) -> FpPoly {
        FpPoly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| fp_neg(c, self.p)).collect(),
        }
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        self.check_same_field(other);
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = fp_add(coeffs[i + j], fp_mul(a, b, self.p), self.p);
            }
        }
        let mut out = FpPoly { p: self.p, coeffs };
        out.normalize();
        out
    }

    pub fn mul_scalar(&self, c: u64) -> FpPoly {
        let c = c % self.p;
        if c == 0 {
            return FpPoly::zero(self.p);
        }
        FpPoly {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|&a| fp_mul(a, c, self.p))
                .collect(),
        }
    }

    /// Quotient and remainder; panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        self.check_same_field(divisor);
        let d = divisor.degree().expect("division by zero polynomial");
        if self.degree().is_none_or(|n| n < d) {
            return (FpPoly::zero(self.p), self.clone());
        }
        let lead_inv = fp_inv(divisor.leading(), self.p);
        let mut rem = self.coeffs.clone();
        let n = rem.len() - 1;
        let mut quot = vec![0u64; n - d + 1];
        for k in (d..=n).rev() {
            let c = fp_mul(rem[k], lead_inv, self.p);
            if c == 0 {
                continue;
            }
            quot[k - d] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k - d + j] = fp_sub(rem[k - d + j], fp_mul(c, b, self.p), self.p);
            }
        }
        let mut q = FpPoly {
            p: self.p,
            coeffs: quot,
        };
        let mut r = FpPoly {
            p: self.p,
            coeffs: rem[..d].to_vec(),
        };
        q.normalize();
        r.normalize();
        (q, r)
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.divrem(divisor).1
    }

    /// Exact quotient, or None when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &FpPoly) -> Option<FpPoly> {
        let (q, r) = self.divrem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &FpPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        self.check_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> FpPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.mul_scalar(fp_inv(self.leading(), self.p))
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = fp_add(fp_mul(acc, x, self.p), c, self.p);
        }
        acc
    }

    /// self^exp mod m, square-and-multiply.
    pub fn pow_mod(&self, exp: &BigUint, m: &FpPoly) -> FpPoly {
        self.check_same_field(m);
        let mut acc = FpPoly::one(self.p).rem(m);
        if exp.is_zero() {
            return acc;
        }
        let base = self.rem(m);
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc).rem(m);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn derivative(&self) -> FpPoly {
        if self.coeffs.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| fp_mul((i as u64) % self.p, c, self.p))
            .collect();
        let mut out = FpPoly {
            p: self.p,
            coeffs,
        };
        out.normalize();
        out
    }

    /// p-th root of a polynomial with zero derivative: f(t) = g(t^p) maps to
    /// g (F_p is perfect and a^p = a, so coefficients carry over unchanged).
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        FpPoly {
            p: self.p,
            coeffs,
        }
    }

    /// Irreducibility by trial division over all monic polynomials of degree
    /// at most deg/2. Simple and exact; exponential in p^(deg/2), intended
    /// for the small moduli that valuations are built from.
    pub fn is_irreducible_trial_division(&self) -> bool {
        let deg = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        for div_deg in 1..=deg / 2 {
            // all monic polynomials of degree div_deg, counting order
            let count = (self.p as u128).pow(div_deg as u32);
            let mut idx = 0u128;
            while idx < count {
                let mut coeffs = Vec::with_capacity(div_deg + 1);
                let mut rest = idx;
                for _ in 0..div_deg {
                    coeffs.push((rest % self.p as u128) as u64);
                    rest /= self.p as u128;
                }
                coeffs.push(1);
                let candidate = FpPoly {
                    p: self.p,
                    coeffs,
                };
                if candidate.divides(self) {
                    return false;
                }
                idx += 1;
            }
        }
        true
    }

    /// Rabin's irreducibility test: deg-m f is irreducible iff
    /// t^(p^m) = t mod f and gcd(t^(p^(m/l)) - t, f) = 1 for primes l | m.
    pub fn is_irreducible(&self) -> bool {
        let m = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let f = self.monic();
        let t = FpPoly::t(self.p);
        let p_big = BigUint::from(self.p);
        for (l, _) in super::primes::factor_u64(m as u64) {
            let e = p_big.pow((m as u64 / l) as u32);
            let frob = t.pow_mod(&e, &f);
            let g = frob.sub(&t).gcd(&f);
            if !g.is_one() {
                return false;
            }
        }
        let frob = t.pow_mod(&p_big.pow(m as u32), &f);
        frob.sub(&t).is_zero() || frob == t
    }

    /// Full factorization into monic irreducibles with multiplicity.
    /// Input is scaled monic first; the unit is dropped.
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let mut out = Vec::new();
        factor_rec(&self.monic(), 1, &mut out);
        out.sort_by(|a, b| a.0.cmp_deg_lex(&b.0));
        out
    }

    /// Degree-then-coefficient ordering, used to keep factor lists and
    /// valuation lists deterministic.
    pub fn cmp_deg_lex(&self, other: &FpPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

fn factor_rec(f: &FpPoly, mult: usize, out: &mut Vec<(FpPoly, usize)>) {
    if f.degree().is_none_or(|d| d == 0) {
        return;
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        // f = g(t^p) = h^p with h sharing g's coefficients
        factor_rec(&f.pth_root(), mult * f.p as usize, out);
        return;
    }
    let repeated = f.gcd(&deriv);
    let squarefree = f
        .exact_div(&repeated)
        .expect("gcd divides");
    let mut rest = f.clone();
    for q in factor_squarefree(&squarefree) {
        let mut e = 0usize;
        while let Some(next) = rest.exact_div(&q) {
            rest = next;
            e += 1;
        }
        out.push((q, e * mult));
    }
    // whatever remains has all multiplicities divisible by p
    factor_rec(&rest, mult, out);
}

/// Distinct-degree factorization of a squarefree monic polynomial, followed
/// by equal-degree splitting. Returns the monic irreducible factors.
fn factor_squarefree(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.modulus();
    let mut out = Vec::new();
    let mut v = f.clone();
    let t = FpPoly::t(p);
    let mut frob = t.clone();
    let p_big = BigUint::from(p);
    let mut d = 0usize;
    while v.degree().is_some_and(|deg| deg >= 2 * (d + 1)) {
        d += 1;
        frob = frob.pow_mod(&p_big, &v);
        let g = frob.sub(&t).gcd(&v);
        if !g.is_one() {
            split_equal_degree(&g, d, &mut out);
            v = v.exact_div(&g).expect("gcd divides");
            frob = frob.rem(&v);
        }
    }
    if v.degree().is_some_and(|deg| deg > 0) {
        out.push(v);
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting: g is a squarefree product of
/// monic irreducibles all of degree d. Deterministically seeded so factor
/// lists are reproducible run to run.
fn split_equal_degree(g: &FpPoly, d: usize, out: &mut Vec<FpPoly>) {
    let mut hasher = DefaultHasher::new();
    g.hash(&mut hasher);
    let mut rng = ChaCha8Rng::seed_from_u64(hasher.finish());
    let mut stack = vec![g.clone()];
    while let Some(h) = stack.pop() {
        let deg = h.degree().unwrap_or(0);
        if deg == d {
            out.push(h.monic());
            continue;
        }
        if deg == 0 {
            continue;
        }
        let p = h.modulus();
        let factor = loop {
            let u = random_poly(&mut rng, p, deg);
            if u.is_constant() {
                continue;
            }
            let w = if p == 2 {
                // trace map over F_2: u + u^2 + ... + u^(2^(d-1))
                let mut acc = FpPoly::zero(2);
                let mut term = u.rem(&h);
                for _ in 0..d {
                    acc = acc.add(&term).rem(&h);
                    term = term.mul(&term).rem(&h);
                }
                acc
            } else {
                let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
                u.pow_mod(&e, &h).sub(&FpPoly::one(p))
            };
            let t = w.gcd(&h);
            if let Some(td) = t.degree() {
                if td > 0 && td < deg {
                    break t;
                }
            }
        };
        let other = h.exact_div(&factor).expect("gcd divides");
        stack.push(factor);
        stack.push(other);
    }
}

fn random_poly(rng: &mut ChaCha8Rng, p: u64, max_deg: usize) -> FpPoly {
    let len = rng.gen_range(1..=max_deg);
    let coeffs = (0..=len).map(|_| rng.gen_range(0..p)).collect();
    FpPoly::from_coeffs(p, coeffs)
}

impl fmt::Display for FpPoly {
    /// Sparse form "c*t^k + ...", highest degree first; unit coefficients on
    /// nonconstant terms are dropped.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}*t")?,
                (_, 1) => write!(f, "t^{k}")?,
                (_, _) => write!(f, "{c}*t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, coeffs: &[u64]) -> FpPoly {
        FpPoly::from_coeffs(p, coeffs.to_vec())
    }

    #[test]
    fn arithmetic_char_2() {
        let a = poly(2, &[1, 1]); // t + 1
        assert!(a.add(&a).is_zero());
        let sq = a.mul(&a);
        assert_eq!(sq, poly(2, &[1, 0, 1])); // t^2 + 1
    }

    #[test]
    fn divrem_round_trip() {
        let f = poly(5, &[2, 0, 1, 3]); // 3t^3 + t^2 + 2
        let g = poly(5, &[1, 2]); // 2t + 1
        let (q, r) = f.divrem(&g);
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree() < g.degree());
    }

    #[test]
    fn gcd_monic() {
        let f = poly(3, &[2, 1]).mul(&poly(3, &[1, 1])); // (t+2)(t+1)
        let g = poly(3, &[2, 1]).mul(&poly(3, &[0, 1])); // (t+2)t
        assert_eq!(f.gcd(&g), poly(3, &[2, 1]));
    }

    #[test]
    fn irreducibility_tests_agree() {
        // t^2 + t + 1 irreducible over F_2, t^2 + 1 = (t+1)^2 is not
        let irr = poly(2, &[1, 1, 1]);
        let red = poly(2, &[1, 0, 1]);
        assert!(irr.is_irreducible());
        assert!(irr.is_irreducible_trial_division());
        assert!(!red.is_irreducible());
        assert!(!red.is_irreducible_trial_division());
    }

    #[test]
    fn irreducibility_larger() {
        // t^4 + t + 1 irreducible over F_2; t^4 + t^2 + 1 = (t^2+t+1)^2 is not
        assert!(poly(2, &[1, 1, 0, 0, 1]).is_irreducible());
        assert!(!poly(2, &[1, 0, 1, 0, 1]).is_irreducible());
        for p in [2u64, 3, 5, 7] {
            for c in 0..p {
                let f = poly(p, &[c, 1]);
                assert!(f.is_irreducible(), "linear polys are irreducible");
            }
        }
    }

    #[test]
    fn factor_with_multiplicity() {
        // (t+1)^2 * (t^2+t+1) over F_2
        let f = poly(2, &[1, 1]).mul(&poly(2, &[1, 1])).mul(&poly(2, &[1, 1, 1]));
        let factors = f.factor();
        assert_eq!(
            factors,
            vec![(poly(2, &[1, 1]), 2), (poly(2, &[1, 1, 1]), 1)]
        );
    }

    #[test]
    fn factor_pth_power() {
        // (t+2)^3 over F_3 has zero derivative
        let lin = poly(3, &[2, 1]);
        let f = lin.mul(&lin).mul(&lin);
        assert!(f.derivative().is_zero());
        assert_eq!(f.factor(), vec![(lin, 3)]);
    }

    #[test]
    fn factor_random_round_trip() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for p in [2u64, 3, 5, 13] {
            for _ in 0..25 {
                let deg = rng.gen_range(1..=6);
                let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                coeffs.push(1);
                let f = FpPoly::from_coeffs(p, coeffs);
                let factors = f.factor();
                let mut acc = FpPoly::one(p);
                for (q, e) in &factors {
                    assert!(q.is_monic());
                    assert!(q.is_irreducible(), "non-irreducible factor {q} of {f}");
                    for _ in 0..*e {
                        acc = acc.mul(q);
                    }
                }
                assert_eq!(acc, f, "factor product mismatch for {f} mod {p}");
            }
        }
    }

    #[test]
    fn display_sparse_form() {
        assert_eq!(poly(5, &[3, 0, 1, 2]).to_string(), "2*t^3 + t^2 + 3");
        assert_eq!(poly(2, &[0, 1]).to_string(), "t");
        assert_eq!(FpPoly::zero(7).to_string(), "0");
    }
}
