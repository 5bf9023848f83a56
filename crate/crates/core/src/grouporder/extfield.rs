//! Explicit finite extension fields F_{p^m} = F_p[x]/(f), built to hold the
//! eigenvalues of matrices over F_p.
//!
//! The modulus is the first monic irreducible of degree m in counting order
//! (constant digits first), so the field, and everything derived from it,
//! is reproducible run to run. Elements are polynomials of degree < m over
//! F_p; the residue class of x generates the extension.

use crate::exactnum::FpPoly;
use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

/// The field F_{p^m}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    degree: usize,
    modulus: FpPoly,
}

/// An element of an `ExtField`: a residue polynomial of degree < m.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    poly: FpPoly,
}

impl ExtField {
    /// Build F_{p^m} with the first irreducible modulus in counting order.
    pub fn new(p: u64, degree: usize) -> Self {
        assert!(degree >= 1);
        let mut idx = 0u128;
        loop {
            let mut coeffs = Vec::with_capacity(degree + 1);
            let mut rest = idx;
            for _ in 0..degree {
                coeffs.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            assert!(rest == 0, "no irreducible of degree {degree} found");
            coeffs.push(1);
            let candidate = FpPoly::from_coeffs(p, coeffs);
            if candidate.is_irreducible() {
                return ExtField {
                    p,
                    degree,
                    modulus: candidate,
                };
            }
            idx += 1;
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Extension degree m.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    /// p^m.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree as u32)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem {
            poly: FpPoly::zero(self.p),
        }
    }

    pub fn one(&self) -> ExtElem {
        ExtElem {
            poly: FpPoly::one(self.p),
        }
    }

    /// Image of a prime-field constant.
    pub fn embed(&self, c: u64) -> ExtElem {
        ExtElem {
            poly: FpPoly::constant(self.p, c),
        }
    }

    pub fn from_poly(&self, poly: FpPoly) -> ExtElem {
        ExtElem {
            poly: poly.rem(&self.modulus),
        }
    }

    /// The residue class of x (a generator of the extension over F_p).
    pub fn generator(&self) -> ExtElem {
        self.from_poly(FpPoly::t(self.p))
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            poly: a.poly.add(&b.poly),
        }
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            poly: a.poly.sub(&b.poly),
        }
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem {
            poly: a.poly.neg(),
        }
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            poly: a.poly.mul(&b.poly).rem(&self.modulus),
        }
    }

    /// Inverse of a nonzero element, via x^(q-2).
    pub fn inv(&self, a: &ExtElem) -> ExtElem {
        assert!(!a.is_zero(), "inverse of zero");
        let e = self.size() - BigUint::from(2u32);
        self.pow(a, &e)
    }

    pub fn pow(&self, a: &ExtElem, exp: &BigUint) -> ExtElem {
        ExtElem {
            poly: a.poly.pow_mod(exp, &self.modulus),
        }
    }

    /// Find the roots in this field of a monic polynomial irreducible over
    /// F_p whose degree divides m. Such a polynomial splits into distinct
    /// linear factors here; the splitting is by randomized gcds with a seed
    /// derived from the input, so the returned order is reproducible. Roots
    /// come back sorted by residue polynomial.
    pub fn roots_of_irreducible(&self, g: &FpPoly) -> Vec<ExtElem> {
        let k = g.degree().expect("nonconstant irreducible");
        assert_eq!(self.degree % k, 0, "factor degree must divide m");
        if k == 1 {
            // monic linear: root is the negated constant term
            let c = g.coeff(0);
            return vec![self.embed(if c == 0 { 0 } else { self.p - c })];
        }
        let lifted: Vec<ExtElem> = g.coeffs().iter().map(|&c| self.embed(c)).collect();
        let mut hasher = DefaultHasher::new();
        (self.p, self.degree, g.coeffs()).hash(&mut hasher);
        let mut rng = ChaCha8Rng::seed_from_u64(hasher.finish());
        let mut roots = Vec::with_capacity(k);
        let mut stack = vec![lifted];
        while let Some(h) = stack.pop() {
            if h.len() == 2 {
                // monic linear over the extension
                let lead_inv = self.inv(&h[1]);
                roots.push(self.neg(&self.mul(&h[0], &lead_inv)));
                continue;
            }
            let (a, b) = self.split_linear_product(&h, &mut rng);
            stack.push(a);
            stack.push(b);
        }
        roots.sort_by(|a, b| a.poly.cmp_deg_lex(&b.poly));
        roots
    }

    /// Split a squarefree product (>= 2 factors) of monic linear polynomials
    /// over this field into two proper parts.
    fn split_linear_product(
        &self,
        h: &[ExtElem],
        rng: &mut ChaCha8Rng,
    ) -> (Vec<ExtElem>, Vec<ExtElem>) {
        let h = ep_monic(self, h.to_vec());
        loop {
            let c = self.random_elem(rng);
            if c.is_zero() {
                continue;
            }
            let w = if self.p == 2 {
                // trace map over F_2: sum of (c x)^(2^i), i < m
                let cx = vec![self.zero(), c];
                let mut term = ep_rem(self, cx, &h);
                let mut acc = term.clone();
                for _ in 1..self.degree {
                    term = ep_rem(self, ep_mul(self, &term, &term), &h);
                    acc = ep_sub(self, &acc, &ep_neg(self, &term));
                }
                acc
            } else {
                // (x + c)^((q-1)/2) - 1
                let e = (self.size() - BigUint::one()) / BigUint::from(2u32);
                let base = vec![c, self.one()];
                let pw = ep_powmod(self, base, &e, &h);
                ep_sub(self, &pw, &[self.one()])
            };
            let g = ep_gcd(self, w, h.clone());
            let gd = g.len().saturating_sub(1);
            if gd == 0 || gd + 1 == h.len() {
                continue;
            }
            let (quot, rem) = ep_divrem(self, h.clone(), &g);
            debug_assert!(rem.is_empty());
            return (g, quot);
        }
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> ExtElem {
        let coeffs: Vec<u64> = (0..self.degree).map(|_| rng.gen_range(0..self.p)).collect();
        ExtElem {
            poly: FpPoly::from_coeffs(self.p, coeffs),
        }
    }
}

impl ExtElem {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.poly.is_one()
    }

    /// Residue polynomial representing this element.
    pub fn residue(&self) -> &FpPoly {
        &self.poly
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

// Polynomials over an ExtField, as coefficient vectors with no trailing
// zeros. Only what root-finding needs.

fn ep_norm(field: &ExtField, mut v: Vec<ExtElem>) -> Vec<ExtElem> {
    let _ = field;
    while v.last().is_some_and(ExtElem::is_zero) {
        v.pop();
    }
    v
}

fn ep_sub(field: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Vec<ExtElem> {
    let n = a.len().max(b.len());
    let zero = field.zero();
    let v = (0..n)
        .map(|i| {
            field.sub(
                a.get(i).unwrap_or(&zero),
                b.get(i).unwrap_or(&zero),
            )
        })
        .collect();
    ep_norm(field, v)
}

fn ep_neg(field: &ExtField, a: &[ExtElem]) -> Vec<ExtElem> {
    a.iter().map(|c| field.neg(c)).collect()
}

fn ep_mul(field: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Vec<ExtElem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(ai, bj));
        }
    }
    ep_norm(field, out)
}

fn ep_divrem(
    field: &ExtField,
    mut rem: Vec<ExtElem>,
    divisor: &[ExtElem],
) -> (Vec<ExtElem>, Vec<ExtElem>) {
    let dd = divisor.len() - 1;
    if rem.len() <= dd {
        return (vec![], ep_norm(field, rem));
    }
    let lead_inv = field.inv(divisor.last().expect("nonzero divisor"));
    let mut quot = vec![field.zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = field.mul(&rem[k], &lead_inv);
        if c.is_zero() {
            continue;
        }
        quot[k - dd] = c.clone();
        for (j, dj) in divisor.iter().enumerate() {
            let sub = field.mul(&c, dj);
            rem[k - dd + j] = field.sub(&rem[k - dd + j], &sub);
        }
    }
    rem.truncate(dd);
    (ep_norm(field, quot), ep_norm(field, rem))
}

fn ep_rem(field: &ExtField, a: Vec<ExtElem>, m: &[ExtElem]) -> Vec<ExtElem> {
    ep_divrem(field, a, m).1
}

fn ep_monic(field: &ExtField, v: Vec<ExtElem>) -> Vec<ExtElem> {
    let v = ep_norm(field, v);
    match v.last() {
        Some(lead) if !lead.is_one() => {
            let inv = field.inv(lead);
            v.iter().map(|c| field.mul(c, &inv)).collect()
        }
        _ => v,
    }
}

fn ep_gcd(field: &ExtField, a: Vec<ExtElem>, b: Vec<ExtElem>) -> Vec<ExtElem> {
    let mut a = ep_norm(field, a);
    let mut b = ep_norm(field, b);
    while !b.is_empty() {
        let r = ep_rem(field, a, &b);
        a = b;
        b = r;
    }
    ep_monic(field, a)
}

fn ep_powmod(field: &ExtField, base: Vec<ExtElem>, exp: &BigUint, m: &[ExtElem]) -> Vec<ExtElem> {
    let mut acc = vec![field.one()];
    let base = ep_rem(field, base, m);
    for i in (0..exp.bits()).rev() {
        acc = ep_rem(field, ep_mul(field, &acc, &acc), m);
        if exp.bit(i) {
            acc = ep_rem(field, ep_mul(field, &acc, &base), m);
        }
    }
    acc
}
