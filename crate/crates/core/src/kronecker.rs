//! The finite set of monic integer polynomials of fixed degree with all
//! roots on the unit circle, and the cyclotomic machinery behind it.
//!
//! By Kronecker's theorem such a polynomial is a product of cyclotomic
//! polynomials, so the set can be enumerated two independent ways: as
//! multiset products of cyclotomics with degrees summing to d, and by brute
//! force over the coefficient grid |a_j| <= binom(d, j) with an exact
//! divisibility test against (X^N - 1)^d. The two enumerations agreeing *is*
//! the finiteness statement, made executable.
//!
//! Membership is decided by exact division, never by numerical root-finding;
//! there is no floating point here.

use crate::error::{Error, Result};
use crate::exactnum::primes::factor_u64;
use crate::linalg::MonicIntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Degree bound of the shared cyclotomic table: covers every phi(m) <= 16.
pub const DEFAULT_DEGREE_BOUND: usize = 16;

/// Euler's totient; defined for m >= 1.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "euler_phi is defined for positive integers");
    if m == 1 {
        return 1;
    }
    factor_u64(m)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// The m-th cyclotomic polynomial, by exact recursive division:
/// Phi_m = (X^m - 1) / prod of Phi_e over proper divisors e of m.
pub fn cyclotomic(m: u64) -> MonicIntPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut cache = BTreeMap::new();
    cyclotomic_cached(m, &mut cache)
}

fn cyclotomic_cached(m: u64, cache: &mut BTreeMap<u64, MonicIntPoly>) -> MonicIntPoly {
    if let Some(hit) = cache.get(&m) {
        return hit.clone();
    }
    let phi = if m == 1 {
        MonicIntPoly::from_i64(&[-1]) // X - 1
    } else {
        let mut quotient = MonicIntPoly::x_pow_minus_one(m as usize);
        for e in 1..=m / 2 {
            if m.is_multiple_of(e) {
                let div = cyclotomic_cached(e, cache);
                quotient = quotient
                    .exact_div(&div)
                    .expect("cyclotomic factors divide X^m - 1 exactly");
            }
        }
        quotient
    };
    cache.insert(m, phi.clone());
    phi
}

/// Table of cyclotomic polynomials Phi_m for every m with phi(m) <= the
/// degree bound. Built once, read-only afterwards.
#[derive(Debug, Clone)]
pub struct CyclotomicTable {
    degree_bound: usize,
    entries: BTreeMap<u64, MonicIntPoly>,
}

impl CyclotomicTable {
    pub fn new(degree_bound: usize) -> Self {
        // phi(m) >= sqrt(m/2), so phi(m) <= B implies m <= 2(B+1)^2
        let scan_bound = 2 * (degree_bound as u64 + 1).pow(2);
        let mut cache = BTreeMap::new();
        let mut entries = BTreeMap::new();
        for m in 1..=scan_bound {
            if euler_phi(m) as usize <= degree_bound {
                entries.insert(m, cyclotomic_cached(m, &mut cache));
            }
        }
        CyclotomicTable {
            degree_bound,
            entries,
        }
    }

    pub fn with_default_bound() -> Self {
        CyclotomicTable::new(DEFAULT_DEGREE_BOUND)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn get(&self, m: u64) -> Option<&MonicIntPoly> {
        self.entries.get(&m)
    }

    /// Indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &MonicIntPoly)> {
        self.entries.iter().map(|(m, p)| (*m, p))
    }
}

/// One unit-circle polynomial with its cyclotomic factorization
/// (index, multiplicity), indices ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KroneckerPoly {
    pub coeffs: MonicIntPoly,
    pub cyclotomic_indices: Vec<(u64, u32)>,
}

/// All monic integer polynomials of one degree with every root on the unit
/// circle, sorted lexicographically by coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KroneckerSet {
    pub degree: usize,
    pub count: usize,
    pub polys: Vec<KroneckerPoly>,
}

impl KroneckerSet {
    fn from_polys(degree: usize, mut polys: Vec<KroneckerPoly>) -> Self {
        polys.sort_by(|a, b| a.coeffs.cmp_lex(&b.coeffs));
        polys.dedup();
        KroneckerSet {
            degree,
            count: polys.len(),
            polys,
        }
    }

    /// Same underlying polynomial set (factorizations are unique, so this is
    /// plain equality after sorting).
    pub fn same_set(&self, other: &KroneckerSet) -> bool {
        self.degree == other.degree
            && self.polys.len() == other.polys.len()
            && self
                .polys
                .iter()
                .zip(&other.polys)
                .all(|(a, b)| a.coeffs == b.coeffs)
    }
}

/// Enumerate by multiset products of cyclotomic polynomials with degrees
/// summing to d. This is the production path.
pub fn enumerate_by_products(d: usize) -> Result<KroneckerSet> {
    if !(1..=8).contains(&d) {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            min: 1,
            max: 8,
        });
    }
    let table = CyclotomicTable::new(d);
    let indices: Vec<u64> = table.indices().collect();
    let mut polys = Vec::new();
    let mut chosen: Vec<u64> = Vec::new();
    enumerate_products_rec(&table, &indices, 0, d, &mut chosen, &mut polys);
    Ok(KroneckerSet::from_polys(d, polys))
}

fn enumerate_products_rec(
    table: &CyclotomicTable,
    indices: &[u64],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<u64>,
    out: &mut Vec<KroneckerPoly>,
) {
    if remaining == 0 {
        let mut poly = MonicIntPoly::one();
        let mut mults: Vec<(u64, u32)> = Vec::new();
        for &m in chosen.iter() {
            poly = poly.mul(table.get(m).expect("index in table"));
            match mults.last_mut() {
                Some((lm, e)) if *lm == m => *e += 1,
                _ => mults.push((m, 1)),
            }
        }
        out.push(KroneckerPoly {
            coeffs: poly,
            cyclotomic_indices: mults,
        });
        return;
    }
    for (i, &m) in indices.iter().enumerate().skip(start) {
        let deg = euler_phi(m) as usize;
        if deg > remaining {
            continue;
        }
        chosen.push(m);
        enumerate_products_rec(table, indices, i, remaining - deg, chosen, out);
        chosen.pop();
    }
}

/// lcm of all m with phi(m) <= d: the single exponent N such that every
/// squarefree degree-<=d product of cyclotomics divides X^N - 1.
pub fn unit_root_exponent(d: usize) -> u64 {
    let scan_bound = 2 * (d as u64 + 1).pow(2);
    let mut acc = 1u64;
    for m in 1..=scan_bound {
        if euler_phi(m) as usize <= d {
            acc = acc.lcm(&m);
        }
    }
    acc
}

/// Enumerate by brute force over the coefficient grid |a_j| <= binom(d, j),
/// keeping a candidate q exactly when q divides (X^N - 1)^d for N the
/// exponent above (the d-th power handles repeated cyclotomic factors such
/// as (X-1)^2, which divide no squarefree X^N - 1). A 61-bit modular screen
/// rejects almost everything cheaply; survivors are confirmed over Z.
///
/// This is the independent verification oracle for `enumerate_by_products`;
/// the grid blows up combinatorially, hence the d <= 6 cap.
pub fn enumerate_by_bounds(d: usize) -> Result<KroneckerSet> {
    if !(1..=6).contains(&d) {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            min: 1,
            max: 6,
        });
    }
    let n_max = unit_root_exponent(d);
    let bounds: Vec<i64> = (0..d).map(|j| binomial(d, j) as i64).collect();
    let table = CyclotomicTable::new(d);
    let mut polys = Vec::new();
    let mut low = vec![0i64; d];
    let mut odometer = vec![0u64; d];
    let radix: Vec<u64> = bounds.iter().map(|&b| 2 * b as u64 + 1).collect();
    loop {
        for j in 0..d {
            low[j] = odometer[j] as i64 - bounds[j];
        }
        // a_0 = 0 means 0 is a root; (X^N - 1)^d has constant term (-1)^d,
        // so such candidates can never pass the divisibility test
        if low[0] != 0 && screen_kronecker_mod_l(&low, n_max) && confirm_kronecker_exact(&low, n_max)
        {
            let poly = MonicIntPoly::new(low.iter().map(|&c| BigInt::from(c)).collect());
            let cyclotomic_indices = cyclotomic_factorization(&poly, &table)
                .expect("confirmed candidates factor into cyclotomics");
            polys.push(KroneckerPoly {
                coeffs: poly,
                cyclotomic_indices,
            });
        }
        // advance
        let mut j = 0;
        loop {
            if j == d {
                return Ok(KroneckerSet::from_polys(d, polys));
            }
            odometer[j] += 1;
            if odometer[j] < radix[j] {
                break;
            }
            odometer[j] = 0;
            j += 1;
        }
    }
}

const SCREEN_MODULUS: u64 = (1 << 61) - 1; // prime, larger than any N used

fn lmul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % SCREEN_MODULUS as u128) as u64
}

fn ladd(a: u64, b: u64) -> u64 {
    ((a as u128 + b as u128) % SCREEN_MODULUS as u128) as u64
}

fn lreduce(c: i64) -> u64 {
    c.rem_euclid(SCREEN_MODULUS as i64) as u64
}

/// Multiply two residue vectors of length d and reduce modulo the monic
/// polynomial with low coefficients `q_low`, all over F_l.
fn lmulmod(a: &[u64], b: &[u64], q_low: &[u64]) -> Vec<u64> {
    let d = q_low.len();
    let mut prod = vec![0u64; 2 * d - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ladd(prod[i + j], lmul(ai, bj));
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = prod[k];
        if c != 0 {
            for j in 0..d {
                let sub = lmul(c, q_low[j]);
                prod[k - d + j] = ladd(prod[k - d + j], SCREEN_MODULUS - sub);
            }
        }
    }
    prod.truncate(d);
    prod
}

fn screen_kronecker_mod_l(low: &[i64], n_max: u64) -> bool {
    let d = low.len();
    let q_low: Vec<u64> = low.iter().map(|&c| lreduce(c)).collect();
    // s = X^{n_max} mod q
    let mut s = vec![0u64; d];
    s[0] = 1;
    let x = {
        let mut v = vec![0u64; d];
        if d == 1 {
            v[0] = lreduce(-low[0]);
        } else {
            v[1] = 1;
        }
        v
    };
    for i in (0..64 - n_max.leading_zeros()).rev() {
        s = lmulmod(&s, &s, &q_low);
        if (n_max >> i) & 1 == 1 {
            s = lmulmod(&s, &x, &q_low);
        }
    }
    // z = (s - 1)^d mod q
    s[0] = ladd(s[0], SCREEN_MODULUS - 1);
    let mut z = vec![0u64; d];
    z[0] = 1;
    for _ in 0..d {
        z = lmulmod(&z, &s, &q_low);
    }
    z.iter().all(|&c| c == 0)
}

fn zmulmod(a: &[BigInt], b: &[BigInt], q_low: &[BigInt]) -> Vec<BigInt> {
    let d = q_low.len();
    let mut prod = vec![BigInt::zero(); 2 * d - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            prod[i + j] += ai * bj;
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = prod[k].clone();
        if !c.is_zero() {
            for j in 0..d {
                let v = &c * &q_low[j];
                prod[k - d + j] -= v;
            }
        }
    }
    prod.truncate(d);
    prod
}

fn confirm_kronecker_exact(low: &[i64], n_max: u64) -> bool {
    let d = low.len();
    let q_low: Vec<BigInt> = low.iter().map(|&c| BigInt::from(c)).collect();
    let mut s = vec![BigInt::zero(); d];
    s[0] = BigInt::one();
    let x = {
        let mut v = vec![BigInt::zero(); d];
        if d == 1 {
            v[0] = BigInt::from(-low[0]);
        } else {
            v[1] = BigInt::one();
        }
        v
    };
    for i in (0..64 - n_max.leading_zeros()).rev() {
        s = zmulmod(&s, &s, &q_low);
        if (n_max >> i) & 1 == 1 {
            s = zmulmod(&s, &x, &q_low);
        }
    }
    s[0] -= 1;
    let mut z = vec![BigInt::zero(); d];
    z[0] = BigInt::one();
    for _ in 0..d {
        z = zmulmod(&z, &s, &q_low);
    }
    z.iter().all(Zero::is_zero)
}

/// Greedy exact division by table cyclotomics. Success means the polynomial
/// is a product of cyclotomics (all roots on the unit circle); the lcm of
/// the returned indices is then the order of any diagonalizable matrix with
/// this characteristic polynomial. Failure returns the non-cyclotomic
/// remainder as the witness.
pub fn cyclotomic_factorization(
    poly: &MonicIntPoly,
    table: &CyclotomicTable,
) -> Result<Vec<(u64, u32)>> {
    let mut remaining = poly.clone();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for (m, phi) in table.iter() {
        if phi.degree() > remaining.degree() {
            continue;
        }
        while let Some(q) = remaining.exact_div(phi) {
            match out.last_mut() {
                Some((lm, e)) if *lm == m => *e += 1,
                _ => out.push((m, 1)),
            }
            remaining = q;
            if remaining.degree() == 0 {
                return Ok(out);
            }
        }
    }
    if remaining.degree() == 0 {
        Ok(out)
    } else {
        Err(Error::NotUnitCircle(remaining.to_string()))
    }
}

/// `cyclotomic_factorization` against a table big enough for the input.
pub fn cyclotomic_factorization_auto(poly: &MonicIntPoly) -> Result<Vec<(u64, u32)>> {
    let bound = DEFAULT_DEGREE_BOUND.max(poly.degree());
    cyclotomic_factorization(poly, &CyclotomicTable::new(bound))
}
