//! Dense exact linear algebra over any supported field.
//!
//! Square matrices are immutable, carry their field, and keep every entry
//! fully reduced, so structural equality and hashing are canonical-form
//! equality. The characteristic polynomial uses the Berkowitz algorithm,
//! which is division-free and therefore valid in every characteristic
//! (Faddeev–LeVerrier divides by integers up to d, which vanish when the
//! characteristic is at most d). The determinant uses fraction-free
//! (Bareiss) elimination; all its divisions are exact.

use crate::error::{Error, Result};
use crate::exactnum::{Field, Scalar};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Dense square matrix over one exact field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    field: Field,
    dim: usize,
    entries: Vec<Scalar>, // row-major
}

// Entry arithmetic inside one matrix cannot hit a field mismatch; these
// helpers keep the hot loops readable.
fn s_add(a: &Scalar, b: &Scalar) -> Scalar {
    a.add(b).expect("same field by matrix invariant")
}

fn s_sub(a: &Scalar, b: &Scalar) -> Scalar {
    a.sub(b).expect("same field by matrix invariant")
}

fn s_mul(a: &Scalar, b: &Scalar) -> Scalar {
    a.mul(b).expect("same field by matrix invariant")
}

fn s_div(a: &Scalar, b: &Scalar) -> Scalar {
    a.div(b).expect("exact division by nonzero pivot")
}

impl SquareMatrix {
    /// Build from row-major entries; validates the shared field and size.
    pub fn new(field: Field, dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch(0, 1));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(entries.len(), dim * dim));
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field.to_string(),
                    found: e.field().to_string(),
                });
            }
        }
        Ok(SquareMatrix {
            field,
            dim,
            entries,
        })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(row.len(), dim));
            }
        }
        SquareMatrix::new(field, dim, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_int_rows(field: Field, rows: &[&[i64]]) -> Result<Self> {
        let scalars = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&n| Scalar::from_integer(&field, n))
                    .collect()
            })
            .collect();
        SquareMatrix::from_rows(field, scalars)
    }

    pub fn identity(field: Field, dim: usize) -> Self {
        let mut entries = vec![Scalar::zero(&field); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Scalar::one(&field);
        }
        SquareMatrix {
            field,
            dim,
            entries,
        }
    }

    /// Companion matrix of a monic polynomial given by its low coefficients
    /// a_0..a_{d-1}: the characteristic polynomial of the result is
    /// X^d + a_{d-1}X^{d-1} + ... + a_0.
    pub fn companion(field: Field, low_coeffs: &[Scalar]) -> Result<Self> {
        let d = low_coeffs.len();
        if d == 0 {
            return Err(Error::DimensionMismatch(0, 1));
        }
        let mut entries = vec![Scalar::zero(&field); d * d];
        for (i, c) in low_coeffs.iter().enumerate() {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field.to_string(),
                    found: c.field().to_string(),
                });
            }
            entries[i * d + (d - 1)] = c.neg();
        }
        for i in 1..d {
            entries[i * d + (i - 1)] = Scalar::one(&field);
        }
        SquareMatrix::new(field, d, entries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == SquareMatrix::identity(self.field, self.dim)
    }

    fn compatible(&self, other: &SquareMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field.to_string(),
                found: other.field.to_string(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Exact matrix product.
    pub fn mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.compatible(other)?;
        let d = self.dim;
        let zero = Scalar::zero(&self.field);
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = zero.clone();
                for k in 0..d {
                    let a = self.entry(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = s_add(&acc, &s_mul(a, other.entry(k, j)));
                }
                entries.push(acc);
            }
        }
        SquareMatrix::new(self.field, d, entries)
    }

    pub fn sub(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| s_sub(a, b))
            .collect();
        SquareMatrix::new(self.field, self.dim, entries)
    }

    /// Scale every entry by one scalar.
    pub fn scale(&self, c: &Scalar) -> Result<SquareMatrix> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field.to_string(),
                found: c.field().to_string(),
            });
        }
        let entries = self.entries.iter().map(|a| s_mul(a, c)).collect();
        SquareMatrix::new(self.field, self.dim, entries)
    }

    /// A^e by square-and-multiply.
    pub fn pow(&self, exp: &BigUint) -> SquareMatrix {
        let mut acc = SquareMatrix::identity(self.field, self.dim);
        if exp.is_zero() {
            return acc;
        }
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).expect("same shape");
            if exp.bit(i) {
                acc = acc.mul(self).expect("same shape");
            }
        }
        acc
    }

    pub fn pow_u64(&self, exp: u64) -> SquareMatrix {
        self.pow(&BigUint::from(exp))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination; every
    /// division is by the previous pivot and exact.
    pub fn determinant(&self) -> Scalar {
        let d = self.dim;
        let one = Scalar::one(&self.field);
        if d == 1 {
            return self.entries[0].clone();
        }
        let mut m: Vec<Vec<Scalar>> = (0..d)
            .map(|i| self.entries[i * d..(i + 1) * d].to_vec())
            .collect();
        let mut negate = false;
        let mut prev = one;
        for k in 0..d - 1 {
            if m[k][k].is_zero() {
                match (k + 1..d).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return Scalar::zero(&self.field),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let num = s_sub(&s_mul(&m[i][j], &m[k][k]), &s_mul(&m[i][k], &m[k][j]));
                    m[i][j] = s_div(&num, &prev);
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[d - 1][d - 1].clone();
        if negate {
            det.neg()
        } else {
            det
        }
    }

    /// Exact inverse; errors on a singular matrix.
    pub fn inverse(&self) -> Result<SquareMatrix> {
        let d = self.dim;
        let mut left: Vec<Vec<Scalar>> = (0..d)
            .map(|i| self.entries[i * d..(i + 1) * d].to_vec())
            .collect();
        let mut right: Vec<Vec<Scalar>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            Scalar::one(&self.field)
                        } else {
                            Scalar::zero(&self.field)
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..d {
            let pivot_row = (col..d)
                .find(|&r| !left[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            left.swap(col, pivot_row);
            right.swap(col, pivot_row);
            let inv = left[col][col].inv()?;
            for j in 0..d {
                left[col][j] = s_mul(&left[col][j], &inv);
                right[col][j] = s_mul(&right[col][j], &inv);
            }
            for r in 0..d {
                if r == col || left[r][col].is_zero() {
                    continue;
                }
                let factor = left[r][col].clone();
                for j in 0..d {
                    left[r][j] = s_sub(&left[r][j], &s_mul(&factor, &left[col][j]));
                    right[r][j] = s_sub(&right[r][j], &s_mul(&factor, &right[col][j]));
                }
            }
        }
        SquareMatrix::from_rows(self.field, right)
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero(&self.field);
        for i in 0..self.dim {
            acc = s_add(&acc, self.entry(i, i));
        }
        acc
    }

    /// Characteristic polynomial det(X*I - A) as an ascending coefficient
    /// vector of length dim+1 with leading coefficient 1, computed by the
    /// Berkowitz algorithm (no divisions).
    pub fn char_poly(&self) -> Vec<Scalar> {
        let d = self.dim;
        let one = Scalar::one(&self.field);
        let zero = Scalar::zero(&self.field);
        // descending coefficients for the leading 1x1 block: X - a00
        let mut poly = vec![one.clone(), self.entry(0, 0).neg()];
        for r in 2..=d {
            let k = r - 1;
            // items = [1, -a_kk, -(R C), -(R M C), ..., -(R M^{r-2} C)]
            // with M the leading k x k block, R the first k entries of row k,
            // C the first k entries of column k
            let mut items = Vec::with_capacity(r + 1);
            items.push(one.clone());
            items.push(self.entry(k, k).neg());
            let mut w: Vec<Scalar> = (0..k).map(|i| self.entry(i, k).clone()).collect();
            for step in 0..k {
                let mut dot = zero.clone();
                for (j, wj) in w.iter().enumerate() {
                    if wj.is_zero() {
                        continue;
                    }
                    dot = s_add(&dot, &s_mul(self.entry(k, j), wj));
                }
                items.push(dot.neg());
                if step + 1 < k {
                    let mut next = Vec::with_capacity(k);
                    for i in 0..k {
                        let mut acc = zero.clone();
                        for (j, wj) in w.iter().enumerate() {
                            if wj.is_zero() {
                                continue;
                            }
                            acc = s_add(&acc, &s_mul(self.entry(i, j), wj));
                        }
                        next.push(acc);
                    }
                    w = next;
                }
            }
            // poly_new = T * poly, T the (r+1) x r Toeplitz matrix with
            // T[row][col] = items[row - col]
            let mut next = vec![zero.clone(); r + 1];
            for (row, slot) in next.iter_mut().enumerate() {
                let mut acc = zero.clone();
                for (col, pc) in poly.iter().enumerate() {
                    if row < col || row - col > r {
                        continue;
                    }
                    let it = &items[row - col];
                    if it.is_zero() || pc.is_zero() {
                        continue;
                    }
                    acc = s_add(&acc, &s_mul(it, pc));
                }
                *slot = acc;
            }
            poly = next;
        }
        poly.reverse();
        poly
    }

    /// Evaluate a polynomial (ascending coefficients over this matrix's
    /// field) at this matrix, by Horner's rule.
    pub fn eval_poly(&self, coeffs: &[Scalar]) -> Result<SquareMatrix> {
        let mut acc = SquareMatrix::new(
            self.field,
            self.dim,
            vec![Scalar::zero(&self.field); self.dim * self.dim],
        )?;
        for c in coeffs.iter().rev() {
            if c.field() != self.field {
                return Err(Error::FieldMismatch {
                    expected: self.field.to_string(),
                    found: c.field().to_string(),
                });
            }
            acc = acc.mul(self)?;
            for i in 0..self.dim {
                let e = acc.entries[i * self.dim + i].clone();
                acc.entries[i * self.dim + i] = s_add(&e, c);
            }
        }
        Ok(acc)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{} {}x{}]", self.field, self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| self.entry(i, j).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    field: Field,
    dim: usize,
    rows: Vec<Vec<String>>,
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entry(i, j).to_string())
                    .collect()
            })
            .collect();
        MatrixRepr {
            field: self.field,
            dim: self.dim,
            rows,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(deserializer)?;
        matrix_from_rows_text(repr.field, repr.dim, &repr.rows).map_err(D::Error::custom)
    }
}

/// Shared by the matrix and generator-file formats.
pub(crate) fn matrix_from_rows_text(
    field: Field,
    dim: usize,
    rows: &[Vec<String>],
) -> Result<SquareMatrix> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch(rows.len(), dim));
    }
    let mut scalars = Vec::with_capacity(dim * dim);
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch(row.len(), dim));
        }
        for s in row {
            scalars.push(Scalar::parse(s, &field)?);
        }
    }
    SquareMatrix::new(field, dim, scalars)
}

/// Monic polynomial with arbitrary-precision integer coefficients. Stores
/// the low coefficients a_0..a_{d-1}; the leading coefficient is an implicit
/// 1. Dense representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicIntPoly {
    low: Vec<BigInt>,
}

impl MonicIntPoly {
    pub fn new(low_coeffs: Vec<BigInt>) -> Self {
        MonicIntPoly { low: low_coeffs }
    }

    pub fn from_i64(low_coeffs: &[i64]) -> Self {
        MonicIntPoly {
            low: low_coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        MonicIntPoly { low: vec![] }
    }

    /// X^n - 1.
    pub fn x_pow_minus_one(n: usize) -> Self {
        assert!(n >= 1);
        let mut low = vec![BigInt::zero(); n];
        low[0] = BigInt::from(-1);
        MonicIntPoly { low }
    }

    pub fn degree(&self) -> usize {
        self.low.len()
    }

    /// a_0..a_{d-1} (leading 1 not included).
    pub fn low_coeffs(&self) -> &[BigInt] {
        &self.low
    }

    /// Full ascending coefficient vector, including the leading 1.
    pub fn full_coeffs(&self) -> Vec<BigInt> {
        let mut out = self.low.clone();
        out.push(BigInt::one());
        out
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        if k == self.degree() {
            BigInt::one()
        } else {
            self.low.get(k).cloned().unwrap_or_else(BigInt::zero)
        }
    }

    pub fn mul(&self, other: &MonicIntPoly) -> MonicIntPoly {
        let a = self.full_coeffs();
        let b = other.full_coeffs();
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                prod[i + j] += ai * bj;
            }
        }
        debug_assert!(prod.last().is_some_and(|c| c.is_one()));
        prod.pop();
        MonicIntPoly { low: prod }
    }

    /// Quotient and remainder on division by a monic divisor; both exact
    /// over Z. The remainder is a plain (not necessarily monic) polynomial,
    /// returned as trailing-zero-stripped ascending coefficients.
    pub fn divrem(&self, divisor: &MonicIntPoly) -> (MonicIntPoly, Vec<BigInt>) {
        let dd = divisor.degree();
        assert!(dd >= 1, "division by a constant");
        if self.degree() < dd {
            return (MonicIntPoly::one(), self.full_coeffs());
        }
        let mut rem = self.full_coeffs();
        let div = divisor.full_coeffs();
        let qd = self.degree() - dd;
        let mut quot = vec![BigInt::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, djc) in div.iter().enumerate() {
                let v = &c * djc;
                rem[k + j] -= v;
            }
            quot[k] = c;
        }
        debug_assert!(quot.last().is_some_and(|c| c.is_one()));
        quot.pop();
        let mut rem = rem[..dd].to_vec();
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
        (MonicIntPoly { low: quot }, rem)
    }

    /// Exact quotient, or None when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &MonicIntPoly) -> Option<MonicIntPoly> {
        if self.degree() < divisor.degree() {
            return None;
        }
        let (q, r) = self.divrem(divisor);
        if r.is_empty() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &MonicIntPoly) -> bool {
        other.exact_div(self).is_some()
    }

    /// Coefficients embedded into a field, for evaluation at matrices.
    pub fn to_scalars(&self, field: &Field) -> Vec<Scalar> {
        let embed = |c: &BigInt| match field {
            Field::Q => Scalar::Rational(num_rational::BigRational::from(c.clone())),
            _ => {
                let p = field.characteristic();
                let m = BigInt::from(p);
                let r = ((c % &m) + &m) % &m;
                Scalar::from_integer(field, r.to_i64().expect("residue fits"))
            }
        };
        let mut out: Vec<Scalar> = self.low.iter().map(embed).collect();
        out.push(Scalar::one(field));
        out
    }

    /// Ordering by (degree, coefficient vector lexicographically).
    pub fn cmp_lex(&self, other: &MonicIntPoly) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.low.cmp(&other.low))
    }
}

impl fmt::Display for MonicIntPoly {
    /// e.g. "X^3 - 2X + 5"; the degree-zero polynomial prints as "1".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        if d == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for k in (0..=d).rev() {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "X")?,
                1 => write!(f, "{mag}X")?,
                _ if mag.is_one() => write!(f, "X^{k}")?,
                _ => write!(f, "{mag}X^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for MonicIntPoly {
    type Err = Error;

    /// Parse the polynomial text form, e.g. "X^3 - 2X + 5" ("x" also
    /// accepted). The input must be monic.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(BigInt, usize)> = Vec::new();
        let bytes = compact.as_bytes();
        let mut pos = 0usize;
        let mut sign = BigInt::one();
        while pos < bytes.len() {
            match bytes[pos] {
                b'+' => {
                    pos += 1;
                    continue;
                }
                b'-' => {
                    sign = -sign;
                    pos += 1;
                    continue;
                }
                _ => {}
            }
            // coefficient digits, if any
            let digit_start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let coeff = if pos > digit_start {
                compact[digit_start..pos]
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {s:?}")))?
            } else {
                BigInt::one()
            };
            // optional variable with optional exponent
            let power = if pos < bytes.len() && (bytes[pos] == b'X' || bytes[pos] == b'x') {
                pos += 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let exp_start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    compact[exp_start..pos]
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?
                } else {
                    1
                }
            } else {
                if pos == digit_start {
                    return Err(Error::Parse(format!("unexpected input in {s:?}")));
                }
                0
            };
            terms.push((&sign * coeff, power));
            sign = BigInt::one();
        }
        let degree = terms.iter().map(|(_, k)| *k).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        for (c, k) in terms {
            coeffs[k] += c;
        }
        if !coeffs[degree].is_one() {
            return Err(Error::Parse(format!("polynomial {s:?} is not monic")));
        }
        coeffs.pop();
        Ok(MonicIntPoly::new(coeffs))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Big(String),
}

impl Serialize for MonicIntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<CoeffRepr> = self
            .full_coeffs()
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => CoeffRepr::Small(v),
                None => CoeffRepr::Big(c.to_string()),
            })
            .collect();
        coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MonicIntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        use std::str::FromStr;
        let raw = Vec::<CoeffRepr>::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(raw.len());
        for r in raw {
            coeffs.push(match r {
                CoeffRepr::Small(v) => BigInt::from(v),
                CoeffRepr::Big(s) => {
                    BigInt::from_str(&s).map_err(|e| D::Error::custom(e.to_string()))?
                }
            });
        }
        match coeffs.pop() {
            Some(lead) if lead.is_one() => Ok(MonicIntPoly { low: coeffs }),
            _ => Err(D::Error::custom("polynomial is not monic")),
        }
    }
}

/// Reinterpret a monic coefficient vector over Q as an integer polynomial.
/// The error identifies the first non-integral coefficient; that error is
/// itself the integrality-failure witness used by the certification
/// pipeline.
pub fn to_int_poly(coeffs: &[Scalar]) -> Result<MonicIntPoly> {
    let last = coeffs.last().ok_or(Error::DimensionMismatch(0, 1))?;
    if !last.is_one() {
        return Err(Error::Parse("coefficient vector is not monic".into()));
    }
    let mut low = Vec::with_capacity(coeffs.len() - 1);
    for (index, c) in coeffs[..coeffs.len() - 1].iter().enumerate() {
        match c.as_rational() {
            Some(r) if r.is_integer() => low.push(r.numer().clone()),
            _ => {
                return Err(Error::NonIntegralCoefficient {
                    index,
                    value: c.to_string(),
                })
            }
        }
    }
    Ok(MonicIntPoly::new(low))
}
