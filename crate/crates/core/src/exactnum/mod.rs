//! Exact scalar arithmetic for the three supported fields and their discrete
//! valuations: arbitrary-precision rationals Q, prime fields F_p, and
//! rational function fields F_p(t).
//!
//! All values are immutable and kept in canonical form (reduced fraction,
//! least residue, coprime monic-denominator quotient) after every operation,
//! so equality and hashing are structural. No floating point anywhere.

mod fppoly;
mod parse;
pub mod primes;
mod ratfunc;
mod valuation;

pub use fppoly::FpPoly;
pub use ratfunc::RationalFunction;
pub(crate) use valuation::rational_nu_p;
pub use valuation::{relevant_valuations, ExtInt, Valuation};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Descriptor of one of the supported exact fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// The rationals.
    Q,
    /// Prime field F_p, p a machine-word prime.
    Fp(u64),
    /// Rational functions F_p(t) in one variable.
    FpT(u64),
}

impl Field {
    /// Prime field, verifying primality of the modulus.
    pub fn prime(p: u64) -> Result<Field> {
        if primes::is_prime_u64(p) {
            Ok(Field::Fp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Rational function field over F_p, verifying primality.
    pub fn rational_function(p: u64) -> Result<Field> {
        if primes::is_prime_u64(p) {
            Ok(Field::FpT(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) | Field::FpT(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Fp(_))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F_{p}"),
            Field::FpT(p) => write!(f, "F_{p}(t)"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldRepr {
    Plain(String),
    Tagged(String, u64),
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Field::Q => FieldRepr::Plain("Q".into()),
            Field::Fp(p) => FieldRepr::Tagged("Fp".into(), *p),
            Field::FpT(p) => FieldRepr::Tagged("Fp(t)".into(), *p),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match FieldRepr::deserialize(deserializer)? {
            FieldRepr::Plain(s) if s == "Q" => Ok(Field::Q),
            FieldRepr::Plain(s) => Err(D::Error::custom(format!("unknown field {s:?}"))),
            FieldRepr::Tagged(tag, p) => {
                let field = match tag.as_str() {
                    "Fp" => Field::prime(p),
                    "Fp(t)" => Field::rational_function(p),
                    _ => return Err(D::Error::custom(format!("unknown field tag {tag:?}"))),
                };
                field.map_err(|e| D::Error::custom(e.to_string()))
            }
        }
    }
}

/// Element of a prime field: residue in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElem {
    p: u64,
    residue: u64,
}

impl PrimeFieldElem {
    pub fn new(p: u64, value: i64) -> Result<Self> {
        if !primes::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::reduce(p, value))
    }

    /// Least residue; assumes p already verified prime.
    pub(crate) fn reduce(p: u64, value: i64) -> Self {
        let m = p as i128;
        let residue = ((value as i128 % m) + m) % m;
        PrimeFieldElem {
            p,
            residue: residue as u64,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }
}

impl fmt::Display for PrimeFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.p)
    }
}

/// Element of one of the supported exact fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime(PrimeFieldElem),
    Function(RationalFunction),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Q,
            Scalar::Prime(e) => Field::Fp(e.p),
            Scalar::Function(r) => Field::FpT(r.modulus()),
        }
    }

    pub fn zero(field: &Field) -> Scalar {
        match field {
            Field::Q => Scalar::Rational(BigRational::zero()),
            Field::Fp(p) => Scalar::Prime(PrimeFieldElem { p: *p, residue: 0 }),
            Field::FpT(p) => Scalar::Function(RationalFunction::zero(*p)),
        }
    }

    pub fn one(field: &Field) -> Scalar {
        Scalar::from_integer(field, 1)
    }

    /// The image of a small integer in the field.
    pub fn from_integer(field: &Field, n: i64) -> Scalar {
        match field {
            Field::Q => Scalar::Rational(BigRational::from(BigInt::from(n))),
            Field::Fp(p) => Scalar::Prime(PrimeFieldElem::reduce(*p, n)),
            Field::FpT(p) => {
                let r = PrimeFieldElem::reduce(*p, n).residue;
                Scalar::Function(RationalFunction::from_poly(FpPoly::constant(*p, r)))
            }
        }
    }

    pub fn from_rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime(e) => e.is_zero(),
            Scalar::Function(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime(e) => e.residue == 1 % e.p,
            Scalar::Function(r) => r.is_one(),
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch {
            expected: self.field().to_string(),
            found: other.field().to_string(),
        }
    }

    pub fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(self.mismatch(other))
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.p == b.p => Ok(Scalar::Prime(
                PrimeFieldElem {
                    p: a.p,
                    residue: fppoly::fp_add(a.residue, b.residue, a.p),
                },
            )),
            (Scalar::Function(a), Scalar::Function(b)) if a.modulus() == b.modulus() => {
                Ok(Scalar::Function(a.add(b)))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime(a) => Scalar::Prime(PrimeFieldElem {
                p: a.p,
                residue: fppoly::fp_neg(a.residue, a.p),
            }),
            Scalar::Function(a) => Scalar::Function(a.neg()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.p == b.p => Ok(Scalar::Prime(
                PrimeFieldElem {
                    p: a.p,
                    residue: fppoly::fp_mul(a.residue, b.residue, a.p),
                },
            )),
            (Scalar::Function(a), Scalar::Function(b)) if a.modulus() == b.modulus() => {
                Ok(Scalar::Function(a.mul(b)))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime(a) => Scalar::Prime(PrimeFieldElem {
                p: a.p,
                residue: fppoly::fp_inv(a.residue, a.p),
            }),
            Scalar::Function(a) => Scalar::Function(a.inv()?),
        })
    }

    /// The underlying rational, for Q scalars.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_prime(&self) -> Option<&PrimeFieldElem> {
        match self {
            Scalar::Prime(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_function(&self) -> Option<&RationalFunction> {
        match self {
            Scalar::Function(r) => Some(r),
            _ => None,
        }
    }

    /// Integer-valued rational test (only meaningful over Q).
    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_integer(),
            _ => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else if r.denom().is_negative() {
                    // BigRational keeps the denominator positive, but guard anyway
                    write!(f, "{}/{}", -r.numer(), -r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime(e) => write!(f, "{e}"),
            Scalar::Function(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_add() {
        // 1/2 + 1/3 = 5/6
        let a = Scalar::from_rational(1, 2);
        let b = Scalar::from_rational(1, 3);
        assert_eq!(a.add(&b).unwrap(), Scalar::from_rational(5, 6));
    }

    #[test]
    fn function_sub_self() {
        // t/(t+1) - t/(t+1) = 0 over F_2(t)
        let x = Scalar::Function(
            RationalFunction::new(
                FpPoly::from_coeffs(2, vec![0, 1]),
                FpPoly::from_coeffs(2, vec![1, 1]),
            )
            .unwrap(),
        );
        assert!(x.sub(&x).unwrap().is_zero());
    }

    #[test]
    fn prime_division() {
        // 2 / 3 = 2 * 2 = 4 in F_5
        let two = Scalar::from_integer(&Field::Fp(5), 2);
        let three = Scalar::from_integer(&Field::Fp(5), 3);
        assert_eq!(
            two.div(&three).unwrap(),
            Scalar::from_integer(&Field::Fp(5), 4)
        );
    }

    #[test]
    fn mismatch_is_error() {
        let a = Scalar::from_integer(&Field::Q, 1);
        let b = Scalar::from_integer(&Field::Fp(5), 1);
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch { .. })));
        let c = Scalar::from_integer(&Field::Fp(7), 1);
        assert!(matches!(b.mul(&c), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn division_by_zero() {
        let a = Scalar::from_integer(&Field::Q, 1);
        let z = Scalar::zero(&Field::Q);
        assert_eq!(a.div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_idempotence() {
        // reducing an already-reduced scalar is the identity
        let a = Scalar::from_rational(10, 4);
        let same = a.add(&Scalar::zero(&Field::Q)).unwrap();
        assert_eq!(a, same);
        assert_eq!(a.to_string(), "5/2");
    }

    #[test]
    fn field_json_round_trip() {
        for field in [Field::Q, Field::Fp(5), Field::FpT(3)] {
            let json = serde_json::to_string(&field).unwrap();
            let back: Field = serde_json::from_str(&json).unwrap();
            assert_eq!(field, back);
        }
        assert_eq!(serde_json::to_string(&Field::Q).unwrap(), "\"Q\"");
        assert_eq!(serde_json::to_string(&Field::Fp(5)).unwrap(), "[\"Fp\",5]");
        assert!(serde_json::from_str::<Field>("[\"Fp\",6]").is_err());
    }

    #[test]
    fn prime_field_requires_prime() {
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(91).is_err());
        assert!(Field::prime(97).is_ok());
    }
}
