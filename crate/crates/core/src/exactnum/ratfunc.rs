//! Rational functions over a prime field: the carrier of F_p(t).
//!
//! Canonical form: numerator and denominator coprime, denominator monic,
//! zero is 0/1. Every operation re-reduces, so equality is structural.

use super::fppoly::{fp_inv, FpPoly};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: FpPoly,
    den: FpPoly,
}

impl RationalFunction {
    /// Build num/den in canonical form. Errors on a zero denominator.
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        assert_eq!(num.modulus(), den.modulus(), "FpPoly moduli differ");
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: FpPoly, den: FpPoly) -> Self {
        let p = num.modulus();
        if num.is_zero() {
            return RationalFunction {
                num,
                den: FpPoly::one(p),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g).expect("gcd divides");
        let mut den = den.exact_div(&g).expect("gcd divides");
        if !den.is_monic() {
            let inv = fp_inv(den.leading(), p);
            num = num.mul_scalar(inv);
            den = den.mul_scalar(inv);
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(poly: FpPoly) -> Self {
        let p = poly.modulus();
        RationalFunction {
            num: poly,
            den: FpPoly::one(p),
        }
    }

    pub fn zero(p: u64) -> Self {
        Self::from_poly(FpPoly::zero(p))
    }

    pub fn one(p: u64) -> Self {
        Self::from_poly(FpPoly::one(p))
    }

    pub fn modulus(&self) -> u64 {
        self.num.modulus()
    }

    pub fn numerator(&self) -> &FpPoly {
        &self.num
    }

    pub fn denominator(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// A polynomial (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Lies in the constant field F_p; this is the integral closure of F_p
    /// inside F_p(t), so it doubles as the integrality test.
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// The constant value, when `is_constant`.
    pub fn constant_value(&self) -> Option<u64> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        Self::reduced(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den));
        Self::reduced(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})/({}) over F_{}[t]",
            self.num,
            self.den,
            self.modulus()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(p: u64, num: &[u64], den: &[u64]) -> RationalFunction {
        RationalFunction::new(
            FpPoly::from_coeffs(p, num.to_vec()),
            FpPoly::from_coeffs(p, den.to_vec()),
        )
        .unwrap()
    }

    #[test]
    fn reduction_to_lowest_terms() {
        // (t^2 - 1)/(t - 1) = t + 1 over F_5
        let x = rf(5, &[4, 0, 1], &[4, 1]);
        assert!(x.is_polynomial());
        assert_eq!(x.numerator(), &FpPoly::from_coeffs(5, vec![1, 1]));
    }

    #[test]
    fn monic_denominator() {
        // 1/(2t) over F_5 normalizes to 3/t
        let x = rf(5, &[1], &[0, 2]);
        assert!(x.denominator().is_monic());
        assert_eq!(x.numerator(), &FpPoly::constant(5, 3));
    }

    #[test]
    fn sub_self_is_zero() {
        // t/(t+1) - t/(t+1) = 0 over F_2
        let x = rf(2, &[0, 1], &[1, 1]);
        let zero = x.sub(&x);
        assert!(zero.is_zero());
        assert!(zero.denominator().is_one());
    }

    #[test]
    fn field_axioms_sample() {
        let x = rf(3, &[1, 2], &[0, 0, 1]);
        let y = rf(3, &[2], &[1, 1]);
        let z = x.div(&y).unwrap();
        assert_eq!(z.mul(&y), x);
        assert_eq!(x.mul(&x.inv().unwrap()), RationalFunction::one(3));
    }

    #[test]
    fn divide_by_zero() {
        let x = rf(2, &[1], &[1]);
        assert_eq!(x.div(&RationalFunction::zero(2)), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_form() {
        let x = rf(2, &[1, 0, 1], &[0, 1]);
        assert_eq!(x.to_string(), "(t^2 + 1)/(t) over F_2[t]");
    }
}
