//! Discrete valuations on Q and F_p(t).
//!
//! Q carries one p-adic valuation per prime; F_p(t) carries one (pi)-adic
//! valuation per monic irreducible pi plus the degree valuation at infinity.
//! These are the complete lists for both fields, which is what makes
//! "integral over the prime ring" decidable here: x is integral iff
//! nu(x) >= 0 at every valuation, and only finitely many can reject.

use super::fppoly::FpPoly;
use super::primes;
use super::{Field, Scalar};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use std::fmt;

/// Value of a discrete valuation: an integer, or +infinity at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtInt {
    Finite(i64),
    Infinity,
}

impl ExtInt {
    pub fn is_nonnegative(&self) -> bool {
        match self {
            ExtInt::Finite(v) => *v >= 0,
            ExtInt::Infinity => true,
        }
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(*v),
            ExtInt::Infinity => None,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::Infinity => write!(f, "+inf"),
        }
    }
}

/// A discrete valuation on one of the supported fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Valuation {
    /// q-adic on Q; q prime.
    PAdic { q: BigUint },
    /// (pi)-adic on F_p(t); pi monic irreducible.
    PiAdic { p: u64, pi: FpPoly },
    /// Degree valuation on F_p(t): nu(f/g) = deg g - deg f.
    Degree { p: u64 },
}

impl Valuation {
    /// q-adic valuation on Q. Verifies q prime.
    pub fn p_adic(q: impl Into<BigUint>) -> Result<Valuation> {
        let q = q.into();
        if !primes::is_prime_biguint(&q) {
            use num_traits::ToPrimitive;
            return Err(Error::NotPrime(q.to_u64().unwrap_or(0)));
        }
        Ok(Valuation::PAdic { q })
    }

    /// (pi)-adic valuation on F_p(t). The modulus is scaled monic;
    /// irreducibility is verified by trial division.
    pub fn pi_adic(pi: FpPoly) -> Result<Valuation> {
        let p = pi.modulus();
        let pi = pi.monic();
        if !pi.is_irreducible_trial_division() {
            return Err(Error::ReducibleModulus {
                poly: pi.to_string(),
                p,
            });
        }
        Ok(Valuation::PiAdic { p, pi })
    }

    pub fn degree(p: u64) -> Result<Valuation> {
        if !primes::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Valuation::Degree { p })
    }

    /// The field this valuation lives on.
    pub fn carrier(&self) -> Field {
        match self {
            Valuation::PAdic { .. } => Field::Q,
            Valuation::PiAdic { p, .. } | Valuation::Degree { p } => Field::FpT(*p),
        }
    }

    /// nu(x); +infinity at zero. Errors when x is not in the carrier field.
    pub fn valuate(&self, x: &Scalar) -> Result<ExtInt> {
        if x.field() != self.carrier()
            && !(matches!(self.carrier(), Field::FpT(p) if x.field() == Field::FpT(p)))
        {
            return Err(Error::FieldMismatch {
                expected: self.carrier().to_string(),
                found: x.field().to_string(),
            });
        }
        if x.is_zero() {
            return Ok(ExtInt::Infinity);
        }
        let v = match (self, x) {
            (Valuation::PAdic { q }, Scalar::Rational(r)) => {
                let num = r.numer().abs().to_biguint().expect("abs");
                let den = r.denom().abs().to_biguint().expect("abs");
                count_divisions_big(num, q) - count_divisions_big(den, q)
            }
            (Valuation::PiAdic { pi, .. }, Scalar::Function(r)) => {
                count_divisions_poly(r.numerator(), pi) - count_divisions_poly(r.denominator(), pi)
            }
            (Valuation::Degree { .. }, Scalar::Function(r)) => {
                let dn = r.numerator().degree().expect("nonzero") as i64;
                let dd = r.denominator().degree().expect("nonzero") as i64;
                dd - dn
            }
            _ => {
                return Err(Error::FieldMismatch {
                    expected: self.carrier().to_string(),
                    found: x.field().to_string(),
                })
            }
        };
        Ok(ExtInt::Finite(v))
    }

    /// Membership in the valuation ring: nu(x) >= 0.
    pub fn in_valuation_ring(&self, x: &Scalar) -> Result<bool> {
        Ok(self.valuate(x)?.is_nonnegative())
    }
}

/// nu_p of a rational, None at zero. Crate-internal fast path used by the
/// lattice canonicalization, which calls it per matrix entry.
pub(crate) fn rational_nu_p(r: &num_rational::BigRational, p: u64) -> Option<i64> {
    if r.numer().is_zero() {
        return None;
    }
    let q = BigUint::from(p);
    let num = r.numer().abs().to_biguint().expect("abs");
    let den = r.denom().abs().to_biguint().expect("abs");
    Some(count_divisions_big(num, &q) - count_divisions_big(den, &q))
}

fn count_divisions_big(mut n: BigUint, q: &BigUint) -> i64 {
    let mut count = 0i64;
    loop {
        let (quot, rem) = num_integer::Integer::div_rem(&n, q);
        if rem.is_zero() {
            n = quot;
            count += 1;
        } else {
            return count;
        }
    }
}

fn count_divisions_poly(f: &FpPoly, pi: &FpPoly) -> i64 {
    let mut n = f.clone();
    let mut count = 0i64;
    while let Some(q) = n.exact_div(pi) {
        n = q;
        count += 1;
    }
    count
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::PAdic { q } => write!(f, "{q}-adic"),
            Valuation::PiAdic { p, pi } => write!(f, "({pi})-adic over F_{p}[t]"),
            Valuation::Degree { p } => write!(f, "degree over F_{p}[t]"),
        }
    }
}

/// The finite set of valuations that can reject integrality of the listed
/// entries (or of any sums/products whose denominators divide products of the
/// listed denominators).
///
/// For Q: one p-adic valuation per prime dividing a denominator. For F_p(t):
/// one (pi)-adic valuation per irreducible denominator factor, plus the
/// degree valuation always (it rejects nonconstant polynomials, which no
/// (pi)-adic valuation can). For F_p: nothing to check. Sorted for
/// deterministic reports.
pub fn relevant_valuations(entries: &[Scalar]) -> Result<Vec<Valuation>> {
    let field = match entries.first() {
        Some(e) => e.field(),
        None => return Ok(vec![]),
    };
    for e in entries {
        if e.field() != field {
            return Err(Error::FieldMismatch {
                expected: field.to_string(),
                found: e.field().to_string(),
            });
        }
    }
    match field {
        Field::Q => {
            let mut primes_seen: Vec<BigUint> = Vec::new();
            for e in entries {
                let r = e.as_rational().expect("field checked");
                let den = r.denom().abs().to_biguint().expect("abs");
                if num_traits::One::is_one(&den) {
                    continue;
                }
                for (q, _) in primes::factor_biguint(&den) {
                    if !primes_seen.contains(&q) {
                        primes_seen.push(q);
                    }
                }
            }
            primes_seen.sort();
            Ok(primes_seen
                .into_iter()
                .map(|q| Valuation::PAdic { q })
                .collect())
        }
        Field::Fp(_) => Ok(vec![]),
        Field::FpT(p) => {
            let mut pis: Vec<FpPoly> = Vec::new();
            for e in entries {
                let r = e.as_function().expect("field checked");
                if r.denominator().is_one() {
                    continue;
                }
                for (pi, _) in r.denominator().factor() {
                    if !pis.contains(&pi) {
                        pis.push(pi);
                    }
                }
            }
            pis.sort_by(|a, b| a.cmp_deg_lex(b));
            let mut out: Vec<Valuation> = pis
                .into_iter()
                .map(|pi| Valuation::PiAdic { p, pi })
                .collect();
            out.push(Valuation::Degree { p });
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RationalFunction;

    fn ratfunc(p: u64, num: &[u64], den: &[u64]) -> Scalar {
        Scalar::Function(
            RationalFunction::new(
                FpPoly::from_coeffs(p, num.to_vec()),
                FpPoly::from_coeffs(p, den.to_vec()),
            )
            .unwrap(),
        )
    }

    #[test]
    fn p_adic_values() {
        let v2 = Valuation::p_adic(2u32).unwrap();
        // 24 = 2^3 * 3
        assert_eq!(
            v2.valuate(&Scalar::from_integer(&Field::Q, 24)).unwrap(),
            ExtInt::Finite(3)
        );
        // 3/4: nu = -2
        assert_eq!(
            v2.valuate(&Scalar::from_rational(3, 4)).unwrap(),
            ExtInt::Finite(-2)
        );
        assert_eq!(
            v2.valuate(&Scalar::zero(&Field::Q)).unwrap(),
            ExtInt::Infinity
        );
    }

    #[test]
    fn pi_adic_values() {
        // t-adic over F_3(t): t^2/(t^2+1) has valuation 2
        let vt = Valuation::pi_adic(FpPoly::t(3)).unwrap();
        assert_eq!(
            vt.valuate(&ratfunc(3, &[0, 0, 1], &[1, 0, 1])).unwrap(),
            ExtInt::Finite(2)
        );
        // t+1 has t-adic valuation 0
        assert_eq!(
            vt.valuate(&ratfunc(3, &[1, 1], &[1])).unwrap(),
            ExtInt::Finite(0)
        );
    }

    #[test]
    fn pi_adic_higher_degree_modulus() {
        // pi = t^2 + t + 1, irreducible over F_2
        let pi = FpPoly::from_coeffs(2, vec![1, 1, 1]);
        let v = Valuation::pi_adic(pi.clone()).unwrap();
        // pi^2 / (t+1) has valuation 2
        let num = pi.mul(&pi);
        let x = Scalar::Function(
            RationalFunction::new(num, FpPoly::from_coeffs(2, vec![1, 1])).unwrap(),
        );
        assert_eq!(v.valuate(&x).unwrap(), ExtInt::Finite(2));
        // 1/pi has valuation -1
        let y = Scalar::Function(
            RationalFunction::new(FpPoly::one(2), pi).unwrap(),
        );
        assert_eq!(v.valuate(&y).unwrap(), ExtInt::Finite(-1));
    }

    #[test]
    fn degree_valuation() {
        // (t^2+t)/(t^3+1) over F_2: 3 - 2 = 1
        let vd = Valuation::degree(2).unwrap();
        assert_eq!(
            vd.valuate(&ratfunc(2, &[0, 1, 1], &[1, 0, 0, 1])).unwrap(),
            ExtInt::Finite(1)
        );
        assert_eq!(
            vd.valuate(&ratfunc(2, &[0, 1], &[1])).unwrap(),
            ExtInt::Finite(-1)
        );
    }

    #[test]
    fn valuation_ring_membership() {
        let v2 = Valuation::p_adic(2u32).unwrap();
        assert!(!v2.in_valuation_ring(&Scalar::from_rational(3, 4)).unwrap());
        assert!(v2.in_valuation_ring(&Scalar::zero(&Field::Q)).unwrap());
        let vt = Valuation::pi_adic(FpPoly::t(3)).unwrap();
        assert!(vt.in_valuation_ring(&ratfunc(3, &[1, 1], &[1])).unwrap());
    }

    #[test]
    fn reducible_pi_rejected() {
        // t^2 + 1 = (t+1)^2 over F_2
        assert!(matches!(
            Valuation::pi_adic(FpPoly::from_coeffs(2, vec![1, 0, 1])),
            Err(Error::ReducibleModulus { .. })
        ));
    }

    #[test]
    fn field_mismatch_rejected() {
        let v2 = Valuation::p_adic(2u32).unwrap();
        assert!(v2.valuate(&Scalar::from_integer(&Field::Fp(5), 1)).is_err());
    }

    #[test]
    fn relevant_over_q() {
        // [1/6, 5] -> {2-adic, 3-adic}
        let vals = relevant_valuations(&[
            Scalar::from_rational(1, 6),
            Scalar::from_integer(&Field::Q, 5),
        ])
        .unwrap();
        assert_eq!(
            vals,
            vec![
                Valuation::PAdic {
                    q: BigUint::from(2u32)
                },
                Valuation::PAdic {
                    q: BigUint::from(3u32)
                }
            ]
        );
        // integer entries -> empty
        assert!(relevant_valuations(&[
            Scalar::from_integer(&Field::Q, 3),
            Scalar::from_integer(&Field::Q, 7),
        ])
        .unwrap()
        .is_empty());
    }

    #[test]
    fn relevant_over_fpt() {
        // [1/t] over F_2(t) -> {t-adic, degree}
        let vals = relevant_valuations(&[ratfunc(2, &[1], &[0, 1])]).unwrap();
        assert_eq!(vals.len(), 2);
        assert_eq!(
            vals[0],
            Valuation::PiAdic {
                p: 2,
                pi: FpPoly::t(2)
            }
        );
        assert_eq!(vals[1], Valuation::Degree { p: 2 });
    }

    #[test]
    fn relevant_over_fp_empty() {
        let vals =
            relevant_valuations(&[Scalar::from_integer(&Field::Fp(5), 2)]).unwrap();
        assert!(vals.is_empty());
    }
}
