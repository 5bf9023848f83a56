//! Text format for scalars.
//!
//! Rationals: "a/b" or "a". Prime-field elements: "r mod p". Rational
//! functions: "(poly)/(poly) over F_p[t]" with sparse polynomials written
//! "c*t^k + ...". Parsing is contextual (the target field is known) and
//! exact; the long forms are checked for consistency with the field.
//! Shorter spellings are accepted where unambiguous: bare integers in any
//! field, bare polynomials and "(num)/(den)" in F_p(t).

use super::fppoly::{fp_neg, FpPoly};
use super::ratfunc::RationalFunction;
use super::{Field, PrimeFieldElem, Scalar};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::str::FromStr;

impl Scalar {
    /// Parse a scalar in the given field from its text form.
    pub fn parse(text: &str, field: &Field) -> Result<Scalar> {
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        match field {
            Field::Q => parse_rational(s).map(Scalar::Rational),
            Field::Fp(p) => parse_prime(s, *p).map(Scalar::Prime),
            Field::FpT(p) => parse_function(s, *p).map(Scalar::Function),
        }
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from(parse_bigint(s)?)),
        Some((num, den)) => {
            let den = parse_bigint(den)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_bigint(num)?, den))
        }
    }
}

fn parse_prime(s: &str, p: u64) -> Result<PrimeFieldElem> {
    let body = match s.split_once(" mod ") {
        Some((r, modulus)) => {
            let m: u64 = modulus
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
            if m != p {
                return Err(Error::FieldMismatch {
                    expected: Field::Fp(p).to_string(),
                    found: Field::Fp(m).to_string(),
                });
            }
            r
        }
        None => s,
    };
    let value: i64 = body
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad residue {body:?}")))?;
    Ok(PrimeFieldElem::reduce(p, value))
}

fn parse_function(s: &str, p: u64) -> Result<RationalFunction> {
    let body = match s.split_once(" over ") {
        Some((b, field_tag)) => {
            let tag = field_tag.trim();
            let expected = format!("F_{p}[t]");
            if tag != expected {
                return Err(Error::FieldMismatch {
                    expected: Field::FpT(p).to_string(),
                    found: tag.to_string(),
                });
            }
            b.trim()
        }
        None => s,
    };
    // "(num)/(den)" | "(num)" | bare polynomial
    if let Some(stripped) = body.strip_prefix('(') {
        let close = matching_paren(stripped)
            .ok_or_else(|| Error::Parse(format!("unbalanced parens in {s:?}")))?;
        let num = parse_poly(&stripped[..close], p)?;
        let rest = stripped[close + 1..].trim();
        if rest.is_empty() {
            return RationalFunction::new(num, FpPoly::one(p));
        }
        let den_body = rest
            .strip_prefix('/')
            .map(str::trim)
            .and_then(|r| r.strip_prefix('('))
            .ok_or_else(|| Error::Parse(format!("expected /(den) in {s:?}")))?;
        let close = matching_paren(den_body)
            .ok_or_else(|| Error::Parse(format!("unbalanced parens in {s:?}")))?;
        if !den_body[close + 1..].trim().is_empty() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        let den = parse_poly(&den_body[..close], p)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        RationalFunction::new(num, den)
    } else {
        Ok(RationalFunction::from_poly(parse_poly(body, p)?))
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Sparse polynomial form "c*t^k + ..." (also accepts "c t^k", "ct^k",
/// "t", bare constants, and '-' separators).
fn parse_poly(s: &str, p: u64) -> Result<FpPoly> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = FpPoly::zero(p);
    let mut term_start = 0usize;
    let mut prev_sign = 1i8;
    let bytes = s.as_bytes();
    let mut i = 0usize;
    let mut consumed_any = false;
    while i <= bytes.len() {
        let at_split = i == bytes.len() || bytes[i] == b'+' || bytes[i] == b'-';
        if at_split {
            let term = s[term_start..i].trim();
            if !term.is_empty() {
                let (c, k) = parse_term(term, p)?;
                let c = if prev_sign < 0 { fp_neg(c, p) } else { c };
                acc = acc.add(&FpPoly::monomial(p, c, k));
                consumed_any = true;
                prev_sign = 1;
            } else if i < bytes.len() && prev_sign < 0 {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            if i < bytes.len() && bytes[i] == b'-' {
                prev_sign = -prev_sign;
            }
            term_start = i + 1;
        }
        i += 1;
    }
    if !consumed_any {
        return Err(Error::Parse(format!("no terms in {s:?}")));
    }
    Ok(acc)
}

/// One monomial: returns (coefficient, exponent).
fn parse_term(term: &str, p: u64) -> Result<(u64, usize)> {
    let term = term.replace(' ', "");
    if let Some(t_pos) = term.find('t') {
        let coeff_part = term[..t_pos].trim_end_matches('*');
        let c = if coeff_part.is_empty() {
            1u64
        } else {
            coeff_part
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad coefficient {coeff_part:?}")))?
                % p
        };
        let exp_part = &term[t_pos + 1..];
        let k = if exp_part.is_empty() {
            1usize
        } else if let Some(e) = exp_part.strip_prefix('^') {
            e.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?
        } else {
            return Err(Error::Parse(format!("bad term {term:?}")));
        };
        Ok((c, k))
    } else {
        let c = term
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad constant {term:?}")))?
            % p;
        Ok((c, 0))
    }
}
