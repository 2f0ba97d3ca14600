use num_bigint::BigInt;
use num_traits::One;

use super::monomial::Monomial;
use super::poly::LaurentPolynomial;
use super::rational::RationalFunction;
use super::var::{is_valid_name, Var};
use super::FieldError;

/// Parses the printed form `num / den` (the ` / den` part is optional).
pub fn parse_rational(text: &str) -> Result<RationalFunction, FieldError> {
    let mut parts = text.split('/');
    let num = parse_poly(parts.next().unwrap_or(""))?;
    let den = match parts.next() {
        Some(d) => parse_poly(d)?,
        None => LaurentPolynomial::one(),
    };
    if parts.next().is_some() {
        return Err(FieldError::Parse(format!("more than one '/' in {text:?}")));
    }
    if den.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    RationalFunction::from_fraction(&num, &den)
}

/// Parses a sum of terms such as `-3*q^2*qb^-1*u1 + 2`.
pub fn parse_poly(text: &str) -> Result<LaurentPolynomial, FieldError> {
    let src: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(FieldError::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = src.as_bytes();
    for idx in 1..=bytes.len() {
        let at_split = idx == bytes.len()
            || ((bytes[idx] == b'+' || bytes[idx] == b'-') && bytes[idx - 1] != b'^');
        if at_split {
            terms.push(parse_term(&src[start..idx])?);
            start = idx;
        }
    }
    Ok(LaurentPolynomial::from_terms(terms))
}

fn parse_term(text: &str) -> Result<(Monomial, BigInt), FieldError> {
    let err = || FieldError::Parse(format!("bad term {text:?}"));
    let (sign, body) = match text.as_bytes().first() {
        Some(b'-') => (-BigInt::one(), &text[1..]),
        Some(b'+') => (BigInt::one(), &text[1..]),
        _ => (BigInt::one(), text),
    };
    if body.is_empty() {
        return Err(err());
    }
    let mut coeff = sign;
    let mut mono = Monomial::one();
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(err());
        }
        if factor.as_bytes()[0].is_ascii_digit() {
            coeff *= factor.parse::<BigInt>().map_err(|_| err())?;
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<i32>().map_err(|_| err())?),
            None => (factor, 1),
        };
        if !is_valid_name(name) {
            return Err(err());
        }
        mono = &mono * &Monomial::power(Var::new(name), exp);
    }
    Ok((mono, coeff))
}

impl std::str::FromStr for RationalFunction {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s)
    }
}
