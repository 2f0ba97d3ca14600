use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::modp;
use super::monomial::Monomial;
use super::poly::LaurentPolynomial;
use super::var::Var;
use super::FieldError;

/// An element of the fraction field of Laurent polynomials over the integers.
///
/// Stored as `unit * mono * Π factor^exp`, where each factor is a polynomial
/// with at least two terms, no monomial content, coprime integer coefficients
/// and a positive leading coefficient, and each exponent is nonzero. Products
/// and quotients therefore never expand anything. Sums expand only the parts
/// that are not shared, then cancel the new numerator against known
/// denominator factors by exact trial division.
///
/// The representation is not canonical (two different factor lists can
/// describe the same function); use [`RationalFunction::equals`] for equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    unit: BigRational,
    mono: Monomial,
    factors: Vec<(LaurentPolynomial, i32)>,
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { unit: BigRational::zero(), mono: Monomial::one(), factors: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        RationalFunction { unit: c, mono: Monomial::one(), factors: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(BigRational::one(), Monomial::var(v))
    }

    pub fn monomial(c: BigRational, m: Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { unit: c, mono: m, factors: Vec::new() }
    }

    pub fn from_poly(p: &LaurentPolynomial) -> Self {
        match p.split_content() {
            None => Self::zero(),
            Some((c, m, core)) => {
                let mut out = Self::monomial(BigRational::from_integer(c), m);
                if core.len() > 1 {
                    out.factors.push((core, 1));
                }
                out
            }
        }
    }

    /// `num / den` for polynomials.
    pub fn from_fraction(num: &LaurentPolynomial, den: &LaurentPolynomial) -> Result<Self, FieldError> {
        Self::from_poly(num).div(&Self::from_poly(den))
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// True when no non-monomial factors are present.
    pub fn is_monomial(&self) -> bool {
        self.factors.is_empty()
    }

    /// The rational constant, if the function is one.
    pub fn as_constant(&self) -> Option<&BigRational> {
        (self.factors.is_empty() && self.mono.is_one()).then_some(&self.unit)
    }

    /// Coefficient and monomial, if the function is a single term.
    pub fn as_monomial(&self) -> Option<(&BigRational, &Monomial)> {
        self.factors.is_empty().then_some((&self.unit, &self.mono))
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.mono.exponent(v) != 0 || self.factors.iter().any(|(p, _)| p.contains_var(v))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            unit: &self.unit * &other.unit,
            mono: &self.mono * &other.mono,
            factors: merge_factors(&self.factors, &other.factors, 1),
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(RationalFunction {
            unit: self.unit.recip(),
            mono: self.mono.inv(),
            factors: self.factors.iter().map(|(p, e)| (p.clone(), -e)).collect(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn neg(&self) -> Self {
        RationalFunction { unit: -&self.unit, mono: self.mono.clone(), factors: self.factors.clone() }
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        if e == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if e > 0 { Ok(Self::zero()) } else { Err(FieldError::DivisionByZero) };
        }
        let e32 = i32::try_from(e).map_err(|_| FieldError::ExponentOverflow)?;
        let unit = num_traits::pow::Pow::pow(&self.unit, e32);
        Ok(RationalFunction {
            unit,
            mono: self.mono.pow(e32),
            factors: self.factors.iter().map(|(p, k)| (p.clone(), k * e32)).collect(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        out.unit *= c;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let Sum { common_mono, common, sum, den } = sum_parts(self, other, false);
        if sum.is_zero() {
            return Self::zero();
        }
        let (c, m, mut core) = sum.split_content().unwrap();
        let mut factors = common;
        // cancel the fresh numerator against shared denominators
        if core.len() > 1 {
            for (p, e) in factors.iter_mut() {
                while *e < 0 {
                    match core.div_exact(p) {
                        Some(q) => {
                            core = q;
                            *e += 1;
                        }
                        None => break,
                    }
                }
            }
            factors.retain(|(_, e)| *e != 0);
        }
        let mut out = RationalFunction {
            unit: BigRational::new(c, den),
            mono: &common_mono * &m,
            factors,
        };
        if core.len() > 1 {
            out.factors = merge_factors(&out.factors, &[(core, 1)], 1);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact equality of the represented functions.
    pub fn equals(&self, other: &Self) -> bool {
        if self == other {
            return true;
        }
        if self.is_zero() != other.is_zero() {
            return false;
        }
        if modp::differs(self, other, 3) {
            return false;
        }
        sum_parts(self, other, true).sum.is_zero()
    }

    /// Expanded numerator; together with [`Self::denominator`] this is the
    /// normalized fraction (denominator with positive leading coefficient,
    /// coprime integer contents).
    pub fn numerator(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::term(self.unit.numer().clone(), self.mono.clone());
        for (f, e) in &self.factors {
            if *e > 0 {
                p = p.mul(&f.pow(*e as u32));
            }
        }
        p
    }

    pub fn denominator(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::constant(self.unit.denom().clone());
        for (f, e) in &self.factors {
            if *e < 0 {
                p = p.mul(&f.pow((-e) as u32));
            }
        }
        p
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LaurentPolynomial, i32)> {
        self.factors.iter().map(|(p, e)| (p, *e))
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    pub fn mono(&self) -> &Monomial {
        &self.mono
    }

    /// True when the denominator is a monomial times a constant.
    pub fn has_monomial_denominator(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e > 0)
    }

    /// Substitutes `t = 1` after removing every factor of `(t - 1)`.
    ///
    /// Each stored factor is a polynomial in `t` over the remaining
    /// variables, so its `(t - 1)`-adic valuation is found by synthetic
    /// division; the valuations are then summed.
    pub fn limit_at_one(&self, t: Var) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = RationalFunction::monomial(self.unit.clone(), self.mono.without(t));
        let mut valuation: i64 = 0;
        for (p, e) in &self.factors {
            if !p.contains_var(t) {
                out = out.mul(&RationalFunction { unit: BigRational::one(), mono: Monomial::one(), factors: vec![(p.clone(), *e)] });
                continue;
            }
            let (v, rest) = p.valuation_at_one(t);
            valuation += v as i64 * *e as i64;
            out = out.mul(&Self::from_poly(&rest).pow(*e as i64)?);
        }
        match valuation.cmp(&0) {
            std::cmp::Ordering::Greater => Ok(Self::zero()),
            std::cmp::Ordering::Less => Err(FieldError::PoleAtOne(t.name().to_string())),
            std::cmp::Ordering::Equal => Ok(out),
        }
    }

    /// Exact substitution of variables by rational functions.
    pub fn substitute(&self, bindings: &HashMap<Var, RationalFunction>) -> Result<Self, FieldError> {
        if bindings.is_empty() || self.is_zero() {
            return Ok(self.clone());
        }
        let mut out = Self::from_rational(self.unit.clone()).mul(&subst_monomial(&self.mono, bindings)?);
        for (p, e) in &self.factors {
            let image = subst_poly(p, bindings)?;
            if image.is_zero() {
                if *e < 0 {
                    return Err(FieldError::DivisionByZero);
                }
                return Ok(Self::zero());
            }
            out = out.mul(&image.pow(*e as i64)?);
        }
        Ok(out)
    }

    pub fn substitute_var(&self, v: Var, value: &RationalFunction) -> Result<Self, FieldError> {
        self.substitute(&HashMap::from([(v, value.clone())]))
    }

    /// Exact value at a rational point.
    pub fn evaluate_rational(&self, bindings: &HashMap<Var, BigRational>) -> Result<BigRational, FieldError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let lookup = |v: Var| bindings.get(&v).cloned();
        let mut out = self.unit.clone();
        let mono = LaurentPolynomial::term(BigInt::one(), self.mono.clone());
        out *= mono.evaluate(&lookup).ok_or_else(|| unbound_or_zero(&self.mono, bindings))?;
        for (p, e) in &self.factors {
            let x = p.evaluate(&lookup).ok_or(FieldError::DivisionByZero)?;
            if x.is_zero() {
                if *e < 0 {
                    return Err(FieldError::DivisionByZero);
                }
                return Ok(BigRational::zero());
            }
            out *= num_traits::pow::Pow::pow(&x, *e);
        }
        Ok(out)
    }

    /// All variables occurring in the function.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.mono.vars().collect();
        for (p, _) in &self.factors {
            for (m, _) in p.terms() {
                vs.extend(m.vars());
            }
        }
        vs.sort();
        vs.dedup();
        vs
    }
}

fn unbound_or_zero(m: &Monomial, bindings: &HashMap<Var, BigRational>) -> FieldError {
    match m.vars().find(|v| !bindings.contains_key(v)) {
        Some(v) => FieldError::Unbound(v.name().to_string()),
        None => FieldError::DivisionByZero,
    }
}

fn merge_factors(
    a: &[(LaurentPolynomial, i32)],
    b: &[(LaurentPolynomial, i32)],
    sign: i32,
) -> Vec<(LaurentPolynomial, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), sign * b[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = a[i].1 + sign * b[j].1;
                if e != 0 {
                    out.push((a[i].0.clone(), e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

struct Sum {
    common_mono: Monomial,
    common: Vec<(LaurentPolynomial, i32)>,
    sum: LaurentPolynomial,
    den: BigInt,
}

/// Writes `f ± g = (common_mono * Π common) * sum / den` with `sum` an
/// expanded polynomial.
fn sum_parts(f: &RationalFunction, g: &RationalFunction, subtract: bool) -> Sum {
    let common_mono = f.mono.meet(&g.mono);
    let mut common = Vec::new();
    let mut rest_f = Vec::new();
    let mut rest_g = Vec::new();
    let (a, b) = (&f.factors, &g.factors);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        let (p, ef, eg) = match ord {
            std::cmp::Ordering::Less => {
                i += 1;
                (&a[i - 1].0, a[i - 1].1, 0)
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (&b[j - 1].0, 0, b[j - 1].1)
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (&a[i - 1].0, a[i - 1].1, b[j - 1].1)
            }
        };
        let ec = ef.min(eg);
        if ec != 0 {
            common.push((p.clone(), ec));
        }
        if ef > ec {
            rest_f.push((p, (ef - ec) as u32));
        }
        if eg > ec {
            rest_g.push((p, (eg - ec) as u32));
        }
    }
    let den = f.unit.denom().lcm(g.unit.denom());
    let cf = f.unit.numer() * (&den / f.unit.denom());
    let mut cg = g.unit.numer() * (&den / g.unit.denom());
    if subtract {
        cg = -cg;
    }
    let expand = |rest: &[(&LaurentPolynomial, u32)], mono: &Monomial, c: &BigInt| {
        let shift = mono / &common_mono;
        let mut p = LaurentPolynomial::term(c.clone(), shift);
        let mut sorted: Vec<_> = rest.to_vec();
        sorted.sort_by_key(|(q, _)| q.len());
        for (q, e) in sorted {
            p = p.mul(&q.pow(e));
        }
        p
    };
    let pf = expand(&rest_f, &f.mono, &cf);
    let pg = expand(&rest_g, &g.mono, &cg);
    Sum { common_mono, common, sum: pf.add(&pg), den }
}

fn subst_monomial(m: &Monomial, bindings: &HashMap<Var, RationalFunction>) -> Result<RationalFunction, FieldError> {
    let mut out = RationalFunction::one();
    for (v, e) in m.iter() {
        let image = match bindings.get(&v) {
            Some(r) => r.pow(e as i64)?,
            None => RationalFunction::monomial(BigRational::one(), Monomial::power(v, e)),
        };
        out = out.mul(&image);
    }
    Ok(out)
}

fn subst_poly(p: &LaurentPolynomial, bindings: &HashMap<Var, RationalFunction>) -> Result<RationalFunction, FieldError> {
    let all_monomial = p
        .terms()
        .iter()
        .flat_map(|(m, _)| m.vars())
        .all(|v| bindings.get(&v).is_none_or(|r| r.is_monomial()));
    if all_monomial {
        // every term maps to a single term: collect into one polynomial
        let mut terms: Vec<(Monomial, BigRational)> = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let image = subst_monomial(m, bindings)?;
            if image.is_zero() {
                continue;
            }
            terms.push((image.mono.clone(), &image.unit * BigRational::from_integer(c.clone())));
        }
        let den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let poly = LaurentPolynomial::from_terms(
            terms.into_iter().map(|(m, c)| (m, c.numer() * (&den / c.denom()))),
        );
        return Ok(RationalFunction::from_poly(&poly).scale(&BigRational::new(BigInt::one(), den)));
    }
    let mut out = RationalFunction::zero();
    for (m, c) in p.terms() {
        let image = subst_monomial(m, bindings)?.scale(&BigRational::from_integer(c.clone()));
        out = out.add(&image);
    }
    Ok(out)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = self.numerator();
        let mut den = self.denominator();
        // sign convention follows the printed (name-ordered) leading term
        if den.display_terms().first().is_some_and(|(_, c)| c.sign() == num_bigint::Sign::Minus) {
            num = num.neg();
            den = den.neg();
        }
        write!(f, "{num} / {den}")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for RationalFunction {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl From<BigRational> for RationalFunction {
    fn from(c: BigRational) -> Self {
        Self::from_rational(c)
    }
}

impl From<Var> for RationalFunction {
    fn from(v: Var) -> Self {
        Self::var(v)
    }
}

impl From<&LaurentPolynomial> for RationalFunction {
    fn from(p: &LaurentPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl std::ops::Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::mul(self, rhs)
    }
}

impl std::ops::Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::add(self, rhs)
    }
}

impl std::ops::Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::sub(self, rhs)
    }
}

impl std::ops::Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = RationalFunction>>(iter: I) -> Self {
        iter.fold(RationalFunction::zero(), |acc, x| acc.add(&x))
    }
}

impl std::iter::Product for RationalFunction {
    fn product<I: Iterator<Item = RationalFunction>>(iter: I) -> Self {
        iter.fold(RationalFunction::one(), |acc, x| acc.mul(&x))
    }
}
