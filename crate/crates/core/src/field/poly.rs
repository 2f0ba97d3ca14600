use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::var::Var;

/// A Laurent polynomial with integer coefficients.
///
/// Terms are sorted by descending monomial order, so the first term is the
/// leading term. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPolynomial {
    terms: Vec<(Monomial, BigInt)>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: BigInt, m: Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial { terms: vec![(m, c)] }
    }

    pub fn var(v: Var) -> Self {
        Self::term(BigInt::one(), Monomial::var(v))
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        LaurentPolynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) != 0)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPolynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn shift(&self, m: &Monomial) -> Self {
        if m.is_one() {
            return self.clone();
        }
        LaurentPolynomial { terms: self.terms.iter().map(|(t, a)| (t * m, a.clone())).collect() }
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), -a)).collect() }
    }

    /// `self + c * m * other`, merging sorted term lists.
    pub fn add_scaled(&self, other: &Self, c: &BigInt, m: &Monomial) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(t, x)| (t * m, x * c)).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => std::cmp::Ordering::Greater,
                (None, Some(_)) => std::cmp::Ordering::Less,
                (Some(x), Some(y)) => x.0.cmp(&y.0),
            };
            match ord {
                std::cmp::Ordering::Greater => out.push(a.next().unwrap().clone()),
                std::cmp::Ordering::Less => out.push(b.next().unwrap()),
                std::cmp::Ordering::Equal => {
                    let (t, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let s = x + y;
                    if !s.is_zero() {
                        out.push((t.clone(), s));
                    }
                }
            }
        }
        LaurentPolynomial { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &BigInt::one(), &Monomial::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-BigInt::one(), &Monomial::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.shift(m).scale(c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.shift(m).scale(c);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma * mb).or_default() += ca * cb;
            }
        }
        Self::from_map(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exponent-wise minimum over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |acc, (m, _)| acc.meet(m))
    }

    /// Exponent-wise maximum over all terms.
    pub fn monomial_span(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |acc, (m, _)| acc.join(m))
    }

    pub fn integer_content(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    /// Splits `self = c * m * core` where `core` has no monomial content,
    /// coprime integer coefficients and a positive leading coefficient.
    /// Returns `None` for the zero polynomial.
    pub fn split_content(&self) -> Option<(BigInt, Monomial, LaurentPolynomial)> {
        let (_, lead) = self.leading()?;
        let m = self.monomial_content();
        let mut c = self.integer_content();
        if lead.is_negative() {
            c = -c;
        }
        let inv_m = m.inv();
        let core = LaurentPolynomial {
            terms: self.terms.iter().map(|(t, a)| (t * &inv_m, a / &c)).collect(),
        };
        Some((c, m, core))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    ///
    /// Both operands must be honest polynomials (no negative exponents), with
    /// `d` primitive; the quotient then has integer coefficients whenever it
    /// exists.
    pub fn div_exact(&self, d: &LaurentPolynomial) -> Option<LaurentPolynomial> {
        let (dm, dc) = d.leading()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.terms.len() == 1 {
            let inv = dm.inv();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let (qc, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                terms.push((m * &inv, qc));
            }
            return Some(LaurentPolynomial { terms });
        }
        let bound = self.monomial_span();
        let dspan = d.monomial_span();
        for v in dspan.vars() {
            if dspan.exponent(v) > bound.exponent(v) {
                return None;
            }
        }
        let (tail_m, tail_c) = d.terms.last().unwrap();
        let (self_tail_m, self_tail_c) = self.terms.last().unwrap();
        if self_tail_m.checked_div(tail_m).is_none() || !(self_tail_c % tail_c).is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(dm)?;
            if qm.vars().any(|v| qm.exponent(v) > bound.exponent(v) - dspan.exponent(v)) {
                return None;
            }
            let (qc, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            rem = rem.add_scaled(d, &-&qc, &qm);
            quot.push((qm, qc));
        }
        Some(LaurentPolynomial { terms: quot })
    }

    /// Groups terms by the exponent of `v`: returns `(min_exp, coefficients)`
    /// with `coefficients[k]` multiplying `v^(min_exp + k)`.
    pub fn coefficients_in(&self, v: Var) -> (i32, Vec<LaurentPolynomial>) {
        if self.is_zero() {
            return (0, Vec::new());
        }
        let lo = self.terms.iter().map(|(m, _)| m.exponent(v)).min().unwrap();
        let hi = self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap();
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); (hi - lo + 1) as usize];
        for (m, c) in &self.terms {
            buckets[(m.exponent(v) - lo) as usize].push((m.without(v), c.clone()));
        }
        let coeffs = buckets
            .into_iter()
            .map(|mut ts| {
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                LaurentPolynomial { terms: ts }
            })
            .collect();
        (lo, coeffs)
    }

    /// Reassembles `Σ coeffs[k] v^(lo + k)`.
    pub fn from_coefficients(v: Var, lo: i32, coeffs: &[LaurentPolynomial]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().flat_map(|(k, c)| {
            let shift = Monomial::power(v, lo + k as i32);
            c.terms.iter().map(move |(m, a)| (m * &shift, a.clone()))
        }))
    }

    /// Order of vanishing along `v = 1` and the cofactor evaluated at `v = 1`.
    pub fn valuation_at_one(&self, v: Var) -> (u32, LaurentPolynomial) {
        let (_, mut coeffs) = self.coefficients_in(v);
        let mut val = 0;
        loop {
            let at_one = coeffs.iter().fold(Self::zero(), |acc, c| acc.add(c));
            if !at_one.is_zero() || coeffs.is_empty() {
                return (val, at_one);
            }
            // synthetic division by (v - 1)
            let k = coeffs.len() - 1;
            let mut quot = vec![Self::zero(); k];
            let mut carry = Self::zero();
            for idx in (1..=k).rev() {
                carry = carry.add(&coeffs[idx]);
                quot[idx - 1] = carry.clone();
            }
            coeffs = quot;
            val += 1;
        }
    }

    pub fn evaluate(&self, point: &impl Fn(Var) -> Option<BigRational>) -> Option<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, e) in m.iter() {
                let x = point(v)?;
                if x.is_zero() && e < 0 {
                    return None;
                }
                t *= num_traits::pow::Pow::pow(&x, e);
            }
            total += t;
        }
        Some(total)
    }

    /// Canonical printing order: lexicographic by variable name, higher powers first.
    pub fn display_terms(&self) -> Vec<&(Monomial, BigInt)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| b.0.name_cmp(&a.0));
        ts
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.display_terms().into_iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
