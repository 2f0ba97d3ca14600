use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::var::Var;

/// A Laurent monomial: a product of variables raised to nonzero integer powers.
///
/// Entries are kept sorted by variable and never carry a zero exponent, so
/// structural equality is equality of monomials. The `Ord` impl is the
/// lexicographic monomial order (first variable dominates), which is
/// compatible with multiplication.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    entries: SmallVec<[(Var, i32); 4]>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::power(v, 1)
    }

    pub fn power(v: Var, e: i32) -> Monomial {
        let mut m = Monomial::default();
        if e != 0 {
            m.entries.push((v, e));
        }
        m
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Monomial {
        let mut out = Monomial::one();
        for (v, e) in pairs {
            out = &out * &Monomial::power(v, e);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.entries
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.entries.iter().map(|(v, _)| *v)
    }

    pub fn degree_in(&self, v: Var) -> i32 {
        self.exponent(v)
    }

    /// Total degree (sum of exponents).
    pub fn total_degree(&self) -> i64 {
        self.entries.iter().map(|(_, e)| *e as i64).sum()
    }

    fn merge(&self, other: &Monomial, f: impl Fn(i32, i32) -> i32) -> Monomial {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = SmallVec::with_capacity(a.len().max(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, e) = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, f(a[i - 1].1, 0))
            } else if i >= a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, f(0, b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, f(a[i - 1].1, b[j - 1].1))
            };
            if e != 0 {
                out.push((v, e));
            }
        }
        Monomial { entries: out }
    }

    pub fn inv(&self) -> Monomial {
        Monomial { entries: self.entries.iter().map(|&(v, e)| (v, -e)).collect() }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial { entries: self.entries.iter().map(|&(v, e)| (v, e * k)).collect() }
    }

    /// Exponent-wise minimum (gcd for Laurent monomials).
    pub fn meet(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a.min(b))
    }

    /// Exponent-wise maximum.
    pub fn join(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a.max(b))
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(|&(_, e)| e >= 0)
    }

    /// `self / other` if it has no negative exponents.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let q = self * &other.inv();
        q.is_polynomial().then_some(q)
    }

    /// Halve every exponent; `None` if some exponent is odd.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.entries.iter().any(|&(_, e)| e % 2 != 0) {
            return None;
        }
        Some(Monomial { entries: self.entries.iter().map(|&(v, e)| (v, e / 2)).collect() })
    }

    /// Drop the variable `v`.
    pub fn without(&self, v: Var) -> Monomial {
        Monomial { entries: self.entries.iter().copied().filter(|&(w, _)| w != v).collect() }
    }

    /// Entries ordered by variable name, as printed.
    pub fn named_entries(&self) -> Vec<(&'static str, i32)> {
        let mut out: Vec<_> = self.entries.iter().map(|&(v, e)| (v.name(), e)).collect();
        out.sort();
        out
    }

    /// Lexicographic comparison with variables ordered by name, used for
    /// printing so output does not depend on interning order.
    pub fn name_cmp(&self, other: &Monomial) -> Ordering {
        let a = self.named_entries();
        let b = other.named_entries();
        let (mut i, mut j) = (0, 0);
        loop {
            let name = match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(x), None) => x.0,
                (None, Some(y)) => y.0,
                (Some(x), Some(y)) => x.0.min(y.0),
            };
            let ea = a.get(i).filter(|x| x.0 == name).map(|x| x.1).unwrap_or(0);
            let eb = b.get(j).filter(|y| y.0 == name).map(|y| y.1).unwrap_or(0);
            if ea != eb {
                return ea.cmp(&eb);
            }
            if a.get(i).is_some_and(|x| x.0 == name) {
                i += 1;
            }
            if b.get(j).is_some_and(|y| y.0 == name) {
                j += 1;
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        loop {
            let (ea, eb) = match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(x), None) => {
                    i += 1;
                    (x.1, 0)
                }
                (None, Some(y)) => {
                    j += 1;
                    (0, y.1)
                }
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => {
                        i += 1;
                        (x.1, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (0, y.1)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (x.1, y.1)
                    }
                },
            };
            if ea != eb {
                return ea.cmp(&eb);
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        self.merge(rhs, |a, b| a + b)
    }
}

impl std::ops::Div for &Monomial {
    type Output = Monomial;
    fn div(self, rhs: &Monomial) -> Monomial {
        self.merge(rhs, |a, b| a - b)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (idx, (name, e)) in self.named_entries().into_iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
