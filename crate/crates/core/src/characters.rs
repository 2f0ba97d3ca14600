//! Torus characters of K-theory classes restricted to fixed points, and
//! their exterior classes.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

use crate::combinatorics::{
    corners, residue, turns, AlmostStandardTableau, Cell, CornerKind, NTuplePartition, SkewShape, Tableau,
};
use crate::field::{rat, FieldError, Monomial, RationalFunction as Rf, Var};
use crate::params::box_weight_as_color;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("trivial weight with multiplicity {0} and no perturbation variable")]
    TrivialWeight(i64),
    #[error("data does not match the correspondence: {0}")]
    InvalidData(String),
    #[error("odd exponent in {0}; no monomial square root")]
    OddExponent(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A finite sum of torus weights with integer multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CharacterSum {
    terms: BTreeMap<Monomial, i64>,
}

impl CharacterSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, w: Monomial, m: i64) {
        if m == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(m);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += m;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    /// Adds `(1 − q^{-2}) w` with multiplicity `m`.
    fn add_damped(&mut self, w: Monomial, m: i64) {
        let shifted = &w * &Monomial::power(Var::q(), -2);
        self.add_term(w, m);
        self.add_term(shifted, -m);
    }

    pub fn multiplicity(&self, w: &Monomial) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(w, m)| (w, *m))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, m) in other.iter() {
            out.add_term(w.clone(), m);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, m) in other.iter() {
            out.add_term(w.clone(), -m);
        }
        out
    }
}

impl FromIterator<(Monomial, i64)> for CharacterSum {
    fn from_iter<I: IntoIterator<Item = (Monomial, i64)>>(iter: I) -> Self {
        let mut out = CharacterSum::new();
        for (w, m) in iter {
            out.add_term(w, m);
        }
        out
    }
}

impl Serialize for CharacterSum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by(|a, b| a.0.name_cmp(b.0));
        let mut seq = s.serialize_seq(Some(sorted.len()))?;
        for (w, m) in sorted {
            seq.serialize_element(&(w.to_string(), m))?;
        }
        seq.end()
    }
}

impl fmt::Display for CharacterSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

fn q_mono(e: i32) -> Monomial {
    Monomial::power(Var::q(), e)
}

/// `u_i` for any integer index, as a monomial.
pub fn u_monomial(i: i64, n: usize) -> Monomial {
    &Monomial::var(Var::u(residue(i, n))) * &Monomial::power(Var::qb(), -turns(i, n) as i32)
}

/// Weights of the boxes congruent to `color`, read as variables of that color.
fn weights_at(lambda: &NTuplePartition, color: i64) -> Vec<Monomial> {
    weights_of(&lambda.cells(), color, lambda.n())
}

fn weights_of(cells: &[Cell], color: i64, n: usize) -> Vec<Monomial> {
    cells
        .iter()
        .filter(|c| c.residue(n) == residue(color, n))
        .map(|c| box_weight_as_color(c, color, n).unwrap())
        .collect()
}

fn count_at(lambda: &NTuplePartition, color: i64) -> i64 {
    lambda.count_color(color) as i64
}

/// The tautological bundle `V_i` at a fixed point, `1 ≤ i ≤ n`.
pub fn taut_restriction(lambda: &NTuplePartition, i: usize) -> CharacterSum {
    weights_at(lambda, i as i64).into_iter().map(|w| (w, 1)).collect()
}

/// The tangent space at a fixed point.
pub fn tangent_restriction(lambda: &NTuplePartition) -> CharacterSum {
    let n = lambda.n();
    let mut ch = CharacterSum::new();
    for i in 1..=n as i64 {
        let here = weights_at(lambda, i);
        let below = weights_at(lambda, i - 1);
        let u_here = u_monomial(i, n).pow(2);
        let u_next = u_monomial(i + 1, n).pow(2);
        for v in &here {
            for w in &below {
                ch.add_damped(v / w, 1);
            }
            for w in &here {
                ch.add_damped(v / w, -1);
            }
            ch.add_term(v / &u_here, 1);
            ch.add_term(&(&u_next / v) * &q_mono(-2), 1);
        }
    }
    ch
}

/// The Ext-bundle class at the pair of fixed points `(λ, μ)`, with `V` from
/// `λ` and `V'` from `μ`.
pub fn co_bundle_restriction(lambda: &NTuplePartition, mu: &NTuplePartition) -> CharacterSum {
    let n = lambda.n();
    let mut ch = CharacterSum::new();
    for k in 1..=n as i64 {
        let u_here = u_monomial(k, n).pow(2);
        let u_next = u_monomial(k + 1, n).pow(2);
        for v in weights_at(lambda, k) {
            for w in weights_at(mu, k - 1) {
                ch.add_damped(&v / &w, 1);
            }
            for w in weights_at(mu, k) {
                ch.add_damped(&v / &w, -1);
            }
            ch.add_term(&v / &u_here, 1);
        }
        for w in weights_at(mu, k) {
            ch.add_term(&(&u_next / &w) * &q_mono(-2), 1);
        }
    }
    ch
}

/// `Π (1 − w^{-1})^m`. Trivial weights are an error unless `perturb` is
/// given, in which case occurrence `r` of the trivial weight becomes `t^r`.
pub fn exterior_dual(ch: &CharacterSum, perturb: Option<Var>) -> Result<Rf, CharacterError> {
    let mut out = Rf::one();
    for (w, m) in ch.iter() {
        if w.is_one() {
            let Some(t) = perturb else { return Err(CharacterError::TrivialWeight(m)) };
            for r in 1..=m.unsigned_abs() as i32 {
                let f = Rf::one().sub(&Rf::monomial(rat(1, 1), Monomial::power(t, -r)));
                out = out.mul(&f.pow(m.signum())?);
            }
            continue;
        }
        let f = Rf::one().sub(&Rf::monomial(rat(1, 1), w.inv()));
        out = out.mul(&f.pow(m)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correspondence {
    Fine,
    Eccentric,
    Smooth,
}

/// Fixed-point data of a correspondence: a tableau for the fine and
/// eccentric ones, a skew shape made of vertical strips for the smooth one.
#[derive(Debug, Clone, Copy)]
pub enum FixedPointData<'a> {
    Standard(&'a Tableau),
    AlmostStandard(&'a AlmostStandardTableau),
    Strips(&'a SkewShape),
}

impl<'a> FixedPointData<'a> {
    pub fn skew(&self) -> &'a SkewShape {
        match self {
            FixedPointData::Standard(t) => &t.skew,
            FixedPointData::AlmostStandard(a) => &a.tableau.skew,
            FixedPointData::Strips(s) => s,
        }
    }

    fn tableau(&self, kind: Correspondence) -> Result<&'a Tableau, CharacterError> {
        match (kind, self) {
            (Correspondence::Fine, FixedPointData::Standard(t)) => Ok(t),
            (Correspondence::Eccentric, FixedPointData::AlmostStandard(a)) => Ok(&a.tableau),
            _ => Err(CharacterError::InvalidData(format!("{kind:?} needs its own kind of tableau"))),
        }
    }
}

/// Label weights `χ_a` of a tableau, each read at color `a`.
pub fn label_weights(t: &Tableau) -> Vec<Monomial> {
    let n = t.skew.n();
    t.arc.colors().map(|a| box_weight_as_color(&t.cell(a), a, n).unwrap()).collect()
}

fn pairing(k: &[i64], other: &[i64]) -> i64 {
    let n = k.len();
    (0..n).map(|i| k[i] * other[i] - k[i] * other[(i + 1) % n]).sum()
}

fn degree_counts(lambda: &NTuplePartition) -> Vec<i64> {
    (1..=lambda.n() as i64).map(|a| count_at(lambda, a)).collect()
}

/// The virtual tangent space of a correspondence at a fixed point, relative
/// to the tangent space of the target.
pub fn virtual_tangent(kind: Correspondence, sign: i64, data: FixedPointData) -> Result<CharacterSum, CharacterError> {
    match kind {
        Correspondence::Smooth => {
            let FixedPointData::Strips(skew) = data else {
                return Err(CharacterError::InvalidData("smooth needs a strip pair".into()));
            };
            Ok(smooth_tangent(skew, sign))
        }
        _ => Ok(tableau_tangent(data.tableau(kind)?, sign, kind == Correspondence::Eccentric)),
    }
}

fn tableau_tangent(t: &Tableau, sign: i64, eccentric: bool) -> CharacterSum {
    let n = t.skew.n();
    let (lambda, mu) = (t.skew.outer(), t.skew.inner());
    let (i, j) = (t.arc.i, t.arc.j);
    let chi = label_weights(t);
    let l = |a: i64| &chi[(a - i) as usize];
    // label `b` read at color `a`
    let read = |b: i64, a: i64| box_weight_as_color(&t.cell(b), a, n).unwrap();
    let mut ch = CharacterSum::new();
    ch.add_term(Monomial::one(), i - j);
    for a in i..j {
        if sign > 0 {
            for v in weights_at(lambda, a) {
                ch.add_damped(&v / l(a), 1);
            }
            for v in weights_at(lambda, a + 1) {
                ch.add_damped(&v / l(a), -1);
            }
        } else {
            for v in weights_at(mu, a) {
                ch.add_damped(l(a) / &v, -1);
            }
            for v in weights_at(mu, a - 1) {
                ch.add_damped(l(a) / &v, 1);
            }
        }
    }
    let congruent = |x: i64, y: i64| (x - y).rem_euclid(n as i64) == 0;
    for a in i..j {
        for b in a + 1..j {
            if !eccentric {
                if congruent(a, b) {
                    ch.add_damped(&read(b, a) / l(a), -1);
                }
                if congruent(b, a + 1) {
                    ch.add_damped(&read(b, a + 1) / l(a), 1);
                }
            } else {
                if congruent(a, b) {
                    ch.add_damped(&read(a, b) / l(b), -1);
                }
                if congruent(a, b + 1) {
                    ch.add_damped(&read(a, b + 1) / l(b), 1);
                }
            }
        }
    }
    for a in i + 1..j {
        let shift = if eccentric { Monomial::one() } else { q_mono(-2) };
        ch.add_term(&(l(a) / l(a - 1)) * &shift, 1);
    }
    for a in i..j {
        if sign > 0 {
            ch.add_term(&(&u_monomial(a + 1, n).pow(2) / l(a)) * &q_mono(-2), -1);
        } else {
            ch.add_term(l(a) / &u_monomial(a, n).pow(2), 1);
        }
    }
    ch
}

fn smooth_tangent(skew: &SkewShape, sign: i64) -> CharacterSum {
    let n = skew.n();
    let (lambda, mu) = (skew.outer(), skew.inner());
    let cells = skew.cells();
    let strip = |c: i64| weights_of(&cells, c, n);
    let mut ch = CharacterSum::new();
    for i in 1..=n as i64 {
        if sign > 0 {
            for v in weights_at(lambda, i) {
                for l in strip(i) {
                    ch.add_damped(&v / &l, 1);
                }
                for l in strip(i - 1) {
                    ch.add_damped(&v / &l, -1);
                }
            }
            for l in strip(i) {
                ch.add_term(&(&u_monomial(i + 1, n).pow(2) / &l) * &q_mono(-2), -1);
            }
        } else {
            for v in weights_at(mu, i) {
                for l in strip(i + 1) {
                    ch.add_damped(&l / &v, 1);
                }
                for l in strip(i) {
                    ch.add_damped(&l / &v, -1);
                }
            }
            for l in strip(i) {
                ch.add_term(&l / &u_monomial(i, n).pow(2), 1);
            }
        }
        for l in strip(i) {
            for l2 in strip(i - 1) {
                ch.add_term(&l / &l2, 1);
            }
            for l2 in strip(i) {
                ch.add_term(&l / &l2, -1);
            }
        }
    }
    ch
}

fn signed(sign: i64, m: Monomial) -> Rf {
    Rf::monomial(rat(sign, 1), m)
}

/// The scalar adjustment of the virtual structure sheaf at a fixed point.
pub fn adjusted_class(kind: Correspondence, sign: i64, data: FixedPointData) -> Result<Rf, CharacterError> {
    if kind == Correspondence::Smooth {
        let FixedPointData::Strips(skew) = data else {
            return Err(CharacterError::InvalidData("smooth needs a strip pair".into()));
        };
        return Ok(smooth_adjustment(skew, sign));
    }
    let eccentric = kind == Correspondence::Eccentric;
    let t = data.tableau(kind)?;
    let n = t.skew.n();
    let (lambda, mu) = (t.skew.outer(), t.skew.inner());
    let (i, j) = (t.arc.i, t.arc.j);
    let chi = label_weights(t);
    let mut c = Monomial::one();
    let mut sgn = 1;
    if sign > 0 {
        for a in i..j {
            c = &c * &u_monomial(residue(a, n) as i64 + 1, n);
        }
        c = &c * &q_mono(-(count_at(lambda, i) - count_at(lambda, j)) as i32);
    } else {
        for a in i..j {
            let r = residue(a, n) as i64;
            let shift = Monomial::power(Var::qb(), 2 * (turns(a, n) - turns(r, n)) as i32);
            c = &c * &(&u_monomial(r, n) / &(&chi[(a - i) as usize] * &shift));
        }
        c = &c * &q_mono(-(count_at(mu, i - 1) - count_at(mu, j - 1)) as i32);
    }
    let len = j - i;
    if !eccentric {
        if (len - 1) % 2 != 0 {
            sgn = -sgn;
        }
        let ceil = (len + n as i64 - 1) / n as i64;
        c = &(&c * &chi[0]) / &chi[chi.len() - 1];
        c = &c * &q_mono((ceil - 2) as i32);
    } else {
        c = &c * &q_mono((-len - len / n as i64) as i32);
    }
    Ok(signed(sgn, c))
}

fn smooth_adjustment(skew: &SkewShape, sign: i64) -> Rf {
    let n = skew.n();
    let d_outer = degree_counts(skew.outer());
    let d_inner = degree_counts(skew.inner());
    let k: Vec<i64> = d_outer.iter().zip(&d_inner).map(|(a, b)| a - b).collect();
    let total: i64 = k.iter().sum();
    let mut c = Monomial::one();
    if sign > 0 {
        for (idx, ki) in k.iter().enumerate() {
            c = &c * &u_monomial(idx as i64 + 2, n).pow(*ki as i32);
        }
        return signed(1, &c * &q_mono(-(total + pairing(&k, &d_outer)) as i32));
    }
    for (idx, ki) in k.iter().enumerate() {
        c = &c * &u_monomial(idx as i64 + 1, n).pow(*ki as i32);
    }
    let diff: Vec<i64> = d_inner.iter().zip(&d_outer).map(|(a, b)| a - b).collect();
    c = &c * &q_mono(-pairing(&d_inner, &diff) as i32);
    for cell in skew.cells() {
        c = &c / &box_weight_as_color(&cell, cell.residue(n) as i64, n).unwrap();
    }
    signed(if total % 2 == 0 { 1 } else { -1 }, c)
}

/// The adjusted class of the Ext-bundle correspondence at `(λ, μ)`, before
/// division by the tangent class.
pub fn co_bundle_adjustment(lambda: &NTuplePartition, mu: &NTuplePartition) -> Rf {
    let n = lambda.n();
    let d = degree_counts(lambda);
    let k: Vec<i64> = d.iter().zip(degree_counts(mu)).map(|(a, b)| a - b).collect();
    let mut c = q_mono(pairing(&d, &k) as i32);
    for (idx, ki) in k.iter().enumerate() {
        c = &c * &Monomial::power(Var::u(idx + 1), *ki as i32);
    }
    for a in 1..=n as i64 {
        for v in weights_at(mu, a) {
            c = &c * &v;
        }
        for v in weights_at(lambda, a) {
            c = &c / &v;
        }
    }
    let total: i64 = k.iter().sum();
    signed(if total % 2 == 0 { 1 } else { -1 }, c)
}

fn half_weight(c: &Cell, color: i64, n: usize) -> Result<Rf, CharacterError> {
    let w = box_weight_as_color(c, color, n).expect("congruent color");
    let s = w.sqrt().ok_or_else(|| CharacterError::OddExponent(w.to_string()))?;
    Ok(Rf::monomial(rat(1, 1), s))
}

/// `ζ(z/χ_λ) τ₊(z)` for `z` of color `i`, as a product over corners.
pub fn gamma_plus(lambda: &NTuplePartition, i: i64, z: &Rf) -> Result<Rf, CharacterError> {
    let n = lambda.n();
    let q = Rf::var(Var::q());
    let mut out = Rf::one();
    for c in corners(lambda, CornerKind::Inner, i + 1) {
        let s = half_weight(&c, i + 1, n)?;
        out = out.mul(&s.div(&q)?.sub(&z.mul(&q).div(&s)?));
    }
    for c in corners(lambda, CornerKind::Outer, i) {
        let s = half_weight(&c, i, n)?;
        out = out.div(&s.sub(&z.div(&s)?))?;
    }
    Ok(out)
}

/// `[ζ(χ_λ/z) τ₋(z)]^{-1}` for `z` of color `i`, as a product over corners.
pub fn gamma_minus(lambda: &NTuplePartition, i: i64, z: &Rf) -> Result<Rf, CharacterError> {
    let n = lambda.n();
    let q = Rf::var(Var::q());
    let mut out = Rf::one();
    for c in corners(lambda, CornerKind::Outer, i - 1) {
        let sq = half_weight(&c, i - 1, n)?.mul(&q);
        out = out.mul(&sq.sub(&z.div(&sq)?));
    }
    for c in corners(lambda, CornerKind::Inner, i) {
        let s = half_weight(&c, i, n)?;
        out = out.div(&s.sub(&z.div(&s)?))?;
    }
    Ok(out)
}
