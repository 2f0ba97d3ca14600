//! The module `K` in the fixed-point basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc as Shared, RwLock};

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::combinatorics::{enumerate_fixed_points, DegreeVector, NTuplePartition, SkewShape};
use crate::field::{LaurentPolynomial, RationalFunction as Rf, Var};
use crate::params::Params;
use crate::shuffle::{skew_assignment, tau_minus, tau_plus, with_perturbation, zeta, ColoredValue, ShuffleError, ShuffleExpr, Sign};

/// A finite linear combination of fixed points.
#[derive(Debug, Clone, Default)]
pub struct KVector {
    coeffs: BTreeMap<NTuplePartition, Rf>,
}

impl KVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(lambda: NTuplePartition) -> Self {
        let mut v = Self::zero();
        v.add_to(lambda, Rf::one());
        v
    }

    pub fn vacuum(n: usize) -> Self {
        Self::basis(NTuplePartition::empty(n).expect("n >= 2"))
    }

    pub fn add_to(&mut self, lambda: NTuplePartition, c: Rf) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&lambda) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(lambda, sum);
        }
    }

    pub fn coeff(&self, lambda: &NTuplePartition) -> Rf {
        self.coeffs.get(lambda).cloned().unwrap_or_else(Rf::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NTuplePartition, &Rf)> {
        self.coeffs.iter()
    }

    pub fn equals(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<_> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter().all(|k| self.coeff(k).equals(&other.coeff(k)))
    }
}

impl Serialize for KVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(&NTuplePartition, String)> = self.coeffs.iter().map(|(k, v)| (k, v.to_string())).collect();
        rows.serialize(s)
    }
}

/// The matrix of an operator from `K_source` to `K_target`; rows are
/// indexed by target fixed points, columns by source fixed points.
#[derive(Debug, Clone)]
pub struct OperatorBlock {
    pub source: DegreeVector,
    pub target: DegreeVector,
    pub sources: Vec<NTuplePartition>,
    pub targets: Vec<NTuplePartition>,
    pub entries: Vec<Vec<Rf>>,
}

impl OperatorBlock {
    pub fn zero(source: DegreeVector, target: DegreeVector, sources: Vec<NTuplePartition>, targets: Vec<NTuplePartition>) -> Self {
        let entries = vec![vec![Rf::zero(); sources.len()]; targets.len()];
        OperatorBlock { source, target, sources, targets, entries }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OperatorBlock) -> OperatorBlock {
        assert_eq!(other.target, self.source, "composing blocks of mismatched degrees");
        let mut out = OperatorBlock::zero(other.source.clone(), self.target.clone(), other.sources.clone(), self.targets.clone());
        for (r, row) in self.entries.iter().enumerate() {
            for c in 0..other.sources.len() {
                let mut acc = Rf::zero();
                for (m, x) in row.iter().enumerate() {
                    if x.is_zero() || other.entries[m][c].is_zero() {
                        continue;
                    }
                    acc = acc.add(&x.mul(&other.entries[m][c]));
                }
                out.entries[r][c] = acc;
            }
        }
        out
    }

    fn combine(&self, other: &OperatorBlock, f: impl Fn(&Rf, &Rf) -> Rf) -> OperatorBlock {
        assert_eq!((&self.source, &self.target), (&other.source, &other.target));
        let mut out = self.clone();
        for (r, row) in out.entries.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = f(x, &other.entries[r][c]);
            }
        }
        out
    }

    pub fn add(&self, other: &OperatorBlock) -> OperatorBlock {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &OperatorBlock) -> OperatorBlock {
        self.combine(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &Rf) -> OperatorBlock {
        let mut out = self.clone();
        for x in out.entries.iter_mut().flatten() {
            *x = x.mul(c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Rf::is_zero)
    }

    /// True when every off-diagonal entry vanishes (same source and target).
    pub fn is_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().enumerate().all(|(c, x)| x.is_zero() || self.targets[r] == self.sources[c]))
    }

    /// Whether the block is `c` times the identity.
    pub fn is_scalar(&self, c: &Rf) -> bool {
        self.source == self.target
            && self.entries.iter().enumerate().all(|(r, row)| {
                row.iter().enumerate().all(|(col, x)| if r == col { x.equals(c) } else { x.is_zero() })
            })
    }

    pub fn equals(&self, other: &OperatorBlock) -> bool {
        self.sub(other).is_zero()
    }
}

impl Serialize for OperatorBlock {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut entries = Vec::new();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    entries.push((&self.targets[r], &self.sources[c], x.to_string()));
                }
            }
        }
        let mut st = s.serialize_struct("OperatorBlock", 3)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("target", &self.target)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// `[ζ(χ_B/z) τ₋(z)]^{-1}` at `z = χ_b`, by a limit when `b ∈ B`.
pub fn inverse_lowering_factor(p: &Params, cells: &[ColoredValue], b: &ColoredValue) -> Result<Rf, ShuffleError> {
    let direct = |z: &ColoredValue| -> Result<Rf, ShuffleError> {
        let mut f = tau_minus(p, &z.value, z.color);
        for c in cells {
            f = f.mul(&zeta(p, &c.value, c.color, &z.value, z.color)?);
        }
        if f.is_zero() {
            return Err(ShuffleError::Singular("lowering factor vanishes".into()));
        }
        Ok(f.inv()?)
    };
    match direct(b) {
        Ok(v) => Ok(v),
        Err(ShuffleError::Singular(_)) => with_perturbation(std::slice::from_ref(b), |moved| direct(&moved[0])),
        Err(e) => Err(e),
    }
}

/// The factor turning `R(λ∖μ)` into the matrix coefficient.
pub fn framing_factor(p: &Params, sign: Sign, lambda: &NTuplePartition, mu: &NTuplePartition) -> Result<Rf, ShuffleError> {
    let skew = SkewShape::new(lambda.clone(), mu.clone())?;
    let boxes = skew_assignment(p, &skew);
    let inv_q = Rf::one().div(p.q())?;
    let mut out = Rf::one();
    match sign {
        Sign::Plus => {
            let inner: Vec<ColoredValue> = mu.cells().iter().map(|c| ColoredValue::of_cell(p, c)).collect();
            for b in &boxes {
                out = out.mul(&inv_q.sub(p.q())).mul(&tau_plus(p, &b.value, b.color));
                for c in &inner {
                    out = out.mul(&zeta(p, &b.value, b.color, &c.value, c.color)?);
                }
            }
        }
        Sign::Minus => {
            let outer: Vec<ColoredValue> = lambda.cells().iter().map(|c| ColoredValue::of_cell(p, c)).collect();
            let damp = Rf::one().sub(&p.q_pow(-2));
            for b in &boxes {
                out = out.mul(&damp).mul(&inverse_lowering_factor(p, &outer, b)?);
            }
        }
    }
    Ok(out)
}

/// `⟨λ|R⁺|μ⟩` for a raising element, `⟨μ|R⁻|λ⟩` for a lowering one.
pub fn matcoeff(p: &Params, r: &ShuffleExpr, lambda: &NTuplePartition, mu: &NTuplePartition) -> Result<Rf, ShuffleError> {
    if !lambda.contains(mu) {
        return Ok(Rf::zero());
    }
    let skew = SkewShape::new(lambda.clone(), mu.clone())?;
    if skew.degree() != *r.degree() {
        return Ok(Rf::zero());
    }
    let value = r.eval(p, &skew_assignment(p, &skew), true)?;
    if value.is_zero() {
        return Ok(value);
    }
    Ok(value.mul(&framing_factor(p, r.sign(), lambda, mu)?))
}

/// `K` over fixed parameters, with a cache of operator blocks.
pub struct KModule {
    params: Params,
    cache: RwLock<HashMap<(String, DegreeVector), Shared<OperatorBlock>>>,
}

impl KModule {
    pub fn new(params: Params) -> Self {
        KModule { params, cache: RwLock::new(HashMap::new()) }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn fixed_points(&self, d: &DegreeVector) -> Vec<NTuplePartition> {
        enumerate_fixed_points(self.n(), d).expect("n >= 2")
    }

    pub fn matcoeff(&self, r: &ShuffleExpr, lambda: &NTuplePartition, mu: &NTuplePartition) -> Result<Rf, ShuffleError> {
        matcoeff(&self.params, r, lambda, mu)
    }

    /// Target degree of `r` acting on `K_source`, if nonnegative.
    pub fn target_degree(r: &ShuffleExpr, source: &DegreeVector) -> Option<DegreeVector> {
        match r.sign() {
            Sign::Plus => Some(source.add(r.degree())),
            Sign::Minus => source.checked_sub(r.degree()),
        }
    }

    pub fn apply(&self, r: &ShuffleExpr, v: &KVector) -> Result<KVector, ShuffleError> {
        let mut out = KVector::zero();
        for (src, c) in v.iter() {
            let Some(target) = Self::target_degree(r, &src.degree()) else { continue };
            for tgt in self.fixed_points(&target) {
                let m = match r.sign() {
                    Sign::Plus => self.matcoeff(r, &tgt, src)?,
                    Sign::Minus => self.matcoeff(r, src, &tgt)?,
                };
                out.add_to(tgt, m.mul(c));
            }
        }
        Ok(out)
    }

    /// The block of `r` on `K_source`, cached by the element's text form.
    pub fn block(&self, r: &ShuffleExpr, source: &DegreeVector) -> Result<Shared<OperatorBlock>, ShuffleError> {
        let key = (r.to_string(), source.clone());
        if let Some(b) = self.cache.read().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let sources = self.fixed_points(source);
        let block = match Self::target_degree(r, source) {
            None => OperatorBlock::zero(source.clone(), source.clone(), sources, Vec::new()),
            Some(target) => {
                let targets = self.fixed_points(&target);
                let entries: Result<Vec<Vec<Rf>>, ShuffleError> = targets
                    .par_iter()
                    .map(|tgt| {
                        sources
                            .iter()
                            .map(|src| match r.sign() {
                                Sign::Plus => self.matcoeff(r, tgt, src),
                                Sign::Minus => self.matcoeff(r, src, tgt),
                            })
                            .collect()
                    })
                    .collect();
                OperatorBlock { source: source.clone(), target, sources, targets, entries: entries? }
            }
        };
        let block = Shared::new(block);
        self.cache.write().unwrap().entry(key).or_insert_with(|| block.clone());
        Ok(block)
    }

    /// `[a, b] = ab − ba` on `K_source`; `None` when a composite leaves the grading.
    pub fn commutator(&self, a: &ShuffleExpr, b: &ShuffleExpr, source: &DegreeVector) -> Result<OperatorBlock, ShuffleError> {
        let ab = self.composite(a, b, source)?;
        let ba = self.composite(b, a, source)?;
        Ok(match (ab, ba) {
            (Some(x), Some(y)) => x.sub(&y),
            (Some(x), None) => x,
            (None, Some(y)) => y.scale(&Rf::from_int(-1)),
            (None, None) => {
                let target = Self::target_degree(a, source)
                    .and_then(|d| Self::target_degree(b, &d))
                    .unwrap_or_else(|| source.clone());
                let (s, t) = (self.fixed_points(source), self.fixed_points(&target));
                OperatorBlock::zero(source.clone(), target, s, t)
            }
        })
    }

    /// `outer ∘ inner` on `K_source`, or `None` if a degree goes negative.
    fn composite(&self, outer: &ShuffleExpr, inner: &ShuffleExpr, source: &DegreeVector) -> Result<Option<OperatorBlock>, ShuffleError> {
        let Some(mid) = Self::target_degree(inner, source) else { return Ok(None) };
        if Self::target_degree(outer, &mid).is_none() {
            return Ok(None);
        }
        let first = self.block(inner, source)?;
        let second = self.block(outer, &mid)?;
        Ok(Some(second.compose(&first)))
    }

    /// The Heisenberg element `P_{±k}`, `k ≥ 1`, on `K_source`, as `k` times
    /// the `x^k` coefficient of the logarithm of the group-like series.
    pub fn heisenberg(&self, sign: Sign, k: u32, source: &DegreeVector) -> Result<Option<OperatorBlock>, ShuffleError> {
        let mut total: Option<OperatorBlock> = None;
        for parts in compositions(k) {
            let r = parts.len() as i64;
            let coeff = Rf::from_ratio(if r % 2 == 1 { 1 } else { -1 } * k as i64, r);
            let mut cur: Option<OperatorBlock> = None;
            let mut degree = source.clone();
            let mut leaves = false;
            for m in parts.iter().rev() {
                let g = ShuffleExpr::group_like(&self.params, sign, *m);
                let Some(next) = Self::target_degree(&g, &degree) else {
                    leaves = true;
                    break;
                };
                let b = self.block(&g, &degree)?;
                cur = Some(match cur {
                    None => (*b).clone(),
                    Some(c) => b.compose(&c),
                });
                degree = next;
            }
            if leaves {
                continue;
            }
            let term = cur.expect("k >= 1").scale(&coeff);
            total = Some(match total {
                None => term,
                Some(t) => t.add(&term),
            });
        }
        Ok(total)
    }

    /// The `z^{∓d}` coefficient of the Cartan series `ψ^±_i(z)` at `λ`.
    pub fn psi_series_coeff(&self, i: usize, d: u32, sign: Sign, lambda: &NTuplePartition) -> Result<Rf, ShuffleError> {
        psi_series_coeff(&self.params, i, d, sign, lambda)
    }
}

/// Compositions of `k` into positive parts.
fn compositions(k: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=k {
        for mut rest in compositions(k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The scalar by which `[P_k, P_{-k}]` acts, with central charge `q^n q̄`.
pub fn heisenberg_scalar(p: &Params, k: i64) -> Rf {
    let n = p.n() as i64;
    let c = p.q_pow(n).mul(p.qb());
    let sym = |x: &Rf| x.pow(k).unwrap().sub(&x.pow(-k).unwrap());
    let qn = p.q_pow(n);
    let num = sym(&qn).mul(&sym(&c)).mul(&Rf::from_int(k));
    let den = sym(p.qb()).mul(&sym(&qn.mul(p.qb())));
    num.div(&den).expect("generic parameters")
}

/// The `z^{∓d}` coefficient of `q^{±i}(u_i^{∓1} − u_i^{±1} z^{∓1}) Π_λ ζ(χ/z)`,
/// expanded around `z^{±1} = ∞`.
pub fn psi_series_coeff(p: &Params, i: usize, d: u32, sign: Sign, lambda: &NTuplePartition) -> Result<Rf, ShuffleError> {
    let z_var = Var::new("z");
    let y_var = Var::new("y");
    let s = sign.as_i64();
    let z = Rf::var(z_var);
    let u = p.u(i as i64);
    let mut f = p
        .q_pow(s * i as i64)
        .mul(&u.pow(-s)?.sub(&u.pow(s)?.mul(&z.pow(-s)?)));
    for c in lambda.cells() {
        let b = ColoredValue::of_cell(p, &c);
        f = f.mul(&zeta(p, &b.value, b.color, &z, i as i64)?);
    }
    // y = z^{∓1}, expanded at y = 0
    let f = f.substitute_var(z_var, &Rf::var(y_var).pow(-s)?)?;
    series_coefficient(&f.numerator(), &f.denominator(), y_var, d as i32)
}

/// The `y^d` coefficient of the Laurent expansion of `num/den` at `y = 0`.
fn series_coefficient(num: &LaurentPolynomial, den: &LaurentPolynomial, y: Var, d: i32) -> Result<Rf, ShuffleError> {
    let (nlo, ncoef) = num.coefficients_in(y);
    let (dlo, dcoef) = den.coefficients_in(y);
    let target = d - (nlo - dlo);
    if target < 0 {
        return Ok(Rf::zero());
    }
    let at = |v: &[LaurentPolynomial], k: usize| v.get(k).map(Rf::from_poly).unwrap_or_else(Rf::zero);
    let lead = at(&dcoef, 0);
    let mut series: Vec<Rf> = Vec::with_capacity(target as usize + 1);
    for k in 0..=target as usize {
        let mut acc = at(&ncoef, k);
        for j in 1..=k {
            if j < dcoef.len() {
                acc = acc.sub(&at(&dcoef, j).mul(&series[k - j]));
            }
        }
        series.push(acc.div(&lead)?);
    }
    Ok(series.pop().unwrap())
}

impl fmt::Display for OperatorBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}
