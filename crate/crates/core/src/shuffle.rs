//! Shuffle algebra elements as color-symmetric rational functions, their
//! evaluation at colored points, and shuffle products.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc as Shared;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::combinatorics::{residue, turns, Cell, CombinatoricsError, DegreeVector, SkewShape};
use crate::field::{parse_poly, FieldError, LaurentPolynomial, Monomial, RationalFunction as Rf, Var};
use crate::params::Params;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error("assignment colors {got} do not match degree {want}")]
    DegreeMismatch { want: DegreeVector, got: DegreeVector },
    #[error("factors of a product must have the same sign")]
    SignMismatch,
    #[error("evaluation is singular at this point: {0}")]
    Singular(String),
    #[error("not of the expected pole shape; obstructing factor {0}")]
    PoleShape(String),
    #[error("cannot parse shuffle expression {0:?}: {1}")]
    Parse(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A value carried by a variable of integer color `color`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredValue {
    pub value: Rf,
    pub color: i64,
}

impl ColoredValue {
    pub fn new(value: Rf, color: i64) -> Self {
        ColoredValue { value, color }
    }

    /// The weight of a box at the box's own color.
    pub fn of_cell(p: &Params, c: &Cell) -> Self {
        ColoredValue { value: p.cell_value(c), color: c.color() }
    }
}

pub type Assignment = Vec<ColoredValue>;

/// Weights of the boxes of a skew shape.
pub fn skew_assignment(p: &Params, skew: &SkewShape) -> Assignment {
    skew.cells().iter().map(|c| ColoredValue::of_cell(p, c)).collect()
}

pub fn assignment_degree(n: usize, a: &[ColoredValue]) -> DegreeVector {
    let mut d = vec![0; n];
    for v in a {
        d[residue(v.color, n) - 1] += 1;
    }
    DegreeVector(d)
}

/// The kernel `ζ(z/w)` for variables of colors `z_color`, `w_color`.
pub fn zeta(p: &Params, z: &Rf, z_color: i64, w: &Rf, w_color: i64) -> Result<Rf, ShuffleError> {
    let n = p.n() as i64;
    let diff = z_color - w_color;
    let exponent = (diff.rem_euclid(n) == 0) as i64 - ((diff + 1).rem_euclid(n) == 0) as i64;
    if exponent == 0 {
        return Ok(Rf::one());
    }
    // ceil(diff / n)
    let s = p.qb_pow(2 * (-((-diff).div_euclid(n))));
    let zs = z.mul(&s);
    let w_over_q = w.div(p.q())?;
    let num = zs.mul(p.q()).sub(&w_over_q);
    let den = zs.sub(w);
    let (num, den) = if exponent > 0 { (num, den) } else { (den, num) };
    if den.is_zero() {
        return Err(ShuffleError::Singular(format!("zeta at colors {z_color}, {w_color}")));
    }
    Ok(num.div(&den)?)
}

/// `u_{i+1}/q − z q/u_{i+1}` for a variable of color `color`, computed in the residue frame.
pub fn tau_plus(p: &Params, z: &Rf, color: i64) -> Rf {
    let r = p.residue(color) as i64;
    let zr = p.recolor(z, color, r);
    let u = p.u(r + 1);
    u.div(p.q()).unwrap().sub(&zr.mul(p.q()).div(&u).unwrap())
}

/// `u_i − z/u_i` for a variable of color `color`, computed in the residue frame.
pub fn tau_minus(p: &Params, z: &Rf, color: i64) -> Rf {
    let r = p.residue(color) as i64;
    let zr = p.recolor(z, color, r);
    let u = p.u(r);
    u.sub(&zr.div(&u).unwrap())
}

/// Product of `τ±` over an assignment.
pub fn tau(p: &Params, sign: Sign, a: &[ColoredValue]) -> Rf {
    a.iter()
        .map(|v| match sign {
            Sign::Plus => tau_plus(p, &v.value, v.color),
            Sign::Minus => tau_minus(p, &v.value, v.color),
        })
        .product()
}

/// A Laurent polynomial in the slot variables `z_a` (named `z<a>`, one per
/// color `a` of an arc) with coefficients that may involve `q`, `qb`, `u_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlotPolynomial {
    poly: LaurentPolynomial,
}

impl SlotPolynomial {
    pub fn one() -> Self {
        SlotPolynomial { poly: LaurentPolynomial::one() }
    }

    /// `Π z_a^{e_a}` over the colors `start, start+1, …`.
    pub fn monomial(start: i64, exponents: &[i32]) -> Self {
        let m = Monomial::from_pairs(
            exponents.iter().enumerate().map(|(k, &e)| (slot_var(start + k as i64), e)),
        );
        SlotPolynomial { poly: LaurentPolynomial::term(1.into(), m) }
    }

    pub fn parse(text: &str) -> Result<Self, FieldError> {
        Ok(SlotPolynomial { poly: parse_poly(text)? })
    }

    pub fn is_one(&self) -> bool {
        self.poly.is_one()
    }

    /// Slot colors mentioned by the polynomial.
    pub fn colors(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .poly
            .terms()
            .iter()
            .flat_map(|(m, _)| m.vars().filter_map(slot_color).collect::<Vec<_>>())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Evaluates at slot values `z[a - start]`.
    pub fn eval(&self, p: &Params, start: i64, z: &[Rf]) -> Result<Rf, ShuffleError> {
        let mut total = Rf::zero();
        for (m, c) in self.poly.terms() {
            let mut term = Rf::from_rational(c.clone().into());
            for (v, e) in m.iter() {
                let base = match slot_color(v) {
                    Some(a) => z
                        .get((a - start) as usize)
                        .filter(|_| a >= start)
                        .ok_or_else(|| ShuffleError::Parse(self.to_string(), format!("z{a} outside the arc")))?
                        .clone(),
                    None => parameter_value(p, v)?,
                };
                term = term.mul(&base.pow(e as i64)?);
            }
            total = total.add(&term);
        }
        Ok(total)
    }
}

impl fmt::Display for SlotPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

fn slot_var(a: i64) -> Var {
    Var::new(&format!("z{a}"))
}

fn slot_color(v: Var) -> Option<i64> {
    v.name().strip_prefix('z').and_then(|s| s.parse().ok())
}

fn parameter_value(p: &Params, v: Var) -> Result<Rf, ShuffleError> {
    let name = v.name();
    if v == Var::q() {
        return Ok(p.q().clone());
    }
    if v == Var::qb() {
        return Ok(p.qb().clone());
    }
    if let Some(k) = name.strip_prefix('u').and_then(|s| s.parse::<i64>().ok()) {
        return Ok(p.u(k));
    }
    Err(ShuffleError::Parse(name.to_string(), "unknown coefficient variable".into()))
}

/// A color-symmetric function given by a closure.
pub type ExplicitFn = dyn Fn(&Params, &[ColoredValue]) -> Result<Rf, ShuffleError> + Send + Sync;

#[derive(Clone)]
pub enum Node {
    /// `z^d` in a single variable of color `color`.
    Power { color: i64, exponent: i32 },
    /// `Sym[m(z) / Π(1 − z_a/(z_{a−1}q²)) · Π_{a<b} ζ(z_b/z_a)]` over colors `i..j`.
    S { i: i64, j: i64, m: SlotPolynomial },
    /// `Sym[m(z) / Π(1 − z_{a−1}/z_a) · Π_{a<b} ζ(z_a/z_b)]` over colors `i..j`.
    T { i: i64, j: i64, m: SlotPolynomial },
    /// The group-like elements with degree `k`.
    G { k: DegreeVector },
    /// A constant function in the given degree.
    Constant { value: Rf },
    Product(Box<ShuffleExpr>, Box<ShuffleExpr>),
    Explicit { label: String, f: Shared<ExplicitFn> },
}

/// A shuffle algebra element with its sign and degree.
#[derive(Clone)]
pub struct ShuffleExpr {
    sign: Sign,
    degree: DegreeVector,
    node: Node,
}

fn interval_degree(n: usize, i: i64, j: i64) -> DegreeVector {
    let mut d = vec![0; n];
    for a in i..j {
        d[residue(a, n) - 1] += 1;
    }
    DegreeVector(d)
}

impl ShuffleExpr {
    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn degree(&self) -> &DegreeVector {
        &self.degree
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn n(&self) -> usize {
        self.degree.n()
    }

    pub fn power(sign: Sign, n: usize, color: i64, exponent: i32) -> Self {
        let c = residue(color, n) as i64;
        ShuffleExpr { sign, degree: interval_degree(n, c, c + 1), node: Node::Power { color: c, exponent } }
    }

    pub fn make_s(sign: Sign, n: usize, i: i64, j: i64, m: SlotPolynomial) -> Result<Self, ShuffleError> {
        check_interval(i, j, &m)?;
        Ok(ShuffleExpr { sign, degree: interval_degree(n, i, j), node: Node::S { i, j, m } })
    }

    pub fn make_t(sign: Sign, n: usize, i: i64, j: i64, m: SlotPolynomial) -> Result<Self, ShuffleError> {
        check_interval(i, j, &m)?;
        Ok(ShuffleExpr { sign, degree: interval_degree(n, i, j), node: Node::T { i, j, m } })
    }

    /// The root generator `E_{[i;j)} = S⁺_1`.
    pub fn make_e(n: usize, i: i64, j: i64) -> Result<Self, ShuffleError> {
        Self::make_s(Sign::Plus, n, i, j, SlotPolynomial::one())
    }

    /// The root generator `F_{[i;j)} = T⁻_1`.
    pub fn make_f(n: usize, i: i64, j: i64) -> Result<Self, ShuffleError> {
        Self::make_t(Sign::Minus, n, i, j, SlotPolynomial::one())
    }

    pub fn make_g(sign: Sign, k: DegreeVector) -> Self {
        ShuffleExpr { sign, degree: k.clone(), node: Node::G { k } }
    }

    /// `q̄^{m²} G_{±(m,…,m)}`, the coefficients of the exponential generating series.
    pub fn group_like(p: &Params, sign: Sign, m: u32) -> Self {
        let g = Self::make_g(sign, DegreeVector(vec![m; p.n()]));
        Self::constant(sign, DegreeVector::zero(p.n()), p.qb_pow((m * m) as i64)).times(&g).unwrap()
    }

    pub fn constant(sign: Sign, degree: DegreeVector, value: Rf) -> Self {
        ShuffleExpr { sign, degree, node: Node::Constant { value } }
    }

    pub fn one(sign: Sign, n: usize) -> Self {
        Self::constant(sign, DegreeVector::zero(n), Rf::one())
    }

    pub fn explicit(sign: Sign, degree: DegreeVector, label: &str, f: Shared<ExplicitFn>) -> Self {
        ShuffleExpr { sign, degree, node: Node::Explicit { label: label.to_string(), f } }
    }

    /// The shuffle product `self * other`.
    pub fn times(&self, other: &ShuffleExpr) -> Result<Self, ShuffleError> {
        if self.sign != other.sign {
            return Err(ShuffleError::SignMismatch);
        }
        Ok(ShuffleExpr {
            sign: self.sign,
            degree: self.degree.add(&other.degree),
            node: Node::Product(Box::new(self.clone()), Box::new(other.clone())),
        })
    }

    /// Parses the textual form, e.g. `S+:[1;3):m=z1^0`, `T-:[2;5):m=1`,
    /// `G+:(1,1)`, `E:[1;2)`, `F:[1;3)`, `z:i=2,d=-1`, `prod(A,B)`.
    pub fn parse(text: &str, n: usize) -> Result<Self, ShuffleError> {
        parse_expr(text.trim(), n)
    }

    /// Evaluation at a colored point, with the `t`-perturbation fallback when
    /// `perturb` is set and the unperturbed sum has a singular term.
    pub fn eval(&self, p: &Params, a: &[ColoredValue], perturb: bool) -> Result<Rf, ShuffleError> {
        self.check_degree(p, a)?;
        match self.eval_raw(p, a) {
            Err(ShuffleError::Singular(_)) | Err(ShuffleError::Field(FieldError::DivisionByZero)) if perturb => {
                with_perturbation(a, |moved| self.eval_raw(p, moved))
            }
            other => other,
        }
    }

    fn check_degree(&self, p: &Params, a: &[ColoredValue]) -> Result<(), ShuffleError> {
        let got = assignment_degree(p.n(), a);
        if got != self.degree {
            return Err(ShuffleError::DegreeMismatch { want: self.degree.clone(), got });
        }
        Ok(())
    }

    /// Evaluation without perturbation; singular terms raise errors.
    pub fn eval_raw(&self, p: &Params, a: &[ColoredValue]) -> Result<Rf, ShuffleError> {
        self.check_degree(p, a)?;
        match &self.node {
            Node::Power { exponent, color } => {
                let v = &a[0];
                Ok(p.recolor(&v.value, v.color, *color).pow(*exponent as i64)?)
            }
            Node::S { i, j, m } => {
                let colors: Vec<i64> = (*i..*j).collect();
                let mut total = Rf::zero();
                for z in slot_values(p, &colors, a)? {
                    total = total.add(&m.eval(p, *i, &z)?.mul(&s_weight(p, &colors, &z)?));
                }
                Ok(total)
            }
            Node::T { i, j, m } => {
                let colors: Vec<i64> = (*i..*j).collect();
                let mut total = Rf::zero();
                for z in slot_values(p, &colors, a)? {
                    total = total.add(&m.eval(p, *i, &z)?.mul(&t_weight(p, &colors, &z)?));
                }
                Ok(total)
            }
            Node::G { k } => g_value(p, self.sign, k, a),
            Node::Constant { value } => Ok(value.clone()),
            Node::Product(left, right) => product_eval(p, left, right, a),
            Node::Explicit { f, .. } => f(p, a),
        }
    }

    /// Shuffle product evaluated at a point: `eval(self * other, a)`.
    pub fn product_eval(&self, other: &ShuffleExpr, p: &Params, a: &[ColoredValue]) -> Result<Rf, ShuffleError> {
        self.times(other)?.eval(p, a, true)
    }
}

fn check_interval(i: i64, j: i64, m: &SlotPolynomial) -> Result<(), ShuffleError> {
    if j < i {
        return Err(CombinatoricsError::InvalidArc(i, j).into());
    }
    if let Some(a) = m.colors().into_iter().find(|a| *a < i || *a >= j) {
        return Err(ShuffleError::Parse(m.to_string(), format!("z{a} outside [{i};{j})")));
    }
    Ok(())
}

/// Evaluates `f` at the point moved to `value · t^δ`, cancels, and sets
/// `t = 1`; retries with other exponent patterns if the first is degenerate.
pub fn with_perturbation(
    a: &[ColoredValue],
    f: impl Fn(&[ColoredValue]) -> Result<Rf, ShuffleError>,
) -> Result<Rf, ShuffleError> {
    const PRIMES: [i64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let patterns: [&dyn Fn(usize) -> i64; 3] =
        [&|idx| idx as i64 + 1, &|idx| 1 << idx, &|idx| PRIMES[idx % PRIMES.len()] * (1 + (idx / PRIMES.len()) as i64)];
    let t = Rf::var(Var::t());
    let mut last = None;
    for delta in patterns {
        let moved: Vec<ColoredValue> = a
            .iter()
            .enumerate()
            .map(|(idx, v)| ColoredValue { value: v.value.mul(&t.pow(delta(idx)).unwrap()), color: v.color })
            .collect();
        let outcome = f(&moved).and_then(|r| Ok(r.limit_at_one(Var::t())?));
        match outcome {
            Ok(r) => return Ok(r),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// For each bijection between slots and assigned values preserving residue
/// colors, the slot values recolored to the slot colors.
pub fn slot_values(p: &Params, slot_colors: &[i64], a: &[ColoredValue]) -> Result<Vec<Vec<Rf>>, ShuffleError> {
    let n = p.n();
    let mut by_residue: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (s, &c) in slot_colors.iter().enumerate() {
        by_residue.entry(residue(c, n)).or_default().0.push(s);
    }
    for (v, cv) in a.iter().enumerate() {
        by_residue.entry(residue(cv.color, n)).or_default().1.push(v);
    }
    if by_residue.values().any(|(s, v)| s.len() != v.len()) {
        let want = DegreeVector(
            (1..=n).map(|r| by_residue.get(&r).map_or(0, |(s, _)| s.len() as u32)).collect(),
        );
        return Err(ShuffleError::DegreeMismatch { want, got: assignment_degree(n, a) });
    }
    let groups: Vec<(Vec<usize>, Vec<Vec<usize>>)> =
        by_residue.into_values().map(|(slots, vals)| (slots, permutations(&vals))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; groups.len()];
    loop {
        let mut z = vec![Rf::zero(); slot_colors.len()];
        for (g, (slots, perms)) in groups.iter().enumerate() {
            for (s, &v) in slots.iter().zip(&perms[choice[g]]) {
                z[*s] = p.recolor(&a[v].value, a[v].color, slot_colors[*s]);
            }
        }
        out.push(z);
        // odometer over the per-residue permutations
        let mut g = 0;
        loop {
            if g == groups.len() {
                return Ok(out);
            }
            choice[g] += 1;
            if choice[g] < groups[g].1.len() {
                break;
            }
            choice[g] = 0;
            g += 1;
        }
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for idx in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(idx);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn one_minus_ratio(p: &Params, num: &Rf, den: &Rf, what: &str) -> Result<Rf, ShuffleError> {
    let d = Rf::one().sub(&num.div(den)?);
    if d.is_zero() {
        return Err(ShuffleError::Singular(what.to_string()));
    }
    let _ = p;
    Ok(d)
}

/// The summand of `S_m` without `m`.
pub fn s_weight(p: &Params, colors: &[i64], z: &[Rf]) -> Result<Rf, ShuffleError> {
    let q2 = p.q_pow(2);
    let mut w = Rf::one();
    for a in 1..z.len() {
        w = w.div(&one_minus_ratio(p, &z[a], &z[a - 1].mul(&q2), "1 - z_a/(z_{a-1} q^2)")?)?;
    }
    for a in 0..z.len() {
        for b in a + 1..z.len() {
            w = w.mul(&zeta(p, &z[b], colors[b], &z[a], colors[a])?);
        }
    }
    Ok(w)
}

/// The summand of `T_m` without `m`.
pub fn t_weight(p: &Params, colors: &[i64], z: &[Rf]) -> Result<Rf, ShuffleError> {
    let mut w = Rf::one();
    for a in 1..z.len() {
        w = w.div(&one_minus_ratio(p, &z[a - 1], &z[a], "1 - z_{a-1}/z_a")?)?;
    }
    for a in 0..z.len() {
        for b in a + 1..z.len() {
            w = w.mul(&zeta(p, &z[a], colors[a], &z[b], colors[b])?);
        }
    }
    Ok(w)
}

/// The group-like element of degree `k` at a point; the point is first
/// moved to residue colors.
fn g_value(p: &Params, sign: Sign, k: &DegreeVector, a: &[ColoredValue]) -> Result<Rf, ShuffleError> {
    let n = p.n();
    let mut by_color: Vec<Vec<Rf>> = vec![Vec::new(); n + 1];
    for v in a {
        let r = p.residue(v.color);
        by_color[r].push(p.recolor(&v.value, v.color, r as i64));
    }
    let q = p.q();
    let inv_q = Rf::one().div(q)?;
    let prefactor = match sign {
        Sign::Plus => inv_q.sub(q),
        Sign::Minus => Rf::one().sub(&p.q_pow(-2)),
    };
    let mut out = prefactor.pow(-(k.total() as i64))?;
    let factor = |za: &Rf, zb: &Rf| -> Result<Rf, ShuffleError> { Ok(inv_q.sub(&za.mul(q).div(zb)?)) };
    for i in 1..=n {
        for za in &by_color[i] {
            for zb in &by_color[i] {
                out = out.mul(&factor(za, zb)?);
            }
            for zb in &by_color[i % n + 1] {
                let zb = if i < n { zb.clone() } else { zb.mul(&p.qb_pow(-2)) };
                let f = factor(za, &zb)?;
                if f.is_zero() {
                    return Err(ShuffleError::Singular("group-like denominator".into()));
                }
                out = out.div(&f)?;
            }
        }
    }
    Ok(out)
}

/// `Σ_{A ⊔ B} R1(A) R2(B) Π_{a∈A, b∈B} ζ(a/b)` over splits with `deg A = deg R1`.
fn product_eval(p: &Params, left: &ShuffleExpr, right: &ShuffleExpr, a: &[ColoredValue]) -> Result<Rf, ShuffleError> {
    let mut total = Rf::zero();
    for (sa, sb) in splits(p.n(), a, left.degree()) {
        let cross = cross_zeta(p, &sa, &sb)?;
        if cross.is_zero() {
            continue;
        }
        let l = left.eval_raw(p, &sa)?;
        if l.is_zero() {
            continue;
        }
        total = total.add(&l.mul(&right.eval_raw(p, &sb)?).mul(&cross));
    }
    Ok(total)
}

fn cross_zeta(p: &Params, sa: &[ColoredValue], sb: &[ColoredValue]) -> Result<Rf, ShuffleError> {
    let mut cross = Rf::one();
    for x in sa {
        for y in sb {
            cross = cross.mul(&zeta(p, &x.value, x.color, &y.value, y.color)?);
            if cross.is_zero() {
                return Ok(cross);
            }
        }
    }
    Ok(cross)
}

/// All ways to split the point into a part of degree `d` and the rest.
fn splits(n: usize, a: &[ColoredValue], d: &DegreeVector) -> Vec<(Assignment, Assignment)> {
    let mut out = Vec::new();
    let total = d.total() as usize;
    if total > a.len() {
        return out;
    }
    for mask in 0u32..(1 << a.len()) {
        if mask.count_ones() as usize != total {
            continue;
        }
        let (mut sa, mut sb) = (Vec::new(), Vec::new());
        for (idx, v) in a.iter().enumerate() {
            if mask & (1 << idx) != 0 {
                sa.push(v.clone());
            } else {
                sb.push(v.clone());
            }
        }
        if assignment_degree(n, &sa) == *d {
            out.push((sa, sb));
        }
    }
    out
}

/// `Σ_{A ⊔ B = λ∖μ} R1(A) R2(B) ζ(χ_A/χ_B)` over splits of the skew boxes,
/// skipping splits whose cross factor vanishes.
pub fn skew_split_eval(p: &Params, left: &ShuffleExpr, right: &ShuffleExpr, skew: &SkewShape) -> Result<Rf, ShuffleError> {
    if left.sign != right.sign {
        return Err(ShuffleError::SignMismatch);
    }
    let a = skew_assignment(p, skew);
    let wanted = left.degree.add(&right.degree);
    if assignment_degree(p.n(), &a) != wanted {
        return Err(ShuffleError::DegreeMismatch { want: wanted, got: assignment_degree(p.n(), &a) });
    }
    let pruned = || -> Result<Rf, ShuffleError> {
        let mut total = Rf::zero();
        for (sa, sb) in splits(p.n(), &a, left.degree()) {
            let cross = cross_zeta(p, &sa, &sb)?;
            if cross.is_zero() {
                continue;
            }
            total = total.add(&left.eval(p, &sa, true)?.mul(&right.eval(p, &sb, true)?).mul(&cross));
        }
        Ok(total)
    };
    match pruned() {
        Err(ShuffleError::Singular(_)) | Err(ShuffleError::Field(FieldError::DivisionByZero)) => {
            with_perturbation(&a, |moved| product_eval(p, left, right, moved))
        }
        other => other,
    }
}

/// Checks that `R` has the pole shape of the shuffle algebra and that the
/// numerator satisfies the wheel conditions, for `trials` random draws of
/// the parameters.
pub fn wheel_check(expr: &ShuffleExpr, trials: u32, seed: u64) -> Result<bool, ShuffleError> {
    let n = expr.n();
    let k = expr.degree().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let var = |r: usize, a: u32| Var::new(&format!("w{r}_{a}"));
    for _ in 0..trials {
        let p = Params::random(n, &mut rng)?;
        let mut point = Vec::new();
        for r in 1..=n {
            for a in 1..=k.0[r - 1] {
                point.push(ColoredValue::new(Rf::var(var(r, a)), r as i64));
            }
        }
        let value = expr.eval_raw(&p, &point)?;
        let q = p.q();
        let mut numerator = value;
        for r in 1..=n {
            let next = r % n + 1;
            for a in 1..=k.0[r - 1] {
                for b in 1..=k.0[next - 1] {
                    let zb = Rf::var(var(next, b));
                    let zb = if r < n { zb } else { zb.mul(&p.qb_pow(-2)) };
                    let f = Rf::var(var(r, a)).mul(q).sub(&zb.div(q)?);
                    numerator = numerator.mul(&f);
                }
            }
        }
        if let Some((bad, _)) = numerator.factors().find(|(_, e)| *e < 0) {
            return Err(ShuffleError::PoleShape(bad.to_string()));
        }
        let w = Rf::var(Var::new("w"));
        for i in 1..=n {
            if k.0[i - 1] < 2 {
                continue;
            }
            for (q_exp, neighbour) in [(2, i as i64 - 1), (-2, i as i64 + 1)] {
                let nr = residue(neighbour, n);
                if k.0[nr - 1] < 1 {
                    continue;
                }
                let bindings = HashMap::from([
                    (var(i, 1), w.clone()),
                    (var(i, 2), w.mul(&p.q_pow(q_exp))),
                    // a color-`neighbour` variable equal to w, stored at its residue
                    (var(nr, 1), w.mul(&p.qb_pow(2 * turns(neighbour, n)))),
                ]);
                if !numerator.substitute(&bindings)?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

impl fmt::Display for ShuffleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.sign;
        match &self.node {
            Node::Power { color, exponent } => write!(f, "z{s}:i={color},d={exponent}"),
            Node::S { i, j, m } => write!(f, "S{s}:[{i};{j}):m={m}"),
            Node::T { i, j, m } => write!(f, "T{s}:[{i};{j}):m={m}"),
            Node::G { k } => write!(f, "G{s}:{k}"),
            Node::Constant { value } => write!(f, "const{s}:{}:v={value}", self.degree),
            Node::Product(a, b) => write!(f, "prod({a},{b})"),
            Node::Explicit { label, .. } => write!(f, "fn{s}:{}:{label}", self.degree),
        }
    }
}

impl fmt::Debug for ShuffleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_expr(text: &str, n: usize) -> Result<ShuffleExpr, ShuffleError> {
    let err = |why: &str| ShuffleError::Parse(text.to_string(), why.to_string());
    if let Some(inner) = text.strip_prefix("prod(").and_then(|s| s.strip_suffix(')')) {
        // '[' opens and ')' closes an arc, so depth balances over "[i;j)".
        // Power elements contain commas of their own, so try each cut.
        let mut depth = 0i32;
        let mut last = err("prod needs two arguments");
        for (idx, ch) in inner.char_indices() {
            match ch {
                '(' | '[' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    let halves = parse_expr(inner[..idx].trim(), n)
                        .and_then(|a| parse_expr(inner[idx + 1..].trim(), n).map(|b| (a, b)));
                    match halves {
                        Ok((a, b)) => return a.times(&b),
                        Err(e) => last = e,
                    }
                }
                _ => {}
            }
        }
        return Err(last);
    }
    let (head, body) = text.split_once(':').ok_or_else(|| err("missing ':'"))?;
    let (kind, sign) = match head.chars().last() {
        Some('+') => (&head[..head.len() - 1], Some(Sign::Plus)),
        Some('-') => (&head[..head.len() - 1], Some(Sign::Minus)),
        _ => (head, None),
    };
    let parse_m = |rest: &str| -> Result<SlotPolynomial, ShuffleError> {
        let rest = rest.trim();
        if rest.is_empty() {
            return Ok(SlotPolynomial::one());
        }
        let m = rest.strip_prefix(":m=").ok_or_else(|| err("expected :m=<polynomial>"))?;
        SlotPolynomial::parse(m).map_err(|e| err(&e.to_string()))
    };
    let parse_k = |s: &str| -> Result<DegreeVector, ShuffleError> {
        let s = s.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| err("degree must look like (k1,...,kn)"))?;
        let k: Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse::<u32>()).collect();
        let k = DegreeVector(k.map_err(|_| err("bad degree entry"))?);
        if k.n() != n {
            return Err(err("degree has the wrong number of entries"));
        }
        Ok(k)
    };
    match (kind, sign) {
        ("S", Some(s)) | ("T", Some(s)) => {
            let (i, j, rest) = parse_arc(body).map_err(&err)?;
            let m = parse_m(rest)?;
            if kind == "S" {
                ShuffleExpr::make_s(s, n, i, j, m)
            } else {
                ShuffleExpr::make_t(s, n, i, j, m)
            }
        }
        ("E", None) | ("F", None) => {
            let (i, j, rest) = parse_arc(body).map_err(&err)?;
            if !rest.trim().is_empty() {
                return Err(err("E and F take no insertion"));
            }
            if kind == "E" {
                ShuffleExpr::make_e(n, i, j)
            } else {
                ShuffleExpr::make_f(n, i, j)
            }
        }
        ("G", Some(s)) => Ok(ShuffleExpr::make_g(s, parse_k(body)?)),
        ("z", s) => {
            let mut color = None;
            let mut exponent = None;
            for kv in body.split(',') {
                match kv.trim().split_once('=') {
                    Some(("i", v)) => color = v.trim().parse::<i64>().ok(),
                    Some(("d", v)) => exponent = v.trim().parse::<i32>().ok(),
                    _ => return Err(err("expected i=<color>,d=<exponent>")),
                }
            }
            let (Some(c), Some(d)) = (color, exponent) else { return Err(err("expected i=<color>,d=<exponent>")) };
            Ok(ShuffleExpr::power(s.unwrap_or(Sign::Plus), n, c, d))
        }
        ("const", Some(s)) => {
            let (deg, v) = body.split_once(":v=").ok_or_else(|| err("expected const±:(k):v=<value>"))?;
            let value = v.parse::<Rf>().map_err(|e| err(&e.to_string()))?;
            Ok(ShuffleExpr::constant(s, parse_k(deg)?, value))
        }
        _ => Err(err("unknown element kind")),
    }
}

fn parse_arc(s: &str) -> Result<(i64, i64, &str), &'static str> {
    let bad = "arc must look like [i;j)";
    let s = s.strip_prefix('[').ok_or(bad)?;
    let (i, rest) = s.split_once(';').ok_or(bad)?;
    let (j, rest) = rest.split_once(')').ok_or(bad)?;
    let i = i.trim().parse().map_err(|_| "bad arc start")?;
    let j = j.trim().parse().map_err(|_| "bad arc end")?;
    Ok((i, j, rest))
}
