//! Matrix coefficients computed on the geometric side, as sums over
//! tableaux and strips, and the localization route that produces them.

use std::collections::HashMap;

use thiserror::Error;

use crate::characters::{
    adjusted_class, co_bundle_adjustment, co_bundle_restriction, exterior_dual, label_weights, tangent_restriction,
    virtual_tangent, CharacterError, Correspondence, FixedPointData,
};
use crate::combinatorics::{
    enumerate_asyt, enumerate_refinements, enumerate_syt, strip_decomposition, AlmostStandardTableau, Arc, Cell,
    CombinatoricsError, DegreeVector, NTuplePartition, SkewShape, Strip, StripDecomposition, Tableau,
};
use crate::field::{rat, FieldError, RationalFunction as Rf, Var};
use crate::module_k::inverse_lowering_factor;
use crate::params::Params;
use crate::shuffle::{tau_plus, zeta, ColoredValue, Node, ShuffleError, ShuffleExpr, Sign, SlotPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error("vanishing denominator {0}")]
    Degenerate(String),
    #[error("the exterior class has a pole: trivial weight with multiplicity {0}")]
    TrivialPole(i64),
}

type Result<T> = std::result::Result<T, CorrespondenceError>;

/// What an operator on the geometric side is built from.
#[derive(Debug, Clone)]
pub enum Payload {
    Insertion { i: i64, j: i64, m: SlotPolynomial },
    Degree(DegreeVector),
}

#[derive(Debug, Clone)]
pub struct GeomOperator {
    pub kind: Correspondence,
    pub sign: Sign,
    pub payload: Payload,
}

impl GeomOperator {
    pub fn fine(sign: Sign, i: i64, j: i64, m: SlotPolynomial) -> Self {
        GeomOperator { kind: Correspondence::Fine, sign, payload: Payload::Insertion { i, j, m } }
    }

    pub fn eccentric(sign: Sign, i: i64, j: i64, m: SlotPolynomial) -> Self {
        GeomOperator { kind: Correspondence::Eccentric, sign, payload: Payload::Insertion { i, j, m } }
    }

    pub fn smooth(sign: Sign, k: DegreeVector) -> Self {
        GeomOperator { kind: Correspondence::Smooth, sign, payload: Payload::Degree(k) }
    }

    /// The correspondence realizing an `S`, `T` or `G` element, if any.
    pub fn realizing(r: &ShuffleExpr) -> Option<Self> {
        match r.node() {
            Node::S { i, j, m } => Some(Self::fine(r.sign(), *i, *j, m.clone())),
            Node::T { i, j, m } => Some(Self::eccentric(r.sign(), *i, *j, m.clone())),
            Node::G { k } => Some(Self::smooth(r.sign(), k.clone())),
            _ => None,
        }
    }
}

fn colored(p: &Params, c: &Cell) -> ColoredValue {
    ColoredValue::of_cell(p, c)
}

fn boxes(p: &Params, cells: &[Cell]) -> Vec<ColoredValue> {
    cells.iter().map(|c| colored(p, c)).collect()
}

/// `Π ζ(χ_■/χ_ν) τ₊(χ_■)` over the given boxes.
fn raising_factor(p: &Params, new: &[Cell], below: &[Cell]) -> Result<Rf> {
    let below = boxes(p, below);
    let mut out = Rf::one();
    for b in boxes(p, new) {
        out = out.mul(&tau_plus(p, &b.value, b.color));
        for c in &below {
            out = out.mul(&zeta(p, &b.value, b.color, &c.value, c.color)?);
        }
    }
    Ok(out)
}

/// `Π [ζ(χ_ν/χ_■) τ₋(χ_■)]^{-1}` over the given boxes.
fn lowering_factor(p: &Params, new: &[Cell], above: &[Cell]) -> Result<Rf> {
    let above = boxes(p, above);
    let mut out = Rf::one();
    for b in boxes(p, new) {
        out = out.mul(&inverse_lowering_factor(p, &above, &b)?);
    }
    Ok(out)
}

fn tableau_weights(p: &Params, t: &Tableau) -> Vec<Rf> {
    t.arc.colors().map(|a| p.cell_value_at(&t.cell(a), a).unwrap()).collect()
}

fn one_minus(num: &Rf, den: &Rf, what: &str) -> Result<Rf> {
    let f = Rf::one().sub(&num.div(den)?);
    if f.is_zero() {
        return Err(CorrespondenceError::Degenerate(what.to_string()));
    }
    Ok(f)
}

/// `β_k = Π_{i=1}^{⌊(k−1)/n⌋} (q^{-1} − q q̄^{-2i}) / (1 − q̄^{-2i})`.
pub fn beta(p: &Params, k: usize) -> Rf {
    let inv_q = Rf::one().div(p.q()).unwrap();
    let mut out = Rf::one();
    for i in 1..=((k as i64 - 1) / p.n() as i64) {
        let qb = p.qb_pow(-2 * i);
        out = out.mul(&inv_q.sub(&p.q().mul(&qb)).div(&Rf::one().sub(&qb)).unwrap());
    }
    out
}

/// The contribution of one standard tableau.
pub fn syt_coeff(p: &Params, sign: Sign, m: &SlotPolynomial, t: &Tableau) -> Result<Rf> {
    let (i, j) = (t.arc.i, t.arc.j);
    let chi = tableau_weights(p, t);
    let mut c = m.eval(p, i, &chi)?;
    let q2 = p.q_pow(2);
    for a in 1..chi.len() {
        c = c.div(&one_minus(&chi[a], &chi[a - 1].mul(&q2), "χ_a = χ_{a-1} q^2")?)?;
    }
    let len = j - i;
    match sign {
        Sign::Plus => {
            c = c.mul(&Rf::one().div(p.q())?.sub(p.q()).pow(len)?);
            for a in i..j {
                c = c.mul(&raising_factor(p, &[t.cell(a)], &t.cells_before(a))?);
            }
        }
        Sign::Minus => {
            c = c.mul(&Rf::one().sub(&p.q_pow(-2)).pow(len)?);
            for a in i..j {
                c = c.mul(&lowering_factor(p, &[t.cell(a)], &t.cells_before(a + 1))?);
            }
        }
    }
    Ok(c)
}

/// The contribution of one almost standard tableau.
pub fn asyt_coeff(p: &Params, sign: Sign, m: &SlotPolynomial, a: &AlmostStandardTableau) -> Result<Rf> {
    let t = &a.tableau;
    let (i, j) = (t.arc.i, t.arc.j);
    let chi = tableau_weights(p, t);
    let at = |label: i64| &chi[(label - i) as usize];
    let strips = a.strip_count();
    let mut c = m.eval(p, i, &chi)?.mul(&Rf::one().div(p.q())?.sub(p.q()).pow(strips as i64)?);
    for s in 1..strips {
        let k = a.cutoffs[s];
        c = c.div(&one_minus(at(k - 1), at(k), "χ_{k-1} = χ_k")?)?;
    }
    if sign == Sign::Minus {
        let len = j - i;
        c = c.mul(&Rf::from_int(if len % 2 == 0 { 1 } else { -1 }).div(&p.q_pow(len))?);
    }
    for s in 1..=strips {
        let cells: Vec<Cell> = a.strip_labels(s).map(|l| t.cell(l)).collect();
        c = c.mul(&beta(p, cells.len()));
        c = c.mul(&match sign {
            Sign::Plus => raising_factor(p, &cells, &a.flag[s].cells())?,
            Sign::Minus => lowering_factor(p, &cells, &a.flag[s - 1].cells())?,
        });
    }
    Ok(c)
}

/// The matrix coefficient of the smooth correspondence at `(λ, μ)`; zero
/// unless `λ∖μ` is a union of vertical strips.
pub fn strip_coeff(p: &Params, sign: Sign, k: &DegreeVector, lambda: &NTuplePartition, mu: &NTuplePartition) -> Result<Rf> {
    if !lambda.contains(mu) {
        return Ok(Rf::zero());
    }
    let skew = SkewShape::new(lambda.clone(), mu.clone())?;
    if skew.degree() != *k || strip_decomposition(&skew).is_none() {
        return Ok(Rf::zero());
    }
    let n = p.n() as i64;
    let cells = skew.cells();
    let inv_q = Rf::one().div(p.q())?;
    let mut c = Rf::one();
    for a in &cells {
        let va = p.cell_value(a);
        for b in &cells {
            let (ca, cb) = (a.color(), b.color());
            if (cb - ca).rem_euclid(n) == 0 {
                let vb = p.cell_value_at(b, ca)?;
                c = c.mul(&inv_q.sub(&va.mul(p.q()).div(&vb)?));
            } else if (cb - ca - 1).rem_euclid(n) == 0 {
                let vb = p.cell_value_at(b, ca + 1)?;
                let f = inv_q.sub(&va.mul(p.q()).div(&vb)?);
                if f.is_zero() {
                    return Err(CorrespondenceError::Degenerate("strip pair factor".into()));
                }
                c = c.div(&f)?;
            }
        }
    }
    let frame = match sign {
        Sign::Plus => raising_factor(p, &cells, &mu.cells())?,
        Sign::Minus => lowering_factor(p, &cells, &lambda.cells())?,
    };
    Ok(c.mul(&frame))
}

/// Bindings that carry symbolic parameters to the given ones.
fn parameter_bindings(p: &Params) -> HashMap<Var, Rf> {
    let mut out = HashMap::from([(Var::q(), p.q().clone()), (Var::qb(), p.qb().clone())]);
    for k in 1..=p.n() {
        out.insert(Var::u(k), p.u(k as i64));
    }
    out
}

/// `m(χ) · adjustment / Λ(virtual tangent)`, with trivial weights perturbed
/// and the perturbation removed by a limit.
pub fn localization_coeff_raw(p: &Params, sign: Sign, m: &SlotPolynomial, data: FixedPointData) -> Result<Rf> {
    let kind = match data {
        FixedPointData::Standard(_) => Correspondence::Fine,
        FixedPointData::AlmostStandard(_) => Correspondence::Eccentric,
        FixedPointData::Strips(_) => Correspondence::Smooth,
    };
    let s = sign.as_i64();
    let symbolic = Params::symbolic(p.n())?;
    let insertion = match data {
        FixedPointData::Standard(t) | FixedPointData::AlmostStandard(AlmostStandardTableau { tableau: t, .. }) => {
            let chi: Vec<Rf> = label_weights(t).into_iter().map(|w| Rf::monomial(rat(1, 1), w)).collect();
            m.eval(&symbolic, t.arc.i, &chi)?
        }
        FixedPointData::Strips(_) => Rf::one(),
    };
    let t = Var::t();
    let adjusted = adjusted_class(kind, s, data)?;
    let tangent = virtual_tangent(kind, s, data)?;
    let value = insertion.mul(&adjusted).div(&exterior_dual(&tangent, Some(t))?)?.limit_at_one(t)?;
    Ok(value.substitute(&parameter_bindings(p))?)
}

/// The matrix coefficient of a geometric operator between fixed points:
/// raising `μ → λ` for `+`, lowering `λ → μ` for `−`.
pub fn geometric_matcoeff(p: &Params, op: &GeomOperator, lambda: &NTuplePartition, mu: &NTuplePartition) -> Result<Rf> {
    if !lambda.contains(mu) {
        return Ok(Rf::zero());
    }
    let skew = SkewShape::new(lambda.clone(), mu.clone())?;
    match &op.payload {
        Payload::Degree(k) => strip_coeff(p, op.sign, k, lambda, mu),
        Payload::Insertion { i, j, m } => {
            let arc = Arc { i: *i, j: *j };
            let mut total = Rf::zero();
            match op.kind {
                Correspondence::Eccentric => {
                    for a in enumerate_asyt(&skew, &arc) {
                        total = total.add(&asyt_coeff(p, op.sign, m, &a)?);
                    }
                }
                _ => {
                    for t in enumerate_syt(&skew, &arc) {
                        total = total.add(&syt_coeff(p, op.sign, m, &t)?);
                    }
                }
            }
            Ok(total)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Through the restricted Ext-bundle class and the tangent class.
    Character,
    /// Through the closed product over the skew boxes.
    Formula,
}

/// The coefficient of the operator built from the Ext-bundle correspondence
/// between `λ` and `μ`.
pub fn a_operator_coeff(p: &Params, lambda: &NTuplePartition, mu: &NTuplePartition, route: Route) -> Result<Rf> {
    match route {
        Route::Formula => {
            if !lambda.contains(mu) {
                return Ok(Rf::zero());
            }
            let skew = SkewShape::new(lambda.clone(), mu.clone())?;
            lowering_factor(p, &skew.cells(), &lambda.cells())
        }
        Route::Character => {
            let ext = co_bundle_restriction(mu, lambda);
            if ext.multiplicity(&crate::field::Monomial::one()) > 0 {
                return Ok(Rf::zero());
            }
            let class = tangent_restriction(lambda).minus(&ext);
            let trivial = class.multiplicity(&crate::field::Monomial::one());
            if trivial != 0 {
                return Err(CorrespondenceError::TrivialPole(trivial));
            }
            let value = co_bundle_adjustment(lambda, mu).div(&exterior_dual(&class, None)?)?;
            Ok(value.substitute(&parameter_bindings(p))?)
        }
    }
}

/// Whether the Ext-bundle class at `(λ, μ)` has a trivial weight, forcing
/// its exterior class to vanish.
pub fn co_bundle_vanishes(lambda: &NTuplePartition, mu: &NTuplePartition) -> bool {
    co_bundle_restriction(lambda, mu).multiplicity(&crate::field::Monomial::one()) > 0
}

/// `#_{B_1..B_t}`: the product over links of the number of boxes, among this
/// link and the later ones, congruent to the link's bottom box.
pub fn sharp(links: &[Strip], n: usize) -> Result<u64> {
    let mut out = 1u64;
    for (a, link) in links.iter().enumerate() {
        let r = link.bottom().residue(n);
        let count = links[a..].iter().flat_map(|l| l.cells.iter()).filter(|c| c.residue(n) == r).count() as u64;
        if count == 0 {
            return Err(CorrespondenceError::Degenerate(format!("link {} has no congruent box", a + 1)));
        }
        out *= count;
    }
    Ok(out)
}

/// `Σ 1/#` over all refinements of a strip family.
pub fn refinement_identity(strips: &StripDecomposition, n: usize) -> Result<crate::field::BigRational> {
    let mut total = rat(0, 1);
    for links in enumerate_refinements(strips, n) {
        total += rat(1, sharp(&links, n)? as i64);
    }
    Ok(total)
}
