//! The base field parameters `q`, `q̄`, `u_1..u_n`, either as symbols or as
//! rational numbers, and the color bookkeeping that ties them to boxes.

use std::collections::HashMap;

use rand::Rng;

use crate::combinatorics::{residue, turns, Cell, CombinatoricsError};
use crate::field::{rat, BigRational, Monomial, RationalFunction as Rf, Var};

#[derive(Debug, Clone)]
pub struct Params {
    n: usize,
    q: Rf,
    qb: Rf,
    u: Vec<Rf>,
}

impl Params {
    /// Parameters as independent variables `q`, `qb`, `u1..un`.
    pub fn symbolic(n: usize) -> Result<Params, CombinatoricsError> {
        if n < 2 {
            return Err(CombinatoricsError::RankTooSmall(n));
        }
        Ok(Params {
            n,
            q: Rf::var(Var::q()),
            qb: Rf::var(Var::qb()),
            u: (1..=n).map(|k| Rf::var(Var::u(k))).collect(),
        })
    }

    /// Parameters specialized to the given rationals.
    pub fn numeric(n: usize, q: BigRational, qb: BigRational, u: Vec<BigRational>) -> Result<Params, CombinatoricsError> {
        if n < 2 {
            return Err(CombinatoricsError::RankTooSmall(n));
        }
        assert_eq!(u.len(), n, "one u per color");
        Ok(Params { n, q: Rf::from_rational(q), qb: Rf::from_rational(qb), u: u.into_iter().map(Rf::from_rational).collect() })
    }

    /// Random rational parameters with small numerators and denominators.
    pub fn random(n: usize, rng: &mut impl Rng) -> Result<Params, CombinatoricsError> {
        let mut draw = |lo: i64, hi: i64| rat(rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        let q = draw(2, 60);
        let qb = draw(2, 60);
        let u = (0..n).map(|_| draw(2, 90)).collect();
        Self::numeric(n, q, qb, u)
    }

    /// A point for evaluating symbolic results: `q`, `qb`, `u1..un`.
    pub fn bindings(q: BigRational, qb: BigRational, u: &[BigRational]) -> HashMap<Var, BigRational> {
        let mut out = HashMap::from([(Var::q(), q), (Var::qb(), qb)]);
        for (k, x) in u.iter().enumerate() {
            out.insert(Var::u(k + 1), x.clone());
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &Rf {
        &self.q
    }

    pub fn qb(&self) -> &Rf {
        &self.qb
    }

    pub fn q_pow(&self, e: i64) -> Rf {
        self.q.pow(e).expect("q is nonzero")
    }

    pub fn qb_pow(&self, e: i64) -> Rf {
        self.qb.pow(e).expect("qb is nonzero")
    }

    pub fn residue(&self, color: i64) -> usize {
        residue(color, self.n)
    }

    /// `u_i` for an arbitrary integer index: `u_{i+n} = u_i q̄^{-1}`.
    pub fn u(&self, i: i64) -> Rf {
        self.u[self.residue(i) - 1].mul(&self.qb_pow(-turns(i, self.n)))
    }

    /// Re-expresses a value carried by a variable of color `from` as a
    /// variable of color `to`; the colors must be congruent.
    pub fn recolor(&self, value: &Rf, from: i64, to: i64) -> Rf {
        debug_assert_eq!(self.residue(from), self.residue(to), "recolor across residues");
        let shift = turns(from, self.n) - turns(to, self.n);
        if shift == 0 {
            return value.clone();
        }
        value.mul(&self.qb_pow(2 * shift))
    }

    /// The weight `u_k^2 q^{2x}` of a box, as a variable of the box's own color.
    pub fn cell_value(&self, c: &Cell) -> Rf {
        self.u[c.k - 1].pow(2).unwrap().mul(&self.q_pow(2 * c.x as i64))
    }

    /// The weight of a box read as a variable of the congruent color `color`.
    pub fn cell_value_at(&self, c: &Cell, color: i64) -> Result<Rf, CombinatoricsError> {
        if self.residue(color) != c.residue(self.n) {
            return Err(CombinatoricsError::ColorMismatch { color: c.color(), target: color, n: self.n });
        }
        Ok(self.recolor(&self.cell_value(c), c.color(), color))
    }
}

/// The weight of a box as a monomial: `u_k^2 q^{2x}`.
pub fn box_weight(c: &Cell) -> Monomial {
    Monomial::from_pairs([(Var::u(c.k), 2), (Var::q(), 2 * c.x as i32)])
}

/// The weight of a box read as a variable of color `color`, congruent to the
/// box color mod `n`.
pub fn box_weight_as_color(c: &Cell, color: i64, n: usize) -> Result<Monomial, CombinatoricsError> {
    if residue(color, n) != c.residue(n) {
        return Err(CombinatoricsError::ColorMismatch { color: c.color(), target: color, n });
    }
    let shift = turns(c.color(), n) - turns(color, n);
    Ok(&box_weight(c) * &Monomial::power(Var::qb(), 2 * shift as i32))
}
