//! Evaluation modulo the Mersenne prime 2^61 - 1, used as a cheap
//! inequality filter before exact comparison.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::monomial::Monomial;
use super::poly::LaurentPolynomial;
use super::rational::RationalFunction;
use super::var::Var;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut out = 1;
    while e > 0 {
        if e & 1 == 1 {
            out = mul(out, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    out
}

fn inv(a: u64) -> Option<u64> {
    (a != 0).then(|| pow(a, P - 2))
}

fn reduce(c: &BigInt) -> u64 {
    let r = c % BigInt::from(P);
    let r = if r.sign() == num_bigint::Sign::Minus { r + BigInt::from(P) } else { r };
    r.to_u64().unwrap()
}

fn point(v: Var, trial: u64) -> u64 {
    // splitmix64 on (var, trial)
    let mut z = (v.name().bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3)))
        .wrapping_add(trial.wrapping_mul(0x9e3779b97f4a7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    z % (P - 2) + 2
}

fn eval_mono(m: &Monomial, trial: u64) -> Option<u64> {
    let mut out = 1;
    for (v, e) in m.iter() {
        let x = point(v, trial);
        let x = if e < 0 { inv(x)? } else { x };
        out = mul(out, pow(x, e.unsigned_abs() as u64));
    }
    Some(out)
}

fn eval_poly(p: &LaurentPolynomial, trial: u64) -> Option<u64> {
    let mut out = 0;
    for (m, c) in p.terms() {
        out = (out + mul(reduce(c), eval_mono(m, trial)?)) % P;
    }
    Some(out)
}

fn eval(f: &RationalFunction, trial: u64) -> Option<u64> {
    let mut out = mul(reduce(f.unit().numer()), inv(reduce(f.unit().denom()))?);
    out = mul(out, eval_mono(f.mono(), trial)?);
    for (p, e) in f.factors() {
        let x = eval_poly(p, trial)?;
        let x = if e < 0 { inv(x)? } else { x };
        out = mul(out, pow(x, e.unsigned_abs() as u64));
    }
    Some(out)
}

/// True only if `f` and `g` provably differ: some trial point gives
/// different values modulo the prime.
pub(crate) fn differs(f: &RationalFunction, g: &RationalFunction, trials: u64) -> bool {
    (0..trials).any(|k| matches!((eval(f, k), eval(g, k)), (Some(a), Some(b)) if a != b))
}
