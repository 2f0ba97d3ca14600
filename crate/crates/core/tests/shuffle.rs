use std::sync::Arc as Shared;

use proptest::prelude::*;
use toroidal_core::combinatorics::{fixed_points_up_to, DegreeVector, SkewShape};
use toroidal_core::field::{parse_rational, RationalFunction as Rf};
use toroidal_core::params::Params;
use toroidal_core::shuffle::*;

fn p(text: &str) -> Rf {
    parse_rational(text).unwrap()
}

fn int(k: i64) -> Rf {
    Rf::from_int(k)
}

fn at(values: &[(i64, i64)]) -> Assignment {
    values.iter().map(|&(v, c)| ColoredValue::new(int(v), c)).collect()
}

#[test]
fn zeta_examples() {
    let p4 = Params::symbolic(4).unwrap();
    assert!(zeta(&p4, &int(2), 1, &int(1), 3).unwrap().equals(&Rf::one()));
    let p2 = Params::symbolic(2).unwrap();
    assert!(zeta(&p2, &int(2), 1, &int(1), 1).unwrap().equals(&p("2*q - q^-1")));
    let wrap = zeta(&p2, &int(1), 2, &int(1), 1).unwrap();
    assert!(wrap.equals(&p("qb^2 - 1").div(&p("q*qb^2 - q^-1")).unwrap()));
}

#[test]
fn zeta_with_a_zero_denominator_is_singular() {
    let p2 = Params::symbolic(2).unwrap();
    assert!(matches!(zeta(&p2, &int(1), 1, &int(1), 1), Err(ShuffleError::Singular(_))));
}

#[test]
fn tau_examples() {
    let p2 = Params::symbolic(2).unwrap();
    let z = p("u1");
    assert!(tau(&p2, Sign::Plus, &[]).equals(&Rf::one()));
    assert!(tau_plus(&p2, &z, 1).equals(&p("u2*q^-1 - u1*q*u2^-1")));
    assert!(tau_minus(&p2, &z, 1).equals(&p("u1 - 1")));
    let a = [ColoredValue::new(z.clone(), 1)];
    assert!(tau(&p2, Sign::Minus, &a).equals(&tau_minus(&p2, &z, 1)));
}

#[test]
fn trivial_elements() {
    let p2 = Params::symbolic(2).unwrap();
    let a = at(&[(5, 1)]);
    assert!(ShuffleExpr::power(Sign::Plus, 2, 1, 0).eval(&p2, &a, false).unwrap().equals(&Rf::one()));
    assert!(ShuffleExpr::power(Sign::Plus, 2, 1, 2).eval(&p2, &a, false).unwrap().equals(&int(25)));
    assert!(ShuffleExpr::make_e(2, 1, 2).unwrap().eval(&p2, &a, false).unwrap().equals(&Rf::one()));
    let g0 = ShuffleExpr::make_g(Sign::Plus, DegreeVector::zero(2));
    assert!(g0.eval(&p2, &[], false).unwrap().equals(&Rf::one()));
}

#[test]
fn generators_and_degrees() {
    let e = ShuffleExpr::make_e(2, 1, 2).unwrap();
    let s = ShuffleExpr::make_s(Sign::Plus, 2, 1, 2, SlotPolynomial::one()).unwrap();
    assert_eq!(e.to_string(), s.to_string());
    let f = ShuffleExpr::make_f(3, 2, 3).unwrap();
    assert_eq!(f.sign(), Sign::Minus);
    let s = ShuffleExpr::make_s(Sign::Plus, 2, 1, 4, SlotPolynomial::one()).unwrap();
    assert_eq!(s.degree(), &DegreeVector(vec![2, 1]));
    let t = ShuffleExpr::make_t(Sign::Minus, 3, 3, 5, SlotPolynomial::one()).unwrap();
    assert_eq!(t.degree(), &DegreeVector(vec![1, 0, 1]));
}

#[test]
fn products_with_the_unit_and_distant_colors() {
    let p4 = Params::symbolic(4).unwrap();
    let r1 = ShuffleExpr::power(Sign::Plus, 4, 1, 2);
    let r2 = ShuffleExpr::power(Sign::Plus, 4, 3, -1);
    let unit = ShuffleExpr::one(Sign::Plus, 4);
    let a = at(&[(3, 1)]);
    let with_unit = r1.times(&unit).unwrap().eval(&p4, &a, false).unwrap();
    assert!(with_unit.equals(&r1.eval(&p4, &a, false).unwrap()));
    let b = at(&[(3, 1), (7, 3)]);
    let prod = r1.times(&r2).unwrap().eval(&p4, &b, false).unwrap();
    assert!(prod.equals(&Rf::from_ratio(9, 7)));
}

#[test]
fn mixed_signs_do_not_multiply() {
    let a = ShuffleExpr::power(Sign::Plus, 2, 1, 0);
    let b = ShuffleExpr::power(Sign::Minus, 2, 1, 0);
    assert!(matches!(a.times(&b), Err(ShuffleError::SignMismatch)));
}

#[test]
fn skew_splits_agree_with_products() {
    let p2 = Params::symbolic(2).unwrap();
    let mut elements = Vec::new();
    for color in 1..=2 {
        for e in [-1, 0, 1] {
            elements.push(ShuffleExpr::power(Sign::Plus, 2, color, e));
        }
    }
    elements.push(ShuffleExpr::make_e(2, 1, 3).unwrap());
    elements.push(ShuffleExpr::one(Sign::Plus, 2));
    let all = fixed_points_up_to(2, 3).unwrap();
    let mut checked = 0;
    for left in &elements {
        for right in &elements {
            let degree = left.degree().add(right.degree());
            for outer in &all {
                for inner in &all {
                    if !outer.contains(inner) {
                        continue;
                    }
                    let skew = SkewShape::new(outer.clone(), inner.clone()).unwrap();
                    if skew.degree() != degree {
                        continue;
                    }
                    let split = skew_split_eval(&p2, left, right, &skew).unwrap();
                    let whole = left.times(right).unwrap().eval(&p2, &skew_assignment(&p2, &skew), true).unwrap();
                    assert!(split.equals(&whole), "{left} {right} {outer} {inner}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn wheel_examples() {
    assert!(wheel_check(&ShuffleExpr::one(Sign::Plus, 3), 2, 1).unwrap());
    assert!(wheel_check(&ShuffleExpr::power(Sign::Minus, 3, 2, 3), 2, 1).unwrap());
    for sign in [Sign::Plus, Sign::Minus] {
        let s = ShuffleExpr::make_s(sign, 3, 1, 4, SlotPolynomial::one()).unwrap();
        assert!(wheel_check(&s, 3, 9).unwrap());
    }
}

#[test]
fn wheel_detects_a_forbidden_pole() {
    // A function with poles at z_1 q^2 = z_2 for both color-1 variables has
    // the right pole shape but does not vanish on the wheel.
    let f = ShuffleExpr::explicit(
        Sign::Plus,
        DegreeVector(vec![2, 1, 0]),
        "pole",
        Shared::new(|p: &Params, a: &[ColoredValue]| {
            let pair = |x: &ColoredValue, y: &ColoredValue| x.value.mul(p.q()).sub(&y.value.div(p.q()).unwrap());
            let (ones, twos): (Vec<_>, Vec<_>) = a.iter().partition(|v| v.color == 1);
            Ok(pair(ones[0], twos[0]).mul(&pair(ones[1], twos[0])).inv()?)
        }),
    );
    assert!(!wheel_check(&f, 2, 1).unwrap());
}

#[test]
fn parse_round_trips() {
    for text in ["z+:i=1,d=-2", "S+:[1;3):m=z1*z2^-1", "T-:[2;5):m=1", "G+:(1,0,2)", "prod(z-:i=2,d=1,T-:[1;2):m=1)"] {
        let e = ShuffleExpr::parse(text, 3).unwrap();
        assert_eq!(ShuffleExpr::parse(&e.to_string(), 3).unwrap().to_string(), e.to_string(), "{text}");
    }
    let e = ShuffleExpr::parse("E:[1;2)", 2).unwrap();
    assert_eq!(e.to_string(), ShuffleExpr::make_e(2, 1, 2).unwrap().to_string());
    assert!(ShuffleExpr::parse("S+:[3;1):m=1", 2).is_err());
    assert!(ShuffleExpr::parse("G+:(1,0)", 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_are_associative(
        e in prop::array::uniform3(-1i32..2),
        c in prop::array::uniform3(1i64..3),
        v in prop::array::uniform3(2i64..40),
    ) {
        let p2 = Params::symbolic(2).unwrap();
        let r: Vec<ShuffleExpr> = (0..3).map(|k| ShuffleExpr::power(Sign::Plus, 2, c[k], e[k])).collect();
        let a: Assignment = (0..3).map(|k| ColoredValue::new(int(v[k] * 7 + k as i64), c[k])).collect();
        let left = r[0].times(&r[1]).unwrap().times(&r[2]).unwrap().eval(&p2, &a, true).unwrap();
        let right = r[0].times(&r[1].times(&r[2]).unwrap()).unwrap().eval(&p2, &a, true).unwrap();
        prop_assert!(left.equals(&right));
    }

    #[test]
    fn s_and_t_are_color_symmetric(i in 1i64..3, len in 3i64..5, seed in prop::collection::vec(2i64..50, 4)) {
        // Colors i and i+2 share a residue; exchanging their values (recolored) must not matter.
        let p2 = Params::symbolic(2).unwrap();
        let a: Assignment = (0..len).map(|k| ColoredValue::new(int(seed[k as usize] * 5 + k), i + k)).collect();
        let mut b = a.clone();
        let (x, y) = (0, 2);
        b[x].value = p2.recolor(&a[y].value, a[y].color, a[x].color);
        b[y].value = p2.recolor(&a[x].value, a[x].color, a[y].color);
        for sign in [Sign::Plus, Sign::Minus] {
            let s = ShuffleExpr::make_s(sign, 2, i, i + len, SlotPolynomial::monomial(i, &[1, 0, -1])).unwrap();
            let t = ShuffleExpr::make_t(sign, 2, i, i + len, SlotPolynomial::one()).unwrap();
            for e in [s, t] {
                prop_assert!(e.eval(&p2, &a, true).unwrap().equals(&e.eval(&p2, &b, true).unwrap()));
            }
        }
    }
}
