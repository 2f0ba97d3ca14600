use std::collections::HashMap;

use proptest::prelude::*;
use toroidal_core::field::{parse_rational, rat, BigRational, FieldError, Monomial, RationalFunction as Rf, Var};

fn v(name: &str) -> Rf {
    Rf::var(Var::new(name))
}

fn p(text: &str) -> Rf {
    parse_rational(text).unwrap()
}

fn c(k: i64) -> Rf {
    Rf::from_int(k)
}

#[test]
fn difference_of_squares() {
    let (q, qb) = (v("q"), v("qb"));
    let lhs = q.add(&qb).mul(&q.sub(&qb));
    assert!(lhs.equals(&p("q^2 - qb^2")));
}

#[test]
fn additive_identity_and_cancellation() {
    let f = p("q + 3*u1 / qb - 2");
    assert!(f.add(&Rf::zero()).equals(&f));
    let g = p("u1^2*q^2").div(&p("u1*q")).unwrap();
    assert!(g.equals(&p("u1*q")));
    assert_eq!(g.to_string(), "q*u1 / 1");
}

#[test]
fn equality_examples() {
    assert!(p("u1/q").div(&p("1/q")).unwrap().equals(&v("u1")));
    assert!(!v("q").equals(&v("qb")));
    assert!(p("q^2 - 1").div(&p("q - 1")).unwrap().equals(&p("q + 1")));
}

#[test]
fn sums_cancel_shared_denominators() {
    // 1/(q-1) - 1/(q+1) - 2/(q^2-1) = 0
    let a = c(1).div(&p("q - 1")).unwrap();
    let b = c(1).div(&p("q + 1")).unwrap();
    let d = c(2).div(&p("q^2 - 1")).unwrap();
    assert!(a.sub(&b).sub(&d).is_zero());
    // (q^2 - 1)/(q - 1) built as a sum collapses to a polynomial
    let s = p("q^2").div(&p("q - 1")).unwrap().sub(&c(1).div(&p("q - 1")).unwrap());
    assert!(s.has_monomial_denominator());
    assert_eq!(s.to_string(), "q + 1 / 1");
}

#[test]
fn division_by_zero_is_an_error() {
    assert_eq!(c(1).div(&Rf::zero()), Err(FieldError::DivisionByZero));
    assert_eq!(p("q").sub(&p("q")).inv(), Err(FieldError::DivisionByZero));
}

#[test]
fn substitution_examples() {
    let u2 = v("u2");
    let got = u2.substitute_var(Var::u(2), &p("u1*qb^-1")).unwrap();
    assert!(got.equals(&p("u1 / qb")));
    let f = p("q + u1 / q - qb");
    assert!(f.substitute(&HashMap::new()).unwrap().equals(&f));
    let g = c(1).div(&p("z - w")).unwrap();
    assert_eq!(g.substitute_var(Var::new("z"), &v("w")), Err(FieldError::DivisionByZero));
}

#[test]
fn substitution_general_path() {
    // q -> (qb + 1)/(qb - 1) is not a monomial binding
    let f = p("q^2 - 1").div(&p("q + 1")).unwrap();
    let img = p("qb + 1").div(&p("qb - 1")).unwrap();
    let got = f.substitute_var(Var::q(), &img).unwrap();
    let want = img.sub(&c(1));
    assert!(got.equals(&want));
}

#[test]
fn evaluation_examples() {
    let at = |pairs: &[(&str, i64)]| -> HashMap<Var, BigRational> {
        pairs.iter().map(|(n, x)| (Var::new(n), rat(*x, 1))).collect()
    };
    assert_eq!(p("q^-1 - q").evaluate_rational(&at(&[("q", 2)])).unwrap(), rat(-3, 2));
    let f = p("q^2 - qb^2").div(&p("q - qb")).unwrap();
    assert_eq!(f.evaluate_rational(&at(&[("q", 3), ("qb", 1)])).unwrap(), rat(4, 1));
    let g = c(1).div(&p("q - qb")).unwrap();
    assert_eq!(g.evaluate_rational(&at(&[("q", 1), ("qb", 1)])), Err(FieldError::DivisionByZero));
}

#[test]
fn limit_examples() {
    let t = Var::t();
    let f = p("t^2 - 1").div(&p("t - 1")).unwrap();
    assert!(f.limit_at_one(t).unwrap().equals(&c(2)));
    assert!(v("q").limit_at_one(t).unwrap().equals(&v("q")));
    let g = c(1).div(&p("t - 1")).unwrap();
    assert!(matches!(g.limit_at_one(t), Err(FieldError::PoleAtOne(_))));
}

#[test]
fn limit_needs_distinct_factor_valuations() {
    // (t^3 - 1)(q t - q) / ((t^2 - 1)(t q^2 - q^2)) -> 3/2 * q/q^2
    let t = Var::t();
    let f = p("t^3 - 1")
        .mul(&p("q*t - q"))
        .div(&p("t^2 - 1").mul(&p("t*q^2 - q^2")))
        .unwrap();
    assert!(f.limit_at_one(t).unwrap().equals(&Rf::from_ratio(3, 2).div(&v("q")).unwrap()));
    // a sum whose numerator vanishes at t = 1
    let s = p("t*u1 - u1").add(&p("u1 - t*u1")).add(&p("t - 1").mul(&v("u2")));
    let r = s.div(&p("t^2 - 1")).unwrap();
    assert!(r.limit_at_one(t).unwrap().equals(&p("u2 / 2")));
}

#[test]
fn printing_round_trip() {
    let f = p("-3*q^2*qb^-1*u1 + 2").div(&p("u2 - q")).unwrap();
    let printed = f.to_string();
    let back = parse_rational(&printed).unwrap();
    assert!(back.equals(&f));
    assert_eq!(back.to_string(), printed);
    assert_eq!(c(0).to_string(), "0 / 1");
}

#[test]
fn monomial_sqrt() {
    let m = Monomial::from_pairs([(Var::u(1), 2), (Var::q(), 4)]);
    assert_eq!(m.sqrt().unwrap(), Monomial::from_pairs([(Var::u(1), 1), (Var::q(), 2)]));
    assert!(Monomial::var(Var::q()).sqrt().is_none());
}

fn small_poly() -> impl Strategy<Value = Rf> {
    let names = ["q", "qb", "u1"];
    prop::collection::vec((-3i64..=3, 0usize..3, -2i32..=2, 0usize..3, -1i32..=2), 1..4).prop_map(
        move |terms| {
            terms.into_iter().fold(Rf::zero(), |acc, (k, a, ea, b, eb)| {
                let m = Monomial::from_pairs([(Var::new(names[a]), ea), (Var::new(names[b]), eb)]);
                acc.add(&Rf::monomial(rat(k, 1), m))
            })
        },
    )
}

fn small_rf() -> impl Strategy<Value = Rf> {
    (small_poly(), small_poly()).prop_filter_map("zero denominator", |(a, b)| a.div(&b).ok())
}

fn point() -> impl Strategy<Value = HashMap<Var, BigRational>> {
    (2i64..40, 2i64..40, 2i64..40, 1i64..7).prop_map(|(a, b, c, d)| {
        HashMap::from([
            (Var::q(), rat(a, d)),
            (Var::qb(), rat(d, b)),
            (Var::u(1), rat(c, d + 1)),
        ])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evaluation_is_a_homomorphism(f in small_rf(), g in small_rf(), at in point()) {
        let (Ok(x), Ok(y)) = (f.evaluate_rational(&at), g.evaluate_rational(&at)) else {
            return Ok(());
        };
        prop_assert_eq!(f.add(&g).evaluate_rational(&at).unwrap(), &x + &y);
        prop_assert_eq!(f.sub(&g).evaluate_rational(&at).unwrap(), &x - &y);
        prop_assert_eq!(f.mul(&g).evaluate_rational(&at).unwrap(), &x * &y);
        if y != BigRational::from_integer(0.into()) {
            prop_assert_eq!(f.div(&g).unwrap().evaluate_rational(&at).unwrap(), &x / &y);
        }
    }

    #[test]
    fn field_axioms(f in small_rf(), g in small_rf(), h in small_rf()) {
        prop_assert!(f.add(&g).equals(&g.add(&f)));
        prop_assert!(f.mul(&g.add(&h)).equals(&f.mul(&g).add(&f.mul(&h))));
        prop_assert!(f.add(&g).sub(&g).equals(&f));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn equality_agrees_with_evaluation(f in small_rf(), g in small_rf(), at in point()) {
        if f.equals(&g) {
            if let (Ok(x), Ok(y)) = (f.evaluate_rational(&at), g.evaluate_rational(&at)) {
                prop_assert_eq!(x, y);
            }
        }
        prop_assert!(f.equals(&f));
    }

    #[test]
    fn normalized_form_is_stable(f in small_rf()) {
        let once = parse_rational(&f.to_string()).unwrap();
        prop_assert_eq!(once.to_string(), f.to_string());
        let printed = f.to_string();
        let den = printed.split(" / ").nth(1).unwrap();
        prop_assert!(!den.starts_with('-'));
    }

    #[test]
    fn limit_ignores_removable_factor(f in small_rf(), k in 1i32..4) {
        let t = Var::t();
        let bump = parse_rational(&format!("t^{k}*q - q")).unwrap().div(&p("t*q - q")).unwrap();
        let tf = f.substitute_var(Var::u(1), &v("u1").mul(&v("t"))).unwrap();
        let Ok(base) = tf.limit_at_one(t) else { return Ok(()); };
        let bumped = tf.mul(&bump).limit_at_one(t).unwrap();
        prop_assert!(bumped.equals(&base.mul(&c(k as i64))));
        prop_assert!(base.equals(&f));
    }
}
