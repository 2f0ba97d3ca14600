use proptest::prelude::*;
use toroidal_core::characters::*;
use toroidal_core::combinatorics::{enumerate_asyt, enumerate_syt, fixed_points_up_to, Arc, NTuplePartition, SkewShape};
use toroidal_core::field::{parse_rational, Monomial, RationalFunction as Rf};

fn tuple(parts: &[&[u32]]) -> NTuplePartition {
    NTuplePartition::new(parts.iter().map(|p| p.to_vec()).collect()).unwrap()
}

fn mono(text: &str) -> Monomial {
    parse_rational(text).unwrap().as_monomial().unwrap().1.clone()
}

fn sum(terms: &[(&str, i64)]) -> CharacterSum {
    terms.iter().map(|(w, m)| (mono(w), *m)).collect()
}

#[test]
fn tautological_examples() {
    assert!(taut_restriction(&NTuplePartition::empty(2).unwrap(), 1).is_empty());
    assert_eq!(taut_restriction(&tuple(&[&[1], &[]]), 1), sum(&[("u1^2", 1)]));
    assert_eq!(taut_restriction(&tuple(&[&[1, 1], &[]]), 2), sum(&[("u1^2", 1)]));
    // color 3 read at residue 1 picks up qb^2
    assert_eq!(taut_restriction(&tuple(&[&[1, 1, 1], &[]]), 1), sum(&[("u1^2", 1), ("u1^2*qb^2", 1)]));
}

#[test]
fn tangent_at_a_single_box() {
    let t = tangent_restriction(&tuple(&[&[1], &[]]));
    assert_eq!(t, sum(&[("q^-2", 1), ("u2^2*u1^-2*q^-2", 1)]));
    assert!(tangent_restriction(&NTuplePartition::empty(3).unwrap()).is_empty());
}

#[test]
fn tangent_spaces_are_honest_representations() {
    for n in [2, 3] {
        for lambda in fixed_points_up_to(n, 4).unwrap() {
            let t = tangent_restriction(&lambda);
            assert_eq!(t.rank(), 2 * lambda.size() as i64, "{lambda}");
            assert!(t.iter().all(|(_, m)| m > 0), "{lambda}: {t}");
            assert_eq!(t.multiplicity(&Monomial::one()), 0, "{lambda}");
        }
    }
}

#[test]
fn co_bundle_on_the_diagonal_is_the_tangent_space() {
    let all = fixed_points_up_to(2, 3).unwrap();
    for lambda in &all {
        assert_eq!(co_bundle_restriction(lambda, lambda), tangent_restriction(lambda));
        for mu in &all {
            assert_eq!(co_bundle_restriction(lambda, mu).rank(), (lambda.size() + mu.size()) as i64);
        }
    }
}

#[test]
fn exterior_dual_examples() {
    let one_minus = parse_rational("1 - q^-2").unwrap();
    assert!(exterior_dual(&sum(&[("q^2", 1)]), None).unwrap().equals(&one_minus));
    assert!(exterior_dual(&sum(&[("q^2", -1)]), None).unwrap().equals(&one_minus.inv().unwrap()));
    assert!(matches!(exterior_dual(&sum(&[("1", 1)]), None), Err(CharacterError::TrivialWeight(1))));
    assert!(exterior_dual(&CharacterSum::new(), None).unwrap().equals(&Rf::one()));
}

#[test]
fn serialized_as_sorted_pairs() {
    let s = sum(&[("u2^2*u1^-2*q^-2", 1), ("q^-2", 1)]);
    let json = serde_json::to_value(&s).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 2);
    assert_eq!(serde_json::to_string(&s).unwrap(), s.to_string());
}

#[test]
fn fine_and_eccentric_agree_on_one_box() {
    for n in [2, 3] {
        for lambda in fixed_points_up_to(n, 3).unwrap() {
            for mu in fixed_points_up_to(n, 3).unwrap() {
                if !lambda.contains(&mu) || lambda.size() != mu.size() + 1 {
                    continue;
                }
                let skew = SkewShape::new(lambda.clone(), mu.clone()).unwrap();
                let color = skew.cells()[0].color();
                let arc = Arc::new(color, color + 1, n).unwrap();
                let syt = &enumerate_syt(&skew, &arc)[0];
                let asyt = &enumerate_asyt(&skew, &arc)[0];
                for sign in [1, -1] {
                    let fine = virtual_tangent(Correspondence::Fine, sign, FixedPointData::Standard(syt)).unwrap();
                    let ecc = virtual_tangent(Correspondence::Eccentric, sign, FixedPointData::AlmostStandard(asyt)).unwrap();
                    assert_eq!(fine, ecc, "{lambda} {mu} {sign}");
                    let fine = adjusted_class(Correspondence::Fine, sign, FixedPointData::Standard(syt)).unwrap();
                    let ecc = adjusted_class(Correspondence::Eccentric, sign, FixedPointData::AlmostStandard(asyt)).unwrap();
                    assert!(fine.equals(&ecc), "{lambda} {mu} {sign}");
                }
            }
        }
    }
}

#[test]
fn smooth_adjustment_of_the_empty_family() {
    let empty = NTuplePartition::empty(2).unwrap();
    let skew = SkewShape::new(empty.clone(), empty).unwrap();
    assert!(adjusted_class(Correspondence::Smooth, -1, FixedPointData::Strips(&skew)).unwrap().equals(&Rf::one()));
}

#[test]
fn mismatched_fixed_point_data_is_rejected() {
    let skew = SkewShape::new(tuple(&[&[1], &[]]), NTuplePartition::empty(2).unwrap()).unwrap();
    let syt = &enumerate_syt(&skew, &Arc::new(1, 2, 2).unwrap())[0];
    assert!(virtual_tangent(Correspondence::Eccentric, 1, FixedPointData::Standard(syt)).is_err());
}

fn weights() -> impl Strategy<Value = Vec<(i32, i32, i32, i64)>> {
    prop::collection::vec((-2i32..3, -2i32..3, -2i32..3, -2i64..3), 0..5)
}

fn to_sum(terms: &[(i32, i32, i32, i64)]) -> CharacterSum {
    let mut s = CharacterSum::new();
    for &(a, b, c, m) in terms {
        let w = mono(&format!("q^{a}*qb^{b}*u1^{c}"));
        if !w.is_one() {
            s.add_term(w, m);
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exterior_dual_is_multiplicative(a in weights(), b in weights()) {
        let (x, y) = (to_sum(&a), to_sum(&b));
        let whole = exterior_dual(&x.plus(&y), None).unwrap();
        let parts = exterior_dual(&x, None).unwrap().mul(&exterior_dual(&y, None).unwrap());
        prop_assert!(whole.equals(&parts));
        prop_assert_eq!(x.plus(&y).minus(&y), x);
    }
}
