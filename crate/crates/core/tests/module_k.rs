use toroidal_core::combinatorics::{fixed_points_up_to, DegreeVector, NTuplePartition};
use toroidal_core::field::{parse_rational, RationalFunction as Rf};
use toroidal_core::module_k::*;
use toroidal_core::params::Params;
use toroidal_core::shuffle::{ShuffleExpr, Sign};

fn p(text: &str) -> Rf {
    parse_rational(text).unwrap()
}

fn tuple(parts: &[&[u32]]) -> NTuplePartition {
    NTuplePartition::new(parts.iter().map(|p| p.to_vec()).collect()).unwrap()
}

fn module(n: usize) -> KModule {
    KModule::new(Params::symbolic(n).unwrap())
}

#[test]
fn identity_and_containment() {
    let km = module(2);
    let lambda = tuple(&[&[1], &[1]]);
    let one = ShuffleExpr::one(Sign::Plus, 2);
    assert!(km.matcoeff(&one, &lambda, &lambda).unwrap().equals(&Rf::one()));
    let e = ShuffleExpr::make_e(2, 2, 3).unwrap();
    assert!(km.matcoeff(&e, &tuple(&[&[2], &[]]), &tuple(&[&[], &[1]])).unwrap().is_zero());
}

#[test]
fn single_box_coefficient() {
    let km = module(2);
    let z0 = ShuffleExpr::power(Sign::Plus, 2, 1, 0);
    let got = km.matcoeff(&z0, &tuple(&[&[1], &[]]), &NTuplePartition::empty(2).unwrap()).unwrap();
    let want = p("q^-1 - q").mul(&p("u2*q^-1 - u1^2*q*u2^-1"));
    assert!(got.equals(&want), "{got}");
}

#[test]
fn apply_examples() {
    let km = module(2);
    let v = KVector::basis(tuple(&[&[1], &[]]));
    assert!(km.apply(&ShuffleExpr::one(Sign::Minus, 2), &v).unwrap().equals(&v));
    let vacuum = KVector::vacuum(2);
    assert!(km.apply(&ShuffleExpr::make_f(2, 1, 2).unwrap(), &vacuum).unwrap().is_zero());
    let e = ShuffleExpr::make_e(2, 1, 2).unwrap();
    let raised = km.apply(&e, &vacuum).unwrap();
    let target = tuple(&[&[1], &[]]);
    assert_eq!(raised.iter().count(), 1);
    let c = km.matcoeff(&e, &target, &NTuplePartition::empty(2).unwrap()).unwrap();
    assert!(raised.coeff(&target).equals(&c));
}

#[test]
fn blocks_hold_matrix_coefficients() {
    let km = module(3);
    let e = ShuffleExpr::make_e(3, 2, 4).unwrap();
    let source = DegreeVector(vec![1, 0, 1]);
    let block = km.block(&e, &source).unwrap();
    assert_eq!(block.target, DegreeVector(vec![1, 1, 2]));
    for (r, lambda) in block.targets.iter().enumerate() {
        for (c, mu) in block.sources.iter().enumerate() {
            assert!(block.entries[r][c].equals(&km.matcoeff(&e, lambda, mu).unwrap()));
        }
    }
    assert!(km.block(&e, &source).unwrap().equals(&block));
}

#[test]
fn cartan_on_the_vacuum() {
    let km = module(3);
    let vacuum = NTuplePartition::empty(3).unwrap();
    for i in 1..=3usize {
        let plus = km.psi_series_coeff(i, 0, Sign::Plus, &vacuum).unwrap();
        let minus = km.psi_series_coeff(i, 0, Sign::Minus, &vacuum).unwrap();
        assert!(plus.equals(&p(&format!("q^{i}*u{i}^-1"))));
        assert!(minus.equals(&p(&format!("q^-{i}*u{i}"))));
    }
}

#[test]
fn first_heisenberg_generator_is_the_rescaled_group_like_element() {
    let km = module(2);
    let qb = km.params().qb().clone();
    for d in DegreeVector::all_up_to(2, 2) {
        let p1 = km.heisenberg(Sign::Plus, 1, &d).unwrap().unwrap();
        let g1 = km.block(&ShuffleExpr::make_g(Sign::Plus, DegreeVector(vec![1, 1])), &d).unwrap();
        assert!(p1.equals(&g1.scale(&qb)), "{d}");
    }
}

#[test]
fn second_heisenberg_generator_from_the_logarithm() {
    let km = module(2);
    let qb = km.params().qb().clone();
    for d in [DegreeVector(vec![0, 0]), DegreeVector(vec![1, 0])] {
        let p2 = km.heisenberg(Sign::Plus, 2, &d).unwrap().unwrap();
        let g1 = ShuffleExpr::make_g(Sign::Plus, DegreeVector(vec![1, 1]));
        let g2 = km.block(&ShuffleExpr::make_g(Sign::Plus, DegreeVector(vec![2, 2])), &d).unwrap();
        let first = km.block(&g1, &d).unwrap();
        let square = km.block(&g1, &first.target).unwrap().compose(&first);
        let want = g2.scale(&qb.pow(4).unwrap().mul(&Rf::from_int(2))).sub(&square.scale(&qb.pow(2).unwrap()));
        assert!(p2.equals(&want), "{d}");
    }
}

#[test]
fn heisenberg_scalar_at_rank_two() {
    let params = Params::symbolic(2).unwrap();
    let c = p("q^2*qb");
    let num = p("q^2 - q^-2").mul(&c.sub(&c.inv().unwrap()));
    let den = p("qb - qb^-1").mul(&p("q^2*qb - q^-2*qb^-1"));
    assert!(heisenberg_scalar(&params, 1).equals(&num.div(&den).unwrap()));
}

#[test]
fn root_generators_commute_with_themselves() {
    let km = module(2);
    let e = ShuffleExpr::make_e(2, 1, 2).unwrap();
    for d in DegreeVector::all_up_to(2, 2) {
        assert!(km.commutator(&e, &e, &d).unwrap().is_zero());
    }
}

#[test]
fn at_rank_three_every_pair_of_colors_is_adjacent() {
    // Colors 1 and 3 are neighbours modulo 3, so their raising operators do
    // not commute.
    let km = module(3);
    let (e1, e3) = (ShuffleExpr::make_e(3, 1, 2).unwrap(), ShuffleExpr::make_e(3, 3, 4).unwrap());
    let nonzero = DegreeVector::all_up_to(3, 2).iter().any(|d| !km.commutator(&e1, &e3, d).unwrap().is_zero());
    assert!(nonzero);
}

#[test]
fn lowering_then_raising_is_diagonal() {
    let km = module(2);
    for i in 1..=2 {
        let (e, f) = (ShuffleExpr::make_e(2, i, i + 1).unwrap(), ShuffleExpr::make_f(2, i, i + 1).unwrap());
        for d in DegreeVector::all_up_to(2, 3) {
            assert!(km.commutator(&e, &f, &d).unwrap().is_diagonal());
        }
    }
}

#[test]
fn vectors_serialize_as_pairs() {
    let km = module(2);
    let v = km.apply(&ShuffleExpr::make_e(2, 1, 2).unwrap(), &KVector::vacuum(2)).unwrap();
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json[0][0], serde_json::json!([[1], []]));
    assert!(json[0][1].is_string());
    assert_eq!(fixed_points_up_to(2, 0).unwrap(), vec![NTuplePartition::empty(2).unwrap()]);
}
