use std::collections::BTreeSet;

use proptest::prelude::*;
use toroidal_core::combinatorics::*;
use toroidal_core::field::{Monomial, Var};
use toroidal_core::params::{box_weight, box_weight_as_color};

fn tuple(parts: &[&[u32]]) -> NTuplePartition {
    NTuplePartition::new(parts.iter().map(|p| p.to_vec()).collect()).unwrap()
}

fn deg(d: &[u32]) -> DegreeVector {
    DegreeVector(d.to_vec())
}

/// Every weakly decreasing sequence of positive integers summing to `m`,
/// found by filtering all compositions.
fn partitions_by_filter(m: u32) -> Vec<Vec<u32>> {
    fn compositions(m: u32) -> Vec<Vec<u32>> {
        if m == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=m {
            for mut rest in compositions(m - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    compositions(m).into_iter().filter(|c| c.windows(2).all(|w| w[0] >= w[1])).collect()
}

fn all_tuples_brute(n: usize, size: u32) -> Vec<NTuplePartition> {
    let mut out = vec![Vec::<Vec<u32>>::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            let used: u32 = prefix.iter().flatten().sum();
            for m in 0..=size - used {
                for p in partitions_by_filter(m) {
                    let mut t = prefix.clone();
                    t.push(p);
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out.into_iter()
        .filter(|t| t.iter().flatten().sum::<u32>() == size)
        .map(|t| NTuplePartition::new(t).unwrap())
        .collect()
}

fn permutations(items: &[Cell]) -> Vec<Vec<Cell>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for idx in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(idx);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// All labellings of the skew by the arc passing the given validity test.
fn brute_labellings(skew: &SkewShape, arc: &Arc, valid: impl Fn(&Tableau) -> bool) -> BTreeSet<Vec<Cell>> {
    if skew.len() != arc.len() {
        return BTreeSet::new();
    }
    permutations(&skew.cells())
        .into_iter()
        .map(|labels| Tableau { skew: skew.clone(), arc: *arc, labels })
        .filter(|t| valid(t))
        .map(|t| t.labels)
        .collect()
}

fn small_pairs(n: usize, max: u32) -> Vec<(NTuplePartition, NTuplePartition)> {
    let all: Vec<_> = (0..=max).flat_map(|m| all_tuples_brute(n, m)).collect();
    let mut out = Vec::new();
    for l in &all {
        for m in &all {
            if l.contains(m) {
                out.push((l.clone(), m.clone()));
            }
        }
    }
    out
}

#[test]
fn degree_examples() {
    assert_eq!(tuple(&[&[], &[]]).degree(), deg(&[0, 0]));
    assert_eq!(tuple(&[&[1, 1], &[]]).degree(), deg(&[1, 1]));
    assert_eq!(tuple(&[&[2], &[]]).degree(), deg(&[2, 0]));
}

#[test]
fn rank_one_is_rejected() {
    assert_eq!(NTuplePartition::new(vec![vec![1]]), Err(CombinatoricsError::RankTooSmall(1)));
    assert!(enumerate_fixed_points(1, &deg(&[1])).is_err());
    assert!(NTuplePartition::new(vec![vec![1, 2], vec![]]).is_err());
}

#[test]
fn fixed_point_examples() {
    assert_eq!(enumerate_fixed_points(2, &deg(&[1, 0])).unwrap(), vec![tuple(&[&[1], &[]])]);
    assert_eq!(
        enumerate_fixed_points(2, &deg(&[1, 1])).unwrap(),
        vec![tuple(&[&[1, 1], &[]]), tuple(&[&[1], &[1]]), tuple(&[&[], &[1, 1]])]
    );
    assert_eq!(enumerate_fixed_points(2, &deg(&[0, 0])).unwrap(), vec![tuple(&[&[], &[]])]);
}

#[test]
fn fixed_points_match_brute_force() {
    for n in [2, 3] {
        for size in 0..=5 {
            let brute = all_tuples_brute(n, size);
            for d in DegreeVector::all_up_to(n, size).into_iter().filter(|d| d.total() == size) {
                let want: BTreeSet<_> = brute.iter().filter(|l| l.degree() == d).cloned().collect();
                let got = enumerate_fixed_points(n, &d).unwrap();
                assert_eq!(got.len(), want.len(), "n={n} d={d}");
                assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want);
            }
        }
    }
}

#[test]
fn corner_examples() {
    assert!(corners(&tuple(&[&[], &[]]), CornerKind::Outer, 1).is_empty());
    let l = tuple(&[&[1], &[]]);
    assert_eq!(corners(&l, CornerKind::Outer, 1), vec![Cell::new(1, 0, 0)]);
    assert_eq!(corners(&l, CornerKind::Inner, 2), vec![Cell::new(1, 1, 0), Cell::new(2, 0, 0)]);
}

#[test]
fn corners_change_degree_by_unit_vectors() {
    for n in [2, 3] {
        for size in 0..=4 {
            for l in all_tuples_brute(n, size) {
                for color in 1..=n as i64 {
                    let mut unit = vec![0; n];
                    unit[color as usize - 1] = 1;
                    let unit = DegreeVector(unit);
                    for c in corners(&l, CornerKind::Outer, color) {
                        let smaller = l.without_cell(&c).unwrap();
                        assert_eq!(smaller.degree().add(&unit), l.degree());
                    }
                    for c in corners(&l, CornerKind::Inner, color) {
                        let bigger = l.with_cell(&c).unwrap();
                        assert_eq!(bigger.degree(), l.degree().add(&unit));
                    }
                }
            }
        }
    }
}

#[test]
fn box_weight_examples() {
    let u = |k| Var::u(k);
    assert_eq!(box_weight(&Cell::new(1, 0, 0)), Monomial::power(u(1), 2));
    assert_eq!(box_weight(&Cell::new(3, 0, 2)), Monomial::from_pairs([(u(3), 2), (Var::q(), 4)]));
    assert_eq!(
        box_weight_as_color(&Cell::new(1, 2, 0), 1, 2).unwrap(),
        Monomial::from_pairs([(u(1), 2), (Var::qb(), 2)])
    );
    assert!(box_weight_as_color(&Cell::new(1, 2, 0), 2, 2).is_err());
}

#[test]
fn tableau_examples() {
    let n = 2;
    let empty = tuple(&[&[], &[]]);
    let skew = SkewShape::new(empty.clone(), empty.clone()).unwrap();
    assert_eq!(enumerate_syt(&skew, &Arc::new(1, 1, n).unwrap()).len(), 1);

    let one = SkewShape::new(tuple(&[&[1], &[]]), empty.clone()).unwrap();
    assert_eq!(enumerate_syt(&one, &Arc::new(1, 2, n).unwrap()).len(), 1);
    assert_eq!(enumerate_asyt(&one, &Arc::new(1, 2, n).unwrap()).len(), 1);

    let domino = SkewShape::new(tuple(&[&[1, 1], &[]]), empty.clone()).unwrap();
    let syts = enumerate_syt(&domino, &Arc::new(1, 3, n).unwrap());
    assert_eq!(syts.len(), 1);
    assert_eq!(syts[0].labels, vec![Cell::new(1, 0, 0), Cell::new(1, 1, 0)]);
    let asyts = enumerate_asyt(&domino, &Arc::new(1, 3, n).unwrap());
    assert_eq!(asyts.len(), 1);
    assert_eq!(asyts[0].tableau.cell(2), Cell::new(1, 1, 0));

    let flat = SkewShape::new(tuple(&[&[2], &[]]), empty).unwrap();
    assert!(enumerate_asyt(&flat, &Arc::new(1, 3, n).unwrap()).is_empty());
    assert!(enumerate_syt(&flat, &Arc::new(1, 3, n).unwrap()).is_empty());
}

#[test]
fn tableaux_match_brute_force_labellings() {
    for (n, max) in [(2, 4), (3, 3)] {
        for (l, m) in small_pairs(n, max) {
            let skew = SkewShape::new(l.clone(), m.clone()).unwrap();
            let size = skew.len() as i64;
            if size == 0 {
                continue;
            }
            for i in 1..=n as i64 {
                let arc = Arc::new(i, i + size, n).unwrap();
                let syt: BTreeSet<_> = enumerate_syt(&skew, &arc).into_iter().map(|t| t.labels).collect();
                assert_eq!(syt, brute_labellings(&skew, &arc, Tableau::is_standard), "SYT {l} {m} {arc}");
                let asyt: BTreeSet<_> =
                    enumerate_asyt(&skew, &arc).into_iter().map(|t| t.tableau.labels).collect();
                assert_eq!(asyt, brute_labellings(&skew, &arc, Tableau::is_almost_standard), "ASYT {l} {m} {arc}");
            }
        }
    }
}

#[test]
fn tableau_flags_are_consistent() {
    for (l, m) in small_pairs(2, 4) {
        let skew = SkewShape::new(l.clone(), m.clone()).unwrap();
        let size = skew.len() as i64;
        for i in 1..=2 {
            let arc = Arc::new(i, i + size, 2).unwrap();
            for t in enumerate_syt(&skew, &arc) {
                let chain = t.chain();
                assert_eq!(chain.first(), Some(&m));
                assert_eq!(chain.last(), Some(&l));
                for w in chain.windows(2) {
                    assert_eq!(w[1].size(), w[0].size() + 1);
                }
            }
            for t in enumerate_asyt(&skew, &arc) {
                assert!(t.cutoffs.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(t.flag.first(), Some(&l));
                assert_eq!(t.flag.last(), Some(&m));
                for s in 1..=t.strip_count() {
                    let labels: Vec<_> = t.strip_labels(s).map(|a| t.tableau.cell(a)).collect();
                    assert!(labels.windows(2).all(|w| w[1] == w[0].above()));
                }
            }
        }
    }
}

#[test]
fn strip_examples() {
    let empty = tuple(&[&[], &[]]);
    let none = SkewShape::new(empty.clone(), empty.clone()).unwrap();
    assert_eq!(strip_decomposition(&none).unwrap().strips.len(), 0);
    let domino = SkewShape::new(tuple(&[&[1, 1], &[]]), empty.clone()).unwrap();
    assert_eq!(strip_decomposition(&domino).unwrap().strips.len(), 1);
    let flat = SkewShape::new(tuple(&[&[2], &[]]), empty).unwrap();
    assert!(strip_decomposition(&flat).is_none());
}

#[test]
fn strips_exist_iff_no_horizontal_neighbours() {
    for (l, m) in small_pairs(2, 5) {
        let skew = SkewShape::new(l, m).unwrap();
        let cells: BTreeSet<_> = skew.cells().into_iter().collect();
        let adjacent = cells.iter().any(|c| cells.contains(&Cell { x: c.x + 1, ..*c }));
        match strip_decomposition(&skew) {
            None => assert!(adjacent),
            Some(dec) => {
                assert!(!adjacent);
                assert_eq!(dec.cell_count(), cells.len());
                let covered: BTreeSet<_> = dec.strips.iter().flat_map(|s| s.cells.clone()).collect();
                assert_eq!(covered, cells);
            }
        }
    }
}

#[test]
fn refinement_examples() {
    let single = StripDecomposition { strips: vec![Strip { cells: vec![Cell::new(1, 0, 0)] }] };
    assert_eq!(enumerate_refinements(&single, 2).len(), 1);
    let domino = StripDecomposition { strips: vec![Strip { cells: vec![Cell::new(1, 0, 0), Cell::new(1, 1, 0)] }] };
    let r = enumerate_refinements(&domino, 2);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].len(), 1);
    let two = StripDecomposition {
        strips: vec![Strip { cells: vec![Cell::new(1, 0, 0)] }, Strip { cells: vec![Cell::new(2, 1, 0)] }],
    };
    let r = enumerate_refinements(&two, 2);
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|seq| seq.len() == 2));
    assert_ne!(r[0], r[1]);
    // different colors: the starting color fixes the order
    let mixed = StripDecomposition {
        strips: vec![Strip { cells: vec![Cell::new(1, 0, 0)] }, Strip { cells: vec![Cell::new(2, 0, 0)] }],
    };
    assert_eq!(enumerate_refinements(&mixed, 2).len(), 1);
}

#[test]
fn arc_examples() {
    assert_eq!(count_arc_partitions(&deg(&[1, 0])), 1);
    let parts = enumerate_arc_partitions(&deg(&[1, 1]));
    assert_eq!(parts.len(), 3);
    let as_sets: BTreeSet<Vec<(i64, i64, u32)>> =
        parts.iter().map(|m| m.iter().map(|(a, k)| (a.i, a.j, *k)).collect()).collect();
    let want: BTreeSet<Vec<(i64, i64, u32)>> =
        [vec![(1, 3, 1)], vec![(2, 4, 1)], vec![(1, 2, 1), (2, 3, 1)]].into_iter().collect();
    assert_eq!(as_sets, want);
}

#[test]
fn arc_collections_round_trip() {
    for n in [2, 3] {
        for d in DegreeVector::all_up_to(n, 4) {
            for m in enumerate_arc_partitions(&d) {
                let coll = collection_from_arcs(n, &m);
                assert_eq!(arcs_from_collection(&coll).unwrap(), m);
            }
        }
    }
    let bad = ArcCollection { n: 2, rows: vec![vec![1, 2], vec![]] };
    assert!(arcs_from_collection(&bad).is_err());
}

#[test]
fn arc_count_equals_fixed_point_count() {
    for n in [2, 3] {
        for d in DegreeVector::all_up_to(n, 5) {
            assert_eq!(count_arc_partitions(&d), enumerate_fixed_points(n, &d).unwrap().len(), "n={n} d={d}");
        }
    }
}

#[test]
fn json_shapes() {
    let l = tuple(&[&[2, 1], &[]]);
    assert_eq!(serde_json::to_string(&l).unwrap(), "[[2,1],[]]");
    assert_eq!(serde_json::to_string(&Cell::new(1, 1, 0)).unwrap(), "[1,1,0]");
    let back: NTuplePartition = serde_json::from_str("[[2,1],[]]").unwrap();
    assert_eq!(back, l);
    assert!(serde_json::from_str::<NTuplePartition>("[[1,2],[]]").is_err());
}

proptest! {
    #[test]
    fn arc_canonicalization_is_periodic(i in -10i64..10, len in 1i64..6, n in 2usize..4) {
        let a = Arc::new(i, i + len, n).unwrap();
        let b = Arc::new(i + n as i64, i + len + n as i64, n).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.i >= 1 && a.i <= n as i64);
        prop_assert_eq!(a.degree(n).total() as i64, len);
    }
}
