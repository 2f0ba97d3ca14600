//! n-tuples of partitions and their colored boxes, skew shapes, standard and
//! almost standard tableaux, vertical strips, and arc partitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::{SerializeSeq, SerializeTuple};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("n must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("component {0} is not a partition (rows must weakly decrease and be positive)")]
    NotAPartition(usize),
    #[error("expected {expected} components, got {got}")]
    WrongComponentCount { expected: usize, got: usize },
    #[error("inner shape is not contained in the outer shape")]
    NotContained,
    #[error("color {color} is not congruent to {target} mod {n}")]
    ColorMismatch { color: i64, target: i64, n: usize },
    #[error("invalid arc collection: {0}")]
    InvalidCollection(String),
    #[error("invalid arc [{0};{1})")]
    InvalidArc(i64, i64),
}

/// Residue of an integer color, in `1..=n`.
pub fn residue(color: i64, n: usize) -> usize {
    ((color - 1).rem_euclid(n as i64) + 1) as usize
}

/// `floor((color - 1) / n)`: how many full turns separate `color` from its residue.
pub fn turns(color: i64, n: usize) -> i64 {
    (color - 1).div_euclid(n as i64)
}

/// A box of an n-tuple of partitions: component `k` (1-based), row `y`, column `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
pub struct Cell {
    pub k: usize,
    pub y: u32,
    pub x: u32,
}

impl Cell {
    pub fn new(k: usize, y: u32, x: u32) -> Cell {
        Cell { k, y, x }
    }

    /// The integer color `y + k`.
    pub fn color(&self) -> i64 {
        self.y as i64 + self.k as i64
    }

    pub fn residue(&self, n: usize) -> usize {
        residue(self.color(), n)
    }

    pub fn above(&self) -> Cell {
        Cell { y: self.y + 1, ..*self }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&self.k)?;
        t.serialize_element(&self.y)?;
        t.serialize_element(&self.x)?;
        t.end()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.k, self.y, self.x)
    }
}

/// Number of boxes of each residue color, indexed by color `1..=n` at position `color - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(pub Vec<u32>);

impl DegreeVector {
    pub fn zero(n: usize) -> Self {
        DegreeVector(vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn at(&self, color: i64) -> u32 {
        self.0[residue(color, self.n()) - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        DegreeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when nonnegative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(DegreeVector)
    }

    /// All degree vectors in `n` colors with total at most `max`.
    pub fn all_up_to(n: usize, max: u32) -> Vec<DegreeVector> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<DegreeVector>) {
            if cur.len() == n {
                out.push(DegreeVector(cur.clone()));
                return;
            }
            for d in 0..=left {
                cur.push(d);
                rec(n, left - d, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max, &mut Vec::new(), &mut out);
        out.sort_by_key(|d| (d.total(), d.0.clone()));
        out
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An n-tuple of integer partitions, `n >= 2`; a torus fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NTuplePartition {
    parts: Vec<Vec<u32>>,
}

impl NTuplePartition {
    pub fn new(parts: Vec<Vec<u32>>) -> Result<Self, CombinatoricsError> {
        if parts.len() < 2 {
            return Err(CombinatoricsError::RankTooSmall(parts.len()));
        }
        for (idx, p) in parts.iter().enumerate() {
            if p.contains(&0) || p.windows(2).any(|w| w[0] < w[1]) {
                return Err(CombinatoricsError::NotAPartition(idx + 1));
            }
        }
        Ok(NTuplePartition { parts })
    }

    pub fn empty(n: usize) -> Result<Self, CombinatoricsError> {
        Self::new(vec![Vec::new(); n])
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    /// Length of row `y` of component `k` (0 past the last row).
    pub fn row(&self, k: usize, y: u32) -> u32 {
        self.parts[k - 1].get(y as usize).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().flatten().map(|&r| r as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|p| p.is_empty())
    }

    pub fn contains_cell(&self, c: &Cell) -> bool {
        c.k >= 1 && c.k <= self.n() && c.x < self.row(c.k, c.y)
    }

    /// Boxes ordered by component, row, column.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size());
        for (ki, p) in self.parts.iter().enumerate() {
            for (y, &len) in p.iter().enumerate() {
                for x in 0..len {
                    out.push(Cell::new(ki + 1, y as u32, x));
                }
            }
        }
        out
    }

    pub fn degree(&self) -> DegreeVector {
        let n = self.n();
        let mut d = vec![0; n];
        for c in self.cells() {
            d[c.residue(n) - 1] += 1;
        }
        DegreeVector(d)
    }

    /// Number of boxes whose color is congruent to `color`.
    pub fn count_color(&self, color: i64) -> u32 {
        self.degree().at(color)
    }

    pub fn contains(&self, other: &NTuplePartition) -> bool {
        self.n() == other.n()
            && (1..=self.n()).all(|k| {
                let (a, b) = (&self.parts[k - 1], &other.parts[k - 1]);
                b.len() <= a.len() && a.iter().zip(b).all(|(x, y)| y <= x)
            })
    }

    pub fn with_cell(&self, c: &Cell) -> Option<NTuplePartition> {
        let p = &self.parts[c.k - 1];
        let len = p.get(c.y as usize).copied().unwrap_or(0);
        let addable = len == c.x && (c.y == 0 || self.row(c.k, c.y - 1) > len);
        if !addable {
            return None;
        }
        let mut parts = self.parts.clone();
        let row = &mut parts[c.k - 1];
        if (c.y as usize) == row.len() {
            row.push(1);
        } else {
            row[c.y as usize] += 1;
        }
        Some(NTuplePartition { parts })
    }

    pub fn without_cell(&self, c: &Cell) -> Option<NTuplePartition> {
        let p = &self.parts[c.k - 1];
        let len = p.get(c.y as usize).copied().unwrap_or(0);
        let below = p.get(c.y as usize + 1).copied().unwrap_or(0);
        if len == 0 || c.x + 1 != len || below == len {
            return None;
        }
        let mut parts = self.parts.clone();
        let row = &mut parts[c.k - 1];
        row[c.y as usize] -= 1;
        if row[c.y as usize] == 0 {
            row.pop();
        }
        Some(NTuplePartition { parts })
    }
}

impl fmt::Display for NTuplePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(&self.parts).unwrap())
    }
}

impl<'de> Deserialize<'de> for NTuplePartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<Vec<u32>>::deserialize(d)?;
        NTuplePartition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `m`, largest first.
pub fn partitions_of(m: u32) -> Vec<Vec<u32>> {
    fn rec(m: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=m.min(max)).rev() {
            cur.push(part);
            rec(m - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

/// All n-tuples of partitions of the given degree, in decreasing
/// lexicographic order of their component sequences.
pub fn enumerate_fixed_points(n: usize, d: &DegreeVector) -> Result<Vec<NTuplePartition>, CombinatoricsError> {
    if n < 2 {
        return Err(CombinatoricsError::RankTooSmall(n));
    }
    if d.n() != n {
        return Err(CombinatoricsError::WrongComponentCount { expected: n, got: d.n() });
    }
    let total = d.total();
    let mut out = Vec::new();
    let mut cur: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut counts = vec![0u32; n];
    fill_components(n, total, d, &mut cur, &mut counts, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// All fixed points with at most `max` boxes, by size and then in the order of
/// [`enumerate_fixed_points`].
pub fn fixed_points_up_to(n: usize, max: u32) -> Result<Vec<NTuplePartition>, CombinatoricsError> {
    let mut out = Vec::new();
    for size in 0..=max {
        for d in DegreeVector::all_up_to(n, size).into_iter().filter(|d| d.total() == size) {
            out.extend(enumerate_fixed_points(n, &d)?);
        }
    }
    Ok(out)
}

fn fill_components(
    n: usize,
    left: u32,
    d: &DegreeVector,
    cur: &mut Vec<Vec<u32>>,
    counts: &mut Vec<u32>,
    out: &mut Vec<NTuplePartition>,
) {
    let k = cur.len() + 1;
    if k > n {
        if left == 0 && counts.as_slice() == d.0.as_slice() {
            out.push(NTuplePartition { parts: cur.clone() });
        }
        return;
    }
    for size in 0..=left {
        for p in partitions_of(size) {
            let mut add = vec![0u32; n];
            for (y, &len) in p.iter().enumerate() {
                add[residue(y as i64 + k as i64, n) - 1] += len;
            }
            if (0..n).any(|c| counts[c] + add[c] > d.0[c]) {
                continue;
            }
            for c in 0..n {
                counts[c] += add[c];
            }
            cur.push(p);
            fill_components(n, left - size, d, cur, counts, out);
            cur.pop();
            for c in 0..n {
                counts[c] -= add[c];
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerKind {
    /// Removable boxes.
    Outer,
    /// Addable boxes.
    Inner,
}

/// Removable (outer) or addable (inner) boxes whose color is congruent to `color`.
pub fn corners(lambda: &NTuplePartition, kind: CornerKind, color: i64) -> Vec<Cell> {
    let n = lambda.n();
    let target = residue(color, n);
    let mut out = Vec::new();
    for k in 1..=n {
        let p = &lambda.parts[k - 1];
        let rows = p.len() as u32;
        match kind {
            CornerKind::Outer => {
                for y in 0..rows {
                    if lambda.row(k, y) > lambda.row(k, y + 1) {
                        out.push(Cell::new(k, y, lambda.row(k, y) - 1));
                    }
                }
            }
            CornerKind::Inner => {
                for y in 0..=rows {
                    if y == 0 || lambda.row(k, y - 1) > lambda.row(k, y) {
                        out.push(Cell::new(k, y, lambda.row(k, y)));
                    }
                }
            }
        }
    }
    out.retain(|c| c.residue(n) == target);
    out
}

/// A half-open color interval `[i;j)`, stored with `i` in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub i: i64,
    pub j: i64,
}

impl Arc {
    pub fn new(i: i64, j: i64, n: usize) -> Result<Arc, CombinatoricsError> {
        if j < i {
            return Err(CombinatoricsError::InvalidArc(i, j));
        }
        let shift = turns(i, n) * n as i64;
        Ok(Arc { i: i - shift, j: j - shift })
    }

    pub fn len(&self) -> usize {
        (self.j - self.i) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.j <= self.i
    }

    pub fn colors(&self) -> std::ops::Range<i64> {
        self.i..self.j
    }

    pub fn degree(&self, n: usize) -> DegreeVector {
        let mut d = vec![0; n];
        for a in self.colors() {
            d[residue(a, n) - 1] += 1;
        }
        DegreeVector(d)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{})", self.i, self.j)
    }
}

/// `outer` minus `inner`, with `inner` contained in `outer`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SkewShape {
    outer: NTuplePartition,
    inner: NTuplePartition,
}

impl SkewShape {
    pub fn new(outer: NTuplePartition, inner: NTuplePartition) -> Result<SkewShape, CombinatoricsError> {
        if !outer.contains(&inner) {
            return Err(CombinatoricsError::NotContained);
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn outer(&self) -> &NTuplePartition {
        &self.outer
    }

    pub fn inner(&self) -> &NTuplePartition {
        &self.inner
    }

    pub fn n(&self) -> usize {
        self.outer.n()
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.outer.cells().into_iter().filter(|c| !self.inner.contains_cell(c)).collect()
    }

    pub fn len(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self) -> DegreeVector {
        self.outer.degree().checked_sub(&self.inner.degree()).expect("contained shapes")
    }
}

/// A labelling of the boxes of a skew shape by the colors of an arc, each
/// label congruent to the color of its box.
///
/// `labels[a - arc.i]` is the box carrying label `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    pub skew: SkewShape,
    pub arc: Arc,
    pub labels: Vec<Cell>,
}

impl Tableau {
    pub fn cell(&self, label: i64) -> Cell {
        self.labels[(label - self.arc.i) as usize]
    }

    pub fn label_of(&self, c: &Cell) -> Option<i64> {
        self.labels.iter().position(|x| x == c).map(|p| self.arc.i + p as i64)
    }

    /// Partitions `μ = ν^i ⊂ ν^{i+1} ⊂ … ⊂ ν^j = λ` obtained by adding the
    /// boxes in label order.
    pub fn chain(&self) -> Vec<NTuplePartition> {
        let mut cur = self.skew.inner.clone();
        let mut out = vec![cur.clone()];
        for c in &self.labels {
            cur = cur.with_cell(c).expect("labels added in a valid order");
            out.push(cur.clone());
        }
        out
    }

    /// Boxes of `inner` together with the boxes labelled below `label`.
    pub fn cells_before(&self, label: i64) -> Vec<Cell> {
        let mut out = self.skew.inner.cells();
        out.extend(self.labels[..(label - self.arc.i) as usize].iter().copied());
        out
    }

    /// Labels increase going up and going right.
    pub fn is_standard(&self) -> bool {
        self.labels_ok(|lower, upper, _| lower < upper)
    }

    /// Labels decrease going up and going right, except that `a` may sit
    /// directly above `a - 1`.
    pub fn is_almost_standard(&self) -> bool {
        self.labels_ok(|lower, upper, vertical| lower > upper || (vertical && upper == lower + 1))
    }

    fn labels_ok(&self, ok: impl Fn(i64, i64, bool) -> bool) -> bool {
        let n = self.skew.n();
        if self.labels.len() != self.skew.len() {
            return false;
        }
        for (idx, c) in self.labels.iter().enumerate() {
            let a = self.arc.i + idx as i64;
            if !self.skew.outer.contains_cell(c) || self.skew.inner.contains_cell(c) {
                return false;
            }
            if residue(a, n) != c.residue(n) {
                return false;
            }
        }
        let mut seen = BTreeSet::new();
        if !self.labels.iter().all(|c| seen.insert(*c)) {
            return false;
        }
        for c in &self.labels {
            let a = self.label_of(c).unwrap();
            if let Some(b) = self.label_of(&c.above()) {
                if !ok(a, b, true) {
                    return false;
                }
            }
            if let Some(b) = self.label_of(&Cell { x: c.x + 1, ..*c }) {
                if !ok(a, b, false) {
                    return false;
                }
            }
        }
        true
    }
}

impl Serialize for Tableau {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.labels.len()))?;
        for (idx, c) in self.labels.iter().enumerate() {
            seq.serialize_element(&(c, self.arc.i + idx as i64))?;
        }
        seq.end()
    }
}

/// Standard tableaux of the given shape and arc, built as chains of added inner corners.
pub fn enumerate_syt(skew: &SkewShape, arc: &Arc) -> Vec<Tableau> {
    let n = skew.n();
    if skew.degree() != arc.degree(n) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut labels = Vec::with_capacity(arc.len());
    syt_step(skew, arc, arc.i, skew.inner.clone(), &mut labels, &mut out);
    out
}

fn syt_step(skew: &SkewShape, arc: &Arc, a: i64, cur: NTuplePartition, labels: &mut Vec<Cell>, out: &mut Vec<Tableau>) {
    if a == arc.j {
        if cur == skew.outer {
            out.push(Tableau { skew: skew.clone(), arc: *arc, labels: labels.clone() });
        }
        return;
    }
    for c in corners(&cur, CornerKind::Inner, a) {
        if !skew.outer.contains_cell(&c) {
            continue;
        }
        let next = cur.with_cell(&c).unwrap();
        labels.push(c);
        syt_step(skew, arc, a + 1, next, labels, out);
        labels.pop();
    }
}

/// An almost standard tableau with its partial flag
/// `λ = ν^0 ⊃ ν^1 ⊃ … ⊃ ν^t = μ`, where `ν^{s-1} ∖ ν^s` is a vertical strip
/// carrying labels `cutoffs[s-1]..cutoffs[s]` from bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlmostStandardTableau {
    pub tableau: Tableau,
    pub cutoffs: Vec<i64>,
    pub flag: Vec<NTuplePartition>,
}

impl AlmostStandardTableau {
    pub fn strip_count(&self) -> usize {
        self.cutoffs.len() - 1
    }

    /// Labels of strip `s` (1-based).
    pub fn strip_labels(&self, s: usize) -> std::ops::Range<i64> {
        self.cutoffs[s - 1]..self.cutoffs[s]
    }
}

/// Almost standard tableaux, enumerated through flags that peel vertical
/// strips off the outer shape in increasing label order.
pub fn enumerate_asyt(skew: &SkewShape, arc: &Arc) -> Vec<AlmostStandardTableau> {
    let n = skew.n();
    if skew.degree() != arc.degree(n) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut state = FlagState { cutoffs: vec![arc.i], flag: vec![skew.outer.clone()], labels: Vec::new() };
    asyt_step(skew, arc, &mut state, &mut out);
    out
}

struct FlagState {
    cutoffs: Vec<i64>,
    flag: Vec<NTuplePartition>,
    labels: Vec<Cell>,
}

fn asyt_step(skew: &SkewShape, arc: &Arc, st: &mut FlagState, out: &mut Vec<AlmostStandardTableau>) {
    let a = *st.cutoffs.last().unwrap();
    let cur = st.flag.last().unwrap().clone();
    let n = skew.n();
    if a == arc.j {
        if cur == skew.inner {
            out.push(AlmostStandardTableau {
                tableau: Tableau { skew: skew.clone(), arc: *arc, labels: st.labels.clone() },
                cutoffs: st.cutoffs.clone(),
                flag: st.flag.clone(),
            });
        }
        return;
    }
    for b in a + 1..=arc.j {
        let len = (b - a) as u32;
        for k in 1..=n {
            let rows = cur.parts[k - 1].len() as u32;
            for y0 in 0..rows {
                if residue(y0 as i64 + k as i64, n) != residue(a, n) || y0 + len > rows {
                    continue;
                }
                let x = cur.row(k, y0) - 1;
                if (y0..y0 + len).any(|y| cur.row(k, y) != x + 1) || cur.row(k, y0 + len) > x {
                    continue;
                }
                let mut parts = cur.parts.clone();
                for y in y0..y0 + len {
                    parts[k - 1][y as usize] -= 1;
                }
                while parts[k - 1].last() == Some(&0) {
                    parts[k - 1].pop();
                }
                let next = NTuplePartition { parts };
                if !next.contains(&skew.inner) {
                    continue;
                }
                st.cutoffs.push(b);
                st.flag.push(next);
                st.labels.extend((y0..y0 + len).map(|y| Cell::new(k, y, x)));
                asyt_step(skew, arc, st, out);
                st.labels.truncate(st.labels.len() - len as usize);
                st.flag.pop();
                st.cutoffs.pop();
            }
        }
    }
}

/// Boxes of one component stacked in a single column, listed bottom to top;
/// their colors are consecutive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Strip {
    pub cells: Vec<Cell>,
}

impl Strip {
    pub fn bottom(&self) -> Cell {
        self.cells[0]
    }

    pub fn top(&self) -> Cell {
        *self.cells.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Decomposition of a skew shape into maximal vertical strips.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StripDecomposition {
    pub strips: Vec<Strip>,
}

impl StripDecomposition {
    pub fn cell_count(&self) -> usize {
        self.strips.iter().map(Strip::len).sum()
    }
}

/// The decomposition into vertical strips, or `None` when some skew box has
/// another skew box immediately to its right.
pub fn strip_decomposition(skew: &SkewShape) -> Option<StripDecomposition> {
    let cells: BTreeSet<Cell> = skew.cells().into_iter().collect();
    if cells.iter().any(|c| cells.contains(&Cell { x: c.x + 1, ..*c })) {
        return None;
    }
    let mut strips = Vec::new();
    for c in &cells {
        let starts_strip = c.y == 0 || !cells.contains(&Cell { y: c.y - 1, ..*c });
        if !starts_strip {
            continue;
        }
        let mut run = vec![*c];
        while cells.contains(&run.last().unwrap().above()) {
            run.push(run.last().unwrap().above());
        }
        strips.push(Strip { cells: run });
    }
    Some(StripDecomposition { strips })
}

/// Ordered sequences of links refining a strip family.
///
/// At each step the starting color is the smallest residue present among the
/// remaining boxes; a link runs from a box of that residue to the top of its
/// strip, and is cut off before recursing on what is left.
pub fn enumerate_refinements(strips: &StripDecomposition, n: usize) -> Vec<Vec<Strip>> {
    let mut out = Vec::new();
    refine_step(strips.strips.clone(), n, &mut Vec::new(), &mut out);
    out
}

fn refine_step(remaining: Vec<Strip>, n: usize, acc: &mut Vec<Strip>, out: &mut Vec<Vec<Strip>>) {
    let Some(start) = remaining.iter().flat_map(|s| s.cells.iter()).map(|c| c.residue(n)).min() else {
        out.push(acc.clone());
        return;
    };
    for (si, strip) in remaining.iter().enumerate() {
        for (pos, c) in strip.cells.iter().enumerate() {
            if c.residue(n) != start {
                continue;
            }
            let link = Strip { cells: strip.cells[pos..].to_vec() };
            let mut rest = remaining.clone();
            if pos == 0 {
                rest.remove(si);
            } else {
                rest[si] = Strip { cells: strip.cells[..pos].to_vec() };
            }
            acc.push(link);
            refine_step(rest, n, acc, out);
            acc.pop();
        }
    }
}

/// A multiset of arcs.
pub type ArcMultiset = BTreeMap<Arc, u32>;

/// The data `d_{j,i}`: for each start `i` in `1..=n`, the non-increasing
/// sequence `rows[i-1][m] = d_{i+m,i}` = number of arcs `[i;a)` with `a > i+m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcCollection {
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

impl ArcCollection {
    fn validate(&self) -> Result<(), CombinatoricsError> {
        if self.rows.len() != self.n {
            return Err(CombinatoricsError::InvalidCollection(format!(
                "expected {} rows, got {}",
                self.n,
                self.rows.len()
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0] < w[1]) {
                return Err(CombinatoricsError::InvalidCollection(format!("row {} increases", i + 1)));
            }
        }
        Ok(())
    }
}

pub fn collection_from_arcs(n: usize, arcs: &ArcMultiset) -> ArcCollection {
    let mut rows = vec![Vec::new(); n];
    for (arc, &mult) in arcs {
        let row: &mut Vec<u32> = &mut rows[residue(arc.i, n) - 1];
        let len = arc.len();
        if row.len() < len {
            row.resize(len, 0);
        }
        // [i;a) counts towards d_{j,i} for i <= j < a
        for entry in row.iter_mut().take(len) {
            *entry += mult;
        }
    }
    ArcCollection { n, rows }
}

pub fn arcs_from_collection(coll: &ArcCollection) -> Result<ArcMultiset, CombinatoricsError> {
    coll.validate()?;
    let mut out = ArcMultiset::new();
    for (idx, row) in coll.rows.iter().enumerate() {
        let i = idx as i64 + 1;
        for m in 0..row.len() {
            let next = row.get(m + 1).copied().unwrap_or(0);
            let mult = row[m] - next;
            if mult > 0 {
                out.insert(Arc { i, j: i + m as i64 + 1 }, mult);
            }
        }
    }
    Ok(out)
}

/// All multisets of arcs whose colors add up to `d`.
pub fn enumerate_arc_partitions(d: &DegreeVector) -> Vec<ArcMultiset> {
    let n = d.n();
    let max_len = d.total() as i64;
    let mut arcs = Vec::new();
    for len in 1..=max_len {
        for i in 1..=n as i64 {
            let a = Arc { i, j: i + len };
            if d.checked_sub(&a.degree(n)).is_some() {
                arcs.push(a);
            }
        }
    }
    let mut out = Vec::new();
    arc_step(&arcs, 0, d.clone(), &mut ArcMultiset::new(), &mut out);
    out
}

fn arc_step(arcs: &[Arc], from: usize, left: DegreeVector, acc: &mut ArcMultiset, out: &mut Vec<ArcMultiset>) {
    if left.is_zero() {
        out.push(acc.clone());
        return;
    }
    let n = left.n();
    for idx in from..arcs.len() {
        let a = arcs[idx];
        if let Some(rest) = left.checked_sub(&a.degree(n)) {
            *acc.entry(a).or_default() += 1;
            arc_step(arcs, idx, rest, acc, out);
            let e = acc.get_mut(&a).unwrap();
            *e -= 1;
            if *e == 0 {
                acc.remove(&a);
            }
        }
    }
}

pub fn count_arc_partitions(d: &DegreeVector) -> usize {
    enumerate_arc_partitions(d).len()
}
