//! Abstract Coxeter-system combinatorics.
//!
//! Nodes are integer indices `0..n`. A [`CoxeterMatrix`] records the order
//! `m(i, j)` of `s_i s_j`; infinite order is the reserved sentinel
//! [`CoxeterMatrix::INFINITY`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};

/// A subset of the nodes of a Coxeter diagram, stored as a bitset.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSubset(u64);

impl NodeSubset {
    pub const MAX_NODES: usize = 64;

    pub const fn empty() -> Self {
        NodeSubset(0)
    }

    /// All nodes `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= Self::MAX_NODES);
        if n == 64 {
            NodeSubset(u64::MAX)
        } else {
            NodeSubset((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        NodeSubset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        NodeSubset(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        NodeSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        NodeSubset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        NodeSubset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest node index plus one, or 0 for the empty set.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |&i| bits & (1u64 << i) != 0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, in increasing bit order.
    pub fn subsets(self) -> impl Iterator<Item = NodeSubset> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some(cur.wrapping_sub(full) & full)
            };
            Some(NodeSubset(cur))
        })
    }
}

impl FromIterator<usize> for NodeSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = NodeSubset::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for NodeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for NodeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "s{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for NodeSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for NodeSubset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let nodes = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = nodes.iter().find(|&&i| i >= Self::MAX_NODES) {
            return Err(serde::de::Error::custom(format!("node {bad} out of range")));
        }
        Ok(nodes.into_iter().collect())
    }
}

/// Symmetric matrix of Coxeter orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    n: usize,
    m: Vec<u8>,
}

impl CoxeterMatrix {
    /// Sentinel for `m(i, j) = ∞`.
    pub const INFINITY: u8 = 0;

    /// Builds a matrix from rows, validating symmetry and the allowed entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n > NodeSubset::MAX_NODES {
            return Err(AtlasError::InvalidCoxeterMatrix(format!("{n} nodes exceeds 64")));
        }
        let mut m = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(AtlasError::InvalidCoxeterMatrix(format!("row {i} has length {}", row.len())));
            }
            for (j, &e) in row.iter().enumerate() {
                let ok = if i == j { e == 1 } else { matches!(e, 2 | 3 | 4 | 6 | Self::INFINITY) };
                if !ok {
                    return Err(AtlasError::InvalidCoxeterMatrix(format!("entry ({i},{j}) = {e}")));
                }
                if rows[j][i] != e {
                    return Err(AtlasError::InvalidCoxeterMatrix(format!("not symmetric at ({i},{j})")));
                }
                m.push(e);
            }
        }
        Ok(CoxeterMatrix { n, m })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.m[i * self.n + j]
    }

    /// True when nodes `i != j` are joined by an edge (`m ≥ 3` or `∞`).
    pub fn joined(&self, i: usize, j: usize) -> bool {
        i != j && self.get(i, j) != 2
    }

    pub fn nodes(&self) -> NodeSubset {
        NodeSubset::full(self.n)
    }

    /// The matrix with nodes relabelled by `f`: entry `(f(i), f(j))` of the
    /// result is entry `(i, j)` of `self`.
    pub fn relabel(&self, f: &DiagramMap) -> CoxeterMatrix {
        let mut m = vec![0u8; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                m[f.apply(i) * self.n + f.apply(j)] = self.get(i, j);
            }
        }
        CoxeterMatrix { n: self.n, m }
    }

    /// Affine Coxeter matrix of type C̃_g on nodes `0..=g`; for `g = 1` this is Ã_1.
    pub fn affine_c(g: usize) -> CoxeterMatrix {
        assert!(g >= 1);
        let n = g + 1;
        let mut rows = vec![vec![2u8; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
        }
        if g == 1 {
            rows[0][1] = Self::INFINITY;
            rows[1][0] = Self::INFINITY;
        } else {
            for i in 0..g {
                let e = if i == 0 || i == g - 1 { 4 } else { 3 };
                rows[i][i + 1] = e;
                rows[i + 1][i] = e;
            }
        }
        CoxeterMatrix::from_rows(&rows).expect("C̃_g matrix is well formed")
    }
}

/// Partition of `subset` into maximal connected pieces of the diagram.
pub fn connected_components(mat: &CoxeterMatrix, subset: NodeSubset) -> Vec<NodeSubset> {
    let mut remaining = subset;
    let mut out = Vec::new();
    while let Some(start) = remaining.iter().next() {
        let mut comp = NodeSubset::singleton(start);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in remaining.iter() {
                if !comp.contains(j) && mat.joined(i, j) {
                    comp.insert(j);
                    stack.push(j);
                }
            }
        }
        remaining = remaining.difference(comp);
        out.push(comp);
    }
    out
}

/// A permutation of diagram nodes preserving the Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagramMap(Vec<usize>);

impl DiagramMap {
    pub fn identity(n: usize) -> Self {
        DiagramMap((0..n).collect())
    }

    /// Validates that `images` is a permutation preserving `mat`.
    pub fn new(mat: &CoxeterMatrix, images: Vec<usize>) -> Result<Self> {
        let n = mat.rank();
        if images.len() != n {
            return Err(AtlasError::InvalidDiagramMap(format!("expected {n} images, got {}", images.len())));
        }
        let mut seen = vec![false; n];
        for &j in &images {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(AtlasError::InvalidDiagramMap(format!("{images:?} is not a permutation")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if mat.get(images[i], images[j]) != mat.get(i, j) {
                    return Err(AtlasError::InvalidDiagramMap(format!(
                        "{images:?} does not preserve m({i},{j})"
                    )));
                }
            }
        }
        Ok(DiagramMap(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, subset: NodeSubset) -> NodeSubset {
        subset.iter().map(|i| self.0[i]).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiagramMap) -> DiagramMap {
        DiagramMap(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Orbits of the map on `subset`'s closure, each as a node subset.
    pub fn orbits(&self, subset: NodeSubset) -> Vec<NodeSubset> {
        let mut remaining = orbit_closure(self, subset);
        let mut out = Vec::new();
        while let Some(i) = remaining.iter().next() {
            let orbit = orbit_closure(self, NodeSubset::singleton(i));
            remaining = remaining.difference(orbit);
            out.push(orbit);
        }
        out
    }
}

/// Smallest `f`-stable superset of `subset`.
pub fn orbit_closure(f: &DiagramMap, subset: NodeSubset) -> NodeSubset {
    let mut cur = subset;
    loop {
        let next = cur.union(f.image(cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// Cartan type of a finite parabolic, one `(family, rank)` per component.
///
/// Coxeter matrices do not distinguish `B_n` from `C_n`; both are reported
/// as `C_n`. `C_1` and `C_2` are normalized to `A_1` and `C_2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteTypeLabel(pub Vec<(Family, usize)>);

impl FiniteTypeLabel {
    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// Order of the Weyl group of this type.
    pub fn group_order(&self) -> u128 {
        self.0.iter().map(|&(fam, r)| weyl_group_order(fam, r)).product()
    }
}

impl fmt::Display for FiniteTypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "trivial");
        }
        for (k, (fam, r)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "x")?;
            }
            write!(f, "{fam}{r}")?;
        }
        Ok(())
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn weyl_group_order(fam: Family, r: usize) -> u128 {
    match fam {
        Family::A => factorial(r + 1),
        Family::B | Family::C => (1u128 << r) * factorial(r),
        Family::D => (1u128 << (r - 1)) * factorial(r),
        Family::E => match r {
            6 => 51_840,
            7 => 2_903_040,
            8 => 696_729_600,
            _ => unreachable!("E{r}"),
        },
        Family::F => 1152,
        Family::G => 12,
    }
}

/// Shape summary of one connected component.
struct Shape {
    n: usize,
    edges: Vec<(usize, usize, u8)>,
    degree: Vec<usize>,
}

impl Shape {
    fn new(mat: &CoxeterMatrix, comp: NodeSubset) -> Shape {
        let nodes = comp.to_vec();
        let n = nodes.len();
        let mut edges = Vec::new();
        let mut degree = vec![0; n];
        for a in 0..n {
            for b in a + 1..n {
                if mat.joined(nodes[a], nodes[b]) {
                    edges.push((a, b, mat.get(nodes[a], nodes[b])));
                    degree[a] += 1;
                    degree[b] += 1;
                }
            }
        }
        Shape { n, edges, degree }
    }

    fn count_label(&self, m: u8) -> usize {
        self.edges.iter().filter(|e| e.2 == m).count()
    }

    fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    fn is_path(&self) -> bool {
        self.is_tree() && self.degree.iter().all(|&d| d <= 2)
    }

    fn neighbors(&self, a: usize) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.edges.iter().filter_map(move |&(x, y, m)| {
            if x == a {
                Some((y, m))
            } else if y == a {
                Some((x, m))
            } else {
                None
            }
        })
    }

    /// Edge labels along a path, read from one end.
    fn path_labels(&self) -> Vec<u8> {
        if self.n == 1 {
            return Vec::new();
        }
        let start = (0..self.n).find(|&a| self.degree[a] == 1).expect("path has an end");
        let mut labels = Vec::new();
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            let next = self.neighbors(cur).find(|&(b, _)| b != prev);
            match next {
                Some((b, m)) => {
                    labels.push(m);
                    prev = cur;
                    cur = b;
                }
                None => break,
            }
        }
        labels
    }

    /// Arm lengths (sorted) around a single branch node of a tree, with the
    /// label of each arm's terminal edge.
    fn arms(&self, center: usize) -> Vec<(usize, Vec<u8>)> {
        let mut arms = Vec::new();
        for (first, m) in self.neighbors(center) {
            let mut labels = vec![m];
            let (mut prev, mut cur) = (center, first);
            loop {
                let nexts: Vec<_> = self.neighbors(cur).filter(|&(b, _)| b != prev).collect();
                match nexts.as_slice() {
                    [] => break,
                    [(b, m)] => {
                        labels.push(*m);
                        prev = cur;
                        cur = *b;
                    }
                    _ => return Vec::new(),
                }
            }
            arms.push((labels.len(), labels));
        }
        arms.sort();
        arms
    }
}

fn classify_finite_component(shape: &Shape) -> Option<(Family, usize)> {
    let n = shape.n;
    if n == 1 {
        return Some((Family::A, 1));
    }
    if !shape.is_tree() || shape.count_label(CoxeterMatrix::INFINITY) > 0 {
        return None;
    }
    let n4 = shape.count_label(4);
    let n6 = shape.count_label(6);
    if shape.is_path() {
        let labels = shape.path_labels();
        return match (n4, n6) {
            (0, 0) => Some((Family::A, n)),
            (0, 1) if n == 2 => Some((Family::G, 2)),
            (1, 0) => {
                if labels[0] == 4 || labels[labels.len() - 1] == 4 {
                    Some((Family::C, n))
                } else if labels == [3, 4, 3] {
                    Some((Family::F, 4))
                } else {
                    None
                }
            }
            _ => None,
        };
    }
    if n4 + n6 > 0 {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&a| shape.degree[a] >= 3).collect();
    if branch.len() != 1 || shape.degree[branch[0]] != 3 {
        return None;
    }
    let arms: Vec<usize> = shape.arms(branch[0]).into_iter().map(|a| a.0).collect();
    match arms.as_slice() {
        [] => None,
        [1, 1, k] => Some((Family::D, k + 3)),
        [1, 2, 2] => Some((Family::E, 6)),
        [1, 2, 3] => Some((Family::E, 7)),
        [1, 2, 4] => Some((Family::E, 8)),
        _ => None,
    }
}

/// Recognizes an irreducible affine Coxeter diagram; returns the type of
/// the underlying finite root system (so C̃_g yields `(C, g)`).
fn classify_affine_component(shape: &Shape) -> Option<(Family, usize)> {
    let n = shape.n;
    if n < 2 {
        return None;
    }
    let ninf = shape.count_label(CoxeterMatrix::INFINITY);
    if ninf > 0 {
        return (n == 2 && ninf == 1).then_some((Family::A, 1));
    }
    let n4 = shape.count_label(4);
    let n6 = shape.count_label(6);
    if shape.edges.len() == n && n >= 3 {
        // cycle
        let is_cycle = shape.degree.iter().all(|&d| d == 2);
        return (is_cycle && n4 + n6 == 0).then_some((Family::A, n - 1));
    }
    if !shape.is_tree() {
        return None;
    }
    if shape.is_path() {
        let labels = shape.path_labels();
        let last = labels.len() - 1;
        return match (n4, n6) {
            (2, 0) if labels[0] == 4 && labels[last] == 4 => Some((Family::C, n - 1)),
            (0, 1) if labels == [3, 6] || labels == [6, 3] => Some((Family::G, 2)),
            (1, 0) if labels == [3, 3, 4, 3] || labels == [3, 4, 3, 3] => Some((Family::F, 4)),
            _ => None,
        };
    }
    if n6 > 0 || n4 > 1 {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&a| shape.degree[a] >= 3).collect();
    if n4 == 1 {
        // B̃: fork with arms (1, 1, k), the long arm ending in a 4.
        if branch.len() != 1 || shape.degree[branch[0]] != 3 {
            return None;
        }
        let arms = shape.arms(branch[0]);
        return match arms.as_slice() {
            [(1, a), (1, b), (k, c)] if a == &[3] && b == &[3] && c.last() == Some(&4) => Some((Family::B, k + 2)),
            _ => None,
        };
    }
    match branch.as_slice() {
        [c] if shape.degree[*c] == 4 && n == 5 => Some((Family::D, 4)),
        [c] if shape.degree[*c] == 3 => {
            let arms: Vec<usize> = shape.arms(*c).into_iter().map(|a| a.0).collect();
            match arms.as_slice() {
                [2, 2, 2] => Some((Family::E, 6)),
                [1, 3, 3] => Some((Family::E, 7)),
                [1, 2, 5] => Some((Family::E, 8)),
                _ => None,
            }
        }
        [a, b] if shape.degree[*a] == 3 && shape.degree[*b] == 3 => {
            // D̃_{n-1}: both branch nodes carry two leaves.
            let leaves = |c: usize| shape.neighbors(c).filter(|&(x, _)| shape.degree[x] == 1).count();
            (leaves(*a) == 2 && leaves(*b) == 2).then_some((Family::D, n - 1))
        }
        _ => None,
    }
}

/// Classifies each connected component of `subset` as a finite Cartan type.
pub fn finite_type_of(mat: &CoxeterMatrix, subset: NodeSubset) -> Result<FiniteTypeLabel> {
    let mut label = Vec::new();
    for comp in connected_components(mat, subset) {
        let shape = Shape::new(mat, comp);
        let ty = classify_finite_component(&shape).ok_or_else(|| AtlasError::NotFiniteType(comp.to_string()))?;
        label.push(normalize(ty));
    }
    label.sort();
    Ok(FiniteTypeLabel(label))
}

fn normalize((fam, r): (Family, usize)) -> (Family, usize) {
    match (fam, r) {
        (Family::C, 1) => (Family::A, 1),
        (Family::D, 3) => (Family::A, 3),
        other => other,
    }
}

/// A Coxeter diagram validated to be a disjoint union of irreducible affine
/// diagrams, such as the diagram of simple affine reflections.
#[derive(Clone, Debug)]
pub struct AffineDiagram {
    matrix: CoxeterMatrix,
    components: Vec<NodeSubset>,
    types: Vec<(Family, usize)>,
}

impl AffineDiagram {
    pub fn new(matrix: CoxeterMatrix) -> Result<Self> {
        let components = connected_components(&matrix, matrix.nodes());
        let mut types = Vec::with_capacity(components.len());
        for &comp in &components {
            let shape = Shape::new(&matrix, comp);
            let ty = classify_affine_component(&shape).ok_or_else(|| AtlasError::NotAffine(comp.to_string()))?;
            types.push(ty);
        }
        Ok(AffineDiagram { matrix, components, types })
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn components(&self) -> &[NodeSubset] {
        &self.components
    }

    /// Underlying finite root-system type of each affine component.
    pub fn affine_types(&self) -> &[(Family, usize)] {
        &self.types
    }

    /// Whether the standard parabolic subgroup `W_J` is finite.
    ///
    /// Every proper standard parabolic subgroup of an irreducible affine
    /// Coxeter group is finite, and a whole affine component generates an
    /// infinite group. So `W_J` is finite exactly when `J` omits at least
    /// one node from every component.
    pub fn is_finite_parabolic(&self, subset: NodeSubset) -> bool {
        self.components.iter().all(|&c| !c.is_subset(subset))
    }

    pub fn finite_type_of(&self, subset: NodeSubset) -> Result<FiniteTypeLabel> {
        if !self.is_finite_parabolic(subset) {
            return Err(AtlasError::NotFiniteType(subset.to_string()));
        }
        finite_type_of(&self.matrix, subset)
    }
}

/// Free-function form over a matrix and its precomputed full-diagram
/// components; assumes every component is affine.
pub fn is_finite_parabolic(_mat: &CoxeterMatrix, components: &[NodeSubset], subset: NodeSubset) -> bool {
    components.iter().all(|&c| !c.is_subset(subset))
}
