//! Coxeter matrices, their diagrams, the spherical/affine/large trichotomy and
//! the two index-2 reflection-subgroup moves on right-angled groups.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::CartanMatrix;
use crate::graph::Graph;
use crate::linalg::{q, Rational};
use crate::represent::{reflection_data, ReflectionRep};

/// An off-diagonal (or diagonal, = 1) Coxeter label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    /// Wire encoding: `0` stands for ∞.
    pub fn from_wire(x: u32) -> Label {
        if x == 0 {
            Label::Infinite
        } else {
            Label::Finite(x)
        }
    }

    pub fn to_wire(self) -> u32 {
        match self {
            Label::Finite(m) => m,
            Label::Infinite => 0,
        }
    }

    /// Diagram edge: label ≥ 3 or ∞.
    pub fn is_edge(self) -> bool {
        !matches!(self, Label::Finite(1 | 2))
    }

    /// `4cos²(π/m)` for the labels where it is rational, and 4 for ∞
    /// (the lower bound required of the product).
    pub fn product_value(self) -> Option<i64> {
        match self {
            Label::Finite(2) => Some(0),
            Label::Finite(3) => Some(1),
            Label::Finite(4) => Some(2),
            Label::Finite(6) => Some(3),
            Label::Infinite => Some(4),
            _ => None,
        }
    }

    /// Inverse of [`Label::product_value`], with every value ≥ 4 mapped to ∞.
    pub fn from_product(p: &Rational) -> Option<Label> {
        if *p >= q(4) {
            return Some(Label::Infinite);
        }
        if !p.is_integer() || p.is_negative() {
            return None;
        }
        match p.to_integer().try_into().ok()? {
            0i64 => Some(Label::Finite(2)),
            1 => Some(Label::Finite(3)),
            2 => Some(Label::Finite(4)),
            3 => Some(Label::Finite(6)),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => write!(f, "∞"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("Coxeter matrix must be square and non-empty")]
    NotSquare,
    #[error("label at ({i}, {j}) differs from ({j}, {i})")]
    NonSymmetric { i: usize, j: usize },
    #[error("diagonal label at {i} is not 1")]
    BadDiagonal { i: usize },
    #[error("off-diagonal label at ({i}, {j}) is 1")]
    BadOffDiagonal { i: usize, j: usize },
    #[error("no irreducible component is large")]
    NotLarge,
    #[error("the diagram is not a tree")]
    NotTree,
    #[error("the diagram is a tree")]
    IsTree,
    #[error("labels are not all in {{2, ∞}}")]
    NotRightAngled,
    #[error("the diagram is not connected")]
    NotIrreducible,
    #[error("rank {rank} is below the required {min}")]
    RankTooSmall { rank: usize, min: usize },
    #[error("pivot {pivot} has degree {degree}, need at least 2")]
    DegreeTooSmall { pivot: usize, degree: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("word {word} does not evaluate to a reflection")]
    NotAReflection { word: usize },
    #[error("pairing {value} between words {a} and {b} does not correspond to a label in {{2,3,4,6,∞}}")]
    UnsupportedPairing { a: usize, b: usize, value: Rational },
    #[error("label {label} at ({i}, {j}) is not in {{2,3,4,6,∞}}")]
    UnsupportedLabel { i: usize, j: usize, label: Label },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    m: Vec<Vec<Label>>,
}

impl fmt::Debug for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .m
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "CoxeterMatrix[{}]", rows.join("; "))
    }
}

impl CoxeterMatrix {
    pub fn validate(m: Vec<Vec<Label>>) -> Result<Self, CoxeterError> {
        let n = m.len();
        if n == 0 || m.iter().any(|r| r.len() != n) {
            return Err(CoxeterError::NotSquare);
        }
        for i in 0..n {
            if m[i][i] != Label::Finite(1) {
                return Err(CoxeterError::BadDiagonal { i });
            }
            for j in 0..n {
                if m[i][j] != m[j][i] {
                    return Err(CoxeterError::NonSymmetric { i: i.min(j), j: i.max(j) });
                }
                if i != j && matches!(m[i][j], Label::Finite(0 | 1)) {
                    return Err(CoxeterError::BadOffDiagonal { i, j });
                }
            }
        }
        Ok(CoxeterMatrix { m })
    }

    /// Validates a matrix in wire encoding (`0` = ∞).
    pub fn from_wire(m: &[Vec<u32>]) -> Result<Self, CoxeterError> {
        Self::validate(
            m.iter()
                .map(|r| r.iter().map(|&x| Label::from_wire(x)).collect())
                .collect(),
        )
    }

    pub fn to_wire(&self) -> Vec<Vec<u32>> {
        self.m
            .iter()
            .map(|r| r.iter().map(|l| l.to_wire()).collect())
            .collect()
    }

    /// Builds a matrix with all labels 2 except the listed pairs.
    pub fn from_edges(rank: usize, edges: &[(usize, usize, Label)]) -> Result<Self, CoxeterError> {
        let mut m = vec![vec![Label::Finite(2); rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Label::Finite(1);
        }
        for &(a, b, l) in edges {
            if a >= rank || b >= rank {
                return Err(CoxeterError::IndexOutOfRange { index: a.max(b), rank });
            }
            m[a][b] = l;
            m[b][a] = l;
        }
        Self::validate(m)
    }

    /// Right-angled matrix with ∞ on the given edges.
    pub fn right_angled(rank: usize, edges: &[(usize, usize)]) -> Result<Self, CoxeterError> {
        let e: Vec<_> = edges.iter().map(|&(a, b)| (a, b, Label::Infinite)).collect();
        Self::from_edges(rank, &e)
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.m[i][j]
    }

    pub fn is_right_angled(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (0..n).all(|j| i == j || matches!(self.m[i][j], Label::Finite(2) | Label::Infinite))
        })
    }

    /// Checks that every label lies in {2, 3, 4, 6, ∞}.
    pub fn check_rational_labels(&self) -> Result<(), CoxeterError> {
        let n = self.rank();
        for i in 0..n {
            for j in i + 1..n {
                let label = self.m[i][j];
                if label.product_value().is_none() {
                    return Err(CoxeterError::UnsupportedLabel { i, j, label });
                }
            }
        }
        Ok(())
    }

    pub fn diagram(&self) -> Graph {
        let n = self.rank();
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if self.m[i][j].is_edge() {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.diagram().components()
    }

    pub fn is_irreducible(&self) -> bool {
        self.diagram().is_connected()
    }

    /// Restriction to the standard subgroup on `subset` (in the given order).
    pub fn restrict(&self, subset: &[usize]) -> CoxeterMatrix {
        CoxeterMatrix {
            m: subset
                .iter()
                .map(|&i| subset.iter().map(|&j| self.m[i][j]).collect())
                .collect(),
        }
    }

    /// Simultaneous row/column permutation: new index `k` is old index `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> CoxeterMatrix {
        self.restrict(perm)
    }

    pub fn classify(&self) -> GroupClass {
        let components: Vec<ComponentClass> = self
            .components()
            .into_iter()
            .map(|vertices| {
                let (kind, family) = classify_connected(&self.restrict(&vertices));
                ComponentClass {
                    vertices,
                    kind,
                    family,
                }
            })
            .collect();
        let kind = if components.iter().any(|c| c.kind == Kind::Large) {
            Kind::Large
        } else if components.iter().all(|c| c.kind == Kind::Spherical) {
            Kind::Spherical
        } else {
            Kind::Affine
        };
        GroupClass { kind, components }
    }

    pub fn is_large_irreducible(&self) -> bool {
        self.is_irreducible() && self.classify().kind == Kind::Large
    }

    /// A quasi-Lannér subset: irreducible and large, with every maximal proper
    /// subset spherical or irreducible affine.
    ///
    /// Searches subsets by increasing size and, within a size, in lexicographic
    /// order; the first irreducible large one is minimal, hence quasi-Lannér.
    pub fn find_quasi_lanner_subset(&self) -> Result<Vec<usize>, CoxeterError> {
        let large: Vec<Vec<usize>> = self
            .classify()
            .components
            .into_iter()
            .filter(|c| c.kind == Kind::Large)
            .map(|c| c.vertices)
            .collect();
        if large.is_empty() {
            return Err(CoxeterError::NotLarge);
        }
        let n = self.rank();
        for size in 2..=n {
            let mut found = None;
            for_each_combination(n, size, &mut |subset| {
                if found.is_some() {
                    return;
                }
                if !large.iter().any(|c| subset.iter().all(|v| c.contains(v))) {
                    return;
                }
                let sub = self.restrict(subset);
                if sub.is_irreducible() && sub.classify().kind == Kind::Large {
                    found = Some(subset.to_vec());
                }
            });
            if let Some(t) = found {
                return Ok(t);
            }
        }
        unreachable!("a large component is itself irreducible and large")
    }

    /// True if the group is irreducible, large and every maximal proper
    /// standard subgroup is spherical or irreducible affine.
    pub fn is_quasi_lanner(&self) -> bool {
        if !self.is_large_irreducible() {
            return false;
        }
        let n = self.rank();
        (0..n).all(|t| {
            let rest: Vec<usize> = (0..n).filter(|&i| i != t).collect();
            let sub = self.restrict(&rest);
            let c = sub.classify();
            c.kind == Kind::Spherical || (c.kind == Kind::Affine && sub.is_irreducible())
        })
    }

    fn require_right_angled_irreducible(&self, min_rank: usize) -> Result<(), CoxeterError> {
        if !self.is_right_angled() {
            return Err(CoxeterError::NotRightAngled);
        }
        if self.rank() < min_rank {
            return Err(CoxeterError::RankTooSmall {
                rank: self.rank(),
                min: min_rank,
            });
        }
        if !self.is_irreducible() {
            return Err(CoxeterError::NotIrreducible);
        }
        Ok(())
    }

    /// Index-2 reflection subgroup of a right-angled tree group whose diagram
    /// contains a triangle.
    ///
    /// With `s1` the smallest leaf and `s2` its neighbor, the new generators
    /// are `s1·s2·s1` followed by every old generator other than `s1`.
    pub fn double_tree_to_triangle(&self) -> Result<SubgroupEmbedding, CoxeterError> {
        if !self.is_right_angled() {
            return Err(CoxeterError::NotRightAngled);
        }
        if self.rank() < 3 {
            return Err(CoxeterError::RankTooSmall {
                rank: self.rank(),
                min: 3,
            });
        }
        let g = self.diagram();
        if !g.is_tree() {
            return Err(CoxeterError::NotTree);
        }
        let s1 = (0..self.rank()).find(|&v| g.degree(v) == 1).expect("trees have leaves");
        let s2 = g.neighbors(s1)[0];
        let mut words = vec![vec![s1, s2, s1]];
        words.extend((0..self.rank()).filter(|&v| v != s1).map(|v| vec![v]));
        self.embedding_from_words(words)
    }

    /// Index-2 reflection subgroup of larger rank: the kernel of the map to
    /// Z/2 that is nontrivial only on `pivot`.
    ///
    /// Generators are `pivot·s·pivot` for each neighbor `s` (increasing),
    /// followed by every old generator other than the pivot; the rank grows
    /// from `n` to `n + deg(pivot) − 1`.
    pub fn double_increase_rank(&self, pivot: usize) -> Result<SubgroupEmbedding, CoxeterError> {
        self.require_right_angled_irreducible(3)?;
        if pivot >= self.rank() {
            return Err(CoxeterError::IndexOutOfRange {
                index: pivot,
                rank: self.rank(),
            });
        }
        let g = self.diagram();
        let degree = g.degree(pivot);
        if degree < 2 {
            return Err(CoxeterError::DegreeTooSmall { pivot, degree });
        }
        let mut words: Vec<Vec<usize>> = g.neighbors(pivot).iter().map(|&s| vec![pivot, s, pivot]).collect();
        words.extend((0..self.rank()).filter(|&v| v != pivot).map(|v| vec![v]));
        self.embedding_from_words(words)
    }

    /// Evaluates reflection words in a faithful representation of this group
    /// built from its standard rational Cartan matrix.
    fn embedding_from_words(&self, words: Vec<Vec<usize>>) -> Result<SubgroupEmbedding, CoxeterError> {
        let rep = self.standard_rep()?;
        let new_matrix = reflection_subgroup_matrix(&rep, &words)?;
        Ok(SubgroupEmbedding {
            new_matrix,
            generator_words: words,
            index: 2,
        })
    }

    /// Representation of the group on `Q^n` from [`CartanMatrix::standard`].
    pub fn standard_rep(&self) -> Result<ReflectionRep, CoxeterError> {
        let a = CartanMatrix::standard(self)?;
        Ok(ReflectionRep::from_compatible_cartan(&a, self).expect("standard Cartan matrix is compatible"))
    }
}

fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Spherical,
    Affine,
    Large,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentClass {
    pub vertices: Vec<usize>,
    pub kind: Kind,
    /// Name of the recognized spherical or affine diagram, e.g. `"B_3"` or `"~A_2"`.
    pub family: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupClass {
    /// Large if some component is large, spherical if all are, affine otherwise.
    pub kind: Kind,
    pub components: Vec<ComponentClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupEmbedding {
    pub new_matrix: CoxeterMatrix,
    /// One word in the old generators per new generator (0-based letters).
    pub generator_words: Vec<Vec<usize>>,
    pub index: usize,
}

fn spherical(name: String) -> (Kind, Option<String>) {
    (Kind::Spherical, Some(name))
}

fn affine(name: String) -> (Kind, Option<String>) {
    (Kind::Affine, Some(name))
}

const LARGE: (Kind, Option<String>) = (Kind::Large, None);

/// Recognizes a connected diagram against the spherical and affine lists.
fn classify_connected(m: &CoxeterMatrix) -> (Kind, Option<String>) {
    let n = m.rank();
    if n == 1 {
        return spherical("A_1".into());
    }
    if n == 2 {
        return match m.label(0, 1) {
            Label::Infinite => affine("~A_1".into()),
            Label::Finite(3) => spherical("A_2".into()),
            Label::Finite(4) => spherical("B_2".into()),
            Label::Finite(6) => spherical("G_2".into()),
            Label::Finite(p) => spherical(format!("I_2({p})")),
        };
    }
    let g = m.diagram();
    let edges = g.edges();
    if edges.iter().any(|&(a, b)| m.label(a, b) == Label::Infinite) {
        return LARGE;
    }
    let label = |a: usize, b: usize| match m.label(a, b) {
        Label::Finite(p) => p,
        Label::Infinite => unreachable!(),
    };
    if edges.len() == n {
        let is_cycle = (0..n).all(|v| g.degree(v) == 2);
        if is_cycle && edges.iter().all(|&(a, b)| label(a, b) == 3) {
            return affine(format!("~A_{}", n - 1));
        }
        return LARGE;
    }
    if edges.len() != n - 1 {
        return LARGE;
    }
    // Trees from here on.
    let branch: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    let all_three = edges.iter().all(|&(a, b)| label(a, b) == 3);
    match branch.len() {
        0 => classify_path(&path_labels(&g, &label)),
        1 => {
            let c = branch[0];
            if g.degree(c) == 4 {
                return if n == 5 && all_three { affine("~D_4".into()) } else { LARGE };
            }
            if g.degree(c) > 4 {
                return LARGE;
            }
            let mut arms: Vec<Vec<u32>> = g
                .neighbors(c)
                .iter()
                .map(|&nb| arm_labels(&g, c, nb, &label))
                .collect();
            arms.sort_by_key(Vec::len);
            classify_fork(&arms, n)
        }
        2 => {
            let ok = all_three
                && branch.iter().all(|&b| g.degree(b) == 3)
                && (0..n)
                    .filter(|&v| g.degree(v) == 1)
                    .all(|leaf| branch.contains(&g.neighbors(leaf)[0]));
            if ok && n >= 6 {
                affine(format!("~D_{}", n - 1))
            } else {
                LARGE
            }
        }
        _ => LARGE,
    }
}

/// Edge labels along a path diagram, from its smaller leaf.
fn path_labels(g: &Graph, label: &dyn Fn(usize, usize) -> u32) -> Vec<u32> {
    let start = (0..g.order()).find(|&v| g.degree(v) == 1).unwrap();
    let next = g.neighbors(start)[0];
    arm_labels(g, start, next, label)
}

/// Labels along the arm leaving `from` through `first`, starting with the
/// edge `from–first` and continuing while the path does not branch.
fn arm_labels(g: &Graph, from: usize, first: usize, label: &dyn Fn(usize, usize) -> u32) -> Vec<u32> {
    let mut out = vec![label(from, first)];
    let (mut prev, mut cur) = (from, first);
    loop {
        let next: Vec<usize> = g.neighbors(cur).iter().copied().filter(|&w| w != prev).collect();
        if next.len() != 1 {
            return out;
        }
        out.push(label(cur, next[0]));
        prev = cur;
        cur = next[0];
    }
}

fn classify_path(labels: &[u32]) -> (Kind, Option<String>) {
    let n = labels.len() + 1;
    let odd: Vec<(usize, u32)> = labels
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, l)| l != 3)
        .collect();
    let last = labels.len() - 1;
    match odd.as_slice() {
        [] => spherical(format!("A_{n}")),
        [(pos, l)] => {
            let at_end = *pos == 0 || *pos == last;
            match (*l, at_end) {
                (4, true) => spherical(format!("B_{n}")),
                (4, false) if n == 4 => spherical("F_4".into()),
                (4, false) if n == 5 && (*pos == 1 || *pos == 2) => affine("~F_4".into()),
                (5, true) if n == 3 => spherical("H_3".into()),
                (5, true) if n == 4 => spherical("H_4".into()),
                (6, true) if n == 3 => affine("~G_2".into()),
                _ => LARGE,
            }
        }
        [(0, 4), (p, 4)] if *p == last => affine(format!("~C_{}", n - 1)),
        _ => LARGE,
    }
}

fn classify_fork(arms: &[Vec<u32>], n: usize) -> (Kind, Option<String>) {
    let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
    let non_three: Vec<(usize, usize)> = arms
        .iter()
        .enumerate()
        .flat_map(|(a, arm)| {
            arm.iter()
                .enumerate()
                .filter(|&(_, &l)| l != 3)
                .map(move |(k, _)| (a, k))
        })
        .collect();
    if non_three.is_empty() {
        return match lens.as_slice() {
            [1, 1, _] => spherical(format!("D_{n}")),
            [1, 2, 2] => spherical("E_6".into()),
            [1, 2, 3] => spherical("E_7".into()),
            [1, 2, 4] => spherical("E_8".into()),
            [1, 2, 5] => affine("~E_8".into()),
            [1, 3, 3] => affine("~E_7".into()),
            [2, 2, 2] => affine("~E_6".into()),
            _ => LARGE,
        };
    }
    if let ([1, 1, c], [(a, k)]) = (lens.as_slice(), non_three.as_slice()) {
        if arms[*a][*k] == 4 && *k == c - 1 && (*a == 2 || *c == 1) {
            return affine(format!("~B_{}", n - 1));
        }
    }
    LARGE
}

/// Coxeter matrix of the reflection subgroup generated by the given words.
///
/// Each word must evaluate to a reflection `Id − v⊗α`; the label of a pair is
/// read off from the pairing `p = α_a(v_b)·α_b(v_a)`: 0, 1, 2, 3 give
/// 2, 3, 4, 6 and anything ≥ 4 gives ∞.
pub fn reflection_subgroup_matrix(
    rep: &ReflectionRep,
    words: &[Vec<usize>],
) -> Result<CoxeterMatrix, CoxeterError> {
    let data: Vec<_> = words
        .iter()
        .enumerate()
        .map(|(k, w)| {
            reflection_data(rep, w).map_err(|_| CoxeterError::NotAReflection { word: k })
        })
        .collect::<Result<_, _>>()?;
    let r = words.len();
    let mut m = vec![vec![Label::Finite(2); r]; r];
    for a in 0..r {
        m[a][a] = Label::Finite(1);
        for b in a + 1..r {
            let x = crate::linalg::dot(&data[a].0, &data[b].1);
            let y = crate::linalg::dot(&data[b].0, &data[a].1);
            let unsupported = || CoxeterError::UnsupportedPairing {
                a,
                b,
                value: &x * &y,
            };
            if x.is_zero() != y.is_zero() {
                return Err(unsupported());
            }
            let label = Label::from_product(&(&x * &y)).ok_or_else(unsupported)?;
            m[a][b] = label;
            m[b][a] = label;
        }
    }
    CoxeterMatrix::validate(m)
}
