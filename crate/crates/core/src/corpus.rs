//! Built-in witnesses: explicit Cartan matrices, the Coxeter diagrams they
//! belong to, the diagram families glued from copies of a base polytope,
//! and symmetric controls.

use crate::cartan::CartanMatrix;
use crate::coxeter::{reflection_subgroup_matrix, CoxeterError, CoxeterMatrix, Kind, Label};
use crate::represent::ReflectionRep;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub kind: Kind,
    pub rank: Option<usize>,
    pub symmetrizable: Option<bool>,
    pub integer_cyclic_products: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub coxeter: CoxeterMatrix,
    pub cartan: Option<CartanMatrix>,
    pub expected: Expected,
}

const F: fn(u32) -> Label = Label::Finite;
const INF: Label = Label::Infinite;

pub const KAC_VINBERG_3: [[i64; 3]; 3] = [[2, -1, -1], [-2, 2, -1], [-1, -1, 2]];

pub const PENTAGON_5: [[i64; 5]; 5] = [
    [2, -2, 0, 0, -1],
    [-4, 2, -2, 0, 0],
    [0, -4, 2, -2, 0],
    [0, 0, -4, 2, -2],
    [-12, 0, 0, -4, 2],
];

pub const PRISM_5: [[i64; 5]; 5] = [
    [2, -3, -1, 0, 0],
    [-8, 2, -1, 0, 0],
    [-2, -2, 2, -1, -1],
    [0, 0, -1, 2, -1],
    [0, 0, -1, -2, 2],
];

pub const FOUR_MANIFOLD_6: [[i64; 6]; 6] = [
    [2, -4, -1, 0, 0, 0],
    [-4, 2, -1, 0, 0, 0],
    [-2, -2, 2, -1, 0, -1],
    [0, 0, -1, 2, -1, 0],
    [0, 0, 0, -2, 2, -1],
    [0, 0, -1, 0, -1, 2],
];

fn cartan<const N: usize>(rows: &[[i64; N]; N]) -> CartanMatrix {
    let r: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    CartanMatrix::from_i64_rows(&r).expect("corpus matrices are valid Cartan matrices")
}

fn edges(rank: usize, e: &[(usize, usize, Label)]) -> CoxeterMatrix {
    CoxeterMatrix::from_edges(rank, e).expect("corpus diagrams are valid")
}

/// The (3,3,4) triangle group: `m₀₁ = 4`, `m₀₂ = m₁₂ = 3`.
pub fn triangle_334() -> CoxeterMatrix {
    edges(3, &[(0, 1, F(4)), (0, 2, F(3)), (1, 2, F(3))])
}

/// Right-angled group of an `n`-gon: consecutive generators have label ∞.
pub fn polygon_racg(n: usize) -> CoxeterMatrix {
    let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    CoxeterMatrix::right_angled(n, &e).expect("polygon diagram is valid")
}

/// Triangular prism: ends 0, 1 (label ∞), lateral faces 2, 3, 4.
pub fn prism_diagram() -> CoxeterMatrix {
    edges(
        5,
        &[(0, 1, INF), (0, 2, F(4)), (1, 2, F(4)), (2, 3, F(3)), (2, 4, F(3)), (3, 4, F(4))],
    )
}

/// Tetrahedron × interval: ends 0, 1 (label ∞), lateral faces 2–5.
pub fn four_manifold_diagram() -> CoxeterMatrix {
    edges(
        6,
        &[
            (0, 1, INF),
            (0, 2, F(4)),
            (1, 2, F(4)),
            (2, 3, F(3)),
            (2, 5, F(3)),
            (3, 4, F(4)),
            (4, 5, F(3)),
        ],
    )
}

/// Words `u_1 = ε, u_2 = s₁, u_3 = s₁s₀, u_4 = s₁s₀s₁, …` (0-based letters):
/// copy `j` of the base polytope is `u_j` applied to copy 1, each copy
/// reflected from the previous one across its far end.
fn gluing_word(j: usize) -> Vec<usize> {
    (0..j - 1).map(|i| if i % 2 == 0 { 1 } else { 0 }).collect()
}

fn conjugate(u: &[usize], s: usize) -> Vec<usize> {
    let mut w = u.to_vec();
    w.push(s);
    w.extend(u.iter().rev());
    w
}

/// Generator words for `k` copies of an end-glued base polytope with
/// `lateral` the only side face not orthogonal to the ends and `rest` the
/// orthogonal ones. Order: first end, far end, the `k` lateral copies, rest.
fn glued_words(k: usize, lateral: usize, rest: &[usize]) -> Vec<Vec<usize>> {
    assert!(k >= 1, "k starts at 1");
    let far_letter = if k % 2 == 1 { 1 } else { 0 };
    let mut words = vec![vec![0], conjugate(&gluing_word(k), far_letter)];
    words.extend((1..=k).map(|j| conjugate(&gluing_word(j), lateral)));
    words.extend(rest.iter().map(|&s| vec![s]));
    words
}

fn glued_family(k: usize, base: &CartanMatrix, diagram: CoxeterMatrix, rest: &[usize]) -> Result<(CoxeterMatrix, Vec<Vec<usize>>), CoxeterError> {
    let rep = ReflectionRep::from_compatible_cartan(base, &diagram).expect("corpus matrix is compatible");
    let words = glued_words(k, 2, rest);
    let m = reflection_subgroup_matrix(&rep, &words)?;
    Ok((m, words))
}

/// Coxeter matrix of the index-`k` reflection subgroup of the prism group
/// generated by the walls of `k` glued prisms, with its generator words.
pub fn prism_family(k: usize) -> Result<(CoxeterMatrix, Vec<Vec<usize>>), CoxeterError> {
    glued_family(k, &cartan(&PRISM_5), prism_diagram(), &[3, 4])
}

/// As [`prism_family`] for the tetrahedron × interval.
pub fn four_manifold_family(k: usize) -> Result<(CoxeterMatrix, Vec<Vec<usize>>), CoxeterError> {
    glued_family(k, &cartan(&FOUR_MANIFOLD_6), four_manifold_diagram(), &[3, 4, 5])
}

/// Label-∞ pairs whose removal from the `k`-prism diagram leaves a Lannér
/// triangle (odd `k`) or a spherical pair (even `k`).
pub fn prism_family_pairs(k: usize) -> Vec<(usize, usize)> {
    // 1-based: odd k pairs (1,2), (3,k+2), (4,k+1), …; even k pairs
    // (1,k+2), (3,k+1), (4,k), …, and (2,(k+4)/2).
    let mut pairs = Vec::new();
    if k % 2 == 1 {
        pairs.push((0, 1));
        let (mut a, mut b) = (3, k + 2);
        while a < b {
            pairs.push((a - 1, b - 1));
            a += 1;
            b -= 1;
        }
    } else {
        pairs.push((0, k + 1));
        let (mut a, mut b) = (3, k + 1);
        while a < b {
            pairs.push((a - 1, b - 1));
            a += 1;
            b -= 1;
        }
        pairs.push((1, (k + 4) / 2 - 1));
    }
    pairs
}

/// Diagram on `2p` generators: a `∞`-edge with both ends joined to the third
/// generator by 4-edges, then a path through the rest alternating ∞ and 3.
pub fn cube_family(p: usize) -> CoxeterMatrix {
    assert!(p >= 4);
    let mut e = vec![(0, 1, INF), (0, 2, F(4)), (1, 2, F(4))];
    for i in 2..2 * p - 1 {
        e.push((i, i + 1, if i % 2 == 0 { INF } else { F(3) }));
    }
    edges(2 * p, &e)
}

/// Prism group with `m` commuting generators adjoined, each joined by ∞ to
/// the generator that the facet orthogonal to its neighbors is joined to.
pub fn incoherence_family(m: usize) -> CoxeterMatrix {
    let mut e = vec![(0, 1, F(4)), (0, 2, F(3)), (1, 2, F(3)), (2, 3, F(3)), (3, 4, INF)];
    e.extend((0..m).map(|i| (3, 5 + i, INF)));
    edges(5 + m, &e)
}

fn exp(kind: Kind, rank: Option<usize>, symmetrizable: Option<bool>, integral: Option<bool>) -> Expected {
    Expected {
        kind,
        rank,
        symmetrizable,
        integer_cyclic_products: integral,
    }
}

/// Every built-in entry.
pub fn corpus() -> Vec<CorpusEntry> {
    let diagram_only = |name, description, coxeter: CoxeterMatrix| CorpusEntry {
        name,
        description,
        expected: exp(coxeter.classify().kind, None, None, None),
        coxeter,
        cartan: None,
    };
    let family = |r: Result<(CoxeterMatrix, Vec<Vec<usize>>), CoxeterError>| r.expect("family instance").0;
    vec![
        CorpusEntry {
            name: "KacVinberg3",
            description: "non-symmetrizable integral Cartan matrix of the (3,3,4) triangle group",
            coxeter: triangle_334(),
            cartan: Some(cartan(&KAC_VINBERG_3)),
            expected: exp(Kind::Large, Some(3), Some(false), Some(true)),
        },
        CorpusEntry {
            name: "Pentagon5",
            description: "rank-4 non-symmetrizable integral Cartan matrix of the right-angled pentagon group",
            coxeter: polygon_racg(5),
            cartan: Some(cartan(&PENTAGON_5)),
            expected: exp(Kind::Large, Some(4), Some(false), Some(true)),
        },
        CorpusEntry {
            name: "Prism5",
            description: "rank-4 non-symmetrizable integral Cartan matrix of the triangular prism group",
            coxeter: prism_diagram(),
            cartan: Some(cartan(&PRISM_5)),
            expected: exp(Kind::Large, Some(4), Some(false), Some(true)),
        },
        CorpusEntry {
            name: "FourManifold6",
            description: "rank-5 non-symmetrizable integral Cartan matrix of the tetrahedron-times-interval group",
            coxeter: four_manifold_diagram(),
            cartan: Some(cartan(&FOUR_MANIFOLD_6)),
            expected: exp(Kind::Large, Some(5), Some(false), Some(true)),
        },
        CorpusEntry {
            name: "PentagonTits",
            description: "symmetric Cartan matrix of the right-angled pentagon group (0 and -2 entries)",
            coxeter: polygon_racg(5),
            cartan: Some(cartan(&[
                [2, -2, 0, 0, -2],
                [-2, 2, -2, 0, 0],
                [0, -2, 2, -2, 0],
                [0, 0, -2, 2, -2],
                [-2, 0, 0, -2, 2],
            ])),
            expected: exp(Kind::Large, Some(5), Some(true), Some(true)),
        },
        CorpusEntry {
            name: "TriangleInfTits",
            description: "symmetric Cartan matrix of the free product of three involutions",
            coxeter: polygon_racg(3),
            cartan: Some(cartan(&[[2, -2, -2], [-2, 2, -2], [-2, -2, 2]])),
            expected: exp(Kind::Large, Some(3), Some(true), Some(true)),
        },
        CorpusEntry {
            name: "Triangle33Inf",
            description: "symmetric Cartan matrix of the (3,3,∞) triangle group",
            coxeter: edges(3, &[(0, 1, F(3)), (0, 2, F(3)), (1, 2, INF)]),
            cartan: Some(cartan(&[[2, -1, -1], [-1, 2, -2], [-1, -2, 2]])),
            expected: exp(Kind::Large, Some(3), Some(true), Some(true)),
        },
        diagram_only("Triangle334", "the (3,3,4) triangle group", triangle_334()),
        diagram_only("PentagonRACG", "right-angled pentagon group", polygon_racg(5)),
        diagram_only("PrismP1", "triangular prism group", prism_diagram()),
        diagram_only("PrismP2", "two glued triangular prisms (index-2 subgroup)", family(prism_family(2))),
        diagram_only("PrismP3", "three glued triangular prisms (index-3 subgroup)", family(prism_family(3))),
        diagram_only("FourManifoldQ1", "tetrahedron-times-interval group", four_manifold_diagram()),
        diagram_only("FourManifoldQ2", "two glued copies (index-2 subgroup)", family(four_manifold_family(2))),
        diagram_only("Cube4", "8-generator diagram whose nerve is the boundary of the 4-dimensional cross-polytope", cube_family(4)),
        diagram_only("Incoherence1", "prism group with one adjoined generator", incoherence_family(1)),
        diagram_only("Incoherence2", "prism group with two adjoined generators", incoherence_family(2)),
    ]
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name.eq_ignore_ascii_case(name))
}
