//! Constructions of non-symmetrizable integral Cartan matrices, giving
//! Zariski-dense reflection subgroups of `SL±_n(Z)`, and the pipeline that
//! climbs to higher dimensions through finite-index reflection subgroups.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix, Symmetrizability};
use crate::coxeter::{CoxeterError, CoxeterMatrix, Kind, Label, SubgroupEmbedding};
use crate::graph::cycle_product;
use crate::integral::{conjugate_to_integers, IntegralError, IntegralizationResult};
use crate::linalg::{q, span_rank, Matrix, Rational};
use crate::represent::{rep_from_cartan, RepError, ReflectionRep};

/// Upper bound on the rank-bump parameter search; at most one value of `t`
/// can fail, so this is never reached for valid input.
const MAX_BUMP_PARAMETER: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("the Coxeter diagram is a tree")]
    IsTree,
    #[error("the Coxeter matrix is not right-angled")]
    NotRightAngled,
    #[error("the Coxeter matrix is not irreducible")]
    NotIrreducible,
    #[error("rank {rank} is below the minimum {min}")]
    RankTooSmall { rank: usize, min: usize },
    #[error("rank {rank} is below 3·{dim}+1")]
    RankGapTooSmall { rank: usize, dim: usize },
    #[error("no pair with label ∞ outside the spanning index sets")]
    NoInfinitePairInK,
    #[error("label {label} at ({i}, {j}) is not in {{2,3,4,6,∞}}")]
    BadLabels { i: usize, j: usize, label: Label },
    #[error("no cycle in the Coxeter diagram has a label other than 3")]
    NoSuitableCycle,
    #[error("the pairs are not disjoint pairs of generators with label ∞: {0}")]
    BadPairs(String),
    #[error("component {component:?} of the complement is neither spherical nor quasi-Lannér")]
    ComplementNotAdmissible { component: Vec<usize> },
    #[error("no parameter up to {limit} gives a certified matrix")]
    NoParameterFound { limit: u64 },
    #[error("target dimension {target} is below the starting dimension {dim}")]
    TargetBelowRank { target: usize, dim: usize },
    #[error("representation has {got} generators, Coxeter matrix has rank {expected}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    SpanningTree,
    RankBump,
    General,
    /// A user-supplied Cartan matrix, certified but not constructed.
    Seed,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::SpanningTree => "spanning-tree",
            Construction::RankBump => "rank-bump",
            Construction::General => "general",
            Construction::Seed => "seed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificates {
    pub compatible: bool,
    pub non_symmetrizable: bool,
    /// A simple cycle whose two orientations give different products.
    pub witness_cycle: Vec<usize>,
    pub forward: Rational,
    pub reverse: Rational,
    pub rank: usize,
    pub integer_cyclic_products: bool,
}

impl Certificates {
    pub fn all_green(&self) -> bool {
        self.compatible && self.non_symmetrizable && self.integer_cyclic_products
    }
}

/// Orientations of the distinguished cycle of the general construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCertificate {
    /// `[s1, s_r, …, s2]`: the orientation picking up every `−4cos²(π/m)`.
    pub heavy_cycle: Vec<usize>,
    pub heavy_product: Rational,
    pub light_product: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgeOutput {
    pub cartan: CartanMatrix,
    pub coxeter: CoxeterMatrix,
    pub construction: Construction,
    /// The integer `k`, `t` or `t₀` selected by the search (0 for seeds).
    pub parameter: u64,
    pub certificates: Certificates,
    /// Pairs whose entries were scaled (general construction) or the bumped
    /// entry `(i₀, j₀)` (rank bump).
    pub scaled_pairs: Vec<(usize, usize)>,
    pub cycle: Option<CycleCertificate>,
}

/// Computes all certificates for a Cartan matrix against a Coxeter matrix.
pub fn certificates(a: &CartanMatrix, m: &CoxeterMatrix) -> Result<Certificates, ForgeError> {
    let compatible = a.is_compatible(m)?;
    let (non_symmetrizable, witness_cycle, forward, reverse) = match a.symmetrizability() {
        Symmetrizability::NotSymmetrizable { cycle, forward, reverse } => (true, cycle, forward, reverse),
        Symmetrizability::Symmetrizable { .. } => (false, Vec::new(), q(0), q(0)),
    };
    Ok(Certificates {
        compatible,
        non_symmetrizable,
        witness_cycle,
        forward,
        reverse,
        rank: a.matrix_rank(),
        integer_cyclic_products: a.non_integral_cycle().is_none(),
    })
}

fn certified(
    cartan: CartanMatrix,
    coxeter: &CoxeterMatrix,
    construction: Construction,
    parameter: u64,
) -> Result<ForgeOutput, ForgeError> {
    let certificates = certificates(&cartan, coxeter)?;
    if !certificates.all_green() {
        return Err(ForgeError::CertificateFailed(format!("{certificates:?}")));
    }
    Ok(ForgeOutput {
        cartan,
        coxeter: coxeter.clone(),
        construction,
        parameter,
        certificates,
        scaled_pairs: Vec::new(),
        cycle: None,
    })
}

/// Re-checks a certificate bundle from its matrices alone.
pub fn verify(out: &ForgeOutput) -> Result<(), ForgeError> {
    let fresh = certificates(&out.cartan, &out.coxeter)?;
    if fresh.compatible != out.certificates.compatible
        || fresh.rank != out.certificates.rank
        || fresh.integer_cyclic_products != out.certificates.integer_cyclic_products
        || fresh.non_symmetrizable != out.certificates.non_symmetrizable
    {
        return Err(ForgeError::CertificateFailed("recomputed certificates differ".into()));
    }
    if !out.certificates.all_green() {
        return Err(ForgeError::CertificateFailed("bundle records a failing certificate".into()));
    }
    let c = &out.certificates;
    let n = out.cartan.rank();
    let distinct = {
        let mut s = c.witness_cycle.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == c.witness_cycle.len()
    };
    if c.witness_cycle.len() < 3 || !distinct || c.witness_cycle.iter().any(|&i| i >= n) {
        return Err(ForgeError::CertificateFailed("witness is not a simple cycle".into()));
    }
    let rev: Vec<usize> = c.witness_cycle.iter().rev().copied().collect();
    let a = out.cartan.matrix();
    if cycle_product(a, &c.witness_cycle) != c.forward || cycle_product(a, &rev) != c.reverse || c.forward == c.reverse {
        return Err(ForgeError::CertificateFailed("witness cycle products do not match".into()));
    }
    if let Some(cc) = &out.cycle {
        let light: Vec<usize> = cc.heavy_cycle.iter().rev().copied().collect();
        if cycle_product(a, &cc.heavy_cycle) != cc.heavy_product
            || cycle_product(a, &light) != cc.light_product
            || cc.heavy_product.abs() <= cc.light_product.abs()
        {
            return Err(ForgeError::CertificateFailed("cycle inequality does not hold".into()));
        }
    }
    Ok(())
}

fn require_racg(m: &CoxeterMatrix, min_rank: usize) -> Result<(), ForgeError> {
    if !m.is_right_angled() {
        return Err(ForgeError::NotRightAngled);
    }
    if m.rank() < min_rank {
        return Err(ForgeError::RankTooSmall {
            rank: m.rank(),
            min: min_rank,
        });
    }
    if !m.is_irreducible() {
        return Err(ForgeError::NotIrreducible);
    }
    Ok(())
}

/// Spanning-tree construction for a right-angled group whose diagram is not
/// a tree.
///
/// With `T` the breadth-first spanning tree from generator 0, entry `(i, j)`
/// for adjacent `i, j` is `−2k` if `i < j` or the edge is in `T`, and `−3k`
/// otherwise; `k` is the smallest positive integer with `det ≠ 0`.
pub fn forge_racg_spanning_tree(m: &CoxeterMatrix) -> Result<ForgeOutput, ForgeError> {
    require_racg(m, 3)?;
    let g = m.diagram();
    if g.is_tree() {
        return Err(ForgeError::IsTree);
    }
    let tree = g.bfs_forest();
    let n = m.rank();
    let build = |k: i64| {
        let mut a = Matrix::identity(n).scale(&q(2));
        for (i, j) in g.edges() {
            a[(i, j)] = q(-2 * k);
            a[(j, i)] = q(if tree.is_tree_edge(i, j) { -2 * k } else { -3 * k });
        }
        a
    };
    // det(A_k) is a polynomial of degree ≤ n in k, nonzero at 0.
    let limit = n as u64 + 1;
    for k in 1..=limit {
        let a = build(k as i64);
        if !a.determinant().is_zero() {
            return certified(CartanMatrix::validate(a)?, m, Construction::SpanningTree, k);
        }
    }
    Err(ForgeError::NoParameterFound { limit })
}

/// Greedy index sets: generators in increasing order whose vectors extend
/// the span so far.
fn greedy_spanning(vectors: &[Vec<Rational>], dim: usize) -> Vec<usize> {
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if chosen.len() == dim {
            break;
        }
        chosen.push(v.clone());
        if span_rank(&chosen, dim) == chosen.len() {
            idx.push(i);
        } else {
            chosen.pop();
        }
    }
    idx
}

/// Raises the dimension of an integral representation of a right-angled
/// group by one.
///
/// Index sets `I` (covectors spanning the dual) and `J` (vectors spanning)
/// are chosen greedily; `(i₀, j₀)` is the first pair `i₀ < j₀` outside both
/// with label ∞, and its Cartan entry is multiplied by `1 + t` for the
/// smallest `t ≥ 1` giving rank `n + 1` and a non-symmetrizable matrix.
/// Labels are read from `m`, so an incompatible `rep` surfaces as
/// [`ForgeError::NoInfinitePairInK`] or a failed certificate.
pub fn forge_rank_bump(m: &CoxeterMatrix, rep: &ReflectionRep) -> Result<ForgeOutput, ForgeError> {
    require_racg(m, 3)?;
    let big_n = m.rank();
    if rep.generators().len() != big_n {
        return Err(ForgeError::GeneratorCount {
            expected: big_n,
            got: rep.generators().len(),
        });
    }
    let n = rep.dim();
    if big_n < 3 * n + 1 {
        return Err(ForgeError::RankGapTooSmall { rank: big_n, dim: n });
    }
    let i_set = greedy_spanning(rep.alphas(), n);
    let j_set = greedy_spanning(rep.vs(), n);
    let k: Vec<usize> = (0..big_n).filter(|x| !i_set.contains(x) && !j_set.contains(x)).collect();
    let (i0, j0) = k
        .iter()
        .flat_map(|&a| k.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| a < b && m.label(a, b) == Label::Infinite)
        .ok_or(ForgeError::NoInfinitePairInK)?;
    let base = rep.cartan().matrix().clone();
    for t in 1..=MAX_BUMP_PARAMETER {
        let mut a = base.clone();
        a[(i0, j0)] = &a[(i0, j0)] * q(1 + t as i64);
        if a.rank() != n + 1 {
            continue;
        }
        let cartan = CartanMatrix::validate(a)?;
        if cartan.is_symmetrizable() {
            continue;
        }
        let mut out = certified(cartan, m, Construction::RankBump, t)?;
        out.scaled_pairs = vec![(i0, j0)];
        return Ok(out);
    }
    Err(ForgeError::NoParameterFound {
        limit: MAX_BUMP_PARAMETER,
    })
}

/// `4cos²(π/m)` for the supported labels (4 for ∞).
fn label_weight(l: Label) -> i64 {
    l.product_value().unwrap_or(4)
}

/// Full-rank construction for Coxeter groups with labels in
/// `{2, 3, 4, 6, ∞}` containing a cycle that is not all-3.
///
/// `pairs` are disjoint generator pairs with label ∞; every component of the
/// complement must be spherical or quasi-Lannér. The cycle used is the
/// first suitable simple cycle in (length, lexicographic) order.
pub fn forge_general(m: &CoxeterMatrix, pairs: &[(usize, usize)]) -> Result<ForgeOutput, ForgeError> {
    let n = m.rank();
    for i in 0..n {
        for j in i + 1..n {
            let l = m.label(i, j);
            if l != Label::Infinite && l.product_value().is_none() {
                return Err(ForgeError::BadLabels { i, j, label: l });
            }
        }
    }
    if !m.is_irreducible() {
        return Err(ForgeError::NotIrreducible);
    }
    let g = m.diagram();
    let cycles = g
        .simple_cycles(n, crate::cartan::DEFAULT_CYCLE_BUDGET)
        .map_err(|limit| CartanError::CycleBudgetExceeded { limit })?;
    let cycle = cycles
        .into_iter()
        .find(|c| {
            c.len() >= 3 && (0..c.len()).any(|i| m.label(c[i], c[(i + 1) % c.len()]) != Label::Finite(3))
        })
        .ok_or(ForgeError::NoSuitableCycle)?;

    let mut used = vec![false; n];
    for &(a, b) in pairs {
        if a >= n || b >= n || a == b {
            return Err(ForgeError::BadPairs(format!("({a}, {b}) is out of range")));
        }
        if used[a] || used[b] {
            return Err(ForgeError::BadPairs(format!("({a}, {b}) overlaps another pair")));
        }
        if m.label(a, b) != Label::Infinite {
            return Err(ForgeError::BadPairs(format!("({a}, {b}) does not have label ∞")));
        }
        used[a] = true;
        used[b] = true;
    }
    let u: Vec<usize> = (0..n).filter(|&i| !used[i]).collect();
    if !u.is_empty() {
        let sub = m.restrict(&u);
        for comp in sub.components() {
            let part = sub.restrict(&comp);
            if part.classify().kind != Kind::Spherical && !part.is_quasi_lanner() {
                return Err(ForgeError::ComplementNotAdmissible {
                    component: comp.iter().map(|&c| u[c]).collect(),
                });
            }
        }
    }

    // Position of each generator once the cycle is listed first, in order.
    let mut order = cycle.clone();
    order.extend((0..n).filter(|v| !cycle.contains(v)));
    let mut pos = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let r = cycle.len();
    let on_path = |a: usize, b: usize| {
        let (pa, pb) = (pos[a], pos[b]);
        pa < r && pb < r && pa.abs_diff(pb) == 1
    };
    let mut base = Matrix::identity(n).scale(&q(2));
    for (a, b) in g.edges() {
        let w = q(-label_weight(m.label(a, b)));
        let (lo, hi) = if pos[a] < pos[b] { (a, b) } else { (b, a) };
        if on_path(a, b) {
            base[(lo, hi)] = q(-1);
            base[(hi, lo)] = w;
        } else {
            base[(lo, hi)] = w;
            base[(hi, lo)] = q(-1);
        }
    }
    let mut heavy_cycle = vec![cycle[0]];
    heavy_cycle.extend(cycle[1..].iter().rev());
    let light: Vec<usize> = heavy_cycle.iter().rev().copied().collect();
    let cycle_cert = CycleCertificate {
        heavy_product: cycle_product(&base, &heavy_cycle),
        light_product: cycle_product(&base, &light),
        heavy_cycle,
    };

    let limit = 2 * pairs.len() as u64 + 1;
    for t in 1..=limit {
        let mut a = base.clone();
        for &(x, y) in pairs {
            a[(x, y)] = &a[(x, y)] * q(t as i64);
            a[(y, x)] = &a[(y, x)] * q(t as i64);
        }
        if a.determinant().is_zero() {
            continue;
        }
        let mut out = certified(CartanMatrix::validate(a)?, m, Construction::General, t)?;
        out.scaled_pairs = pairs.to_vec();
        out.cycle = Some(cycle_cert);
        return Ok(out);
    }
    Err(ForgeError::NoParameterFound { limit })
}

/// Certifies a given Cartan matrix as a pipeline starting point.
pub fn certify_seed(a: &CartanMatrix, m: &CoxeterMatrix) -> Result<ForgeOutput, ForgeError> {
    certified(a.clone(), m, Construction::Seed, 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineStage {
    /// The reflection subgroup at this stage, with words in the input's generators.
    pub embedding: SubgroupEmbedding,
    pub forge: ForgeOutput,
    pub integral: IntegralizationResult,
}

impl PipelineStage {
    pub fn dim(&self) -> usize {
        self.integral.integer_rep.dim()
    }
}

/// Builds Zariski-dense integral reflection representations of finite-index
/// reflection subgroups in every dimension from the starting one up to
/// `target_dim`.
///
/// The starting representation comes from the spanning-tree construction
/// (after an index-2 move if the diagram is a tree), or from `seed` when
/// given. Each further dimension is reached by passing to index-2 subgroups
/// of larger rank until the rank is at least `3n + 1`, then bumping.
pub fn pipeline_thin_embedding(
    m: &CoxeterMatrix,
    target_dim: usize,
    seed: Option<&CartanMatrix>,
) -> Result<Vec<PipelineStage>, ForgeError> {
    require_racg(m, 3)?;
    let mut embedding = SubgroupEmbedding {
        new_matrix: m.clone(),
        generator_words: (0..m.rank()).map(|i| vec![i]).collect(),
        index: 1,
    };
    let first = match seed {
        Some(a) => certify_seed(a, m)?,
        None => {
            if m.diagram().is_tree() {
                let step = m.double_tree_to_triangle()?;
                embedding = compose(&embedding, &step);
            }
            forge_racg_spanning_tree(&embedding.new_matrix)?
        }
    };
    let dim = first.certificates.rank;
    if target_dim < dim {
        return Err(ForgeError::TargetBelowRank { target: target_dim, dim });
    }
    let mut stages = vec![realize(embedding, first)?];
    while stages.last().unwrap().dim() < target_dim {
        let last = stages.last().unwrap();
        let n = last.dim();
        let mut embedding = last.embedding.clone();
        let mut rep = last.integral.integer_rep.clone();
        while embedding.new_matrix.rank() < 3 * n + 1 {
            let cur = &embedding.new_matrix;
            let g = cur.diagram();
            let pivot = (0..cur.rank()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
            let step = cur.double_increase_rank(pivot)?;
            rep = rep.restrict_to_subgroup(&step)?;
            embedding = compose(&embedding, &step);
        }
        let out = forge_rank_bump(&embedding.new_matrix, &rep)?;
        stages.push(realize(embedding, out)?);
    }
    Ok(stages)
}

fn realize(embedding: SubgroupEmbedding, forge: ForgeOutput) -> Result<PipelineStage, ForgeError> {
    let rep = rep_from_cartan(&forge.cartan, &forge.coxeter)?.reduce_irreducible()?;
    let integral = conjugate_to_integers(&rep, crate::integral::DEFAULT_MAX_ITERS)?;
    Ok(PipelineStage {
        embedding,
        forge,
        integral,
    })
}

/// Expresses the generators of `inner` (words in the generators of
/// `outer.new_matrix`) as words in the original generators.
fn compose(outer: &SubgroupEmbedding, inner: &SubgroupEmbedding) -> SubgroupEmbedding {
    SubgroupEmbedding {
        new_matrix: inner.new_matrix.clone(),
        generator_words: inner
            .generator_words
            .iter()
            .map(|w| w.iter().flat_map(|&s| outer.generator_words[s].iter().copied()).collect())
            .collect(),
        index: outer.index * inner.index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_racg(n: usize) -> CoxeterMatrix {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        CoxeterMatrix::right_angled(n, &e).unwrap()
    }

    #[test]
    fn spanning_tree_entries_on_the_pentagon() {
        let out = forge_racg_spanning_tree(&cycle_racg(5)).unwrap();
        let a = out.cartan.matrix();
        let k = out.parameter as i64;
        // The BFS tree from 0 omits exactly the edge {2, 3}.
        assert_eq!(a[(0, 1)], q(-2 * k));
        assert_eq!(a[(1, 0)], q(-2 * k));
        assert_eq!(a[(2, 3)], q(-2 * k));
        assert_eq!(a[(3, 2)], q(-3 * k));
        assert_eq!(out.certificates.rank, 5);
        verify(&out).unwrap();
    }

    #[test]
    fn composition_substitutes_words() {
        let outer = SubgroupEmbedding {
            new_matrix: cycle_racg(3),
            generator_words: vec![vec![0, 1, 0], vec![1], vec![2]],
            index: 2,
        };
        let inner = SubgroupEmbedding {
            new_matrix: cycle_racg(3),
            generator_words: vec![vec![2, 0, 2], vec![1], vec![2]],
            index: 2,
        };
        let c = compose(&outer, &inner);
        assert_eq!(c.generator_words[0], vec![2, 0, 1, 0, 2]);
        assert_eq!(c.index, 4);
    }
}
