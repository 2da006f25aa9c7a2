//! Representations of Coxeter groups as reflection groups: construction from
//! Cartan data, the irreducible quotient, relation checks, invariant forms and
//! Zariski-closure verdicts.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix};
use crate::coxeter::{CoxeterMatrix, Label, SubgroupEmbedding};
use crate::linalg::{common_denominator, dot, q, span_rank, Matrix, Rational};
use crate::poly::multiplicative_order;

pub const DEFAULT_ORDER_CAP: u32 = 64;

/// Default cap on word length for the algebra-span certificate: `2·n²`.
pub fn default_word_cap(dim: usize) -> usize {
    2 * dim * dim
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("representations of dimension {0} are not supported (need at least 2)")]
    DimensionTooSmall(usize),
    #[error("expected {expected} generators, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("vector or covector {index} has length {got}, expected {expected}")]
    BadLength { index: usize, expected: usize, got: usize },
    #[error("pairing of generator {index} with itself is {value}, expected 2")]
    BadSelfPairing { index: usize, value: Rational },
    #[error("pairings do not form a Cartan matrix: {0}")]
    NotCartan(CartanError),
    #[error("the Cartan matrix is not compatible with the Coxeter matrix")]
    Incompatible,
    #[error("the Coxeter group is not irreducible and large")]
    NotLargeIrreducible,
    #[error("relation violated for pair ({}, {}) at power {power}", .pair.0, .pair.1)]
    RelationViolation { pair: (usize, usize), power: u32 },
    #[error("word does not evaluate to a reflection")]
    NotAReflection,
    #[error("letter {letter} is not a generator index")]
    BadWord { letter: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("reflection orientations cannot be chosen with non-positive off-diagonal pairings")]
    SignInconsistent,
}

impl From<CartanError> for RepError {
    fn from(e: CartanError) -> Self {
        match e {
            CartanError::RankMismatch { cartan, coxeter } => RepError::GeneratorCount {
                expected: coxeter,
                got: cartan,
            },
            other => RepError::NotCartan(other),
        }
    }
}

/// Generators `ρ(s) = Id − v_s⊗α_s`, i.e. `x ↦ x − α_s(x)·v_s`, with Cartan
/// matrix `A_st = α_s(v_t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionRep {
    dim: usize,
    generators: Vec<Matrix>,
    alphas: Vec<Vec<Rational>>,
    vs: Vec<Vec<Rational>>,
    cartan: CartanMatrix,
    coxeter: CoxeterMatrix,
}

impl ReflectionRep {
    /// Assembles a representation from covectors and vectors.
    ///
    /// Checks that each `α_s(v_s) = 2` and that the pairings form a Cartan
    /// matrix of the right size. Compatibility with `coxeter` is not
    /// enforced here, so that deliberately broken inputs can be represented;
    /// see [`ReflectionRep::check_compatible`].
    pub fn from_parts(
        alphas: Vec<Vec<Rational>>,
        vs: Vec<Vec<Rational>>,
        coxeter: CoxeterMatrix,
    ) -> Result<Self, RepError> {
        let r = coxeter.rank();
        for len in [alphas.len(), vs.len()] {
            if len != r {
                return Err(RepError::GeneratorCount { expected: r, got: len });
            }
        }
        let dim = alphas[0].len();
        if dim < 2 {
            return Err(RepError::DimensionTooSmall(dim));
        }
        for (index, x) in alphas.iter().chain(&vs).enumerate() {
            if x.len() != dim {
                return Err(RepError::BadLength {
                    index: index % r,
                    expected: dim,
                    got: x.len(),
                });
            }
        }
        let mut a = Matrix::zeros(r, r);
        for s in 0..r {
            for t in 0..r {
                a[(s, t)] = dot(&alphas[s], &vs[t]);
            }
            if a[(s, s)] != q(2) {
                return Err(RepError::BadSelfPairing {
                    index: s,
                    value: a[(s, s)].clone(),
                });
            }
        }
        let cartan = CartanMatrix::validate(a)?;
        let id = Matrix::identity(dim);
        let generators = (0..r).map(|s| &id - &Matrix::outer(&vs[s], &alphas[s])).collect();
        Ok(ReflectionRep {
            dim,
            generators,
            alphas,
            vs,
            cartan,
            coxeter,
        })
    }

    /// Representation on `Q^n` with `v_s = e_s` and `α_s` the `s`-th row of
    /// `A`, so that `α_s(v_t) = A_st`. Requires only compatibility.
    pub fn from_compatible_cartan(a: &CartanMatrix, m: &CoxeterMatrix) -> Result<Self, RepError> {
        if !a.is_compatible(m)? {
            return Err(RepError::Incompatible);
        }
        let n = a.rank();
        let alphas = (0..n).map(|s| a.matrix().row(s).to_vec()).collect();
        let vs = (0..n)
            .map(|s| (0..n).map(|i| if i == s { q(1) } else { q(0) }).collect())
            .collect();
        Self::from_parts(alphas, vs, m.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn alphas(&self) -> &[Vec<Rational>] {
        &self.alphas
    }

    pub fn vs(&self) -> &[Vec<Rational>] {
        &self.vs
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn coxeter(&self) -> &CoxeterMatrix {
        &self.coxeter
    }

    pub fn check_compatible(&self) -> Result<(), RepError> {
        if self.cartan.is_compatible(&self.coxeter)? {
            Ok(())
        } else {
            Err(RepError::Incompatible)
        }
    }

    /// Replaces one generator matrix without touching the `(α, v)` data.
    /// Only useful for building negative controls.
    pub fn with_generator_replaced(&self, s: usize, g: Matrix) -> ReflectionRep {
        let mut out = self.clone();
        out.generators[s] = g;
        out
    }

    /// Product of the generators along `word`, left to right.
    pub fn evaluate(&self, word: &[usize]) -> Result<Matrix, RepError> {
        let mut acc = Matrix::identity(self.dim);
        for &letter in word {
            let g = self.generators.get(letter).ok_or(RepError::BadWord { letter })?;
            acc = &acc * g;
        }
        Ok(acc)
    }

    pub fn invariant_subspaces(&self) -> InvariantSubspaces {
        let v_span_basis = Matrix::from_columns(&self.vs, self.dim).column_space_basis();
        let alpha_kernel_basis = Matrix::from_rows(self.alphas.clone()).nullspace();
        InvariantSubspaces {
            v_span_basis,
            alpha_kernel_basis,
        }
    }

    /// `V_v` is everything and `V_α` is zero.
    pub fn is_irreducible(&self) -> bool {
        let sub = self.invariant_subspaces();
        sub.v_span_basis.len() == self.dim && sub.alpha_kernel_basis.is_empty()
    }

    /// The induced representation on `V_v / (V_α ∩ V_v)`.
    ///
    /// The quotient basis is obtained by extending a basis of `V_α ∩ V_v`
    /// greedily with the vectors `v_s` in index order; the retained `v_s`
    /// become the standard basis of the quotient.
    pub fn reduce_irreducible(&self) -> Result<ReflectionRep, RepError> {
        if !self.coxeter.is_large_irreducible() {
            return Err(RepError::NotLargeIrreducible);
        }
        let r = self.vs.len();
        let vmat = Matrix::from_columns(&self.vs, self.dim);
        // V_α ∩ V_v = { Σ c_t v_t : Σ_t A_st c_t = 0 for all s }.
        let kernel_vectors: Vec<Vec<Rational>> = self
            .cartan
            .matrix()
            .nullspace()
            .iter()
            .map(|c| vmat.mul_vec(c))
            .collect();
        let mut basis: Vec<Vec<Rational>> = if kernel_vectors.is_empty() {
            Vec::new()
        } else {
            Matrix::from_columns(&kernel_vectors, self.dim).column_space_basis()
        };
        let w = basis.len();
        let mut kept = Vec::new();
        for s in 0..r {
            basis.push(self.vs[s].clone());
            if span_rank(&basis, self.dim) == basis.len() {
                kept.push(s);
            } else {
                basis.pop();
            }
        }
        let full = Matrix::from_columns(&basis, self.dim);
        let coords = |x: &[Rational]| -> Vec<Rational> {
            full.solve_in_columns(x).expect("v_s lies in V_v")[w..].to_vec()
        };
        let alphas = self
            .alphas
            .iter()
            .map(|a| kept.iter().map(|&u| dot(a, &self.vs[u])).collect())
            .collect();
        let vs = self.vs.iter().map(|v| coords(v)).collect();
        ReflectionRep::from_parts(alphas, vs, self.coxeter.clone())
    }

    /// Checks `ρ(s)² = Id`, exact orders for finite labels and no return to
    /// the identity up to `order_cap` for ∞.
    pub fn verify_relations(&self, order_cap: u32) -> Result<RelationReport, RepError> {
        let r = self.generators.len();
        for (s, g) in self.generators.iter().enumerate() {
            if !(g * g).is_identity() {
                return Err(RepError::RelationViolation { pair: (s, s), power: 2 });
            }
        }
        let mut pairs = Vec::new();
        for s in 0..r {
            for t in s + 1..r {
                let label = self.coxeter.label(s, t);
                let g = &self.generators[s] * &self.generators[t];
                let limit = match label {
                    Label::Finite(m) => m,
                    Label::Infinite => order_cap,
                };
                let order = multiplicative_order(&g, limit);
                match (label, order) {
                    (Label::Finite(m), Some(k)) if k == m => {}
                    (Label::Finite(_), Some(k)) | (Label::Infinite, Some(k)) => {
                        return Err(RepError::RelationViolation { pair: (s, t), power: k });
                    }
                    (Label::Finite(m), None) => {
                        return Err(RepError::RelationViolation { pair: (s, t), power: m });
                    }
                    (Label::Infinite, None) => {}
                }
                pairs.push(PairOrder { s, t, label, order });
            }
        }
        Ok(RelationReport { order_cap, pairs })
    }

    /// Basis of the symmetric bilinear forms preserved by every generator.
    ///
    /// For a reflection `x ↦ x − α(x)v`, invariance of `B` is equivalent to
    /// `B(·, v) = ½·B(v, v)·α`, which is linear in `B`.
    pub fn invariant_symmetric_forms(&self) -> Vec<Matrix> {
        let n = self.dim;
        let unknowns: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let index = |i: usize, j: usize| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            unknowns.iter().position(|&u| u == (a, b)).unwrap()
        };
        let mut rows = Vec::new();
        for (alpha, v) in self.alphas.iter().zip(&self.vs) {
            // B(v, v) = Σ_{a,b} v_a v_b B_ab as a linear functional.
            let mut bvv = vec![Rational::zero(); unknowns.len()];
            for a in 0..n {
                for b in 0..n {
                    let c = &v[a] * &v[b];
                    if !c.is_zero() {
                        bvv[index(a, b)] += c;
                    }
                }
            }
            let half = Rational::new(1.into(), 2.into());
            for k in 0..n {
                // (B v)_k − ½ α_k B(v, v) = 0
                let mut row = vec![Rational::zero(); unknowns.len()];
                for b in 0..n {
                    if !v[b].is_zero() {
                        row[index(k, b)] += &v[b];
                    }
                }
                if !alpha[k].is_zero() {
                    let f = &alpha[k] * &half;
                    for (x, y) in row.iter_mut().zip(&bvv) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
                rows.push(row);
            }
        }
        let sys = Matrix::from_rows(rows);
        sys.nullspace()
            .into_iter()
            .map(|sol| {
                let mut b = Matrix::zeros(n, n);
                for (k, &(i, j)) in unknowns.iter().enumerate() {
                    b[(i, j)] = sol[k].clone();
                    b[(j, i)] = sol[k].clone();
                }
                clear_denominators(&b)
            })
            .collect()
    }

    /// True when products of generators of length at most `word_cap` span
    /// the full matrix algebra. `false` is inconclusive.
    pub fn absolute_irreducibility_certificate(&self, word_cap: usize) -> bool {
        let n = self.dim;
        let target = n * n;
        let mut span = EchelonSpan::new(target);
        let id = Matrix::identity(n);
        span.insert(flatten(&id));
        let mut frontier = vec![id];
        for _ in 0..word_cap {
            if span.dim() == target {
                break;
            }
            let mut next = Vec::new();
            for f in &frontier {
                for g in &self.generators {
                    let p = f * g;
                    if span.insert(flatten(&p)) {
                        next.push(p);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        span.dim() == target
    }

    /// Zariski-closure verdict for an irreducible representation of an
    /// irreducible large group.
    pub fn closure_verdict(&self, word_cap: usize) -> Result<ClosureVerdict, RepError> {
        if !self.coxeter.is_large_irreducible() {
            return Err(RepError::PreconditionViolated(
                "the Coxeter group is not irreducible and large".into(),
            ));
        }
        if !self.is_irreducible() {
            return Err(RepError::PreconditionViolated("the representation is not irreducible".into()));
        }
        let forms = self.invariant_symmetric_forms();
        if let Some(b) = forms.into_iter().next() {
            return Ok(ClosureVerdict {
                kind: VerdictKind::OrthogonalGroup,
                form: Some(b),
                reason: "nonzero invariant symmetric form".into(),
            });
        }
        if self.absolute_irreducibility_certificate(word_cap) {
            Ok(ClosureVerdict {
                kind: VerdictKind::SpecialLinearPM,
                form: None,
                reason: "no invariant symmetric form; the image spans the full matrix algebra".into(),
            })
        } else {
            Ok(ClosureVerdict {
                kind: VerdictKind::Indeterminate,
                form: None,
                reason: format!("no invariant form, but the algebra span did not reach dimension n² within {word_cap} letters"),
            })
        }
    }

    /// Restriction to a reflection subgroup given by generator words.
    ///
    /// Each word is factored as `Id − v⊗α`; signs are then chosen along a
    /// spanning forest so that all off-diagonal pairings are non-positive.
    pub fn restrict_to_subgroup(&self, embedding: &SubgroupEmbedding) -> Result<ReflectionRep, RepError> {
        let mut data = embedding
            .generator_words
            .iter()
            .map(|w| reflection_data(self, w))
            .collect::<Result<Vec<_>, _>>()?;
        let r = data.len();
        let mut sign_graph = crate::graph::Graph::new(r);
        let mut positive = vec![vec![false; r]; r];
        for a in 0..r {
            for b in a + 1..r {
                let x = dot(&data[a].0, &data[b].1);
                let y = dot(&data[b].0, &data[a].1);
                if x.is_zero() && y.is_zero() {
                    continue;
                }
                if x.is_zero() || y.is_zero() || (x.is_positive_rational() != y.is_positive_rational()) {
                    return Err(RepError::SignInconsistent);
                }
                sign_graph.add_edge(a, b);
                positive[a][b] = x.is_positive_rational();
                positive[b][a] = positive[a][b];
            }
        }
        let forest = sign_graph.bfs_forest();
        let mut flip = vec![false; r];
        for &v in &forest.order {
            if let Some(p) = forest.parent[v] {
                flip[v] = flip[p] ^ positive[p][v];
            }
        }
        for (a, b) in sign_graph.edges() {
            if flip[a] ^ flip[b] != positive[a][b] {
                return Err(RepError::SignInconsistent);
            }
        }
        for (k, d) in data.iter_mut().enumerate() {
            if flip[k] {
                d.0.iter_mut().for_each(|x| *x = -x.clone());
                d.1.iter_mut().for_each(|x| *x = -x.clone());
            }
        }
        let (alphas, vs) = data.into_iter().unzip();
        let rep = ReflectionRep::from_parts(alphas, vs, embedding.new_matrix.clone())?;
        rep.check_compatible()?;
        Ok(rep)
    }
}

trait PositiveRational {
    fn is_positive_rational(&self) -> bool;
}

impl PositiveRational for Rational {
    fn is_positive_rational(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
}

/// Representation on `Q^n` built from a compatible Cartan matrix of an
/// irreducible large Coxeter group.
pub fn rep_from_cartan(a: &CartanMatrix, m: &CoxeterMatrix) -> Result<ReflectionRep, RepError> {
    if !a.is_compatible(m)? {
        return Err(RepError::Incompatible);
    }
    if !m.is_large_irreducible() {
        return Err(RepError::NotLargeIrreducible);
    }
    ReflectionRep::from_compatible_cartan(a, m)
}

/// Factors the image of a word as `Id − v⊗α`, returning `(α, v)`.
pub fn reflection_data(rep: &ReflectionRep, word: &[usize]) -> Result<(Vec<Rational>, Vec<Rational>), RepError> {
    let g = rep.evaluate(word)?;
    let n = rep.dim();
    let dev = &Matrix::identity(n) - &g;
    if dev.rank() != 1 || dev.trace() != q(2) || !(&g * &g).is_identity() {
        return Err(RepError::NotAReflection);
    }
    let (i, j) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !dev[(i, j)].is_zero())
        .expect("rank-1 matrix has a nonzero entry");
    let v = dev.column(j);
    let pivot = dev[(i, j)].clone();
    let alpha = dev.row(i).iter().map(|x| x / &pivot).collect();
    Ok((alpha, v))
}

/// Pairing of two reflection words `Id − v⊗α`, `Id − w⊗β`: `p = α(w)·β(v)`.
pub fn dlambda_pairing(rep: &ReflectionRep, w1: &[usize], w2: &[usize]) -> Result<Pairing, RepError> {
    let (alpha, v) = reflection_data(rep, w1)?;
    let (beta, w) = reflection_data(rep, w2)?;
    let p = dot(&alpha, &w) * dot(&beta, &v);
    Ok(Pairing::new(p))
}

/// Breadth-first search over conjugates `u·s·u⁻¹` of generators (words of odd
/// length up to `max_len`, no cancelling letters) for two reflections whose
/// pairing exceeds 4.
pub fn find_proximal_pair(rep: &ReflectionRep, max_len: usize) -> Option<ProximalPair> {
    let r = rep.generators().len();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut queue: VecDeque<Vec<usize>> = (0..r).map(|s| vec![s]).collect();
    while let Some(w) = queue.pop_front() {
        let Ok(m) = rep.evaluate(&w) else { continue };
        if !seen.insert(m) {
            continue;
        }
        words.push(w.clone());
        if w.len() + 2 <= max_len {
            for t in 0..r {
                if t == w[0] {
                    continue;
                }
                let mut next = Vec::with_capacity(w.len() + 2);
                next.push(t);
                next.extend_from_slice(&w);
                next.push(t);
                queue.push_back(next);
            }
        }
    }
    let data: Vec<_> = words
        .iter()
        .map(|w| reflection_data(rep, w).expect("conjugates of generators are reflections"))
        .collect();
    for b in 0..words.len() {
        for a in 0..b {
            let p = dot(&data[a].0, &data[b].1) * dot(&data[b].0, &data[a].1);
            if p > q(4) {
                return Some(ProximalPair {
                    first: words[a].clone(),
                    second: words[b].clone(),
                    pairing: Pairing::new(p),
                });
            }
        }
    }
    None
}

fn flatten(m: &Matrix) -> Vec<Rational> {
    m.entries().cloned().collect()
}

/// Scales a nonzero rational matrix to a primitive integer matrix.
fn clear_denominators(m: &Matrix) -> Matrix {
    use num_integer::Integer;
    let d = common_denominator(m.entries());
    let scaled = m.scale(&Rational::from_integer(d));
    let g = scaled
        .entries()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x.numer()));
    if g.is_zero() || g.is_one() {
        scaled
    } else {
        scaled.scale(&Rational::new(1.into(), g))
    }
}

/// Incrementally maintained row-echelon basis of a subspace of `Q^n`.
struct EchelonSpan {
    width: usize,
    rows: BTreeMap<usize, Vec<Rational>>,
}

impl EchelonSpan {
    fn new(width: usize) -> Self {
        EchelonSpan {
            width,
            rows: BTreeMap::new(),
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the current span.
    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        for (&p, row) in &self.rows {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row).skip(p) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        v.iter_mut().for_each(|x| *x *= &inv);
        // Keep the basis reduced so that later insertions see normalized pivots.
        for row in self.rows.values_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v).skip(p) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.insert(p, v);
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSubspaces {
    pub v_span_basis: Vec<Vec<Rational>>,
    pub alpha_kernel_basis: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOrder {
    pub s: usize,
    pub t: usize,
    pub label: Label,
    /// Order of `ρ(s)ρ(t)`, or `None` if it exceeds the cap.
    pub order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub order_cap: u32,
    pub pairs: Vec<PairOrder>,
}

impl RelationReport {
    pub fn order(&self, s: usize, t: usize) -> Option<u32> {
        let (s, t) = (s.min(t), s.max(t));
        self.pairs.iter().find(|p| p.s == s && p.t == t).and_then(|p| p.order)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    OrthogonalGroup,
    SpecialLinearPM,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureVerdict {
    pub kind: VerdictKind,
    /// Invariant form, present exactly for `OrthogonalGroup`.
    pub form: Option<Matrix>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub p: Rational,
    /// `p > 4`: the product of the two reflections is conjugate to
    /// `diag(λ, 1, …, 1, λ⁻¹)` with `λ > 1`.
    pub proximal: bool,
    /// Coefficients (constant first) of `λ² − (p − 2)·λ + 1`, whose roots are
    /// the eigenvalues of the product on the plane the two reflections move.
    pub eigen_quadratic: [Rational; 3],
}

impl Pairing {
    fn new(p: Rational) -> Self {
        let proximal = p > q(4);
        let eigen_quadratic = [Rational::one(), q(2) - &p, Rational::one()];
        Pairing {
            p,
            proximal,
            eigen_quadratic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximalPair {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub pairing: Pairing,
}
