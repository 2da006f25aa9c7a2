//! Cartan matrices over the rationals: validation, compatibility with a
//! Coxeter matrix, diagonal equivalence, symmetrizability, Perron–Frobenius
//! type, rank and cyclic products.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterMatrix, Label};
use crate::graph::{canonical_cycle, cycle_product, non_integral_cycle, Graph};
use crate::linalg::{q, Matrix, Rational};
use crate::poly::Poly;

/// Default cap on the number of simple cycles enumerated.
pub const DEFAULT_CYCLE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("Cartan matrix must be square and non-empty")]
    NotSquare,
    #[error("diagonal entry {i} is not 2")]
    BadDiagonal { i: usize },
    #[error("off-diagonal entry ({i}, {j}) is positive")]
    PositiveOffDiagonal { i: usize, j: usize },
    #[error("entry ({i}, {j}) is zero but ({j}, {i}) is not")]
    ZeroAsymmetry { i: usize, j: usize },
    #[error("rank {cartan} Cartan matrix against rank {coxeter} Coxeter matrix")]
    RankMismatch { cartan: usize, coxeter: usize },
    #[error("label {label} at ({i}, {j}) is not in {{2,3,4,6,∞}}")]
    UnsupportedLabel { i: usize, j: usize, label: Label },
    #[error("the two matrices have different zero patterns")]
    ZeroPatternMismatch,
    #[error("the matrix is decomposable")]
    Decomposable,
    #[error("more than {limit} simple cycles")]
    CycleBudgetExceeded { limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    a: Matrix,
}

impl CartanMatrix {
    pub fn validate(a: Matrix) -> Result<Self, CartanError> {
        let n = a.rows();
        if n == 0 || !a.is_square() {
            return Err(CartanError::NotSquare);
        }
        for i in 0..n {
            if a[(i, i)] != q(2) {
                return Err(CartanError::BadDiagonal { i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if a[(i, j)].is_positive() {
                    return Err(CartanError::PositiveOffDiagonal { i, j });
                }
                if a[(i, j)].is_zero() && !a[(j, i)].is_zero() {
                    return Err(CartanError::ZeroAsymmetry { i, j });
                }
            }
        }
        Ok(CartanMatrix { a })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, CartanError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(CartanError::NotSquare);
        }
        Self::validate(Matrix::from_rows(rows))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, CartanError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// A rational Cartan matrix compatible with `m`: for `i < j` the pair
    /// `(a_ij, a_ji)` is `(0, 0)`, `(-1, -1)`, `(-1, -2)`, `(-1, -3)` or
    /// `(-2, -2)` for labels 2, 3, 4, 6, ∞.
    pub fn standard(m: &CoxeterMatrix) -> Result<Self, CoxeterError> {
        m.check_rational_labels()?;
        let n = m.rank();
        let mut a = Matrix::identity(n).scale(&q(2));
        for i in 0..n {
            for j in i + 1..n {
                let (x, y) = match m.label(i, j) {
                    Label::Finite(2) => (0, 0),
                    Label::Infinite => (-2, -2),
                    l => (-1, -l.product_value().unwrap()),
                };
                a[(i, j)] = q(x);
                a[(j, i)] = q(y);
            }
        }
        Ok(Self::validate(a).expect("standard matrix satisfies the sign conditions"))
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.a[(i, j)]
    }

    pub fn transpose(&self) -> CartanMatrix {
        CartanMatrix { a: self.a.transpose() }
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> CartanMatrix {
        CartanMatrix {
            a: self.a.principal_submatrix(idx),
        }
    }

    pub fn support(&self) -> Graph {
        Graph::support(&self.a)
    }

    pub fn is_indecomposable(&self) -> bool {
        self.support().is_connected()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integral()
    }

    /// Exact rank over the rationals.
    pub fn matrix_rank(&self) -> usize {
        self.a.rank()
    }

    pub fn determinant(&self) -> Rational {
        self.a.determinant()
    }

    /// Checks the compatibility conditions pair by pair.
    pub fn compatibility(&self, m: &CoxeterMatrix) -> Result<CompatibilityReport, CartanError> {
        if m.rank() != self.rank() {
            return Err(CartanError::RankMismatch {
                cartan: self.rank(),
                coxeter: m.rank(),
            });
        }
        let n = self.rank();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let label = m.label(i, j);
                let target = label
                    .product_value()
                    .ok_or(CartanError::UnsupportedLabel { i, j, label })?;
                let product = &self.a[(i, j)] * &self.a[(j, i)];
                let zero = self.a[(i, j)].is_zero();
                let ok = match label {
                    Label::Finite(2) => zero,
                    Label::Infinite => !zero && product >= q(4),
                    _ => !zero && product == q(target),
                };
                pairs.push(PairCheck {
                    i,
                    j,
                    label,
                    product,
                    ok,
                });
            }
        }
        Ok(CompatibilityReport {
            compatible: pairs.iter().all(|p| p.ok),
            pairs,
        })
    }

    pub fn is_compatible(&self, m: &CoxeterMatrix) -> Result<bool, CartanError> {
        Ok(self.compatibility(m)?.compatible)
    }

    /// Positive diagonal `D` with `D·A·D⁻¹ = B`, if one exists.
    pub fn equivalent(&self, other: &CartanMatrix) -> Result<Option<DiagonalWitness>, CartanError> {
        if self.rank() != other.rank() {
            return Err(CartanError::RankMismatch {
                cartan: self.rank(),
                coxeter: other.rank(),
            });
        }
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                if self.a[(i, j)].is_zero() != other.a[(i, j)].is_zero() {
                    return Err(CartanError::ZeroPatternMismatch);
                }
            }
        }
        let forest = self.support().bfs_forest();
        let mut d = vec![Rational::one(); n];
        for &v in &forest.order {
            if let Some(p) = forest.parent[v] {
                // (D A D⁻¹)_{p v} = d_p a_{pv} / d_v
                d[v] = &d[p] * &self.a[(p, v)] / &other.a[(p, v)];
                if !d[v].is_positive() {
                    return Ok(None);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && &d[i] * &self.a[(i, j)] / &d[j] != other.a[(i, j)] {
                    return Ok(None);
                }
            }
        }
        let t = d.iter().map(|x| x * x).collect();
        Ok(Some(DiagonalWitness { d, t }))
    }

    /// Symmetrizer weights `t` with `t_i·a_ij = t_j·a_ji`, or a cycle whose
    /// two orientations give different products.
    pub fn symmetrizability(&self) -> Symmetrizability {
        let n = self.rank();
        let g = self.support();
        let forest = g.bfs_forest();
        let mut t = vec![Rational::one(); n];
        for &v in &forest.order {
            if let Some(p) = forest.parent[v] {
                t[v] = &t[p] * &self.a[(p, v)] / &self.a[(v, p)];
            }
        }
        for (i, j) in g.edges() {
            if &t[i] * &self.a[(i, j)] != &t[j] * &self.a[(j, i)] {
                let cycle = canonical_cycle(&forest.fundamental_cycle(i, j));
                let forward = cycle_product(&self.a, &cycle);
                let rev: Vec<usize> = cycle.iter().rev().copied().collect();
                let reverse = cycle_product(&self.a, &rev);
                return Symmetrizability::NotSymmetrizable {
                    cycle,
                    forward,
                    reverse,
                };
            }
        }
        Symmetrizability::Symmetrizable { weights: t }
    }

    pub fn is_symmetrizable(&self) -> bool {
        matches!(self.symmetrizability(), Symmetrizability::Symmetrizable { .. })
    }

    /// Sign of `2 − ρ`, where `ρ` is the spectral radius of `2·Id − A`.
    pub fn cartan_type(&self) -> Result<CartanType, CartanError> {
        if !self.is_indecomposable() {
            return Err(CartanError::Decomposable);
        }
        let n = self.rank();
        let b = &Matrix::identity(n).scale(&q(2)) - &self.a;
        let (rest, mult) = Poly::characteristic(&b).deflate(&q(2));
        let above = rest.roots_above(&q(2));
        Ok(match (above, mult) {
            (0, 0) => CartanType::Positive,
            (0, _) => CartanType::Zero,
            _ => CartanType::Negative,
        })
    }

    /// All simple cycles up to `max_len` (clamped to the rank) with both
    /// orientations' products.
    pub fn cyclic_products(&self, max_len: usize, budget: usize) -> Result<CyclicProductReport, CartanError> {
        let cycles = self
            .support()
            .simple_cycles(max_len.min(self.rank()), budget)
            .map_err(|limit| CartanError::CycleBudgetExceeded { limit })?;
        let mut report = CyclicProductReport {
            checked_cycles: Vec::with_capacity(cycles.len()),
            all_integer: true,
            witness: None,
            symmetrizable_witness: None,
        };
        for cycle in cycles {
            let forward = cycle_product(&self.a, &cycle);
            let rev: Vec<usize> = cycle.iter().rev().copied().collect();
            let reverse = cycle_product(&self.a, &rev);
            if report.witness.is_none() {
                if !forward.is_integer() {
                    report.witness = Some((cycle.clone(), forward.clone()));
                } else if !reverse.is_integer() {
                    report.witness = Some((rev.clone(), reverse.clone()));
                }
            }
            if forward != reverse && report.symmetrizable_witness.is_none() {
                report.symmetrizable_witness = Some((cycle.clone(), forward.clone(), reverse.clone()));
            }
            report.checked_cycles.push(CycleProduct {
                cycle,
                forward,
                reverse,
            });
        }
        report.all_integer = report.witness.is_none();
        Ok(report)
    }

    /// A simple cycle with a non-integral product, if any. Decides the same
    /// question as [`CartanMatrix::cyclic_products`] without enumerating
    /// cycles, so it stays polynomial on dense supports.
    pub fn non_integral_cycle(&self) -> Option<(Vec<usize>, Rational)> {
        non_integral_cycle(&self.a).map(|c| {
            let v = cycle_product(&self.a, &c);
            (c, v)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub label: Label,
    pub product: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub pairs: Vec<PairCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalWitness {
    /// Diagonal of `D`, normalized to 1 at the root of each component.
    pub d: Vec<Rational>,
    /// Squares of `d`.
    pub t: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symmetrizability {
    Symmetrizable {
        weights: Vec<Rational>,
    },
    NotSymmetrizable {
        cycle: Vec<usize>,
        forward: Rational,
        reverse: Rational,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanType {
    Positive,
    Zero,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleProduct {
    pub cycle: Vec<usize>,
    pub forward: Rational,
    pub reverse: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicProductReport {
    pub checked_cycles: Vec<CycleProduct>,
    pub all_integer: bool,
    /// First cycle (in report order, either orientation) with a non-integral product.
    pub witness: Option<(Vec<usize>, Rational)>,
    /// First cycle whose two orientations disagree.
    pub symmetrizable_witness: Option<(Vec<usize>, Rational, Rational)>,
}
