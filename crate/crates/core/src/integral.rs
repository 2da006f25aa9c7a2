//! Invariant lattices and conjugation of reflection representations into
//! `GL_n(Z)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{common_denominator, q, Matrix, Rational};
use crate::represent::{RepError, ReflectionRep, DEFAULT_ORDER_CAP};

pub const DEFAULT_MAX_ITERS: usize = 64;

/// Saturation gives up once the common denominator exceeds `2^DENOMINATOR_BITS`.
pub const DENOMINATOR_BITS: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegralError {
    #[error("lattice saturation did not converge after {iterations} iterations (denominator has {denominator_bits} bits)")]
    NoConvergence { iterations: usize, denominator_bits: u64 },
    #[error("the representation is not irreducible")]
    NotIrreducible,
    #[error("cyclic product {value} around {cycle:?} is not an integer")]
    CyclicProductObstruction { cycle: Vec<usize>, value: Rational },
    #[error("columns do not span a full-rank lattice")]
    RankDeficient,
    #[error("conjugated generator {index} failed verification: {reason}")]
    VerificationFailed { index: usize, reason: String },
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Column Hermite normal form of the lattice spanned by integer `columns`
/// (each of length `n`).
///
/// The result is upper triangular (column `j` has its lowest nonzero entry
/// in row `j`), pivots are positive and every entry to the right of a pivot
/// lies in `[0, pivot)`. Returned as rows.
pub fn hermite_normal_form(columns: &[Vec<BigInt>], n: usize) -> Result<Vec<Vec<BigInt>>, IntegralError> {
    let mut active: Vec<Vec<BigInt>> = columns
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut pivots: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(active.len());
        for mut c in active {
            if c[i].is_zero() {
                rest.push(c);
                continue;
            }
            match pivot.as_mut() {
                None => pivot = Some(c),
                Some(p) => {
                    let (x, y) = (p[i].clone(), c[i].clone());
                    let e = x.extended_gcd(&y);
                    let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
                    let new_p: Vec<BigInt> = p.iter().zip(&c).map(|(a, b)| &e.x * a + &e.y * b).collect();
                    for (b, a) in c.iter_mut().zip(p.iter()) {
                        *b = &xg * &*b - &yg * a;
                    }
                    *p = new_p;
                    if c.iter().any(|x| !x.is_zero()) {
                        rest.push(c);
                    }
                }
            }
        }
        let mut p = pivot.ok_or(IntegralError::RankDeficient)?;
        if p[i].is_negative() {
            p.iter_mut().for_each(|x| *x = -&*x);
        }
        pivots[i] = p;
        active = rest;
    }
    // Reduce entries right of each pivot, bottom row first; column ops at
    // row i only touch rows above i.
    for i in (0..n).rev() {
        let (left, right) = pivots.split_at_mut(i + 1);
        let p = &left[i];
        for col in right.iter_mut() {
            let f = col[i].div_floor(&p[i]);
            if !f.is_zero() {
                for (a, b) in col.iter_mut().zip(p).take(i + 1) {
                    *a -= &f * b;
                }
            }
        }
    }
    Ok((0..n).map(|r| (0..n).map(|c| pivots[c][r].clone()).collect()).collect())
}

/// Full-rank lattice `H/d` in `Q^n`, with `H` in column Hermite normal form
/// and `d` the smallest positive integer making `d·L` integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    hnf: Vec<Vec<BigInt>>,
    denominator: BigInt,
}

impl Lattice {
    pub fn standard(n: usize) -> Lattice {
        let hnf = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Lattice {
            hnf,
            denominator: BigInt::one(),
        }
    }

    /// Lattice spanned by rational columns.
    pub fn from_columns(columns: &[Vec<Rational>], n: usize) -> Result<Lattice, IntegralError> {
        let d = common_denominator(columns.iter().flatten());
        let scaled: Vec<Vec<BigInt>> = columns
            .iter()
            .map(|c| c.iter().map(|x| (x * &d).to_integer()).collect())
            .collect();
        let mut hnf = hermite_normal_form(&scaled, n)?;
        let g = hnf.iter().flatten().fold(d.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            hnf.iter_mut().flatten().for_each(|x| *x /= &g);
        }
        Ok(Lattice {
            hnf,
            denominator: d / g,
        })
    }

    pub fn dim(&self) -> usize {
        self.hnf.len()
    }

    pub fn hnf(&self) -> &[Vec<BigInt>] {
        &self.hnf
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Basis as a rational matrix whose columns generate the lattice.
    pub fn basis(&self) -> Matrix {
        let d = Rational::from_integer(self.denominator.clone());
        Matrix::from_rows(
            self.hnf
                .iter()
                .map(|r| r.iter().map(|x| Rational::from_integer(x.clone()) / &d).collect())
                .collect(),
        )
    }

    fn columns(&self) -> Vec<Vec<Rational>> {
        let b = self.basis();
        (0..self.dim()).map(|j| b.column(j)).collect()
    }

    /// `g·L = L`.
    pub fn is_invariant_under(&self, g: &Matrix) -> bool {
        let image: Vec<Vec<Rational>> = self.columns().iter().map(|c| g.mul_vec(c)).collect();
        Lattice::from_columns(&image, self.dim()).is_ok_and(|l| &l == self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedLattice {
    pub lattice: Lattice,
    /// Number of saturation rounds, including the final one that changed nothing.
    pub iterations: usize,
}

/// Smallest lattice containing `Z^n` and stable under every generator.
pub fn invariant_lattice(rep: &ReflectionRep, max_iters: usize) -> Result<SaturatedLattice, IntegralError> {
    if !rep.is_irreducible() {
        return Err(IntegralError::NotIrreducible);
    }
    let n = rep.dim();
    let mut lattice = Lattice::standard(n);
    for iteration in 1..=max_iters {
        let cols = lattice.columns();
        let mut all = cols.clone();
        for g in rep.generators() {
            all.extend(cols.iter().map(|c| g.mul_vec(c)));
        }
        let next = Lattice::from_columns(&all, n)?;
        if next == lattice {
            debug_assert!(rep.generators().iter().all(|g| lattice.is_invariant_under(g)));
            return Ok(SaturatedLattice { lattice, iterations: iteration });
        }
        if next.denominator.bits() > DENOMINATOR_BITS {
            return Err(IntegralError::NoConvergence {
                iterations: iteration,
                denominator_bits: next.denominator.bits(),
            });
        }
        lattice = next;
    }
    Err(IntegralError::NoConvergence {
        iterations: max_iters,
        denominator_bits: lattice.denominator.bits(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralizationResult {
    /// `P`: its columns are a basis of the invariant lattice.
    pub change_of_basis: Matrix,
    /// `P⁻¹·ρ(s)·P`, all integral with determinant −1.
    pub integer_generators: Vec<Matrix>,
    /// The same representation expressed in the lattice basis:
    /// `α'_s = α_s·P`, `v'_s = P⁻¹·v_s`.
    pub integer_rep: ReflectionRep,
    pub lattice: Lattice,
    pub iterations: usize,
}

/// Conjugates an irreducible representation into `GL_n(Z)`, or reports a
/// simple cycle whose Cartan product is not an integer.
pub fn conjugate_to_integers(rep: &ReflectionRep, max_iters: usize) -> Result<IntegralizationResult, IntegralError> {
    if !rep.is_irreducible() {
        return Err(IntegralError::NotIrreducible);
    }
    if let Some((cycle, value)) = rep.cartan().non_integral_cycle() {
        return Err(IntegralError::CyclicProductObstruction { cycle, value });
    }
    let SaturatedLattice { lattice, iterations } = invariant_lattice(rep, max_iters)?;
    let p = lattice.basis();
    let p_inv = p.inverse().expect("lattice basis has full rank");
    let alphas = rep.alphas().iter().map(|a| p.vec_mul(a)).collect();
    let vs = rep.vs().iter().map(|v| p_inv.mul_vec(v)).collect();
    let integer_rep = ReflectionRep::from_parts(alphas, vs, rep.coxeter().clone())?;
    for (index, (g, h)) in rep.generators().iter().zip(integer_rep.generators()).enumerate() {
        let conj = &(&p_inv * g) * &p;
        let reason = if &conj != h {
            Some("does not match the lattice-basis reflection")
        } else if !h.is_integral() {
            Some("not integral")
        } else if h.determinant() != q(-1) {
            Some("determinant is not -1")
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(IntegralError::VerificationFailed {
                index,
                reason: reason.into(),
            });
        }
    }
    integer_rep.verify_relations(DEFAULT_ORDER_CAP)?;
    Ok(IntegralizationResult {
        change_of_basis: p,
        integer_generators: integer_rep.generators().to_vec(),
        integer_rep,
        lattice,
        iterations,
    })
}
