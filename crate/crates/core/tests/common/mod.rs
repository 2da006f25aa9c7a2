//! Independent oracles shared by the integration tests. Nothing here calls
//! the library routine it is used to check.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use vinberg::linalg::{q, q_frac};
use vinberg::{CartanMatrix, CoxeterMatrix, Kind, Label, Matrix, Rational};

/// Order of `g` by repeated multiplication. A finite-order matrix has all
/// eigenvalues on the unit circle, so `|tr gᵏ| > n` proves infinite order.
pub fn naive_order(g: &Matrix, cap: u32) -> Option<u32> {
    let bound = q(g.rows() as i64);
    let mut p = g.clone();
    for k in 1..=cap {
        if p.is_identity() {
            return Some(k);
        }
        if p.trace().abs() > bound {
            return None;
        }
        p = &p * g;
    }
    None
}

/// Rank by textbook Gaussian elimination over the rationals.
pub fn naive_rank(m: &Matrix) -> usize {
    let mut rows = m.to_rows();
    let cols = m.cols();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in 0..cols {
                    let sub = &f * &rows[rank][k];
                    rows[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Every directed simple cycle of length ≥ 2 in the support of `a`, as a
/// vertex sequence starting at its smallest vertex (both orientations).
pub fn brute_cycles(a: &Matrix) -> Vec<Vec<usize>> {
    let n = a.rows();
    let adj = |i: usize, j: usize| i != j && !a[(i, j)].is_zero();
    let mut out = Vec::new();
    fn extend(path: &mut Vec<usize>, n: usize, adj: &dyn Fn(usize, usize) -> bool, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if path.len() >= 2 && adj(last, path[0]) {
            out.push(path.clone());
        }
        for v in path[0] + 1..n {
            if !path.contains(&v) && adj(last, v) {
                path.push(v);
                extend(path, n, adj, out);
                path.pop();
            }
        }
    }
    for s in 0..n {
        extend(&mut vec![s], n, &adj, &mut out);
    }
    out
}

pub fn product_along(a: &Matrix, cycle: &[usize]) -> Rational {
    let k = cycle.len();
    (0..k).fold(Rational::one(), |acc, i| acc * &a[(cycle[i], cycle[(i + 1) % k])])
}

pub fn all_cycle_products_integral(a: &Matrix) -> bool {
    brute_cycles(a).iter().all(|c| product_along(a, c).is_integer())
}

/// Forward/reverse mismatch on some simple cycle.
pub fn has_orientation_mismatch(a: &Matrix) -> bool {
    brute_cycles(a).iter().any(|c| {
        let rev: Vec<usize> = c.iter().rev().copied().collect();
        product_along(a, c) != product_along(a, &rev)
    })
}

/// Compatibility checked directly from the definition.
pub fn naive_compatible(a: &Matrix, m: &CoxeterMatrix) -> bool {
    let n = a.rows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            if i == j {
                return true;
            }
            let p = &a[(i, j)] * &a[(j, i)];
            match m.label(i, j) {
                Label::Finite(2) => a[(i, j)].is_zero() && a[(j, i)].is_zero(),
                Label::Finite(3) => p == q(1),
                Label::Finite(4) => p == q(2),
                Label::Finite(6) => p == q(3),
                Label::Infinite => p >= q(4),
                _ => false,
            }
        })
    })
}

/// All subsets `T` with `W_T` irreducible and large whose maximal proper
/// subsets are all spherical or irreducible affine, by exhaustion.
pub fn brute_quasi_lanner_subsets(m: &CoxeterMatrix) -> Vec<Vec<usize>> {
    let n = m.rank();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let t: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = m.restrict(&t);
        if !sub.is_irreducible() || sub.classify().kind != Kind::Large {
            continue;
        }
        let ok = (0..t.len()).all(|drop| {
            let rest: Vec<usize> = (0..t.len()).filter(|&i| i != drop).collect();
            let s = sub.restrict(&rest);
            let c = s.classify();
            c.kind == Kind::Spherical || (c.kind == Kind::Affine && s.is_irreducible())
        });
        if ok {
            out.push(t);
        }
    }
    out
}

pub fn ints(rows: &[&[i64]]) -> Matrix {
    Matrix::from_i64_rows(rows)
}

pub fn cartan(rows: &[&[i64]]) -> CartanMatrix {
    CartanMatrix::from_i64_rows(rows).unwrap()
}

const LABELS: [Label; 7] = [
    Label::Finite(2),
    Label::Finite(2),
    Label::Finite(3),
    Label::Finite(4),
    Label::Finite(6),
    Label::Infinite,
    Label::Infinite,
];

/// Random irreducible large Coxeter matrix with labels in {2,3,4,6,∞}.
pub fn random_large_coxeter<R: Rng>(rng: &mut R, rank: usize) -> CoxeterMatrix {
    loop {
        let mut e = Vec::new();
        for i in 0..rank {
            for j in i + 1..rank {
                e.push((i, j, *LABELS.choose(rng).unwrap()));
            }
        }
        let m = CoxeterMatrix::from_edges(rank, &e).unwrap();
        if m.is_irreducible() && m.classify().kind == Kind::Large {
            return m;
        }
    }
}

/// A random factorization `(x, y)` with `x·y = p`, `x, y > 0`.
fn split<R: Rng>(rng: &mut R, p: i64, integral: bool) -> (Rational, Rational) {
    let x = if integral {
        let divisors: Vec<i64> = (1..=p).filter(|d| p % d == 0).collect();
        q(*divisors.choose(rng).unwrap())
    } else {
        [q_frac(1, 2), q_frac(2, 3), q_frac(3, 2), q(1), q(2), q(3)].choose(rng).unwrap().clone()
    };
    let y = q(p) / &x;
    (x, y)
}

/// Random Cartan matrix compatible with `m`.
///
/// With `integral_cycles`, entries come from an integer matrix conjugated by
/// a random positive rational diagonal, so every cyclic product is an
/// integer while entries need not be. Otherwise entries are random
/// rationals with the right pairwise products.
pub fn random_compatible_cartan<R: Rng>(rng: &mut R, m: &CoxeterMatrix, integral_cycles: bool) -> CartanMatrix {
    let n = m.rank();
    let mut a = Matrix::identity(n).scale(&q(2));
    for i in 0..n {
        for j in i + 1..n {
            let p = match m.label(i, j) {
                Label::Finite(2) => continue,
                Label::Finite(3) => 1,
                Label::Finite(4) => 2,
                Label::Finite(6) => 3,
                Label::Infinite => *[4i64, 5, 6, 8, 9, 12].choose(rng).unwrap(),
                l => panic!("unsupported label {l}"),
            };
            let (x, y) = split(rng, p, integral_cycles);
            a[(i, j)] = -x;
            a[(j, i)] = -y;
        }
    }
    if integral_cycles {
        let d: Vec<Rational> = (0..n)
            .map(|_| [q(1), q(2), q(3), q_frac(1, 2), q_frac(2, 3)].choose(rng).unwrap().clone())
            .collect();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    a[(i, j)] = &a[(i, j)] * &d[i] / &d[j];
                }
            }
        }
    }
    CartanMatrix::validate(a).unwrap()
}

pub fn is_nonpositive_off_diagonal(a: &Matrix) -> bool {
    let n = a.rows();
    (0..n).all(|i| (0..n).all(|j| i == j || !a[(i, j)].is_positive()))
}
