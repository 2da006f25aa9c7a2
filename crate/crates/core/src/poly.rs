//! Univariate rational polynomials: characteristic polynomials and Sturm
//! root counting.

use num_traits::{One, Signed, Zero};

use crate::linalg::{q, Matrix, Rational};

/// Coefficients from the constant term upward, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::new(vec![]), Poly::new(rem));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        let inv = d.lead().recip();
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Characteristic polynomial `det(x·I − m)` by Faddeev–LeVerrier.
    pub fn characteristic(m: &Matrix) -> Poly {
        assert!(m.is_square());
        let n = m.rows();
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        let mut mk = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1}·I
            let mut next = m * &mk;
            for i in 0..n {
                next[(i, i)] += &c[n - k + 1];
            }
            let am = m * &next;
            c[n - k] = -am.trace() / q(k as i64);
            mk = next;
        }
        Poly::new(c)
    }

    /// Number of distinct real roots strictly greater than `a`.
    ///
    /// `a` must not itself be a root.
    pub fn roots_above(&self, a: &Rational) -> usize {
        assert!(!self.eval(a).is_zero(), "Sturm count at a root");
        let seq = self.sturm_sequence();
        let at_a = sign_changes(seq.iter().map(|p| sign_of(&p.eval(a))));
        let at_inf = sign_changes(seq.iter().map(|p| sign_of(p.lead())));
        at_a - at_inf
    }

    fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(Poly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Divides out every factor `(x − a)`, returning the cofactor and the multiplicity.
    pub fn deflate(&self, a: &Rational) -> (Poly, usize) {
        let lin = Poly::new(vec![-a.clone(), Rational::one()]);
        let mut p = self.clone();
        let mut mult = 0;
        while !p.is_zero() && p.eval(a).is_zero() {
            p = p.div_rem(&lin).0;
            mult += 1;
        }
        (p, mult)
    }
}

/// Minimal polynomial of a square matrix: the first power `m^d` lying in the
/// span of `Id, m, …, m^{d-1}` gives `x^d − Σ c_i x^i`.
pub fn minimal_polynomial(m: &Matrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let flat = |p: &Matrix| p.entries().cloned().collect::<Vec<_>>();
    let mut powers = vec![flat(&Matrix::identity(n))];
    let mut p = m.clone();
    loop {
        let target = flat(&p);
        let basis = Matrix::from_columns(&powers, n * n);
        if let Some(c) = basis.solve_in_columns(&target) {
            let mut coeffs: Vec<Rational> = c.into_iter().map(|x| -x).collect();
            coeffs.push(Rational::one());
            return Poly::new(coeffs);
        }
        powers.push(target);
        p = &p * m;
    }
}

/// Smallest `k` in `1..=cap` with `m^k = Id`, decided by reducing `x^k`
/// modulo the minimal polynomial.
pub fn multiplicative_order(m: &Matrix, cap: u32) -> Option<u32> {
    let mu = minimal_polynomial(m);
    let one = Poly::new(vec![Rational::one()]);
    let mut r = Poly::new(vec![Rational::one()]);
    for k in 1..=cap {
        let mut shifted = vec![Rational::zero()];
        shifted.extend(r.0.iter().cloned());
        r = Poly::new(shifted).div_rem(&mu).1;
        if r == one {
            return Some(k);
        }
    }
    None
}

fn sign_of(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}
