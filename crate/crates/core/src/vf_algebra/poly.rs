//! Dense polynomials in `x` (and optionally `y`) with rational coefficients.
//!
//! Storage is a grid indexed by `(deg_x, deg_y)`. Trailing zeros are trimmed
//! after every operation so that structural equality is polynomial equality.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::linalg::{q_to_f64, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    /// `coeffs[i][j]` multiplies `x^i y^j`.
    coeffs: Vec<Vec<Q>>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(dx: usize, dy: usize, c: Q) -> Self {
        let mut coeffs = vec![Vec::new(); dx + 1];
        coeffs[dx] = vec![Q::zero(); dy + 1];
        coeffs[dx][dy] = c;
        Poly { coeffs }.trimmed()
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn univariate(cs: Vec<Q>) -> Self {
        Poly {
            coeffs: cs.into_iter().map(|c| vec![c]).collect(),
        }
        .trimmed()
    }

    pub fn from_terms<I: IntoIterator<Item = ((usize, usize), Q)>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(Poly::zero(), |acc, ((i, j), c)| acc + Poly::monomial(i, j, c))
    }

    fn trimmed(mut self) -> Self {
        for row in &mut self.coeffs {
            while row.last().is_some_and(Zero::is_zero) {
                row.pop();
            }
        }
        while self.coeffs.last().is_some_and(Vec::is_empty) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, dx: usize, dy: usize) -> Q {
        self.coeffs
            .get(dx)
            .and_then(|row| row.get(dy))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Nonzero terms as `((deg_x, deg_y), coefficient)`, ordered by `deg_x` then `deg_y`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &Q)> {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| ((i, j), c))
        })
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms().map(|((i, j), _)| i + j).max()
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.terms().map(|((_, j), _)| j).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|a| a * c).collect())
                .collect(),
        }
    }

    pub fn d_dx(&self) -> Self {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| row.iter().map(|a| a * Q::from_integer(i.into())).collect())
                .collect(),
        }
        .trimmed()
    }

    pub fn d_dy(&self) -> Self {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, a)| a * Q::from_integer(j.into()))
                        .collect()
                })
                .collect(),
        }
        .trimmed()
    }

    /// Partial derivative along coordinate `k` (0 = x, 1 = y).
    pub fn partial(&self, k: usize) -> Self {
        match k {
            0 => self.d_dx(),
            1 => self.d_dy(),
            _ => panic!("polynomials have at most two variables"),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms()
            .map(|((i, j), c)| q_to_f64(c) * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).map_or(&[][..], Vec::as_slice);
                let b = rhs.coeffs.get(i).map_or(&[][..], Vec::as_slice);
                let m = a.len().max(b.len());
                (0..m)
                    .map(|j| match (a.get(j), b.get(j)) {
                        (Some(x), Some(y)) => x + y,
                        (Some(x), None) | (None, Some(x)) => x.clone(),
                        (None, None) => Q::zero(),
                    })
                    .collect()
            })
            .collect();
        Poly { coeffs }.trimmed()
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|a| -a).collect())
                .collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Sub for Poly {
    type Output = Poly;

    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let nx = self.coeffs.len() + rhs.coeffs.len() - 1;
        let ny = self.coeffs.iter().map(Vec::len).max().unwrap_or(0)
            + rhs.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let mut coeffs = vec![vec![Q::zero(); ny]; nx];
        for ((i, j), a) in self.terms() {
            for ((k, l), b) in rhs.terms() {
                coeffs[i + k][j + l] += a * b;
            }
        }
        Poly { coeffs }.trimmed()
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}
