//! Product games, their strategy products and marginals, and the
//! matching-pennies gadget.
//!
//! The product of an `n1 x m1` and an `n2 x m2` game is played on pairs of
//! strategies, flattened row-major: the pair `(i1, i2)` becomes
//! `(i1 - 1) * n2 + i2`, and columns likewise with `m2`.

use num::Zero;

use crate::error::{argument, Result};
use crate::game::{BiMatrixGame, CorrelatedMatrix, Matrix, MixedProfile, Payoff};
use crate::rational::Rational;

/// The row-major bijection between index pairs and flat indices (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexPairing {
    pub inner: usize,
}

impl IndexPairing {
    pub fn pair(&self, outer: usize, inner: usize) -> usize {
        (outer - 1) * self.inner + inner
    }

    pub fn split(&self, flat: usize) -> (usize, usize) {
        ((flat - 1) / self.inner + 1, (flat - 1) % self.inner + 1)
    }
}

pub fn product_game<T: Payoff>(g1: &BiMatrixGame<T>, g2: &BiMatrixGame<T>) -> BiMatrixGame<T> {
    let (n2, m2) = (g2.rows(), g2.cols());
    let sum = |x: &Matrix<T>, y: &Matrix<T>| {
        Matrix::from_fn(g1.rows() * n2, g1.cols() * m2, |r, c| x.get(r / n2, c / m2).add(y.get(r % n2, c % m2)))
    };
    BiMatrixGame::new(sum(g1.a(), g2.a()), sum(g1.b(), g2.b())).expect("product shapes agree")
}

/// `x_[i1,i2] = x1_i1 * x2_i2`.
pub fn strategy_product(x1: &[Rational], x2: &[Rational]) -> Vec<Rational> {
    x1.iter().flat_map(|a| x2.iter().map(move |b| a * b)).collect()
}

pub fn profile_product(p1: &MixedProfile, p2: &MixedProfile) -> MixedProfile {
    MixedProfile { x: strategy_product(&p1.x, &p2.x), y: strategy_product(&p1.y, &p2.y) }
}

pub fn corr_product(c1: &CorrelatedMatrix, c2: &CorrelatedMatrix) -> CorrelatedMatrix {
    let (a, b) = (c1.matrix(), c2.matrix());
    let (n2, m2) = (b.rows(), b.cols());
    CorrelatedMatrix(Matrix::from_fn(a.rows() * n2, a.cols() * m2, |r, c| {
        a.get(r / n2, c / m2) * b.get(r % n2, c % m2)
    }))
}

/// `x1_i = Σ_l x_[i,l]`.
pub fn marginal_first(x: &[Rational], n1: usize, n2: usize) -> Result<Vec<Rational>> {
    if x.len() != n1 * n2 {
        return Err(argument(format!("vector of length {} does not split as {n1}x{n2}", x.len())));
    }
    Ok(x.chunks(n2).map(|block| block.iter().sum()).collect())
}

/// `x2_l = Σ_i x_[i,l]`.
pub fn marginal_second(x: &[Rational], n1: usize, n2: usize) -> Result<Vec<Rational>> {
    if x.len() != n1 * n2 {
        return Err(argument(format!("vector of length {} does not split as {n1}x{n2}", x.len())));
    }
    Ok((0..n2).map(|l| (0..n1).map(|i| &x[i * n2 + l]).sum()).collect())
}

/// `C1_{i1 j1} = Σ_{i2, j2} C_[i1,i2][j1,j2]`.
pub fn corr_marginal_first(
    c: &CorrelatedMatrix,
    dims1: (usize, usize),
    dims2: (usize, usize),
) -> Result<CorrelatedMatrix> {
    let m = c.matrix();
    let ((n1, m1), (n2, m2)) = (dims1, dims2);
    if m.rows() != n1 * n2 || m.cols() != m1 * m2 {
        return Err(argument(format!("{}x{} matrix does not split as ({n1}x{m1}) x ({n2}x{m2})", m.rows(), m.cols())));
    }
    Ok(CorrelatedMatrix(Matrix::from_fn(n1, m1, |i1, j1| {
        let mut total = Rational::zero();
        for i2 in 0..n2 {
            for j2 in 0..m2 {
                total += m.get(i1 * n2 + i2, j1 * m2 + j2);
            }
        }
        total
    })))
}

/// `C2_{i2 j2} = Σ_{i1, j1} C_[i1,i2][j1,j2]`.
pub fn corr_marginal_second(
    c: &CorrelatedMatrix,
    dims1: (usize, usize),
    dims2: (usize, usize),
) -> Result<CorrelatedMatrix> {
    let m = c.matrix();
    let ((n1, m1), (n2, m2)) = (dims1, dims2);
    if m.rows() != n1 * n2 || m.cols() != m1 * m2 {
        return Err(argument("matrix does not split into the given factors"));
    }
    Ok(CorrelatedMatrix(Matrix::from_fn(n2, m2, |i2, j2| {
        let mut total = Rational::zero();
        for i1 in 0..n1 {
            for j1 in 0..m1 {
                total += m.get(i1 * n2 + i2, j1 * m2 + j2);
            }
        }
        total
    })))
}

/// `c` with `A_ij + B_ij = c` in every cell, if there is one.
pub fn constant_sum_value(g: &BiMatrixGame) -> Option<Rational> {
    let mut cells = g.a().iter().zip(g.b().iter()).map(|(a, b)| a + b);
    let first = cells.next()?;
    cells.all(|c| c == first).then_some(first)
}

/// `MP(a, b)`: `A = [[a, 0], [0, b]]`, `B = -A`.
pub fn mp_gadget<T: Payoff>(a: &T, b: &T) -> BiMatrixGame<T> {
    let rows = vec![vec![a.clone(), T::zero_value()], vec![T::zero_value(), b.clone()]];
    BiMatrixGame::zero_sum(Matrix::from_rows(rows).expect("2x2"))
}

/// The closed-form equilibrium `x = y = (b/(a+b), a/(a+b))` of `MP(a, b)`, `a, b > 0`.
pub fn mp_equilibrium(a: &Rational, b: &Rational) -> MixedProfile {
    let s = a + b;
    let v = vec![b / &s, a / &s];
    MixedProfile { x: v.clone(), y: v }
}
