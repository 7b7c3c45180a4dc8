//! Bimatrix games and candidate equilibrium objects.
//!
//! Strategy indices in the public API are 1-based (`1..=rows`, `1..=cols`),
//! matching how equilibria are usually written down. Storage is row-major.

use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{argument, Result};
use crate::rational::Rational;
use crate::stream::RealStream;

/// Scalars a game can be built over: exact rationals or real streams.
pub trait Payoff: Clone + Send + Sync {
    /// A constant chosen by the program (for streams, a literal).
    fn known(q: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn zero_value() -> Self {
        Self::known(&Rational::zero())
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Payoff for Rational {
    fn known(q: &Rational) -> Self {
        q.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl Payoff for RealStream {
    fn known(q: &Rational) -> Self {
        RealStream::literal(q.clone())
    }
    fn add(&self, other: &Self) -> Self {
        RealStream::add(self, other)
    }
    fn neg(&self) -> Self {
        RealStream::neg(self)
    }
    fn sub(&self, other: &Self) -> Self {
        RealStream::sub(self, other)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(argument("matrix must have at least one row and one column"));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(argument("ragged matrix rows"));
        }
        Ok(Self { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Two `n x m` payoff matrices: `a` for the row player, `b` for the column player.
#[derive(Clone, PartialEq, Eq)]
pub struct BiMatrixGame<T = Rational> {
    a: Matrix<T>,
    b: Matrix<T>,
}

impl<T: fmt::Display> fmt::Debug for BiMatrixGame<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiMatrixGame {{ a: {:?}, b: {:?} }}", self.a, self.b)
    }
}

impl<T> BiMatrixGame<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>) -> Result<Self> {
        if a.rows != b.rows || a.cols != b.cols {
            return Err(argument(format!(
                "payoff matrices differ in shape: {}x{} vs {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        Ok(Self { a, b })
    }

    pub fn from_rows(a: Vec<Vec<T>>, b: Vec<Vec<T>>) -> Result<Self> {
        Self::new(Matrix::from_rows(a)?, Matrix::from_rows(b)?)
    }

    pub fn rows(&self) -> usize {
        self.a.rows
    }

    pub fn cols(&self) -> usize {
        self.a.cols
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> BiMatrixGame<U> {
        BiMatrixGame { a: self.a.map(&mut f), b: self.b.map(&mut f) }
    }
}

impl<T: Payoff> BiMatrixGame<T> {
    /// The zero-sum game `(a, -a)`.
    pub fn zero_sum(a: Matrix<T>) -> Self {
        let b = a.map(Payoff::neg);
        Self { a, b }
    }
}

impl BiMatrixGame<RealStream> {
    /// The game of exact limits, when every payoff stream carries a witness.
    pub fn witnesses(&self) -> Option<BiMatrixGame<Rational>> {
        let a = self.a.iter().map(|s| s.witness().cloned()).collect::<Option<Vec<_>>>()?;
        let b = self.b.iter().map(|s| s.witness().cloned()).collect::<Option<Vec<_>>>()?;
        let (n, m) = (self.rows(), self.cols());
        Some(BiMatrixGame { a: Matrix { rows: n, cols: m, data: a }, b: Matrix { rows: n, cols: m, data: b } })
    }
}

impl BiMatrixGame<Rational> {
    pub fn to_streams(&self) -> BiMatrixGame<RealStream> {
        self.map(|q| RealStream::constant(q.clone()))
    }
}

/// A pair of mixed strategies `(x, y)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedProfile<T = Rational> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

fn check_simplex(v: &[Rational], what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(argument(format!("{what} is empty")));
    }
    if v.iter().any(Signed::is_negative) {
        return Err(argument(format!("{what} has a negative entry")));
    }
    let total: Rational = v.iter().sum();
    if !total.is_one() {
        return Err(argument(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

impl MixedProfile<Rational> {
    /// Checked constructor: both vectors must lie in the probability simplex.
    pub fn new(x: Vec<Rational>, y: Vec<Rational>) -> Result<Self> {
        check_simplex(&x, "row strategy")?;
        check_simplex(&y, "column strategy")?;
        Ok(Self { x, y })
    }

    /// The profile putting weight one on row `i` and column `j` (1-based).
    pub fn pure(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let unit = |len: usize, at: usize| {
            (1..=len).map(|k| if k == at { Rational::one() } else { Rational::zero() }).collect()
        };
        Self { x: unit(rows, i), y: unit(cols, j) }
    }

    /// `C_ij = x_i * y_j`.
    pub fn outer(&self) -> CorrelatedMatrix {
        CorrelatedMatrix(Matrix::from_fn(self.x.len(), self.y.len(), |i, j| &self.x[i] * &self.y[j]))
    }
}

impl MixedProfile<RealStream> {
    pub fn witnesses(&self) -> Option<MixedProfile<Rational>> {
        Some(MixedProfile {
            x: self.x.iter().map(|s| s.witness().cloned()).collect::<Option<_>>()?,
            y: self.y.iter().map(|s| s.witness().cloned()).collect::<Option<_>>()?,
        })
    }
}

/// A probability distribution over the cells of a game.
#[derive(Clone, PartialEq, Eq)]
pub struct CorrelatedMatrix<T = Rational>(pub Matrix<T>);

impl<T: fmt::Display> fmt::Debug for CorrelatedMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl CorrelatedMatrix<Rational> {
    pub fn new(c: Matrix<Rational>) -> Result<Self> {
        if c.iter().any(Signed::is_negative) {
            return Err(argument("correlated matrix has a negative entry"));
        }
        let total: Rational = c.iter().sum();
        if !total.is_one() {
            return Err(argument(format!("correlated matrix sums to {total}, not 1")));
        }
        Ok(Self(c))
    }

    /// The matrix with all mass on cell `(i, j)` (1-based).
    pub fn point(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        Self(Matrix::from_fn(
            rows,
            cols,
            |r, c| {
                if r + 1 == i && c + 1 == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            },
        ))
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.0
    }
}

impl CorrelatedMatrix<RealStream> {
    pub fn witnesses(&self) -> Option<CorrelatedMatrix<Rational>> {
        let rows = (0..self.0.rows())
            .map(|i| self.0.row(i).iter().map(|s| s.witness().cloned()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Matrix::from_rows(rows).ok().map(CorrelatedMatrix)
    }
}
