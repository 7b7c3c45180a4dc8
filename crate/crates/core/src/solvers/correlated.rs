//! Correlated equilibria as a bounded inequality system over the cells.
//!
//! Variables are the cell weights `C_ij` in row-major order. For each row
//! recommendation `i` and deviation `l` the row player must not gain, and
//! likewise for columns; the weights sum to one.

use crate::error::Result;
use crate::game::{BiMatrixGame, CorrelatedMatrix, Matrix, Payoff};
use crate::oracle::Oracle;
use crate::rational::Rational;
use crate::solvers::fm::{fm_solve_exact_bounded, fm_solve_stream_bounded, IneqSystem};
use crate::solvers::nash::{solve_nash_exact, solve_nash_oracle};
use crate::stream::RealStream;

/// Intermediate systems larger than this fall back to a Nash product.
pub const MAX_ELIMINATION_ROWS: usize = 4096;

pub fn correlated_system<T: Payoff>(g: &BiMatrixGame<T>) -> IneqSystem<T> {
    let (n, m) = (g.rows(), g.cols());
    let cell = |i: usize, j: usize| i * m + j;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    // Σ_j (A_lj - A_ij) C_ij <= 0
    for i in 0..n {
        for l in (0..n).filter(|&l| l != i) {
            let mut row = vec![T::zero_value(); n * m];
            for j in 0..m {
                row[cell(i, j)] = g.a().get(l, j).sub(g.a().get(i, j));
            }
            rows.push(row);
            rhs.push(T::zero_value());
        }
    }
    // Σ_i (B_ik - B_ij) C_ij <= 0
    for j in 0..m {
        for k in (0..m).filter(|&k| k != j) {
            let mut row = vec![T::zero_value(); n * m];
            for i in 0..n {
                row[cell(i, j)] = g.b().get(i, k).sub(g.b().get(i, j));
            }
            rows.push(row);
            rhs.push(T::zero_value());
        }
    }
    let one = T::known(&Rational::from_integer(1.into()));
    rows.push(vec![one.clone(); n * m]);
    rhs.push(one.clone());
    rows.push(vec![one.neg(); n * m]);
    rhs.push(one.neg());
    IneqSystem::new(n * m, rows, rhs).expect("well-formed correlated system")
}

fn reshape<T>(n: usize, m: usize, v: Vec<T>) -> Matrix<T> {
    let mut it = v.into_iter();
    Matrix::from_fn(n, m, |_, _| it.next().expect("one weight per cell"))
}

pub fn solve_correlated_exact(g: &BiMatrixGame) -> Result<CorrelatedMatrix> {
    match fm_solve_exact_bounded(&correlated_system(g), MAX_ELIMINATION_ROWS) {
        Ok(Some(v)) => Ok(CorrelatedMatrix(reshape(g.rows(), g.cols(), v))),
        // Nash profiles always exist and their products are correlated.
        Ok(None) | Err(_) => Ok(solve_nash_exact(g)?.outer()),
    }
}

pub fn solve_correlated_oracle(
    g: &BiMatrixGame<RealStream>,
    oracle: &dyn Oracle,
) -> Result<CorrelatedMatrix<RealStream>> {
    if let Some(v) = fm_solve_stream_bounded(&correlated_system(g), oracle, MAX_ELIMINATION_ROWS)? {
        return Ok(CorrelatedMatrix(reshape(g.rows(), g.cols(), v)));
    }
    let p = solve_nash_oracle(g, oracle)?;
    Ok(CorrelatedMatrix(Matrix::from_fn(g.rows(), g.cols(), |i, j| p.x[i].mul(&p.y[j]))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mp_gadget;
    use crate::exact::is_correlated;
    use crate::oracle::ExactOracle;
    use crate::rational::{int, rat};

    #[test]
    fn matching_pennies_is_uniform() {
        let c = solve_correlated_exact(&mp_gadget(&int(1), &int(1))).unwrap();
        assert!(c.matrix().iter().all(|q| *q == rat(1, 4)));
    }

    #[test]
    fn trivial_game() {
        let g = BiMatrixGame::from_rows(vec![vec![int(3)]], vec![vec![int(-1)]]).unwrap();
        assert_eq!(*solve_correlated_exact(&g).unwrap().matrix().get(0, 0), int(1));
    }

    #[test]
    fn coordination_game() {
        let a = vec![vec![int(1), int(0)], vec![int(0), int(0)]];
        let g = BiMatrixGame::from_rows(a.clone(), a).unwrap();
        let c = solve_correlated_exact(&g).unwrap();
        assert!(is_correlated(&g, &c).unwrap());
    }

    #[test]
    fn oracle_mode_verifies_on_witnesses() {
        let g = mp_gadget(&int(2), &int(1));
        let c = solve_correlated_oracle(&g.to_streams(), &ExactOracle).unwrap();
        assert!(is_correlated(&g, &c.witnesses().unwrap()).unwrap());
    }
}
