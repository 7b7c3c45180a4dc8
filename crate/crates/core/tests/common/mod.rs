//! Generators and independent reference checks shared by the integration tests.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

pub mod corpus;
pub mod machines;

use equilibria::game::{BiMatrixGame, CorrelatedMatrix, Matrix};
use equilibria::rational::{pow2, Rational};
use equilibria::stream::RealStream;
use num::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn random_rational(rng: &mut StdRng, bound: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(-bound * d..=bound * d), d)
}

pub fn random_positive(rng: &mut StdRng, bound: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(1..=bound * d), d)
}

pub fn random_game(rng: &mut StdRng, n: usize, m: usize) -> BiMatrixGame {
    let mut gen = |_: usize, _: usize| random_rational(rng, 5, 4);
    let a = Matrix::from_fn(n, m, &mut gen);
    let b = Matrix::from_fn(n, m, &mut gen);
    BiMatrixGame::new(a, b).unwrap()
}

pub fn random_simplex(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    let w: Vec<Rational> = (0..n).map(|_| q(rng.gen_range(0..=6), 1)).collect();
    let total: Rational = w.iter().sum();
    if total.is_zero() {
        let mut e = vec![Rational::zero(); n];
        e[rng.gen_range(0..n)] = Rational::one();
        return e;
    }
    w.into_iter().map(|x| x / &total).collect()
}

/// A name of `g` whose stages wobble around the exact payoffs.
pub fn jitter_game(g: &BiMatrixGame, seed: u64) -> BiMatrixGame<RealStream> {
    let mut k = 0u64;
    g.map(|x| {
        k += 1;
        RealStream::jittered(x.clone(), seed.wrapping_mul(1_000_003).wrapping_add(k))
    })
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn column(m: &Matrix<Rational>, j: usize) -> Vec<Rational> {
    (0..m.rows()).map(|i| m.get(i, j).clone()).collect()
}

fn is_distribution(x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative()) && x.iter().sum::<Rational>().is_one()
}

/// Nash check written from scratch: no pure deviation helps either player.
pub fn nash_by_deviation(g: &BiMatrixGame, x: &[Rational], y: &[Rational]) -> bool {
    if x.len() != g.rows() || y.len() != g.cols() || !is_distribution(x) || !is_distribution(y) {
        return false;
    }
    let ay: Vec<Rational> = (0..g.rows()).map(|i| dot(g.a().row(i), y)).collect();
    let xb: Vec<Rational> = (0..g.cols()).map(|j| dot(x, &column(g.b(), j))).collect();
    let row_value = dot(x, &ay);
    let col_value = dot(&xb, y);
    ay.iter().all(|v| *v <= row_value) && xb.iter().all(|v| *v <= col_value)
}

/// Correlated check written from scratch, one inequality per (recommended, deviation) pair.
pub fn correlated_by_deviation(g: &BiMatrixGame, c: &Matrix<Rational>) -> bool {
    let (n, m) = (g.rows(), g.cols());
    if c.rows() != n || c.cols() != m || !is_distribution(&c.iter().cloned().collect::<Vec<_>>()) {
        return false;
    }
    for i in 0..n {
        for k in 0..n {
            let gain: Rational = (0..m).map(|j| c.get(i, j) * (g.a().get(k, j) - g.a().get(i, j))).sum();
            if gain.is_positive() {
                return false;
            }
        }
    }
    for j in 0..m {
        for l in 0..m {
            let gain: Rational = (0..n).map(|i| c.get(i, j) * (g.b().get(i, l) - g.b().get(i, j))).sum();
            if gain.is_positive() {
                return false;
            }
        }
    }
    true
}

pub fn corr_ok(g: &BiMatrixGame, c: &CorrelatedMatrix) -> bool {
    correlated_by_deviation(g, c.matrix())
}

/// Solves a square system by Gaussian elimination; `None` when singular.
fn solve_square(mut m: Vec<Vec<Rational>>, mut r: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = r.len();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        r.swap(col, pivot);
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[col][col];
                for j in col..n {
                    let t = &f * &m[col][j];
                    m[i][j] -= t;
                }
                let t = &f * &r[col];
                r[i] -= t;
            }
        }
    }
    Some((0..n).map(|i| &r[i] / &m[i][i]).collect())
}

pub fn residual_ok(a: &[Vec<Rational>], b: &[Rational], v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative() && *x <= Rational::one()) && a.iter().zip(b).all(|(row, rhs)| dot(row, v) <= *rhs)
}

/// Feasibility of `Av <= b, 0 <= v <= 1` by vertex enumeration: the region is
/// a bounded polyhedron, so it is nonempty iff some choice of `m` tight
/// constraints has a feasible solution.
pub fn vertex_feasible(a: &[Vec<Rational>], b: &[Rational], vars: usize) -> Option<Vec<Rational>> {
    let mut rows: Vec<(Vec<Rational>, Rational)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    for k in 0..vars {
        let mut e = vec![Rational::zero(); vars];
        e[k] = Rational::one();
        rows.push((e.clone(), Rational::one()));
        rows.push((e.into_iter().map(|x| -x).collect(), Rational::zero()));
    }
    let mut chosen = Vec::with_capacity(vars);
    fn search(
        rows: &[(Vec<Rational>, Rational)],
        start: usize,
        chosen: &mut Vec<usize>,
        vars: usize,
        a: &[Vec<Rational>],
        b: &[Rational],
    ) -> Option<Vec<Rational>> {
        if chosen.len() == vars {
            let m = chosen.iter().map(|&k| rows[k].0.clone()).collect();
            let r = chosen.iter().map(|&k| rows[k].1.clone()).collect();
            return solve_square(m, r).filter(|v| residual_ok(a, b, v));
        }
        for k in start..rows.len() {
            chosen.push(k);
            if let Some(v) = search(rows, k + 1, chosen, vars, a, b) {
                return Some(v);
            }
            chosen.pop();
        }
        None
    }
    search(&rows, 0, &mut chosen, vars, a, b)
}

/// `|q_i - q_j| <= 2^-i + 2^-j` for all `i, j <= depth`.
pub fn modulus_ok(s: &RealStream, depth: u32) -> bool {
    let v: Vec<Rational> = (0..=depth).map(|i| s.approx(i)).collect();
    (0..v.len()).all(|i| (0..v.len()).all(|j| (&v[i] - &v[j]).abs() <= pow2(-(i as i64)) + pow2(-(j as i64))))
}

/// `|q_i - x| <= 2^-i` for all `i <= depth`.
pub fn near(s: &RealStream, x: &Rational, depth: u32) -> bool {
    (0..=depth).all(|i| (s.approx(i) - x).abs() <= pow2(-i64::from(i)))
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| q(n, d))
}

pub fn nonneg_rational() -> impl Strategy<Value = Rational> {
    (0i64..=40, 1i64..=8).prop_map(|(n, d)| q(n, d))
}

pub fn game(max_n: usize, max_m: usize) -> impl Strategy<Value = BiMatrixGame> {
    (1..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec(proptest::collection::vec(rational(), m), n),
            proptest::collection::vec(proptest::collection::vec(rational(), m), n),
        )
            .prop_map(|(a, b)| BiMatrixGame::from_rows(a, b).unwrap())
    })
}

pub fn small_int_game() -> impl Strategy<Value = BiMatrixGame> {
    proptest::collection::vec(-1i64..=1, 8).prop_map(|v| {
        let e = |k: usize| q(v[k], 1);
        BiMatrixGame::from_rows(vec![vec![e(0), e(1)], vec![e(2), e(3)]], vec![vec![e(4), e(5)], vec![e(6), e(7)]])
            .unwrap()
    })
}

/// All `3^8` games with entries in `{-1, 0, 1}`, in a fixed order.
pub fn all_small_int_games() -> impl Iterator<Item = BiMatrixGame> {
    (0..6561u32).map(|mut code| {
        let mut e = [0i64; 8];
        for x in &mut e {
            *x = i64::from(code % 3) - 1;
            code /= 3;
        }
        let v = |k: usize| q(e[k], 1);
        BiMatrixGame::from_rows(vec![vec![v(0), v(1)], vec![v(2), v(3)]], vec![vec![v(4), v(5)], vec![v(6), v(7)]])
            .unwrap()
    })
}
