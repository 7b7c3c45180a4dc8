//! Ground-truth verifiers for pure, Nash and correlated equilibria, plus a
//! support-enumeration Nash solver. Every comparison here is exact.

use std::fmt;

use num::{One, Zero};

use crate::error::{argument, Error, Result};
use crate::game::{BiMatrixGame, CorrelatedMatrix, MixedProfile};
use crate::rational::Rational;
use crate::solvers::fm::{fm_solve_exact, IneqSystem};

/// The first inequality of an equilibrium definition that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Switching to pure row `to` raises the row player's payoff by `gain`.
    RowDeviation { to: usize, gain: Rational },
    /// Switching to pure column `to` raises the column player's payoff by `gain`.
    ColumnDeviation { to: usize, gain: Rational },
    /// Told to play row `from`, the row player gains `gain` by playing `to`.
    CorrelatedRow { from: usize, to: usize, gain: Rational },
    /// Told to play column `from`, the column player gains `gain` by playing `to`.
    CorrelatedColumn { from: usize, to: usize, gain: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowDeviation { to, gain } => {
                write!(f, "row player gains {gain} by deviating to row {to}")
            }
            Violation::ColumnDeviation { to, gain } => {
                write!(f, "column player gains {gain} by deviating to column {to}")
            }
            Violation::CorrelatedRow { from, to, gain } => {
                write!(f, "row player recommended row {from} gains {gain} by playing row {to}")
            }
            Violation::CorrelatedColumn { from, to, gain } => {
                write!(f, "column player recommended column {from} gains {gain} by playing column {to}")
            }
        }
    }
}

fn check_index(g: &BiMatrixGame, i: usize, j: usize) -> Result<()> {
    if i == 0 || i > g.rows() || j == 0 || j > g.cols() {
        return Err(argument(format!("cell ({i},{j}) outside a {}x{} game", g.rows(), g.cols())));
    }
    Ok(())
}

/// `(i, j)` (1-based) is a pure equilibrium: no profitable unilateral pure deviation.
pub fn is_pure_equilibrium(g: &BiMatrixGame, i: usize, j: usize) -> Result<bool> {
    check_index(g, i, j)?;
    let (r, c) = (i - 1, j - 1);
    let row_best = (0..g.rows()).all(|k| g.a().get(r, c) >= g.a().get(k, c));
    let col_best = (0..g.cols()).all(|l| g.b().get(r, c) >= g.b().get(r, l));
    Ok(row_best && col_best)
}

/// All pure equilibria in row-major order, 1-based.
pub fn enumerate_pure(g: &BiMatrixGame) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=g.rows() {
        for j in 1..=g.cols() {
            if is_pure_equilibrium(g, i, j).unwrap_or(false) {
                out.push((i, j));
            }
        }
    }
    out
}

fn check_profile(g: &BiMatrixGame, p: &MixedProfile) -> Result<()> {
    if p.x.len() != g.rows() || p.y.len() != g.cols() {
        return Err(argument(format!(
            "profile of sizes ({}, {}) does not fit a {}x{} game",
            p.x.len(),
            p.y.len(),
            g.rows(),
            g.cols()
        )));
    }
    MixedProfile::new(p.x.clone(), p.y.clone()).map(|_| ())
}

/// `(A y)_k` for every row `k`.
pub fn row_payoffs(g: &BiMatrixGame, y: &[Rational]) -> Vec<Rational> {
    (0..g.rows()).map(|k| g.a().row(k).iter().zip(y).map(|(a, yl)| a * yl).sum()).collect()
}

/// `(x^T B)_l` for every column `l`.
pub fn column_payoffs(g: &BiMatrixGame, x: &[Rational]) -> Vec<Rational> {
    (0..g.cols()).map(|l| (0..g.rows()).map(|k| g.b().get(k, l) * &x[k]).sum()).collect()
}

/// The first pure deviation that beats the profile, if any.
pub fn nash_violation(g: &BiMatrixGame, p: &MixedProfile) -> Result<Option<Violation>> {
    check_profile(g, p)?;
    let rows = row_payoffs(g, &p.y);
    let current: Rational = rows.iter().zip(&p.x).map(|(v, xk)| v * xk).sum();
    for (k, v) in rows.iter().enumerate() {
        if *v > current {
            return Ok(Some(Violation::RowDeviation { to: k + 1, gain: v - &current }));
        }
    }
    let cols = column_payoffs(g, &p.x);
    let current: Rational = cols.iter().zip(&p.y).map(|(v, yl)| v * yl).sum();
    for (l, v) in cols.iter().enumerate() {
        if *v > current {
            return Ok(Some(Violation::ColumnDeviation { to: l + 1, gain: v - &current }));
        }
    }
    Ok(None)
}

/// Exact Nash check against the finitely many pure deviations of each player.
pub fn is_nash(g: &BiMatrixGame, p: &MixedProfile) -> Result<bool> {
    Ok(nash_violation(g, p)?.is_none())
}

pub fn correlated_violation(g: &BiMatrixGame, c: &CorrelatedMatrix) -> Result<Option<Violation>> {
    let m = c.matrix();
    if m.rows() != g.rows() || m.cols() != g.cols() {
        return Err(argument(format!(
            "{}x{} correlated matrix does not fit a {}x{} game",
            m.rows(),
            m.cols(),
            g.rows(),
            g.cols()
        )));
    }
    CorrelatedMatrix::new(m.clone())?;
    for i in 0..g.rows() {
        let obey: Rational = (0..g.cols()).map(|j| g.a().get(i, j) * m.get(i, j)).sum();
        for l in 0..g.rows() {
            let deviate: Rational = (0..g.cols()).map(|j| g.a().get(l, j) * m.get(i, j)).sum();
            if deviate > obey {
                return Ok(Some(Violation::CorrelatedRow { from: i + 1, to: l + 1, gain: deviate - &obey }));
            }
        }
    }
    for j in 0..g.cols() {
        let obey: Rational = (0..g.rows()).map(|i| g.b().get(i, j) * m.get(i, j)).sum();
        for k in 0..g.cols() {
            let deviate: Rational = (0..g.rows()).map(|i| g.b().get(i, k) * m.get(i, j)).sum();
            if deviate > obey {
                return Ok(Some(Violation::CorrelatedColumn { from: j + 1, to: k + 1, gain: deviate - &obey }));
            }
        }
    }
    Ok(None)
}

pub fn is_correlated(g: &BiMatrixGame, c: &CorrelatedMatrix) -> Result<bool> {
    Ok(correlated_violation(g, c)?.is_none())
}

/// Candidate supports `(I, J)` as zero-based index sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> =
        (1u32..(1 << n)).map(|mask| (0..n).filter(|k| mask & (1 << k) != 0).collect()).collect();
    subsets.sort();
    subsets
}

/// All support pairs ordered by `(|I| + |J|, I, J)`, smallest first.
pub fn support_pairs(n: usize, m: usize) -> Vec<Support> {
    let rows = nonempty_subsets(n);
    let cols = nonempty_subsets(m);
    let mut pairs: Vec<Support> =
        rows.iter().flat_map(|i| cols.iter().map(move |j| Support { rows: i.clone(), cols: j.clone() })).collect();
    pairs.sort_by(|p, q| {
        (p.rows.len() + p.cols.len(), &p.rows, &p.cols).cmp(&(q.rows.len() + q.cols.len(), &q.rows, &q.cols))
    });
    pairs
}

/// Mixed strategy over `support` (zero elsewhere) making every strategy of
/// `active` equally good and at least as good as the others, where `payoff(k, s)`
/// is the opponent's payoff for its strategy `k` against own strategy `s`.
fn indifference_weights(
    own: usize,
    opp: usize,
    support: &[usize],
    active: &[usize],
    payoff: impl Fn(usize, usize) -> Rational,
) -> Option<Vec<Rational>> {
    let vars = support.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut push = |coef: Vec<Rational>, b: Rational| {
        rows.push(coef);
        rhs.push(b);
    };
    let value_of = |k: usize| support.iter().map(|&s| payoff(k, s)).collect::<Vec<_>>();
    let pivot = value_of(active[0]);
    for k in 0..opp {
        if k == active[0] {
            continue;
        }
        let diff: Vec<Rational> = value_of(k).iter().zip(&pivot).map(|(v, p)| v - p).collect();
        if active.contains(&k) {
            push(diff.iter().map(|d| -d).collect(), Rational::zero());
        }
        push(diff, Rational::zero());
    }
    push(vec![Rational::one(); vars], Rational::one());
    push(vec![-Rational::one(); vars], -Rational::one());
    let system = IneqSystem::new(vars, rows, rhs).ok()?;
    let w = fm_solve_exact(&system)?;
    let mut full = vec![Rational::zero(); own];
    for (s, value) in support.iter().zip(w) {
        full[*s] = value;
    }
    Some(full)
}

/// The equilibrium with support inside `support`, if the support admits one.
pub fn nash_on_support(g: &BiMatrixGame, support: &Support) -> Option<MixedProfile> {
    let (n, m) = (g.rows(), g.cols());
    // x keeps the column player indifferent across J and unwilling to leave it.
    let x = indifference_weights(n, m, &support.rows, &support.cols, |l, k| g.b().get(k, l).clone())?;
    let y = indifference_weights(m, n, &support.cols, &support.rows, |k, l| g.a().get(k, l).clone())?;
    Some(MixedProfile { x, y })
}

/// Brute-force Nash solver: the first feasible support pair in `support_pairs` order.
pub fn solve_nash_bruteforce(g: &BiMatrixGame) -> Result<MixedProfile> {
    support_pairs(g.rows(), g.cols())
        .iter()
        .find_map(|s| nash_on_support(g, s))
        .ok_or_else(|| Error::Internal("no support pair has an equilibrium".into()))
}

/// Argmax of a payoff vector, the smallest index among ties (1-based).
pub fn argmax(values: &[Rational]) -> Option<usize> {
    let mut best: Option<(usize, &Rational)> = None;
    for (k, v) in values.iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((k, v));
        }
    }
    best.map(|(k, _)| k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn game(a: &[&[i64]], b: &[&[i64]]) -> BiMatrixGame {
        let conv = |m: &[&[i64]]| m.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        BiMatrixGame::from_rows(conv(a), conv(b)).unwrap()
    }

    fn mp(a: Rational, b: Rational) -> BiMatrixGame {
        let m = crate::game::Matrix::from_rows(vec![vec![a, int(0)], vec![int(0), b]]).unwrap();
        BiMatrixGame::zero_sum(m)
    }

    #[test]
    fn pure_checks() {
        let coord = game(&[&[1, 0], &[0, 0]], &[&[1, 0], &[0, 0]]);
        assert!(is_pure_equilibrium(&coord, 1, 1).unwrap());
        assert!(!is_pure_equilibrium(&mp(int(1), int(1)), 1, 1).unwrap());
        assert!(is_pure_equilibrium(&game(&[&[3]], &[&[-7]]), 1, 1).unwrap());
        assert!(is_pure_equilibrium(&coord, 3, 1).is_err());
        assert!(is_pure_equilibrium(&coord, 0, 1).is_err());
    }

    #[test]
    fn pure_enumeration() {
        assert!(enumerate_pure(&mp(int(1), int(1))).is_empty());
        // (2,2) is also an equilibrium: both players are indifferent there.
        let coord = game(&[&[1, 0], &[0, 0]], &[&[1, 0], &[0, 0]]);
        assert_eq!(enumerate_pure(&coord), vec![(1, 1), (2, 2)]);
        let zeros = game(&[&[0, 0], &[0, 0]], &[&[0, 0], &[0, 0]]);
        assert_eq!(enumerate_pure(&zeros), vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
    }

    #[test]
    fn nash_checks() {
        let p = MixedProfile::new(vec![rat(3, 4), rat(1, 4)], vec![rat(3, 4), rat(1, 4)]).unwrap();
        assert!(is_nash(&mp(int(1), int(3)), &p).unwrap());
        let pure = MixedProfile::pure(2, 2, 1, 1);
        assert_eq!(
            nash_violation(&mp(int(1), int(1)), &pure).unwrap(),
            Some(Violation::ColumnDeviation { to: 2, gain: int(1) })
        );
        let wrong_dims = MixedProfile::pure(3, 2, 1, 1);
        assert!(is_nash(&mp(int(1), int(1)), &wrong_dims).is_err());
    }

    #[test]
    fn correlated_checks() {
        let g = mp(int(1), int(1));
        let half = MixedProfile::new(vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert!(is_correlated(&g, &half.outer()).unwrap());
        let corner = CorrelatedMatrix::point(2, 2, 1, 1);
        assert!(!is_correlated(&g, &corner).unwrap());
        let trivial = game(&[&[4]], &[&[2]]);
        assert!(is_correlated(&trivial, &CorrelatedMatrix::point(1, 1, 1, 1)).unwrap());
    }

    #[test]
    fn support_order_is_smallest_first() {
        let pairs = support_pairs(2, 2);
        assert_eq!(pairs.len(), 9);
        assert_eq!(pairs[0], Support { rows: vec![0], cols: vec![0] });
        assert_eq!(pairs[1], Support { rows: vec![0], cols: vec![1] });
        assert_eq!(pairs[4], Support { rows: vec![0], cols: vec![0, 1] });
        assert_eq!(pairs[8], Support { rows: vec![0, 1], cols: vec![0, 1] });
    }

    #[test]
    fn bruteforce_solutions() {
        let half = vec![rat(1, 2), rat(1, 2)];
        assert_eq!(solve_nash_bruteforce(&mp(int(1), int(1))).unwrap(), MixedProfile { x: half.clone(), y: half });
        let coord = game(&[&[1, 0], &[0, 0]], &[&[1, 0], &[0, 0]]);
        assert_eq!(solve_nash_bruteforce(&coord).unwrap(), MixedProfile::pure(2, 2, 1, 1));
        let q = vec![rat(3, 4), rat(1, 4)];
        assert_eq!(solve_nash_bruteforce(&mp(int(2), int(6))).unwrap(), MixedProfile { x: q.clone(), y: q });
    }

    #[test]
    fn argmax_prefers_smallest_index() {
        assert_eq!(argmax(&[int(0), int(1)]), Some(2));
        assert_eq!(argmax(&[int(5), int(5)]), Some(1));
        assert_eq!(argmax(&[int(1), int(3), int(2)]), Some(2));
        assert_eq!(argmax(&[]), None);
    }
}
