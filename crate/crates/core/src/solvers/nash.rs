//! Nash equilibria by support selection and inequality solving.
//!
//! For a support pair `(I, J)` the row strategy `x` must make every column
//! in `J` a best response (equal payoffs within `J`, at least as good as any
//! column outside it) and vanish outside `I`; symmetrically for `y`. The two
//! conditions are independent, so each player's weights come from its own
//! bounded inequality system.

use crate::error::{Error, Result};
use crate::exact::{support_pairs, Support};
use crate::game::{BiMatrixGame, MixedProfile, Payoff};
use crate::oracle::{Cover, Oracle, OracleQuery};
use crate::rational::Rational;
use crate::solvers::fm::{fm_solve_exact, fm_solve_stream, IneqSystem};
use crate::stream::RealStream;

fn unit<T: Payoff>(len: usize, at: usize, sign: i64) -> Vec<T> {
    (0..len).map(|k| if k == at { T::known(&Rational::from_integer(sign.into())) } else { T::zero_value() }).collect()
}

/// Constraints on one player's weights (`own` strategies) that make every
/// opponent strategy in `active` a best response. `payoff(k, s)` is the
/// opponent's payoff for its strategy `k` against our strategy `s`.
fn weight_system<T: Payoff>(
    own: usize,
    opp: usize,
    support: &[usize],
    active: &[usize],
    payoff: impl Fn(usize, usize) -> T,
) -> IneqSystem<T> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let pivot = active[0];
    for k in (0..opp).filter(|&k| k != pivot) {
        let diff: Vec<T> = (0..own).map(|s| payoff(k, s).sub(&payoff(pivot, s))).collect();
        if active.contains(&k) {
            rows.push(diff.iter().map(Payoff::neg).collect());
            rhs.push(T::zero_value());
        }
        rows.push(diff);
        rhs.push(T::zero_value());
    }
    for q in (0..own).filter(|q| !support.contains(q)) {
        rows.push(unit(own, q, 1));
        rhs.push(T::zero_value());
    }
    let one = T::known(&Rational::from_integer(1.into()));
    rows.push(vec![one.clone(); own]);
    rhs.push(one.clone());
    rows.push(vec![one.neg(); own]);
    rhs.push(one.neg());
    IneqSystem::new(own, rows, rhs).expect("well-formed weight system")
}

/// The two systems for `(I, J)`: row weights first, then column weights.
pub fn support_systems<T: Payoff>(g: &BiMatrixGame<T>, support: &Support) -> (IneqSystem<T>, IneqSystem<T>) {
    let (n, m) = (g.rows(), g.cols());
    let x = weight_system(n, m, &support.rows, &support.cols, |l, s| g.b().get(s, l).clone());
    let y = weight_system(m, n, &support.cols, &support.rows, |k, t| g.a().get(k, t).clone());
    (x, y)
}

/// First support pair, in enumeration order, whose systems are feasible.
pub fn solve_nash_exact(g: &BiMatrixGame) -> Result<MixedProfile> {
    for support in support_pairs(g.rows(), g.cols()) {
        let (xs, ys) = support_systems(g, &support);
        if let (Some(x), Some(y)) = (fm_solve_exact(&xs), fm_solve_exact(&ys)) {
            return Ok(MixedProfile { x, y });
        }
    }
    Err(Error::Internal("no support pair admits an equilibrium".into()))
}

/// Oracle mode: the support pair comes from a cover selection, the weights
/// from stream elimination.
pub fn solve_nash_oracle(g: &BiMatrixGame<RealStream>, oracle: &dyn Oracle) -> Result<MixedProfile<RealStream>> {
    let support = oracle.answer(&OracleQuery::CoverSelect(Cover::NashSupport(g.clone())))?.into_support()?;
    if support.rows.iter().any(|&i| i >= g.rows()) || support.cols.iter().any(|&j| j >= g.cols()) {
        return Err(Error::Internal("oracle returned an out-of-range support".into()));
    }
    let (xs, ys) = support_systems(g, &support);
    Ok(MixedProfile { x: fm_solve_stream(&xs, oracle)?, y: fm_solve_stream(&ys, oracle)? })
}
