//! Robust division against MLPO_2, bounded inequalities and zero-sum games.

use num::Zero;

use crate::algebra::mp_gadget;
use crate::error::{argument, Error};
use crate::oracle::{OracleQuery, Reduction};
use crate::rational::{pow2, Rational};
use crate::reductions::tape_to_real;
use crate::solvers::fm::IneqSystem;
use crate::stream::{NatStream, RealStream, Stage};

/// How many stages the MLPO_2 post-machine inspects before falling back to 1.
pub const MLPO2_SCAN_STAGES: Stage = 256;

/// MLPO_2 from one robust division: with `a`, `b` the reals of the two tapes,
/// `d = |a| / (|a| + |b|)` is `0` when only `b` is nonzero and `1` when only
/// `a` is. A stage certifying `d < 1` rules out the latter, one certifying
/// `d > 0` the former.
pub fn mlpo2_via_rdiv() -> Reduction<(NatStream, NatStream), usize> {
    Reduction::new(
        "mlpo2-via-rdiv",
        "rDiv",
        |(p, q): &(NatStream, NatStream)| {
            let a = tape_to_real(p, false).abs();
            let b = tape_to_real(q, false).abs();
            let sum = a.add(&b);
            Ok(OracleQuery::RdivBatch(vec![(a, sum)]))
        },
        |_, answer| {
            let d = answer.into_streams()?.into_iter().next().ok_or_else(|| Error::Internal("no quotient".into()))?;
            let one = Rational::from_integer(1.into());
            for s in 0..MLPO2_SCAN_STAGES {
                let eps = pow2(-i64::from(s));
                let v = d.approx(s);
                if v < &one - &eps {
                    return Ok(1);
                }
                if v > eps {
                    return Ok(2);
                }
            }
            Ok(1)
        },
    )
}

/// The diagonal system `q_i v_i = p_i` (as two inequalities each).
pub fn diagonal_system(pairs: &[(RealStream, RealStream)]) -> IneqSystem<RealStream> {
    let n = pairs.len();
    let zero = || RealStream::literal(Rational::zero());
    let mut rows = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for (i, (p, q)) in pairs.iter().enumerate() {
        for sign in [false, true] {
            let diag = if sign { q.neg() } else { q.clone() };
            rows.push((0..n).map(|k| if k == i { diag.clone() } else { zero() }).collect());
            rhs.push(if sign { p.neg() } else { p.clone() });
        }
    }
    IneqSystem::new(n, rows, rhs).expect("square diagonal system")
}

/// `n` robust divisions as one bounded inequality system. When `q_i > 0` the
/// only solution has `v_i = p_i / q_i`; when `q_i = 0` any `v_i` in `[0, 1]`.
pub fn rdiv_via_blinineq(n: usize) -> Reduction<Vec<(RealStream, RealStream)>, Vec<RealStream>> {
    Reduction::new(
        "rdiv-via-blinineq",
        "BLinIneq",
        move |pairs: &Vec<(RealStream, RealStream)>| {
            if pairs.len() != n {
                return Err(argument(format!("expected {n} pairs, got {}", pairs.len())));
            }
            Ok(OracleQuery::BLinIneq(diagonal_system(pairs)))
        },
        |_, answer| answer.into_streams(),
    )
}

/// Division by solving `MP(a, b - a)`: for `0 < a < b` its unique
/// equilibrium has the column player on the second column with probability
/// `a / b`, and the correlated equilibrium is that product. The answer is the
/// mass of the second column, `c12 + c22`.
pub fn rdiv_via_zcorr22() -> Reduction<(RealStream, RealStream), RealStream> {
    Reduction::new(
        "rdiv-via-zcorr22",
        "Corr (zero-sum 2x2)",
        |(a, b): &(RealStream, RealStream)| Ok(OracleQuery::Correlated(mp_gadget(a, &b.sub(a)))),
        |_, answer| {
            let c = answer.into_matrix()?;
            if c.0.rows() != 2 || c.0.cols() != 2 {
                return Err(Error::Internal("correlated answer is not 2x2".into()));
            }
            Ok(c.0.get(0, 1).add(c.0.get(1, 1)))
        },
    )
}
