//! Maximal entries and pure equilibria.

use crate::error::{argument, Error, Result};
use crate::exact::argmax;
use crate::game::BiMatrixGame;
use crate::oracle::{MlpoInput, Oracle, OracleQuery};
use crate::rational::Rational;
use crate::reductions::one_pure::{beaten_tape, one_pure_to_mlpo};
use crate::stream::RealStream;

/// A maximal entry (1-based, smallest on ties).
pub fn solve_1pure_exact(payoffs: &[Rational]) -> Result<usize> {
    argmax(payoffs).ok_or_else(|| argument("no payoffs to maximize"))
}

/// A maximal entry of streamed payoffs, found through one MLPO call.
pub fn solve_1pure_oracle(payoffs: &[RealStream], oracle: &dyn Oracle) -> Result<usize> {
    if payoffs.is_empty() {
        return Err(argument("no payoffs to maximize"));
    }
    one_pure_to_mlpo(payoffs.len()).run(&payoffs.to_vec(), oracle)
}

/// A pure equilibrium `(i, j)` (1-based) of a streamed game.
///
/// Cell `(i, j)` gets a tape that turns to 1 once some deviation is certified
/// profitable; an all-zero tape marks an equilibrium. Without one the MLPO
/// promise fails and the oracle reports a contract error.
pub fn solve_pure_oracle(g: &BiMatrixGame<RealStream>, oracle: &dyn Oracle) -> Result<(usize, usize)> {
    let (n, m) = (g.rows(), g.cols());
    let mut tapes = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let rows: Vec<RealStream> = (0..n).filter(|&k| k != i).map(|k| g.a().get(k, j).clone()).collect();
            let cols: Vec<RealStream> = (0..m).filter(|&l| l != j).map(|l| g.b().get(i, l).clone()).collect();
            let row_tape = beaten_tape(g.a().get(i, j).clone(), rows);
            let col_tape = beaten_tape(g.b().get(i, j).clone(), cols);
            tapes.push(MlpoInput::Nat(crate::reductions::either_tape(&row_tape, &col_tape)));
        }
    }
    let k = match oracle.answer(&OracleQuery::Mlpo(tapes)) {
        Ok(answer) => answer.into_index()?,
        Err(Error::Contract(_)) => return Err(Error::Contract("no pure equilibrium".into())),
        Err(e) => return Err(e),
    };
    if k == 0 || k > n * m {
        return Err(Error::Internal("oracle index out of range".into()));
    }
    Ok(((k - 1) / m + 1, (k - 1) % m + 1))
}
