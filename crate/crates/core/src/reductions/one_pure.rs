//! MLPO_n and maximal entries of a list of reals reduce to each other.

use std::sync::Arc;

use crate::error::{argument, Error, Result};
use crate::oracle::{MlpoInput, OracleQuery, Reduction};
use crate::rational::{pow2, Rational};
use crate::reductions::{certificate_tape, tape_to_real};
use crate::stream::{first_certified_stage, NatStream, RealStream, Stage, ZeroFact};

fn check_len<T>(inputs: &[T], n: usize) -> Result<()> {
    if inputs.len() != n {
        return Err(argument(format!("expected {n} inputs, got {}", inputs.len())));
    }
    Ok(())
}

/// Tapes to payoffs: a tape that leaves zero at position `i` becomes the
/// payoff `-2^-(i+1)`, a zero tape the payoff `0`. A maximal payoff is then
/// exactly a zero tape.
pub fn mlpo_to_1pure(n: usize) -> Reduction<Vec<NatStream>, usize> {
    Reduction::new(
        "mlpo-to-1pure",
        "1Pure",
        move |tapes: &Vec<NatStream>| {
            check_len(tapes, n)?;
            let facts: Option<Vec<ZeroFact>> = tapes.iter().map(NatStream::zero_fact).collect();
            if facts.is_some_and(|f| !f.contains(&ZeroFact::AllZero)) {
                return Err(Error::Contract("no input tape is 0^ℕ".into()));
            }
            Ok(OracleQuery::OnePure(tapes.iter().map(|t| tape_to_real(t, true)).collect()))
        },
        |_, answer| answer.into_index(),
    )
}

/// Whether stage `s` certifies that some rival beats `target`:
/// `q_j(s) > q_target(s) + 2^(-s+1)`.
fn beaten_at(target: &RealStream, rivals: &[RealStream], s: Stage) -> bool {
    let bar = target.approx(s) + pow2(1 - i64::from(s));
    rivals.iter().any(|r| r.approx(s) > bar)
}

/// A tape that stays 0 while `target` might be maximal among `rivals` and
/// turns to 1 once a stage certifies it is beaten.
pub fn beaten_tape(target: RealStream, rivals: Vec<RealStream>) -> NatStream {
    let exact: Option<(Rational, Vec<Rational>)> =
        target.witness().cloned().zip(rivals.iter().map(|r| r.witness().cloned()).collect::<Option<Vec<_>>>());
    let rivals = Arc::new(rivals);
    let zeros = exact.map(|(t, rs)| {
        if rs.iter().all(|r| *r <= t) {
            ZeroFact::AllZero
        } else {
            let first = (0..).find(|&s| beaten_at(&target, &rivals, s)).expect("beaten entries certify");
            ZeroFact::FirstNonzeroAt(u64::from(first))
        }
    });
    certificate_tape(move |s| beaten_at(&target, &rivals, s), zeros)
}

/// Payoffs to tapes: tape `i` is [`beaten_tape`] of entry `i` against the
/// others, so a zero tape marks a maximal entry.
pub fn one_pure_to_mlpo(n: usize) -> Reduction<Vec<RealStream>, usize> {
    Reduction::new(
        "1pure-to-mlpo",
        "MLPO",
        move |payoffs: &Vec<RealStream>| {
            check_len(payoffs, n)?;
            let tapes = (0..n)
                .map(|i| {
                    let rivals = payoffs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone());
                    MlpoInput::Nat(beaten_tape(payoffs[i].clone(), rivals.collect()))
                })
                .collect();
            Ok(OracleQuery::Mlpo(tapes))
        },
        |_, answer| answer.into_index(),
    )
}

/// First stage at which `v > 0` is certified, for a positive witness.
pub fn certification_stage(v: &RealStream) -> Option<Stage> {
    v.witness().filter(|w| *w > &Rational::from_integer(0.into())).map(|_| first_certified_stage(v))
}
