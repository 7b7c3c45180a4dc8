//! A maximal entry among `n + 1` reals through `n` parallel MLPO_2 calls.
//!
//! Call `k` compares entry `k` with every later entry. Its first tape turns
//! to 1 once some later entry is certified larger; its second once entry `k`
//! is certified larger than all later ones. At least one tape stays zero, so
//! the call is well posed. Answer 1 means entry `k` is at least every later
//! entry; answer 2 means some later entry is at least entry `k`. The first
//! call answering 1 therefore names a maximal entry, and if every call
//! answers 2 the last entry is maximal.

use std::sync::Arc;

use crate::error::{argument, Error};
use crate::oracle::{MlpoInput, OracleAnswer, OracleQuery, Reduction};
use crate::rational::{pow2, Rational};
use crate::reductions::certificate_tape;
use crate::reductions::one_pure::beaten_tape;
use crate::stream::{RealStream, Stage, ZeroFact};

fn dominates_at(target: &RealStream, later: &[RealStream], s: Stage) -> bool {
    let margin = pow2(1 - i64::from(s));
    let t = target.approx(s);
    later.iter().all(|r| t > r.approx(s) + &margin)
}

fn dominates_tape(target: RealStream, later: Vec<RealStream>) -> crate::stream::NatStream {
    let exact: Option<(Rational, Vec<Rational>)> =
        target.witness().cloned().zip(later.iter().map(|r| r.witness().cloned()).collect::<Option<Vec<_>>>());
    let later = Arc::new(later);
    let zeros = exact.map(|(t, rs)| {
        if rs.iter().all(|r| *r < t) {
            let first = (0..).find(|&s| dominates_at(&target, &later, s)).expect("strict maxima certify");
            ZeroFact::FirstNonzeroAt(u64::from(first))
        } else {
            ZeroFact::AllZero
        }
    });
    certificate_tape(move |s| dominates_at(&target, &later, s), zeros)
}

pub fn pure_via_mlpo2_products(n: usize) -> Reduction<Vec<RealStream>, usize> {
    Reduction::new(
        "pure-via-mlpo2",
        "MLPO_2 product",
        move |payoffs: &Vec<RealStream>| {
            if payoffs.len() != n + 1 {
                return Err(argument(format!("expected {} payoffs, got {}", n + 1, payoffs.len())));
            }
            let calls = (0..n)
                .map(|k| {
                    let later = payoffs[k + 1..].to_vec();
                    OracleQuery::Mlpo(vec![
                        MlpoInput::Nat(beaten_tape(payoffs[k].clone(), later.clone())),
                        MlpoInput::Nat(dominates_tape(payoffs[k].clone(), later)),
                    ])
                })
                .collect();
            Ok(OracleQuery::Product(calls))
        },
        move |_, answer| {
            let answers = answer.into_answers()?;
            if answers.len() != n {
                return Err(Error::Internal("wrong number of MLPO_2 answers".into()));
            }
            for (k, a) in answers.into_iter().enumerate() {
                match OracleAnswer::into_index(a)? {
                    1 => return Ok(k + 1),
                    2 => continue,
                    other => return Err(Error::Internal(format!("MLPO_2 answered {other}"))),
                }
            }
            Ok(n + 1)
        },
    )
}
