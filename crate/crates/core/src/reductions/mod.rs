//! The reduction machines: each is a continuous pre-machine, one oracle
//! call, and a continuous post-machine.

pub mod division;
pub mod one_pure;
pub mod products;
pub mod sep;

use std::sync::Arc;

pub use division::{mlpo2_via_rdiv, rdiv_via_blinineq, rdiv_via_zcorr22};
pub use one_pure::{mlpo_to_1pure, one_pure_to_mlpo};
pub use products::pure_via_mlpo2_products;
pub use sep::{rdiv_via_sep, sep_pair_merge, SepDecoder, SepEncoder};

use crate::rational::{pow2, Rational};
use crate::stream::{Nat, NatStream, NatWitness, RealStream, ZeroFact};

/// Command-line names of the machines.
pub const CATALOG: [&str; 8] = [
    "mlpo-to-1pure",
    "1pure-to-mlpo",
    "pure-via-mlpo2",
    "mlpo2-via-rdiv",
    "rdiv-via-blinineq",
    "rdiv-via-sep",
    "sep-pair-merge",
    "rdiv-via-zcorr22",
];

/// First position `<= s` where the tape is nonzero.
pub(crate) fn first_nonzero_upto(tape: &NatStream, s: u64) -> Option<u64> {
    (0..=s).find(|&k| tape.at(k) != 0)
}

/// A name of `sign · 2^-(i+1)` when the tape first leaves zero at `i`, and of
/// `0` for `0^ℕ`. Stage `s` only reads positions `<= s`.
pub fn tape_to_real(tape: &NatStream, negative: bool) -> RealStream {
    let value = move |i: u64| {
        let v = pow2(-(i as i64) - 1);
        if negative {
            -v
        } else {
            v
        }
    };
    let witness = tape.zero_fact().map(|fact| match fact {
        ZeroFact::AllZero => Rational::from_integer(0.into()),
        ZeroFact::FirstNonzeroAt(i) => value(i),
    });
    let tape = tape.clone();
    RealStream::from_fn(
        move |s| match first_nonzero_upto(&tape, u64::from(s)) {
            Some(i) => value(i),
            None => Rational::from_integer(0.into()),
        },
        witness,
    )
}

/// A 0/1 tape that turns to 1 (and stays 1) at the first position where
/// `certified(s)` holds.
pub(crate) fn certificate_tape(
    certified: impl Fn(u32) -> bool + Send + Sync + 'static,
    zeros: Option<ZeroFact>,
) -> NatStream {
    let certified = Arc::new(certified);
    let witness = NatWitness { zeros, range: Some(Arc::new(|v: Nat| v <= 1)) };
    NatStream::with_witness(
        move |s| {
            let s = u32::try_from(s).unwrap_or(u32::MAX);
            Nat::from((0..=s).any(|t| certified(t)))
        },
        witness,
    )
}

/// `1` wherever either tape is nonzero.
pub fn either_tape(a: &NatStream, b: &NatStream) -> NatStream {
    let zeros = match (a.zero_fact(), b.zero_fact()) {
        (Some(ZeroFact::AllZero), Some(ZeroFact::AllZero)) => Some(ZeroFact::AllZero),
        (Some(ZeroFact::AllZero), Some(f)) | (Some(f), Some(ZeroFact::AllZero)) => Some(f),
        (Some(ZeroFact::FirstNonzeroAt(i)), Some(ZeroFact::FirstNonzeroAt(j))) => {
            Some(ZeroFact::FirstNonzeroAt(i.min(j)))
        }
        _ => None,
    };
    let (a, b) = (a.clone(), b.clone());
    NatStream::with_witness(
        move |k| Nat::from(a.at(k) != 0 || b.at(k) != 0),
        NatWitness { zeros, range: Some(Arc::new(|v: Nat| v <= 1)) },
    )
}
