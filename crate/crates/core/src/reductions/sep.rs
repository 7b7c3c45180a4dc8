//! Robust division through Sep, and two Sep instances through one.
//!
//! The encoder writes filler symbols (1 on the first tape, 2 on the second)
//! until a stage `i0` certifies `b > 0`. It then runs one test per pair
//! `(i, j)`, in Cantor order: is the quotient approximation at stage
//! `k = i + 2 i0 + 3` within `2^-i-1` of `j 2^-i-1`? The symbol
//! `3 + [i, j]` goes to the second tape on success and to the first
//! otherwise, so a separating labelling marks exactly the successful tests
//! with 1. The decoder reads those labels back: at stage `i` it emits a
//! dyadic `j 2^-i-1` whose test succeeded.

use std::sync::{Arc, Mutex};

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::oracle::{Labelling, OracleQuery, Reduction};
use crate::rational::{pow2, Rational};
use crate::stream::{divisor_certified, first_certified_stage, Nat, NatStream, NatWitness, RangeFn, RealStream, Stage};

/// Cantor pairing `[i, j] = (i + j)(i + j + 1)/2 + j`.
pub fn pair(i: u128, j: u128) -> u128 {
    (i + j) * (i + j + 1) / 2 + j
}

pub fn unpair(c: u128) -> (u128, u128) {
    let w = ((8 * c + 1).isqrt() - 1) / 2;
    let j = c - w * (w + 1) / 2;
    (w - j, j)
}

/// First encoder symbol of the second mode.
const MODE_TWO_BASE: Nat = 3;

fn net_point(i: Stage, j: u128) -> Rational {
    Rational::from_integer(j.into()) * pow2(-i64::from(i) - 1)
}

/// The two-mode machine turning a division `a / b` into a Sep instance.
#[derive(Clone, Debug)]
pub struct SepEncoder {
    a: RealStream,
    b: RealStream,
}

impl SepEncoder {
    pub fn new(a: RealStream, b: RealStream) -> Self {
        Self { a, b }
    }

    /// Stage of the mode switch, if it happens at a stage `< before`.
    fn switched_before(&self, before: u64) -> Option<Stage> {
        let limit = u32::try_from(before).unwrap_or(u32::MAX);
        (0..limit).find(|&s| divisor_certified(&self.b, s))
    }

    /// The test of pair `(i, j)` after a switch at `i0`.
    pub fn accepts(&self, i0: Stage, i: Stage, j: u128) -> bool {
        let k = i + 2 * i0 + 3;
        let q = self.a.approx(k) / self.b.approx(k);
        let q = q.max(Rational::zero()).min(Rational::one());
        let half_step = pow2(-i64::from(i) - 1);
        (q - net_point(i, j)).abs() < half_step
    }

    /// The symbol and tape (0 or 1) of mode-two stage `c`.
    fn mode_two(&self, i0: Stage, c: u128) -> (Nat, usize) {
        let (i, j) = unpair(c);
        let i = Stage::try_from(i).expect("stage index fits");
        let symbol = MODE_TWO_BASE + c;
        (symbol, usize::from(self.accepts(i0, i, j)))
    }

    fn symbol(&self, tape: usize, t: u64) -> Nat {
        match self.switched_before(t) {
            None => [1, 2][tape],
            Some(i0) => {
                let (symbol, target) = self.mode_two(i0, u128::from(t - u64::from(i0) - 1));
                if target == tape {
                    symbol
                } else {
                    [1, 2][tape]
                }
            }
        }
    }

    fn range(&self, tape: usize) -> Option<RangeFn> {
        let positive = !self.b.witness()?.is_zero();
        let switch = positive.then(|| first_certified_stage(&self.b));
        let me = self.clone();
        Some(Arc::new(move |v: Nat| {
            if v < MODE_TWO_BASE {
                return v == [1, 2][tape];
            }
            let c = v - MODE_TWO_BASE;
            // Mode-two stage c sits at tape position c + i0 + 1, a u64.
            match switch {
                Some(i0) if c < u128::from(u64::MAX) => me.mode_two(i0, c).1 == tape,
                _ => false,
            }
        }))
    }

    pub fn tapes(&self) -> (NatStream, NatStream) {
        let tape = |k: usize| {
            let me = self.clone();
            NatStream::with_witness(move |t| me.symbol(k, t), NatWitness { zeros: None, range: self.range(k) })
        };
        (tape(0), tape(1))
    }
}

/// Rebuilds a name of the quotient from a separating labelling.
pub struct SepDecoder {
    labels: Labelling,
    outputs: Mutex<Vec<Rational>>,
}

impl SepDecoder {
    pub fn new(labels: Labelling) -> Self {
        Self { labels, outputs: Mutex::new(Vec::new()) }
    }

    /// Net size at stage `i`: the candidates are `j 2^-i-1` for `j <= 2^(i+1)`.
    pub fn kappa(i: Stage) -> u128 {
        (1u128 << (i + 1)) + 1
    }

    fn accepted(&self, i: Stage, j: u128) -> bool {
        matches!((self.labels)(MODE_TWO_BASE + pair(u128::from(i), j)), Ok(1))
    }

    /// Candidates of stage `i` ordered by distance from the previous output.
    fn candidates(i: Stage, previous: &Rational) -> impl Iterator<Item = u128> {
        let top = Self::kappa(i) - 1;
        let scaled = (previous * pow2(i64::from(i) + 1)).round().to_integer();
        let center = u128::try_from(scaled.max(0.into())).unwrap_or(top).min(top);
        (0..=top)
            .flat_map(move |d| {
                let up = center.checked_add(d).filter(|&j| j <= top);
                let down = if d == 0 { None } else { center.checked_sub(d) };
                up.into_iter().chain(down)
            })
            .take(usize::try_from(top + 1).unwrap_or(usize::MAX))
    }

    fn stage(&self, i: Stage, previous: Option<&Rational>) -> Rational {
        let start = previous.cloned().unwrap_or_else(Rational::one);
        match Self::candidates(i, &start).find(|&j| self.accepted(i, j)) {
            Some(j) => net_point(i, j),
            None => start,
        }
    }

    pub fn approx(&self, i: Stage) -> Rational {
        let mut out = self.outputs.lock().expect("decoder state poisoned");
        while out.len() <= i as usize {
            let s = out.len() as Stage;
            let next = self.stage(s, out.last());
            out.push(next);
        }
        out[i as usize].clone()
    }

    pub fn into_stream(self, witness: Option<Rational>) -> RealStream {
        let me = Arc::new(self);
        RealStream::from_fn(move |i| me.approx(i), witness)
    }
}

fn check_division(a: &RealStream, b: &RealStream) -> Result<()> {
    if let (Some(wa), Some(wb)) = (a.witness(), b.witness()) {
        if wa.is_negative() || wa > wb {
            return Err(Error::Contract(format!("division needs 0 <= a <= b, got {wa}, {wb}")));
        }
    }
    Ok(())
}

pub fn rdiv_via_sep() -> Reduction<(RealStream, RealStream), RealStream> {
    Reduction::new(
        "rdiv-via-sep",
        "Sep",
        |(a, b): &(RealStream, RealStream)| {
            check_division(a, b)?;
            let (p, q) = SepEncoder::new(a.clone(), b.clone()).tapes();
            Ok(OracleQuery::SepLabels { p, q })
        },
        |(a, b), answer| {
            let witness = match (a.witness(), b.witness()) {
                (Some(wa), Some(wb)) if !wb.is_zero() => Some(wa / wb),
                _ => None,
            };
            Ok(SepDecoder::new(answer.into_labels()?).into_stream(witness))
        },
    )
}

/// `G(p, q)(2k) = 2 p(k)`, `G(p, q)(2k + 1) = 2 q(k) + 1`.
pub fn interleave_tapes(p: &NatStream, q: &NatStream) -> NatStream {
    let range: Option<RangeFn> = match (p.witness().range.clone(), q.witness().range.clone()) {
        (Some(rp), Some(rq)) => Some(Arc::new(move |v: Nat| if v.is_multiple_of(2) { rp(v / 2) } else { rq(v / 2) })),
        _ => None,
    };
    let (p, q) = (p.clone(), q.clone());
    NatStream::with_witness(
        move |t| if t % 2 == 0 { 2 * p.at(t / 2) } else { 2 * q.at(t / 2) + 1 },
        NatWitness { zeros: None, range },
    )
}

type SepPair = ((NatStream, NatStream), (NatStream, NatStream));

pub fn sep_pair_merge() -> Reduction<SepPair, (Labelling, Labelling)> {
    Reduction::new(
        "sep-pair-merge",
        "Sep",
        |((p1, q1), (p2, q2)): &SepPair| {
            Ok(OracleQuery::SepLabels { p: interleave_tapes(p1, p2), q: interleave_tapes(q1, q2) })
        },
        |_, answer| {
            let f = answer.into_labels()?;
            let g = f.clone();
            let first: Labelling = Arc::new(move |v| f(2 * v));
            let second: Labelling = Arc::new(move |v| g(2 * v + 1));
            Ok((first, second))
        },
    )
}
