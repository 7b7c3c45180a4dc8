//! Real numbers as lazy rational streams with a `2^-i` convergence modulus.
//!
//! A [`RealStream`] yields rationals `q_0, q_1, ...` with `|q_i - x| <= 2^-i`
//! for the real `x` it names. Streams are immutable, memoize evaluated stages,
//! and may carry an exact *witness*: the limit, known to the test harness but
//! never inspected by a continuous machine. Oracles answer from witnesses.
//!
//! A stream can also be a *literal*: a constant written by the machine itself
//! (a bound row's `1`, a structural `0`). Machines may branch on literals.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{Signed, Zero};

use crate::error::{argument, Result};
use crate::rational::{magnitude_bits, pow2, Rational};

/// Index into a stream.
pub type Stage = u32;

type ApproxFn = dyn Fn(Stage) -> Rational + Send + Sync;

struct RealInner {
    approx: Box<ApproxFn>,
    memo: Mutex<HashMap<Stage, Rational>>,
    witness: Option<Rational>,
    literal: bool,
}

/// A ρ-name: a memoized stream of rational approximations.
#[derive(Clone)]
pub struct RealStream(Arc<RealInner>);

impl fmt::Debug for RealStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealStream")
            .field("q0", &self.approx(0).to_string())
            .field("witness", &self.0.witness.as_ref().map(ToString::to_string))
            .field("literal", &self.0.literal)
            .finish()
    }
}

impl fmt::Display for RealStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.witness {
            Some(w) => write!(f, "{w}"),
            None => write!(f, "~{}", self.approx(16)),
        }
    }
}

/// Pointwise binary operations on streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Min,
    Max,
}

/// Pointwise unary operations on streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    /// Multiply by `2^-k`.
    ScalePow2(i32),
}

/// Outcome of a one-sided stage test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semi {
    Yes,
    Unknown,
}

impl RealStream {
    /// Builds a stream from its stage function. The caller guarantees the modulus.
    pub fn from_fn(f: impl Fn(Stage) -> Rational + Send + Sync + 'static, witness: Option<Rational>) -> Self {
        Self::build(Box::new(f), witness, false)
    }

    fn build(approx: Box<ApproxFn>, witness: Option<Rational>, literal: bool) -> Self {
        RealStream(Arc::new(RealInner { approx, memo: Mutex::new(HashMap::new()), witness, literal }))
    }

    /// The constant stream `q, q, q, ...` with witness `q`.
    pub fn constant(q: Rational) -> Self {
        let value = q.clone();
        Self::build(Box::new(move |_| value.clone()), Some(q), false)
    }

    /// A constant known to the machine, not just to the harness.
    pub fn literal(q: Rational) -> Self {
        let value = q.clone();
        Self::build(Box::new(move |_| value.clone()), Some(q), true)
    }

    /// A non-constant name of `x`: stage `i` is `x + d_i 2^-i` with a
    /// deterministic pseudo-random `d_i` in `[-1, 1]`.
    pub fn jittered(x: Rational, seed: u64) -> Self {
        let limit = x.clone();
        Self::from_fn(
            move |i| {
                let h = splitmix64(seed ^ (u64::from(i)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let d = Rational::new(((h % 2001) as i64 - 1000).into(), 1000.into());
                &limit + d * pow2(-i64::from(i))
            },
            Some(x),
        )
    }

    /// Stage `i` approximation, memoized.
    pub fn approx(&self, i: Stage) -> Rational {
        if let Some(q) = self.0.memo.lock().expect("stream memo poisoned").get(&i) {
            return q.clone();
        }
        let q = (self.0.approx)(i);
        self.0.memo.lock().expect("stream memo poisoned").entry(i).or_insert(q).clone()
    }

    pub fn witness(&self) -> Option<&Rational> {
        self.0.witness.as_ref()
    }

    pub fn is_literal(&self) -> bool {
        self.0.literal
    }

    /// The value of a literal; `None` for data streams.
    pub fn literal_value(&self) -> Option<&Rational> {
        if self.0.literal {
            self.0.witness.as_ref()
        } else {
            None
        }
    }

    fn is_literal_zero(&self) -> bool {
        self.literal_value().is_some_and(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        lift_binary(BinaryOp::Add, self, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        lift_binary(BinaryOp::Sub, self, other)
    }

    pub fn min(&self, other: &Self) -> Self {
        lift_binary(BinaryOp::Min, self, other)
    }

    pub fn max(&self, other: &Self) -> Self {
        lift_binary(BinaryOp::Max, self, other)
    }

    pub fn neg(&self) -> Self {
        lift_unary(UnaryOp::Neg, self)
    }

    pub fn abs(&self) -> Self {
        lift_unary(UnaryOp::Abs, self)
    }

    /// `x · 2^-k`.
    pub fn scale_pow2(&self, k: i32) -> Self {
        lift_unary(UnaryOp::ScalePow2(k), self)
    }

    /// Product. Stage `i` reads both factors at `i + K + 1`, where `2^K`
    /// bounds `|q_0| + 2` for both factors.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_literal_zero() || other.is_literal_zero() {
            return Self::literal(Rational::zero());
        }
        let witness = both(self, other, |a, b| a * b);
        let literal = self.is_literal() && other.is_literal();
        let shift = magnitude_bits(&self.approx(0)).max(magnitude_bits(&other.approx(0))) + 1;
        let (a, b) = (self.clone(), other.clone());
        Self::build(Box::new(move |i| a.approx(i + shift) * b.approx(i + shift)), witness, literal)
    }

    /// Sum of many streams, balanced so the stage shift grows logarithmically.
    pub fn sum(terms: &[RealStream]) -> Self {
        match terms {
            [] => Self::literal(Rational::zero()),
            [one] => one.clone(),
            _ => {
                let (l, r) = terms.split_at(terms.len() / 2);
                Self::sum(l).add(&Self::sum(r))
            }
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn both(a: &RealStream, b: &RealStream, f: impl Fn(&Rational, &Rational) -> Rational) -> Option<Rational> {
    Some(f(a.witness()?, b.witness()?))
}

pub fn lift_binary(op: BinaryOp, a: &RealStream, b: &RealStream) -> RealStream {
    let apply = move |x: &Rational, y: &Rational| match op {
        BinaryOp::Add => x + y,
        BinaryOp::Sub => x - y,
        BinaryOp::Min => x.min(y).clone(),
        BinaryOp::Max => x.max(y).clone(),
    };
    let witness = both(a, b, apply);
    let literal = a.is_literal() && b.is_literal();
    // Sums need one extra bit; min and max are 1-Lipschitz in the sup norm.
    let shift = match op {
        BinaryOp::Add | BinaryOp::Sub => 1,
        BinaryOp::Min | BinaryOp::Max => 0,
    };
    let (a, b) = (a.clone(), b.clone());
    RealStream::build(Box::new(move |i| apply(&a.approx(i + shift), &b.approx(i + shift))), witness, literal)
}

pub fn lift_unary(op: UnaryOp, a: &RealStream) -> RealStream {
    let apply = move |x: &Rational| match op {
        UnaryOp::Neg => -x,
        UnaryOp::Abs => x.abs(),
        UnaryOp::ScalePow2(k) => x * pow2(-i64::from(k)),
    };
    let witness = a.witness().map(apply);
    let literal = a.is_literal();
    // Scaling up by 2^|k| needs |k| extra bits of input precision.
    let shift = match op {
        UnaryOp::ScalePow2(k) if k < 0 => k.unsigned_abs(),
        _ => 0,
    };
    let a = a.clone();
    RealStream::build(Box::new(move |i| apply(&a.approx(i + shift))), witness, literal)
}

/// `Yes` only if stage `i` certifies `lim(a) > q`, i.e. `q_i > q + 2^-i`.
pub fn semitest_gt(a: &RealStream, q: &Rational, i: Stage) -> Semi {
    if a.approx(i) > q + pow2(-i64::from(i)) {
        Semi::Yes
    } else {
        Semi::Unknown
    }
}

/// Whether stage `s` certifies the divisor positive: `q_s > 2^(-s+1)`.
pub(crate) fn divisor_certified(v: &RealStream, s: Stage) -> bool {
    semitest_gt(v, &pow2(-i64::from(s)), s) == Semi::Yes
}

/// First stage certifying `lim(v) > 0`. Terminates whenever `lim(v) > 0`.
pub(crate) fn first_certified_stage(v: &RealStream) -> Stage {
    (0..).find(|&s| divisor_certified(v, s)).expect("stage counter overflow")
}

/// Robust division: a name of `lim(u)/lim(v)` when `lim(v) > 0`, and of some
/// value in `[0, 1]` (here `0`) when `lim(v) = 0`. Requires `0 <= u <= v`.
///
/// Once the divisor is certified positive at stage `i0`, stage `i` is
/// `u_k / v_k` with `k = i + 2(i0 + 1)`, which is within `2^-i` of the
/// quotient. With a witness on `v` the certification stage is found up front
/// (the search is finite exactly when `v > 0`), so every stage is correct.
/// Without one, stage `i` only looks for a certificate among stages `<= i`
/// and emits `0` until one appears; that stream is a valid name only if
/// the certificate comes early enough.
pub fn rdiv(u: &RealStream, v: &RealStream) -> Result<RealStream> {
    if let Some(wu) = u.witness() {
        if wu.is_negative() {
            return Err(argument(format!("robust division numerator {wu} is negative")));
        }
    }
    if let Some(wv) = v.witness() {
        if wv.is_negative() {
            return Err(argument(format!("robust division divisor {wv} is negative")));
        }
    }
    if let (Some(wu), Some(wv)) = (u.witness(), v.witness()) {
        if wu > wv {
            return Err(argument(format!("robust division needs u <= v, got {wu} > {wv}")));
        }
    }
    let witness = match (u.witness(), v.witness()) {
        (Some(_), Some(wv)) if wv.is_zero() => Some(Rational::zero()),
        (Some(wu), Some(wv)) => Some(wu / wv),
        _ => None,
    };
    let literal = u.is_literal() && v.is_literal();
    let (u, v) = (u.clone(), v.clone());
    let v_for_quotient = v.clone();
    let divisor_zero = v.witness().map(Zero::is_zero);
    let certified_at: OnceLock<Option<Stage>> = OnceLock::new();
    let quotient = move |i: Stage, i0: Stage| {
        let k = i + 2 * (i0 + 1);
        u.approx(k) / v_for_quotient.approx(k)
    };
    Ok(RealStream::build(
        Box::new(move |i| {
            let i0 = match divisor_zero {
                Some(true) => None,
                Some(false) => *certified_at.get_or_init(|| Some(first_certified_stage(&v))),
                None => (0..=i).find(|&s| divisor_certified(&v, s)),
            };
            match i0 {
                Some(i0) => quotient(i, i0),
                None => Rational::zero(),
            }
        }),
        witness,
        literal,
    ))
}

/// A natural-number symbol on a tape.
pub type Nat = u128;

type NatFn = dyn Fn(u64) -> Nat + Send + Sync;

/// Decides membership in a tape's range.
pub type RangeFn = Arc<dyn Fn(Nat) -> bool + Send + Sync>;

/// Where a tape first leaves zero, as known to the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroFact {
    AllZero,
    FirstNonzeroAt(u64),
}

/// Exact facts about a [`NatStream`], available to oracles only.
#[derive(Clone, Default)]
pub struct NatWitness {
    pub zeros: Option<ZeroFact>,
    pub range: Option<RangeFn>,
}

struct NatInner {
    entries: Box<NatFn>,
    memo: Mutex<HashMap<u64, Nat>>,
    witness: NatWitness,
}

/// An element of the Baire space: a memoized infinite sequence of naturals.
#[derive(Clone)]
pub struct NatStream(Arc<NatInner>);

impl fmt::Debug for NatStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<Nat> = (0..8).map(|k| self.at(k)).collect();
        f.debug_struct("NatStream").field("prefix", &prefix).field("zeros", &self.0.witness.zeros).finish()
    }
}

impl NatStream {
    pub fn from_fn(f: impl Fn(u64) -> Nat + Send + Sync + 'static) -> Self {
        Self::with_witness(f, NatWitness::default())
    }

    pub fn with_witness(f: impl Fn(u64) -> Nat + Send + Sync + 'static, witness: NatWitness) -> Self {
        NatStream(Arc::new(NatInner { entries: Box::new(f), memo: Mutex::new(HashMap::new()), witness }))
    }

    /// `0^ℕ`.
    pub fn zeros() -> Self {
        Self::from_prefix(Vec::new())
    }

    /// The given prefix followed by zeros forever.
    pub fn from_prefix(prefix: Vec<Nat>) -> Self {
        let zeros = match prefix.iter().position(|&v| v != 0) {
            Some(k) => ZeroFact::FirstNonzeroAt(k as u64),
            None => ZeroFact::AllZero,
        };
        let values = prefix.clone();
        let range: RangeFn = Arc::new(move |v| v == 0 || values.contains(&v));
        Self::with_witness(
            move |k| prefix.get(k as usize).copied().unwrap_or(0),
            NatWitness { zeros: Some(zeros), range: Some(range) },
        )
    }

    /// The given values repeated periodically. Panics if `values` is empty.
    pub fn cycle(values: Vec<Nat>) -> Self {
        assert!(!values.is_empty(), "cannot cycle an empty list");
        let zeros = match values.iter().position(|&v| v != 0) {
            Some(k) => ZeroFact::FirstNonzeroAt(k as u64),
            None => ZeroFact::AllZero,
        };
        let members = values.clone();
        let range: RangeFn = Arc::new(move |v| members.contains(&v));
        Self::with_witness(
            move |k| values[(k % values.len() as u64) as usize],
            NatWitness { zeros: Some(zeros), range: Some(range) },
        )
    }

    /// An enumeration `k -> f(k)` whose range is decided by `member`.
    pub fn enumerate(
        f: impl Fn(u64) -> Nat + Send + Sync + 'static,
        member: impl Fn(Nat) -> bool + Send + Sync + 'static,
    ) -> Self {
        let zeros = (0..).find(|&k| f(k) != 0).map(ZeroFact::FirstNonzeroAt);
        Self::with_witness(f, NatWitness { zeros, range: Some(Arc::new(member)) })
    }

    pub fn at(&self, k: u64) -> Nat {
        if let Some(v) = self.0.memo.lock().expect("tape memo poisoned").get(&k) {
            return *v;
        }
        let v = (self.0.entries)(k);
        *self.0.memo.lock().expect("tape memo poisoned").entry(k).or_insert(v)
    }

    pub fn prefix(&self, len: u64) -> Vec<Nat> {
        (0..len).map(|k| self.at(k)).collect()
    }

    pub fn witness(&self) -> &NatWitness {
        &self.0.witness
    }

    pub fn zero_fact(&self) -> Option<ZeroFact> {
        self.0.witness.zeros
    }

    pub fn in_range(&self, v: Nat) -> Option<bool> {
        self.0.witness.range.as_ref().map(|r| r(v))
    }
}
