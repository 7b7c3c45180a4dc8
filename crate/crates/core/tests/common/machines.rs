//! Random promise-respecting inputs for every reduction machine, with the
//! target problem's verifier. Each `check_*` runs one case.

use equilibria::oracle::{is_maximal, mlpo_answer_valid, ExactOracle, MlpoInput};
use equilibria::rational::Rational;
use equilibria::reductions::*;
use equilibria::stream::{Nat, NatStream, RealStream, ZeroFact};
use num::{Signed, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{modulus_ok, near, q};

pub type Outcome = Result<(), String>;
pub type Machine = (&'static str, fn(&mut StdRng) -> Outcome);

fn tape(rng: &mut StdRng, zero: bool) -> NatStream {
    if zero {
        return NatStream::zeros();
    }
    let k = rng.gen_range(0..12);
    let mut prefix = vec![0; k];
    prefix.push(rng.gen_range(1..10));
    prefix.extend((0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..10)));
    NatStream::from_prefix(prefix)
}

fn tapes(rng: &mut StdRng, n: usize) -> Vec<NatStream> {
    let forced = rng.gen_range(0..n);
    (0..n)
        .map(|i| {
            let zero = i == forced || rng.gen_bool(0.3);
            tape(rng, zero)
        })
        .collect()
}

fn payoffs(rng: &mut StdRng, n: usize) -> (Vec<Rational>, Vec<RealStream>) {
    let values: Vec<Rational> = (0..n).map(|_| q(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
    let streams = values.iter().map(|v| RealStream::jittered(v.clone(), rng.gen())).collect();
    (values, streams)
}

/// `0 <= a <= b`, with `b = 0` about one time in five.
fn division(rng: &mut StdRng) -> (Rational, Rational) {
    if rng.gen_bool(0.2) {
        return (Rational::zero(), Rational::zero());
    }
    let d = rng.gen_range(1..=8);
    let b = q(rng.gen_range(1..=4 * d), d);
    let a = &b * q(rng.gen_range(0..=12), 12);
    (a, b)
}

fn jitter(rng: &mut StdRng, x: &Rational) -> RealStream {
    RealStream::jittered(x.clone(), rng.gen())
}

/// Quotient contract: close to `a / b` when `b > 0`, a valid name otherwise.
fn quotient_ok(v: &RealStream, a: &Rational, b: &Rational, depth: u32) -> Outcome {
    if b.is_positive() {
        if !near(v, &(a / b), depth) {
            return Err(format!("{a}/{b}: stages stray from the quotient"));
        }
    } else if !modulus_ok(v, depth) {
        return Err(format!("{a}/{b}: not a valid name"));
    }
    Ok(())
}

pub fn check_mlpo_to_1pure(rng: &mut StdRng) -> Outcome {
    let n = rng.gen_range(1..=5);
    let t = tapes(rng, n);
    let k = mlpo_to_1pure(n).run(&t, &ExactOracle).map_err(|e| e.to_string())?;
    match t[k - 1].zero_fact() {
        Some(ZeroFact::AllZero) => Ok(()),
        other => Err(format!("answer {k} has tape {other:?}")),
    }
}

pub fn check_1pure_to_mlpo(rng: &mut StdRng) -> Outcome {
    let n = rng.gen_range(1..=5);
    let (values, streams) = payoffs(rng, n);
    let k = one_pure_to_mlpo(n).run(&streams, &ExactOracle).map_err(|e| e.to_string())?;
    is_maximal(&values, k).then_some(()).ok_or_else(|| format!("{k} is not maximal in {values:?}"))
}

pub fn check_pure_via_mlpo2(rng: &mut StdRng) -> Outcome {
    let n = rng.gen_range(1..=5);
    let (values, streams) = payoffs(rng, n);
    let k = pure_via_mlpo2_products(n - 1).run(&streams, &ExactOracle).map_err(|e| e.to_string())?;
    is_maximal(&values, k).then_some(()).ok_or_else(|| format!("{k} is not maximal in {values:?}"))
}

pub fn check_mlpo2_via_rdiv(rng: &mut StdRng) -> Outcome {
    let t = tapes(rng, 2);
    let k = mlpo2_via_rdiv().run(&(t[0].clone(), t[1].clone()), &ExactOracle).map_err(|e| e.to_string())?;
    let inputs: Vec<MlpoInput> = t.into_iter().map(MlpoInput::Nat).collect();
    match mlpo_answer_valid(&inputs, k) {
        Ok(true) => Ok(()),
        other => Err(format!("answer {k}: {other:?}")),
    }
}

pub fn check_rdiv_via_blinineq(rng: &mut StdRng) -> Outcome {
    let n = rng.gen_range(1..=3);
    let pairs: Vec<(Rational, Rational)> = (0..n).map(|_| division(rng)).collect();
    let input: Vec<(RealStream, RealStream)> = pairs.iter().map(|(a, b)| (jitter(rng, a), jitter(rng, b))).collect();
    let v = rdiv_via_blinineq(n).run(&input, &ExactOracle).map_err(|e| e.to_string())?;
    for (s, (a, b)) in v.iter().zip(&pairs) {
        let w = s.witness().ok_or("output without witness")?;
        if b.is_positive() && *w != a / b {
            return Err(format!("{a}/{b}: witness {w}"));
        }
        quotient_ok(s, a, b, 16)?;
        if !near(s, w, 16) {
            return Err(format!("{a}/{b}: stages stray from the witness"));
        }
    }
    Ok(())
}

pub fn check_rdiv_via_sep(rng: &mut StdRng) -> Outcome {
    let (a, b) = division(rng);
    let input = (jitter(rng, &a), jitter(rng, &b));
    let v = rdiv_via_sep().run(&input, &ExactOracle).map_err(|e| e.to_string())?;
    quotient_ok(&v, &a, &b, 32)
}

fn disjoint_sets(rng: &mut StdRng) -> (Vec<Nat>, Vec<Nat>) {
    let mut pool: Vec<Nat> = (0..30).collect();
    pool.shuffle(rng);
    let k = rng.gen_range(1..6);
    let l = rng.gen_range(1..6);
    (pool[..k].to_vec(), pool[k..k + l].to_vec())
}

pub fn check_sep_pair_merge(rng: &mut StdRng) -> Outcome {
    let (p1, q1) = disjoint_sets(rng);
    let (p2, q2) = disjoint_sets(rng);
    let cycle = |v: &Vec<Nat>| NatStream::cycle(v.clone());
    let input = ((cycle(&p1), cycle(&q1)), (cycle(&p2), cycle(&q2)));
    let (f1, f2) = sep_pair_merge().run(&input, &ExactOracle).map_err(|e| e.to_string())?;
    for (f, p, q) in [(&f1, &p1, &q1), (&f2, &p2, &q2)] {
        for &v in p {
            if f(v).map_err(|e| e.to_string())? != 0 {
                return Err(format!("{v} in p labelled 1"));
            }
        }
        for &v in q {
            if f(v).map_err(|e| e.to_string())? != 1 {
                return Err(format!("{v} in q labelled 0"));
            }
        }
    }
    Ok(())
}

pub fn check_rdiv_via_zcorr22(rng: &mut StdRng) -> Outcome {
    let (a, b) = division(rng);
    let input = (jitter(rng, &a), jitter(rng, &b));
    let v = rdiv_via_zcorr22().run(&input, &ExactOracle).map_err(|e| e.to_string())?;
    if b.is_positive() && v.witness() != Some(&(&a / &b)) {
        return Err(format!("{a}/{b}: witness {:?}", v.witness()));
    }
    quotient_ok(&v, &a, &b, 20)
}

pub const MACHINES: [Machine; 8] = [
    ("mlpo-to-1pure", check_mlpo_to_1pure),
    ("1pure-to-mlpo", check_1pure_to_mlpo),
    ("pure-via-mlpo2", check_pure_via_mlpo2),
    ("mlpo2-via-rdiv", check_mlpo2_via_rdiv),
    ("rdiv-via-blinineq", check_rdiv_via_blinineq),
    ("rdiv-via-sep", check_rdiv_via_sep),
    ("sep-pair-merge", check_sep_pair_merge),
    ("rdiv-via-zcorr22", check_rdiv_via_zcorr22),
];
