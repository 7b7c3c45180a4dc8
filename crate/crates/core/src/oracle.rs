//! Discontinuity oracles and the reduction harness.
//!
//! Continuous machines only ever read finite prefixes of streams. The
//! problems below are not continuous, so a machine that needs one of them
//! asks an [`Oracle`]. The [`ExactOracle`] answers from witnesses, which
//! makes every machine in this crate testable against exact ground truth.

use std::fmt;
use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::exact::{self, Support};
use crate::game::{BiMatrixGame, CorrelatedMatrix, Matrix};
use crate::rational::Rational;
use crate::solvers::correlated::solve_correlated_exact;
use crate::solvers::fm::{fm_solve_exact, fm_solve_stream, IneqSystem, SignPattern};
use crate::stream::{rdiv, Nat, NatStream, RealStream, ZeroFact};

/// One input of an MLPO query: a tape, or a real whose limit may be zero.
#[derive(Clone, Debug)]
pub enum MlpoInput {
    Nat(NatStream),
    Real(RealStream),
}

/// A family of closed sets covering a problem's domain.
#[derive(Clone, Debug)]
pub enum Cover {
    /// Support pairs `(I, J)` of a game; a member contains the game when it
    /// has an equilibrium with support inside `(I, J)`.
    NashSupport(BiMatrixGame<RealStream>),
    /// Sign patterns and `|a|`-orderings of a column of coefficients.
    SignPattern(Vec<RealStream>),
}

/// A member of a [`Cover`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverMember {
    Support(Support),
    Signs(SignPattern),
}

/// A 0/1 labelling of the naturals.
pub type Labelling = Arc<dyn Fn(Nat) -> Result<u8> + Send + Sync>;

#[derive(Clone, Debug)]
pub enum OracleQuery {
    /// Name an input that is `0^ℕ` (or has limit zero).
    Mlpo(Vec<MlpoInput>),
    /// Name a maximal entry.
    OnePure(Vec<RealStream>),
    /// Robust quotients `u/v` for pairs with `0 <= u <= v`.
    RdivBatch(Vec<(RealStream, RealStream)>),
    /// The separating label of one index.
    Sep {
        p: NatStream,
        q: NatStream,
        index: Nat,
    },
    /// A whole separating labelling.
    SepLabels {
        p: NatStream,
        q: NatStream,
    },
    CoverSelect(Cover),
    /// A point of a feasible inequality system over the unit box.
    BLinIneq(IneqSystem<RealStream>),
    /// A correlated equilibrium of a game.
    Correlated(BiMatrixGame<RealStream>),
    /// Several independent queries answered in one call.
    Product(Vec<OracleQuery>),
}

impl OracleQuery {
    pub fn kind(&self) -> &'static str {
        match self {
            OracleQuery::Mlpo(_) => "MLPO",
            OracleQuery::OnePure(_) => "1Pure",
            OracleQuery::RdivBatch(_) => "rDiv",
            OracleQuery::Sep { .. } => "Sep",
            OracleQuery::SepLabels { .. } => "Sep",
            OracleQuery::CoverSelect(_) => "COVER_SELECT",
            OracleQuery::BLinIneq(_) => "BLinIneq",
            OracleQuery::Correlated(_) => "Corr",
            OracleQuery::Product(_) => "product",
        }
    }
}

#[derive(Clone)]
pub enum OracleAnswer {
    /// 1-based.
    Index(usize),
    Streams(Vec<RealStream>),
    Bit(u8),
    Labels(Labelling),
    Member(CoverMember),
    Matrix(CorrelatedMatrix<RealStream>),
    Answers(Vec<OracleAnswer>),
}

impl fmt::Debug for OracleAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleAnswer::Index(k) => write!(f, "Index({k})"),
            OracleAnswer::Streams(s) => f.debug_tuple("Streams").field(s).finish(),
            OracleAnswer::Bit(b) => write!(f, "Bit({b})"),
            OracleAnswer::Labels(_) => write!(f, "Labels(..)"),
            OracleAnswer::Member(m) => f.debug_tuple("Member").field(m).finish(),
            OracleAnswer::Matrix(c) => f.debug_tuple("Matrix").field(&c.0.rows()).finish(),
            OracleAnswer::Answers(a) => f.debug_tuple("Answers").field(a).finish(),
        }
    }
}

fn wrong_kind(expected: &str) -> Error {
    Error::Internal(format!("oracle answered with something other than {expected}"))
}

impl OracleAnswer {
    pub fn into_index(self) -> Result<usize> {
        match self {
            OracleAnswer::Index(k) => Ok(k),
            _ => Err(wrong_kind("an index")),
        }
    }

    pub fn into_streams(self) -> Result<Vec<RealStream>> {
        match self {
            OracleAnswer::Streams(s) => Ok(s),
            _ => Err(wrong_kind("streams")),
        }
    }

    pub fn into_bit(self) -> Result<u8> {
        match self {
            OracleAnswer::Bit(b) => Ok(b),
            _ => Err(wrong_kind("a bit")),
        }
    }

    pub fn into_labels(self) -> Result<Labelling> {
        match self {
            OracleAnswer::Labels(l) => Ok(l),
            _ => Err(wrong_kind("a labelling")),
        }
    }

    pub fn into_member(self) -> Result<CoverMember> {
        match self {
            OracleAnswer::Member(m) => Ok(m),
            _ => Err(wrong_kind("a cover member")),
        }
    }

    pub fn into_support(self) -> Result<Support> {
        match self.into_member()? {
            CoverMember::Support(s) => Ok(s),
            CoverMember::Signs(_) => Err(wrong_kind("a support pair")),
        }
    }

    pub fn into_signs(self) -> Result<SignPattern> {
        match self.into_member()? {
            CoverMember::Signs(s) => Ok(s),
            CoverMember::Support(_) => Err(wrong_kind("a sign pattern")),
        }
    }

    pub fn into_matrix(self) -> Result<CorrelatedMatrix<RealStream>> {
        match self {
            OracleAnswer::Matrix(c) => Ok(c),
            _ => Err(wrong_kind("a matrix")),
        }
    }

    pub fn into_answers(self) -> Result<Vec<OracleAnswer>> {
        match self {
            OracleAnswer::Answers(a) => Ok(a),
            _ => Err(wrong_kind("a list of answers")),
        }
    }
}

/// Answers discontinuity queries.
pub trait Oracle: Send + Sync {
    fn answer(&self, query: &OracleQuery) -> Result<OracleAnswer>;
}

impl<F> Oracle for F
where
    F: Fn(&OracleQuery) -> Result<OracleAnswer> + Send + Sync,
{
    fn answer(&self, query: &OracleQuery) -> Result<OracleAnswer> {
        self(query)
    }
}

/// The oracle that reads witnesses.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactOracle;

impl Oracle for ExactOracle {
    fn answer(&self, query: &OracleQuery) -> Result<OracleAnswer> {
        exact_answer(query)
    }
}

fn unanswerable(what: impl fmt::Display) -> Error {
    Error::Unanswerable(format!("{what} carries no witness"))
}

fn witness(s: &RealStream, what: &str) -> Result<Rational> {
    s.witness().cloned().ok_or_else(|| unanswerable(what))
}

fn is_zero_input(input: &MlpoInput, k: usize) -> Result<bool> {
    match input {
        MlpoInput::Nat(t) => match t.zero_fact() {
            Some(fact) => Ok(fact == ZeroFact::AllZero),
            None => Err(unanswerable(format!("tape {k}"))),
        },
        MlpoInput::Real(s) => Ok(witness(s, &format!("input {k}"))?.is_zero()),
    }
}

fn sep_label(p: &NatStream, q: &NatStream, index: Nat) -> Result<u8> {
    let in_p = p.in_range(index).ok_or_else(|| unanswerable("first Sep tape"))?;
    let in_q = q.in_range(index).ok_or_else(|| unanswerable("second Sep tape"))?;
    match (in_p, in_q) {
        (true, true) => Err(Error::Contract(format!("{index} lies in both ranges"))),
        (true, false) => Ok(0),
        _ => Ok(1),
    }
}

/// Answers a query from witnesses.
///
/// MLPO and 1Pure pick the smallest valid index. Sep labels indices outside
/// both ranges with 1.
pub fn exact_answer(query: &OracleQuery) -> Result<OracleAnswer> {
    match query {
        OracleQuery::Mlpo(inputs) => {
            for (k, input) in inputs.iter().enumerate() {
                if is_zero_input(input, k + 1)? {
                    return Ok(OracleAnswer::Index(k + 1));
                }
            }
            Err(Error::Contract("no MLPO input is zero".into()))
        }
        OracleQuery::OnePure(payoffs) => {
            let values = payoffs
                .iter()
                .enumerate()
                .map(|(k, s)| witness(s, &format!("payoff {}", k + 1)))
                .collect::<Result<Vec<_>>>()?;
            exact::argmax(&values)
                .map(OracleAnswer::Index)
                .ok_or_else(|| Error::Argument("no payoffs to maximize".into()))
        }
        OracleQuery::RdivBatch(pairs) => {
            let mut out = Vec::with_capacity(pairs.len());
            for (k, (u, v)) in pairs.iter().enumerate() {
                witness(u, &format!("numerator {}", k + 1))?;
                witness(v, &format!("divisor {}", k + 1))?;
                out.push(rdiv(u, v).map_err(|e| Error::Contract(e.to_string()))?);
            }
            Ok(OracleAnswer::Streams(out))
        }
        OracleQuery::Sep { p, q, index } => sep_label(p, q, *index).map(OracleAnswer::Bit),
        OracleQuery::SepLabels { p, q } => {
            if p.witness().range.is_none() || q.witness().range.is_none() {
                return Err(unanswerable("Sep tape"));
            }
            let (p, q) = (p.clone(), q.clone());
            Ok(OracleAnswer::Labels(Arc::new(move |index| sep_label(&p, &q, index))))
        }
        OracleQuery::CoverSelect(Cover::NashSupport(game)) => {
            let exact = game.witnesses().ok_or_else(|| unanswerable("a payoff"))?;
            exact::support_pairs(exact.rows(), exact.cols())
                .into_iter()
                .find(|s| exact::nash_on_support(&exact, s).is_some())
                .map(|s| OracleAnswer::Member(CoverMember::Support(s)))
                .ok_or_else(|| Error::Internal("no support pair is feasible".into()))
        }
        OracleQuery::CoverSelect(Cover::SignPattern(column)) => {
            let values = column
                .iter()
                .enumerate()
                .map(|(k, s)| witness(s, &format!("coefficient {}", k + 1)))
                .collect::<Result<Vec<_>>>()?;
            Ok(OracleAnswer::Member(CoverMember::Signs(SignPattern::of_column(&values))))
        }
        OracleQuery::BLinIneq(system) => {
            let exact = system.witnesses().ok_or_else(|| unanswerable("an inequality entry"))?;
            if fm_solve_exact(&exact).is_none() {
                return Err(Error::Contract("inequality system is infeasible".into()));
            }
            fm_solve_stream(system, &ExactOracle).map(OracleAnswer::Streams)
        }
        OracleQuery::Correlated(game) => {
            let exact = game.witnesses().ok_or_else(|| unanswerable("a payoff"))?;
            let c = solve_correlated_exact(&exact)?;
            Ok(OracleAnswer::Matrix(CorrelatedMatrix(c.0.map(|q| RealStream::constant(q.clone())))))
        }
        OracleQuery::Product(queries) => {
            queries.iter().map(exact_answer).collect::<Result<Vec<_>>>().map(OracleAnswer::Answers)
        }
    }
}

/// `w ↦ post(w, oracle(pre(w)))`.
pub fn run_reduction<I, Q, O>(
    input: &I,
    pre: impl FnOnce(&I) -> Result<Q>,
    oracle: impl FnOnce(Q) -> Result<OracleAnswer>,
    post: impl FnOnce(&I, OracleAnswer) -> Result<O>,
) -> Result<O> {
    let query = pre(input)?;
    let answer = oracle(query)?;
    post(input, answer)
}

type PreFn<I> = dyn Fn(&I) -> Result<OracleQuery> + Send + Sync;
type PostFn<I, O> = dyn Fn(&I, OracleAnswer) -> Result<O> + Send + Sync;

/// A named pre-machine, oracle kind and post-machine.
pub struct Reduction<I, O> {
    pub name: &'static str,
    pub oracle_kind: &'static str,
    pre: Box<PreFn<I>>,
    post: Box<PostFn<I, O>>,
}

impl<I, O> Reduction<I, O> {
    pub fn new(
        name: &'static str,
        oracle_kind: &'static str,
        pre: impl Fn(&I) -> Result<OracleQuery> + Send + Sync + 'static,
        post: impl Fn(&I, OracleAnswer) -> Result<O> + Send + Sync + 'static,
    ) -> Self {
        Self { name, oracle_kind, pre: Box::new(pre), post: Box::new(post) }
    }

    /// The query the pre-machine sends for `input`.
    pub fn query(&self, input: &I) -> Result<OracleQuery> {
        (self.pre)(input)
    }

    pub fn run(&self, input: &I, oracle: &dyn Oracle) -> Result<O> {
        run_reduction(input, |w| (self.pre)(w), |q| oracle.answer(&q), |w, a| (self.post)(w, a))
    }
}

impl<I, O> fmt::Debug for Reduction<I, O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reduction").field("name", &self.name).field("oracle", &self.oracle_kind).finish()
    }
}

/// Checks an MLPO answer against witnesses.
pub fn mlpo_answer_valid(inputs: &[MlpoInput], index: usize) -> Result<bool> {
    if index == 0 || index > inputs.len() {
        return Ok(false);
    }
    is_zero_input(&inputs[index - 1], index)
}

/// Whether `entry` is at least every witness in `values`.
pub fn is_maximal(values: &[Rational], index: usize) -> bool {
    index >= 1 && index <= values.len() && values.iter().all(|v| *v <= values[index - 1])
}

/// The correlated matrix of exact limits, if all entries carry witnesses.
pub fn matrix_witnesses(c: &Matrix<RealStream>) -> Option<Matrix<Rational>> {
    let rows = (0..c.rows())
        .map(|i| c.row(i).iter().map(|s| s.witness().cloned()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Matrix::from_rows(rows).ok()
}
