//! Fourier–Motzkin elimination over the unit box.
//!
//! A system `Av <= b` always carries the bounds `0 <= v <= 1`. Elimination of
//! `v_1` pairs every row with a positive `v_1` coefficient against every row
//! with a negative one:
//!
//! ```text
//! a_k1 (b_j - Σ a_ji v_i)  >=  a_j1 (b_k - Σ a_ki v_i)      (a_k1 > 0 > a_j1)
//! ```
//!
//! Exact mode knows every sign and drops rows with a zero coefficient into the
//! reduced system unchanged. Stream mode cannot decide signs, so it asks the
//! oracle for a sign pattern and an ordering by `|a_k1|`, and back-substitutes
//! `v_1` as a nested min/max of robust quotients, largest coefficients
//! outermost, so quotients by a vanishing coefficient only appear where they
//! are dominated.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::error::{argument, Error, Result};
use crate::oracle::{Cover, Oracle, OracleQuery};
use crate::rational::Rational;
use crate::stream::RealStream;

/// `Av <= b` together with the implicit bounds `0 <= v_i <= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IneqSystem<T = Rational> {
    vars: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
}

impl<T> IneqSystem<T> {
    pub fn new(vars: usize, rows: Vec<Vec<T>>, rhs: Vec<T>) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(argument(format!("{} coefficient rows but {} right-hand sides", rows.len(), rhs.len())));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != vars) {
            return Err(argument(format!("row {} has {} coefficients, expected {vars}", bad + 1, rows[bad].len())));
        }
        Ok(Self { vars, rows, rhs })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> IneqSystem<U> {
        IneqSystem {
            vars: self.vars,
            rows: self.rows.iter().map(|r| r.iter().map(&mut f).collect()).collect(),
            rhs: self.rhs.iter().map(f).collect(),
        }
    }
}

impl IneqSystem<Rational> {
    /// Whether `v` lies in the box and satisfies every row exactly.
    pub fn satisfied_by(&self, v: &[Rational]) -> bool {
        v.len() == self.vars
            && v.iter().all(|x| !x.is_negative() && *x <= Rational::one())
            && self.rows.iter().zip(&self.rhs).all(|(row, b)| {
                let lhs: Rational = row.iter().zip(v).map(|(a, x)| a * x).sum();
                lhs <= *b
            })
    }

    pub fn to_streams(&self) -> IneqSystem<RealStream> {
        self.map(|q| RealStream::constant(q.clone()))
    }
}

impl IneqSystem<RealStream> {
    /// The system of exact limits, when every entry carries a witness.
    pub fn witnesses(&self) -> Option<IneqSystem<Rational>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|s| s.witness().cloned()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let rhs = self.rhs.iter().map(|s| s.witness().cloned()).collect::<Option<Vec<_>>>()?;
        Some(IneqSystem { vars: self.vars, rows, rhs })
    }
}

/// Which rows have a non-negative first coefficient, and the rows ordered by
/// non-increasing absolute first coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignPattern {
    pub nonneg: Vec<bool>,
    pub order: Vec<usize>,
}

impl SignPattern {
    /// The pattern of an exact column (the cover member the column lies in).
    pub fn of_column(column: &[Rational]) -> Self {
        let nonneg = column.iter().map(|a| !a.is_negative()).collect();
        let mut order: Vec<usize> = (0..column.len()).collect();
        order.sort_by(|&i, &j| column[j].abs().cmp(&column[i].abs()));
        Self { nonneg, order }
    }

    pub fn is_valid_for(&self, rows: usize) -> bool {
        let mut seen = vec![false; rows];
        self.nonneg.len() == rows
            && self.order.len() == rows
            && self.order.iter().all(|&k| k < rows && !std::mem::replace(&mut seen[k], true))
    }
}

#[derive(Clone, Debug)]
struct Row<T> {
    coef: Vec<T>,
    rhs: T,
}

fn with_bounds(s: &IneqSystem<Rational>) -> Vec<Row<Rational>> {
    let mut rows: Vec<Row<Rational>> =
        s.rows.iter().zip(&s.rhs).map(|(c, b)| Row { coef: c.clone(), rhs: b.clone() }).collect();
    for i in 0..s.vars {
        let unit = |sign: i64| {
            (0..s.vars)
                .map(|k| if k == i { Rational::from_integer(sign.into()) } else { Rational::zero() })
                .collect::<Vec<_>>()
        };
        rows.push(Row { coef: unit(1), rhs: Rational::one() });
        rows.push(Row { coef: unit(-1), rhs: Rational::zero() });
    }
    rows
}

/// The elimination grew past the row budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TooLarge;

/// A point of the system, or `None` when it is infeasible.
pub fn fm_solve_exact(s: &IneqSystem<Rational>) -> Option<Vec<Rational>> {
    fm_solve_exact_bounded(s, usize::MAX).unwrap_or(None)
}

/// [`fm_solve_exact`] that gives up once an intermediate system exceeds `max_rows`.
pub fn fm_solve_exact_bounded(s: &IneqSystem<Rational>, max_rows: usize) -> Result<Option<Vec<Rational>>, TooLarge> {
    let rows = simplify_exact(with_bounds(s));
    match rows {
        None => Ok(None),
        Some(rows) => eliminate_exact(rows, s.vars, max_rows),
    }
}

fn eliminate_exact(rows: Vec<Row<Rational>>, vars: usize, max_rows: usize) -> Result<Option<Vec<Rational>>, TooLarge> {
    if vars == 0 {
        return Ok(Some(Vec::new()));
    }
    let (mut reduced, mut pos, mut neg) = (Vec::new(), Vec::new(), Vec::new());
    for row in &rows {
        match row.coef[0].numer().sign() {
            num::bigint::Sign::Plus => pos.push(row),
            num::bigint::Sign::Minus => neg.push(row),
            num::bigint::Sign::NoSign => reduced.push(Row { coef: row.coef[1..].to_vec(), rhs: row.rhs.clone() }),
        }
    }
    if reduced.len().saturating_add(pos.len() * neg.len()) > max_rows {
        return Err(TooLarge);
    }
    for k in &pos {
        for j in &neg {
            reduced.push(contract_exact(k, j));
        }
    }
    let Some(reduced) = simplify_exact(reduced) else { return Ok(None) };
    let Some(rest) = eliminate_exact(reduced, vars - 1, max_rows)? else { return Ok(None) };

    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for row in &rows {
        let a = &row.coef[0];
        if a.is_zero() {
            continue;
        }
        let r: Rational = &row.rhs - row.coef[1..].iter().zip(&rest).map(|(c, x)| c * x).sum::<Rational>();
        let bound = r / a;
        if a.is_positive() {
            upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
        } else {
            lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
        }
    }
    let v = lower.unwrap_or_else(Rational::zero);
    if upper.is_some_and(|u| u < v) {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(vars);
    out.push(v);
    out.extend(rest);
    Ok(Some(out))
}

fn contract_exact(k: &Row<Rational>, j: &Row<Rational>) -> Row<Rational> {
    let (ak, aj) = (&k.coef[0], &j.coef[0]);
    let coef = (1..k.coef.len()).map(|i| ak * &j.coef[i] - aj * &k.coef[i]).collect();
    Row { coef, rhs: ak * &j.rhs - aj * &k.rhs }
}

/// Normalizes rows, drops trivially true ones and duplicates. `None` if a row
/// reads `0 <= b` with `b < 0`.
fn simplify_exact(rows: Vec<Row<Rational>>) -> Option<Vec<Row<Rational>>> {
    let mut tightest: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for row in rows {
        let Some(lead) = row.coef.iter().find(|c| !c.is_zero()).map(Signed::abs) else {
            if row.rhs.is_negative() {
                return None;
            }
            continue;
        };
        let coef: Vec<Rational> = row.coef.iter().map(|c| c / &lead).collect();
        let rhs = row.rhs / &lead;
        tightest.entry(coef).and_modify(|b| *b = b.clone().min(rhs.clone())).or_insert(rhs);
    }
    Some(tightest.into_iter().map(|(coef, rhs)| Row { coef, rhs }).collect())
}

fn literal(q: Rational) -> RealStream {
    RealStream::literal(q)
}

fn stream_bounds(s: &IneqSystem<RealStream>) -> Vec<Row<RealStream>> {
    let mut rows: Vec<Row<RealStream>> =
        s.rows.iter().zip(&s.rhs).map(|(c, b)| Row { coef: c.clone(), rhs: b.clone() }).collect();
    for i in 0..s.vars {
        let unit = |sign: i64| {
            (0..s.vars)
                .map(|k| literal(if k == i { Rational::from_integer(sign.into()) } else { Rational::zero() }))
                .collect::<Vec<_>>()
        };
        rows.push(Row { coef: unit(1), rhs: literal(Rational::one()) });
        rows.push(Row { coef: unit(-1), rhs: literal(Rational::zero()) });
    }
    rows
}

/// Solves a feasible system given as streams, calling the oracle for sign
/// patterns and robust quotients.
///
/// Stage `i` of each output is within `2^-i` of a point of the system; on
/// witness-carrying input the output witnesses satisfy it exactly.
pub fn fm_solve_stream(s: &IneqSystem<RealStream>, oracle: &dyn Oracle) -> Result<Vec<RealStream>> {
    Ok(fm_solve_stream_bounded(s, oracle, usize::MAX)?.expect("unbounded elimination"))
}

/// [`fm_solve_stream`] that gives up (`Ok(None)`) once an intermediate system
/// exceeds `max_rows`. Row counts depend only on the sign patterns, so the
/// decision to give up is itself computable.
pub fn fm_solve_stream_bounded(
    s: &IneqSystem<RealStream>,
    oracle: &dyn Oracle,
    max_rows: usize,
) -> Result<Option<Vec<RealStream>>> {
    if let Some(exact) = s.witnesses() {
        if let Ok(None) = fm_solve_exact_bounded(&exact, max_rows) {
            return Err(Error::Contract("inequality system is infeasible".into()));
        }
    }
    eliminate_stream(prune_stream(stream_bounds(s))?, s.vars, oracle, max_rows)
}

/// Drops rows whose coefficients are all literal zeros and merges duplicate
/// fully literal rows. A literal row `0 <= b` with `b < 0` breaks the promise.
fn prune_stream(rows: Vec<Row<RealStream>>) -> Result<Vec<Row<RealStream>>> {
    let mut literal_rows: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    let mut out = Vec::new();
    for row in rows {
        if row.coef.iter().all(|c| c.literal_value().is_some_and(Zero::is_zero)) {
            if row.rhs.literal_value().is_some_and(Signed::is_negative) {
                return Err(Error::Contract("inequality system is infeasible".into()));
            }
            continue;
        }
        let exact: Option<Vec<Rational>> = row.coef.iter().map(|c| c.literal_value().cloned()).collect();
        match (exact, row.rhs.literal_value()) {
            (Some(coef), Some(rhs)) => {
                let lead = coef.iter().find(|c| !c.is_zero()).map(Signed::abs).expect("nonzero row");
                let coef: Vec<Rational> = coef.iter().map(|c| c / &lead).collect();
                let rhs = rhs / &lead;
                literal_rows.entry(coef).and_modify(|b| *b = b.clone().min(rhs.clone())).or_insert(rhs);
            }
            _ => out.push(row),
        }
    }
    out.extend(
        literal_rows
            .into_iter()
            .map(|(coef, rhs)| Row { coef: coef.into_iter().map(literal).collect(), rhs: literal(rhs) }),
    );
    Ok(out)
}

fn eliminate_stream(
    rows: Vec<Row<RealStream>>,
    vars: usize,
    oracle: &dyn Oracle,
    max_rows: usize,
) -> Result<Option<Vec<RealStream>>> {
    if vars == 0 {
        return Ok(Some(Vec::new()));
    }
    let (mut passthrough, mut active) = (Vec::new(), Vec::new());
    for row in rows {
        if row.coef[0].literal_value().is_some_and(Zero::is_zero) {
            passthrough.push(row);
        } else {
            active.push(row);
        }
    }
    let column: Vec<RealStream> = active.iter().map(|r| r.coef[0].clone()).collect();
    let pattern = oracle.answer(&OracleQuery::CoverSelect(Cover::SignPattern(column)))?.into_signs()?;
    if !pattern.is_valid_for(active.len()) {
        return Err(Error::Internal("oracle returned a malformed sign pattern".into()));
    }

    let rest = if vars > 1 {
        let positive = pattern.nonneg.iter().filter(|&&p| p).count();
        if passthrough.len().saturating_add(positive * (active.len() - positive)) > max_rows {
            return Ok(None);
        }
        let mut reduced: Vec<Row<RealStream>> =
            passthrough.iter().map(|r| Row { coef: r.coef[1..].to_vec(), rhs: r.rhs.clone() }).collect();
        for (_, rk) in active.iter().enumerate().filter(|(k, _)| pattern.nonneg[*k]) {
            for (_, rj) in active.iter().enumerate().filter(|(j, _)| !pattern.nonneg[*j]) {
                reduced.push(contract_stream(rk, rj));
            }
        }
        match eliminate_stream(prune_stream(reduced)?, vars - 1, oracle, max_rows)? {
            Some(rest) => rest,
            None => return Ok(None),
        }
    } else {
        Vec::new()
    };

    // Row t reads a_t1 v_1 <= r_t. For a_t1 >= 0 it caps v_1 at r_t / a_t1,
    // otherwise it raises v_1 to r_t / a_t1 = (-r_t) / |a_t1|.
    let mut pairs = Vec::with_capacity(active.len());
    for (t, row) in active.iter().enumerate() {
        let terms: Vec<RealStream> = row.coef[1..].iter().zip(&rest).map(|(c, x)| c.mul(x)).collect();
        let r = row.rhs.sub(&RealStream::sum(&terms));
        let a = row.coef[0].abs();
        let signed = if pattern.nonneg[t] { r } else { r.neg() };
        let zero = literal(Rational::zero());
        pairs.push((signed.max(&zero).min(&a), a));
    }
    let quotients =
        if pairs.is_empty() { Vec::new() } else { oracle.answer(&OracleQuery::RdivBatch(pairs))?.into_streams()? };
    if quotients.len() != active.len() {
        return Err(Error::Internal("oracle returned the wrong number of quotients".into()));
    }

    let mut nested: Option<RealStream> = None;
    for &t in pattern.order.iter().rev() {
        let q = &quotients[t];
        nested = Some(match nested {
            None => q.clone(),
            Some(inner) if pattern.nonneg[t] => q.min(&inner),
            Some(inner) => q.max(&inner),
        });
    }
    let v1 = nested
        .unwrap_or_else(|| literal(Rational::zero()))
        .min(&literal(Rational::one()))
        .max(&literal(Rational::zero()));
    let mut out = Vec::with_capacity(vars);
    out.push(v1);
    out.extend(rest);
    Ok(Some(out))
}

fn contract_stream(k: &Row<RealStream>, j: &Row<RealStream>) -> Row<RealStream> {
    let (ak, aj) = (&k.coef[0], &j.coef[0]);
    let coef = (1..k.coef.len()).map(|i| ak.mul(&j.coef[i]).sub(&aj.mul(&k.coef[i]))).collect();
    Row { coef, rhs: ak.mul(&j.rhs).sub(&aj.mul(&k.rhs)) }
}
