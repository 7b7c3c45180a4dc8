//! Text formats for games, correlated matrices and inequality systems.
//!
//! ```text
//! # matching pennies
//! game 2 2
//! A:
//! 1 0
//! 0 1
//! B:
//! -1 0
//! 0 -1
//! ```
//!
//! Tokens are whitespace-separated rationals (`p/q`, integers, or exact
//! decimals). `#` starts a comment that runs to the end of the line.

use std::fmt::Write as _;

use crate::error::{format_err, Error, Result};
use crate::game::{BiMatrixGame, CorrelatedMatrix, Matrix};
use crate::rational::{digits_for_bits, parse_rational, to_decimal, Rational};
use crate::solvers::fm::IneqSystem;
use crate::stream::RealStream;

struct Lines<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(k, line)| {
                let body = line.split('#').next().unwrap_or("");
                let tokens: Vec<&str> = body.split_whitespace().collect();
                (!tokens.is_empty()).then_some((k + 1, tokens))
            })
            .collect();
        Self { lines, pos: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let line = self.lines.get(self.pos).cloned().ok_or_else(|| format_err(format!("missing {what}")))?;
        self.pos += 1;
        Ok(line)
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            None => Ok(()),
            Some((k, _)) => Err(format_err(format!("line {k}: unexpected trailing content"))),
        }
    }

    fn header(&mut self, keyword: &str) -> Result<(usize, usize)> {
        let (k, tokens) = self.next(&format!("`{keyword} n m` header"))?;
        match tokens.as_slice() {
            [kw, n, m] if *kw == keyword => {
                let dim = |s: &str| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&d| d > 0)
                        .ok_or_else(|| format_err(format!("line {k}: invalid dimension `{s}`")))
                };
                Ok((dim(n)?, dim(m)?))
            }
            _ => Err(format_err(format!("line {k}: expected `{keyword} n m`"))),
        }
    }

    fn label(&mut self, label: &str) -> Result<()> {
        let (k, tokens) = self.next(&format!("`{label}` line"))?;
        if tokens.as_slice() != [label] {
            return Err(format_err(format!("line {k}: expected `{label}`")));
        }
        Ok(())
    }

    fn row(&mut self, len: usize, what: &str) -> Result<Vec<Rational>> {
        let (k, tokens) = self.next(what)?;
        if tokens.len() != len {
            return Err(format_err(format!("line {k}: expected {len} entries, found {}", tokens.len())));
        }
        tokens
            .iter()
            .map(|t| {
                parse_rational(t).map_err(|e| match e {
                    Error::Format(msg) => format_err(format!("line {k}: {msg}")),
                    other => other,
                })
            })
            .collect()
    }

    fn matrix(&mut self, n: usize, m: usize, what: &str) -> Result<Vec<Vec<Rational>>> {
        (0..n).map(|_| self.row(m, what)).collect()
    }
}

pub fn parse_game(text: &str) -> Result<BiMatrixGame> {
    let mut lines = Lines::new(text);
    let (n, m) = lines.header("game")?;
    lines.label("A:")?;
    let a = lines.matrix(n, m, "row of A")?;
    lines.label("B:")?;
    let b = lines.matrix(n, m, "row of B")?;
    lines.finish()?;
    BiMatrixGame::from_rows(a, b)
}

pub fn parse_corr(text: &str) -> Result<CorrelatedMatrix> {
    let mut lines = Lines::new(text);
    let (n, m) = lines.header("corr")?;
    let c = lines.matrix(n, m, "row of the correlated matrix")?;
    lines.finish()?;
    CorrelatedMatrix::new(Matrix::from_rows(c)?)
}

pub fn parse_ineq(text: &str) -> Result<IneqSystem> {
    let mut lines = Lines::new(text);
    let (n, m) = lines.header("ineq")?;
    lines.label("A:")?;
    let a = lines.matrix(n, m, "row of A")?;
    lines.label("b:")?;
    let b = lines.row(n, "right-hand side")?;
    lines.finish()?;
    IneqSystem::new(m, a, b)
}

/// Parses `x;y`, entries separated by whitespace or commas.
pub fn parse_profile(text: &str) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let (x, y) = text.split_once(';').ok_or_else(|| format_err("profile must look like `x1 x2 ...;y1 y2 ...`"))?;
    let vector = |s: &str| -> Result<Vec<Rational>> {
        let v: Vec<Rational> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(parse_rational)
            .collect::<Result<_>>()?;
        if v.is_empty() {
            return Err(format_err("empty strategy in profile"));
        }
        Ok(v)
    };
    Ok((vector(x)?, vector(y)?))
}

fn write_rows(out: &mut String, rows: &Matrix<Rational>) {
    for i in 0..rows.rows() {
        let line: Vec<String> = rows.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

pub fn write_game(g: &BiMatrixGame) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "game {} {}", g.rows(), g.cols());
    out.push_str("A:\n");
    write_rows(&mut out, g.a());
    out.push_str("B:\n");
    write_rows(&mut out, g.b());
    out
}

pub fn write_corr(c: &CorrelatedMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "corr {} {}", c.matrix().rows(), c.matrix().cols());
    write_rows(&mut out, c.matrix());
    out
}

pub fn exact_vector(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Stage `k + 1` of each stream, rounded so the printed value is within `2^-k`.
pub fn approx_vector(v: &[RealStream], k: u32) -> String {
    let digits = digits_for_bits(k);
    let values: Vec<String> = v.iter().map(|s| to_decimal(&s.approx(k + 1), digits)).collect();
    format!("{} (±2^-{k})", values.join(" "))
}
