//! Γ-names: games written on a single tape.
//!
//! The tape starts with the header `0^n 1^m 0`, followed by the body
//! `⟨w^a, w^b⟩`. Each half interleaves the names of its matrix entries in
//! column-major order (`w_11, w_21, ..., w_n1, w_12, ...`). Interleaving `k`
//! streams puts stage `i` of component `j` (0-based) at position `k·i + j`.

use std::fmt;
use std::sync::Arc;

use crate::error::{format_err, Result};
use crate::game::{BiMatrixGame, Matrix};
use crate::rational::Rational;
use crate::stream::RealStream;

/// Interleaves `k` streams: stage `i` of component `j` lands at `k·i + j`.
pub fn interleave_position(k: usize, j: usize, i: u64) -> u64 {
    k as u64 * i + j as u64
}

type BodyFn = dyn Fn(u64) -> Rational + Send + Sync;

#[derive(Clone)]
pub struct GammaName {
    header: Vec<u8>,
    body: Arc<BodyFn>,
    witnesses: Option<Vec<Rational>>,
}

impl fmt::Debug for GammaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaName").field("header", &self.header).finish_non_exhaustive()
    }
}

/// Column-major component index of entry `(i, j)` (0-based) in an `n`-row matrix.
fn component(n: usize, i: usize, j: usize) -> usize {
    j * n + i
}

/// Reads `0^n 1^m 0`.
pub fn parse_header(symbols: &[u8]) -> Result<(usize, usize)> {
    let n = symbols.iter().take_while(|&&s| s == 0).count();
    let m = symbols[n..].iter().take_while(|&&s| s == 1).count();
    if n == 0 || m == 0 {
        return Err(format_err("Γ-name header has a zero dimension"));
    }
    match symbols.get(n + m) {
        Some(0) => Ok((n, m)),
        Some(s) => Err(format_err(format!("unexpected symbol {s} in Γ-name header"))),
        None => Err(format_err("Γ-name header has no 0 after the 1-block")),
    }
}

impl GammaName {
    /// A name from raw parts: header symbols and the body tape.
    pub fn from_parts(header: Vec<u8>, body: impl Fn(u64) -> Rational + Send + Sync + 'static) -> Self {
        Self { header, body: Arc::new(body), witnesses: None }
    }

    pub fn encode(g: &BiMatrixGame) -> Self {
        let streamed = g.to_streams();
        Self::encode_streams(&streamed)
    }

    pub fn encode_streams(g: &BiMatrixGame<RealStream>) -> Self {
        let (n, m) = (g.rows(), g.cols());
        let mut header = vec![0; n];
        header.extend(std::iter::repeat_n(1, m));
        header.push(0);
        let mut comps = Vec::with_capacity(2 * n * m);
        for matrix in [g.a(), g.b()] {
            for j in 0..m {
                for i in 0..n {
                    comps.push(matrix.get(i, j).clone());
                }
            }
        }
        let witnesses = comps.iter().map(|s| s.witness().cloned()).collect();
        let k = n * m;
        let body = move |pos: u64| {
            let (half, idx) = ((pos % 2) as usize, pos / 2);
            let (t, stage) = ((idx % k as u64) as usize, idx / k as u64);
            comps[half * k + t].approx(u32::try_from(stage).unwrap_or(u32::MAX))
        };
        Self { header, body: Arc::new(body), witnesses }
    }

    pub fn header(&self) -> &[u8] {
        &self.header
    }

    pub fn dims(&self) -> Result<(usize, usize)> {
        parse_header(&self.header)
    }

    /// The body symbol at `pos`.
    pub fn body_at(&self, pos: u64) -> Rational {
        (self.body)(pos)
    }

    /// The component stream of entry `(i, j)` (0-based) of `A` (`player = 0`) or `B`.
    pub fn entry(&self, player: usize, i: usize, j: usize) -> Result<RealStream> {
        let (n, m) = self.dims()?;
        let k = n * m;
        let t = component(n, i, j);
        let body = self.body.clone();
        let witness = self.witnesses.as_ref().map(|w| w[player * k + t].clone());
        Ok(RealStream::from_fn(
            move |stage| {
                let inner = interleave_position(k, t, u64::from(stage));
                body(interleave_position(2, player, inner))
            },
            witness,
        ))
    }

    pub fn to_stream_game(&self) -> Result<BiMatrixGame<RealStream>> {
        let (n, m) = self.dims()?;
        let matrix = |p| -> Result<Matrix<RealStream>> {
            let rows = (0..n)
                .map(|i| (0..m).map(|j| self.entry(p, i, j)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Matrix::from_rows(rows)
        };
        BiMatrixGame::new(matrix(0)?, matrix(1)?)
    }

    /// Stage `p` of every entry.
    pub fn decode(&self, p: u32) -> Result<BiMatrixGame> {
        Ok(self.to_stream_game()?.map(|s| s.approx(p)))
    }
}
