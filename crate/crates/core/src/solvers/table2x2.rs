//! Closed-form Nash equilibria of 2x2 games.
//!
//! With `x` and `y` the probabilities of the first row and first column, the
//! row player maximizes `x (c + d y)` and the column player `y (e + f x)`:
//!
//! ```text
//! c = a12 - a22     d = a11 - a12 - a21 + a22
//! e = b21 - b22     f = b11 - b12 - b21 + b22
//! ```
//!
//! An equilibrium depends only on the signs of `c`, `c + d`, `e`, `e + f`
//! (the incentives at the two ends of each opponent's interval), and on the
//! indifference points `-e/f` and `-c/d` when both players mix.

use std::cmp::Ordering;
use std::fmt;

use num::{Signed, Zero};

use crate::error::{argument, Result};
use crate::game::{BiMatrixGame, MixedProfile};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced2x2 {
    pub c: Rational,
    pub d: Rational,
    pub e: Rational,
    pub f: Rational,
}

impl Reduced2x2 {
    pub fn of(g: &BiMatrixGame) -> Result<Self> {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(argument(format!("expected a 2x2 game, got {}x{}", g.rows(), g.cols())));
        }
        let a = |i, j| g.a().get(i, j).clone();
        let b = |i, j| g.b().get(i, j).clone();
        Ok(Self {
            c: a(0, 1) - a(1, 1),
            d: a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1),
            e: b(1, 0) - b(1, 1),
            f: b(0, 0) - b(0, 1) - b(1, 0) + b(1, 1),
        })
    }

    /// Signs of `(c, c + d, e, e + f)`.
    pub fn pattern(&self) -> [Ordering; 4] {
        let sign = |q: &Rational| q.cmp(&Rational::zero());
        [sign(&self.c), sign(&(&self.c + &self.d)), sign(&self.e), sign(&(&self.e + &self.f))]
    }
}

/// A table cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    One,
    Zero,
    /// `-e/f` for `x`, `-c/d` for `y`.
    Mixed,
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entry::One => "1",
            Entry::Zero => "0",
            Entry::Mixed => "mixed",
        })
    }
}

use Entry::{Mixed as M, One as I, Zero as O};

/// Sign pattern of `(c, c + d, e, e + f)` as `+`, `-`, `0`, then `(x, y)`.
pub const TABLE: [(&str, Entry, Entry); 81] = [
    ("++++", I, I),
    ("+++-", I, O),
    ("++-+", I, I),
    ("++--", I, O),
    ("+-++", O, I),
    ("+-+-", O, I),
    ("+--+", M, M),
    ("+---", I, O),
    ("-+++", I, I),
    ("-++-", M, M),
    ("-+-+", O, O),
    ("-+--", O, O),
    ("--++", O, I),
    ("--+-", O, I),
    ("---+", O, O),
    ("----", O, O),
    ("0+++", I, I),
    ("0++-", I, O),
    ("0+-+", I, I),
    ("0+--", I, O),
    ("0-++", O, I),
    ("0-+-", O, I),
    ("0--+", O, O),
    ("0---", I, O),
    ("+0++", I, I),
    ("+0+-", I, O),
    ("+0-+", I, I),
    ("+0--", I, O),
    ("-0++", O, I),
    ("-0+-", O, I),
    ("-0-+", O, O),
    ("-0--", O, O),
    ("++0+", I, I),
    ("++0-", I, O),
    ("+-0+", O, I),
    ("+-0-", I, O),
    ("-+0+", I, I),
    ("-+0-", O, O),
    ("--0+", O, I),
    ("--0-", O, O),
    ("+++0", I, I),
    ("++-0", I, O),
    ("+-+0", O, I),
    ("+--0", I, O),
    ("-++0", I, I),
    ("-+-0", O, O),
    ("--+0", O, I),
    ("---0", O, O),
    ("00++", I, I),
    ("00+-", I, O),
    ("00-+", I, I),
    ("00--", I, O),
    ("0+0+", I, I),
    ("0+0-", I, O),
    ("0-0+", O, O),
    ("0-0-", O, O),
    ("0++0", I, I),
    ("0+-0", I, I),
    ("0-+0", O, I),
    ("0--0", O, O),
    ("-00+", O, I),
    ("-00-", O, O),
    ("+00+", I, I),
    ("+00-", I, O),
    ("-0+0", O, I),
    ("-0-0", O, O),
    ("+0+0", I, I),
    ("+0-0", I, O),
    ("++00", I, I),
    ("+-00", O, I),
    ("-+00", I, I),
    ("--00", O, I),
    ("000+", I, I),
    ("000-", I, O),
    ("00-0", I, O),
    ("00+0", I, I),
    ("0+00", I, I),
    ("0-00", O, I),
    ("-000", O, I),
    ("+000", I, I),
    ("0000", I, O),
];

fn pattern_key(p: [Ordering; 4]) -> String {
    p.iter()
        .map(|o| match o {
            Ordering::Greater => '+',
            Ordering::Less => '-',
            Ordering::Equal => '0',
        })
        .collect()
}

/// The table row for a sign pattern.
pub fn lookup(pattern: [Ordering; 4]) -> (Entry, Entry) {
    let key = pattern_key(pattern);
    let (_, x, y) = TABLE.iter().find(|(k, _, _)| *k == key).expect("the table covers every sign pattern");
    (*x, *y)
}

pub fn solve_2x2_table(g: &BiMatrixGame) -> Result<MixedProfile> {
    let r = Reduced2x2::of(g)?;
    let (x, y) = lookup(r.pattern());
    let value = |entry: Entry, num: &Rational, den: &Rational| match entry {
        Entry::One => Rational::from_integer(1.into()),
        Entry::Zero => Rational::zero(),
        Entry::Mixed => -num / den,
    };
    let x = value(x, &r.e, &r.f);
    let y = value(y, &r.c, &r.d);
    debug_assert!(!x.is_negative() && !y.is_negative());
    let one = Rational::from_integer(1.into());
    Ok(MixedProfile { x: vec![x.clone(), &one - x], y: vec![y.clone(), one - y] })
}
