//! Exact and oracle-based solvers for pure, Nash and correlated equilibria of
//! bimatrix games, with payoffs given either as rationals or as fast-converging
//! streams of rational approximations.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod exact;
pub mod game;
pub mod gamma;
pub mod oracle;
pub mod rational;
pub mod reductions;
pub mod solvers;
pub mod stream;

pub use error::{Error, Result};
pub use game::{BiMatrixGame, CorrelatedMatrix, Matrix, MixedProfile, Payoff};
pub use oracle::{ExactOracle, Oracle, OracleAnswer, OracleQuery, Reduction};
pub use rational::Rational;
pub use stream::{NatStream, RealStream};
