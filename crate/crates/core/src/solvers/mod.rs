//! Equilibrium solvers in exact and oracle mode.

pub mod correlated;
pub mod fm;
pub mod nash;
pub mod pure;
pub mod table2x2;

/// Exact mode reads rationals; oracle mode works on streams and asks an
/// oracle for every discontinuous decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Oracle,
}
