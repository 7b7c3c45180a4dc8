//! The `equilibria` command line.
//!
//! Exit codes: 0 success, 1 a checked object is not an equilibrium, 2 bad
//! usage or unreadable input, 3 no solution (no pure equilibrium, infeasible
//! system, broken promise), 4 the oracle cannot answer.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num::Signed;

use crate::algebra::{mp_gadget, product_game};
use crate::error::{format_err, Error, Result};
use crate::exact::{correlated_violation, enumerate_pure, nash_violation};
use crate::game::{BiMatrixGame, CorrelatedMatrix, MixedProfile};
use crate::oracle::{is_maximal, ExactOracle, MlpoInput};
use crate::rational::{digits_for_bits, parse_rational, pow2, to_decimal, Rational};
use crate::reductions::{
    mlpo2_via_rdiv, mlpo_to_1pure, one_pure_to_mlpo, pure_via_mlpo2_products, rdiv_via_blinineq, rdiv_via_sep,
    rdiv_via_zcorr22, sep_pair_merge,
};
use crate::solvers::correlated::{solve_correlated_exact, solve_correlated_oracle};
use crate::solvers::fm::{fm_solve_exact, fm_solve_stream};
use crate::solvers::nash::{solve_nash_exact, solve_nash_oracle};
use crate::solvers::pure::solve_pure_oracle;
use crate::stream::{Nat, NatStream, RealStream};

use format::{approx_vector, exact_vector, parse_corr, parse_game, parse_ineq, parse_profile, write_corr, write_game};

#[derive(Parser, Debug)]
#[command(name = "equilibria", version, about = "Pure, Nash and correlated equilibria of bimatrix games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Concept {
    Pure,
    Nash,
    Corr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Gadget {
    Mp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Machine {
    #[value(name = "mlpo-to-1pure")]
    MlpoTo1Pure,
    #[value(name = "1pure-to-mlpo")]
    OnePureToMlpo,
    #[value(name = "pure-via-mlpo2")]
    PureViaMlpo2,
    #[value(name = "mlpo2-via-rdiv")]
    Mlpo2ViaRdiv,
    #[value(name = "rdiv-via-blinineq")]
    RdivViaBlinineq,
    #[value(name = "rdiv-via-sep")]
    RdivViaSep,
    #[value(name = "sep-pair-merge")]
    SepPairMerge,
    #[value(name = "rdiv-via-zcorr22")]
    RdivViaZcorr22,
}

fn precision_arg() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(0..=1024)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find one equilibrium of a game.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        concept: Concept,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Oracle mode prints values within 2^-k of the exact result.
        #[arg(long, default_value_t = 20, value_parser = precision_arg())]
        precision: u32,
    },
    /// Check a mixed profile or a correlated matrix exactly.
    Check {
        file: PathBuf,
        /// Row and column strategies, e.g. "1/2 1/2;1/2 1/2".
        #[arg(long, conflicts_with = "corr", required_unless_present = "corr")]
        profile: Option<String>,
        /// A file in the `corr n m` format.
        #[arg(long)]
        corr: Option<PathBuf>,
    },
    /// Write the product of two games.
    Product {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a gadget game.
    Gadget {
        #[arg(value_enum)]
        kind: Gadget,
        #[arg(allow_negative_numbers = true)]
        a: String,
        #[arg(allow_negative_numbers = true)]
        b: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find a point of a bounded system `A v <= b`, `v` in `[0, 1]^m`.
    Ineq {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value_t = 20, value_parser = precision_arg())]
        precision: u32,
    },
    /// Run a reduction machine against the exact oracle.
    ///
    /// Tapes are comma-separated naturals: a prefix followed by zeros for
    /// MLPO-style machines, a repeating cycle for the Sep machines.
    Reduction {
        #[arg(value_enum)]
        name: Machine,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
        #[arg(long, default_value_t = 20, value_parser = precision_arg())]
        precision: u32,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Invalid,
    NoSolution,
}

struct Io<'a> {
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", s.as_ref()).map_err(|e| Error::Internal(format!("write failed: {e}")))
    }
}

/// Runs the command line on `args` (including the program name), writing to
/// the given streams, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return e.exit_code();
        }
    };
    let mut io = Io { out };
    match execute(cli.command, &mut io) {
        Ok(Verdict::Ok) => 0,
        Ok(Verdict::Invalid) => 1,
        Ok(Verdict::NoSolution) => 3,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run(args, &mut out, &mut err)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Argument(_) | Error::Format(_) => 2,
        Error::Contract(_) => 3,
        Error::Unanswerable(_) => 4,
        Error::Internal(_) => 1,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| format_err(format!("{}: {e}", path.display())))
}

fn emit(io: &mut Io<'_>, text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format_err(format!("{}: {e}", path.display()))),
        None => write!(io.out, "{text}").map_err(|e| Error::Internal(format!("write failed: {e}"))),
    }
}

fn execute(command: Command, io: &mut Io<'_>) -> Result<Verdict> {
    match command {
        Command::Solve { file, concept, mode, precision } => {
            solve(&parse_game(&read(&file)?)?, concept, mode, precision, io)
        }
        Command::Check { file, profile, corr } => {
            let g = parse_game(&read(&file)?)?;
            let violation = match (profile, corr) {
                (Some(p), _) => {
                    let (x, y) = parse_profile(&p)?;
                    nash_violation(&g, &MixedProfile::new(x, y)?)?
                }
                (None, Some(path)) => correlated_violation(&g, &parse_corr(&read(&path)?)?)?,
                (None, None) => return Err(format_err("nothing to check")),
            };
            match violation {
                None => {
                    io.line("VALID")?;
                    Ok(Verdict::Ok)
                }
                Some(v) => {
                    io.line(format!("INVALID: {v}"))?;
                    Ok(Verdict::Invalid)
                }
            }
        }
        Command::Product { first, second, output } => {
            let g = product_game(&parse_game(&read(&first)?)?, &parse_game(&read(&second)?)?);
            emit(io, &write_game(&g), output.as_deref())?;
            Ok(Verdict::Ok)
        }
        Command::Gadget { kind: Gadget::Mp, a, b, output } => {
            let (a, b) = (parse_rational(&a)?, parse_rational(&b)?);
            emit(io, &write_game(&mp_gadget(&a, &b)), output.as_deref())?;
            Ok(Verdict::Ok)
        }
        Command::Ineq { file, mode, precision } => {
            let s = parse_ineq(&read(&file)?)?;
            match mode {
                ModeArg::Exact => match fm_solve_exact(&s) {
                    Some(v) => {
                        io.line(format!("v = {}", exact_vector(&v)))?;
                        Ok(Verdict::Ok)
                    }
                    None => infeasible(io),
                },
                ModeArg::Oracle => match fm_solve_stream(&s.to_streams(), &ExactOracle) {
                    Ok(v) => {
                        io.line(format!("v = {}", approx_vector(&v, precision)))?;
                        Ok(Verdict::Ok)
                    }
                    Err(Error::Contract(_)) => infeasible(io),
                    Err(e) => Err(e),
                },
            }
        }
        Command::Reduction { name, args, precision } => reduction(name, &args, precision, io),
    }
}

fn infeasible(io: &mut Io<'_>) -> Result<Verdict> {
    io.line("infeasible")?;
    Ok(Verdict::NoSolution)
}

fn solve(g: &BiMatrixGame, concept: Concept, mode: ModeArg, k: u32, io: &mut Io<'_>) -> Result<Verdict> {
    match (concept, mode) {
        (Concept::Pure, ModeArg::Exact) => match enumerate_pure(g).first() {
            Some((i, j)) => io.line(format!("({i},{j})"))?,
            None => {
                io.line("no pure equilibrium")?;
                return Ok(Verdict::NoSolution);
            }
        },
        (Concept::Pure, ModeArg::Oracle) => match solve_pure_oracle(&g.to_streams(), &ExactOracle) {
            Ok((i, j)) => io.line(format!("({i},{j})"))?,
            Err(Error::Contract(_)) => {
                io.line("no pure equilibrium")?;
                return Ok(Verdict::NoSolution);
            }
            Err(e) => return Err(e),
        },
        (Concept::Nash, ModeArg::Exact) => {
            let p = solve_nash_exact(g)?;
            io.line(format!("x = {}", exact_vector(&p.x)))?;
            io.line(format!("y = {}", exact_vector(&p.y)))?;
        }
        (Concept::Nash, ModeArg::Oracle) => {
            let p = solve_nash_oracle(&g.to_streams(), &ExactOracle)?;
            io.line(format!("x = {}", approx_vector(&p.x, k)))?;
            io.line(format!("y = {}", approx_vector(&p.y, k)))?;
        }
        (Concept::Corr, ModeArg::Exact) => {
            write!(io.out, "{}", write_corr(&solve_correlated_exact(g)?))
                .map_err(|e| Error::Internal(format!("write failed: {e}")))?;
        }
        (Concept::Corr, ModeArg::Oracle) => {
            let c = solve_correlated_oracle(&g.to_streams(), &ExactOracle)?;
            io.line(format!("# entries within 2^-{k}"))?;
            io.line(format!("corr {} {}", g.rows(), g.cols()))?;
            approx_rows(&c, k, io)?;
        }
    }
    Ok(Verdict::Ok)
}

fn approx_rows(c: &CorrelatedMatrix<RealStream>, k: u32, io: &mut Io<'_>) -> Result<()> {
    let digits = digits_for_bits(k);
    for i in 0..c.0.rows() {
        let row: Vec<String> = c.0.row(i).iter().map(|s| to_decimal(&s.approx(k + 1), digits)).collect();
        io.line(row.join(" "))?;
    }
    Ok(())
}

fn parse_tape_symbols(s: &str) -> Result<Vec<Nat>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Nat>().map_err(|_| format_err(format!("invalid tape symbol `{t}`"))))
        .collect()
}

fn prefix_tape(s: &str) -> Result<NatStream> {
    Ok(NatStream::from_prefix(parse_tape_symbols(s)?))
}

fn cycle_tape(s: &str) -> Result<NatStream> {
    let values = parse_tape_symbols(s)?;
    if values.is_empty() {
        return Err(format_err("a cyclic tape needs at least one symbol"));
    }
    Ok(NatStream::cycle(values))
}

fn reals(args: &[String]) -> Result<Vec<Rational>> {
    args.iter().map(|a| parse_rational(a)).collect()
}

fn constants(values: &[Rational]) -> Vec<RealStream> {
    values.iter().cloned().map(RealStream::constant).collect()
}

fn expect_args(args: &[String], n: usize, what: &str) -> Result<()> {
    if args.len() != n {
        return Err(format_err(format!("expected {what}, got {} arguments", args.len())));
    }
    Ok(())
}

fn nonempty(args: &[String], what: &str) -> Result<()> {
    if args.is_empty() {
        return Err(format_err(format!("expected at least one {what}")));
    }
    Ok(())
}

/// A division pair `a <= b` with `0 <= a`.
fn division_pair(a: &str, b: &str) -> Result<(Rational, Rational)> {
    let (a, b) = (parse_rational(a)?, parse_rational(b)?);
    if a.is_negative() || a > b {
        return Err(format_err(format!("division needs 0 <= a <= b, got {a}, {b}")));
    }
    Ok((a, b))
}

/// Whether stage `k+1` of `v` is within `2^-(k+1)` of `a / b` (any point of
/// `[0, 1]` when `b = 0`).
fn close_to_quotient(v: &RealStream, a: &Rational, b: &Rational, k: u32) -> bool {
    let q = v.approx(k + 1);
    let eps = pow2(-i64::from(k) - 1);
    if b.is_positive() {
        (q - a / b).abs() <= eps
    } else {
        q >= -eps.clone() && q <= Rational::from_integer(1.into()) + eps
    }
}

fn verified(io: &mut Io<'_>, ok: bool, line: String) -> Result<Verdict> {
    if ok {
        io.line(line)?;
        Ok(Verdict::Ok)
    } else {
        io.line(format!("INVALID: {line}"))?;
        Ok(Verdict::Invalid)
    }
}

fn reduction(name: Machine, args: &[String], k: u32, io: &mut Io<'_>) -> Result<Verdict> {
    match name {
        Machine::MlpoTo1Pure => {
            nonempty(args, "tape")?;
            let tapes = args.iter().map(|a| prefix_tape(a)).collect::<Result<Vec<_>>>()?;
            let index = mlpo_to_1pure(tapes.len()).run(&tapes, &ExactOracle)?;
            let ok = tapes[index - 1].zero_fact() == Some(crate::stream::ZeroFact::AllZero);
            verified(io, ok, format!("index = {index}"))
        }
        Machine::OnePureToMlpo | Machine::PureViaMlpo2 => {
            nonempty(args, "payoff")?;
            let values = reals(args)?;
            let p = constants(&values);
            let index = if name == Machine::OnePureToMlpo {
                one_pure_to_mlpo(p.len()).run(&p, &ExactOracle)?
            } else {
                pure_via_mlpo2_products(p.len() - 1).run(&p, &ExactOracle)?
            };
            verified(io, is_maximal(&values, index), format!("index = {index}"))
        }
        Machine::Mlpo2ViaRdiv => {
            expect_args(args, 2, "two tapes")?;
            let (p, q) = (prefix_tape(&args[0])?, prefix_tape(&args[1])?);
            let index = mlpo2_via_rdiv().run(&(p.clone(), q.clone()), &ExactOracle)?;
            let inputs = [MlpoInput::Nat(p), MlpoInput::Nat(q)];
            let ok = crate::oracle::mlpo_answer_valid(&inputs, index)?;
            verified(io, ok, format!("index = {index}"))
        }
        Machine::RdivViaBlinineq => {
            nonempty(args, "pair a:b")?;
            let pairs = args
                .iter()
                .map(|s| {
                    let (a, b) = s.split_once(':').ok_or_else(|| format_err(format!("expected a:b, got `{s}`")))?;
                    division_pair(a, b)
                })
                .collect::<Result<Vec<_>>>()?;
            let input: Vec<(RealStream, RealStream)> =
                pairs.iter().map(|(a, b)| (RealStream::constant(a.clone()), RealStream::constant(b.clone()))).collect();
            let v = rdiv_via_blinineq(input.len()).run(&input, &ExactOracle)?;
            let ok = v.iter().zip(&pairs).all(|(s, (a, b))| close_to_quotient(s, a, b, k));
            verified(io, ok, format!("v = {}", approx_vector(&v, k)))
        }
        Machine::RdivViaSep | Machine::RdivViaZcorr22 => {
            expect_args(args, 2, "a and b")?;
            let (a, b) = division_pair(&args[0], &args[1])?;
            let input = (RealStream::constant(a.clone()), RealStream::constant(b.clone()));
            let v = if name == Machine::RdivViaSep {
                rdiv_via_sep().run(&input, &ExactOracle)?
            } else {
                if !b.is_positive() {
                    return Err(format_err("the zero-sum division machine needs b > 0"));
                }
                rdiv_via_zcorr22().run(&input, &ExactOracle)?
            };
            let ok = close_to_quotient(&v, &a, &b, k);
            verified(io, ok, format!("v = {}", approx_vector(std::slice::from_ref(&v), k)))
        }
        Machine::SepPairMerge => {
            expect_args(args, 4, "four cyclic tapes p1 q1 p2 q2")?;
            let tapes = args.iter().map(|a| cycle_tape(a)).collect::<Result<Vec<_>>>()?;
            let symbols: Vec<Vec<Nat>> = args.iter().map(|a| parse_tape_symbols(a)).collect::<Result<_>>()?;
            let input = ((tapes[0].clone(), tapes[1].clone()), (tapes[2].clone(), tapes[3].clone()));
            let (f1, f2) = sep_pair_merge().run(&input, &ExactOracle)?;
            let mut ok = true;
            let mut lines = Vec::new();
            for (name, f, (p, q)) in [("f1", &f1, (&symbols[0], &symbols[1])), ("f2", &f2, (&symbols[2], &symbols[3]))]
            {
                let top = p.iter().chain(q).copied().max().unwrap_or(0);
                let labels = (0..=top).map(|v| f(v)).collect::<Result<Vec<u8>>>()?;
                ok &= p.iter().all(|&v| labels[v as usize] == 0) && q.iter().all(|&v| labels[v as usize] == 1);
                let shown: Vec<String> = labels.iter().map(ToString::to_string).collect();
                lines.push(format!("{name}(0..={top}) = {}", shown.join(" ")));
            }
            let verdict = verified(io, ok, lines[0].clone())?;
            io.line(&lines[1])?;
            Ok(verdict)
        }
    }
}
