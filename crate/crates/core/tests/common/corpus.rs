//! Command-line cases run against the built binary. Each case returns `Ok`
//! when the binary's output and exit code match an independent computation.

use std::path::PathBuf;
use std::process::Command;

use equilibria::algebra::{mp_gadget, product_game};
use equilibria::cli::format::{parse_corr, parse_game};
use equilibria::exact::enumerate_pure;
use equilibria::game::BiMatrixGame;
use equilibria::oracle::ExactOracle;
use equilibria::rational::{parse_rational, pow2, Rational};
use equilibria::solvers::correlated::solve_correlated_oracle;
use equilibria::solvers::nash::solve_nash_oracle;
use num::Signed;

use super::{corr_ok, nash_by_deviation, q};

pub type Outcome = Result<(), String>;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fixture_arg(name: &str) -> String {
    fixture(name).display().to_string()
}

pub fn bin(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_equilibria")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn expect(args: &[&str], code: i32, stdout: Option<&str>) -> Outcome {
    let r = bin(args);
    if r.code != code {
        return Err(format!("{args:?}: exit {} (wanted {code}), stdout {:?}, stderr {:?}", r.code, r.stdout, r.stderr));
    }
    match stdout {
        Some(s) if r.stdout != s => Err(format!("{args:?}: printed {:?}, wanted {s:?}", r.stdout)),
        _ => Ok(()),
    }
}

fn load(name: &str) -> BiMatrixGame {
    parse_game(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

pub const GAMES: [&str; 13] = [
    "mp11.game",
    "mp13.game",
    "coordination.game",
    "prisoners.game",
    "sexes.game",
    "chicken.game",
    "rps.game",
    "shapley.game",
    "zeros.game",
    "single.game",
    "row.game",
    "tall.game",
    "decimals.game",
];

fn documented() -> Vec<(String, Outcome)> {
    let f = fixture_arg;
    let mut out = Vec::new();
    let mut case = |name: &str, r: Outcome| out.push((name.to_string(), r));
    case("mp11 nash", expect(&["solve", &f("mp11.game"), "--concept", "nash"], 0, Some("x = 1/2 1/2\ny = 1/2 1/2\n")));
    case("mp13 nash", expect(&["solve", &f("mp13.game"), "--concept", "nash"], 0, Some("x = 3/4 1/4\ny = 3/4 1/4\n")));
    case("mp11 pure", expect(&["solve", &f("mp11.game"), "--concept", "pure"], 3, Some("no pure equilibrium\n")));
    case(
        "mp11 pure oracle",
        expect(&["solve", &f("mp11.game"), "--concept", "pure", "--mode", "oracle"], 3, Some("no pure equilibrium\n")),
    );
    case("coordination pure", expect(&["solve", &f("coordination.game"), "--concept", "pure"], 0, Some("(1,1)\n")));
    case("prisoners pure", expect(&["solve", &f("prisoners.game"), "--concept", "pure"], 0, Some("(2,2)\n")));
    case("check mp13", expect(&["check", &f("mp13.game"), "--profile", "3/4 1/4;3/4 1/4"], 0, Some("VALID\n")));
    case(
        "check mp11 pure profile",
        expect(
            &["check", &f("mp11.game"), "--profile", "1 0;1 0"],
            1,
            Some("INVALID: column player gains 1 by deviating to column 2\n"),
        ),
    );
    case("check quarters", expect(&["check", &f("mp11.game"), "--corr", &f("quarters.corr")], 0, Some("VALID\n")));
    case(
        "check chicken corr",
        expect(&["check", &f("chicken.game"), "--corr", &f("chicken.corr")], 0, Some("VALID\n")),
    );
    case("check first cell", expect(&["check", &f("mp11.game"), "--corr", &f("first_cell.corr")], 1, None));
    case("check unit", expect(&["check", &f("single.game"), "--corr", &f("unit.corr")], 0, Some("VALID\n")));
    case("negative corr", expect(&["check", &f("mp11.game"), "--corr", &f("negative.corr")], 2, Some("")));
    case("profile size", expect(&["check", &f("mp11.game"), "--profile", "1;1 0"], 2, Some("")));
    case("ragged", expect(&["solve", &f("ragged.game"), "--concept", "nash"], 2, Some("")));
    case("header", expect(&["solve", &f("header.game"), "--concept", "nash"], 2, Some("")));
    case("token", expect(&["solve", &f("token.game"), "--concept", "nash"], 2, Some("")));
    case("short ineq", expect(&["ineq", &f("short.ineq")], 2, Some("")));
    case("missing file", expect(&["solve", &f("absent.game"), "--concept", "nash"], 2, Some("")));
    case("precision range", expect(&["solve", &f("mp11.game"), "--concept", "nash", "--precision", "2000"], 2, None));
    case("no subcommand", expect(&[], 2, None));
    case("diagonal", expect(&["ineq", &f("diagonal.ineq")], 0, Some("v = 1/2\n")));
    case("infeasible", expect(&["ineq", &f("infeasible.ineq")], 3, Some("infeasible\n")));
    case("infeasible oracle", expect(&["ineq", &f("infeasible.ineq"), "--mode", "oracle"], 3, Some("infeasible\n")));
    case("box", expect(&["ineq", &f("box.ineq")], 0, Some("v = 1 1/2\n")));
    case(
        "box oracle",
        expect(&["ineq", &f("box.ineq"), "--mode", "oracle"], 0, Some("v = 1.0000000 0.7500000 (±2^-20)\n")),
    );
    case(
        "zcorr22",
        expect(&["reduction", "rdiv-via-zcorr22", "1", "4", "--precision", "8"], 0, Some("v = 0.250 (±2^-8)\n")),
    );
    case("mlpo to 1pure", expect(&["reduction", "mlpo-to-1pure", "0,1", "0"], 0, Some("index = 2\n")));
    case("zcorr22 at zero", expect(&["reduction", "rdiv-via-zcorr22", "0", "0"], 2, Some("")));
    case("bad division", expect(&["reduction", "rdiv-via-sep", "2", "1"], 2, None));
    out
}

fn gadget_and_product() -> Vec<(String, Outcome)> {
    let mut out = Vec::new();
    let r = bin(&["gadget", "mp", "1", "3"]);
    let got = parse_game(&r.stdout).map_err(|e| e.to_string());
    let ok = match got {
        Ok(g) if r.code == 0 && g == mp_gadget(&q(1, 1), &q(3, 1)) && g == load("mp13.game") => Ok(()),
        other => Err(format!("gadget mp 1 3: exit {}, {other:?}", r.code)),
    };
    out.push(("gadget mp 1 3".to_string(), ok));

    let dir = tempfile::tempdir().unwrap();
    for (a, b) in [("mp11.game", "mp11.game"), ("row.game", "tall.game"), ("sexes.game", "decimals.game")] {
        let path = dir.path().join(format!("{a}-{b}"));
        let r = bin(&["product", &fixture_arg(a), &fixture_arg(b), "-o", path.to_str().unwrap()]);
        let expected = product_game(&load(a), &load(b));
        let ok = match std::fs::read_to_string(&path).map(|t| parse_game(&t)) {
            Ok(Ok(g)) if r.code == 0 && r.stdout.is_empty() && g == expected => {
                let marker = bin(&["product", &fixture_arg(a), &fixture_arg(b)]);
                if parse_game(&marker.stdout).ok() == Some(expected) {
                    Ok(())
                } else {
                    Err(format!("product {a} {b}: stdout differs from file"))
                }
            }
            other => Err(format!("product {a} {b}: exit {}, {other:?}", r.code)),
        };
        out.push((format!("product {a} {b}"), ok));
    }
    out
}

/// Exact answers, re-checked by the binary itself and by the test-side reference.
fn exact_round_trip(name: &str) -> Outcome {
    let g = load(name);
    let path = fixture_arg(name);
    let dir = tempfile::tempdir().unwrap();

    let r = bin(&["solve", &path, "--concept", "nash"]);
    let lines: Vec<&str> = r.stdout.lines().collect();
    let (Some(x), Some(y)) =
        (lines.first().and_then(|l| l.strip_prefix("x = ")), lines.get(1).and_then(|l| l.strip_prefix("y = ")))
    else {
        return Err(format!("{name}: nash printed {:?}", r.stdout));
    };
    let parse = |s: &str| s.split_whitespace().map(|t| parse_rational(t).unwrap()).collect::<Vec<_>>();
    if r.code != 0 || !nash_by_deviation(&g, &parse(x), &parse(y)) {
        return Err(format!("{name}: nash answer {x} ; {y} fails the reference check"));
    }
    expect(&["check", &path, "--profile", &format!("{x};{y}")], 0, Some("VALID\n"))?;

    let r = bin(&["solve", &path, "--concept", "corr"]);
    let c = parse_corr(&r.stdout).map_err(|e| format!("{name}: corr output {e}"))?;
    if r.code != 0 || !corr_ok(&g, &c) {
        return Err(format!("{name}: corr answer fails the reference check"));
    }
    let file = dir.path().join("answer.corr");
    std::fs::write(&file, &r.stdout).unwrap();
    expect(&["check", &path, "--corr", file.to_str().unwrap()], 0, Some("VALID\n"))?;

    let pure = enumerate_pure(&g);
    let r = bin(&["solve", &path, "--concept", "pure"]);
    let oracle = bin(&["solve", &path, "--concept", "pure", "--mode", "oracle"]);
    match pure.first() {
        None if r.code == 3 && oracle.code == 3 => Ok(()),
        Some(&(i, j)) if r.code == 0 && r.stdout == format!("({i},{j})\n") => {
            let unit =
                |k: usize, n: usize| (1..=n).map(|t| if t == k { "1" } else { "0" }).collect::<Vec<_>>().join(" ");
            expect(&["check", &path, "--profile", &format!("{};{}", unit(i, g.rows()), unit(j, g.cols()))], 0, None)?;
            let cell = oracle
                .stdout
                .trim()
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(|t| t.parse().unwrap())
                .collect::<Vec<usize>>();
            if oracle.code == 0 && cell.len() == 2 && pure.contains(&(cell[0], cell[1])) {
                Ok(())
            } else {
                Err(format!("{name}: oracle pure printed {:?}", oracle.stdout))
            }
        }
        _ => Err(format!("{name}: pure printed {:?} / {:?}, pure set {pure:?}", r.stdout, oracle.stdout)),
    }
}

fn decimals(line: &str, k: u32) -> Option<Vec<Rational>> {
    let body = line.strip_suffix(&format!(" (±2^-{k})"))?;
    body.split_whitespace().map(|t| parse_rational(t).ok()).collect()
}

fn within(printed: &[Rational], exact: &[Rational], k: u32) -> bool {
    let eps = pow2(-i64::from(k));
    printed.len() == exact.len() && printed.iter().zip(exact).all(|(p, e)| (p - e).abs() <= eps)
}

/// Oracle-mode prints against the witnesses of the same computation run in-process.
fn precision_contract(name: &str, k: u32) -> Outcome {
    let g = load(name);
    let path = fixture_arg(name);
    let kk = k.to_string();
    let p = solve_nash_oracle(&g.to_streams(), &ExactOracle).map_err(|e| e.to_string())?;
    let w = p.witnesses().ok_or("nash witnesses")?;
    if !nash_by_deviation(&g, &w.x, &w.y) {
        return Err(format!("{name}: witness is not an equilibrium"));
    }
    let r = bin(&["solve", &path, "--concept", "nash", "--mode", "oracle", "--precision", &kk]);
    let lines: Vec<&str> = r.stdout.lines().collect();
    let x = lines.first().and_then(|l| l.strip_prefix("x = ")).and_then(|l| decimals(l, k));
    let y = lines.get(1).and_then(|l| l.strip_prefix("y = ")).and_then(|l| decimals(l, k));
    match (x, y) {
        (Some(x), Some(y)) if r.code == 0 && within(&x, &w.x, k) && within(&y, &w.y, k) => {}
        _ => return Err(format!("{name} at 2^-{k}: nash printed {:?}", r.stdout)),
    }

    let c = solve_correlated_oracle(&g.to_streams(), &ExactOracle).map_err(|e| e.to_string())?;
    let cw = c.witnesses().ok_or("corr witnesses")?;
    if !corr_ok(&g, &cw) {
        return Err(format!("{name}: corr witness is not an equilibrium"));
    }
    let r = bin(&["solve", &path, "--concept", "corr", "--mode", "oracle", "--precision", &kk]);
    let mut lines = r.stdout.lines();
    let header_ok = lines.next() == Some(&format!("# entries within 2^-{k}"))
        && lines.next() == Some(&format!("corr {} {}", g.rows(), g.cols()));
    let rows: Vec<String> = lines.map(|l| format!("{l} (±2^-{k})")).collect();
    let ok = header_ok
        && r.code == 0
        && rows.len() == g.rows()
        && rows.iter().enumerate().all(|(i, l)| decimals(l, k).is_some_and(|v| within(&v, cw.matrix().row(i), k)));
    if !ok {
        return Err(format!("{name} at 2^-{k}: corr printed {:?}", r.stdout));
    }
    Ok(())
}

fn division_precision(machine: &str, a: i64, b: i64, k: u32) -> Outcome {
    let kk = k.to_string();
    let (sa, sb) = (a.to_string(), b.to_string());
    let r = bin(&["reduction", machine, &sa, &sb, "--precision", &kk]);
    let v = r.stdout.strip_prefix("v = ").and_then(|l| decimals(l.trim_end(), k));
    let exact = if b == 0 { None } else { Some(q(a, b)) };
    match (v, exact) {
        (Some(v), Some(e)) if r.code == 0 && within(&v, std::slice::from_ref(&e), k) => Ok(()),
        (Some(v), None) if r.code == 0 && v.len() == 1 && !v[0].is_negative() => Ok(()),
        _ => Err(format!("{machine} {a} {b} at 2^-{k}: printed {:?}", r.stdout)),
    }
}

/// Every case of the command-line corpus, named.
pub fn cases() -> Vec<(String, Outcome)> {
    let mut out = documented();
    out.extend(gadget_and_product());
    for name in GAMES {
        out.push((format!("round trip {name}"), exact_round_trip(name)));
        for k in [8, 20] {
            out.push((format!("precision {name} 2^-{k}"), precision_contract(name, k)));
        }
    }
    for (machine, a, b, k) in [
        ("rdiv-via-zcorr22", 1, 3, 10),
        ("rdiv-via-zcorr22", 2, 7, 30),
        ("rdiv-via-zcorr22", 0, 5, 4),
        ("rdiv-via-zcorr22", 5, 5, 12),
        ("rdiv-via-sep", 1, 3, 10),
        ("rdiv-via-sep", 0, 0, 6),
    ] {
        out.push((format!("{machine} {a} {b}"), division_precision(machine, a, b, k)));
    }
    out
}
