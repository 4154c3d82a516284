//! Command-line front end for the inversion and renormalisation engines.
//!
//! [`run`] parses an argument vector, runs one subcommand and returns the
//! exit status together with the text destined for stdout and stderr.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use mobius_core::bialg::antipode;
use mobius_core::coalg::{moebius_invert_evenodd, moebius_invert_recursive, zeta};
use mobius_core::incidence::{
    dirichlet_convolve, divisibility_coalgebra, interval_coalgebra, parse_poset, poset_moebius,
    ArithFn, Interval, NatCoalgebra, Poset,
};
use mobius_core::renorm::{birkhoff, CountertermMethod, Operator, PolePart};
use mobius_core::trees::{forest_bialgebra, parse_forest, toy_character, CharacterAssignment};
use mobius_core::{Coalgebra, Error, Forest, LaurentRing, LinMap, Rational, Rationals};

/// Exit status for malformed input.
pub const EXIT_INPUT: i32 = 1;
/// Exit status for a violated mathematical postcondition.
pub const EXIT_POSTCONDITION: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "mobius",
    version,
    about = "Möbius inversion and BPHZ renormalisation"
)]
struct Cli {
    /// Output layout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Aligned columns.
    Text,
    /// Tab-separated values.
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Möbius function of a poset file, on every interval or on one.
    Poset {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        interval: Option<Vec<String>>,
    },
    /// Möbius and totient functions on 1..=N via the divisibility coalgebra.
    Dirichlet {
        #[arg(long)]
        n: u64,
        /// Also verify μ * ζ = ε up to N.
        #[arg(long)]
        check: bool,
    },
    /// Convolution inverse of φ on one of the built-in coalgebras.
    Abstract {
        /// nat, divisors, forest or poset:<file>.
        #[arg(long, value_parser = parse_coalgebra)]
        coalgebra: CoalgebraChoice,
        /// zeta, or file:<path> with lines `key : rational`; unlisted keys
        /// take the value 1. For forests the keys are trees and φ is
        /// extended multiplicatively.
        #[arg(long, value_parser = parse_phi)]
        phi: PhiChoice,
        /// Use the alternating series of powers of φ − e.
        #[arg(long)]
        evenodd: bool,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Largest integer for the divisibility coalgebra.
        #[arg(long, default_value_t = 100)]
        n: u64,
    },
    /// Antipode of the rooted-forest bialgebra.
    Antipode {
        #[arg(long)]
        max_degree: usize,
    },
    /// Renormalisation of toy Feynman rules.
    Renorm {
        #[command(subcommand)]
        command: RenormCommand,
    },
}

#[derive(Subcommand, Debug)]
enum RenormCommand {
    /// φ, φ₋, φ₊ and the finite value on every forest up to a degree.
    Bphz {
        /// Character file with lines `tree : laurent-series`.
        #[arg(long = "char")]
        char_file: PathBuf,
        #[arg(long)]
        max_degree: usize,
        /// Use the Atkinson series instead of the Bogoliubov recursion.
        #[arg(long)]
        atkinson: bool,
    },
}

#[derive(Clone, Debug)]
enum CoalgebraChoice {
    Nat,
    Divisors,
    Forest,
    Poset(PathBuf),
}

fn parse_coalgebra(s: &str) -> Result<CoalgebraChoice, String> {
    match s {
        "nat" => Ok(CoalgebraChoice::Nat),
        "divisors" => Ok(CoalgebraChoice::Divisors),
        "forest" => Ok(CoalgebraChoice::Forest),
        _ => match s.strip_prefix("poset:") {
            Some(path) if !path.is_empty() => Ok(CoalgebraChoice::Poset(path.into())),
            _ => Err("expected nat, divisors, forest or poset:<file>".into()),
        },
    }
}

#[derive(Clone, Debug)]
enum PhiChoice {
    Zeta,
    File(PathBuf),
}

fn parse_phi(s: &str) -> Result<PhiChoice, String> {
    match s {
        "zeta" => Ok(PhiChoice::Zeta),
        _ => match s.strip_prefix("file:") {
            Some(path) if !path.is_empty() => Ok(PhiChoice::File(path.into())),
            _ => Err("expected zeta or file:<path>".into()),
        },
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    /// Wraps an engine error, naming the key being evaluated.
    fn at(key: impl Display, e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: format!("{key}: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PolePresent
        | Error::PostconditionViolated { .. }
        | Error::FiltrationViolated(_)
        | Error::StandingAssumption(_)
        | Error::UnitNotInKerR => EXIT_POSTCONDITION,
        _ => EXIT_INPUT,
    }
}

/// Runs the command line `args`, whose first item is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Poset { file, interval } => poset(file, interval.as_deref(), cli.format),
        Command::Dirichlet { n, check } => dirichlet(*n, *check, cli.format),
        Command::Abstract {
            coalgebra,
            phi,
            evenodd,
            max_degree,
            n,
        } => abstract_inverse(coalgebra, phi, *evenodd, *max_degree, *n, cli.format),
        Command::Antipode { max_degree } => antipode_table(*max_degree, cli.format),
        Command::Renorm {
            command:
                RenormCommand::Bphz {
                    char_file,
                    max_degree,
                    atkinson,
                },
        } => bphz(char_file, *max_degree, *atkinson, cli.format),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> Failure {
    Failure {
        code: exit_code(&e),
        message: format!("{}: {e}", path.display()),
    }
}

/// A table with one header line; text output pads columns, TSV does not.
struct Table {
    header: Vec<&'static str>,
    prefixes: Vec<&'static str>,
    right: Vec<bool>,
    rows: Vec<Vec<String>>,
    footer: Vec<String>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            prefixes: vec![""; header.len()],
            right: vec![false; header.len()],
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Tsv => {
                out.push_str(&self.header.join("\t"));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join("\t"));
                    out.push('\n');
                }
            }
            Format::Text => {
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&self.prefixes)
                            .map(|(c, p)| format!("{p}{c}"))
                            .collect()
                    })
                    .collect();
                let mut widths: Vec<usize> =
                    self.header.iter().map(|h| h.chars().count()).collect();
                for row in &cells {
                    for (w, c) in widths.iter_mut().zip(row) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let header: Vec<String> = self.header.iter().map(|h| h.to_string()).collect();
                for row in std::iter::once(&header).chain(&cells) {
                    let line: Vec<String> = row
                        .iter()
                        .zip(&widths)
                        .zip(&self.right)
                        .map(|((c, &w), &right)| {
                            let pad = " ".repeat(w - c.chars().count());
                            if right {
                                format!("{pad}{c}")
                            } else {
                                format!("{c}{pad}")
                            }
                        })
                        .collect();
                    out.push_str(line.join("  ").trim_end());
                    out.push('\n');
                }
            }
        }
        for line in &self.footer {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

fn poset(file: &Path, interval: Option<&[String]>, format: Format) -> Result<String, Failure> {
    let p = parse_poset(&read(file)?).map_err(|e| in_file(file, e))?;
    let ivs = match interval {
        Some([lo, hi]) => {
            let find = |label: &str| {
                p.index_of(label)
                    .ok_or_else(|| Failure::input(format!("unknown element {label}")))
            };
            let (a, b) = (find(lo)?, find(hi)?);
            let iv = p
                .interval(a, b)
                .ok_or_else(|| Failure::input(format!("{lo} is not below {hi}")))?;
            vec![iv]
        }
        _ => p.intervals(),
    };
    let mu = poset_moebius(&interval_coalgebra(p.clone()));
    let mut table = Table::new(&["lo", "hi", "mu"]);
    for iv in ivs {
        let v = mu.eval(&iv).map_err(|e| Failure::at(label(&p, iv), e))?;
        table.push(vec![
            p.label(iv.lo).into(),
            p.label(iv.hi).into(),
            v.to_string(),
        ]);
    }
    Ok(table.render(format))
}

fn label(p: &Poset, iv: Interval) -> String {
    format!("[{},{}]", p.label(iv.lo), p.label(iv.hi))
}

fn dirichlet(n: u64, check: bool, format: Format) -> Result<String, Failure> {
    if n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let bound = usize::try_from(n).map_err(|_| Failure::input("--n is too large"))?;
    let coalg = divisibility_coalgebra(n);
    let mu_map = moebius_invert_recursive(&zeta(coalg, Arc::new(Rationals)));
    let mu = ArithFn::from_map(&mu_map, bound)?;
    let phi = dirichlet_convolve(&ArithFn::identity(bound), &mu)?;
    let mut table = Table::new(&["n", "mu", "phi"]);
    table.right[0] = true;
    table.prefixes = vec!["", "mu=", "phi="];
    for (k, (m, f)) in mu.values().iter().zip(phi.values()).enumerate() {
        table.push(vec![(k + 1).to_string(), m.to_string(), f.to_string()]);
    }
    if check {
        let unit = dirichlet_convolve(&mu, &ArithFn::zeta(bound))?;
        let expected = ArithFn::unit(bound);
        if let Some(k) = (1..=n).find(|&k| unit.get(k) != expected.get(k)) {
            return Err(Failure {
                code: EXIT_POSTCONDITION,
                message: format!("(mu * zeta)({k}) = {}", unit.get(k).expect("in range")),
            });
        }
        table
            .footer
            .push(format!("check: mu * zeta = e for n <= {n}"));
    }
    Ok(table.render(format))
}

/// Rows `key, degree, ψ(key)` for every basis key up to `max_degree`.
fn inverse_table<C: Coalgebra>(
    phi: &LinMap<C, Rationals>,
    evenodd: bool,
    max_degree: usize,
    show: impl Fn(&C::Key) -> String,
) -> Result<Table, Failure> {
    let coalg = phi.coalgebra().clone();
    let keys = coalg
        .basis_up_to(max_degree)
        .ok_or_else(|| Failure::input("coalgebra has no enumerable basis"))?;
    let psi = if evenodd {
        moebius_invert_evenodd(phi)
    } else {
        moebius_invert_recursive(phi)
    };
    let mut table = Table::new(&["key", "degree", "psi"]);
    for k in &keys {
        let v = psi.eval(k).map_err(|e| Failure::at(show(k), e))?;
        table.push(vec![show(k), coalg.degree(k).to_string(), v.to_string()]);
    }
    Ok(table)
}

/// `key : rational` lines; `#` starts a comment.
fn read_values<K>(
    path: &Path,
    parse_key: impl Fn(&str) -> Result<K, String>,
) -> Result<Vec<(K, Rational)>, Failure> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Failure::input(format!("{}:{}: {msg}", path.display(), i + 1));
        let (k, v) = line
            .rsplit_once(':')
            .ok_or_else(|| at("expected 'key : value'".into()))?;
        let key = parse_key(k.trim()).map_err(at)?;
        let value: Rational = v
            .trim()
            .parse()
            .map_err(|_| at(format!("invalid rational {:?}", v.trim())))?;
        out.push((key, value));
    }
    Ok(out)
}

/// `φ` equal to the listed values and 1 elsewhere.
fn listed_map<C: Coalgebra>(
    coalg: Arc<C>,
    values: Vec<(C::Key, Rational)>,
) -> LinMap<C, Rationals> {
    let values: std::collections::HashMap<_, _> = values.into_iter().collect();
    LinMap::from_fn(coalg, Arc::new(Rationals), move |k| {
        Ok(values
            .get(k)
            .cloned()
            .unwrap_or_else(|| Rational::from_integer(1.into())))
    })
}

fn build_phi<C: Coalgebra>(
    coalg: Arc<C>,
    phi: &PhiChoice,
    parse_key: impl Fn(&str) -> Result<C::Key, String>,
) -> Result<LinMap<C, Rationals>, Failure> {
    Ok(match phi {
        PhiChoice::Zeta => zeta(coalg, Arc::new(Rationals)),
        PhiChoice::File(path) => listed_map(coalg, read_values(path, parse_key)?),
    })
}

fn parse_int(s: &str) -> Result<u64, String> {
    s.parse().map_err(|_| format!("invalid key {s:?}"))
}

fn abstract_inverse(
    coalgebra: &CoalgebraChoice,
    phi: &PhiChoice,
    evenodd: bool,
    max_degree: usize,
    n: u64,
    format: Format,
) -> Result<String, Failure> {
    let table = match coalgebra {
        CoalgebraChoice::Nat => {
            let phi = build_phi(Arc::new(NatCoalgebra), phi, parse_int)?;
            inverse_table(&phi, evenodd, max_degree, u64::to_string)?
        }
        CoalgebraChoice::Divisors => {
            if n == 0 {
                return Err(Failure::input("--n must be at least 1"));
            }
            let phi = build_phi(divisibility_coalgebra(n), phi, parse_int)?;
            inverse_table(&phi, evenodd, max_degree, u64::to_string)?
        }
        CoalgebraChoice::Poset(file) => {
            let p = parse_poset(&read(file)?).map_err(|e| in_file(file, e))?;
            let coalg = interval_coalgebra(p.clone());
            let q = p.clone();
            let parse_key = move |s: &str| {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| format!("expected [lo,hi], got {s:?}"))?;
                let (lo, hi) = inner
                    .split_once(',')
                    .ok_or_else(|| format!("expected [lo,hi], got {s:?}"))?;
                let find = |l: &str| {
                    q.index_of(l.trim())
                        .ok_or_else(|| format!("unknown element {l}"))
                };
                q.interval(find(lo)?, find(hi)?)
                    .ok_or_else(|| format!("{s} is not an interval"))
            };
            let phi = build_phi(coalg, phi, parse_key)?;
            inverse_table(&phi, evenodd, max_degree, |iv| label(&p, *iv))?
        }
        CoalgebraChoice::Forest => {
            let b = forest_bialgebra(max_degree);
            let phi = match phi {
                PhiChoice::Zeta => zeta(b.clone(), Arc::new(Rationals)),
                PhiChoice::File(path) => {
                    let trees = read_values(path, |s| {
                        let f = parse_forest(s).map_err(|e| e.to_string())?;
                        match f.trees() {
                            [t] => Ok(t.clone()),
                            _ => Err(format!("expected a single tree, got {s:?}")),
                        }
                    })?;
                    let trees: std::collections::HashMap<_, _> = trees.into_iter().collect();
                    LinMap::from_fn(b.clone(), Arc::new(Rationals), move |f: &Forest| {
                        let mut acc = Rational::from_integer(1.into());
                        for t in f.trees() {
                            if let Some(v) = trees.get(t) {
                                acc *= v;
                            }
                        }
                        Ok(acc)
                    })
                }
            };
            inverse_table(&phi, evenodd, max_degree, Forest::to_string)?
        }
    };
    Ok(table.render(format))
}

fn antipode_table(max_degree: usize, format: Format) -> Result<String, Failure> {
    let b = forest_bialgebra(max_degree);
    let s = antipode(b.clone());
    let mut table = Table::new(&["forest", "S"]);
    for f in b.basis_up_to(max_degree).expect("forests are enumerable") {
        let v = s.eval(&f).map_err(|e| Failure::at(&f, e))?;
        table.push(vec![f.to_string(), v.to_string()]);
    }
    Ok(table.render(format))
}

fn bphz(path: &Path, max_degree: usize, atkinson: bool, format: Format) -> Result<String, Failure> {
    let assign = CharacterAssignment::parse(&read(path)?).map_err(|e| in_file(path, e))?;
    let b = forest_bialgebra(max_degree);
    let phi = toy_character(&b, assign, max_degree)?;
    let method = if atkinson {
        CountertermMethod::Atkinson
    } else {
        CountertermMethod::Bogoliubov
    };
    let r: Operator<LaurentRing> = Arc::new(PolePart);
    let pair = birkhoff(phi.map(), &r, method)?;
    let mut table = Table::new(&["forest", "phi", "phi_minus", "phi_plus", "value"]);
    for f in b.basis_up_to(max_degree).expect("forests are enumerable") {
        let at = |e| Failure::at(&f, e);
        let value = phi.eval(&f).map_err(at)?;
        let minus = pair.minus.eval(&f).map_err(at)?;
        let plus = pair.plus.eval(&f).map_err(at)?;
        let finite = plus
            .eval_at_zero()
            .map_err(|e| Failure::at(format!("phi_plus({f}) = {plus}"), e))?;
        table.push(vec![
            f.to_string(),
            value.to_string(),
            minus.to_string(),
            plus.to_string(),
            finite.to_string(),
        ]);
    }
    Ok(table.render(format))
}
