//! Command-line front end for `mackey-core`.

pub mod checks;
pub mod expr;
pub mod table;

use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use mackey_core::amodel::{is_isomorphic, isomorphism, RigidObject};
use mackey_core::burnside::{EvSeq, FiniteBurnsideElt};
use mackey_core::error::is_prime;
use mackey_core::homext::{adams_maps, ext1, hom_space};
use mackey_core::mackey::{mackey_components, td_split, TD_MAX_LEVEL};
use serde_json::{json, Value};
use thiserror::Error;

pub use expr::{parse, ObjectExpr, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compute(#[from] mackey_core::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "padic-mackey", version, about = "Computations in the algebraic model for rational Z_p-spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// The prime p.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest subgroup index for orbit-counting tables.
    #[arg(long, global = true, env = "PADIC_MACKEY_JMAX", default_value_t = 5)]
    pub jmax: u32,
    /// Largest subgroup index for Mackey values and Ext truncations.
    #[arg(long, global = true, env = "PADIC_MACKEY_KMAX", default_value_t = 4)]
    pub kmax: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shape of Hom(X, Y).
    Hom { x: String, y: String },
    /// Ext^1(X, Y) as the pair (W, V).
    Ext { x: String, y: String },
    /// Hom and Ext terms of the Adams sequence for degree-d maps X -> Y.
    Maps {
        x: String,
        y: String,
        #[arg(long, short, default_value_t = 0, allow_negative_numbers = true)]
        degree: i64,
    },
    /// The tensor product X * Y.
    Tensor { x: String, y: String },
    /// Whether X and Y are isomorphic.
    Iso { x: String, y: String },
    /// Mackey functor values of X at Z_p/p^k for k = 0..=kmax.
    Mackey { x: String },
    /// Orbit counts for maps between the orbits Z_p/p^n and Z_p/p^m.
    Tomdieck { n: u32, m: u32 },
    /// Marks and idempotents of the Burnside ring of Z/p^n.
    Burnside { n: u32 },
    /// The table of Hom between generators.
    Table {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
    /// Run the invariant suites.
    Check,
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn error(code: i32, stderr: String) -> Self {
        Outcome { code, stdout: String::new(), stderr }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::error(1, text) } else { Outcome::ok(text) };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Outcome::error(1, format!("error: {e}\n")),
    }
}

fn object(src: &str, p: u64) -> Result<RigidObject, CliError> {
    Ok(parse(src)?.eval_object(p)?)
}

fn render(json: bool, value: Value, text: String) -> Outcome {
    if json {
        Outcome::ok(format!("{value}\n"))
    } else {
        Outcome::ok(text)
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let p = cli.p;
    if !is_prime(p) {
        return Err(CliError::Usage(format!("--p {p} is not a prime")));
    }
    if cli.jmax > TD_MAX_LEVEL {
        return Err(CliError::Usage(format!("--jmax {} exceeds {TD_MAX_LEVEL}", cli.jmax)));
    }
    Ok(match &cli.command {
        Command::Hom { x, y } => {
            let h = hom_space(&object(x, p)?, &object(y, p)?)?;
            let text = format!(
                "stable: {}\ndev: {}\nfree: {}\n",
                h.stable_dim, h.dev_dims, h.free_dims
            );
            render(cli.json, serde_json::to_value(&h).unwrap(), text)
        }
        Command::Ext { x, y } => {
            let e = ext1(&object(x, p)?, &object(y, p)?)?;
            let text = format!("W_dim: {}\nV_dim: {}\nzero: {}\n", e.w_dim(), e.v_dim(), e.is_zero());
            render(cli.json, serde_json::to_value(&e).unwrap(), text)
        }
        Command::Maps { x, y, degree } => {
            let gx = parse(x)?.eval(p)?;
            let gy = parse(y)?.eval(p)?;
            let maps = adams_maps(&gx, &gy, *degree)?;
            let mut text = String::new();
            for t in &maps.hom {
                let h = &t.hom;
                let _ = writeln!(
                    text,
                    "Hom(X_{}, Y_{}): stable {} dev {} free {}",
                    t.source_degree, t.target_degree, h.stable_dim, h.dev_dims, h.free_dims
                );
            }
            for t in &maps.ext {
                let _ = writeln!(
                    text,
                    "Ext(X_{}, Y_{}): W_dim {} V_dim {}",
                    t.source_degree,
                    t.target_degree,
                    t.ext.w_dim(),
                    t.ext.v_dim()
                );
            }
            let _ = writeln!(text, "zero: {}", maps.is_zero());
            let mut value = serde_json::to_value(&maps).unwrap();
            value["zero"] = json!(maps.is_zero());
            render(cli.json, value, text)
        }
        Command::Tensor { x, y } => {
            let t = object(x, p)?.tensor(&object(y, p)?)?;
            render(cli.json, serde_json::to_value(&t).unwrap(), format!("{t}\n"))
        }
        Command::Iso { x, y } => {
            let (a, b) = (object(x, p)?, object(y, p)?);
            let witness = isomorphism(&a, &b)?;
            debug_assert_eq!(witness.is_some(), is_isomorphic(&a, &b)?);
            let value = json!({
                "isomorphic": witness.is_some(),
                "witness": witness.as_ref().map(|w| serde_json::to_value(w).unwrap()),
            });
            render(cli.json, value, format!("{}\n", witness.is_some()))
        }
        Command::Mackey { x } => {
            let m = object(x, p)?;
            let rows = (0..=cli.kmax).map(|k| mackey_components(&m, k)).collect::<Result<Vec<_>, _>>()?;
            let mut text = String::new();
            for r in &rows {
                let _ = writeln!(text, "k={}: inf {} components {}", r.k, r.inf_dim, r.component_dims);
            }
            render(cli.json, serde_json::to_value(&rows).unwrap(), text)
        }
        Command::Tomdieck { n, m } => {
            let t = td_split(p, *n, *m, cli.jmax.max(*n.max(m)))?;
            let mut text = String::new();
            for (i, d) in t.per_j_dims.iter().enumerate() {
                let _ = writeln!(text, "j={}: {}", t.n as usize + i, d);
            }
            render(cli.json, serde_json::to_value(&t).unwrap(), text)
        }
        Command::Burnside { n } => burnside(p, *n, cli.json)?,
        Command::Table { n, m } => table::run(p, *n, *m, cli.json)?,
        Command::Check => {
            let report = checks::run_all(p, cli.seed);
            let code = if report.iter().all(|s| s.failed == 0) { 0 } else { 2 };
            let mut text = String::new();
            for s in &report {
                let _ = writeln!(text, "{:<10} passed {:>4} failed {:>3}", s.name, s.passed, s.failed);
                for f in &s.failures {
                    let _ = writeln!(text, "  {f}");
                }
            }
            let value = serde_json::to_value(&report).unwrap();
            let mut out = render(cli.json, value, text);
            out.code = code;
            out
        }
    })
}

/// Marks of the orbits of `Z/p^n` and the idempotents `e_0..e_{n-1}`, each
/// with its orbit-basis expression and its image in `A(Z_p)`.
fn burnside(p: u64, n: u32, as_json: bool) -> Result<Outcome, CliError> {
    let mut marks = Vec::new();
    let mut text = String::new();
    let _ = writeln!(text, "marks of the orbits Z/{p}^{n} / p^a:");
    for a in 0..=n {
        let row: Vec<String> =
            FiniteBurnsideElt::orbit(p, n, a)?.marks().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(text, "  a={a}: {}", row.join(" "));
        marks.push(row);
    }
    let mut idempotents = Vec::new();
    for i in 0..n {
        let e = FiniteBurnsideElt::grothendieck_e(p, i)?;
        let coeffs: Vec<String> = e.coeffs().iter().map(|x| x.to_string()).collect();
        let seq = EvSeq::idempotent_e(p, i as usize)?;
        let _ = writeln!(text, "e_{i} = {} in orbit basis; sequence {seq}", coeffs.join(" "));
        idempotents.push(json!({"n": i, "orbit_coeffs": coeffs, "sequence": seq}));
    }
    let value = json!({"p": p, "n": n, "marks": marks, "idempotents": idempotents});
    Ok(render(as_json, value, text))
}
