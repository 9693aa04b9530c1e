//! The `sl2qp` command line. Every verb prints one line of compact JSON.
//!
//! Exit codes: 0 on success, 1 on usage or domain errors (printed as
//! `{"error": ...}`), 2 when a mathematical statement the tool checks is
//! contradicted by some input.

use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan::{self, Conjugator};
use crate::error::{Error, Result};
use crate::generosity::{
    cover_witness, escape_witness_general, escape_witness_paper, genericity_stats, SamplerConfig,
};
use crate::padic::{parse_rational, square_class, PadicCtx, Prime};
use crate::sl2core::{Mat2, SL2Mat};
use crate::verify::{run_verify, Falsification, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FALSIFIED: i32 = 2;

const DEFAULT_VERIFY_PRIMES: &str = "2,3,5,7,13";

#[derive(Debug, Parser)]
#[command(
    name = "sl2qp",
    version,
    about = "Cartan classes and genericity witnesses in SL2(Q_p)"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// The prime p; `verify` accepts a comma separated list.
    #[arg(long, global = true)]
    prime: Option<String>,
    /// p-adic digits carried by approximate square roots.
    #[arg(long, global = true, default_value_t = crate::padic::DEFAULT_PRECISION)]
    precision: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append falsification events here (one JSON object per line) instead
    /// of standard error.
    #[arg(long, global = true)]
    log: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conjugacy class of an SL2 element.
    Classify {
        #[arg(long)]
        matrix: String,
        /// For nonsplit elements, also decide whether they are
        /// SL2-conjugate into the standard Qdelta.
        #[arg(long)]
        refine: bool,
    },
    /// Square class of a nonzero rational.
    SquareClass {
        #[arg(long, visible_alias = "value", allow_hyphen_values = true)]
        delta: String,
    },
    /// Conjugate a split element to a diagonal one.
    Diagonalize {
        #[arg(long)]
        matrix: String,
    },
    /// Conjugate a nonsplit element into the standard Qdelta.
    QdeltaForm {
        #[arg(long)]
        matrix: String,
    },
    /// Conjugate a unipotent element into U.
    UnipotentForm {
        #[arg(long)]
        matrix: String,
    },
    /// Which of the four covering translates of W contains the matrix.
    CoverWitness {
        #[arg(long)]
        matrix: String,
    },
    /// A matrix outside every translate of W' in the family.
    EscapeWitness {
        /// JSON list of matrices; the string "omega" stands for [[0,1],[-1,0]].
        #[arg(long)]
        family: String,
        /// Use the diagonal witness, which fails on some families.
        #[arg(long)]
        diagonal: bool,
    },
    /// Run an invariant suite: partition, cover, escape, w-orbit,
    /// centralizer, omega or all.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Genericity statistics of a random sample.
    Sample {
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
}

/// Parses `[["a11","a12"],["a21","a22"]]` with rational text entries.
pub fn parse_matrix(text: &str) -> Result<Mat2> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    matrix_from_json(&v)
}

fn matrix_from_json(v: &Value) -> Result<Mat2> {
    let shape = || Error::Parse("expected [[a11, a12], [a21, a22]] with string entries".into());
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(shape)?;
    let mut entries = Vec::with_capacity(4);
    for row in rows {
        let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(shape)?;
        for x in row {
            entries.push(parse_rational(x.as_str().ok_or_else(shape)?)?);
        }
    }
    let [a, b, c, d]: [_; 4] = entries.try_into().expect("four entries");
    Ok(Mat2::new(a, b, c, d))
}

/// Parses a matrix and requires determinant 1.
pub fn parse_sl2(text: &str) -> Result<SL2Mat> {
    SL2Mat::new(parse_matrix(text)?)
}

/// Puts quotes around bare `ω` / `omega` outside strings, so `[ω, ...]`
/// parses as JSON.
fn quote_bare_names(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 8);
    let mut in_string = false;
    let mut escaped = false;
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if !in_string {
            if let Some(name) = ["ω", "omega"].into_iter().find(|n| rest.starts_with(n)) {
                out.push('"');
                out.push_str(name);
                out.push('"');
                rest = &rest[name.len()..];
                continue;
            }
        }
        if in_string && !escaped && c == '\\' {
            escaped = true;
        } else {
            if c == '"' && !escaped {
                in_string = !in_string;
            }
            escaped = false;
        }
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}

pub fn parse_family(text: &str) -> Result<Vec<SL2Mat>> {
    let v: Value =
        serde_json::from_str(&quote_bare_names(text)).map_err(|e| Error::Parse(e.to_string()))?;
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected a JSON list of matrices".into()))?;
    items
        .iter()
        .map(|m| match m.as_str() {
            Some("omega") | Some("ω") => Ok(SL2Mat::omega()),
            Some(other) => Err(Error::Parse(format!("unknown matrix name `{other}`"))),
            None => SL2Mat::new(matrix_from_json(m)?),
        })
        .collect()
}

fn parse_primes(text: &str) -> Result<Vec<Prime>> {
    text.split(',').map(|s| s.trim().parse()).collect()
}

enum Outcome {
    Ok(Value),
    Falsified(Value, Vec<Falsification>),
}

fn conjugator_json(c: &Conjugator, a: &SL2Mat, p: &Prime) -> Result<Outcome> {
    let ok = c.roundtrip(a)?;
    let mut v = serde_json::to_value(c).expect("serializable");
    v["roundtrip"] = json!(ok);
    v["window"] = json!(c.window());
    if ok {
        Ok(Outcome::Ok(v))
    } else {
        let event = Falsification {
            suite: "conjugator".into(),
            p: p.value(),
            input: a.to_string(),
            reason: "P target P^-1 does not recover the input".into(),
        };
        Ok(Outcome::Falsified(v, vec![event]))
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable")
}

impl Cli {
    fn prime(&self) -> Result<Prime> {
        match &self.prime {
            Some(p) => p.parse(),
            None => Err(Error::Parse("--prime is required".into())),
        }
    }

    fn ctx(&self) -> Result<PadicCtx> {
        PadicCtx::new(self.prime()?, self.precision)
    }

    fn dispatch(&self) -> Result<Outcome> {
        match &self.command {
            Command::Classify { matrix, refine } => {
                let a = parse_sl2(matrix)?;
                let c = if *refine {
                    cartan::classify_refined(&a, &self.ctx()?)?
                } else {
                    cartan::classify(&a, &self.prime()?)?
                };
                Ok(Outcome::Ok(to_value(&c)))
            }
            Command::SquareClass { delta } => {
                let x = parse_rational(delta)?;
                Ok(Outcome::Ok(to_value(&square_class(&x, &self.prime()?)?)))
            }
            Command::Diagonalize { matrix } => {
                let a = parse_sl2(matrix)?;
                conjugator_json(&cartan::diagonalize(&a, &self.ctx()?)?, &a, &self.prime()?)
            }
            Command::QdeltaForm { matrix } => {
                let a = parse_sl2(matrix)?;
                conjugator_json(&cartan::qdelta_form(&a, &self.ctx()?)?, &a, &self.prime()?)
            }
            Command::UnipotentForm { matrix } => {
                let a = parse_sl2(matrix)?;
                conjugator_json(
                    &cartan::unipotent_form(&a, &self.prime()?)?,
                    &a,
                    &self.prime()?,
                )
            }
            Command::CoverWitness { matrix } => {
                let a = parse_sl2(matrix)?;
                let p = self.prime()?;
                match cover_witness(&a, &p) {
                    Ok(w) => Ok(Outcome::Ok(to_value(&w))),
                    Err(e @ Error::CoverageViolation { .. }) => {
                        let event = Falsification {
                            suite: "cover".into(),
                            p: p.value(),
                            input: a.to_string(),
                            reason: e.to_string(),
                        };
                        Ok(Outcome::Falsified(
                            json!({"error": e.to_string()}),
                            vec![event],
                        ))
                    }
                    Err(e) => Err(e),
                }
            }
            Command::EscapeWitness { family, diagonal } => {
                let fam = parse_family(family)?;
                let p = self.prime()?;
                let w = if *diagonal {
                    escape_witness_paper(&fam, &p)?
                } else {
                    escape_witness_general(&fam, &p)?
                };
                Ok(Outcome::Ok(to_value(&w)))
            }
            Command::Verify { suite, n } => {
                let suite: Suite = suite.parse()?;
                let primes = parse_primes(self.prime.as_deref().unwrap_or(DEFAULT_VERIFY_PRIMES))?;
                let report = run_verify(suite, &primes, *n, self.seed, self.precision)?;
                let v = to_value(&report);
                if report.falsifications.is_empty() {
                    Ok(Outcome::Ok(v))
                } else {
                    Ok(Outcome::Falsified(v, report.falsifications))
                }
            }
            Command::Sample { n } => {
                let r = genericity_stats(SamplerConfig::with_seed(self.seed), *n, &self.prime()?)?;
                Ok(Outcome::Ok(to_value(&r)))
            }
        }
    }

    fn emit(&self, v: &Value, stdout: &mut dyn Write) -> Result<()> {
        let line = format!("{v}\n");
        let io = |e: std::io::Error| Error::Io(e.to_string());
        match &self.out {
            Some(path) => std::fs::write(path, line).map_err(io),
            None => stdout.write_all(line.as_bytes()).map_err(io),
        }
    }

    fn log(&self, events: &[Falsification], stderr: &mut dyn Write) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(e.to_string());
        let mut text = String::new();
        for e in events {
            text.push_str(&serde_json::to_string(e).expect("serializable"));
            text.push('\n');
        }
        match &self.log {
            Some(path) => OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .and_then(|mut f| f.write_all(text.as_bytes()))
                .map_err(io),
            None => stderr.write_all(text.as_bytes()).map_err(io),
        }
    }
}

fn report_error(e: &Error, stdout: &mut dyn Write) -> i32 {
    let _ = writeln!(stdout, "{}", json!({ "error": e.to_string() }));
    EXIT_ERROR
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match cli.dispatch() {
        Ok(Outcome::Ok(v)) => match cli.emit(&v, stdout) {
            Ok(()) => EXIT_OK,
            Err(e) => report_error(&e, stdout),
        },
        Ok(Outcome::Falsified(v, events)) => {
            if let Err(e) = cli.emit(&v, stdout).and_then(|_| cli.log(&events, stderr)) {
                return report_error(&e, stdout);
            }
            EXIT_FALSIFIED
        }
        Err(e) => report_error(&e, stdout),
    }
}
