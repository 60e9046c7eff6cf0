//! `reciplab` command line: one subcommand per law, JSON reports on stdout.
//!
//! Exit codes: 0 when every report passed, 1 when a verification failed,
//! 2 for usage errors and violated preconditions.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rug::{Float, Rational};
use serde::Serialize;

use crate::acceptance::{self, DEFAULT_SEED, SELFTEST_BUDGET};
use crate::complex::{faithful_digits, ComplexP};
use crate::engine::{
    apostol_reciprocity, apostol_sum, cotangent_sum, fukuhara_instance, multiplicity_free_reciprocity, r2_identity,
    verify_identity, verify_laurent_reciprocity, verify_reciprocity_sum, zagier_reciprocity, SamplePolicy,
    VerificationReport,
};
use crate::error::{Error, Result};
use crate::exact_numbers::{parse_rational, Kind};
use crate::poles::{parse_list, Params};
use crate::report::{complex_strings, emit_report, to_json};
use crate::{DEFAULT_PRECISION, MIN_PRECISION};

#[derive(Debug, Parser)]
#[command(
    name = "reciplab",
    version,
    about = "Verify cot/csc product identities and Dedekind-type reciprocity laws"
)]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "RECIPLAB_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,

    /// Seed for sample points and parameter families.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Number of sample points for pointwise identities.
    #[arg(long, global = true, default_value_t = 20)]
    pub samples: usize,

    /// Pass when the relative error is at most 2^-E (default: precision / 2).
    #[arg(long, global = true)]
    pub tolerance_exponent: Option<u32>,

    /// Also write the JSON document to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Multipliers a_l, comma separated.
    #[arg(long)]
    pub a: String,
    /// Orders m_l (default all 1).
    #[arg(long)]
    pub m: Option<String>,
    /// Shifts w_l in [0, 1) as num/den (default all 0).
    #[arg(long)]
    pub w: Option<String>,
    /// Block sizes "j_I,j_II": the first j_I factors are cot type (default r,0).
    #[arg(long)]
    pub j: Option<String>,
}

impl ParamArgs {
    fn params(&self) -> Result<Params> {
        Params::parse(&self.a, self.m.as_deref(), self.w.as_deref(), self.j.as_deref())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Product of φ's against its pole expansion at sample points.
    VerifyIdentity(ParamArgs),
    /// Sum of the residue coefficients against its closed form (cot-type cases).
    Reciprocity(ParamArgs),
    /// Order-μ Taylor coefficient law at a rational center.
    Laurent {
        #[command(flatten)]
        params: ParamArgs,
        /// Center z0 in [0, 1) as num/den.
        #[arg(long)]
        z0: String,
        /// Order of the Taylor coefficient.
        #[arg(long, default_value_t = 0)]
        mu: u32,
    },
    /// Residue sum law through the explicit sum, for poles of multiplicity one.
    MultiplicityFree(ParamArgs),
    /// Zagier-type law for pairwise coprime a, m = 1, w = 0.
    Zagier {
        /// Multipliers a_l, comma separated.
        #[arg(long)]
        a: String,
        /// Block sizes "j_I,j_II" (default r,0).
        #[arg(long)]
        j: Option<String>,
    },
    /// s_{2k+1}(q;p) + s_{2k+1}(p;q) against its closed form.
    Apostol {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// One of the five cot/csc product formulas for coprime (p, q).
    Fukuhara {
        /// Formula 0 to 4 (1: q even, 2: q odd, 3: p + q even, 4: p + q odd).
        #[arg(long = "case", value_parser = clap::value_parser!(u8).range(0..=4))]
        case_id: u8,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// Evaluation point "re,im" (default: seeded samples).
        #[arg(long)]
        z: Option<String>,
    },
    /// Two-factor product-to-sum identity.
    R2 {
        /// "a1,a2", coprime.
        #[arg(long)]
        a: String,
        /// "w1,w2" as num/den (default 0,0).
        #[arg(long)]
        w: Option<String>,
        /// Kind of the first factor, I (cot) or II (csc).
        #[arg(long)]
        k1: Kind,
        /// Kind of the second factor.
        #[arg(long)]
        k2: Kind,
        /// Evaluation point "re,im" (default: seeded samples).
        #[arg(long)]
        z: Option<String>,
    },
    /// Evaluate s_N(q;p), or with --kinds the raw sum Σ φ_1(qμ/p) φ_N(μ/p).
    Sum {
        /// Derivative order N.
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        p: u32,
        /// "K1,K2" with K in {I, II}.
        #[arg(long)]
        kinds: Option<String>,
    },
    /// Run the full acceptance suite.
    Selftest,
}

/// Validated global settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub seed: u64,
    pub samples: usize,
    pub tolerance_exponent: u32,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self> {
        if cli.precision < MIN_PRECISION {
            return Err(Error::InvalidParams(format!(
                "precision {} is below the minimum {MIN_PRECISION}",
                cli.precision
            )));
        }
        let tolerance_exponent = cli.tolerance_exponent.unwrap_or(cli.precision / 2);
        if tolerance_exponent > cli.precision {
            return Err(Error::InvalidParams(format!(
                "tolerance exponent {tolerance_exponent} exceeds the precision {}",
                cli.precision
            )));
        }
        if cli.samples == 0 {
            return Err(Error::InvalidParams("need at least one sample".into()));
        }
        Ok(RunConfig {
            precision_bits: cli.precision,
            seed: cli.seed,
            samples: cli.samples,
            tolerance_exponent,
            output_path: cli.output.clone(),
        })
    }

    fn policy(&self) -> SamplePolicy {
        SamplePolicy::with_seed(self.seed, self.samples)
    }

    fn points(&self, z: Option<&str>) -> Result<Vec<ComplexP>> {
        match z {
            Some(s) => Ok(vec![parse_complex(s, self.precision_bits)?]),
            None => self.policy().points(self.precision_bits),
        }
    }
}

/// `"re,im"` with decimal or `num/den` parts.
pub fn parse_complex(s: &str, prec: u32) -> Result<ComplexP> {
    let bad = || Error::Parse {
        what: "complex number",
        input: s.to_string(),
    };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let part = |t: &str| -> Result<Float> {
        if t.contains('/') {
            return Ok(Float::with_val(prec, &parse_rational(t)?));
        }
        let parsed = Float::parse(t).map_err(|_| bad())?;
        Ok(Float::with_val(prec, parsed))
    };
    match parts.as_slice() {
        [re] => Ok(ComplexP::from_real(part(re)?)),
        [re, im] => Ok(ComplexP::from_parts(part(re)?, part(im)?)),
        _ => Err(bad()),
    }
}

fn parse_pair<T>(s: &str, what: &'static str, item: impl Fn(&str) -> Result<T>) -> Result<(T, T)> {
    let mut it = s.split(',').map(str::trim);
    match (it.next(), it.next(), it.next()) {
        (Some(x), Some(y), None) => Ok((item(x)?, item(y)?)),
        _ => Err(Error::Parse {
            what,
            input: s.to_string(),
        }),
    }
}

fn parse_j(j: Option<&str>, r: usize) -> Result<(usize, usize)> {
    match j {
        None => Ok((r, 0)),
        Some(s) => {
            let (x, y) = parse_pair(s, "j", |t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    what: "j",
                    input: s.to_string(),
                })
            })?;
            Ok((x, y))
        }
    }
}

#[derive(Serialize)]
struct SumDoc {
    law: &'static str,
    sum: String,
    n: u32,
    q: u32,
    p: u32,
    precision_bits: u32,
    value: [String; 2],
}

#[derive(Serialize)]
struct SelftestDoc {
    criterion: u8,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed_ms: u128,
}

/// What a subcommand produced: a report to judge, or a plain document.
enum Produced {
    Report(Box<VerificationReport>),
    Document(String, bool),
}

fn execute(command: &Command, cfg: &RunConfig) -> Result<Produced> {
    let prec = cfg.precision_bits;
    let rep = match command {
        Command::VerifyIdentity(args) => verify_identity(&args.params()?, &cfg.policy(), prec)?,
        Command::Reciprocity(args) => verify_reciprocity_sum(&args.params()?, prec)?,
        Command::Laurent { params, z0, mu } => {
            verify_laurent_reciprocity(&params.params()?, &parse_rational(z0)?, &[*mu], prec)?
        }
        Command::MultiplicityFree(args) => multiplicity_free_reciprocity(&args.params()?, prec)?,
        Command::Zagier { a, j } => {
            let a = parse_list(a, "a")?;
            let j = parse_j(j.as_deref(), a.len())?;
            zagier_reciprocity(&a, j, prec)?
        }
        Command::Apostol { k, p, q } => apostol_reciprocity(*k, *p, *q, prec)?,
        Command::Fukuhara { case_id, p, q, z } => {
            fukuhara_instance(*case_id, *p, *q, &cfg.points(z.as_deref())?, prec)?
        }
        Command::R2 { a, w, k1, k2, z } => {
            let a = parse_pair(a, "a", |t| {
                t.parse::<u32>().map_err(|_| Error::Parse {
                    what: "a",
                    input: t.to_string(),
                })
            })?;
            let w = match w {
                Some(s) => parse_pair(s, "w", parse_rational)?,
                None => (Rational::new(), Rational::new()),
            };
            r2_identity(a, (&w.0, &w.1), (*k1, *k2), &cfg.points(z.as_deref())?, prec)?
        }
        Command::Sum { n, q, p, kinds } => {
            let (name, value) = match kinds {
                None => ("apostol", apostol_sum(*n, *q, *p, prec)?),
                Some(s) => {
                    let kinds = parse_pair(s, "kinds", |t| t.parse::<Kind>())?;
                    ("raw", cotangent_sum(kinds, *n, *q, *p, prec)?)
                }
            };
            let doc = SumDoc {
                law: "sum",
                sum: name.to_string(),
                n: *n,
                q: *q,
                p: *p,
                precision_bits: prec,
                value: complex_strings(&value, faithful_digits(prec)),
            };
            return Ok(Produced::Document(to_json(&doc)?, true));
        }
        Command::Selftest => {
            let started = Instant::now();
            let mut docs = Vec::new();
            let mut all = true;
            for o in acceptance::run_all(cfg.seed) {
                println!("{}", o.line());
                all &= o.passed;
                docs.push(SelftestDoc {
                    criterion: o.id,
                    name: o.name,
                    passed: o.passed,
                    detail: o.detail,
                    elapsed_ms: o.elapsed.as_millis(),
                });
            }
            let in_time = started.elapsed() <= SELFTEST_BUDGET;
            println!(
                "selftest {} in {:.1} s (budget {} s)",
                if all && in_time { "PASS" } else { "FAIL" },
                started.elapsed().as_secs_f64(),
                SELFTEST_BUDGET.as_secs()
            );
            if let Some(path) = &cfg.output_path {
                std::fs::write(path, format!("{}\n", to_json(&docs)?))?;
            }
            return Ok(Produced::Document(String::new(), all && in_time));
        }
    };
    Ok(Produced::Report(Box::new(rep.with_tolerance(cfg.tolerance_exponent))))
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let produced = match execute(&cli.command, &cfg) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let (text, passed) = match produced {
        Produced::Report(rep) => match emit_report(&rep, cfg.output_path.as_deref()) {
            Ok(text) => (text, rep.passed),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        Produced::Document(text, passed) => {
            if !text.is_empty() {
                if let Some(path) = &cfg.output_path {
                    if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                        eprintln!("error: {e}");
                        return 2;
                    }
                }
            }
            (text, passed)
        }
    };
    if !text.is_empty() {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{text}");
    }
    if passed {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        let z = parse_complex("0.37,0.21", 64).unwrap();
        let (re, im) = z.to_f64_pair();
        assert!((re - 0.37).abs() < 1e-15 && (im - 0.21).abs() < 1e-15);
        let z = parse_complex("1/4, 1/2", 64).unwrap();
        assert_eq!(z.to_f64_pair(), (0.25, 0.5));
        assert!(parse_complex("a,b", 64).is_err());
        assert!(parse_complex("1,2,3", 64).is_err());
    }

    #[test]
    fn config_validation() {
        let cli = Cli::try_parse_from(["reciplab", "--precision", "40", "selftest"]).unwrap();
        assert!(RunConfig::from_cli(&cli).is_err());
        let cli = Cli::try_parse_from([
            "reciplab",
            "--precision",
            "64",
            "--tolerance-exponent",
            "65",
            "selftest",
        ])
        .unwrap();
        assert!(RunConfig::from_cli(&cli).is_err());
        let cli = Cli::try_parse_from(["reciplab", "--precision", "100", "selftest"]).unwrap();
        assert_eq!(RunConfig::from_cli(&cli).unwrap().tolerance_exponent, 50);
    }

    #[test]
    fn exit_codes() {
        let ok = ["reciplab", "apostol", "--k", "0", "--p", "2", "--q", "3"];
        assert_eq!(run(ok), 0);
        assert_eq!(run(["reciplab", "fukuhara", "--case", "1", "--p", "2", "--q", "3"]), 2);
        assert_eq!(run(["reciplab", "fukuhara", "--case", "7", "--p", "2", "--q", "3"]), 2);
        assert_eq!(run(["reciplab", "no-such-command"]), 2);
    }
}
