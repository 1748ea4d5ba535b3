//! The `dualcong` command line.
//!
//! Exit codes: `0` when every checked record passes, `1` when at least one
//! counterexample (or oracle disagreement) is found, `2` on usage or
//! parameter errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::modring::{parse_rational, BinomialTables, ExactRational, Modulus};
use crate::oracle;
use crate::sequences::SequenceSpec;
use crate::statement::{Params, Statement};
use crate::verify::{self, run_sweep, Summary, SweepPlan, VerificationRecord, XGrid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Primes up to this bound get the oracle cross-check in the smoke suite.
pub const ORACLE_P_MAX: u64 = 47;

fn rational_arg(s: &str) -> std::result::Result<ExactRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn rational_list(s: &str) -> std::result::Result<Vec<ExactRational>, String> {
    s.split(',').map(rational_arg).collect()
}

fn modulus_arg(s: &str) -> std::result::Result<Modulus, String> {
    s.parse::<Modulus>().map_err(|e| e.to_string())
}

fn statement_list(s: &str) -> std::result::Result<Vec<Statement>, String> {
    if s.trim() == "all" {
        return Ok(Statement::ALL.to_vec());
    }
    s.split(',').map(|id| id.parse::<Statement>().map_err(|e| e.to_string())).collect()
}

fn prime_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let bad = || format!("malformed prime range `{s}` (expected A..B)");
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    Ok((a, b))
}

#[derive(Debug, Parser)]
#[command(name = "dualcong", version, about = "Dual-sequence congruence evaluator and verifier")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Upper cap on every prime range.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_P_MAX, value_parser = clap::value_parser!(u64).range(3..))]
    pub p_max: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EvalKind {
    #[value(name = "D")]
    D,
    #[value(name = "S")]
    S,
    #[value(name = "J2")]
    J2,
    #[value(name = "catalan-inner")]
    CatalanInner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteLevel {
    Smoke,
    Full,
}

#[derive(Debug, Args)]
pub struct ParamFlags {
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub x: Option<ExactRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub y: Option<ExactRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub x1: Option<ExactRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub y1: Option<ExactRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub x2: Option<ExactRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub y2: Option<ExactRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub a: Option<ExactRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub b: Option<ExactRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    pub m: Option<ExactRational>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one sequence term in Z/p^e.
    Eval {
        #[arg(value_enum)]
        kind: EvalKind,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        x: Option<ExactRational>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        y: Option<ExactRational>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        a: Option<ExactRational>,
        /// Modulus `p` or `p^e`.
        #[arg(long = "mod", value_parser = modulus_arg)]
        modulus: Modulus,
    },
    /// Check one instance of a statement.
    Check {
        /// eq1.1 .. eq1.8, eq2.3, cor2.4, cor2.5, lemma3.1, kw-p3
        statement: String,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Check every instance over a prime range and parameter grids.
    Sweep {
        /// Comma-separated statement ids, or `all`.
        #[arg(long)]
        statements: String,
        /// Inclusive prime range `A..B`.
        #[arg(long, value_parser = prime_range)]
        primes: (u64, u64),
        /// Explicit x values (replaces the residue grid).
        #[arg(long, allow_hyphen_values = true)]
        x_grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y_grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a_grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b_grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        m_grid: Option<String>,
        /// Leave out -1/2, -1/3, -2/3, -1/4, -3/4, -1/6 from the x grid.
        #[arg(long)]
        no_specials: bool,
        /// Use every residue as x for primes up to this bound; sample above it.
        #[arg(long, default_value_t = 47)]
        full_residues_up_to: u64,
        #[arg(long, default_value_t = 60)]
        telescope_max_n: usize,
    },
    /// Run every statement over its default grid.
    Suite {
        #[arg(long, value_enum, default_value_t = SuiteLevel::Smoke)]
        level: SuiteLevel,
    },
    /// Check the finite telescoping identity and its certificate.
    Telescope {
        #[arg(long, default_value_t = 60)]
        max_n: usize,
    },
}

impl ParamFlags {
    fn into_params(self, statement: Statement) -> Result<Params> {
        let need = |name: &str, v: Option<ExactRational>| v.ok_or_else(|| Error::MissingParameter(name.into()));
        Ok(match statement {
            Statement::DComplement | Statement::SSquare => {
                Params::new().with("x", need("x", self.x)?).with("y", need("y", self.y)?)
            }
            Statement::DProduct | Statement::SProduct => Params::new()
                .with("x1", need("x1", self.x1)?)
                .with("y1", need("y1", self.y1)?)
                .with("x2", need("x2", self.x2)?)
                .with("y2", need("y2", self.y2)?),
            Statement::CentralPairTwoMinusSix => Params::new()
                .with("a", crate::modring::integer(2))
                .with("b", crate::modring::integer(-6)),
            Statement::CatalanSquareTwo => Params::new().with("a", crate::modring::integer(2)),
            Statement::CatalanSquareMinusSix => Params::new().with("a", crate::modring::integer(-6)),
            Statement::CatalanSquare => Params::new().with("a", need("a", self.a)?),
            Statement::CentralPair | Statement::HalvesThirds | Statement::ThirdsQuarters => {
                Params::new().with("a", need("a", self.a)?).with("b", need("b", self.b)?)
            }
            Statement::CatalanSum => Params::new().with("m", need("m", self.m)?),
            Statement::J2SquareCube => Params::new(),
            Statement::Telescope => return Err(Error::UnknownTheorem("lemma2.2 (use `telescope`)".into())),
        })
    }
}

fn write_records(out: &mut dyn Write, format: OutputFormat, records: &[VerificationRecord]) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            for r in records {
                writeln!(out, "{}", r.to_json())?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(VerificationRecord::CSV_HEADER)?;
            for r in records {
                w.write_record(r.csv_row())?;
            }
            w.flush()?;
        }
        OutputFormat::Table => {
            writeln!(out, "{:<9} {:>4} {:>2} {:<40} {:>12} {:>12} {:<5} note", "statement", "p", "e", "params", "lhs", "rhs", "pass")?;
            for r in records {
                let [st, p, e, params, lhs, rhs, pass, note] = r.csv_row();
                writeln!(out, "{st:<9} {p:>4} {e:>2} {params:<40} {lhs:>12} {rhs:>12} {pass:<5} {note}")?;
            }
        }
    }
    Ok(())
}

fn summary_line(s: &Summary) -> String {
    format!(
        "records {} | checked {} | passed {} | failed {} | informational {} (mismatched {}) | skipped {}",
        s.total, s.checked, s.passed, s.failed, s.informational, s.informational_mismatches, s.skipped
    )
}

/// Runs every statement over its default grid, each up to its own prime ceiling.
pub fn suite_records(level: SuiteLevel, p_max: u64, jobs: usize) -> Vec<VerificationRecord> {
    let mut records = Vec::new();
    for st in Statement::ALL {
        let cap = match level {
            SuiteLevel::Smoke => st.suite_p_max().min(ORACLE_P_MAX),
            SuiteLevel::Full => st.suite_p_max(),
        };
        let mut plan = SweepPlan::new(vec![st], 3, cap.min(p_max));
        plan.jobs = jobs;
        records.extend(run_sweep(&plan).records);
    }
    records
}

enum Report {
    Value(String),
    Records {
        records: Vec<VerificationRecord>,
        extra: Vec<String>,
        oracle_failures: usize,
    },
}

fn execute(cfg: CliConfig) -> Result<Report> {
    let jobs = cfg.jobs as usize;
    match cfg.command {
        Command::Eval { kind, n, x, y, a, modulus } => {
            let need = |name: &str, v: Option<ExactRational>| v.ok_or_else(|| Error::MissingParameter(name.into()));
            let spec = match kind {
                EvalKind::D => SequenceSpec::D { x: need("x", x)?, y: need("y", y)? },
                EvalKind::S => SequenceSpec::S { x: need("x", x)?, y: need("y", y)? },
                EvalKind::J2 => SequenceSpec::J2,
                EvalKind::CatalanInner => SequenceSpec::CatalanInner { a: need("a", a)? },
            };
            let tables = BinomialTables::build(modulus);
            let value = spec.evaluate(n, &tables)?;
            Ok(Report::Value(match cfg.format {
                OutputFormat::Json => serde_json::json!({
                    "kind": format!("{kind:?}"),
                    "n": n,
                    "modulus": modulus.to_string(),
                    "value": value.value(),
                })
                .to_string(),
                _ => value.value().to_string(),
            }))
        }
        Command::Check { statement, p, params } => {
            let statement: Statement = statement.parse()?;
            let params = params.into_params(statement)?;
            let record = verify::check(statement, p, &params)?;
            Ok(Report::Records {
                records: vec![record],
                extra: Vec::new(),
                oracle_failures: 0,
            })
        }
        Command::Sweep {
            statements,
            primes,
            x_grid,
            y_grid,
            a_grid,
            b_grid,
            m_grid,
            no_specials,
            full_residues_up_to,
            telescope_max_n,
        } => {
            let mut statements = statement_list(&statements).map_err(|_| Error::UnknownTheorem(statements.clone()))?;
            let grid = |g: Option<String>| -> Result<Option<Vec<ExactRational>>> {
                g.map(|text| rational_list(&text).map_err(|_| Error::Parse { what: "rational list", text }))
                    .transpose()
            };
            let (x_grid, y_grid, a_grid, b_grid, m_grid) =
                (grid(x_grid)?, grid(y_grid)?, grid(a_grid)?, grid(b_grid)?, grid(m_grid)?);
            statements.sort();
            statements.dedup();
            let mut plan = SweepPlan::new(statements, primes.0, primes.1.min(cfg.p_max));
            plan.x_grid = match x_grid {
                Some(list) => XGrid::Explicit(list),
                None => XGrid::Residues {
                    full_up_to: full_residues_up_to,
                },
            };
            plan.include_rational_specials = !no_specials;
            plan.y_grid = y_grid;
            plan.a_grid = a_grid;
            plan.b_grid = b_grid;
            plan.m_grid = m_grid;
            plan.telescope_max_n = telescope_max_n;
            plan.jobs = jobs;
            Ok(Report::Records {
                records: run_sweep(&plan).records,
                extra: Vec::new(),
                oracle_failures: 0,
            })
        }
        Command::Suite { level } => {
            let records = suite_records(level, cfg.p_max, jobs);
            let mut extra = Vec::new();
            let mut oracle_failures = 0;
            if level == SuiteLevel::Smoke {
                let cc = oracle::cross_check(&records, ORACLE_P_MAX);
                oracle_failures = cc.mismatches.len();
                extra.push(format!("oracle: compared {} | mismatches {}", cc.compared, oracle_failures));
                for m in &cc.mismatches {
                    extra.push(format!(
                        "oracle mismatch: {} p={} {} fast={:?} oracle={:?} {}",
                        m.record.statement,
                        m.record.p,
                        m.record.params.to_compact(),
                        m.record.lhs,
                        m.oracle,
                        m.error.clone().unwrap_or_default()
                    ));
                }
            }
            Ok(Report::Records {
                records,
                extra,
                oracle_failures,
            })
        }
        Command::Telescope { max_n } => Ok(Report::Records {
            records: verify::check_lemma_telescope(max_n),
            extra: Vec::new(),
            oracle_failures: 0,
        }),
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = err.render().to_string();
            let _ = if err.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let format = cfg.format;
    let output = cfg.output.clone();
    let report = match execute(cfg) {
        Ok(r) => r,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            return EXIT_USAGE;
        }
    };

    let mut file;
    let out: &mut dyn Write = match &output {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = io::BufWriter::new(f);
                &mut file
            }
            Err(err) => {
                let _ = writeln!(stderr, "error: cannot write {}: {err}", path.display());
                return EXIT_USAGE;
            }
        },
        None => stdout,
    };

    let result = match report {
        Report::Value(v) => writeln!(out, "{v}").map(|_| EXIT_OK),
        Report::Records {
            records,
            extra,
            oracle_failures,
        } => {
            let summary = Summary::of(&records);
            let written = write_records(out, format, &records).and_then(|_| {
                let mut lines = vec![summary_line(&summary)];
                lines.extend(extra);
                for line in lines {
                    if format == OutputFormat::Table {
                        writeln!(out, "{line}")?;
                    } else {
                        writeln!(stderr, "{line}")?;
                    }
                }
                out.flush()
            });
            written.map(|_| exit_code(&summary, oracle_failures))
        }
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            EXIT_USAGE
        }
    }
}

fn exit_code(summary: &Summary, oracle_failures: usize) -> i32 {
    if summary.failed > 0 || oracle_failures > 0 {
        EXIT_COUNTEREXAMPLE
    } else {
        EXIT_OK
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["dualcong"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn prime_range_literal() {
        assert_eq!(prime_range("3..47").unwrap(), (3, 47));
        assert_eq!(prime_range("5..=7").unwrap(), (5, 7));
        assert!(prime_range("3-47").is_err());
    }

    #[test]
    fn statement_lists() {
        assert_eq!(statement_list("eq1.3,kw-p3").unwrap(), vec![Statement::DProduct, Statement::J2SquareCube]);
        assert_eq!(statement_list("all").unwrap().len(), Statement::ALL.len());
        assert!(statement_list("eq1.3,bogus").is_err());
    }

    #[test]
    fn eval_and_check_basics() {
        let (code, out, _) = run_capture(&["eval", "D", "--n", "0", "--x", "1/2", "--y", "7", "--mod", "11"]);
        assert_eq!((code, out.trim()), (0, "1"));
        let (code, out, _) = run_capture(&["check", "eq1.6", "--p", "5", "--a", "1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!((v["lhs"].as_u64(), v["rhs"].as_u64()), (Some(1), Some(1)));
        let (code, _, err) = run_capture(&["check", "eq1.3", "--p", "4", "--x1", "1", "--y1", "1", "--x2", "1", "--y2", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("not an odd prime"));
    }

    #[test]
    fn counterexamples_exit_one() {
        let mut record = crate::verify::check_thm_catalan(5, &crate::modring::integer(1)).unwrap();
        let clean = Summary::of(std::slice::from_ref(&record));
        assert_eq!(exit_code(&clean, 0), EXIT_OK);
        assert_eq!(exit_code(&clean, 1), EXIT_COUNTEREXAMPLE);
        record.pass = false;
        assert_eq!(exit_code(&Summary::of(&[record]), 0), EXIT_COUNTEREXAMPLE);
    }
}
