//! Command-line surface.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 parse error, 3 invalid
//! model, 4 unsupported model, 5 resource limit.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{best_partition, hypergraphical_view, lamination_bound, DEFAULT_MAX_USERS_FOR_SEARCH};
use crate::crosscheck::{cross_check, Check};
use crate::error::{Error, Result};
use crate::mcf::{gk_oracle, jgk, WitnessPayload};
use crate::partition::Partition;
use crate::random::random_source;
use crate::report::{
    BoundRow, BoundsSection, CheckRow, JgkSection, ModelSummary, OracleSection, Report,
    SimulationSection, VerifySection,
};
use crate::sim;
use crate::sources::{Limits, Source};
use crate::spec_file::{load_source, SourceSpecFile};

#[derive(Debug, Parser)]
#[command(name = "zerotalk", version, about = "Secret key capacity at zero discussion rate")]
pub struct Cli {
    /// Print the report as JSON instead of a text table.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gács–Körner common information and the maximum common function.
    Jgk { spec: PathBuf },
    /// Lamination upper bound for a partition of the users.
    Bound {
        spec: PathBuf,
        /// Blocks as 1-based ids, e.g. "1,2|3", or "singletons" (default).
        #[arg(long, conflicts_with = "search")]
        partition: Option<String>,
        /// Search all partitions for the smallest alpha.
        #[arg(long)]
        search: bool,
        /// Public discussion rate R at which to evaluate the bound.
        #[arg(long, default_value_t = 0.0)]
        rate: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_USERS_FOR_SEARCH)]
        max_users: usize,
    },
    /// Brute-force common information over the enumerated joint support.
    Oracle { spec: PathBuf },
    /// Rewrite a two-user finite linear source as a hypergraphical one.
    Convert {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Hypergraphical)]
        to: Target,
        /// Write the converted spec here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check closed forms, oracle and bounds.
    Verify {
        #[arg(required_unless_present = "random")]
        spec: Option<PathBuf>,
        /// Check this many seeded random instances instead of a spec file.
        #[arg(long, conflicts_with = "spec")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Simulate key agreement without public discussion.
    Simulate {
        spec: PathBuf,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Hypergraphical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundMode {
    Partition(Option<String>),
    Search { max_users: usize },
}

pub fn cmd_jgk(s: &Source, limits: &Limits) -> Result<Report> {
    let mut r = Report::new("jgk", Some(ModelSummary::of(s)));
    r.jgk = Some(JgkSection::of(&jgk(s, limits)?));
    Ok(r)
}

pub fn cmd_oracle(s: &Source, limits: &Limits) -> Result<Report> {
    let joint = s.expand(limits)?;
    let w = gk_oracle(&joint);
    let WitnessPayload::Labeling(l) = &w.payload else { unreachable!("oracle always labels") };
    let mut r = Report::new("oracle", Some(ModelSummary::of(s)));
    r.oracle = Some(OracleSection {
        bits: w.entropy_bits.into(),
        components: l.component_count(),
        support: l.labels.len(),
    });
    Ok(r)
}

pub fn cmd_bound(s: &Source, mode: &BoundMode, rate: f64) -> Result<Report> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::Model(format!("rate must be a finite nonnegative number, got {rate}")));
    }
    let (h, converted) = hypergraphical_view(s)?;
    let hs: Source = h.clone().into();
    let (mode_name, bound) = match mode {
        BoundMode::Partition(spec) => {
            let p = Partition::parse(h.user_count(), spec.as_deref().unwrap_or("singletons"))?;
            ("partition", lamination_bound(&h, &p)?)
        }
        BoundMode::Search { max_users } => ("search", best_partition(&h, *max_users)?.1),
    };
    let mut summary = ModelSummary::of(&hs);
    summary.converted_from = converted.then(|| s.model_name().to_string());
    let mut r = Report::new("bound", Some(summary));
    r.jgk = Some(JgkSection::of(&jgk(&hs, &Limits::default())?));
    r.bounds = Some(BoundsSection {
        mode: mode_name.into(),
        rate: rate.into(),
        h_g_bits: bound.h_g_bits.into(),
        rows: vec![BoundRow::of(&bound, rate)],
    });
    Ok(r)
}

pub fn cmd_convert(s: &Source, to: Target) -> Result<SourceSpecFile> {
    match (s, to) {
        (Source::FiniteLinear(f), Target::Hypergraphical) => {
            Ok(SourceSpecFile::from_source(&f.to_hypergraphical()?.into()))
        }
        (other, _) => Err(Error::UnsupportedModel(format!(
            "conversion needs a two-user finite linear source, got {}",
            other.model_name()
        ))),
    }
}

fn check_row(instance: Option<String>, c: Check) -> CheckRow {
    CheckRow {
        instance,
        name: c.name.to_string(),
        expected: c.expected.map(Into::into),
        actual: c.actual.map(Into::into),
        pass: c.pass,
        note: c.note,
    }
}

pub fn cmd_verify(s: &Source, limits: &Limits) -> Result<Report> {
    let checks = cross_check(s, limits)?;
    let pass = checks.iter().all(|c| c.pass);
    let mut r = Report::new("verify", Some(ModelSummary::of(s)));
    r.verification = Some(VerifySection {
        pass,
        instances: 1,
        instances_passed: usize::from(pass),
        checks: checks.into_iter().map(|c| check_row(None, c)).collect(),
    });
    Ok(r)
}

pub fn cmd_verify_random(count: usize, seed: u64, limits: &Limits) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut passed = 0;
    for i in 0..count {
        let s = random_source(&mut rng, i);
        let checks = cross_check(&s, limits)?;
        if checks.iter().all(|c| c.pass) {
            passed += 1;
        }
        let label = format!("#{} {}", i + 1, s.model_name());
        rows.extend(checks.into_iter().map(|c| check_row(Some(label.clone()), c)));
    }
    let mut r = Report::new("verify", None);
    r.verification = Some(VerifySection {
        pass: passed == count,
        instances: count,
        instances_passed: passed,
        checks: rows,
    });
    Ok(r)
}

pub fn cmd_simulate(s: &Source, n: usize, seed: u64, limits: &Limits) -> Result<Report> {
    let run = sim::run(s, n, seed, limits)?;
    let mut r = Report::new("simulate", Some(ModelSummary::of(s)));
    r.jgk = Some(JgkSection::of(&jgk(s, limits)?));
    r.simulation = Some(SimulationSection::of(&run));
    Ok(r)
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

fn render(report: &Report, json: bool) -> String {
    if json {
        let mut s = report.to_json();
        s.push('\n');
        s
    } else {
        report.to_text()
    }
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let limits = Limits::from_env()?;
    let load = |p: &Path| load_source(p);
    let done = |r: Report, exit_code: i32| Outcome { stdout: render(&r, cli.json), exit_code };
    Ok(match &cli.command {
        Command::Jgk { spec } => done(cmd_jgk(&load(spec)?, &limits)?, 0),
        Command::Oracle { spec } => done(cmd_oracle(&load(spec)?, &limits)?, 0),
        Command::Bound { spec, partition, search, rate, max_users } => {
            let mode = if *search {
                BoundMode::Search { max_users: *max_users }
            } else {
                BoundMode::Partition(partition.clone())
            };
            done(cmd_bound(&load(spec)?, &mode, *rate)?, 0)
        }
        Command::Convert { spec, to, out } => {
            let mut text = cmd_convert(&load(spec)?, *to)?.to_json();
            text.push('\n');
            match out {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| {
                        Error::Model(format!("cannot write {}: {e}", path.display()))
                    })?;
                    Outcome { stdout: String::new(), exit_code: 0 }
                }
                None => Outcome { stdout: text, exit_code: 0 },
            }
        }
        Command::Verify { spec, random, seed } => {
            let r = match (spec, random) {
                (_, Some(n)) => cmd_verify_random(*n, *seed, &limits)?,
                (Some(p), None) => cmd_verify(&load(p)?, &limits)?,
                (None, None) => return Err(Error::Parse("verify needs a spec file or --random".into())),
            };
            let pass = r.verification.as_ref().is_some_and(|v| v.pass);
            done(r, if pass { 0 } else { 1 })
        }
        Command::Simulate { spec, n, seed } => done(cmd_simulate(&load(spec)?, *n, *seed, &limits)?, 0),
    })
}

/// Parses `args`, runs the command and returns what the process should
/// print and exit with. Errors go to the returned stderr text.
pub fn run_with_args<I, T>(args: I) -> (Outcome, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (Outcome { stdout: text, exit_code: 0 }, String::new())
            } else {
                (Outcome { stdout: String::new(), exit_code: code }, text)
            };
        }
    };
    match execute(&cli) {
        Ok(o) => (o, String::new()),
        Err(e) => (Outcome { stdout: String::new(), exit_code: e.exit_code() }, format!("error: {e}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::examples::*;

    #[test]
    fn bound_rejects_multi_user_linear() {
        let err = cmd_bound(&xor_triangle().into(), &BoundMode::Partition(None), 0.0).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn bound_converts_two_user_linear() {
        let r = cmd_bound(&two_user_linear().into(), &BoundMode::Partition(None), 0.0).unwrap();
        assert_eq!(r.model.unwrap().converted_from.as_deref(), Some("finite_linear"));
        let row = &r.bounds.unwrap().rows[0];
        assert_eq!(row.alpha, "0");
        assert_eq!(row.bound_at_zero.map(|b| b.to_string()).as_deref(), Some("1.000000"));
    }

    #[test]
    fn negative_rate_is_rejected() {
        let err = cmd_bound(&three_user_hypergraph().into(), &BoundMode::Partition(None), -1.0);
        assert_eq!(err.unwrap_err().exit_code(), 3);
    }

    #[test]
    fn convert_requires_two_user_linear() {
        assert_eq!(cmd_convert(&xor_triangle().into(), Target::Hypergraphical).unwrap_err().exit_code(), 4);
        assert_eq!(
            cmd_convert(&three_user_hypergraph().into(), Target::Hypergraphical).unwrap_err().exit_code(),
            4
        );
    }

    #[test]
    fn usage_errors_exit_with_parse_code() {
        let (o, err) = run_with_args(["zerotalk", "bound"]);
        assert_eq!(o.exit_code, 2);
        assert!(!err.is_empty());
        let (o, _) = run_with_args(["zerotalk", "jgk", "/nonexistent/spec.json"]);
        assert_eq!(o.exit_code, 2);
    }

    #[test]
    fn random_verify_passes() {
        let r = cmd_verify_random(20, 3, &Limits::default()).unwrap();
        let v = r.verification.unwrap();
        assert!(v.pass, "{:#?}", v.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        assert_eq!(v.instances_passed, 20);
    }
}
