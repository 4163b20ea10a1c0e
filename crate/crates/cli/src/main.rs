//! `logsurf`: validate surfaces, run the log MMP, and query positivity.
//!
//! Exit codes: 0 success, 1 invariant violation or model error, 2 parse or
//! usage error, 3 mode-(B) abort.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use logsurf::files::{self, FileError};
use logsurf::mmp::{self, MmpMode, MmpOptions, MmpOutcome};
use logsurf::positivity::{self, ZariskiOutcome};
use logsurf::rational;
use logsurf::singularities::{self, DiscrepancyReport, ExceptionalCluster};
use logsurf::{birational, Citation, LogSurface, QVec};

#[derive(Parser)]
#[command(name = "logsurf", version, about = "Exact log minimal model program for surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every invariant of a surface file.
    Validate { path: PathBuf },
    /// Run the log MMP and write a JSON report.
    Mmp {
        path: PathBuf,
        /// Report destination; printed to stdout when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Only contract curves that are extremal among the declared curves.
        #[arg(long)]
        strict_extremal: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::A)]
        mode: ModeArg,
    },
    /// Answer a single positivity or singularity question.
    Query {
        #[arg(value_enum)]
        question: Question,
        path: PathBuf,
        /// A class `a,b,c` or, for `sing`, curve ids.
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Dual graph in Graphviz DOT format.
    Dot {
        path: PathBuf,
        ids: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Q-factorial throughout.
    A,
    /// Log canonical throughout.
    B,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Question {
    Nef,
    Ample,
    Big,
    Pseff,
    Eh,
    Zariski,
    Semiample,
    Kappa,
    Sing,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    lines: Vec<String>,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, lines: vec![msg.into()] }
    }

    fn model(msg: impl Into<String>) -> Self {
        Failure { code: 1, lines: vec![msg.into()] }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure { code: 2, lines: vec![format!("error: {e}")] }
    }
}

impl From<logsurf::Error> for Failure {
    fn from(e: logsurf::Error) -> Self {
        match e {
            logsurf::Error::InvalidSurface(v) => {
                Failure { code: 1, lines: v.iter().map(ToString::to_string).collect() }
            }
            other => Failure::model(format!("error: {other}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { path } => validate(&path),
        Command::Mmp { path, trace, strict_extremal, mode } => run_mmp(&path, trace.as_deref(), strict_extremal, mode),
        Command::Query { question, path, args } => query(question, &path, &args),
        Command::Dot { path, ids } => dot(&path, &ids),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            for l in &f.lines {
                eprintln!("{l}");
            }
            ExitCode::from(f.code)
        }
    }
}

fn is_cluster(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "cluster")
}

fn load_valid(path: &Path) -> Result<LogSurface, Failure> {
    let s = files::read_surface(path)?;
    s.ensure_valid()?;
    Ok(s)
}

fn validate(path: &Path) -> Result<u8, Failure> {
    let s = files::read_surface(path)?;
    let violations = s.validate();
    if violations.is_empty() {
        println!("ok: rank {}, {} curves", s.rank(), s.curves.len());
        return Ok(0);
    }
    for v in &violations {
        println!("{v}");
    }
    Ok(1)
}

fn run_mmp(path: &Path, trace: Option<&Path>, strict_extremal: bool, mode: ModeArg) -> Result<u8, Failure> {
    let s = load_valid(path)?;
    let mode = match mode {
        ModeArg::A => MmpMode::QFactorial,
        ModeArg::B => MmpMode::LogCanonical,
    };
    let run = mmp::run_mmp(&s, MmpOptions { mode, strict_extremal })?;
    let report = files::write_report(&run);
    match trace {
        Some(out) => std::fs::write(out, &report)
            .map_err(|e| Failure::usage(format!("error: {}: {e}", out.display())))?,
        None => print!("{report}"),
    }
    let say = |line: String| {
        if trace.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    for (k, st) in run.steps.iter().enumerate() {
        say(format!("step {}: contract {} [{}]", k + 1, st.curve, Citation::Thm1_2));
        say(format!("step {}: singularity {} [{}]", k + 1, st.report.class, Citation::Prop6_3));
    }
    let plural = if run.steps.len() == 1 { "" } else { "s" };
    say(format!(
        "outcome: {} after {} step{plural} [{}]",
        run.outcome.kind(),
        run.steps.len(),
        run.outcome.citation()
    ));
    match &run.outcome {
        MmpOutcome::MinimalModel { semiample, kappa, .. } => {
            say(format!("semiample: {} [{}]", semiample.status, semiample.citation));
            say(format!("kappa = {} [{}]", kappa.value, kappa.citation));
            Ok(0)
        }
        MmpOutcome::MoriFiberSpaceOverCurve { fiber, .. } => {
            say(format!("fiber: {fiber} [{}]", Citation::Thm1_2));
            Ok(0)
        }
        MmpOutcome::MoriFiberSpaceOverPoint { .. } => Ok(0),
        MmpOutcome::Aborted { curve, report, .. } => {
            say(format!("aborted: contracting {curve} gives a {} point [{}]", report.class, Citation::Prop6_3));
            Ok(3)
        }
    }
}

fn parse_class(s: &LogSurface, args: &[String]) -> Result<QVec, Failure> {
    let [text] = args else {
        return Err(Failure::usage("error: expected one class written as comma-separated rationals"));
    };
    let coords = text
        .split(',')
        .map(|t| rational::parse(t.trim()).ok_or_else(|| Failure::usage(format!("error: malformed rational {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let c = QVec::new(coords);
    if c.len() != s.rank() {
        return Err(Failure::usage(format!(
            "error: class has {} coordinates, surface has rank {}",
            c.len(),
            s.rank()
        )));
    }
    Ok(c)
}

fn q(x: &logsurf::Rational) -> String {
    rational::format(x)
}

fn query(question: Question, path: &Path, args: &[String]) -> Result<u8, Failure> {
    if question == Question::Sing {
        return sing(path, args);
    }
    let s = load_valid(path)?;
    let d = parse_class(&s, args)?;
    let tag = Citation::Thm1_2;
    let line = match question {
        Question::Nef => match s.curves.iter().find(|c| rational::is_negative(&s.pair(&d, &c.class).unwrap())) {
            None => format!("nef [{tag}]"),
            Some(c) => format!("not nef: {d}·{} = {} [{tag}]", c.id, q(&s.pair(&d, &c.class)?)),
        },
        Question::Ample => {
            let verdict = if s.is_ample(&d) { "ample" } else { "not ample" };
            format!("{verdict}: d² = {} [{tag}]", q(&s.pair(&d, &d)?))
        }
        Question::Big => {
            let verdict = if s.is_big(&d) { "big" } else { "not big" };
            format!("{verdict} [{tag}]")
        }
        Question::Pseff => {
            let verdict = if s.is_pseudo_effective(&d) { "pseudo-effective" } else { "not pseudo-effective" };
            format!("{verdict} [{tag}]")
        }
        Question::Eh => {
            let ids = s.exceptional_locus(&d)?;
            let list = if ids.is_empty() { "(empty)".to_string() } else { ids.join(" ") };
            format!("{list} [{}]", Citation::Thm2_1)
        }
        Question::Zariski => match positivity::zariski(&s, &d) {
            ZariskiOutcome::Decomposition(z) => {
                let n: Vec<String> = z.negative.iter().map(|(id, c)| format!("{}·{id}", q(c))).collect();
                let n = if n.is_empty() { "0".to_string() } else { n.join(" + ") };
                format!("P = {}, N = {n} [{tag}]", z.positive)
            }
            ZariskiOutcome::NotPseudoEffective(why) => format!("not pseudo-effective: {why} [{tag}]"),
        },
        Question::Semiample => {
            let v = positivity::semiample(&s, &d)?;
            let mut line = format!("{} [{}] ({})", v.status, v.citation, v.reason);
            if let Some(w) = &v.witness {
                line.push_str(&format!(
                    "; witness contracts {{{}}}, image {} is ample",
                    w.contracted.join(", "),
                    w.pushforward(&d)
                ));
            }
            line
        }
        Question::Kappa => {
            let k = positivity::kappa(&s, &d);
            format!("kappa = {}, {} [{}]", k.value, k.certificate, k.citation)
        }
        Question::Sing => unreachable!("handled above"),
    };
    println!("{line}");
    Ok(0)
}

fn sing_lines(report: &DiscrepancyReport) -> Vec<String> {
    let shapes: Vec<String> = report.shapes.iter().map(ToString::to_string).collect();
    let a: Vec<String> = report.values().map(q).collect();
    let dlt = if report.numerically_dlt_approx { "numerically-dlt(approx)" } else { "not numerically-dlt(approx)" };
    vec![
        format!("{} ({}), a = ({}), {dlt} [{}]", report.class, shapes.join(" + "), a.join(","), Citation::Prop6_3),
        format!(
            "rational: {}, q-factorial: {} [{}]",
            if report.rational_sing { "yes" } else { "no" },
            if report.q_factorial { "yes" } else { "no" },
            Citation::Thm6_4
        ),
    ]
}

fn sing(path: &Path, args: &[String]) -> Result<u8, Failure> {
    let (cluster, field): (ExceptionalCluster, _) = if is_cluster(path) {
        if !args.is_empty() {
            return Err(Failure::usage("error: a cluster file takes no curve ids"));
        }
        files::read_cluster(path)?
    } else {
        let s = load_valid(path)?;
        let ids: Vec<&str> = args.iter().map(String::as_str).collect();
        (birational::cluster_of(&s, &ids)?, s.field)
    };
    let report = singularities::classify(&cluster, &field)?;
    for l in sing_lines(&report) {
        println!("{l}");
    }
    Ok(0)
}

fn dot(path: &Path, ids: &[String]) -> Result<u8, Failure> {
    let text = if is_cluster(path) {
        files::cluster_dot(&files::read_cluster(path)?.0)
    } else {
        let s = load_valid(path)?;
        let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
        files::surface_dot(&s, &ids)?
    };
    print!("{text}");
    Ok(0)
}
