//! Command-line front end for the `aggreason` engine.

pub mod problem;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use aggreason::connectives::classify;
use aggreason::fuzzy::{DiscreteFuzzySet, FuzzySetSpec};
use aggreason::implications::check_implication_properties;
use aggreason::inference::{
    acri_fmp, acri_fmt, aqip_fmp_with, aqip_fmt_with, asbr_conclude, fati, fita, qip_tnorm_solution, Arrow,
};
use aggreason::numerics::{Grid, Tolerance};
use aggreason::residuation::{induced_aggregation_with, residual_implication_with};
use aggreason::validity::{
    default_configs, render_table, render_text, verdict_report, HypothesisConfig, Rule, Sampling, ValidityReport, Verdict,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use problem::{ArrowChoice, InferMethod, InferTask, Problem, Task};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{field}: unresolved reference `{name}` ({detail})")]
    UnresolvedReference { field: String, name: String, detail: String },
    #[error("fuzzy set `{set}`: membership {value} of `{label}` is outside [0, 1]")]
    Range { set: String, label: String, value: f64 },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Engine(#[from] aggreason::Error),
}

impl CliError {
    pub fn invalid(field: &str, message: &str) -> Self {
        CliError::Invalid { field: field.into(), message: message.into() }
    }

    pub fn unresolved(field: &str, name: &str, detail: &str) -> Self {
        CliError::UnresolvedReference { field: field.into(), name: name.into(), detail: detail.into() }
    }

    /// Attaches a field path to an engine error.
    pub fn from_core(field: &str, e: aggreason::Error) -> Self {
        match &e {
            aggreason::Error::UnknownName { kind, name } => CliError::unresolved(field, name, &format!("unknown {kind}")),
            _ => CliError::invalid(field, &e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "aggreason", version, about = "Approximate reasoning with aggregation functions and fuzzy implications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Bisection tolerance for residuals and induced aggregations.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Points per axis for property checks and sample tables.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Random trials per rule for `validate` and `report`.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Fail with exit code 1 unless verdicts match. Without values the
    /// configured expectations are used; otherwise `ROW:RULE=pass|fail`.
    #[arg(long, global = true, num_args = 0.., value_delimiter = ',')]
    pub expect: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run whatever task the problem file holds.
    Run { problem: PathBuf },
    /// Compute a conclusion.
    Infer { problem: PathBuf },
    /// Tabulate the residual of an aggregation or the aggregation induced by an implication.
    Residuate {
        #[arg(long, conflicts_with = "induce")]
        from: Option<String>,
        #[arg(long)]
        induce: Option<String>,
        #[arg(long, conflicts_with_all = ["from", "induce"])]
        problem: Option<PathBuf>,
    },
    /// Grid-check the properties of an aggregation or implication.
    Classify {
        #[arg(long, conflicts_with = "implication")]
        aggregation: Option<String>,
        #[arg(long)]
        implication: Option<String>,
        /// Negation for the contrapositive check.
        #[arg(long)]
        negation: Option<String>,
        #[arg(long, conflicts_with_all = ["aggregation", "implication"])]
        problem: Option<PathBuf>,
    },
    /// Check GMP rules for the configurations in a problem file.
    Validate { problem: PathBuf },
    /// Verdict grid for the default configurations.
    Report,
}

/// Rendered output and whether an `--expect` assertion failed.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, failed: false }
    }
}

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn rounded(s: &DiscreteFuzzySet) -> DiscreteFuzzySet {
    DiscreteFuzzySet::new(s.universe(), s.values().iter().map(|&v| round12(v)).collect()).expect("rounding stays in [0, 1]")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let tol = Tolerance::new(cli.tol, Tolerance::default().max_iter())?;
    let from_file = |path: &PathBuf, kind: Option<&str>| -> Result<Problem, CliError> {
        let p = problem::parse_problem(path)?;
        match kind {
            Some(k) if p.task.kind() != k => Err(CliError::invalid("task.kind", &format!("expected `{k}`, found `{}`", p.task.kind()))),
            _ => Ok(p),
        }
    };
    match &cli.command {
        Command::Run { problem } => run_task(cli, &from_file(problem, None)?, &tol),
        Command::Infer { problem } => run_task(cli, &from_file(problem, Some("infer"))?, &tol),
        Command::Validate { problem } => run_task(cli, &from_file(problem, Some("validate"))?, &tol),
        Command::Report => report(cli, None),
        Command::Residuate { from, induce, problem } => match problem {
            Some(p) => run_task(cli, &from_file(p, Some("residuate"))?, &tol),
            None => residuate(cli, from.as_deref(), induce.as_deref(), &tol),
        },
        Command::Classify { aggregation, implication, negation, problem } => match problem {
            Some(p) => run_task(cli, &from_file(p, Some("classify"))?, &tol),
            None => classify_cmd(cli, aggregation.as_deref(), implication.as_deref(), negation.as_deref()),
        },
    }
}

fn run_task(cli: &Cli, p: &Problem, tol: &Tolerance) -> Result<Outcome, CliError> {
    match &p.task {
        Task::Infer(t) => infer(cli, p, t, tol),
        Task::Residuate { from, induce } => residuate(cli, from.as_deref(), induce.as_deref(), tol),
        Task::Classify { aggregation, implication, negation } => {
            classify_cmd(cli, aggregation.as_deref(), implication.as_deref(), negation.as_deref())
        }
        Task::Validate { configs } => report(cli, Some(configs.clone())),
        Task::Report {} => report(cli, None),
    }
}

#[derive(Serialize)]
struct InferOutput {
    method: String,
    conclusion: FuzzySetSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    similarity: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn infer(cli: &Cli, p: &Problem, t: &InferTask, tol: &Tolerance) -> Result<Outcome, CliError> {
    let c = p.connective_set(&t.connectives)?;
    let need_a = || c.aggregation.as_ref().ok_or_else(|| CliError::invalid("task.connectives", "an aggregation is required"));
    let need_i = || c.implication.as_ref().ok_or_else(|| CliError::invalid("task.connectives", "an implication is required"));
    let mut similarity = None;
    let mut warnings = Vec::new();
    let conclusion = match t.method {
        InferMethod::AcriFmp => acri_fmp(p.set("task.dprime", &t.dprime)?, p.set("task.d", &t.d)?, p.set("task.b", &t.b)?, need_a()?, need_i()?)?,
        InferMethod::AcriFmt => acri_fmt(p.set("task.bprime", &t.bprime)?, p.set("task.d", &t.d)?, p.set("task.b", &t.b)?, need_a()?, need_i()?)?,
        InferMethod::Asbr1 | InferMethod::Asbr2 | InferMethod::Asbr3 | InferMethod::Asbr4 => {
            let scheme = match t.method {
                InferMethod::Asbr1 => 1,
                InferMethod::Asbr2 => 2,
                InferMethod::Asbr3 => 3,
                _ => 4,
            };
            let (dp, d) = (p.set("task.dprime", &t.dprime)?, p.set("task.d", &t.d)?);
            similarity = Some(round12(c.similarity.measure(d, dp)?));
            asbr_conclude(dp, d, p.set("task.b", &t.b)?, need_a()?, need_i()?, &c.similarity, scheme)?
        }
        InferMethod::AqipFmp | InferMethod::AqipFmt => {
            let (d, b) = (p.set("task.d", &t.d)?, p.set("task.b", &t.b)?);
            let sol = if t.method == InferMethod::AqipFmp {
                aqip_fmp_with(p.set("task.dprime", &t.dprime)?, d, b, need_i()?, tol)?
            } else {
                aqip_fmt_with(p.set("task.bprime", &t.bprime)?, d, b, need_i()?, tol)?
            };
            warnings = sol.warnings;
            sol.conclusion
        }
        InferMethod::QipTnorm => qip_tnorm_solution(p.set("task.dprime", &t.dprime)?, p.set("task.d", &t.d)?, p.set("task.b", &t.b)?, need_a()?)?,
        InferMethod::Fita | InferMethod::Fati => {
            let rb_name = t.rule_base.as_ref().ok_or_else(|| CliError::invalid("task.rule_base", "missing"))?;
            let rb = &p.rule_bases[rb_name];
            let inputs = t.inputs.iter().map(|n| p.sets[n].clone()).collect::<Vec<_>>();
            let arrow = match &t.arrow {
                Some(ArrowChoice::Implication(s)) => Arrow::Implication(problem::implication("task.arrow.implication", s)?),
                Some(ArrowChoice::Aggregation(s)) => Arrow::Aggregation(problem::aggregation("task.arrow.aggregation", s)?),
                None => Arrow::Implication(need_i()?.clone()),
            };
            let combiner = t.combiner.as_ref().ok_or_else(|| CliError::invalid("task.combiner", "missing"))?;
            let combiner = problem::aggregation("task.combiner", combiner)?;
            if t.method == InferMethod::Fita {
                fita(&inputs, rb, need_a()?, &arrow, &combiner)?
            } else {
                fati(&inputs, rb, need_a()?, &arrow, &combiner)?
            }
        }
    };
    let conclusion = rounded(&conclusion);
    let method = serde_json::to_value(MethodName(t.method)).expect("serializable").as_str().unwrap_or_default().to_string();
    let out = match cli.format.unwrap_or(Format::Text) {
        Format::Json => json(&InferOutput { method, conclusion: conclusion.spec(), similarity, warnings }),
        Format::Text => {
            let mut s = String::new();
            if let Some(v) = similarity {
                let _ = writeln!(s, "S(D, D') = {v}");
            }
            let _ = writeln!(s, "B' = {conclusion}");
            for w in &warnings {
                let _ = writeln!(s, "warning: {w}");
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            for (label, v) in conclusion.universe().labels().iter().zip(conclusion.values()) {
                let _ = writeln!(s, "{label:<8} {v}");
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

struct MethodName(InferMethod);

impl Serialize for MethodName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self.0 {
            InferMethod::AcriFmp => "acri_fmp",
            InferMethod::AcriFmt => "acri_fmt",
            InferMethod::Asbr1 => "asbr1",
            InferMethod::Asbr2 => "asbr2",
            InferMethod::Asbr3 => "asbr3",
            InferMethod::Asbr4 => "asbr4",
            InferMethod::AqipFmp => "aqip_fmp",
            InferMethod::AqipFmt => "aqip_fmt",
            InferMethod::QipTnorm => "qip_tnorm",
            InferMethod::Fita => "fita",
            InferMethod::Fati => "fati",
        })
    }
}

#[derive(Serialize)]
struct SampleTable {
    kind: &'static str,
    source: String,
    name: String,
    points: Vec<f64>,
    /// `values[i][j]` is the function at `(points[i], points[j])`.
    values: Vec<Vec<f64>>,
}

fn residuate(cli: &Cli, from: Option<&str>, induce: Option<&str>, tol: &Tolerance) -> Result<Outcome, CliError> {
    let grid = Grid::new(cli.grid.unwrap_or(11))?;
    let pts = grid.points().to_vec();
    let table = match (from, induce) {
        (Some(a), None) => {
            let i = residual_implication_with(&problem::aggregation("--from", a)?, tol);
            let values = pts.iter().map(|&x| pts.iter().map(|&y| round12(i.eval(x, y))).collect()).collect();
            SampleTable { kind: "residual", source: a.into(), name: i.name().into(), points: pts, values }
        }
        (None, Some(s)) => {
            let a = induced_aggregation_with(&problem::implication("--induce", s)?, tol).map_err(|e| CliError::from_core("--induce", e))?;
            let values = pts.iter().map(|&x| pts.iter().map(|&y| round12(a.eval(x, y))).collect()).collect();
            SampleTable { kind: "induced", source: s.into(), name: a.name().into(), points: pts, values }
        }
        _ => return Err(CliError::invalid("residuate", "give exactly one of --from or --induce")),
    };
    let out = match cli.format.unwrap_or(Format::Table) {
        Format::Json => json(&table),
        Format::Text | Format::Table => {
            let mut s = format!("{} of {}: {}\n", table.kind, table.source, table.name);
            let _ = write!(s, "{:>8}", "x \\ y");
            for y in &table.points {
                let _ = write!(s, " {y:>8.4}");
            }
            s.push('\n');
            for (x, row) in table.points.iter().zip(&table.values) {
                let _ = write!(s, "{x:>8.4}");
                for v in row {
                    let _ = write!(s, " {v:>8.4}");
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

fn classify_cmd(cli: &Cli, aggregation: Option<&str>, implication: Option<&str>, negation: Option<&str>) -> Result<Outcome, CliError> {
    let grid = Grid::new(cli.grid.unwrap_or(51))?;
    let format = cli.format.unwrap_or(Format::Text);
    let out = match (aggregation, implication) {
        (Some(a), None) => {
            let a = problem::aggregation("--aggregation", a)?;
            let r = classify(&a, &grid);
            let contradictions = r.contradictions(a.attrs());
            if format == Format::Json {
                json(&serde_json::json!({ "report": r, "contradictions": contradictions }))
            } else {
                let mut s = format!("{} on a {}-point grid\n", r.name, r.grid_size);
                for c in [&r.commutative, &r.associative, &r.conjunctive, &r.disjunctive, &r.averaging, &r.two_increasing] {
                    let _ = writeln!(s, "  {c}");
                }
                let tags: Vec<&str> = r.tags.iter().map(|t| t.as_str()).collect();
                let _ = writeln!(s, "  classes: {}", if tags.is_empty() { "none".into() } else { tags.join(", ") });
                let _ = writeln!(s, "  left neutral: {:?}, right neutral: {:?}", r.left_neutrals, r.right_neutrals);
                let _ = writeln!(s, "  left annihilator: {:?}, right annihilator: {:?}", r.left_annihilators, r.right_annihilators);
                for c in contradictions {
                    let _ = writeln!(s, "  warning: {c}");
                }
                s
            }
        }
        (None, Some(i)) => {
            let i = problem::implication("--implication", i)?;
            let n = negation.map(|n| problem::negation("--negation", n)).transpose()?;
            let r = check_implication_properties(&i, n.as_ref(), &grid);
            let contradictions = r.contradictions(i.attrs());
            if format == Format::Json {
                json(&serde_json::json!({ "report": r, "is_implication": r.is_implication(), "contradictions": contradictions }))
            } else {
                let mut s = format!("{} on a {}-point grid\n", r.name, r.grid_size);
                for c in r.checks() {
                    let _ = writeln!(s, "  {c}");
                }
                for c in contradictions {
                    let _ = writeln!(s, "  warning: {c}");
                }
                s
            }
        }
        _ => return Err(CliError::invalid("classify", "give exactly one of --aggregation or --implication")),
    };
    Ok(Outcome::ok(out))
}

fn report(cli: &Cli, configs: Option<Vec<HypothesisConfig>>) -> Result<Outcome, CliError> {
    let is_default = configs.is_none();
    let mut configs = configs.unwrap_or_else(|| default_configs(&Sampling::default()));
    for c in &mut configs {
        if let Some(t) = cli.trials {
            c.sampling.trials = t;
        }
        if let Some(s) = cli.seed {
            c.sampling.seed = s;
        }
    }
    let report = verdict_report(&configs)?;
    let failed = match &cli.expect {
        None => false,
        Some(list) if list.is_empty() => report.disagreements().next().is_some(),
        Some(list) => !expectations_hold(&report, list)?,
    };
    let default_format = if is_default { Format::Table } else { Format::Text };
    let out = match cli.format.unwrap_or(default_format) {
        Format::Json => json(&report),
        Format::Text => render_text(&report),
        Format::Table => render_table(&report),
    };
    Ok(Outcome { output: out, failed })
}

fn expectations_hold(report: &ValidityReport, list: &[String]) -> Result<bool, CliError> {
    let mut wanted = BTreeMap::new();
    for item in list {
        let bad = || CliError::invalid("--expect", &format!("`{item}` is not ROW:RULE=pass|fail"));
        let (cell, verdict) = item.split_once('=').ok_or_else(bad)?;
        let (row, rule) = cell.split_once(':').ok_or_else(bad)?;
        let rule = Rule::ALL.into_iter().find(|r| r.label().eq_ignore_ascii_case(rule)).ok_or_else(bad)?;
        let verdict = match verdict {
            "pass" => Verdict::Pass,
            "fail" => Verdict::Fail,
            _ => return Err(bad()),
        };
        wanted.insert((row.to_string(), rule), verdict);
    }
    let mut ok = true;
    for ((row, rule), verdict) in wanted {
        let got = report
            .row(&row)
            .and_then(|r| r.verdict(rule))
            .ok_or_else(|| CliError::unresolved("--expect", &format!("{row}:{rule}"), "no such cell"))?;
        ok &= got == verdict;
    }
    Ok(ok)
}

/// Parses `args`, runs the command and writes the result. Returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.output).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if outcome.failed {
                eprintln!("error: verdicts differ from the expected ones");
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
