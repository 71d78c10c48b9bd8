use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{check_rule, HypothesisConfig, Instance, Method, Requirement, Rule, RuleVerdict, Sampling, Source, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    /// Index into [`ValidityReport::configs`].
    pub config: usize,
    #[serde(flatten)]
    pub result: RuleVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<bool>,
}

impl Cell {
    /// True when an expected verdict was given and the run disagrees.
    pub fn disagrees(&self) -> bool {
        match (self.expected, self.result.verdict) {
            (Some(e), Verdict::Pass) => !e,
            (Some(e), Verdict::Fail) => e,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub label: String,
    pub cells: BTreeMap<Rule, Cell>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RowReport {
    pub fn verdict(&self, rule: Rule) -> Option<Verdict> {
        self.cells.get(&rule).map(|c| c.result.verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub configs: Vec<HypothesisConfig>,
    pub rows: Vec<RowReport>,
}

impl ValidityReport {
    pub fn row(&self, label: &str) -> Option<&RowReport> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Cells whose verdict differs from the expected one.
    pub fn disagreements(&self) -> impl Iterator<Item = (&RowReport, &Cell)> {
        self.rows.iter().flat_map(|r| r.cells.values().filter(|c| c.disagrees()).map(move |c| (r, c)))
    }
}

/// Worked instance: D = 1/x1 + 0.2/x2 + 0.5/x3, B = 0.5/y4 + 1/y5.
fn worked_instance(dprime: &[f64]) -> Instance {
    Instance::dense(&[1.0, 0.2, 0.5, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.5, 1.0], dprime, None)
}

/// One configuration per row (two for ASBR3, two for AQIP), each under the
/// hypotheses of the result it exercises.
pub fn default_configs(sampling: &Sampling) -> Vec<HypothesisConfig> {
    use Requirement::*;
    use Rule::*;
    let general = [DprimeNormal, DcomplementNormal];
    let base = |method, rules: &[Rule]| {
        let mut c = HypothesisConfig::new(method, rules).require(&general);
        c.sampling = sampling.clone();
        c
    };
    let asbr = |method, rules: &[Rule]| base(method, rules).require(&[DNormal]).implication("goguen");
    vec![
        base(Method::Acri, &[Gmp1, Gmp2, Gmp3, Gmp4])
            .aggregation("product")
            .implication("residual(product)")
            .expect(Gmp1, true)
            .expect(Gmp2, true)
            .expect(Gmp3, true)
            .expect(Gmp4, true),
        asbr(Method::Asbr1, &[Gmp1, Gmp2Prime, Gmp3, Gmp4])
            .aggregation("product")
            .require(&[CrispD])
            .expect(Gmp1, true)
            .expect(Gmp2Prime, true)
            .expect(Gmp3, true)
            .expect(Gmp4, true),
        asbr(Method::Asbr2, &[Gmp1, Gmp2Prime, Gmp3, Gmp4])
            .aggregation("product")
            .require(&[CrispD])
            .expect(Gmp1, true)
            .expect(Gmp2Prime, true)
            .expect(Gmp3, true)
            .expect(Gmp4, true),
        asbr(Method::Asbr3, &[Gmp1, Gmp2, Gmp3])
            .aggregation("max")
            .expect(Gmp1, true)
            .expect(Gmp2, true)
            .expect(Gmp3, true)
            .note("GMP1 to GMP3 use max (neutral element 0); GMP4 needs left neutral 1 and uses product"),
        asbr(Method::Asbr3, &[Gmp4]).aggregation("product").expect(Gmp4, true),
        asbr(Method::Asbr4, &[Gmp1, Gmp2, Gmp3, Gmp4])
            .aggregation("projection_second")
            .expect(Gmp1, true)
            .expect(Gmp2, true)
            .expect(Gmp3, false)
            .expect(Gmp4, true)
            .note("projection_second has left neutral elements 0 and 1; with product GMP2 fails for this scheme"),
        base(Method::Aqip, &[Gmp1, Gmp3, Gmp4])
            .implication("goguen")
            .with_seed_instance("D' = 0.5/x2 + 1/x3 + 0.2/x4", Gmp1, worked_instance(&[0.0, 0.5, 1.0, 0.2, 0.0]))
            .with_seed_instance("D' = D^C", Gmp3, worked_instance(&[0.0, 0.8, 0.5, 1.0, 1.0]))
            .expect(Gmp1, true)
            .expect(Gmp3, false)
            .expect(Gmp4, true)
            .note("GMP1 is listed as holding, yet D' = 0.5/x2 + 1/x3 + 0.2/x4 is normal and gives B'(y5) = 0.5 < 1 = B(y5)"),
        base(Method::Aqip, &[Gmp2])
            .implication("fodor")
            .with_seed_instance(
                "D = 0.25/x1, D' = 0.25/x1 + 1/x2, D'' = 0.5/x1 + 1/x2",
                Gmp2,
                Instance::dense(&[0.25, 0.0], &[1.0], &[0.25, 1.0], Some(&[0.5, 1.0])),
            )
            .expect(Gmp2, false)
            .note("GMP2 uses fodor: goguen satisfies A_I(x, I(x, y)) = min(x, y), under which GMP2 holds"),
    ]
}

/// Runs every configuration and groups the cells by row label, keeping the
/// order in which rows first appear.
pub fn verdict_report(configs: &[HypothesisConfig]) -> Result<ValidityReport> {
    let mut rows: Vec<RowReport> = Vec::new();
    for (k, cfg) in configs.iter().enumerate() {
        let pos = match rows.iter().position(|r| r.label == cfg.row) {
            Some(p) => p,
            None => {
                rows.push(RowReport { label: cfg.row.clone(), cells: BTreeMap::new(), notes: Vec::new() });
                rows.len() - 1
            }
        };
        for &rule in &cfg.rules {
            if rows[pos].cells.contains_key(&rule) {
                return Err(Error::InvalidParameters {
                    name: cfg.row.clone(),
                    reason: format!("{rule} is covered by more than one configuration"),
                });
            }
            let result = check_rule(cfg, rule)?;
            let cell = Cell { config: k, result, expected: cfg.expected.get(&rule).copied() };
            rows[pos].cells.insert(rule, cell);
        }
        rows[pos].notes.extend(cfg.notes.iter().cloned());
    }
    Ok(ValidityReport { configs: configs.to_vec(), rows })
}

fn connectives(cfg: &HypothesisConfig) -> String {
    let mut parts = Vec::new();
    if let Some(a) = &cfg.aggregation {
        parts.push(format!("A = {a}"));
    }
    if let Some(i) = &cfg.implication {
        parts.push(format!("I = {i}"));
    }
    if matches!(cfg.method, Method::Asbr1 | Method::Asbr2 | Method::Asbr3 | Method::Asbr4) {
        parts.push(format!("S = {}", cfg.similarity));
    }
    parts.join(", ")
}

fn sparse(m: &BTreeMap<String, f64>) -> String {
    if m.is_empty() {
        return "0".into();
    }
    m.iter().map(|(l, v)| format!("{v}/{l}")).collect::<Vec<_>>().join(" + ")
}

/// Grid with one column per rule. Blank cells are rules a row does not
/// cover; `*` marks a verdict that differs from the expected one.
pub fn render_table(report: &ValidityReport) -> String {
    let width = report.rows.iter().map(|r| r.label.chars().count()).max().unwrap_or(0).max(6);
    let mut out = format!("{:<width$}", "method");
    for rule in Rule::ALL {
        let _ = write!(out, " {:^7}", rule.label());
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    let mut footnotes = Vec::new();
    for row in &report.rows {
        let _ = write!(out, "{:<width$}", row.label);
        for rule in Rule::ALL {
            let mark = match row.cells.get(&rule) {
                None => String::new(),
                Some(c) if c.disagrees() => {
                    footnotes.push(format!("* {} {}", row.label, rule));
                    format!("{}*", c.result.verdict.mark())
                }
                Some(c) => c.result.verdict.mark().to_string(),
            };
            let _ = write!(out, " {mark:^7}");
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
    }
    for row in &report.rows {
        for note in &row.notes {
            footnotes.push(format!("{}: {note}", row.label));
        }
    }
    if !footnotes.is_empty() {
        out.push('\n');
        for f in footnotes {
            out.push_str(&f);
            out.push('\n');
        }
    }
    out
}

/// One block per cell with the configuration and any counterexample.
pub fn render_text(report: &ValidityReport) -> String {
    let mut out = String::new();
    for row in &report.rows {
        for (rule, cell) in &row.cells {
            let cfg = &report.configs[cell.config];
            let r = &cell.result;
            let verdict = match r.verdict {
                Verdict::Pass => "holds",
                Verdict::Fail => "fails",
                Verdict::NotApplicable => "not applicable",
            };
            let _ = writeln!(out, "{} {rule}: {verdict} after {} instance(s) [{}]", row.label, r.checked, connectives(cfg));
            if let Some(e) = cell.expected.filter(|_| cell.disagrees()) {
                let _ = writeln!(out, "  expected {}", if e { "to hold" } else { "to fail" });
            }
            if let Some(reason) = &r.reason {
                let _ = writeln!(out, "  {reason}");
            }
            if let Some(ce) = &r.counterexample {
                let from = match &ce.source {
                    Source::Seeded { name } => format!("instance {name}"),
                    Source::Trial { seed, trial } => format!("seed {seed}, trial {trial}"),
                };
                let i = &ce.instance;
                let _ = writeln!(out, "  counterexample ({from}) at {}: {}", ce.at, ce.detail);
                let _ = writeln!(out, "    D   = {}", sparse(&i.d));
                let _ = writeln!(out, "    B   = {}", sparse(&i.b));
                let _ = writeln!(out, "    D'  = {}", sparse(&i.dprime));
                if let Some(d2) = &i.dsecond {
                    let _ = writeln!(out, "    D'' = {}", sparse(d2));
                }
                let _ = writeln!(out, "    B'  = {}", sparse(&ce.conclusion));
                if let Some(b2) = &ce.conclusion_second {
                    let _ = writeln!(out, "    B'' = {}", sparse(b2));
                }
            }
        }
        for note in &row.notes {
            let _ = writeln!(out, "{}: {note}", row.label);
        }
    }
    out
}
