//! Problem files: universes, fuzzy sets, connectives, rule bases and one task.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use aggreason::catalog::{resolve_aggregation, resolve_implication, resolve_negation, resolve_similarity, ConnectiveSpec};
use aggreason::connectives::{Aggregation, Negation};
use aggreason::fuzzy::{DiscreteFuzzySet, FuzzySetSpec, SimilarityMeasure, Universe};
use aggreason::implications::Implication;
use aggreason::inference::{MisoRule, RuleBase};
use aggreason::validity::HypothesisConfig;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(default)]
    universes: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    fuzzy_sets: BTreeMap<String, FuzzySetSpec>,
    #[serde(default)]
    connectives: BTreeMap<String, RawConnectives>,
    #[serde(default)]
    rule_bases: BTreeMap<String, RawRuleBase>,
    task: Task,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConnectives {
    aggregation: Option<String>,
    implication: Option<String>,
    negation: Option<String>,
    similarity: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRuleBase {
    rules: Vec<RawRule>,
    /// Combines the antecedents of one rule; defaults to `min`.
    #[serde(default)]
    and: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    #[serde(rename = "if")]
    antecedents: Vec<String>,
    then: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferMethod {
    AcriFmp,
    AcriFmt,
    Asbr1,
    Asbr2,
    Asbr3,
    Asbr4,
    AqipFmp,
    AqipFmt,
    QipTnorm,
    Fita,
    Fati,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowChoice {
    Implication(String),
    Aggregation(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferTask {
    pub method: InferMethod,
    /// Key into `connectives`; may be omitted when there is exactly one entry.
    #[serde(default)]
    pub connectives: Option<String>,
    #[serde(default)]
    pub d: Option<String>,
    #[serde(default)]
    pub b: Option<String>,
    #[serde(default)]
    pub dprime: Option<String>,
    #[serde(default)]
    pub bprime: Option<String>,
    #[serde(default)]
    pub rule_base: Option<String>,
    #[serde(default)]
    pub inputs: Vec<String>,
    /// Rule translation for FITA/FATI; the connective set's implication by default.
    #[serde(default)]
    pub arrow: Option<ArrowChoice>,
    #[serde(default)]
    pub combiner: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    Infer(InferTask),
    Residuate {
        #[serde(default)]
        from: Option<String>,
        #[serde(default)]
        induce: Option<String>,
    },
    Classify {
        #[serde(default)]
        aggregation: Option<String>,
        #[serde(default)]
        implication: Option<String>,
        #[serde(default)]
        negation: Option<String>,
    },
    Validate {
        configs: Vec<HypothesisConfig>,
    },
    Report {},
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Infer(_) => "infer",
            Task::Residuate { .. } => "residuate",
            Task::Classify { .. } => "classify",
            Task::Validate { .. } => "validate",
            Task::Report {} => "report",
        }
    }
}

#[derive(Clone)]
pub struct Connectives {
    pub aggregation: Option<Aggregation>,
    pub implication: Option<Implication>,
    pub negation: Negation,
    pub similarity: SimilarityMeasure,
}

/// A problem whose references have all been resolved.
pub struct Problem {
    pub universes: BTreeMap<String, Arc<Universe>>,
    pub sets: BTreeMap<String, DiscreteFuzzySet>,
    pub connectives: BTreeMap<String, Connectives>,
    pub rule_bases: BTreeMap<String, RuleBase>,
    pub task: Task,
}

impl Problem {
    pub fn set(&self, field: &str, name: &Option<String>) -> Result<&DiscreteFuzzySet, CliError> {
        let name = name.as_ref().ok_or_else(|| CliError::invalid(field, "missing"))?;
        self.sets.get(name).ok_or_else(|| CliError::unresolved(field, name, "no such fuzzy set"))
    }

    pub fn connective_set(&self, key: &Option<String>) -> Result<&Connectives, CliError> {
        match key {
            Some(k) => self.connectives.get(k).ok_or_else(|| CliError::unresolved("task.connectives", k, "no such entry")),
            None if self.connectives.len() == 1 => Ok(self.connectives.values().next().expect("one entry")),
            None => Err(CliError::invalid("task.connectives", "required when `connectives` does not have exactly one entry")),
        }
    }
}

pub fn parse_spec(field: &str, text: &str) -> Result<ConnectiveSpec, CliError> {
    text.parse().map_err(|e| CliError::from_core(field, e))
}

pub fn aggregation(field: &str, text: &str) -> Result<Aggregation, CliError> {
    resolve_aggregation(&parse_spec(field, text)?).map_err(|e| CliError::from_core(field, e))
}

pub fn implication(field: &str, text: &str) -> Result<Implication, CliError> {
    resolve_implication(&parse_spec(field, text)?).map_err(|e| CliError::from_core(field, e))
}

pub fn negation(field: &str, text: &str) -> Result<Negation, CliError> {
    resolve_negation(&parse_spec(field, text)?).map_err(|e| CliError::from_core(field, e))
}

fn similarity(field: &str, text: &str) -> Result<SimilarityMeasure, CliError> {
    resolve_similarity(&parse_spec(field, text)?).map_err(|e| CliError::from_core(field, e))
}

pub fn parse_problem(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_problem_str(&text).map_err(|e| match e {
        CliError::Parse { line, column, message, .. } => CliError::Parse { path: path.display().to_string(), line, column, message },
        other => other,
    })
}

pub fn parse_problem_str(text: &str) -> Result<Problem, CliError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: "<input>".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut universes = BTreeMap::new();
    for (name, labels) in &raw.universes {
        let u = Universe::new(name.clone(), labels.clone()).map_err(|e| CliError::from_core(&format!("universes.{name}"), e))?;
        universes.insert(name.clone(), u);
    }

    let mut sets = BTreeMap::new();
    for (name, spec) in &raw.fuzzy_sets {
        let field = format!("fuzzy_sets.{name}");
        let u = universes
            .get(&spec.universe)
            .ok_or_else(|| CliError::unresolved(&format!("{field}.universe"), &spec.universe, "no such universe"))?;
        for (label, &value) in &spec.membership {
            if u.position(label).is_err() {
                return Err(CliError::unresolved(&format!("{field}.membership"), label, &format!("not a label of {}", spec.universe)));
            }
            if !(0.0..=1.0).contains(&value) {
                return Err(CliError::Range { set: name.clone(), label: label.clone(), value });
            }
        }
        sets.insert(name.clone(), spec.resolve(u).map_err(|e| CliError::from_core(&field, e))?);
    }

    let mut connectives = BTreeMap::new();
    for (name, c) in &raw.connectives {
        let f = |leaf: &str| format!("connectives.{name}.{leaf}");
        connectives.insert(
            name.clone(),
            Connectives {
                aggregation: c.aggregation.as_deref().map(|t| aggregation(&f("aggregation"), t)).transpose()?,
                implication: c.implication.as_deref().map(|t| implication(&f("implication"), t)).transpose()?,
                negation: negation(&f("negation"), c.negation.as_deref().unwrap_or("standard"))?,
                similarity: similarity(&f("similarity"), c.similarity.as_deref().unwrap_or("jaccard"))?,
            },
        );
    }

    let mut rule_bases = BTreeMap::new();
    for (name, rb) in &raw.rule_bases {
        let field = format!("rule_bases.{name}");
        let lookup = |k: usize, set: &str| {
            sets.get(set).cloned().ok_or_else(|| CliError::unresolved(&format!("{field}.rules[{k}]"), set, "no such fuzzy set"))
        };
        let mut rules = Vec::new();
        for (k, r) in rb.rules.iter().enumerate() {
            let ants = r.antecedents.iter().map(|s| lookup(k, s)).collect::<Result<Vec<_>, _>>()?;
            rules.push(MisoRule::new(ants, lookup(k, &r.then)?));
        }
        let and = aggregation(&format!("{field}.and"), rb.and.as_deref().unwrap_or("min"))?;
        rule_bases.insert(name.clone(), RuleBase::new(rules, and).map_err(|e| CliError::from_core(&field, e))?);
    }

    let problem = Problem { universes, sets, connectives, rule_bases, task: raw.task };
    check_task_references(&problem)?;
    Ok(problem)
}

fn check_task_references(p: &Problem) -> Result<(), CliError> {
    let Task::Infer(t) = &p.task else {
        return Ok(());
    };
    let named = [("task.d", &t.d), ("task.b", &t.b), ("task.dprime", &t.dprime), ("task.bprime", &t.bprime)];
    for (field, name) in named {
        if name.is_some() {
            p.set(field, name)?;
        }
    }
    for (k, name) in t.inputs.iter().enumerate() {
        p.set(&format!("task.inputs[{k}]"), &Some(name.clone()))?;
    }
    if let Some(rb) = &t.rule_base {
        if !p.rule_bases.contains_key(rb) {
            return Err(CliError::unresolved("task.rule_base", rb, "no such rule base"));
        }
    }
    p.connective_set(&t.connectives)?;
    Ok(())
}
