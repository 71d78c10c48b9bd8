//! Randomized validation of the GMP rules for each inference method.
//!
//! Every trial is drawn from its own seeded stream, so a reported
//! counterexample can be regenerated with [`sample_instance`].

mod table;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{resolve_aggregation, resolve_implication, resolve_negation, resolve_similarity, ConnectiveSpec};
use crate::connectives::{Aggregation, Negation};
use crate::error::{Error, Result};
use crate::fuzzy::{DiscreteFuzzySet, SimilarityMeasure, Universe};
use crate::implications::Implication;
use crate::inference::{acri_fmp, aqip_fmp, asbr_with_similarity};
use crate::numerics::trial_rng;

pub use table::{default_configs, render_table, render_text, verdict_report, RowReport, ValidityReport};

/// Slack for the inclusions and equalities asserted by the rules.
pub const RULE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Acri,
    Asbr1,
    Asbr2,
    Asbr3,
    Asbr4,
    Aqip,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Acri => "ACRI",
            Method::Asbr1 => "ASBR1",
            Method::Asbr2 => "ASBR2",
            Method::Asbr3 => "ASBR3",
            Method::Asbr4 => "ASBR4",
            Method::Aqip => "AQIP",
        }
    }

    fn scheme(self) -> Option<u8> {
        match self {
            Method::Asbr1 => Some(1),
            Method::Asbr2 => Some(2),
            Method::Asbr3 => Some(3),
            Method::Asbr4 => Some(4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "GMP1")]
    Gmp1,
    #[serde(rename = "GMP2")]
    Gmp2,
    #[serde(rename = "GMP2'")]
    Gmp2Prime,
    #[serde(rename = "GMP3")]
    Gmp3,
    #[serde(rename = "GMP4")]
    Gmp4,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::Gmp1, Rule::Gmp2, Rule::Gmp2Prime, Rule::Gmp3, Rule::Gmp4];

    pub fn label(self) -> &'static str {
        match self {
            Rule::Gmp1 => "GMP1",
            Rule::Gmp2 => "GMP2",
            Rule::Gmp2Prime => "GMP2'",
            Rule::Gmp3 => "GMP3",
            Rule::Gmp4 => "GMP4",
        }
    }

    fn stream_base(self) -> u64 {
        (self as u64) << 32
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Structural conditions the sampler enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    DNormal,
    DprimeNormal,
    DcomplementNormal,
    /// Crisp `D`; applied to GMP3 only.
    CrispD,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    pub min_size: usize,
    pub max_size: usize,
    /// Memberships are multiples of `step`.
    pub step: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { min_size: 3, max_size: 5, step: 0.25, trials: 500, seed: 20_240_601 }
    }
}

/// Sets of one FMP instance, sparse and keyed by label. `U` holds `D`, `D'`
/// and `D''`; `V` holds `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub d: BTreeMap<String, f64>,
    pub b: BTreeMap<String, f64>,
    pub dprime: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dsecond: Option<BTreeMap<String, f64>>,
}

/// A named instance tried before the random trials of `rule`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedInstance {
    pub name: String,
    pub rule: Rule,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisConfig {
    /// Table row this configuration reports into.
    pub row: String,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregation: Option<ConnectiveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implication: Option<ConnectiveSpec>,
    #[serde(default = "standard_negation")]
    pub negation: ConnectiveSpec,
    #[serde(default = "jaccard")]
    pub similarity: ConnectiveSpec,
    pub rules: Vec<Rule>,
    #[serde(default)]
    pub requirements: BTreeSet<Requirement>,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<SeedInstance>,
    /// Published verdicts, used only to flag disagreements.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<Rule, bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn standard_negation() -> ConnectiveSpec {
    ConnectiveSpec::named("standard")
}

fn jaccard() -> ConnectiveSpec {
    ConnectiveSpec::named("jaccard")
}

impl HypothesisConfig {
    pub fn new(method: Method, rules: &[Rule]) -> Self {
        HypothesisConfig {
            row: method.label().into(),
            method,
            aggregation: None,
            implication: None,
            negation: standard_negation(),
            similarity: jaccard(),
            rules: rules.to_vec(),
            requirements: BTreeSet::new(),
            sampling: Sampling::default(),
            seeds: Vec::new(),
            expected: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn aggregation(mut self, spec: &str) -> Self {
        self.aggregation = Some(spec.parse().expect("valid connective spec"));
        self
    }

    pub fn implication(mut self, spec: &str) -> Self {
        self.implication = Some(spec.parse().expect("valid connective spec"));
        self
    }

    pub fn require(mut self, reqs: &[Requirement]) -> Self {
        self.requirements.extend(reqs.iter().copied());
        self
    }

    pub fn row(mut self, label: &str) -> Self {
        self.row = label.into();
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.sampling.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.sampling.seed = seed;
        self
    }

    pub fn expect(mut self, rule: Rule, holds: bool) -> Self {
        self.expected.insert(rule, holds);
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn with_seed_instance(mut self, name: &str, rule: Rule, instance: Instance) -> Self {
        self.seeds.push(SeedInstance { name: name.into(), rule, instance });
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn mark(self) -> &'static str {
        match self {
            Verdict::Pass => "✓",
            Verdict::Fail => "×",
            Verdict::NotApplicable => "-",
        }
    }
}

/// Where a counterexample came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Seeded { name: String },
    /// Replay with `sample_instance(cfg, rule, trial)`.
    Trial { seed: u64, trial: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub source: Source,
    pub instance: Instance,
    /// Conclusion from `D'`.
    pub conclusion: BTreeMap<String, f64>,
    /// Conclusion from `D''` for the two-premise rules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion_second: Option<BTreeMap<String, f64>>,
    /// Output label at which the rule fails, or `-` for set-level failures.
    pub at: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleVerdict {
    pub rule: Rule,
    pub verdict: Verdict,
    /// Instances checked before the verdict was reached.
    pub checked: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

struct Connectives {
    a: Option<Aggregation>,
    i: Option<Implication>,
    n: Negation,
    s: SimilarityMeasure,
}

impl Connectives {
    fn resolve(cfg: &HypothesisConfig) -> Result<Self> {
        Ok(Connectives {
            a: cfg.aggregation.as_ref().map(resolve_aggregation).transpose()?,
            i: cfg.implication.as_ref().map(resolve_implication).transpose()?,
            n: resolve_negation(&cfg.negation)?,
            s: resolve_similarity(&cfg.similarity)?,
        })
    }

    fn missing(&self, method: Method) -> Option<&'static str> {
        match method {
            Method::Aqip => self.i.is_none().then_some("an implication"),
            _ if self.a.is_none() => Some("an aggregation"),
            _ => self.i.is_none().then_some("an implication"),
        }
    }

    fn conclude(&self, method: Method, dp: &DiscreteFuzzySet, d: &DiscreteFuzzySet, b: &DiscreteFuzzySet) -> Result<DiscreteFuzzySet> {
        let i = self.i.as_ref().expect("checked by missing()");
        match method {
            Method::Aqip => Ok(aqip_fmp(dp, d, b, i)?.conclusion),
            Method::Acri => acri_fmp(dp, d, b, self.a.as_ref().expect("checked"), i),
            m => {
                let s = self.s.measure(d, dp)?;
                asbr_with_similarity(s, d, b, self.a.as_ref().expect("checked"), i, m.scheme().expect("asbr"))
            }
        }
    }
}

struct Sets {
    d: DiscreteFuzzySet,
    b: DiscreteFuzzySet,
    dp: DiscreteFuzzySet,
    dpp: Option<DiscreteFuzzySet>,
}

impl Instance {
    fn from_sets(s: &Sets) -> Self {
        Instance {
            u: s.d.universe().labels().to_vec(),
            v: s.b.universe().labels().to_vec(),
            d: s.d.to_sparse(),
            b: s.b.to_sparse(),
            dprime: s.dp.to_sparse(),
            dsecond: s.dpp.as_ref().map(|x| x.to_sparse()),
        }
    }

    fn sets(&self) -> Result<Sets> {
        let u = Universe::new("U", self.u.clone())?;
        let v = Universe::new("V", self.v.clone())?;
        let set = |uni: &Arc<Universe>, m: &BTreeMap<String, f64>| {
            DiscreteFuzzySet::from_pairs(uni, m.iter().map(|(l, &x)| (l.as_str(), x)))
        };
        Ok(Sets {
            d: set(&u, &self.d)?,
            b: set(&v, &self.b)?,
            dp: set(&u, &self.dprime)?,
            dpp: self.dsecond.as_ref().map(|m| set(&u, m)).transpose()?,
        })
    }

    /// Memberships in universe order, handy for building instances in code.
    pub fn dense(d: &[f64], b: &[f64], dprime: &[f64], dsecond: Option<&[f64]>) -> Self {
        let u: Vec<String> = (1..=d.len()).map(|k| format!("x{k}")).collect();
        let v: Vec<String> = (1..=b.len()).map(|k| format!("y{k}")).collect();
        let sparse = |labels: &[String], vals: &[f64]| {
            labels.iter().zip(vals).filter(|(_, &x)| x != 0.0).map(|(l, &x)| (l.clone(), x)).collect()
        };
        Instance {
            d: sparse(&u, d),
            b: sparse(&v, b),
            dprime: sparse(&u, dprime),
            dsecond: dsecond.map(|s| sparse(&u, s)),
            u,
            v,
        }
    }
}

/// What the sampler must enforce for `rule` under `cfg`.
struct Needs {
    d_normal: bool,
    d_has_zero: bool,
    d_crisp: bool,
    dp_normal: bool,
}

fn needs(cfg: &HypothesisConfig, rule: Rule) -> Needs {
    let r = &cfg.requirements;
    Needs {
        d_normal: r.contains(&Requirement::DNormal) || rule == Rule::Gmp4,
        d_has_zero: r.contains(&Requirement::DcomplementNormal) || rule == Rule::Gmp3,
        d_crisp: r.contains(&Requirement::CrispD) && rule == Rule::Gmp3,
        dp_normal: r.contains(&Requirement::DprimeNormal) || rule == Rule::Gmp1,
    }
}

fn unsatisfiable(cfg: &HypothesisConfig, rule: Rule) -> Option<String> {
    let s = &cfg.sampling;
    let n = needs(cfg, rule);
    let levels = 1.0 / s.step;
    if !(s.step > 0.0 && s.step <= 1.0) || (levels - levels.round()).abs() > 1e-9 {
        return Some(format!("membership step {} does not divide 1", s.step));
    }
    if s.min_size == 0 || s.min_size > s.max_size {
        return Some(format!("empty size range {}..={}", s.min_size, s.max_size));
    }
    if n.d_normal && n.d_has_zero && s.max_size < 2 {
        return Some("D must contain both 1 and 0 on a one-point universe".into());
    }
    if rule == Rule::Gmp3 && !cfg.negation.args.is_empty() {
        return Some("complement negation must be a plain name".into());
    }
    None
}

fn random_values<R: Rng>(rng: &mut R, n: usize, levels: u32, crisp: bool) -> Vec<f64> {
    (0..n)
        .map(|_| if crisp { rng.gen_range(0..=1) as f64 } else { rng.gen_range(0..=levels) as f64 / levels as f64 })
        .collect()
}

/// The random instance of trial `trial` for `rule`. Draws come from stream
/// `(rule << 32) | trial` of the configured seed.
pub fn sample_instance(cfg: &HypothesisConfig, rule: Rule, trial: usize) -> Result<Instance> {
    if let Some(reason) = unsatisfiable(cfg, rule) {
        return Err(Error::InvalidParameters { name: cfg.row.clone(), reason });
    }
    let n = resolve_negation(&cfg.negation)?;
    let sim = resolve_similarity(&cfg.similarity)?;
    Ok(Instance::from_sets(&sample_sets(cfg, rule, trial, &n, &sim)?))
}

fn sample_sets(cfg: &HypothesisConfig, rule: Rule, trial: usize, neg: &Negation, sim: &SimilarityMeasure) -> Result<Sets> {
    let s = &cfg.sampling;
    let need = needs(cfg, rule);
    let levels = (1.0 / s.step).round() as u32;
    let mut rng = trial_rng(s.seed, rule.stream_base() | trial as u64);
    let min_u = if need.d_normal && need.d_has_zero { s.min_size.max(2) } else { s.min_size };
    let nu = rng.gen_range(min_u..=s.max_size);
    let nv = rng.gen_range(s.min_size..=s.max_size);
    let u = Universe::numbered("U", "x", nu)?;
    let v = Universe::numbered("V", "y", nv)?;

    let mut d = random_values(&mut rng, nu, levels, need.d_crisp);
    let top = rng.gen_range(0..nu);
    if need.d_normal {
        d[top] = 1.0;
    }
    if need.d_has_zero {
        let mut k = rng.gen_range(0..nu);
        if need.d_normal && k == top {
            k = (k + 1) % nu;
        }
        d[k] = 0.0;
    }
    let d = DiscreteFuzzySet::new(&u, d)?;
    let b = DiscreteFuzzySet::new(&v, random_values(&mut rng, nv, levels, false))?;

    let premise = |rng: &mut rand_chacha::ChaCha8Rng| {
        let mut p = random_values(rng, nu, levels, false);
        if need.dp_normal {
            p[rng.gen_range(0..nu)] = 1.0;
        }
        DiscreteFuzzySet::new(&u, p)
    };
    let (dp, dpp) = match rule {
        Rule::Gmp1 => (premise(&mut rng)?, None),
        Rule::Gmp2 => {
            let dp = premise(&mut rng)?;
            let grown = dp
                .values()
                .iter()
                .map(|&x| {
                    let k = (x * levels as f64).round() as u32;
                    rng.gen_range(k..=levels) as f64 / levels as f64
                })
                .collect();
            let dpp = DiscreteFuzzySet::new(&u, grown)?;
            (dp, Some(dpp))
        }
        Rule::Gmp2Prime => {
            let (p, q) = (premise(&mut rng)?, premise(&mut rng)?);
            if sim.measure(&d, &p)? <= sim.measure(&d, &q)? {
                (p, Some(q))
            } else {
                (q, Some(p))
            }
        }
        Rule::Gmp3 => (d.complement(neg), None),
        Rule::Gmp4 => (d.clone(), None),
    };
    Ok(Sets { d, b, dp, dpp })
}

/// First violation of `rule` on one instance: `(output label, detail)`.
type Violation = (String, String);

fn violation(
    rule: Rule,
    sets: &Sets,
    c: &Connectives,
    method: Method,
) -> Result<(Option<Violation>, DiscreteFuzzySet, Option<DiscreteFuzzySet>)> {
    let bp = c.conclude(method, &sets.dp, &sets.d, &sets.b)?;
    let bpp = sets.dpp.as_ref().map(|dpp| c.conclude(method, dpp, &sets.d, &sets.b)).transpose()?;
    let labels = sets.b.universe().labels();
    let (b, p) = (sets.b.values(), bp.values());
    let first = |pred: &dyn Fn(usize) -> Option<String>| (0..labels.len()).find_map(|k| pred(k).map(|d| (labels[k].clone(), d)));
    let v = match rule {
        Rule::Gmp1 => first(&|k| (b[k] > p[k] + RULE_TOL).then(|| format!("B = {} > B' = {}", b[k], p[k]))),
        Rule::Gmp2 => {
            let q = bpp.as_ref().expect("two premises").values();
            first(&|k| (p[k] > q[k] + RULE_TOL).then(|| format!("D' ⊆ D'' but B' = {} > B'' = {}", p[k], q[k])))
        }
        Rule::Gmp2Prime => {
            let q = bpp.as_ref().expect("two premises");
            let dpp = sets.dpp.as_ref().expect("two premises");
            let (sd1, sd2) = (c.s.measure(&sets.d, &sets.dp)?, c.s.measure(&sets.d, dpp)?);
            let (sb1, sb2) = (c.s.measure(&bp, &sets.b)?, c.s.measure(q, &sets.b)?);
            (sb1 > sb2 + RULE_TOL).then(|| {
                ("-".to_string(), format!("S(D',D) = {sd1} <= S(D'',D) = {sd2} but S(B',B) = {sb1} > S(B'',B) = {sb2}"))
            })
        }
        Rule::Gmp3 => first(&|k| (p[k] < 1.0 - RULE_TOL).then(|| format!("D' = D^C but B' = {} < 1", p[k]))),
        Rule::Gmp4 => first(&|k| ((p[k] - b[k]).abs() > RULE_TOL).then(|| format!("D' = D but B' = {} != B = {}", p[k], b[k]))),
    };
    Ok((v, bp, bpp))
}

/// Runs `rule` under `cfg`: seeded instances for the rule first, then
/// `cfg.sampling.trials` random ones. Stops at the first violation.
pub fn check_rule(cfg: &HypothesisConfig, rule: Rule) -> Result<RuleVerdict> {
    let na = |reason: String| RuleVerdict { rule, verdict: Verdict::NotApplicable, checked: 0, counterexample: None, reason: Some(reason) };
    let c = Connectives::resolve(cfg)?;
    if let Some(what) = c.missing(cfg.method) {
        return Ok(na(format!("{} needs {what}", cfg.method.label())));
    }
    if matches!(rule, Rule::Gmp2Prime) && cfg.method.scheme().is_none() {
        return Ok(na("GMP2' is stated for the similarity-based schemes".into()));
    }
    if let Some(reason) = unsatisfiable(cfg, rule) {
        return Ok(na(reason));
    }

    let fail = |source: Source, sets: &Sets, (at, detail): Violation, bp: DiscreteFuzzySet, bpp: Option<DiscreteFuzzySet>, checked| RuleVerdict {
        rule,
        verdict: Verdict::Fail,
        checked,
        counterexample: Some(Counterexample {
            source,
            instance: Instance::from_sets(sets),
            conclusion: bp.to_sparse(),
            conclusion_second: bpp.map(|x| x.to_sparse()),
            at,
            detail,
        }),
        reason: None,
    };

    let mut checked = 0;
    for seed in cfg.seeds.iter().filter(|s| s.rule == rule) {
        let mut sets = seed.instance.sets()?;
        match rule {
            Rule::Gmp3 => sets.dp = sets.d.complement(&c.n),
            Rule::Gmp4 => sets.dp = sets.d.clone(),
            _ => {}
        }
        checked += 1;
        if let (Some(v), bp, bpp) = violation(rule, &sets, &c, cfg.method)? {
            return Ok(fail(Source::Seeded { name: seed.name.clone() }, &sets, v, bp, bpp, checked));
        }
    }
    for trial in 0..cfg.sampling.trials {
        let sets = sample_sets(cfg, rule, trial, &c.n, &c.s)?;
        checked += 1;
        if let (Some(v), bp, bpp) = violation(rule, &sets, &c, cfg.method)? {
            return Ok(fail(Source::Trial { seed: cfg.sampling.seed, trial }, &sets, v, bp, bpp, checked));
        }
    }
    Ok(RuleVerdict { rule, verdict: Verdict::Pass, checked, counterexample: None, reason: None })
}
