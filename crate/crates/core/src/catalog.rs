//! Connectives by name, e.g. `product`, `clayton_copula(2)`,
//! `residual(nilpotent_minimum)` or `an(max, standard)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::connectives::{builtin_aggregation, Aggregation, Negation};
use crate::error::{Error, Result};
use crate::fuzzy::SimilarityMeasure;
use crate::implications::{
    an_implication, builtin_implication, f_implication, g_implication, probabilistic_implication,
    probabilistic_s_implication, FGenerator, GGenerator, Implication,
};
use crate::residuation::{induced_aggregation, residual_implication};

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Number(f64),
    Spec(ConnectiveSpec),
}

/// A possibly parameterized connective name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ConnectiveSpec {
    pub name: String,
    pub args: Vec<Arg>,
}

impl ConnectiveSpec {
    pub fn named(name: impl Into<String>) -> Self {
        ConnectiveSpec { name: name.into(), args: Vec::new() }
    }

    pub fn with(name: impl Into<String>, args: Vec<Arg>) -> Self {
        ConnectiveSpec { name: name.into(), args }
    }

    fn numbers(&self) -> Result<Vec<f64>> {
        self.args
            .iter()
            .map(|a| match a {
                Arg::Number(v) => Ok(*v),
                Arg::Spec(s) => Err(self.bad(format!("expected a number, found `{s}`"))),
            })
            .collect()
    }

    fn specs(&self, n: usize) -> Result<Vec<&ConnectiveSpec>> {
        if self.args.len() != n {
            return Err(self.bad(format!("expected {n} argument(s), found {}", self.args.len())));
        }
        self.args
            .iter()
            .map(|a| match a {
                Arg::Spec(s) => Ok(s),
                Arg::Number(v) => Err(self.bad(format!("expected a connective, found {v}"))),
            })
            .collect()
    }

    fn bad(&self, reason: String) -> Error {
        Error::InvalidParameters { name: self.to_string(), reason }
    }

    fn plain(&self) -> Result<&str> {
        if self.args.is_empty() {
            Ok(&self.name)
        } else {
            Err(self.bad("takes no arguments".into()))
        }
    }
}

impl fmt::Display for ConnectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            let parts: Vec<String> = self
                .args
                .iter()
                .map(|a| match a {
                    Arg::Number(v) => format!("{v}"),
                    Arg::Spec(s) => s.to_string(),
                })
                .collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

impl From<ConnectiveSpec> for String {
    fn from(s: ConnectiveSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for ConnectiveSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for ConnectiveSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut p = Parser { src: text, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::InvalidParameters { name: self.src.into(), reason: format!("{what} at column {}", self.pos + 1) }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn token(&mut self) -> &str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || "_.-+".contains(c))).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn spec(&mut self) -> Result<ConnectiveSpec> {
        let name = self.token().to_string();
        if name.is_empty() || !name.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(self.error("expected a name"));
        }
        let mut args = Vec::new();
        if self.eat('(') {
            loop {
                args.push(self.arg()?);
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return Err(self.error("expected `,` or `)`"));
                }
            }
        }
        Ok(ConnectiveSpec { name, args })
    }

    fn arg(&mut self) -> Result<Arg> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-') {
            let tok = self.token().to_string();
            tok.parse().map(Arg::Number).map_err(|_| self.error(&format!("bad number `{tok}`")))
        } else {
            self.spec().map(Arg::Spec)
        }
    }
}

/// Builtin aggregations, plus `induced(<implication>)`.
pub fn resolve_aggregation(spec: &ConnectiveSpec) -> Result<Aggregation> {
    match spec.name.as_str() {
        "induced" => induced_aggregation(&resolve_implication(spec.specs(1)?[0])?),
        name => builtin_aggregation(name, &spec.numbers()?),
    }
}

/// Builtin implications, plus `residual(<aggregation>)`, `an(<aggregation>, <negation>)`,
/// `f_generated(<generator>)`, `g_generated(<generator>)`, `probabilistic(<copula>)`
/// and `probabilistic_s(<copula>)`.
pub fn resolve_implication(spec: &ConnectiveSpec) -> Result<Implication> {
    match spec.name.as_str() {
        "residual" => Ok(residual_implication(&resolve_aggregation(spec.specs(1)?[0])?)),
        "an" => {
            let s = spec.specs(2)?;
            an_implication(&resolve_aggregation(s[0])?, &resolve_negation(s[1])?)
        }
        "f_generated" => Ok(f_implication(&FGenerator::by_name(spec.specs(1)?[0].plain()?)?)),
        "g_generated" => Ok(g_implication(&GGenerator::by_name(spec.specs(1)?[0].plain()?)?)),
        "probabilistic" => probabilistic_implication(&resolve_aggregation(spec.specs(1)?[0])?),
        "probabilistic_s" => probabilistic_s_implication(&resolve_aggregation(spec.specs(1)?[0])?),
        _ => builtin_implication(spec.plain()?),
    }
}

pub fn resolve_negation(spec: &ConnectiveSpec) -> Result<Negation> {
    Negation::by_name(spec.plain()?)
}

pub fn resolve_similarity(spec: &ConnectiveSpec) -> Result<SimilarityMeasure> {
    SimilarityMeasure::by_name(spec.plain()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> ConnectiveSpec {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        for text in ["product", "clayton_copula(2)", "residual(clayton_copula(0.5))", "an(max, standard)"] {
            assert_eq!(spec(text).to_string(), text);
        }
        assert_eq!(spec(" residual ( product ) ").to_string(), "residual(product)");
        assert!("residual(".parse::<ConnectiveSpec>().is_err());
        assert!("(x)".parse::<ConnectiveSpec>().is_err());
        assert!("a b".parse::<ConnectiveSpec>().is_err());
    }

    #[test]
    fn resolution() {
        assert_eq!(resolve_aggregation(&spec("product")).unwrap().eval(0.5, 0.4), 0.2);
        assert!((resolve_aggregation(&spec("clayton_copula(1)")).unwrap().eval(0.5, 0.5) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(resolve_implication(&spec("residual(product)")).unwrap().eval(0.5, 0.2), 0.4);
        assert!((resolve_implication(&spec("an(max, standard)")).unwrap().eval(0.7, 0.2) - 0.3).abs() < 1e-12);
        assert_eq!(resolve_aggregation(&spec("induced(goguen)")).unwrap().eval(0.5, 0.4), 0.2);
        assert!((resolve_implication(&spec("f_generated(neg_log)")).unwrap().eval(0.5, 0.25) - 0.5).abs() < 1e-12);
        assert!(matches!(resolve_implication(&spec("zadeh")), Err(Error::UnknownName { .. })));
        assert!(matches!(resolve_implication(&spec("goguen(1)")), Err(Error::InvalidParameters { .. })));
        assert!(matches!(resolve_aggregation(&spec("induced(1)")), Err(Error::InvalidParameters { .. })));
        assert!(resolve_similarity(&spec("jaccard")).is_ok());
        assert!(resolve_negation(&spec("standard")).is_ok());
    }

    #[test]
    fn serde_as_string() {
        let s = spec("residual(clayton_copula(2))");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"residual(clayton_copula(2))\"");
        assert_eq!(serde_json::from_str::<ConnectiveSpec>(&json).unwrap(), s);
    }
}
