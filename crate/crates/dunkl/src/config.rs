//! Run configuration. A JSON config file carries the same keys as the
//! command-line flags (with `_` for `-`); flags win over the file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use dunkl_core::field::{parse_rational, Rational};

use crate::error::{CliError, CliResult};
use crate::system::{parse_rational_list, parse_roots, SystemSpec};

/// A list written either as `"1/2,1/2"` or as `["1/2", "1/2"]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ListSpec {
    Text(String),
    Items(Vec<String>),
}

/// Roots written either as `"1,0;-1,0"` or as `[["1","0"],["-1","0"]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootsSpec {
    Text(String),
    Vectors(Vec<Vec<String>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Knobs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<ListSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootsSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laplacian: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub export: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

macro_rules! prefer {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Knobs { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Knobs {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Field-wise: values set here win over `file`.
    pub fn over(self, file: Knobs) -> Knobs {
        let (a, b) = (self, file);
        prefer!(a, b; family, d, m, kappa, roots, g, lambda, nmax, delta, quad_order, tol, zero_threshold, mode,
            seed, samples, degree, grid, poly, axis, laplacian, export, format)
    }

    pub fn format(&self) -> CliResult<Format> {
        match self.format.as_deref().unwrap_or("json") {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(CliError::Config(format!("unknown format {other:?} (expected json, csv or text)"))),
        }
    }

    pub fn kappa_list(&self) -> CliResult<Vec<Rational>> {
        match &self.kappa {
            None => Ok(Vec::new()),
            Some(ListSpec::Text(s)) => parse_rational_list(s),
            Some(ListSpec::Items(v)) => parse_rational_list(&v.join(",")),
        }
    }

    fn root_list(&self) -> CliResult<Option<Vec<Vec<Rational>>>> {
        match &self.roots {
            None => Ok(None),
            Some(RootsSpec::Text(s)) => parse_roots(s).map(Some),
            Some(RootsSpec::Vectors(v)) => v.iter().map(|r| parse_rational_list(&r.join(","))).collect::<CliResult<_>>().map(Some),
        }
    }

    pub fn has_system(&self) -> bool {
        self.family.is_some()
    }

    pub fn system(&self) -> CliResult<SystemSpec> {
        let family = self.family.as_deref().ok_or_else(|| CliError::Config("missing --family".into()))?;
        SystemSpec::new(family, self.d, self.m, self.kappa_list()?, self.root_list()?)
    }

    pub fn lambda(&self) -> CliResult<Option<Rational>> {
        self.lambda.as_deref().map(|s| exact("lambda", s)).transpose()
    }

    pub fn delta(&self) -> CliResult<Option<Rational>> {
        self.delta.as_deref().map(|s| exact("delta", s)).transpose()
    }
}

fn exact(name: &str, s: &str) -> CliResult<Rational> {
    parse_rational(s).ok_or_else(|| CliError::Config(format!("{name}: not a rational number: {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dunkl_core::field::rational;

    #[test]
    fn flags_win_over_file() {
        let file: Knobs = serde_json::from_str(r#"{"family":"z2","d":2,"kappa":["1/2","1/2"],"nmax":10}"#).unwrap();
        let flags = Knobs { nmax: Some(6), ..Knobs::default() };
        let k = flags.over(file);
        assert_eq!(k.nmax, Some(6));
        assert_eq!(k.kappa_list().unwrap(), vec![rational(1, 2), rational(1, 2)]);
        assert_eq!(k.system().unwrap().dim(), 2);
    }

    #[test]
    fn unknown_keys_and_formats_are_errors() {
        assert!(serde_json::from_str::<Knobs>(r#"{"nmx":3}"#).is_err());
        assert!(Knobs { format: Some("xml".into()), ..Knobs::default() }.format().is_err());
        assert!(Knobs { lambda: Some("1/0".into()), ..Knobs::default() }.lambda().is_err());
    }

    #[test]
    fn roots_in_both_spellings() {
        let a: Knobs = serde_json::from_str(r#"{"family":"custom","roots":"1,0;-1,0","kappa":"1,1"}"#).unwrap();
        let b: Knobs = serde_json::from_str(r#"{"family":"custom","roots":[["1","0"],["-1","0"]],"kappa":"1,1"}"#).unwrap();
        assert_eq!(a.system().unwrap(), b.system().unwrap());
    }
}
