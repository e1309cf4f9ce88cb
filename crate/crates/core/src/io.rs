//! Input formats: algebra and functional specs, rational vectors, element
//! and vector labels.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comm_algebra::CommAlgebra;
use crate::linear::SparseVec;
use crate::scalar::Field;
use crate::tau::{TauAlgebra, TauElement, TauSymbol};
use crate::weight_modules::PsiFunctional;
use crate::Q;

/// A malformed input, with where it was found.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { location: location.into(), message: message.into() }
    }
}

pub fn parse_rational(s: &str, at: &str) -> Result<Q, InputError> {
    Q::parse_exact(s).ok_or_else(|| InputError::new(at, format!("`{s}` is not a rational (expected p or p/q)")))
}

pub fn parse_rationals(items: &[String], at: &str) -> Result<Vec<Q>, InputError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s, &format!("{at}[{i}]")))
        .collect()
}

/// `"1,0,-1/2"`; an empty string is the empty list.
pub fn parse_rational_list(s: &str, at: &str) -> Result<Vec<Q>, InputError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let items: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
    parse_rationals(&items, at)
}

pub fn format_rational(x: &Q) -> String {
    x.to_string()
}

/// Coordinates of an element of `A`, checked against its dimension.
pub fn element_of(values: &[Q], dim: usize, at: &str) -> Result<SparseVec<Q>, InputError> {
    if values.len() != dim {
        return Err(InputError::new(at, format!("expected {dim} coordinates, got {}", values.len())));
    }
    Ok(SparseVec::from_dense(values))
}

/// Reads a JSON document; syntax errors carry line and column.
pub fn read_json<T: for<'de> Deserialize<'de>>(text: &str, source: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| {
        InputError::new(format!("{source}:{}:{}", e.line(), e.column()), e.to_string())
    })
}

pub fn read_json_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path)
        .map_err(|e| InputError::new(path.display().to_string(), format!("cannot read: {e}")))?;
    read_json(&text, &path.display().to_string())
}

/// An algebra, by preset or by explicit structure constants.
///
/// Presets: `{"preset": "jet", "N": 3}`, `{"preset": "points", "points": ["1","2"]}`,
/// `{"preset": "poly_mod" | "laurent_mod", "modulus": [...]}` (constant term first),
/// `{"preset": "scalar"}`. Explicit: `{"dim", "labels", "unit", "mult"}` where
/// `mult` lists `[i, j, coeffs]`; unlisted products are zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<(usize, usize, Vec<String>)>>,
}

impl AlgebraSpec {
    pub fn preset(name: &str) -> Self {
        AlgebraSpec { preset: Some(name.to_string()), ..Default::default() }
    }

    /// Command-line form: `scalar`, `jet:3`, `points:1,2`, `poly_mod:0,0,-1,1`,
    /// `laurent_mod:-2,0,1`.
    pub fn from_flag(s: &str) -> Result<Self, InputError> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let list = |a: Option<&str>| -> Result<Vec<String>, InputError> {
            let a = a.ok_or_else(|| InputError::new("--preset", format!("`{name}` needs a list after `:`")))?;
            Ok(a.split(',').map(|x| x.trim().to_string()).collect())
        };
        let mut spec = AlgebraSpec::preset(name);
        match name {
            "scalar" => {}
            "jet" => {
                let a = arg.ok_or_else(|| InputError::new("--preset", "jet needs an order, as in jet:2"))?;
                spec.n = Some(a.parse().map_err(|_| InputError::new("--preset", format!("bad jet order `{a}`")))?);
            }
            "points" => spec.points = Some(list(arg)?),
            "poly_mod" | "laurent_mod" => spec.modulus = Some(list(arg)?),
            other => return Err(InputError::new("--preset", format!("unknown preset `{other}`"))),
        }
        Ok(spec)
    }

    pub fn build(&self, at: &str) -> Result<CommAlgebra<Q>, InputError> {
        let fail = |field: &str, msg: String| InputError::new(format!("{at}.{field}"), msg);
        if let Some(name) = &self.preset {
            for (field, present) in [
                ("dim", self.dim.is_some()),
                ("labels", self.labels.is_some()),
                ("unit", self.unit.is_some()),
                ("mult", self.mult.is_some()),
            ] {
                if present {
                    return Err(fail(field, "not allowed together with a preset".into()));
                }
            }
            let built = match name.as_str() {
                "scalar" => Ok(CommAlgebra::scalar()),
                "jet" => {
                    let n = self.n.ok_or_else(|| fail("N", "jet needs N".into()))?;
                    CommAlgebra::jet(n)
                }
                "points" => {
                    let zs = self.points.as_ref().ok_or_else(|| fail("points", "points needs a list".into()))?;
                    CommAlgebra::points(&parse_rationals(zs, &format!("{at}.points"))?)
                }
                "poly_mod" | "laurent_mod" => {
                    let p = self.modulus.as_ref().ok_or_else(|| fail("modulus", format!("{name} needs a modulus")))?;
                    let p = parse_rationals(p, &format!("{at}.modulus"))?;
                    if name == "poly_mod" {
                        CommAlgebra::poly_mod(&p)
                    } else {
                        CommAlgebra::laurent_mod(&p)
                    }
                }
                other => return Err(fail("preset", format!("unknown preset `{other}`"))),
            };
            return built.map_err(|e| fail("preset", e.to_string()));
        }
        let dim = self.dim.ok_or_else(|| fail("dim", "missing (or give a preset)".into()))?;
        let labels = match &self.labels {
            Some(l) if l.len() != dim => return Err(fail("labels", format!("expected {dim} labels, got {}", l.len()))),
            Some(l) => l.clone(),
            None => (0..dim).map(|i| format!("e{i}")).collect(),
        };
        let unit = self.unit.as_ref().ok_or_else(|| fail("unit", "missing".into()))?;
        let unit = element_of(&parse_rationals(unit, &format!("{at}.unit"))?, dim, &format!("{at}.unit"))?;
        let mut table = vec![vec![SparseVec::zero(); dim]; dim];
        for (idx, (i, j, coeffs)) in self.mult.iter().flatten().enumerate() {
            let here = format!("{at}.mult[{idx}]");
            if *i >= dim || *j >= dim {
                return Err(InputError::new(here, format!("index out of range for dim {dim}")));
            }
            let c = parse_rationals(coeffs, &format!("{here}[2]"))?;
            table[*i][*j] = element_of(&c, dim, &format!("{here}[2]"))?;
        }
        CommAlgebra::from_table(labels, table, unit).map_err(|e| fail("mult", e.to_string()))
    }
}

/// Values of `ψ` on `h⊗a_k`, `K⊗a_k`, `L_0⊗a_k`, aligned with the basis of `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpec {
    pub h: Vec<String>,
    #[serde(rename = "K")]
    pub k: Vec<String>,
    #[serde(rename = "L0")]
    pub l0: Vec<String>,
}

/// Either the full spec or the shorthand `"λ=1,c=1,d0=0"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PsiInput {
    Values(PsiSpec),
    Short(String),
}

impl PsiInput {
    /// The command-line form: shorthand, inline JSON, or `@path`.
    pub fn from_flag(s: &str) -> Result<Self, InputError> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix('@') {
            return Ok(PsiInput::Values(read_json_file(Path::new(path))?));
        }
        if s.starts_with('{') {
            return Ok(PsiInput::Values(read_json(s, "--psi")?));
        }
        Ok(PsiInput::Short(s.to_string()))
    }

    /// The shorthand puts `λ`, `c`, `d0` on the first basis element (the unit
    /// for every preset) and zero elsewhere.
    pub fn build(&self, dim: usize, at: &str) -> Result<PsiFunctional<Q>, InputError> {
        match self {
            PsiInput::Values(p) => {
                let h = parse_rationals(&p.h, &format!("{at}.h"))?;
                let k = parse_rationals(&p.k, &format!("{at}.K"))?;
                let l0 = parse_rationals(&p.l0, &format!("{at}.L0"))?;
                for (name, v) in [("h", &h), ("K", &k), ("L0", &l0)] {
                    if v.len() != dim {
                        return Err(InputError::new(
                            format!("{at}.{name}"),
                            format!("expected {dim} values (one per basis element of A), got {}", v.len()),
                        ));
                    }
                }
                PsiFunctional::new(h, k, l0).map_err(|e| InputError::new(at, e.to_string()))
            }
            PsiInput::Short(s) => {
                let (mut lambda, mut level, mut d0) = (Q::from_int(0), Q::from_int(0), Q::from_int(0));
                for part in s.split(',').filter(|p| !p.trim().is_empty()) {
                    let (key, val) = part
                        .split_once('=')
                        .ok_or_else(|| InputError::new(at, format!("expected key=value, got `{part}`")))?;
                    let x = parse_rational(val.trim(), &format!("{at}.{}", key.trim()))?;
                    match key.trim() {
                        "λ" | "lambda" | "l" => lambda = x,
                        "c" | "K" => level = x,
                        "d0" | "d" => d0 = x,
                        other => return Err(InputError::new(at, format!("unknown key `{other}` (use λ, c, d0)"))),
                    }
                }
                let spread = |x: Q| {
                    let mut v = vec![Q::from_int(0); dim];
                    v[0] = x;
                    v
                };
                PsiFunctional::new(spread(lambda), spread(level), spread(d0))
                    .map_err(|e| InputError::new(at, e.to_string()))
            }
        }
    }
}

/// `"2*X(t^1;a0) + -1/2*L_-1(a0)"`; a bare symbol has coefficient 1.
pub fn parse_element(tau: &TauAlgebra<Q>, s: &str, at: &str) -> Result<TauElement<Q>, InputError> {
    let mut out = TauElement::zero();
    for term in s.split(" + ") {
        let term = term.trim();
        let (coeff, sym) = match term.split_once('*') {
            Some((c, rest)) => (parse_rational(c.trim(), at)?, rest),
            None => (Q::from_int(1), term),
        };
        let sym = tau.parse_symbol(sym).map_err(|e| InputError::new(at, e.to_string()))?;
        out.add_term(sym, coeff);
    }
    Ok(out)
}

/// `"Y(t^0;a0)·X(t^-1;a0)·v"` as the word of symbols applied to `v`,
/// outermost first. `.` is accepted in place of `·`.
pub fn parse_word(tau: &TauAlgebra<Q>, s: &str, at: &str) -> Result<Vec<TauSymbol>, InputError> {
    let s = s.trim().replace('·', "\u{1}").replace(")." , ")\u{1}");
    let mut parts: Vec<&str> = s.split('\u{1}').map(str::trim).collect();
    if parts.pop() != Some("v") {
        return Err(InputError::new(at, "a vector label must end in `v`"));
    }
    parts
        .into_iter()
        .map(|p| tau.parse_symbol(p).map_err(|e| InputError::new(at, e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn preset_flags() {
        assert_eq!(AlgebraSpec::from_flag("jet:3").unwrap().build("a").unwrap().dim(), 3);
        assert_eq!(AlgebraSpec::from_flag("points:1,2").unwrap().build("a").unwrap().dim(), 2);
        assert_eq!(AlgebraSpec::from_flag("scalar").unwrap().build("a").unwrap().dim(), 1);
        assert!(AlgebraSpec::from_flag("cube:3").is_err());
        let e = AlgebraSpec::from_flag("points:1,1").unwrap().build("algebra").unwrap_err();
        assert_eq!(e.location, "algebra.preset");
    }

    #[test]
    fn explicit_algebra_with_locations() {
        let text = r#"{"dim": 2, "unit": ["1", "0"], "mult": [[0,0,["1","0"]],[0,1,["0","1"]],[1,0,["0","1"]],[1,1,["0","0"]]]}"#;
        let spec: AlgebraSpec = read_json(text, "alg.json").unwrap();
        let a = spec.build("algebra").unwrap();
        assert!(a.validate().is_valid());
        assert_eq!(a.labels(), ["e0", "e1"]);
        assert!(a.basis_product(1, 1).is_zero());

        let bad = r#"{"dim": 2, "unit": ["1", "0"], "mult": [[0,0,["1","x"]]]}"#;
        let e = read_json::<AlgebraSpec>(bad, "alg.json").unwrap().build("algebra").unwrap_err();
        assert_eq!(e.location, "algebra.mult[0][2][1]");

        let e = read_json::<AlgebraSpec>("{\"dim\": 2,\n \"colour\": 1}", "alg.json").unwrap_err();
        assert!(e.location.starts_with("alg.json:2:"), "{e}");
    }

    #[test]
    fn psi_forms() {
        let p = PsiInput::from_flag("λ=1,c=2,d0=1/2").unwrap().build(2, "psi").unwrap();
        assert_eq!(p.h, vec![Q::from_int(1), Q::from_int(0)]);
        assert_eq!(p.l0[0], Q::from_ratio(1, 2));
        let p = PsiInput::from_flag(r#"{"h": ["1","0"], "K": ["1","0"], "L0": ["0","0"]}"#).unwrap();
        assert!(p.build(2, "psi").is_ok());
        let e = p.build(3, "psi").unwrap_err();
        assert_eq!(e.location, "psi.h");
        assert!(PsiInput::from_flag("mu=1").unwrap().build(1, "psi").is_err());
    }

    #[test]
    fn words_and_elements() {
        let tau = TauAlgebra::sl2(Arc::new(CommAlgebra::<Q>::scalar()));
        let w = parse_word(&tau, "Y(t^0;a0)·X(t^-1;a0)·v", "v").unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(parse_word(&tau, "Y(t^0;a0).v", "v").unwrap().len(), 1);
        assert!(parse_word(&tau, "v", "v").unwrap().is_empty());
        assert!(parse_word(&tau, "Y(t^0;a0)", "v").is_err());
        let e = parse_element(&tau, "2*X(t^1;a0) + -1/2*L_-1(a0)", "el").unwrap();
        assert_eq!(tau.format_element(&e), "2*X(t^1;a0) + -1/2*L_-1(a0)");
        assert!(parse_element(&tau, "X(t^1;a3)", "el").is_err());
    }
}
