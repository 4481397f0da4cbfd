//! Line-based chart description.
//!
//! ```text
//! # flat model
//! nu = 1
//! trunc = 8
//! omega 1 2 = 1
//! omega_inv 1 2 = -1
//! gamma 1 1 1 = x2
//! leaf 2 = 0
//! convention = delta:+ lift:+
//! ```
//!
//! Indices are 1-based. Unlisted entries are zero; an `omega` or
//! `omega_inv` entry also sets its antisymmetric partner unless that
//! partner is listed explicitly.

use fedosov_core::fedosov::Convention;
use fedosov_core::geometry::{GeometryData, LeafSpec};
use fedosov_core::ring::{parse_polynomial, Polynomial, Rational, VarSpace};
use fedosov_core::weyl::Symplectic;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Range { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
}

#[derive(Clone, Debug)]
pub struct Config {
    pub nu: usize,
    pub trunc: u32,
    /// Row-major `2ν × 2ν` matrices.
    pub omega: Vec<Polynomial>,
    pub omega_inv: Vec<Polynomial>,
    /// `Γ^k_{ij}` at `(k·2ν + i)·2ν + j`.
    pub gamma: Vec<Polynomial>,
    pub leaf: Option<Vec<Rational>>,
    pub convention: Option<Convention>,
}

impl Config {
    pub fn dim(&self) -> usize {
        2 * self.nu
    }

    /// The geometry described by the file, not yet validated.
    pub fn geometry(&self) -> Result<GeometryData, fedosov_core::GeometryError> {
        let sym = Symplectic::new(self.nu, self.omega.clone(), self.omega_inv.clone());
        GeometryData::new(sym, self.gamma.clone())
    }

    pub fn leaf_spec(&self) -> Option<LeafSpec> {
        self.leaf.clone().map(|c| LeafSpec::new(self.nu, c))
    }
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    indices: Vec<&'a str>,
    value: &'a str,
}

fn split_lines(text: &str) -> Result<Vec<Line<'_>>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (lhs, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: number,
            message: format!("expected `key [indices] = value`, got `{content}`"),
        })?;
        let mut words = lhs.split_whitespace();
        let key = words.next().ok_or_else(|| ConfigError::Syntax {
            line: number,
            message: "missing key before `=`".into(),
        })?;
        out.push(Line {
            number,
            key,
            indices: words.collect(),
            value: value.trim(),
        });
    }
    Ok(out)
}

fn syntax(line: &Line<'_>, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax {
        line: line.number,
        message: message.into(),
    }
}

fn integer<T: std::str::FromStr>(line: &Line<'_>) -> Result<T, ConfigError> {
    if !line.indices.is_empty() {
        return Err(syntax(line, format!("`{}` takes no indices", line.key)));
    }
    line.value
        .parse()
        .map_err(|_| syntax(line, format!("`{}` must be a non-negative integer, got `{}`", line.key, line.value)))
}

/// Parses `n` one-based indices, each in `lo..=hi`, into zero-based ones.
fn indices(line: &Line<'_>, n: usize, lo: usize, hi: usize) -> Result<Vec<usize>, ConfigError> {
    if line.indices.len() != n {
        return Err(syntax(
            line,
            format!("`{}` takes {n} indices, got {}", line.key, line.indices.len()),
        ));
    }
    line.indices
        .iter()
        .map(|s| {
            let i: usize = s
                .parse()
                .map_err(|_| syntax(line, format!("index `{s}` is not an integer")))?;
            if i < lo || i > hi {
                return Err(ConfigError::Range {
                    line: line.number,
                    message: format!("index {i} out of range {lo}..={hi} for `{}`", line.key),
                });
            }
            Ok(i - 1)
        })
        .collect()
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let lines = split_lines(text)?;
    let mut nu = None;
    let mut trunc = None;
    for l in &lines {
        match l.key {
            "nu" if nu.is_some() => return Err(syntax(l, "duplicate `nu`")),
            "nu" => {
                let n: usize = integer(l)?;
                if n == 0 {
                    return Err(ConfigError::Range {
                        line: l.number,
                        message: "`nu` must be at least 1".into(),
                    });
                }
                nu = Some(n);
            }
            "trunc" if trunc.is_some() => return Err(syntax(l, "duplicate `trunc`")),
            "trunc" => trunc = Some(integer::<u32>(l)?),
            _ => {}
        }
    }
    let nu = nu.ok_or(ConfigError::Missing("nu"))?;
    let trunc = trunc.ok_or(ConfigError::Missing("trunc"))?;
    let dim = 2 * nu;
    let space = VarSpace::new(nu);
    let poly = |l: &Line<'_>| {
        parse_polynomial(l.value, &space).map_err(|e| syntax(l, format!("{e}")))
    };

    let mut omega: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
    let mut omega_inv: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
    let mut gamma: BTreeMap<(usize, usize, usize), Polynomial> = BTreeMap::new();
    let mut leaf: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut convention = None;
    for l in &lines {
        match l.key {
            "nu" | "trunc" => {}
            "omega" | "omega_inv" => {
                let ij = indices(l, 2, 1, dim)?;
                let map = if l.key == "omega" { &mut omega } else { &mut omega_inv };
                if map.insert((ij[0], ij[1]), poly(l)?).is_some() {
                    return Err(syntax(l, format!("duplicate entry `{} {} {}`", l.key, ij[0] + 1, ij[1] + 1)));
                }
            }
            "gamma" => {
                let kij = indices(l, 3, 1, dim)?;
                if gamma.insert((kij[0], kij[1], kij[2]), poly(l)?).is_some() {
                    return Err(syntax(l, "duplicate `gamma` entry"));
                }
            }
            "leaf" => {
                let b = indices(l, 1, nu + 1, dim)?[0];
                let c = poly(l)?
                    .as_constant()
                    .ok_or_else(|| syntax(l, format!("leaf constant must be rational, got `{}`", l.value)))?;
                if leaf.insert(b, c).is_some() {
                    return Err(syntax(l, "duplicate `leaf` entry"));
                }
            }
            "convention" => {
                if !l.indices.is_empty() {
                    return Err(syntax(l, "`convention` takes no indices"));
                }
                convention = Some(l.value.parse::<Convention>().map_err(|e| syntax(l, e))?);
            }
            other => return Err(syntax(l, format!("unknown key `{other}`"))),
        }
    }
    if omega.is_empty() {
        return Err(ConfigError::Missing("omega"));
    }
    if omega_inv.is_empty() {
        return Err(ConfigError::Missing("omega_inv"));
    }

    let matrix = |entries: &BTreeMap<(usize, usize), Polynomial>| {
        let mut m = vec![Polynomial::zero(dim); dim * dim];
        for (&(i, j), p) in entries {
            m[i * dim + j] = p.clone();
            if !entries.contains_key(&(j, i)) {
                m[j * dim + i] = -p.clone();
            }
        }
        m
    };
    let mut g = vec![Polynomial::zero(dim); dim * dim * dim];
    for (&(k, i, j), p) in &gamma {
        g[(k * dim + i) * dim + j] = p.clone();
    }
    let leaf = (!leaf.is_empty()).then(|| {
        (nu..dim)
            .map(|b| leaf.get(&b).cloned().unwrap_or_else(|| Rational::from_i64(0)))
            .collect()
    });
    Ok(Config {
        nu,
        trunc,
        omega: matrix(&omega),
        omega_inv: matrix(&omega_inv),
        gamma: g,
        leaf,
        convention,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT: &str = "nu = 1\ntrunc = 8\nomega 1 2 = 1\nomega_inv 1 2 = -1\n";

    #[test]
    fn flat_model() {
        let c = parse_config(FLAT).unwrap();
        assert_eq!((c.nu, c.trunc), (1, 8));
        assert_eq!(c.omega[2], Polynomial::constant(2, Rational::from_i64(-1)));
        assert!(c.gamma.iter().all(Polynomial::is_zero));
        assert!(c.leaf.is_none() && c.convention.is_none());
        assert!(c.geometry().unwrap().validated().is_ok());
    }

    #[test]
    fn missing_inverse_is_named() {
        let err = parse_config("nu = 1\ntrunc = 8\nomega 1 2 = 1\n").unwrap_err();
        assert_eq!(err, ConfigError::Missing("omega_inv"));
        assert!(err.to_string().contains("omega_inv"));
    }

    #[test]
    fn index_range_is_checked() {
        let err = parse_config(&format!("{FLAT}gamma 1 1 3 = x2\n")).unwrap_err();
        assert!(matches!(err, ConfigError::Range { line: 5, .. }), "{err}");
        assert!(err.to_string().contains("index 3 out of range 1..=2"), "{err}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config("nu = 1\n# comment\ntrunc = 8\nomega 1 2 = x3\n").unwrap_err();
        assert!(err.to_string().starts_with("line 4:"), "{err}");
        assert!(parse_config("nu = 1\ntrunc = 8\nbogus = 1\n").unwrap_err().to_string().starts_with("line 3:"));
        assert!(parse_config("nu = 1\ntrunc = 8\nleaf 1 = 0\n").is_err());
        assert!(parse_config("nu = 1\ntrunc = 8\nleaf 2 = x1\n").is_err());
    }

    #[test]
    fn leaf_and_convention() {
        let c = parse_config(&format!("{FLAT}leaf 2 = 3/2 # transversal\nconvention = delta:+ lift:+\n")).unwrap();
        assert_eq!(c.leaf.unwrap(), vec![fedosov_core::ring::rat(3, 2)]);
        assert_eq!(c.convention.unwrap(), Convention::reference());
    }
}
