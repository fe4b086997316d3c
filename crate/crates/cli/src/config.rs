//! Representation config files.
//!
//! ```json
//! {"kind": "torus", "weights": [[1, -1]], "mode": "affine", "level": ["0"]}
//! {"kind": "su2", "spins": [3], "mode": "projective"}
//! ```
//!
//! `weights` is row-major `d × n`. `level` is optional (zero by default);
//! entries are integers or strings `"p/q"`. For SU(2) the Lie algebra basis
//! is `e_a = (i/2) σ_a`, orthonormal for `⟨X, Y⟩ = -2 tr(XY)`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use symquot_core::{build_rep, KindConfig, Mode, Rational, RepConfig, RepSpec};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Torus,
    Su2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeTag {
    Affine,
    Projective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelEntry {
    Int(i64),
    Text(String),
}

/// On-disk form. Unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spins: Option<Vec<i64>>,
    pub mode: ModeTag,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub level: Vec<LevelEntry>,
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Config(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num.into(), den.into()))
}

pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl ConfigFile {
    pub fn to_rep_config(&self) -> Result<RepConfig, CliError> {
        let kind = match (&self.kind, &self.weights, &self.spins) {
            (KindTag::Torus, Some(w), None) => KindConfig::Torus {
                weights: w
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|&x| Rational::from_integer(x.into()))
                            .collect()
                    })
                    .collect(),
            },
            (KindTag::Su2, None, Some(s)) => KindConfig::Su2 { spins: s.clone() },
            (KindTag::Torus, _, _) => {
                return Err(CliError::Config(
                    "torus configs need `weights` and no `spins`".into(),
                ))
            }
            (KindTag::Su2, _, _) => {
                return Err(CliError::Config(
                    "su2 configs need `spins` and no `weights`".into(),
                ))
            }
        };
        let level = self
            .level
            .iter()
            .map(|e| match e {
                LevelEntry::Int(i) => Ok(Rational::from_integer((*i).into())),
                LevelEntry::Text(s) => parse_rational(s),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mode = match self.mode {
            ModeTag::Affine => Mode::Affine,
            ModeTag::Projective => Mode::Projective,
        };
        Ok(RepConfig { kind, mode, level })
    }

    /// Canonical form of a built representation; levels always as strings.
    pub fn from_rep(rep: &RepSpec) -> ConfigFile {
        let (kind, weights, spins) = match rep.kind() {
            symquot_core::RepKind::Torus { weights } => {
                (KindTag::Torus, Some(weights.clone()), None)
            }
            symquot_core::RepKind::Su2 { spins } => (
                KindTag::Su2,
                None,
                Some(spins.iter().map(|&s| i64::from(s)).collect()),
            ),
        };
        ConfigFile {
            kind,
            weights,
            spins,
            mode: match rep.mode() {
                Mode::Affine => ModeTag::Affine,
                Mode::Projective => ModeTag::Projective,
            },
            level: rep
                .level()
                .iter()
                .map(|x| LevelEntry::Text(format_rational(x)))
                .collect(),
        }
    }
}

pub fn parse_config(text: &str) -> Result<RepSpec, CliError> {
    let file: ConfigFile =
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(build_rep(&file.to_rep_config()?)?)
}

pub fn load_config(path: &Path) -> Result<RepSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Canonical JSON of a representation (compact, fixed field order).
pub fn serialize_config(rep: &RepSpec) -> String {
    serde_json::to_string(&ConfigFile::from_rep(rep)).expect("config serializes")
}

/// Hex SHA-256 of the canonical JSON.
pub fn config_hash(rep: &RepSpec) -> String {
    let digest = Sha256::digest(serialize_config(rep).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        for text in [
            r#"{"kind":"torus","weights":[[1,-1]],"mode":"affine"}"#,
            r#"{"kind":"torus","weights":[[1,0,-1],[2,1,1]],"mode":"projective","level":["1/3", -2]}"#,
            r#"{"kind":"su2","spins":[3,1],"mode":"projective","level":[0,0,0]}"#,
        ] {
            let rep = parse_config(text).unwrap();
            let again = parse_config(&serialize_config(&rep)).unwrap();
            assert_eq!(rep, again);
            assert_eq!(serialize_config(&rep), serialize_config(&again));
        }
    }

    #[test]
    fn malformed_configs_are_rejected() {
        for text in [
            r#"{"kind":"torus","weights":[[1,-1],[1]],"mode":"affine"}"#,
            r#"{"kind":"torus","spins":[1],"mode":"affine"}"#,
            r#"{"kind":"torus","weights":[[1.5,-1]],"mode":"affine"}"#,
            r#"{"kind":"torus","weights":[[1]],"mode":"projective"}"#,
            r#"{"kind":"torus","weights":[[1,-1]],"mode":"affine","level":["1/0"]}"#,
            r#"{"kind":"torus","weights":[[1,-1]],"mode":"affine","colour":"red"}"#,
            r#"{"kind":"su2","spins":[3],"mode":"affine","level":[1,0,0]}"#,
        ] {
            assert!(parse_config(text).is_err(), "{text}");
        }
    }

    #[test]
    fn hash_depends_on_canonical_form_only() {
        let a = parse_config(r#"{"kind":"torus","weights":[[1,-1]],"mode":"affine","level":[0]}"#)
            .unwrap();
        let b =
            parse_config(r#"{"mode":"affine","kind":"torus","weights":[[1,-1]],"level":["0/5"]}"#)
                .unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }
}
