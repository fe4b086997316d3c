//! Argument value parsers, reports, CSV tables and trajectory dumps.
//!
//! Trajectory format, one record per line after a `#` header:
//!
//! ```text
//! # symquot trajectory
//! # version 0.1.0
//! # config <sha256 of the canonical config>
//! # columns t mu re1 im1 re2 im2 ...
//! 0.00000000000000000e0 4.00000000000000000e0 1.00000000000000000e0 ...
//! ...
//! # end converged=true phi_residual=... grad_norm=... steps=...
//! ```
//!
//! Numbers are printed with `{:.17e}`, which round-trips every `f64`.

use serde_json::{json, Map, Value};
use symquot_core::{Complex, FlowResult, Rational, StateVector};

use crate::config::{format_rational, parse_rational};
use crate::CliError;

pub fn parse_complex(s: &str) -> Result<Complex, CliError> {
    let bad = || CliError::Usage(format!("not a complex number: {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not the leading one or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |x: &str| -> Result<f64, CliError> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => Ok(Complex::new(
            body[..i].parse().map_err(|_| bad())?,
            imag(&body[i..])?,
        )),
        None => Ok(Complex::new(0.0, imag(body)?)),
    }
}

pub fn parse_point(s: &str) -> Result<StateVector, CliError> {
    Ok(StateVector(
        s.split(',').map(parse_complex).collect::<Result<_, _>>()?,
    ))
}

pub fn parse_level(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(parse_rational).collect()
}

/// `k`, `lo..hi` (inclusive) or `a,b,c`.
pub fn parse_degrees(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("bad degree list: {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let lo: u64 = a.trim().parse().map_err(|_| bad())?;
        let hi: u64 = b.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

pub fn level_string(level: &[Rational]) -> String {
    level
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn state_json(v: &StateVector) -> Value {
    Value::Array(v.0.iter().map(|z| json!([z.re, z.im])).collect())
}

/// Report envelope: tool, version, command, seed, config hash and body.
pub fn report(
    command: &str,
    seed: u64,
    config_hash: Option<&str>,
    body: Map<String, Value>,
) -> String {
    let mut top = Map::new();
    top.insert("tool".into(), json!("symquot"));
    top.insert("version".into(), json!(crate::VERSION));
    top.insert("command".into(), json!(command));
    top.insert("seed".into(), json!(seed));
    top.insert(
        "config_hash".into(),
        config_hash.map_or(Value::Null, |h| json!(h)),
    );
    for (k, v) in body {
        top.insert(k, v);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
    s.push('\n');
    s
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

/// CSV with a `#` provenance line, a header and one line per row.
pub fn csv(
    command: &str,
    config_hash: Option<&str>,
    columns: &[&str],
    rows: &[Map<String, Value>],
) -> String {
    let mut out = format!(
        "# symquot {} {command} config={}\n",
        crate::VERSION,
        config_hash.unwrap_or("none")
    );
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| csv_cell(row.get(*c).unwrap_or(&Value::Null)))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn trajectory(config_hash: &str, result: &FlowResult) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let n = result.limit.len();
    let _ = writeln!(out, "# symquot trajectory");
    let _ = writeln!(out, "# version {}", crate::VERSION);
    let _ = writeln!(out, "# config {config_hash}");
    let cols: Vec<String> = (1..=n)
        .flat_map(|j| [format!("re{j}"), format!("im{j}")])
        .collect();
    let _ = writeln!(out, "# columns t mu {}", cols.join(" "));
    for s in &result.samples {
        let _ = write!(out, "{:.17e} {:.17e}", s.t, s.mu);
        for z in &s.state.0 {
            let _ = write!(out, " {:.17e} {:.17e}", z.re, z.im);
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "# end converged={} phi_residual={:.17e} grad_norm={:.17e} steps={}",
        result.converged, result.phi_residual, result.grad_norm, result.steps
    );
    out
}
