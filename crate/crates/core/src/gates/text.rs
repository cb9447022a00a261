//! Gate-list text formats.
//!
//! Native format, one gate per line in application order:
//!
//! ```text
//! # comment
//! R 1 y- 1.570796
//! CNOT 3 1
//! ```
//!
//! Product strings as printed in the appendix tables, written right to left:
//! `R1x-(pi).R1y-(t1).CNOT31`. Angles are decimals, `pi` multiples such as
//! `3pi/2`, or names resolved from a parameter map.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Axis, Circuit, Gate};
use crate::error::{Error, Result};

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses the native line format.
pub fn parse_gate_list(text: &str) -> Result<Circuit> {
    let mut gates = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut fields = Vec::new();
        let mut col = 0;
        for tok in body.split_whitespace() {
            let start = body[col..].find(tok).map(|p| p + col).unwrap_or(col);
            col = start + tok.len();
            fields.push((start + 1, tok));
        }
        let Some(&(c0, head)) = fields.first() else {
            continue;
        };
        let int = |idx: usize| -> Result<usize> {
            let (c, t) = fields
                .get(idx)
                .copied()
                .ok_or_else(|| parse_err(line, raw.len() + 1, "missing field"))?;
            t.parse::<usize>()
                .map_err(|_| parse_err(line, c, format!("expected qubit index, found '{t}'")))
        };
        let gate = match head {
            "R" => {
                if fields.len() != 4 {
                    return Err(parse_err(line, c0, "expected 'R <qubit> <axis> <theta>'"));
                }
                let qubit = int(1)?;
                let (ca, ta) = fields[2];
                let axis: Axis = ta.parse().map_err(|m: String| parse_err(line, ca, m))?;
                let (ct, tt) = fields[3];
                let theta: f64 = tt
                    .parse()
                    .map_err(|_| parse_err(line, ct, format!("expected angle, found '{tt}'")))?;
                Gate::Rotation { qubit, axis, theta }
            }
            "CNOT" => {
                if fields.len() != 3 {
                    return Err(parse_err(line, c0, "expected 'CNOT <control> <target>'"));
                }
                Gate::Cnot {
                    control: int(1)?,
                    target: int(2)?,
                }
            }
            other => return Err(parse_err(line, c0, format!("unknown gate '{other}'"))),
        };
        gate.validate().map_err(|e| parse_err(line, c0, e.to_string()))?;
        gates.push(gate);
    }
    Circuit::new(gates)
}

/// Native format with angles printed to 6 decimals.
pub fn serialize_gate_list(c: &Circuit) -> String {
    let mut out = String::new();
    for g in &c.gates {
        match *g {
            Gate::Rotation { qubit, axis, theta } => {
                writeln!(out, "R {qubit} {} {theta:.6}", axis.token()).unwrap();
            }
            Gate::Cnot { control, target } => {
                writeln!(out, "CNOT {control} {target}").unwrap();
            }
        }
    }
    out
}

/// Splits on `.` outside parentheses, keeping the byte offset of each piece.
fn split_product(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '.' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

fn parse_angle(expr: &str, params: &BTreeMap<String, f64>) -> std::result::Result<f64, String> {
    let e = expr.trim();
    if let Ok(v) = e.parse::<f64>() {
        return Ok(v);
    }
    if let Some(&v) = params.get(e) {
        return Ok(v);
    }
    if let Some(pos) = e.find("pi") {
        let (num, rest) = (&e[..pos], &e[pos + 2..]);
        let k = if num.is_empty() {
            1.0
        } else {
            num.parse::<f64>().map_err(|_| format!("bad multiplier in '{e}'"))?
        };
        let d = if rest.is_empty() {
            1.0
        } else if let Some(den) = rest.strip_prefix('/') {
            den.parse::<f64>().map_err(|_| format!("bad denominator in '{e}'"))?
        } else {
            return Err(format!("bad angle '{e}'"));
        };
        return Ok(k * std::f64::consts::PI / d);
    }
    Err(format!("unknown angle '{e}'"))
}

/// Parses a right-to-left product string into a circuit in application order.
pub fn parse_product_string(s: &str, params: &BTreeMap<String, f64>) -> Result<Circuit> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut gates = Vec::new();
    for (offset, tok) in split_product(&compact) {
        let col = offset + 1;
        let err = |m: String| parse_err(1, col, m);
        let gate = if let Some(rest) = tok.strip_prefix("CNOT") {
            let digits: Vec<usize> = rest
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| err(format!("bad CNOT token '{tok}'")))?;
            if digits.len() != 2 {
                return Err(err(format!("bad CNOT token '{tok}'")));
            }
            Gate::Cnot {
                control: digits[0],
                target: digits[1],
            }
        } else if let Some(rest) = tok.strip_prefix('R') {
            let open = rest.find('(').ok_or_else(|| err(format!("missing angle in '{tok}'")))?;
            let close = rest
                .strip_suffix(')')
                .ok_or_else(|| err(format!("unclosed angle in '{tok}'")))?
                .len();
            let head = &rest[..open];
            let mut chars = head.chars();
            let qubit = chars
                .next()
                .and_then(|c| c.to_digit(10))
                .ok_or_else(|| err(format!("missing qubit in '{tok}'")))? as usize;
            let axis: Axis = chars.as_str().parse().map_err(err)?;
            let theta = parse_angle(&rest[open + 1..close], params).map_err(err)?;
            Gate::Rotation { qubit, axis, theta }
        } else {
            return Err(err(format!("unknown token '{tok}'")));
        };
        gate.validate().map_err(|e| err(e.to_string()))?;
        gates.push(gate);
    }
    gates.reverse();
    Circuit::new(gates)
}
