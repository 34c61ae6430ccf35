//! Line-oriented circuit text format.
//!
//! ```text
//! circuit   = header wire* meta* stmt* phase
//! header    = "wires: " N ";"
//! wire      = "wire w" K ": dim " (2|3) ";"
//! meta      = ("target: " LABEL | "coupling: " FLOAT) ";"
//! stmt      = NAME ["(" FLOAT ("," FLOAT)* ")"] " w" K ("," " w" K)* ";"
//! phase     = "phase(" FLOAT ");"
//! ```
//!
//! Floats use the shortest representation that parses back to the same
//! value. Lines starting with `//` are comments.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::{Circuit, Gate, GateKind};
use crate::{Error, Result};

fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn emit_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "wires: {};", circuit.dims().len());
    for (k, d) in circuit.dims().iter().enumerate() {
        let _ = writeln!(out, "wire w{k}: dim {d};");
    }
    if let Some(t) = &circuit.target {
        let _ = writeln!(out, "target: {t};");
    }
    if let Some(j) = circuit.coupling {
        let _ = writeln!(out, "coupling: {};", num(j));
    }
    for g in circuit.gates() {
        out.push_str(g.kind.name());
        if !g.params.is_empty() {
            let ps: Vec<String> = g.params.iter().map(|&p| num(p)).collect();
            let _ = write!(out, "({})", ps.join(", "));
        }
        let ws: Vec<String> = g.wires.iter().map(|w| format!("w{w}")).collect();
        let _ = writeln!(out, " {};", ws.join(", "));
    }
    let _ = writeln!(out, "phase({});", num(circuit.phase()));
    out
}

fn err(line: usize, msg: impl core::fmt::Display) -> Error {
    Error::Circuit(format!("line {line}: {msg}"))
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| err(line, format!("bad number {:?}", s.trim())))
}

fn parse_wire(s: &str, line: usize) -> Result<usize> {
    s.trim()
        .strip_prefix('w')
        .and_then(|k| k.parse::<usize>().ok())
        .ok_or_else(|| err(line, format!("bad wire {:?}", s.trim())))
}

pub fn parse_text(text: &str) -> Result<Circuit> {
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let body = line.strip_suffix(';').ok_or_else(|| err(i + 1, "missing ';'"))?;
        statements.push((i + 1, body.trim()));
    }
    let mut iter = statements.into_iter().peekable();
    let (ln, header) = iter.next().ok_or_else(|| Error::Circuit("empty circuit text".to_string()))?;
    let n = header
        .strip_prefix("wires:")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| err(ln, "expected 'wires: N;'"))?;
    let mut dims = Vec::with_capacity(n);
    for k in 0..n {
        let (ln, decl) = iter.next().ok_or_else(|| err(ln, format!("missing declaration of w{k}")))?;
        let rest = decl.strip_prefix("wire").ok_or_else(|| err(ln, "expected wire declaration"))?;
        let (name, dim) = rest.split_once(':').ok_or_else(|| err(ln, "expected 'wire wK: dim D;'"))?;
        if parse_wire(name, ln)? != k {
            return Err(err(ln, format!("wires must be declared in order, expected w{k}")));
        }
        let d = dim
            .trim()
            .strip_prefix("dim")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| err(ln, "expected 'dim D'"))?;
        dims.push(d);
    }
    let mut circuit = Circuit::new(dims)?;
    let mut phase = 0.0;
    for (ln, stmt) in iter {
        if let Some(t) = stmt.strip_prefix("target:") {
            circuit.target = Some(t.trim().to_string());
            continue;
        }
        if let Some(j) = stmt.strip_prefix("coupling:") {
            circuit.coupling = Some(parse_f64(j, ln)?);
            continue;
        }
        let name_end = stmt.find(|ch: char| ch == '(' || ch.is_whitespace()).unwrap_or(stmt.len());
        let name = &stmt[..name_end];
        let kind = GateKind::from_name(name).ok_or_else(|| err(ln, format!("unknown gate {name:?}")))?;
        let mut rest = stmt[name_end..].trim_start();
        let mut params = Vec::new();
        if let Some(open) = rest.strip_prefix('(') {
            let (inside, after) = open.split_once(')').ok_or_else(|| err(ln, "unclosed '('"))?;
            for p in inside.split(',') {
                params.push(parse_f64(p, ln)?);
            }
            rest = after.trim();
        }
        let wires = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(|w| parse_wire(w, ln)).collect::<Result<Vec<_>>>()?
        };
        let gate = Gate::new(kind, params, wires);
        if kind == GateKind::Phase {
            // Validate, but keep the literal value rather than re-wrapping.
            let mut probe = Circuit::new(circuit.dims().to_vec())?;
            probe.push(gate.clone()).map_err(|e| err(ln, e))?;
            phase += gate.params[0];
        } else {
            circuit.push(gate).map_err(|e| err(ln, e))?;
        }
    }
    circuit.set_phase(phase);
    Ok(circuit)
}
