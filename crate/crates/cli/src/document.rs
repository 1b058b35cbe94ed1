//! JSON interchange: channel documents, ensembles and codes.
//!
//! Complex numbers are `[re, im]` pairs (a bare number is read as a real entry); matrices are
//! row-major nested arrays. A channel document is
//! `{"d_in": d, "d_out": d', "kind": ..., "payload": ...}` with `kind` one of `kraus`, `choi`,
//! `unitary`, `depolarizing`, `constant`, `random`. A RunReport whose results carry a
//! `document` is accepted wherever a channel document is.

use std::fs;

use channel_fidelity::apps::{CodeSpec, HamiltonianEnsemble};
use channel_fidelity::channels::{kraus_from_choi, ChoiOperator};
use channel_fidelity::states::PureState;
use channel_fidelity::{Complex64, ComplexMatrix, QuantumChannel};
use serde_json::{json, Map, Value};

use crate::report::num;
use crate::{CliError, CliResult};

fn bad(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {msg}"))
}

/// Reads a document from a file path, or parses the argument itself when it starts with `{`.
pub fn read_source(arg: &str) -> CliResult<Value> {
    let (text, origin) = if arg.trim_start().starts_with('{') {
        (arg.to_string(), "inline document".to_string())
    } else {
        let text = fs::read_to_string(arg).map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))?;
        (text, arg.to_string())
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{origin}: malformed JSON: {e}")))
}

/// The embedded document of a RunReport, or the value itself.
pub fn unwrap_report(v: &Value) -> &Value {
    match v.get("results").and_then(|r| r.get("document")) {
        Some(doc) if v.get("command").is_some() => doc,
        _ => v,
    }
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> CliResult<&'a Value> {
    v.as_object()
        .ok_or_else(|| bad(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| bad(path, format!("missing field \"{key}\"")))
}

fn as_f64(v: &Value, path: &str) -> CliResult<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| bad(path, "expected a finite number"))
}

fn as_u64(v: &Value, path: &str) -> CliResult<u64> {
    v.as_u64().ok_or_else(|| bad(path, "expected a non-negative integer"))
}

fn as_usize(v: &Value, path: &str) -> CliResult<usize> {
    as_u64(v, path).and_then(|x| usize::try_from(x).map_err(|_| bad(path, "integer too large")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> CliResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

pub fn parse_complex(v: &Value, path: &str) -> CliResult<Complex64> {
    match v {
        Value::Number(_) => Ok(Complex64::new(as_f64(v, path)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(
            as_f64(&pair[0], &format!("{path}[0]"))?,
            as_f64(&pair[1], &format!("{path}[1]"))?,
        )),
        _ => Err(bad(path, "expected a complex number [re, im]")),
    }
}

pub fn parse_vector(v: &Value, path: &str) -> CliResult<Vec<Complex64>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, z)| parse_complex(z, &format!("{path}[{i}]")))
        .collect()
}

pub fn parse_matrix(v: &Value, path: &str) -> CliResult<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector(r, &format!("{path}[{i}]")))
        .collect::<CliResult<_>>()?;
    ComplexMatrix::from_rows(rows).map_err(|e| bad(path, e))
}

pub fn complex_value(z: Complex64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn vector_value(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&z| complex_value(z)).collect())
}

pub fn matrix_value(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_value(m.row(i))).collect())
}

fn expect_shape(m: &ComplexMatrix, rows: usize, cols: usize, path: &str) -> CliResult<()> {
    if m.shape() == (rows, cols) {
        Ok(())
    } else {
        Err(bad(path, format!("expected a {rows}x{cols} matrix, found {}x{}", m.rows(), m.cols())))
    }
}

/// Builds the channel described by a document (or a RunReport wrapping one) and checks that
/// it passes validation.
pub fn parse_channel(v: &Value) -> CliResult<QuantumChannel> {
    let v = unwrap_report(v);
    let d_in = as_usize(field(v, "d_in", "document")?, "d_in")?;
    let d_out = as_usize(field(v, "d_out", "document")?, "d_out")?;
    if d_in == 0 || d_out == 0 {
        return Err(bad("document", "dimensions must be positive"));
    }
    let kind = field(v, "kind", "document")?
        .as_str()
        .ok_or_else(|| bad("kind", "expected a string"))?;
    let payload = field(v, "payload", "document")?;
    let square = || {
        if d_in == d_out {
            Ok(d_in)
        } else {
            Err(bad("document", format!("kind \"{kind}\" needs d_in = d_out")))
        }
    };
    let ch = match kind {
        "kraus" => {
            let ops = as_array(payload, "payload")?
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let path = format!("payload[{i}]");
                    let m = parse_matrix(m, &path)?;
                    expect_shape(&m, d_out, d_in, &path)?;
                    Ok(m)
                })
                .collect::<CliResult<Vec<_>>>()?;
            QuantumChannel::new(d_in, d_out, ops)?
        }
        "unitary" => {
            let d = square()?;
            let u = parse_matrix(payload, "payload")?;
            expect_shape(&u, d, d, "payload")?;
            QuantumChannel::unitary(u)?
        }
        "choi" => {
            let (matrix, state) = match payload {
                Value::Object(_) => (
                    parse_matrix(field(payload, "matrix", "payload")?, "payload.matrix")?,
                    payload.get("state").map(|s| parse_matrix(s, "payload.state")).transpose()?,
                ),
                _ => (parse_matrix(payload, "payload")?, None),
            };
            let n = d_in * d_out;
            expect_shape(&matrix, n, n, "payload")?;
            let choi = ChoiOperator::new(d_in, d_out, matrix)?;
            if let Some(state) = state {
                expect_shape(&state, n, n, "payload.state")?;
                let gap = state.max_diff(choi.state().matrix());
                if gap > 1e-10 {
                    return Err(bad("payload.state", format!("differs from matrix / d_in by {gap:e}")));
                }
            }
            kraus_from_choi(&choi)?
        }
        "depolarizing" => {
            let d = square()?;
            let p = as_f64(field(payload, "p", "payload")?, "payload.p")?;
            QuantumChannel::depolarizing(d, p)?
        }
        "constant" => {
            let amps = parse_vector(field(payload, "state", "payload")?, "payload.state")?;
            if amps.len() != d_out {
                return Err(bad("payload.state", format!("expected {d_out} amplitudes, found {}", amps.len())));
            }
            QuantumChannel::constant(d_in, &PureState::new(amps)?)
        }
        "random" => {
            let rank = as_usize(field(payload, "rank", "payload")?, "payload.rank")?;
            let seed = as_u64(field(payload, "seed", "payload")?, "payload.seed")?;
            QuantumChannel::random(d_in, d_out, rank, seed)?
        }
        other => return Err(bad("kind", format!("unknown channel kind \"{other}\""))),
    };
    let diag = ch.validate();
    if !diag.is_valid() {
        return Err(CliError::Input(format!(
            "channel fails validation: completeness residual {:e}, Choi positivity residual {:e}, Choi partial-trace residual {:e}",
            diag.completeness_residual, diag.choi_psd_residual, diag.choi_trace_residual
        )));
    }
    Ok(ch)
}

/// The single unitary behind a channel document.
pub fn parse_unitary(v: &Value) -> CliResult<ComplexMatrix> {
    let ch = parse_channel(v)?;
    ch.as_unitary()
        .cloned()
        .ok_or_else(|| CliError::Input("document does not describe a unitary channel".into()))
}

/// `{"d_in", "d_out", "kind": "kraus", "payload": [...]}`.
pub fn kraus_document(ch: &QuantumChannel) -> Value {
    json!({
        "d_in": ch.dim_in(),
        "d_out": ch.dim_out(),
        "kind": "kraus",
        "payload": Value::Array(ch.kraus().iter().map(matrix_value).collect()),
    })
}

/// Choi document carrying both `R_T` and `rho_T`.
pub fn choi_document(choi: &ChoiOperator<f64>) -> Value {
    json!({
        "d_in": choi.dim_in(),
        "d_out": choi.dim_out(),
        "kind": "choi",
        "payload": {
            "matrix": matrix_value(choi.matrix()),
            "state": matrix_value(choi.state().matrix()),
        },
    })
}

/// `{"hamiltonians": [...], "horizon": T, "grid_points": N}`; `grid` overrides the document,
/// and the default grid is used when neither gives one.
pub fn parse_ensemble(v: &Value, grid: Option<usize>) -> CliResult<HamiltonianEnsemble> {
    let hams = as_array(field(v, "hamiltonians", "ensemble")?, "hamiltonians")?
        .iter()
        .enumerate()
        .map(|(i, h)| parse_matrix(h, &format!("hamiltonians[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    let horizon = as_f64(field(v, "horizon", "ensemble")?, "horizon")?;
    let grid = match (grid, v.get("grid_points")) {
        (Some(g), _) => g,
        (None, Some(g)) => as_usize(g, "grid_points")?,
        (None, None) => HamiltonianEnsemble::DEFAULT_GRID,
    };
    Ok(HamiltonianEnsemble::new(hams, horizon, grid)?)
}

/// `{"encoder": n x k matrix, "recovery": channel document}`.
pub fn parse_code(v: &Value) -> CliResult<CodeSpec> {
    let encoder = parse_matrix(field(v, "encoder", "code")?, "encoder")?;
    let recovery = parse_channel(field(v, "recovery", "code")?)?;
    Ok(CodeSpec::new(encoder, recovery)?)
}

pub fn code_document(code: &CodeSpec) -> Value {
    let mut m = Map::new();
    m.insert("encoder".into(), matrix_value(code.encoder()));
    m.insert("recovery".into(), kraus_document(code.recovery()));
    Value::Object(m)
}
