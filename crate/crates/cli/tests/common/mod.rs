#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use channel_fidelity::apps::{bit_flip_code, pauli_noise};
use channel_fidelity::channels::{pauli, phase_gate};
use channel_fidelity::{ComplexMatrix, QuantumChannel};
use chanfid_cli::document::{code_document, kraus_document, matrix_value};
use serde_json::{json, Value};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad report ({e}): {}", self.stdout))
    }
}

pub fn chanfid(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_chanfid"))
        .args(args)
        .output()
        .expect("spawn chanfid");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Writes `doc` under the target tmp dir and returns the path as a string.
pub fn fixture(name: &str, doc: &Value) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("chanfid-fixtures");
    std::fs::create_dir_all(&dir).expect("fixture dir");
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).expect("write fixture");
    path.to_string_lossy().into_owned()
}

pub fn unitary_doc(u: &ComplexMatrix) -> Value {
    json!({"d_in": u.rows(), "d_out": u.rows(), "kind": "unitary", "payload": matrix_value(u)})
}

pub fn identity_doc(d: usize) -> Value {
    unitary_doc(&ComplexMatrix::identity(d))
}

pub fn x_doc() -> Value {
    unitary_doc(&pauli('X'))
}

pub fn depolarizing_doc(d: usize, p: f64) -> Value {
    json!({"d_in": d, "d_out": d, "kind": "depolarizing", "payload": {"p": p}})
}

pub fn random_doc(d: usize, rank: usize, seed: u64) -> Value {
    kraus_document(&QuantumChannel::random(d, d, rank, seed).unwrap())
}

/// `diag(e^{i theta}, e^{-i theta})`.
pub fn rotation_doc(theta: f64) -> Value {
    unitary_doc(&phase_gate(&[theta, -theta]))
}

pub fn z_ensemble_doc(grid: usize) -> Value {
    json!({
        "hamiltonians": [matrix_value(&ComplexMatrix::zeros(2, 2)), matrix_value(&pauli('Z'))],
        "horizon": std::f64::consts::PI,
        "grid_points": grid,
    })
}

pub fn bit_flip_doc() -> Value {
    code_document(&bit_flip_code())
}

pub fn noise_doc(terms: &[(f64, &str)]) -> Value {
    kraus_document(&pauli_noise(terms).unwrap())
}

pub fn single_flip_noise() -> Value {
    noise_doc(&[(0.7, "III"), (0.1, "XII"), (0.1, "IXI"), (0.1, "IIX")])
}

pub fn double_flip_noise() -> Value {
    noise_doc(&[(0.6, "III"), (0.1, "XII"), (0.1, "IXI"), (0.1, "IIX"), (0.1, "XXI")])
}
