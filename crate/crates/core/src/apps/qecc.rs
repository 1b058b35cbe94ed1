//! Verification that a recovery channel undoes a noise channel on a code subspace:
//! the code `K = E H` corrects `T` when `F(R . T |_K, id) = 1`.

use crate::chanfid::channel_fidelity;
use crate::channels::{pauli, QuantumChannel};
use crate::error::{Error, Result};
use crate::matlin::kron_all;
use crate::tol;
use crate::ComplexMatrix;

const LEAKAGE_EXACT: f64 = 1e-9;
const LEAKAGE_REJECT: f64 = 1e-6;

/// A `k`-dimensional code inside an `n`-dimensional coding space together with its recovery.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    encoder: ComplexMatrix,
    recovery: QuantumChannel<f64>,
}

impl CodeSpec {
    /// `encoder` is an `n x k` isometry (within 1e-8); `recovery` acts on the `n`-dimensional space.
    pub fn new(encoder: ComplexMatrix, recovery: QuantumChannel<f64>) -> Result<Self> {
        let residual = encoder.isometry_residual();
        if residual > tol::UNITARY {
            return Err(Error::NotIsometry { residual });
        }
        let n = encoder.rows();
        recovery.same_dims(&QuantumChannel::identity(n), "recovery on the coding space")?;
        Ok(Self { encoder, recovery })
    }

    pub fn logical_dim(&self) -> usize {
        self.encoder.cols()
    }

    pub fn coding_dim(&self) -> usize {
        self.encoder.rows()
    }

    pub fn encoder(&self) -> &ComplexMatrix {
        &self.encoder
    }

    pub fn recovery(&self) -> &QuantumChannel<f64> {
        &self.recovery
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QeccReport {
    /// `F(L, id)` for the logical channel `L(rho) = E* R(T(E rho E*)) E`.
    pub fidelity: f64,
    /// `1 - min_i tr(E* R(T(E |i><i| E*)) E)`: weight escaping the code.
    pub leakage: f64,
    pub correctable: bool,
}

/// Builds the logical channel with Kraus operators `E* A_i B_j E` and compares it with the
/// identity.
///
/// Leakage above 1e-6 is an error. Between 1e-9 and 1e-6 the logical map is not trace
/// preserving; its fidelity is still evaluated from `sum |tr K|^2 / k^2` but the code is
/// reported as not correctable.
pub fn qecc_check(code: &CodeSpec, noise: &QuantumChannel<f64>) -> Result<QeccReport> {
    let n = code.coding_dim();
    let k = code.logical_dim();
    noise.same_dims(&QuantumChannel::identity(n), "noise on the coding space")?;
    let e = &code.encoder;
    let kraus: Vec<ComplexMatrix> = code
        .recovery
        .kraus()
        .iter()
        .flat_map(|a| noise.kraus().iter().map(move |b| e.adjoint_mul(&a.matmul(&b.matmul(e)))))
        .collect();

    let mut retained = ComplexMatrix::zeros(k, k);
    for m in &kraus {
        retained += &m.adjoint_mul(m);
    }
    let leakage = (0..k).map(|i| 1.0 - retained[(i, i)].re).fold(0.0, f64::max);
    if leakage > LEAKAGE_REJECT {
        return Err(Error::Leakage { leakage });
    }
    let fidelity = if leakage <= LEAKAGE_EXACT {
        let logical = QuantumChannel::new(k, k, kraus)?;
        channel_fidelity(&logical, &QuantumChannel::identity(k))?.value
    } else {
        let k2 = (k * k) as f64;
        kraus.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / k2
    };
    let fidelity = fidelity.min(1.0);
    Ok(QeccReport {
        fidelity,
        leakage,
        correctable: fidelity >= 1.0 - tol::TRACE && leakage <= LEAKAGE_EXACT,
    })
}

/// Tensor product of Pauli matrices named left to right, e.g. `"XXI"`; qubit 1 is leftmost.
pub fn pauli_string(s: &str) -> Result<ComplexMatrix> {
    if s.is_empty() || !s.chars().all(|c| "IXYZ".contains(c)) {
        return Err(Error::InvalidParameter(format!("not a Pauli string: {s:?}")));
    }
    let factors: Vec<ComplexMatrix> = s.chars().map(pauli).collect();
    Ok(kron_all(&factors))
}

/// Pauli channel `rho -> sum w P rho P` from `(weight, Pauli string)` terms.
pub fn pauli_noise(terms: &[(f64, &str)]) -> Result<QuantumChannel<f64>> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidParameter("no noise terms".into()))?;
    let n = first.1.len();
    let mut kraus = Vec::with_capacity(terms.len());
    for &(w, s) in terms {
        if w.is_nan() || w < 0.0 || s.len() != n {
            return Err(Error::InvalidParameter(format!("bad noise term ({w}, {s:?})")));
        }
        if w > 0.0 {
            kraus.push(pauli_string(s)?.scale_real(w.sqrt()));
        }
    }
    let d = 1 << n;
    QuantumChannel::new(d, d, kraus)
}

/// Three-qubit repetition code `|0_L> = |000>`, `|1_L> = |111>` with syndrome recovery
/// `{P_0, X_1 P_1, X_2 P_2, X_3 P_3}`, `P_j` projecting onto the states one flip on qubit `j`
/// away from the code.
pub fn bit_flip_code() -> CodeSpec {
    let mut encoder = ComplexMatrix::zeros(8, 2);
    encoder[(0, 0)] = crate::Complex64::new(1.0, 0.0);
    encoder[(7, 1)] = crate::Complex64::new(1.0, 0.0);
    let projector = |flip: &str| -> ComplexMatrix {
        let x = pauli_string(flip).expect("valid");
        let moved = x.matmul(&encoder);
        moved.matmul(&moved.adjoint())
    };
    let kraus = vec![
        projector("III"),
        pauli_string("XII").expect("valid").matmul(&projector("XII")),
        pauli_string("IXI").expect("valid").matmul(&projector("IXI")),
        pauli_string("IIX").expect("valid").matmul(&projector("IIX")),
    ];
    let recovery = QuantumChannel::new(8, 8, kraus).expect("syndrome projectors partition the space");
    CodeSpec::new(encoder, recovery).expect("basis vectors form an isometry")
}
