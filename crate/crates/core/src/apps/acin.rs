//! Perfect discrimination of two qubit unitaries from finitely many parallel uses.
//!
//! With `W = U1* U2` reduced to `SU(2)`, `W` has eigenphases `+-theta`. On `N` copies the
//! product eigenvectors with `k` factors of the `-theta` eigenvector pick up phase
//! `exp(i (N - 2k) theta)`. Once `0` lies in the convex hull of those phases, a superposition
//! `|Psi> = sum_k sqrt(x_k) |b_k>` with convex weights `x_k` satisfies
//! `<Psi| W^{(x)N} |Psi> = sum_k x_k exp(i (N - 2k) theta) = 0`.

use std::f64::consts::PI;

use crate::chanfid::{channel_fidelity, choi_state_fidelity, unitary_pair_fidelity};
use crate::channels::{compose, QuantumChannel};
use crate::error::{Error, Result};
use crate::matlin::{herm_eig, kron_all};
use crate::scalar::cis;
use crate::states::PureState;
use crate::tol;
use crate::{Complex64, ComplexMatrix};

const HULL_TOL: f64 = 1e-9;
const EXPLICIT_MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct AcinResult {
    /// Smallest number of copies admitting perfect discrimination.
    pub n0: usize,
    /// Eigenphase of the special-unitary part of `U1* U2`, in `(0, pi)`.
    pub theta: f64,
    /// `(k, x_k)`: convex weight on the product vector with `k` copies of the `-theta` eigenvector.
    pub weights: Vec<(usize, f64)>,
    pub psi: PureState<f64>,
    /// `|<Psi| (U1* U2)^{(x)N0} |Psi>|`.
    pub residual: f64,
    /// `F(U1^{(x)N0} . T_Psi, U2^{(x)N0} . T_Psi)` with `T_Psi` the preparation of `Psi`.
    pub fidelity_after: f64,
}

struct Reduced {
    w: ComplexMatrix,
    theta: f64,
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
}

fn reduce(u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<Reduced> {
    for u in [u1, u2] {
        u.ensure_shape("qubit unitary", 2, 2)?;
        let residual = u.isometry_residual();
        if residual > tol::UNITARY {
            return Err(Error::NotUnitary { residual });
        }
    }
    let w = u1.adjoint_mul(u2);
    let det = w[(0, 0)] * w[(1, 1)] - w[(0, 1)] * w[(1, 0)];
    let w = w.scale(cis(-det.arg() / 2.0));
    // W = cos(theta) I + i sin(theta) n.sigma, so (W - W*)/(2i) = sin(theta) n.sigma
    let generator = (&w - &w.adjoint()).scale(Complex64::new(0.0, -0.5));
    let eig = herm_eig(&generator.hermitian_part())?;
    let s = eig.eigenvalues[1].max(0.0);
    let theta = s.atan2(w.trace().re / 2.0);
    if s <= 1e-12 {
        return Err(Error::InvalidParameter(
            "the unitaries coincide up to a global phase".into(),
        ));
    }
    Ok(Reduced {
        w,
        theta,
        plus: eig.vector(1),
        minus: eig.vector(0),
    })
}

/// Phases `(N - 2k) theta mod 2 pi` for `k = 0..=n`.
fn phases(theta: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| ((n as f64 - 2.0 * k as f64) * theta).rem_euclid(2.0 * PI))
        .collect()
}

/// Largest angular gap between consecutive points of `{exp(i (N - 2k) theta)}` on the circle.
/// The origin lies in their convex hull exactly when this gap is at most `pi`.
pub fn max_phase_gap(theta: f64, n: usize) -> f64 {
    let mut p = phases(theta, n);
    p.sort_by(f64::total_cmp);
    let wrap = p[0] + 2.0 * PI - p[p.len() - 1];
    p.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

/// Convex weights on `k` putting the origin in the hull: the lexicographically first antipodal
/// pair, otherwise the first triangle containing the origin.
fn convex_weights(theta: f64, n: usize) -> Option<Vec<(usize, f64)>> {
    let pts: Vec<Complex64> = (0..=n).map(|k| cis((n as f64 - 2.0 * k as f64) * theta)).collect();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            if (pts[a] + pts[b]).norm() <= HULL_TOL {
                return Some(vec![(a, 0.5), (b, 0.5)]);
            }
        }
    }
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            for c in b + 1..pts.len() {
                let (p, q, r) = (pts[a], pts[b], pts[c]);
                let det = (q - p).re * (r - p).im - (q - p).im * (r - p).re;
                if det.abs() < 1e-12 {
                    continue;
                }
                // barycentric coordinates of the origin
                let wq = ((-p).re * (r - p).im - (-p).im * (r - p).re) / det;
                let wr = ((q - p).re * (-p).im - (q - p).im * (-p).re) / det;
                let wp = 1.0 - wq - wr;
                if wp >= -1e-12 && wq >= -1e-12 && wr >= -1e-12 {
                    let clip = |x: f64| x.max(0.0);
                    let sum = clip(wp) + clip(wq) + clip(wr);
                    return Some(vec![(a, clip(wp) / sum), (b, clip(wq) / sum), (c, clip(wr) / sum)]);
                }
            }
        }
    }
    None
}

/// `|e_+>^{(x)(N-k)} (x) |e_->^{(x)k}`.
fn product_vector(plus: &[Complex64], minus: &[Complex64], n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(1.0, 0.0)];
    for j in 0..n {
        let f = if j < n - k { plus } else { minus };
        v = v.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect();
    }
    v
}

/// Applies `W` to every qubit of an `n`-qubit vector, one factor at a time.
fn apply_local(w: &ComplexMatrix, v: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = v.to_vec();
    for q in 0..n {
        let stride = 1 << (n - 1 - q);
        for base in 0..out.len() {
            if base & stride != 0 {
                continue;
            }
            let (x0, x1) = (out[base], out[base + stride]);
            out[base] = w[(0, 0)] * x0 + w[(0, 1)] * x1;
            out[base + stride] = w[(1, 0)] * x0 + w[(1, 1)] * x1;
        }
    }
    out
}

/// Searches `N = 1..=n_max` for the first number of copies whose eigenphases surround the
/// origin, builds the discriminating input, and certifies it.
///
/// Fails with [`Error::Infeasible`] when every `N <= n_max` leaves all phases in an open
/// half-plane; the message lists the gaps.
pub fn acin_search(u1: &ComplexMatrix, u2: &ComplexMatrix, n_max: usize) -> Result<AcinResult> {
    let red = reduce(u1, u2)?;
    let theta = red.theta;
    let mut gaps = Vec::new();
    let mut found = None;
    for n in 1..=n_max {
        let gap = max_phase_gap(theta, n);
        if gap <= PI + HULL_TOL {
            if let Some(weights) = convex_weights(theta, n) {
                found = Some((n, weights));
                break;
            }
        }
        gaps.push(format!("N={n}: gap {gap:.12}"));
    }
    let Some((n0, weights)) = found else {
        return Err(Error::Infeasible(format!(
            "eigenphases stay in an open half-plane for every N <= {n_max} (theta = {theta}); {}",
            gaps.join(", ")
        )));
    };

    let dim = 1usize << n0;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for &(k, x) in &weights {
        for (a, b) in amps.iter_mut().zip(product_vector(&red.plus, &red.minus, n0, k)) {
            *a += b * x.sqrt();
        }
    }
    let psi = PureState::normalized(amps)?;
    let moved = apply_local(&red.w, psi.amplitudes(), n0);
    let overlap: Complex64 = psi.amplitudes().iter().zip(&moved).map(|(a, b)| a.conj() * b).sum();
    let residual = overlap.norm();
    if residual > HULL_TOL {
        return Err(Error::CertificateFailed {
            what: "vanishing overlap of the discriminating input".into(),
            gap: residual,
            tolerance: HULL_TOL,
        });
    }

    let fidelity_after = if dim <= EXPLICIT_MAX_DIM {
        let prep = QuantumChannel::constant(dim, &psi);
        let big1 = QuantumChannel::unitary(kron_all(std::iter::repeat_n(u1, n0)))?;
        let big2 = QuantumChannel::unitary(kron_all(std::iter::repeat_n(u2, n0)))?;
        channel_fidelity(&compose(&big1, &prep)?, &compose(&big2, &prep)?)?.value
    } else {
        residual * residual
    };
    if fidelity_after > HULL_TOL {
        return Err(Error::CertificateFailed {
            what: "fidelity after preprocessing".into(),
            gap: fidelity_after,
            tolerance: HULL_TOL,
        });
    }
    Ok(AcinResult {
        n0,
        theta,
        weights,
        psi,
        residual,
        fidelity_after,
    })
}

/// `F(U1^{(x)N}, U2^{(x)N}) = F(U1, U2)^N`, cross-checked on the explicit tensor-power channels
/// when `d^N <= 16`.
pub fn tensor_power_fidelity(u1: &ComplexMatrix, u2: &ComplexMatrix, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("tensor power needs N >= 1".into()));
    }
    let f = unitary_pair_fidelity(u1, u2)?.powi(n as i32);
    let d = u1.rows();
    if d.checked_pow(n as u32).is_some_and(|big| big <= EXPLICIT_MAX_DIM) {
        let big1 = QuantumChannel::unitary(kron_all(std::iter::repeat_n(u1, n)))?;
        let big2 = QuantumChannel::unitary(kron_all(std::iter::repeat_n(u2, n)))?;
        let explicit = choi_state_fidelity(&big1, &big2)?;
        let gap = (explicit - f).abs();
        if gap > tol::FIDELITY_PATHS {
            return Err(Error::CertificateFailed {
                what: "tensor power fidelity against the explicit channels".into(),
                gap,
                tolerance: tol::FIDELITY_PATHS,
            });
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::phase_gate;
    use crate::random::Sampler;

    fn rotation(theta: f64) -> ComplexMatrix {
        // diag(e^{-i theta}, e^{i theta}) has SU(2) eigenphases +-theta
        phase_gate(&[-theta, theta])
    }

    #[test]
    fn quarter_turn_needs_one_copy() {
        let u1 = ComplexMatrix::identity(2);
        let u2 = phase_gate(&[PI / 2.0, -PI / 2.0]);
        let r = acin_search(&u1, &u2, 8).unwrap();
        assert_eq!(r.n0, 1);
        assert!((r.theta - PI / 2.0).abs() < 1e-12);
        assert!(r.residual < 1e-12);
        assert_eq!(r.weights, vec![(0, 0.5), (1, 0.5)]);
        for a in r.psi.amplitudes() {
            assert!((a.norm() - 0.5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn eighth_turn_needs_four_copies() {
        let r = acin_search(&ComplexMatrix::identity(2), &rotation(PI / 8.0), 16).unwrap();
        assert_eq!(r.n0, 4);
        assert!(r.residual <= 1e-9);
        assert!(r.fidelity_after <= 1e-9);
        for n in 1..4 {
            assert!(max_phase_gap(PI / 8.0, n) > PI);
        }
    }

    #[test]
    fn minimal_copies_match_brute_force() {
        // the origin lies in the hull of {e^{i(N-2k)theta}} iff N theta >= pi/2 for theta <= pi/2
        for (i, theta) in [0.3, 0.5, 0.9, 1.2, 1.5, 2.0, 2.8].into_iter().enumerate() {
            let mut s = Sampler::new(i as u64);
            let v: ComplexMatrix = s.haar_unitary(2);
            let u1: ComplexMatrix = s.haar_unitary(2);
            let u2 = u1.matmul(&v.matmul(&rotation(theta)).matmul(&v.adjoint()));
            let r = acin_search(&u1, &u2, 32).unwrap();
            let eff = theta.min(PI - theta);
            let expected = (PI / (2.0 * eff) - 1e-12).ceil() as usize;
            assert_eq!(r.n0, expected, "theta={theta}");
            assert!(r.residual <= 1e-9);
            assert!(r.fidelity_after <= 1e-9);
        }
    }

    #[test]
    fn infeasible_budget() {
        let err = acin_search(&ComplexMatrix::identity(2), &rotation(0.1), 3).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
        assert!(acin_search(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2), 3).is_err());
    }

    #[test]
    fn tensor_power_examples() {
        let i2 = ComplexMatrix::identity(2);
        let v = phase_gate(&[0.0, PI / 4.0]);
        let f1 = tensor_power_fidelity(&i2, &v, 1).unwrap();
        assert!((f1 - (PI / 8.0).cos().powi(2)).abs() < 1e-14);
        let f3 = tensor_power_fidelity(&i2, &v, 3).unwrap();
        assert!((f3 - (PI / 8.0).cos().powi(6)).abs() < 1e-14);
        assert!((tensor_power_fidelity(&i2, &i2, 7).unwrap() - 1.0).abs() < 1e-14);
        assert!(tensor_power_fidelity(&i2, &v, 0).is_err());
    }
}
