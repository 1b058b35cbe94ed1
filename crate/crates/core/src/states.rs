//! Density operators, pure states and POVMs; the mixed-state fidelity and the
//! quantities tied to it (purifications, Uhlmann overlap, measurement statistics).

use num_traits::{One, Zero};

use crate::error::{mismatch, Error, Result};
use crate::matlin::{herm_eig, partial_trace, psd_sqrt, trace_norm, HermitianEigen, Matrix, SubsystemShape};
use crate::random::Sampler;
use crate::scalar::{re, Real, C};
use crate::tol;

/// Positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: Matrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates and symmetrizes: Hermitian within 1e-8, eigenvalues >= -1e-10, trace 1 within 1e-9.
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        let eig = herm_eig(&matrix)?;
        let min = eig.eigenvalues.first().copied().unwrap_or_else(T::zero);
        if min < -T::tol(tol::PSD_CLAMP) {
            return Err(Error::NotPositive {
                min_eigenvalue: min.as_f64(),
            });
        }
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > T::tol(tol::TRACE) || matrix.rows() == 0 {
            return Err(Error::InvalidTrace {
                trace: trace.as_f64(),
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Wraps an operator already known to be a state (symmetrized, not re-validated).
    pub(crate) fn trusted(matrix: Matrix<T>) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn pure(psi: &PureState<T>) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: Matrix::identity(d).scale_real(T::one() / T::of(d as f64)),
        }
    }

    pub fn random(d: usize, rank: usize, sampler: &mut Sampler) -> Self {
        Self {
            matrix: sampler.density_matrix(d, rank),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn eigen(&self) -> HermitianEigen<T> {
        herm_eig(&self.matrix).expect("density matrices are hermitian")
    }

    /// `U rho U*` for unitary `U`.
    pub fn conjugate(&self, u: &Matrix<T>) -> Result<Self> {
        u.ensure_shape("DensityMatrix::conjugate", self.dim(), self.dim())?;
        Self::new(u.sandwich(&self.matrix))
    }

    /// Convex combination `lambda self + (1 - lambda) other`.
    pub fn mix(&self, other: &Self, lambda: T) -> Result<Self> {
        same_dim(self, other, "DensityMatrix::mix")?;
        Self::new(&self.matrix.scale_real(lambda) + &other.matrix.scale_real(T::one() - lambda))
    }
}

/// Unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    amplitudes: Vec<C<T>>,
}

impl<T: Real> PureState<T> {
    /// Requires unit norm within 1e-10.
    pub fn new(amplitudes: Vec<C<T>>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if amplitudes.is_empty() || (norm - T::one()).abs() > T::tol(tol::NORM) {
            return Err(Error::NotNormalized {
                norm: norm.as_f64(),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<C<T>>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n.is_nan() || n <= T::zero() || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n.as_f64() });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / n).collect(),
        })
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut amplitudes = vec![C::zero(); d];
        amplitudes[i] = C::one();
        Self { amplitudes }
    }

    pub fn random(d: usize, sampler: &mut Sampler) -> Self {
        Self {
            amplitudes: sampler.pure_state(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> Matrix<T> {
        Matrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

fn norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm<T: Real> {
    elements: Vec<Matrix<T>>,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<Matrix<T>>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidPovm("no elements".into()));
        };
        let d = first.rows();
        let mut sum = Matrix::zeros(d, d);
        for (m, e) in elements.iter().enumerate() {
            if e.shape() != (d, d) {
                return Err(Error::InvalidPovm(format!(
                    "element {m} is {}x{}, expected {d}x{d}",
                    e.rows(),
                    e.cols()
                )));
            }
            let eig = herm_eig(e).map_err(|err| Error::InvalidPovm(format!("element {m}: {err}")))?;
            if eig.eigenvalues[0] < -T::tol(tol::PSD_CLAMP) {
                return Err(Error::InvalidPovm(format!(
                    "element {m} has eigenvalue {:e}",
                    eig.eigenvalues[0].as_f64()
                )));
            }
            sum += e;
        }
        let residual = sum.max_diff(&Matrix::identity(d));
        if residual > T::tol(tol::POVM_SUM) {
            return Err(Error::InvalidPovm(format!(
                "elements sum to the identity only within {:e}",
                residual.as_f64()
            )));
        }
        Ok(Self {
            elements: elements.iter().map(Matrix::hermitian_part).collect(),
        })
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn projective(basis: &Matrix<T>) -> Result<Self> {
        let n = basis.ensure_square()?;
        if !basis.is_unitary(T::tol(tol::UNITARY)) {
            return Err(Error::InvalidPovm("measurement basis is not orthonormal".into()));
        }
        Ok(Self {
            elements: (0..n)
                .map(|k| {
                    let v = basis.col(k);
                    Matrix::outer(&v, &v)
                })
                .collect(),
        })
    }

    /// Random POVM: `S^{-1/2} G_m S^{-1/2}` with Wishart `G_m` and `S = sum G_m` (total rank at least `d`).
    pub fn random(d: usize, outcomes: usize, sampler: &mut Sampler) -> Self {
        let outcomes = outcomes.max(1);
        let mut total = 0;
        let raw: Vec<Matrix<T>> = (0..outcomes)
            .map(|m| {
                let mut rank = 1 + sampler.index(d);
                if m + 1 == outcomes {
                    // keep the sum full rank
                    rank = rank.max(d.saturating_sub(total)).min(d);
                }
                total += rank;
                let g = sampler.gaussian_matrix::<T>(d, rank);
                g.matmul(&g.adjoint())
            })
            .collect();
        let mut sum = Matrix::zeros(d, d);
        for g in &raw {
            sum += g;
        }
        let inv_sqrt = herm_eig(&sum)
            .expect("sum of wishart matrices is hermitian")
            .map_spectrum(|l| re(T::one() / l.sqrt()));
        Self {
            elements: raw
                .iter()
                .map(|g| inv_sqrt.sandwich(g).hermitian_part())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Matrix<T>] {
        &self.elements
    }

    /// Outcome probabilities `tr(rho F_m)`, clamped at zero.
    pub fn probabilities(&self, rho: &DensityMatrix<T>) -> Result<Vec<T>> {
        if rho.dim() != self.dim() {
            return Err(mismatch("Povm::probabilities", self.dim(), rho.dim()));
        }
        Ok(self
            .elements
            .iter()
            .map(|f| real_trace_product(rho.matrix(), f).max(T::zero()))
            .collect())
    }
}

/// `Re tr(A B)` for square matrices of equal size.
fn real_trace_product<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

fn same_dim<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>, context: &'static str) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(mismatch(context, a.dim(), b.dim()))
    }
}

/// `(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`, unclamped.
pub fn nested_root_fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    same_dim(rho, sigma, "state_fidelity")?;
    let sr = psd_sqrt(rho.matrix())?;
    let inner = sr.sandwich(sigma.matrix());
    let root = psd_sqrt(&inner)?;
    let t = root.trace().re;
    Ok(t * t)
}

/// `||sqrt(rho) sqrt(sigma)||_1^2`, unclamped.
pub fn trace_norm_fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    same_dim(rho, sigma, "state_fidelity")?;
    let a = psd_sqrt(rho.matrix())?.matmul(&psd_sqrt(sigma.matrix())?);
    let t = trace_norm(&a);
    Ok(t * t)
}

pub(crate) fn clamp_fidelity<T: Real>(value: T, what: &str) -> Result<T> {
    let slack = T::tol(tol::FIDELITY_CLAMP);
    if value < -slack || value > T::one() + slack || value.is_nan() {
        return Err(Error::CertificateFailed {
            what: format!("{what} outside [0, 1]: {}", value.as_f64()),
            gap: if value < T::zero() {
                (-value).as_f64()
            } else {
                (value - T::one()).as_f64()
            },
            tolerance: slack.as_f64(),
        });
    }
    Ok(value.max(T::zero()).min(T::one()))
}

/// Mixed-state fidelity `F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2` (squared convention).
///
/// Evaluated along two paths, the nested square roots and the trace norm of
/// `sqrt(rho) sqrt(sigma)`; they must agree within 1e-9. The result is clamped to `[0, 1]`.
pub fn state_fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    let nested = nested_root_fidelity(rho, sigma)?;
    let via_norm = trace_norm_fidelity(rho, sigma)?;
    let gap = (nested - via_norm).abs();
    let tolerance = T::tol(tol::FIDELITY_PATHS);
    if gap > tolerance {
        return Err(Error::CertificateFailed {
            what: "agreement of the nested-root and trace-norm fidelity paths".into(),
            gap: gap.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    clamp_fidelity(via_norm, "state fidelity")
}

/// `||rho - sigma||_1`.
pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    same_dim(rho, sigma, "trace_distance")?;
    Ok(trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// Purification `sum_i sqrt(lambda_i) |v_i> (x) |e_i>` on the doubled space, eigenvalues
/// taken in descending order.
pub fn purify<T: Real>(rho: &DensityMatrix<T>) -> PureState<T> {
    let eig = rho.eigen();
    let d = rho.dim();
    let mut amps = vec![C::zero(); d * d];
    // largest weight on the first environment vector
    for (slot, (k, &l)) in eig.eigenvalues.iter().enumerate().rev().enumerate() {
        let w = l.max(T::zero()).sqrt();
        if w == T::zero() {
            continue;
        }
        for i in 0..d {
            amps[i * d + slot] = eig.eigenvectors[(i, k)] * w;
        }
    }
    PureState::normalized(amps).expect("density matrices have unit trace")
}

/// Maximum of `|<psi_rho|psi_sigma>|^2` over purifications.
///
/// Starting from the spectral purifications, the maximum over unitaries on the
/// purifying factor equals the squared trace norm of the operator obtained by tracing
/// the system out of `|psi_sigma><psi_rho|`; the maximizer is its polar factor.
pub fn uhlmann_overlap<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    same_dim(rho, sigma, "uhlmann_overlap")?;
    let d = rho.dim();
    let pr = purify(rho);
    let ps = purify(sigma);
    let cross = Matrix::outer(ps.amplitudes(), pr.amplitudes());
    let shape = SubsystemShape::new([d, d])?;
    let env = partial_trace(&cross, &shape, &[1])?;
    let t = trace_norm(&env);
    clamp_fidelity(t * t, "Uhlmann overlap")
}

/// `sum_m sqrt(tr(rho F_m) tr(sigma F_m))`; never below `sqrt(F(rho, sigma))`.
pub fn povm_statistic<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    povm: &Povm<T>,
) -> Result<T> {
    same_dim(rho, sigma, "povm_statistic")?;
    let p = povm.probabilities(rho)?;
    let q = povm.probabilities(sigma)?;
    Ok(p.iter().zip(&q).map(|(&a, &b)| (a * b).sqrt()).sum())
}

/// Eigenbasis of `ref^{-1/2} sqrt(ref^{1/2} rho ref^{1/2}) ref^{-1/2}`; `reference` is
/// mixed with `eps I / d` first when singular.
fn fuchs_caves_basis<T: Real>(
    rho: &DensityMatrix<T>,
    reference: &DensityMatrix<T>,
    eps: T,
) -> Result<Matrix<T>> {
    let d = reference.dim();
    let eig = reference.eigen();
    let singular = eig.eigenvalues[0] <= T::tol(tol::POVM_REGULARIZATION);
    let eig = if singular {
        let reg = &reference.matrix().scale_real(T::one() - eps)
            + &Matrix::identity(d).scale_real(eps / T::of(d as f64));
        herm_eig(&reg)?
    } else {
        eig
    };
    let s = eig.map_spectrum(|l| re(l.sqrt()));
    let s_inv = eig.map_spectrum(|l| re(T::one() / l.sqrt()));
    let mid = psd_sqrt(&s.sandwich(rho.matrix()))?;
    let m = s_inv.matmul(&mid).matmul(&s_inv).hermitian_part();
    Ok(herm_eig(&m)?.eigenvectors)
}

/// Projective measurement attaining `sqrt(F)` in the POVM characterization of fidelity.
///
/// Uses the eigenbasis of the operator geometric mean of `sigma^{-1}` and `rho`, with
/// `sigma` regularized by `1e-8 I / d` when singular; both orderings of the pair are
/// tried and the better one is kept. The achieved statistic is certified against
/// `sqrt(F)` to 1e-6; a larger gap is an error carrying the gap.
pub fn optimal_povm<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<Povm<T>> {
    same_dim(rho, sigma, "optimal_povm")?;
    let target = state_fidelity(rho, sigma)?.sqrt();
    let eps = T::of(tol::POVM_REGULARIZATION);
    let mut best: Option<(T, Povm<T>)> = None;
    for (a, b) in [(rho, sigma), (sigma, rho)] {
        let basis = fuchs_caves_basis(a, b, eps)?;
        let povm = Povm::projective(&basis)?;
        let stat = povm_statistic(rho, sigma, &povm)?;
        if best.as_ref().is_none_or(|(s, _)| stat < *s) {
            best = Some((stat, povm));
        }
    }
    let (stat, povm) = best.expect("two candidates evaluated");
    let gap = stat - target;
    let tolerance = T::tol(tol::POVM_CERTIFICATE);
    if gap > tolerance {
        return Err(Error::CertificateFailed {
            what: "optimal measurement statistic versus sqrt(F)".into(),
            gap: gap.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    Ok(povm)
}
