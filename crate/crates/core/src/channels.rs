//! Quantum channels in Kraus form and their Choi and Stinespring representations.
//!
//! The Choi operator of `T: S(H) -> S(K)` with `dim H = d` is
//! `R_T = (T (x) id)|I>><<I| = sum_a |V_a>><<V_a|`, an operator on `K (x) H` with the
//! output factor first. `T` acts as `T(rho) = Tr_H[(I (x) rho^T) R_T]` and is trace
//! preserving iff `Tr_K R_T = I_H`.

use num_traits::{One, Zero};

use crate::error::{mismatch, Error, Result};
use crate::matlin::{
    devectorize, herm_eig, kron, partial_trace, permute_subsystems, vectorize, Matrix, SubsystemShape,
};
use crate::random::Sampler;
use crate::scalar::{cis, Real, C};
use crate::states::{DensityMatrix, PureState};
use crate::tol;

/// Completely positive trace-preserving map held as Kraus operators (`dim_out x dim_in` each).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel<T: Real> {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Matrix<T>>,
}

/// Residuals reported by [`QuantumChannel::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDiagnostics<T: Real> {
    /// `max |sum V*V - I|`.
    pub completeness_residual: T,
    /// Magnitude of the most negative Choi eigenvalue (zero if PSD).
    pub choi_psd_residual: T,
    /// `max |Tr_K R_T - I|`.
    pub choi_trace_residual: T,
}

impl<T: Real> ChannelDiagnostics<T> {
    pub fn is_valid(&self) -> bool {
        self.completeness_residual <= T::tol(tol::COMPLETENESS)
            && self.choi_psd_residual <= T::tol(tol::PSD_CLAMP)
            && self.choi_trace_residual <= T::tol(tol::COMPLETENESS)
    }
}

impl<T: Real> QuantumChannel<T> {
    /// Validated constructor: every operator must be `dim_out x dim_in` and the set complete
    /// within 1e-8.
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<Matrix<T>>) -> Result<Self> {
        let ch = Self::new_unchecked(dim_in, dim_out, kraus)?;
        let residual = ch.completeness_residual();
        if residual > T::tol(tol::COMPLETENESS) {
            return Err(Error::NotTracePreserving {
                residual: residual.as_f64(),
            });
        }
        Ok(ch)
    }

    /// Checks shapes only. Used for diagnosing maps that may not be trace preserving.
    pub fn new_unchecked(dim_in: usize, dim_out: usize, kraus: Vec<Matrix<T>>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidParameter("channel dimensions must be positive".into()));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidParameter("a channel needs at least one Kraus operator".into()));
        }
        for k in &kraus {
            k.ensure_shape("Kraus operator", dim_out, dim_in)?;
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim_in: d,
            dim_out: d,
            kraus: vec![Matrix::identity(d)],
        }
    }

    /// `rho -> U rho U*`.
    pub fn unitary(u: Matrix<T>) -> Result<Self> {
        let d = u.ensure_square()?;
        let residual = u.isometry_residual();
        if residual > T::tol(tol::UNITARY) {
            return Err(Error::NotUnitary {
                residual: residual.as_f64(),
            });
        }
        Ok(Self {
            dim_in: d,
            dim_out: d,
            kraus: vec![u],
        })
    }

    /// `rho -> (1 - p) rho + p I / d`, with Kraus operators drawn from the Weyl basis.
    pub fn depolarizing(d: usize, p: T) -> Result<Self> {
        if d == 0 || !(p >= T::zero() && p <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "depolarizing needs d > 0 and 0 <= p <= 1 (got d={d}, p={p})"
            )));
        }
        let dd = T::of((d * d) as f64);
        let mut kraus = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let w = if a == 0 && b == 0 {
                    T::one() - p + p / dd
                } else {
                    p / dd
                };
                if w > T::zero() {
                    kraus.push(weyl(d, a, b).scale_real(w.sqrt()));
                }
            }
        }
        Self::new(d, d, kraus)
    }

    /// Replaces every input with `|psi><psi|`: Kraus operators `|psi><e_i|`.
    pub fn constant(dim_in: usize, psi: &PureState<T>) -> Self {
        let d_out = psi.dim();
        let kraus = (0..dim_in)
            .map(|i| {
                let mut k = Matrix::zeros(d_out, dim_in);
                for (r, &a) in psi.amplitudes().iter().enumerate() {
                    k[(r, i)] = a;
                }
                k
            })
            .collect();
        Self {
            dim_in,
            dim_out: d_out,
            kraus,
        }
    }

    /// Haar-random channel of the given Kraus rank: a random isometry
    /// `H -> K (x) C^rank` split into its `rank` blocks.
    pub fn random(dim_in: usize, dim_out: usize, rank: usize, seed: u64) -> Result<Self> {
        Self::random_with(dim_in, dim_out, rank, &mut Sampler::new(seed))
    }

    pub fn random_with(dim_in: usize, dim_out: usize, rank: usize, sampler: &mut Sampler) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 || rank == 0 || rank > dim_in * dim_out || dim_out * rank < dim_in {
            return Err(Error::InvalidParameter(format!(
                "random channel {dim_in} -> {dim_out} with Kraus rank {rank}"
            )));
        }
        let v = sampler.haar_isometry::<T>(dim_out * rank, dim_in);
        let kraus = (0..rank)
            .map(|a| Matrix::from_fn(dim_out, dim_in, |k, j| v[(k * rank + a, j)]))
            .collect();
        Self::new(dim_in, dim_out, kraus)
    }

    /// Convex combination `lambda a + (1 - lambda) b` as the scaled Kraus union.
    pub fn mixture(lambda: T, a: &Self, b: &Self) -> Result<Self> {
        if !(lambda >= T::zero() && lambda <= T::one()) {
            return Err(Error::InvalidParameter(format!("mixture weight {lambda}")));
        }
        a.same_dims(b, "mixture")?;
        let sa = lambda.sqrt();
        let sb = (T::one() - lambda).sqrt();
        let kraus = a
            .kraus
            .iter()
            .map(|k| k.scale_real(sa))
            .chain(b.kraus.iter().map(|k| k.scale_real(sb)))
            .collect();
        Self::new(a.dim_in, a.dim_out, kraus)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[Matrix<T>] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    pub(crate) fn same_dims(&self, other: &Self, context: &'static str) -> Result<()> {
        if (self.dim_in, self.dim_out) == (other.dim_in, other.dim_out) {
            Ok(())
        } else {
            Err(mismatch(
                context,
                format!("{} -> {}", self.dim_in, self.dim_out),
                format!("{} -> {}", other.dim_in, other.dim_out),
            ))
        }
    }

    pub fn completeness_residual(&self) -> T {
        let mut sum = Matrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum += &k.adjoint_mul(k);
        }
        sum.max_diff(&Matrix::identity(self.dim_in))
    }

    /// Completeness, Choi positivity and Choi partial-trace residuals.
    pub fn validate(&self) -> ChannelDiagnostics<T> {
        let r = self.choi_matrix();
        let psd = herm_eig(&r)
            .map(|e| (-e.eigenvalues[0]).max(T::zero()))
            .unwrap_or_else(|_| T::infinity());
        ChannelDiagnostics {
            completeness_residual: self.completeness_residual(),
            choi_psd_residual: psd,
            choi_trace_residual: choi_trace_residual(&r, self.dim_in, self.dim_out),
        }
    }

    /// `U` when the channel is a single unitary Kraus operator.
    pub fn as_unitary(&self) -> Option<&Matrix<T>> {
        match self.kraus.as_slice() {
            [u] if u.is_unitary(T::tol(tol::UNITARY)) => Some(u),
            _ => None,
        }
    }

    /// True when the channel is a single Kraus operator equal to a phase times the identity.
    pub fn is_identity(&self) -> bool {
        let Some(u) = self.as_unitary() else {
            return false;
        };
        let phase = u[(0, 0)];
        u.max_diff(&Matrix::identity(self.dim_in).scale(phase)) <= T::tol(tol::UNITARY)
    }

    /// Linear action `X -> sum V X V*` on an arbitrary `dim_in x dim_in` operator.
    pub fn apply_operator(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        x.ensure_shape("channel input", self.dim_in, self.dim_in)?;
        let mut out = Matrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += &k.sandwich(x);
        }
        Ok(out)
    }

    /// `T(rho) = sum V rho V*`.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim_in {
            return Err(mismatch("apply", self.dim_in, rho.dim()));
        }
        DensityMatrix::new(self.apply_operator(rho.matrix())?)
    }

    /// Heisenberg-picture action `X -> sum V* X V`.
    pub fn dual_apply(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        x.ensure_shape("dual channel input", self.dim_out, self.dim_out)?;
        let mut out = Matrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out += &k.adjoint_mul(&x.matmul(k));
        }
        Ok(out)
    }

    fn choi_matrix(&self) -> Matrix<T> {
        let n = self.dim_in * self.dim_out;
        let mut r = Matrix::zeros(n, n);
        for k in &self.kraus {
            let v = vectorize(k);
            r += &Matrix::outer(&v, &v);
        }
        r
    }

    /// `R_T = sum |V_a>><<V_a|` together with `rho_T = R_T / d`.
    pub fn choi(&self) -> ChoiOperator<T> {
        let matrix = self.choi_matrix();
        let state = DensityMatrix::trusted(matrix.scale_real(T::one() / T::of(self.dim_in as f64)));
        ChoiOperator {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix,
            state,
        }
    }

    /// Stinespring isometry `V|psi> = sum_a V_a|psi> (x) |e_a>` with one environment
    /// level per Kraus operator.
    pub fn stinespring(&self) -> StinespringIsometry<T> {
        self.stinespring_padded(self.kraus.len())
            .expect("environment is at least the Kraus count")
    }

    /// Stinespring isometry on an environment of dimension `env >= kraus_count`,
    /// padding with zero Kraus operators.
    pub fn stinespring_padded(&self, env: usize) -> Result<StinespringIsometry<T>> {
        let n = self.kraus.len();
        if env < n {
            return Err(Error::InvalidParameter(format!(
                "environment dimension {env} below Kraus count {n}"
            )));
        }
        let mut v = Matrix::zeros(self.dim_out * env, self.dim_in);
        for (a, k) in self.kraus.iter().enumerate() {
            for r in 0..self.dim_out {
                for c in 0..self.dim_in {
                    v[(r * env + a, c)] = k[(r, c)];
                }
            }
        }
        Ok(StinespringIsometry {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            dim_env: env,
            matrix: v,
        })
    }

    /// Equivalent channel with the minimal number of Kraus operators.
    pub fn minimal(&self) -> Result<Self> {
        kraus_from_choi(&self.choi())
    }
}

/// `X^a Z^b` on `C^d`.
fn weyl<T: Real>(d: usize, a: usize, b: usize) -> Matrix<T> {
    let mut w = Matrix::zeros(d, d);
    let step = T::TAU() / T::of(d as f64);
    for j in 0..d {
        w[((j + a) % d, j)] = cis(step * T::of((b * j) as f64));
    }
    w
}

fn choi_trace_residual<T: Real>(r: &Matrix<T>, dim_in: usize, dim_out: usize) -> T {
    let shape = SubsystemShape::new([dim_out, dim_in]).expect("positive dimensions");
    partial_trace(r, &shape, &[1])
        .map(|p| p.max_diff(&Matrix::identity(dim_in)))
        .unwrap_or_else(|_| T::infinity())
}

/// Choi operator on `K (x) H` plus its normalized state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOperator<T: Real> {
    dim_in: usize,
    dim_out: usize,
    matrix: Matrix<T>,
    state: DensityMatrix<T>,
}

impl<T: Real> ChoiOperator<T> {
    /// Validates positivity and `Tr_K R = I_d` (within 1e-8).
    pub fn new(dim_in: usize, dim_out: usize, matrix: Matrix<T>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidParameter("Choi dimensions must be positive".into()));
        }
        let n = dim_in * dim_out;
        matrix.ensure_shape("Choi operator", n, n)?;
        let eig = herm_eig(&matrix)?;
        if eig.eigenvalues[0] < -T::tol(tol::PSD_CLAMP) {
            return Err(Error::NotPositive {
                min_eigenvalue: eig.eigenvalues[0].as_f64(),
            });
        }
        let residual = choi_trace_residual(&matrix, dim_in, dim_out);
        if residual > T::tol(tol::COMPLETENESS) {
            return Err(Error::ChoiNotTracePreserving {
                residual: residual.as_f64(),
            });
        }
        let matrix = matrix.hermitian_part();
        let state = DensityMatrix::new(matrix.scale_real(T::one() / T::of(dim_in as f64)))?;
        Ok(Self {
            dim_in,
            dim_out,
            matrix,
            state,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `R_T`.
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// `rho_T = R_T / d`.
    pub fn state(&self) -> &DensityMatrix<T> {
        &self.state
    }

    /// `max |Tr_K R_T - I_d|`.
    pub fn trace_residual(&self) -> T {
        choi_trace_residual(&self.matrix, self.dim_in, self.dim_out)
    }
}

/// `T(rho) = Tr_H[(I (x) rho^T) R_T]`, the trace running over the second (input) factor and
/// the transpose taken in the basis that defines `R_T`.
pub fn apply_via_choi<T: Real>(choi: &ChoiOperator<T>, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if rho.dim() != choi.dim_in {
        return Err(mismatch("apply_via_choi", choi.dim_in, rho.dim()));
    }
    let lifted = kron(&Matrix::identity(choi.dim_out), &rho.matrix().transpose());
    let shape = SubsystemShape::new([choi.dim_out, choi.dim_in])?;
    DensityMatrix::new(partial_trace(&lifted.matmul(&choi.matrix), &shape, &[0])?)
}

/// Kraus operators from the spectral decomposition of `R_T`: each eigenpair `(lambda, |v>>)`
/// with `lambda > 1e-10` gives `sqrt(lambda) v`, largest eigenvalue first.
pub fn kraus_from_choi<T: Real>(choi: &ChoiOperator<T>) -> Result<QuantumChannel<T>> {
    let eig = herm_eig(&choi.matrix)?;
    let cutoff = T::tol(tol::KRAUS_RETENTION);
    let mut kraus = Vec::new();
    for k in (0..eig.dim()).rev() {
        let l = eig.eigenvalues[k];
        if l <= cutoff {
            break;
        }
        let v: Vec<C<T>> = eig.vector(k).into_iter().map(|z| z * l.sqrt()).collect();
        kraus.push(devectorize(&v, choi.dim_out, choi.dim_in)?);
    }
    QuantumChannel::new(choi.dim_in, choi.dim_out, kraus)
}

/// Isometry `V: H -> K (x) E` with `T_*(X) = V*(X (x) I_E)V`.
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringIsometry<T: Real> {
    dim_in: usize,
    dim_out: usize,
    dim_env: usize,
    matrix: Matrix<T>,
}

impl<T: Real> StinespringIsometry<T> {
    /// Validates `V*V = I` within 1e-8; `matrix` is `(dim_out * dim_env) x dim_in`.
    pub fn new(dim_in: usize, dim_out: usize, dim_env: usize, matrix: Matrix<T>) -> Result<Self> {
        matrix.ensure_shape("Stinespring isometry", dim_out * dim_env, dim_in)?;
        let residual = matrix.isometry_residual();
        if residual > T::tol(tol::UNITARY) {
            return Err(Error::NotIsometry {
                residual: residual.as_f64(),
            });
        }
        Ok(Self {
            dim_in,
            dim_out,
            dim_env,
            matrix,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn dim_env(&self) -> usize {
        self.dim_env
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn isometry_residual(&self) -> T {
        self.matrix.isometry_residual()
    }

    /// `V*(X (x) I_E)V`.
    pub fn dual_apply(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        x.ensure_shape("Stinespring dual input", self.dim_out, self.dim_out)?;
        let lifted = kron(x, &Matrix::identity(self.dim_env));
        Ok(self.matrix.adjoint_mul(&lifted.matmul(&self.matrix)))
    }

    /// `Tr_E(V rho V*)`.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim_in {
            return Err(mismatch("Stinespring apply", self.dim_in, rho.dim()));
        }
        let shape = SubsystemShape::new([self.dim_out, self.dim_env])?;
        DensityMatrix::new(partial_trace(&self.matrix.sandwich(rho.matrix()), &shape, &[0])?)
    }

    /// Kraus operators `V_a = (I (x) <e_a|) V`.
    pub fn to_channel(&self) -> Result<QuantumChannel<T>> {
        let kraus = (0..self.dim_env)
            .map(|a| Matrix::from_fn(self.dim_out, self.dim_in, |r, c| self.matrix[(r * self.dim_env + a, c)]))
            .collect();
        QuantumChannel::new(self.dim_in, self.dim_out, kraus)
    }
}

/// `after . before`: Kraus set `{A_i B_j}`.
pub fn compose<T: Real>(after: &QuantumChannel<T>, before: &QuantumChannel<T>) -> Result<QuantumChannel<T>> {
    if after.dim_in != before.dim_out {
        return Err(mismatch("compose", after.dim_in, before.dim_out));
    }
    let kraus = after
        .kraus
        .iter()
        .flat_map(|a| before.kraus.iter().map(move |b| a.matmul(b)))
        .collect();
    QuantumChannel::new(before.dim_in, after.dim_out, kraus)
}

/// `a (x) b`: Kraus set `{A_i (x) B_j}`.
pub fn tensor<T: Real>(a: &QuantumChannel<T>, b: &QuantumChannel<T>) -> QuantumChannel<T> {
    let kraus = a
        .kraus
        .iter()
        .flat_map(|x| b.kraus.iter().map(move |y| kron(x, y)))
        .collect();
    QuantumChannel {
        dim_in: a.dim_in * b.dim_in,
        dim_out: a.dim_out * b.dim_out,
        kraus,
    }
}

/// `n`-fold tensor power (`n >= 1`).
pub fn tensor_power<T: Real>(ch: &QuantumChannel<T>, n: usize) -> Result<QuantumChannel<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("tensor power needs n >= 1".into()));
    }
    Ok((1..n).fold(ch.clone(), |acc, _| tensor(&acc, ch)))
}

/// Choi operator of `a (x) b` from the factors' Choi operators.
///
/// `R_a (x) R_b` lives on `K1 H1 K2 H2`; reordering the factors to `K1 K2 H1 H2` gives
/// the Choi operator of the tensor product channel in this crate's convention.
pub fn tensor_choi<T: Real>(a: &ChoiOperator<T>, b: &ChoiOperator<T>) -> Result<ChoiOperator<T>> {
    let joint = kron(&a.matrix, &b.matrix);
    let shape = SubsystemShape::new([a.dim_out, a.dim_in, b.dim_out, b.dim_in])?;
    let matrix = permute_subsystems(&joint, &shape, &[0, 2, 1, 3])?;
    let dim_in = a.dim_in * b.dim_in;
    let state = DensityMatrix::trusted(matrix.scale_real(T::one() / T::of(dim_in as f64)));
    Ok(ChoiOperator {
        dim_in,
        dim_out: a.dim_out * b.dim_out,
        matrix,
        state,
    })
}

/// Mixes Kraus operators with the coefficients of a unitary: `W_b = sum_a u[b, a] V_a`.
pub fn remix_kraus<T: Real>(ch: &QuantumChannel<T>, u: &Matrix<T>) -> Result<QuantumChannel<T>> {
    u.ensure_shape("Kraus remixing unitary", ch.kraus.len(), ch.kraus.len())?;
    let kraus = (0..ch.kraus.len())
        .map(|b| {
            let mut w = Matrix::zeros(ch.dim_out, ch.dim_in);
            for (a, v) in ch.kraus.iter().enumerate() {
                w += &v.scale(u[(b, a)]);
            }
            w
        })
        .collect();
    QuantumChannel::new(ch.dim_in, ch.dim_out, kraus)
}

/// Pauli matrices (`'I'`, `'X'`, `'Y'`, `'Z'`).
pub fn pauli<T: Real>(name: char) -> Matrix<T> {
    let o = C::<T>::zero();
    let l = C::<T>::one();
    let i = C::<T>::i();
    let entries = match name {
        'X' => vec![o, l, l, o],
        'Y' => vec![o, -i, i, o],
        'Z' => vec![l, o, o, -l],
        _ => vec![l, o, o, l],
    };
    Matrix::from_vec(2, 2, entries).expect("2x2")
}

/// Diagonal unitary `diag(exp(i phases))`.
pub fn phase_gate<T: Real>(phases: &[T]) -> Matrix<T> {
    Matrix::from_diag(&phases.iter().map(|&p| cis(p)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::hs_inner;

    type Ch = QuantumChannel<f64>;
    type M = Matrix<f64>;
    type Rho = DensityMatrix<f64>;

    #[test]
    fn validate_diagnostics() {
        let id = Ch::identity(2).validate();
        assert_eq!(id.completeness_residual, 0.0);
        assert!(id.choi_psd_residual < 1e-15);
        assert_eq!(id.choi_trace_residual, 0.0);
        assert!(Ch::unitary(pauli('X')).unwrap().validate().is_valid());

        let half = M::identity(2).scale_real(0.5);
        assert!(matches!(
            Ch::new(2, 2, vec![half.clone()]),
            Err(Error::NotTracePreserving { .. })
        ));
        let diag = Ch::new_unchecked(2, 2, vec![half]).unwrap().validate();
        assert!((diag.completeness_residual - 0.75).abs() < 1e-15);
        assert!(!diag.is_valid());
    }

    #[test]
    fn shape_errors() {
        assert!(Ch::new(2, 2, vec![M::identity(3)]).is_err());
        assert!(Ch::new(2, 2, vec![]).is_err());
        assert!(Ch::unitary(M::identity(2).scale_real(2.0)).is_err());
        assert!(Ch::depolarizing(2, 1.5).is_err());
        assert!(Ch::random(2, 2, 5, 0).is_err());
        assert!(Ch::random(4, 1, 2, 0).is_err());
    }

    #[test]
    fn apply_examples() {
        let mut s = Sampler::new(1);
        let rho = Rho::random(2, 2, &mut s);
        assert!(Ch::identity(2).apply(&rho).unwrap().matrix().approx_eq(rho.matrix(), 1e-15));
        let full = Ch::depolarizing(2, 1.0).unwrap().apply(&rho).unwrap();
        assert!(full.matrix().approx_eq(&M::identity(2).scale_real(0.5), 1e-12));
        let u: M = s.haar_unitary(2);
        let out = Ch::unitary(u.clone()).unwrap().apply(&rho).unwrap();
        assert!(out.matrix().approx_eq(&u.sandwich(rho.matrix()), 1e-14));
        assert!(Ch::identity(3).apply(&rho).is_err());
    }

    #[test]
    fn depolarizing_action_general_d() {
        let mut s = Sampler::new(2);
        for d in [2, 3, 4] {
            let rho = Rho::random(d, d, &mut s);
            let p = 0.37;
            let out = Ch::depolarizing(d, p).unwrap().apply(&rho).unwrap();
            let expected = &rho.matrix().scale_real(1.0 - p) + &M::identity(d).scale_real(p / d as f64);
            assert!(out.matrix().approx_eq(&expected, 1e-12));
        }
        assert_eq!(Ch::depolarizing(2, 0.0).unwrap().kraus(), &[M::identity(2)]);
    }

    #[test]
    fn choi_examples() {
        let id = Ch::identity(2).choi();
        let phi = vectorize(&M::identity(2));
        assert!(id.matrix().approx_eq(&M::outer(&phi, &phi), 0.0));

        let u: M = Sampler::new(3).haar_unitary(3);
        let vu = vectorize(&u);
        assert!(Ch::unitary(u).unwrap().choi().matrix().approx_eq(&M::outer(&vu, &vu), 1e-15));

        // sum over |sigma_i / 2>> gives I/2 on the 4-dim space
        let paulis: Vec<M> = "IXYZ".chars().map(|c| pauli::<f64>(c).scale_real(0.5)).collect();
        let mut oracle = M::zeros(4, 4);
        for p in &paulis {
            let v = vectorize(p);
            oracle += &M::outer(&v, &v);
        }
        assert!(oracle.approx_eq(&M::identity(4).scale_real(0.5), 1e-15));
        let dep = Ch::depolarizing(2, 1.0).unwrap().choi();
        assert!(dep.matrix().approx_eq(&oracle, 1e-14));
        assert!(dep.state().matrix().approx_eq(&M::identity(4).scale_real(0.25), 1e-14));
    }

    #[test]
    fn choi_equals_action_on_phi_plus() {
        let ch = Ch::random(2, 3, 3, 4).unwrap();
        let phi = vectorize(&M::identity(2));
        let big = M::outer(&phi, &phi);
        // (T (x) id) applied block-wise: blocks |i><j| (x) |i><j| on H (x) H
        let mut expected = M::zeros(6, 6);
        for i in 0..2 {
            for j in 0..2 {
                let e = M::from_fn(2, 2, |a, b| if a == i && b == j { C::one() } else { C::zero() });
                let te = ch.apply_operator(&e).unwrap();
                expected += &kron(&te, &e);
            }
        }
        assert!(big[(0, 3)] == C::one());
        assert!(ch.choi().matrix().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn kraus_from_choi_examples() {
        let u: M = Sampler::new(5).haar_unitary(2);
        let back = kraus_from_choi(&Ch::unitary(u.clone()).unwrap().choi()).unwrap();
        assert_eq!(back.kraus_count(), 1);
        let overlap = hs_inner(&back.kraus()[0], &u).unwrap().norm();
        assert!((overlap - 2.0).abs() < 1e-12, "equal up to phase");

        let dep = ChoiOperator::new(2, 2, M::identity(4).scale_real(0.5)).unwrap();
        let ch = kraus_from_choi(&dep).unwrap();
        assert_eq!(ch.kraus_count(), 4);
        for k in ch.kraus() {
            let nonzero = k.as_slice().iter().filter(|z| z.norm() > 1e-12).count();
            assert_eq!(nonzero, 1);
            assert!((k.max_abs() - 0.5f64.sqrt()).abs() < 1e-12);
        }
        let rho = Rho::random(2, 2, &mut Sampler::new(6));
        assert!(ch.apply(&rho).unwrap().matrix().approx_eq(&M::identity(2).scale_real(0.5), 1e-12));
    }

    #[test]
    fn choi_validation() {
        assert!(matches!(
            ChoiOperator::new(2, 2, M::identity(4)),
            Err(Error::ChoiNotTracePreserving { .. })
        ));
        assert!(ChoiOperator::new(2, 2, M::from_real_diag(&[1.5, -0.5, 0.5, 0.5])).is_err());
        assert!(ChoiOperator::new(2, 3, M::identity(4)).is_err());
    }

    #[test]
    fn dual_examples() {
        let mut s = Sampler::new(7);
        let x: M = s.gaussian_matrix(3, 3);
        assert!(Ch::identity(3).dual_apply(&x).unwrap().approx_eq(&x, 0.0));
        let ch = Ch::random(2, 3, 4, 8).unwrap();
        assert!(ch.dual_apply(&M::identity(3)).unwrap().approx_eq(&M::identity(2), 1e-12));
        assert!(ch.dual_apply(&M::identity(2)).is_err());
    }

    #[test]
    fn stinespring_examples() {
        let id = Ch::identity(2).stinespring();
        assert_eq!(id.dim_env(), 1);
        assert!(id.matrix().approx_eq(&M::identity(2), 0.0));

        let u: M = Sampler::new(9).haar_unitary(2);
        let v = Ch::unitary(u.clone()).unwrap().stinespring();
        assert!(v.matrix().approx_eq(&u, 0.0));

        let ch = Ch::random(3, 3, 3, 10).unwrap();
        let st = ch.stinespring();
        assert!(st.isometry_residual() < 1e-12);
        let x: M = Sampler::new(11).gaussian_matrix(3, 3);
        assert!(st.dual_apply(&x).unwrap().approx_eq(&ch.dual_apply(&x).unwrap(), 1e-9));
        assert_eq!(st.to_channel().unwrap(), ch);
    }

    #[test]
    fn compose_examples() {
        let t = Ch::random(2, 2, 3, 12).unwrap();
        let rho = Rho::random(2, 2, &mut Sampler::new(13));
        let c = compose(&Ch::identity(2), &t).unwrap();
        assert!(c.apply(&rho).unwrap().matrix().approx_eq(t.apply(&rho).unwrap().matrix(), 1e-14));
        let x = Ch::unitary(pauli('X')).unwrap();
        let xx = compose(&x, &x).unwrap();
        assert!(xx.apply(&rho).unwrap().matrix().approx_eq(rho.matrix(), 1e-14));
        assert!(compose(&Ch::identity(3), &t).is_err());
    }

    #[test]
    fn compose_with_preparation_is_constant() {
        let psi = PureState::random(2, &mut Sampler::new(14));
        let prep = Ch::constant(3, &psi);
        let r = Ch::random(2, 2, 2, 15).unwrap();
        let c = compose(&r, &prep).unwrap();
        let expected = r.apply(&Rho::pure(&psi)).unwrap();
        for seed in 0..3 {
            let rho = Rho::random(3, 2, &mut Sampler::new(seed));
            assert!(c.apply(&rho).unwrap().matrix().approx_eq(expected.matrix(), 1e-13));
        }
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(
            tensor(&Ch::identity(2), &Ch::identity(3)).kraus(),
            &[M::identity(6)]
        );
        let x = Ch::unitary(pauli('X')).unwrap();
        let z = Ch::unitary(pauli('Z')).unwrap();
        let mut s = Sampler::new(16);
        let rho = Rho::random(2, 2, &mut s);
        let sigma = Rho::random(2, 2, &mut s);
        let out = tensor(&x, &z).apply(&Rho::new(kron(rho.matrix(), sigma.matrix())).unwrap()).unwrap();
        let expected = kron(&pauli('X').sandwich(rho.matrix()), &pauli('Z').sandwich(sigma.matrix()));
        assert!(out.matrix().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn tensor_choi_interleaves() {
        let a = Ch::random(2, 3, 2, 17).unwrap();
        let b = Ch::random(3, 2, 4, 18).unwrap();
        let direct = tensor(&a, &b).choi();
        let via = tensor_choi(&a.choi(), &b.choi()).unwrap();
        assert!(direct.matrix().approx_eq(via.matrix(), 1e-12));
    }

    #[test]
    fn random_is_deterministic() {
        let a = Ch::random(2, 2, 4, 99).unwrap();
        let b = Ch::random(2, 2, 4, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_valid());
        assert_ne!(a, Ch::random(2, 2, 4, 100).unwrap());
    }

    #[test]
    fn constant_channel_prepares() {
        let psi = PureState::random(3, &mut Sampler::new(19));
        let ch = Ch::constant(2, &psi);
        assert!(ch.validate().is_valid());
        let rho = Rho::random(2, 1, &mut Sampler::new(20));
        assert!(ch.apply(&rho).unwrap().matrix().approx_eq(&psi.projector(), 1e-14));
    }

    #[test]
    fn mixture_is_linear() {
        let a = Ch::random(2, 2, 2, 21).unwrap();
        let b = Ch::random(2, 2, 3, 22).unwrap();
        let m = Ch::mixture(0.3, &a, &b).unwrap();
        let expected = &a.choi().matrix().scale_real(0.3) + &b.choi().matrix().scale_real(0.7);
        assert!(m.choi().matrix().approx_eq(&expected, 1e-14));
        assert!(Ch::mixture(1.2, &a, &b).is_err());
    }
}
