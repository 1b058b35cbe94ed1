use num_traits::Zero;

use super::{herm_eig, Matrix};
use crate::error::{mismatch, Error, Result};
use crate::scalar::{cis, re, Real, C};
use crate::tol;

/// Dimensions of the tensor factors of a space, leftmost (slowest index) first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemShape(Vec<usize>);

impl SubsystemShape {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidShape(format!("factor dimensions {dims:?}")));
        }
        Ok(Self(dims))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    fn check_against<T: Real>(&self, m: &Matrix<T>, context: &'static str) -> Result<usize> {
        let n = m.ensure_square()?;
        if self.total() != n {
            return Err(mismatch(context, format!("dimension {} from shape {:?}", self.total(), self.0), n));
        }
        Ok(n)
    }

    /// Row-major strides of the factors.
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.0.len()];
        for k in (0..self.0.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.0[k + 1];
        }
        s
    }
}

/// Kronecker product; the left factor carries the slow index.
pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = Matrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x.is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a sequence (empty sequence gives the 1x1 identity).
pub fn kron_all<'a, T: Real>(factors: impl IntoIterator<Item = &'a Matrix<T>>) -> Matrix<T> {
    factors
        .into_iter()
        .fold(Matrix::identity(1), |acc, f| kron(&acc, f))
}

/// Traces out every factor not listed in `keep`. Kept factors stay in their original order.
pub fn partial_trace<T: Real>(m: &Matrix<T>, shape: &SubsystemShape, keep: &[usize]) -> Result<Matrix<T>> {
    shape.check_against(m, "partial_trace")?;
    let nf = shape.len();
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= nf) {
        return Err(Error::InvalidShape(format!(
            "keep set {keep:?} for {nf} factors"
        )));
    }
    let traced: Vec<usize> = (0..nf).filter(|k| !kept.contains(k)).collect();
    let strides = shape.strides();
    let dims = shape.dims();

    let offsets = |factors: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &f in factors {
            let mut next = Vec::with_capacity(out.len() * dims[f]);
            for &base in &out {
                for x in 0..dims[f] {
                    next.push(base + x * strides[f]);
                }
            }
            out = next;
        }
        out
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);

    let dk = kept_off.len();
    let mut out = Matrix::zeros(dk, dk);
    for (r, &kr) in kept_off.iter().enumerate() {
        for (c, &kc) in kept_off.iter().enumerate() {
            let mut acc = C::zero();
            for &t in &traced_off {
                acc += m[(kr + t, kc + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// `|A>>`: the entries of `A` with the row index slow.
pub fn vectorize<T: Real>(a: &Matrix<T>) -> Vec<C<T>> {
    a.as_slice().to_vec()
}

/// Inverse of [`vectorize`].
pub fn devectorize<T: Real>(v: &[C<T>], rows: usize, cols: usize) -> Result<Matrix<T>> {
    if v.len() != rows * cols {
        return Err(mismatch("devectorize", rows * cols, v.len()));
    }
    Matrix::from_vec(rows, cols, v.to_vec())
}

/// Hilbert-Schmidt inner product `tr(A* B)`.
pub fn hs_inner<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<C<T>> {
    if a.shape() != b.shape() {
        return Err(mismatch(
            "hs_inner",
            format!("{}x{}", a.rows(), a.cols()),
            format!("{}x{}", b.rows(), b.cols()),
        ));
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Eigenvalues within the solver's roundoff band of zero.
fn spectral_floor<T: Real>(values: &[T]) -> T {
    let scale = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    scale * T::epsilon() * T::of(64.0 * values.len() as f64)
}

/// Unique positive semidefinite square root.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero, as is anything inside the
/// eigensolver's roundoff band; an eigenvalue below `-1e-10` is an error.
pub fn psd_sqrt<T: Real>(p: &Matrix<T>) -> Result<Matrix<T>> {
    let eig = herm_eig(p)?;
    let clamp = T::tol(tol::PSD_CLAMP);
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -clamp {
            return Err(Error::NotPositive {
                min_eigenvalue: min.as_f64(),
            });
        }
    }
    let floor = spectral_floor(&eig.eigenvalues);
    Ok(eig.map_spectrum(|l| if l <= floor { C::zero() } else { re(l.sqrt()) }))
}

/// Trace norm (sum of singular values); rectangular input allowed.
///
/// Hermitian input is handled through its eigenvalues directly. Otherwise the
/// singular values are read off the Hermitian dilation `[[0, A], [A*, 0]]`, whose
/// spectrum is `{+s_i, -s_i}` padded with zeros. This keeps small singular values
/// accurate to the absolute roundoff level, which `sqrt(eig(A* A))` does not.
pub fn trace_norm<T: Real>(a: &Matrix<T>) -> T {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return T::zero();
    }
    let scale = a.max_abs();
    if a.is_square() && a.hermitian_residual() <= scale * T::epsilon() * T::of(16.0) {
        let eig = herm_eig(&a.hermitian_part()).expect("hermitian by construction");
        return eig.eigenvalues.iter().map(|l| l.abs()).sum();
    }
    let n = r + c;
    let mut dil = Matrix::zeros(n, n);
    for i in 0..r {
        for j in 0..c {
            dil[(i, r + j)] = a[(i, j)];
            dil[(r + j, i)] = a[(i, j)].conj();
        }
    }
    let eig = herm_eig(&dil).expect("dilation is hermitian");
    eig.eigenvalues.iter().map(|l| l.abs()).sum::<T>() * T::of(0.5)
}

/// `exp(-i H t)` for Hermitian `H` (units with hbar = 1).
pub fn herm_exp<T: Real>(h: &Matrix<T>, t: T) -> Result<Matrix<T>> {
    let eig = herm_eig(h)?;
    Ok(eig.map_spectrum(|l| cis(-l * t)))
}

/// Reorders tensor factors: factor `perm[j]` of the input becomes factor `j` of the output.
/// Equivalent to `P M P*` with `P` the corresponding permutation operator.
pub fn permute_subsystems<T: Real>(
    m: &Matrix<T>,
    shape: &SubsystemShape,
    perm: &[usize],
) -> Result<Matrix<T>> {
    let n = shape.check_against(m, "permute_subsystems")?;
    let map = permutation_map(shape, perm)?;
    let mut out = Matrix::zeros(n, n);
    for (i, &oi) in map.iter().enumerate() {
        for (j, &oj) in map.iter().enumerate() {
            out[(i, j)] = m[(oi, oj)];
        }
    }
    Ok(out)
}

/// For each flat index of the permuted space, the flat index it comes from.
pub(crate) fn permutation_map(shape: &SubsystemShape, perm: &[usize]) -> Result<Vec<usize>> {
    let nf = shape.len();
    let mut seen = vec![false; nf];
    if perm.len() != nf {
        return Err(Error::InvalidPermutation(format!(
            "{perm:?} has {} entries for {nf} factors",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= nf || seen[p] {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection on 0..{nf}")));
        }
        seen[p] = true;
    }
    let old_strides = shape.strides();
    let new_dims: Vec<usize> = perm.iter().map(|&p| shape.dims()[p]).collect();
    let total = shape.total();
    let mut map = Vec::with_capacity(total);
    let mut digits = vec![0usize; nf];
    for _ in 0..total {
        map.push(digits.iter().zip(perm).map(|(&x, &p)| x * old_strides[p]).sum());
        for k in (0..nf).rev() {
            digits[k] += 1;
            if digits[k] < new_dims[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    type M = Matrix<f64>;

    fn pauli(name: char) -> M {
        match name {
            'X' => M::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
            'Z' => M::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap(),
            'Y' => M::from_vec(
                2,
                2,
                vec![C::zero(), C::new(0.0, -1.0), C::new(0.0, 1.0), C::zero()],
            )
            .unwrap(),
            _ => M::identity(2),
        }
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&M::identity(2), &M::identity(2)), M::identity(4));
        let p = M::from_real_diag(&[1.0, 0.0]);
        assert_eq!(kron(&p, &M::identity(2)), M::from_real_diag(&[1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_x_z_table() {
        // X (x) Z expanded by hand
        let expected = M::from_real(
            4,
            4,
            &[
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, -1.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, -1.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert_eq!(kron(&pauli('X'), &pauli('Z')), expected);
    }

    #[test]
    fn kron_index_formula() {
        let mut s = Sampler::new(2);
        let a: M = s.gaussian_matrix(2, 3);
        let b: M = s.gaussian_matrix(3, 2);
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..3 {
                for p in 0..3 {
                    for q in 0..2 {
                        assert_eq!(k[(i * 3 + p, j * 2 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let mut s = Sampler::new(4);
        let rho: M = s.density_matrix(2, 2);
        let sigma: M = s.density_matrix(3, 3).scale_real(2.5);
        let shape = SubsystemShape::new([2, 3]).unwrap();
        let joint = kron(&rho, &sigma);
        let first = partial_trace(&joint, &shape, &[0]).unwrap();
        assert!(first.approx_eq(&rho.scale_real(2.5), 1e-12));
        let second = partial_trace(&joint, &shape, &[1]).unwrap();
        assert!(second.approx_eq(&sigma, 1e-12));
        let all = partial_trace(&joint, &shape, &[0, 1]).unwrap();
        assert!(all.approx_eq(&joint, 0.0));
        let none = partial_trace(&joint, &shape, &[]).unwrap();
        assert!((none[(0, 0)] - joint.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_errors() {
        let shape = SubsystemShape::new([2, 3]).unwrap();
        assert!(partial_trace(&M::identity(5), &shape, &[0]).is_err());
        assert!(partial_trace(&M::identity(6), &shape, &[2]).is_err());
        assert!(partial_trace(&M::identity(6), &shape, &[0, 0]).is_err());
        assert!(SubsystemShape::new([2, 0]).is_err());
    }

    #[test]
    fn vectorize_identity_is_phi_plus() {
        let v = vectorize(&M::identity(2));
        let expected: Vec<C<f64>> = [1.0, 0.0, 0.0, 1.0].iter().map(|&x| C::new(x, 0.0)).collect();
        assert_eq!(v, expected);
        assert!(devectorize(&v, 3, 2).is_err());
    }

    #[test]
    fn hs_inner_basics() {
        assert_eq!(hs_inner(&M::identity(3), &M::identity(3)).unwrap(), C::new(3.0, 0.0));
        assert_eq!(hs_inner(&pauli('X'), &pauli('Z')).unwrap(), C::zero());
        let mut s = Sampler::new(8);
        let a: M = s.gaussian_matrix(3, 2);
        let b: M = s.gaussian_matrix(3, 2);
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
        assert!(hs_inner(&a, &M::identity(2)).is_err());
    }

    #[test]
    fn psd_sqrt_cases() {
        assert!(psd_sqrt(&M::identity(3)).unwrap().approx_eq(&M::identity(3), 1e-14));
        let r = psd_sqrt(&M::from_real_diag(&[4.0, 9.0])).unwrap();
        assert!(r.approx_eq(&M::from_real_diag(&[2.0, 3.0]), 1e-14));
        let clamped = psd_sqrt(&M::from_real_diag(&[1.0, -5e-11])).unwrap();
        assert!(clamped.approx_eq(&M::from_real_diag(&[1.0, 0.0]), 1e-14));
        assert!(matches!(
            psd_sqrt(&M::from_real_diag(&[1.0, -1e-6])),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut s = Sampler::new(21);
        for d in [2, 3, 5] {
            for rank in 1..=d {
                let p: M = s.density_matrix(d, rank).scale_real(3.0);
                let r = psd_sqrt(&p).unwrap();
                assert!(r.matmul(&r).approx_eq(&p, 1e-9));
                assert!(r.matmul(&p).approx_eq(&p.matmul(&r), 1e-9));
            }
        }
    }

    #[test]
    fn trace_norm_cases() {
        assert!((trace_norm(&M::from_real_diag(&[1.0, -2.0])) - 3.0).abs() < 1e-14);
        let u: M = Sampler::new(3).haar_unitary(4);
        assert!((trace_norm(&u) - 4.0).abs() < 1e-12);
        let diff = &M::from_real_diag(&[1.0, 0.0]) - &M::from_real_diag(&[0.0, 1.0]);
        assert!((trace_norm(&diff) - 2.0).abs() < 1e-14);
        let rect = M::from_real(1, 2, &[3.0, 4.0]).unwrap();
        assert!((trace_norm(&rect) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn herm_exp_cases() {
        let mut s = Sampler::new(6);
        let h: M = s.gaussian_matrix::<f64>(3, 3).hermitian_part();
        assert!(herm_exp(&h, 0.0).unwrap().approx_eq(&M::identity(3), 1e-14));
        let fwd = herm_exp(&h, 0.7).unwrap();
        let back = herm_exp(&h, -0.7).unwrap();
        assert!(fwd.matmul(&back).approx_eq(&M::identity(3), 1e-10));
        let z = pauli('Z');
        let half_pi = std::f64::consts::FRAC_PI_2;
        let expected = M::from_diag(&[C::new(0.0, -1.0), C::new(0.0, 1.0)]);
        assert!(herm_exp(&z, half_pi).unwrap().approx_eq(&expected, 1e-14));
        assert!(herm_exp(&s.gaussian_matrix::<f64>(2, 2), 1.0).is_err());
    }

    #[test]
    fn permute_swap_and_identity() {
        let mut s = Sampler::new(12);
        let rho: M = s.density_matrix(2, 2);
        let sigma: M = s.density_matrix(3, 2);
        let shape = SubsystemShape::new([2, 3]).unwrap();
        let joint = kron(&rho, &sigma);
        assert_eq!(permute_subsystems(&joint, &shape, &[0, 1]).unwrap(), joint);
        let swapped = permute_subsystems(&joint, &shape, &[1, 0]).unwrap();
        assert!(swapped.approx_eq(&kron(&sigma, &rho), 1e-15));
        assert!(permute_subsystems(&joint, &shape, &[0, 0]).is_err());
        assert!(permute_subsystems(&joint, &shape, &[0]).is_err());
    }

    #[test]
    fn permute_then_inverse() {
        let mut s = Sampler::new(13);
        let m: M = s.gaussian_matrix(12, 12);
        let shape = SubsystemShape::new([2, 3, 2]).unwrap();
        let perm = [2, 0, 1];
        let inverse = [1, 2, 0];
        let p = permute_subsystems(&m, &shape, &perm).unwrap();
        let pshape = SubsystemShape::new([2, 2, 3]).unwrap();
        assert_eq!(permute_subsystems(&p, &pshape, &inverse).unwrap(), m);
    }
}
