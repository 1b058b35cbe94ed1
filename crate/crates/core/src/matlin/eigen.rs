//! Hermitian eigensolver: unitary Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit QL with Wilkinson-style shifts.

use num_traits::{One, Zero};

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::tol;

/// Spectral decomposition `H = Q diag(eigenvalues) Q*`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    /// Orthonormal eigenvectors as columns, in the same order as `eigenvalues`.
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.eigenvectors.col(k)
    }

    /// `Q diag(f(lambda)) Q*`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> C<T>) -> Matrix<T> {
        let n = self.dim();
        let q = &self.eigenvectors;
        let vals: Vec<C<T>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n, n);
        for (k, &w) in vals.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for i in 0..n {
                let a = q[(i, k)] * w;
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * q[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `Q diag(lambda) Q*`.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.map_spectrum(|l| C::new(l, T::zero()))
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// The input is accepted if `max |H - H*| <= 1e-8` and symmetrized before the
/// decomposition. Eigenvalues come out ascending; every eigenvector is rotated so
/// that its first non-negligible component is real and positive.
pub fn herm_eig<T: Real>(h: &Matrix<T>) -> Result<HermitianEigen<T>> {
    let n = h.ensure_square()?;
    let residual = h.hermitian_residual();
    if residual > T::tol(tol::HERMITIAN) {
        return Err(Error::NotHermitian {
            residual: residual.as_f64(),
        });
    }
    if n == 0 {
        return Ok(HermitianEigen {
            eigenvalues: Vec::new(),
            eigenvectors: Matrix::zeros(0, 0),
        });
    }
    let a = h.hermitian_part();
    let (q, diag, offdiag) = tridiagonalize(a);
    let (values, z) = tql2(diag, offdiag)?;

    // eigenvectors = Q Z, with Z real
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));

    let mut vectors = Matrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            let mut acc = C::zero();
            for l in 0..n {
                acc += q[(i, l)] * z[l * n + k];
            }
            vectors[(i, col)] = acc;
        }
    }
    fix_phases(&mut vectors);
    Ok(HermitianEigen {
        eigenvalues: order.iter().map(|&k| values[k]).collect(),
        eigenvectors: vectors,
    })
}

fn fix_phases<T: Real>(vectors: &mut Matrix<T>) {
    let n = vectors.rows();
    let threshold = T::of(1e-10);
    for k in 0..vectors.cols() {
        let Some(lead) = (0..n).map(|i| vectors[(i, k)]).find(|z| z.norm() > threshold) else {
            continue;
        };
        let phase = lead.conj() / lead.norm();
        for i in 0..n {
            vectors[(i, k)] *= phase;
        }
        // the leading component is now real up to roundoff; make it exactly so
        if let Some(i) = (0..n).find(|&i| vectors[(i, k)].norm() > threshold) {
            vectors[(i, k)] = C::new(vectors[(i, k)].norm(), T::zero());
        }
    }
}

/// Reduces Hermitian `a` to `Q T Q*` with `T` real symmetric tridiagonal.
/// Returns `(Q, diagonal, off-diagonal)`; the off-diagonal has length `n` with a trailing zero.
fn tridiagonalize<T: Real>(mut a: Matrix<T>) -> (Matrix<T>, Vec<T>, Vec<T>) {
    let n = a.rows();
    let mut q = Matrix::<T>::identity(n);
    let two = T::of(2.0);

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<C<T>> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let tail: T = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == T::zero() {
            continue;
        }
        let xnorm = (tail + x[0].norm_sqr()).sqrt();
        let phase = if x[0].norm() > T::zero() {
            x[0] / x[0].norm()
        } else {
            C::one()
        };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for z in &mut v {
            *z /= vnorm;
        }

        // p = A_sub v, K = v* p, w = p - K v; A_sub <- A_sub - 2 v w* - 2 w v*
        let mut p = vec![C::zero(); m];
        for (i, pi) in p.iter_mut().enumerate() {
            let mut acc = C::zero();
            for (j, vj) in v.iter().enumerate() {
                acc += a[(k + 1 + i, k + 1 + j)] * vj;
            }
            *pi = acc;
        }
        let kappa: C<T> = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<C<T>> = p.iter().zip(&v).map(|(&pi, &vi)| pi - vi * kappa.re).collect();
        for i in 0..m {
            for j in 0..m {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= upd * two;
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = C::zero();
            a[(k, i)] = C::zero();
        }

        // Q <- Q H on columns k+1..n
        for r in 0..n {
            let mut dot = C::zero();
            for (j, vj) in v.iter().enumerate() {
                dot += q[(r, k + 1 + j)] * vj;
            }
            let s = dot * two;
            for (j, vj) in v.iter().enumerate() {
                q[(r, k + 1 + j)] -= s * vj.conj();
            }
        }
    }

    // Make the off-diagonal real and non-negative with a diagonal unitary D:
    // T = D T' D*, so the eigenvectors become Q D Z.
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut offdiag = vec![T::zero(); n];
    let mut delta = C::<T>::one();
    let mut deltas = vec![C::<T>::one(); n];
    for i in 0..n.saturating_sub(1) {
        let e = a[(i + 1, i)];
        let mag = e.norm();
        offdiag[i] = mag;
        if mag > T::zero() {
            delta *= e / mag;
        }
        deltas[i + 1] = delta;
    }
    for r in 0..n {
        for (c, d) in deltas.iter().enumerate() {
            q[(r, c)] *= d;
        }
    }
    (q, diag, offdiag)
}

/// Implicit QL on a real symmetric tridiagonal matrix; `e[i]` couples `i` and `i+1`.
/// Returns eigenvalues (unsorted) and the row-major orthogonal matrix of eigenvectors.
fn tql2<T: Real>(mut d: Vec<T>, mut e: Vec<T>) -> Result<(Vec<T>, Vec<T>)> {
    let n = d.len();
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    let eps = T::epsilon();
    let two = T::of(2.0);
    let mut f = T::zero();
    let mut tst1 = T::zero();
    let max_iter = 60 * n.max(1);

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::NoConvergence { dim: n });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zk1 = z[k * n + i + 1];
                        let zk = z[k * n + i];
                        z[k * n + i + 1] = s * zk + c * zk1;
                        z[k * n + i] = c * zk - s * zk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    type M = Matrix<f64>;

    fn check(h: &M) {
        let eig = herm_eig(h).unwrap();
        assert!(eig.reconstruct().approx_eq(h, 1e-10), "reconstruction");
        let q = &eig.eigenvectors;
        assert!(q.adjoint_mul(q).approx_eq(&M::identity(h.rows()), 1e-10), "orthonormality");
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]), "ascending");
    }

    #[test]
    fn diagonal_input() {
        let eig = herm_eig(&M::from_real_diag(&[2.0, 1.0])).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0]);
    }

    #[test]
    fn pauli_x_closed_form() {
        let x = M::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let eig = herm_eig(&x).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let minus = M::column(&[C::new(s, 0.0), C::new(-s, 0.0)]);
        let plus = M::column(&[C::new(s, 0.0), C::new(s, 0.0)]);
        assert!(M::column(&eig.vector(0)).approx_eq(&minus, 1e-14));
        assert!(M::column(&eig.vector(1)).approx_eq(&plus, 1e-14));
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = Sampler::new(11);
        for n in [1, 2, 3, 5, 8, 17, 40] {
            let g: M = rng.gaussian_matrix(n, n);
            check(&g.hermitian_part());
        }
    }

    #[test]
    fn degenerate_spectra() {
        let mut rng = Sampler::new(5);
        let u: M = rng.haar_unitary(6);
        let d = M::from_real_diag(&[1.0, 1.0, 1.0, 0.0, 0.0, 2.0]);
        check(&u.sandwich(&d));
        check(&M::identity(7));
        check(&M::zeros(4, 4));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = M::identity(2);
        a[(0, 1)] = C::new(1e-6, 0.0);
        assert!(matches!(herm_eig(&a), Err(Error::NotHermitian { .. })));
        assert!(matches!(herm_eig(&M::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn eigenvector_phase_is_fixed() {
        let mut rng = Sampler::new(9);
        let g: M = rng.gaussian_matrix(5, 5);
        let eig = herm_eig(&g.hermitian_part()).unwrap();
        for k in 0..5 {
            let v = eig.vector(k);
            let lead = v.iter().find(|z| z.norm() > 1e-10).unwrap();
            assert!(lead.im == 0.0 && lead.re > 0.0);
        }
    }
}
