//! Seeded sampling of Haar unitaries, isometries, states and Gaussian matrices.
//!
//! Every sampler is a ChaCha8 stream seeded from a `u64`, so draws are
//! bit-identical across runs and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matlin::Matrix;
use crate::scalar::{Real, C};

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `index` derived from `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { rng }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_normal<T: Real>(&mut self) -> C<T> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C::new(T::of(self.normal() * s), T::of(self.normal() * s))
    }

    /// Matrix of i.i.d. standard complex Gaussian entries.
    pub fn gaussian_matrix<T: Real>(&mut self, rows: usize, cols: usize) -> Matrix<T> {
        Matrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn gaussian_vector<T: Real>(&mut self, n: usize) -> Vec<C<T>> {
        (0..n).map(|_| self.complex_normal()).collect()
    }

    /// Haar-random isometry `rows x cols` (`rows >= cols`): Gram-Schmidt on a Gaussian matrix.
    pub fn haar_isometry<T: Real>(&mut self, rows: usize, cols: usize) -> Matrix<T> {
        assert!(rows >= cols, "isometry needs rows >= cols");
        let g = self.gaussian_matrix(rows, cols);
        orthonormalize_columns(&g)
    }

    pub fn haar_unitary<T: Real>(&mut self, d: usize) -> Matrix<T> {
        self.haar_isometry(d, d)
    }

    /// Haar-random unit vector.
    pub fn pure_state<T: Real>(&mut self, d: usize) -> Vec<C<T>> {
        let v = self.gaussian_vector::<T>(d);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    /// Random density matrix of the given rank: `G G* / tr(G G*)` with Gaussian `G` (d x rank).
    pub fn density_matrix<T: Real>(&mut self, d: usize, rank: usize) -> Matrix<T> {
        let g = self.gaussian_matrix::<T>(d, rank.max(1));
        let p = g.matmul(&g.adjoint());
        let tr = p.trace().re;
        p.scale_real(T::one() / tr).hermitian_part()
    }
}

/// Modified Gram-Schmidt, applied twice for numerical orthogonality.
pub(crate) fn orthonormalize_columns<T: Real>(g: &Matrix<T>) -> Matrix<T> {
    let (rows, cols) = g.shape();
    let mut cols_v: Vec<Vec<C<T>>> = (0..cols).map(|j| g.col(j)).collect();
    for _ in 0..2 {
        for j in 0..cols {
            for k in 0..j {
                let (done, rest) = cols_v.split_at_mut(j);
                let q = &done[k];
                let v = &mut rest[0];
                let proj: C<T> = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
            let norm = cols_v[j].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            for z in &mut cols_v[j] {
                *z /= norm;
            }
        }
    }
    Matrix::from_fn(rows, cols, |i, j| cols_v[j][i])
}
